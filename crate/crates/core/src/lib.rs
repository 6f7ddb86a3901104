//! Lossy compression of Bernoulli(1/2) sources with low-density generator
//! matrix (LDGM) codes.
//!
//! The crate provides the algorithmic pieces of a BPGD (belief-propagation
//! guided decimation) encoder stack:
//!
//! - [`graph`] — bipartite factor graphs for semi-regular and irregular LDGM
//!   ensembles, with reproducible seeded construction and a line-oriented
//!   text serialization;
//! - [`bp`] — flooding-schedule belief propagation sweeps with soft
//!   reinforcement and clipped message biases;
//! - [`schedule`] — constant / linear / exponential softness schedules that
//!   map a round index to the `(beta, mu)` pair through an auxiliary
//!   variable `xi`;
//! - [`decimator`] — the soft and soft-hard BPGD encoders: scheduled sweeps,
//!   most-biased-bit selection, bit fixing with graph reduction, and final
//!   hardening;
//! - [`codec`] — GF(2) reconstruction, Hamming distortion, the binary
//!   rate-distortion reference, and an exhaustive optimum oracle for tiny
//!   codes;
//! - [`stability`] — row-sum contraction bounds for the BP update map and
//!   finite-difference Jacobian probes on small instances.
//!
//! The crate is `no_std`-compatible (`alloc` is required): disable the
//! default `std` feature and enable `libm` to supply the float math.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bp;
pub mod codec;
pub mod decimator;
pub mod graph;
mod math;
pub mod schedule;
pub mod seeds;
pub mod stability;

pub use bp::{BpParams, MessageState, SweepStats};
pub use codec::BitVector;
pub use decimator::{EncodeResult, EncoderConfig, EncoderMode};
pub use graph::{DegreeDistribution, DegreeProfile, FactorGraph};
pub use schedule::{Schedule, ScheduleKind};
pub use stability::StabilityReport;

/// Default clip margin for message biases.
pub const DEFAULT_EPSILON: f64 = 1e-6;
