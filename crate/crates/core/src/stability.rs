//! Contraction diagnostics for the BP sweep map.
//!
//! On the clipped bias domain `|B| <= 1 - eps`, one-hop sensitivities of the
//! sweep are bounded entrywise, giving the conservative row-sum bound
//!
//! ```text
//! L(beta, eps, d_v, d_c)
//!   = d_v (d_c - 1) beta (1 - eps)^(d_c - 2) / (1 - beta^2 (1 - eps)^(2 (d_c - 1)))
//! ```
//!
//! on the infinity norm of the sweep Jacobian, where `d_v` is the maximum
//! code-bit degree and `d_c` the maximum generator degree. `L < 1` certifies
//! the sweep is a contraction there: a unique fixed point, geometric
//! convergence, and `spectral radius <= infinity norm < 1`.
//!
//! [`empirical_jacobian`] cross-checks the bound on small instances by
//! central finite differences of one sweep, treating the edge biases as the
//! state; the reinforcement input `(1/mu) R_i` is held at the probed state's
//! stored node values, which is the map the row-sum bound covers.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bp::{self, BpParams, MessageState};
use crate::graph::FactorGraph;
use crate::math;

/// Errors from stability computations.
#[derive(Debug, Clone, PartialEq)]
pub enum StabilityError {
    InvalidParam(&'static str),
    /// The row-sum denominator is not positive; the bound says nothing.
    BoundVacuous { denominator: f64 },
    /// `one_hop_gain` needs `|u| < 1`.
    GainDomain { u: f64 },
    /// Jacobian probes are limited to small instances.
    TooManyEdges { limit: usize, got: usize },
    /// The finite-difference step vanished at this coordinate.
    StepTooSmall { delta: f64 },
}

impl fmt::Display for StabilityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilityError::InvalidParam(what) => write!(f, "invalid parameter: {what}"),
            StabilityError::BoundVacuous { denominator } => {
                write!(f, "bound vacuous: denominator {denominator} <= 0")
            }
            StabilityError::GainDomain { u } => {
                write!(f, "one-hop gain needs |u| < 1 and a nonzero bias, got u = {u}")
            }
            StabilityError::TooManyEdges { limit, got } => {
                write!(f, "jacobian probe limited to {limit} live edges, got {got}")
            }
            StabilityError::StepTooSmall { delta } => {
                write!(f, "finite-difference step {delta} vanishes at this coordinate")
            }
        }
    }
}

impl core::error::Error for StabilityError {}

/// Row-sum bound `L(beta, eps, d_v, d_c)` on the sweep Jacobian's infinity
/// norm. Degrees may be fractional so that mean-degree variants can be
/// evaluated alongside the conservative max-degree ones.
pub fn row_sum_bound(beta: f64, epsilon: f64, d_v: f64, d_c: f64) -> Result<f64, StabilityError> {
    if !(beta > 0.0) {
        return Err(StabilityError::InvalidParam("beta must be positive"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(StabilityError::InvalidParam("epsilon must lie in (0, 1)"));
    }
    if !(d_v >= 1.0) {
        return Err(StabilityError::InvalidParam("d_v must be >= 1"));
    }
    if !(d_c >= 2.0) {
        return Err(StabilityError::InvalidParam("d_c must be >= 2"));
    }
    let shrink = 1.0 - epsilon;
    let denominator = 1.0 - beta * beta * math::pow(shrink, 2.0 * (d_c - 1.0));
    if denominator <= 0.0 {
        return Err(StabilityError::BoundVacuous { denominator });
    }
    Ok(d_v * (d_c - 1.0) * beta * math::pow(shrink, d_c - 2.0) / denominator)
}

/// Magnitude of the generator-update sensitivity to one incoming bias:
/// `|dRhat/dB| = 2 |u| / ((1 - u^2) |B|)` for a product value `u` and the
/// neighbor bias `B` it contains.
pub fn one_hop_gain(u: f64, b_in: f64) -> Result<f64, StabilityError> {
    if !(math::abs(u) < 1.0) || b_in == 0.0 {
        return Err(StabilityError::GainDomain { u });
    }
    Ok(2.0 * math::abs(u) / ((1.0 - u * u) * math::abs(b_in)))
}

/// Code-side attenuation `|dB/dR| = sech^2(R/2) / 2 <= 1/2`.
pub fn code_attenuation(llr: f64) -> f64 {
    let t = math::tanh(llr / 2.0);
    0.5 * (1.0 - t * t)
}

/// Measured derivatives of one sweep around a state.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianEstimate {
    /// Maximum absolute row sum over all outputs (edge and node biases).
    pub inf_norm: f64,
    /// Power-iteration estimate of the spectral radius of the entrywise
    /// absolute edge-to-edge block.
    pub spectral_radius: f64,
    /// Number of input coordinates (live edges).
    pub n_inputs: usize,
    /// Number of output coordinates (live edges plus unfixed code bits).
    pub n_outputs: usize,
}

/// Maximum live edges accepted by [`empirical_jacobian`].
pub const JACOBIAN_EDGE_LIMIT: usize = 200;

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Central-difference Jacobian of one sweep with the edge biases as inputs
/// and the next edge and node biases as outputs.
///
/// Probe points are clamped into the clipped domain; a coordinate whose two
/// probe points collapse reports [`StabilityError::StepTooSmall`].
pub fn empirical_jacobian(
    graph: &FactorGraph,
    state: &MessageState,
    params: &BpParams,
    delta: f64,
) -> Result<JacobianEstimate, StabilityError> {
    if !(delta > 0.0) {
        return Err(StabilityError::InvalidParam("delta must be positive"));
    }
    let live: Vec<usize> = (0..graph.n_edges()).filter(|&e| state.edge_is_live(e)).collect();
    if live.len() > JACOBIAN_EDGE_LIMIT {
        return Err(StabilityError::TooManyEdges {
            limit: JACOBIAN_EDGE_LIMIT,
            got: live.len(),
        });
    }
    let unfixed: Vec<usize> = (0..graph.n_codebits()).filter(|&i| !state.is_fixed(i)).collect();
    let n_in = live.len();
    let n_out = live.len() + unfixed.len();
    if n_in == 0 {
        return Ok(JacobianEstimate {
            inf_norm: 0.0,
            spectral_radius: 0.0,
            n_inputs: 0,
            n_outputs: n_out,
        });
    }

    let bias_cap = 1.0 - params.epsilon;
    let evaluate = |edge: usize, value: f64| -> Vec<f64> {
        let mut probe = state.clone();
        probe.set_edge_bias_for_probe(edge, value);
        bp::generator_update(&mut probe, graph, params);
        bp::code_update(&mut probe, graph, params);
        let mut out = Vec::with_capacity(n_out);
        for &e in &live {
            out.push(probe.edge_biases()[e]);
        }
        for &i in &unfixed {
            out.push(probe.node_bias(i));
        }
        out
    };

    // Column-major probe: jac[row][col].
    let mut jac = vec![vec![0.0f64; n_in]; n_out];
    for (col, &e) in live.iter().enumerate() {
        let b0 = state.edge_biases()[e];
        let hi = (b0 + delta).clamp(-bias_cap, bias_cap);
        let lo = (b0 - delta).clamp(-bias_cap, bias_cap);
        if hi == lo {
            return Err(StabilityError::StepTooSmall { delta });
        }
        let f_hi = evaluate(e, hi);
        let f_lo = evaluate(e, lo);
        let inv_step = 1.0 / (hi - lo);
        for row in 0..n_out {
            jac[row][col] = (f_hi[row] - f_lo[row]) * inv_step;
        }
    }

    let inf_norm = jac
        .iter()
        .map(|row| row.iter().map(|&x| math::abs(x)).sum::<f64>())
        .fold(0.0f64, f64::max);

    // Power iteration on the entrywise absolute edge block; sign stripping
    // keeps the iteration from stalling on oscillating modes.
    let mut v = vec![1.0f64; n_in];
    let mut lambda = 0.0f64;
    for _ in 0..50 {
        let mut w = vec![0.0f64; n_in];
        for (row, wr) in w.iter_mut().enumerate() {
            let mut acc = 0.0;
            for col in 0..n_in {
                acc += math::abs(jac[row][col]) * v[col];
            }
            *wr = acc;
        }
        let next = w.iter().fold(0.0f64, |m, &x| m.max(x));
        if next == 0.0 {
            lambda = 0.0;
            break;
        }
        for x in w.iter_mut() {
            *x /= next;
        }
        v = w;
        if math::abs(next - lambda) <= 1e-8 * next.max(1.0) {
            lambda = next;
            break;
        }
        lambda = next;
    }

    Ok(JacobianEstimate {
        inf_norm,
        spectral_radius: lambda,
        n_inputs: n_in,
        n_outputs: n_out,
    })
}

/// Supremum of the `beta` range where the row-sum bound certifies
/// contraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SafeBetaRange {
    /// `L < 1` on all of (0, 1).
    All,
    /// `L < 1` exactly for `beta` below this value.
    UpTo(f64),
}

/// Solves `L(beta, eps, d_v, d_c) = 1` for `beta` by bisection on (0, 1).
/// `L` is continuous and strictly increasing in `beta` there, with
/// `L(0+) = 0`, so the contractive range is an interval from 0.
pub fn safe_beta_range(
    epsilon: f64,
    d_v: f64,
    d_c: f64,
) -> Result<SafeBetaRange, StabilityError> {
    // Validate through a probe evaluation.
    row_sum_bound(0.5, epsilon, d_v, d_c)?;
    let at = |beta: f64| row_sum_bound(beta, epsilon, d_v, d_c).expect("domain checked");
    if at(1.0 - 1e-15) < 1.0 {
        return Ok(SafeBetaRange::All);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if at(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(SafeBetaRange::UpTo(0.5 * (lo + hi)))
}

/// Row-sum bound report for one `(beta, eps, degree profile)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub beta: f64,
    pub epsilon: f64,
    /// Code-bit degree fed to the bound.
    pub d_v: f64,
    /// Generator degree fed to the bound.
    pub d_c: f64,
    /// `L(beta, eps, d_v, d_c)`.
    pub bound: f64,
    /// Measured infinity norm, when a probe ran.
    pub empirical_inf_norm: Option<f64>,
    /// Measured spectral-radius estimate, when a probe ran.
    pub spectral_radius: Option<f64>,
    /// `bound < 1`.
    pub contractive: bool,
    /// `1 - bound`.
    pub margin: f64,
}

impl StabilityReport {
    pub fn new(beta: f64, epsilon: f64, d_v: f64, d_c: f64) -> Result<Self, StabilityError> {
        let bound = row_sum_bound(beta, epsilon, d_v, d_c)?;
        Ok(StabilityReport {
            beta,
            epsilon,
            d_v,
            d_c,
            bound,
            empirical_inf_norm: None,
            spectral_radius: None,
            contractive: bound < 1.0,
            margin: 1.0 - bound,
        })
    }

    pub fn with_measurement(mut self, estimate: &JacobianEstimate) -> Self {
        self.empirical_inf_norm = Some(estimate.inf_norm);
        self.spectral_radius = Some(estimate.spectral_radius);
        self
    }
}

impl MessageState {
    /// Probe hook: overwrite one edge bias (and its LLR, consistently).
    pub(crate) fn set_edge_bias_for_probe(&mut self, edge: usize, bias: f64) {
        self.edge_bias[edge] = bias;
        self.code_to_gen[edge] = -2.0 * math::atanh(bias);
    }
}
