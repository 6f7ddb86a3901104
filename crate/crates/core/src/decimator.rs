//! Soft and soft-hard BPGD encoders.
//!
//! Soft mode runs a fixed budget of sweeps with the softness parameters
//! following the schedule per iteration, then hardens every bit from its
//! bias. Soft-hard mode interleaves sweeps with decimation: each round runs
//! `inner_iters` sweeps at the round's `(beta, mu)`, then fixes the
//! `bits_per_round` most biased unfixed code bits (ties broken uniformly at
//! random), absorbing each fixed value into the residual source parities and
//! deactivating the incident edges. Survivors at the round cap are hardened
//! like soft mode.
//!
//! Bias-to-bit convention: `w_i = 0` iff `B_i > 0` (the bias estimates the
//! spin `(-1)^{w_i}`); an exactly zero bias falls to a fair coin from the
//! run's seeded stream.

use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::bp::{self, BpError, BpParams, MessageState, SweepStats};
use crate::codec::{self, BitVector, CodecError};
use crate::graph::FactorGraph;
use crate::math;
use crate::schedule::{params_from_xi, Schedule, ScheduleError, ScheduleKind};
use crate::seeds::derive_seed;
use crate::DEFAULT_EPSILON;

/// Errors from encoder configuration or execution.
#[derive(Debug, Clone, PartialEq)]
pub enum EncoderError {
    Config(&'static str),
    Schedule(ScheduleError),
    Bp(BpError),
    Codec(CodecError),
    AlreadyFixed { codebit: usize },
    NotEnoughUnfixed { want: usize, have: usize },
}

impl fmt::Display for EncoderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncoderError::Config(what) => write!(f, "invalid encoder config: {what}"),
            EncoderError::Schedule(e) => write!(f, "schedule error: {e}"),
            EncoderError::Bp(e) => write!(f, "message error: {e}"),
            EncoderError::Codec(e) => write!(f, "codec error: {e}"),
            EncoderError::AlreadyFixed { codebit } => {
                write!(f, "code bit {codebit} is already fixed")
            }
            EncoderError::NotEnoughUnfixed { want, have } => {
                write!(f, "asked for {want} targets but only {have} bits are unfixed")
            }
        }
    }
}

impl core::error::Error for EncoderError {}

impl From<ScheduleError> for EncoderError {
    fn from(e: ScheduleError) -> Self {
        EncoderError::Schedule(e)
    }
}

impl From<BpError> for EncoderError {
    fn from(e: BpError) -> Self {
        EncoderError::Bp(e)
    }
}

impl From<CodecError> for EncoderError {
    fn from(e: CodecError) -> Self {
        EncoderError::Codec(e)
    }
}

/// Which encoder runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncoderMode {
    /// Scheduled sweeps only; every bit decided by final hardening.
    Soft,
    /// Scheduled sweeps plus per-round hard decimation.
    SoftHard,
}

impl fmt::Display for EncoderMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncoderMode::Soft => "soft",
            EncoderMode::SoftHard => "soft_hard",
        })
    }
}

/// Full configuration of one encode run.
#[derive(Debug, Clone, PartialEq)]
pub struct EncoderConfig {
    pub mode: EncoderMode,
    /// Schedule over sweeps (soft: `rounds == total_iters`) or decimation
    /// rounds (soft-hard: `rounds == max_rounds`).
    pub schedule: Schedule,
    /// Sweeps per decimation round (soft-hard only).
    pub inner_iters: usize,
    /// Total sweep budget (soft only).
    pub total_iters: usize,
    /// Decimation round cap (soft-hard only).
    pub max_rounds: usize,
    /// Bits fixed per round (soft-hard only).
    pub bits_per_round: usize,
    /// Bias clip margin.
    pub epsilon: f64,
    /// Redraw the random message initialization at the start of every
    /// decimation round instead of only once.
    pub reinit_each_round: bool,
    /// Collect per-round and per-sweep trace records.
    pub record_trace: bool,
    pub seed: u64,
}

impl EncoderConfig {
    /// Soft encoder over `total_iters` sweeps.
    pub fn soft(
        kind: ScheduleKind,
        xi_start: f64,
        xi_end: f64,
        total_iters: usize,
        seed: u64,
    ) -> Result<Self, EncoderError> {
        let cfg = EncoderConfig {
            mode: EncoderMode::Soft,
            schedule: Schedule::new(kind, xi_start, xi_end, total_iters)?,
            inner_iters: 0,
            total_iters,
            max_rounds: 0,
            bits_per_round: 0,
            epsilon: DEFAULT_EPSILON,
            reinit_each_round: false,
            record_trace: false,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Soft-hard encoder with explicit round structure.
    pub fn soft_hard(
        kind: ScheduleKind,
        xi_start: f64,
        xi_end: f64,
        max_rounds: usize,
        inner_iters: usize,
        bits_per_round: usize,
        seed: u64,
    ) -> Result<Self, EncoderError> {
        let cfg = EncoderConfig {
            mode: EncoderMode::SoftHard,
            schedule: Schedule::new(kind, xi_start, xi_end, max_rounds)?,
            inner_iters,
            total_iters: 0,
            max_rounds,
            bits_per_round,
            epsilon: DEFAULT_EPSILON,
            reinit_each_round: false,
            record_trace: false,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Soft-hard encoder with the round structure derived from a total
    /// sweep budget and the code-bit count: `max_rounds = min(budget, M)`,
    /// `bits_per_round = ceil(M / max_rounds)`, and
    /// `inner_iters = budget / max_rounds` sweeps per round.
    pub fn budgeted(
        kind: ScheduleKind,
        xi_start: f64,
        xi_end: f64,
        budget: usize,
        n_codebits: usize,
        seed: u64,
    ) -> Result<Self, EncoderError> {
        if budget == 0 || n_codebits == 0 {
            return Err(EncoderError::Config("budget and code-bit count must be >= 1"));
        }
        let max_rounds = budget.min(n_codebits);
        let bits_per_round = n_codebits.div_ceil(max_rounds);
        let inner_iters = (budget / max_rounds).max(1);
        EncoderConfig::soft_hard(
            kind,
            xi_start,
            xi_end,
            max_rounds,
            inner_iters,
            bits_per_round,
            seed,
        )
    }

    pub fn validate(&self) -> Result<(), EncoderError> {
        if !(self.epsilon > 0.0 && self.epsilon <= 0.1) {
            return Err(EncoderError::Config("epsilon must lie in (0, 0.1]"));
        }
        match self.mode {
            EncoderMode::Soft => {
                if self.total_iters == 0 {
                    return Err(EncoderError::Config("total_iters must be >= 1"));
                }
                if self.schedule.rounds() != self.total_iters {
                    return Err(EncoderError::Config(
                        "soft mode needs schedule.rounds == total_iters",
                    ));
                }
            }
            EncoderMode::SoftHard => {
                if self.max_rounds == 0 || self.inner_iters == 0 || self.bits_per_round == 0 {
                    return Err(EncoderError::Config(
                        "max_rounds, inner_iters, and bits_per_round must be >= 1",
                    ));
                }
                if self.schedule.rounds() != self.max_rounds {
                    return Err(EncoderError::Config(
                        "soft-hard mode needs schedule.rounds == max_rounds",
                    ));
                }
            }
        }
        Ok(())
    }
}

/// One decimation round (or, in soft mode, one sweep) of the trace.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrace {
    pub round: usize,
    pub xi: f64,
    pub beta: f64,
    pub mu: f64,
    /// `(code bit, |bias| when chosen)` for each bit fixed this round.
    pub fixed: Vec<(usize, f64)>,
}

/// Outcome of one encode run.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodeResult {
    /// Codeword of length `M`.
    pub codeword: BitVector,
    /// `G w` over GF(2), recomputed on the original graph.
    pub reconstruction: BitVector,
    /// Relative Hamming distortion against the original source.
    pub distortion: f64,
    /// Rounds executed (sweeps, in soft mode).
    pub rounds_used: usize,
    /// Bits decided by final hardening rather than decimation.
    pub hardened_tail: usize,
    /// Per-round records; empty unless `record_trace` is set.
    pub trace: Vec<RoundTrace>,
    /// Per-sweep bias statistics; empty unless `record_trace` is set.
    pub sweep_trace: Vec<SweepStats>,
}

const INIT_STREAM: u64 = 0x1;
const RUN_STREAM: u64 = 0x2;

/// Hardens a bias: `w = 0` iff `B > 0`, fair coin at exactly zero.
fn harden<R: Rng + ?Sized>(bias: f64, rng: &mut R) -> bool {
    if bias > 0.0 {
        false
    } else if bias < 0.0 {
        true
    } else {
        rng.gen_bool(0.5)
    }
}

/// Soft BPGD: scheduled sweeps with parameters evolving per iteration, then
/// a full hardening pass.
pub fn encode_soft(
    graph: &FactorGraph,
    source: &BitVector,
    cfg: &EncoderConfig,
) -> Result<EncodeResult, EncoderError> {
    cfg.validate()?;
    if cfg.mode != EncoderMode::Soft {
        return Err(EncoderError::Config("encode_soft needs mode == Soft"));
    }
    let mut state = bp::init_messages(graph, source, derive_seed(cfg.seed, &[INIT_STREAM]))?;
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(cfg.seed, &[RUN_STREAM]));

    let mut trace = Vec::new();
    let mut sweep_trace = Vec::new();
    for t in 0..cfg.total_iters {
        let xi = cfg.schedule.xi_at(t)?;
        let (beta, mu) = params_from_xi(xi)?;
        let params = BpParams::new(beta, mu, cfg.epsilon).map_err(EncoderError::Bp)?;
        let stats = bp::sweep(&mut state, graph, &params);
        if cfg.record_trace {
            sweep_trace.push(stats);
            trace.push(RoundTrace {
                round: t,
                xi,
                beta,
                mu,
                fixed: Vec::new(),
            });
        }
    }

    let m = graph.n_codebits();
    let mut codeword = BitVector::zeros(m);
    for i in 0..m {
        codeword.set(i, harden(state.node_bias(i), &mut rng));
    }
    finalize(graph, source, codeword, cfg.total_iters, m, trace, sweep_trace)
}

/// Soft-hard BPGD: per round, `inner_iters` sweeps at the round's
/// parameters, then `bits_per_round` decimation fixes; stops when all bits
/// are fixed or at `max_rounds`, hardening any survivors.
pub fn encode_soft_hard(
    graph: &FactorGraph,
    source: &BitVector,
    cfg: &EncoderConfig,
) -> Result<EncodeResult, EncoderError> {
    cfg.validate()?;
    if cfg.mode != EncoderMode::SoftHard {
        return Err(EncoderError::Config("encode_soft_hard needs mode == SoftHard"));
    }
    let mut state = bp::init_messages(graph, source, derive_seed(cfg.seed, &[INIT_STREAM]))?;
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(cfg.seed, &[RUN_STREAM]));

    let mut trace = Vec::new();
    let mut sweep_trace = Vec::new();
    let mut rounds_used = 0;
    for r in 0..cfg.max_rounds {
        if state.unfixed_count() == 0 {
            break;
        }
        let xi = cfg.schedule.xi_at(r)?;
        let (beta, mu) = params_from_xi(xi)?;
        let params = BpParams::new(beta, mu, cfg.epsilon).map_err(EncoderError::Bp)?;
        if cfg.reinit_each_round && r > 0 {
            bp::randomize_messages(&mut state, &mut rng);
        }
        for _ in 0..cfg.inner_iters {
            let stats = bp::sweep(&mut state, graph, &params);
            if cfg.record_trace {
                sweep_trace.push(stats);
            }
        }

        let k = cfg.bits_per_round.min(state.unfixed_count());
        let targets = select_targets_with(&state, k, &mut rng)?;
        let mut fixed = Vec::with_capacity(k);
        for &i in &targets {
            let bias = state.node_bias(i);
            let value = harden(bias, &mut rng);
            fix_bit(&mut state, graph, i, value)?;
            fixed.push((i, math::abs(bias)));
        }
        rounds_used = r + 1;
        if cfg.record_trace {
            trace.push(RoundTrace {
                round: r,
                xi,
                beta,
                mu,
                fixed,
            });
        }
    }

    let m = graph.n_codebits();
    let hardened_tail = state.unfixed_count();
    let mut codeword = BitVector::zeros(m);
    for i in 0..m {
        let bit = match state.fixed_value(i) {
            Some(v) => v,
            None => harden(state.node_bias(i), &mut rng),
        };
        codeword.set(i, bit);
    }
    finalize(graph, source, codeword, rounds_used, hardened_tail, trace, sweep_trace)
}

/// Dispatches on `cfg.mode`.
pub fn encode(
    graph: &FactorGraph,
    source: &BitVector,
    cfg: &EncoderConfig,
) -> Result<EncodeResult, EncoderError> {
    match cfg.mode {
        EncoderMode::Soft => encode_soft(graph, source, cfg),
        EncoderMode::SoftHard => encode_soft_hard(graph, source, cfg),
    }
}

fn finalize(
    graph: &FactorGraph,
    source: &BitVector,
    codeword: BitVector,
    rounds_used: usize,
    hardened_tail: usize,
    trace: Vec<RoundTrace>,
    sweep_trace: Vec<SweepStats>,
) -> Result<EncodeResult, EncoderError> {
    let reconstruction = codec::reconstruct(graph, &codeword)?;
    let distortion = codec::distortion(source, &reconstruction)?;
    Ok(EncodeResult {
        codeword,
        reconstruction,
        distortion,
        rounds_used,
        hardened_tail,
        trace,
        sweep_trace,
    })
}

/// The `k` unfixed code bits with the largest `|B_i|`; exact ties beyond the
/// cutoff are broken uniformly at random. Deterministic given the seed.
pub fn select_targets(
    state: &MessageState,
    k: usize,
    seed: u64,
) -> Result<Vec<usize>, EncoderError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    select_targets_with(state, k, &mut rng)
}

/// [`select_targets`] drawing tie breaks from a caller-owned stream.
pub fn select_targets_with<R: Rng + ?Sized>(
    state: &MessageState,
    k: usize,
    rng: &mut R,
) -> Result<Vec<usize>, EncoderError> {
    let mut candidates: Vec<(usize, f64)> = (0..state.node_biases().len())
        .filter(|&i| !state.is_fixed(i))
        .map(|i| (i, math::abs(state.node_bias(i))))
        .collect();
    if candidates.len() < k {
        return Err(EncoderError::NotEnoughUnfixed {
            want: k,
            have: candidates.len(),
        });
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    // Descending |bias|, index as canonical secondary key.
    candidates.sort_unstable_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let threshold = candidates[k - 1].1;

    let mut picked: Vec<usize> = candidates
        .iter()
        .take_while(|&&(_, b)| b > threshold)
        .map(|&(i, _)| i)
        .collect();
    let mut tied: Vec<usize> = candidates
        .iter()
        .filter(|&&(_, b)| b == threshold)
        .map(|&(i, _)| i)
        .collect();
    let need = k - picked.len();
    // Partial Fisher-Yates: a uniform `need`-subset of the tied bits.
    for j in 0..need {
        let pick = j + rng.gen_range(0..tied.len() - j);
        tied.swap(j, pick);
        picked.push(tied[j]);
    }
    Ok(picked)
}

/// Fixes code bit `i` to `value`: records it, XORs the value into every
/// neighboring generator's residual source bit, and deactivates the incident
/// edges. A generator whose live degree reaches zero becomes inert.
pub fn fix_bit(
    state: &mut MessageState,
    graph: &FactorGraph,
    i: usize,
    value: bool,
) -> Result<(), EncoderError> {
    if state.fixed[i].is_some() {
        return Err(EncoderError::AlreadyFixed { codebit: i });
    }
    state.fixed[i] = Some(value);
    state.unfixed -= 1;
    for &e in graph.codebit_edge_ids(i) {
        let e = e as usize;
        debug_assert!(state.edge_live[e], "edges of an unfixed bit must be live");
        state.edge_live[e] = false;
        let (a, _) = graph.edge_endpoints(e);
        state.gen_live_degree[a] -= 1;
        if value {
            state.residual_source.flip(a);
        }
        state.code_to_gen[e] = 0.0;
        state.gen_to_code[e] = 0.0;
        state.edge_bias[e] = 0.0;
    }
    Ok(())
}
