//! Belief propagation sweeps with soft reinforcement and clipped biases.
//!
//! Messages live in the log-likelihood-ratio (LLR) domain. For an edge
//! between code bit `i` and generator `a`:
//!
//! ```text
//! R_i'      = sum_{a in C(i)} Rhat_{a->i}
//! R_{i->a}' = sum_{b in C(i)\a} Rhat_{b->i} + (1/mu) R_i        (previous R_i)
//! Rhat_{a->i} = 2 (-1)^{s_a + 1} atanh( beta prod_{j in V(a)\i} B_{j->a} )
//! B = -tanh(R / 2)
//! ```
//!
//! A sweep applies the generator update then the code update with flooding
//! (simultaneous) semantics: all reads see iteration `t`, all writes build
//! `t + 1`. Biases are clipped into `[-(1 - eps), 1 - eps]` by capping LLR
//! magnitudes at `2 atanh(1 - eps)`, which keeps every `atanh` argument
//! strictly inside (-1, 1) and the update map differentiable.
//!
//! Initial code-to-generator messages are drawn from {+0.1, -0.1} with equal
//! probability and are reset to 0 once, at the end of iteration 1; the
//! symmetry breaking survives in the node LLRs through the reinforcement
//! term.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::codec::BitVector;
use crate::graph::FactorGraph;
use crate::math;

/// Errors from message-state construction.
#[derive(Debug, Clone, PartialEq)]
pub enum BpError {
    SizeMismatch { expected: usize, got: usize },
    InvalidParam(&'static str),
}

impl fmt::Display for BpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BpError::SizeMismatch { expected, got } => {
                write!(f, "source length {got} does not match graph size {expected}")
            }
            BpError::InvalidParam(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl core::error::Error for BpError {}

/// Softness parameters of one sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpParams {
    /// Generator gain, in (0, 1).
    pub beta: f64,
    /// Reinforcement softness; the reinforcement weight is `1 / mu`.
    pub mu: f64,
    /// Underlying inverse temperature when known; `beta = tanh(gamma)`.
    pub gamma: Option<f64>,
    /// Clip margin for biases, in (0, 0.1].
    pub epsilon: f64,
}

impl BpParams {
    pub fn new(beta: f64, mu: f64, epsilon: f64) -> Result<Self, BpError> {
        let p = BpParams {
            beta,
            mu,
            gamma: None,
            epsilon,
        };
        p.validate()?;
        Ok(p)
    }

    /// Derives `beta = tanh(gamma)` and records `gamma`.
    pub fn from_gamma(gamma: f64, mu: f64, epsilon: f64) -> Result<Self, BpError> {
        if !(gamma > 0.0) {
            return Err(BpError::InvalidParam("gamma must be positive"));
        }
        let mut p = BpParams::new(math::tanh(gamma), mu, epsilon)?;
        p.gamma = Some(gamma);
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), BpError> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(BpError::InvalidParam("beta must lie in (0, 1)"));
        }
        if !(self.mu > 0.0) {
            return Err(BpError::InvalidParam("mu must be positive"));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 0.1) {
            return Err(BpError::InvalidParam("epsilon must lie in (0, 0.1]"));
        }
        if let Some(gamma) = self.gamma {
            if math::abs(self.beta - math::tanh(gamma)) >= 1e-12 {
                return Err(BpError::InvalidParam("beta must equal tanh(gamma)"));
            }
        }
        Ok(())
    }

    /// LLR magnitude cap `2 atanh(1 - eps)`; keeps bias/LLR conversion
    /// exactly invertible inside the clipped domain.
    pub fn llr_cap(&self) -> f64 {
        2.0 * math::atanh(1.0 - self.epsilon)
    }
}

/// Per-sweep summary of the bias field (over unfixed code bits).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepStats {
    /// Iteration counter after the sweep.
    pub iteration: usize,
    pub mean_abs_bias: f64,
    pub max_abs_bias: f64,
    /// Number of unfixed code bits with `|B| > 0.99`.
    pub saturated: usize,
}

/// Edge-indexed message state plus the residual source and fixed-bit mask.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageState {
    /// `R_{i->a}` per edge.
    pub(crate) code_to_gen: Vec<f64>,
    /// `Rhat_{a->i}` per edge.
    pub(crate) gen_to_code: Vec<f64>,
    /// `R_i` per code bit.
    pub(crate) node_llr: Vec<f64>,
    /// `B_i = -tanh(R_i / 2)` per code bit.
    pub(crate) node_bias: Vec<f64>,
    /// `B_{i->a} = -tanh(R_{i->a} / 2)` per edge.
    pub(crate) edge_bias: Vec<f64>,
    /// Current source parities; fixing a bit to 1 flips its neighbors.
    pub(crate) residual_source: BitVector,
    /// Fixed value per code bit, if decided.
    pub(crate) fixed: Vec<Option<bool>>,
    /// Edges incident to fixed bits are dead.
    pub(crate) edge_live: Vec<bool>,
    /// Live degree per generator; a generator at 0 is inert.
    pub(crate) gen_live_degree: Vec<u32>,
    pub(crate) unfixed: usize,
    pub(crate) iteration: usize,
    /// Count of per-edge message computations, for complexity accounting.
    pub(crate) edge_ops: u64,
}

impl MessageState {
    fn empty(graph: &FactorGraph, source: &BitVector) -> Result<Self, BpError> {
        if source.len() != graph.n_generators() {
            return Err(BpError::SizeMismatch {
                expected: graph.n_generators(),
                got: source.len(),
            });
        }
        let e = graph.n_edges();
        let m = graph.n_codebits();
        let n = graph.n_generators();
        Ok(MessageState {
            code_to_gen: vec![0.0; e],
            gen_to_code: vec![0.0; e],
            node_llr: vec![0.0; m],
            node_bias: vec![0.0; m],
            edge_bias: vec![0.0; e],
            residual_source: source.clone(),
            fixed: vec![None; m],
            edge_live: vec![true; e],
            gen_live_degree: (0..n).map(|a| graph.generator_degree(a) as u32).collect(),
            unfixed: m,
            iteration: 0,
            edge_ops: 0,
        })
    }

    /// Number of code bits not yet fixed.
    pub fn unfixed_count(&self) -> usize {
        self.unfixed
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.fixed[i].is_some()
    }

    pub fn fixed_value(&self, i: usize) -> Option<bool> {
        self.fixed[i]
    }

    pub fn node_bias(&self, i: usize) -> f64 {
        self.node_bias[i]
    }

    pub fn node_biases(&self) -> &[f64] {
        &self.node_bias
    }

    pub fn node_llr(&self, i: usize) -> f64 {
        self.node_llr[i]
    }

    pub fn edge_biases(&self) -> &[f64] {
        &self.edge_bias
    }

    pub fn code_to_gen_llrs(&self) -> &[f64] {
        &self.code_to_gen
    }

    pub fn gen_to_code_llrs(&self) -> &[f64] {
        &self.gen_to_code
    }

    pub fn edge_is_live(&self, e: usize) -> bool {
        self.edge_live[e]
    }

    pub fn residual_source(&self) -> &BitVector {
        &self.residual_source
    }

    /// Total per-edge message computations so far.
    pub fn edge_ops(&self) -> u64 {
        self.edge_ops
    }

    /// A state with uniformly random clipped messages: edge and node biases
    /// drawn from `[-max_abs_bias, max_abs_bias]`, LLRs set consistently.
    /// The iteration counter starts at 2, past the iteration-1 reset.
    pub fn random_clipped(
        graph: &FactorGraph,
        source: &BitVector,
        max_abs_bias: f64,
        seed: u64,
    ) -> Result<Self, BpError> {
        if !(max_abs_bias > 0.0 && max_abs_bias < 1.0) {
            return Err(BpError::InvalidParam("max_abs_bias must lie in (0, 1)"));
        }
        let mut state = MessageState::empty(graph, source)?;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        for e in 0..graph.n_edges() {
            let b = rng.gen_range(-max_abs_bias..=max_abs_bias);
            state.edge_bias[e] = b;
            state.code_to_gen[e] = -2.0 * math::atanh(b);
        }
        for i in 0..graph.n_codebits() {
            let b = rng.gen_range(-max_abs_bias..=max_abs_bias);
            state.node_bias[i] = b;
            state.node_llr[i] = -2.0 * math::atanh(b);
        }
        state.iteration = 2;
        Ok(state)
    }
}

/// Fresh message state: `R_{i->a}` drawn from {+0.1, -0.1} with probability
/// 1/2 each, node LLRs zero, nothing fixed.
pub fn init_messages(
    graph: &FactorGraph,
    source: &BitVector,
    seed: u64,
) -> Result<MessageState, BpError> {
    let mut state = MessageState::empty(graph, source)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    randomize_messages(&mut state, &mut rng);
    Ok(state)
}

/// Redraws the live code-to-generator messages from {+0.1, -0.1}.
pub fn randomize_messages<R: Rng + ?Sized>(state: &mut MessageState, rng: &mut R) {
    for e in 0..state.code_to_gen.len() {
        if !state.edge_live[e] {
            continue;
        }
        let r = if rng.gen_bool(0.5) { 0.1 } else { -0.1 };
        state.code_to_gen[e] = r;
        state.edge_bias[e] = -math::tanh(r / 2.0);
    }
}

/// Generator half of a sweep: for every live edge `(a, i)`,
/// `Rhat_{a->i} = 2 (-1)^{s_a + 1} atanh(beta prod_{j in V(a)\i} B_{j->a})`.
///
/// The leave-one-out products are formed by a prefix/suffix pass, so a zero
/// bias poisons exactly the right outputs. An inert generator (live degree
/// 0) emits nothing.
pub fn generator_update(state: &mut MessageState, graph: &FactorGraph, params: &BpParams) {
    debug_assert!(params.validate().is_ok());
    let beta = params.beta;
    let mut ops = 0u64;
    for a in 0..graph.n_generators() {
        if state.gen_live_degree[a] == 0 {
            continue;
        }
        // (-1)^{s_a + 1}: residual bit 1 keeps the sign, 0 flips it.
        let sign = if state.residual_source.get(a) { 1.0 } else { -1.0 };
        let ids = graph.generator_edge_ids(a);

        // Prefix pass: stash the product of biases before each live edge.
        let mut running = 1.0;
        for &e in ids {
            let e = e as usize;
            if !state.edge_live[e] {
                continue;
            }
            state.gen_to_code[e] = running;
            running *= state.edge_bias[e];
        }
        // Suffix pass: finish the leave-one-out products and emit.
        let mut suffix = 1.0;
        for &e in ids.iter().rev() {
            let e = e as usize;
            if !state.edge_live[e] {
                continue;
            }
            let u = beta * state.gen_to_code[e] * suffix;
            debug_assert!(math::abs(u) < 1.0, "atanh argument must stay inside (-1, 1)");
            state.gen_to_code[e] = 2.0 * sign * math::atanh(u);
            suffix *= state.edge_bias[e];
            ops += 1;
        }
    }
    state.edge_ops += ops;
}

/// Code half of a sweep: recomputes node LLRs, extrinsic edge LLRs with the
/// `(1/mu) R_i` reinforcement (using the previous round's `R_i`), and the
/// clipped biases.
pub fn code_update(
    state: &mut MessageState,
    graph: &FactorGraph,
    params: &BpParams,
) -> SweepStats {
    debug_assert!(params.validate().is_ok());
    let inv_mu = 1.0 / params.mu;
    let cap = params.llr_cap();
    let bias_cap = 1.0 - params.epsilon;
    let mut ops = 0u64;

    let mut sum_abs = 0.0;
    let mut max_abs = 0.0_f64;
    let mut saturated = 0usize;

    for i in 0..graph.n_codebits() {
        if state.fixed[i].is_some() {
            continue;
        }
        let ids = graph.codebit_edge_ids(i);
        let previous = state.node_llr[i];
        let mut total = 0.0;
        for &e in ids {
            let e = e as usize;
            if state.edge_live[e] {
                total += state.gen_to_code[e];
            }
        }
        for &e in ids {
            let e = e as usize;
            if !state.edge_live[e] {
                continue;
            }
            let msg = (total - state.gen_to_code[e] + inv_mu * previous).clamp(-cap, cap);
            state.code_to_gen[e] = msg;
            state.edge_bias[e] = (-math::tanh(msg / 2.0)).clamp(-bias_cap, bias_cap);
            ops += 1;
        }
        let node = total.clamp(-cap, cap); // PROBE: memoryless variant
        state.node_llr[i] = node;
        let bias = (-math::tanh(node / 2.0)).clamp(-bias_cap, bias_cap);
        state.node_bias[i] = bias;

        let abs = math::abs(bias);
        sum_abs += abs;
        max_abs = max_abs.max(abs);
        if abs > 0.99 {
            saturated += 1;
        }
    }
    state.edge_ops += ops;

    SweepStats {
        iteration: state.iteration,
        mean_abs_bias: if state.unfixed > 0 {
            sum_abs / state.unfixed as f64
        } else {
            0.0
        },
        max_abs_bias: max_abs,
        saturated,
    }
}

/// One full flooding sweep: generator update, then code update, then the
/// iteration counter. At the end of iteration 1 the code-to-generator
/// messages are reset to 0 (exactly once per state).
pub fn sweep(state: &mut MessageState, graph: &FactorGraph, params: &BpParams) -> SweepStats {
    generator_update(state, graph, params);
    let mut stats = code_update(state, graph, params);
    state.iteration += 1;
    stats.iteration = state.iteration;
    if state.iteration == 1 {
        for e in 0..state.code_to_gen.len() {
            if state.edge_live[e] {
                state.code_to_gen[e] = 0.0;
                state.edge_bias[e] = 0.0;
            }
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FactorGraph;
    use approx::assert_relative_eq;

    fn tiny_graph() -> FactorGraph {
        // 3 generators, 2 code bits, 5 edges: a hand-checkable instance.
        FactorGraph::from_edges(3, 2, vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)]).unwrap()
    }

    fn params(beta: f64, mu: f64) -> BpParams {
        BpParams::new(beta, mu, 1e-6).unwrap()
    }

    #[test]
    fn init_draws_plus_minus_tenth() {
        let g = FactorGraph::build_semi_regular(2000, 0.5, 3, 9).unwrap();
        let s = BitVector::zeros(2000);
        let state = init_messages(&g, &s, 1).unwrap();
        for &r in state.code_to_gen_llrs() {
            assert!(r == 0.1 || r == -0.1, "got {r}");
        }
    }

    #[test]
    fn init_is_balanced() {
        // About 10^5 edges; the +0.1 frequency must sit within 3 binomial
        // standard deviations of 1/2.
        let g = FactorGraph::build_semi_regular(40_000, 0.5, 3, 5).unwrap();
        let s = BitVector::zeros(40_000);
        let state = init_messages(&g, &s, 123).unwrap();
        let e = g.n_edges() as f64;
        let positives = state
            .code_to_gen_llrs()
            .iter()
            .filter(|&&r| r > 0.0)
            .count() as f64;
        let sigma = 0.5 / e.sqrt();
        assert!(
            (positives / e - 0.5).abs() <= 3.0 * sigma,
            "frequency {} outside 3 sigma",
            positives / e
        );
    }

    #[test]
    fn reset_to_zero_at_iteration_one() {
        let g = tiny_graph();
        let s = BitVector::from_bits(&[1, 0, 1]);
        let mut state = init_messages(&g, &s, 7).unwrap();
        sweep(&mut state, &g, &params(0.9, 20.0));
        assert_eq!(state.iteration(), 1);
        assert!(state.code_to_gen_llrs().iter().all(|&r| r == 0.0));
        // Node LLRs keep the symmetry-breaking information.
        assert!(state.node_llr.iter().any(|&r| r != 0.0));
        // The reset happens exactly once: after the next sweep the messages
        // are reinforcement-driven and nonzero again.
        sweep(&mut state, &g, &params(0.9, 20.0));
        assert!(state.code_to_gen_llrs().iter().any(|&r| r != 0.0));
    }

    #[test]
    fn generator_update_zero_bias_kills_message() {
        let g = tiny_graph();
        let s = BitVector::zeros(3);
        let mut state = MessageState::random_clipped(&g, &s, 0.5, 3).unwrap();
        // Edge (0,0) is edge id 0; its partner at generator 0 is edge id 1.
        state.edge_bias[1] = 0.0;
        generator_update(&mut state, &g, &params(0.9, 20.0));
        assert_eq!(state.gen_to_code_llrs()[0], 0.0);
    }

    #[test]
    fn generator_update_matches_scalar_formula() {
        // Generator with s_a = 1 and one other neighbor of bias 0.5 at
        // beta = 0.9 must emit 2 atanh(0.45).
        let g = FactorGraph::from_edges(1, 2, vec![(0, 0), (0, 1)]).unwrap();
        let s = BitVector::from_bits(&[1]);
        let mut state = MessageState::empty(&g, &s).unwrap();
        state.edge_bias[1] = 0.5;
        generator_update(&mut state, &g, &params(0.9, 20.0));
        assert_relative_eq!(
            state.gen_to_code_llrs()[0],
            0.9694005571881035, // 2 atanh(0.45)
            max_relative = 1e-12
        );
        // Flipping the source bit negates the message exactly.
        let mut flipped = MessageState::empty(&g, &BitVector::from_bits(&[0])).unwrap();
        flipped.edge_bias[1] = 0.5;
        generator_update(&mut flipped, &g, &params(0.9, 20.0));
        assert_eq!(flipped.gen_to_code_llrs()[0], -state.gen_to_code_llrs()[0]);
    }

    #[test]
    fn code_update_examples() {
        // Degree-1 code bit: the outgoing message is the pure reinforcement
        // (1/mu) R_i; a combined case checks sum + reinforcement.
        let g = FactorGraph::from_edges(2, 2, vec![(0, 0), (1, 0), (0, 1)]).unwrap();
        let s = BitVector::zeros(2);
        let mut state = MessageState::empty(&g, &s).unwrap();
        // Code bit 0 has edges to generators 0 and 1; code bit 1 only to 0.
        // Edge ids sorted by (a, i): (0,0)=0, (0,1)=1, (1,0)=2.
        state.node_llr[0] = 2.0;
        state.node_llr[1] = 2.0;
        state.gen_to_code[0] = 1.0;
        state.gen_to_code[2] = 0.5;
        code_update(&mut state, &g, &params(0.9, 20.0));
        // Bit 0 via edge 0: sum over others (0.5) + 2.0 / 20.
        assert_relative_eq!(state.code_to_gen_llrs()[0], 0.6, max_relative = 1e-12);
        // Bit 0 via edge 2: 1.0 + 0.1.
        assert_relative_eq!(state.code_to_gen_llrs()[2], 1.1, max_relative = 1e-12);
        // Degree-1 bit 1: empty sum + 0.1.
        assert_relative_eq!(state.code_to_gen_llrs()[1], 0.1, max_relative = 1e-12);
        // New node LLR ignores reinforcement.
        assert_relative_eq!(state.node_llr[0], 1.5, max_relative = 1e-12);
        // R = 0 gives B = 0.
        let mut zero = MessageState::empty(&g, &s).unwrap();
        code_update(&mut zero, &g, &params(0.9, 20.0));
        assert_eq!(zero.node_bias(0), 0.0);
    }

    #[test]
    fn zero_state_is_fixed_point() {
        // Zero products need nonempty products: every generator degree >= 2.
        let g =
            FactorGraph::from_edges(3, 2, vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)])
                .unwrap();
        let s = BitVector::from_bits(&[1, 1, 0]);
        let mut state = MessageState::empty(&g, &s).unwrap();
        state.iteration = 2; // stay clear of the iteration-1 reset
        sweep(&mut state, &g, &params(0.8, 10.0));
        assert!(state.code_to_gen_llrs().iter().all(|&r| r == 0.0));
        assert!(state.gen_to_code_llrs().iter().all(|&r| r == 0.0));
        assert!(state.node_llr.iter().all(|&r| r == 0.0));
        // A degree-1 generator instead emits a constant field +-2 atanh(beta).
        let g1 = FactorGraph::from_edges(1, 2, vec![(0, 0)]).unwrap();
        let mut one = MessageState::empty(&g1, &BitVector::from_bits(&[1])).unwrap();
        one.iteration = 2;
        sweep(&mut one, &g1, &params(0.8, 10.0));
        assert_relative_eq!(
            one.node_llr(0),
            2.0 * math::atanh(0.8),
            max_relative = 1e-12
        );
    }

    #[test]
    fn sweep_matches_hand_computation() {
        // Independent re-computation of one sweep on the 5-edge instance.
        let g = tiny_graph();
        let source = [true, false, true];
        let s = {
            let mut v = BitVector::zeros(3);
            for (a, &b) in source.iter().enumerate() {
                v.set(a, b);
            }
            v
        };
        let beta = 0.85;
        let mu = 12.0;

        let mut state = MessageState::random_clipped(&g, &s, 0.6, 11).unwrap();
        let edge_bias: alloc::vec::Vec<f64> = state.edge_biases().to_vec();
        let node_llr: alloc::vec::Vec<f64> = state.node_llr.clone();

        // Edge ids sorted by (a, i):
        // 0:(0,0) 1:(0,1) 2:(1,0) 3:(1,1) 4:(2,0)
        // V(0) = {0,1}, V(1) = {0,1}, V(2) = {0};
        // C(0) = {0,1,2}, C(1) = {0,1} via edges {0,2,4} and {1,3}.
        let sign = |a: usize| if source[a] { 1.0 } else { -1.0 };
        let rhat = [
            2.0 * sign(0) * (beta * edge_bias[1]).atanh(), // edge 0, from gen 0
            2.0 * sign(0) * (beta * edge_bias[0]).atanh(), // edge 1
            2.0 * sign(1) * (beta * edge_bias[3]).atanh(), // edge 2, from gen 1
            2.0 * sign(1) * (beta * edge_bias[2]).atanh(), // edge 3
            2.0 * sign(2) * beta.atanh(),                  // edge 4: empty product = 1
        ];
        let r0 = rhat[0] + rhat[2] + rhat[4];
        let r1 = rhat[1] + rhat[3];
        let expected_edges = [
            rhat[2] + rhat[4] + node_llr[0] / mu, // edge 0 excludes gen 0
            rhat[3] + node_llr[1] / mu,           // edge 1
            rhat[0] + rhat[4] + node_llr[0] / mu, // edge 2
            rhat[1] + node_llr[1] / mu,           // edge 3
            rhat[0] + rhat[2] + node_llr[0] / mu, // edge 4
        ];

        sweep(&mut state, &g, &params(beta, mu));

        for e in 0..5 {
            assert_relative_eq!(state.gen_to_code_llrs()[e], rhat[e], max_relative = 1e-12);
            assert_relative_eq!(
                state.code_to_gen_llrs()[e],
                expected_edges[e],
                max_relative = 1e-12
            );
        }
        assert_relative_eq!(state.node_llr[0], r0, max_relative = 1e-12);
        assert_relative_eq!(state.node_llr[1], r1, max_relative = 1e-12);
    }

    #[test]
    fn sweep_is_deterministic() {
        let g = FactorGraph::build_semi_regular(100, 0.5, 3, 21).unwrap();
        let s = BitVector::random(100, &mut ChaCha12Rng::seed_from_u64(5));
        let mut a = init_messages(&g, &s, 2).unwrap();
        let mut b = init_messages(&g, &s, 2).unwrap();
        for _ in 0..10 {
            sweep(&mut a, &g, &params(0.9, 20.0));
            sweep(&mut b, &g, &params(0.9, 20.0));
        }
        assert_eq!(a, b);
    }

    #[test]
    fn clipping_and_bias_consistency() {
        let g = FactorGraph::build_semi_regular(200, 0.5, 4, 3).unwrap();
        let s = BitVector::random(200, &mut ChaCha12Rng::seed_from_u64(8));
        let eps = 1e-6;
        let p = BpParams::new(0.98, 2.0, eps).unwrap(); // hard, saturating regime
        let mut state = init_messages(&g, &s, 4).unwrap();
        for _ in 0..50 {
            sweep(&mut state, &g, &p);
        }
        for e in 0..g.n_edges() {
            let b = state.edge_biases()[e];
            assert!(b.abs() <= 1.0 - eps);
            assert_relative_eq!(
                b,
                (-math::tanh(state.code_to_gen_llrs()[e] / 2.0)).clamp(-(1.0 - eps), 1.0 - eps),
                epsilon = 1e-12
            );
        }
        // Every atanh argument respects |u| <= beta (1 - eps)^(d_c - 1).
        let d_c = g.degree_stats().max_gen_degree;
        let u_cap = p.beta * math::pow(1.0 - eps, (d_c - 1) as f64);
        for a in 0..g.n_generators() {
            let ids: alloc::vec::Vec<usize> =
                g.generator_edge_ids(a).iter().map(|&e| e as usize).collect();
            for &e in &ids {
                let u: f64 = p.beta
                    * ids
                        .iter()
                        .filter(|&&j| j != e)
                        .map(|&j| state.edge_biases()[j])
                        .product::<f64>();
                assert!(u.abs() <= u_cap + 1e-15, "u = {u} exceeds cap {u_cap}");
            }
        }
        for i in 0..g.n_codebits() {
            assert!(state.node_bias(i).abs() <= 1.0 - eps);
            assert_relative_eq!(
                state.node_bias(i),
                (-math::tanh(state.node_llr(i) / 2.0)).clamp(-(1.0 - eps), 1.0 - eps),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn larger_beta_strictly_amplifies() {
        let g = FactorGraph::build_semi_regular(40, 0.5, 3, 17).unwrap();
        let s = BitVector::random(40, &mut ChaCha12Rng::seed_from_u64(2));
        let base = MessageState::random_clipped(&g, &s, 0.8, 19).unwrap();
        let mut lo = base.clone();
        let mut hi = base.clone();
        generator_update(&mut lo, &g, &params(0.5, 20.0));
        generator_update(&mut hi, &g, &params(0.9, 20.0));
        for e in 0..g.n_edges() {
            let (a, b) = (lo.gen_to_code_llrs()[e], hi.gen_to_code_llrs()[e]);
            if a != 0.0 {
                assert!(b.abs() > a.abs(), "edge {e}: {b} vs {a}");
            }
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(BpParams::new(0.0, 10.0, 1e-6).is_err());
        assert!(BpParams::new(1.0, 10.0, 1e-6).is_err());
        assert!(BpParams::new(0.5, 0.0, 1e-6).is_err());
        assert!(BpParams::new(0.5, 10.0, 0.0).is_err());
        assert!(BpParams::new(0.5, 10.0, 0.2).is_err());
        assert!(BpParams::from_gamma(1.5, 10.0, 1e-6).is_ok());
        let mut p = BpParams::new(0.5, 10.0, 1e-6).unwrap();
        p.gamma = Some(2.0);
        assert!(p.validate().is_err());
    }

    #[test]
    fn init_rejects_size_mismatch() {
        let g = tiny_graph();
        assert!(init_messages(&g, &BitVector::zeros(2), 0).is_err());
    }
}
