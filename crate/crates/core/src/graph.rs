//! Bipartite LDGM factor graphs.
//!
//! A graph has `N` generator nodes (one per source bit) and `M` code-bit
//! nodes. An edge `(a, i)` means code bit `i` participates in the XOR that
//! reconstructs source position `a`. Two ensembles are supported:
//!
//! - semi-regular: every generator has fixed degree `K`, each edge endpoint
//!   attached to a uniformly random code bit (code-bit degrees are then
//!   approximately Binomial(KN, 1/M));
//! - irregular: a configuration-model draw from an edge-perspective degree
//!   distribution on both sides.
//!
//! Graphs are immutable after construction, store adjacency in CSR form in
//! both directions, and are bit-identical for identical `(parameters, seed)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::math;

/// Errors from graph construction, validation, or parsing.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphError {
    /// A constructor argument is out of range.
    InvalidParam(&'static str),
    /// The two sides of a degree distribution imply incompatible edge totals.
    SocketImbalance { generator_side: f64, code_side: f64 },
    /// Socket totals could not be reconciled by moving nodes between the
    /// distribution's degree classes.
    Unreconcilable,
    /// Random rewiring failed to remove all parallel edges.
    RewiringFailed,
    /// An edge references a node outside the declared ranges.
    EdgeOutOfRange { generator: usize, codebit: usize },
    /// The same `(generator, codebit)` pair appears more than once.
    ParallelEdge { generator: usize, codebit: usize },
    /// Text form could not be parsed.
    Parse { line: usize, reason: String },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::InvalidParam(what) => write!(f, "invalid parameter: {what}"),
            GraphError::SocketImbalance {
                generator_side,
                code_side,
            } => write!(
                f,
                "edge totals disagree between sides: generators imply {generator_side:.3}, \
                 code bits imply {code_side:.3}"
            ),
            GraphError::Unreconcilable => {
                write!(f, "could not reconcile socket totals across degree classes")
            }
            GraphError::RewiringFailed => {
                write!(f, "failed to remove parallel edges by rewiring")
            }
            GraphError::EdgeOutOfRange { generator, codebit } => {
                write!(f, "edge ({generator}, {codebit}) out of range")
            }
            GraphError::ParallelEdge { generator, codebit } => {
                write!(f, "parallel edge ({generator}, {codebit})")
            }
            GraphError::Parse { line, reason } => write!(f, "parse error at line {line}: {reason}"),
        }
    }
}

impl core::error::Error for GraphError {}

/// Edge-perspective degree distribution `(lambda, rho)`.
///
/// `code_edge_coeffs[d]` is the fraction of edges attached to code bits of
/// degree `d`; `gen_edge_coeffs[d]` the same for generator nodes. Each side
/// must sum to 1 within 1e-9 with nonnegative coefficients and degrees >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    code_edge_coeffs: BTreeMap<u32, f64>,
    gen_edge_coeffs: BTreeMap<u32, f64>,
}

impl DegreeDistribution {
    pub fn new(code: &[(u32, f64)], generator: &[(u32, f64)]) -> Result<Self, GraphError> {
        let build = |side: &[(u32, f64)]| -> Result<BTreeMap<u32, f64>, GraphError> {
            let mut map = BTreeMap::new();
            let mut sum = 0.0;
            for &(d, c) in side {
                if d < 1 {
                    return Err(GraphError::InvalidParam("degree must be >= 1"));
                }
                if !(c >= 0.0) {
                    return Err(GraphError::InvalidParam("coefficients must be nonnegative"));
                }
                if c > 0.0 && map.insert(d, c).is_some() {
                    return Err(GraphError::InvalidParam("duplicate degree class"));
                }
                sum += c;
            }
            if map.is_empty() {
                return Err(GraphError::InvalidParam("empty degree distribution"));
            }
            if math::abs(sum - 1.0) > 1e-9 {
                return Err(GraphError::InvalidParam("coefficients must sum to 1"));
            }
            Ok(map)
        };
        Ok(DegreeDistribution {
            code_edge_coeffs: build(code)?,
            gen_edge_coeffs: build(generator)?,
        })
    }

    /// The optimized rate-1/2 distribution: every edge sees a degree-7 code
    /// bit, and generator degrees are drawn from {2, 3, 4, 9}.
    ///
    /// The published generator coefficients sum to 0.999996; they are
    /// normalized here so the distribution validates exactly.
    pub fn optimized_rate_half() -> Self {
        let raw = [(2u32, 0.275698), (3, 0.25537), (4, 0.076598), (9, 0.39233)];
        let total: f64 = raw.iter().map(|&(_, c)| c).sum();
        let gen: Vec<(u32, f64)> = raw.iter().map(|&(d, c)| (d, c / total)).collect();
        DegreeDistribution::new(&[(7, 1.0)], &gen).expect("preset is valid")
    }

    /// Fraction of code-side edges per degree class.
    pub fn code_edge_coeffs(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.code_edge_coeffs.iter().map(|(&d, &c)| (d, c))
    }

    /// Fraction of generator-side edges per degree class.
    pub fn gen_edge_coeffs(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.gen_edge_coeffs.iter().map(|(&d, &c)| (d, c))
    }

    /// Node-perspective fractions: the share of nodes in each degree class
    /// is proportional to `coeff_d / d`.
    fn node_fractions(side: &BTreeMap<u32, f64>) -> Vec<(u32, f64)> {
        let norm: f64 = side.iter().map(|(&d, &c)| c / d as f64).sum();
        side.iter()
            .map(|(&d, &c)| (d, c / d as f64 / norm))
            .collect()
    }

    /// Mean node degree of a side, `1 / sum_d coeff_d / d`.
    fn mean_node_degree(side: &BTreeMap<u32, f64>) -> f64 {
        1.0 / side.iter().map(|(&d, &c)| c / d as f64).sum::<f64>()
    }

    /// Mean code-bit degree from the node perspective.
    pub fn mean_code_degree(&self) -> f64 {
        Self::mean_node_degree(&self.code_edge_coeffs)
    }

    /// Mean generator degree from the node perspective.
    pub fn mean_gen_degree(&self) -> f64 {
        Self::mean_node_degree(&self.gen_edge_coeffs)
    }
}

/// Degree histograms and extrema of a constructed graph.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeProfile {
    /// Maximum code-bit degree (`d_v` in the contraction bound).
    pub max_code_degree: usize,
    /// Mean code-bit degree, `|E| / M`.
    pub mean_code_degree: f64,
    /// Maximum generator degree (`d_c` in the contraction bound).
    pub max_gen_degree: usize,
    /// Mean generator degree, `|E| / N`.
    pub mean_gen_degree: f64,
    /// `code_histogram[d]` = number of code bits with degree `d`.
    pub code_histogram: Vec<usize>,
    /// `gen_histogram[d]` = number of generators with degree `d`.
    pub gen_histogram: Vec<usize>,
}

/// Immutable bipartite LDGM graph with CSR adjacency in both directions.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorGraph {
    n_generators: usize,
    n_codebits: usize,
    /// Edge list sorted by `(generator, codebit)`; index = edge id.
    edges: Vec<(u32, u32)>,
    gen_offsets: Vec<u32>,
    gen_edges: Vec<u32>,
    code_offsets: Vec<u32>,
    code_edges: Vec<u32>,
}

impl FactorGraph {
    /// Validates and indexes an edge list. Edges are canonicalized by
    /// sorting on `(generator, codebit)`; parallel edges are rejected.
    pub fn from_edges(
        n_generators: usize,
        n_codebits: usize,
        mut edges: Vec<(u32, u32)>,
    ) -> Result<Self, GraphError> {
        if n_generators == 0 || n_codebits == 0 {
            return Err(GraphError::InvalidParam("graph sides must be nonempty"));
        }
        for &(a, i) in &edges {
            if a as usize >= n_generators || i as usize >= n_codebits {
                return Err(GraphError::EdgeOutOfRange {
                    generator: a as usize,
                    codebit: i as usize,
                });
            }
        }
        edges.sort_unstable();
        for pair in edges.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::ParallelEdge {
                    generator: pair[0].0 as usize,
                    codebit: pair[0].1 as usize,
                });
            }
        }

        let mut gen_offsets = vec![0u32; n_generators + 1];
        let mut code_offsets = vec![0u32; n_codebits + 1];
        for &(a, i) in &edges {
            gen_offsets[a as usize + 1] += 1;
            code_offsets[i as usize + 1] += 1;
        }
        for k in 0..n_generators {
            gen_offsets[k + 1] += gen_offsets[k];
        }
        for k in 0..n_codebits {
            code_offsets[k + 1] += code_offsets[k];
        }

        // Edges are sorted by generator, so the generator CSR is 0..E.
        let gen_edges: Vec<u32> = (0..edges.len() as u32).collect();
        let mut code_edges = vec![0u32; edges.len()];
        let mut cursor: Vec<u32> = code_offsets[..n_codebits].to_vec();
        for (e, &(_, i)) in edges.iter().enumerate() {
            code_edges[cursor[i as usize] as usize] = e as u32;
            cursor[i as usize] += 1;
        }

        Ok(FactorGraph {
            n_generators,
            n_codebits,
            edges,
            gen_offsets,
            gen_edges,
            code_offsets,
            code_edges,
        })
    }

    /// Semi-regular ensemble: `N` generators of degree exactly `K`, each
    /// edge endpoint attached to a uniformly random code bit, resampling on
    /// collision so no parallel edges arise. `M = round(rate * N)` with ties
    /// to even.
    pub fn build_semi_regular(
        n_source: usize,
        rate: f64,
        gen_degree: usize,
        seed: u64,
    ) -> Result<Self, GraphError> {
        let m = checked_codebit_count(n_source, rate)?;
        if gen_degree < 1 {
            return Err(GraphError::InvalidParam("generator degree must be >= 1"));
        }
        if gen_degree > m {
            return Err(GraphError::InvalidParam(
                "generator degree cannot exceed the code-bit count",
            ));
        }

        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut edges = Vec::with_capacity(n_source * gen_degree);
        let mut chosen: Vec<u32> = Vec::with_capacity(gen_degree);
        for a in 0..n_source as u32 {
            chosen.clear();
            while chosen.len() < gen_degree {
                let i = rng.gen_range(0..m as u32);
                if !chosen.contains(&i) {
                    chosen.push(i);
                    edges.push((a, i));
                }
            }
        }
        FactorGraph::from_edges(n_source, m, edges)
    }

    /// Irregular ensemble via the configuration model.
    ///
    /// Node counts per degree class come from largest-remainder rounding of
    /// the node-perspective fractions, with leftover nodes assigned to the
    /// highest-degree classes. Any residual socket imbalance between the two
    /// sides is repaired by moving nodes between existing degree classes;
    /// distributions whose ideal edge totals differ by more than one socket
    /// per 1000 are rejected. Sockets are matched through a uniform shuffle
    /// and parallel edges removed by local edge swaps.
    pub fn build_irregular(
        n_source: usize,
        rate: f64,
        dist: &DegreeDistribution,
        seed: u64,
    ) -> Result<Self, GraphError> {
        let m = checked_codebit_count(n_source, rate)?;

        // Distribution-level consistency: both sides must imply the same
        // edge total for this (N, M).
        let gen_total = n_source as f64 * dist.mean_gen_degree();
        let code_total = m as f64 * dist.mean_code_degree();
        let tol = (gen_total.max(code_total) / 1000.0).max(1.0);
        if math::abs(gen_total - code_total) > tol {
            return Err(GraphError::SocketImbalance {
                generator_side: gen_total,
                code_side: code_total,
            });
        }

        let mut gen_counts = apportion_nodes(
            n_source,
            &DegreeDistribution::node_fractions(&dist.gen_edge_coeffs),
        );
        let mut code_counts = apportion_nodes(
            m,
            &DegreeDistribution::node_fractions(&dist.code_edge_coeffs),
        );
        reconcile_sockets(&mut gen_counts, &mut code_counts)?;

        let gen_sockets = socket_list(&gen_counts);
        let mut code_sockets = socket_list(&code_counts);
        debug_assert_eq!(gen_sockets.len(), code_sockets.len());

        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        fisher_yates(&mut code_sockets, &mut rng);
        let mut edges: Vec<(u32, u32)> = gen_sockets
            .into_iter()
            .zip(code_sockets)
            .collect();
        remove_parallel_edges(&mut edges, &mut rng)?;

        FactorGraph::from_edges(n_source, m, edges)
    }

    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn n_codebits(&self) -> usize {
        self.n_codebits
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Coding rate `M / N`.
    pub fn rate(&self) -> f64 {
        self.n_codebits as f64 / self.n_generators as f64
    }

    /// The endpoints `(generator, codebit)` of an edge id.
    #[inline]
    pub fn edge_endpoints(&self, edge: usize) -> (usize, usize) {
        let (a, i) = self.edges[edge];
        (a as usize, i as usize)
    }

    /// Edge ids incident to generator `a`, ordered by code-bit index.
    #[inline]
    pub fn generator_edge_ids(&self, a: usize) -> &[u32] {
        &self.gen_edges[self.gen_offsets[a] as usize..self.gen_offsets[a + 1] as usize]
    }

    /// Edge ids incident to code bit `i`, ordered by generator index.
    #[inline]
    pub fn codebit_edge_ids(&self, i: usize) -> &[u32] {
        &self.code_edges[self.code_offsets[i] as usize..self.code_offsets[i + 1] as usize]
    }

    /// The set `V(a)`: code bits adjacent to generator `a`.
    pub fn generator_neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.generator_edge_ids(a)
            .iter()
            .map(move |&e| self.edges[e as usize].1 as usize)
    }

    /// The set `C(i)`: generators adjacent to code bit `i`.
    pub fn codebit_neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.codebit_edge_ids(i)
            .iter()
            .map(move |&e| self.edges[e as usize].0 as usize)
    }

    pub fn generator_degree(&self, a: usize) -> usize {
        (self.gen_offsets[a + 1] - self.gen_offsets[a]) as usize
    }

    pub fn codebit_degree(&self, i: usize) -> usize {
        (self.code_offsets[i + 1] - self.code_offsets[i]) as usize
    }

    /// Exact degree histograms and extrema.
    pub fn degree_stats(&self) -> DegreeProfile {
        let max_gen = (0..self.n_generators)
            .map(|a| self.generator_degree(a))
            .max()
            .unwrap_or(0);
        let max_code = (0..self.n_codebits)
            .map(|i| self.codebit_degree(i))
            .max()
            .unwrap_or(0);
        let mut gen_histogram = vec![0usize; max_gen + 1];
        for a in 0..self.n_generators {
            gen_histogram[self.generator_degree(a)] += 1;
        }
        let mut code_histogram = vec![0usize; max_code + 1];
        for i in 0..self.n_codebits {
            code_histogram[self.codebit_degree(i)] += 1;
        }
        DegreeProfile {
            max_code_degree: max_code,
            mean_code_degree: self.n_edges() as f64 / self.n_codebits as f64,
            max_gen_degree: max_gen,
            mean_gen_degree: self.n_edges() as f64 / self.n_generators as f64,
            code_histogram,
            gen_histogram,
        }
    }

    /// Line-oriented text form: a `N M E` header, then one `a i` pair per
    /// line in canonical edge order.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + 8 * self.edges.len());
        let _ = writeln!(
            out,
            "{} {} {}",
            self.n_generators,
            self.n_codebits,
            self.edges.len()
        );
        for &(a, i) in &self.edges {
            let _ = writeln!(out, "{a} {i}");
        }
        out
    }

    /// Parses `to_text` output, validating counts, ranges, and absence of
    /// parallel edges.
    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate();
        let (hdr_line, header) = loop {
            match lines.next() {
                Some((idx, l)) if !l.trim().is_empty() => break (idx + 1, l),
                Some(_) => continue,
                None => {
                    return Err(GraphError::Parse {
                        line: 1,
                        reason: String::from("missing header"),
                    })
                }
            }
        };
        let parse_usize = |tok: &str, line: usize| -> Result<usize, GraphError> {
            tok.parse::<usize>().map_err(|_| GraphError::Parse {
                line,
                reason: format!("expected an integer, got `{tok}`"),
            })
        };
        let mut parts = header.split_whitespace();
        let n = parse_usize(parts.next().unwrap_or(""), hdr_line)?;
        let m = parse_usize(parts.next().unwrap_or(""), hdr_line)?;
        let e = parse_usize(parts.next().unwrap_or(""), hdr_line)?;
        if parts.next().is_some() {
            return Err(GraphError::Parse {
                line: hdr_line,
                reason: String::from("header must be `N M E`"),
            });
        }

        let mut edges = Vec::with_capacity(e);
        for (idx, line) in lines {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let a = parse_usize(parts.next().unwrap_or(""), line_no)?;
            let i = parse_usize(parts.next().unwrap_or(""), line_no)?;
            if parts.next().is_some() {
                return Err(GraphError::Parse {
                    line: line_no,
                    reason: String::from("edge line must be `a i`"),
                });
            }
            edges.push((a as u32, i as u32));
        }
        if edges.len() != e {
            return Err(GraphError::Parse {
                line: hdr_line,
                reason: format!("header declares {e} edges, found {}", edges.len()),
            });
        }
        FactorGraph::from_edges(n, m, edges)
    }
}

/// `M = round(rate * N)`, ties to even; rejects empty sizes and rates
/// outside (0, 1].
fn checked_codebit_count(n_source: usize, rate: f64) -> Result<usize, GraphError> {
    if n_source == 0 {
        return Err(GraphError::InvalidParam("source length must be >= 1"));
    }
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(GraphError::InvalidParam("rate must be in (0, 1]"));
    }
    let m = math::round_ties_even(rate * n_source as f64) as usize;
    if m == 0 {
        return Err(GraphError::InvalidParam("code-bit count rounds to zero"));
    }
    Ok(m)
}

/// Largest-remainder apportionment of `total` nodes over degree classes;
/// leftover nodes go to the highest-degree classes first.
fn apportion_nodes(total: usize, fractions: &[(u32, f64)]) -> Vec<(u32, usize)> {
    let mut counts: Vec<(u32, usize)> = fractions
        .iter()
        .map(|&(d, f)| (d, (f * total as f64) as usize))
        .collect();
    let assigned: usize = counts.iter().map(|&(_, c)| c).sum();
    let mut leftover = total - assigned;
    let mut idx: Vec<usize> = (0..counts.len()).collect();
    idx.sort_unstable_by(|&a, &b| counts[b].0.cmp(&counts[a].0));
    let mut k = 0;
    while leftover > 0 {
        counts[idx[k % idx.len()]].1 += 1;
        leftover -= 1;
        k += 1;
    }
    counts
}

fn socket_total(counts: &[(u32, usize)]) -> i64 {
    counts.iter().map(|&(d, c)| d as i64 * c as i64).sum()
}

/// Moves nodes between existing degree classes until the generator and code
/// sides carry the same number of sockets. Each move relabels one node from
/// class `d_from` to class `d_to`, changing the imbalance by `d_to - d_from`;
/// moves are chosen greedily to shrink the absolute imbalance.
fn reconcile_sockets(
    gen_counts: &mut [(u32, usize)],
    code_counts: &mut [(u32, usize)],
) -> Result<(), GraphError> {
    let mut delta = socket_total(gen_counts) - socket_total(code_counts);
    let mut guard = math::abs(delta as f64) as usize + 16;
    while delta != 0 {
        if guard == 0 {
            return Err(GraphError::Unreconcilable);
        }
        guard -= 1;

        // (side, from-index, to-index, resulting |delta|)
        let mut best: Option<(usize, usize, usize, i64)> = None;
        for (side, counts) in [&*gen_counts, &*code_counts].iter().enumerate() {
            let sign = if side == 0 { 1i64 } else { -1i64 };
            for from in 0..counts.len() {
                if counts[from].1 == 0 {
                    continue;
                }
                for to in 0..counts.len() {
                    if to == from {
                        continue;
                    }
                    let step = sign * (counts[to].0 as i64 - counts[from].0 as i64);
                    let next = (delta + step).abs();
                    let better = match best {
                        None => true,
                        Some((_, _, _, b)) => next < b,
                    };
                    if better {
                        best = Some((side, from, to, next));
                    }
                }
            }
        }
        match best {
            Some((side, from, to, next)) if next < delta.abs() => {
                let counts = if side == 0 { &mut *gen_counts } else { &mut *code_counts };
                counts[from].1 -= 1;
                counts[to].1 += 1;
                let sign = if side == 0 { 1i64 } else { -1i64 };
                delta += sign * (counts[to].0 as i64 - counts[from].0 as i64);
            }
            _ => return Err(GraphError::Unreconcilable),
        }
    }
    Ok(())
}

/// Expands class counts into a socket list: node id repeated once per unit
/// of degree, node ids assigned in ascending class order.
fn socket_list(counts: &[(u32, usize)]) -> Vec<u32> {
    let mut sorted: Vec<(u32, usize)> = counts.to_vec();
    sorted.sort_unstable();
    let mut sockets = Vec::new();
    let mut node = 0u32;
    for (degree, count) in sorted {
        for _ in 0..count {
            for _ in 0..degree {
                sockets.push(node);
            }
            node += 1;
        }
    }
    sockets
}

fn fisher_yates<R: Rng + ?Sized>(items: &mut [u32], rng: &mut R) {
    for k in (1..items.len()).rev() {
        let j = rng.gen_range(0..=k);
        items.swap(k, j);
    }
}

/// Removes duplicate `(a, i)` pairs by swapping code-side sockets between a
/// duplicate edge and a random partner, accepting a swap only if it creates
/// no new duplicates.
fn remove_parallel_edges<R: Rng + ?Sized>(
    edges: &mut [(u32, u32)],
    rng: &mut R,
) -> Result<(), GraphError> {
    let mut counts: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for &e in edges.iter() {
        *counts.entry(e).or_insert(0) += 1;
    }
    let mut attempts = 200 * edges.len().max(1);
    loop {
        let mut offenders = Vec::new();
        let mut seen: BTreeMap<(u32, u32), ()> = BTreeMap::new();
        for (p, &e) in edges.iter().enumerate() {
            if seen.insert(e, ()).is_some() {
                offenders.push(p);
            }
        }
        if offenders.is_empty() {
            return Ok(());
        }
        for p in offenders {
            loop {
                if attempts == 0 {
                    return Err(GraphError::RewiringFailed);
                }
                attempts -= 1;
                let q = rng.gen_range(0..edges.len());
                if q == p {
                    continue;
                }
                let (ap, ip) = edges[p];
                let (aq, iq) = edges[q];
                let n1 = (ap, iq);
                let n2 = (aq, ip);
                if n1 == n2 {
                    continue;
                }
                *counts.get_mut(&(ap, ip)).unwrap() -= 1;
                *counts.get_mut(&(aq, iq)).unwrap() -= 1;
                let free = counts.get(&n1).copied().unwrap_or(0) == 0
                    && counts.get(&n2).copied().unwrap_or(0) == 0;
                if free {
                    *counts.entry(n1).or_insert(0) += 1;
                    *counts.entry(n2).or_insert(0) += 1;
                    edges[p] = n1;
                    edges[q] = n2;
                    break;
                }
                *counts.get_mut(&(ap, ip)).unwrap() += 1;
                *counts.get_mut(&(aq, iq)).unwrap() += 1;
            }
        }
    }
}
