//! Bit vectors, GF(2) reconstruction, Hamming distortion, and the binary
//! rate-distortion reference.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use rand::Rng;

use crate::graph::FactorGraph;
use crate::math;

/// Errors from codec operations.
#[derive(Debug, Clone, PartialEq)]
pub enum CodecError {
    /// Two bit vectors (or a vector and a graph side) disagree in length.
    LengthMismatch { expected: usize, got: usize },
    /// An argument fell outside the operation's domain.
    Domain { what: &'static str, value: f64 },
    /// The instance is too large for exhaustive enumeration.
    TooManyCodebits { limit: usize, got: usize },
}

impl fmt::Display for CodecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodecError::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            CodecError::Domain { what, value } => {
                write!(f, "{what} out of domain: {value}")
            }
            CodecError::TooManyCodebits { limit, got } => {
                write!(f, "exhaustive search limited to {limit} code bits, got {got}")
            }
        }
    }
}

impl core::error::Error for CodecError {}

/// A packed bit vector; backs sources, codewords, and reconstructions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        BitVector {
            words: vec![0u64; len.div_ceil(64)],
            len,
        }
    }

    /// Builds from a byte-per-bit slice; any nonzero byte reads as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    /// Uniform random bits (a Bernoulli(1/2) source sample).
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = BitVector::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.gen();
        }
        v.mask_tail();
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Hamming weight.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Hamming distance to `other` of the same length.
    pub fn hamming_distance(&self, other: &Self) -> Result<usize, CodecError> {
        if self.len != other.len {
            return Err(CodecError::LengthMismatch {
                expected: self.len,
                got: other.len,
            });
        }
        Ok(self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    /// In-place XOR with a vector of the same length.
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "xor_assign length mismatch");
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a ^= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Lexicographic order with bit 0 most significant, so
    /// `(0,0,1) < (0,1,0)`.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter().zip(other.words.iter()) {
            // Reversing the bits makes bit 0 the numeric MSB of the word.
            let ord = a.reverse_bits().cmp(&b.reverse_bits());
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }

    fn mask_tail(&mut self) {
        let extra = self.len % 64;
        if extra != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << extra) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 96 {
            write!(f, "BitVector(")?;
            for b in self.iter() {
                write!(f, "{}", if b { '1' } else { '0' })?;
            }
            write!(f, ")")
        } else {
            write!(f, "BitVector(len={}, weight={})", self.len, self.count_ones())
        }
    }
}

/// Relative Hamming distortion `|{a : s_a != s_hat_a}| / N`.
pub fn distortion(s: &BitVector, s_hat: &BitVector) -> Result<f64, CodecError> {
    if s.is_empty() {
        return Err(CodecError::Domain {
            what: "vector length",
            value: 0.0,
        });
    }
    let d = s.hamming_distance(s_hat)?;
    Ok(d as f64 / s.len() as f64)
}

/// Reconstruction `s_hat = G w` over GF(2): each generator bit is the XOR of
/// its code-bit neighbors. A generator with no neighbors reconstructs to 0.
pub fn reconstruct(graph: &FactorGraph, w: &BitVector) -> Result<BitVector, CodecError> {
    if w.len() != graph.n_codebits() {
        return Err(CodecError::LengthMismatch {
            expected: graph.n_codebits(),
            got: w.len(),
        });
    }
    let mut s_hat = BitVector::zeros(graph.n_generators());
    for a in 0..graph.n_generators() {
        let mut bit = false;
        for i in graph.generator_neighbors(a) {
            bit ^= w.get(i);
        }
        s_hat.set(a, bit);
    }
    Ok(s_hat)
}

/// Binary entropy in bits, with the 0 log 0 = 0 convention.
pub fn binary_entropy(d: f64) -> f64 {
    if d <= 0.0 || d >= 1.0 {
        return 0.0;
    }
    -d * math::log2(d) - (1.0 - d) * math::log2(1.0 - d)
}

/// Rate-distortion function of the Bernoulli(1/2) source:
/// `R(D) = 1 - h2(D)` for `D` in [0, 1/2].
pub fn shannon_rate(d: f64) -> Result<f64, CodecError> {
    if !(0.0..=0.5).contains(&d) {
        return Err(CodecError::Domain {
            what: "distortion",
            value: d,
        });
    }
    Ok(1.0 - binary_entropy(d))
}

/// Inverse of [`shannon_rate`]: the distortion floor `D*` with
/// `1 - h2(D*) = rate`, solved by bisection on [0, 1/2] to 1e-12.
pub fn rd_distortion(rate: f64) -> Result<f64, CodecError> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(CodecError::Domain {
            what: "rate",
            value: rate,
        });
    }
    let target = 1.0 - rate; // h2(D*) = target, h2 increasing on [0, 1/2]
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Exhaustive minimum of `d(s, G w)` over all `2^M` codewords.
///
/// Enumerates in Gray-code order, maintaining the reconstruction and the
/// mismatch count incrementally. Distortion ties resolve to the
/// lexicographically smallest codeword. Limited to `M <= 20`.
pub fn brute_force_optimal(
    graph: &FactorGraph,
    source: &BitVector,
) -> Result<(BitVector, f64), CodecError> {
    const LIMIT: usize = 20;
    let m = graph.n_codebits();
    let n = graph.n_generators();
    if m > LIMIT {
        return Err(CodecError::TooManyCodebits { limit: LIMIT, got: m });
    }
    if source.len() != n {
        return Err(CodecError::LengthMismatch {
            expected: n,
            got: source.len(),
        });
    }

    let mut w = BitVector::zeros(m);
    let mut s_hat = BitVector::zeros(n);
    let mut mismatch = source.count_ones();

    let mut best_w = w.clone();
    let mut best_mismatch = mismatch;

    for k in 1u64..(1u64 << m) {
        let i = k.trailing_zeros() as usize; // Gray code: flip bit i
        w.flip(i);
        for a in graph.codebit_neighbors(i) {
            // Toggling s_hat[a] moves it toward or away from source[a].
            if s_hat.get(a) == source.get(a) {
                mismatch += 1;
            } else {
                mismatch -= 1;
            }
            s_hat.flip(a);
        }
        if mismatch < best_mismatch
            || (mismatch == best_mismatch && w.lex_cmp(&best_w) == Ordering::Less)
        {
            best_mismatch = mismatch;
            best_w = w.clone();
        }
    }

    Ok((best_w, best_mismatch as f64 / n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn bitvector_basics() {
        let mut v = BitVector::zeros(70);
        assert_eq!(v.len(), 70);
        assert_eq!(v.count_ones(), 0);
        v.set(0, true);
        v.set(69, true);
        v.flip(69);
        assert!(v.get(0) && !v.get(69));
        assert_eq!(v.count_ones(), 1);
        let w = BitVector::from_bits(&[1, 0, 1]);
        assert_eq!(w.iter().collect::<Vec<_>>(), vec![true, false, true]);
    }

    #[test]
    fn lex_order_puts_bit_zero_first() {
        let a = BitVector::from_bits(&[0, 0, 1]);
        let b = BitVector::from_bits(&[0, 1, 0]);
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
        assert_eq!(b.lex_cmp(&a), Ordering::Greater);
        assert_eq!(a.lex_cmp(&a), Ordering::Equal);
    }

    #[test]
    fn distortion_examples() {
        let s = BitVector::from_bits(&[0, 1, 1, 0]);
        assert_eq!(distortion(&s, &s).unwrap(), 0.0);
        let complement = BitVector::from_bits(&[1, 0, 0, 1]);
        assert_eq!(distortion(&s, &complement).unwrap(), 1.0);
        let half = BitVector::from_bits(&[0, 0, 1, 1]);
        assert_eq!(distortion(&s, &half).unwrap(), 0.5);
        assert!(distortion(&s, &BitVector::zeros(3)).is_err());
    }

    #[test]
    fn reconstruct_identity_like_graph_permutes() {
        // Each generator has a single distinct neighbor: reconstruction
        // selects bits of w.
        let g = FactorGraph::from_edges(3, 3, vec![(0, 2), (1, 0), (2, 1)]).unwrap();
        let w = BitVector::from_bits(&[1, 0, 1]);
        let s_hat = reconstruct(&g, &w).unwrap();
        assert_eq!(s_hat, BitVector::from_bits(&[1, 1, 0]));
        // All-zero codeword reconstructs to all zeros.
        let zero = reconstruct(&g, &BitVector::zeros(3)).unwrap();
        assert_eq!(zero.count_ones(), 0);
        assert!(reconstruct(&g, &BitVector::zeros(2)).is_err());
    }

    #[test]
    fn reconstruct_matches_dense_matrix_oracle() {
        // 100 random cases against an independent dense boolean product.
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.gen_range(2..12);
            let m = rng.gen_range(1..8);
            let mut dense = vec![vec![false; m]; n];
            let mut edges = Vec::new();
            for (a, row) in dense.iter_mut().enumerate() {
                for (i, cell) in row.iter_mut().enumerate() {
                    if rng.gen_bool(0.4) {
                        *cell = true;
                        edges.push((a as u32, i as u32));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let g = FactorGraph::from_edges(n, m, edges).unwrap();
            let w = BitVector::random(m, &mut rng);
            let fast = reconstruct(&g, &w).unwrap();
            for (a, row) in dense.iter().enumerate() {
                let mut bit = false;
                for (i, &cell) in row.iter().enumerate() {
                    bit ^= cell && w.get(i);
                }
                assert_eq!(fast.get(a), bit);
            }
        }
    }

    #[test]
    fn shannon_rate_endpoints_and_floor() {
        assert_eq!(shannon_rate(0.0).unwrap(), 1.0);
        assert_relative_eq!(shannon_rate(0.5).unwrap(), 0.0, epsilon = 1e-12);
        assert!(shannon_rate(0.6).is_err());
        assert!(shannon_rate(-0.1).is_err());
        // The rate-1/2 distortion floor.
        let floor = rd_distortion(0.5).unwrap();
        assert_relative_eq!(floor, 0.11002786443835955, epsilon = 1e-9);
        assert_relative_eq!(binary_entropy(floor), 0.5, epsilon = 1e-10);
        assert!((floor - 0.1100).abs() < 3e-4);
        assert!(rd_distortion(0.0).is_err());
        assert!(rd_distortion(1.1).is_err());
        assert_relative_eq!(rd_distortion(1.0).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn shannon_rate_round_trip() {
        for k in 1..10 {
            let rate = k as f64 / 10.0;
            let d = rd_distortion(rate).unwrap();
            assert_relative_eq!(shannon_rate(d).unwrap(), rate, epsilon = 1e-10);
        }
    }

    #[test]
    fn brute_force_single_codebit() {
        // M = 1 and s equal to the column pattern: D* = 0 with w = (1).
        let g = FactorGraph::from_edges(3, 1, vec![(0, 0), (2, 0)]).unwrap();
        let s = BitVector::from_bits(&[1, 0, 1]);
        let (w, d) = brute_force_optimal(&g, &s).unwrap();
        assert_eq!(d, 0.0);
        assert!(w.get(0));
    }

    #[test]
    fn brute_force_matches_independent_enumeration() {
        // Second implementation: true lexicographic order (bit 0 as the
        // most significant counter bit), reconstruction recomputed from
        // scratch for every candidate.
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for case in 0..40 {
            let n = 4usize;
            let m = 8usize;
            let mut edges = Vec::new();
            for a in 0..n as u32 {
                for i in 0..m as u32 {
                    if rng.gen_bool(0.35) {
                        edges.push((a, i));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let g = FactorGraph::from_edges(n, m, edges).unwrap();
            let s = BitVector::random(n, &mut rng);

            let (fast_w, fast_d) = brute_force_optimal(&g, &s).unwrap();

            let mut best: Option<(BitVector, usize)> = None;
            for counter in 0u64..(1 << m) {
                let mut w = BitVector::zeros(m);
                for bit in 0..m {
                    // Bit 0 is the most significant digit of the counter.
                    if counter >> (m - 1 - bit) & 1 == 1 {
                        w.set(bit, true);
                    }
                }
                let s_hat = reconstruct(&g, &w).unwrap();
                let mism = s.hamming_distance(&s_hat).unwrap();
                if best.as_ref().map_or(true, |&(_, b)| mism < b) {
                    best = Some((w, mism));
                }
            }
            let (slow_w, slow_mism) = best.unwrap();
            assert_eq!(fast_d, slow_mism as f64 / n as f64, "case {case}");
            assert_eq!(fast_w, slow_w, "case {case}: tie-break must be lexicographic");
        }
    }

    #[test]
    fn brute_force_rejects_large_instances() {
        let edges = (0..21u32).map(|i| (0, i)).collect();
        let g = FactorGraph::from_edges(1, 21, edges).unwrap();
        assert!(matches!(
            brute_force_optimal(&g, &BitVector::zeros(1)),
            Err(CodecError::TooManyCodebits { .. })
        ));
    }
}
