//! Binary-input symmetric DMC models, the Pauli-to-classical reduction, the
//! Arikan splitting recursion, and degrading-merge alphabet quantization.
//!
//! A channel is stored as a list of *conjugate pair* entries `(w0, w1)` with
//! `w0 >= w1`: each entry stands for two output symbols `y` and `ȳ` with
//! `W(y|0) = W(ȳ|1) = w0` and `W(y|1) = W(ȳ|0) = w1`. Self-conjugate outputs
//! (e.g. a BEC erasure) are split into two half-mass symbols, which leaves
//! every channel metric unchanged. Entries are kept sorted by likelihood
//! ratio, which is the representation the degrading merge operates on.

use rayon::join;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normalization tolerance for Σ_y W(y|x) = 1.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Entries whose likelihood ratios differ by at most this are fused without
/// counting against the quantization budget (lossless up to rounding).
const LR_COALESCE_TOL: f64 = 1e-12;

/// Hard cap on the symbol alphabet a single split may produce.
const ALPHABET_HARD_CAP: usize = 1 << 25;

/// One conjugate pair of output symbols; canonical form has `w0 >= w1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LikelihoodPair {
    pub w0: f64,
    pub w1: f64,
}

impl LikelihoodPair {
    #[inline]
    fn ratio(&self) -> f64 {
        // In [0, 1]; canonical entries have w0 > 0.
        self.w1 / self.w0
    }

    /// Contribution of the two symbols of this pair to I(W) in bits.
    fn capacity_term(&self) -> f64 {
        let total = self.w0 + self.w1;
        if total <= 0.0 {
            return 0.0;
        }
        let part = |x: f64| {
            if x <= 0.0 {
                0.0
            } else {
                x * (2.0 * x / total).log2()
            }
        };
        part(self.w0) + part(self.w1)
    }
}

/// A binary-input symmetric discrete memoryless channel.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteChannel {
    pairs: Vec<LikelihoodPair>,
}

impl DiscreteChannel {
    /// Builds a channel from conjugate-pair entries `(W(y|0), W(y|1))`.
    /// Total mass over both symbols of every pair must be 1 within
    /// [`NORMALIZATION_TOL`].
    pub fn from_conjugate_pairs(entries: &[(f64, f64)]) -> Result<Self> {
        for &(w0, w1) in entries {
            if !w0.is_finite() || !w1.is_finite() || w0 < 0.0 || w1 < 0.0 {
                return Err(Error::invalid(format!(
                    "likelihoods must be finite and nonnegative, got ({w0}, {w1})"
                )));
            }
        }
        let mass: f64 = entries.iter().map(|&(a, b)| a + b).sum();
        if (mass - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::invalid(format!(
                "channel mass {mass} deviates from 1 by more than {NORMALIZATION_TOL}"
            )));
        }
        Ok(Self::canonicalize(
            entries
                .iter()
                .map(|&(w0, w1)| LikelihoodPair { w0, w1 })
                .collect(),
        ))
    }

    /// Canonical form: drop zero-mass entries, order each pair `w0 >= w1`,
    /// sort by likelihood ratio, fuse (near-)identical ratios, renormalize.
    fn canonicalize(mut pairs: Vec<LikelihoodPair>) -> Self {
        for p in &mut pairs {
            if p.w1 > p.w0 {
                std::mem::swap(&mut p.w0, &mut p.w1);
            }
        }
        pairs.retain(|p| p.w0 > 0.0);
        pairs.sort_unstable_by(|a, b| a.ratio().total_cmp(&b.ratio()));

        let mut fused: Vec<LikelihoodPair> = Vec::with_capacity(pairs.len());
        for p in pairs {
            match fused.last_mut() {
                Some(last) if (last.ratio() - p.ratio()).abs() <= LR_COALESCE_TOL => {
                    last.w0 += p.w0;
                    last.w1 += p.w1;
                }
                _ => fused.push(p),
            }
        }

        let mass: f64 = fused.iter().map(|p| p.w0 + p.w1).sum();
        if mass > 0.0 && (mass - 1.0).abs() > f64::EPSILON {
            for p in &mut fused {
                p.w0 /= mass;
                p.w1 /= mass;
            }
        }
        DiscreteChannel { pairs: fused }
    }

    /// Conjugate-pair entries, best (lowest-ratio) first.
    pub fn pairs(&self) -> &[LikelihoodPair] {
        &self.pairs
    }

    /// Number of output symbols (two per stored pair).
    pub fn num_outputs(&self) -> usize {
        2 * self.pairs.len()
    }

    /// Flat per-symbol view `(W(y|0), W(y|1))`, conjugates adjacent.
    pub fn output_symbols(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.num_outputs());
        for p in &self.pairs {
            out.push((p.w0, p.w1));
            out.push((p.w1, p.w0));
        }
        out
    }

    /// ML error probability under a uniform prior with fair tie-breaking:
    /// `P_e = ½ Σ_y min(W(y|0), W(y|1))`.
    pub fn error_probability(&self) -> f64 {
        self.pairs.iter().map(|p| p.w1).sum()
    }

    /// Bhattacharyya parameter `Z = Σ_y sqrt(W(y|0) W(y|1))`.
    pub fn bhattacharyya(&self) -> f64 {
        2.0 * self
            .pairs
            .iter()
            .map(|p| (p.w0 * p.w1).sqrt())
            .sum::<f64>()
    }

    /// Symmetric capacity in bits.
    pub fn capacity(&self) -> f64 {
        self.pairs.iter().map(|p| p.capacity_term()).sum()
    }

    /// The "check" child `W⁻(y₁y₂|u₁) = ½ Σ_{u₂} W(y₁|u₁⊕u₂) W(y₂|u₂)`.
    pub fn arikan_minus(&self) -> Result<DiscreteChannel> {
        let k = self.pairs.len();
        self.check_split_size(k * (k + 1))?;
        let mut out = Vec::with_capacity(k * (k + 1) / 2);
        for i in 0..k {
            let a = self.pairs[i];
            for j in i..k {
                let b = self.pairs[j];
                // The two symbol orderings and the conjugate flip of y1 all
                // collapse onto one entry; weight bookkeeping below keeps
                // total mass (a0+a1)(b0+b1) per unordered combination.
                let scale = if i == j { 1.0 } else { 2.0 };
                let x = scale * (a.w0 * b.w0 + a.w1 * b.w1);
                let y = scale * (a.w1 * b.w0 + a.w0 * b.w1);
                out.push(LikelihoodPair { w0: x, w1: y });
            }
        }
        Ok(Self::canonicalize(out))
    }

    /// The "bit" child `W⁺(y₁y₂u₁|u₂) = ½ W(y₁|u₁⊕u₂) W(y₂|u₂)`.
    pub fn arikan_plus(&self) -> Result<DiscreteChannel> {
        let k = self.pairs.len();
        self.check_split_size(4 * k * k)?;
        let mut out = Vec::with_capacity(2 * k * k);
        for a in &self.pairs {
            for b in &self.pairs {
                // u1 = 1 entries mirror u1 = 0 entries, so emit the u1 = 0
                // ones at double mass.
                out.push(LikelihoodPair {
                    w0: a.w0 * b.w0,
                    w1: a.w1 * b.w1,
                });
                out.push(LikelihoodPair {
                    w0: a.w0 * b.w1,
                    w1: a.w1 * b.w0,
                });
            }
        }
        Ok(Self::canonicalize(out))
    }

    fn check_split_size(&self, entries: usize) -> Result<()> {
        if 2 * entries > ALPHABET_HARD_CAP {
            return Err(Error::ResourceExhausted(format!(
                "channel split would produce {} output symbols (cap {}); merge first",
                2 * entries,
                ALPHABET_HARD_CAP
            )));
        }
        Ok(())
    }

    /// Tal-Vardy style degrading merge: repeatedly fuses the adjacent (in
    /// likelihood-ratio order) pair of entries whose fusion loses the least
    /// symmetric capacity, until at most `max_outputs` symbols remain. The
    /// result is stochastically degraded with respect to `self`, so `P_e`
    /// and `Z` can only grow.
    pub fn degrading_merge(&self, max_outputs: usize) -> Result<DiscreteChannel> {
        if max_outputs < 2 || !max_outputs.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "merge target must be an even number >= 2, got {max_outputs}"
            )));
        }
        let target_pairs = max_outputs / 2;
        if self.pairs.len() <= target_pairs {
            return Ok(self.clone());
        }

        let mut pairs = self.pairs.clone();
        let count = pairs.len();
        let mut alive = vec![true; count];
        // Version stamps invalidate heap entries whose endpoints have since
        // absorbed mass, so every popped loss is current.
        let mut version = vec![0u32; count];
        let mut next: Vec<usize> = (1..=count).collect();
        let mut prev: Vec<usize> = (0..count).map(|i| i.wrapping_sub(1)).collect();

        #[derive(PartialEq)]
        struct Candidate {
            loss: f64,
            left: usize,
            right: usize,
            left_version: u32,
            right_version: u32,
        }
        impl Eq for Candidate {}
        impl Ord for Candidate {
            fn cmp(&self, other: &Self) -> std::cmp::Ordering {
                // Min-heap via Reverse below; ties broken by position for
                // determinism.
                self.loss
                    .total_cmp(&other.loss)
                    .then(self.left.cmp(&other.left))
                    .then(self.right.cmp(&other.right))
                    .then(self.left_version.cmp(&other.left_version))
                    .then(self.right_version.cmp(&other.right_version))
            }
        }
        impl PartialOrd for Candidate {
            fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(other))
            }
        }

        let merge_loss = |a: &LikelihoodPair, b: &LikelihoodPair| {
            let merged = LikelihoodPair {
                w0: a.w0 + b.w0,
                w1: a.w1 + b.w1,
            };
            a.capacity_term() + b.capacity_term() - merged.capacity_term()
        };

        use std::cmp::Reverse;
        let mut heap = std::collections::BinaryHeap::with_capacity(count);
        for i in 0..count - 1 {
            heap.push(Reverse(Candidate {
                loss: merge_loss(&pairs[i], &pairs[i + 1]),
                left: i,
                right: i + 1,
                left_version: 0,
                right_version: 0,
            }));
        }

        let mut remaining = count;
        while remaining > target_pairs {
            let Reverse(c) = heap.pop().expect("adjacent candidates exhausted");
            if !alive[c.left]
                || !alive[c.right]
                || next[c.left] != c.right
                || version[c.left] != c.left_version
                || version[c.right] != c.right_version
            {
                continue; // stale entry
            }
            pairs[c.left].w0 += pairs[c.right].w0;
            pairs[c.left].w1 += pairs[c.right].w1;
            alive[c.right] = false;
            version[c.left] += 1;
            let after = next[c.right];
            next[c.left] = after;
            if after < count {
                prev[after] = c.left;
            }
            remaining -= 1;

            let p = prev[c.left];
            if c.left > 0 && p != usize::MAX && alive[p] {
                heap.push(Reverse(Candidate {
                    loss: merge_loss(&pairs[p], &pairs[c.left]),
                    left: p,
                    right: c.left,
                    left_version: version[p],
                    right_version: version[c.left],
                }));
            }
            if after < count && alive[after] {
                heap.push(Reverse(Candidate {
                    loss: merge_loss(&pairs[c.left], &pairs[after]),
                    left: c.left,
                    right: after,
                    left_version: version[c.left],
                    right_version: version[after],
                }));
            }
        }

        let kept: Vec<LikelihoodPair> = (0..count).filter(|&i| alive[i]).map(|i| pairs[i]).collect();
        Ok(Self::canonicalize(kept))
    }

    /// `P(E_i)` (and `Z`) upper-bound estimates for all `2^n` virtual
    /// channels, splitting recursively with a degrading merge to
    /// `max_outputs` after every split.
    ///
    /// Index convention matches the natural-order transform: the most
    /// significant bit of `i` selects the first split applied to the base
    /// channel, with 0 = minus and 1 = plus.
    pub fn virtual_channel_params(&self, n: usize, max_outputs: usize) -> Result<ChannelParams> {
        if n == 0 || n > 30 {
            return Err(Error::invalid(format!("unsupported transform order n={n}")));
        }
        // An over-generous merge target can blow past the split cap.
        if 4 * (max_outputs / 2) * (max_outputs / 2) * 2 > ALPHABET_HARD_CAP {
            return Err(Error::ResourceExhausted(format!(
                "quantization size {max_outputs} would exceed the split alphabet cap"
            )));
        }
        let metrics = split_tree(self, n, max_outputs)?;
        let mut p_err = Vec::with_capacity(metrics.len());
        let mut z = Vec::with_capacity(metrics.len());
        for (p, b) in metrics {
            p_err.push(p.clamp(0.0, 0.5));
            z.push(b.clamp(0.0, 1.0));
        }
        Ok(ChannelParams {
            p_err,
            bhattacharyya: Some(z),
            mu: Some(max_outputs),
            source: format!("{}-output channel", self.num_outputs()),
            alpha: None,
        })
    }
}

fn split_tree(
    w: &DiscreteChannel,
    depth: usize,
    max_outputs: usize,
) -> Result<Vec<(f64, f64)>> {
    if depth == 0 {
        return Ok(vec![(w.error_probability(), w.bhattacharyya())]);
    }
    let (lo, hi) = join(
        || -> Result<Vec<(f64, f64)>> {
            let child = w.arikan_minus()?.degrading_merge(max_outputs)?;
            split_tree(&child, depth - 1, max_outputs)
        },
        || -> Result<Vec<(f64, f64)>> {
            let child = w.arikan_plus()?.degrading_merge(max_outputs)?;
            split_tree(&child, depth - 1, max_outputs)
        },
    );
    let mut lo = lo?;
    lo.extend(hi?);
    Ok(lo)
}

/// Per-index channel-quality figures for one synthesized family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// SC bit error probability bound per index, in `[0, 1/2]`.
    pub p_err: Vec<f64>,
    /// Bhattacharyya parameters per index when computed, in `[0, 1]`.
    pub bhattacharyya: Option<Vec<f64>>,
    /// Quantization size used; `None` for exact recursions.
    pub mu: Option<usize>,
    /// Human-readable description of the base channel.
    pub source: String,
    /// Interpolation scale the base channel was built with, if any.
    pub alpha: Option<f64>,
}

impl ChannelParams {
    pub fn len(&self) -> usize {
        self.p_err.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_err.is_empty()
    }
}

/// BSC(p) as a single conjugate pair `{(1-p, p)}`.
pub fn make_bsc(p: f64) -> Result<DiscreteChannel> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::invalid(format!(
            "BSC crossover must lie in [0, 1/2], got {p}"
        )));
    }
    DiscreteChannel::from_conjugate_pairs(&[(1.0 - p, p)])
}

/// BEC(e): a revealing pair and a half-mass erasure pair.
pub fn make_bec(e: f64) -> Result<DiscreteChannel> {
    if !(0.0..=1.0).contains(&e) {
        return Err(Error::invalid(format!(
            "erasure probability must lie in [0, 1], got {e}"
        )));
    }
    DiscreteChannel::from_conjugate_pairs(&[(1.0 - e, 0.0), (e / 2.0, e / 2.0)])
}

/// A Pauli channel `(p_X, p_Y, p_Z)`; `q` is set for the independent equal-XZ
/// model `p_X = p_Z = q - q²`, `p_Y = q²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliNoise {
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
    pub q: Option<f64>,
}

impl PauliNoise {
    pub fn new(p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        if !(p_x >= 0.0 && p_y >= 0.0 && p_z >= 0.0) {
            return Err(Error::invalid("Pauli probabilities must be nonnegative"));
        }
        if p_x + p_y + p_z > 1.0 + 1e-15 {
            return Err(Error::invalid(format!(
                "Pauli probabilities sum to {} > 1",
                p_x + p_y + p_z
            )));
        }
        Ok(PauliNoise {
            p_x,
            p_y,
            p_z,
            q: None,
        })
    }

    /// Independent equal-XZ noise with parameter `q`.
    pub fn equal_xz(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::invalid(format!("q must lie in [0, 1], got {q}")));
        }
        let mut noise = PauliNoise::new(q - q * q, q * q, q - q * q)?;
        noise.q = Some(q);
        Ok(noise)
    }

    pub fn p_identity(&self) -> f64 {
        (1.0 - self.p_x - self.p_y - self.p_z).max(0.0)
    }
}

/// Scaled bit-flip channel `BSC(α (p_X + p_Y))`.
pub fn induced_bitflip(noise: &PauliNoise, alpha: f64) -> Result<DiscreteChannel> {
    check_alpha(alpha)?;
    make_bsc(alpha * (noise.p_x + noise.p_y))
}

/// Scaled phase-flip channel: a flagged mixture of two BSCs, where the flag
/// reports whether an X-type error occurred.
pub fn induced_phaseflip(noise: &PauliNoise, alpha: f64) -> Result<DiscreteChannel> {
    check_alpha(alpha)?;
    let m1 = noise.p_x + noise.p_y;
    let m0 = noise.p_identity() + noise.p_z;
    let mut entries = Vec::new();
    for (mass, numerator) in [(m1, noise.p_y), (m0, noise.p_z)] {
        if mass <= 0.0 {
            continue; // degenerate branch: emit the surviving one only
        }
        let crossover = alpha * numerator / mass;
        if crossover > 0.5 + 1e-15 {
            return Err(Error::invalid(format!(
                "flagged branch crossover {crossover} exceeds 1/2"
            )));
        }
        entries.push((mass * (1.0 - crossover), mass * crossover));
    }
    DiscreteChannel::from_conjugate_pairs(&entries)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!(
            "interpolation scale must lie in [0, 1], got {alpha}"
        )));
    }
    Ok(())
}

/// Exact Bhattacharyya recursion for BEC inputs: `Z⁻ = 2Z - Z²`, `Z⁺ = Z²`,
/// expanded in the same index order as [`DiscreteChannel::virtual_channel_params`].
/// For a BEC every virtual channel is again a BEC, so `p_err = Z/2` exactly.
pub fn bec_bhattacharyya_exact(e: f64, n: usize) -> Result<ChannelParams> {
    if !(0.0..=1.0).contains(&e) {
        return Err(Error::invalid(format!(
            "erasure probability must lie in [0, 1], got {e}"
        )));
    }
    if n == 0 || n > 30 {
        return Err(Error::invalid(format!("unsupported transform order n={n}")));
    }
    let mut z = vec![e];
    for _ in 0..n {
        let mut next = Vec::with_capacity(2 * z.len());
        for &zi in &z {
            next.push(2.0 * zi - zi * zi);
            next.push(zi * zi);
        }
        z = next;
    }
    Ok(ChannelParams {
        p_err: z.iter().map(|zi| zi / 2.0).collect(),
        bhattacharyya: Some(z),
        mu: None,
        source: format!("bec({e})"),
        alpha: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn bsc_metrics() {
        let w = make_bsc(0.1).unwrap();
        assert!((w.error_probability() - 0.1).abs() < TOL);
        assert!((w.bhattacharyya() - 2.0 * (0.1f64 * 0.9).sqrt()).abs() < TOL);
        assert!((w.bhattacharyya() - 0.6).abs() < TOL);
        let noiseless = make_bsc(0.0).unwrap();
        assert_eq!(noiseless.error_probability(), 0.0);
        assert_eq!(noiseless.bhattacharyya(), 0.0);
    }

    #[test]
    fn bsc_rejects_out_of_range() {
        assert!(make_bsc(0.6).is_err());
        assert!(make_bsc(-0.01).is_err());
    }

    #[test]
    fn bec_metrics() {
        for e in [0.0, 0.3, 0.5, 1.0] {
            let w = make_bec(e).unwrap();
            assert!((w.bhattacharyya() - e).abs() < TOL, "e={e}");
            assert!((w.error_probability() - e / 2.0).abs() < TOL, "e={e}");
        }
        assert!((make_bec(0.5).unwrap().error_probability() - 0.25).abs() < TOL);
        assert!(make_bec(1.5).is_err());
    }

    #[test]
    fn channel_mass_validated() {
        assert!(DiscreteChannel::from_conjugate_pairs(&[(0.5, 0.3)]).is_err());
        assert!(DiscreteChannel::from_conjugate_pairs(&[(0.7, -0.1), (0.2, 0.2)]).is_err());
    }

    #[test]
    fn equal_xz_bitflip_is_bsc_q() {
        // p_X + p_Y = (q - q²) + q² = q.
        let noise = PauliNoise::equal_xz(0.06).unwrap();
        let w = induced_bitflip(&noise, 1.0).unwrap();
        assert!((w.error_probability() - 0.06).abs() < TOL);
        let w = induced_bitflip(&noise, 0.41).unwrap();
        assert!((w.error_probability() - 0.0246).abs() < TOL);
        let w = induced_bitflip(&noise, 0.0).unwrap();
        assert_eq!(w.error_probability(), 0.0);
    }

    #[test]
    fn equal_xz_phaseflip_equivalent_to_bsc() {
        for q in [0.06, 0.1, 0.3] {
            let noise = PauliNoise::equal_xz(q).unwrap();
            let flagged = induced_phaseflip(&noise, 1.0).unwrap();
            let bsc = make_bsc(q).unwrap();
            assert!((flagged.error_probability() - bsc.error_probability()).abs() < TOL);
            assert!((flagged.bhattacharyya() - bsc.bhattacharyya()).abs() < TOL);
        }
    }

    #[test]
    fn phaseflip_degenerate_branch() {
        // No X-type component: single always-unflagged branch.
        let noise = PauliNoise::new(0.0, 0.0, 0.2).unwrap();
        let w = induced_phaseflip(&noise, 1.0).unwrap();
        assert_eq!(w.num_outputs(), 2);
        assert!((w.error_probability() - 0.2).abs() < TOL);
    }

    #[test]
    fn bec_split_children() {
        let e = 0.3;
        let w = make_bec(e).unwrap();
        let minus = w.arikan_minus().unwrap();
        let plus = w.arikan_plus().unwrap();
        assert!((minus.bhattacharyya() - (2.0 * e - e * e)).abs() < 1e-12);
        assert!((plus.bhattacharyya() - e * e).abs() < 1e-12);
        // BEC children are again BECs, so coalescing keeps them at 4 symbols.
        assert!(minus.num_outputs() <= 4);
        assert!(plus.num_outputs() <= 4);
    }

    #[test]
    fn bsc_split_children() {
        let w = make_bsc(0.1).unwrap();
        let minus = w.arikan_minus().unwrap();
        let plus = w.arikan_plus().unwrap();
        assert!(plus.error_probability() <= 0.1 + TOL);
        assert!(minus.error_probability() >= 0.1 - TOL);
        let z = w.bhattacharyya();
        assert!((plus.bhattacharyya() - z * z).abs() < 1e-12);
        assert!(minus.bhattacharyya() <= 2.0 * z - z * z + 1e-12);
        // Conservation.
        assert!(minus.bhattacharyya() + plus.bhattacharyya() <= 2.0 * z + 1e-12);

        let zero = make_bsc(0.0).unwrap();
        assert_eq!(zero.arikan_minus().unwrap().error_probability(), 0.0);
        assert_eq!(zero.arikan_plus().unwrap().error_probability(), 0.0);
    }

    #[test]
    fn merge_noop_when_small() {
        let w = make_bsc(0.1).unwrap();
        let merged = w.degrading_merge(2).unwrap();
        assert_eq!(merged, w);
        assert!(w.degrading_merge(3).is_err());
        assert!(w.degrading_merge(0).is_err());
    }

    #[test]
    fn merge_degrades() {
        let w = make_bsc(0.11).unwrap();
        let child = w.arikan_minus().unwrap().arikan_minus().unwrap();
        let merged = child.degrading_merge(4).unwrap();
        assert!(merged.num_outputs() <= 4);
        assert!(merged.error_probability() >= child.error_probability() - 1e-15);
        assert!(merged.bhattacharyya() >= child.bhattacharyya() - 1e-15);
        assert!(merged.capacity() <= child.capacity() + 1e-15);
    }

    #[test]
    fn bec_pipeline_matches_exact_recursion() {
        // BEC virtual channels stay BECs, so a merge with any headroom is
        // lossless and the generic pipeline must agree with the recursion.
        let e = 0.3;
        let n = 3;
        let params = make_bec(e)
            .unwrap()
            .virtual_channel_params(n, 8)
            .unwrap();
        let exact = bec_bhattacharyya_exact(e, n).unwrap();
        for i in 0..(1 << n) {
            assert!(
                (params.p_err[i] - exact.p_err[i]).abs() < 1e-9,
                "index {i}: {} vs {}",
                params.p_err[i],
                exact.p_err[i]
            );
        }
    }

    #[test]
    fn bec_exact_recursion_small_cases() {
        let p = bec_bhattacharyya_exact(0.0, 3).unwrap();
        assert!(p.bhattacharyya.unwrap().iter().all(|&z| z == 0.0));
        let p = bec_bhattacharyya_exact(1.0, 3).unwrap();
        assert!(p.bhattacharyya.unwrap().iter().all(|&z| z == 1.0));

        // n=1, e=0.5: children are BEC(0.75) and BEC(0.25), P_e = Z/2.
        let p = bec_bhattacharyya_exact(0.5, 1).unwrap();
        assert_eq!(p.p_err, vec![0.375, 0.125]);

        // n=2, e=0.5 in natural index order: splits applied MSB-first.
        let p = bec_bhattacharyya_exact(0.5, 2).unwrap();
        let z = p.bhattacharyya.unwrap();
        assert_eq!(z, vec![0.9375, 0.5625, 0.4375, 0.0625]);
    }

    #[test]
    fn bhattacharyya_bounds_error_probability() {
        for p in [0.0, 0.05, 0.2, 0.5] {
            let w = make_bsc(p).unwrap();
            assert!(w.error_probability() <= 0.5 * w.bhattacharyya() + TOL);
        }
        let w = make_bec(0.4).unwrap().arikan_minus().unwrap();
        assert!(w.error_probability() <= 0.5 * w.bhattacharyya() + TOL);
    }

    #[test]
    fn split_and_params_respect_resource_caps() {
        // A wide channel whose square would blow past the alphabet cap.
        let count = 3000usize;
        let mass = 1.0 / count as f64;
        let entries: Vec<(f64, f64)> = (0..count)
            .map(|i| {
                let ratio = i as f64 / count as f64;
                (mass / (1.0 + ratio), mass * ratio / (1.0 + ratio))
            })
            .collect();
        let wide = DiscreteChannel::from_conjugate_pairs(&entries).unwrap();
        assert!(matches!(
            wide.arikan_plus(),
            Err(crate::error::Error::ResourceExhausted(_))
        ));
        // An absurd quantization target is rejected up front.
        assert!(matches!(
            make_bsc(0.1).unwrap().virtual_channel_params(4, 1 << 14),
            Err(crate::error::Error::ResourceExhausted(_))
        ));
    }

    #[test]
    fn pauli_noise_validation() {
        assert!(PauliNoise::new(0.5, 0.4, 0.3).is_err());
        assert!(PauliNoise::equal_xz(1.2).is_err());
        let n = PauliNoise::equal_xz(0.06).unwrap();
        assert!((n.p_x - (0.06 - 0.0036)).abs() < TOL);
        assert!((n.p_y - 0.0036).abs() < TOL);
    }
}
