//! Construction of interpolated quantum polar / quantum Reed-Muller CSS code
//! specifications, validity checking, stabilizer extraction, and structural
//! metrics.
//!
//! A code is fixed by two classical dimensions `k1, k2` and a per-index
//! channel-quality ranking. The worst `N - k1` indices form the Z-frozen set;
//! the phase-side ranking is the bit-side ranking reversed (`i <-> N-1-i`),
//! and its worst `N - k2` indices form the X-frozen set. The code is a valid
//! CSS code (commuting stabilizers, no entanglement assistance) exactly when
//! the two frozen sets are disjoint.

use serde::{Deserialize, Serialize};

use crate::channel::{induced_bitflip, ChannelParams, PauliNoise};
use crate::error::{Error, Result};
use crate::polar::{column_of_g, row_of_g, BitVector};

/// How the per-index channel quality is ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstructionMethod {
    /// Rank by `P(E_i)` of the virtual channels of `BSC(αq)`.
    #[serde(rename = "polar")]
    PolarInterpolated,
    /// Rank by row weight with the index tie-breaker (channel-independent).
    #[serde(rename = "rm")]
    ReedMuller,
}

impl std::fmt::Display for ConstructionMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstructionMethod::PolarInterpolated => write!(f, "polar"),
            ConstructionMethod::ReedMuller => write!(f, "rm"),
        }
    }
}

/// A constructed CSS code specification.
///
/// Serializes to the interchange JSON used by the `construct`, `simulate`
/// and `analyze` commands.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeSpec {
    pub n: usize,
    #[serde(rename = "N")]
    pub block_length: usize,
    pub k1: usize,
    pub k2: usize,
    pub alpha: f64,
    pub q: f64,
    pub method: ConstructionMethod,
    pub mu: usize,
    /// Z-basis frozen indices, sorted ascending; size `N - k1`.
    pub frozen_z: Vec<usize>,
    /// X-basis frozen indices, sorted ascending; size `N - k2`.
    pub frozen_x: Vec<usize>,
    /// Information indices: complement of the union, sorted ascending.
    pub information: Vec<usize>,
    /// True iff `frozen_z` and `frozen_x` are disjoint.
    pub valid: bool,
    pub mixing_factor: usize,
    /// Ranking figures the frozen sets were derived from (not serialized).
    #[serde(skip)]
    pub bitflip_params: Option<ChannelParams>,
}

impl CodeSpec {
    /// Quantum dimension `k = k1 + k2 - N`.
    pub fn quantum_dimension(&self) -> usize {
        self.k1 + self.k2 - self.block_length
    }

    /// Information set of the classical bit-flip code: complement of the
    /// Z-frozen set, size `k1`. This is the code whose monomial structure
    /// the automorphism analysis inspects.
    pub fn classical_information_z(&self) -> Vec<usize> {
        complement(&self.frozen_z, self.block_length)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: CodeSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Structural consistency of a (possibly externally produced) spec.
    pub fn validate(&self) -> Result<()> {
        let nn = self.block_length;
        if nn != 1usize << self.n {
            return Err(Error::invalid("block length is not 2^n"));
        }
        if self.k1 > nn || self.k2 > nn || self.k1 + self.k2 <= nn {
            return Err(Error::invalid("classical dimensions out of range"));
        }
        if self.frozen_z.len() != nn - self.k1 || self.frozen_x.len() != nn - self.k2 {
            return Err(Error::invalid("frozen set sizes do not match dimensions"));
        }
        for set in [&self.frozen_z, &self.frozen_x, &self.information] {
            if set.windows(2).any(|w| w[0] >= w[1]) || set.iter().any(|&i| i >= nn) {
                return Err(Error::invalid("index sets must be sorted, unique, in range"));
            }
        }
        let disjoint = intersection_size(&self.frozen_z, &self.frozen_x) == 0;
        if disjoint != self.valid {
            return Err(Error::invalid("validity flag inconsistent with frozen sets"));
        }
        let mut union: Vec<usize> = self
            .frozen_z
            .iter()
            .chain(&self.frozen_x)
            .copied()
            .collect();
        union.sort_unstable();
        union.dedup();
        if complement(&union, nn) != self.information {
            return Err(Error::invalid(
                "information set is not the complement of the frozen union",
            ));
        }
        if self.mixing_factor != mixing_factor_of(&self.frozen_z) {
            return Err(Error::invalid(
                "mixing factor inconsistent with the Z-frozen set",
            ));
        }
        Ok(())
    }
}

/// Reed-Muller per-index scores `popcount(i) + i/N`; higher is better, all
/// distinct (the fractional part breaks ties inside a weight class).
pub fn rm_channel_scores(n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > 30 {
        return Err(Error::invalid(format!("unsupported transform order n={n}")));
    }
    let nn = 1usize << n;
    Ok((0..nn)
        .map(|i| i.count_ones() as f64 + i as f64 / nn as f64)
        .collect())
}

/// Builds the two frozen sets from per-index quality scores (higher =
/// better). The phase-side score of index `i` is `scores[N-1-i]`. Ties
/// freeze the smaller index first. Returns `(frozen_z, frozen_x)`, sorted.
pub fn build_frozen_sets(scores: &[f64], k1: usize, k2: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let nn = scores.len();
    if k1 > nn || k2 > nn {
        return Err(Error::invalid(format!(
            "dimensions (k1={k1}, k2={k2}) exceed blocklength {nn}"
        )));
    }
    let worst = |score_of: &dyn Fn(usize) -> f64, count: usize| -> Vec<usize> {
        let mut order: Vec<usize> = (0..nn).collect();
        order.sort_by(|&a, &b| score_of(a).total_cmp(&score_of(b)).then(a.cmp(&b)));
        let mut frozen: Vec<usize> = order[..count].to_vec();
        frozen.sort_unstable();
        frozen
    };
    let frozen_z = worst(&|i| scores[i], nn - k1);
    let frozen_x = worst(&|i| scores[nn - 1 - i], nn - k2);
    Ok((frozen_z, frozen_x))
}

/// Builds a code specification.
///
/// The polar-interpolated method ranks indices by the `P(E_i)` estimates of
/// the virtual channels of `BSC(αq)` (the equal-XZ model makes both induced
/// channels that same BSC). `α = 0` (or `αq = 0`) polarizes degenerately and
/// is mapped to the Reed-Muller ranking, matching the interpolation limit.
pub fn build_code(
    n: usize,
    k1: usize,
    k2: usize,
    q: f64,
    alpha: f64,
    method: ConstructionMethod,
    mu: usize,
) -> Result<CodeSpec> {
    if n == 0 || n > 30 {
        return Err(Error::invalid(format!("unsupported transform order n={n}")));
    }
    let nn = 1usize << n;
    if k1 > nn || k2 > nn {
        return Err(Error::invalid(format!(
            "dimensions (k1={k1}, k2={k2}) exceed blocklength {nn}"
        )));
    }
    if k1 + k2 <= nn {
        return Err(Error::invalid(format!(
            "quantum dimension k1+k2-N = {} must be positive",
            k1 as isize + k2 as isize - nn as isize
        )));
    }

    let effective_method = match method {
        ConstructionMethod::PolarInterpolated => {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::invalid(format!("alpha must lie in [0,1], got {alpha}")));
            }
            if !(0.0..=0.5).contains(&q) {
                return Err(Error::invalid(format!("q must lie in [0, 1/2], got {q}")));
            }
            if alpha * q > 0.5 {
                return Err(Error::invalid(format!("αq = {} exceeds 1/2", alpha * q)));
            }
            if alpha * q == 0.0 {
                ConstructionMethod::ReedMuller
            } else {
                ConstructionMethod::PolarInterpolated
            }
        }
        ConstructionMethod::ReedMuller => ConstructionMethod::ReedMuller,
    };

    let (scores, params) = match effective_method {
        ConstructionMethod::PolarInterpolated => {
            let noise = PauliNoise::equal_xz(q)?;
            let base = induced_bitflip(&noise, alpha)?;
            let mut params = base.virtual_channel_params(n, mu)?;
            params.alpha = Some(alpha);
            params.source = format!("bsc({})", alpha * q);
            let scores: Vec<f64> = params.p_err.iter().map(|&p| -p).collect();
            (scores, Some(params))
        }
        ConstructionMethod::ReedMuller => (rm_channel_scores(n)?, None),
    };

    let (frozen_z, frozen_x) = build_frozen_sets(&scores, k1, k2)?;
    let valid = intersection_size(&frozen_z, &frozen_x) == 0;
    let mut union: Vec<usize> = frozen_z.iter().chain(&frozen_x).copied().collect();
    union.sort_unstable();
    union.dedup();
    let information = complement(&union, nn);
    let mixing_factor = mixing_factor_of(&frozen_z);

    Ok(CodeSpec {
        n,
        block_length: nn,
        k1,
        k2,
        // The Reed-Muller ranking is the α -> 0 limit of the family.
        alpha: match effective_method {
            ConstructionMethod::ReedMuller => 0.0,
            ConstructionMethod::PolarInterpolated => alpha,
        },
        q,
        method: effective_method,
        mu,
        frozen_z,
        frozen_x,
        information,
        valid,
        mixing_factor,
        bitflip_params: params,
    })
}

/// A CSS code is valid iff no index is frozen in both bases.
pub fn is_valid_css(spec: &CodeSpec) -> bool {
    intersection_size(&spec.frozen_z, &spec.frozen_x) == 0
}

/// Supports of the stabilizer generators of a valid spec.
#[derive(Debug, Clone)]
pub struct StabilizerSet {
    /// Z-type generators: columns of `G` indexed by the Z-frozen set.
    pub z_type: Vec<BitVector>,
    /// X-type generators: rows of `G` indexed by the X-frozen set.
    pub x_type: Vec<BitVector>,
}

pub fn stabilizers(spec: &CodeSpec) -> Result<StabilizerSet> {
    if !is_valid_css(spec) {
        return Err(Error::precondition(
            "stabilizer extraction requires disjoint frozen sets",
        ));
    }
    let z_type = spec
        .frozen_z
        .iter()
        .map(|&a| column_of_g(a, spec.n))
        .collect::<Result<Vec<_>>>()?;
    let x_type = spec
        .frozen_x
        .iter()
        .map(|&b| row_of_g(b, spec.n))
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilizerSet { z_type, x_type })
}

/// Number of non-frozen indices strictly below the largest Z-frozen index.
pub fn mixing_factor(spec: &CodeSpec) -> usize {
    mixing_factor_of(&spec.frozen_z)
}

fn mixing_factor_of(frozen_z: &[usize]) -> usize {
    match frozen_z.last() {
        None => 0,
        // All indices below the top frozen one, minus the other frozen ones.
        Some(&max) => max + 1 - frozen_z.len(),
    }
}

/// Overlap fractions of `spec_alpha`'s Z-frozen set with a polar reference
/// (`α = 1`) and a Reed-Muller reference: `(f_polar, f_rm)`.
pub fn interpolation_fractions(
    spec_alpha: &CodeSpec,
    spec_polar: &CodeSpec,
    spec_rm: &CodeSpec,
) -> Result<(f64, f64)> {
    for other in [spec_polar, spec_rm] {
        if other.block_length != spec_alpha.block_length || other.k1 != spec_alpha.k1 {
            return Err(Error::invalid(
                "interpolation fractions require matching N and k1",
            ));
        }
    }
    let f = |reference: &CodeSpec| {
        intersection_size(&spec_alpha.frozen_z, &reference.frozen_z) as f64
            / reference.frozen_z.len() as f64
    };
    Ok((f(spec_polar), f(spec_rm)))
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let mut count = 0;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

fn complement(sorted: &[usize], nn: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(nn - sorted.len());
    let mut it = sorted.iter().peekable();
    for i in 0..nn {
        if it.peek() == Some(&&i) {
            it.next();
        } else {
            out.push(i);
        }
    }
    out
}
