//! Monomial-code view of the constructed codes: decreasing-monomial
//! verification, block-profile detection by transposition invariance, and
//! exact block-lower-triangular affine (BLTA) group sizes.
//!
//! Index `i` corresponds to the monomial on the zero bits of `i`, so
//! high-index rows are low-degree monomials and the monomial degree `|S|`
//! satisfies `row_weight(i) = 2^(n - |S|)`.

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Monomial on variables `{0..n-1}`, encoded as a bitmask of its variables.
pub type Monomial = u32;

/// Monomial of index `i`: the zero-bit positions of `i`.
pub fn index_to_monomial(i: usize, n: usize) -> Result<Monomial> {
    if n == 0 || n > 30 {
        return Err(Error::invalid(format!("unsupported variable count n={n}")));
    }
    if i >= (1usize << n) {
        return Err(Error::invalid(format!(
            "index {i} out of range for blocklength 2^{n}"
        )));
    }
    Ok((!(i as u32)) & ((1u32 << n) - 1))
}

/// The generating monomial set of a monomial code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialSet {
    n: usize,
    /// Membership bitmap indexed by monomial mask.
    members: Vec<bool>,
    count: usize,
}

impl MonomialSet {
    /// Builds the set from the information indices of a code of blocklength
    /// `2^n` (one monomial per index).
    pub fn from_information_indices(indices: &[usize], n: usize) -> Result<Self> {
        if n == 0 || n > 24 {
            return Err(Error::invalid(format!("unsupported variable count n={n}")));
        }
        let mut members = vec![false; 1usize << n];
        let mut count = 0;
        for &i in indices {
            let m = index_to_monomial(i, n)? as usize;
            if members[m] {
                return Err(Error::invalid(format!("duplicate index {i}")));
            }
            members[m] = true;
            count += 1;
        }
        Ok(MonomialSet { n, members, count })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn contains(&self, m: Monomial) -> bool {
        self.members[m as usize]
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(m, _)| m as Monomial)
    }
}

/// Checks closure under (a) divisibility: dropping any variable stays in
/// the set, and (b) same-degree domination: replacing a variable with any
/// smaller-indexed absent one stays in the set. These elementary moves
/// generate the full decreasing partial order.
pub fn is_decreasing_monomial(set: &MonomialSet) -> bool {
    for m in set.monomials() {
        for v in 0..set.n as u32 {
            if m & (1 << v) == 0 {
                continue;
            }
            let without = m & !(1 << v);
            if !set.contains(without) {
                return false;
            }
            for lower in 0..v {
                if m & (1 << lower) == 0 && !set.contains(without | (1 << lower)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Ordered block sizes of consecutive variables, summing to `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockProfile {
    parts: Vec<usize>,
}

impl BlockProfile {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|&p| p == 0) {
            return Err(Error::invalid("profile parts must be positive"));
        }
        Ok(BlockProfile { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn variable_count(&self) -> usize {
        self.parts.iter().sum()
    }
}

impl std::fmt::Display for BlockProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if !first {
                write!(f, "-")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

/// Does swapping variables `a` and `b` map the set onto itself?
fn transposition_preserves(set: &MonomialSet, a: u32, b: u32) -> bool {
    set.monomials().all(|m| {
        let bit_a = (m >> a) & 1;
        let bit_b = (m >> b) & 1;
        if bit_a == bit_b {
            true
        } else {
            let swapped = m ^ (1 << a) ^ (1 << b);
            set.contains(swapped)
        }
    })
}

/// Coarsest partition of the variables into consecutive blocks whose internal
/// transpositions all preserve the set. Adjacent transpositions generate the
/// symmetric group of a run, so runs of preserving adjacent swaps are exactly
/// the blocks; the full pairwise condition is asserted on top.
pub fn block_profile(set: &MonomialSet) -> Result<BlockProfile> {
    if !is_decreasing_monomial(set) {
        return Err(Error::precondition(
            "block profile is defined for decreasing monomial sets only",
        ));
    }
    let n = set.n as u32;
    let mut parts = Vec::new();
    let mut block_start = 0u32;
    for v in 1..=n {
        let extend = v < n && transposition_preserves(set, v - 1, v);
        if !extend {
            parts.push((v - block_start) as usize);
            block_start = v;
        }
    }
    debug_assert!({
        let mut start = 0usize;
        parts.iter().all(|&len| {
            let ok = (start..start + len).all(|a| {
                (a + 1..start + len).all(|b| transposition_preserves(set, a as u32, b as u32))
            });
            start += len;
            ok
        })
    });
    BlockProfile::new(parts)
}

/// `|GL(s, 2)| = Π_{j<s} (2^s - 2^j)`.
fn gl2_order(s: usize) -> BigUint {
    let two_s = BigUint::from(1u8) << s;
    let mut order = BigUint::from(1u8);
    for j in 0..s {
        order *= &two_s - (BigUint::from(1u8) << j);
    }
    order
}

/// Exact order of the block lower-triangular affine group:
/// `|BLTA(s)| = 2^n · Π_i |GL(s_i, 2)| · 2^((n² - Σ s_i²)/2)`.
pub fn blta_size(profile: &BlockProfile) -> BigUint {
    let n = profile.variable_count();
    let sum_sq: usize = profile.parts().iter().map(|&s| s * s).sum();
    let mut size = BigUint::from(1u8) << n;
    for &s in profile.parts() {
        size *= gl2_order(s);
    }
    size << ((n * n - sum_sq) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rm_set(n: usize, max_degree: usize) -> MonomialSet {
        // All indices whose monomials have degree <= max_degree.
        let indices: Vec<usize> = (0..(1usize << n))
            .filter(|&i| (n - i.count_ones() as usize) <= max_degree)
            .collect();
        MonomialSet::from_information_indices(&indices, n).unwrap()
    }

    #[test]
    fn monomial_correspondence() {
        assert_eq!(index_to_monomial(7, 3).unwrap(), 0);
        assert_eq!(index_to_monomial(0, 3).unwrap(), 0b111);
        // n=3, i=5 (binary 101) -> {1}, degree 1, row weight 2^(3-1) = 4.
        let m = index_to_monomial(5, 3).unwrap();
        assert_eq!(m, 0b010);
        assert_eq!(
            1usize << (3 - m.count_ones()),
            crate::polar::row_weight(5, 3).unwrap()
        );
        assert!(index_to_monomial(8, 3).is_err());
    }

    #[test]
    fn rm_sets_are_decreasing_single_block() {
        for n in 2..=6 {
            for r in 0..n {
                let set = rm_set(n, r);
                assert!(is_decreasing_monomial(&set), "n={n} r={r}");
                let profile = block_profile(&set).unwrap();
                assert_eq!(profile.parts(), &[n], "n={n} r={r}");
            }
        }
    }

    #[test]
    fn missing_dominator_not_decreasing() {
        // {∅, {1}} without {0} violates domination.
        let set = MonomialSet {
            n: 2,
            members: vec![true, false, true, false],
            count: 2,
        };
        assert!(!is_decreasing_monomial(&set));
        assert!(block_profile(&set).is_err());
    }

    #[test]
    fn asymmetric_set_gives_unit_blocks() {
        // {∅, {0}} is decreasing but not invariant under swapping 0 <-> 1.
        let set = MonomialSet {
            n: 2,
            members: vec![true, true, false, false],
            count: 2,
        };
        assert!(is_decreasing_monomial(&set));
        let profile = block_profile(&set).unwrap();
        assert_eq!(profile.parts(), &[1, 1]);
    }

    #[test]
    fn partial_symmetry_detected() {
        // Degree <= 1 monomials on {0,1} plus ∅-only on variable 2:
        // {∅, {0}, {1}} over n=3: swapping 0,1 preserves; 1,2 does not.
        let indices_to_monomials = [0b000u32, 0b001, 0b010];
        let mut members = vec![false; 8];
        for &m in &indices_to_monomials {
            members[m as usize] = true;
        }
        let set = MonomialSet {
            n: 3,
            members,
            count: 3,
        };
        assert!(is_decreasing_monomial(&set));
        assert_eq!(block_profile(&set).unwrap().parts(), &[2, 1]);
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl2_order(1), BigUint::from(1u8));
        assert_eq!(gl2_order(2), BigUint::from(6u8));
        assert_eq!(gl2_order(3), BigUint::from(168u32));
    }

    #[test]
    fn blta_size_reference_values() {
        let unit = BlockProfile::new(vec![1; 10]).unwrap();
        assert_eq!(blta_size(&unit), BigUint::from(1u128 << 55));
        assert_eq!(blta_size(&unit).to_string(), "36028797018963968");

        let mut parts = vec![1; 9];
        parts[0] = 2;
        let coarser = BlockProfile::new(parts).unwrap();
        assert_eq!(blta_size(&coarser).to_string(), "108086391056891904");

        // Full profile = general affine group.
        let full = BlockProfile::new(vec![10]).unwrap();
        let expected = (BigUint::from(1u16) << 10) * gl2_order(10);
        assert_eq!(blta_size(&full), expected);
        // Ratio to the 2^55 group is ~1e16 (between 1e15 and 1e17).
        let ratio = blta_size(&full) / blta_size(&unit);
        let digits = ratio.to_string().len();
        assert!((16..=18).contains(&digits), "ratio {ratio}");
    }

    #[test]
    fn unit_profile_identity() {
        for n in 1..=12 {
            let unit = BlockProfile::new(vec![1; n]).unwrap();
            assert_eq!(blta_size(&unit), BigUint::from(1u8) << (n * (n + 1) / 2));
        }
    }

    #[test]
    fn coarsening_monotone() {
        // Merging two adjacent parts never shrinks the group; exhaustive
        // over all compositions of n = 6.
        fn compositions(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 1..=n {
                for rest in compositions(n - first) {
                    let mut c = vec![first];
                    c.extend(rest);
                    out.push(c);
                }
            }
            out
        }
        for parts in compositions(6) {
            let base = BlockProfile::new(parts.clone()).unwrap();
            for i in 0..parts.len().saturating_sub(1) {
                let mut merged = parts.clone();
                let extra = merged.remove(i + 1);
                merged[i] += extra;
                let coarser = BlockProfile::new(merged).unwrap();
                assert!(
                    blta_size(&coarser) >= blta_size(&base),
                    "{parts:?} -> {:?}",
                    coarser.parts()
                );
            }
        }
    }
}
