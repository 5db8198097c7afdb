//! Bit-vector linear algebra over GF(2) for the polar transform `G = E^{⊗n}`,
//! where `E = [[1,0],[1,1]]`.
//!
//! Everything here works in the natural (non-bit-reversed) index order: the
//! transform is the in-place XOR butterfly
//!
//! ```text
//! for s in 0..n: x[k] ^= x[k + 2^s]   for every k with bit s clear
//! ```
//!
//! and `G_{i,j} = 1` iff the support of `j` is contained in the support of
//! `i`. `G` is an involution over GF(2), so the same butterfly inverts it.

use crate::error::{Error, Result};

/// A vector over GF(2), packed into 64-bit words (LSB-first within a word).
///
/// The container accepts any length; operations that require a power-of-two
/// length (the polar transform) validate it themselves.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    /// Builds a vector from 0/1 bytes.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i < self.len);
        ((self.words[i / 64] >> (i % 64)) & 1) as u8
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
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// In-place XOR with another vector of the same length.
    pub fn xor_with(&mut self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::invalid(format!(
                "length mismatch in xor: {} vs {}",
                self.len, other.len
            )));
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// GF(2) inner product (parity of the AND).
    pub fn dot(&self, other: &BitVector) -> Result<u8> {
        if self.len != other.len {
            return Err(Error::invalid(format!(
                "length mismatch in dot: {} vs {}",
                self.len, other.len
            )));
        }
        let parity: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        Ok((parity & 1) as u8)
    }

    /// Indices of the set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i) == 1).collect()
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Applies the polar transform `x = uG` in place, `O(N log N)`.
    pub fn polar_transform_in_place(&mut self) -> Result<()> {
        if self.len == 0 || !self.len.is_power_of_two() {
            return Err(Error::invalid(format!(
                "polar transform requires a power-of-two length, got {}",
                self.len
            )));
        }
        let n = self.len.trailing_zeros() as usize;
        for s in 0..n {
            let stride = 1usize << s;
            if stride < 64 {
                let mask = intra_word_mask(stride);
                for w in &mut self.words {
                    *w ^= (*w >> stride) & mask;
                }
            } else {
                let wstride = stride / 64;
                for k in 0..self.words.len() {
                    if k & wstride == 0 {
                        self.words[k] ^= self.words[k + wstride];
                    }
                }
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for BitVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

/// Mask of bit positions `p` (within a word) that have bit `s` of `p` clear,
/// for `stride = 2^s < 64`. E.g. stride 1 -> 0x5555..., stride 2 -> 0x3333...
fn intra_word_mask(stride: usize) -> u64 {
    let unit = (1u64 << stride) - 1;
    let mut mask = 0u64;
    let mut p = 0;
    while p < 64 {
        mask |= unit << p;
        p += 2 * stride;
    }
    mask
}

/// `x = uG` as a pure function. `G` is an involution, so this is also the
/// inverse map.
pub fn polar_transform(u: &BitVector) -> Result<BitVector> {
    let mut x = u.clone();
    x.polar_transform_in_place()?;
    Ok(x)
}

/// Binary-expansion bookkeeping for an input index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexInfo {
    pub index: usize,
    pub n: usize,
    /// `binary_digits[j]` is bit `j` of `index` (LSB first).
    pub binary_digits: Vec<u8>,
    pub popcount: u32,
}

impl IndexInfo {
    pub fn new(index: usize, n: usize) -> Result<Self> {
        check_index(index, n)?;
        let binary_digits = (0..n).map(|j| ((index >> j) & 1) as u8).collect();
        Ok(IndexInfo {
            index,
            n,
            binary_digits,
            popcount: index.count_ones(),
        })
    }
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if n == 0 || n >= usize::BITS as usize {
        return Err(Error::invalid(format!("unsupported transform order n={n}")));
    }
    if i >= (1usize << n) {
        return Err(Error::invalid(format!(
            "index {i} out of range for blocklength 2^{n}"
        )));
    }
    Ok(())
}

/// Hamming weight of row `i` of `E^{⊗n}`: `2^popcount(i)`.
pub fn row_weight(i: usize, n: usize) -> Result<usize> {
    check_index(i, n)?;
    Ok(1usize << i.count_ones())
}

/// Row `i` of `E^{⊗n}`: the indicator of all submasks of `i`.
pub fn row_of_g(i: usize, n: usize) -> Result<BitVector> {
    check_index(i, n)?;
    let mut row = BitVector::zeros(1 << n);
    let mut s = i;
    loop {
        row.set(s, true);
        if s == 0 {
            break;
        }
        s = (s - 1) & i;
    }
    Ok(row)
}

/// Column `i` of `E^{⊗n}`: the indicator of all supermasks of `i`.
pub fn column_of_g(i: usize, n: usize) -> Result<BitVector> {
    check_index(i, n)?;
    let full = (1usize << n) - 1;
    let free = full & !i;
    let mut col = BitVector::zeros(1 << n);
    let mut t = free;
    loop {
        col.set(i | t, true);
        if t == 0 {
            break;
        }
        t = (t - 1) & free;
    }
    Ok(col)
}
