//! Bit sets over the edge universe `[0, m)` and sparse edge-index sets.
//!
//! `EdgeBits` is the dense representation (graph edge indicators, revealed
//! assignments, coordinate masks); `EdgeSet` is the sparse sorted
//! representation used as a Fourier-spectrum key, where sets stay tiny
//! (|S| <= 10) while the ambient universe can be large.

use std::fmt;

/// Fixed-length bit set indexed by edge index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeBits {
    len: usize,
    blocks: Vec<u64>,
}

impl EdgeBits {
    pub fn zeros(len: usize) -> Self {
        EdgeBits {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
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
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.blocks[i / 64] |= mask;
        } else {
            self.blocks[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.blocks[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(w, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let tz = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(w * 64 + tz)
                }
            })
        })
    }

    /// Indices of clear bits, ascending.
    pub fn iter_zeros(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| !self.get(i))
    }

    /// Hex dump of the bit set read as a little-endian integer.
    pub fn to_hex(&self) -> String {
        let mut s = String::new();
        for &b in self.blocks.iter().rev() {
            if s.is_empty() {
                if b != 0 {
                    s.push_str(&format!("{b:x}"));
                }
            } else {
                s.push_str(&format!("{b:016x}"));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

impl fmt::Debug for EdgeBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EdgeBits({}; {{", self.len)?;
        for (i, e) in self.iter_ones().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}})")
    }
}

/// Sorted, duplicate-free set of edge indices; key type for sparse spectra.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EdgeSet(Vec<u32>);

impl EdgeSet {
    pub fn empty() -> Self {
        EdgeSet(Vec::new())
    }

    pub fn from_edges(mut edges: Vec<u32>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        EdgeSet(edges)
    }

    /// Set bits of `mask` interpreted as edge indices below 32.
    pub fn from_mask(mask: u32) -> Self {
        let mut v = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            v.push(m.trailing_zeros());
            m &= m - 1;
        }
        EdgeSet(v)
    }

    /// Bit mask when every edge index is below 32.
    pub fn to_mask(&self) -> Option<u32> {
        let mut mask = 0u32;
        for &e in &self.0 {
            if e >= 32 {
                return None;
            }
            mask |= 1 << e;
        }
        Some(mask)
    }

    pub fn edges(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: u32) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        EdgeSet::from_edges(v)
    }

    /// Splits into the parts inside and outside the coordinate set `h`.
    pub fn split_by(&self, h: &EdgeBits) -> (EdgeSet, EdgeSet) {
        let (inside, outside): (Vec<u32>, Vec<u32>) =
            self.0.iter().partition(|&&e| h.get(e as usize));
        (EdgeSet(inside), EdgeSet(outside))
    }

    pub fn is_subset_of(&self, h: &EdgeBits) -> bool {
        self.0.iter().all(|&e| h.get(e as usize))
    }

    /// Hex bitmask dump (edge index i contributes bit i).
    pub fn to_hex(&self) -> String {
        let max = self.0.last().map_or(0, |&e| e as usize + 1);
        let mut bits = EdgeBits::zeros(max.max(1));
        for &e in &self.0 {
            bits.set(e as usize, true);
        }
        bits.to_hex()
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}
