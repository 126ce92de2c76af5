//! Small-k binomials and falling factorials.
//!
//! Everything is computed by multiplicative integer loops in 128-bit
//! arithmetic (no gamma function) and converted to f64 at the end, so the
//! integer value is exact for every n we ever pass (k <= 10, n <= 10^6)
//! and the conversion rounds at most once.

/// Falling factorial `n * (n-1) * ... * (n-k+1)`, with `(n)↓_0 = 1`.
pub fn falling_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc *= (n - i) as u128;
    }
    acc
}

/// Binomial coefficient `C(n, k)` for small k.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    // interleave multiply/divide so intermediates stay integral
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn falling(n: u64, k: u64) -> f64 {
    falling_u128(n, k) as f64
}

pub fn binomial(n: u64, k: u64) -> f64 {
    binomial_u128(n, k) as f64
}

/// `C(n,2)` as a usize; the number of potential edges of an n-vertex graph.
pub fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `C(n,3)` as a usize; the number of vertex triples.
pub fn choose3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Inverts `m = C(n,2)`: returns n when m is a triangular number (n = 1 for m = 0).
pub fn vertex_count_for_edges(m: usize) -> Option<usize> {
    let n = (0.5 + (2.0 * m as f64 + 0.25).sqrt()) as usize;
    for cand in n.saturating_sub(1).max(1)..=n + 1 {
        if choose2(cand) == m {
            return Some(cand);
        }
    }
    None
}
