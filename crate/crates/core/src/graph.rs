//! Graphs on vertex set `[n]` as edge-indexed bit sets, deterministic
//! G(n,p) sampling, and the structured subgraphs used by the revelation
//! estimates (k-regular bipartite circulants, matchings, clique unions).

use crate::bits::{EdgeBits, EdgeSet};
use crate::combin::choose2;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::fmt::Write as _;

/// Vertex count above which edge indices would overflow 32 bits.
pub const MAX_VERTICES: usize = 1 << 16;

/// Lexicographic rank of the pair (i, j), i < j, among all pairs of [n].
#[inline]
pub fn edge_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Inverse of [`edge_index`].
pub fn edge_endpoints(n: usize, idx: usize) -> (usize, usize) {
    debug_assert!(idx < choose2(n));
    // binary search for the row: largest i with row_start(i) <= idx
    let row_start = |i: usize| i * n - i * (i + 1) / 2;
    let (mut lo, mut hi) = (0usize, n - 1);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if row_start(mid) <= idx {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let i = if row_start(hi) <= idx { hi } else { lo };
    let j = i + 1 + (idx - row_start(i));
    (i, j)
}

/// Vertices incident to the edges of `s`, ascending.
pub fn support_vertices(n: usize, s: &EdgeSet) -> Vec<usize> {
    let mut vs: Vec<usize> = s
        .edges()
        .iter()
        .flat_map(|&e| {
            let (i, j) = edge_endpoints(n, e as usize);
            [i, j]
        })
        .collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// Simple graph on `[n]` stored as a C(n,2)-bit edge indicator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    n: usize,
    bits: EdgeBits,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::VertexCount { n, min: 1 });
        }
        Ok(Graph {
            n,
            bits: EdgeBits::zeros(choose2(n)),
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for i in 0..choose2(n) {
            g.bits.set(i, true);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of potential edges C(n,2).
    pub fn edge_universe(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &EdgeBits {
        &self.bits
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits.get(edge_index(self.n, i.min(j), i.max(j)))
    }

    #[inline]
    pub fn has_edge_idx(&self, idx: usize) -> bool {
        self.bits.get(idx)
    }

    pub fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        self.bits
            .set(edge_index(self.n, i.min(j), i.max(j)), present);
    }

    pub fn set_edge_idx(&mut self, idx: usize, present: bool) {
        self.bits.set(idx, present);
    }

    pub fn edge_count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.bits
            .iter_ones()
            .map(|idx| edge_endpoints(self.n, idx))
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n)
            .filter(|&u| u != v && self.has_edge(u.min(v), u.max(v)))
            .count()
    }

    /// Adjacency rows as 64-bit blocks (row v, bit u set iff uv is an edge).
    pub fn adjacency_rows(&self) -> Vec<Vec<u64>> {
        let words = self.n.div_ceil(64);
        let mut rows = vec![vec![0u64; words]; self.n];
        for idx in self.bits.iter_ones() {
            let (i, j) = edge_endpoints(self.n, idx);
            rows[i][j / 64] |= 1 << (j % 64);
            rows[j][i / 64] |= 1 << (i % 64);
        }
        rows
    }

    /// Number of vertex triples whose three induced edges are all present.
    pub fn triangle_count(&self) -> u64 {
        let rows = self.adjacency_rows();
        let mut twice_thrice = 0u64;
        for idx in self.bits.iter_ones() {
            let (i, j) = edge_endpoints(self.n, idx);
            let common: u64 = rows[i]
                .iter()
                .zip(rows[j].iter())
                .map(|(a, b)| (a & b).count_ones() as u64)
                .sum();
            twice_thrice += common;
        }
        // each triangle is counted once per edge
        debug_assert_eq!(twice_thrice % 3, 0);
        twice_thrice / 3
    }

    /// Edge-list text format: header `n=<n>`, one `i j` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n={}", self.n);
        for (i, j) in self.edges() {
            let _ = writeln!(out, "{i} {j}");
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let n: usize = header
            .trim()
            .strip_prefix("n=")
            .ok_or_else(|| Error::Parse(format!("expected header n=<n>, got {header:?}")))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad vertex count: {e}")))?;
        let mut g = Graph::empty(n)?;
        for line in lines {
            let mut it = line.split_whitespace();
            let (a, b) = (it.next(), it.next());
            let (Some(a), Some(b)) = (a, b) else {
                return Err(Error::Parse(format!("bad edge line {line:?}")));
            };
            if it.next().is_some() {
                return Err(Error::Parse(format!("bad edge line {line:?}")));
            }
            let i: usize = a
                .parse()
                .map_err(|e| Error::Parse(format!("bad vertex: {e}")))?;
            let j: usize = b
                .parse()
                .map_err(|e| Error::Parse(format!("bad vertex: {e}")))?;
            if i == j || i >= n || j >= n {
                return Err(Error::Parse(format!("edge ({i},{j}) out of range for n={n}")));
            }
            g.set_edge(i, j, true);
        }
        Ok(g)
    }
}

/// Deterministic G(n,p) sampler.
///
/// One ChaCha12 generator is keyed from the 64-bit seed; the sample index
/// selects the generator's stream, so samples are independent, reproducible
/// bit-for-bit across platforms, and parallelizable without coordination.
/// Sampling a graph consumes exactly one uniform draw per potential edge.
#[derive(Clone, Debug)]
pub struct Sampler {
    p: f64,
    seed: u64,
}

impl Sampler {
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(Sampler { p, seed })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Draws the graph with the given sample index.
    pub fn sample(&self, n: usize, index: u64) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        let mut rng = self.rng(index);
        for idx in 0..choose2(n) {
            if rng.random::<f64>() < self.p {
                g.bits.set(idx, true);
            }
        }
        Ok(g)
    }

    /// Sub-stream generator for the given sample index.
    pub fn rng(&self, index: u64) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

/// k-regular bipartite circulant on an even vertex count: left vertex `u` is
/// joined to right vertices `u, u+1, ..., u+k-1` (mod n/2).
pub fn make_regular_bipartite(n: usize, k: usize) -> Result<Graph> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "regular bipartite construction needs even n >= 2, got {n}"
        )));
    }
    let half = n / 2;
    if k > half {
        return Err(Error::InvalidArgument(format!(
            "degree {k} exceeds part size {half}"
        )));
    }
    let mut g = Graph::empty(n)?;
    for u in 0..half {
        for c in 0..k {
            let v = half + (u + c) % half;
            g.set_edge(u, v, true);
        }
    }
    Ok(g)
}

/// Union of ⌊n/ℓ⌋ disjoint ℓ-cliques with ℓ = ⌊αn⌋; remaining vertices isolated.
pub fn make_clique_union(n: usize, alpha: f64) -> Result<Graph> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "clique fraction must lie in (0,1], got {alpha}"
        )));
    }
    let ell = (alpha * n as f64).floor() as usize;
    if ell < 2 {
        return Err(Error::InvalidArgument(format!(
            "clique size floor(alpha*n) = {ell} is below 2"
        )));
    }
    let cliques = n / ell;
    let mut g = Graph::empty(n)?;
    for c in 0..cliques {
        let base = c * ell;
        for a in 0..ell {
            for b in (a + 1)..ell {
                g.set_edge(base + a, base + b, true);
            }
        }
    }
    let min_edges = alpha * n as f64 / 2.0;
    if (g.edge_count() as f64) < min_edges {
        return Err(Error::InvalidArgument(format!(
            "clique union produced {} edges, below the required {min_edges}",
            g.edge_count()
        )));
    }
    Ok(g)
}

/// Matching {(0,1), (2,3), ...} of the given size.
pub fn make_matching(n: usize, ell: usize) -> Result<Graph> {
    if 2 * ell > n {
        return Err(Error::InvalidArgument(format!(
            "matching of size {ell} does not fit on {n} vertices"
        )));
    }
    let mut g = Graph::empty(n)?;
    for i in 0..ell {
        g.set_edge(2 * i, 2 * i + 1, true);
    }
    Ok(g)
}
