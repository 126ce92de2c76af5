//! General graph statistics built from a base function f on k-vertex
//! graphs: F(G) = Σ f(Γ) over all (n)↓_k labeled k-vertex induced
//! subgraphs Γ of G. Aggregated coefficients h_T (sums of ĥf over vertex
//! injections), the coefficient formula ĥF(T) = (n−s)↓_{k−s}·h_T, the
//! variance expansion grouped by support size, and edge dominance.

use crate::bits::EdgeSet;
use crate::combin::{binomial, binomial_u128, choose2, falling, falling_u128};
use crate::fourier::{dense_transform, FourierSpectrum};
use crate::graph::{edge_endpoints, edge_index, support_vertices, Graph};
use crate::kahan::KahanSum;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Base functions are capped at 5 vertices: (n)↓_k injection sums and
/// 2^C(k,2) tables stay desk-scale.
pub const MAX_BASE_VERTICES: usize = 5;

/// Coefficients smaller than this are treated as zero when classifying
/// edge dominance.
pub const DOMINANCE_THRESHOLD: f64 = 1e-12;

/// A function on labeled k-vertex graphs, stored as a dense table indexed
/// by the C(k,2)-bit edge mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BaseFunctionRaw", into = "BaseFunctionRaw")]
pub struct BaseFunction {
    k: usize,
    table: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct BaseFunctionRaw {
    k: usize,
    table: Vec<f64>,
}

impl TryFrom<BaseFunctionRaw> for BaseFunction {
    type Error = Error;
    fn try_from(raw: BaseFunctionRaw) -> Result<Self> {
        BaseFunction::new(raw.k, raw.table)
    }
}

impl From<BaseFunction> for BaseFunctionRaw {
    fn from(f: BaseFunction) -> Self {
        BaseFunctionRaw {
            k: f.k,
            table: f.table,
        }
    }
}

impl BaseFunction {
    pub fn new(k: usize, table: Vec<f64>) -> Result<Self> {
        if k < 2 || k > MAX_BASE_VERTICES {
            return Err(Error::InvalidArgument(format!(
                "base function needs 2 <= k <= {MAX_BASE_VERTICES}, got {k}"
            )));
        }
        let expected = 1usize << choose2(k);
        if table.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "base function table for k={k} must have {expected} entries, got {}",
                table.len()
            )));
        }
        Ok(BaseFunction { k, table })
    }

    /// Indicator of all three edges on 3 vertices; F is 3! times the
    /// triangle count.
    pub fn triangle() -> Self {
        let mut table = vec![0.0; 8];
        table[0b111] = 1.0;
        BaseFunction { k: 3, table }
    }

    /// Indicator of the path 0–1–2 with the closing edge absent; counts
    /// ordered induced 2-edge paths.
    pub fn path2_induced() -> Self {
        let e01 = edge_index(3, 0, 1);
        let e02 = edge_index(3, 0, 2);
        let e12 = edge_index(3, 1, 2);
        let table = (0..8u32)
            .map(|mask| {
                let has = |e: usize| mask >> e & 1 == 1;
                if has(e01) && has(e12) && !has(e02) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        BaseFunction { k: 3, table }
    }

    /// Indicator of the path 0–1–2 regardless of the closing edge; counts
    /// ordered 2-edge paths (homomorphic copies).
    pub fn path2_hom() -> Self {
        let e01 = edge_index(3, 0, 1);
        let e12 = edge_index(3, 1, 2);
        let table = (0..8u32)
            .map(|mask| {
                let has = |e: usize| mask >> e & 1 == 1;
                if has(e01) && has(e12) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        BaseFunction { k: 3, table }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "triangle" => Some(Self::triangle()),
            "path2-induced" => Some(Self::path2_induced()),
            "path2-hom" => Some(Self::path2_hom()),
            _ => None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("base function serializes")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of potential edges C(k,2) of the base graph.
    pub fn m(&self) -> usize {
        choose2(self.k)
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    #[inline]
    pub fn value(&self, mask: u32) -> f64 {
        self.table[mask as usize]
    }

    /// Dense p-biased coefficients of the table.
    pub fn transform(&self, p: f64) -> Result<Vec<f64>> {
        dense_transform(&self.table, p)
    }
}

/// All injective maps from [s] into [k], each a vector of images.
fn injections(s: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(s);
    let mut used = vec![false; k];
    fn rec(s: usize, k: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == s {
            out.push(current.clone());
            return;
        }
        for v in 0..k {
            if !used[v] {
                used[v] = true;
                current.push(v);
                rec(s, k, current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    rec(s, k, &mut current, &mut used, &mut out);
    out
}

/// Edges of a local pattern as vertex pairs on [s].
fn local_pattern_edges(s: usize, mask: u32) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for idx in 0..choose2(s) {
        if mask >> idx & 1 == 1 {
            edges.push(edge_endpoints(s, idx));
        }
    }
    edges
}

/// Vertices of [s] touched by the pattern.
fn local_support(s: usize, mask: u32) -> Vec<usize> {
    let mut seen = vec![false; s];
    for (a, b) in local_pattern_edges(s, mask) {
        seen[a] = true;
        seen[b] = true;
    }
    (0..s).filter(|&v| seen[v]).collect()
}

/// h for a labeled pattern on [s]: the sum of ĥf over all injections of
/// the pattern's vertices into [k].
fn h_for_local_pattern(f: &BaseFunction, coeffs: &[f64], s: usize, mask: u32) -> f64 {
    let edges = local_pattern_edges(s, mask);
    let mut acc = KahanSum::new();
    for phi in injections(s, f.k) {
        let mut image = 0u32;
        for &(a, b) in &edges {
            let (u, v) = (phi[a].min(phi[b]), phi[a].max(phi[b]));
            image |= 1 << edge_index(f.k, u, v);
        }
        acc += coeffs[image as usize];
    }
    acc.total()
}

/// h_T for an edge set in the ambient universe of an n-vertex graph:
/// Σ over injections φ of supp(T) into [k] of ĥf(φ(T)).
pub fn h_coefficient(f: &BaseFunction, t: &EdgeSet, n: usize, p: f64) -> Result<f64> {
    let supp = support_vertices(n, t);
    let s = supp.len();
    if s > f.k {
        return Err(Error::InvalidArgument(format!(
            "edge set touches {s} vertices, base function has only {}",
            f.k
        )));
    }
    // relabel the pattern onto [s]
    let mut mask = 0u32;
    for &e in t.edges() {
        let (i, j) = edge_endpoints(n, e as usize);
        let a = supp.binary_search(&i).expect("endpoint in support");
        let b = supp.binary_search(&j).expect("endpoint in support");
        mask |= 1 << edge_index(s, a, b);
    }
    let coeffs = f.transform(p)?;
    Ok(h_for_local_pattern(f, &coeffs, s, mask))
}

/// ĥF(T) = (n − |supp(T)|)↓_{k − |supp(T)|} · h_T.
pub fn graph_statistic_coefficient(f: &BaseFunction, t: &EdgeSet, n: usize, p: f64) -> Result<f64> {
    if f.k > n {
        return Err(Error::VertexCount { n, min: f.k });
    }
    let s = support_vertices(n, t).len();
    let h = h_coefficient(f, t, n, p)?;
    Ok(falling((n - s) as u64, (f.k - s) as u64) * h)
}

/// F(G) = Σ over all injections ψ:[k]↪[n] of f applied to the pulled-back
/// edge pattern.
pub fn evaluate_graph_statistic(f: &BaseFunction, g: &Graph) -> Result<f64> {
    let n = g.n();
    if f.k > n {
        return Err(Error::VertexCount { n, min: f.k });
    }
    let mut acc = KahanSum::new();
    for psi in injections(f.k, n) {
        let mut mask = 0u32;
        for idx in 0..choose2(f.k) {
            let (a, b) = edge_endpoints(f.k, idx);
            let (u, v) = (psi[a].min(psi[b]), psi[a].max(psi[b]));
            if g.has_edge(u, v) {
                mask |= 1 << idx;
            }
        }
        acc += f.value(mask);
    }
    Ok(acc.total())
}

/// Canonical key for an isomorphism class of edge patterns: the support
/// size and the minimal edge mask over all relabelings of the support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PatternClass {
    pub support: usize,
    pub canonical_mask: u32,
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges = local_pattern_edges(self.support, self.canonical_mask);
        write!(f, "[{} vertices;", self.support)?;
        for (i, (a, b)) in edges.iter().enumerate() {
            write!(f, "{}{a}-{b}", if i == 0 { " " } else { ", " })?;
        }
        write!(f, "]")
    }
}

fn canonical_pattern(s: usize, mask: u32) -> u32 {
    let mut best = u32::MAX;
    for perm in injections(s, s) {
        let mut relabeled = 0u32;
        for (a, b) in local_pattern_edges(s, mask) {
            let (u, v) = (perm[a].min(perm[b]), perm[a].max(perm[b]));
            relabeled |= 1 << edge_index(s, u, v);
        }
        best = best.min(relabeled);
    }
    best
}

/// The h_T table of a base function: one value per isomorphism class of
/// patterns supported on at most k vertices, plus the derived summaries.
#[derive(Debug, Clone)]
pub struct HCoefficients {
    pub by_class: BTreeMap<PatternClass, f64>,
    /// h at the single-edge class.
    pub h_edge: f64,
    /// max |h_T| over nonempty classes.
    pub h_star: f64,
    /// h_edge is nonzero (beyond `DOMINANCE_THRESHOLD`).
    pub edge_dominated: bool,
}

impl HCoefficients {
    pub fn compute(f: &BaseFunction, p: f64) -> Result<Self> {
        let coeffs = f.transform(p)?;
        let mut by_class = BTreeMap::new();
        for s in 0..=f.k {
            for mask in 0..1u32 << choose2(s) {
                if local_support(s, mask).len() != s {
                    continue;
                }
                let class = PatternClass {
                    support: s,
                    canonical_mask: canonical_pattern(s, mask),
                };
                let h = h_for_local_pattern(f, &coeffs, s, mask);
                if let Some(&prev) = by_class.get(&class) {
                    // label invariance: every labeling of a class agrees
                    debug_assert!(
                        (prev - h) <= 1e-9 && (h - prev) <= 1e-9,
                        "h not label-invariant on {class}: {prev} vs {h}"
                    );
                } else {
                    by_class.insert(class, h);
                }
            }
        }
        let h_edge = by_class
            .get(&PatternClass {
                support: 2,
                canonical_mask: 1,
            })
            .copied()
            .unwrap_or(0.0);
        let h_star = by_class
            .iter()
            .filter(|(c, _)| c.support > 0)
            .map(|(_, h)| h.abs())
            .fold(0.0f64, f64::max);
        Ok(HCoefficients {
            by_class,
            h_edge,
            h_star,
            edge_dominated: h_edge.abs() > DOMINANCE_THRESHOLD,
        })
    }
}

/// Variance of F with its support-size breakdown:
/// σ² = C(n,2) h_e² ((n−2)↓_{k−2})² + Σ_{i=3}^{k} ((n−i)↓_{k−i})² Σ_{|supp(T)|=i} h_T².
#[derive(Debug, Clone)]
pub struct SubgraphVariance {
    pub sigma2: f64,
    /// Contribution of each support size i ∈ {2, ..., k}.
    pub by_support: BTreeMap<usize, f64>,
}

pub fn subgraph_variance(f: &BaseFunction, n: usize, p: f64) -> Result<SubgraphVariance> {
    if f.k > n {
        return Err(Error::VertexCount { n, min: f.k });
    }
    let coeffs = f.transform(p)?;
    let mut by_support = BTreeMap::new();
    let mut total = KahanSum::new();
    for i in 2..=f.k {
        // sum of h² over all labeled patterns on [i] with full support,
        // times the C(n,i) placements and the squared extension count
        let mut labeled = KahanSum::new();
        for mask in 1..1u32 << choose2(i) {
            if local_support(i, mask).len() != i {
                continue;
            }
            let h = h_for_local_pattern(f, &coeffs, i, mask);
            labeled += h * h;
        }
        let extensions = falling((n - i) as u64, (f.k - i) as u64);
        let contribution = binomial(n as u64, i as u64) * extensions * extensions * labeled.total();
        by_support.insert(i, contribution);
        total += contribution;
    }
    Ok(SubgraphVariance {
        sigma2: total.total(),
        by_support,
    })
}

/// Mean of F: (n)↓_k · ĥf(∅).
pub fn graph_statistic_mean(f: &BaseFunction, n: usize, p: f64) -> Result<f64> {
    if f.k > n {
        return Err(Error::VertexCount { n, min: f.k });
    }
    let coeffs = f.transform(p)?;
    Ok(falling(n as u64, f.k as u64) * coeffs[0])
}

/// Materialized ambient spectrum of F on an n-vertex universe, via the
/// coefficient formula. Entry count grows like n^k; keep n at desk scale.
pub fn graph_statistic_spectrum(f: &BaseFunction, n: usize, p: f64) -> Result<FourierSpectrum> {
    if f.k > n {
        return Err(Error::VertexCount { n, min: f.k });
    }
    if binomial_u128(n as u64, f.k as u64) > 1 << 24 {
        return Err(Error::InvalidArgument(format!(
            "ambient spectrum for n={n}, k={} would be too large",
            f.k
        )));
    }
    let coeffs = f.transform(p)?;
    let mut spec = FourierSpectrum::new(choose2(n));
    spec.insert(EdgeSet::empty(), falling(n as u64, f.k as u64) * coeffs[0]);

    // local h values per labeled pattern, by support size
    for i in 2..=f.k {
        let extensions = falling((n - i) as u64, (f.k - i) as u64);
        let mut patterns: Vec<(u32, f64)> = Vec::new();
        for mask in 1..1u32 << choose2(i) {
            if local_support(i, mask).len() != i {
                continue;
            }
            let h = h_for_local_pattern(f, &coeffs, i, mask);
            if h != 0.0 {
                patterns.push((mask, h));
            }
        }
        for verts in combinations(n, i) {
            for &(mask, h) in &patterns {
                let mut edges = Vec::new();
                for (a, b) in local_pattern_edges(i, mask) {
                    edges.push(edge_index(n, verts[a], verts[b]) as u32);
                }
                let coeff = extensions * h;
                if coeff.abs() >= crate::fourier::SPARSITY_THRESHOLD {
                    spec.insert(EdgeSet::from_edges(edges), coeff);
                }
            }
        }
    }
    Ok(spec)
}

/// All size-i subsets of [n], ascending.
fn combinations(n: usize, i: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial_u128(n as u64, i as u64) as usize);
    let mut cur = Vec::with_capacity(i);
    fn rec(start: usize, n: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == i {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, i, cur, out);
            cur.pop();
        }
    }
    rec(0, n, i, &mut cur, &mut out);
    out
}

/// Number of injections [k] ↪ [n], exposed for cross-checks.
pub fn injection_count(n: usize, k: usize) -> f64 {
    falling_u128(n as u64, k as u64) as f64
}
