//! The p-biased orthonormal basis χ_S on the edge hypercube, brute-force
//! Fourier transforms of dense value tables, sparse spectra, weight
//! profiles, and function restriction.
//!
//! Two transform routes are provided on purpose. [`brute_force_transform`]
//! is the defining double enumeration (every coefficient is a compensated
//! sum over all 2^m points) and serves as the oracle; [`dense_transform`]
//! is the O(m·2^m) in-place butterfly used where the quadratic cost is
//! prohibitive. They are compared against each other in the tests.

use crate::bits::{EdgeBits, EdgeSet};
use crate::combin::vertex_count_for_edges;
use crate::graph::{support_vertices, Graph};
use crate::kahan::KahanSum;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Hard cap on dense-table coordinates (memory: 2^30 doubles = 8 GiB).
pub const DENSE_COORD_CAP: u32 = 30;

/// Coefficients smaller than this in absolute value are dropped from
/// sparse spectra produced by transforms.
pub const SPARSITY_THRESHOLD: f64 = 1e-13;

/// Per-coordinate values of the p-biased basis function χ_e.
#[derive(Debug, Clone, Copy)]
pub struct BiasedBasis {
    p: f64,
    value_on_one: f64,
    value_on_zero: f64,
}

impl BiasedBasis {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidProbability(p));
        }
        let b = BiasedBasis {
            p,
            value_on_one: ((1.0 - p) / p).sqrt(),
            value_on_zero: -(p / (1.0 - p)).sqrt(),
        };
        // mean 0, variance 1 under the p-biased measure
        debug_assert!((p * b.value_on_one + (1.0 - p) * b.value_on_zero).abs() < 1e-12);
        debug_assert!(
            (p * b.value_on_one * b.value_on_one
                + (1.0 - p) * b.value_on_zero * b.value_on_zero
                - 1.0)
                .abs()
                < 1e-12
        );
        Ok(b)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn value_on_one(&self) -> f64 {
        self.value_on_one
    }

    pub fn value_on_zero(&self) -> f64 {
        self.value_on_zero
    }

    #[inline]
    pub fn value(&self, bit: bool) -> f64 {
        if bit {
            self.value_on_one
        } else {
            self.value_on_zero
        }
    }
}

/// χ_S evaluated on a graph: product of per-edge basis values over S.
pub fn chi_eval(s: &EdgeSet, g: &Graph, p: f64) -> Result<f64> {
    chi_eval_bits(s, g.bits(), p)
}

/// χ_S evaluated on a raw edge assignment.
pub fn chi_eval_bits(s: &EdgeSet, x: &EdgeBits, p: f64) -> Result<f64> {
    let basis = BiasedBasis::new(p)?;
    let mut acc = 1.0;
    for &e in s.edges() {
        if e as usize >= x.len() {
            return Err(Error::InvalidArgument(format!(
                "edge {e} outside the universe of {} edges",
                x.len()
            )));
        }
        acc *= basis.value(x.get(e as usize));
    }
    Ok(acc)
}

#[inline]
fn chi_mask(s: u32, x: u32, pow_one: &[f64], pow_zero: &[f64]) -> f64 {
    let ones = (s & x).count_ones() as usize;
    let zeros = (s & !x).count_ones() as usize;
    pow_one[ones] * pow_zero[zeros]
}

fn table_exponent(len: usize) -> Result<u32> {
    if !len.is_power_of_two() {
        return Err(Error::BadTable {
            len,
            cap: DENSE_COORD_CAP,
        });
    }
    let m = len.trailing_zeros();
    if m > DENSE_COORD_CAP {
        return Err(Error::BadTable {
            len,
            cap: DENSE_COORD_CAP,
        });
    }
    Ok(m)
}

/// Probability of the point `x` under the product p-biased measure on m bits.
pub fn point_weight(x: u32, m: u32, p: f64) -> f64 {
    let k = x.count_ones() as i32;
    p.powi(k) * (1.0 - p).powi(m as i32 - k)
}

/// The defining transform: ĥ(S) = Σ_x w_p(x) f(x) χ_S(x) for every S,
/// each coefficient accumulated with compensated summation. Cost is
/// O(4^m); use [`dense_transform`] beyond m ≈ 12.
pub fn brute_force_transform(table: &[f64], p: f64) -> Result<FourierSpectrum> {
    let m = table_exponent(table.len())?;
    let basis = BiasedBasis::new(p)?;
    let pow_one: Vec<f64> = (0..=m).map(|i| basis.value_on_one.powi(i as i32)).collect();
    let pow_zero: Vec<f64> = (0..=m)
        .map(|i| basis.value_on_zero.powi(i as i32))
        .collect();
    let weight_by_popcount: Vec<f64> = (0..=m)
        .map(|k| p.powi(k as i32) * (1.0 - p).powi((m - k) as i32))
        .collect();

    let mut spectrum = FourierSpectrum::new(m as usize);
    for s in 0..(1u32 << m) {
        let mut acc = KahanSum::new();
        for (x, &fx) in table.iter().enumerate() {
            let x = x as u32;
            let w = weight_by_popcount[x.count_ones() as usize];
            acc += w * fx * chi_mask(s, x, &pow_one, &pow_zero);
        }
        let coeff = acc.total();
        if coeff.abs() >= SPARSITY_THRESHOLD {
            spectrum.insert(EdgeSet::from_mask(s), coeff);
        }
    }
    Ok(spectrum)
}

/// In-place butterfly transform; returns the dense coefficient table
/// indexed by subset mask. Same map as [`brute_force_transform`].
pub fn dense_transform(table: &[f64], p: f64) -> Result<Vec<f64>> {
    let m = table_exponent(table.len())?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    let q = 1.0 - p;
    let s = (p * q).sqrt();
    let mut t = table.to_vec();
    for b in 0..m {
        let bit = 1usize << b;
        for base in 0..t.len() {
            if base & bit == 0 {
                let lo = t[base];
                let hi = t[base | bit];
                t[base] = q * lo + p * hi;
                t[base | bit] = s * (hi - lo);
            }
        }
    }
    Ok(t)
}

/// Inverse of [`dense_transform`]: rebuilds the value table from dense
/// coefficients.
pub fn dense_reconstruct(coeffs: &[f64], p: f64) -> Result<Vec<f64>> {
    let m = table_exponent(coeffs.len())?;
    let basis = BiasedBasis::new(p)?;
    let (v0, v1) = (basis.value_on_zero, basis.value_on_one);
    let mut t = coeffs.to_vec();
    for b in 0..m {
        let bit = 1usize << b;
        for base in 0..t.len() {
            if base & bit == 0 {
                let no = t[base];
                let yes = t[base | bit];
                t[base] = no + v0 * yes;
                t[base | bit] = no + v1 * yes;
            }
        }
    }
    Ok(t)
}

/// Drops near-zero entries from a dense coefficient table into a sparse
/// spectrum.
pub fn sparsify(coeffs: &[f64], threshold: f64) -> Result<FourierSpectrum> {
    let m = table_exponent(coeffs.len())?;
    let mut spectrum = FourierSpectrum::new(m as usize);
    for (mask, &c) in coeffs.iter().enumerate() {
        if c.abs() >= threshold {
            spectrum.insert(EdgeSet::from_mask(mask as u32), c);
        }
    }
    Ok(spectrum)
}

/// Restricts a dense table to the coordinates in `kept` (a bit mask over
/// the m coordinates), with the remaining coordinates pinned to the bits
/// of `assignment`. The result is indexed by the kept coordinates in
/// ascending order.
pub fn restrict_function(table: &[f64], kept: u32, assignment: u32) -> Result<Vec<f64>> {
    let m = table_exponent(table.len())?;
    let universe = ((1u64 << m) - 1) as u32;
    if kept & !universe != 0 {
        return Err(Error::InvalidArgument(format!(
            "kept-coordinate mask {kept:#x} outside the {m}-bit universe"
        )));
    }
    let fixed_bits = assignment & !kept & universe;
    let h = kept.count_ones();
    let mut out = Vec::with_capacity(1usize << h);
    for y in 0..(1u32 << h) {
        // scatter the bits of y onto the kept coordinate positions
        let mut x = fixed_bits;
        let mut rest = kept;
        let mut yy = y;
        while rest != 0 {
            let pos = rest.trailing_zeros();
            if yy & 1 == 1 {
                x |= 1 << pos;
            }
            yy >>= 1;
            rest &= rest - 1;
        }
        out.push(table[x as usize]);
    }
    Ok(out)
}

/// Sparse association from edge subsets to real Fourier coefficients over
/// an ambient universe of `m` edges.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    m: usize,
    entries: BTreeMap<EdgeSet, f64>,
}

/// Squared-coefficient mass grouped by degree |S| and, when the universe
/// is a full edge set C(n,2), by support size |supp(S)|.
#[derive(Debug, Clone)]
pub struct WeightProfile {
    pub by_degree: BTreeMap<usize, f64>,
    pub by_support: Option<BTreeMap<usize, f64>>,
}

impl FourierSpectrum {
    pub fn new(m: usize) -> Self {
        FourierSpectrum {
            m,
            entries: BTreeMap::new(),
        }
    }

    /// Ambient edge-universe size.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Inserts a coefficient; exact zeros are removed rather than stored.
    pub fn insert(&mut self, s: EdgeSet, coeff: f64) {
        debug_assert!(s.edges().iter().all(|&e| (e as usize) < self.m.max(1)));
        if coeff == 0.0 {
            self.entries.remove(&s);
        } else {
            self.entries.insert(s, coeff);
        }
    }

    pub fn coefficient(&self, s: &EdgeSet) -> f64 {
        self.entries.get(s).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EdgeSet, f64)> {
        self.entries.iter().map(|(s, &c)| (s, c))
    }

    /// Σ_{S≠∅} ĥ(S)²: the variance of the represented function.
    pub fn parseval_variance(&self) -> f64 {
        let mut acc = KahanSum::new();
        for (s, c) in self.iter() {
            if !s.is_empty() {
                acc += c * c;
            }
        }
        acc.total()
    }

    /// Largest |S| present.
    pub fn max_degree(&self) -> usize {
        self.entries.keys().map(|s| s.len()).max().unwrap_or(0)
    }

    pub fn weight_profile(&self) -> WeightProfile {
        let mut by_degree: BTreeMap<usize, KahanSum> = BTreeMap::new();
        for (s, c) in self.iter() {
            *by_degree.entry(s.len()).or_default() += c * c;
        }
        let by_support = vertex_count_for_edges(self.m).map(|n| {
            let mut map: BTreeMap<usize, KahanSum> = BTreeMap::new();
            for (s, c) in self.iter() {
                let size = support_vertices(n, s).len();
                *map.entry(size).or_default() += c * c;
            }
            map.into_iter().map(|(k, v)| (k, v.total())).collect()
        });
        WeightProfile {
            by_degree: by_degree.into_iter().map(|(k, v)| (k, v.total())).collect(),
            by_support,
        }
    }

    /// Removes the empty set and rescales so that the Parseval variance is 1.
    pub fn normalized_to_unit_variance(&self) -> FourierSpectrum {
        let sigma = self.parseval_variance().sqrt();
        let mut out = FourierSpectrum::new(self.m);
        for (s, c) in self.iter() {
            if !s.is_empty() {
                out.insert(s.clone(), c / sigma);
            }
        }
        out
    }

    /// Evaluates Σ_S ĥ(S) χ_S(x) at a graph's edge assignment.
    pub fn evaluate(&self, g: &Graph, p: f64) -> Result<f64> {
        if g.edge_universe() != self.m {
            return Err(Error::InvalidArgument(format!(
                "graph has {} potential edges, spectrum expects {}",
                g.edge_universe(),
                self.m
            )));
        }
        let mut acc = KahanSum::new();
        for (s, c) in self.iter() {
            acc += c * chi_eval(s, g, p)?;
        }
        Ok(acc.total())
    }

    /// Largest absolute coefficient difference against another spectrum.
    pub fn max_abs_diff(&self, other: &FourierSpectrum) -> f64 {
        let mut worst = 0.0f64;
        for (s, c) in self.iter() {
            worst = worst.max((c - other.coefficient(s)).abs());
        }
        for (s, c) in other.iter() {
            worst = worst.max((c - self.coefficient(s)).abs());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::choose2;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn random_table(m: u32, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        (0..1usize << m)
            .map(|_| rng.random::<f64>() * 4.0 - 2.0)
            .collect()
    }

    #[test]
    fn chi_on_empty_set_is_one() {
        let g = Graph::empty(4).unwrap();
        assert_eq!(chi_eval(&EdgeSet::empty(), &g, 0.37).unwrap(), 1.0);
    }

    #[test]
    fn chi_single_edge_values() {
        let mut g = Graph::empty(3).unwrap();
        g.set_edge(0, 1, true);
        let e = EdgeSet::from_edges(vec![0]);
        // present edge at p = 1/2: sqrt((1-p)/p) = 1
        assert_abs_diff_eq!(chi_eval(&e, &g, 0.5).unwrap(), 1.0, epsilon = 1e-15);
        // product over a present and an absent edge at p = 1/2: +1 * -1
        let pair = EdgeSet::from_edges(vec![0, 1]);
        assert_abs_diff_eq!(chi_eval(&pair, &g, 0.5).unwrap(), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn transform_of_constant_is_mean_only() {
        let table = vec![2.5; 1 << 4];
        let spec = brute_force_transform(&table, 0.3).unwrap();
        assert_eq!(spec.len(), 1);
        assert_abs_diff_eq!(spec.coefficient(&EdgeSet::empty()), 2.5, epsilon = 1e-12);
    }

    #[test]
    fn transform_of_dictator_coordinate() {
        // f(x) = x_e = p + sqrt(p(1-p)) * chi_e
        let p = 0.3;
        let m = 3u32;
        let e = 1u32;
        let table: Vec<f64> = (0..1u32 << m).map(|x| ((x >> e) & 1) as f64).collect();
        let spec = brute_force_transform(&table, p).unwrap();
        assert_eq!(spec.len(), 2);
        assert_abs_diff_eq!(spec.coefficient(&EdgeSet::empty()), p, epsilon = 1e-12);
        assert_abs_diff_eq!(
            spec.coefficient(&EdgeSet::from_edges(vec![e])),
            (p * (1.0 - p)).sqrt(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(spec.parseval_variance(), p * (1.0 - p), epsilon = 1e-12);
    }

    #[test]
    fn parseval_of_mean_only_spectrum_is_zero() {
        let mut spec = FourierSpectrum::new(4);
        spec.insert(EdgeSet::empty(), 5.0);
        assert_eq!(spec.parseval_variance(), 0.0);
    }

    #[test]
    fn weight_profile_example() {
        let mut spec = FourierSpectrum::new(3); // m = C(3,2)
        spec.insert(EdgeSet::empty(), 1.0);
        spec.insert(EdgeSet::from_edges(vec![0]), 2.0);
        let w = spec.weight_profile();
        assert_eq!(w.by_degree[&0], 1.0);
        assert_eq!(w.by_degree[&1], 4.0);
        let support = w.by_support.unwrap();
        assert_eq!(support[&0], 1.0);
        assert_eq!(support[&2], 4.0);
    }

    #[test]
    fn weight_profile_repartition_identity() {
        for seed in 0..5 {
            let table = random_table(6, seed);
            let spec = brute_force_transform(&table, 0.4).unwrap();
            let w = spec.weight_profile();
            let total: f64 = w
                .by_degree
                .iter()
                .filter(|(d, _)| **d > 0)
                .map(|(_, v)| v)
                .sum();
            assert_abs_diff_eq!(total, spec.parseval_variance(), epsilon = 1e-10);
        }
    }

    #[test]
    fn orthonormality_by_exact_enumeration() {
        // E[chi_S chi_T] = [S == T] over all pairs with |S ∪ T| <= 4
        for (m, p) in [(6u32, 0.5f64), (8, 0.3), (10, 0.7)] {
            let sets: Vec<u32> = (0..1u32 << m).filter(|s| s.count_ones() <= 2).collect();
            let basis = BiasedBasis::new(p).unwrap();
            let pow_one: Vec<f64> = (0..=m)
                .map(|i| basis.value_on_one().powi(i as i32))
                .collect();
            let pow_zero: Vec<f64> = (0..=m)
                .map(|i| basis.value_on_zero().powi(i as i32))
                .collect();
            for &s in &sets {
                for &t in &sets {
                    if (s | t).count_ones() > 4 {
                        continue;
                    }
                    let mut acc = KahanSum::new();
                    for x in 0..(1u32 << m) {
                        acc += point_weight(x, m, p)
                            * chi_mask(s, x, &pow_one, &pow_zero)
                            * chi_mask(t, x, &pow_one, &pow_zero);
                    }
                    let expected = if s == t { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(acc.total(), expected, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn plancherel_for_random_tables() {
        let m = 12u32;
        let p = 0.35;
        let f = random_table(m, 11);
        let g = random_table(m, 12);
        let fh = dense_transform(&f, p).unwrap();
        let gh = dense_transform(&g, p).unwrap();
        let mut lhs = KahanSum::new();
        for x in 0..(1u32 << m) {
            lhs += point_weight(x, m, p) * f[x as usize] * g[x as usize];
        }
        let mut rhs = KahanSum::new();
        for i in 0..fh.len() {
            rhs += fh[i] * gh[i];
        }
        assert_abs_diff_eq!(lhs.total(), rhs.total(), epsilon = 1e-9);
    }

    #[test]
    fn dense_agrees_with_brute_force() {
        for (m, p, seed) in [(1u32, 0.5, 1u64), (4, 0.3, 2), (8, 0.62, 3), (10, 0.5, 4)] {
            let table = random_table(m, seed);
            let brute = brute_force_transform(&table, p).unwrap();
            let dense = sparsify(&dense_transform(&table, p).unwrap(), SPARSITY_THRESHOLD).unwrap();
            assert!(
                brute.max_abs_diff(&dense) < 1e-10,
                "m={m} p={p}: {}",
                brute.max_abs_diff(&dense)
            );
        }
    }

    #[test]
    fn roundtrip_is_identity_at_m16() {
        let m = 16u32;
        let p = 0.45;
        let table = random_table(m, 77);
        let coeffs = dense_transform(&table, p).unwrap();
        let back = dense_reconstruct(&coeffs, p).unwrap();
        let worst = table
            .iter()
            .zip(back.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(worst < 1e-9, "roundtrip error {worst}");
    }

    #[test]
    fn restriction_keeps_all_or_nothing() {
        let table = random_table(5, 9);
        let all = (1u32 << 5) - 1;
        assert_eq!(restrict_function(&table, all, 0).unwrap(), table);
        let beta = 0b10110;
        let pinned = restrict_function(&table, 0, beta).unwrap();
        assert_eq!(pinned, vec![table[beta as usize]]);
    }

    #[test]
    fn restriction_scatters_coordinates() {
        let m = 4u32;
        let table: Vec<f64> = (0..1u32 << m).map(|x| x as f64).collect();
        // keep coordinates {1, 3}, pin coordinate 0 to 1 and coordinate 2 to 0
        let restricted = restrict_function(&table, 0b1010, 0b0001).unwrap();
        assert_eq!(restricted, vec![1.0, 3.0, 9.0, 11.0]);
    }

    #[test]
    fn rejects_oversize_or_ragged_tables() {
        assert!(brute_force_transform(&[1.0, 2.0, 3.0], 0.5).is_err());
        assert!(dense_transform(&[1.0; 3], 0.5).is_err());
        assert!(brute_force_transform(&[1.0, 2.0], 0.0).is_err());
    }

    #[test]
    fn spectrum_evaluate_reconstructs_function_on_graphs() {
        let n = 4usize;
        let m = choose2(n) as u32;
        let p = 0.41;
        let table = random_table(m, 31);
        let spec = brute_force_transform(&table, p).unwrap();
        for mask in [0u32, 1, 0b10101, (1 << m) - 1] {
            let mut g = Graph::empty(n).unwrap();
            for b in 0..m {
                if mask >> b & 1 == 1 {
                    g.set_edge_idx(b as usize, true);
                }
            }
            assert_abs_diff_eq!(
                spec.evaluate(&g, p).unwrap(),
                table[mask as usize],
                epsilon = 1e-9
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn prop_roundtrip_identity(m in 1u32..9, p in 0.05f64..0.95, seed in 0u64..500) {
            let table = random_table(m, seed);
            let coeffs = dense_transform(&table, p).unwrap();
            let back = dense_reconstruct(&coeffs, p).unwrap();
            for (a, b) in table.iter().zip(back.iter()) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn prop_parseval_total_mass(m in 1u32..8, p in 0.1f64..0.9, seed in 0u64..500) {
            // E[f^2] = sum of all squared coefficients
            let table = random_table(m, seed);
            let coeffs = dense_transform(&table, p).unwrap();
            let mut lhs = KahanSum::new();
            for x in 0..(1u32 << m) {
                lhs += point_weight(x, m, p) * table[x as usize] * table[x as usize];
            }
            let rhs: f64 = coeffs.iter().map(|c| c * c).sum();
            prop_assert!((lhs.total() - rhs).abs() < 1e-9);
        }
    }
}
