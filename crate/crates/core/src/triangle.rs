//! Closed forms for the triangle-counting statistic T on G(n,p): its sparse
//! Fourier spectrum, mean and variance, the unit-variance normalization Z,
//! and the split of Z into a leading weight-1 part and a remainder.
//!
//! Coefficients: ĥT(∅) = p³C(n,3); ĥT({e}) = (n−2)p²√(p(1−p)) for every
//! edge; ĥT({e₁,e₂}) = p²(1−p) for incident pairs; ĥT(Δ) = (p(1−p))^{3/2}
//! on triangle edge sets; 0 elsewhere. Variance from these by Parseval:
//! σ² = C(n,2)(n−2)²p⁵(1−p) + 3C(n,3)p⁴(1−p)² + C(n,3)p³(1−p)³.

use crate::bits::EdgeSet;
use crate::combin::{binomial, choose2};
use crate::fourier::FourierSpectrum;
use crate::graph::edge_index;
use crate::{Error, Result};

fn validate(n: usize, p: f64) -> Result<()> {
    if n < 3 {
        return Err(Error::VertexCount { n, min: 3 });
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(())
}

/// Mean, variance and scale of T, with the large-n comparison ratio.
#[derive(Debug, Clone, Copy)]
pub struct TriangleMoments {
    pub n: usize,
    pub p: f64,
    /// E[T] = p³ C(n,3)
    pub mu: f64,
    /// Var(T), exact closed form
    pub sigma2: f64,
    pub sigma: f64,
    /// σ divided by its leading-order form (p^{5/2}(1−p)^{1/2}/√2)·n².
    /// The prefactor follows from the variance expansion itself:
    /// C(n,2)(n−2)² p⁵(1−p) ≈ n⁴ p⁵(1−p)/2, so σ carries a 1/√2, and the
    /// ratio tends to 1 from below.
    pub asymptotic_ratio: f64,
}

/// Coefficient of ĥT at a single edge: (n−2)p²√(p(1−p)).
pub fn edge_coefficient(n: usize, p: f64) -> f64 {
    (n as f64 - 2.0) * p * p * (p * (1.0 - p)).sqrt()
}

/// Coefficient of ĥT at an incident pair: p²(1−p).
pub fn pair_coefficient(p: f64) -> f64 {
    p * p * (1.0 - p)
}

/// Coefficient of ĥT at a triangle edge set: (p(1−p))^{3/2}.
pub fn triangle_coefficient(p: f64) -> f64 {
    (p * (1.0 - p)).powf(1.5)
}

pub fn triangle_moments(n: usize, p: f64) -> Result<TriangleMoments> {
    validate(n, p)?;
    let q = 1.0 - p;
    let c2 = binomial(n as u64, 2);
    let c3 = binomial(n as u64, 3);
    let nm2 = n as f64 - 2.0;
    let mu = p.powi(3) * c3;
    let sigma2 =
        c2 * nm2 * nm2 * p.powi(5) * q + 3.0 * c3 * p.powi(4) * q * q + c3 * p.powi(3) * q.powi(3);
    let sigma = sigma2.sqrt();
    let leading = p.powf(2.5) * q.sqrt() / 2f64.sqrt() * (n as f64) * (n as f64);
    Ok(TriangleMoments {
        n,
        p,
        mu,
        sigma2,
        sigma,
        asymptotic_ratio: sigma / leading,
    })
}

/// Materialized sparse spectrum of T. Entry count grows like C(n,3), so
/// keep n at enumeration scale; closed-form helpers cover large n.
pub fn closed_triangle_spectrum(n: usize, p: f64) -> Result<FourierSpectrum> {
    validate(n, p)?;
    let mut spec = FourierSpectrum::new(choose2(n));
    let c3 = binomial(n as u64, 3);
    spec.insert(EdgeSet::empty(), p.powi(3) * c3);

    let single = edge_coefficient(n, p);
    for idx in 0..choose2(n) {
        spec.insert(EdgeSet::from_edges(vec![idx as u32]), single);
    }

    let pair = pair_coefficient(p);
    let tri = triangle_coefficient(p);
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                let ab = edge_index(n, a, b) as u32;
                let ac = edge_index(n, a, c) as u32;
                let bc = edge_index(n, b, c) as u32;
                spec.insert(EdgeSet::from_edges(vec![ab, ac]), pair);
                spec.insert(EdgeSet::from_edges(vec![ab, bc]), pair);
                spec.insert(EdgeSet::from_edges(vec![ac, bc]), pair);
                spec.insert(EdgeSet::from_edges(vec![ab, ac, bc]), tri);
            }
        }
    }
    Ok(spec)
}

/// Spectrum of Z = (T − μ)/σ: empty set dropped, everything else divided
/// by σ.
pub fn z_spectrum(n: usize, p: f64) -> Result<FourierSpectrum> {
    let moments = triangle_moments(n, p)?;
    let spec = closed_triangle_spectrum(n, p)?;
    let mut out = FourierSpectrum::new(spec.m());
    for (s, c) in spec.iter() {
        if !s.is_empty() {
            out.insert(s.clone(), c / moments.sigma);
        }
    }
    Ok(out)
}

/// ĥZ at a single edge, closed form.
pub fn z_edge_coefficient(n: usize, p: f64) -> Result<f64> {
    let moments = triangle_moments(n, p)?;
    Ok(edge_coefficient(n, p) / moments.sigma)
}

/// Fraction of Z's Fourier mass at degree 1, closed form: W¹(Z) = 1 − O(1/n).
pub fn weight1_fraction(n: usize, p: f64) -> Result<f64> {
    let moments = triangle_moments(n, p)?;
    let w1 = binomial(n as u64, 2) * edge_coefficient(n, p).powi(2);
    Ok(w1 / moments.sigma2)
}

/// The split Z = X + Y: X = Σ_e Q χ_e with Q = 1/√C(n,2), Y the rest.
#[derive(Debug, Clone, Copy)]
pub struct XyDecomposition {
    /// Q = 1/√C(n,2); Var(X) = C(n,2)Q² = 1 by construction.
    pub q: f64,
    /// Var(Y) = Σ_e (ĥZ(e) − Q)² + Σ_{|S|≥2} ĥZ(S)², closed form.
    pub var_y: f64,
}

pub fn xy_decomposition(n: usize, p: f64) -> Result<XyDecomposition> {
    let moments = triangle_moments(n, p)?;
    let q_edge = 1.0 - p;
    let c2 = binomial(n as u64, 2);
    let c3 = binomial(n as u64, 3);
    let q = (1.0 / c2).sqrt();
    let z_edge = edge_coefficient(n, p) / moments.sigma;
    let high_mass =
        (3.0 * c3 * p.powi(4) * q_edge * q_edge + c3 * p.powi(3) * q_edge.powi(3)) / moments.sigma2;
    let var_y = c2 * (z_edge - q) * (z_edge - q) + high_mass;
    Ok(XyDecomposition { q, var_y })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::brute_force_transform;
    use crate::graph::Graph;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    /// Value table of the triangle count on all 2^C(n,2) graphs.
    pub(crate) fn triangle_table(n: usize) -> Vec<f64> {
        let m = choose2(n);
        (0..1usize << m)
            .map(|mask| {
                let mut g = Graph::empty(n).unwrap();
                for b in 0..m {
                    if mask >> b & 1 == 1 {
                        g.set_edge_idx(b, true);
                    }
                }
                g.triangle_count() as f64
            })
            .collect()
    }

    #[test]
    fn coefficients_at_n3_half() {
        let spec = closed_triangle_spectrum(3, 0.5).unwrap();
        assert_abs_diff_eq!(
            spec.coefficient(&EdgeSet::from_edges(vec![0])),
            0.125,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(spec.coefficient(&EdgeSet::empty()), 0.125, epsilon = 1e-15);
    }

    #[test]
    fn spectrum_matches_brute_force_oracle() {
        for (n, p) in [(4usize, 0.5f64), (5, 0.3)] {
            let table = triangle_table(n);
            let oracle = brute_force_transform(&table, p).unwrap();
            let closed = closed_triangle_spectrum(n, p).unwrap();
            let diff = closed.max_abs_diff(&oracle);
            assert!(diff < 1e-10, "n={n} p={p}: max coefficient gap {diff}");
        }
    }

    #[test]
    fn moments_at_n3_are_bernoulli() {
        // T at n=3 is a single Bernoulli(p^3) indicator
        let m = triangle_moments(3, 0.5).unwrap();
        assert_abs_diff_eq!(m.mu, 0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(m.sigma2, 0.109375, epsilon = 1e-15); // p³(1−p³) = 7/64
    }

    #[test]
    fn parseval_variance_of_spectrum_matches_closed_form() {
        for (n, p) in [(3usize, 0.5f64), (5, 0.3), (7, 0.7)] {
            let spec = closed_triangle_spectrum(n, p).unwrap();
            let m = triangle_moments(n, p).unwrap();
            assert_relative_eq!(spec.parseval_variance(), m.sigma2, epsilon = 1e-12);
        }
    }

    #[test]
    fn sigma_approaches_leading_order() {
        for p in [0.3, 0.5] {
            let m = triangle_moments(200, p).unwrap();
            assert!(
                m.asymptotic_ratio > 0.95 && m.asymptotic_ratio < 1.05,
                "p={p}: ratio {}",
                m.asymptotic_ratio
            );
        }
    }

    #[test]
    fn z_spectrum_is_unit_variance_and_centered() {
        for (n, p) in [(4usize, 0.4f64), (5, 0.5), (6, 0.25)] {
            let z = z_spectrum(n, p).unwrap();
            assert_abs_diff_eq!(z.parseval_variance(), 1.0, epsilon = 1e-12);
            assert_eq!(z.coefficient(&EdgeSet::empty()), 0.0);
        }
    }

    #[test]
    fn weight1_deficit_scales_like_inverse_n() {
        // n · (1 − W¹) stable within a factor 2 across decades
        let vals: Vec<f64> = [100usize, 1000, 10000]
            .iter()
            .map(|&n| n as f64 * (1.0 - weight1_fraction(n, 0.5).unwrap()))
            .collect();
        let (lo, hi) = (
            vals.iter().cloned().fold(f64::INFINITY, f64::min),
            vals.iter().cloned().fold(0.0f64, f64::max),
        );
        assert!(hi / lo < 2.0, "n(1-W1) spread {vals:?}");
        assert!(lo > 0.0);
    }

    #[test]
    fn edge_coefficient_close_to_q_at_rate_n_squared() {
        // |ĥZ(e) − Q| ≤ K/n² with K fit at n=10, held within 2x through n=10^4
        let p = 0.5;
        let gap = |n: usize| {
            let q = (1.0 / binomial(n as u64, 2)).sqrt();
            (z_edge_coefficient(n, p).unwrap() - q).abs()
        };
        let k = gap(10) * 100.0;
        for n in [10usize, 100, 1000, 10000] {
            let scaled = gap(n) * (n as f64) * (n as f64);
            assert!(
                scaled <= 2.0 * k && scaled >= k / 2.0,
                "n={n}: n² gap = {scaled}, fitted K = {k}"
            );
        }
    }

    #[test]
    fn xy_split_has_unit_main_term_and_small_remainder() {
        for (n, p) in [(5usize, 0.5f64), (30, 0.3)] {
            let xy = xy_decomposition(n, p).unwrap();
            let var_x = binomial(n as u64, 2) * xy.q * xy.q;
            assert_abs_diff_eq!(var_x, 1.0, epsilon = 1e-12);
            assert!(xy.var_y > 0.0);
        }
        // var(Y) against the brute-force spectrum at n=5
        let (n, p) = (5usize, 0.5f64);
        let table = triangle_table(n);
        let spec = brute_force_transform(&table, p).unwrap();
        let m = triangle_moments(n, p).unwrap();
        let q = (1.0 / binomial(n as u64, 2)).sqrt();
        let mut brute_var_y = 0.0;
        for (s, c) in spec.iter() {
            let zc = c / m.sigma;
            if s.len() == 1 {
                brute_var_y += (zc - q) * (zc - q);
            } else if s.len() >= 2 {
                brute_var_y += zc * zc;
            }
        }
        let xy = xy_decomposition(n, p).unwrap();
        assert_abs_diff_eq!(xy.var_y, brute_var_y, epsilon = 1e-12);
    }

    #[test]
    fn var_y_scales_like_inverse_n() {
        // n · var(Y) within a bracket of ratio ≤ 4 across decades
        let vals: Vec<f64> = [10usize, 100, 1000]
            .iter()
            .map(|&n| n as f64 * xy_decomposition(n, 0.5).unwrap().var_y)
            .collect();
        let (lo, hi) = (
            vals.iter().cloned().fold(f64::INFINITY, f64::min),
            vals.iter().cloned().fold(0.0f64, f64::max),
        );
        assert!(hi / lo <= 4.0, "n·var(Y) spread {vals:?}");
    }

    #[test]
    fn rejects_degenerate_arguments() {
        assert!(triangle_moments(2, 0.5).is_err());
        assert!(closed_triangle_spectrum(3, 0.0).is_err());
        assert!(z_spectrum(3, 1.0).is_err());
    }
}
