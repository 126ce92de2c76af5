//! Exact and Monte Carlo distributions of subgraph-count statistics in the
//! Erdős–Rényi random graph G(n,p), their p-biased Fourier spectra, and
//! quantitative diagnostics for the normal approximation (pointwise, ℓ1 and
//! Kolmogorov distances, characteristic-function bounds, edge-revelation
//! estimates).
//!
//! The crate is organised around desk-scale verification: every closed form
//! has an independent brute-force route (exhaustive enumeration of all
//! `2^C(n,2)` graphs, defining sums for Fourier coefficients, Monte Carlo
//! with confidence intervals), and the two routes are compared in the test
//! suite rather than trusted.

pub mod bits;
pub mod combin;
pub mod fourier;
pub mod graph;
pub mod kahan;
pub mod statistic;
pub mod triangle;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("edge probability must lie strictly inside (0,1), got {0}")]
    InvalidProbability(f64),
    #[error("vertex count must be at least {min}, got {n}")]
    VertexCount { n: usize, min: usize },
    #[error("exact enumeration requires C(n,2) <= {cap} edge variables, got {m}")]
    EnumerationTooLarge { m: usize, cap: usize },
    #[error("value table length {len} is not a power of two with exponent <= {cap}")]
    BadTable { len: usize, cap: u32 },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("t = {t} lies outside the validity window [{lo}, {hi}]")]
    OutOfWindow { t: f64, lo: f64, hi: f64 },
    #[error("support does not form a lattice: {0}")]
    NotLattice(String),
    #[error("characteristic-function grid does not cover the inversion window [-pi/h, pi/h]")]
    GridCoverage,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
