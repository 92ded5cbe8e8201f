use num_complex::Complex64;
use thiserror::Error;

/// Errors shared across the crate. Mathematical precondition failures
/// (singular systems, type bounds) are distinguished from numerical
/// failures (near-singular matrices, contours grazing a zero).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("boundary system is singular: D(s) = 0")]
    SingularSystem,
    #[error("matrix M(t) is numerically singular at t = {t}")]
    NearSingular { t: Complex64 },
    #[error("contour of radius {radius} passes too close to a zero of Delta")]
    ContourTooClose { radius: f64 },
    #[error("Taylor coefficients of Delta all below threshold up to order {max_order}")]
    OrderUndetermined { max_order: usize },
    #[error("exponential type {tau} is not below the admissible bound {bound}")]
    TypeTooLarge { tau: f64, bound: f64 },
    #[error("radius {r} outside the admissible range [{lo}, {hi})")]
    RadiusOutOfRange { r: f64, lo: f64, hi: f64 },
    #[error("arithmetic progression step is zero")]
    DegenerateStep,
    #[error("no cutoff n0 <= {n_max} with |f^(n)| < 1 on the disc")]
    CutoffNotFound { n_max: usize },
    #[error("measured exponential type {measured} disagrees with declared type {declared}")]
    CatalogueInconsistent { declared: f64, measured: f64 },
    #[error("invalid node system: {0}")]
    InvalidNodes(String),
    #[error("invalid node sequence: {0}")]
    InvalidSequence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
