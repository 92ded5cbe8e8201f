// index-based loops are used deliberately throughout the dense linear
// algebra; iterator rewrites obscure the matrix structure
#![allow(clippy::needless_range_loop)]

//! Multi-point Lidstone/Whittaker/Gontcharoff interpolation of entire
//! functions.
//!
//! The crate provides, over exact Gaussian-rational arithmetic where the
//! objects are algebraic and `f64`/`Complex64` where they are analytic:
//!
//! - [`basis`]: the biorthogonal polynomial family `Lambda_{nj}` attached to
//!   an admissible node system, its boundary determinant, and the
//!   coefficient bounds that certify convergence;
//! - [`delta`]: the kernel determinant `Delta(t)`, its zero of fixed order
//!   at the origin, the zero-free radius that bounds the admissible
//!   exponential type, and the kernel functions `phi_j`;
//! - [`entire`]: a closed catalogue of entire functions with exactly known
//!   exponential type, growth-condition checks, the convergent periodic
//!   expansion with certified remainder, and a Laplace-transform
//!   cross-check;
//! - [`gontcharoff`]: the one-derivative-per-order `Omega` polynomials with
//!   three independent constructions and their expansion;
//! - [`detector`]: classifiers that turn integral derivative data plus slow
//!   growth into a polynomial certificate.

pub mod basis;
pub mod delta;
pub mod detector;
pub mod entire;
pub mod error;
pub mod gontcharoff;
pub mod poly;
pub mod scalar;

pub use basis::{BasisTable, NodeSystem, ThetaBound};
pub use delta::{DeltaProfile, KernelSystem};
pub use detector::{
    classify_periodic, classify_products, classify_sequence, polya_cutoff, IntegralityConfig,
    Outcome, SubsetRule, Verdict, Violation,
};
pub use entire::{
    expand_periodic, growth_ratio, laplace_contour_check, type_estimate, Atom, EntireFunction,
    ExpansionResult,
};
pub use error::{Error, Result};
pub use gontcharoff::{
    abel_closed_form, c_bound_sequence, expand_gontcharoff, omega_determinant, omega_integral,
    NodeSequence, OmegaTable, SequenceRule,
};
pub use poly::Polynomial;
pub use scalar::ExactScalar;
