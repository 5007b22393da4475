//! Differential-algebra workbench: exact differential polynomials, Ritt
//! reduction with certificates, Rosenfeld-style characteristic-set
//! certification, the prolongation τ, and checks for instances of the
//! geometric axiom scheme for differentially closed fields.

pub mod algebra;
pub mod diffpoly;
pub mod error;
pub mod geometry;
pub mod par;
pub mod prolong;
pub mod ranking;
pub mod reduction;
pub mod scalar;

pub use algebra::{AlgIdeal, MonomialOrder, PrimalityConfig, PrimalityVerdict};
pub use diffpoly::{DerivVar, DiffPoly, Family, FieldMode, ModelPoint, Monomial, MultiIndex, Ring};
pub use error::{Error, Result};
pub use par::Exec;
pub use ranking::Ranking;
pub use reduction::{RankedSystem, ReductionCertificate};
pub use scalar::{Scalar, TPoly};
