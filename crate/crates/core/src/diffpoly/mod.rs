//! Differential polynomials over ℚ or ℚ(t₁,…,t_{m+1}): arithmetic,
//! the Δ-derivations, formal partials, parsing and evaluation at model points.

mod model;
mod parse;
mod poly;
mod ring;
mod var;

pub use model::{eval_at_model_point, eval_doubled, ModelPoint};
pub use poly::{DiffPoly, Monomial};
pub use ring::{FieldMode, Ring};
pub use var::{DerivVar, Family, MultiIndex};
