//! Quadrature and dense linear algebra shared by the rest of the crate.

mod linalg;
mod quadrature;
mod tails;

pub use linalg::{singular_values, top_singular_value, POWER_MAX_ITER};
pub use quadrature::{
    integrate, integrate_tail, integrate_with_breaks, principal_value, principal_value_with_breaks,
    Interval, Quadrature, QuadratureSpec,
};
pub use tails::{integrate_two_sided, ExpSum, ExpTerm};
