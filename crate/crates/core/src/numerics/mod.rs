//! Exact rational arithmetic, exact linear algebra, and an exact-feasibility
//! simplex solver. Everything downstream of the geometry rests on these being
//! exact: no floating point enters any verdict that claims exactness.

mod matrix;
mod rational;
mod simplex;

pub use matrix::{affine_dimension, RationalMatrix};
pub use rational::Rational;
pub use simplex::{lp_feasible, verify_infeasibility_certificate, LpOutcome, LpProblem};
