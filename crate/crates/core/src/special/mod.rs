//! Numerical special functions and Gaussian quadrature.
//!
//! Everything here is a pure function of its arguments. The incomplete gamma
//! and Marcum Q routines are restricted to integer shape/order, which is all
//! the chi-square energy statistics need.

mod entropy;
mod euler;
mod gamma;
mod marcum;
mod quadrature;

pub use entropy::{binary_entropy, binary_entropy_inverse, log1p_exp_scaled};
pub use euler::{euler_number, falling_factorial, MAX_EULER_INDEX};
pub use gamma::{ln_factorial, regularized_gamma_lower, regularized_gamma_upper};
pub use marcum::{marcum_q, marcum_q_complement};
pub use quadrature::{gauss_rule, QuadratureKind, QuadratureRule};
