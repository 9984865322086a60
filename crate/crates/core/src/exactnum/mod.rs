//! Exact scalars, polynomials, rational functions and dense linear algebra.

pub mod eigen;
pub mod factor;
pub mod matrix;
pub mod poly;
pub mod ratfun;
pub mod scalar;

pub use eigen::{binomial, joint_generalized_eigenspaces, JointSpace};
pub use factor::{factor_over_rationals, Factorization};
pub use matrix::{EchelonBasis, ExactMatrix, Field, Matrix};
pub use poly::Poly;
pub use ratfun::RatFun;
pub use scalar::{int, q, Scalar};

/// Rational function in the auxiliary regularization parameter ε.
pub type EpsElem = RatFun;

pub fn laurent_expand(f: &RatFun, order: usize) -> crate::error::Result<Vec<Scalar>> {
    f.laurent_expand(order)
}

pub fn eps_limit(v: &EpsElem) -> crate::error::Result<Scalar> {
    v.eps_limit()
}
