//! Exact scalar arithmetic.
//!
//! Everything that feeds a sign decision or a top-degree integral goes through
//! these types. There is no floating point anywhere on a decision path.

mod param_poly;
mod rational;
mod sign;

pub use param_poly::{Param, ParamPoly};
pub use rational::{
    fract, gauss, int, is_integer, parse_rational, rat, to_decimal, GaussianRational, Rational,
};
pub(crate) use rational::{ceil_i64, factorial, floor_i64, sign_of};
pub use sign::{
    quad_nonneg_on_interval, quadratic_roots, sqrt_sign, surd_sign, QuadRoot, QuadVerdict, Surd,
};

pub mod serde_rational;
