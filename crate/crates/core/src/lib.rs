//! Exact computations for the spin-c Dirac operator on the unit circle bundle
//! of a positive line bundle over an even-dimensional base.
//!
//! The crate evaluates the eta invariant as the sum of three pieces:
//!
//! * the adiabatic limit `½∫_X Â(X)·η̂_r·e^{rc}`,
//! * the transgression integral `∫₀^ε dδ ∫_X Ω₂·e^{Ω₀}·e^{rc}`,
//! * twice the spectral flow of the family `D_{r,δ}`, `0 ≤ δ ≤ ε`,
//!
//! and cross-checks the spectral side by enumerating the two eigenvalue
//! families of the decomposed operator. All arithmetic is exact: rationals,
//! Gaussian rationals and polynomials in the formal parameters `δ` and `α`.
//!
//! ```
//! use etafano::{catalog, eta, arith::{int, rat}};
//!
//! let (spec, model) = catalog::product_cp1_model(2).unwrap();
//! let value = eta::adiabatic_limit_eta(&spec, &rat(1, 2), None).unwrap();
//! assert_eq!(value, rat(-1, 24));
//! let res = eta::eta_invariant(&spec, &model, &int(0), &int(1), &Default::default()).unwrap();
//! assert_eq!(res.total_real(), Some(int(0)));
//! ```

pub mod arith;
pub mod catalog;
pub mod error;
pub mod eta;
pub mod ring;
pub mod series;
pub mod spectral;

pub use arith::{GaussianRational, ParamPoly, Rational};
pub use catalog::ManifoldSpec;
pub use error::{Error, Result};
pub use eta::{EtaOptions, EtaResult};
pub use ring::{GradedClass, RingSpec};
pub use series::{ChernRoot, Convention, FormalSeries};
pub use spectral::{FlowOptions, SignConvention, SpectralFlowReport, SpectralMode, SpectralModel};
