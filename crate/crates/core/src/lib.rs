//! Numerical toolkit for variable-exponent Gaussian Besov-Lipschitz spaces:
//! Hermite expansions, the Ornstein-Uhlenbeck and Poisson-Hermite
//! semigroups, Gaussian Bessel potentials and fractional derivatives, and an
//! inequality-verification harness.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod besov;
pub mod defaults;
pub mod error;
pub mod exponents;
pub mod hermite;
pub mod operators;
pub mod quad;
pub mod semigroups;
pub mod special;
pub mod verify;

pub use besov::{besov_norm, besov_seminorm, BesovParams, SeminormResult};
pub use defaults::{defaults, Defaults};
pub use error::{Error, Result};
pub use exponents::{DiscretizedFunction, ExponentFunction, OuterExponent};
pub use hermite::{HermiteExpansion, MultiIndex, QuadratureRule};
pub use semigroups::{SubordinationQuadrature, TimeGrid};
pub use verify::{Bound, Harness, Member, VerificationReport};
