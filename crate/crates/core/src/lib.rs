//! Certified multiprecision evaluation of the complete elliptic integrals
//! K and E, exact Maclaurin coefficients of functions built from them, and a
//! verifier for monotonicity, convexity, range and inequality claims.

pub mod approx;
pub mod bounds;
pub mod constant;
pub mod ell;
pub mod error;
pub mod exact;
pub mod functions;
mod par;
pub mod precision;
pub mod verifier;

pub use approx::{Approx, EvalResult};
pub use constant::{Constant, Endpoint};
pub use ell::Modulus;
pub use error::{Error, Result};
pub use precision::PrecisionConfig;
