//! Shifted fourth moments of the Riemann zeta function, their off-diagonal
//! structure, the additive divisor problem and moments of moments.

pub mod analytic;
pub mod divisor;
pub mod empirical;
pub mod error;
pub mod momofmom;
pub mod quad;
pub mod report;
pub mod smoothing;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
