//! Complex special functions: log Γ, χ, θ, Beta, ζ, ₂F₁ and the Stieltjes constants.

mod gamma;
mod hyp;
mod stieltjes;
pub(crate) mod zeta;

pub use gamma::{beta_fn, chi, chi_critical, gamma_real, log_gamma, theta};
pub(crate) use gamma::log_gamma_unchecked;
pub use hyp::{hyp2f1_euler, hyp2f1_neg, hyp2f1_pfaff, hyp2f1_series};
pub use stieltjes::{stieltjes, w_zeta_one_plus_w, StieltjesTable, EULER_GAMMA};
pub use zeta::{
    em_default_terms, hardy_z, hardy_z_rs, rs_correction, zeta, zeta_critical, zeta_critical_sq,
    zeta_em, zeta_eval, zeta_taylor, ZetaEval, ZetaMethod, CRITICAL_VALIDATED_T, EM_VALIDATED_T,
    RS_MIN_T,
};
pub(crate) use zeta::zeta_fast;

/// Alias used across the crate for generic complex arguments.
pub type ComplexValue = num_complex::Complex64;
