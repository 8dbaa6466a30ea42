//! Laurent/residue engine and the closed-form main terms built on it.

mod coeffs;
mod hfun;
mod laurent;
mod poly;
mod terms;

pub use coeffs::{a_coeffs, a_coeffs_all, phi_taylor};
pub use hfun::{h_at_zero, h_offdiag, h_tilde, h_tilde_taylor_real_shift, l_diag};
pub use laurent::{
    cauchy_coeffs, cauchy_coeffs_unchecked, circle_integral_checked, circle_nodes, LaurentSeries,
    CONTOUR_NODES,
};
pub use poly::{moment_polynomial, MomentPolynomial, PolyKind};
pub use terms::{diag_term, offdiag_term, q2_eval, DiagModel, HFunctionParams, OffDiagModel, Q2Model, DEGENERATE_DELTA};
