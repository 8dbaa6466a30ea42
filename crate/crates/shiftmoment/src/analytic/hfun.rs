//! The off-diagonal kernel
//!   h(z,s) = e^{2γ₀s}/ζ(2+2s) · (ζ(1+z+s)ζ(1-z+s) - 2sζ(1+2s)/(s²-z²)),
//! jointly analytic near the origin once the removable points s = ±z (and
//! s = z = 0) are filled in, and the diagonal Dirichlet-series generator
//! L(s) = ζ⁴(1+s)/ζ(2+2s).

use super::laurent::cauchy_coeffs_unchecked;
use crate::special::{w_zeta_one_plus_w, zeta_fast, zeta_taylor, EULER_GAMMA};
use num_complex::Complex64;

/// ζ⁴(1+s)/ζ(2+2s).
pub fn l_diag(s: Complex64) -> Complex64 {
    let z = zeta_fast(s + 1.0);
    let z2 = z * z;
    z2 * z2 / zeta_fast(s * 2.0 + 2.0)
}

fn w_zeta(w: Complex64) -> Complex64 {
    if w.norm() < 0.1 {
        w_zeta_one_plus_w(w)
    } else {
        w * zeta_fast(w + 1.0)
    }
}

// cancellation between the two bracketed terms grows like 1/|s² - z²|
const CANCEL_LIMIT: f64 = 1e-3;

fn h_tilde_direct(z: Complex64, s: Complex64) -> Complex64 {
    let a = zeta_fast(s + z + 1.0) * zeta_fast(s - z + 1.0);
    let b = w_zeta(s * 2.0) / (s * s - z * z);
    (a - b) / zeta_fast(s * 2.0 + 2.0)
}

/// e^{-2γ₀s} h(z,s), the form used by the moments-of-moments coefficients.
pub fn h_tilde(z: Complex64, s: Complex64) -> Complex64 {
    let q = (s * s - z * z).norm();
    if q >= CANCEL_LIMIT {
        return h_tilde_direct(z, s);
    }
    // Local Taylor model about the nearby removable point, sampled on a
    // circle where direct evaluation loses at most ~3 digits.
    let (center, radius) = if z.norm() < 0.05 {
        (Complex64::new(0.0, 0.0), 0.2)
    } else {
        let c = if (s - z).norm() <= (s + z).norm() { z } else { -z };
        (c, z.norm().min(0.1))
    };
    let model = cauchy_coeffs_unchecked(|u| h_tilde_direct(z, u), center, 0, 40, radius, 64);
    model.eval(s)
}

/// h(z,s) on |s| ≤ 1, |z| ≤ 10, removable points included.
pub fn h_offdiag(z: Complex64, s: Complex64) -> Complex64 {
    (s * (2.0 * EULER_GAMMA)).exp() * h_tilde(z, s)
}

/// h(z,0) = (ζ(1+z)ζ(1-z) + 1/z²)/ζ(2) for z away from 0.
pub fn h_at_zero(z: Complex64) -> Complex64 {
    h_offdiag(z, Complex64::new(0.0, 0.0))
}

/// Taylor coefficients [c0, c1, c2] of u ↦ h̃(it, u) at u = 0 for real t,
/// using differentiated Euler–Maclaurin series away from t = 0.
pub fn h_tilde_taylor_real_shift(t: f64) -> [f64; 3] {
    let t = t.abs();
    if t < 1.0 {
        // contour radius kept away from the removable points ±it
        let r = if (t - 0.25).abs() > 0.1 { 0.25 } else { 0.45 };
        let z = Complex64::new(0.0, t);
        let l = cauchy_coeffs_unchecked(|u| h_tilde(z, u), Complex64::new(0.0, 0.0), 0, 3, r, 32);
        return [l.coeffs[0].re, l.coeffs[1].re, l.coeffs[2].re];
    }
    let zero = Complex64::new(0.0, 0.0);
    let n = crate::special::em_default_terms(t);
    let zp = zeta_taylor::<3>(Complex64::new(1.0, t), n);
    // ζ(1 - it + u) has conjugate coefficients for real u
    let zm = [zp[0].conj(), zp[1].conj(), zp[2].conj()];
    let prod = crate::special::zeta::ser_mul(&zp, &zm);
    // 2uζ(1+2u) = 1 + 2γ₀u - 4γ₁u² + ...
    let g1 = -0.072_815_845_483_676_72;
    let w = [Complex64::new(1.0, 0.0), Complex64::new(2.0 * EULER_GAMMA, 0.0), Complex64::new(-4.0 * g1, 0.0)];
    // 1/(u² + t²)
    let t2 = t * t;
    let inv = [Complex64::new(1.0 / t2, 0.0), zero, Complex64::new(-1.0 / (t2 * t2), 0.0)];
    let second = crate::special::zeta::ser_mul(&w, &inv);
    let mut bracket = [zero; 3];
    for i in 0..3 {
        bracket[i] = prod[i] - second[i];
    }
    let rz = recip_zeta_two_series();
    let out = crate::special::zeta::ser_mul(&bracket, &rz);
    [out[0].re, out[1].re, out[2].re]
}

// Taylor coefficients of 1/ζ(2+2u) at u = 0.
fn recip_zeta_two_series() -> [Complex64; 3] {
    use once_cell::sync::Lazy;
    static S: Lazy<[Complex64; 3]> = Lazy::new(|| {
        let z = zeta_taylor::<3>(Complex64::new(2.0, 0.0), 60);
        // ζ(2+2u): coefficients scale by 2^k
        let a0 = z[0];
        let a1 = z[1] * 2.0;
        let a2 = z[2] * 4.0;
        let r0 = a0.inv();
        let r1 = -a1 * r0 * r0;
        let r2 = (a1 * a1 * r0 - a2) * r0 * r0;
        [r0, r1, r2]
    });
    *S
}
