//! log Γ, the functional-equation factor χ(s), the Riemann–Siegel phase θ(t)
//! and the Beta function.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const LN_2PI_HALF: f64 = 0.918_938_533_204_672_8; // ln(2π)/2

// B_{2k} / (2k (2k-1)) for k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

fn is_nonpositive_integer(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.floor()
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_2PI_HALF + series
}

/// Principal branch of log Γ(s): the analytic continuation of the real
/// logarithm from the positive axis, cut along the negative real axis.
pub fn log_gamma(s: Complex64) -> Result<Complex64> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(crate::error::domain("log_gamma", format!("non-finite argument {s}")));
    }
    if is_nonpositive_integer(s) {
        return Err(Error::Pole { function: "log_gamma", at: format!("{s}") });
    }
    Ok(log_gamma_unchecked(s))
}

/// As `log_gamma` without the pole check.
pub(crate) fn log_gamma_unchecked(s: Complex64) -> Complex64 {
    // Shift right until the Stirling series is accurate to rounding.
    // Summing principal logs of s+k keeps the result on the principal branch.
    let mut z = s;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 0.0 || z.norm() < 15.0 {
        shift += z.ln();
        z += 1.0;
    }
    stirling(z) - shift
}

/// Γ(s) for real s > 0 (used by a few closed forms).
pub fn gamma_real(x: f64) -> f64 {
    log_gamma_unchecked(Complex64::new(x, 0.0)).re.exp()
}

/// Riemann–Siegel theta function, odd in t and continuous.
pub fn theta(t: f64) -> f64 {
    if t < 0.0 {
        return -theta(-t);
    }
    if t > 20.0 {
        let x = t / (2.0 * PI);
        let r = 1.0 / t;
        let r2 = r * r;
        let tail = r
            * (1.0 / 48.0
                + r2 * (7.0 / 5760.0
                    + r2 * (31.0 / 80640.0 + r2 * (127.0 / 430080.0 + r2 * (511.0 / 1216512.0)))));
        0.5 * t * x.ln() - 0.5 * t - PI / 8.0 + tail
    } else {
        let lg = log_gamma_unchecked(Complex64::new(0.25, 0.5 * t));
        lg.im - 0.5 * t * PI.ln()
    }
}

/// χ(s) = π^{s-1/2} Γ((1-s)/2) / Γ(s/2). On the critical line this is
/// exp(-2iθ(t)), so its modulus is one to rounding.
pub fn chi(s: Complex64) -> Result<Complex64> {
    let half = Complex64::new(0.5, 0.0);
    let a = (Complex64::new(1.0, 0.0) - s) * half;
    if is_nonpositive_integer(a) {
        return Err(Error::Pole { function: "chi", at: format!("{s}") });
    }
    if s.re == 0.5 {
        return Ok(Complex64::from_polar(1.0, -2.0 * theta(s.im)));
    }
    let b = s * half;
    if is_nonpositive_integer(b) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let l = (s - 0.5) * PI.ln() + log_gamma_unchecked(a) - log_gamma_unchecked(b);
    Ok(l.exp())
}

/// χ(1/2 + it) without the generic checks.
pub fn chi_critical(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, -2.0 * theta(t))
}

/// B(a, b) = Γ(a)Γ(b)/Γ(a+b).
pub fn beta_fn(a: Complex64, b: Complex64) -> Result<Complex64> {
    let ab = a + b;
    for (z, name) in [(a, "a"), (b, "b"), (ab, "a+b")] {
        if is_nonpositive_integer(z) {
            return Err(Error::Pole { function: "beta_fn", at: format!("{name} = {z}") });
        }
    }
    Ok((log_gamma_unchecked(a) + log_gamma_unchecked(b) - log_gamma_unchecked(ab)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_gamma_trivial_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        let v = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((v.re - 0.5 * PI.ln()).abs() < 1e-14 && v.im.abs() < 1e-15);
        assert!(matches!(log_gamma(c(-3.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(log_gamma(c(0.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn log_gamma_matches_high_precision_values() {
        // reference values from a 40-digit evaluation
        let v = log_gamma(c(0.5, 50.0)).unwrap();
        let r = c(-77.62087780654015821978575, 145.601983624187541782558543);
        assert!((v - r).norm() <= 1e-12 * r.norm(), "{v}");
        let v = log_gamma(c(-3.5, 2.0)).unwrap();
        let r = c(-6.420091394575657853388377, -9.711907658196487230468897);
        assert!((v - r).norm() <= 1e-13 * r.norm(), "{v}");
    }

    #[test]
    fn log_gamma_is_continuous_on_vertical_lines() {
        // left of zero the cut lies on the real axis, so walk the upper half only
        for sigma in [-7.3, -0.5, 0.25, 0.5, 3.0] {
            let start = if sigma < 0.0 { 0.01 } else { -60.0 };
            let mut prev = log_gamma(c(sigma, start)).unwrap();
            let mut t = start;
            while t < 60.0 {
                t += 0.05;
                let v = log_gamma(c(sigma, t)).unwrap();
                assert!((v.im - prev.im).abs() < 0.5, "jump at sigma={sigma} t={t}");
                prev = v;
            }
        }
    }

    #[test]
    fn chi_values() {
        assert!((chi(c(0.5, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        let v = chi(c(-1.0, 0.0)).unwrap();
        assert!((v.re + 1.0 / (2.0 * PI * PI)).abs() < 1e-15 && v.im.abs() < 1e-15);
        assert!(matches!(chi(c(1.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(chi(c(5.0, 0.0)), Err(Error::Pole { .. })));
        assert_eq!(chi(c(-2.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn chi_on_line_matches_generic_formula_and_asymptotic_phase() {
        // generic log-gamma route slightly off the line agrees with the theta route
        for t in [3.0, 19.0, 21.0, 100.0, 1234.5] {
            let a = chi_critical(t);
            let s = c(0.5 + 1e-13, t);
            let l = (s - 0.5) * PI.ln() + log_gamma_unchecked((1.0 - s) * 0.5) - log_gamma_unchecked(s * 0.5);
            assert!((a - l.exp()).norm() < 1e-10, "t={t}");
        }
        let v = 100.0;
        let x = chi(c(0.5, v)).unwrap();
        assert!((x.norm() - 1.0).abs() < 1e-12);
        // chi(1/2+iv) ~ exp(-iv log(v/2πe) + iπ/4)
        let approx = Complex64::from_polar(1.0, -v * (v / (2.0 * PI * std::f64::consts::E)).ln() + PI / 4.0);
        assert!((x - approx).norm() < 1.0 / v);
    }

    #[test]
    fn theta_branches_join() {
        let below = {
            let lg = log_gamma_unchecked(c(0.25, 10.0 + 1e-9));
            lg.im - (10.0 + 1e-9) * PI.ln()
        };
        assert!((below - theta(20.0 + 2e-9)).abs() < 1e-12);
        assert_eq!(theta(-33.0), -theta(33.0));
    }

    #[test]
    fn beta_values() {
        assert!((beta_fn(c(1.0, 0.0), c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((beta_fn(c(1.0, 0.0), c(2.0, 0.0)).unwrap() - 0.5).norm() < 1e-14);
        assert!((beta_fn(c(0.5, 0.0), c(0.5, 0.0)).unwrap() - PI).norm() < 1e-13);
        assert!(beta_fn(c(-1.0, 0.0), c(0.5, 0.0)).is_err());
    }
}
