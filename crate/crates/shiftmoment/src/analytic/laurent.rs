use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Trapezoid nodes on every residue contour.
pub const CONTOUR_NODES: usize = 128;
const RADIUS_TOL: f64 = 1e-9;

/// Finite Laurent expansion Σ_k coeffs[k] (s - center)^{min_order + k}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentSeries {
    pub center: Complex64,
    pub min_order: i32,
    pub coeffs: Vec<Complex64>,
}

impl LaurentSeries {
    pub fn coefficient(&self, order: i32) -> Complex64 {
        let k = order - self.min_order;
        if k < 0 || k as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[k as usize]
        }
    }

    pub fn residue(&self) -> Complex64 {
        self.coefficient(-1)
    }

    pub fn max_order(&self) -> i32 {
        self.min_order + self.coeffs.len() as i32 - 1
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let d = s - self.center;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * d + c;
        }
        acc * d.powi(self.min_order)
    }

    /// k-th derivative at the center of the regular part (k! c_k).
    pub fn derivative_at_center(&self, k: u32) -> Complex64 {
        let f: f64 = (1..=k).map(|i| i as f64).product();
        self.coefficient(k as i32) * f
    }
}

/// Nodes s_j = center + r e^{iθ_j}, θ_j = 2π(j + 1/2)/m, symmetric under conjugation
/// when the center is real.
pub fn circle_nodes(center: Complex64, radius: f64, m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|j| center + Complex64::from_polar(radius, 2.0 * PI * (j as f64 + 0.5) / m as f64))
        .collect()
}

fn coefficients_from_samples(
    samples: &[Complex64],
    radius: f64,
    pole_order: usize,
    n_coeffs: usize,
) -> Vec<Complex64> {
    let m = samples.len();
    (0..n_coeffs)
        .map(|i| {
            let k = i as i32 - pole_order as i32;
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, v) in samples.iter().enumerate() {
                let th = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                acc += v * Complex64::from_polar(1.0, -(k as f64) * th);
            }
            acc / m as f64 * radius.powi(-k)
        })
        .collect()
}

/// Laurent coefficients without the radius self-check.
pub fn cauchy_coeffs_unchecked(
    f: impl Fn(Complex64) -> Complex64,
    center: Complex64,
    pole_order: usize,
    n_coeffs: usize,
    radius: f64,
    nodes: usize,
) -> LaurentSeries {
    let samples: Vec<Complex64> = circle_nodes(center, radius, nodes).into_iter().map(&f).collect();
    LaurentSeries {
        center,
        min_order: -(pole_order as i32),
        coeffs: coefficients_from_samples(&samples, radius, pole_order, n_coeffs),
    }
}

/// Coefficients of orders -pole_order .. -pole_order + n_coeffs - 1 by the
/// trapezoid rule on |s - center| = radius, repeated at radius/2; the
/// residue (or the constant term for analytic f) must agree to 1e-9.
pub fn cauchy_coeffs(
    f: impl Fn(Complex64) -> Complex64,
    center: Complex64,
    pole_order: usize,
    n_coeffs: usize,
    radius: f64,
) -> Result<LaurentSeries> {
    let m = CONTOUR_NODES;
    let s1: Vec<Complex64> = circle_nodes(center, radius, m).into_iter().map(&f).collect();
    let s2: Vec<Complex64> = circle_nodes(center, radius / 2.0, m).into_iter().map(&f).collect();
    let check_order: i32 = if pole_order >= 1 { -1 } else { 0 };
    let n_check = (check_order + pole_order as i32 + 1) as usize;
    let c1 = coefficients_from_samples(&s1, radius, pole_order, n_coeffs.max(n_check));
    let c2 = coefficients_from_samples(&s2, radius / 2.0, pole_order, n_check);
    let idx = (check_order + pole_order as i32) as usize;
    let (a, b) = (c1[idx], c2[idx]);
    let fmax = s1.iter().chain(&s2).map(|v| v.norm()).fold(0.0, f64::max);
    // rounding floor of a trapezoid coefficient of this order
    let floor = 1e-13 * fmax * (radius / 2.0).powi(-check_order).max(radius.powi(-check_order));
    let diff = (a - b).norm();
    let scale = a.norm().max(b.norm());
    if !(diff <= RADIUS_TOL * scale + floor) {
        return Err(Error::RadiusInconsistency {
            first: format!("{a}"),
            second: format!("{b}"),
            relative: diff / scale.max(f64::MIN_POSITIVE),
        });
    }
    let mut coeffs = c1;
    coeffs.truncate(n_coeffs);
    Ok(LaurentSeries { center, min_order: -(pole_order as i32), coeffs })
}

/// (1/2πi) ∮ f over |s - center| = radius, cross-checked at `inner_radius`
/// (which must still enclose every singularity).
pub fn circle_integral_checked(
    f: impl Fn(Complex64) -> Complex64,
    center: Complex64,
    radius: f64,
    inner_radius: f64,
) -> Result<Complex64> {
    let m = CONTOUR_NODES;
    let integral = |r: f64| -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut fmax: f64 = 0.0;
        for s in circle_nodes(center, r, m) {
            let v = f(s) * (s - center);
            fmax = fmax.max(v.norm());
            acc += v;
        }
        (acc / m as f64, fmax)
    };
    let (a, fa) = integral(radius);
    let (b, fb) = integral(inner_radius);
    let diff = (a - b).norm();
    let scale = a.norm().max(b.norm());
    if !(diff <= RADIUS_TOL * scale + 1e-13 * fa.max(fb)) {
        return Err(Error::RadiusInconsistency {
            first: format!("{a}"),
            second: format!("{b}"),
            relative: diff / scale.max(f64::MIN_POSITIVE),
        });
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{zeta_em, EULER_GAMMA};
    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn simple_pole() {
        let l = cauchy_coeffs(|s| s.inv(), c(0.0, 0.0), 1, 3, 0.5).unwrap();
        assert!((l.residue() - 1.0).norm() < 1e-15);
        assert!(l.coefficient(0).norm() < 1e-15);
    }

    #[test]
    fn zeta_laurent_at_one() {
        let l = cauchy_coeffs(|s| zeta_em(s + 1.0, 40), c(0.0, 0.0), 1, 3, 0.5).unwrap();
        assert!((l.residue() - 1.0).norm() < 1e-13);
        assert!((l.coefficient(0).re - EULER_GAMMA).abs() < 1e-13);
        assert!((l.coefficient(1).re - 0.07281584548367672).abs() < 1e-12);
    }

    #[test]
    fn radius_check_catches_a_pole_on_the_wrong_side() {
        // a pole at 0.3 sits between the two radii
        let r = cauchy_coeffs(|s| (s - 0.3).inv(), c(0.0, 0.0), 0, 2, 0.5);
        assert!(matches!(r, Err(Error::RadiusInconsistency { .. })));
    }

    #[test]
    fn eval_reproduces_function() {
        let f = |s: Complex64| s.exp() / (s * s);
        let l = cauchy_coeffs(f, c(0.0, 0.0), 2, 30, 1.0).unwrap();
        let s = c(0.2, -0.3);
        assert!((l.eval(s) - f(s)).norm() < 1e-12);
        assert!((l.derivative_at_center(1) - 1.0 / 6.0).norm() < 1e-13);
    }

    #[test]
    fn circle_integral_sums_enclosed_residues() {
        let f = |s: Complex64| 1.0 / ((s - 0.01) * (s + 0.02)) + 3.0 / (s - c(0.0, 0.05));
        let v = circle_integral_checked(f, c(0.0, 0.0), 0.3, 0.15).unwrap();
        assert!((v - 3.0).norm() < 1e-13);
    }
}
