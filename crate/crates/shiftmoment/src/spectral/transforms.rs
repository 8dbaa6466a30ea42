//! Ξ(z;U), Θ(y;U) and the weight ν_δ(y) of the small-shift spectral expansion.

use crate::error::{domain, Result};
use crate::quad::Adaptive;
use crate::smoothing::{window_mellin, Window, WindowKind};
use crate::special::{beta_fn, chi, hyp2f1_neg};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    WindowProfile,
    ExplicitGrid,
}

/// A test function U on x > 0, either a window profile or linear
/// interpolation of sampled (x, U(x)) pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub kind: TestKind,
    pub window: Option<Window>,
    pub grid: Option<Vec<(f64, f64)>>,
}

const END_TOL: f64 = 1e-12;

impl TestFunction {
    pub fn from_window(w: Window) -> Result<Self> {
        if w.kind == WindowKind::Indicator {
            return Err(domain("TestFunction", "indicator windows do not decay at the ends"));
        }
        let (a, b) = w.support();
        if a <= 0.0 {
            return Err(domain("TestFunction", format!("support [{a}, {b}] must lie in x > 0")));
        }
        if w.eval(a).abs() > END_TOL || w.eval(b).abs() > END_TOL {
            return Err(domain("TestFunction", "window does not vanish at its support ends"));
        }
        Ok(TestFunction { kind: TestKind::WindowProfile, window: Some(w), grid: None })
    }

    pub fn from_grid(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(domain("TestFunction", "grid needs at least two points"));
        }
        if points[0].0 <= 0.0 || points.windows(2).any(|p| !(p[1].0 > p[0].0)) {
            return Err(domain("TestFunction", "grid abscissae must be positive and increasing"));
        }
        if points.iter().any(|p| !p.1.is_finite()) {
            return Err(domain("TestFunction", "grid values must be finite"));
        }
        let (first, last) = (points[0].1, points[points.len() - 1].1);
        if first.abs() > END_TOL || last.abs() > END_TOL {
            return Err(domain("TestFunction", "grid values must vanish at both ends"));
        }
        Ok(TestFunction { kind: TestKind::ExplicitGrid, window: None, grid: Some(points) })
    }

    pub fn support(&self) -> (f64, f64) {
        match (&self.window, &self.grid) {
            (Some(w), _) => w.support(),
            (None, Some(g)) => (g[0].0, g[g.len() - 1].0),
            _ => unreachable!("constructors set exactly one of window and grid"),
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match (&self.window, &self.grid) {
            (Some(w), _) => w.breakpoints(),
            (None, Some(g)) => {
                let step = (g.len() / 512).max(1);
                let mut v: Vec<f64> = g.iter().step_by(step).map(|p| p.0).collect();
                if v.last() != Some(&g[g.len() - 1].0) {
                    v.push(g[g.len() - 1].0);
                }
                v
            }
            _ => unreachable!(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match (&self.window, &self.grid) {
            (Some(w), _) => w.eval(x),
            (None, Some(g)) => {
                if x <= g[0].0 || x >= g[g.len() - 1].0 {
                    return 0.0;
                }
                let i = g.partition_point(|p| p.0 <= x);
                let (x0, y0) = g[i - 1];
                let (x1, y1) = g[i];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
            _ => unreachable!(),
        }
    }
}

fn half_integer(z: Complex64) -> Option<u32> {
    let k = z.re + 0.5;
    (z.im == 0.0 && k >= 1.0 && k == k.floor() && k < 1e6).then_some(k as u32)
}

/// Ξ(z;U) = B(1/2+z, 1/2+z) ∫ U(x) x^{-1/2-z} ₂F₁(1/2+z, 1/2+z; 1+2z; -1/x) dx.
pub fn xi_transform(z: Complex64, u: &TestFunction) -> Result<Complex64> {
    if !(z.re >= 0.0) {
        return Err(domain("xi_transform", format!("Re z = {} must be >= 0", z.re)));
    }
    if let Some(k) = half_integer(z) {
        return Ok(Complex64::new(xi_half_integer(k, u)?, 0.0));
    }
    xi_general(z, u)
}

/// The hypergeometric route for every z, used directly by the tests.
pub fn xi_general(z: Complex64, u: &TestFunction) -> Result<Complex64> {
    let a = z + 0.5;
    let c = z * 2.0 + 1.0;
    let pre = beta_fn(a, a)?;
    let (lo, hi) = u.support();
    let mut bp = u.breakpoints();
    let turns = (z.im.abs() * (hi / lo).ln() / PI).ceil() as usize;
    for k in 1..turns.clamp(1, 400) {
        bp.push(lo + (hi - lo) * k as f64 / turns as f64);
    }
    bp.sort_by(f64::total_cmp);
    bp.dedup();
    let mut failure = None;
    let r = Adaptive::new(1e-15, 1e-11).max_intervals(20_000).integrate(
        |x: f64| {
            let ux = u.eval(x);
            if ux == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            match hyp2f1_neg(a, a, c, x) {
                Ok(f) => f * (-a * x.ln()).exp() * ux,
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        &bp,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(pre * r.value)
}

/// Ξ(k-1/2;U) = B(k,k) ∫ U(x)(1+x)^{-k} Σ_n (k)_n²/((2k)_n n!) (1+x)^{-n} dx,
/// the Pfaff-transformed series with real terms.
pub fn xi_half_integer(k: u32, u: &TestFunction) -> Result<f64> {
    let kf = k as f64;
    let pre = beta_fn(Complex64::new(kf, 0.0), Complex64::new(kf, 0.0))?.re;
    let series = |x: f64| -> f64 {
        let v = 1.0 / (1.0 + x);
        let (mut term, mut sum) = (1.0, 1.0);
        for n in 0..200_000 {
            let nf = n as f64;
            term *= (kf + nf) * (kf + nf) / ((2.0 * kf + nf) * (nf + 1.0)) * v;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum * v.powi(k as i32)
    };
    let r = Adaptive::new(1e-300, 1e-12)
        .max_intervals(20_000)
        .integrate(|x: f64| u.eval(x) * series(x), &u.breakpoints())?;
    Ok(pre * r.value)
}

/// Θ(y;U) = ½Re[(1 + i/sinh πy)Ξ(iy;U)], evaluated at |y|.
pub fn theta_transform(y: f64, u: &TestFunction) -> Result<f64> {
    if y == 0.0 || !y.is_finite() {
        return Err(domain("theta_transform", "y must be finite and nonzero"));
    }
    let y = y.abs();
    let xi = xi_transform(Complex64::new(0.0, y), u)?;
    Ok(0.5 * (sinh_factor(y) * xi).re)
}

/// 1 + i/sinh(πy).
pub fn sinh_factor(y: f64) -> Complex64 {
    Complex64::new(1.0, 1.0 / (PI * y).sinh())
}

/// ν_δ(y) = (1 + i/sinh πy)·B(1/2+iy, 1/2+iy)·W̃(1/2-iy)·χ(1/2-iy+iδ),
/// W̃(s) = ∫₁^∞ W(x-δ/2)x^{s-1} dx.
pub fn nu_delta(y: f64, delta: f64, window: &Window) -> Result<Complex64> {
    if y == 0.0 || !y.is_finite() {
        return Err(domain("nu_delta", "y must be finite and nonzero"));
    }
    let w = window_mellin(window, Complex64::new(0.5, -y), delta)?;
    nu_assemble(y, delta, w)
}

// ν_δ(y) from a precomputed W̃(1/2-iy).
pub(crate) fn nu_assemble(y: f64, delta: f64, w: Complex64) -> Result<Complex64> {
    let a = Complex64::new(0.5, y);
    let b = beta_fn(a, a)?;
    let x = chi(Complex64::new(0.5, delta - y))?;
    Ok(sinh_factor(y) * b * w * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump12() -> TestFunction {
        TestFunction::from_window(Window::new(WindowKind::Bump, 1.0, 2.0, 0.4).unwrap()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_function_and_linearity() {
        let zero = TestFunction::from_grid(vec![(1.0, 0.0), (1.5, 0.0), (2.0, 0.0)]).unwrap();
        assert_eq!(xi_transform(c(0.0, 3.0), &zero).unwrap(), c(0.0, 0.0));
        assert_eq!(theta_transform(3.0, &zero).unwrap(), 0.0);

        let xs: Vec<f64> = (0..=200).map(|i| 1.0 + i as f64 / 200.0).collect();
        let f1 = |x: f64| ((x - 1.0) * (2.0 - x)).powi(2);
        let f2 = |x: f64| (x - 1.0) * (2.0 - x) * x.sin();
        let g = |f: &dyn Fn(f64) -> f64| TestFunction::from_grid(xs.iter().map(|&x| (x, f(x))).collect()).unwrap();
        let (u1, u2, u12) = (g(&f1), g(&f2), g(&|x| f1(x) + f2(x)));
        let z = c(0.0, 2.5);
        let lhs = xi_transform(z, &u12).unwrap();
        let rhs = xi_transform(z, &u1).unwrap() + xi_transform(z, &u2).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1e-3));
    }

    #[test]
    fn grid_validation() {
        assert!(TestFunction::from_grid(vec![(1.0, 0.5), (2.0, 0.0)]).is_err());
        assert!(TestFunction::from_grid(vec![(2.0, 0.0), (1.0, 0.0)]).is_err());
        assert!(TestFunction::from_window(Window::indicator(1.0, 2.0).unwrap()).is_err());
    }

    // ∫₀¹ (w(1-w))^{-1/2+iy}(x+w)^{-1/2-iy} dw with w = e^{-v}/2 near each end.
    fn inner_double(x: f64, y: f64) -> Complex64 {
        let e = c(-0.5, y);
        let f = |w: f64, om: f64| (e * (w * om).ln()).exp() * (-(c(0.5, y)) * (x + w).ln()).exp();
        let quad = Adaptive::new(1e-15, 1e-13).max_intervals(4000);
        let bp: Vec<f64> = (0..=20).map(|k| k as f64 * 4.0).collect();
        let left = quad.integrate(|v: f64| {
            let w = 0.5 * (-v).exp();
            f(w, 1.0 - w) * w
        }, &bp).unwrap().value;
        let right = quad.integrate(|v: f64| {
            let om = 0.5 * (-v).exp();
            f(1.0 - om, om) * om
        }, &bp).unwrap().value;
        left + right
    }

    #[test]
    fn matches_double_integral_representation() {
        let u = bump12();
        let y = 5.0;
        let xi = xi_transform(c(0.0, y), &u).unwrap();
        let bp: Vec<f64> = (0..=8).map(|k| 1.0 + k as f64 / 8.0).collect();
        let oracle = Adaptive::new(1e-14, 1e-11)
            .integrate(|x: f64| inner_double(x, y) * u.eval(x), &bp)
            .unwrap()
            .value;
        assert!((xi - oracle).norm() < 1e-8, "{xi} {oracle}");
    }

    #[test]
    fn half_integer_fast_path_matches_general_route() {
        let u = bump12();
        for k in [1u32, 2, 4] {
            let fast = xi_half_integer(k, &u).unwrap();
            let slow = xi_general(c(k as f64 - 0.5, 0.0), &u).unwrap();
            assert!((fast - slow.re).abs() < 1e-10 * fast.abs() && slow.im.abs() < 1e-12, "k={k} {fast} {slow}");
        }
    }

    #[test]
    fn half_integer_values_decay_geometrically() {
        let u = bump12();
        let v: Vec<f64> = (6..=12).map(|k| xi_half_integer(k, &u).unwrap()).collect();
        for w in v.windows(2) {
            assert!((w[1] / w[0]).abs() <= 0.5, "{w:?}");
        }
    }

    #[test]
    fn theta_is_even_and_composes() {
        let u = bump12();
        assert_eq!(theta_transform(1.3, &u).unwrap(), theta_transform(-1.3, &u).unwrap());
        let xi = xi_transform(c(0.0, 1.0), &u).unwrap();
        let direct = 0.5 * (xi.re - xi.im / PI.sinh());
        assert!((theta_transform(1.0, &u).unwrap() - direct).abs() < 1e-12 * direct.abs().max(1.0));
        // sinh suppression at large y
        let y = 12.0;
        let xi = xi_transform(c(0.0, y), &u).unwrap();
        assert!((theta_transform(y, &u).unwrap() - 0.5 * xi.re).abs() < 1e-12);
    }

    #[test]
    fn nu_reassembly_and_symmetry() {
        let w = Window::new(WindowKind::Bump, 1000.0, 2000.0, 200.0).unwrap();
        let (y, d) = (2.0, 1.0);
        let a = c(0.5, y);
        let hand = c(1.0, 1.0 / (PI * y).sinh())
            * beta_fn(a, a).unwrap()
            * window_mellin(&w, c(0.5, -y), d).unwrap()
            * chi(c(0.5, d - y)).unwrap();
        let v = nu_delta(y, d, &w).unwrap();
        assert!((v - hand).norm() <= 1e-12 * hand.norm());
        // δ = 0: the χ factor is unimodular
        let n0 = nu_delta(y, 0.0, &w).unwrap();
        let bare = c(1.0, 1.0 / (PI * y).sinh()) * beta_fn(a, a).unwrap() * window_mellin(&w, c(0.5, -y), 0.0).unwrap();
        assert!((n0.norm() - bare.norm()).abs() < 1e-12 * bare.norm());
    }

    #[test]
    fn nu_decay_bound() {
        let w = Window::new(WindowKind::Bump, 1000.0, 2000.0, 200.0).unwrap();
        let t = 2000.0f64;
        for y in [0.05, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0] {
            let v = nu_delta(y, 0.0, &w).unwrap().norm();
            let bound = 10.0 * t.sqrt() * (1.0 + 1.0 / y) / (1.0 + y).powf(1.5);
            assert!(v <= bound, "y={y}: {v} > {bound}");
        }
    }
}
