//! Quadrature engines shared by the other modules: Gauss–Legendre rules,
//! globally adaptive Gauss–Kronrod (7/15) for real and complex integrands,
//! tanh-sinh for endpoint singularities, and a compensated accumulator.

use crate::error::{Error, Result};
use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::ops::{Add, Mul, Sub};

/// Values that can be integrated: reals and complex numbers.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated complex sum (componentwise).
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: KahanSum,
    im: KahanSum,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// n-point Gauss–Legendre rule on [-1, 1] by Newton iteration on P_n.
    pub fn legendre(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussRule { nodes, weights }
    }

    /// Integrate over [a, b].
    pub fn integrate<T: Integrand>(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> T) -> T {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * (w * half);
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

static GL8: Lazy<GaussRule> = Lazy::new(|| GaussRule::legendre(8));
static GL16: Lazy<GaussRule> = Lazy::new(|| GaussRule::legendre(16));
static GL32: Lazy<GaussRule> = Lazy::new(|| GaussRule::legendre(32));

/// Cached rules for the panel sizes used throughout the crate.
pub fn gauss_rule(n: usize) -> &'static GaussRule {
    match n {
        8 => &GL8,
        16 => &GL16,
        32 => &GL32,
        _ => panic!("no cached Gauss-Legendre rule with {n} nodes"),
    }
}

// Kronrod 15-point extension of Gauss 7 (QUADPACK qk15 tables).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<T: Integrand>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        let s = f1 + f2;
        kron = kron + s * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    let err = (kron - gauss).magnitude();
    (kron, err)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evals: usize,
}

/// Tolerances and limits for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Adaptive { abs_tol: 1e-12, rel_tol: 1e-10, max_intervals: 4000 }
    }
}

impl Adaptive {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Adaptive { abs_tol, rel_tol, ..Default::default() }
    }

    pub fn max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n;
        self
    }

    /// Integrate over [a, b] with initial breakpoints; fails if the
    /// interval budget runs out before the tolerance is met.
    pub fn integrate<T: Integrand>(
        &self,
        mut f: impl FnMut(f64) -> T,
        breakpoints: &[f64],
    ) -> Result<QuadResult<T>> {
        assert!(breakpoints.len() >= 2, "need at least an interval");
        let mut intervals: Vec<(f64, f64, T, f64)> = Vec::new();
        let mut evals = 0;
        for w in breakpoints.windows(2) {
            if w[1] == w[0] {
                continue;
            }
            let (v, e) = gk15(&mut f, w[0], w[1]);
            evals += 15;
            intervals.push((w[0], w[1], v, e));
        }
        loop {
            let mut total = T::zero();
            let mut err = 0.0;
            for iv in &intervals {
                total = total + iv.2;
                err += iv.3;
            }
            let target = self.abs_tol.max(self.rel_tol * total.magnitude());
            if err <= target {
                return Ok(QuadResult { value: total, error: err, evals });
            }
            if intervals.len() >= self.max_intervals {
                return Err(Error::Quadrature { requested: target, achieved: err });
            }
            let (idx, _) = intervals
                .iter()
                .enumerate()
                .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
                .expect("nonempty");
            let (a, b, _, _) = intervals.swap_remove(idx);
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                return Err(Error::Quadrature { requested: target, achieved: err });
            }
            let (v1, e1) = gk15(&mut f, a, m);
            let (v2, e2) = gk15(&mut f, m, b);
            evals += 30;
            intervals.push((a, m, v1, e1));
            intervals.push((m, b, v2, e2));
        }
    }
}

/// Tanh-sinh quadrature on (0, 1). The integrand receives both `w` and
/// `1 - w` so that endpoint factors like `(1-w)^p` keep full precision.
pub fn tanh_sinh_unit<T: Integrand>(
    mut f: impl FnMut(f64, f64) -> T,
    rel_tol: f64,
) -> Result<QuadResult<T>> {
    use std::f64::consts::FRAC_PI_2;
    let t_max = 3.5;
    let mut h = 0.5;
    let mut evals = 0;
    // Level 0 sum over the coarse grid; each refinement adds the odd nodes.
    let mut node = |u: f64| -> Option<T> {
        let s = FRAC_PI_2 * u.sinh();
        let ch = s.cosh();
        // w = (1 + tanh s)/2 and 1 - w = (1 - tanh s)/2 = e^{-s}/(2 cosh s)
        let e = (-2.0 * s.abs()).exp();
        let small = e / (1.0 + e);
        let (w, wc) = if s >= 0.0 { (1.0 - small, small) } else { (small, 1.0 - small) };
        if w <= 0.0 || wc <= 0.0 {
            return None;
        }
        let dw = 0.5 * FRAC_PI_2 * u.cosh() / (ch * ch);
        if dw == 0.0 {
            return None;
        }
        Some(f(w, wc) * dw)
    };
    let mut sum = T::zero();
    let mut k = 0;
    let mut u = 0.0;
    while u <= t_max {
        if let Some(v) = node(u) {
            sum = sum + v;
        }
        evals += 1;
        if k > 0 {
            if let Some(v) = node(-u) {
                sum = sum + v;
            }
            evals += 1;
        }
        k += 1;
        u = k as f64 * h;
    }
    let mut prev = sum * h;
    for _level in 0..10 {
        h *= 0.5;
        let mut j = 1;
        let mut u = h;
        while u <= t_max {
            if let Some(v) = node(u) {
                sum = sum + v;
            }
            if let Some(v) = node(-u) {
                sum = sum + v;
            }
            evals += 2;
            j += 2;
            u = j as f64 * h;
        }
        let cur = sum * h;
        let diff = (cur - prev).magnitude();
        if diff <= rel_tol * cur.magnitude() || diff < 1e-300 {
            return Ok(QuadResult { value: cur, error: diff, evals });
        }
        prev = cur;
    }
    let achieved = (prev).magnitude();
    Err(Error::Quadrature { requested: rel_tol, achieved: if achieved > 0.0 { achieved } else { f64::INFINITY } })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rules_integrate_polynomials_exactly() {
        for n in [8, 16, 32] {
            let r = gauss_rule(n);
            let v: f64 = r.integrate(0.0, 2.0, |x| x.powi(2 * n as i32 - 1));
            let exact = 2f64.powi(2 * n as i32) / (2 * n) as f64;
            assert!((v - exact).abs() <= 1e-12 * exact, "n={n}");
            let wsum: f64 = r.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn adaptive_handles_peaks_and_complex_values() {
        let q = Adaptive::new(1e-13, 1e-12);
        let r = q.integrate(|x: f64| 1.0 / (1e-4 + x * x), &[-1.0, 1.0]).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((r.value - exact).abs() < 1e-9 * exact);
        let c = q
            .integrate(|x: f64| Complex64::new(0.0, 7.0 * x).exp(), &[0.0, 1.0])
            .unwrap();
        let exact = (Complex64::new(0.0, 7.0).exp() - 1.0) / Complex64::new(0.0, 7.0);
        assert!((c.value - exact).norm() < 1e-12);
    }

    #[test]
    fn adaptive_reports_failure() {
        let q = Adaptive::new(1e-15, 1e-15).max_intervals(4);
        let r = q.integrate(|x: f64| (1.0 / x).sin(), &[1e-6, 1.0]);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // Beta(1/2, 1/2) = pi
        let r = tanh_sinh_unit(|w, wc| 1.0 / (w * wc).sqrt(), 1e-12).unwrap();
        assert!((r.value - std::f64::consts::PI).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut k = KahanSum::new();
        k.add(1e16);
        for _ in 0..1000 {
            k.add(1.0);
        }
        k.add(-1e16);
        assert_eq!(k.value(), 1000.0);
    }
}
