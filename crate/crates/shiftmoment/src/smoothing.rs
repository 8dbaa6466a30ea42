//! Weights and cutoffs: smoothing windows W(t), the Gaussian Mellin factor
//! G(z) = e^{z²/Q}, the cutoffs I(w), J_δ(x,t), the exact contour weight
//! V_δ(x,t), the χ-product κ(t) with its phase φ(t), and window transforms.

use crate::error::{domain, Error, Result};
use crate::quad::{gauss_rule, Adaptive};
use crate::special::{chi_critical, log_gamma_unchecked, theta};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// The pair of shifts (α, β) with δ = β − α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftConfig {
    pub alpha: f64,
    pub beta: f64,
}

impl ShiftConfig {
    /// Shifts with 0 ≤ α ≤ β.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= 0.0 && beta >= alpha && beta.is_finite()) {
            return Err(domain("ShiftConfig", format!("need 0 <= alpha <= beta, got ({alpha}, {beta})")));
        }
        Ok(ShiftConfig { alpha, beta })
    }

    /// Any finite pair; used where the α ↔ β symmetry itself is under test.
    pub fn general(alpha: f64, beta: f64) -> Self {
        ShiftConfig { alpha, beta }
    }

    pub fn delta(&self) -> f64 {
        self.beta - self.alpha
    }

    /// T̃ = √(T(T+δ)).
    pub fn t_tilde(&self, t: f64) -> f64 {
        (t * (t + self.delta())).sqrt()
    }

    pub fn swapped(&self) -> Self {
        ShiftConfig { alpha: self.beta, beta: self.alpha }
    }
}

/// Width parameter Q of G(z) = e^{z²/Q}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingConfig {
    pub q: f64,
}

impl SmoothingConfig {
    pub fn new(q: f64) -> Result<Self> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(domain("SmoothingConfig", format!("Q = {q} must be >= 1")));
        }
        Ok(SmoothingConfig { q })
    }

    /// G(z) = e^{z²/Q}.
    pub fn g(&self, z: Complex64) -> Complex64 {
        (z * z / self.q).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    /// F_Δ ∗ 𝟙_[T1,T2] with F(t) = π^{-1/2} e^{-t²}.
    GaussianConv,
    /// Compactly supported bump built from p(x) = exp(-x⁻¹ exp(-(1-x)⁻¹)).
    Bump,
    Indicator,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub kind: WindowKind,
    pub t1: f64,
    pub t2: f64,
    pub delta: f64,
}

impl Window {
    pub fn new(kind: WindowKind, t1: f64, t2: f64, delta: f64) -> Result<Self> {
        if !(t1 < t2) || !t1.is_finite() || !t2.is_finite() {
            return Err(domain("Window", format!("need T1 < T2, got [{t1}, {t2}]")));
        }
        if kind != WindowKind::Indicator && !(delta > 0.0 && delta < (t2 - t1) / 2.0) {
            return Err(domain("Window", format!("need 0 < Delta < (T2-T1)/2, got {delta}")));
        }
        Ok(Window { kind, t1, t2, delta })
    }

    pub fn indicator(t1: f64, t2: f64) -> Result<Self> {
        Window::new(WindowKind::Indicator, t1, t2, 0.0)
    }

    /// Interval outside which W vanishes (to below e^{-100} for the Gaussian case).
    pub fn support(&self) -> (f64, f64) {
        match self.kind {
            WindowKind::GaussianConv => (self.t1 - 10.0 * self.delta, self.t2 + 10.0 * self.delta),
            _ => (self.t1, self.t2),
        }
    }

    /// Points where W or a low derivative changes character; useful quadrature breakpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.support();
        match self.kind {
            WindowKind::Indicator => vec![a, b],
            WindowKind::Bump => vec![a, self.t1 + self.delta, self.t2 - self.delta, b],
            WindowKind::GaussianConv => vec![
                a,
                self.t1 - 3.0 * self.delta,
                self.t1 + 3.0 * self.delta,
                self.t2 - 3.0 * self.delta,
                self.t2 + 3.0 * self.delta,
                b,
            ],
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        window_eval(self, t, 0).expect("order 0 is always defined")
    }
}

const MAX_ORDER: usize = 6;

/// W^{(order)}(t) for order ≤ 6.
pub fn window_eval(w: &Window, t: f64, order: usize) -> Result<f64> {
    if order > MAX_ORDER {
        return Err(domain("window_eval", format!("order {order} > {MAX_ORDER}")));
    }
    match w.kind {
        WindowKind::Indicator => {
            if order > 0 {
                return Err(Error::IndicatorDerivative(order));
            }
            Ok(if t >= w.t1 && t <= w.t2 { 1.0 } else { 0.0 })
        }
        WindowKind::GaussianConv => Ok(gaussian_conv(w, t, order)),
        WindowKind::Bump => Ok(bump(w, t, order)),
    }
}

fn gaussian_conv(w: &Window, t: f64, order: usize) -> f64 {
    let a = (t - w.t1) / w.delta;
    let b = (t - w.t2) / w.delta;
    if order == 0 {
        // erf(a) - erf(b), arranged so the tails keep their relative precision
        return if a + b > 0.0 {
            0.5 * (libm::erfc(b) - libm::erfc(a))
        } else {
            0.5 * (libm::erfc(-a) - libm::erfc(-b))
        };
    }
    let m = order - 1;
    let scale = w.delta.powi(-(order as i32));
    scale * (gaussian_derivative(a, m) - gaussian_derivative(b, m))
}

// m-th derivative of π^{-1/2} e^{-u²}: (-1)^m H_m(u) e^{-u²}/√π.
fn gaussian_derivative(u: f64, m: usize) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * u);
    let h = if m == 0 {
        h0
    } else {
        for n in 1..m {
            let h2 = 2.0 * u * h1 - 2.0 * n as f64 * h0;
            h0 = h1;
            h1 = h2;
        }
        h1
    };
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    sign * h * (-u * u).exp() / PI.sqrt()
}

type Jet = [f64; MAX_ORDER + 1];

fn jet_mul(a: &Jet, b: &Jet) -> Jet {
    let mut c = [0.0; MAX_ORDER + 1];
    for n in 0..=MAX_ORDER {
        for i in 0..=n {
            c[n] += a[i] * b[n - i];
        }
    }
    c
}

fn jet_exp(a: &Jet) -> Jet {
    let mut e = [0.0; MAX_ORDER + 1];
    e[0] = a[0].exp();
    for n in 1..=MAX_ORDER {
        let mut s = 0.0;
        for k in 1..=n {
            s += k as f64 * a[k] * e[n - k];
        }
        e[n] = s / n as f64;
    }
    e
}

/// Taylor coefficients of p(x0 + ε) up to ε⁶.
fn bump_profile_jet(x0: f64) -> Jet {
    let mut out = [0.0; MAX_ORDER + 1];
    let u = 1.0 - x0;
    if x0 <= 0.0 || (1.0 / x0) * (-1.0 / u.max(f64::MIN_POSITIVE)).exp() > 745.0 {
        return out;
    }
    if u <= 0.0 || 1.0 / u > 745.0 {
        out[0] = 1.0;
        return out;
    }
    let mut inv_x = [0.0; MAX_ORDER + 1];
    let mut inv_u = [0.0; MAX_ORDER + 1];
    for k in 0..=MAX_ORDER {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        inv_x[k] = sign * x0.powi(-(k as i32 + 1));
        // 1/(u - ε)
        inv_u[k] = u.powi(-(k as i32 + 1));
    }
    let inner = jet_exp(&inv_u.map(|v| -v));
    let arg = jet_mul(&inv_x, &inner).map(|v| -v);
    jet_exp(&arg)
}

/// p(x) and its derivatives, p(0) = 0, p(1) = 1.
pub fn bump_profile(x: f64, order: usize) -> f64 {
    let j = bump_profile_jet(x);
    let f: f64 = (1..=order).map(|i| i as f64).product();
    j[order.min(MAX_ORDER)] * f
}

fn bump(w: &Window, t: f64, order: usize) -> f64 {
    if t <= w.t1 || t >= w.t2 {
        return 0.0;
    }
    let scale = w.delta.powi(-(order as i32));
    if t < w.t1 + w.delta {
        scale * bump_profile((t - w.t1) / w.delta, order)
    } else if t > w.t2 - w.delta {
        let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
        sign * scale * bump_profile((w.t2 - t) / w.delta, order)
    } else if order == 0 {
        1.0
    } else {
        0.0
    }
}

/// I as a function of log w: (1 + erf(√Q log w / 2))/2.
pub fn i_weight_log(log_w: f64, q: &SmoothingConfig) -> f64 {
    0.5 * libm::erfc(-0.5 * q.q.sqrt() * log_w)
}

/// I(w) = √(Q/4π) ∫_{-∞}^{log w} e^{-Qy²/4} dy.
///
/// This closed form is the contour integral with G(z), not G(z/2); the
/// same kernel is then used by J, so I(e^ξ) = J holds literally.
pub fn i_weight(w: f64, q: &SmoothingConfig) -> f64 {
    i_weight_log(w.ln(), q)
}

/// ξ = log(t(t+δ)/(4π²x)).
pub fn xi_log(x: f64, t: f64, delta: f64) -> f64 {
    (t * (t + delta)).ln() - (4.0 * PI * PI * x).ln()
}

/// J_δ(x,t) = I(e^ξ).
pub fn j_weight(x: f64, t: f64, shift: &ShiftConfig, q: &SmoothingConfig) -> f64 {
    i_weight_log(xi_log(x, t, shift.delta()), q)
}

/// log Y_δ(z;t), Y = Γ²((z+it)/2)Γ²((z-it-iδ)/2)·((z+it)(z-1+it)(z-it-iδ)(z-1-it-iδ))²,
/// up to multiples of 2πi.
fn log_y(z: Complex64, t: f64, delta: f64) -> Complex64 {
    let a = z + Complex64::new(0.0, t);
    let b = z - Complex64::new(0.0, t + delta);
    let g = (log_gamma_unchecked(a * 0.5) + log_gamma_unchecked(b * 0.5)) * 2.0;
    let p = (a.ln() + (a - 1.0).ln() + b.ln() + (b - 1.0).ln()) * 2.0;
    g + p
}

/// V_δ(x,t) by quadrature along z = 1 + iy, |y| ≤ 6√Q + 12.
pub fn v_weight(x: f64, t: f64, shift: &ShiftConfig, q: &SmoothingConfig) -> Result<Complex64> {
    if !(x > 0.0) || !(t >= 5.0) {
        return Err(domain("v_weight", format!("need x > 0 and t >= 5, got x={x}, t={t}")));
    }
    let delta = shift.delta();
    let half = Complex64::new(0.5, 0.0);
    let base = log_y(half, t, delta);
    let lx = (PI * PI * x).ln();
    let integrand = |y: f64| -> Complex64 {
        let z = Complex64::new(1.0, y);
        let l = -z * lx + log_y(half + z, t, delta) - base + z * z / q.q;
        l.exp() / z
    };
    let y0 = 6.0 * q.q.sqrt() + 12.0;
    // the phase turns at rate ~ |ξ|, so give the integrator enough pieces
    let xi = xi_log(x, t, delta).abs() + 1.0;
    let pieces = ((2.0 * y0 * xi / PI).ceil() as usize).clamp(8, 4000);
    let bp: Vec<f64> = (0..=pieces).map(|k| -y0 + 2.0 * y0 * k as f64 / pieces as f64).collect();
    let r = Adaptive::new(1e-10 * 2.0 * PI, 0.0).max_intervals(20 * pieces + 200).integrate(integrand, &bp)?;
    Ok(r.value / (2.0 * PI))
}

/// V_δ(·,t) for many x at fixed (t, δ, Q): the x-independent part of the
/// integrand is tabulated once on Gauss nodes along Re z = 1 and Re z = -1.
/// Small x (ξ > 0) use the left line plus the residue 1 at z = 0, so neither
/// branch sums terms much larger than the result.
#[derive(Debug, Clone)]
pub struct VTable {
    t: f64,
    delta: f64,
    right: Vec<(f64, Complex64)>,
    left: Vec<(f64, Complex64)>,
}

impl VTable {
    pub fn new(t: f64, shift: &ShiftConfig, q: &SmoothingConfig) -> Result<Self> {
        Self::with_panel(t, shift, q, 0.5)
    }

    /// `panel` is the width of each 16-point Gauss panel in Im z.
    pub fn with_panel(t: f64, shift: &ShiftConfig, q: &SmoothingConfig, panel: f64) -> Result<Self> {
        if !(t >= 5.0) || !(panel > 0.0) {
            return Err(domain("VTable", format!("need t >= 5 and a positive panel, got t={t}")));
        }
        let delta = shift.delta();
        let half = Complex64::new(0.5, 0.0);
        let base = log_y(half, t, delta);
        let y0 = 6.0 * q.q.sqrt() + 12.0;
        let n = (2.0 * y0 / panel).ceil() as usize;
        let h = 2.0 * y0 / n as f64;
        let rule = gauss_rule(16);
        let line = |sigma: f64| -> Vec<(f64, Complex64)> {
            let mut out = Vec::with_capacity(16 * n);
            for k in 0..n {
                let a = -y0 + k as f64 * h;
                for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                    let y = a + 0.5 * h * (x + 1.0);
                    let z = Complex64::new(sigma, y);
                    let r = (log_y(half + z, t, delta) - base + z * z / q.q).exp() / z;
                    out.push((y, r * (0.5 * h * w / (2.0 * PI))));
                }
            }
            out
        };
        Ok(VTable { t, delta, right: line(1.0), left: line(-1.0) })
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let l = (PI * PI * x).ln();
        if xi_log(x, self.t, self.delta) <= 0.0 {
            let m = (-l).exp();
            self.right.iter().map(|(y, r)| r * Complex64::from_polar(m, -y * l)).sum()
        } else {
            let m = l.exp();
            let s: Complex64 = self.left.iter().map(|(y, r)| r * Complex64::from_polar(m, -y * l)).sum();
            s + 1.0
        }
    }
}

/// κ(t) = χ(1/2-it)χ(1/2+i(t+δ)) and φ(t) = t log(t/2πe) - (t+δ) log((t+δ)/2πe).
pub fn kappa_phi(t: f64, shift: &ShiftConfig) -> Result<(Complex64, f64)> {
    let delta = shift.delta();
    if !(t >= 1.0) || !(t + delta > 0.0) {
        return Err(domain("kappa_phi", format!("need t >= 1 and t + delta > 0, got t={t}")));
    }
    // χ(1/2+iv) = e^{-2iθ(v)} and θ is odd
    let kappa = Complex64::from_polar(1.0, 2.0 * (theta(t) - theta(t + delta)));
    let e2 = 2.0 * PI * std::f64::consts::E;
    let phi = t * (t / e2).ln() - (t + delta) * ((t + delta) / e2).ln();
    Ok((kappa, phi))
}

/// κ as the literal χ product, kept for cross-checking.
pub fn kappa_direct(t: f64, delta: f64) -> Complex64 {
    chi_critical(-t) * chi_critical(t + delta)
}

/// W̃(s) = ∫_1^∞ W(x - δ/2) x^{s-1} dx.
pub fn window_mellin(w: &Window, s: Complex64, delta_shift: f64) -> Result<Complex64> {
    if s.re.abs() > 4.0 {
        return Err(domain("window_mellin", format!("|Re s| = {} > 4", s.re.abs())));
    }
    let shift = delta_shift / 2.0;
    let (a, b) = w.support();
    let (a, b) = ((a + shift).max(1.0), (b + shift).max(1.0));
    if b <= a {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let s1 = s - 1.0;
    if w.kind == WindowKind::Indicator {
        if s.norm() == 0.0 {
            return Ok(Complex64::new((b / a).ln(), 0.0));
        }
        let pw = |x: f64| (s * x.ln()).exp();
        return Ok((pw(b) - pw(a)) / s);
    }
    let mut bp: Vec<f64> = w.breakpoints().into_iter().map(|p| (p + shift).clamp(a, b)).collect();
    // the factor x^{i Im s} turns once per Δ(log x) = 2π/|Im s|
    let turns = (s.im.abs() * (b / a).ln() / PI).ceil() as usize;
    let extra = turns.clamp(1, 2000);
    for k in 1..extra {
        bp.push(a + (b - a) * k as f64 / extra as f64);
    }
    bp.sort_by(f64::total_cmp);
    bp.dedup();
    let f = |x: f64| (s1 * x.ln()).exp() * w.eval(x - shift);
    // absolute floor against ∫|x^{s-1}|, for the heavily cancelling large-|Im s| case
    let scale = if s.re.abs() < 1e-12 { (b / a).ln() } else { (b.powf(s.re) - a.powf(s.re)).abs() / s.re.abs() };
    let r = Adaptive::new(1e-13 * scale, 1e-11).max_intervals(40 * bp.len() + 400).integrate(f, &bp)?;
    Ok(r.value)
}

/// Averaging kernel profile g; the transforms below are ĝ(y/2π) for
/// g(x) = c⁻¹ g₀(x/c).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KernelShape {
    /// g₀ = 𝟙{|x| ≤ 1}/2.
    Indicator,
    /// g₀(x) = (A/π)/(A² + x²), so ĝ₀(y/2π) = e^{-A|y|}.
    SmoothExp { a: f64 },
}

/// ĝ(y/2π) for the kernel of width c.
pub fn g_window_fourier(kind: KernelShape, c: f64, y: f64) -> f64 {
    match kind {
        KernelShape::Indicator => {
            let x = c * y;
            if x.abs() < 1e-4 {
                1.0 - x * x / 6.0
            } else {
                x.sin() / x
            }
        }
        KernelShape::SmoothExp { a } => (-a * c * y.abs()).exp(),
    }
}
