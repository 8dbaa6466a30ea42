//! The main term Q₂(t;α,β) = D + OD of the shifted fourth moment.
//!
//! D(t) = 2Re Σ_{s∈{0,iδ}} res L(s)(t/2π)^s/(s-iδ). Pairing each residue with
//! its conjugate turns this into the sum of all residues of
//! L(s)x^s·2s/(s²+δ²) at 0 and ±iδ, so for small δ one circle enclosing the
//! three poles gives D without any pole collision.

use super::hfun::{h_offdiag, l_diag};
use super::laurent::{cauchy_coeffs, cauchy_coeffs_unchecked, circle_nodes, CONTOUR_NODES};
use crate::error::{domain, Error, Result};
use crate::smoothing::ShiftConfig;
use num_complex::Complex64;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Below this |δ| only the entire combination D + OD is evaluated.
pub const DEGENERATE_DELTA: f64 = 1e-6;
/// Up to this |δ| the diagonal term uses one enclosing circle.
const ENCLOSING_DELTA: f64 = 0.2;
const CHECK_TOL: f64 = 1e-9;

/// Arguments of h(z,s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HFunctionParams {
    pub z: Complex64,
    pub s: Complex64,
}

impl HFunctionParams {
    pub fn eval(&self) -> Result<Complex64> {
        if self.s.norm() > 1.0 || self.z.norm() > 10.0 {
            return Err(domain("h_offdiag", format!("need |s| <= 1 and |z| <= 10, got z={}, s={}", self.z, self.s)));
        }
        Ok(h_offdiag(self.z, self.s))
    }
}

// Precomputed trapezoid weights: value(x) = Σ w_i x^{s_i}.
#[derive(Debug, Clone)]
struct Ring {
    s: Vec<Complex64>,
    w: Vec<Complex64>,
}

impl Ring {
    fn sum(&self, log_x: f64) -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut big: f64 = 0.0;
        for (s, w) in self.s.iter().zip(&self.w) {
            let v = w * (s * log_x).exp();
            big = big.max(v.norm());
            acc += v;
        }
        (acc, big)
    }
}

fn agree(a: f64, b: f64, big: f64, what: &'static str) -> Result<()> {
    let diff = (a - b).abs();
    let scale = a.abs().max(b.abs());
    if diff <= CHECK_TOL * scale + 1e-13 * big {
        Ok(())
    } else {
        let _ = what;
        Err(Error::RadiusInconsistency {
            first: format!("{a}"),
            second: format!("{b}"),
            relative: diff / scale.max(f64::MIN_POSITIVE),
        })
    }
}

#[derive(Debug, Clone)]
enum DiagKind {
    Enclosing { outer: Ring, inner: Ring },
    Split { res0: [Complex64; 4], l_at_pole: Complex64, delta: f64 },
}

/// D_δ(t) with all t-independent work done once.
#[derive(Debug, Clone)]
pub struct DiagModel {
    kind: DiagKind,
}

impl DiagModel {
    pub fn new(delta: f64) -> Result<Self> {
        let d = delta.abs();
        if d <= ENCLOSING_DELTA {
            let r = (2.2 * d).max(0.3);
            let ring = |radius: f64| {
                let s = circle_nodes(Complex64::new(0.0, 0.0), radius, CONTOUR_NODES);
                let w = s
                    .iter()
                    .map(|&s| l_diag(s) * s * 2.0 / (s * s + d * d) * s / CONTOUR_NODES as f64)
                    .collect();
                Ring { s, w }
            };
            // the check ring must stay clear of the poles at ±iδ too
            let inner = (r / 2.0).max(1.4 * d);
            return Ok(DiagModel { kind: DiagKind::Enclosing { outer: ring(r), inner: ring(inner) } });
        }
        let pole = Complex64::new(0.0, delta);
        let radius = 0.25f64.min(d / 2.0);
        let l = cauchy_coeffs(|s| l_diag(s) / (s - pole), Complex64::new(0.0, 0.0), 4, 4, radius)?;
        let res0 = [l.coefficient(-1), l.coefficient(-2), l.coefficient(-3), l.coefficient(-4)];
        Ok(DiagModel { kind: DiagKind::Split { res0, l_at_pole: l_diag(pole), delta } })
    }

    /// Pre-2Re residue sum; its real part is D/2 for the split form.
    fn split_sum(res0: &[Complex64; 4], l_at_pole: Complex64, delta: f64, log_x: f64) -> Complex64 {
        let mut r0 = Complex64::new(0.0, 0.0);
        let mut p = 1.0;
        let mut fact = 1.0;
        for (k, c) in res0.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
                p *= log_x;
            }
            r0 += c * (p / fact);
        }
        r0 + l_at_pole * Complex64::from_polar(1.0, delta * log_x)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let log_x = (t / (2.0 * PI)).ln();
        match &self.kind {
            DiagKind::Enclosing { outer, .. } => outer.sum(log_x).0.re,
            DiagKind::Split { res0, l_at_pole, delta } => 2.0 * Self::split_sum(res0, *l_at_pole, *delta, log_x).re,
        }
    }

    /// As `eval`, repeating the enclosing contour at half radius.
    pub fn eval_checked(&self, t: f64) -> Result<f64> {
        let log_x = (t / (2.0 * PI)).ln();
        match &self.kind {
            DiagKind::Enclosing { outer, inner } => {
                let (a, ba) = outer.sum(log_x);
                let (b, bb) = inner.sum(log_x);
                agree(a.re, b.re, ba.max(bb), "diagonal term")?;
                if a.im.abs() > 1e-10 * (1.0 + a.re.abs()) + 1e-13 * ba {
                    return Err(domain("diag_term", format!("imaginary residue {}", a.im)));
                }
                Ok(a.re)
            }
            DiagKind::Split { .. } => Ok(self.eval(t)),
        }
    }
}

/// D_δ(t) for t ≥ 10 and |δ| ≥ 1e-6.
pub fn diag_term(t: f64, shift: &ShiftConfig) -> Result<f64> {
    if !(t >= 10.0) {
        return Err(domain("diag_term", format!("t = {t} < 10")));
    }
    let delta = shift.delta();
    if delta.abs() < DEGENERATE_DELTA {
        return Err(Error::NearDegenerate { delta });
    }
    DiagModel::new(delta)?.eval_checked(t)
}

/// u-derivatives h(iδ,0), ∂h, ∂²h for the off-diagonal term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffDiagModel {
    pub derivs: [f64; 3],
}

impl OffDiagModel {
    pub fn new(delta: f64) -> Result<Self> {
        let z = Complex64::new(0.0, delta);
        let d = delta.abs();
        // keep both check circles clear of the removable points at ±iδ
        let radius = if (d - 0.25).abs() < 0.03 || (d - 0.125).abs() < 0.03 { 0.3 } else { 0.25 };
        let l = cauchy_coeffs(|u| h_offdiag(z, u), Complex64::new(0.0, 0.0), 0, 3, radius)?;
        let c = [l.coefficient(0), l.coefficient(1), l.coefficient(2)];
        let scale = c.iter().map(|v| v.norm()).fold(1.0, f64::max);
        if c.iter().any(|v| v.im.abs() > 1e-10 * scale) {
            return Err(domain("offdiag_term", format!("non-real h coefficients {c:?}")));
        }
        Ok(OffDiagModel { derivs: [c[0].re, c[1].re, 2.0 * c[2].re] })
    }

    /// ∂²/∂s₁∂s₂ [h(iδ,s₁+s₂) a^{s₁} b^{s₂}] with a = e^{la}, b = e^{lb}.
    pub fn eval_logs(&self, la: f64, lb: f64) -> f64 {
        let [h0, h1, h2] = self.derivs;
        h2 + (la + lb) * h1 + la * lb * h0
    }

    pub fn eval(&self, t: f64, shift: &ShiftConfig) -> f64 {
        let la = ((t + shift.alpha) / (2.0 * PI)).ln();
        let lb = ((t + shift.beta) / (2.0 * PI)).ln();
        self.eval_logs(la, lb)
    }
}

/// OD(t;α,β).
pub fn offdiag_term(t: f64, shift: &ShiftConfig) -> Result<f64> {
    if !(t >= 10.0) || !(t + shift.alpha > 0.0) || !(t + shift.beta > 0.0) {
        return Err(domain("offdiag_term", format!("need t >= 10 and t + shifts > 0, got t = {t}")));
    }
    Ok(OffDiagModel::new(shift.delta())?.eval(t, shift))
}

// The entire function F(z,t) = D(z,t) + H(z,t) sampled on circles in z.
// Everything here is independent of (t, δ) and built once.
struct EntireRing {
    z: Vec<Complex64>,
    // h(z_j,·) derivatives at u = 0
    hd: Vec<[Complex64; 3]>,
    // d_weights[j][i] = L(s_i)·2s_i/(s_i² - z_j²)·s_i/M
    d_weights: Vec<Vec<Complex64>>,
}

struct EntireTables {
    s: Vec<Complex64>,
    rings: [EntireRing; 2],
}

const Z_RADIUS: f64 = 0.2;
const S_RADIUS: f64 = 0.45;
const U_NODES: usize = 32;

static ENTIRE: Lazy<EntireTables> = Lazy::new(|| {
    let zero = Complex64::new(0.0, 0.0);
    let s = circle_nodes(zero, S_RADIUS, CONTOUR_NODES);
    let ls: Vec<Complex64> = s.iter().map(|&s| l_diag(s)).collect();
    let ring = |zr: f64| {
        let z = circle_nodes(zero, zr, CONTOUR_NODES);
        let ur = zr / 2.0;
        let hd = z
            .iter()
            .map(|&zj| {
                let l = cauchy_coeffs_unchecked(|u| h_offdiag(zj, u), zero, 0, 3, ur, U_NODES);
                [l.coeffs[0], l.coeffs[1], l.coeffs[2] * 2.0]
            })
            .collect();
        let d_weights = z
            .iter()
            .map(|&zj| {
                s.iter()
                    .zip(&ls)
                    .map(|(&si, &li)| li * si * 2.0 / (si * si - zj * zj) * si / CONTOUR_NODES as f64)
                    .collect()
            })
            .collect();
        EntireRing { z, hd, d_weights }
    };
    EntireTables { s: s.clone(), rings: [ring(Z_RADIUS), ring(Z_RADIUS / 2.0)] }
});

fn entire_value(ring: &EntireRing, s: &[Complex64], t: f64, shift: &ShiftConfig) -> (Complex64, f64) {
    let log_x = (t / (2.0 * PI)).ln();
    let xs: Vec<Complex64> = s.iter().map(|si| (si * log_x).exp()).collect();
    let la = ((t + shift.alpha) / (2.0 * PI)).ln();
    let pole = Complex64::new(0.0, shift.delta());
    let m = ring.z.len() as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut big: f64 = 0.0;
    for ((zj, hd), dw) in ring.z.iter().zip(&ring.hd).zip(&ring.d_weights) {
        let d: Complex64 = dw.iter().zip(&xs).map(|(w, x)| w * x).sum();
        // t + β = t + α - iz at z = iδ
        let lb = ((Complex64::new(t + shift.alpha, 0.0) - Complex64::new(0.0, 1.0) * zj) / (2.0 * PI)).ln();
        let h = hd[2] + (lb + la) * hd[1] + lb * la * hd[0];
        let f = d + h;
        let v = f * zj / (zj - pole) / m;
        big = big.max(v.norm() * m);
        acc += v;
    }
    (acc, big)
}

/// Q₂(t;α,β) with the per-shift work cached.
#[derive(Debug, Clone)]
pub struct Q2Model {
    shift: ShiftConfig,
    split: Option<(DiagModel, OffDiagModel)>,
}

impl Q2Model {
    pub fn new(shift: ShiftConfig) -> Result<Self> {
        let delta = shift.delta();
        if delta.abs() < DEGENERATE_DELTA {
            Lazy::force(&ENTIRE);
            return Ok(Q2Model { shift, split: None });
        }
        Ok(Q2Model { shift, split: Some((DiagModel::new(delta)?, OffDiagModel::new(delta)?)) })
    }

    pub fn shift(&self) -> &ShiftConfig {
        &self.shift
    }

    /// Q₂ without consistency checks; valid for t ≥ 1.
    pub fn eval(&self, t: f64) -> f64 {
        match &self.split {
            Some((d, od)) => d.eval(t) + od.eval(t, &self.shift),
            None => entire_value(&ENTIRE.rings[0], &ENTIRE.s, t, &self.shift).0.re,
        }
    }

    /// Q₂ with the two-radius checks and the real-output assertion.
    pub fn eval_checked(&self, t: f64) -> Result<f64> {
        match &self.split {
            Some((d, od)) => Ok(d.eval_checked(t)? + od.eval(t, &self.shift)),
            None => {
                let (a, ba) = entire_value(&ENTIRE.rings[0], &ENTIRE.s, t, &self.shift);
                let (b, bb) = entire_value(&ENTIRE.rings[1], &ENTIRE.s, t, &self.shift);
                agree(a.re, b.re, ba.max(bb), "entire combination")?;
                if a.im.abs() > 1e-10 * (1.0 + a.re.abs()) + 1e-13 * ba {
                    return Err(domain("q2_eval", format!("imaginary residue {}", a.im)));
                }
                Ok(a.re)
            }
        }
    }
}

/// Q₂(t;α,β) = D + OD for t ≥ 10.
pub fn q2_eval(t: f64, shift: &ShiftConfig) -> Result<f64> {
    if !(t >= 10.0) || !(t + shift.alpha > 0.0) || !(t + shift.beta > 0.0) {
        return Err(domain("q2_eval", format!("need t >= 10 and t + shifts > 0, got t = {t}")));
    }
    Q2Model::new(*shift)?.eval_checked(t)
}
