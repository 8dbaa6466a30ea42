//! Second moment of the short-interval second moment,
//!   M₂,₂(T;g) = ∫₀^T (∫ g(h)|ζ(1/2+it+ih)|² dh)² dt = T(D̄ + OD̄) + error,
//! with N = log(T/2π) and g(x) = c⁻¹g₀(x/c).

use crate::analytic::{a_coeffs_all, moment_polynomial, PolyKind};
use crate::error::{domain, Error, Result};
use crate::quad::{Adaptive, KahanSum};
use crate::smoothing::{g_window_fourier, KernelShape};
use crate::special::{zeta_critical_sq, EULER_GAMMA};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    Indicator,
    SmoothExp,
}

/// g(x) = c⁻¹g₀(x/c) with g₀ = 𝟙{|x| ≤ 1}/2 or the Cauchy density of
/// scale A (so that ĝ₀(y/2π) = e^{-A|y|}).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AveragingKernel {
    pub kind: KernelKind,
    pub c: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

impl AveragingKernel {
    pub fn indicator(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(domain("AveragingKernel", format!("c = {c} must be positive")));
        }
        Ok(AveragingKernel { kind: KernelKind::Indicator, c, a: 1.0 })
    }

    pub fn smooth_exp(c: f64, a: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite() && a > 0.0 && a.is_finite()) {
            return Err(domain("AveragingKernel", format!("need c, A > 0, got ({c}, {a})")));
        }
        Ok(AveragingKernel { kind: KernelKind::SmoothExp, c, a })
    }

    pub fn shape(&self) -> KernelShape {
        match self.kind {
            KernelKind::Indicator => KernelShape::Indicator,
            KernelKind::SmoothExp => KernelShape::SmoothExp { a: self.a },
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            KernelKind::Indicator => {
                if x.abs() <= self.c {
                    0.5 / self.c
                } else {
                    0.0
                }
            }
            KernelKind::SmoothExp => {
                let b = self.a * self.c;
                b / (PI * (b * b + x * x))
            }
        }
    }

    /// ĝ(y/2π).
    pub fn fourier(&self, y: f64) -> f64 {
        g_window_fourier(self.shape(), self.c, y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoMReport {
    #[serde(rename = "T")]
    pub t: f64,
    pub kernel: AveragingKernel,
    pub dbar: f64,
    pub odbar: f64,
    pub formula_total: f64,
    pub empirical: Option<f64>,
    pub a_constant: Option<f64>,
}

impl MoMReport {
    pub const CSV_HEADER: &'static str = "T,c,kind,dbar,odbar,total,empirical,a_constant";

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let kind = match self.kernel.kind {
            KernelKind::Indicator => "indicator",
            KernelKind::SmoothExp => "smooth-exp",
        };
        format!(
            "{},{},{},{},{},{},{},{}",
            self.t,
            self.kernel.c,
            kind,
            self.dbar,
            self.odbar,
            self.formula_total,
            opt(self.empirical),
            opt(self.a_constant)
        )
    }
}

/// ∫₀^∞ ĝ²(y/2π)e^{-sy} dy for the indicator kernel of half-width c.
pub fn laplace_ghat2_indicator(s: Complex64, c: f64) -> Result<Complex64> {
    if !(c > 0.0) {
        return Err(domain("laplace_ghat2_indicator", format!("c = {c} must be positive")));
    }
    // y ↦ πy/c reduces to c = π
    let u = s * (PI / c);
    let a = Complex64::new(0.0, 2.0 * PI);
    // branch points at 0 and ±2πi; the cuts run left along the real axis
    for p in [Complex64::new(0.0, 0.0), a, -a] {
        let w = u + p;
        if w.re <= 0.0 && w.im == 0.0 {
            return Err(domain("laplace_ghat2_indicator", format!("s = {s} lies on a branch cut")));
        }
    }
    let xlogx = |w: Complex64| w * w.ln();
    let v = -(xlogx(u + a) + xlogx(u - a) - xlogx(u) * 2.0) / (4.0 * PI * PI);
    Ok(v * (PI / c))
}

fn check_t(what: &'static str, t: f64) -> Result<f64> {
    if !(t >= 100.0 && t.is_finite()) {
        return Err(domain(what, format!("T = {t} must be >= 100")));
    }
    Ok((t / (2.0 * PI)).ln())
}

/// D̄(T;g) = 2∫₀^N ĝ²(y/2π)P₃(N−y) dy by quadrature.
pub fn dbar(t: f64, kernel: &AveragingKernel) -> Result<f64> {
    let n = check_t("dbar", t)?;
    let p3 = moment_polynomial(PolyKind::P3);
    let bp: Vec<f64> = match kernel.kind {
        // one piece per lobe of sinc²
        KernelKind::Indicator => {
            let lobes = (kernel.c * n / PI).ceil() as usize;
            let mut v: Vec<f64> = (0..lobes).map(|k| k as f64 * PI / kernel.c).collect();
            v.push(n);
            v
        }
        KernelKind::SmoothExp => {
            let scale = 1.0 / (kernel.a * kernel.c);
            let mut v: Vec<f64> = (0..40).map(|k| k as f64 * scale).take_while(|&y| y < n).collect();
            v.push(n);
            v
        }
    };
    let r = Adaptive::new(1e-13, 1e-11).max_intervals(100_000).integrate(
        |y: f64| {
            let g = kernel.fourier(y);
            g * g * p3.eval(n - y)
        },
        &bp,
    )?;
    Ok(2.0 * r.value)
}

/// The asymptotic closed forms for D̄.
pub fn dbar_closed_form(t: f64, kernel: &AveragingKernel) -> Result<f64> {
    let n = check_t("dbar_closed_form", t)?;
    let p3 = moment_polynomial(PolyKind::P3);
    let c = kernel.c;
    let b = &p3.coeffs;
    Ok(match kernel.kind {
        KernelKind::Indicator => {
            let c2 = c * c;
            PI / c * p3.eval(n) - p3.derivative(n, 1) * ((2.0 * c * n).ln() + EULER_GAMMA) / c2
                + (3.0 * b[0] * n * n - 2.0 * b[2]) / (2.0 * c2)
                - b[0] / (4.0 * c2 * c2)
                - b[3] / (c2 * n)
        }
        KernelKind::SmoothExp => {
            // ∫₀^∞ y^j e^{-2Acy} dy = j!/(2Ac)^{j+1}
            let k = 2.0 * kernel.a * c;
            2.0 * (0..=3)
                .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 } * p3.derivative(n, j) / k.powi(j as i32 + 1))
                .sum::<f64>()
        }
    })
}

/// OD̄ = a₀(N+2γ₀)² + 2a₁(N+2γ₀) + a₂.
pub fn odbar(t: f64, kernel: &AveragingKernel) -> Result<f64> {
    let n = check_t("odbar", t)?;
    let [a0, a1, a2] = a_coeffs_all(kernel.shape(), kernel.c)?;
    let l = n + 2.0 * EULER_GAMMA;
    Ok(a0 * l * l + 2.0 * a1 * l + a2)
}

/// Coefficient a of the N⁻¹ term of M₂,₂/T for the indicator kernel,
/// normalised so that c = π gives the constant term b₃ of P₃.
pub fn log_anomaly_constant(kernel: &AveragingKernel) -> Result<f64> {
    if kernel.kind != KernelKind::Indicator {
        return Err(domain("log_anomaly_constant", "only indicator kernels carry the log anomaly"));
    }
    let b3 = moment_polynomial(PolyKind::P3).coeffs[3];
    Ok(b3 * (PI / kernel.c).powi(2))
}

/// The N⁻¹ coefficient exactly as it appears in D̄: −b₃/c².
pub fn inverse_n_coefficient(kernel: &AveragingKernel) -> Result<f64> {
    let a = log_anomaly_constant(kernel)?;
    Ok(-a / (PI * PI))
}

pub fn m22_formula(t: f64, kernel: &AveragingKernel) -> Result<MoMReport> {
    let d = dbar(t, kernel)?;
    let od = odbar(t, kernel)?;
    Ok(MoMReport {
        t,
        kernel: *kernel,
        dbar: d,
        odbar: od,
        formula_total: t * (d + od),
        empirical: None,
        a_constant: match kernel.kind {
            KernelKind::Indicator => Some(log_anomaly_constant(kernel)?),
            KernelKind::SmoothExp => None,
        },
    })
}

// Cauchy kernels are cut at this many scale lengths in the empirical route.
const EMPIRICAL_CUT: f64 = 40.0;

/// Discrete weights of g on the grid kh, |k| ≤ K, scaled to unit sum.
pub fn kernel_weights(kernel: &AveragingKernel, h: f64) -> Vec<f64> {
    let half = match kernel.kind {
        KernelKind::Indicator => kernel.c,
        KernelKind::SmoothExp => EMPIRICAL_CUT * kernel.a * kernel.c,
    };
    let k_max = (half / h).floor() as i64;
    let mut w: Vec<f64> = (-k_max..=k_max).map(|k| kernel.eval(k as f64 * h)).collect();
    if kernel.kind == KernelKind::Indicator && ((k_max as f64) * h - half).abs() < 1e-9 * h {
        // endpoints sit on the jump
        let last = w.len() - 1;
        w[0] *= 0.5;
        w[last] *= 0.5;
    }
    let sum: f64 = w.iter().sum();
    w.iter().map(|x| x / sum).collect()
}

/// ∫₀^T s(t)² dt by the trapezoid rule on t = ih, with
/// s(t) = Σ_k w_k f(t + (k−K)h) and samples shared across the grid.
pub fn m22_on_grid<F>(t_max: f64, n: usize, weights: &[f64], signal: F) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    let h = t_max / n as f64;
    let k = (weights.len() / 2) as i64;
    let samples: Vec<f64> = (-k..=n as i64 + k).into_par_iter().map(|j| signal(j as f64 * h)).collect();
    let mut acc = KahanSum::new();
    for i in 0..=n {
        let s: f64 = weights.iter().zip(&samples[i..i + weights.len()]).map(|(w, f)| w * f).sum();
        let tw = if i == 0 || i == n { 0.5 } else { 1.0 };
        acc.add(tw * s * s);
    }
    acc.value() * h
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct M22Empirical {
    pub value: f64,
    pub coarse: f64,
    pub relative_change: f64,
}

/// M₂,₂ from |ζ|² sampled at step h and h/2; the finer value is kept.
pub fn m22_empirical_detailed(t: f64, kernel: &AveragingKernel, grid_step: f64) -> Result<M22Empirical> {
    if !(t > 0.0 && t <= 1e4) {
        return Err(domain("m22_empirical", format!("T = {t} outside (0, 1e4]")));
    }
    if !(grid_step > 0.0 && grid_step <= 0.05) {
        return Err(domain("m22_empirical", format!("grid_step = {grid_step} outside (0, 0.05]")));
    }
    let n = (t / grid_step).ceil() as usize;
    let h = t / n as f64;
    let coarse = m22_on_grid(t, n, &kernel_weights(kernel, h), zeta_critical_sq);
    let value = m22_on_grid(t, 2 * n, &kernel_weights(kernel, h / 2.0), zeta_critical_sq);
    let relative_change = (value - coarse).abs() / value.abs();
    Ok(M22Empirical { value, coarse, relative_change })
}

pub fn m22_empirical(t: f64, kernel: &AveragingKernel, grid_step: f64) -> Result<f64> {
    let r = m22_empirical_detailed(t, kernel, grid_step)?;
    if r.relative_change > 0.01 {
        return Err(Error::StepTooCoarse { relative_change: r.relative_change });
    }
    Ok(r.value)
}
