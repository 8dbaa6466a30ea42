//! The continuous and discrete spectral pieces of the error term for the
//! smoothed shifted moment, and the truncated L-series they use.

mod dataset;
mod transforms;

pub use dataset::{hecke_from_satake, MaassEntry, SpectralDataset, FIRST_KAPPA};
use transforms::nu_assemble;
pub use transforms::{
    nu_delta, sinh_factor, theta_transform, xi_general, xi_half_integer, xi_transform, TestFunction, TestKind,
};

use crate::error::{domain, Error, Result};
use crate::quad::KahanComplex;
use crate::smoothing::{i_weight, window_mellin, SmoothingConfig, Window, WindowKind};
use crate::special::{w_zeta_one_plus_w, zeta_critical, zeta_critical_sq, zeta_fast};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Q used for the truncated L-series when the caller gives none.
pub const DEFAULT_Q: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EcResult {
    pub value: f64,
    /// Imaginary part of the same integral, before Re is taken.
    pub imag: f64,
    /// Difference between the midpoint rules at h and h/3.
    pub quad_error: f64,
    /// Size of the integrand at ±y_max times the ν decay length.
    pub tail_estimate: f64,
    pub n_evals: u64,
}

// 1/|ζ(1+2iy)|², through w ζ(1+w) near the pole.
fn inv_zeta_one_sq(y: f64) -> f64 {
    let w = Complex64::new(0.0, 2.0 * y);
    if y.abs() < 0.05 {
        w.norm_sqr() / w_zeta_one_plus_w(w).norm_sqr()
    } else {
        1.0 / zeta_fast(w + 1.0).norm_sqr()
    }
}

/// W̃(1/2-iy_k) = ∫₁^∞ W(x-δ/2)x^{-1/2-iy_k} dx at y_k = (k+1/2)h, k < count,
/// by one FFT of the trapezoid sum in u = ln x.
pub fn window_mellin_grid(window: &Window, delta: f64, h: f64, count: usize) -> Result<Vec<Complex64>> {
    let shift = delta / 2.0;
    let (a, b) = window.support();
    let (a, b) = ((a + shift).max(1.0), (b + shift).max(1.0));
    if b <= a || count == 0 {
        return Ok(vec![Complex64::new(0.0, 0.0); count]);
    }
    if window.kind == WindowKind::Indicator {
        return (0..count)
            .map(|k| window_mellin(window, Complex64::new(0.5, -(k as f64 + 0.5) * h), delta))
            .collect();
    }
    let (u0, len) = (a.ln(), (b / a).ln());
    if h * len >= 2.0 * PI {
        return Err(domain("window_mellin_grid", format!("step {h} too coarse for log-support {len}")));
    }
    let y_max = count as f64 * h;
    let du = (0.25 / y_max).min(0.02 * window.delta / b).min(len / 64.0);
    let m = (count.max((2.0 * PI / (h * du)).ceil() as usize)).next_power_of_two();
    let du = 2.0 * PI / (h * m as f64);
    let nu = (len / du).floor() as usize;
    let mut buf: Vec<Complex64> = (0..m)
        .map(|j| {
            if j > nu {
                return Complex64::new(0.0, 0.0);
            }
            let v = j as f64 * du;
            let u = u0 + v;
            let wt = if j == 0 { 0.5 } else { 1.0 };
            let g = wt * du * (0.5 * u).exp() * window.eval(u.exp() - shift);
            Complex64::from_polar(g, -0.5 * h * v)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    Ok((0..count)
        .map(|k| buf[k] * Complex64::from_polar(1.0, -(k as f64 + 0.5) * h * u0))
        .collect())
}

fn ec_node(y: f64, delta: f64, wt: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (s, w) in [(y, wt), (-y, wt.conj())] {
        let z4 = zeta_critical_sq(s).powi(2);
        let pair = zeta_critical(delta - s) * zeta_critical(delta + s);
        acc += pair * (z4 * inv_zeta_one_sq(s)) * nu_assemble(s, delta, w)?.conj();
    }
    Ok(acc / PI)
}

/// E_c = (1/π) Re ∫ |ζ(1/2+iy)|⁴ζ(1/2+iδ-iy)ζ(1/2+iδ+iy)/|ζ(1+2iy)|² · conj ν_δ(y) dy
/// over |y| ≤ y_max.
///
/// The integrand is analytic in |Im y| < 1/4 (the zeros of ζ(1+2iy) sit on
/// that line), so the midpoint rule converges geometrically. It is run at
/// steps h and h/3, whose nodes nest; the difference is `quad_error`.
pub fn ec_integral(delta: f64, window: &Window, y_max: f64) -> Result<EcResult> {
    if !(y_max > 0.0 && y_max <= 1e4) {
        return Err(domain("ec_integral", format!("y_max = {y_max} outside (0, 1e4]")));
    }
    let (t1, t2) = window.support();
    let freq = 3.0 * ((y_max + delta.abs()).max(2.0 * PI) / (2.0 * PI)).ln() + t2.max(2.0).ln();
    let n = ((y_max / (1.0 / freq).min(0.05)).ceil() as usize).max(8);
    let h = y_max / n as f64;
    let fine = 3 * n;
    let hf = h / 3.0;
    let wm = window_mellin_grid(window, delta, hf, fine)?;
    let vals: Vec<Complex64> = (0..fine)
        .into_par_iter()
        .map(|k| ec_node((k as f64 + 0.5) * hf, delta, wm[k]))
        .collect::<Result<_>>()?;
    let mut acc = KahanComplex::new();
    let mut coarse = KahanComplex::new();
    for (k, v) in vals.iter().enumerate() {
        acc.add(*v * hf);
        if k % 3 == 1 {
            coarse.add(*v * h);
        }
    }
    let total = acc.value();
    let decay_len = t2 / (window.delta.max(1e-9)).min(t2 - t1);
    let tail = vals[fine - 1].norm() * decay_len;
    Ok(EcResult {
        value: total.re,
        imag: total.im,
        quad_error: (total - coarse.value()).norm(),
        tail_estimate: tail,
        n_evals: (2 * fine) as u64,
    })
}

/// Σ_r t_j(r) I(t/2πr) r^{-s}, the smoothed truncation of H_j(s).
pub fn truncated_l_series(entry: &MaassEntry, s: Complex64, t_trunc: f64, q: &SmoothingConfig) -> Result<Complex64> {
    let t = t_trunc.abs();
    let needed = (t / (2.0 * PI) * (6.0 / q.q.sqrt()).exp()).ceil() as usize;
    if entry.hecke.len() < needed {
        return Err(Error::InsufficientCoefficients { needed, available: entry.hecke.len() });
    }
    let mut acc = KahanComplex::new();
    for (i, &tr) in entry.hecke.iter().enumerate() {
        let r = (i + 1) as f64;
        let w = i_weight(t / (2.0 * PI * r), q);
        if w == 0.0 || tr == 0.0 {
            continue;
        }
        acc.add((-s * r.ln()).exp() * (tr * w));
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdResult {
    pub value: f64,
    pub terms: usize,
    /// |ν_δ(κ_last)| / max_j |ν_δ(κ_j)|.
    pub last_nu_ratio: f64,
    /// False when the spectrum seems cut before ν has decayed.
    pub coverage_ok: bool,
}

/// E_d = Re Σ_j α_j H_j(1/2)² L_j(1/2+iδ) conj ν_δ(κ_j), with H_j(1/2+iδ)
/// replaced by its smoothed truncation at height δ.
pub fn ed_sum(dataset: &SpectralDataset, delta: f64, window: &Window) -> Result<EdResult> {
    ed_sum_with(dataset, delta, window, &SmoothingConfig::new(DEFAULT_Q)?)
}

pub fn ed_sum_with(dataset: &SpectralDataset, delta: f64, window: &Window, q: &SmoothingConfig) -> Result<EdResult> {
    let s = Complex64::new(0.5, delta);
    let mut acc = 0.0;
    let mut peak: f64 = 0.0;
    let mut last = 0.0;
    for e in &dataset.entries {
        let nu = nu_delta(e.kappa, delta, window)?;
        peak = peak.max(nu.norm());
        last = nu.norm();
        if e.h_half == 0.0 {
            continue;
        }
        let l = truncated_l_series(e, s, delta, q)?;
        acc += e.alpha * e.h_half * e.h_half * (l * nu.conj()).re;
    }
    let ratio = if peak > 0.0 { last / peak } else { 0.0 };
    let coverage_ok = ratio <= 1e-6;
    if !coverage_ok && !dataset.entries.is_empty() {
        log::warn!("spectral data ends at kappa = {} where |nu| is still {ratio:.1e} of its peak",
            dataset.entries.last().map_or(0.0, |e| e.kappa));
    }
    Ok(EdResult { value: acc, terms: dataset.entries.len(), last_nu_ratio: ratio, coverage_ok })
}
