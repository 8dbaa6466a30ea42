//! Numerical moments ∫ W(t)|ζ(1/2+i(t+α))|²|ζ(1/2+i(t+β))|² dt, the
//! matching main-term integral ∫ W(t)Q₂(t;α,β) dt, and a check of the exact
//! double-Dirichlet-series identity for |ζ(1/2+it)ζ(1/2-it-iδ)|².

use crate::analytic::{moment_polynomial, PolyKind, Q2Model, DEGENERATE_DELTA};
use crate::divisor::sieve_divisors;
use crate::error::{domain, Error, Result};
use crate::quad::{gauss_rule, Adaptive, KahanComplex, KahanSum};
use crate::smoothing::{j_weight, kappa_phi, ShiftConfig, SmoothingConfig, VTable, Window};
use crate::special::{zeta_critical_sq, zeta_fast};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub panel_width: f64,
    pub nodes_per_panel: usize,
    pub tolerance: f64,
}

/// Mean spacing of zeta zeros near height t, never more than π.
pub fn zero_gap(t: f64) -> f64 {
    PI / (t / (2.0 * PI)).ln().max(1.0)
}

impl QuadratureSpec {
    pub fn new(panel_width: f64, nodes_per_panel: usize, tolerance: f64, t2: f64) -> Result<Self> {
        if ![8, 16, 32].contains(&nodes_per_panel) {
            return Err(domain("QuadratureSpec", format!("nodes_per_panel = {nodes_per_panel} not in {{8, 16, 32}}")));
        }
        if !(panel_width > 0.0 && panel_width <= zero_gap(t2)) {
            return Err(domain(
                "QuadratureSpec",
                format!("panel width {panel_width} must lie in (0, {}]", zero_gap(t2)),
            ));
        }
        if !(tolerance > 0.0) {
            return Err(domain("QuadratureSpec", "tolerance must be positive"));
        }
        Ok(QuadratureSpec { panel_width, nodes_per_panel, tolerance })
    }

    /// Two panels per mean zero gap at the top of the range, 16 nodes each.
    pub fn for_range(t2: f64) -> Self {
        QuadratureSpec { panel_width: 0.5 * zero_gap(t2), nodes_per_panel: 16, tolerance: 1e-8 }
    }
}

/// |ζ(1/2+i(t+α))|²·|ζ(1/2+i(t+β))|².
pub fn integrand(t: f64, shift: &ShiftConfig) -> Result<f64> {
    let (a, b) = (t + shift.alpha, t + shift.beta);
    if !(a >= 0.0 && b >= 0.0) {
        return Err(domain("integrand", format!("need t + alpha >= 0 and t + beta >= 0, got t = {t}")));
    }
    let za = zeta_critical_sq(a);
    Ok(if a == b { za * za } else { za * zeta_critical_sq(b) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadValue {
    pub value: f64,
    pub error: f64,
    pub n_evals: u64,
}

/// ∫_{T1}^{T2} W(t)·integrand dt by composite Gauss–Legendre; each panel is
/// also done as two halves, the halves are kept and their difference is
/// the error estimate.
pub fn moment_quadrature(
    t1: f64,
    t2: f64,
    shift: &ShiftConfig,
    window: Option<&Window>,
    spec: &QuadratureSpec,
) -> Result<QuadValue> {
    moment_quadrature_with(t1, t2, spec, |t| {
        let w = match window {
            Some(w) => w.eval(t),
            None => 1.0,
        };
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(w * integrand(t, shift)?)
    })
}

/// As `moment_quadrature` for an arbitrary integrand.
pub fn moment_quadrature_with<F>(t1: f64, t2: f64, spec: &QuadratureSpec, f: F) -> Result<QuadValue>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(t1 >= 0.0 && t2 > t1 && t2 <= 1e6) {
        return Err(domain("moment_quadrature", format!("need 0 <= T1 < T2 <= 1e6, got [{t1}, {t2}]")));
    }
    let n = ((t2 - t1) / spec.panel_width).ceil().max(1.0) as usize;
    let h = (t2 - t1) / n as f64;
    let rule = gauss_rule(spec.nodes_per_panel);
    let gl = |a: f64, b: f64| -> Result<f64> {
        let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
        let mut acc = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            acc += w * f(c + r * x)?;
        }
        Ok(acc * r)
    };
    let panels: Vec<Result<(f64, f64)>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let a = t1 + k as f64 * h;
            let b = if k + 1 == n { t2 } else { a + h };
            let m = 0.5 * (a + b);
            let full = gl(a, b)?;
            let halves = gl(a, m)? + gl(m, b)?;
            Ok((halves, (halves - full).abs()))
        })
        .collect();
    let mut value = KahanSum::new();
    let mut error = KahanSum::new();
    for p in panels {
        let (v, e) = p?;
        value.add(v);
        error.add(e);
    }
    let (value, error) = (value.value(), error.value());
    if error > spec.tolerance * value.abs() {
        return Err(Error::Tolerance {
            what: "moment_quadrature",
            requested: spec.tolerance,
            achieved: error / value.abs().max(f64::MIN_POSITIVE),
        });
    }
    Ok(QuadValue { value, error, n_evals: (3 * n * spec.nodes_per_panel) as u64 })
}

/// ∫_{T1}^{T2} W(t)Q₂(t;α,β) dt.
pub fn main_term_integral(t1: f64, t2: f64, shift: &ShiftConfig, window: Option<&Window>) -> Result<f64> {
    if !(t1 >= 0.0 && t2 > t1) {
        return Err(domain("main_term_integral", format!("need 0 <= T1 < T2, got [{t1}, {t2}]")));
    }
    if t1 + shift.alpha.min(shift.beta) <= 0.0 && t1 > 0.0 {
        return Err(domain("main_term_integral", "t + shifts must stay positive"));
    }
    let model = Q2Model::new(*shift)?;
    let w = |t: f64| window.map_or(1.0, |w| w.eval(t));
    let quad = Adaptive::new(0.0, 1e-11).max_intervals(20_000);
    let mut total = 0.0;
    let lo = t1.max(1.0);
    if t1 < 1.0 && shift.delta().abs() < DEGENERATE_DELTA && window.is_none() {
        // the contour form of Q₂ loses accuracy as log t → -∞; below t = 1
        // the δ → 0 limit P₄ is used, off by O(δ) on a range worth O(1)
        let p4 = moment_polynomial(PolyKind::P4);
        let anti = |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let n = (x / (2.0 * PI)).ln();
            x * (0..=4).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * p4.derivative(n, k)).sum::<f64>()
        };
        total += anti(1.0) - anti(t1);
    } else if t1 < 1.0 {
        // t = e^u tames the log-power growth at the origin
        let u0 = t1.max((-40.0f64).exp()).ln();
        let r = quad.integrate(|u: f64| {
            let t = u.exp();
            model.eval(t) * w(t) * t
        }, &[u0, u0 / 2.0, 0.0])?;
        total += r.value;
    }
    if t2 > lo {
        let pieces = ((t2 / lo).ln().ceil() as usize + (t2 - lo).sqrt() as usize / 4).clamp(1, 4000);
        let mut bp: Vec<f64> = (0..=pieces).map(|k| lo * (t2 / lo).powf(k as f64 / pieces as f64)).collect();
        if let Some(win) = window {
            bp.extend(win.breakpoints().into_iter().filter(|&p| p > lo && p < t2));
            bp.sort_by(f64::total_cmp);
        }
        total += quad.integrate(|t| model.eval(t) * w(t), &bp)?.value;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    #[serde(rename = "T1")]
    pub t1: f64,
    #[serde(rename = "T2")]
    pub t2: f64,
    pub shift: ShiftConfig,
    pub window: Option<Window>,
    pub empirical: f64,
    pub main_term: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub n_evals: u64,
    pub wall_seconds: f64,
}

impl MomentReport {
    pub const CSV_HEADER: &'static str = "T1,T2,alpha,beta,empirical,main_term,abs_diff,rel_diff,n_evals,wall_seconds";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.t1,
            self.t2,
            self.shift.alpha,
            self.shift.beta,
            self.empirical,
            self.main_term,
            self.abs_diff,
            self.rel_diff,
            self.n_evals,
            self.wall_seconds
        )
    }
}

/// Empirical moment against the main-term integral over the same range.
pub fn compare(
    t1: f64,
    t2: f64,
    shift: &ShiftConfig,
    window: Option<&Window>,
    spec: &QuadratureSpec,
) -> Result<MomentReport> {
    let start = Instant::now();
    let emp = moment_quadrature(t1, t2, shift, window, spec)?;
    let main = main_term_integral(t1, t2, shift, window)?;
    let abs_diff = (emp.value - main).abs();
    Ok(MomentReport {
        t1,
        t2,
        shift: *shift,
        window: window.copied(),
        empirical: emp.value,
        main_term: main,
        abs_diff,
        rel_diff: abs_diff / main.abs(),
        n_evals: emp.n_evals,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// ∫₀^T of the leading-order model (1/(ζ(2)b²))(1 - sin²(b/2)/(b/2)²)log⁴(t/2π),
/// the regime δ log T → b.
pub fn chandee_leading_integral(t_max: f64, b: f64) -> f64 {
    let z2 = PI * PI / 6.0;
    let hb = b / 2.0;
    let shape = if hb.abs() < 1e-4 { hb * hb / 3.0 } else { 1.0 - (hb.sin() / hb).powi(2) };
    let c = shape / (z2 * b * b);
    // ∫₀^T log⁴(t/2π) dt = T Σ_k (-1)^k 4!/(4-k)! N^{4-k}
    let n = (t_max / (2.0 * PI)).ln();
    let poly = n.powi(4) - 4.0 * n.powi(3) + 12.0 * n * n - 24.0 * n + 24.0;
    c * t_max * poly
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AfeWeight {
    /// V_δ by its contour integral.
    Exact,
    /// The J_δ surrogate; fast but only approximate.
    J,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AfeCheck {
    pub t: f64,
    pub delta: f64,
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub truncation: u64,
}

/// M = (t(t+δ)/4π²)·exp(σ/√Q).
pub fn afe_truncation(t: f64, delta: f64, q: &SmoothingConfig, cutoff_sigma: f64) -> u64 {
    (t * (t + delta) / (4.0 * PI * PI) * (cutoff_sigma / q.q.sqrt()).exp()).ceil() as u64
}

/// 2Re Σ_{nm ≤ M} d(n)d(m) m^{iδ}(m/n)^{it}/√(nm) · κ(t)·V_δ(nm,t).
pub fn afe_rhs(t: f64, shift: &ShiftConfig, q: &SmoothingConfig, m_trunc: u64, weight: AfeWeight) -> Result<f64> {
    let m = m_trunc as usize;
    if m < 1 || m > 50_000_000 {
        return Err(Error::Capacity { requested: m_trunc, limit: 50_000_000 });
    }
    let delta = shift.delta();
    let table = sieve_divisors(m)?;
    let (kappa, _) = kappa_phi(t, shift)?;
    let a: Vec<Complex64> = (1..=m)
        .map(|n| {
            let nf = n as f64;
            Complex64::from_polar(table.d(n) as f64 / nf.sqrt(), -t * nf.ln())
        })
        .collect();
    let b: Vec<Complex64> = (1..=m)
        .map(|n| {
            let nf = n as f64;
            Complex64::from_polar(table.d(n) as f64 / nf.sqrt(), (t + delta) * nf.ln())
        })
        .collect();
    // coefficient of each product k = nm
    let mut s = vec![Complex64::new(0.0, 0.0); m + 1];
    for n in 1..=m {
        let an = a[n - 1];
        for mm in 1..=m / n {
            s[n * mm] += an * b[mm - 1];
        }
    }
    let weights: Vec<Complex64> = match weight {
        AfeWeight::Exact => {
            let tab = VTable::new(t, shift, q)?;
            (1..=m).into_par_iter().map(|k| tab.eval(k as f64)).collect()
        }
        AfeWeight::J => (1..=m).map(|k| Complex64::new(j_weight(k as f64, t, shift, q), 0.0)).collect(),
    };
    let mut acc = KahanComplex::new();
    for k in 1..=m {
        acc.add(s[k] * weights[k - 1]);
    }
    Ok(2.0 * (kappa * acc.value()).re)
}

/// Both sides of the exact identity at one height.
pub fn afe_check(t: f64, shift: &ShiftConfig, q: &SmoothingConfig, cutoff_sigma: f64) -> Result<AfeCheck> {
    afe_check_with(t, shift, q, cutoff_sigma, AfeWeight::Exact)
}

pub fn afe_check_with(
    t: f64,
    shift: &ShiftConfig,
    q: &SmoothingConfig,
    cutoff_sigma: f64,
    weight: AfeWeight,
) -> Result<AfeCheck> {
    if !(50.0..=2000.0).contains(&t) {
        return Err(domain("afe_check", format!("t = {t} outside [50, 2000]")));
    }
    if !(9.0..=100.0).contains(&q.q) {
        return Err(domain("afe_check", format!("Q = {} outside [9, 100]", q.q)));
    }
    if !(cutoff_sigma > 0.0) {
        return Err(domain("afe_check", "cutoff_sigma must be positive"));
    }
    let delta = shift.delta();
    if !(t + delta > 0.0) {
        return Err(domain("afe_check", "t + delta must be positive"));
    }
    let lhs = zeta_fast(Complex64::new(0.5, t)).norm_sqr() * zeta_fast(Complex64::new(0.5, t + delta)).norm_sqr();
    let m = afe_truncation(t, delta, q, cutoff_sigma);
    let rhs = afe_rhs(t, shift, q, m, weight)?;
    Ok(AfeCheck { t, delta, q: q.q, lhs, rhs, rel_err: (lhs - rhs).abs() / lhs.abs(), truncation: m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smoothing::WindowKind;

    fn s0() -> ShiftConfig {
        ShiftConfig::new(0.0, 0.0).unwrap()
    }

    #[test]
    fn integrand_basics() {
        assert!(integrand(14.134725141734693, &s0()).unwrap() <= 1e-12);
        let s = ShiftConfig::general(2.0, 7.0);
        assert_eq!(integrand(30.0, &s).unwrap(), integrand(30.0, &s.swapped()).unwrap());
        assert!(integrand(-1.0, &s0()).is_err());
    }

    #[test]
    fn engine_self_test() {
        let spec = QuadratureSpec::for_range(10.0);
        let r = moment_quadrature_with(0.0, 10.0, &spec, |_| Ok(1.0)).unwrap();
        assert!((r.value - 10.0).abs() < 1e-12);
        assert!(QuadratureSpec::new(0.1, 12, 1e-8, 1000.0).is_err());
        assert!(QuadratureSpec::new(1.0, 16, 1e-8, 1e5).is_err());
    }

    #[test]
    fn fourth_moment_matches_simpson() {
        let spec = QuadratureSpec::for_range(200.0);
        let r = moment_quadrature(0.0, 200.0, &s0(), None, &spec).unwrap();
        let h = 0.01;
        let n = 20000;
        let mut acc = KahanSum::new();
        for k in 0..=n {
            let w = if k == 0 || k == n { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
            acc.add(w * integrand(k as f64 * h, &s0()).unwrap());
        }
        let simpson = acc.value() * h / 3.0;
        assert!((r.value - simpson).abs() < 1e-6 * simpson, "{} {simpson}", r.value);
    }

    #[test]
    fn additivity() {
        let s = ShiftConfig::new(0.0, 3.0).unwrap();
        let spec = QuadratureSpec::for_range(700.0);
        let a = moment_quadrature(300.0, 450.0, &s, None, &spec).unwrap().value;
        let b = moment_quadrature(450.0, 700.0, &s, None, &spec).unwrap().value;
        let c = moment_quadrature(300.0, 700.0, &s, None, &spec).unwrap().value;
        assert!((a + b - c).abs() < 1e-9 * c);
    }

    #[test]
    fn window_against_sharp_cutoff() {
        // |M(W) - M(indicator)| ≪ Δ·log⁴T
        let (t1, t2, d) = (500.0, 1500.0, 10.0);
        let win = Window::new(WindowKind::GaussianConv, t1, t2, d).unwrap();
        let (a, b) = win.support();
        let spec = QuadratureSpec::for_range(b);
        let smooth = moment_quadrature(a, b, &s0(), Some(&win), &spec).unwrap().value;
        let sharp = moment_quadrature(t1, t2, &s0(), None, &spec).unwrap().value;
        assert!((smooth - sharp).abs() <= d * t2.ln().powi(4), "{smooth} {sharp}");
    }

    #[test]
    fn main_term_integral_matches_closed_form() {
        // ∫₀^T P(log t/2π) dt = T Σ_k (-1)^k P^{(k)}(N)
        let p4 = moment_polynomial(PolyKind::P4);
        let t = 5000.0;
        let n = (t / (2.0 * PI)).ln();
        let closed: f64 = (0..=4).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * p4.derivative(n, k)).sum::<f64>() * t;
        let num = main_term_integral(0.0, t, &s0(), None).unwrap();
        assert!((num - closed).abs() < 1e-8 * closed, "{num} {closed}");
    }

    #[test]
    fn chandee_model_small_b_limit() {
        // b → 0 recovers 1/(2π²)·∫log⁴
        let t = 1e4;
        let a = chandee_leading_integral(t, 1e-6);
        let b = chandee_leading_integral(t, 1e-2) ;
        let n = (t / (2.0 * PI)).ln();
        let direct = t * (n.powi(4) - 4.0 * n.powi(3) + 12.0 * n * n - 24.0 * n + 24.0) / (2.0 * PI * PI);
        assert!((a - direct).abs() < 1e-9 * direct);
        assert!(b < a);
    }

    #[test]
    fn afe_identity_at_low_height() {
        let q = SmoothingConfig::new(25.0).unwrap();
        let r = afe_check(100.0, &s0(), &q, 12.0).unwrap();
        assert!(r.rel_err <= 1e-5, "{r:?}");
    }

    #[test]
    fn afe_relabeling_invariance() {
        // (t, δ) → (t + δ, -δ) swaps the two factors
        let q = SmoothingConfig::new(16.0).unwrap();
        let (t, d) = (80.0, 2.0);
        let m = afe_truncation(t, d, &q, 12.0);
        let a = afe_rhs(t, &ShiftConfig::general(0.0, d), &q, m, AfeWeight::Exact).unwrap();
        let b = afe_rhs(t + d, &ShiftConfig::general(0.0, -d), &q, m, AfeWeight::Exact).unwrap();
        assert!((a - b).abs() < 1e-9 * a.abs(), "{a} {b}");
    }

    #[test]
    fn afe_improves_with_q() {
        let t = 60.0;
        let err = |qv: f64| afe_check(t, &s0(), &SmoothingConfig::new(qv).unwrap(), 12.0).unwrap().rel_err;
        assert!(err(49.0) <= 2.0 * err(16.0).max(1e-13));
    }

    #[test]
    fn parallel_and_serial_agree() {
        let spec = QuadratureSpec::for_range(400.0);
        let s = ShiftConfig::new(0.0, 1.0).unwrap();
        let par = moment_quadrature(100.0, 400.0, &s, None, &spec).unwrap().value;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let ser = pool.install(|| moment_quadrature(100.0, 400.0, &s, None, &spec).unwrap().value);
        assert!((par - ser).abs() <= 1e-12 * par);
    }
}
