//! ζ(s) by Euler–Maclaurin summation, the Riemann–Siegel formula on the
//! critical line, and a short Dirichlet sum with tail correction for Re s ≥ 1.5.

use super::gamma::{chi, theta};
use crate::error::{domain, Error, Result};
use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::f64::consts::PI;
use std::sync::atomic::{AtomicBool, Ordering};

/// Below this height the Riemann–Siegel remainder (five correction terms)
/// is not accurate to 1e-10, so auto mode keeps using Euler–Maclaurin.
pub const RS_MIN_T: f64 = 1000.0;
/// Largest |Im s| for which off-line Euler–Maclaurin values are validated.
pub const EM_VALIDATED_T: f64 = 1e4;
/// Largest |t| validated on the critical line.
pub const CRITICAL_VALIDATED_T: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaMethod {
    Auto,
    /// `corrections` remainder terms C_0..C_{corrections-1}, at most 5.
    RiemannSiegel { corrections: usize },
    /// `terms` direct terms before the Bernoulli tail.
    EulerMaclaurin { terms: usize },
    DirichletTail { terms: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaEval {
    pub value: Complex64,
    pub method: ZetaMethod,
    /// Set when the argument lies outside the validated accuracy region.
    pub degraded: bool,
}

// B_{2k}/(2k)! for k = 1..6
const BERN_FACT: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
];

/// Default Euler–Maclaurin length N = max(30, ⌈2|t|⌉).
pub fn em_default_terms(t: f64) -> usize {
    30usize.max((2.0 * t.abs()).ceil() as usize)
}

#[inline]
fn n_pow_neg(s: Complex64, ln_n: f64) -> Complex64 {
    let m = (-s.re * ln_n).exp();
    let (sin, cos) = (-s.im * ln_n).sin_cos();
    Complex64::new(m * cos, m * sin)
}

/// Euler–Maclaurin with `n` direct terms and Bernoulli terms through B12.
pub fn zeta_em(s: Complex64, n: usize) -> Complex64 {
    let n = n.max(2);
    let mut re = 0.0;
    let mut im = 0.0;
    for k in 1..n {
        let z = n_pow_neg(s, (k as f64).ln());
        re += z.re;
        im += z.im;
    }
    let nf = n as f64;
    let ns = n_pow_neg(s, nf.ln());
    let mut acc = Complex64::new(re, im) + ns * nf / (s - 1.0) + ns * 0.5;
    let mut poch = s;
    let mut npow = ns / nf;
    let inv_n2 = 1.0 / (nf * nf);
    for (k, b) in BERN_FACT.iter().enumerate() {
        acc += poch * npow * *b;
        let j = 2.0 * k as f64 + 1.0;
        poch *= (s + j) * (s + j + 1.0);
        npow *= inv_n2;
    }
    acc
}

/// Taylor coefficients ζ^{(k)}(s0)/k!, k < K, from the differentiated
/// Euler–Maclaurin formula.
pub fn zeta_taylor<const K: usize>(s0: Complex64, n: usize) -> [Complex64; K] {
    let zero = Complex64::new(0.0, 0.0);
    let n = n.max(2);
    let mut out = [zero; K];
    for k in 1..n {
        let l = (k as f64).ln();
        let mut p = n_pow_neg(s0, l);
        for (j, o) in out.iter_mut().enumerate() {
            *o += p;
            p *= -l / (j as f64 + 1.0);
        }
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    // exp(-ε ln N) series
    let mut decay = [zero; K];
    let mut c = Complex64::new(1.0, 0.0);
    for (j, d) in decay.iter_mut().enumerate() {
        *d = c;
        c *= -ln_n / (j as f64 + 1.0);
    }
    let ns = n_pow_neg(s0, ln_n);
    // N^{1-s}/(s-1)
    let mut inv = [zero; K];
    let r = (s0 - 1.0).inv();
    let mut q = r;
    for i in inv.iter_mut() {
        *i = q;
        q *= -r;
    }
    let head = ser_mul(&ser_scale(&decay, ns * nf), &inv);
    let half = ser_scale(&decay, ns * 0.5);
    for j in 0..K {
        out[j] += head[j] + half[j];
    }
    let mut poch = [zero; K];
    poch[0] = s0;
    if K > 1 {
        poch[1] = Complex64::new(1.0, 0.0);
    }
    let mut npow = ns / nf;
    let inv_n2 = 1.0 / (nf * nf);
    for (k, b) in BERN_FACT.iter().enumerate() {
        let term = ser_mul(&poch, &ser_scale(&decay, npow * *b));
        for j in 0..K {
            out[j] += term[j];
        }
        let a = 2.0 * k as f64 + 1.0;
        poch = ser_mul(&poch, &linear::<K>(s0 + a));
        poch = ser_mul(&poch, &linear::<K>(s0 + a + 1.0));
        npow *= inv_n2;
    }
    out
}

fn linear<const K: usize>(c0: Complex64) -> [Complex64; K] {
    let mut l = [Complex64::new(0.0, 0.0); K];
    l[0] = c0;
    if K > 1 {
        l[1] = Complex64::new(1.0, 0.0);
    }
    l
}

fn ser_scale<const K: usize>(a: &[Complex64; K], c: Complex64) -> [Complex64; K] {
    let mut o = *a;
    for x in o.iter_mut() {
        *x *= c;
    }
    o
}

pub(crate) fn ser_mul<const K: usize>(a: &[Complex64; K], b: &[Complex64; K]) -> [Complex64; K] {
    let mut o = [Complex64::new(0.0, 0.0); K];
    for i in 0..K {
        for j in 0..K - i {
            o[i + j] += a[i] * b[j];
        }
    }
    o
}

// Riemann–Siegel remainder polynomials C_0..C_4 in w = p - 1/2.
struct RsCoefficients {
    polys: [Vec<f64>; 5],
}

static RS: Lazy<RsCoefficients> = Lazy::new(build_rs_coefficients);

fn build_rs_coefficients() -> RsCoefficients {
    // Ψ(1/2 + w) = -cos(2π(w² - 5/16)) / cos(2πw) is entire; Taylor
    // coefficients from a circle of radius 1.
    const M: usize = 256;
    const K: usize = 72;
    let psi = |w: Complex64| -> Complex64 {
        -((w * w - 5.0 / 16.0) * (2.0 * PI)).cos() / (w * (2.0 * PI)).cos()
    };
    let samples: Vec<(Complex64, Complex64)> = (0..M)
        .map(|j| {
            let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / M as f64);
            (w, psi(w))
        })
        .collect();
    let a: Vec<f64> = (0..K)
        .map(|k| {
            let s: Complex64 = samples.iter().map(|(w, v)| v * w.powi(-(k as i32))).sum();
            s.re / M as f64
        })
        .collect();
    let deriv = |j: usize| -> Vec<f64> {
        (0..K - j)
            .map(|i| {
                let mut f = 1.0;
                for m in (i + 1)..=(i + j) {
                    f *= m as f64;
                }
                a[i + j] * f
            })
            .collect()
    };
    let combine = |terms: &[(f64, usize)]| -> Vec<f64> {
        let mut out = vec![0.0; K];
        for &(c, j) in terms {
            for (i, v) in deriv(j).into_iter().enumerate() {
                out[i] += c * v;
            }
        }
        out
    };
    let p2 = PI * PI;
    let p4 = p2 * p2;
    let p6 = p4 * p2;
    let p8 = p4 * p4;
    RsCoefficients {
        polys: [
            combine(&[(1.0, 0)]),
            combine(&[(-1.0 / (96.0 * p2), 3)]),
            combine(&[(1.0 / (18432.0 * p4), 6), (1.0 / (64.0 * p2), 2)]),
            combine(&[
                (-1.0 / (5308416.0 * p6), 9),
                (-1.0 / (3840.0 * p4), 5),
                (-1.0 / (64.0 * p2), 1),
            ]),
            combine(&[
                (1.0 / (2038431744.0 * p8), 12),
                (11.0 / (5898240.0 * p6), 8),
                (19.0 / (24576.0 * p4), 4),
                (1.0 / (128.0 * p2), 0),
            ]),
        ],
    }
}

fn horner(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Riemann–Siegel C_k(p) for p in [0, 1), k ≤ 4.
pub fn rs_correction(k: usize, p: f64) -> f64 {
    horner(&RS.polys[k], p - 0.5)
}

/// Hardy's Z(t) by the Riemann–Siegel formula with `corrections` remainder terms.
pub fn hardy_z_rs(t: f64, corrections: usize) -> f64 {
    let t = t.abs();
    let a = (t / (2.0 * PI)).sqrt();
    let m = a.floor() as usize;
    let p = a - m as f64;
    let th = theta(t);
    let mut sum = 0.0;
    for n in 1..=m {
        let nf = n as f64;
        sum += (th - t * nf.ln()).cos() / nf.sqrt();
    }
    let mut rem = 0.0;
    let inv_a = 1.0 / a;
    let mut scale = 1.0;
    for k in 0..corrections.min(5) {
        rem += rs_correction(k, p) * scale;
        scale *= inv_a;
    }
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * sum + sign * a.powf(-0.5) * rem
}

/// Hardy Z(t) = e^{iθ(t)} ζ(1/2+it), real for real t.
pub fn hardy_z(t: f64) -> f64 {
    if t.abs() >= RS_MIN_T {
        hardy_z_rs(t, 5)
    } else {
        let z = zeta_em(Complex64::new(0.5, t), em_default_terms(t));
        (Complex64::from_polar(1.0, theta(t)) * z).re
    }
}

/// ζ(1/2 + it) using the fastest accurate route.
pub fn zeta_critical(t: f64) -> Complex64 {
    if t < 0.0 {
        return zeta_critical(-t).conj();
    }
    if t >= RS_MIN_T {
        Complex64::from_polar(hardy_z_rs(t, 5), -theta(t))
    } else {
        zeta_em(Complex64::new(0.5, t), em_default_terms(t))
    }
}

/// |ζ(1/2 + it)|².
pub fn zeta_critical_sq(t: f64) -> f64 {
    let t = t.abs();
    if t >= RS_MIN_T {
        let z = hardy_z_rs(t, 5);
        z * z
    } else {
        zeta_em(Complex64::new(0.5, t), em_default_terms(t)).norm_sqr()
    }
}

static DEGRADED_WARNED: AtomicBool = AtomicBool::new(false);

/// ζ(s) with an explicit or automatic method.
pub fn zeta(s: Complex64, method: ZetaMethod) -> Result<Complex64> {
    let e = zeta_eval(s, method)?;
    if e.degraded && !DEGRADED_WARNED.swap(true, Ordering::Relaxed) {
        log::warn!("zeta({s}) lies outside the validated accuracy region");
    }
    Ok(e.value)
}

/// ζ(s) together with the method actually used and a degraded-accuracy flag.
pub fn zeta_eval(s: Complex64, method: ZetaMethod) -> Result<ZetaEval> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole { function: "zeta", at: "1".into() });
    }
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(domain("zeta", format!("non-finite argument {s}")));
    }
    if s.im < 0.0 {
        let mut e = zeta_eval(s.conj(), method)?;
        e.value = e.value.conj();
        return Ok(e);
    }
    let t = s.im;
    let on_line = s.re == 0.5;
    match method {
        ZetaMethod::RiemannSiegel { corrections } => {
            if !on_line || t < 20.0 {
                return Err(domain("zeta", "Riemann-Siegel needs Re s = 1/2 and |Im s| >= 20"));
            }
            if corrections == 0 || corrections > 5 {
                return Err(domain("zeta", "Riemann-Siegel supports 1..=5 correction terms"));
            }
            let z = hardy_z_rs(t, corrections);
            Ok(ZetaEval {
                value: Complex64::from_polar(z, -theta(t)),
                method,
                degraded: t > CRITICAL_VALIDATED_T || t < RS_MIN_T,
            })
        }
        ZetaMethod::EulerMaclaurin { terms } => {
            if terms == 0 {
                return Err(domain("zeta", "Euler-Maclaurin needs at least one term"));
            }
            Ok(ZetaEval {
                value: zeta_em(s, terms),
                method,
                degraded: (terms as f64) < t || (!on_line && t > EM_VALIDATED_T),
            })
        }
        ZetaMethod::DirichletTail { terms } => {
            if s.re < 1.5 {
                return Err(domain("zeta", "Dirichlet tail requires Re s >= 1.5"));
            }
            if terms == 0 {
                return Err(domain("zeta", "Dirichlet tail needs at least one term"));
            }
            Ok(ZetaEval { value: zeta_em(s, terms), method, degraded: (terms as f64) < t })
        }
        ZetaMethod::Auto => {
            if on_line && t >= RS_MIN_T {
                return zeta_eval(s, ZetaMethod::RiemannSiegel { corrections: 5 });
            }
            if s.re >= 1.5 {
                let n = 10usize.max(t.ceil() as usize);
                return zeta_eval(s, ZetaMethod::DirichletTail { terms: n });
            }
            if s.re < -1.0 {
                // reflect into Re s > 2
                let x = chi(s)?;
                let other = zeta_eval(Complex64::new(1.0, 0.0) - s, ZetaMethod::Auto)?;
                return Ok(ZetaEval {
                    value: x * other.value,
                    method: ZetaMethod::Auto,
                    degraded: other.degraded || t > EM_VALIDATED_T,
                });
            }
            let mut e = zeta_eval(s, ZetaMethod::EulerMaclaurin { terms: em_default_terms(t) })?;
            e.method = ZetaMethod::EulerMaclaurin { terms: em_default_terms(t) };
            Ok(e)
        }
    }
}

/// ζ(s) for arguments the crate knows to be safe (no checks, no logging).
#[inline]
pub(crate) fn zeta_fast(s: Complex64) -> Complex64 {
    if s.im < 0.0 {
        return zeta_fast(s.conj()).conj();
    }
    if s.re == 0.5 && s.im >= RS_MIN_T {
        return zeta_critical(s.im);
    }
    if s.re >= 1.5 {
        return zeta_em(s, 10usize.max(s.im.ceil() as usize));
    }
    zeta_em(s, em_default_terms(s.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }
    fn z(s: Complex64) -> Complex64 {
        zeta(s, ZetaMethod::Auto).unwrap()
    }

    #[test]
    fn classical_values() {
        assert!((z(c(2.0, 0.0)).re - PI * PI / 6.0).abs() < 4e-15, "{}", z(c(2.0, 0.0)));
        assert!((z(c(0.5, 0.0)).re + 1.4603545088095868).abs() < 1e-14);
        assert!((z(c(0.0, 0.0)).re + 0.5).abs() < 1e-14);
        assert!((z(c(-1.0, 0.0)).re + 1.0 / 12.0).abs() < 1e-13);
        assert!((z(c(-3.0, 0.0)).re - 1.0 / 120.0).abs() < 1e-13);
        assert!(z(c(-4.0, 0.0)).norm() < 1e-15);
        assert!(matches!(zeta(c(1.0, 0.0), ZetaMethod::Auto), Err(Error::Pole { .. })));
    }

    #[test]
    fn first_zero() {
        assert!(z(c(0.5, 14.1347251417)).norm() < 1e-8);
        assert!(z(c(0.5, 14.1347251417346937904572519836)).norm() < 1e-12);
    }

    #[test]
    fn reference_values_off_and_on_line() {
        // 40-digit reference values
        let cases = [
            (c(0.5, 100.0), c(2.692619885681324090476096, -0.02038602960259816177072685)),
            (c(0.5, 1000.0), c(0.3563343671943960550744024, 0.9319978312329936651150604)),
            (c(0.5, 5000.5), c(0.5318052648972077235354180, 0.2447569501411669530881493)),
            (c(0.8, 30.0), c(0.2522518291856073480648922, -0.5259207626500248101760464)),
            (c(2.5, 7.0), c(1.018085207324525404135553, 0.1296270746373232509657115)),
        ];
        for (s, r) in cases {
            let v = z(s);
            assert!((v - r).norm() <= 1e-10 * r.norm(), "s={s} got {v} want {r}");
        }
        let zt = hardy_z(10000.0);
        assert!((zt + 0.3413947242312085591768903).abs() < 1e-10, "{zt}");
        assert!((theta(10000.0) - 31861.92383083582087295).abs() < 1e-9);
    }

    #[test]
    fn riemann_siegel_improves_with_each_correction() {
        for t in [1200.0, 3000.0, 7777.7] {
            let exact = zeta_em(c(0.5, t), em_default_terms(t));
            let exact_z = (Complex64::from_polar(1.0, theta(t)) * exact).re;
            let errs: Vec<f64> = (1..=5).map(|k| (hardy_z_rs(t, k) - exact_z).abs()).collect();
            assert!(errs[4] < 1e-10 * (1.0 + exact_z.abs()), "t={t} errs={errs:?}");
            assert!(errs[4] <= errs[0], "t={t} errs={errs:?}");
        }
    }

    #[test]
    fn rs_c0_is_psi() {
        for p in [0.1, 0.3, 0.5, 0.77, 0.9] {
            let direct = (2.0 * PI * (p * p - p - 1.0 / 16.0)).cos() / (2.0 * PI * p).cos();
            assert!((rs_correction(0, p) - direct).abs() < 1e-13, "p={p}");
        }
        assert!((rs_correction(0, 0.5) - 0.3826834323650898).abs() < 1e-14);
    }

    #[test]
    fn taylor_coefficients_match_known_derivatives() {
        let d = zeta_taylor::<3>(c(2.0, 0.0), 40);
        assert!((d[0].re - PI * PI / 6.0).abs() < 1e-14);
        assert!((d[1].re + 0.9375482543158437537).abs() < 1e-13);
        assert!((2.0 * d[2].re - 1.9892802342989010234).abs() < 1e-12);
        // against differences of the plain evaluator off the axis
        let s0 = c(1.0, 37.0);
        let d = zeta_taylor::<2>(s0, 80);
        let h = 1e-5;
        let fd = (zeta_em(s0 + h, 80) - zeta_em(s0 - h, 80)) / (2.0 * h);
        assert!((d[1] - fd).norm() < 1e-8);
    }

    #[test]
    fn method_validation() {
        assert!(zeta(c(0.6, 30.0), ZetaMethod::RiemannSiegel { corrections: 3 }).is_err());
        assert!(zeta(c(0.5, 10.0), ZetaMethod::RiemannSiegel { corrections: 3 }).is_err());
        assert!(zeta(c(1.2, 0.0), ZetaMethod::DirichletTail { terms: 10 }).is_err());
        let e = zeta_eval(c(0.7, 2e4), ZetaMethod::Auto).unwrap();
        assert!(e.degraded);
        let e = zeta_eval(c(0.5, 2e4), ZetaMethod::Auto).unwrap();
        assert!(!e.degraded);
    }
}
