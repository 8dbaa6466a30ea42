//! Stieltjes constants from the Laurent expansion of ζ(1+s) about s = 0.

use crate::analytic::cauchy_coeffs;
use crate::error::{domain, Result};
use num_complex::Complex64;
use once_cell::sync::Lazy;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// γ_0..γ_{n_max}; γ_0 is the Euler–Mascheroni constant.
#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesTable {
    pub gamma: Vec<f64>,
}

impl StieltjesTable {
    pub fn get(&self, n: usize) -> f64 {
        self.gamma[n]
    }
}

/// ζ(1+s) - 1/s = Σ (-1)^n γ_n s^n / n!, so γ_n = (-1)^n n! c_n where c_n are
/// the Taylor coefficients of the entire function on the left.
pub fn stieltjes(n_max: usize) -> Result<StieltjesTable> {
    if n_max > 8 {
        return Err(domain("stieltjes", format!("n_max = {n_max} exceeds 8")));
    }
    Ok(StieltjesTable { gamma: FULL.gamma[..=n_max].to_vec() })
}

static FULL: Lazy<StieltjesTable> = Lazy::new(|| {
    let f = |s: Complex64| super::zeta::zeta_em(s + 1.0, 40) - s.inv();
    // radius 2 keeps the high coefficients well conditioned; the
    // two-radius self-check runs at radius 1
    let series = cauchy_coeffs(f, Complex64::new(0.0, 0.0), 0, 9, 2.0)
        .expect("zeta(1+s) - 1/s is entire");
    let mut fact = 1.0;
    let gamma = (0..9)
        .map(|n| {
            if n > 0 {
                fact *= n as f64;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * fact * series.coefficient(n as i32).re
        })
        .collect();
    StieltjesTable { gamma }
});

/// w ζ(1+w) near w = 0 from the Stieltjes series (accurate for |w| ≤ 0.1).
pub fn w_zeta_one_plus_w(w: Complex64) -> Complex64 {
    let g = &FULL.gamma;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut p = w;
    let mut fact = 1.0;
    for (n, gn) in g.iter().enumerate() {
        if n > 0 {
            fact *= n as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += p * (sign * gn / fact);
        p *= w;
    }
    sum + 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::KahanSum;

    // H_n - ln n - 1/(2n) + 1/(12n²) - 1/(120n⁴) at n = 10⁴
    fn harmonic_gamma() -> f64 {
        let n = 10_000u32;
        let mut h = KahanSum::new();
        for k in (1..=n).rev() {
            h.add(1.0 / k as f64);
        }
        let nf = n as f64;
        h.value() - nf.ln() - 0.5 / nf + 1.0 / (12.0 * nf * nf) - 1.0 / (120.0 * nf.powi(4))
    }

    #[test]
    fn gamma0_matches_harmonic_limit() {
        let t = stieltjes(8).unwrap();
        let h = harmonic_gamma();
        assert!((t.gamma[0] - h).abs() < 1e-12, "{} vs {}", t.gamma[0], h);
        assert!((t.gamma[0] - EULER_GAMMA).abs() < 1e-14);
    }

    #[test]
    fn higher_constants() {
        let t = stieltjes(8).unwrap();
        let reference = [
            0.5772156649015328606,
            -0.07281584548367672486,
            -0.009690363192872318484,
            0.002053834420303345866,
            0.002325370065467300057,
            0.0007933238173010627017,
            -0.0002387693454301996098,
            -0.0005272895670577510460,
            -0.0003521233538030395096,
        ];
        for (n, r) in reference.iter().enumerate() {
            assert!((t.gamma[n] - r).abs() < 1e-12, "n={n}: {} vs {r}", t.gamma[n]);
        }
        assert!(stieltjes(9).is_err());
        assert_eq!(stieltjes(2).unwrap().gamma.len(), 3);
    }

    #[test]
    fn gamma1_stable_across_radii() {
        let f = |s: Complex64| crate::special::zeta::zeta_em(s + 1.0, 40) - s.inv();
        let z = Complex64::new(0.0, 0.0);
        let a = crate::analytic::cauchy_coeffs_unchecked(f, z, 0, 3, 1.5, 128);
        let b = crate::analytic::cauchy_coeffs_unchecked(f, z, 0, 3, 0.7, 128);
        assert!((a.coefficient(1) - b.coefficient(1)).norm() < 1e-12);
        assert!((-a.coefficient(1).re - (-0.07281584548367672)).abs() < 1e-12);
    }

    #[test]
    fn laurent_constant_term_is_gamma0() {
        // a power of two keeps (1 + s) - 1 exact
        let s = Complex64::new(2f64.powi(-23), 0.0);
        let v = crate::special::zeta::zeta_em(s + 1.0, 40) - s.inv();
        assert!((v.re - EULER_GAMMA).abs() < 1e-7, "{v}");
        let w = Complex64::new(0.05, 0.02);
        let direct = w * crate::special::zeta::zeta_em(w + 1.0, 40);
        assert!((w_zeta_one_plus_w(w) - direct).norm() < 1e-14);
    }
}
