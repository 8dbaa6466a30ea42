//! The moment polynomials P₃ and P₄.
//!
//! P₄(log t/2π) is the δ = 0 value of D + OD, so
//!   P₄(y) = 2 Σ_j ℓ_{-j} y^j/j! + h(0,0) y² + 2 ∂h(0,0) y + ∂²h(0,0),
//! where ℓ are the Laurent coefficients of L(s) = ζ⁴(1+s)/ζ(2+2s) at 0.
//! P₃(x) = res_{s=0} L(s) e^{sx}/(1+s).

use super::hfun::{h_offdiag, l_diag};
use super::laurent::cauchy_coeffs;
use num_complex::Complex64;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolyKind {
    P3,
    P4,
}

/// Real polynomial with coefficients stored from the leading power down
/// (b₀..b₃ for P₃).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentPolynomial {
    pub kind: PolyKind,
    pub coeffs: Vec<f64>,
}

impl MomentPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[0]
    }

    /// Coefficient of x^k.
    pub fn power(&self, k: usize) -> f64 {
        if k > self.degree() {
            0.0
        } else {
            self.coeffs[self.degree() - k]
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc * x + c)
    }

    /// k-th derivative at x.
    pub fn derivative(&self, x: f64, k: usize) -> f64 {
        let d = self.degree();
        let mut acc = 0.0;
        for p in (k..=d).rev() {
            let f: f64 = ((p - k + 1)..=p).map(|i| i as f64).product();
            acc = acc * x + self.power(p) * f;
        }
        acc
    }

    /// ∫_a^b P(x) dx.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let prim = |x: f64| {
            (0..=self.degree())
                .rev()
                .fold(0.0, |acc, p| acc * x + self.power(p) / (p + 1) as f64)
                * x
        };
        prim(b) - prim(a)
    }
}

const RADIUS: f64 = 0.25;

fn build_p4() -> MomentPolynomial {
    let zero = Complex64::new(0.0, 0.0);
    let l = cauchy_coeffs(l_diag, zero, 4, 5, RADIUS).expect("L has a fourth-order pole at 0 only");
    let h = cauchy_coeffs(|u| h_offdiag(zero, u), zero, 0, 3, RADIUS).expect("h(0,.) is analytic at 0");
    let mut asc = [0.0; 5];
    let mut fact = 1.0;
    for j in 0..=4 {
        if j > 0 {
            fact *= j as f64;
        }
        asc[j] = 2.0 * l.coefficient(-(j as i32)).re / fact;
    }
    asc[2] += h.coefficient(0).re;
    asc[1] += 2.0 * h.coefficient(1).re;
    asc[0] += 2.0 * h.coefficient(2).re;
    MomentPolynomial { kind: PolyKind::P4, coeffs: asc.iter().rev().copied().collect() }
}

fn build_p3() -> MomentPolynomial {
    let zero = Complex64::new(0.0, 0.0);
    let m = cauchy_coeffs(|s| l_diag(s) / (s + 1.0), zero, 4, 4, RADIUS)
        .expect("L(s)/(1+s) has a fourth-order pole at 0 only");
    let b = [m.coefficient(-4).re / 6.0, m.coefficient(-3).re / 2.0, m.coefficient(-2).re, m.coefficient(-1).re];
    MomentPolynomial { kind: PolyKind::P3, coeffs: b.to_vec() }
}

static P3: Lazy<MomentPolynomial> = Lazy::new(build_p3);
static P4: Lazy<MomentPolynomial> = Lazy::new(build_p4);

/// Cached P₃ or P₄.
pub fn moment_polynomial(kind: PolyKind) -> &'static MomentPolynomial {
    match kind {
        PolyKind::P3 => &P3,
        PolyKind::P4 => &P4,
    }
}
