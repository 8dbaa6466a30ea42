//! The off-diagonal averaging coefficients
//!   a_j(g) = ∫ ∂_s^j [h̃(it,s)/(1+s)]_{s=0} (g∗g)(t) dt,  j = 0, 1, 2,
//! with h̃ = e^{-2γ₀s}h, so that OD̄ = a₀(N+2γ₀)² + 2a₁(N+2γ₀) + a₂ and the
//! a_j tend to 1, -1, 2 as the kernel widens.

use super::hfun::h_tilde_taylor_real_shift;
use crate::error::{domain, Result};
use crate::quad::{Adaptive, Integrand};
use crate::smoothing::KernelShape;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

/// Derivatives φ(t), φ'(t), φ''(t) at s = 0 of φ = h̃(it,s)/(1+s).
pub fn phi_taylor(t: f64) -> [f64; 3] {
    let [c0, c1, c2] = h_tilde_taylor_real_shift(t);
    [c0, c1 - c0, 2.0 * (c2 - c1 + c0)]
}

#[derive(Debug, Clone, Copy)]
struct Triple([f64; 3]);

impl Add for Triple {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Triple([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Triple {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Triple([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Mul<f64> for Triple {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Triple(self.0.map(|v| v * c))
    }
}

impl Integrand for Triple {
    fn zero() -> Self {
        Triple([0.0; 3])
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

// limits of φ^{(j)} averaged over long ranges of t
const MEAN: [f64; 3] = [1.0, -1.0, 2.0];
// the Poisson kernel of the smooth case is cut at this many scale lengths
const POISSON_CUT: f64 = 40.0;

fn breakpoints(b: f64) -> Vec<f64> {
    // φ oscillates on a scale of order one
    let n = (b.ceil() as usize).clamp(1, 20_000);
    (0..=n).map(|k| b * k as f64 / n as f64).collect()
}

/// [a₀, a₁, a₂] for the kernel g(x) = c⁻¹g₀(x/c).
pub fn a_coeffs_all(shape: KernelShape, c: f64) -> Result<[f64; 3]> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(domain("a_coeffs", format!("c = {c} must be positive")));
    }
    let quad = Adaptive::new(1e-12, 1e-10).max_intervals(200_000);
    match shape {
        KernelShape::Indicator => {
            // g∗g is the triangle (2c - |t|)/(4c²) on |t| ≤ 2c; fold the even integrand
            let w = 2.0 * c;
            let r = quad.integrate(|t| Triple(phi_taylor(t)) * (2.0 * (w - t) / (w * w)), &breakpoints(w))?;
            Ok(r.value.0)
        }
        KernelShape::SmoothExp { a } => {
            if !(a > 0.0) {
                return Err(domain("a_coeffs", format!("A = {a} must be positive")));
            }
            // two Cauchy kernels of scale Ac convolve to one of scale 2Ac
            let b = 2.0 * a * c;
            let cut = POISSON_CUT * b;
            let r = quad.integrate(|t| Triple(phi_taylor(t)) * (2.0 * b / (PI * (b * b + t * t))), &breakpoints(cut))?;
            let tail = 1.0 - 2.0 / PI * (cut / b).atan();
            let mut out = r.value.0;
            for j in 0..3 {
                out[j] += MEAN[j] * tail;
            }
            Ok(out)
        }
    }
}

/// a_j(g), j ∈ {0, 1, 2}.
pub fn a_coeffs(shape: KernelShape, c: f64, j: usize) -> Result<f64> {
    if j > 2 {
        return Err(domain("a_coeffs", format!("j = {j} not in 0..=2")));
    }
    Ok(a_coeffs_all(shape, c)?[j])
}
