//! Divisor counts, divisor power sums and the binary additive divisor
//! problem Σ_{n≤X} d(n)d(n+r) against Motohashi's main term.
//!
//! The main-term density m(x,r) is written in the variable x = n/r, so
//!   Σ_{n≤X} d(n)d(n+r) ≈ Σ_{n≤2r} d(n)d(n+r) + ∫_2^{X/r} m(x,r) dx,
//! the first 2r terms being added exactly because m carries a 1 + O(1/x)
//! factor.

use crate::analytic::cauchy_coeffs;
use crate::error::{domain, Error, Result};
use crate::quad::Adaptive;
use crate::special::{zeta_fast, zeta_taylor, EULER_GAMMA};
use num_complex::Complex64;
use once_cell::sync::Lazy;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest sieve length accepted (about 800 MB of counts).
pub const SIEVE_LIMIT: usize = 200_000_000;
/// Largest r whose divisors are found by trial division.
pub const SIGMA_LIMIT: u64 = 1_000_000_000;

/// d(n) for 1 ≤ n ≤ N; index 0 is unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorTable {
    n: usize,
    d: Vec<u32>,
}

impl DivisorTable {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn d(&self, n: usize) -> u32 {
        self.d[n]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.d[1..]
    }
}

pub fn sieve_divisors(n: usize) -> Result<DivisorTable> {
    if n == 0 {
        return Err(domain("sieve_divisors", "N must be at least 1"));
    }
    if n > SIEVE_LIMIT {
        return Err(Error::Capacity { requested: n as u64, limit: SIEVE_LIMIT as u64 });
    }
    let mut d = vec![0u32; n + 1];
    for a in 1..=n {
        for m in (a..=n).step_by(a) {
            d[m] += 1;
        }
    }
    Ok(DivisorTable { n, d })
}

fn factorize(mut r: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= r {
        if r % p == 0 {
            let mut e = 0;
            while r % p == 0 {
                r /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if r > 1 {
        out.push((r, 1));
    }
    out
}

/// All divisors of r in increasing order.
pub fn divisors(r: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(r) {
        let base = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(base.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

/// Σ_{d|r} d^z log^k d.
pub fn sigma_z(r: u64, z: Complex64, log_power: u32) -> Result<Complex64> {
    if r == 0 || r > SIGMA_LIMIT {
        return Err(domain("sigma_z", format!("r = {r} outside 1..={SIGMA_LIMIT}")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for d in divisors(r) {
        let l = (d as f64).ln();
        acc += (z * l).exp() * l.powi(log_power as i32);
    }
    Ok(acc)
}

/// Exact Σ_{n≤X} d(n)d(n+r).
pub fn correlation_sum(x: usize, r: usize, table: &DivisorTable) -> Result<u64> {
    if x + r > table.len() {
        return Err(domain("correlation_sum", format!("X + r = {} exceeds table length {}", x + r, table.len())));
    }
    let mut acc: u64 = 0;
    for n in 1..=x {
        let p = table.d[n] as u64 * table.d[n + r] as u64;
        acc = acc.checked_add(p).ok_or(Error::Overflow("correlation_sum"))?;
    }
    Ok(acc)
}

// ζ(2), ζ'(2), ζ''(2)
static ZETA_TWO: Lazy<[f64; 3]> = Lazy::new(|| {
    let z = zeta_taylor::<3>(Complex64::new(2.0, 0.0), 60);
    [z[0].re, z[1].re, 2.0 * z[2].re]
});

/// m(x,r) from its expanded form: the h-derivatives of σ_{1+2h}(r)/ζ(2+2h)
/// use Σ d log^k d and ζ, ζ', ζ'' at 2.
pub fn motohashi_main_density(x: f64, r: u64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("motohashi_main_density", format!("x = {x} must be positive")));
    }
    let [z0, z1, z2] = *ZETA_TWO;
    let one = Complex64::new(1.0, 0.0);
    let a0 = sigma_z(r, one, 0)?.re;
    let a1 = 2.0 * sigma_z(r, one, 1)?.re;
    let a2 = 4.0 * sigma_z(r, one, 2)?.re;
    let b0 = 1.0 / z0;
    let b1 = -2.0 * z1 / (z0 * z0);
    let b2 = -4.0 * z2 / (z0 * z0) + 8.0 * z1 * z1 / (z0 * z0 * z0);
    let s1 = a1 * b0 + a0 * b1;
    let s2 = a2 * b0 + 2.0 * a1 * b1 + a0 * b2;
    let lr = (r as f64).ln();
    let l = 2.0 * EULER_GAMMA - lr;
    let lx = x.ln();
    let l1x = x.ln_1p();
    Ok(a0 * b0 * (lx * l1x + (lx + l1x) * l + l * l) + (lx + l1x + 4.0 * EULER_GAMMA - 2.0 * lr) * s1 + s2)
}

/// m(x,r,h), whose constant term at h = 0 is m(x,r).
pub fn motohashi_density_h(x: f64, r: u64, h: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let rf = r as f64;
    let z2 = PI * PI / 6.0;
    let a = sigma_z(r, one + h * 2.0, 0)? * zeta_fast(one + h).powi(2) / zeta_fast(h * 2.0 + 2.0)
        * (h * (x.ln() + x.ln_1p())).exp();
    let b = (h * 2.0 * rf.ln()).exp() * sigma_z(r, one - h * 2.0, 0)? * zeta_fast(one - h).powi(2)
        / zeta_fast(Complex64::new(2.0, 0.0) - h * 2.0);
    let c = (h * rf.ln()).exp() * sigma_z(r, one, 0)? * zeta_fast(one + h) * zeta_fast(one - h) / z2
        * ((h * x.ln()).exp() + (h * x.ln_1p()).exp());
    Ok(a + b + c)
}

/// m(x,r) as the h = 0 constant term of m(x,r,h), by contour.
pub fn motohashi_density_contour(x: f64, r: u64) -> Result<f64> {
    let f = |h: Complex64| motohashi_density_h(x, r, h).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let l = cauchy_coeffs(f, Complex64::new(0.0, 0.0), 0, 1, 0.1)?;
    Ok(l.coefficient(0).re)
}

/// ∫_a^b m(x,r) dx.
pub fn main_term_integral(a: f64, b: f64, r: u64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    // log-spaced breakpoints follow the log x ln(1+x) shape
    let n = ((b / a).ln().ceil() as usize).clamp(1, 200);
    let bp: Vec<f64> = (0..=n).map(|k| a * (b / a).powf(k as f64 / n as f64)).collect();
    motohashi_main_density(a, r)?;
    let res = Adaptive::new(0.0, 1e-13).integrate(|x| motohashi_main_density(x, r).unwrap_or(f64::NAN), &bp)?;
    Ok(res.value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRecord {
    #[serde(rename = "X")]
    pub x: u64,
    pub r: u64,
    pub sum: u64,
    pub main: f64,
    pub error: f64,
    pub normalized_error: f64,
}

impl CorrelationRecord {
    pub const CSV_HEADER: &'static str = "X,r,sum,main,error,normalized_error";

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{},{},{}", self.x, self.r, self.sum, self.main, self.error, self.normalized_error)
    }
}

/// Main term for Σ_{n≤X} d(n)d(n+r): the first min(X, 2r) terms exactly,
/// the rest from m(x,r).
pub fn correlation_main(x: usize, r: usize, table: &DivisorTable) -> Result<f64> {
    let head = x.min(2 * r);
    let exact = correlation_sum(head, r, table)? as f64;
    let upper = x as f64 / r as f64;
    Ok(exact + main_term_integral(2.0, upper, r as u64)?)
}

pub fn correlation_record(x: usize, r: usize, table: &DivisorTable) -> Result<CorrelationRecord> {
    if r == 0 {
        return Err(domain("correlation_report", "r must be at least 1"));
    }
    let sum = correlation_sum(x, r, table)?;
    let main = correlation_main(x, r, table)?;
    let error = sum as f64 - main;
    let norm = if x > 0 { error / (x as f64).powf(2.0 / 3.0) } else { 0.0 };
    Ok(CorrelationRecord { x: x as u64, r: r as u64, sum, main, error, normalized_error: norm })
}

/// One record per shift, evaluated in parallel.
pub fn correlation_report(x: usize, r_list: &[usize], table: &DivisorTable) -> Result<Vec<CorrelationRecord>> {
    if let Some(&r) = r_list.iter().find(|&&r| r == 0) {
        return Err(domain("correlation_report", format!("r = {r} must be at least 1")));
    }
    r_list.par_iter().map(|&r| correlation_record(x, r, table)).collect()
}
