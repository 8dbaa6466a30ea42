//! Ingested Maass-form data: spectral parameters κ_j, normalised weights
//! α_j, parities, central values H_j(1/2) and Hecke eigenvalues t_j(n).

use crate::divisor::divisors;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// κ₁ for SL₂(ℤ), λ₁ = 1/4 + κ₁².
pub const FIRST_KAPPA: f64 = 9.533_695_261_353_557;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaassEntry {
    pub kappa: f64,
    pub alpha: f64,
    pub parity: i8,
    #[serde(rename = "H_half")]
    pub h_half: f64,
    /// t_j(1), t_j(2), ...
    pub hecke: Vec<f64>,
}

impl MaassEntry {
    /// t_j(n) for 1 ≤ n ≤ len.
    pub fn t(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.hecke.get(i)).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDataset {
    pub source: String,
    pub n_coef: usize,
    pub entries: Vec<MaassEntry>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Dataset(msg.into())
}

impl SpectralDataset {
    pub fn empty(source: &str) -> Self {
        SpectralDataset { source: source.to_string(), n_coef: 0, entries: Vec::new() }
    }

    /// Structural checks plus the known first eigenvalue and the Kim–Sarnak band.
    pub fn validate(&self) -> Result<()> {
        self.validate_structure()?;
        if let Some(first) = self.entries.first() {
            if (first.kappa - FIRST_KAPPA).abs() > 0.01 {
                return Err(bad(format!("first kappa {} is not {FIRST_KAPPA:.4}", first.kappa)));
            }
        }
        Ok(())
    }

    /// Everything in `validate` except the first-eigenvalue check.
    pub fn validate_structure(&self) -> Result<()> {
        for (j, e) in self.entries.iter().enumerate() {
            if !(e.kappa > 0.0 && e.kappa.is_finite()) || !(e.alpha > 0.0 && e.alpha.is_finite()) {
                return Err(bad(format!("entry {}: kappa and alpha must be positive", j + 1)));
            }
            if e.parity != 1 && e.parity != -1 {
                return Err(bad(format!("entry {}: parity {} not in {{-1, 1}}", j + 1, e.parity)));
            }
            if !e.h_half.is_finite() {
                return Err(bad(format!("entry {}: H_half not finite", j + 1)));
            }
            if e.hecke.len() < self.n_coef {
                return Err(bad(format!("entry {}: {} Hecke values, n_coef = {}", j + 1, e.hecke.len(), self.n_coef)));
            }
            if j > 0 && e.kappa <= self.entries[j - 1].kappa {
                return Err(bad(format!("kappa not strictly increasing at entry {}", j + 1)));
            }
            for (i, &t) in e.hecke.iter().enumerate() {
                let n = i + 1;
                let d = divisors(n as u64).len() as f64;
                let band = d * (n as f64).powf(7.0 / 64.0 + 0.01);
                if !(t.abs() <= band * (1.0 + 1e-12)) {
                    return Err(bad(format!("entry {}: |t({n})| = {} exceeds {band}", j + 1, t.abs())));
                }
            }
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let d: SpectralDataset = serde_json::from_str(s).map_err(|e| bad(format!("json: {e}")))?;
        d.validate()?;
        Ok(d)
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)?;
        Self::from_json_str(&s)
    }

    /// `kappa,alpha,parity,H_half` rows; Hecke values for row j (from 1)
    /// live next to it in `hecke_<j>.csv`, one value per line or `n,t`.
    pub fn load_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with("kappa") || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 4 {
                return Err(bad(format!("{}:{}: expected 4 fields", path.display(), lineno + 1)));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("{}:{}: bad number {s:?}", path.display(), lineno + 1)));
            let parity = num(f[2])?;
            let j = entries.len() + 1;
            let hecke = read_hecke(&dir.join(format!("hecke_{j}.csv")))?;
            entries.push(MaassEntry { kappa: num(f[0])?, alpha: num(f[1])?, parity: parity as i8, h_half: num(f[3])?, hecke });
        }
        let n_coef = entries.iter().map(|e| e.hecke.len()).min().unwrap_or(0);
        let d = SpectralDataset { source: path.display().to_string(), n_coef, entries };
        d.validate()?;
        Ok(d)
    }

    pub fn load(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Self::load_csv(path),
            _ => Self::load_json(path),
        }
    }
}

fn read_hecke(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.chars().next().is_some_and(|c| c.is_alphabetic() || c == '#') {
            continue;
        }
        let v = line.rsplit(',').next().unwrap_or(line).trim();
        out.push(v.parse::<f64>().map_err(|_| bad(format!("{}: bad number {v:?}", path.display())))?);
    }
    Ok(out)
}

/// Hecke eigenvalues t(1..=n) of a multiplicative sequence with
/// t(p^k) = sin((k+1)θ_p)/sin θ_p, so |t(n)| ≤ d(n).
pub fn hecke_from_satake(n: usize, angle: impl Fn(u64) -> f64) -> Vec<f64> {
    let mut spf = vec![0usize; n + 1];
    for p in 2..=n {
        if spf[p] == 0 {
            for m in (p..=n).step_by(p) {
                if spf[m] == 0 {
                    spf[m] = p;
                }
            }
        }
    }
    let mut t = vec![0.0; n + 1];
    if n >= 1 {
        t[1] = 1.0;
    }
    for m in 2..=n {
        let p = spf[m];
        let (mut rest, mut k) = (m, 0u32);
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        let th = angle(p as u64);
        let s = th.sin();
        let tpk = if s.abs() < 1e-12 {
            // θ = 0 or π: t(p^k) = (k+1)(±1)^k
            let sign = if th.cos() < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
            (k + 1) as f64 * sign
        } else {
            ((k + 1) as f64 * th).sin() / s
        };
        t[m] = tpk * t[rest];
    }
    t.remove(0);
    t
}
