//! Report records for the subcommands whose results have no library type.

use serde::{Deserialize, Serialize};
use shiftmoment::report::Table;
use shiftmoment::smoothing::{ShiftConfig, Window};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaReport {
    pub sigma: f64,
    pub t: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub method: String,
    pub degraded: bool,
}

impl Table for ZetaReport {
    fn header(&self) -> &'static str {
        "sigma,t,re,im,abs,method,degraded"
    }
    fn rows(&self) -> Vec<String> {
        vec![format!("{},{},{},{},{},{},{}", self.sigma, self.t, self.re, self.im, self.abs, self.method, self.degraded)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRun {
    #[serde(rename = "T1")]
    pub t1: f64,
    #[serde(rename = "T2")]
    pub t2: f64,
    pub shift: ShiftConfig,
    pub window: Option<Window>,
    pub value: f64,
    pub error: f64,
    pub n_evals: u64,
    pub wall_seconds: f64,
}

impl Table for MomentRun {
    fn header(&self) -> &'static str {
        "T1,T2,alpha,beta,value,error,n_evals,wall_seconds"
    }
    fn rows(&self) -> Vec<String> {
        vec![format!(
            "{},{},{},{},{},{},{},{}",
            self.t1, self.t2, self.shift.alpha, self.shift.beta, self.value, self.error, self.n_evals, self.wall_seconds
        )]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MainTermReport {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    /// Absent when δ is too small to split Q₂.
    pub diag: Option<f64>,
    pub offdiag: Option<f64>,
    pub q2: f64,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl Table for MainTermReport {
    fn header(&self) -> &'static str {
        "t,alpha,beta,delta,diag,offdiag,q2"
    }
    fn rows(&self) -> Vec<String> {
        vec![format!(
            "{},{},{},{},{},{},{}",
            self.t, self.alpha, self.beta, self.delta, opt(self.diag), opt(self.offdiag), self.q2
        )]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub dataset: String,
    pub entries: usize,
    pub delta: f64,
    pub window: Window,
    pub y_max: f64,
    pub ec: f64,
    pub ec_quad_error: f64,
    pub ec_tail: f64,
    pub ed: f64,
    pub ed_last_nu_ratio: f64,
    pub ed_coverage_ok: bool,
    pub total: f64,
}

impl Table for SpectralReport {
    fn header(&self) -> &'static str {
        "delta,T1,T2,Delta,y_max,ec,ec_quad_error,ec_tail,ed,ed_last_nu_ratio,ed_coverage_ok,total,entries"
    }
    fn rows(&self) -> Vec<String> {
        vec![format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.delta,
            self.window.t1,
            self.window.t2,
            self.window.delta,
            self.y_max,
            self.ec,
            self.ec_quad_error,
            self.ec_tail,
            self.ed,
            self.ed_last_nu_ratio,
            self.ed_coverage_ok,
            self.total,
            self.entries
        )]
    }
}
