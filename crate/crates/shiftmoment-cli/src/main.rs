mod config;
mod reports;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use config::Params;
use num_complex::Complex64;
use reports::{MainTermReport, MomentRun, SpectralReport, ZetaReport};
use serde::Serialize;
use shiftmoment::analytic::{diag_term, offdiag_term, q2_eval};
use shiftmoment::divisor::{correlation_report, sieve_divisors};
use shiftmoment::empirical::{afe_check, compare, moment_quadrature, QuadratureSpec};
use shiftmoment::momofmom::{m22_empirical_detailed, m22_formula, AveragingKernel};
use shiftmoment::report::{write_report, Table};
use shiftmoment::smoothing::{ShiftConfig, SmoothingConfig, Window, WindowKind};
use shiftmoment::special::{zeta_eval, ZetaMethod};
use shiftmoment::spectral::{ec_integral, ed_sum, SpectralDataset};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

/// Default directory for spectral datasets given by a relative path.
const DATA_DIR_ENV: &str = "SHIFTMOMENT_DATA_DIR";

const AFE_TOLERANCE: f64 = 1e-4;
const MOM_STEP_CHANGE: f64 = 0.01;

#[derive(Parser, Debug)]
#[command(name = "shiftmoment", version, about = "Shifted fourth moments of zeta: main terms, quadrature and spectral pieces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Flat key=value file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for the parallel library calls.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory for <name>.json and <name>.csv.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Artifact stem; defaults to the subcommand name.
    #[arg(long, global = true)]
    name: Option<String>,
    /// Record wall-clock time in the artifacts (otherwise 0, keeping them byte-stable).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// ζ(σ+it).
    Zeta {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Both sides of the approximate functional equation at one height.
    Afe {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long = "Q")]
        q: Option<f64>,
        #[arg(long = "cutoff-sigma")]
        cutoff_sigma: Option<f64>,
    },
    /// ∫ W(t)|ζ(1/2+i(t+α))ζ(1/2+i(t+β))|² dt by quadrature.
    Moment(MomentArgs),
    /// D, OD and Q₂ at a single height.
    MainTerm {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Moment quadrature against the integrated main term.
    Compare(MomentArgs),
    /// Σ_{n≤X} d(n)d(n+r) against its main term.
    Divisor {
        #[arg(long = "X")]
        x: Option<u64>,
        /// Comma-separated shifts.
        #[arg(long)]
        r: Option<String>,
    },
    /// M₂,₂ formula, optionally against the sampled average.
    Mom22 {
        #[arg(long = "T")]
        t: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        kernel: Option<String>,
        #[arg(long = "A")]
        a: Option<f64>,
        #[arg(long)]
        empirical: bool,
        /// Sampling step of the empirical route.
        #[arg(long)]
        step: Option<f64>,
    },
    /// Continuous and discrete spectral pieces on a Gaussian window.
    Spectral {
        #[arg(long)]
        dataset: Option<PathBuf>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long = "T1")]
        t1: Option<f64>,
        #[arg(long = "T2")]
        t2: Option<f64>,
        #[arg(long = "Delta")]
        big_delta: Option<f64>,
        /// HTTPS base URL to download a missing dataset from.
        #[arg(long = "fetch-url")]
        fetch_url: Option<String>,
        /// Cut-off of the continuous-spectrum integral.
        #[arg(long = "y-max")]
        y_max: Option<f64>,
    },
}

#[derive(Args, Debug)]
struct MomentArgs {
    #[arg(long = "T1")]
    t1: Option<f64>,
    #[arg(long = "T2")]
    t2: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    window: Option<String>,
    #[arg(long = "Delta")]
    big_delta: Option<f64>,
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Zeta { .. } => "zeta",
            Cmd::Afe { .. } => "afe",
            Cmd::Moment(_) => "moment",
            Cmd::MainTerm { .. } => "main-term",
            Cmd::Compare(_) => "compare",
            Cmd::Divisor { .. } => "divisor",
            Cmd::Mom22 { .. } => "mom22",
            Cmd::Spectral { .. } => "spectral",
        }
    }
}

/// Numerical target missed; exit status 2.
#[derive(Debug)]
struct ToleranceFailure {
    what: String,
    requested: f64,
    achieved: f64,
}

impl std::fmt::Display for ToleranceFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "tolerance not met for {}: achieved {:.3e}, requested {:.3e}", self.what, self.achieved, self.requested)
    }
}

impl std::error::Error for ToleranceFailure {}

fn is_tolerance(e: &anyhow::Error) -> bool {
    use shiftmoment::Error as E;
    e.chain().any(|c| {
        c.is::<ToleranceFailure>()
            || matches!(
                c.downcast_ref::<E>(),
                Some(E::Tolerance { .. } | E::Quadrature { .. } | E::StepTooCoarse { .. } | E::RadiusInconsistency { .. })
            )
    })
}

struct Output {
    stem: PathBuf,
    timing: bool,
}

impl Output {
    fn seconds(&self, start: Instant) -> f64 {
        if self.timing {
            start.elapsed().as_secs_f64()
        } else {
            0.0
        }
    }

    fn emit<T: Serialize + Table>(&self, report: &T, title: &str, lines: &[(&str, String)]) -> Result<()> {
        let (json, csv) = write_report(report, &self.stem).with_context(|| format!("writing {}", self.stem.display()))?;
        println!("{title}");
        let width = lines.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        for (k, v) in lines {
            println!("  {k:<width$}  {v}");
        }
        println!("  wrote {} and {}", json.display(), csv.display());
        Ok(())
    }
}

fn shift(p: &mut Params, alpha: Option<f64>, beta: Option<f64>) -> Result<ShiftConfig> {
    let alpha = p.req("alpha", alpha)?;
    let beta = p.req("beta", beta)?;
    Ok(ShiftConfig::new(alpha, beta)?)
}

fn window(p: &mut Params, a: &MomentArgs, t1: f64, t2: f64) -> Result<Option<Window>> {
    let kind = p.opt("window", a.window.clone())?;
    let big_delta = p.opt::<f64>("Delta", a.big_delta)?;
    let kind = match kind.as_deref() {
        None => {
            if big_delta.is_some() {
                bail!("--Delta needs --window gaussian|bump");
            }
            return Ok(None);
        }
        Some("gaussian") => WindowKind::GaussianConv,
        Some("bump") => WindowKind::Bump,
        Some("sharp") => WindowKind::Indicator,
        Some(other) => bail!("--window {other:?}: expected gaussian, bump or sharp"),
    };
    let d = match kind {
        WindowKind::Indicator => 0.0,
        _ => big_delta.ok_or_else(|| anyhow!("--window {} needs --Delta", kind_name(kind)))?,
    };
    Ok(Some(Window::new(kind, t1, t2, d)?))
}

fn kind_name(k: WindowKind) -> &'static str {
    match k {
        WindowKind::GaussianConv => "gaussian",
        WindowKind::Bump => "bump",
        WindowKind::Indicator => "sharp",
    }
}

// Integration range: the window's support cut at t = 0, else [T1, T2].
fn range(t1: f64, t2: f64, w: Option<&Window>) -> (f64, f64) {
    match w {
        Some(w) => {
            let (a, b) = w.support();
            (a.max(0.0), b)
        }
        None => (t1, t2),
    }
}

fn method_name(m: ZetaMethod) -> String {
    match m {
        ZetaMethod::Auto => "functional-equation".into(),
        ZetaMethod::RiemannSiegel { corrections } => format!("riemann-siegel:{corrections}"),
        ZetaMethod::EulerMaclaurin { terms } => format!("euler-maclaurin:{terms}"),
        ZetaMethod::DirichletTail { terms } => format!("dirichlet:{terms}"),
    }
}

fn resolve_dataset(path: &Path) -> PathBuf {
    if path.is_relative() && !path.exists() {
        if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
            return Path::new(&dir).join(path);
        }
    }
    path.to_path_buf()
}

fn fetch_dataset(base: &str, dest: &Path) -> Result<()> {
    if !base.starts_with("https://") {
        bail!("--fetch-url must be an https:// URL, got {base:?}");
    }
    let file = dest.file_name().and_then(|f| f.to_str()).ok_or_else(|| anyhow!("dataset path has no file name"))?;
    let url = format!("{}/{file}", base.trim_end_matches('/'));
    log::info!("fetching {url}");
    let body = reqwest::blocking::get(&url)
        .and_then(|r| r.error_for_status())
        .and_then(|r| r.text())
        .with_context(|| format!("downloading {url}"))?;
    SpectralDataset::from_json_str(&body).with_context(|| format!("validating {url}"))?;
    if let Some(dir) = dest.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(dest, body)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let mut p = match &cli.config {
        Some(path) => Params::from_file(path)?,
        None => Params::default(),
    };
    let workers = p.opt::<usize>("workers", cli.workers)?;
    let out_dir = p.opt::<PathBuf>("out", cli.out.clone())?.unwrap_or_else(|| PathBuf::from("."));
    let name = p.opt::<String>("name", cli.name.clone())?.unwrap_or_else(|| cli.cmd.name().to_string());
    let timing = p.switch("timing", cli.timing)?;
    if let Some(w) = workers {
        if w == 0 {
            bail!("--workers must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global().context("building the worker pool")?;
    }
    let out = Output { stem: out_dir.join(name), timing };

    match &cli.cmd {
        Cmd::Zeta { t, sigma } => {
            let t = p.req("t", *t)?;
            let sigma = p.opt("sigma", *sigma)?.unwrap_or(0.5);
            p.finish()?;
            let e = zeta_eval(Complex64::new(sigma, t), ZetaMethod::Auto)?;
            let rep = ZetaReport {
                sigma,
                t,
                re: e.value.re,
                im: e.value.im,
                abs: e.value.norm(),
                method: method_name(e.method),
                degraded: e.degraded,
            };
            out.emit(&rep, &format!("zeta at s = {sigma} + {t}i"), &[
                ("ζ(s)", format!("{:e} {:+e}i", rep.re, rep.im)),
                ("|ζ(s)|", format!("{:.3e}", rep.abs)),
                ("method", rep.method.clone()),
                ("outside validated region", rep.degraded.to_string()),
            ])
        }
        Cmd::Afe { t, delta, q, cutoff_sigma } => {
            let t = p.req("t", *t)?;
            let delta = p.req("delta", *delta)?;
            let q = SmoothingConfig::new(p.req("Q", *q)?)?;
            let sigma = p.opt("cutoff-sigma", *cutoff_sigma)?.unwrap_or(12.0);
            p.finish()?;
            let rep = afe_check(t, &ShiftConfig::new(0.0, delta)?, &q, sigma)?;
            out.emit(&rep, "approximate functional equation", &[
                ("|ζ(1/2+it)ζ(1/2+it+iδ)|²", rep.lhs.to_string()),
                ("smoothed double Dirichlet series", rep.rhs.to_string()),
                ("relative difference", format!("{:.3e}", rep.rel_err)),
                ("nm truncation", rep.truncation.to_string()),
            ])?;
            if rep.rel_err > AFE_TOLERANCE {
                return Err(ToleranceFailure { what: "afe".into(), requested: AFE_TOLERANCE, achieved: rep.rel_err }.into());
            }
            Ok(())
        }
        Cmd::Moment(a) => {
            let t1 = p.req("T1", a.t1)?;
            let t2 = p.req("T2", a.t2)?;
            let s = shift(&mut p, a.alpha, a.beta)?;
            let w = window(&mut p, a, t1, t2)?;
            p.finish()?;
            let (lo, hi) = range(t1, t2, w.as_ref());
            let start = Instant::now();
            let q = moment_quadrature(lo, hi, &s, w.as_ref(), &QuadratureSpec::for_range(hi))?;
            let rep = MomentRun { t1, t2, shift: s, window: w, value: q.value, error: q.error, n_evals: q.n_evals, wall_seconds: out.seconds(start) };
            out.emit(&rep, "shifted fourth moment by quadrature", &[
                ("∫ W |ζ(1/2+i(t+α))ζ(1/2+i(t+β))|² dt", rep.value.to_string()),
                ("quadrature error estimate", format!("{:.3e}", rep.error)),
                ("integrand evaluations", rep.n_evals.to_string()),
            ])
        }
        Cmd::MainTerm { t, alpha, beta } => {
            let t = p.req("t", *t)?;
            let s = shift(&mut p, *alpha, *beta)?;
            p.finish()?;
            let q2 = q2_eval(t, &s)?;
            let split = match diag_term(t, &s) {
                Ok(d) => Some((d, offdiag_term(t, &s)?)),
                Err(shiftmoment::Error::NearDegenerate { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let rep = MainTermReport { t, alpha: s.alpha, beta: s.beta, delta: s.delta(), diag: split.map(|x| x.0), offdiag: split.map(|x| x.1), q2 };
            let show = |v: Option<f64>| v.map_or("not split for this δ".to_string(), |x| x.to_string());
            out.emit(&rep, &format!("main term at t = {t}, δ = {}", rep.delta), &[
                ("diagonal term D", show(rep.diag)),
                ("off-diagonal term OD", show(rep.offdiag)),
                ("Q₂(t;α,β) = D + OD", rep.q2.to_string()),
            ])
        }
        Cmd::Compare(a) => {
            let t1 = p.req("T1", a.t1)?;
            let t2 = p.req("T2", a.t2)?;
            let s = shift(&mut p, a.alpha, a.beta)?;
            let w = window(&mut p, a, t1, t2)?;
            p.finish()?;
            let (lo, hi) = range(t1, t2, w.as_ref());
            let mut rep = compare(lo, hi, &s, w.as_ref(), &QuadratureSpec::for_range(hi))?;
            rep.t1 = t1;
            rep.t2 = t2;
            if !timing {
                rep.wall_seconds = 0.0;
            }
            out.emit(&rep, "moment against main term", &[
                ("empirical ∫ W|ζζ|²", rep.empirical.to_string()),
                ("∫ W Q₂(t;α,β) dt", rep.main_term.to_string()),
                ("absolute difference", format!("{:.6e}", rep.abs_diff)),
                ("relative difference", format!("{:.3e}", rep.rel_diff)),
            ])
        }
        Cmd::Divisor { x, r } => {
            let x = p.req("X", *x)?;
            let r_text = p.req("r", r.clone())?;
            p.finish()?;
            let rs = r_text
                .split(',')
                .map(|v| v.trim().parse::<usize>().map_err(|e| anyhow!("--r {v:?}: {e}")))
                .collect::<Result<Vec<_>>>()?;
            let r_max = rs.iter().copied().max().unwrap_or(0);
            let n = usize::try_from(x).context("--X too large")? + r_max;
            let table = sieve_divisors(n)?;
            let recs = correlation_report(x as usize, &rs, &table)?;
            let lines: Vec<(&str, String)> = recs
                .iter()
                .map(|c| ("r", format!("{:<6} sum {:<14} main {:<20.6} E/X^(2/3) {:.4}", c.r, c.sum, c.main, c.normalized_error)))
                .collect();
            out.emit(&recs, &format!("additive divisor correlations up to X = {x}"), &lines)
        }
        Cmd::Mom22 { t, c, kernel, a, empirical, step } => {
            let t = p.req("T", *t)?;
            let c = p.req("c", *c)?;
            let kind = p.opt("kernel", kernel.clone())?.unwrap_or_else(|| "indicator".to_string());
            let a = p.opt::<f64>("A", *a)?;
            let empirical = p.switch("empirical", *empirical)?;
            let step = p.opt("step", *step)?.unwrap_or(0.05);
            p.finish()?;
            let k = match kind.as_str() {
                "indicator" => {
                    if a.is_some() {
                        bail!("--A only applies to --kernel smooth");
                    }
                    AveragingKernel::indicator(c)?
                }
                "smooth" => AveragingKernel::smooth_exp(c, a.ok_or_else(|| anyhow!("--kernel smooth needs --A"))?)?,
                other => bail!("--kernel {other:?}: expected indicator or smooth"),
            };
            let mut rep = m22_formula(t, &k)?;
            let mut change = None;
            if empirical {
                let e = m22_empirical_detailed(t, &k, step)?;
                rep.empirical = Some(e.value);
                change = Some(e.relative_change);
            }
            let mut lines = vec![
                ("diagonal D̄", rep.dbar.to_string()),
                ("off-diagonal OD̄", rep.odbar.to_string()),
                ("M₂,₂ formula T(D̄ + OD̄)", rep.formula_total.to_string()),
            ];
            if let Some(v) = rep.empirical {
                lines.push(("M₂,₂ sampled", v.to_string()));
                lines.push(("sampled / formula", format!("{:.6}", v / rep.formula_total)));
            }
            if let Some(a) = rep.a_constant {
                lines.push(("log-anomaly constant a", format!("{a:.6}")));
            }
            out.emit(&rep, &format!("moments of moments at T = {t}"), &lines)?;
            if let Some(ch) = change.filter(|&ch| ch > MOM_STEP_CHANGE) {
                return Err(ToleranceFailure { what: "mom22 step halving".into(), requested: MOM_STEP_CHANGE, achieved: ch }.into());
            }
            Ok(())
        }
        Cmd::Spectral { dataset, delta, t1, t2, big_delta, fetch_url, y_max } => {
            let path = p.req("dataset", dataset.clone())?;
            let delta = p.req("delta", *delta)?;
            let t1 = p.req("T1", *t1)?;
            let t2 = p.req("T2", *t2)?;
            let bd = p.req("Delta", *big_delta)?;
            let url = p.opt("fetch-url", fetch_url.clone())?;
            let y_max = p.opt("y-max", *y_max)?.unwrap_or(200.0);
            p.finish()?;
            let w = Window::new(WindowKind::GaussianConv, t1, t2, bd)?;
            let path = resolve_dataset(&path);
            if let Some(url) = url.as_deref() {
                if !path.exists() {
                    fetch_dataset(url, &path)?;
                }
            }
            let data = SpectralDataset::load(&path).with_context(|| format!("loading {}", path.display()))?;
            let ec = ec_integral(delta, &w, y_max)?;
            let ed = ed_sum(&data, delta, &w)?;
            let rep = SpectralReport {
                dataset: data.source.clone(),
                entries: data.entries.len(),
                delta,
                window: w,
                y_max,
                ec: ec.value,
                ec_quad_error: ec.quad_error,
                ec_tail: ec.tail_estimate,
                ed: ed.value,
                ed_last_nu_ratio: ed.last_nu_ratio,
                ed_coverage_ok: ed.coverage_ok,
                total: ec.value + ed.value,
            };
            out.emit(&rep, &format!("spectral pieces at δ = {delta} on [{t1}, {t2}]"), &[
                ("continuous spectrum E_c", rep.ec.to_string()),
                ("E_c quadrature error", format!("{:.3e}", rep.ec_quad_error)),
                ("E_c tail estimate", format!("{:.3e}", rep.ec_tail)),
                ("discrete spectrum E_d", rep.ed.to_string()),
                ("Maass forms used", rep.entries.to_string()),
                ("spectrum covers ν", rep.ed_coverage_ok.to_string()),
                ("E_c + E_d", rep.total.to_string()),
            ])
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_tolerance(&e) { 2 } else { 1 })
        }
    }
}
