//! Command-line front end. [`run`] is the whole program minus process exit.

mod config;
mod io;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gap_analysis::{self, GapAudit, GapError, BETA_MAX};
use crate::ingham::{self, InghamError};
use crate::modes::{InitialData, ModeSet, ModesError};
use crate::observability::{self, ObservabilityConfig, ObservabilityError};
use crate::spectrum::{self, KernelParams, LaplaceEigenvalue, ModeIndex};

pub use config::FileConfig;

pub const KMAX_LIMIT: usize = 512;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Invalid(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
}

impl CliError {
    pub fn validation(field: &str, message: impl Into<String>) -> Self {
        Self::Validation {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Assertion(_) => 1,
            _ => 2,
        }
    }
}

impl From<GapError> for CliError {
    fn from(e: GapError) -> Self {
        match e {
            GapError::AuditFailure { .. }
            | GapError::MonotonicityFailure { .. }
            | GapError::PositivityFailure { .. } => Self::Assertion(e.to_string()),
            other => Self::Invalid(other.to_string()),
        }
    }
}

impl From<InghamError> for CliError {
    fn from(e: InghamError) -> Self {
        match e {
            InghamError::BoundViolated { .. } | InghamError::KernelBoundViolated { .. } => {
                Self::Assertion(e.to_string())
            }
            other => Self::Invalid(other.to_string()),
        }
    }
}

impl From<ModesError> for CliError {
    fn from(e: ModesError) -> Self {
        match e {
            ModesError::RealityViolation(_) | ModesError::DegenerateMode { .. } => Self::Assertion(e.to_string()),
            other => Self::Invalid(other.to_string()),
        }
    }
}

impl From<ObservabilityError> for CliError {
    fn from(e: ObservabilityError) -> Self {
        match e {
            ObservabilityError::Gap(g) => g.into(),
            ObservabilityError::Ingham(i) => i.into(),
            ObservabilityError::Modes(m) => m.into(),
            other => Self::Invalid(other.to_string()),
        }
    }
}

impl From<spectrum::SpectrumError> for CliError {
    fn from(e: spectrum::SpectrumError) -> Self {
        Self::Invalid(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "memwave",
    version,
    about = "Spectrum, gaps and boundary observability for the wave equation with exponential memory"
)]
pub struct Cli {
    /// Worker threads for the parallel parts.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// TOML file with default values for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form roots of every mode's characteristic cubic.
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Gap audit for one β, or a table of γ(β).
    #[command(allow_negative_numbers = true)]
    Gaps(GapsArgs),
    /// Evaluate the weighted lower bound for an exponent family.
    #[command(name = "ingham-check", allow_negative_numbers = true)]
    InghamCheck(InghamArgs),
    /// Mode coefficients from sampled initial data.
    #[command(allow_negative_numbers = true)]
    Modes(ModesArgs),
    /// Both sides of the boundary observability inequality.
    #[command(allow_negative_numbers = true)]
    Observe(ObserveArgs),
    /// T0(β) and β0 over a grid of β.
    #[command(allow_negative_numbers = true)]
    Thresholds(ThresholdsArgs),
}

impl Command {
    fn section(&self) -> &'static str {
        match self {
            Self::Spectrum(_) => "spectrum",
            Self::Gaps(_) => "gaps",
            Self::InghamCheck(_) => "ingham-check",
            Self::Modes(_) => "modes",
            Self::Observe(_) => "observe",
            Self::Thresholds(_) => "thresholds",
        }
    }
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Kernel amplitude β.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Defaults to 3β/2.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Largest mode index in each direction.
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Output format (default csv).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct GapsArgs {
    /// Kernel amplitude β.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Largest mode index in each direction.
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Emit `beta,gamma` over [0, 2/√3] instead of an audit.
    #[arg(long)]
    pub gamma_table: bool,
    /// Number of grid intervals for the table.
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct InghamArgs {
    /// JSON file describing the exponent family.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Time horizon T.
    #[arg(long = "T", value_name = "T")]
    pub horizon: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ModesArgs {
    /// Kernel amplitude β.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Defaults to 3β/2.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Largest mode index in each direction.
    #[arg(long)]
    pub kmax: Option<usize>,
    /// CSV grid of initial displacement samples.
    #[arg(long)]
    pub u0: Option<PathBuf>,
    /// CSV grid of initial velocity samples.
    #[arg(long)]
    pub u1: Option<PathBuf>,
    /// Write the coefficient records here.
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ObserveArgs {
    /// Kernel amplitude β.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Time horizon T.
    #[arg(long = "T", value_name = "T")]
    pub horizon: Option<f64>,
    /// Largest mode index in each direction.
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Defaults to the estimate from the data.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Decay exponent θ of the coupling bound (default 1).
    #[arg(long)]
    pub theta: Option<f64>,
    /// CSV grid of initial displacement samples.
    #[arg(long)]
    pub u0: Option<PathBuf>,
    /// CSV grid of initial velocity samples.
    #[arg(long)]
    pub u1: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ThresholdsArgs {
    /// Coupling constant μ.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Decay exponent θ of the coupling bound (default 1).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Number of grid intervals over [0, 2/√3].
    #[arg(long)]
    pub beta_steps: Option<usize>,
}

/// Flag value, else config value, else `None`.
struct Resolver<'a> {
    file: &'a FileConfig,
    section: &'static str,
}

impl Resolver<'_> {
    fn f64(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file.f64(self.section, key),
        }
    }

    fn usize(&self, flag: Option<usize>, key: &str) -> Result<Option<usize>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file.usize(self.section, key),
        }
    }

    fn path(&self, flag: Option<PathBuf>, key: &str) -> Result<Option<PathBuf>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => Ok(self.file.string(self.section, key)?.map(PathBuf::from)),
        }
    }

    fn format(&self, flag: Option<Format>) -> Result<Option<Format>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.string(self.section, "format")?.as_deref() {
            None => Ok(None),
            Some("csv") => Ok(Some(Format::Csv)),
            Some("json") => Ok(Some(Format::Json)),
            Some(other) => Err(CliError::validation(
                "format",
                format!("expected csv or json, got {other:?}"),
            )),
        }
    }

    fn flag(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(flag || self.file.bool(self.section, key)?.unwrap_or(false))
    }
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing required --{flag}")))
}

fn check_beta(beta: f64) -> Result<f64, CliError> {
    if !(0.0..=BETA_MAX + 4.0 * f64::EPSILON).contains(&beta) {
        return Err(CliError::validation("beta", format!("{beta} outside [0, 2/sqrt(3)]")));
    }
    Ok(beta)
}

fn check_eta(eta: f64, beta: f64) -> Result<f64, CliError> {
    if !(eta.is_finite() && eta >= 0.0) {
        return Err(CliError::validation(
            "eta",
            format!("{eta} must be finite and nonnegative"),
        ));
    }
    KernelParams::new(beta, eta).map_err(|e| CliError::validation("eta", e.to_string()))?;
    Ok(eta)
}

fn check_horizon(t: f64) -> Result<f64, CliError> {
    if !(t.is_finite() && t > 0.0) {
        return Err(CliError::validation("T", format!("{t} must be positive")));
    }
    Ok(t)
}

fn check_kmax(kmax: usize) -> Result<usize, CliError> {
    if !(1..=KMAX_LIMIT).contains(&kmax) {
        return Err(CliError::validation(
            "kmax",
            format!("{kmax} outside [1, {KMAX_LIMIT}]"),
        ));
    }
    Ok(kmax)
}

fn check_steps(steps: usize, field: &str) -> Result<usize, CliError> {
    if steps == 0 {
        return Err(CliError::validation(field, "must be at least 1"));
    }
    Ok(steps)
}

fn check_mu(mu: f64) -> Result<f64, CliError> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(CliError::validation("mu", format!("{mu} must be nonnegative")));
    }
    Ok(mu)
}

fn check_theta(theta: f64) -> Result<f64, CliError> {
    if !(theta.is_finite() && theta > 0.5) {
        return Err(CliError::validation("theta", format!("{theta} must exceed 1/2")));
    }
    Ok(theta)
}

fn params_for(beta: f64, eta: Option<f64>) -> Result<KernelParams, CliError> {
    let beta = check_beta(beta)?;
    match eta {
        None => Ok(KernelParams::limiting(beta)?),
        Some(eta) => Ok(KernelParams::new(beta, check_eta(eta, beta)?)?),
    }
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Invalid(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Invalid(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Invalid(e.to_string()))
}

/// Where a subcommand's primary output goes.
struct Sink {
    stdout: Vec<u8>,
    default_path: Option<PathBuf>,
}

impl Sink {
    fn emit(&mut self, path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
        match path.or(self.default_path.as_deref()) {
            Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
            None => {
                self.stdout.extend_from_slice(bytes);
                Ok(())
            }
        }
    }

    fn note(&mut self, line: &str) {
        let _ = writeln!(self.stdout, "{line}");
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    k1: u32,
    k2: u32,
    lambda: f64,
    re_omega: f64,
    im_omega: f64,
    r: f64,
    residual: f64,
}

fn spectrum_rows(params: KernelParams, kmax: usize) -> Result<Vec<SpectrumRow>, CliError> {
    let n = kmax as u32;
    let rows: Result<Vec<Vec<SpectrumRow>>, spectrum::SpectrumError> = (1..=n)
        .into_par_iter()
        .map(|k1| {
            (1..=n)
                .map(|k2| {
                    let lam = LaplaceEigenvalue::from(ModeIndex { k1, k2 });
                    let t = spectrum::characteristic_roots_closed(params, lam)?;
                    let res = spectrum::vieta_residuals(&t, params, lam);
                    Ok(SpectrumRow {
                        k1,
                        k2,
                        lambda: lam.value(),
                        re_omega: t.omega.re,
                        im_omega: t.omega.im,
                        r: t.r,
                        residual: res.iter().fold(0.0, |m, &v| m.max(v.abs())),
                    })
                })
                .collect()
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

fn cmd_spectrum(a: SpectrumArgs, cfg: &Resolver, sink: &mut Sink) -> Result<(), CliError> {
    let beta = required(cfg.f64(a.beta, "beta")?, "beta")?;
    let eta = cfg.f64(a.eta, "eta")?;
    let kmax = check_kmax(required(cfg.usize(a.kmax, "kmax")?, "kmax")?)?;
    let format = cfg.format(a.format)?.unwrap_or(Format::Csv);
    let params = params_for(beta, eta)?;
    let rows = spectrum_rows(params, kmax)?;
    let bytes = match format {
        Format::Csv => csv_bytes(&rows)?,
        Format::Json => json_bytes(&rows)?,
    };
    sink.emit(None, &bytes)
}

#[derive(Serialize)]
struct GapReport {
    beta: f64,
    eta: f64,
    gamma: f64,
    #[serde(flatten)]
    audit: GapAudit,
}

#[derive(Serialize)]
struct GammaRow {
    beta: f64,
    gamma: f64,
}

fn cmd_gaps(a: GapsArgs, cfg: &Resolver, sink: &mut Sink) -> Result<(), CliError> {
    if cfg.flag(a.gamma_table, "gamma_table")? {
        let steps = check_steps(required(cfg.usize(a.steps, "steps")?, "steps")?, "steps")?;
        let rows: Vec<GammaRow> = gap_analysis::gamma_table(steps)?
            .into_iter()
            .map(|(beta, gamma)| GammaRow { beta, gamma })
            .collect();
        return sink.emit(None, &csv_bytes(&rows)?);
    }
    let beta = check_beta(required(cfg.f64(a.beta, "beta")?, "beta")?)?;
    let kmax = check_kmax(required(cfg.usize(a.kmax, "kmax")?, "kmax")?)?;
    let params = KernelParams::limiting(beta)?;
    let audit = gap_analysis::audit_gaps(params, kmax as u32)?;
    let report = GapReport {
        beta,
        eta: params.eta(),
        gamma: gap_analysis::gamma_of_beta(beta)?.gamma,
        audit,
    };
    sink.emit(None, &json_bytes(&report)?)
}

fn cmd_ingham(a: InghamArgs, cfg: &Resolver, sink: &mut Sink) -> Result<(), CliError> {
    let path = required(cfg.path(a.family, "family")?, "family")?;
    let horizon = check_horizon(required(cfg.f64(a.horizon, "T")?, "T")?)?;
    let family = io::read_family(&path)?;
    let report = ingham::evaluate_bound(&family, horizon)?;
    sink.emit(None, &json_bytes(&report)?)?;
    if let Some(v) = report.violations.first() {
        return Err(CliError::Invalid(format!(
            "{} hypothesis violation(s), first: {:?} at {:?}: {}",
            report.violations.len(),
            v.hypothesis,
            v.indices,
            v.detail
        )));
    }
    if !report.holds() {
        return Err(InghamError::BoundViolated {
            lhs: report.lhs,
            rhs: report.rhs,
        }
        .into());
    }
    Ok(())
}

fn load_data(u0: &Path, u1: &Path, kmax: usize) -> Result<InitialData, CliError> {
    let g0 = io::read_grid(u0)?;
    let g1 = io::read_grid(u1)?;
    if g0.points() != g1.points() {
        return Err(CliError::validation(
            "u1",
            format!("grid has {} points per side, u0 has {}", g1.points(), g0.points()),
        ));
    }
    Ok(InitialData::from_samples(&g0, &g1, kmax)?)
}

#[derive(Serialize)]
struct ModesReport {
    beta: f64,
    eta: f64,
    kmax: usize,
    mu_hat: Option<f64>,
    argmax_mode: Option<(u32, u32)>,
    modes: Vec<crate::modes::CoefficientRecord>,
}

fn cmd_modes(a: ModesArgs, cfg: &Resolver, sink: &mut Sink) -> Result<(), CliError> {
    let beta = required(cfg.f64(a.beta, "beta")?, "beta")?;
    let eta = cfg.f64(a.eta, "eta")?;
    let kmax = check_kmax(required(cfg.usize(a.kmax, "kmax")?, "kmax")?)?;
    let u0 = required(cfg.path(a.u0, "u0")?, "u0")?;
    let u1 = required(cfg.path(a.u1, "u1")?, "u1")?;
    let emit = cfg.path(a.emit, "emit")?;
    let params = params_for(beta, eta)?;
    let data = load_data(&u0, &u1, kmax)?;
    let set = ModeSet::build(params, &data)?;
    let (mu_hat, argmax_mode) = match set.estimate_mu() {
        Ok(est) => (Some(est.mu_hat), Some((est.argmax_mode.k1, est.argmax_mode.k2))),
        Err(ModesError::NoUsableModes) => (None, None),
        Err(e) => return Err(e.into()),
    };
    let report = ModesReport {
        beta,
        eta: params.eta(),
        kmax,
        mu_hat,
        argmax_mode,
        modes: set.coefficient_records(),
    };
    sink.emit(emit.as_deref(), &json_bytes(&report)?)
}

fn cmd_observe(a: ObserveArgs, cfg: &Resolver, sink: &mut Sink) -> Result<(), CliError> {
    let beta = check_beta(required(cfg.f64(a.beta, "beta")?, "beta")?)?;
    let horizon = check_horizon(required(cfg.f64(a.horizon, "T")?, "T")?)?;
    let kmax = check_kmax(required(cfg.usize(a.kmax, "kmax")?, "kmax")?)?;
    let mu = cfg.f64(a.mu, "mu")?.map(check_mu).transpose()?;
    let theta = check_theta(cfg.f64(a.theta, "theta")?.unwrap_or(1.0))?;
    let u0 = required(cfg.path(a.u0, "u0")?, "u0")?;
    let u1 = required(cfg.path(a.u1, "u1")?, "u1")?;
    let report_path = cfg.path(a.report, "report")?;
    let data = load_data(&u0, &u1, kmax)?;
    let mut config = ObservabilityConfig::new(beta, horizon, kmax).with_theta(theta);
    config.mu = mu;
    let to_file = report_path.is_some() || sink.default_path.is_some();
    match observability::verify_observability(&config, &data) {
        Ok(report) => {
            sink.emit(report_path.as_deref(), &json_bytes(&report)?)?;
            if to_file {
                sink.note(&format!(
                    "verdict={} margin={} c0={} T0={}",
                    report.verdict, report.margin, report.c0, report.t0
                ));
            }
            if !report.verdict && !report.below_threshold {
                return Err(CliError::Assertion(format!(
                    "observability inequality fails: lhs={} < c0*rhs_sum={}",
                    report.lhs,
                    report.c0 * report.rhs_sum
                )));
            }
            Ok(())
        }
        Err(ObservabilityError::InfeasibleParameters { report }) => {
            sink.emit(report_path.as_deref(), &json_bytes(&report)?)?;
            Err(CliError::Invalid(format!(
                "beta={} is not below beta0={}; no horizon is covered",
                report.beta, report.beta0
            )))
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct ThresholdRow {
    beta: f64,
    gamma: f64,
    #[serde(rename = "S")]
    s: f64,
    #[serde(rename = "T0")]
    t0: f64,
    beta0_global: f64,
}

fn cmd_thresholds(a: ThresholdsArgs, cfg: &Resolver, sink: &mut Sink) -> Result<(), CliError> {
    let mu = check_mu(required(cfg.f64(a.mu, "mu")?, "mu")?)?;
    let theta = check_theta(cfg.f64(a.theta, "theta")?.unwrap_or(1.0))?;
    let steps = check_steps(
        required(cfg.usize(a.beta_steps, "beta_steps")?, "beta-steps")?,
        "beta-steps",
    )?;
    let s = ingham::constant_s(mu, theta)?;
    let beta0 = observability::beta0_of(s)?;
    let rows = gap_analysis::gamma_table(steps)?
        .into_iter()
        .map(|(beta, gamma)| {
            Ok(ThresholdRow {
                beta,
                gamma,
                s,
                t0: observability::t0_of(beta, s)?,
                beta0_global: beta0,
            })
        })
        .collect::<Result<Vec<_>, GapError>>()?;
    sink.emit(None, &csv_bytes(&rows)?)
}

fn dispatch(cli: Cli, sink: &mut Sink) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let cfg = Resolver {
        file: &file,
        section: cli.command.section(),
    };
    sink.default_path = cli.output.clone();
    match cli.command {
        Command::Spectrum(a) => cmd_spectrum(a, &cfg, sink),
        Command::Gaps(a) => cmd_gaps(a, &cfg, sink),
        Command::InghamCheck(a) => cmd_ingham(a, &cfg, sink),
        Command::Modes(a) => cmd_modes(a, &cfg, sink),
        Command::Observe(a) => cmd_observe(a, &cfg, sink),
        Command::Thresholds(a) => cmd_thresholds(a, &cfg, sink),
    }
}

/// First paragraph of a clap message, on one line.
fn one_line(message: &str) -> String {
    message
        .lines()
        .map(str::trim)
        .take_while(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parse `argv` (including the program name), run, and return the exit
/// status: 0 success, 2 invalid input, 1 failed assertion.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = writeln!(stderr, "{}", one_line(&e.render().to_string()));
                    2
                }
            };
        }
    };
    let mut sink = Sink {
        stdout: Vec::new(),
        default_path: None,
    };
    let result = match cli.threads {
        Some(0) => Err(CliError::validation("threads", "must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli, &mut sink)),
            Err(e) => Err(CliError::Invalid(format!("thread pool: {e}"))),
        },
        None => dispatch(cli, &mut sink),
    };
    let _ = stdout.write_all(&sink.stdout);
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
