//! Inverse observability on `Γ = (0,π)×{0} ∪ {0}×(0,π)` in the limiting
//! regime `η = 3β/2`: exact boundary energy against
//! `c0 Σ (k1² + k2²) |C|² (1 + e^{−2 Im ω T})`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gap_analysis::{self, GapError, BETA_MAX};
use crate::ingham::{self, ExpTerm, InghamError};
use crate::modes::{InitialData, ModeSet, ModesError};
use crate::spectrum::{KernelParams, SpectrumError};

pub use crate::ingham::constant_s;

#[derive(Debug, Error)]
pub enum ObservabilityError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("c0={c0} is not positive (T={horizon} <= T0={t0})")]
    NotPositive { c0: f64, horizon: f64, t0: f64 },
    #[error("beta={} is not below beta0={}; no horizon makes c0 positive", .report.beta, .report.beta0)]
    InfeasibleParameters { report: Box<ObservabilityReport> },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Gap(#[from] GapError),
    #[error(transparent)]
    Ingham(#[from] InghamError),
    #[error(transparent)]
    Modes(#[from] ModesError),
}

/// Where μ came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MuSource {
    User,
    Estimated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservabilityConfig {
    pub beta: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub kmax: usize,
    /// `None` estimates μ from the data.
    pub mu: Option<f64>,
    pub theta: f64,
}

impl ObservabilityConfig {
    pub fn new(beta: f64, horizon: f64, kmax: usize) -> Self {
        Self {
            beta,
            horizon,
            kmax,
            mu: None,
            theta: 1.0,
        }
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = Some(mu);
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn validate(&self) -> Result<(), ObservabilityError> {
        if !(0.0..=BETA_MAX + 4.0 * f64::EPSILON).contains(&self.beta) {
            return Err(ObservabilityError::InvalidConfig(format!(
                "beta={} outside [0, 2/sqrt(3)]",
                self.beta
            )));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(ObservabilityError::InvalidConfig(format!(
                "T must be positive, got {}",
                self.horizon
            )));
        }
        if self.kmax == 0 {
            return Err(ObservabilityError::InvalidConfig("kmax must be >= 1".into()));
        }
        if let Some(mu) = self.mu {
            if !(mu.is_finite() && mu >= 0.0) {
                return Err(ObservabilityError::InvalidConfig(format!("mu must be >= 0, got {mu}")));
            }
        }
        if self.theta.is_nan() || self.theta <= 0.5 {
            return Err(ObservabilityError::InvalidConfig(format!(
                "theta must exceed 1/2, got {}",
                self.theta
            )));
        }
        Ok(())
    }
}

fn serialize_extended<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservabilityReport {
    pub lhs: f64,
    pub rhs_sum: f64,
    #[serde(rename = "S")]
    pub s: f64,
    pub c0: f64,
    #[serde(rename = "T0", serialize_with = "serialize_extended")]
    pub t0: f64,
    pub beta0: f64,
    pub margin: f64,
    pub verdict: bool,
    /// `T ≤ T0`: the constants make no claim for this horizon.
    pub below_threshold: bool,
    pub gamma: f64,
    pub mu: f64,
    pub mu_source: MuSource,
    pub beta: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub kmax: usize,
    pub theta: f64,
    /// The thresholds come from the proof, not from an optimisation.
    pub constants: &'static str,
}

/// `β0` and `T0(β)` for given μ, θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub beta0: f64,
    #[serde(rename = "T0", serialize_with = "serialize_extended")]
    pub t0: f64,
    #[serde(rename = "S")]
    pub s: f64,
    pub gamma: f64,
}

fn feasibility(beta: f64, s: f64) -> Result<f64, GapError> {
    let g = gap_analysis::gamma_of_beta(beta)?.gamma;
    Ok(g * g - 4.0 * (4.0 + 3.0 * s) * beta * beta)
}

/// `β0`: the crossing of `γ(b)² − 4(4+3S) b²` on `(0, 2/√3]`, by bisection.
pub fn beta0_of(s: f64) -> Result<f64, GapError> {
    if feasibility(BETA_MAX, s)? > 0.0 {
        return Ok(BETA_MAX);
    }
    let (mut lo, mut hi) = (0.0, BETA_MAX);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if feasibility(mid, s)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `T0 = 2π √((4+3S) / (γ(β)² − 4(4+3S) β²))`, `+∞` when infeasible.
pub fn t0_of(beta: f64, s: f64) -> Result<f64, GapError> {
    let denom = feasibility(beta, s)?;
    if denom <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * PI * ((4.0 + 3.0 * s) / denom).sqrt())
}

pub fn thresholds(beta: f64, mu: f64, theta: f64) -> Result<Thresholds, ObservabilityError> {
    let s = constant_s(mu, theta)?;
    Ok(Thresholds {
        beta0: beta0_of(s)?,
        t0: t0_of(beta, s)?,
        s,
        gamma: gap_analysis::gamma_of_beta(beta)?.gamma,
    })
}

/// `c0 = (Tπ²/2) (1/(π² + T²β²) − 4(4+3S)/(T²γ²))`.
pub fn c0_value(horizon: f64, beta: f64, s: f64) -> Result<f64, GapError> {
    let g = gap_analysis::gamma_of_beta(beta)?.gamma;
    let t2 = horizon * horizon;
    Ok(horizon * PI * PI / 2.0 * (1.0 / (PI * PI + t2 * beta * beta) - 4.0 * (4.0 + 3.0 * s) / (t2 * g * g)))
}

/// [`c0_value`], failing with the value attached when it is not positive.
pub fn c0_of(horizon: f64, beta: f64, s: f64) -> Result<f64, ObservabilityError> {
    let c0 = c0_value(horizon, beta, s)?;
    if c0 <= 0.0 {
        return Err(ObservabilityError::NotPositive {
            c0,
            horizon,
            t0: t0_of(beta, s)?,
        });
    }
    Ok(c0)
}

/// `∫₀ᵀ |Σ_j w_j x_j(t)|² dt` for one row or column of modes.
fn weighted_row_energy<'a>(records: impl Iterator<Item = (f64, &'a crate::modes::ModeRecord)>, horizon: f64) -> f64 {
    let terms: Vec<ExpTerm> = records
        .filter(|(_, rec)| !rec.is_zero())
        .flat_map(|(w, rec)| ingham::mode_terms(rec.coeffs.c * w, rec.triple.omega, rec.coeffs.r * w, rec.triple.r))
        .collect();
    ingham::square_integral(&terms, horizon)
}

/// `∫₀ᵀ ∫_{Γ₁} |u_y(t,x,0)|²` and `∫₀ᵀ ∫_{Γ₂} |u_x(t,0,y)|²`.
pub fn boundary_parts(set: &ModeSet, horizon: f64) -> (f64, f64) {
    let n = set.kmax() as u32;
    // Bottom edge: for each k1, Σ_{k2} k2 x_{k1k2}.
    let bottom: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|k1| weighted_row_energy((1..=n).map(|k2| (f64::from(k2), set.get(k1, k2))), horizon))
        .collect();
    // Left edge: for each k2, Σ_{k1} k1 x_{k1k2}.
    let left: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|k2| weighted_row_energy((1..=n).map(|k1| (f64::from(k1), set.get(k1, k2))), horizon))
        .collect();
    let half_pi = PI / 2.0;
    (half_pi * bottom.iter().sum::<f64>(), half_pi * left.iter().sum::<f64>())
}

/// `∫₀ᵀ ∫_Γ |∂u/∂ν|² dΓ dt` for the truncated series.
pub fn boundary_lhs(set: &ModeSet, horizon: f64) -> f64 {
    let (bottom, left) = boundary_parts(set, horizon);
    bottom + left
}

/// `Σ (k1² + k2²) |C|² (1 + e^{−2 Im ω T})`.
pub fn rhs_weighted_sum(set: &ModeSet, horizon: f64) -> f64 {
    set.records()
        .iter()
        .map(|rec| {
            let c: Complex64 = rec.coeffs.c;
            rec.lambda.value() * c.norm_sqr() * (1.0 + (-2.0 * rec.triple.omega.im * horizon).exp())
        })
        .sum()
}

/// Build the spectrum and coefficients, evaluate both sides and the
/// proof-extracted constants, and decide the verdict.
///
/// ```
/// use memwave::modes::{InitialData, SineCoefficients};
/// use memwave::observability::{verify_observability, ObservabilityConfig};
///
/// let a = SineCoefficients::from_fn(8, |k1, k2| 1.0 / f64::from(k1 * k1 + k2 * k2));
/// let data = InitialData::new(a, SineCoefficients::zeros(8)).unwrap();
/// let report = verify_observability(&ObservabilityConfig::new(0.0, 50.0, 8).with_mu(1.0), &data).unwrap();
/// assert!(report.verdict);
/// ```
pub fn verify_observability(
    config: &ObservabilityConfig,
    data: &InitialData,
) -> Result<ObservabilityReport, ObservabilityError> {
    config.validate()?;
    if config.kmax > data.kmax() {
        return Err(ObservabilityError::InvalidConfig(format!(
            "kmax={} exceeds data kmax={}",
            config.kmax,
            data.kmax()
        )));
    }
    let params = KernelParams::limiting(config.beta)?;
    let data = InitialData {
        a: data.a.truncated(config.kmax),
        b: data.b.truncated(config.kmax),
    };
    let set = ModeSet::build(params, &data)?;
    let (mu, mu_source) = match config.mu {
        Some(mu) => (mu, MuSource::User),
        None => (set.estimate_mu()?.mu_hat, MuSource::Estimated),
    };
    let th = thresholds(config.beta, mu, config.theta)?;
    let c0 = c0_value(config.horizon, config.beta, th.s)?;
    let lhs = boundary_lhs(&set, config.horizon);
    let rhs_sum = rhs_weighted_sum(&set, config.horizon);
    let margin = lhs - c0 * rhs_sum;
    let below_threshold = config.horizon <= th.t0;
    let feasible = config.beta < th.beta0;
    let verdict = margin >= -1e-9 * (1.0 + lhs) && !below_threshold && feasible;
    let report = ObservabilityReport {
        lhs,
        rhs_sum,
        s: th.s,
        c0,
        t0: th.t0,
        beta0: th.beta0,
        margin,
        verdict,
        below_threshold,
        gamma: th.gamma,
        mu,
        mu_source,
        beta: config.beta,
        horizon: config.horizon,
        kmax: config.kmax,
        theta: config.theta,
        constants: "proof-extracted",
    };
    if !feasible {
        return Err(ObservabilityError::InfeasibleParameters {
            report: Box::new(report),
        });
    }
    Ok(report)
}
