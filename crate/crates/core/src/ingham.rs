//! Weighted Ingham-type lower bound for sums of exponentials
//! `F(t) = Σ (C_n e^{iω_n t} + conj(C_n) e^{−i conj(ω_n) t} + R_n e^{r_n t})`.
//!
//! The weight is the half-sine window `sin(πt/T)` on `[0, T]` whose
//! transform is `K(u) = Tπ / (π² − T²u²)`. `∫₀ᵀ |F|²` is evaluated exactly
//! by expanding into pairwise exponential products.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InghamError {
    #[error("time horizon must be positive and finite, got {0}")]
    InvalidHorizon(f64),
    #[error("K(u) has a pole at u={u} for T={horizon}")]
    PoleError { u: Complex64, horizon: f64 },
    #[error("hypothesis violated: {}", format_violations(.0))]
    HypothesisError(Vec<Violation>),
    #[error("kernel bound fails: |K(u)|={modulus} > {bound}")]
    KernelBoundViolated { modulus: f64, bound: f64 },
    #[error("lower bound fails: lhs={lhs} < rhs={rhs}")]
    BoundViolated { lhs: f64, rhs: f64 },
    #[error("theta must exceed 1/2, got {0}")]
    ThetaOutOfRange(f64),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| format!("{:?} at {:?}", x.hypothesis, x.indices))
        .collect::<Vec<_>>()
        .join("; ")
}

fn check_horizon(horizon: f64) -> Result<(), InghamError> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(InghamError::InvalidHorizon(horizon));
    }
    Ok(())
}

/// Validated time horizon for the half-sine weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightConfig {
    horizon: f64,
}

impl WeightConfig {
    pub fn new(horizon: f64) -> Result<Self, InghamError> {
        check_horizon(horizon)?;
        Ok(Self { horizon })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn weight(&self, t: f64) -> f64 {
        weight_k(t, self.horizon)
    }

    pub fn kernel(&self, u: Complex64) -> Result<Complex64, InghamError> {
        kernel_k(u, self.horizon)
    }
}

/// `sin(πt/T)` on `[0, T]`, zero elsewhere.
pub fn weight_k(t: f64, horizon: f64) -> f64 {
    if (0.0..=horizon).contains(&t) {
        (PI * t / horizon).sin().max(0.0)
    } else {
        0.0
    }
}

/// `K(u) = Tπ / (π² − T²u²)`.
pub fn kernel_k(u: Complex64, horizon: f64) -> Result<Complex64, InghamError> {
    let denom = PI * PI - horizon * horizon * u * u;
    if denom.norm() < 1e-14 * PI * PI {
        return Err(InghamError::PoleError { u, horizon });
    }
    Ok(horizon * PI / denom)
}

/// `∫₀ᵀ sin(πt/T) Re(z e^{iut}) dt = Re(z (1 + e^{iuT}) K(u))`.
pub fn weighted_moment(z: Complex64, u: Complex64, horizon: f64) -> Result<f64, InghamError> {
    let k = kernel_k(u, horizon)?;
    let phase = (Complex64::i() * u * horizon).exp();
    Ok((z * (1.0 + phase) * k).re)
}

/// `(|K(u)|, 4π / (Tγ² (4j² − 1)))`, valid once `γ > 2π/T` and `|u| ≥ γj`.
pub fn kernel_bound_check(u: Complex64, j: u32, gamma: f64, horizon: f64) -> Result<(f64, f64), InghamError> {
    check_horizon(horizon)?;
    let mut violations = Vec::new();
    if gamma <= 2.0 * PI / horizon {
        violations.push(Violation::new(
            Hypothesis::Horizon,
            vec![],
            format!("gamma={gamma} <= 2*pi/T={}", 2.0 * PI / horizon),
        ));
    }
    if j == 0 || u.norm() < gamma * f64::from(j) {
        violations.push(Violation::new(
            Hypothesis::Separation,
            vec![j as usize],
            format!("|u|={} < gamma*j={}", u.norm(), gamma * f64::from(j)),
        ));
    }
    if !violations.is_empty() {
        return Err(InghamError::HypothesisError(violations));
    }
    let modulus = kernel_k(u, horizon)?.norm();
    let jf = f64::from(j);
    let bound = 4.0 * PI / (horizon * gamma * gamma * (4.0 * jf * jf - 1.0));
    if modulus > bound * (1.0 + 1e-12) {
        return Err(InghamError::KernelBoundViolated { modulus, bound });
    }
    Ok((modulus, bound))
}

/// One exponential `amplitude · e^{rate · t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub amplitude: Complex64,
    pub rate: Complex64,
}

/// `∫₀ᵀ e^{st} dt = (e^{sT} − 1)/s`, with a Taylor series near `s = 0`.
pub fn exp_primitive(s: Complex64, horizon: f64) -> Complex64 {
    let x = s * horizon;
    if x.norm() < 1e-6 {
        // T (1 + x/2 + x²/6 + x³/24 + x⁴/120 + x⁵/720)
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..=6 {
            term = term * x / k as f64;
            sum += term;
        }
        return sum * horizon;
    }
    (x.exp() - 1.0) / s
}

/// `∫₀ᵀ |Σ a_j e^{s_j t}|² dt`, exact up to rounding.
pub fn square_integral(terms: &[ExpTerm], horizon: f64) -> f64 {
    let mut total = 0.0;
    for (j, a) in terms.iter().enumerate() {
        total += a.amplitude.norm_sqr() * exp_primitive(a.rate + a.rate.conj(), horizon).re;
        for b in &terms[j + 1..] {
            let cross = a.amplitude * b.amplitude.conj() * exp_primitive(a.rate + b.rate.conj(), horizon);
            total += 2.0 * cross.re;
        }
    }
    total.max(0.0)
}

/// The terms of `C e^{iωt} + conj(C) e^{−i conj(ω) t} + R e^{rt}`, dropping
/// zero amplitudes.
pub fn mode_terms(c: Complex64, omega: Complex64, r_coef: f64, r: f64) -> impl Iterator<Item = ExpTerm> {
    let i = Complex64::i();
    let pair = (c != Complex64::new(0.0, 0.0)).then(|| {
        [
            ExpTerm {
                amplitude: c,
                rate: i * omega,
            },
            ExpTerm {
                amplitude: c.conj(),
                rate: -i * omega.conj(),
            },
        ]
    });
    let real = (r_coef != 0.0).then(|| ExpTerm {
        amplitude: Complex64::new(r_coef, 0.0),
        rate: Complex64::new(r, 0.0),
    });
    pair.into_iter().flatten().chain(real)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    /// `|Re ω_n − Re ω_m| ≥ γ |n − m|` for `max(n, m) ≥ τ`.
    Separation,
    /// `Re ω_n ≥ γ n`.
    Growth,
    /// `r_n ≤ −Im ω_n`.
    DecayOrder,
    /// `|R_n| ≤ μ |C_n| / n^θ`.
    Coupling,
    /// `γ > 2π/T`.
    Horizon,
    /// `θ > 1/2`, `μ > 0`.
    Exponents,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub hypothesis: Hypothesis,
    /// One-based indices into the family.
    pub indices: Vec<usize>,
    pub detail: String,
}

impl Violation {
    fn new(hypothesis: Hypothesis, indices: Vec<usize>, detail: String) -> Self {
        Self {
            hypothesis,
            indices,
            detail,
        }
    }
}

/// A finite family `{ω_n, r_n, C_n, R_n}`, `n = 1..=len`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFamily {
    pub omegas: Vec<Complex64>,
    pub decay_rates: Vec<f64>,
    pub osc_coeffs: Vec<Complex64>,
    pub real_coeffs: Vec<f64>,
    pub gamma: f64,
    pub tau: usize,
    pub theta: f64,
    pub mu: f64,
}

impl ExponentFamily {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        omegas: Vec<Complex64>,
        decay_rates: Vec<f64>,
        osc_coeffs: Vec<Complex64>,
        real_coeffs: Vec<f64>,
        gamma: f64,
        tau: usize,
        theta: f64,
        mu: f64,
    ) -> Result<Self, InghamError> {
        let n = omegas.len();
        if decay_rates.len() != n || osc_coeffs.len() != n || real_coeffs.len() != n {
            return Err(InghamError::InvalidFamily(format!(
                "length mismatch: omega={n}, r={}, C={}, R={}",
                decay_rates.len(),
                osc_coeffs.len(),
                real_coeffs.len()
            )));
        }
        if n == 0 {
            return Err(InghamError::InvalidFamily("family is empty".into()));
        }
        if tau == 0 || tau > n {
            return Err(InghamError::InvalidFamily(format!("tau={tau} not in 1..={n}")));
        }
        Ok(Self {
            omegas,
            decay_rates,
            osc_coeffs,
            real_coeffs,
            gamma,
            tau,
            theta,
            mu,
        })
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn terms(&self) -> Vec<ExpTerm> {
        (0..self.len())
            .flat_map(|n| {
                mode_terms(
                    self.osc_coeffs[n],
                    self.omegas[n],
                    self.real_coeffs[n],
                    self.decay_rates[n],
                )
            })
            .collect()
    }

    /// `F(t)`; real by construction.
    pub fn evaluate(&self, t: f64) -> f64 {
        self.terms()
            .iter()
            .map(|term| (term.amplitude * (term.rate * t).exp()).re)
            .sum()
    }
}

/// `∫₀ᵀ |F(t)|² dt`.
pub fn lhs_integral(family: &ExponentFamily, horizon: f64) -> f64 {
    square_integral(&family.terms(), horizon)
}

/// Every violated hypothesis of the lower bound, with one-based indices.
pub fn check_hypotheses(family: &ExponentFamily, horizon: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let gamma = family.gamma;
    let slack = |bound: f64| 1e-12 * (1.0 + bound.abs());
    if !(horizon > 0.0 && gamma > 2.0 * PI / horizon) {
        out.push(Violation::new(
            Hypothesis::Horizon,
            vec![],
            format!("gamma={gamma} must exceed 2*pi/T={}", 2.0 * PI / horizon),
        ));
    }
    if family.theta.is_nan() || family.theta <= 0.5 || family.mu.is_nan() || family.mu <= 0.0 {
        out.push(Violation::new(
            Hypothesis::Exponents,
            vec![],
            format!("need theta > 1/2 and mu > 0 (theta={}, mu={})", family.theta, family.mu),
        ));
    }
    let n_len = family.len();
    for n in 1..=n_len {
        for m in (n + 1)..=n_len {
            if m < family.tau {
                continue;
            }
            let diff = (family.omegas[n - 1].re - family.omegas[m - 1].re).abs();
            let bound = gamma * (m - n) as f64;
            if diff < bound - slack(bound) {
                out.push(Violation::new(
                    Hypothesis::Separation,
                    vec![n, m],
                    format!("|Re w_{n} - Re w_{m}|={diff} < {bound}"),
                ));
            }
        }
    }
    for n in 1..=n_len {
        let i = n - 1;
        let re = family.omegas[i].re;
        let bound = gamma * n as f64;
        if re < bound - slack(bound) {
            out.push(Violation::new(
                Hypothesis::Growth,
                vec![n],
                format!("Re w_{n}={re} < {bound}"),
            ));
        }
        let im = family.omegas[i].im;
        if family.decay_rates[i] > -im + slack(im) {
            out.push(Violation::new(
                Hypothesis::DecayOrder,
                vec![n],
                format!("r_{n}={} > -Im w_{n}={}", family.decay_rates[i], -im),
            ));
        }
        let cap = family.mu * family.osc_coeffs[i].norm() / (n as f64).powf(family.theta);
        if family.real_coeffs[i].abs() > cap + slack(cap) {
            out.push(Violation::new(
                Hypothesis::Coupling,
                vec![n],
                format!("|R_{n}|={} > {cap}", family.real_coeffs[i].abs()),
            ));
        }
    }
    out
}

/// `ζ(s)` for `s > 1` via Euler–Maclaurin summation.
pub fn zeta(s: f64) -> f64 {
    const N: usize = 16;
    // B_2k / (2k)!
    const BERNOULLI_OVER_FACTORIAL: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1_209_600.0,
        1.0 / 47_900_160.0,
        -691.0 / 1_307_674_368_000.0,
    ];
    let n = N as f64;
    let head: f64 = (1..N).map(|k| (k as f64).powf(-s)).sum();
    let mut tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // s (s+1) ... (s+2k−2) N^{−s−2k+1}
    let mut rising = s;
    let mut power = n.powf(-s - 1.0);
    for (k, coef) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        tail += coef * rising * power;
        let m = 2.0 * k as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        power /= n * n;
    }
    head + tail
}

/// `S = μ · max{ζ(2θ), π²/6}`.
pub fn constant_s(mu: f64, theta: f64) -> Result<f64, InghamError> {
    if theta.is_nan() || theta <= 0.5 {
        return Err(InghamError::ThetaOutOfRange(theta));
    }
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(InghamError::InvalidFamily(format!(
            "mu must be finite and >= 0, got {mu}"
        )));
    }
    let basel = PI * PI / 6.0;
    // ζ(2θ) ≤ π²/6 for θ ≥ 1.
    if theta >= 1.0 {
        return Ok(mu * basel);
    }
    Ok(mu * zeta(2.0 * theta).max(basel))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InghamBoundReport {
    pub lhs: f64,
    pub rhs: f64,
    #[serde(rename = "S")]
    pub s: f64,
    pub margin: f64,
    pub violations: Vec<Violation>,
}

impl InghamBoundReport {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs - 1e-9 * (1.0 + self.rhs.abs())
    }
}

/// The right-hand side of the lower bound, evaluated term by term.
pub fn rhs_value(family: &ExponentFamily, horizon: f64, s: f64) -> f64 {
    let gamma2 = family.gamma * family.gamma;
    let mut head = 0.0;
    let mut all = 0.0;
    for (i, (c, omega)) in family.osc_coeffs.iter().zip(&family.omegas).enumerate() {
        let im = omega.im;
        let weight = c.norm_sqr() * (1.0 + (-2.0 * im * horizon).exp());
        all += weight;
        if i + 1 >= family.tau {
            let lead = 1.0 / (PI * PI + 4.0 * horizon * horizon * im * im);
            head += (lead - 2.0 * s / (horizon * horizon * gamma2)) * weight;
        }
    }
    2.0 * horizon * PI * head - 8.0 * PI / (horizon * gamma2) * (1.0 + s / 2.0) * all
}

/// Both sides of the bound and the list of violated hypotheses; never fails
/// on hypotheses. Used by diagnostics.
pub fn evaluate_bound(family: &ExponentFamily, horizon: f64) -> Result<InghamBoundReport, InghamError> {
    check_horizon(horizon)?;
    let violations = check_hypotheses(family, horizon);
    let s = if family.theta > 0.5 && family.mu >= 0.0 {
        constant_s(family.mu, family.theta)?
    } else {
        f64::NAN
    };
    let lhs = lhs_integral(family, horizon);
    let rhs = rhs_value(family, horizon, s);
    Ok(InghamBoundReport {
        lhs,
        rhs,
        s,
        margin: lhs - rhs,
        violations,
    })
}

/// Evaluate the lower bound for an admissible family and check it.
pub fn rhs_lower_bound(family: &ExponentFamily, horizon: f64) -> Result<InghamBoundReport, InghamError> {
    let report = evaluate_bound(family, horizon)?;
    if !report.violations.is_empty() {
        return Err(InghamError::HypothesisError(report.violations));
    }
    if !report.holds() {
        return Err(InghamError::BoundViolated {
            lhs: report.lhs,
            rhs: report.rhs,
        });
    }
    Ok(report)
}
