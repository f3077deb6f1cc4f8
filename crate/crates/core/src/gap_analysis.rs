//! Gap constants for the real frequencies `Re ω` in the limiting regime
//! `η = 3β/2`, and finite-range audits of the gap inequalities.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::spectrum::{self, KernelParams, LaplaceEigenvalue, SpectrumError};

/// Upper end of the admissible β interval, `2/√3`.
pub const BETA_MAX: f64 = 1.154_700_538_379_251_5;

/// Slack absorbed by every audited inequality.
pub const AUDIT_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GapError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: max(n, n')={max_n} < max of leading indices {max_leading}")]
    PreconditionViolated { max_n: u64, max_leading: u64 },
    #[error("negative radicand {radicand} at x={x}")]
    NegativeRadicand { x: f64, radicand: f64 },
    #[error("beta={0} outside [0, 2/sqrt(3)]")]
    OutOfRange(f64),
    #[error("audit requires the limiting regime eta = 3*beta/2 (beta={beta}, eta={eta})")]
    RegimeError { beta: f64, eta: f64 },
    #[error("{inequality} fails at {first:?} vs {second:?}: value {value}, bound {bound}")]
    AuditFailure {
        inequality: &'static str,
        first: (u32, u32),
        second: (u32, u32),
        value: f64,
        bound: f64,
    },
    #[error("F is increasing near x={x} (forward difference {diff})")]
    MonotonicityFailure { x: f64, diff: f64 },
    #[error("f_minus({x})={value} is not positive")]
    PositivityFailure { x: f64, value: f64 },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapConstant {
    pub gamma: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapAudit {
    pub min_ratio_k2: f64,
    pub min_ratio_k1: f64,
    pub min_re_over_norm: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub kmax: u32,
}

/// Both sides of the square-root gap estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqrtGap {
    /// `|√(a + n²) − √(a + n'²)|`
    pub gap: f64,
    /// `(√dim − √(dim − 1)) |n − n'|`
    pub bound: f64,
}

impl SqrtGap {
    pub fn holds(&self) -> bool {
        self.gap >= self.bound - AUDIT_SLACK * (1.0 + self.bound)
    }
}

fn sqrt_gap_raw(a: f64, n: u64, n_prime: u64) -> f64 {
    let (n, m) = (n as f64, n_prime as f64);
    let (p, q) = (a + n * n, a + m * m);
    if n == m {
        return 0.0;
    }
    // (p − q) / (√p + √q) keeps full precision when n ≈ n'.
    ((p - q) / (p.sqrt() + q.sqrt())).abs()
}

/// Gap between `√(a + n²)` and `√(a + n'²)` with the dimension-dependent
/// lower bound. No precondition is checked here; see [`sqrt_gap_bound_for`].
pub fn sqrt_gap_bound(a: f64, n: u64, n_prime: u64, dim: u32) -> Result<SqrtGap, GapError> {
    if dim < 2 {
        return Err(GapError::InvalidArgument(format!("dim must be >= 2, got {dim}")));
    }
    if !(a.is_finite() && a >= 0.0) || n == 0 || n_prime == 0 {
        return Err(GapError::InvalidArgument(format!(
            "need a >= 0 and positive n, n' (a={a}, n={n}, n'={n_prime})"
        )));
    }
    let d = f64::from(dim);
    Ok(SqrtGap {
        gap: sqrt_gap_raw(a, n, n_prime),
        bound: (d.sqrt() - (d - 1.0).sqrt()) * n.abs_diff(n_prime) as f64,
    })
}

/// List form: `a = Σ leading²`, `dim = leading.len() + 1`. Checks
/// `max(n, n') ≥ max(leading)` and that the estimate holds.
pub fn sqrt_gap_bound_for(leading: &[u64], n: u64, n_prime: u64) -> Result<SqrtGap, GapError> {
    if leading.is_empty() || leading.contains(&0) {
        return Err(GapError::InvalidArgument(
            "leading indices must be a nonempty list of positive integers".into(),
        ));
    }
    let max_leading = *leading.iter().max().expect("nonempty");
    let max_n = n.max(n_prime);
    if max_n < max_leading {
        return Err(GapError::PreconditionViolated { max_n, max_leading });
    }
    let a = leading.iter().map(|&k| (k as f64) * (k as f64)).sum();
    let dim =
        u32::try_from(leading.len() + 1).map_err(|_| GapError::InvalidArgument("too many leading indices".into()))?;
    let out = sqrt_gap_bound(a, n, n_prime, dim)?;
    if !out.holds() {
        return Err(GapError::AuditFailure {
            inequality: "sqrt gap",
            first: (0, u32::try_from(n).unwrap_or(u32::MAX)),
            second: (0, u32::try_from(n_prime).unwrap_or(u32::MAX)),
            value: out.gap,
            bound: out.bound,
        });
    }
    Ok(out)
}

/// `f±(x) = √(1 − x² + x⁴/3) ± (√3/9) x³`.
pub fn f_pm(x: f64) -> Result<(f64, f64), GapError> {
    let x2 = x * x;
    let radicand = 1.0 - x2 + x2 * x2 / 3.0;
    if radicand < 0.0 || radicand.is_nan() {
        return Err(GapError::NegativeRadicand { x, radicand });
    }
    let root = radicand.sqrt();
    let odd = 3f64.sqrt() / 9.0 * x2 * x;
    let plus = root + odd;
    // f₊ f₋ = (1 − x²/3)³; avoids the cancellation in root − odd.
    let minus = if plus > 0.0 {
        (1.0 - x2 / 3.0).powi(3) / plus
    } else {
        root - odd
    };
    Ok((plus, minus))
}

/// `F(x) = cbrt(f₊(x)) + cbrt(f₋(x))`, real cube roots.
pub fn f_cbrt_sum(x: f64) -> Result<f64, GapError> {
    let (plus, _) = f_pm(x)?;
    let a = plus.cbrt();
    Ok(a + (1.0 - x * x / 3.0) / a)
}

fn check_beta(beta: f64) -> Result<(), GapError> {
    // A few ulps of headroom so `2.0 / 3f64.sqrt()` is accepted.
    if !(0.0..=BETA_MAX + 4.0 * f64::EPSILON).contains(&beta) {
        return Err(GapError::OutOfRange(beta));
    }
    Ok(())
}

/// The gap constant `γ(β)`, evaluated from its explicit expression in β.
pub fn gamma_of_beta(beta: f64) -> Result<GapConstant, GapError> {
    check_beta(beta)?;
    let b2 = beta * beta;
    let root = (1.0 - 1.125 * b2 + 27.0 / 64.0 * b2 * b2).sqrt();
    let odd = 3.0 * 3f64.sqrt() / (16.0 * 2f64.sqrt()) * b2 * beta;
    let a = (root + odd).cbrt();
    let gamma = (2f64.sqrt() - 1.0) / 2.0 * (a + (1.0 - 0.375 * b2) / a);
    Ok(GapConstant { gamma, beta })
}

/// Same constant through `(√2 − 1)/2 · F(3β / (2√2))`.
pub fn gamma_via_profile(beta: f64) -> Result<f64, GapError> {
    check_beta(beta)?;
    let x = 3.0 * beta / (2.0 * 2f64.sqrt());
    Ok((2f64.sqrt() - 1.0) / 2.0 * f_cbrt_sum(x)?)
}

/// `(β, γ(β))` on `steps + 1` uniform points of `[0, 2/√3]`.
pub fn gamma_table(steps: usize) -> Result<Vec<(f64, f64)>, GapError> {
    if steps == 0 {
        return Err(GapError::InvalidArgument("steps must be positive".into()));
    }
    (0..=steps)
        .map(|i| {
            let beta = if i == steps {
                BETA_MAX
            } else {
                BETA_MAX * i as f64 / steps as f64
            };
            gamma_of_beta(beta).map(|g| (beta, g.gamma))
        })
        .collect()
}

/// Re ω and Im ω for all modes `1 ≤ k1, k2 ≤ kmax`, row-major in `k1`.
fn frequency_grid(params: KernelParams, kmax: u32) -> Result<Vec<(f64, f64)>, GapError> {
    let rows: Vec<Result<Vec<(f64, f64)>, SpectrumError>> = (1..=kmax)
        .into_par_iter()
        .map(|k1| {
            (1..=kmax)
                .map(|k2| {
                    let lam = LaplaceEigenvalue::new(f64::from(k1 * k1 + k2 * k2))?;
                    let t = spectrum::characteristic_roots_closed(params, lam)?;
                    Ok((t.omega.re, t.omega.im))
                })
                .collect()
        })
        .collect();
    let mut grid = Vec::with_capacity((kmax * kmax) as usize);
    for row in rows {
        grid.extend(row?);
    }
    Ok(grid)
}

/// Sweep all modes up to `kmax` and check the gap, growth and
/// imaginary-part bounds against `γ(β)`.
pub fn audit_gaps(params: KernelParams, kmax: u32) -> Result<GapAudit, GapError> {
    if !params.is_limiting() {
        return Err(GapError::RegimeError {
            beta: params.beta(),
            eta: params.eta(),
        });
    }
    check_beta(params.beta())?;
    if kmax < 2 {
        return Err(GapError::InvalidArgument(format!("kmax must be >= 2, got {kmax}")));
    }
    let gamma = gamma_of_beta(params.beta())?.gamma;
    let grid = frequency_grid(params, kmax)?;
    let n = kmax as usize;
    let at = |k1: u32, k2: u32| grid[(k1 as usize - 1) * n + (k2 as usize - 1)];

    // (ratio, first mode, second mode)
    type Worst = (f64, (u32, u32), (u32, u32));
    let scan = |fixed_is_k1: bool| -> Worst {
        let mut worst: Worst = (f64::INFINITY, (0, 0), (0, 0));
        for fixed in 1..=kmax {
            for k in 1..=kmax {
                for k_prime in (k + 1)..=kmax {
                    // max(k, k') = k' must dominate the fixed index.
                    if k_prime < fixed {
                        continue;
                    }
                    let (a, b) = if fixed_is_k1 {
                        ((fixed, k), (fixed, k_prime))
                    } else {
                        ((k, fixed), (k_prime, fixed))
                    };
                    let ratio = (at(a.0, a.1).0 - at(b.0, b.1).0).abs() / f64::from(k_prime - k);
                    if ratio < worst.0 {
                        worst = (ratio, a, b);
                    }
                }
            }
        }
        worst
    };
    let worst_k2 = scan(true);
    let worst_k1 = scan(false);

    let mut min_re = (f64::INFINITY, (0, 0));
    let mut im_min = (f64::INFINITY, (0, 0));
    let mut im_max = (f64::NEG_INFINITY, (0, 0));
    for k1 in 1..=kmax {
        for k2 in 1..=kmax {
            let (re, im) = at(k1, k2);
            let norm = f64::from(k1 * k1 + k2 * k2).sqrt();
            if re / norm < min_re.0 {
                min_re = (re / norm, (k1, k2));
            }
            if im < im_min.0 {
                im_min = (im, (k1, k2));
            }
            if im > im_max.0 {
                im_max = (im, (k1, k2));
            }
        }
    }

    let slack = AUDIT_SLACK;
    let fail = |inequality, first, second, value, bound| GapError::AuditFailure {
        inequality,
        first,
        second,
        value,
        bound,
    };
    if worst_k2.0 < gamma - slack {
        return Err(fail("k2 gap", worst_k2.1, worst_k2.2, worst_k2.0, gamma));
    }
    if worst_k1.0 < gamma - slack {
        return Err(fail("k1 gap", worst_k1.1, worst_k1.2, worst_k1.0, gamma));
    }
    if min_re.0 < gamma - slack {
        return Err(fail("Re omega growth", min_re.1, min_re.1, min_re.0, gamma));
    }
    if im_min.0 < -slack {
        return Err(fail("Im omega >= 0", im_min.1, im_min.1, im_min.0, 0.0));
    }
    let beta_half = params.beta() / 2.0;
    if im_max.0 > beta_half + slack {
        return Err(fail("Im omega <= beta/2", im_max.1, im_max.1, im_max.0, beta_half));
    }

    Ok(GapAudit {
        min_ratio_k2: worst_k2.0,
        min_ratio_k1: worst_k1.0,
        min_re_over_norm: min_re.0,
        im_min: im_min.0,
        im_max: im_max.0,
        kmax,
    })
}

/// Largest forward difference of `F` on a uniform grid of `samples` points
/// over `[0, √(3/2)]`; also checks `f₋ > 0` on the grid.
pub fn verify_f_monotone(samples: usize) -> Result<f64, GapError> {
    if samples < 2 {
        return Err(GapError::InvalidArgument(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    let end = 1.5f64.sqrt();
    let xs: Vec<f64> = (0..samples).map(|i| end * i as f64 / (samples - 1) as f64).collect();
    let mut values = Vec::with_capacity(samples);
    for &x in &xs {
        let (_, minus) = f_pm(x)?;
        if minus <= 0.0 {
            return Err(GapError::PositivityFailure { x, value: minus });
        }
        values.push(f_cbrt_sum(x)?);
    }
    let mut max_diff = f64::NEG_INFINITY;
    for (i, w) in values.windows(2).enumerate() {
        let diff = w[1] - w[0];
        if diff > AUDIT_SLACK {
            return Err(GapError::MonotonicityFailure { x: xs[i], diff });
        }
        max_diff = max_diff.max(diff);
    }
    Ok(max_diff)
}
