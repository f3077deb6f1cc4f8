//! Per-mode coefficients of the series solution
//! `u = Σ (C e^{iωt} + conj(C) e^{−i conj(ω) t} + R e^{rt}) sin(k1 x) sin(k2 y)`.
//!
//! Coefficients come from the initial sine coefficients `(a, b)` of `u₀, u₁`
//! through the three conditions `x(0) = a`, `x'(0) = b`, `x''(0) = −λa`.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;
use thiserror::Error;

use crate::spectrum::{self, KernelParams, LaplaceEigenvalue, ModeIndex, SpectralTriple, SpectrumError};

/// Exponents closer than this are treated as coincident.
pub const DEGENERACY_THRESHOLD: f64 = 1e-10;
/// Tolerance of the conjugacy and reality checks on a solved mode.
pub const REALITY_TOLERANCE: f64 = 1e-10;
const ZERO_C: f64 = 1e-14;
const ZERO_R: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModesError {
    #[error("grid of {points} points per direction is too coarse for kmax={kmax} (need {needed})")]
    GridTooCoarse { points: usize, kmax: usize, needed: usize },
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("exponents {0} and {1} coincide")]
    DegenerateExponents(Complex64, Complex64),
    #[error("solved coefficients are not real: {0}")]
    RealityViolation(String),
    #[error("no mode with nonzero C")]
    NoUsableModes,
    #[error("mode ({}, {}) has C={c} but R={r}", .mode.k1, .mode.k2)]
    DegenerateMode { mode: ModeIndex, c: f64, r: f64 },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// Samples of a function on the open uniform grid `x_i = iπ/(m+1)`,
/// `i = 1..=m`, stored row-major: `values[(i−1)·m + (j−1)] = u(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    points: usize,
    values: Vec<f64>,
}

impl SampleGrid {
    pub fn new(points: usize, values: Vec<f64>) -> Result<Self, ModesError> {
        if points == 0 || values.len() != points * points {
            return Err(ModesError::InvalidData(format!(
                "expected {points}x{points} samples, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(ModesError::InvalidData("non-finite sample".into()));
        }
        Ok(Self { points, values })
    }

    pub fn from_fn(points: usize, f: impl Fn(f64, f64) -> f64) -> Self {
        let h = grid_step(points);
        let values = (1..=points)
            .flat_map(|i| (1..=points).map(move |j| (i, j)))
            .map(|(i, j)| f(i as f64 * h, j as f64 * h))
            .collect();
        Self { points, values }
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Spacing of the open grid with `points` interior nodes.
pub fn grid_step(points: usize) -> f64 {
    std::f64::consts::PI / (points + 1) as f64
}

/// Sine coefficients `a_{k1 k2}`, `1 ≤ k1, k2 ≤ kmax`, row-major in `k1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SineCoefficients {
    kmax: usize,
    values: Vec<f64>,
}

impl SineCoefficients {
    pub fn new(kmax: usize, values: Vec<f64>) -> Result<Self, ModesError> {
        if kmax == 0 || values.len() != kmax * kmax {
            return Err(ModesError::InvalidData(format!(
                "expected {kmax}x{kmax} coefficients, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(ModesError::InvalidData("non-finite coefficient".into()));
        }
        Ok(Self { kmax, values })
    }

    pub fn zeros(kmax: usize) -> Self {
        Self {
            kmax,
            values: vec![0.0; kmax * kmax],
        }
    }

    pub fn from_fn(kmax: usize, f: impl Fn(u32, u32) -> f64) -> Self {
        let values = (1..=kmax as u32)
            .flat_map(|k1| (1..=kmax as u32).map(move |k2| (k1, k2)))
            .map(|(k1, k2)| f(k1, k2))
            .collect();
        Self { kmax, values }
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    /// One-based access.
    pub fn get(&self, k1: u32, k2: u32) -> f64 {
        self.values[(k1 as usize - 1) * self.kmax + (k2 as usize - 1)]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            kmax: self.kmax,
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// Keep only modes with `k1, k2 ≤ kmax`.
    pub fn truncated(&self, kmax: usize) -> Self {
        let kmax = kmax.min(self.kmax);
        Self::from_fn(kmax, |k1, k2| self.get(k1, k2))
    }
}

/// Sine coefficients of `u₀` and `u₁`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialData {
    pub a: SineCoefficients,
    pub b: SineCoefficients,
}

impl InitialData {
    pub fn new(a: SineCoefficients, b: SineCoefficients) -> Result<Self, ModesError> {
        if a.kmax != b.kmax {
            return Err(ModesError::InvalidData(format!(
                "u0 has kmax={} but u1 has kmax={}",
                a.kmax, b.kmax
            )));
        }
        Ok(Self { a, b })
    }

    pub fn zeros(kmax: usize) -> Self {
        Self {
            a: SineCoefficients::zeros(kmax),
            b: SineCoefficients::zeros(kmax),
        }
    }

    pub fn from_samples(u0: &SampleGrid, u1: &SampleGrid, kmax: usize) -> Result<Self, ModesError> {
        Self::new(sine_coefficients(u0, kmax)?, sine_coefficients(u1, kmax)?)
    }

    pub fn kmax(&self) -> usize {
        self.a.kmax
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            a: self.a.scaled(s),
            b: self.b.scaled(s),
        }
    }
}

/// `Σ_{n=1}^{m} f_n sin(π k n / (m+1))` for `k = 1..=kmax`, via an FFT of
/// the odd extension.
struct SineTransform {
    points: usize,
    fft: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl SineTransform {
    fn new(points: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(2 * (points + 1));
        Self { points, fft }
    }

    fn apply(&self, input: &[f64], kmax: usize, out: &mut [f64]) {
        let n = self.points + 1;
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
        for (idx, &v) in input.iter().enumerate() {
            buf[idx + 1] = Complex64::new(v, 0.0);
            buf[2 * n - idx - 1] = Complex64::new(-v, 0.0);
        }
        self.fft.process(&mut buf);
        for k in 1..=kmax {
            out[k - 1] = -0.5 * buf[k].im;
        }
    }
}

/// Discrete sine coefficients `a_{k1k2} ≈ (4/π²) ∬ u sin(k1x) sin(k2y)`,
/// exact for sine polynomials resolved by the grid.
pub fn sine_coefficients(samples: &SampleGrid, kmax: usize) -> Result<SineCoefficients, ModesError> {
    let m = samples.points;
    if kmax == 0 {
        return Err(ModesError::InvalidData("kmax must be positive".into()));
    }
    let needed = 2 * kmax + 1;
    if m < needed {
        return Err(ModesError::GridTooCoarse {
            points: m,
            kmax,
            needed,
        });
    }
    let transform = SineTransform::new(m);
    // Transform along y for every x row: partial[i][k2].
    let mut partial = vec![0.0; m * kmax];
    for (row, out) in samples.values.chunks(m).zip(partial.chunks_mut(kmax)) {
        transform.apply(row, kmax, out);
    }
    // Then along x for every k2 column.
    let scale = (2.0 / (m + 1) as f64).powi(2);
    let mut values = vec![0.0; kmax * kmax];
    let mut column = vec![0.0; m];
    let mut out = vec![0.0; kmax];
    for k2 in 0..kmax {
        for (i, c) in column.iter_mut().enumerate() {
            *c = partial[i * kmax + k2];
        }
        transform.apply(&column, kmax, &mut out);
        for k1 in 0..kmax {
            values[k1 * kmax + k2] = scale * out[k1];
        }
    }
    Ok(SineCoefficients { kmax, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeCoefficients {
    pub c: Complex64,
    pub r: f64,
}

/// Solve `Σ c_i = a`, `Σ c_i z_i = b`, `Σ c_i z_i² = −λa` for the exponents
/// `z = (iω, −i conj ω, r)`.
pub fn solve_mode_coefficients(
    a: f64,
    b: f64,
    triple: &SpectralTriple,
    lam: LaplaceEigenvalue,
) -> Result<ModeCoefficients, ModesError> {
    let z = triple.exponents();
    for i in 0..3 {
        for j in (i + 1)..3 {
            if (z[i] - z[j]).norm() <= DEGENERACY_THRESHOLD {
                return Err(ModesError::DegenerateExponents(z[i], z[j]));
            }
        }
    }
    if a == 0.0 && b == 0.0 {
        return Ok(ModeCoefficients {
            c: Complex64::new(0.0, 0.0),
            r: 0.0,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    #[rustfmt::skip]
    let system = Matrix3::new(
        one, one, one,
        z[0], z[1], z[2],
        z[0] * z[0], z[1] * z[1], z[2] * z[2],
    );
    let rhs = Vector3::new(
        Complex64::new(a, 0.0),
        Complex64::new(b, 0.0),
        Complex64::new(-lam.value() * a, 0.0),
    );
    let sol = system
        .lu()
        .solve(&rhs)
        .ok_or(ModesError::DegenerateExponents(z[0], z[1]))?;
    let scale = 1f64.max(a.abs() + b.abs());
    let conj_gap = (sol[1] - sol[0].conj()).norm();
    if conj_gap > REALITY_TOLERANCE * scale {
        return Err(ModesError::RealityViolation(format!(
            "c2 differs from conj(c1) by {conj_gap}"
        )));
    }
    if sol[2].im.abs() > REALITY_TOLERANCE * scale {
        return Err(ModesError::RealityViolation(format!("Im c3 = {}", sol[2].im)));
    }
    Ok(ModeCoefficients {
        c: sol[0],
        r: sol[2].re,
    })
}

/// One mode's spectrum and coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeRecord {
    pub mode: ModeIndex,
    pub lambda: LaplaceEigenvalue,
    pub triple: SpectralTriple,
    pub coeffs: ModeCoefficients,
}

impl ModeRecord {
    /// `d^order/dt^order` of the mode amplitude
    /// `x(t) = C e^{iωt} + conj(C) e^{−i conj(ω) t} + R e^{rt}`.
    pub fn derivative(&self, t: f64, order: i32) -> f64 {
        let [z1, _, _] = self.triple.exponents();
        let z3 = self.triple.r;
        let pair = self.coeffs.c * z1.powi(order) * (z1 * t).exp();
        2.0 * pair.re + self.coeffs.r * z3.powi(order) * (z3 * t).exp()
    }

    pub fn amplitude(&self, t: f64) -> f64 {
        self.derivative(t, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.c == Complex64::new(0.0, 0.0) && self.coeffs.r == 0.0
    }
}

/// All modes `1 ≤ k1, k2 ≤ kmax`, row-major in `k1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    params: KernelParams,
    kmax: usize,
    records: Vec<ModeRecord>,
}

impl ModeSet {
    pub fn build(params: KernelParams, data: &InitialData) -> Result<Self, ModesError> {
        let kmax = data.kmax();
        let rows: Vec<Result<Vec<ModeRecord>, ModesError>> = (1..=kmax as u32)
            .into_par_iter()
            .map(|k1| {
                (1..=kmax as u32)
                    .map(|k2| {
                        let mode = ModeIndex::new(k1, k2)?;
                        let lambda = spectrum::lambda_of(mode);
                        let triple = spectrum::characteristic_roots_closed(params, lambda)?;
                        let coeffs = solve_mode_coefficients(data.a.get(k1, k2), data.b.get(k1, k2), &triple, lambda)?;
                        Ok(ModeRecord {
                            mode,
                            lambda,
                            triple,
                            coeffs,
                        })
                    })
                    .collect()
            })
            .collect();
        let mut records = Vec::with_capacity(kmax * kmax);
        for row in rows {
            records.extend(row?);
        }
        Ok(Self { params, kmax, records })
    }

    pub fn params(&self) -> KernelParams {
        self.params
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn records(&self) -> &[ModeRecord] {
        &self.records
    }

    /// One-based access.
    pub fn get(&self, k1: u32, k2: u32) -> &ModeRecord {
        &self.records[(k1 as usize - 1) * self.kmax + (k2 as usize - 1)]
    }

    pub fn estimate_mu(&self) -> Result<MuEstimate, ModesError> {
        let mut best: Option<(f64, ModeIndex)> = None;
        for rec in &self.records {
            let c = rec.coeffs.c.norm();
            let r = rec.coeffs.r.abs();
            if c <= ZERO_C {
                if r > ZERO_R {
                    return Err(ModesError::DegenerateMode { mode: rec.mode, c, r });
                }
                continue;
            }
            let ratio = r * rec.lambda.value().sqrt() / c;
            if best.is_none_or(|(v, _)| ratio > v) {
                best = Some((ratio, rec.mode));
            }
        }
        let (mu_hat, argmax_mode) = best.ok_or(ModesError::NoUsableModes)?;
        Ok(MuEstimate {
            mu_hat,
            argmax_mode,
            kmax: self.kmax,
        })
    }

    pub fn coefficient_records(&self) -> Vec<CoefficientRecord> {
        self.records.iter().map(CoefficientRecord::from).collect()
    }
}

/// `u(t, x, y)` from the truncated series.
pub fn evaluate_solution(set: &ModeSet, t: f64, x: f64, y: f64) -> f64 {
    let n = set.kmax;
    let sx: Vec<f64> = (1..=n).map(|k| (k as f64 * x).sin()).collect();
    let sy: Vec<f64> = (1..=n).map(|k| (k as f64 * y).sin()).collect();
    set.records
        .iter()
        .filter(|rec| !rec.is_zero())
        .map(|rec| rec.amplitude(t) * sx[rec.mode.k1 as usize - 1] * sy[rec.mode.k2 as usize - 1])
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuEstimate {
    pub mu_hat: f64,
    pub argmax_mode: ModeIndex,
    pub kmax: usize,
}

/// `max |R| √λ / |C|` over modes with `k1, k2 ≤ kmax`.
pub fn estimate_mu(params: KernelParams, kmax: usize, data: &InitialData) -> Result<MuEstimate, ModesError> {
    if kmax == 0 {
        return Err(ModesError::InvalidData("kmax must be positive".into()));
    }
    let truncated = InitialData {
        a: data.a.truncated(kmax),
        b: data.b.truncated(kmax),
    };
    ModeSet::build(params, &truncated)?.estimate_mu()
}

/// Serialized form of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientRecord {
    pub k1: u32,
    pub k2: u32,
    #[serde(rename = "C_re")]
    pub c_re: f64,
    #[serde(rename = "C_im")]
    pub c_im: f64,
    #[serde(rename = "R")]
    pub r_coef: f64,
    pub re_omega: f64,
    pub im_omega: f64,
    pub r: f64,
}

impl From<&ModeRecord> for CoefficientRecord {
    fn from(rec: &ModeRecord) -> Self {
        Self {
            k1: rec.mode.k1,
            k2: rec.mode.k2,
            c_re: rec.coeffs.c.re,
            c_im: rec.coeffs.c.im,
            r_coef: rec.coeffs.r,
            re_omega: rec.triple.omega.re,
            im_omega: rec.triple.omega.im,
            r: rec.triple.r,
        }
    }
}
