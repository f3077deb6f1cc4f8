//! Characteristic roots of the Fourier modes `sin(k1 x) sin(k2 y)`.
//!
//! Each mode amplitude obeys `x''' + η x'' + λ x' + (η − β) λ x = 0` with
//! `λ = k1² + k2²`, so its exponents are the roots of the cubic
//! `z³ + η z² + λ z + (η − β) λ`. The closed form parameterises them as
//! `i ω`, `−i conj(ω)` and a real root `r`.

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("kernel parameters out of range: beta={beta}, eta={eta} ({reason})")]
    InvalidKernel { beta: f64, eta: f64, reason: &'static str },
    #[error("mode index must be positive, got ({k1}, {k2})")]
    InvalidMode { k1: u32, k2: u32 },
    #[error("Laplace eigenvalue must be positive and finite, got {0}")]
    InvalidEigenvalue(f64),
    #[error("negative radicand {radicand} in Phi at lambda={lambda}")]
    NegativeRadicand { lambda: f64, radicand: f64 },
}

/// Memory kernel `k(t) = β e^{−ηt}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelParams {
    beta: f64,
    eta: f64,
}

impl KernelParams {
    /// Admissible kernel: `β ≥ 0` and `η ≥ 3β/2`.
    pub fn new(beta: f64, eta: f64) -> Result<Self, SpectrumError> {
        let params = Self::unconstrained(beta, eta)?;
        // A few ulps of slack so `(b, 1.5 * b)` typed as decimals is accepted.
        if eta < 1.5 * beta * (1.0 - 4.0 * f64::EPSILON) {
            return Err(SpectrumError::InvalidKernel {
                beta,
                eta,
                reason: "eta must be at least 3*beta/2",
            });
        }
        Ok(params)
    }

    /// The limiting regime `η = 3β/2`.
    pub fn limiting(beta: f64) -> Result<Self, SpectrumError> {
        Self::new(beta, 1.5 * beta)
    }

    /// Finite nonnegative parameters without the `η ≥ 3β/2` requirement.
    /// Only meant for probing the formulas outside their admissible range.
    pub fn unconstrained(beta: f64, eta: f64) -> Result<Self, SpectrumError> {
        if !(beta.is_finite() && eta.is_finite()) || beta < 0.0 || eta < 0.0 {
            return Err(SpectrumError::InvalidKernel {
                beta,
                eta,
                reason: "beta and eta must be finite and nonnegative",
            });
        }
        Ok(Self { beta, eta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// True iff `η == 3β/2` exactly.
    pub fn is_limiting(&self) -> bool {
        self.eta == 1.5 * self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ModeIndex {
    pub k1: u32,
    pub k2: u32,
}

impl ModeIndex {
    pub fn new(k1: u32, k2: u32) -> Result<Self, SpectrumError> {
        if k1 == 0 || k2 == 0 {
            return Err(SpectrumError::InvalidMode { k1, k2 });
        }
        Ok(Self { k1, k2 })
    }
}

/// Dirichlet Laplacian eigenvalue on `(0, π)²`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct LaplaceEigenvalue(f64);

impl LaplaceEigenvalue {
    pub fn new(lambda: f64) -> Result<Self, SpectrumError> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(SpectrumError::InvalidEigenvalue(lambda));
        }
        Ok(Self(lambda))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<ModeIndex> for LaplaceEigenvalue {
    fn from(mode: ModeIndex) -> Self {
        lambda_of(mode)
    }
}

pub fn lambda_of(mode: ModeIndex) -> LaplaceEigenvalue {
    let (k1, k2) = (f64::from(mode.k1), f64::from(mode.k2));
    LaplaceEigenvalue(k1 * k1 + k2 * k2)
}

/// Closed-form roots of one mode.
///
/// The exponents are `i ω`, `−i conj(ω)` and `r`; `Im ω` is the decay rate of
/// the oscillating pair and `Re ω` its angular frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralTriple {
    pub omega: Complex64,
    pub r: f64,
    pub phi: f64,
    pub psi: f64,
    pub lam_minus: f64,
    pub lam_plus: f64,
}

impl SpectralTriple {
    /// `[i ω, −i conj(ω), r]`.
    pub fn exponents(&self) -> [Complex64; 3] {
        let i = Complex64::i();
        [i * self.omega, -i * self.omega.conj(), Complex64::new(self.r, 0.0)]
    }
}

/// `(Φ, Ψ)` for a general admissible kernel.
pub fn phi_psi(params: KernelParams, lam: LaplaceEigenvalue) -> Result<(f64, f64), SpectrumError> {
    let (beta, eta, lambda) = (params.beta, params.eta, lam.0);
    let radicand = 1.0
        + (2.0 * eta * eta + 6.75 * beta * beta - 9.0 * eta * beta) / lambda
        + eta.powi(3) * (eta - beta) / (lambda * lambda);
    if radicand < 0.0 {
        return Err(SpectrumError::NegativeRadicand { lambda, radicand });
    }
    let psi = eta.powi(3) / (3.0 * (3.0 * lambda.powi(3)).sqrt()) + (eta - 1.5 * beta) * 3f64.sqrt() / lambda.sqrt();
    Ok((radicand.sqrt(), psi))
}

/// `(Φ, Ψ)` specialised to `η = 3β/2`.
pub fn phi_psi_limiting(beta: f64, lam: LaplaceEigenvalue) -> (f64, f64) {
    let lambda = lam.0;
    let b2 = beta * beta;
    let phi = (1.0 - 2.25 * b2 / lambda + 1.6875 * b2 * b2 / (lambda * lambda)).sqrt();
    let psi = 3.0 * 3f64.sqrt() / 8.0 * b2 * beta / lambda.powi(3).sqrt();
    (phi, psi)
}

/// Closed-form triple from `Λ± = cbrt(Φ ± Ψ)/2`.
///
/// `B = cbrt(Φ−Ψ)` is taken as `(1 − η²/(3λ))/A` with `A = cbrt(Φ+Ψ)`, and
/// `Λ⁻ − Λ⁺` as `−Ψ / (A² + AB + B²)`; neither subtracts nearby values.
pub fn characteristic_roots_closed(
    params: KernelParams,
    lam: LaplaceEigenvalue,
) -> Result<SpectralTriple, SpectrumError> {
    let (phi, psi) = phi_psi(params, lam)?;
    let upper = (phi + psi).cbrt();
    // Φ² − Ψ² = (1 − η²/(3λ))³, so cbrt(Φ − Ψ) needs no subtraction.
    let lower = if upper == 0.0 {
        (phi - psi).cbrt()
    } else {
        (1.0 - params.eta * params.eta / (3.0 * lam.0)) / upper
    };
    let lam_plus = 0.5 * upper;
    let lam_minus = 0.5 * lower;
    let denom = upper * upper + upper * lower + lower * lower;
    let minus_diff = if psi == 0.0 { 0.0 } else { -0.5 * psi / denom };

    let sqrt_lambda = lam.0.sqrt();
    let sqrt3 = 3f64.sqrt();
    let eta = params.eta;
    let re = sqrt_lambda * (lam_minus + lam_plus);
    let im = sqrt_lambda * (2.0 * minus_diff) / sqrt3 + eta / 3.0;
    let r = 2.0 * sqrt_lambda * (2.0 * minus_diff) / sqrt3 - eta / 3.0;
    Ok(SpectralTriple {
        omega: Complex64::new(re, im),
        r,
        phi,
        psi,
        lam_minus,
        lam_plus,
    })
}

/// Roots of `z³ + η z² + λ z + (η − β) λ` as eigenvalues of the companion
/// matrix, ordered `[Im > 0, Im < 0, real]`.
pub fn characteristic_roots_oracle(params: KernelParams, lam: LaplaceEigenvalue) -> [Complex64; 3] {
    let lambda = lam.0;
    let a2 = params.eta;
    let a1 = lambda;
    let a0 = (params.eta - params.beta) * lambda;
    #[rustfmt::skip]
    let companion = Matrix3::new(
        0.0, 0.0, -a0,
        1.0, 0.0, -a1,
        0.0, 1.0, -a2,
    );
    let eig = companion.complex_eigenvalues();
    let mut roots = [eig[0], eig[1], eig[2]];
    // Real root: smallest |Im|. The remaining two ordered by sign of Im.
    let real_idx = (0..3)
        .min_by(|&i, &j| roots[i].im.abs().total_cmp(&roots[j].im.abs()))
        .unwrap_or(2);
    roots.swap(real_idx, 2);
    if roots[0].im < roots[1].im {
        roots.swap(0, 1);
    }
    roots
}

/// `|Σz + η|`, `|Σ z_i z_j − λ|`, `|Π z + (η − β) λ|`.
pub fn vieta_residuals(triple: &SpectralTriple, params: KernelParams, lam: LaplaceEigenvalue) -> [f64; 3] {
    let [z1, z2, z3] = triple.exponents();
    let lambda = lam.0;
    [
        (z1 + z2 + z3 + params.eta).norm(),
        (z1 * z2 + z1 * z3 + z2 * z3 - lambda).norm(),
        (z1 * z2 * z3 + (params.eta - params.beta) * lambda).norm(),
    ]
}

/// Largest relative mismatch `|a − b| / max(1, |b|)` after greedily pairing
/// each root of `a` with its nearest unused root of `b`.
pub fn max_root_mismatch(a: &[Complex64; 3], b: &[Complex64; 3]) -> f64 {
    let mut used = [false; 3];
    let mut worst = 0.0f64;
    for za in a {
        let (idx, dist) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, zb)| (j, (za - zb).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("three candidates");
        used[idx] = true;
        worst = worst.max(dist / b[idx].norm().max(1.0));
    }
    worst
}
