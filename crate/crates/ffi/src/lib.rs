//! C ABI over `memwave`.
//!
//! Every function returns an [`MwStatus`]; results go through out-pointers.
//! On failure the out-pointer is left untouched unless documented otherwise,
//! and [`mw_last_error_message`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use memwave::gap_analysis::{gamma_of_beta, GapError};
use memwave::ingham::{evaluate_bound, ExponentFamily, InghamError};
use memwave::modes::{evaluate_solution, InitialData, ModeSet, ModesError, SineCoefficients};
use memwave::observability::{
    boundary_lhs, c0_value, rhs_weighted_sum, thresholds, verify_observability, MuSource, ObservabilityConfig,
    ObservabilityError, ObservabilityReport,
};
use memwave::spectrum::{characteristic_roots_closed, KernelParams, LaplaceEigenvalue, SpectrumError};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    HypothesisViolated = 4,
    CheckFailed = 5,
    Infeasible = 6,
    NotPositive = 7,
    Panic = 8,
}

/// Roots of one mode: exponents `i ω`, `−i conj(ω)` and `r`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MwSpectralTriple {
    pub omega_re: f64,
    pub omega_im: f64,
    pub r: f64,
    pub phi: f64,
    pub psi: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MwThresholds {
    pub beta0: f64,
    /// `INFINITY` when no horizon suffices.
    pub t0: f64,
    pub s: f64,
    pub gamma: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MwMuEstimate {
    pub mu_hat: f64,
    pub k1: u32,
    pub k2: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MwObservabilityReport {
    pub lhs: f64,
    pub rhs_sum: f64,
    pub s: f64,
    pub c0: f64,
    pub t0: f64,
    pub beta0: f64,
    pub margin: f64,
    pub gamma: f64,
    pub mu: f64,
    pub beta: f64,
    pub horizon: f64,
    pub theta: f64,
    pub kmax: usize,
    pub verdict: bool,
    pub below_threshold: bool,
    pub mu_estimated: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MwInghamReport {
    pub lhs: f64,
    pub rhs: f64,
    pub s: f64,
    pub margin: f64,
    /// Number of violated hypotheses.
    pub violations: usize,
}

/// Opaque solution handle built from sine coefficients.
pub struct MwModeSet {
    inner: ModeSet,
}

struct Failure {
    status: MwStatus,
    message: String,
}

impl Failure {
    fn new(status: MwStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

fn spectrum_status(e: &SpectrumError) -> MwStatus {
    match e {
        SpectrumError::NegativeRadicand { .. } => MwStatus::Numerical,
        _ => MwStatus::InvalidArgument,
    }
}

fn gap_status(e: &GapError) -> MwStatus {
    match e {
        GapError::AuditFailure { .. } | GapError::MonotonicityFailure { .. } | GapError::PositivityFailure { .. } => {
            MwStatus::CheckFailed
        }
        GapError::NegativeRadicand { .. } => MwStatus::Numerical,
        GapError::Spectrum(inner) => spectrum_status(inner),
        _ => MwStatus::InvalidArgument,
    }
}

fn ingham_status(e: &InghamError) -> MwStatus {
    match e {
        InghamError::HypothesisError(_) => MwStatus::HypothesisViolated,
        InghamError::BoundViolated { .. } | InghamError::KernelBoundViolated { .. } => MwStatus::CheckFailed,
        InghamError::PoleError { .. } => MwStatus::Numerical,
        _ => MwStatus::InvalidArgument,
    }
}

fn modes_status(e: &ModesError) -> MwStatus {
    match e {
        ModesError::DegenerateExponents(..) | ModesError::RealityViolation(_) | ModesError::DegenerateMode { .. } => {
            MwStatus::Numerical
        }
        ModesError::Spectrum(inner) => spectrum_status(inner),
        _ => MwStatus::InvalidArgument,
    }
}

fn observability_status(e: &ObservabilityError) -> MwStatus {
    match e {
        ObservabilityError::InvalidConfig(_) => MwStatus::InvalidArgument,
        ObservabilityError::NotPositive { .. } => MwStatus::NotPositive,
        ObservabilityError::InfeasibleParameters { .. } => MwStatus::Infeasible,
        ObservabilityError::Spectrum(inner) => spectrum_status(inner),
        ObservabilityError::Gap(inner) => gap_status(inner),
        ObservabilityError::Ingham(inner) => ingham_status(inner),
        ObservabilityError::Modes(inner) => modes_status(inner),
    }
}

macro_rules! impl_from {
    ($($ty:ty => $f:ident),* $(,)?) => {
        $(impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                Failure::new($f(&e), e.to_string())
            }
        })*
    };
}

impl_from!(
    SpectrumError => spectrum_status,
    GapError => gap_status,
    InghamError => ingham_status,
    ModesError => modes_status,
    ObservabilityError => observability_status,
);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MwStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            MwStatus::Ok
        }
        Ok(Err(f)) => {
            set_last_error(&f.message);
            f.status
        }
        Err(_) => {
            set_last_error("internal panic");
            MwStatus::Panic
        }
    }
}

fn out_ref<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    // SAFETY: caller guarantees a non-null `p` points to writable storage for `T`.
    unsafe { p.as_mut() }.ok_or_else(|| Failure::new(MwStatus::NullPointer, format!("{name} is null")))
}

fn in_slice<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], Failure> {
    if p.is_null() {
        return Err(Failure::new(MwStatus::NullPointer, format!("{name} is null")));
    }
    // SAFETY: caller guarantees `p` points to `len` initialised elements.
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

fn handle<'a>(set: *const MwModeSet) -> Result<&'a ModeSet, Failure> {
    // SAFETY: a non-null handle was produced by `mw_modeset_new` and not yet freed.
    unsafe { set.as_ref() }
        .map(|s| &s.inner)
        .ok_or_else(|| Failure::new(MwStatus::NullPointer, "mode set is null"))
}

fn initial_data(a: *const f64, b: *const f64, kmax: usize) -> Result<InitialData, Failure> {
    if kmax == 0 {
        return Err(Failure::new(MwStatus::InvalidArgument, "kmax must be positive"));
    }
    let len = kmax
        .checked_mul(kmax)
        .ok_or_else(|| Failure::new(MwStatus::InvalidArgument, "kmax too large"))?;
    let a = SineCoefficients::new(kmax, in_slice(a, len, "a")?.to_vec())?;
    let b = SineCoefficients::new(kmax, in_slice(b, len, "b")?.to_vec())?;
    Ok(InitialData::new(a, b)?)
}

fn report_out(r: &ObservabilityReport) -> MwObservabilityReport {
    MwObservabilityReport {
        lhs: r.lhs,
        rhs_sum: r.rhs_sum,
        s: r.s,
        c0: r.c0,
        t0: r.t0,
        beta0: r.beta0,
        margin: r.margin,
        gamma: r.gamma,
        mu: r.mu,
        beta: r.beta,
        horizon: r.horizon,
        theta: r.theta,
        kmax: r.kmax,
        verdict: r.verdict,
        below_threshold: r.below_threshold,
        mu_estimated: r.mu_source == MuSource::Estimated,
    }
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn mw_status_message(status: MwStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        MwStatus::Ok => b"ok\0",
        MwStatus::NullPointer => b"null pointer argument\0",
        MwStatus::InvalidArgument => b"invalid argument\0",
        MwStatus::Numerical => b"numerical failure\0",
        MwStatus::HypothesisViolated => b"hypothesis violated\0",
        MwStatus::CheckFailed => b"verification check failed\0",
        MwStatus::Infeasible => b"parameters infeasible\0",
        MwStatus::NotPositive => b"constant not positive\0",
        MwStatus::Panic => b"internal panic\0",
    };
    text.as_ptr().cast()
}

/// Message for the last failing call on this thread; empty after success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn mw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Closed-form roots of `z³ + η z² + λ z + (η − β) λ`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mw_characteristic_roots(
    beta: f64,
    eta: f64,
    lambda: f64,
    out: *mut MwSpectralTriple,
) -> MwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let params = KernelParams::new(beta, eta)?;
        let t = characteristic_roots_closed(params, LaplaceEigenvalue::new(lambda)?)?;
        *out = MwSpectralTriple {
            omega_re: t.omega.re,
            omega_im: t.omega.im,
            r: t.r,
            phi: t.phi,
            psi: t.psi,
        };
        Ok(())
    })
}

/// Gap constant `γ(β)` for `β ∈ [0, 2/√3]`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mw_gamma(beta: f64, out: *mut f64) -> MwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = gamma_of_beta(beta)?.gamma;
        Ok(())
    })
}

/// `β0`, `T0`, `S` and `γ(β)` for the given kernel amplitude and coupling.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mw_thresholds(beta: f64, mu: f64, theta: f64, out: *mut MwThresholds) -> MwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let th = thresholds(beta, mu, theta)?;
        *out = MwThresholds {
            beta0: th.beta0,
            t0: th.t0,
            s: th.s,
            gamma: th.gamma,
        };
        Ok(())
    })
}

/// Observability constant `c0(T, β, S)`; may be negative below the threshold.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mw_c0(horizon: f64, beta: f64, s: f64, out: *mut f64) -> MwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if !(horizon.is_finite() && horizon > 0.0 && s.is_finite() && s >= 0.0) {
            return Err(Failure::new(
                MwStatus::InvalidArgument,
                format!("need T > 0 and S >= 0, got T={horizon}, S={s}"),
            ));
        }
        *out = c0_value(horizon, beta, s)?;
        Ok(())
    })
}

/// Build a mode set from `kmax × kmax` sine coefficients of `u(0)` and
/// `u_t(0)`, row-major in `k1`. Free the handle with [`mw_modeset_free`].
///
/// # Safety
/// `a` and `b` must point to `kmax * kmax` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mw_modeset_new(
    beta: f64,
    eta: f64,
    kmax: usize,
    a: *const f64,
    b: *const f64,
    out: *mut *mut MwModeSet,
) -> MwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let data = initial_data(a, b, kmax)?;
        let inner = ModeSet::build(KernelParams::new(beta, eta)?, &data)?;
        *out = Box::into_raw(Box::new(MwModeSet { inner }));
        Ok(())
    })
}

/// Release a handle; null is ignored.
///
/// # Safety
/// `set` must be null or come from [`mw_modeset_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mw_modeset_free(set: *mut MwModeSet) {
    if !set.is_null() {
        // SAFETY: ownership returns from the caller, per the contract above.
        drop(unsafe { Box::from_raw(set) });
    }
}

/// Truncated solution `u(t, x, y)`.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mw_modeset_evaluate(set: *const MwModeSet, t: f64, x: f64, y: f64, out: *mut f64) -> MwStatus {
    guard(|| {
        let set = handle(set)?;
        let out = out_ref(out, "out")?;
        *out = evaluate_solution(set, t, x, y);
        Ok(())
    })
}

/// Boundary-trace energy over the bottom and left edges on `[0, T]`.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mw_modeset_boundary_lhs(set: *const MwModeSet, horizon: f64, out: *mut f64) -> MwStatus {
    guard(|| {
        let set = handle(set)?;
        let out = out_ref(out, "out")?;
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Failure::new(
                MwStatus::InvalidArgument,
                format!("T must be positive, got {horizon}"),
            ));
        }
        *out = boundary_lhs(set, horizon);
        Ok(())
    })
}

/// `Σ λ |C|² (1 + e^{−2 Im ω T})`.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mw_modeset_rhs_sum(set: *const MwModeSet, horizon: f64, out: *mut f64) -> MwStatus {
    guard(|| {
        let set = handle(set)?;
        let out = out_ref(out, "out")?;
        *out = rhs_weighted_sum(set, horizon);
        Ok(())
    })
}

/// Empirical coupling constant `max |R| √λ / |C|`.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mw_modeset_estimate_mu(set: *const MwModeSet, out: *mut MwMuEstimate) -> MwStatus {
    guard(|| {
        let set = handle(set)?;
        let out = out_ref(out, "out")?;
        let est = set.estimate_mu()?;
        *out = MwMuEstimate {
            mu_hat: est.mu_hat,
            k1: est.argmax_mode.k1,
            k2: est.argmax_mode.k2,
        };
        Ok(())
    })
}

/// Evaluate the observability inequality in the limiting regime.
///
/// `a` and `b` hold `data_kmax × data_kmax` coefficients; the check uses
/// modes up to `kmax`. A negative or NaN `mu` requests the empirical
/// estimate. On [`MwStatus::Infeasible`] `out` is still filled.
///
/// # Safety
/// `a` and `b` must point to `data_kmax * data_kmax` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mw_observe(
    beta: f64,
    horizon: f64,
    kmax: usize,
    data_kmax: usize,
    a: *const f64,
    b: *const f64,
    mu: f64,
    theta: f64,
    out: *mut MwObservabilityReport,
) -> MwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let data = initial_data(a, b, data_kmax)?;
        let mut config = ObservabilityConfig::new(beta, horizon, kmax).with_theta(theta);
        if mu >= 0.0 {
            config = config.with_mu(mu);
        }
        match verify_observability(&config, &data) {
            Ok(report) => {
                *out = report_out(&report);
                Ok(())
            }
            Err(ObservabilityError::InfeasibleParameters { report }) => {
                *out = report_out(&report);
                Err(Failure::new(
                    MwStatus::Infeasible,
                    format!("beta={} is not below beta0={}", report.beta, report.beta0),
                ))
            }
            Err(e) => Err(e.into()),
        }
    })
}

/// Both sides of the Ingham-type lower bound for a family of `len` terms.
///
/// `out` is filled whenever the inputs form a family; the status is then
/// [`MwStatus::HypothesisViolated`] if any hypothesis fails and
/// [`MwStatus::CheckFailed`] if the bound itself fails.
///
/// # Safety
/// Each array must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mw_ingham_bound(
    omega_re: *const f64,
    omega_im: *const f64,
    r: *const f64,
    c_re: *const f64,
    c_im: *const f64,
    big_r: *const f64,
    len: usize,
    gamma: f64,
    tau: usize,
    theta: f64,
    mu: f64,
    horizon: f64,
    out: *mut MwInghamReport,
) -> MwStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let complex = |re: *const f64, im: *const f64, name: &str| -> Result<Vec<Complex64>, Failure> {
            let re = in_slice(re, len, &format!("{name}_re"))?;
            let im = in_slice(im, len, &format!("{name}_im"))?;
            Ok(re.iter().zip(im).map(|(&x, &y)| Complex64::new(x, y)).collect())
        };
        let family = ExponentFamily::new(
            complex(omega_re, omega_im, "omega")?,
            in_slice(r, len, "r")?.to_vec(),
            complex(c_re, c_im, "c")?,
            in_slice(big_r, len, "R")?.to_vec(),
            gamma,
            tau,
            theta,
            mu,
        )?;
        let report = evaluate_bound(&family, horizon)?;
        *out = MwInghamReport {
            lhs: report.lhs,
            rhs: report.rhs,
            s: report.s,
            margin: report.margin,
            violations: report.violations.len(),
        };
        if !report.violations.is_empty() {
            return Err(InghamError::HypothesisError(report.violations).into());
        }
        if !report.holds() {
            return Err(InghamError::BoundViolated {
                lhs: report.lhs,
                rhs: report.rhs,
            }
            .into());
        }
        Ok(())
    })
}
