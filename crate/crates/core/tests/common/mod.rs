//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use memwave::ingham::ExponentFamily;
use memwave::modes::{InitialData, SineCoefficients};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One G7/K15 panel: (Kronrod estimate, |K15 − G7|, ∫|f| estimate).
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = h * XGK[j];
        let (l, r) = (f(c - dx), f(c + dx));
        k += WGK[j] * (l + r);
        abs += WGK[j] * (l.abs() + r.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (l + r);
        }
    }
    (k * h, ((k - g) * h).abs(), abs * h.abs())
}

fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (k, err, abs) = gk15(f, a, b);
    // Below the rounding floor further bisection cannot help.
    if err <= tol || err <= 50.0 * f64::EPSILON * abs || depth == 0 {
        return k;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, tol / 2.0, depth - 1) + adapt(f, m, b, tol / 2.0, depth - 1)
}

/// Adaptive Gauss–Kronrod quadrature over `panels` equal starting panels,
/// absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, tol: f64) -> f64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == panels { b } else { lo + h };
            adapt(&f, lo, hi, tol / panels as f64, 30)
        })
        .sum()
}

/// Classical RK4 for `x''' = −η x'' − λ x' − λ(η−β) x` from
/// `(x, x', x'') = (a, b, −λa)`; returns `x(t)`.
pub fn rk4_mode(beta: f64, eta: f64, lambda: f64, a: f64, b: f64, t: f64, steps: usize) -> f64 {
    let rhs = |s: [f64; 3]| -> [f64; 3] { [s[1], s[2], -eta * s[2] - lambda * s[1] - lambda * (eta - beta) * s[0]] };
    let h = t / steps as f64;
    let mut s = [a, b, -lambda * a];
    let add = |s: [f64; 3], k: [f64; 3], f: f64| [s[0] + f * k[0], s[1] + f * k[1], s[2] + f * k[2]];
    for _ in 0..steps {
        let k1 = rhs(s);
        let k2 = rhs(add(s, k1, h / 2.0));
        let k3 = rhs(add(s, k2, h / 2.0));
        let k4 = rhs(add(s, k3, h));
        for i in 0..3 {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    s[0]
}

/// Random sine-polynomial data with coefficients in [−1, 1].
pub fn random_data(rng: &mut ChaCha8Rng, kmax: usize) -> InitialData {
    let a: Vec<f64> = (0..kmax * kmax).map(|_| rng.random_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..kmax * kmax).map(|_| rng.random_range(-1.0..1.0)).collect();
    InitialData::new(
        SineCoefficients::new(kmax, a).unwrap(),
        SineCoefficients::new(kmax, b).unwrap(),
    )
    .unwrap()
}

/// `Σ a_k sin(k1 x) sin(k2 y)`.
pub fn sine_series(c: &SineCoefficients, x: f64, y: f64) -> f64 {
    let n = c.kmax() as u32;
    let mut s = 0.0;
    for k1 in 1..=n {
        for k2 in 1..=n {
            s += c.get(k1, k2) * (f64::from(k1) * x).sin() * (f64::from(k2) * y).sin();
        }
    }
    s
}

/// Knobs for [`random_family`].
#[derive(Debug, Clone, Copy)]
pub struct FamilyShape {
    pub len: usize,
    pub gamma: f64,
    pub tau: usize,
    pub theta: f64,
    pub mu: f64,
    pub im_max: f64,
}

/// Admissible family by construction: consecutive real frequencies are
/// spaced by `γ(1 + u_n)`, `u_n ∈ [0, 0.2]`, so both separation and growth
/// hold for every pair; `r_n ≤ −Im ω_n`; `|R_n| ≤ μ|C_n|/n^θ`.
pub fn random_family(rng: &mut ChaCha8Rng, shape: FamilyShape) -> ExponentFamily {
    let mut re = 0.0;
    let mut omegas = Vec::with_capacity(shape.len);
    let mut rates = Vec::with_capacity(shape.len);
    let mut cs = Vec::with_capacity(shape.len);
    let mut rs = Vec::with_capacity(shape.len);
    for n in 1..=shape.len {
        re += shape.gamma * (1.0 + rng.random_range(0.0..0.2));
        let im = if shape.im_max > 0.0 {
            rng.random_range(0.0..shape.im_max)
        } else {
            0.0
        };
        omegas.push(Complex64::new(re, im));
        rates.push(-im - rng.random_range(0.0..2.0));
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let cap = shape.mu * c.norm() / (n as f64).powf(shape.theta);
        rs.push(cap * rng.random_range(-1.0..1.0));
        cs.push(c);
    }
    ExponentFamily::new(omegas, rates, cs, rs, shape.gamma, shape.tau, shape.theta, shape.mu).unwrap()
}
