mod common;

use std::f64::consts::PI;

use memwave::modes::{InitialData, ModeSet, SineCoefficients};
use memwave::observability::{
    boundary_lhs, boundary_parts, c0_of, c0_value, constant_s, rhs_weighted_sum, t0_of, thresholds,
    verify_observability, ObservabilityConfig, ObservabilityError,
};
use memwave::spectrum::KernelParams;
use rand::Rng;

fn set_for(beta: f64, data: &InitialData) -> ModeSet {
    ModeSet::build(KernelParams::limiting(beta).unwrap(), data).unwrap()
}

#[test]
fn exchange_inequality_on_scanned_pairs() {
    for k1 in 1..=64u64 {
        for k2 in 1..=64u64 {
            let norm = k1 * k1 + k2 * k2;
            if k2 >= k1 {
                assert!(2 * k2 * k2 >= norm);
            }
            assert!(k2 * k2 <= norm);
        }
    }
}

#[test]
fn additive_on_disjoint_rows_and_columns() {
    let mut rng = common::rng(31);
    let kmax = 4;
    let pick = |rows: &[(u32, u32)], rng: &mut rand_chacha::ChaCha8Rng| {
        let vals: Vec<(f64, f64)> = rows
            .iter()
            .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let a = SineCoefficients::from_fn(kmax, |i, j| {
            rows.iter().position(|&p| p == (i, j)).map_or(0.0, |n| vals[n].0)
        });
        let b = SineCoefficients::from_fn(kmax, |i, j| {
            rows.iter().position(|&p| p == (i, j)).map_or(0.0, |n| vals[n].1)
        });
        (a, b)
    };
    let first = [(1, 1), (2, 3)];
    let second = [(3, 2), (4, 4)];
    let (a1, b1) = pick(&first, &mut rng);
    let (a2, b2) = pick(&second, &mut rng);
    let sum = |x: &SineCoefficients, y: &SineCoefficients| {
        SineCoefficients::new(kmax, x.values().iter().zip(y.values()).map(|(p, q)| p + q).collect()).unwrap()
    };
    let d1 = InitialData::new(a1.clone(), b1.clone()).unwrap();
    let d2 = InitialData::new(a2.clone(), b2.clone()).unwrap();
    let both = InitialData::new(sum(&a1, &a2), sum(&b1, &b2)).unwrap();
    for beta in [0.0, 0.4] {
        let t = 13.0;
        let l1 = boundary_lhs(&set_for(beta, &d1), t);
        let l2 = boundary_lhs(&set_for(beta, &d2), t);
        let l12 = boundary_lhs(&set_for(beta, &both), t);
        assert!((l12 - l1 - l2).abs() <= 1e-12 * l12);
    }
}

#[test]
fn memoryless_decay_factor_is_two() {
    let mut rng = common::rng(32);
    let data = common::random_data(&mut rng, 6);
    let set = set_for(0.0, &data);
    let t = 9.0;
    let mut brute = 0.0;
    for rec in set.records() {
        assert_eq!(rec.triple.omega.im, 0.0);
        let factor = 1.0 + (-2.0 * rec.triple.omega.im * t).exp();
        assert_eq!(factor, 2.0);
        brute += rec.lambda.value() * rec.coeffs.c.norm_sqr() * factor;
    }
    assert!((rhs_weighted_sum(&set, t) - brute).abs() <= 1e-14 * brute);
}

#[test]
fn rhs_matches_brute_force() {
    let mut rng = common::rng(33);
    let data = common::random_data(&mut rng, 7);
    let set = set_for(0.7, &data);
    let t = 21.0;
    let mut brute = 0.0;
    for k1 in 1..=7 {
        for k2 in 1..=7 {
            let rec = set.get(k1, k2);
            let lam = f64::from(k1 * k1 + k2 * k2);
            let c = rec.coeffs.c;
            brute += lam * (c.re * c.re + c.im * c.im) * (1.0 + (-2.0 * rec.triple.omega.im * t).exp());
        }
    }
    assert!((rhs_weighted_sum(&set, t) - brute).abs() <= 1e-13 * brute);
}

#[test]
fn scaling_by_s_squared() {
    let mut rng = common::rng(34);
    let data = common::random_data(&mut rng, 5);
    let cfg = ObservabilityConfig::new(0.0, 50.0, 5).with_mu(1.0);
    let base = verify_observability(&cfg, &data).unwrap();
    for s in [2.0, 10.0] {
        let r = verify_observability(&cfg, &data.scaled(s)).unwrap();
        let s2 = s * s;
        assert!((r.lhs - s2 * base.lhs).abs() <= 1e-12 * r.lhs);
        assert!((r.rhs_sum - s2 * base.rhs_sum).abs() <= 1e-12 * r.rhs_sum);
        assert!((r.margin - s2 * base.margin).abs() <= 1e-10 * r.lhs);
        assert_eq!(r.verdict, base.verdict);
    }
}

/// `T/(π² + T²β²)` peaks at `T = π/β`, so for β > 0 monotonicity is only
/// guaranteed up to there.
#[test]
fn c0_increasing_above_threshold() {
    for (beta, mu) in [(0.0, 1.0), (0.01, 0.05), (0.03, 0.2)] {
        let s = constant_s(mu, 1.0).unwrap();
        let t0 = t0_of(beta, s).unwrap();
        assert!(t0.is_finite());
        let end = if beta > 0.0 {
            (10.0 * t0).min(PI / beta)
        } else {
            10.0 * t0
        };
        assert!(end > 1.01 * t0);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=2000 {
            let t = 1.01 * t0 + (end - 1.01 * t0) * f64::from(i) / 2000.0;
            let c = c0_value(t, beta, s).unwrap();
            assert!(c > prev, "beta={beta} T={t}");
            prev = c;
        }
    }
}

#[test]
fn c0_eventually_decreases_with_memory() {
    let s = constant_s(0.2, 1.0).unwrap();
    let beta = 0.03;
    let far = 10.0 * t0_of(beta, s).unwrap();
    assert!(far > PI / beta);
    assert!(c0_value(far, beta, s).unwrap() < c0_value(PI / beta, beta, s).unwrap());
}

#[test]
fn c0_positive_at_twice_threshold_with_estimated_mu() {
    let mut rng = common::rng(35);
    let data = common::random_data(&mut rng, 8);
    let set = set_for(0.05, &data);
    let mu = set.estimate_mu().unwrap().mu_hat;
    let s = constant_s(mu, 1.0).unwrap();
    let t0 = t0_of(0.05, s).unwrap();
    assert!(t0.is_finite(), "mu_hat={mu}");
    assert!(c0_of(2.0 * t0, 0.05, s).unwrap() > 0.0);
}

/// `∫₀ᵀ∫₀^π |u_y(t,x,0)|² dx dt` and `∫₀ᵀ∫₀^π |u_x(t,0,y)|² dy dt` by nested quadrature.
fn boundary_by_quadrature(set: &ModeSet, t: f64) -> (f64, f64) {
    let n = set.kmax() as u32;
    let top = set.records().iter().map(|r| r.triple.omega.re).fold(0.0, f64::max);
    let panels = (top * t / PI).ceil() as usize * 2 + 4;
    let edge = |swap: bool| {
        common::integrate(
            |s| {
                let amps: Vec<(u32, u32, f64)> = set
                    .records()
                    .iter()
                    .map(|r| (r.mode.k1, r.mode.k2, r.derivative(s, 0)))
                    .collect();
                common::integrate(
                    |x| {
                        let mut v = 0.0;
                        for &(k1, k2, amp) in &amps {
                            let (w, along) = if swap { (k1, k2) } else { (k2, k1) };
                            v += f64::from(w) * amp * (f64::from(along) * x).sin();
                        }
                        v * v
                    },
                    0.0,
                    PI,
                    2 * n as usize,
                    1e-13,
                )
            },
            0.0,
            t,
            panels,
            1e-10,
        )
    };
    (edge(false), edge(true))
}

#[test]
fn boundary_energy_against_quadrature() {
    let mut rng = common::rng(36);
    for beta in [0.0, 0.3, 1.0] {
        let data = common::random_data(&mut rng, 2);
        let set = set_for(beta, &data);
        let t = rng.random_range(3.0..12.0);
        let (bottom, left) = boundary_parts(&set, t);
        let (qb, ql) = boundary_by_quadrature(&set, t);
        assert!((bottom - qb).abs() <= 1e-7 * qb, "{bottom} vs {qb}");
        assert!((left - ql).abs() <= 1e-7 * ql, "{left} vs {ql}");
    }
}

#[test]
fn free_wave_verdict() {
    let mut rng = common::rng(37);
    let th = thresholds(0.0, 1.0, 1.0).unwrap();
    assert!(50.0 > th.t0);
    for _ in 0..5 {
        let data = common::random_data(&mut rng, 8);
        let cfg = ObservabilityConfig::new(0.0, 50.0, 8).with_mu(1.0);
        let r = verify_observability(&cfg, &data).unwrap();
        assert!(r.verdict && r.margin >= 0.0 && !r.below_threshold);
    }
}

#[test]
fn below_threshold_is_flagged() {
    let mut rng = common::rng(38);
    let data = common::random_data(&mut rng, 4);
    let cfg = ObservabilityConfig::new(0.0, 20.0, 4).with_mu(1.0);
    let r = verify_observability(&cfg, &data).unwrap();
    assert!(r.below_threshold && !r.verdict);
    assert!(r.c0 < 0.0);
}

#[test]
fn infeasible_beta_path() {
    let mut rng = common::rng(39);
    let data = common::random_data(&mut rng, 3);
    let cfg = ObservabilityConfig::new(0.2, 100.0, 3).with_mu(1.0);
    match verify_observability(&cfg, &data) {
        Err(ObservabilityError::InfeasibleParameters { report }) => {
            assert!(!report.verdict);
            assert!(report.t0.is_infinite());
            assert!(report.beta >= report.beta0);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn report_json_fields() {
    let mut rng = common::rng(40);
    let data = common::random_data(&mut rng, 3);
    let r = verify_observability(&ObservabilityConfig::new(0.0, 50.0, 3), &data).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    for key in [
        "lhs",
        "rhs_sum",
        "S",
        "c0",
        "T0",
        "beta0",
        "margin",
        "verdict",
        "below_threshold",
        "gamma",
        "mu",
        "mu_source",
        "beta",
        "T",
        "kmax",
        "theta",
        "constants",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["constants"], "proof-extracted");
    assert_eq!(v["mu_source"], "estimated");
}
