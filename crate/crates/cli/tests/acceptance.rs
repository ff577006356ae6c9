//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.

use std::f64::consts::PI;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};
use vortex_cli::{run_scenario, simulate, ScenarioConfig};
use vortex_core::analysis::fill::fill_time;
use vortex_core::analytic::helical_analytic_field;
use vortex_core::beams::sample_lg_field;
use vortex_core::{
    center_value_flat, diffuse_direct, diffuse_spectral, eval_flat_analytic, eval_helical_analytic,
    fit_diffusion, make_flat_hole_field, make_lg_field, normalize_profiles, radial_profile,
    scaling_factor, winding_number, Complex64, ComplexField2D, FlatHoleSpec, GridSpec, LGModeSpec,
    MediumParams, RadialProfile, DEFAULT_FILL_THRESHOLD,
};

const W0: f64 = 670e-6;
const D: f64 = 1.1e-3;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn medium(d: f64) -> MediumParams {
    MediumParams::diffusion_only(d).unwrap()
}

/// Largest per-sample relative error over samples whose reference amplitude
/// exceeds `floor` of the reference peak.
fn max_rel_error(numeric: &ComplexField2D, reference: &ComplexField2D, floor: f64) -> f64 {
    let cut = floor * reference.max_amplitude();
    numeric
        .values()
        .iter()
        .zip(reference.values())
        .filter(|(_, r)| r.norm() > cut)
        .map(|(n, r)| (n - r).norm() / r.norm())
        .fold(0.0, f64::max)
}

fn ac1_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let grid = GridSpec::square(64, W0 / 12.0).unwrap();
    let field = sample_lg_field(&LGModeSpec::new(1, W0, 1.0).unwrap(), &grid).unwrap();
    let a = diffuse_spectral(&field, &medium(D), 30e-6).unwrap();
    let b = diffuse_direct(&field, &medium(D), 30e-6).unwrap();
    let err = max_rel_error(&a, &b, 1e-3);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        err <= 1e-6 && secs < 30.0,
        format!("max rel err {err:.2e} (tol 1e-6), {secs:.2} s (limit 30 s)"),
    )
}

fn ac2_helical_closed_form() -> Outcome {
    let grid = GridSpec::square(256, W0 / 20.0).unwrap();
    let spec = LGModeSpec::new(1, W0, 1.0).unwrap();
    let t = 110e-6;
    let numeric = diffuse_spectral(&make_lg_field(&spec, &grid).unwrap(), &medium(D), t).unwrap();
    let exact = helical_analytic_field(&spec, &medium(D), t, &grid).unwrap();
    let err = max_rel_error(&numeric, &exact, 1e-3);
    let s = scaling_factor(W0, D, t);
    let ring = s.diffused_waist(W0) / 2f64.sqrt();
    let profile = radial_profile(&numeric, (0.0, 0.0), 64).unwrap();
    let peak = profile.peak_radius().unwrap();
    let pass = err <= 1e-4
        && (s.value() - 2.0782).abs() < 5e-5
        && (peak - ring).abs() <= profile.bin_width;
    outcome(
        pass,
        format!(
            "max rel err {err:.2e} (tol 1e-4), s = {:.4}, ring peak {:.1} um vs {:.1} um (bin {:.1} um)",
            s.value(),
            peak * 1e6,
            ring * 1e6,
            profile.bin_width * 1e6
        ),
    )
}

fn ac3_flat_closed_form() -> Outcome {
    let spec = FlatHoleSpec::new(W0, W0 / 2.0, 1.0).unwrap();
    let t = 0.6 * W0 * W0 / (4.0 * D);
    let unit = (2.0 / (PI * W0 * W0)).sqrt();
    let quad = eval_flat_analytic(&spec, &medium(D), t, 0.0).unwrap();
    let closed = center_value_flat(&spec, &medium(D), t).unwrap();
    let center_err = (quad / closed - 1.0).abs();
    let center_ok = center_err <= 1e-8 && (closed / unit - 0.3209).abs() < 5e-5;

    // radial curve along +x against the direct solver on the sampled stop
    let n = 512;
    let grid = GridSpec::square(n, W0 / 40.0).unwrap();
    let field = make_flat_hole_field(&spec, &grid).unwrap();
    let direct = diffuse_direct(&field, &medium(D), t).unwrap();
    let peak = direct.max_amplitude();
    let mut curve_err: f64 = 0.0;
    for ix in n / 2..n {
        let r = grid.x(ix);
        let v = direct.at(ix, n / 2).norm();
        if v > 1e-3 * peak {
            let exact = eval_flat_analytic(&spec, &medium(D), t, r).unwrap();
            curve_err = curve_err.max((v - exact).abs() / exact);
        }
    }
    outcome(
        center_ok && curve_err <= 1e-4,
        format!(
            "center {:.5} (rel err {center_err:.1e}, tol 1e-8); radial curve vs direct max rel err {curve_err:.2e} (tol 1e-4)",
            closed / unit
        ),
    )
}

fn ac4_topological_stability() -> Outcome {
    let helical = simulate(&ScenarioConfig::standard_helical(110e-6))
        .unwrap()
        .summary;
    let flat = simulate(&ScenarioConfig::standard_flat(10e-6))
        .unwrap()
        .summary;
    let (w, dark) = (helical.winding, helical.fill_metric.unwrap());
    let bright = flat.fill_metric.unwrap();
    let pass = w == Some(1) && dark <= 1e-3 && bright >= 100.0 * dark;
    outcome(
        pass,
        format!(
            "helical winding {w:?}, fill {dark:.2e} (<= 1e-3); flat fill {bright:.4} ({:.1e}x)",
            bright / dark
        ),
    )
}

fn ac5_fill_time_law() -> Outcome {
    let spec = FlatHoleSpec::new(W0, W0 / 2.0, 1.0).unwrap();
    let t = fill_time(&spec, &medium(D), DEFAULT_FILL_THRESHOLD).unwrap();
    let want = 0.15 * W0 * W0 / D;
    let mut worst: f64 = 0.0;
    for d in [5.5e-4, 1.1e-3, 2.2e-3] {
        let td = fill_time(&spec, &medium(d), DEFAULT_FILL_THRESHOLD).unwrap();
        worst = worst.max((td * d / (t * D) - 1.0).abs());
    }
    let pass = (t - want).abs() <= 0.1e-6 && worst < 1e-3;
    outcome(
        pass,
        format!(
            "fill time {:.3} us vs {:.3} us (tol 0.1 us); D-scaling max rel dev {worst:.1e} (tol 1e-3)",
            t * 1e6,
            want * 1e6
        ),
    )
}

/// Closed-form helical intensity at bin centers, 64 bins out to 4·w0.
fn closed_form_profiles(spec: &LGModeSpec, times: &[f64]) -> Vec<(f64, RadialProfile)> {
    let width = 4.0 * W0 / 64.0;
    let centers: Vec<f64> = (0..64).map(|k| (k as f64 + 0.5) * width).collect();
    times
        .iter()
        .map(|&t| {
            let intensity = centers
                .iter()
                .map(|&r| eval_helical_analytic(spec, &medium(D), t, r, 0.0).norm_sqr())
                .collect();
            let p = RadialProfile {
                bin_centers: centers.clone(),
                intensity,
                counts: vec![1; 64],
                bin_width: width,
            };
            (t, p)
        })
        .collect()
}

fn ac6_fit_recovery() -> Outcome {
    let spec = LGModeSpec::new(1, W0, 1.0).unwrap();
    let clean = closed_form_profiles(&spec, &[30e-6, 70e-6, 110e-6]);
    let bracket = (1e-4, 1e-2);
    let noiseless = fit_diffusion(&clean, &spec, bracket).unwrap().d_hat;
    let noise = Normal::new(0.0, 0.01).unwrap();
    let mut estimates: Vec<f64> = (0..20u64)
        .map(|seed| {
            let mut rng = StdRng::seed_from_u64(seed);
            let noisy: Vec<(f64, RadialProfile)> = clean
                .iter()
                .map(|(t, p)| {
                    let mut q = p.clone();
                    for i in &mut q.intensity {
                        *i *= 1.0 + noise.sample(&mut rng);
                    }
                    (*t, q)
                })
                .collect();
            fit_diffusion(&noisy, &spec, bracket).unwrap().d_hat
        })
        .collect();
    estimates.sort_by(f64::total_cmp);
    let median = 0.5 * (estimates[9] + estimates[10]);
    let e0 = (noiseless / D - 1.0).abs();
    let e1 = (median / D - 1.0).abs();
    outcome(
        e0 <= 5e-3 && e1 <= 5e-2,
        format!(
            "noiseless rel err {e0:.1e} (tol 5e-3); 1% noise median rel err {e1:.1e} (tol 5e-2)"
        ),
    )
}

fn ac7_decay_bookkeeping() -> Outcome {
    let mut on = ScenarioConfig::standard_helical(30e-6);
    on.medium.gamma = 2e4;
    let mut off = on.clone();
    off.medium.gamma = 0.0;
    let a = simulate(&on).unwrap().summary.total_power_out;
    let b = simulate(&off).unwrap().summary.total_power_out;
    let ratio = a / b;
    let want = (-0.6f64).exp();
    outcome(
        (ratio - want).abs() <= 1e-9,
        format!("power ratio {ratio:.12} vs exp(-0.6) = {want:.12}"),
    )
}

fn ac8_property_suite() -> Outcome {
    let grid = GridSpec::square(64, W0 / 8.0).unwrap();
    let lg = |m: u32| make_lg_field(&LGModeSpec::new(m, W0, 1.0).unwrap(), &grid).unwrap();
    let close = |a: &ComplexField2D, b: &ComplexField2D, tol: f64| {
        let scale = a.max_amplitude().max(b.max_amplitude());
        a.values()
            .iter()
            .zip(b.values())
            .all(|(x, y)| (x - y).norm() <= tol * scale)
    };
    let mut runner = TestRunner::new(Config {
        cases: 32,
        failure_persistence: None,
        ..Config::default()
    });
    let mut failed = Vec::new();

    let semigroup = runner.run(
        &(1e-6f64..100e-6, 1e-6f64..100e-6, 0u32..4),
        |(t1, t2, m)| {
            let f = lg(m);
            let two = diffuse_spectral(
                &diffuse_spectral(&f, &medium(D), t1).unwrap(),
                &medium(D),
                t2,
            )
            .unwrap();
            prop_assert!(close(
                &two,
                &diffuse_spectral(&f, &medium(D), t1 + t2).unwrap(),
                1e-9
            ));
            Ok(())
        },
    );
    if semigroup.is_err() {
        failed.push("semigroup");
    }

    let linearity = runner.run(
        &(-2.0f64..2.0, -2.0f64..2.0, 0.0f64..150e-6),
        |(a, b, t)| {
            let (f, g) = (lg(1), lg(2));
            let (ca, cb) = (Complex64::new(a, b), Complex64::new(b, -a));
            let lhs = diffuse_spectral(&f.linear_combination(ca, &g, cb).unwrap(), &medium(D), t)
                .unwrap();
            let rhs = diffuse_spectral(&f, &medium(D), t)
                .unwrap()
                .linear_combination(ca, &diffuse_spectral(&g, &medium(D), t).unwrap(), cb)
                .unwrap();
            let scale = f.max_amplitude().max(g.max_amplitude()) * (ca.norm() + cb.norm());
            let err = lhs
                .values()
                .iter()
                .zip(rhs.values())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            prop_assert!(err <= 1e-10 * scale);
            Ok(())
        },
    );
    if linearity.is_err() {
        failed.push("linearity");
    }

    let mass = runner.run(&(0.0f64..1.0, 0.0f64..500e-6), |(offset, t)| {
        let f = lg(0).map(|v| v + offset);
        let out = diffuse_spectral(&f, &medium(D), t).unwrap();
        prop_assert!((f.mass() - out.mass()).norm() <= 1e-9 * f.mass().norm());
        Ok(())
    });
    if mass.is_err() {
        failed.push("mass conservation");
    }

    let big = GridSpec::square(256, W0 / 20.0).unwrap();
    let winding = runner.run(&(1u32..4, 1e-3f64..1e3, -PI..PI), |(m, amp, phase)| {
        let f = make_lg_field(&LGModeSpec::new(m, W0, 1.0).unwrap(), &big).unwrap();
        let g = f.scale(Complex64::from_polar(amp, phase));
        let r = W0 / 2f64.sqrt();
        prop_assert_eq!(winding_number(&g, (0.0, 0.0), r, 128).unwrap(), m as i32);
        Ok(())
    });
    if winding.is_err() {
        failed.push("winding scale invariance");
    }

    let base = radial_profile(&lg(1), (0.0, 0.0), 16).unwrap();
    let later = radial_profile(
        &diffuse_spectral(&lg(1), &medium(D), 60e-6).unwrap(),
        (0.0, 0.0),
        16,
    )
    .unwrap();
    let reference = normalize_profiles(&[base.clone(), later.clone()]).unwrap();
    let normalization = runner.run(&(1e-3f64..1e3, 1e-3f64..1e3), |(a, b)| {
        let out = normalize_profiles(&[base.scaled(a), later.scaled(b)]).unwrap();
        for (x, y) in reference.iter().zip(&out) {
            for (u, v) in x.intensity.iter().zip(&y.intensity) {
                prop_assert!((u * a - v).abs() <= 1e-12 * u * a);
            }
        }
        Ok(())
    });
    if normalization.is_err() {
        failed.push("normalization scale invariance");
    }

    let dir = tempfile::tempdir().unwrap();
    let config = ScenarioConfig::standard_flat(30e-6);
    let first = run_scenario(&config, &dir.path().join("a")).unwrap();
    let second = run_scenario(&config, &dir.path().join("b")).unwrap();
    let identical = first
        .files
        .iter()
        .zip(&second.files)
        .all(|(x, y)| std::fs::read(x).unwrap() == std::fs::read(y).unwrap());
    if !identical {
        failed.push("determinism");
    }

    let detail = if failed.is_empty() {
        "semigroup, linearity, mass, winding scaling, normalization, determinism".to_string()
    } else {
        format!("failed: {}", failed.join(", "))
    };
    outcome(failed.is_empty(), detail)
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", ac1_oracle_equivalence),
        ("helical closed form", ac2_helical_closed_form),
        ("blocked-Gaussian closed form", ac3_flat_closed_form),
        ("topological stability", ac4_topological_stability),
        ("fill-time law", ac5_fill_time_law),
        ("fit recovery", ac6_fit_recovery),
        ("decay bookkeeping", ac7_decay_bookkeeping),
        ("property suite", ac8_property_suite),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failures += 1;
        }
        println!(
            "{} AC{} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
