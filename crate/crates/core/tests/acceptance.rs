//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use bragg_core::cli::presets::{self, MU_PARTICLE, MU_PHONON, NAMES};
use bragg_core::observables::{
    evolve_series, number_covariance, observables, ObservableRecord, Observables, ProbeState,
};
use bragg_core::oracle::{discrepancy, oracle_series, TruncationSpec};
use bragg_core::params::{
    bragg_detuning, dispersion, effective_coupling, mode_coefficients, CondensateParams,
};
use bragg_core::triad::{build_model, threshold, threshold_curve, Propagator};
use bragg_core::Complex64;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn preset_params(name: &str) -> (CondensateParams, ProbeState) {
    let config = presets::preset(name).unwrap();
    (config.physics.params().unwrap(), config.probe.state)
}

fn preset_series(name: &str) -> Vec<(f64, Observables)> {
    let config = presets::preset(name).unwrap();
    let t_us = config.time.points_us().unwrap();
    let t_s: Vec<f64> = t_us.iter().map(|t| t * 1e-6).collect();
    let (params, probe) = preset_params(name);
    let records: Vec<ObservableRecord> = evolve_series(&params, &probe, &t_s).unwrap();
    t_us.into_iter()
        .zip(records.into_iter().map(|r| r.values))
        .collect()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn eigenvalue_fixtures() -> Outcome {
    let fixtures = [
        (
            "fig2a",
            [c(1.07975, 0.0), c(-0.69788, 0.14153), c(-0.69788, -0.14153)],
        ),
        (
            "fig2b",
            [c(1.06235, 0.0), c(-0.58587, 0.0), c(-0.79248, 0.0)],
        ),
        (
            "fig4a",
            [c(1.00041, 0.0), c(-0.99315, 0.02771), c(-0.99315, -0.02771)],
        ),
        ("fig4b", [c(1.00001, 0.0), c(-0.9872, 0.0), c(-0.9987, 0.0)]),
    ];
    let mut worst = 0.0f64;
    let mut where_ = "";
    for (name, expected) in fixtures {
        let (params, _) = preset_params(name);
        let s = effective_coupling(&params).unwrap();
        let eigs = build_model(s.eta_tilde, s.delta_tilde)
            .unwrap()
            .spectrum()
            .eigenvalues;
        for (got, want) in eigs.iter().zip(expected) {
            let d = (got.re - want.re).abs().max((got.im - want.im).abs());
            if d > worst {
                worst = d;
                where_ = name;
            }
        }
    }
    outcome(
        worst <= 2e-3,
        format!("worst component error {worst:.2e} ({where_}), tol 2e-3"),
    )
}

fn coupling_reconstruction() -> Outcome {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (name, want) in [
        ("fig2a", 0.34),
        ("fig2b", 0.29),
        ("fig4a", 0.0285),
        ("fig4b", 0.0041),
    ] {
        let (params, _) = preset_params(name);
        let eta = effective_coupling(&params).unwrap().eta_tilde;
        worst = worst.max((eta / want - 1.0).abs());
        parts.push(format!("{name} {eta:.5}"));
    }
    outcome(
        worst <= 0.03,
        format!(
            "{}; worst relative error {:.2}%, tol 3%",
            parts.join(", "),
            100.0 * worst
        ),
    )
}

fn thresholds() -> Outcome {
    let low = threshold(bragg_detuning(0.47)).unwrap();
    let high = threshold(bragg_detuning(8.329)).unwrap();
    let limit = threshold(0.0).unwrap();
    let grid: Vec<f64> = (0..=1000)
        .map(|k| 0.1 + k as f64 * (9.9 / 1000.0))
        .collect();
    let curve = threshold_curve(&grid).unwrap();
    let decreasing = curve.windows(2).all(|w| w[1].1 < w[0].1);
    let ok = (0.312..=0.315).contains(&low)
        && (high - 0.0071).abs() <= 2e-4
        && (limit - 0.43869).abs() <= 5e-4
        && decreasing;
    outcome(
        ok,
        format!(
            "x=0.47 {low:.6} in [0.312, 0.315]; x=8.329 {high:.6} (0.0071 ± 2e-4); δ̃→0 {limit:.6} (0.43869 ± 5e-4); strictly decreasing on [0.1, 10]: {decreasing}"
        ),
    )
}

fn dispersion_scales() -> Outcome {
    let phonon = dispersion(0.47, MU_PHONON).unwrap() / (2.0 * PI);
    let particle = dispersion(8.329, MU_PARTICLE).unwrap() / (2.0 * PI);
    let e1 = (phonon / 4.7e3 - 1.0).abs();
    let e2 = (particle / 86.65e3 - 1.0).abs();
    outcome(
        e1 <= 0.02 && e2 <= 0.002,
        format!(
            "{phonon:.1} Hz vs 4.7 kHz ({:.2}%, tol 2%); {particle:.1} Hz vs 86.65 kHz ({:.3}%, tol 0.2%)",
            100.0 * e1,
            100.0 * e2
        ),
    )
}

fn max_abs_diff(a: &Propagator, b: &bragg_core::triad::CMatrix3) -> f64 {
    (a.s - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn structural_invariants() -> Outcome {
    const CASES: usize = 1000;
    let mut runner = TestRunner::deterministic();
    let strategy = (
        0.0f64..0.6,
        0.05f64..20.0,
        0.0f64..5.0,
        0.0f64..5.0,
        0usize..3,
        0.0f64..1.5,
        0.0f64..(2.0 * PI),
        0u32..3,
    );
    let mut worst = [0.0f64; 4];
    let mut min_variance = f64::INFINITY;
    for _ in 0..CASES {
        let (eta, x, t1, t2, kind, r, phase, n) = strategy.new_tree(&mut runner).unwrap().current();
        let probe = match kind {
            0 => ProbeState::Vacuum,
            1 => ProbeState::Coherent(Complex64::from_polar(r, phase)),
            _ => ProbeState::Fock(n),
        };
        let delta = bragg_detuning(x);
        let coeffs = mode_coefficients(x).unwrap();
        let model = build_model(eta, delta).unwrap();
        let tau = t1 + t2;
        let s = model.propagator(tau).unwrap();

        worst[0] = worst[0].max(s.pseudo_unitarity_defect());

        let eigs = model.spectrum().eigenvalues;
        let sum: Complex64 = eigs.iter().sum();
        let product: Complex64 = eigs.iter().product();
        let vieta = (sum + delta)
            .norm()
            .max((product - (delta + 2.0 * eta * eta)).norm());
        worst[1] = worst[1].max(vieta);

        let start = observables(&model.propagator(0.0).unwrap(), &coeffs, &probe).unwrap();
        let now = observables(&s, &coeffs, &probe).unwrap();
        worst[2] = worst[2].max((now.manley_rowe() - start.manley_rowe()).abs());

        let cov = number_covariance(&s, &coeffs, &probe).unwrap();
        for i in 0..3 {
            min_variance = min_variance.min(cov[i][i]);
            for j in i + 1..3 {
                min_variance = min_variance.min(cov[i][i] + cov[j][j] - 2.0 * cov[i][j]);
            }
        }

        let composed = model.propagator(t1).unwrap().s * model.propagator(t2).unwrap().s;
        worst[3] = worst[3].max(max_abs_diff(&s, &composed));
    }
    let ok = worst[0] <= 1e-10
        && worst[1] <= 1e-9
        && worst[2] <= 1e-9
        && min_variance >= -1e-9
        && worst[3] <= 1e-9;
    outcome(
        ok,
        format!(
            "{CASES} cases (η̃ ≤ 0.6, τ ≤ 10): |SJS†−J| {:.1e} (1e-10), Vieta {:.1e} (1e-9), Manley–Rowe {:.1e} (1e-9), min variance {:.1e} (≥ −1e-9), group {:.1e} (1e-9)",
            worst[0], worst[1], worst[2], min_variance, worst[3]
        ),
    )
}

fn closed_form_initial_values() -> Outcome {
    let x: f64 = 0.47;
    let v2 = 0.5 * ((x * x + 1.0) / (x * (x * x + 2.0).sqrt()) - 1.0);
    let u2 = 1.0 + v2;
    let coeffs = mode_coefficients(x).unwrap();
    let model = build_model(0.29, bragg_detuning(x)).unwrap();
    let s0 = model.propagator(0.0).unwrap();
    let at = |probe: ProbeState| observables(&s0, &coeffs, &probe).unwrap();
    let coherent = at(ProbeState::Coherent(c(1.0, 0.0)));
    let fock = at(ProbeState::Fock(1));
    let vacuum = at(ProbeState::Vacuum);

    let xi_coherent = (v2 * u2 + 1.0) / u2;
    let xi_fock = v2 * u2 / u2;
    let checks = [
        (coherent.n_q - v2).abs() <= 1e-9 && (coherent.n_mq - v2).abs() <= 1e-9,
        (v2 - 0.37155).abs() <= 2e-5,
        [coherent, fock, vacuum]
            .iter()
            .all(|o| o.xi_q_mq.is_some_and(|v| v.abs() <= 1e-9)),
        (coherent.xi_q_k2.unwrap() - xi_coherent).abs() <= 1e-6
            && (xi_coherent - 1.10066).abs() <= 2e-5,
        (fock.xi_q_k2.unwrap() - xi_fock).abs() <= 1e-6 && (xi_fock - 0.37156).abs() <= 2e-5,
        coherent.q_mandel.is_some_and(|q| (q - 1.0).abs() <= 1e-9),
        fock.q_mandel.is_some_and(|q| q.abs() <= 1e-9),
        vacuum.q_mandel.is_none(),
    ];
    outcome(
        checks.iter().all(|&b| b),
        format!(
            "n_±q(0) = {:.10} (closed form {v2:.10}); ξ_q,−q(0) = {:.1e}; ξ_q,k2(0) coherent {:.7}, Fock {:.7}; Q_p(0) coherent {:.3}, Fock {:.3}, vacuum {:?}",
            coherent.n_q,
            coherent.xi_q_mq.unwrap(),
            coherent.xi_q_k2.unwrap(),
            fock.xi_q_k2.unwrap(),
            coherent.q_mandel.unwrap(),
            fock.q_mandel.unwrap(),
            vacuum.q_mandel,
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let x = 0.47;
    let coeffs = mode_coefficients(x).unwrap();
    let delta = bragg_detuning(x);
    let taus: Vec<f64> = (0..=8).map(|k| k as f64 * 0.25).collect();
    let probes = [
        ProbeState::Vacuum,
        ProbeState::Coherent(c(1.0, 0.0)),
        ProbeState::Fock(1),
    ];
    let mut worst = 0.0f64;
    let mut configs = 0;
    for eta in [0.1, 0.29] {
        let model = build_model(eta, delta).unwrap();
        for probe in probes {
            let spec = TruncationSpec::new([24, 24, 24]).unwrap();
            let reference = match oracle_series(eta, delta, &coeffs, &probe, spec, &taus, 0.01) {
                Ok(r) => r,
                Err(e) => {
                    return outcome(false, format!("oracle failed at η̃ = {eta}, {probe}: {e}"))
                }
            };
            for (tau, oracle) in reference {
                let engine = observables(&model.propagator(tau).unwrap(), &coeffs, &probe).unwrap();
                worst = discrepancy(&engine, &oracle)
                    .into_iter()
                    .fold(worst, f64::max);
            }
            configs += 1;
        }
    }
    outcome(
        worst < 1e-6,
        format!("{configs} configurations, τ ∈ [0, 2], cutoffs 24³: worst relative discrepancy {worst:.2e}, tol 1e-6"),
    )
}

fn runs(flags: impl Iterator<Item = bool>) -> usize {
    let mut count = 0;
    let mut inside = false;
    for f in flags {
        if f && !inside {
            count += 1;
        }
        inside = f;
    }
    count
}

fn qualitative_claims() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    let mut immune_min = f64::INFINITY;
    for name in NAMES {
        let (_, probe) = preset_params(name);
        if matches!(probe, ProbeState::Fock(_)) {
            continue;
        }
        let min = preset_series(name)
            .iter()
            .filter_map(|(_, o)| o.xi_mq_k2)
            .fold(f64::INFINITY, f64::min);
        immune_min = immune_min.min(min);
    }
    ok &= immune_min >= 1.0;
    notes.push(format!(
        "(a) min ξ_−q,k2 over vacuum/coherent presets {immune_min:.7}"
    ));

    let mut fock_hits = Vec::new();
    for name in ["fig3b", "fig4a", "fig4b"] {
        let hits = preset_series(name)
            .iter()
            .filter(|(_, o)| o.xi_mq_k2.is_some_and(|v| v < 1.0))
            .count();
        ok &= hits > 0;
        fock_hits.push(format!("{name} {hits}"));
    }
    notes.push(format!(
        "(b) Fock samples with ξ_−q,k2 < 1: {}",
        fock_hits.join(", ")
    ));

    let fig2a = preset_series("fig2a");
    let below = |o: &Observables| {
        [o.xi_q_mq, o.xi_q_k2, o.xi_mq_k2]
            .iter()
            .any(|v| v.is_some_and(|v| v < 1.0))
    };
    match fig2a.iter().rposition(|(_, o)| below(o)) {
        Some(k) if k + 1 < fig2a.len() => notes.push(format!(
            "(c) fig2a all ξ ≥ 1 from t = {} μs",
            fig2a[k + 1].0
        )),
        Some(_) => {
            ok = false;
            notes.push("(c) fig2a still entangled at end of grid".into());
        }
        None => notes.push("(c) fig2a never entangled".into()),
    }
    let intervals = runs(
        preset_series("fig2b")
            .iter()
            .map(|(_, o)| o.xi_q_k2.is_some_and(|v| v < 1.0)),
    );
    ok &= intervals >= 2;
    notes.push(format!("fig2b has {intervals} intervals of ξ_q,k2 < 1"));

    let fig3a = preset_series("fig3a");
    let q_min = fig3a
        .iter()
        .filter(|(t, _)| *t >= 1.0)
        .map(|(_, o)| o.q_mandel.unwrap_or(f64::NEG_INFINITY))
        .fold(f64::INFINITY, f64::min);
    ok &= q_min > 1.0;
    let overlap = preset_series("fig3b")
        .iter()
        .filter(|(_, o)| o.q_mandel.is_some_and(|q| q < 1.0) && o.xi_q_mq.is_some_and(|v| v < 1.0))
        .count();
    ok &= overlap > 0;
    notes.push(format!("(d) vacuum min Q_p (t ≥ 1 μs) {q_min:.7}; Fock samples with Q_p < 1 and ξ_q,−q < 1: {overlap}"));

    outcome(ok, notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("eigenvalue fixtures", eigenvalue_fixtures),
        ("coupling reconstruction", coupling_reconstruction),
        ("thresholds", thresholds),
        ("dispersion", dispersion_scales),
        ("structural invariants", structural_invariants),
        ("closed-form initial values", closed_form_initial_values),
        ("oracle equivalence", oracle_equivalence),
        ("qualitative figure claims", qualitative_claims),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        let mark = if result.passed { "PASS" } else { "FAIL" };
        println!("{mark} [{}] {name}: {}", k + 1, result.detail);
        if !result.passed {
            failed += 1;
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
