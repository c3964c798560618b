//! Command bodies. Each returns its report or CSV text; writing it out is
//! left to the caller.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::config::RunConfig;
use super::format::{fmt_opt, fmt_sig};
use crate::error::{domain, Error, Result};
use crate::observables::{evolve_series_dimensionless, observables};
use crate::oracle::{discrepancy, oracle_series, TruncationSpec, FIELD_NAMES};
use crate::params::{effective_coupling, CondensateParams, DerivedScales};
use crate::triad::{build_model, threshold, threshold_curve};

pub const EVOLVE_HEADER: &str = "t_us,n_q,n_mq,n_k2,xi_q_mq,xi_q_k2,xi_mq_k2,Q_p";
pub const CURVE_HEADER: &str = "x,eta_th";
pub const SWEEP_HEADER: &str = "omega_hz,xi_q_mq,xi_q_k2,xi_mq_k2";

/// Pass mark for the oracle comparison (see [`crate::oracle::discrepancy`]).
pub const ORACLE_TOLERANCE: f64 = 1e-6;

/// Condensate parameters and dimensionless scales, honouring an explicit
/// `eta_tilde` override.
pub fn resolve_scales(config: &RunConfig) -> Result<(CondensateParams, DerivedScales)> {
    let params = config.physics.params()?;
    let mut scales = effective_coupling(&params)?;
    if let Some(eta) = config.physics.eta_tilde {
        scales.eta_tilde = eta;
    }
    Ok((params, scales))
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|k| {
            if k + 1 == points {
                hi
            } else {
                lo + k as f64 * step
            }
        })
        .collect()
}

pub fn cmd_spectrum(config: &RunConfig) -> Result<String> {
    let (params, scales) = resolve_scales(config)?;
    let model = build_model(scales.eta_tilde, scales.delta_tilde)?;
    let spectrum = model.spectrum();
    let eigs: Vec<String> = spectrum
        .eigenvalues
        .iter()
        .map(|l| {
            if l.im == 0.0 {
                fmt_sig(l.re)
            } else {
                let sign = if l.im < 0.0 { '-' } else { '+' };
                format!("{}{sign}{}i", fmt_sig(l.re), fmt_sig(l.im.abs()))
            }
        })
        .collect();
    let mut out = String::new();
    if let Some(name) = &config.preset {
        writeln!(out, "preset: {name}").unwrap();
    }
    writeln!(out, "x: {}", fmt_sig(params.momentum_x)).unwrap();
    writeln!(
        out,
        "omega_b_hz: {}",
        fmt_sig(scales.omega_b / (2.0 * std::f64::consts::PI))
    )
    .unwrap();
    writeln!(out, "delta_tilde: {}", fmt_sig(scales.delta_tilde)).unwrap();
    writeln!(out, "eta_tilde: {}", fmt_sig(scales.eta_tilde)).unwrap();
    writeln!(
        out,
        "eta_threshold: {}",
        fmt_sig(threshold(scales.delta_tilde)?)
    )
    .unwrap();
    writeln!(out, "regime: {}", spectrum.regime).unwrap();
    writeln!(out, "eigenvalues: {}", eigs.join(", ")).unwrap();
    Ok(out)
}

pub fn cmd_threshold_curve(x_min: f64, x_max: f64, points: usize) -> Result<String> {
    if !(x_min > 0.0 && x_max > x_min && x_max.is_finite()) || points < 2 {
        return Err(Error::Config(format!(
            "threshold curve needs 0 < x_min < x_max and points >= 2, got ({x_min}, {x_max}, {points})"
        )));
    }
    let rows = threshold_curve(&linspace(x_min, x_max, points))?;
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for (x, eta) in rows {
        writeln!(out, "{},{}", fmt_sig(x), fmt_sig(eta)).unwrap();
    }
    Ok(out)
}

pub fn cmd_evolve(config: &RunConfig) -> Result<String> {
    let (params, scales) = resolve_scales(config)?;
    let t_us = config.time.points_us()?;
    let t_s: Vec<f64> = t_us.iter().map(|t| t * 1e-6).collect();
    let records =
        evolve_series_dimensionless(scales.eta_tilde, &params, &config.probe.state, &t_s)?;
    let mut out = String::with_capacity(96 * (records.len() + 1));
    out.push_str(EVOLVE_HEADER);
    out.push('\n');
    for (t, r) in t_us.iter().zip(&records) {
        let v = &r.values;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_sig(*t),
            fmt_sig(v.n_q),
            fmt_sig(v.n_mq),
            fmt_sig(v.n_k2),
            fmt_opt(v.xi_q_mq),
            fmt_opt(v.xi_q_k2),
            fmt_opt(v.xi_mq_k2),
            fmt_opt(v.q_mandel),
        )
        .unwrap();
    }
    Ok(out)
}

/// ξ at a fixed time over a grid of Rabi frequencies (s⁻¹).
pub fn cmd_sweep_omega(
    config: &RunConfig,
    omega_min: f64,
    omega_max: f64,
    points: usize,
    t_fixed_us: f64,
) -> Result<String> {
    if !(omega_min >= 0.0 && omega_max > omega_min && omega_max.is_finite())
        || points < 2
        || !(t_fixed_us >= 0.0)
    {
        return Err(Error::Config(format!(
            "sweep needs 0 <= omega_min < omega_max, points >= 2, t_fixed >= 0; got ({omega_min}, {omega_max}, {points}, {t_fixed_us})"
        )));
    }
    let base = config.physics.params()?;
    let coeffs = base.mode_coefficients()?;
    let probe = config.probe.state;
    let rows = linspace(omega_min, omega_max, points)
        .into_par_iter()
        .map(|omega| {
            let params = CondensateParams {
                rabi: omega,
                ..base
            };
            let scales = effective_coupling(&params)?;
            let model = build_model(scales.eta_tilde, scales.delta_tilde)?;
            let propagator = model.propagator(scales.omega_b * t_fixed_us * 1e-6)?;
            Ok((omega, observables(&propagator, &coeffs, &probe)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for (omega, v) in rows {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_sig(omega),
            fmt_opt(v.xi_q_mq),
            fmt_opt(v.xi_q_k2),
            fmt_opt(v.xi_mq_k2)
        )
        .unwrap();
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub cutoffs: [usize; 3],
    pub tau_stop: f64,
    pub tau_points: usize,
    pub dt: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            cutoffs: [24, 24, 24],
            tau_stop: 2.0,
            tau_points: 9,
            dt: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub text: String,
    /// Worst discrepancy per field, in [`FIELD_NAMES`] order.
    pub worst: [f64; 7],
    pub passed: bool,
}

/// Compares the moment engine with the Fock-space oracle on
/// `τ ∈ [0, tau_stop]`. Truncation leaks surface as [`Error::Truncation`].
pub fn cmd_oracle_check(config: &RunConfig, options: &OracleOptions) -> Result<OracleReport> {
    if !(options.tau_stop >= 0.0 && options.tau_stop.is_finite()) || options.tau_points < 1 {
        return domain("oracle check needs tau_stop >= 0 and at least one point");
    }
    let (params, scales) = resolve_scales(config)?;
    let coeffs = params.mode_coefficients()?;
    let probe = config.probe.state;
    let spec = TruncationSpec::new(options.cutoffs)?;
    let taus = if options.tau_points == 1 {
        vec![options.tau_stop]
    } else {
        linspace(0.0, options.tau_stop, options.tau_points)
    };
    let model = build_model(scales.eta_tilde, scales.delta_tilde)?;
    let reference = oracle_series(
        scales.eta_tilde,
        scales.delta_tilde,
        &coeffs,
        &probe,
        spec,
        &taus,
        options.dt,
    )?;
    let mut worst = [0.0f64; 7];
    for (tau, oracle) in &reference {
        let engine = observables(&model.propagator(*tau)?, &coeffs, &probe)?;
        for (w, d) in worst.iter_mut().zip(discrepancy(&engine, oracle)) {
            *w = w.max(d);
        }
    }
    let passed = worst.iter().all(|&d| d < ORACLE_TOLERANCE);
    let mut text = String::new();
    writeln!(text, "eta_tilde: {}", fmt_sig(scales.eta_tilde)).unwrap();
    writeln!(text, "delta_tilde: {}", fmt_sig(scales.delta_tilde)).unwrap();
    writeln!(text, "probe: {probe}").unwrap();
    let [c1, c2, c3] = options.cutoffs;
    writeln!(text, "cutoffs: {c1},{c2},{c3}").unwrap();
    writeln!(text, "tau_max: {}", fmt_sig(options.tau_stop)).unwrap();
    for (name, d) in FIELD_NAMES.iter().zip(worst) {
        let mark = if d < ORACLE_TOLERANCE { "ok" } else { "FAIL" };
        writeln!(text, "{name}: max_discrepancy {d:.3e} {mark}").unwrap();
    }
    writeln!(text, "result: {}", if passed { "PASS" } else { "FAIL" }).unwrap();
    Ok(OracleReport {
        text,
        worst,
        passed,
    })
}

/// Small matplotlib script that plots every CSV column against the first.
pub fn plot_script(csv_name: &str) -> String {
    format!(
        r#"import csv
import matplotlib.pyplot as plt

with open({csv_name:?}) as fh:
    rows = list(csv.reader(fh))
header, body = rows[0], rows[1:]
x = [float(r[0]) for r in body]
for k, name in enumerate(header[1:], start=1):
    pts = [(xv, float(r[k])) for xv, r in zip(x, body) if r[k] != ""]
    plt.plot([p[0] for p in pts], [p[1] for p in pts], label=name)
plt.xlabel(header[0])
plt.legend()
plt.savefig({png:?})
"#,
        png = format!("{}.png", csv_name.trim_end_matches(".csv"))
    )
}
