//! Parameter sets of the published figures.
//!
//! All use N = 5×10⁶ sodium atoms. The time windows are tool choices; the
//! oscillatory Fig. 2(b)/3 runs use 2500 μs so that the ~1 ms revival of the
//! side-mode/probe correlations is visible.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::config::{
    CurveSection, OutputSection, Physics, ProbeSection, RunConfig, SweepSection, TimeGrid,
};
use crate::error::{Error, Result};
use crate::probe::ProbeState;

pub const ATOMS: u64 = 5_000_000;

/// μ/ħ for the phonon-regime runs, rad/s.
pub const MU_PHONON: f64 = 2.0 * PI * 6.7e3;
/// μ/ħ for the particle-regime runs, rad/s.
pub const MU_PARTICLE: f64 = 2.0 * PI * 1.23e3;

pub const NAMES: [&str; 10] = [
    "fig1",
    "fig2a",
    "fig2b",
    "fig2a-inset",
    "fig2b-inset",
    "fig3a",
    "fig3b",
    "fig4a",
    "fig4b",
    "fig4a-inset",
];

fn physics(chem_potential: f64, momentum_x: f64, rabi: f64) -> Physics {
    Physics {
        atom_count: ATOMS,
        chem_potential,
        momentum_x,
        rabi,
        eta_tilde: None,
    }
}

fn window(stop_us: f64) -> TimeGrid {
    TimeGrid {
        start_us: 0.0,
        stop_us,
        step_us: 1.0,
    }
}

pub fn preset(name: &str) -> Result<RunConfig> {
    let coherent = ProbeState::Coherent(Complex64::new(1.0, 0.0));
    let (physics, probe, time) = match name {
        "fig1" | "fig2b" => (physics(MU_PHONON, 0.47, 7.0), coherent, window(2500.0)),
        "fig2a" => (physics(MU_PHONON, 0.47, 8.0), coherent, window(1000.0)),
        "fig2a-inset" => (physics(MU_PHONON, 0.47, 16.0), coherent, window(1000.0)),
        "fig2b-inset" => (physics(MU_PHONON, 2.0, 16.0), coherent, window(1000.0)),
        "fig3a" => (
            physics(MU_PHONON, 0.47, 7.0),
            ProbeState::Vacuum,
            window(2500.0),
        ),
        "fig3b" => (
            physics(MU_PHONON, 0.47, 7.0),
            ProbeState::Fock(1),
            window(2500.0),
        ),
        "fig4a" | "fig4a-inset" => (
            physics(MU_PARTICLE, 8.329, 7.0),
            ProbeState::Fock(1),
            window(1000.0),
        ),
        "fig4b" => (
            physics(MU_PARTICLE, 8.329, 1.0),
            ProbeState::Fock(1),
            window(1000.0),
        ),
        _ => {
            return Err(Error::Config(format!(
                "unknown preset '{name}' (known: {})",
                NAMES.join(", ")
            )))
        }
    };
    let sweep = (name == "fig4a-inset").then_some(SweepSection {
        omega_min: 0.0,
        omega_max: 20.0,
        points: 201,
        t_fixed_us: 10.0,
    });
    let curve = (name == "fig1").then_some(CurveSection {
        x_min: 0.1,
        x_max: 10.0,
        points: 100,
    });
    Ok(RunConfig {
        preset: Some(name.to_string()),
        physics,
        probe: ProbeSection { state: probe },
        time,
        output: OutputSection::default(),
        sweep,
        curve,
    })
}
