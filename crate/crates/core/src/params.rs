//! Condensate parameters and the dimensionless quantities derived from them.
//!
//! Everything downstream works in units of the Bogoliubov frequency `ω_q^B`:
//! time is `τ = ω_q^B t`, energies are measured in `ħ ω_q^B`. This module is
//! the only place laboratory units appear.
//!
//! Frequency conventions: `chem_potential` (μ/ħ) is an angular frequency in
//! rad/s, so a chemical potential quoted as "6.7 kHz" enters as `2π × 6.7e3`.
//! The two-photon Rabi frequency `rabi` is a rate in s⁻¹ and carries no 2π.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CondensateParams {
    /// Total number of atoms N.
    pub atom_count: u64,
    /// μ/ħ in rad/s.
    pub chem_potential: f64,
    /// Momentum transfer in units of the inverse healing length, x = ξq.
    pub momentum_x: f64,
    /// Two-photon Rabi frequency Ω in s⁻¹.
    pub rabi: f64,
}

/// Bogoliubov coefficients `u`, `v` of the ±q modes and `f = u − v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoefficients {
    pub u: f64,
    pub v: f64,
    pub f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScales {
    /// Bogoliubov frequency ω_q^B, rad/s.
    pub omega_b: f64,
    /// Probe detuning in units of ω_q^B.
    pub delta_tilde: f64,
    /// Effective coupling η = √N f Ω in units of ω_q^B.
    pub eta_tilde: f64,
}

impl CondensateParams {
    pub fn new(atom_count: u64, chem_potential: f64, momentum_x: f64, rabi: f64) -> Result<Self> {
        let params = Self {
            atom_count,
            chem_potential,
            momentum_x,
            rabi,
        };
        params.validate()?;
        Ok(params)
    }

    /// Builds parameters from the density, scattering length, atomic mass and
    /// momentum transfer instead of quoting μ and ξq directly.
    ///
    /// Uses `μ/ħ = ħ / (2 m ξ²)` and `x = ξ q`.
    pub fn from_lab(
        atom_count: u64,
        density: f64,
        scattering_length: f64,
        atomic_mass: f64,
        momentum: f64,
        rabi: f64,
    ) -> Result<Self> {
        if !(atomic_mass > 0.0) || !(momentum > 0.0) {
            return domain("atomic mass and momentum transfer must be positive");
        }
        let xi = healing_length(density, scattering_length)?;
        let chem_potential = HBAR / (2.0 * atomic_mass * xi * xi);
        Self::new(atom_count, chem_potential, xi * momentum, rabi)
    }

    pub fn validate(&self) -> Result<()> {
        if self.atom_count < 1 {
            return domain("atom_count must be at least 1");
        }
        if !(self.chem_potential > 0.0 && self.chem_potential.is_finite()) {
            return domain(format!(
                "chem_potential must be positive, got {}",
                self.chem_potential
            ));
        }
        if !(self.momentum_x > 0.0 && self.momentum_x.is_finite()) {
            return domain(format!(
                "momentum_x must be positive, got {}",
                self.momentum_x
            ));
        }
        if !(self.rabi >= 0.0 && self.rabi.is_finite()) {
            return domain(format!("rabi must be non-negative, got {}", self.rabi));
        }
        Ok(())
    }

    pub fn mode_coefficients(&self) -> Result<ModeCoefficients> {
        mode_coefficients(self.momentum_x)
    }

    pub fn omega_b(&self) -> Result<f64> {
        dispersion(self.momentum_x, self.chem_potential)
    }
}

/// Healing length ξ = (8π n₀ a_s)^(−1/2).
pub fn healing_length(density: f64, scattering_length: f64) -> Result<f64> {
    if !(density > 0.0) || !(scattering_length > 0.0) {
        return domain("density and scattering length must be positive");
    }
    Ok((8.0 * PI * density * scattering_length).powf(-0.5))
}

/// Bogoliubov dispersion ω_q^B = (μ/ħ) x √(x² + 2), in the same units as
/// `chem_potential`.
pub fn dispersion(x: f64, chem_potential: f64) -> Result<f64> {
    if !(x >= 0.0) || !(chem_potential > 0.0) {
        return domain("dispersion needs x >= 0 and chem_potential > 0");
    }
    Ok(chem_potential * x * (x * x + 2.0).sqrt())
}

/// Free-particle recoil over Bogoliubov frequency, ω_q / ω_q^B = x/√(x²+2).
///
/// This is the probe detuning at Bragg resonance.
pub fn bragg_detuning(x: f64) -> f64 {
    x / (x * x + 2.0).sqrt()
}

pub fn mode_coefficients(x: f64) -> Result<ModeCoefficients> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("mode coefficients need finite x > 0, got {x}"));
    }
    let root = (x * x + 2.0).sqrt();
    // ½((x²+1)/(x√(x²+2)) − 1) rewritten without the cancellation at large x
    let v2 = 0.5 / (x * root * (x * x + 1.0 + x * root));
    let u = (1.0 + v2).sqrt();
    let v = v2.sqrt();
    // u − v = 1/(u + v) since u² − v² = 1; avoids cancellation at small x
    Ok(ModeCoefficients {
        u,
        v,
        f: 1.0 / (u + v),
    })
}

/// Computes ω_q^B, the Bragg-resonant detuning δ̃ and the coupling η̃.
pub fn effective_coupling(params: &CondensateParams) -> Result<DerivedScales> {
    params.validate()?;
    let coeffs = params.mode_coefficients()?;
    let omega_b = params.omega_b()?;
    let eta = (params.atom_count as f64).sqrt() * coeffs.f * params.rabi;
    Ok(DerivedScales {
        omega_b,
        delta_tilde: bragg_detuning(params.momentum_x),
        eta_tilde: eta / omega_b,
    })
}
