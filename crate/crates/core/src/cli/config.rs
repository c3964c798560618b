//! Run configuration and its TOML file form.
//!
//! ```toml
//! preset = "fig2b"          # optional; replaces [physics] and [probe]
//!
//! [physics]
//! atom_count = 5000000
//! chem_potential = 42097.3416   # μ/ħ, rad/s
//! momentum_x = 0.47
//! rabi = 7.0                    # s⁻¹
//! # eta_tilde = 0.0             # optional: bypass √N f Ω / ω_q^B
//!
//! [probe]
//! state = "coherent:1,0"        # vacuum | coherent:<re>,<im> | fock:<n>
//!
//! [time]                        # microseconds
//! start_us = 0.0
//! stop_us = 1000.0
//! step_us = 1.0
//!
//! [output]
//! path = "fig2b.csv"
//! plot_script = false
//! ```
//!
//! Unknown keys anywhere are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::presets;
use crate::error::{Error, Result};
use crate::params::CondensateParams;
use crate::probe::ProbeState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Physics {
    pub atom_count: u64,
    pub chem_potential: f64,
    pub momentum_x: f64,
    pub rabi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_tilde: Option<f64>,
}

impl Physics {
    pub fn params(&self) -> Result<CondensateParams> {
        CondensateParams::new(
            self.atom_count,
            self.chem_potential,
            self.momentum_x,
            self.rabi,
        )
        .map_err(|e| Error::Config(e.to_string()))
    }
}

impl From<CondensateParams> for Physics {
    fn from(p: CondensateParams) -> Self {
        Self {
            atom_count: p.atom_count,
            chem_potential: p.chem_potential,
            momentum_x: p.momentum_x,
            rabi: p.rabi,
            eta_tilde: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    pub state: ProbeState,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub start_us: f64,
    pub stop_us: f64,
    pub step_us: f64,
}

impl TimeGrid {
    pub fn validate(&self) -> Result<()> {
        let ok = self.step_us > 0.0
            && self.start_us >= 0.0
            && self.stop_us >= self.start_us
            && [self.start_us, self.stop_us, self.step_us]
                .iter()
                .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "time grid needs step > 0 and stop >= start >= 0, got {self:?}"
            )))
        }
    }

    /// Grid points in microseconds, `start + k·step` up to `stop`.
    pub fn points_us(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let count = ((self.stop_us - self.start_us) / self.step_us + 1e-9).floor() as usize + 1;
        Ok((0..count)
            .map(|k| self.start_us + k as f64 * self.step_us)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub plot_script: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Ω range in s⁻¹ (written `omega_hz` in the CSV).
    pub omega_min: f64,
    pub omega_max: f64,
    pub points: usize,
    pub t_fixed_us: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub physics: Physics,
    pub probe: ProbeSection,
    pub time: TimeGrid,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveSection>,
}

/// File form: sections may be omitted when a preset supplies them.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    preset: Option<String>,
    physics: Option<Physics>,
    probe: Option<ProbeSection>,
    time: Option<TimeGrid>,
    output: Option<OutputSection>,
    sweep: Option<SweepSection>,
    curve: Option<CurveSection>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let config = match raw.preset {
            Some(name) => {
                let base = presets::preset(&name)?;
                RunConfig {
                    preset: Some(name),
                    physics: base.physics,
                    probe: base.probe,
                    time: raw.time.unwrap_or(base.time),
                    output: raw.output.unwrap_or(base.output),
                    sweep: raw.sweep.or(base.sweep),
                    curve: raw.curve.or(base.curve),
                }
            }
            None => {
                let missing =
                    |s: &str| Error::Config(format!("missing [{s}] section (and no preset given)"));
                RunConfig {
                    preset: None,
                    physics: raw.physics.ok_or_else(|| missing("physics"))?,
                    probe: raw.probe.ok_or_else(|| missing("probe"))?,
                    time: raw.time.ok_or_else(|| missing("time"))?,
                    output: raw.output.unwrap_or_default(),
                    sweep: raw.sweep,
                    curve: raw.curve,
                }
            }
        };
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.physics.params()?;
        if let Some(eta) = self.physics.eta_tilde {
            if !(eta >= 0.0 && eta.is_finite()) {
                return Err(Error::Config(format!(
                    "eta_tilde must be non-negative, got {eta}"
                )));
            }
        }
        self.probe
            .state
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.time.validate()?;
        if let Some(s) = &self.sweep {
            if !(s.omega_min >= 0.0
                && s.omega_max >= s.omega_min
                && s.points >= 2
                && s.t_fixed_us >= 0.0)
            {
                return Err(Error::Config(format!("invalid sweep section {s:?}")));
            }
        }
        if let Some(c) = &self.curve {
            if !(c.x_min > 0.0 && c.x_max > c.x_min && c.points >= 2) {
                return Err(Error::Config(format!("invalid curve section {c:?}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
[physics]
atom_count = 5000000
chem_potential = 42097.3416
momentum_x = 0.47
rabi = 7.0

[probe]
state = "fock:1"

[time]
start_us = 0.0
stop_us = 10.0
step_us = 0.5
"#;

    #[test]
    fn parses_full_file() {
        let c = RunConfig::from_toml(FULL).unwrap();
        assert_eq!(c.probe.state, ProbeState::Fock(1));
        assert_eq!(c.time.points_us().unwrap().len(), 21);
        assert_eq!(c.output, OutputSection::default());
        assert_eq!(RunConfig::from_toml(&c.to_toml().unwrap()).unwrap(), c);
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = FULL.replace("rabi = 7.0", "rabi = 7.0\nrabbi = 1.0");
        assert!(matches!(RunConfig::from_toml(&text), Err(Error::Config(_))));
        let text = format!("{FULL}\n[extra]\nx = 1\n");
        assert!(RunConfig::from_toml(&text).is_err());
    }

    #[test]
    fn missing_sections_need_a_preset() {
        let text = FULL.replace("[probe]\nstate = \"fock:1\"\n", "");
        assert!(RunConfig::from_toml(&text).is_err());
        let c = RunConfig::from_toml("preset = \"fig3b\"").unwrap();
        assert_eq!(c.probe.state, ProbeState::Fock(1));
    }

    #[test]
    fn preset_overrides_physics() {
        let text = format!("preset = \"fig2a\"\n{}", FULL);
        let c = RunConfig::from_toml(&text).unwrap();
        assert_eq!(c.physics.rabi, 8.0);
        assert_eq!(c.time.stop_us, 10.0);
        assert!(RunConfig::from_toml("preset = \"fig9\"").is_err());
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(RunConfig::from_toml(&FULL.replace("step_us = 0.5", "step_us = 0.0")).is_err());
        assert!(RunConfig::from_toml(&FULL.replace("stop_us = 10.0", "stop_us = -1.0")).is_err());
        assert!(
            RunConfig::from_toml(&FULL.replace("momentum_x = 0.47", "momentum_x = -0.47")).is_err()
        );
        assert!(RunConfig::from_toml(&FULL.replace("fock:1", "fock:7")).is_err());
    }
}
