//! Initial state of the probe light mode.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest Fock number the order-4 moment tables are used with.
pub const MAX_FOCK: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ProbeState {
    Vacuum,
    Coherent(Complex64),
    Fock(u32),
}

impl ProbeState {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ProbeState::Vacuum => Ok(()),
            ProbeState::Coherent(beta) if beta.re.is_finite() && beta.im.is_finite() => Ok(()),
            ProbeState::Coherent(beta) => Err(Error::Domain(format!(
                "coherent amplitude {beta} is not finite"
            ))),
            ProbeState::Fock(n) if n <= MAX_FOCK => Ok(()),
            ProbeState::Fock(n) => Err(Error::Domain(format!(
                "Fock probe n = {n} unsupported (max {MAX_FOCK})"
            ))),
        }
    }

    /// Mean photon number ⟨c†c⟩.
    pub fn mean_photons(&self) -> f64 {
        match *self {
            ProbeState::Vacuum => 0.0,
            ProbeState::Coherent(beta) => beta.norm_sqr(),
            ProbeState::Fock(n) => n as f64,
        }
    }
}

impl fmt::Display for ProbeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbeState::Vacuum => f.write_str("vacuum"),
            ProbeState::Coherent(beta) => write!(f, "coherent:{},{}", beta.re, beta.im),
            ProbeState::Fock(n) => write!(f, "fock:{n}"),
        }
    }
}

impl FromStr for ProbeState {
    type Err = Error;

    /// Parses `vacuum`, `coherent:<re>,<im>` or `fock:<n>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Config(format!(
                "invalid probe '{s}' (expected vacuum | coherent:<re>,<im> | fock:<n>)"
            ))
        };
        let s = s.trim();
        let state = if s == "vacuum" {
            ProbeState::Vacuum
        } else if let Some(rest) = s.strip_prefix("coherent:") {
            let (re, im) = rest.split_once(',').ok_or_else(bad)?;
            let re: f64 = re.trim().parse().map_err(|_| bad())?;
            let im: f64 = im.trim().parse().map_err(|_| bad())?;
            ProbeState::Coherent(Complex64::new(re, im))
        } else if let Some(rest) = s.strip_prefix("fock:") {
            ProbeState::Fock(rest.trim().parse().map_err(|_| bad())?)
        } else {
            return Err(bad());
        };
        state.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(state)
    }
}

impl TryFrom<String> for ProbeState {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ProbeState> for String {
    fn from(p: ProbeState) -> String {
        p.to_string()
    }
}
