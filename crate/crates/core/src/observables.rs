//! Occupations, two-mode number-difference parameters and the probe Mandel Q.
//!
//! The initial state is the quasiparticle vacuum of both side-modes times the
//! probe state. Particle operators at time τ are linear forms in the initial
//! ladder symbols:
//!
//! ```text
//! a_q(τ)  = u α_q(τ)  − v α_{−q}†(τ)
//! a_−q(τ) = u α_{−q}(τ) − v α_q†(τ)
//! c(τ)    = (c†(τ))†
//! ```
//!
//! with `(α_q, α_{−q}†, c†)(τ) = S(τ) (α_q, α_{−q}†, c†)(0)`. Moments up to
//! fourth order are evaluated with the normal-ordering kernel.
//!
//! `ξ_{i,j} = ⟨[Δ(n_i − n_j)]²⟩ / (⟨n_i⟩ + ⟨n_j⟩)` is the number-difference
//! witness: values below one are read as entanglement of modes i and j. It is
//! a number-squeezing criterion, so it can also drop below one for a product
//! state with a sub-Poissonian probe (e.g. ξ_{q,k₂} at τ = 0 with a Fock probe).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::kernel::{
    expectation, moment_table, multiply_forms, LadderSymbol, LinearForm, Mode, MomentTable,
};
use crate::params::{effective_coupling, CondensateParams, ModeCoefficients};
pub use crate::probe::ProbeState;
use crate::triad::{build_model, Propagator};

/// Denominators below this make ξ or Q undefined.
pub const UNDEFINED_BELOW: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub n_q: f64,
    pub n_mq: f64,
    pub n_k2: f64,
    pub xi_q_mq: Option<f64>,
    pub xi_q_k2: Option<f64>,
    pub xi_mq_k2: Option<f64>,
    /// `None` when the probe is empty.
    pub q_mandel: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRecord {
    /// Laboratory time, s.
    pub t: f64,
    /// τ = ω_q^B t.
    pub tau: f64,
    pub values: Observables,
}

impl Observables {
    pub fn mean(&self, mode: Mode) -> f64 {
        match mode {
            Mode::SideQ => self.n_q,
            Mode::SideMinusQ => self.n_mq,
            Mode::Probe => self.n_k2,
        }
    }

    pub fn xi(&self, i: Mode, j: Mode) -> Option<f64> {
        match (i.min(j), i.max(j)) {
            (Mode::SideQ, Mode::SideMinusQ) => self.xi_q_mq,
            (Mode::SideQ, Mode::Probe) => self.xi_q_k2,
            (Mode::SideMinusQ, Mode::Probe) => self.xi_mq_k2,
            _ => None,
        }
    }

    /// `⟨n_q⟩ − ⟨n_−q⟩ − ⟨n_k2⟩`, conserved by the dynamics.
    pub fn manley_rowe(&self) -> f64 {
        self.n_q - self.n_mq - self.n_k2
    }
}

/// Particle-basis annihilators `[a_q(τ), a_−q(τ), c(τ)]` as linear forms over
/// the initial ladder symbols.
pub fn evolved_forms(propagator: &Propagator, coeffs: &ModeCoefficients) -> [LinearForm; 3] {
    let triad = [
        LadderSymbol::annihilate(Mode::SideQ),
        LadderSymbol::create(Mode::SideMinusQ),
        LadderSymbol::create(Mode::Probe),
    ];
    let row = |k: usize| {
        let mut form = LinearForm::zero();
        for (j, sym) in triad.iter().enumerate() {
            form.set(*sym, propagator.s[(k, j)]);
        }
        form
    };
    let alpha_q = row(0);
    let alpha_mq_dag = row(1);
    let probe_dag = row(2);
    let a_q = alpha_q * coeffs.u - alpha_mq_dag * coeffs.v;
    let a_mq = alpha_mq_dag.adjoint() * coeffs.u - alpha_q.adjoint() * coeffs.v;
    [a_q, a_mq, probe_dag.adjoint()]
}

fn initial_tables(probe: &ProbeState) -> Result<[MomentTable; 3]> {
    probe.validate()?;
    Ok([
        MomentTable::vacuum(),
        MomentTable::vacuum(),
        moment_table(probe),
    ])
}

fn real_expectation(forms: &[LinearForm], tables: &[MomentTable; 3]) -> Result<f64> {
    Ok(expectation(&multiply_forms(forms)?, tables)?.re)
}

/// First and second number moments of the three output modes.
struct NumberMoments {
    mean: [f64; 3],
    /// `⟨n_i n_j⟩`, symmetric.
    second: [[f64; 3]; 3],
}

impl NumberMoments {
    fn compute(forms: &[LinearForm; 3], tables: &[MomentTable; 3]) -> Result<Self> {
        let mut mean = [0.0; 3];
        for (k, f) in forms.iter().enumerate() {
            mean[k] = real_expectation(&[f.adjoint(), *f], tables)?;
        }
        let mut second = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let (fi, fj) = (forms[i], forms[j]);
                let v = real_expectation(&[fi.adjoint(), fi, fj.adjoint(), fj], tables)?;
                second[i][j] = v;
                second[j][i] = v;
            }
        }
        Ok(Self { mean, second })
    }

    fn difference_variance(&self, i: usize, j: usize) -> f64 {
        let s = &self.second;
        s[i][i] + s[j][j] - 2.0 * s[i][j] - (self.mean[i] - self.mean[j]).powi(2)
    }

    fn xi(&self, i: usize, j: usize) -> Option<f64> {
        let denom = self.mean[i] + self.mean[j];
        (denom >= UNDEFINED_BELOW).then(|| self.difference_variance(i, j) / denom)
    }

    fn mandel(&self) -> Option<f64> {
        let n = self.mean[2];
        (n >= UNDEFINED_BELOW).then(|| (self.second[2][2] - n * n) / n)
    }

    fn observables(&self) -> Observables {
        Observables {
            n_q: self.mean[0],
            n_mq: self.mean[1],
            n_k2: self.mean[2],
            xi_q_mq: self.xi(0, 1),
            xi_q_k2: self.xi(0, 2),
            xi_mq_k2: self.xi(1, 2),
            q_mandel: self.mandel(),
        }
    }
}

pub fn mean_occupation(
    mode: Mode,
    propagator: &Propagator,
    coeffs: &ModeCoefficients,
    probe: &ProbeState,
) -> Result<f64> {
    let f = evolved_forms(propagator, coeffs)[mode.index()];
    real_expectation(&[f.adjoint(), f], &initial_tables(probe)?)
}

/// ξ_{i,j}; `Ok(None)` when both modes are empty.
pub fn entanglement_parameter(
    i: Mode,
    j: Mode,
    propagator: &Propagator,
    coeffs: &ModeCoefficients,
    probe: &ProbeState,
) -> Result<Option<f64>> {
    if i == j {
        return domain("entanglement parameter needs two distinct modes");
    }
    let moments =
        NumberMoments::compute(&evolved_forms(propagator, coeffs), &initial_tables(probe)?)?;
    Ok(moments.xi(i.index(), j.index()))
}

pub fn mandel_q(
    propagator: &Propagator,
    coeffs: &ModeCoefficients,
    probe: &ProbeState,
) -> Result<Option<f64>> {
    let f = evolved_forms(propagator, coeffs)[Mode::Probe.index()];
    let tables = initial_tables(probe)?;
    let n = real_expectation(&[f.adjoint(), f], &tables)?;
    if n < UNDEFINED_BELOW {
        return Ok(None);
    }
    let n2 = real_expectation(&[f.adjoint(), f, f.adjoint(), f], &tables)?;
    Ok(Some((n2 - n * n) / n))
}

/// Covariance matrix `⟨n_i n_j⟩ − ⟨n_i⟩⟨n_j⟩` of the particle numbers, in
/// [`Mode::ALL`] order.
pub fn number_covariance(
    propagator: &Propagator,
    coeffs: &ModeCoefficients,
    probe: &ProbeState,
) -> Result<[[f64; 3]; 3]> {
    let m = NumberMoments::compute(&evolved_forms(propagator, coeffs), &initial_tables(probe)?)?;
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| m.second[i][j] - m.mean[i] * m.mean[j])
    }))
}

/// All observables for one propagator.
pub fn observables(
    propagator: &Propagator,
    coeffs: &ModeCoefficients,
    probe: &ProbeState,
) -> Result<Observables> {
    let moments =
        NumberMoments::compute(&evolved_forms(propagator, coeffs), &initial_tables(probe)?)?;
    Ok(moments.observables())
}

/// Observables on a laboratory time grid (seconds).
pub fn evolve_series(
    params: &CondensateParams,
    probe: &ProbeState,
    t_grid: &[f64],
) -> Result<Vec<ObservableRecord>> {
    let scales = effective_coupling(params)?;
    evolve_series_dimensionless(scales.eta_tilde, params, probe, t_grid)
}

/// Same as [`evolve_series`] with the coupling η̃ given directly.
pub fn evolve_series_dimensionless(
    eta_tilde: f64,
    params: &CondensateParams,
    probe: &ProbeState,
    t_grid: &[f64],
) -> Result<Vec<ObservableRecord>> {
    if t_grid.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return domain("time grid must be finite and non-negative");
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return domain("time grid must be sorted");
    }
    probe.validate()?;
    let scales = effective_coupling(params)?;
    let coeffs = params.mode_coefficients()?;
    let model = build_model(eta_tilde, scales.delta_tilde)?;
    let tables = initial_tables(probe)?;
    t_grid
        .par_iter()
        .map(|&t| {
            let tau = scales.omega_b * t;
            let propagator = model.propagator(tau)?;
            let moments = NumberMoments::compute(&evolved_forms(&propagator, &coeffs), &tables)?;
            Ok(ObservableRecord {
                t,
                tau,
                values: moments.observables(),
            })
        })
        .collect()
}

/// `[n_q(τ) − n_−q(τ)]` as a normal-ordered polynomial minus the
/// quasiparticle difference `α_q†α_q − α_−q†α_−q` at the same τ. Zero when the
/// Bogoliubov mixing cancels, as it should.
#[doc(hidden)]
pub fn number_difference_residual(
    propagator: &Propagator,
    coeffs: &ModeCoefficients,
) -> Result<f64> {
    let [a_q, a_mq, _] = evolved_forms(propagator, coeffs);
    let bare = ModeCoefficients {
        u: 1.0,
        v: 0.0,
        f: 1.0,
    };
    let [al_q, al_mq, _] = evolved_forms(propagator, &bare);
    let minus = Complex64::new(-1.0, 0.0);
    let particle = multiply_forms(&[a_q.adjoint(), a_q])?
        .add(&multiply_forms(&[a_mq.adjoint(), a_mq])?.scale(minus));
    let quasi = multiply_forms(&[al_q.adjoint(), al_q])?
        .add(&multiply_forms(&[al_mq.adjoint(), al_mq])?.scale(minus));
    let diff = particle.add(&quasi.scale(minus));
    Ok(diff.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max))
}
