//! Brute-force cross-check: the three modes as a truncated Fock-space state
//! vector evolved under
//!
//! ```text
//! H = n₁ + n₂ − δ n₃ + η (b₃†(b₁† + b₂) + h.c.)
//! ```
//!
//! in the quasiparticle basis (units of ω_q^B). The side modes start in the
//! quasiparticle vacuum; the Bogoliubov dressing enters only through the
//! particle-number operators used by [`oracle_observables`].

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::observables::{Observables, ProbeState, UNDEFINED_BELOW};
use crate::params::ModeCoefficients;

/// Largest Fock space the oracle will allocate.
pub const MAX_DIM: usize = 1_000_000;

/// Boundary population above which a run is rejected.
pub const LEAK_TOLERANCE: f64 = 1e-6;

/// Largest integration step accepted by [`evolve`].
pub const MAX_DT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationSpec {
    /// Exclusive per-mode occupation cutoffs.
    pub cutoffs: [usize; 3],
}

impl TruncationSpec {
    pub fn new(cutoffs: [usize; 3]) -> Result<Self> {
        if cutoffs.contains(&0) {
            return domain("cutoffs must be positive");
        }
        let dim = cutoffs
            .iter()
            .try_fold(1usize, |acc, &c| acc.checked_mul(c));
        match dim {
            Some(d) if d <= MAX_DIM => Ok(Self { cutoffs }),
            _ => Err(Error::MemoryGuard {
                dim: dim.unwrap_or(usize::MAX),
                limit: MAX_DIM,
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.cutoffs.iter().product()
    }

    pub fn index(&self, n: [usize; 3]) -> usize {
        (n[0] * self.cutoffs[1] + n[1]) * self.cutoffs[2] + n[2]
    }

    pub fn occupations(&self, index: usize) -> [usize; 3] {
        let n3 = index % self.cutoffs[2];
        let rest = index / self.cutoffs[2];
        [rest / self.cutoffs[1], rest % self.cutoffs[1], n3]
    }

    fn contains(&self, n: [usize; 3]) -> bool {
        n.iter().zip(&self.cutoffs).all(|(a, c)| a < c)
    }
}

/// Real sparse matrix in compressed-row form.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseOperator {
    fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        let mut row_ptr = vec![0; dim + 1];
        for &(r, _, _) in &merged {
            row_ptr[r + 1] += 1;
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        let (cols, vals) = merged.into_iter().map(|(_, c, v)| (c, v)).unzip();
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        self.cols[range.clone()]
            .binary_search(&col)
            .map(|k| self.vals[range.start + k])
            .unwrap_or(0.0)
    }

    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = Complex64::default();
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += x[self.cols[k]] * self.vals[k];
            }
            *o = acc;
        }
    }

    /// `max |H − Hᵀ|` over stored entries (H is real).
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                worst = worst.max((self.vals[k] - self.get(self.cols[k], r)).abs());
            }
        }
        worst
    }
}

pub fn build_hamiltonian(eta: f64, delta: f64, spec: &TruncationSpec) -> Result<SparseOperator> {
    let spec = TruncationSpec::new(spec.cutoffs)?;
    let dim = spec.dim();
    let mut triplets = Vec::with_capacity(5 * dim);
    let sq = |n: usize| (n as f64).sqrt();
    for col in 0..dim {
        let [n1, n2, n3] = spec.occupations(col);
        triplets.push((col, col, n1 as f64 + n2 as f64 - delta * n3 as f64));
        if eta == 0.0 {
            continue;
        }
        let mut hop = |target: [usize; 3], amp: f64| {
            if amp != 0.0 && spec.contains(target) {
                triplets.push((spec.index(target), col, eta * amp));
            }
        };
        // b₃† b₁†
        hop([n1 + 1, n2, n3 + 1], sq(n1 + 1) * sq(n3 + 1));
        // b₃† b₂
        if n2 > 0 {
            hop([n1, n2 - 1, n3 + 1], sq(n2) * sq(n3 + 1));
        }
        // b₁ b₃
        if n1 > 0 && n3 > 0 {
            hop([n1 - 1, n2, n3 - 1], sq(n1) * sq(n3));
        }
        // b₂† b₃
        if n3 > 0 {
            hop([n1, n2 + 1, n3 - 1], sq(n2 + 1) * sq(n3));
        }
    }
    Ok(SparseOperator::from_triplets(dim, triplets))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    pub spec: TruncationSpec,
    pub amplitudes: Vec<Complex64>,
    pub tau: f64,
}

impl FockState {
    pub fn basis(spec: TruncationSpec, n: [usize; 3]) -> Result<Self> {
        if !spec.contains(n) {
            return domain(format!(
                "basis state {n:?} outside cutoffs {:?}",
                spec.cutoffs
            ));
        }
        let mut amplitudes = vec![Complex64::default(); spec.dim()];
        amplitudes[spec.index(n)] = Complex64::new(1.0, 0.0);
        Ok(Self {
            spec,
            amplitudes,
            tau: 0.0,
        })
    }

    /// Quasiparticle vacuum on both side modes times the probe state. A
    /// coherent probe is truncated at the cutoff and renormalised.
    pub fn initial(spec: TruncationSpec, probe: &ProbeState) -> Result<Self> {
        probe.validate()?;
        let probe_cut = spec.cutoffs[2];
        let mut probe_amps = vec![Complex64::default(); probe_cut];
        match *probe {
            ProbeState::Vacuum => probe_amps[0] = Complex64::new(1.0, 0.0),
            ProbeState::Fock(n) => {
                let n = n as usize;
                if n >= probe_cut {
                    return domain(format!(
                        "Fock probe {n} does not fit below cutoff {probe_cut}"
                    ));
                }
                probe_amps[n] = Complex64::new(1.0, 0.0);
            }
            ProbeState::Coherent(beta) => {
                let mut amp = Complex64::new((-beta.norm_sqr() / 2.0).exp(), 0.0);
                for (n, slot) in probe_amps.iter_mut().enumerate() {
                    if n > 0 {
                        amp = amp * beta / (n as f64).sqrt();
                    }
                    *slot = amp;
                }
                let norm = probe_amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                for z in &mut probe_amps {
                    *z /= norm;
                }
            }
        }
        let mut amplitudes = vec![Complex64::default(); spec.dim()];
        for (n3, &amp) in probe_amps.iter().enumerate() {
            amplitudes[spec.index([0, 0, n3])] = amp;
        }
        Ok(Self {
            spec,
            amplitudes,
            tau: 0.0,
        })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Probability on the outermost layer `n_i = cutoff_i − 1` of any mode
    /// with a cutoff above one.
    pub fn leak(&self) -> f64 {
        let cut = self.spec.cutoffs;
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let n = self.spec.occupations(*i);
                (0..3).any(|k| cut[k] > 1 && n[k] == cut[k] - 1)
            })
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }

    fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    /// `⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩`.
    pub fn energy(&self, hamiltonian: &SparseOperator) -> f64 {
        let mut h = vec![Complex64::default(); self.amplitudes.len()];
        hamiltonian.apply(&self.amplitudes, &mut h);
        self.inner(&self.amplitudes, &h).re / self.norm().powi(2)
    }

    /// `⟨n₁ − n₂ − n₃⟩`.
    pub fn conserved_charge(&self) -> f64 {
        let total: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let [n1, n2, n3] = self.spec.occupations(i);
                z.norm_sqr() * (n1 as f64 - n2 as f64 - n3 as f64)
            })
            .sum();
        total / self.norm().powi(2)
    }

    pub fn mean_quasiparticles(&self) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, z) in self.amplitudes.iter().enumerate() {
            let n = self.spec.occupations(i);
            for k in 0..3 {
                out[k] += z.norm_sqr() * n[k] as f64;
            }
        }
        let norm2 = self.norm().powi(2);
        out.map(|v| v / norm2)
    }
}

/// Advances `state` by `tau` under `iψ' = Hψ`, using steps of at most `dt`.
///
/// Each step applies the Taylor series of `exp(−iH h)` summed until the next
/// term is below machine precision.
pub fn evolve(
    state: &FockState,
    hamiltonian: &SparseOperator,
    tau: f64,
    dt: f64,
) -> Result<FockState> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return domain(format!(
            "evolution time must be finite and non-negative, got {tau}"
        ));
    }
    if !(dt > 0.0 && dt <= MAX_DT) {
        return domain(format!("step must lie in (0, {MAX_DT}], got {dt}"));
    }
    if hamiltonian.dim() != state.amplitudes.len() {
        return domain("Hamiltonian and state dimensions differ");
    }
    let mut psi = state.amplitudes.clone();
    if tau > 0.0 {
        let steps = (tau / dt).ceil() as usize;
        let h = tau / steps as f64;
        let mut term = vec![Complex64::default(); psi.len()];
        let mut next = vec![Complex64::default(); psi.len()];
        for _ in 0..steps {
            term.copy_from_slice(&psi);
            for k in 1..60 {
                hamiltonian.apply(&term, &mut next);
                let factor = Complex64::new(0.0, -h / k as f64);
                let mut size = 0.0f64;
                for (t, n) in term.iter_mut().zip(&next) {
                    *t = n * factor;
                    size = size.max(t.norm());
                }
                for (p, t) in psi.iter_mut().zip(&term) {
                    *p += t;
                }
                if size < 1e-17 {
                    break;
                }
            }
        }
    }
    let out = FockState {
        spec: state.spec,
        amplitudes: psi,
        tau: state.tau + tau,
    };
    let leak = out.leak();
    if leak > LEAK_TOLERANCE {
        return Err(Error::Truncation {
            leak,
            tolerance: LEAK_TOLERANCE,
        });
    }
    Ok(out)
}

/// Applies the particle-number operators `[n_q, n_−q, n_k2]` to `psi`:
///
/// ```text
/// n_q  = u² n₁ − uv (b₁†b₂† + b₁b₂) + v² (n₂ + 1)
/// n_−q = u² n₂ − uv (b₁†b₂† + b₁b₂) + v² (n₁ + 1)
/// n_k2 = n₃
/// ```
fn apply_numbers(
    spec: &TruncationSpec,
    psi: &[Complex64],
    coeffs: &ModeCoefficients,
) -> [Vec<Complex64>; 3] {
    let (u2, uv, v2) = (
        coeffs.u * coeffs.u,
        coeffs.u * coeffs.v,
        coeffs.v * coeffs.v,
    );
    let mut out = [
        vec![Complex64::default(); psi.len()],
        vec![Complex64::default(); psi.len()],
        vec![Complex64::default(); psi.len()],
    ];
    for (i, &amp) in psi.iter().enumerate() {
        if amp == Complex64::default() {
            continue;
        }
        let [n1, n2, n3] = spec.occupations(i);
        let (f1, f2) = (n1 as f64, n2 as f64);
        out[0][i] += amp * (u2 * f1 + v2 * (f2 + 1.0));
        out[1][i] += amp * (u2 * f2 + v2 * (f1 + 1.0));
        out[2][i] += amp * n3 as f64;
        // pair creation b₁†b₂†
        let up = [n1 + 1, n2 + 1, n3];
        if spec.contains(up) {
            let j = spec.index(up);
            let w = -uv * ((n1 + 1) as f64).sqrt() * ((n2 + 1) as f64).sqrt();
            out[0][j] += amp * w;
            out[1][j] += amp * w;
        }
        // pair annihilation b₁b₂
        if n1 > 0 && n2 > 0 {
            let j = spec.index([n1 - 1, n2 - 1, n3]);
            let w = -uv * f1.sqrt() * f2.sqrt();
            out[0][j] += amp * w;
            out[1][j] += amp * w;
        }
    }
    out
}

/// Means, ξ and Q evaluated directly on the state vector.
pub fn oracle_observables(state: &FockState, coeffs: &ModeCoefficients) -> Observables {
    let psi = &state.amplitudes;
    let norm2 = state.norm().powi(2);
    let applied = apply_numbers(&state.spec, psi, coeffs);
    let dot = |a: &[Complex64], b: &[Complex64]| -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.conj() * y)
            .sum::<Complex64>()
            .re
            / norm2
    };
    let mean: Vec<f64> = applied.iter().map(|np| dot(psi, np)).collect();
    let second = |i: usize, j: usize| dot(&applied[i], &applied[j]);
    let xi = |i: usize, j: usize| {
        let denom = mean[i] + mean[j];
        (denom >= UNDEFINED_BELOW).then(|| {
            let var =
                second(i, i) + second(j, j) - 2.0 * second(i, j) - (mean[i] - mean[j]).powi(2);
            var / denom
        })
    };
    let q_mandel =
        (mean[2] >= UNDEFINED_BELOW).then(|| (second(2, 2) - mean[2] * mean[2]) / mean[2]);
    Observables {
        n_q: mean[0],
        n_mq: mean[1],
        n_k2: mean[2],
        xi_q_mq: xi(0, 1),
        xi_q_k2: xi(0, 2),
        xi_mq_k2: xi(1, 2),
        q_mandel,
    }
}

/// Runs the oracle from the initial product state through the sorted `taus`.
pub fn oracle_series(
    eta: f64,
    delta: f64,
    coeffs: &ModeCoefficients,
    probe: &ProbeState,
    spec: TruncationSpec,
    taus: &[f64],
    dt: f64,
) -> Result<Vec<(f64, Observables)>> {
    let hamiltonian = build_hamiltonian(eta, delta, &spec)?;
    let mut state = FockState::initial(spec, probe)?;
    let leak = state.leak();
    if leak > LEAK_TOLERANCE {
        return Err(Error::Truncation {
            leak,
            tolerance: LEAK_TOLERANCE,
        });
    }
    let mut out = Vec::with_capacity(taus.len());
    for &tau in taus {
        if tau < state.tau {
            return domain("oracle times must be sorted");
        }
        state = evolve(&state, &hamiltonian, tau - state.tau, dt)?;
        out.push((tau, oracle_observables(&state, coeffs)));
    }
    Ok(out)
}

/// Names of the compared observables, in [`field_values`] order.
pub const FIELD_NAMES: [&str; 7] = [
    "n_q", "n_mq", "n_k2", "xi_q_mq", "xi_q_k2", "xi_mq_k2", "Q_p",
];

pub fn field_values(o: &Observables) -> [Option<f64>; 7] {
    [
        Some(o.n_q),
        Some(o.n_mq),
        Some(o.n_k2),
        o.xi_q_mq,
        o.xi_q_k2,
        o.xi_mq_k2,
        o.q_mandel,
    ]
}

/// Per-field discrepancy `|a − b| / max(|b|, 1e-3)`: below 1e-6 means
/// agreement to 1e-6 relative with a 1e-9 absolute floor. Undefined on one
/// side only counts as infinite.
pub fn discrepancy(candidate: &Observables, reference: &Observables) -> [f64; 7] {
    let a = field_values(candidate);
    let b = field_values(reference);
    let mut out = [0.0; 7];
    for k in 0..7 {
        out[k] = match (a[k], b[k]) {
            (Some(x), Some(y)) => (x - y).abs() / y.abs().max(1e-3),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        };
    }
    out
}
