//! Heisenberg dynamics of the operator triad `X = (α_q, α_{−q}†, c†)`.
//!
//! In units of ω_q^B the triad obeys `dX/dτ = i M X` with
//!
//! ```text
//!     M = [ −1   0   −η ]
//!         [  0   1    η ]
//!         [  η   η   −δ ]
//! ```
//!
//! whose characteristic polynomial is `λ³ + δλ² − λ − (δ + 2η²)`. All roots
//! are real below the coupling threshold (oscillatory regime); above it a
//! complex-conjugate pair appears and populations grow exponentially.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::params::bragg_detuning;

/// Eigenvalues with |Im λ| above this count as complex.
pub const IMAG_TOLERANCE: f64 = 1e-10;

/// Minimum eigenvalue spacing for the spectral-projector form of exp(iMτ).
const GAP_TOLERANCE: f64 = 1e-2;

pub type CMatrix3 = Matrix3<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct TriadModel {
    pub eta: f64,
    pub delta: f64,
    pub matrix: CMatrix3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Oscillatory,
    Hyperbolic,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Oscillatory => f.write_str("Oscillatory"),
            Regime::Hyperbolic => f.write_str("Hyperbolic"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    /// Sorted by descending real part, then descending imaginary part.
    pub eigenvalues: [Complex64; 3],
    pub regime: Regime,
}

/// `S(τ)` with `X(τ) = S(τ) X(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    pub tau: f64,
    pub s: CMatrix3,
}

pub fn build_model(eta: f64, delta: f64) -> Result<TriadModel> {
    if !(eta >= 0.0 && eta.is_finite()) {
        return domain(format!(
            "coupling must be finite and non-negative, got {eta}"
        ));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return domain(format!("detuning must lie in (0, 1], got {delta}"));
    }
    let r = |x: f64| Complex64::new(x, 0.0);
    #[rustfmt::skip]
    let matrix = CMatrix3::new(
        r(-1.0), r(0.0), r(-eta),
        r(0.0),  r(1.0), r(eta),
        r(eta),  r(eta), r(-delta),
    );
    Ok(TriadModel { eta, delta, matrix })
}

impl TriadModel {
    /// Evaluates `p(λ) = λ³ + δλ² − λ − (δ + 2η²)`.
    pub fn characteristic(&self, lambda: Complex64) -> Complex64 {
        let (a, b, c) = self.cubic_coefficients();
        ((lambda + a) * lambda + b) * lambda + c
    }

    fn cubic_coefficients(&self) -> (f64, f64, f64) {
        (self.delta, -1.0, -(self.delta + 2.0 * self.eta * self.eta))
    }

    pub fn discriminant(&self) -> f64 {
        discriminant(self.eta, self.delta)
    }

    pub fn spectrum(&self) -> Spectrum {
        let (a, b, c) = self.cubic_coefficients();
        let mut eigenvalues = cubic_roots(a, b, c);
        eigenvalues.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
        let regime = if eigenvalues.iter().any(|l| l.im.abs() > IMAG_TOLERANCE) {
            Regime::Hyperbolic
        } else {
            Regime::Oscillatory
        };
        Spectrum {
            eigenvalues,
            regime,
        }
    }

    /// `S(τ) = exp(iMτ)`.
    ///
    /// Uses the spectral projectors of M when the eigenvalues are well
    /// separated and a scaled Taylor series otherwise.
    pub fn propagator(&self, tau: f64) -> Result<Propagator> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return domain(format!(
                "propagation time must be finite and non-negative, got {tau}"
            ));
        }
        if tau == 0.0 {
            return Ok(Propagator {
                tau,
                s: CMatrix3::identity(),
            });
        }
        let spectrum = self.spectrum();
        let s = if min_gap(&spectrum.eigenvalues) >= GAP_TOLERANCE {
            sylvester_exp(&self.matrix, &spectrum.eigenvalues, tau)
        } else {
            series_exp(&(self.matrix * Complex64::new(0.0, tau)))
        };
        if s.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical(format!(
                "propagator overflowed at tau = {tau} (eta = {}, delta = {})",
                self.eta, self.delta
            )));
        }
        Ok(Propagator { tau, s })
    }
}

pub fn spectrum(model: &TriadModel) -> Spectrum {
    model.spectrum()
}

pub fn propagator(model: &TriadModel, tau: f64) -> Result<Propagator> {
    model.propagator(tau)
}

/// The metric `J = diag(1, −1, −1)` preserved by S: the first triad entry is
/// an annihilator, the other two are creators.
pub fn pseudo_metric() -> CMatrix3 {
    CMatrix3::from_diagonal(&nalgebra::Vector3::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(-1.0, 0.0),
    ))
}

impl Propagator {
    /// Largest entry of `|S J S† − J|`.
    pub fn pseudo_unitarity_defect(&self) -> f64 {
        let j = pseudo_metric();
        let d = self.s * j * self.s.adjoint() - j;
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_entry(&self) -> f64 {
        self.s.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Discriminant `18abc − 4a³c + a²b² − 4b³ − 27c²` of the characteristic
/// cubic. Positive: three distinct real roots.
pub fn discriminant(eta: f64, delta: f64) -> f64 {
    let (a, b, c) = (delta, -1.0, -(delta + 2.0 * eta * eta));
    18.0 * a * b * c - 4.0 * a.powi(3) * c + a * a * b * b - 4.0 * b.powi(3) - 27.0 * c * c
}

/// Smallest coupling at which the discriminant changes sign, by bisection on
/// (0, 1].
pub fn threshold(delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return domain(format!("threshold needs 0 <= delta <= 1, got {delta}"));
    }
    const ZERO: f64 = 1e-12;
    const TOL: f64 = 1e-13;
    if discriminant(0.0, delta).abs() <= ZERO {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    if discriminant(hi, delta) > 0.0 {
        return Err(Error::Numerical(format!(
            "no threshold below 1 for delta = {delta}"
        )));
    }
    while hi - lo > TOL {
        let mid = 0.5 * (lo + hi);
        let d = discriminant(mid, delta);
        if d.abs() <= ZERO {
            return Ok(mid);
        }
        if d > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `(x, η̃_th(δ̃(x)))` for every grid point.
pub fn threshold_curve(x_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    x_grid
        .iter()
        .map(|&x| {
            if !(x > 0.0 && x.is_finite()) {
                return domain(format!("threshold curve needs x > 0, got {x}"));
            }
            Ok((x, threshold(bragg_detuning(x))?))
        })
        .collect()
}

/// Roots of the monic real cubic `λ³ + aλ² + bλ + c`.
///
/// Three real roots (non-negative discriminant) come from the trigonometric
/// form and have exactly zero imaginary part; otherwise one real root comes
/// from Cardano and the conjugate pair from the deflated quadratic.
pub fn cubic_roots(a: f64, b: f64, c: f64) -> [Complex64; 3] {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a.powi(3) / 27.0 - a * b / 3.0 + c;
    let disc = -(4.0 * p.powi(3) + 27.0 * q * q);
    let poly = |x: f64| ((x + a) * x + b) * x + c;
    let dpoly = |x: f64| (3.0 * x + 2.0 * a) * x + b;
    let polish = |mut x: f64| {
        for _ in 0..4 {
            let d = dpoly(x);
            if d == 0.0 {
                break;
            }
            let next = x - poly(x) / d;
            if poly(next).abs() < poly(x).abs() {
                x = next;
            } else {
                break;
            }
        }
        x
    };

    if disc >= 0.0 {
        if p == 0.0 {
            let r = Complex64::new(-shift, 0.0);
            return [r; 3];
        }
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut roots = [0.0; 3];
        for (k, root) in roots.iter_mut().enumerate() {
            *root = polish(m * (theta - 2.0 * PI * k as f64 / 3.0).cos() - shift);
        }
        roots.map(|r| Complex64::new(r, 0.0))
    } else {
        let d = (q * q / 4.0 + p.powi(3) / 27.0).sqrt();
        let big = -(q.signum()) * (q.abs() / 2.0 + d).cbrt();
        let small = if big != 0.0 { -p / (3.0 * big) } else { 0.0 };
        let real = polish(big + small - shift);
        // λ³ + aλ² + bλ + c = (λ − r)(λ² + Bλ + C)
        let lin = a + real;
        let constant = b + real * lin;
        let im = (constant - lin * lin / 4.0).max(0.0).sqrt();
        [
            Complex64::new(real, 0.0),
            Complex64::new(-lin / 2.0, im),
            Complex64::new(-lin / 2.0, -im),
        ]
    }
}

fn min_gap(eigs: &[Complex64; 3]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..3 {
        for j in (i + 1)..3 {
            gap = gap.min((eigs[i] - eigs[j]).norm());
        }
    }
    gap
}

fn sylvester_exp(m: &CMatrix3, eigs: &[Complex64; 3], tau: f64) -> CMatrix3 {
    let id = CMatrix3::identity();
    let mut s = CMatrix3::zeros();
    for k in 0..3 {
        let mut projector = id;
        for j in (0..3).filter(|&j| j != k) {
            projector *= (m - id * eigs[j]) / (eigs[k] - eigs[j]);
        }
        s += projector * (Complex64::i() * eigs[k] * tau).exp();
    }
    s
}

/// exp(A) by scaling and squaring around a Taylor series.
pub(crate) fn series_exp(a: &CMatrix3) -> CMatrix3 {
    let norm = (0..3)
        .map(|i| (0..3).map(|j| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / Complex64::new(2f64.powi(squarings), 0.0);
    let mut sum = CMatrix3::identity();
    let mut term = CMatrix3::identity();
    for k in 1..40 {
        term = term * scaled / Complex64::new(k as f64, 0.0);
        sum += term;
        if term.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}
