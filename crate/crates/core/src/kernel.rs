//! Normal-ordered bosonic operator algebra over the three initial modes.
//!
//! A word is stored per mode as an exponent pair `(m, n)` meaning
//! `(a†)^m a^n`; operators on distinct modes commute, so the cross-mode order
//! of a word is irrelevant. Products are built left to right, moving each new
//! creator past the annihilators already present with
//! `a^n a† = a† a^n + n a^(n−1)`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::probe::ProbeState;

/// Highest total operator order the kernel handles.
pub const MAX_ORDER: usize = 4;

const PRUNE: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    SideQ,
    SideMinusQ,
    Probe,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::SideQ, Mode::SideMinusQ, Mode::Probe];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Create,
    Annihilate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LadderSymbol {
    pub mode: Mode,
    pub kind: Kind,
}

impl LadderSymbol {
    pub fn create(mode: Mode) -> Self {
        Self {
            mode,
            kind: Kind::Create,
        }
    }

    pub fn annihilate(mode: Mode) -> Self {
        Self {
            mode,
            kind: Kind::Annihilate,
        }
    }

    pub fn adjoint(self) -> Self {
        let kind = match self.kind {
            Kind::Create => Kind::Annihilate,
            Kind::Annihilate => Kind::Create,
        };
        Self { kind, ..self }
    }

    fn slot(self) -> usize {
        2 * self.mode.index() + matches!(self.kind, Kind::Create) as usize
    }

    fn from_slot(slot: usize) -> Self {
        let kind = if slot % 2 == 1 {
            Kind::Create
        } else {
            Kind::Annihilate
        };
        Self {
            mode: Mode::ALL[slot / 2],
            kind,
        }
    }
}

/// A linear combination of the six ladder symbols.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinearForm {
    coefficients: [Complex64; 6],
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(symbol: LadderSymbol) -> Self {
        let mut form = Self::zero();
        form.coefficients[symbol.slot()] = Complex64::new(1.0, 0.0);
        form
    }

    pub fn coefficient(&self, symbol: LadderSymbol) -> Complex64 {
        self.coefficients[symbol.slot()]
    }

    pub fn set(&mut self, symbol: LadderSymbol, value: Complex64) {
        self.coefficients[symbol.slot()] = value;
    }

    pub fn terms(&self) -> impl Iterator<Item = (LadderSymbol, Complex64)> + '_ {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(slot, &c)| (LadderSymbol::from_slot(slot), c))
    }

    /// Hermitian conjugate: conjugated coefficients on the adjoint symbols.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (sym, c) in self.terms() {
            out.set(sym.adjoint(), c.conj());
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.coefficients
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Add for LinearForm {
    type Output = LinearForm;
    fn add(mut self, rhs: LinearForm) -> LinearForm {
        for (a, b) in self.coefficients.iter_mut().zip(rhs.coefficients) {
            *a += b;
        }
        self
    }
}

impl Sub for LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: LinearForm) -> LinearForm {
        self + rhs * Complex64::new(-1.0, 0.0)
    }
}

impl Mul<Complex64> for LinearForm {
    type Output = LinearForm;
    fn mul(mut self, rhs: Complex64) -> LinearForm {
        for a in &mut self.coefficients {
            *a *= rhs;
        }
        self
    }
}

impl Mul<f64> for LinearForm {
    type Output = LinearForm;
    fn mul(self, rhs: f64) -> LinearForm {
        self * Complex64::new(rhs, 0.0)
    }
}

/// Per-mode `(creators, annihilators)` exponents.
pub type Word = [(u8, u8); 3];

const EMPTY_WORD: Word = [(0, 0); 3];

fn word_order(word: &Word) -> usize {
    word.iter().map(|&(m, n)| (m + n) as usize).sum()
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorPolynomial {
    terms: BTreeMap<Word, Complex64>,
}

impl OperatorPolynomial {
    pub fn identity() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(EMPTY_WORD, Complex64::new(1.0, 0.0));
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &Word) -> Complex64 {
        self.terms.get(word).copied().unwrap_or_default()
    }

    /// Highest total order among the stored words.
    pub fn order(&self) -> usize {
        self.terms.keys().map(word_order).max().unwrap_or(0)
    }

    /// Formal adjoint. `(a†)^m a^n` maps to `(a†)^n a^m`, which is again
    /// normal-ordered.
    pub fn adjoint(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (w.map(|(m, n)| (n, m)), c.conj()))
            .collect();
        Self { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            *out.terms.entry(*w).or_default() += c;
        }
        out.prune();
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = Self {
            terms: self.terms.iter().map(|(w, c)| (*w, c * factor)).collect(),
        };
        out.prune();
        out
    }

    /// Right-multiplies by one ladder symbol, keeping normal order.
    fn mul_symbol(
        &self,
        symbol: LadderSymbol,
        weight: Complex64,
        out: &mut BTreeMap<Word, Complex64>,
    ) {
        let k = symbol.mode.index();
        for (word, &c) in &self.terms {
            let (m, n) = word[k];
            match symbol.kind {
                Kind::Annihilate => {
                    let mut w = *word;
                    w[k] = (m, n + 1);
                    *out.entry(w).or_default() += c * weight;
                }
                Kind::Create => {
                    let mut w = *word;
                    w[k] = (m + 1, n);
                    *out.entry(w).or_default() += c * weight;
                    if n > 0 {
                        let mut w = *word;
                        w[k] = (m, n - 1);
                        *out.entry(w).or_default() += c * weight * n as f64;
                    }
                }
            }
        }
    }

    pub fn mul_form(&self, form: &LinearForm) -> Self {
        let mut terms = BTreeMap::new();
        for (sym, weight) in form.terms() {
            if weight != Complex64::default() {
                self.mul_symbol(sym, weight, &mut terms);
            }
        }
        let mut out = Self { terms };
        out.prune();
        out
    }

    /// Rebuilds every word by multiplying out its symbols (creators first)
    /// from the identity. On a normal-ordered polynomial this is the identity
    /// map.
    pub fn normal_ordered(&self) -> Self {
        let mut total = Self::default();
        for (word, &c) in &self.terms {
            let mut p = Self::identity().scale(c);
            for mode in Mode::ALL {
                let (m, n) = word[mode.index()];
                for _ in 0..m {
                    p = p.mul_form(&LinearForm::symbol(LadderSymbol::create(mode)));
                }
                for _ in 0..n {
                    p = p.mul_form(&LinearForm::symbol(LadderSymbol::annihilate(mode)));
                }
            }
            total = total.add(&p);
        }
        total
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE);
    }
}

/// Expands the product `forms[0] · forms[1] · …` into normal order.
pub fn multiply_forms(forms: &[LinearForm]) -> Result<OperatorPolynomial> {
    if forms.is_empty() {
        return domain("multiply_forms needs at least one form");
    }
    if forms.len() > MAX_ORDER {
        return Err(Error::UnsupportedOrder {
            order: forms.len(),
            max: MAX_ORDER,
        });
    }
    Ok(forms
        .iter()
        .fold(OperatorPolynomial::identity(), |p, f| p.mul_form(f)))
}

/// `⟨(a†)^m a^n⟩` of a single-mode state for `m + n ≤ MAX_ORDER`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentTable {
    entries: [[Complex64; MAX_ORDER + 1]; MAX_ORDER + 1],
}

impl MomentTable {
    fn build(f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut entries = [[Complex64::default(); MAX_ORDER + 1]; MAX_ORDER + 1];
        for (m, row) in entries.iter_mut().enumerate() {
            for (n, e) in row.iter_mut().enumerate().take(MAX_ORDER + 1 - m) {
                *e = f(m, n);
            }
        }
        Self { entries }
    }

    pub fn vacuum() -> Self {
        Self::build(|m, n| {
            if m == 0 && n == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        })
    }

    pub fn coherent(beta: Complex64) -> Self {
        Self::build(|m, n| beta.conj().powu(m as u32) * beta.powu(n as u32))
    }

    pub fn fock(k: u32) -> Self {
        let k = k as usize;
        Self::build(|m, n| {
            if m != n || m > k {
                return Complex64::default();
            }
            // k! / (k − m)!
            let falling: f64 = ((k - m + 1)..=k).map(|i| i as f64).product();
            Complex64::new(falling, 0.0)
        })
    }

    pub fn entry(&self, m: usize, n: usize) -> Option<Complex64> {
        (m + n <= MAX_ORDER).then(|| self.entries[m][n])
    }
}

pub fn moment_table(state: &ProbeState) -> MomentTable {
    match *state {
        ProbeState::Vacuum => MomentTable::vacuum(),
        ProbeState::Coherent(beta) => MomentTable::coherent(beta),
        ProbeState::Fock(n) => MomentTable::fock(n),
    }
}

/// Evaluates a polynomial on the product state described by one moment table
/// per mode.
pub fn expectation(poly: &OperatorPolynomial, tables: &[MomentTable; 3]) -> Result<Complex64> {
    let mut total = Complex64::default();
    for (word, &c) in poly.terms() {
        let mut value = c;
        for (k, &(m, n)) in word.iter().enumerate() {
            let entry = tables[k]
                .entry(m as usize, n as usize)
                .ok_or(Error::UnsupportedOrder {
                    order: (m + n) as usize,
                    max: MAX_ORDER,
                })?;
            value *= entry;
            if value == Complex64::default() {
                break;
            }
        }
        total += value;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn op(mode: Mode, kind: Kind) -> LinearForm {
        LinearForm::symbol(LadderSymbol { mode, kind })
    }

    fn word(mode: Mode, m: u8, n: u8) -> Word {
        let mut w = EMPTY_WORD;
        w[mode.index()] = (m, n);
        w
    }

    #[test]
    fn canonical_commutator() {
        let a = op(Mode::Probe, Kind::Annihilate);
        let ad = op(Mode::Probe, Kind::Create);
        let p = multiply_forms(&[a, ad]).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coefficient(&word(Mode::Probe, 1, 1)), c(1.0, 0.0));
        assert_eq!(p.coefficient(&EMPTY_WORD), c(1.0, 0.0));

        let p = multiply_forms(&[ad, a]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&word(Mode::Probe, 1, 1)), c(1.0, 0.0));
    }

    #[test]
    fn quadrature_square() {
        let x = op(Mode::SideQ, Kind::Annihilate) + op(Mode::SideQ, Kind::Create);
        let p = multiply_forms(&[x, x]).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.coefficient(&word(Mode::SideQ, 2, 0)), c(1.0, 0.0));
        assert_eq!(p.coefficient(&word(Mode::SideQ, 0, 2)), c(1.0, 0.0));
        assert_eq!(p.coefficient(&word(Mode::SideQ, 1, 1)), c(2.0, 0.0));
        assert_eq!(p.coefficient(&EMPTY_WORD), c(1.0, 0.0));
    }

    #[test]
    fn distinct_modes_commute() {
        let a = op(Mode::SideQ, Kind::Annihilate);
        let bd = op(Mode::SideMinusQ, Kind::Create);
        assert_eq!(
            multiply_forms(&[a, bd]).unwrap(),
            multiply_forms(&[bd, a]).unwrap()
        );
    }

    #[test]
    fn order_limit() {
        let a = op(Mode::Probe, Kind::Annihilate);
        assert!(matches!(
            multiply_forms(&[a; 5]),
            Err(Error::UnsupportedOrder { order: 5, .. })
        ));
        assert!(multiply_forms(&[]).is_err());
        assert_eq!(multiply_forms(&[a; 4]).unwrap().order(), 4);
    }

    #[test]
    fn moment_tables() {
        let f = MomentTable::fock(1);
        assert_eq!(f.entry(1, 1), Some(c(1.0, 0.0)));
        assert_eq!(f.entry(2, 2), Some(c(0.0, 0.0)));
        assert_eq!(f.entry(3, 2), None);
        let f2 = MomentTable::fock(2);
        assert_eq!(f2.entry(2, 2), Some(c(2.0, 0.0)));

        let coh = MomentTable::coherent(c(1.0, 0.0));
        assert_eq!(coh.entry(2, 1), Some(c(1.0, 0.0)));
        let coh = MomentTable::coherent(c(0.3, -0.7));
        for m in 0..=4 {
            for n in 0..=(4 - m) {
                assert!(
                    (coh.entry(n, m).unwrap() - coh.entry(m, n).unwrap().conj()).norm() < 1e-15
                );
            }
        }

        let vac = MomentTable::vacuum();
        for m in 0..=4 {
            for n in 0..=(4 - m) {
                let want = if m == 0 && n == 0 { 1.0 } else { 0.0 };
                assert_eq!(vac.entry(m, n), Some(c(want, 0.0)));
            }
        }
    }

    #[test]
    fn number_moments() {
        let n = [
            op(Mode::Probe, Kind::Create),
            op(Mode::Probe, Kind::Annihilate),
        ];
        let tables = |probe| [MomentTable::vacuum(), MomentTable::vacuum(), probe];

        let mean = multiply_forms(&n).unwrap();
        assert_eq!(
            expectation(&mean, &tables(MomentTable::fock(1))).unwrap(),
            c(1.0, 0.0)
        );

        let second = multiply_forms(&[n[0], n[1], n[0], n[1]]).unwrap();
        let v = expectation(&second, &tables(MomentTable::coherent(c(1.0, 0.0)))).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-15);

        let odd = multiply_forms(&[n[0], n[1], n[0]]).unwrap();
        assert_eq!(
            expectation(&odd, &tables(MomentTable::vacuum())).unwrap(),
            c(0.0, 0.0)
        );
    }

    #[test]
    fn expectation_rejects_overflowing_words() {
        let mut terms = BTreeMap::new();
        terms.insert(word(Mode::Probe, 3, 2), c(1.0, 0.0));
        let poly = OperatorPolynomial { terms };
        let tables = [MomentTable::vacuum(); 3];
        assert!(matches!(
            expectation(&poly, &tables),
            Err(Error::UnsupportedOrder { .. })
        ));
    }

    fn arb_complex() -> impl Strategy<Value = Complex64> {
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| c(re, im))
    }

    fn arb_form() -> impl Strategy<Value = LinearForm> {
        prop::array::uniform6(arb_complex()).prop_map(|coefficients| LinearForm { coefficients })
    }

    fn arb_tables() -> impl Strategy<Value = [MomentTable; 3]> {
        let single = prop_oneof![
            Just(MomentTable::vacuum()),
            arb_complex().prop_map(MomentTable::coherent),
            (0u32..=2).prop_map(MomentTable::fock),
        ];
        [single.clone(), single.clone(), single]
    }

    proptest! {
        #[test]
        fn normal_ordering_idempotent(forms in prop::collection::vec(arb_form(), 1..=4)) {
            let p = multiply_forms(&forms).unwrap();
            let q = p.normal_ordered();
            prop_assert_eq!(p.len(), q.len());
            for (w, c) in p.terms() {
                prop_assert!((q.coefficient(w) - c).norm() < 1e-12);
            }
        }

        #[test]
        fn adjoint_of_product_reverses(a in arb_form(), b in arb_form()) {
            let left = multiply_forms(&[a, b]).unwrap().adjoint();
            let right = multiply_forms(&[b.adjoint(), a.adjoint()]).unwrap();
            prop_assert!(left.add(&right.scale(c(-1.0, 0.0))).terms().all(|(_, c)| c.norm() < 1e-12));
        }

        #[test]
        fn hermitian_expectation_is_real(a in arb_form(), b in arb_form(), tables in arb_tables()) {
            let ab = multiply_forms(&[a, b]).unwrap();
            let h = ab.add(&ab.adjoint())
                .add(&multiply_forms(&[a.adjoint(), b.adjoint(), b, a]).unwrap());
            let v = expectation(&h, &tables).unwrap();
            prop_assert!(v.im.abs() < 1e-12 * (1.0 + v.norm()));
        }

        #[test]
        fn positivity(l in arb_form(), tables in arb_tables()) {
            let v = expectation(&multiply_forms(&[l.adjoint(), l]).unwrap(), &tables).unwrap();
            prop_assert!(v.re >= -1e-12);
            let w = expectation(&multiply_forms(&[l.adjoint(), l.adjoint(), l, l]).unwrap(), &tables).unwrap();
            prop_assert!(w.re >= -1e-12);
        }

        #[test]
        fn disjoint_modes_factorize(x in arb_complex(), y in arb_complex(), tables in arb_tables()) {
            let mut a = LinearForm::zero();
            a.set(LadderSymbol::annihilate(Mode::SideQ), x);
            a.set(LadderSymbol::create(Mode::SideQ), y);
            let mut b = LinearForm::zero();
            b.set(LadderSymbol::annihilate(Mode::Probe), y);
            b.set(LadderSymbol::create(Mode::Probe), x.conj());
            let joint = expectation(&multiply_forms(&[a.adjoint(), a, b.adjoint(), b]).unwrap(), &tables).unwrap();
            let left = expectation(&multiply_forms(&[a.adjoint(), a]).unwrap(), &tables).unwrap();
            let right = expectation(&multiply_forms(&[b.adjoint(), b]).unwrap(), &tables).unwrap();
            prop_assert!((joint - left * right).norm() < 1e-12);
        }
    }
}
