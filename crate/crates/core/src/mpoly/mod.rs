//! Multivariate polynomials over exact rationals, with Groebner-basis
//! unit-ideal certificates.
//!
//! Everything here is over Q with the graded reverse lexicographic term
//! order. The point of the module is certified identities: a
//! [`UnitStatus::Unit`] certificate carries cofactors `Q_i` with
//! `sum_i Q_i P_i = 1` that re-expand exactly.

mod alpha;
mod groebner;

pub use alpha::{dual_to_alpha, fold_to_antichain};
pub use groebner::{groebner, unit_certificate, GroebnerConfig, GroebnerResult};

use crate::error::{Error, Result};
use crate::posets::{AlphaSystem, SubsetMask};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// An exponent vector under graded reverse lexicographic order.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // grevlex tie break: larger is the one with the smaller exponent
        // at the last position where they differ
        for i in (0..self.0.len()).rev() {
            if self.0[i] != other.0[i] {
                return other.0[i].cmp(&self.0[i]);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A multivariate polynomial over Q; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    pub nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(nvars), c);
        }
        Self { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(nvars, i), BigRational::one());
        Self { nvars, terms }
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>,
    ) -> Result<Self> {
        let mut out = Self::zero(nvars);
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(Error::input("exponent vector length mismatch"));
            }
            out.add_term(&Monomial(exp), &c);
        }
        Ok(out)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::unit(self.nvars))
                .is_some_and(|c| c.is_one())
    }

    /// Is this a nonzero constant?
    pub fn is_unit_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().unwrap().is_unit()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Leading term under grevlex.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: &Monomial, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    /// `self + coeff * mono * other`, in place.
    pub fn add_scaled(&mut self, coeff: &BigRational, mono: &Monomial, other: &MultiPoly) {
        for (m, c) in &other.terms {
            self.add_term(&m.mul(mono), &(c * coeff));
        }
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, &-c.clone());
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_scaled(c, m, other);
        }
        out
    }

    pub fn eval<F: crate::scalar::Field>(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.nvars);
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = F::from_rational(c);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t * point[i].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// View a univariate dense polynomial as a 1-variable `MultiPoly`.
    pub fn from_dense(p: &crate::polyalg::DensePoly<BigRational>) -> MultiPoly {
        let mut out = MultiPoly::zero(1);
        for (i, c) in p.coeffs().iter().enumerate() {
            out.add_term(&Monomial(vec![i as u32]), c);
        }
        out
    }

    /// Back to a dense univariate polynomial; requires `nvars == 1`.
    pub fn to_dense(&self) -> Result<crate::polyalg::DensePoly<BigRational>> {
        if self.nvars != 1 {
            return Err(Error::input("to_dense requires a univariate polynomial"));
        }
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        for (m, c) in &self.terms {
            coeffs[m.0[0] as usize] = c.clone();
        }
        Ok(crate::polyalg::DensePoly::from_coeffs(coeffs))
    }

    pub fn from_int_terms(nvars: usize, terms: &[(&[u32], i64)]) -> MultiPoly {
        let mut out = MultiPoly::zero(nvars);
        for (exp, c) in terms {
            out.add_term(
                &Monomial(exp.to_vec()),
                &BigRational::from(BigInt::from(*c)),
            );
        }
        out
    }
}

/// Whether a generator family generates the unit ideal.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UnitStatus {
    Unit,
    NotUnit,
}

/// A certificate for membership of 1 in an ideal.
#[derive(Clone, Debug)]
pub struct IdealCertificate {
    pub generators: Vec<MultiPoly>,
    pub cofactors: Vec<MultiPoly>,
    pub status: UnitStatus,
}

impl IdealCertificate {
    /// Re-expand `sum cofactor_i * generator_i` and demand exactly 1.
    pub fn verify(&self) -> Result<()> {
        match self.status {
            UnitStatus::NotUnit => {
                if !self.cofactors.is_empty() {
                    return Err(Error::math("not-unit certificate carries cofactors"));
                }
                Ok(())
            }
            UnitStatus::Unit => {
                let nvars = self.generators[0].nvars;
                let mut acc = MultiPoly::zero(nvars);
                for (q, p) in self.cofactors.iter().zip(&self.generators) {
                    acc = acc.add(&q.mul(p));
                }
                if acc.is_one() {
                    Ok(())
                } else {
                    Err(Error::math(format!(
                        "unit certificate does not re-expand to 1 (got {})",
                        acc
                    )))
                }
            }
        }
    }
}

/// Run [`unit_certificate`] on `{P_j : j in J}` for every `J` in `beta`.
///
/// The family is a dual beta-decomposition exactly when every returned
/// certificate is `Unit`.
pub fn certify_beta_decomposition(
    factors: &[MultiPoly],
    beta: &AlphaSystem,
    config: &GroebnerConfig,
) -> Result<BTreeMap<SubsetMask, IdealCertificate>> {
    if beta.is_empty() {
        return Err(Error::input("beta system must be nonempty"));
    }
    let mut out = BTreeMap::new();
    for j in &beta.members {
        let gens: Vec<MultiPoly> = j
            .indices()
            .into_iter()
            .map(|i| {
                factors
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::input(format!("factor index {} out of range", i)))
            })
            .collect::<Result<_>>()?;
        if gens.is_empty() {
            // the empty product is the identity, which is a unit; but an
            // empty generator list generates the zero ideal
            out.insert(
                *j,
                IdealCertificate {
                    generators: gens,
                    cofactors: Vec::new(),
                    status: UnitStatus::NotUnit,
                },
            );
            continue;
        }
        out.insert(*j, unit_certificate(&gens, config)?);
    }
    Ok(out)
}
