//! Dense univariate polynomials, coefficients lowest degree first.

use crate::error::{Error, Result};
use crate::scalar::Field;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A univariate polynomial over `F`. The zero polynomial is the empty
/// coefficient list; otherwise the leading coefficient is nonzero.
#[derive(Clone, PartialEq)]
pub struct DensePoly<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> fmt::Debug for DensePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<F: Field> fmt::Display for DensePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*x", c)?,
                _ => write!(f, "{}*x^{}", c, i)?,
            }
        }
        Ok(())
    }
}

impl<F: Field> DensePoly<F> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![F::zero(), F::one()])
    }

    /// `x + lambda`.
    pub fn x_plus(lambda: F) -> Self {
        Self::from_coeffs(vec![lambda, F::one()])
    }

    /// Build from coefficients (lowest first), trimming trailing zeros.
    pub fn from_coeffs(coeffs: Vec<F>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == F::one()
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn monic(&self) -> Option<Self> {
        let inv = self.leading()?.inv()?;
        Some(self.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * F::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// Division with remainder; `None` when dividing by zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dlead = divisor.leading()?;
        let dinv = dlead.inv()?;
        let ddeg = divisor.degree().unwrap();
        let mut rem = self.clone();
        let mut quot = vec![F::zero(); self.coeffs.len().saturating_sub(ddeg)];
        while let Some(rdeg) = rem.degree() {
            if rdeg < ddeg {
                break;
            }
            let factor = rem.leading().unwrap().clone() * dinv.clone();
            let shift = rdeg - ddeg;
            quot[shift] = factor.clone();
            // rem -= factor * x^shift * divisor
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let idx = i + shift;
                let v = rem.coeff(idx) - factor.clone() * dc.clone();
                if idx < rem.coeffs.len() {
                    rem.coeffs[idx] = v;
                }
            }
            rem.trim();
        }
        Some((Self::from_coeffs(quot), rem))
    }

    /// Exact quotient; errors when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self
            .div_rem(divisor)
            .ok_or_else(|| Error::input("division by zero polynomial"))?;
        if !r.is_zero() {
            return Err(Error::math(format!(
                "inexact polynomial division: remainder {}",
                r
            )));
        }
        Ok(q)
    }

    pub fn rem_mod(&self, modulus: &Self) -> Self {
        self.div_rem(modulus).map(|(_, r)| r).unwrap_or_else(|| self.clone())
    }

    /// All coefficients below `eps` (exact: all zero)?
    pub fn near_zero(&self, eps: f64) -> bool {
        self.coeffs.iter().all(|c| c.near_zero(eps))
    }

    /// Rewrite in powers of `(x + lambda)`: returns `c` with
    /// `self = sum_q c[q] (x+lambda)^q` (a shifted Taylor expansion,
    /// computed by repeated division).
    pub fn in_shifted_basis(&self, lambda: &F) -> Vec<F> {
        let base = Self::x_plus(lambda.clone());
        let mut rest = self.clone();
        let mut out = Vec::new();
        while !rest.is_zero() {
            let (q, r) = rest.div_rem(&base).unwrap();
            out.push(r.coeff(0));
            rest = q;
        }
        if out.is_empty() {
            out.push(F::zero());
        }
        out
    }

    /// Inverse of `in_shifted_basis`.
    pub fn from_shifted_basis(coeffs: &[F], lambda: &F) -> Self {
        let base = Self::x_plus(lambda.clone());
        let mut acc = Self::zero();
        for c in coeffs.iter().rev() {
            acc = acc * base.clone() + Self::constant(c.clone());
        }
        acc
    }
}

impl<F: Field> Add for DensePoly<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        Self::from_coeffs(out)
    }
}

impl<F: Field> Sub for DensePoly<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Field> Neg for DensePoly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_coeffs(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<F: Field> Mul for DensePoly<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(out)
    }
}
