//! Exact univariate polynomial arithmetic and partition-of-unity
//! identities.
//!
//! For a factored polynomial `P[x] = c (x+l_0)^{p_0} ... (x+l_m)^{p_m}`
//! with mutually distinct `l_i`, this module produces cofactors `Q_i` of
//! degree at most `p_i - 1` with `1 = sum_i Q_i[x] P^i[x]`, where
//! `P^i = P / (x+l_i)^{p_i}`. The construction expands each reciprocal
//! factor as a truncated series in `(x+l_i)` and normalises by dropping
//! powers `(x+l_i)^q` with `q >= p_i`.
//!
//! Sign convention: a stored root `l` means the factor `(x + l)`; the
//! generalized eigenvalue it corresponds to is `-l`.

pub mod dense;

pub use dense::DensePoly;

use crate::error::{Error, Result};
use crate::scalar::Field;
use num_complex::Complex64;

/// A univariate polynomial given as leading coefficient plus distinct
/// roots with multiplicities; the pair `(lambda, p)` stands for the
/// factor `(x + lambda)^p`.
#[derive(Clone, PartialEq, Debug)]
pub struct FactoredPoly<F: Field> {
    pub leading: F,
    pub factors: Vec<(F, usize)>,
}

impl<F: Field> FactoredPoly<F> {
    /// Validates: nonzero leading coefficient, multiplicities >= 1 and
    /// pairwise distinct roots (separated by more than `eps` in floating
    /// mode).
    pub fn new(leading: F, factors: Vec<(F, usize)>, eps: f64) -> Result<Self> {
        if leading.is_zero() {
            return Err(Error::input("leading coefficient must be nonzero"));
        }
        if factors.iter().any(|(_, p)| *p == 0) {
            return Err(Error::input("factor multiplicities must be >= 1"));
        }
        for i in 0..factors.len() {
            for j in (i + 1)..factors.len() {
                let d = factors[i].0.clone() - factors[j].0.clone();
                if d.near_zero(eps) {
                    return Err(if F::EXACT {
                        Error::input(format!(
                            "duplicate root: lambda_{} = lambda_{} = {}",
                            i, j, factors[i].0
                        ))
                    } else {
                        Error::input("ill-conditioned root cluster")
                    });
                }
            }
        }
        Ok(Self { leading, factors })
    }

    pub fn monic(factors: Vec<(F, usize)>, eps: f64) -> Result<Self> {
        Self::new(F::one(), factors, eps)
    }

    /// Number of factors minus one (the paper indexes factors 0..=ell).
    pub fn ell(&self) -> usize {
        self.factors.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|(_, p)| p).sum()
    }

    pub fn expand(&self) -> DensePoly<F> {
        let mut acc = DensePoly::constant(self.leading.clone());
        for (lambda, p) in &self.factors {
            acc = acc * DensePoly::x_plus(lambda.clone()).pow(*p);
        }
        acc
    }

    /// The monic factor `(x + lambda_i)^{p_i}`.
    pub fn factor_poly(&self, i: usize) -> DensePoly<F> {
        DensePoly::x_plus(self.factors[i].0.clone()).pow(self.factors[i].1)
    }

    /// The complementary product `P / (x+lambda_i)^{p_i}`, leading
    /// coefficient included.
    pub fn complement(&self, i: usize) -> DensePoly<F> {
        let mut acc = DensePoly::constant(self.leading.clone());
        for (j, (lambda, p)) in self.factors.iter().enumerate() {
            if j != i {
                acc = acc * DensePoly::x_plus(lambda.clone()).pow(*p);
            }
        }
        acc
    }

    /// Complement of a set of factor indices: `P / prod_{i in set}`.
    pub fn complement_of(&self, set: &[usize]) -> DensePoly<F> {
        let mut acc = DensePoly::constant(self.leading.clone());
        for (j, (lambda, p)) in self.factors.iter().enumerate() {
            if !set.contains(&j) {
                acc = acc * DensePoly::x_plus(lambda.clone()).pow(*p);
            }
        }
        acc
    }
}

/// How the cofactors of a [`UnityCertificate`] are grouped.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CertificateMode {
    /// One cofactor per factor.
    Full,
    /// Conjugate factor pairs combined into real cofactors.
    GroupedReal,
}

/// A machine-checkable witness of `1 = sum_i Q_i P^i`.
///
/// `groups[k]` lists the factor indices the k-th term covers; in `Full`
/// mode the groups are the singletons in order.
#[derive(Clone, Debug)]
pub struct UnityCertificate<F: Field> {
    pub source: FactoredPoly<F>,
    pub mode: CertificateMode,
    pub groups: Vec<Vec<usize>>,
    pub cofactors: Vec<DensePoly<F>>,
    pub complements: Vec<DensePoly<F>>,
}

impl<F: Field> UnityCertificate<F> {
    /// Re-expand `sum Q_k P^k` and compare against 1. Also re-checks the
    /// degree bound `deg Q_i <= p_i - 1` in full mode.
    pub fn verify(&self, eps: f64) -> Result<()> {
        let mut acc = DensePoly::zero();
        for (q, c) in self.cofactors.iter().zip(&self.complements) {
            acc = acc + q.clone() * c.clone();
        }
        let defect = acc - DensePoly::one();
        let scale = if F::EXACT { 1.0 } else { self.identity_scale() };
        if !defect.near_zero(eps * scale) {
            return Err(Error::math(format!(
                "unity certificate fails to re-expand to 1 (defect {})",
                defect
            )));
        }
        if self.mode == CertificateMode::Full {
            for (i, q) in self.cofactors.iter().enumerate() {
                let bound = self.source.factors[i].1 - 1;
                if q.degree().is_some_and(|d| d > bound) {
                    return Err(Error::math(format!(
                        "cofactor {} exceeds degree bound {}",
                        i, bound
                    )));
                }
            }
        }
        Ok(())
    }

    fn identity_scale(&self) -> f64 {
        let mut scale: f64 = 1.0;
        for (q, c) in self.cofactors.iter().zip(&self.complements) {
            let prod = q.clone() * c.clone();
            for coeff in prod.coeffs() {
                scale = scale.max(coeff.magnitude());
            }
        }
        scale
    }
}

/// Extended Euclidean algorithm for polynomials over an exact field.
///
/// Returns `(g, s, t)` with `g = gcd(a, b)` monic and `s*a + t*b = g`.
/// Rejected in floating mode; float workflows go through
/// [`partition_of_unity`]'s series path instead.
pub fn ext_gcd<F: Field>(
    a: &DensePoly<F>,
    b: &DensePoly<F>,
) -> Result<(DensePoly<F>, DensePoly<F>, DensePoly<F>)> {
    if !F::EXACT {
        return Err(Error::input("ext_gcd requires an exact coefficient field"));
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::input("ext_gcd(0, 0) is undefined"));
    }
    if a == b {
        // convention: witness the gcd through the first argument
        let lc_inv = a.leading().unwrap().inv().unwrap();
        return Ok((a.monic().unwrap(), DensePoly::constant(lc_inv), DensePoly::zero()));
    }
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (DensePoly::one(), DensePoly::zero());
    let (mut old_t, mut t) = (DensePoly::zero(), DensePoly::one());
    while !r.is_zero() {
        let (q, rem) = old_r.div_rem(&r).unwrap();
        old_r = std::mem::replace(&mut r, rem);
        let ns = old_s - q.clone() * s.clone();
        old_s = std::mem::replace(&mut s, ns);
        let nt = old_t - q * t.clone();
        old_t = std::mem::replace(&mut t, nt);
    }
    let lc_inv = old_r.leading().unwrap().inv().unwrap();
    Ok((
        old_r.scale(&lc_inv),
        old_s.scale(&lc_inv),
        old_t.scale(&lc_inv),
    ))
}

/// The truncated inverse series of `(x + mu)` on the space where
/// `(x + lambda)` is nilpotent of order `p`:
///
/// `(mu - lambda)^{-1} sum_{s=0}^{p-1} (x+lambda)^s / (lambda-mu)^s`.
///
/// The product with `(x + mu)` is congruent to 1 modulo `(x+lambda)^p`.
pub fn nilpotent_inverse_series<F: Field>(mu: &F, lambda: &F, p: usize) -> Result<DensePoly<F>> {
    let shifted = inverse_series_shifted(mu, lambda, p)?;
    Ok(DensePoly::from_shifted_basis(&shifted, lambda))
}

/// Same series, but as coefficients in the `(x+lambda)^s` basis.
fn inverse_series_shifted<F: Field>(mu: &F, lambda: &F, p: usize) -> Result<Vec<F>> {
    let d = mu.clone() - lambda.clone();
    let d_inv = d
        .inv()
        .ok_or_else(|| Error::input("series pole: roots coincide"))?;
    // coefficient of (x+lambda)^s is (-1)^s / d^{s+1}
    let mut out = Vec::with_capacity(p);
    let mut c = d_inv.clone();
    for s in 0..p {
        out.push(if s % 2 == 0 { c.clone() } else { -c.clone() });
        c = c * d_inv.clone();
    }
    Ok(out)
}

/// Truncated product of shifted-basis coefficient vectors.
fn truncated_mul<F: Field>(a: &[F], b: &[F], p: usize) -> Vec<F> {
    let mut out = vec![F::zero(); p];
    for (i, x) in a.iter().enumerate().take(p) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(p - i) {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// The normalised cofactor `Q_i = N(prod_{j != i} (x+l_j)^{-p_j}_{l_i})`,
/// before division by the leading coefficient, as shifted-basis
/// coefficients of length `p_i`.
fn normalized_cofactor_shifted<F: Field>(p: &FactoredPoly<F>, i: usize) -> Result<Vec<F>> {
    let (lambda_i, p_i) = (&p.factors[i].0, p.factors[i].1);
    let mut acc = vec![F::zero(); p_i];
    acc[0] = F::one();
    for (j, (lambda_j, p_j)) in p.factors.iter().enumerate() {
        if j == i {
            continue;
        }
        let series = inverse_series_shifted(lambda_j, lambda_i, p_i)?;
        for _ in 0..*p_j {
            acc = truncated_mul(&acc, &series, p_i);
        }
    }
    Ok(acc)
}

/// Partition of unity `1 = sum_i Q_i P^i` with `deg Q_i <= p_i - 1`.
///
/// The certificate is verified before being returned; `eps` only matters
/// in floating mode.
pub fn partition_of_unity<F: Field>(p: &FactoredPoly<F>, eps: f64) -> Result<UnityCertificate<F>> {
    // re-validate distinctness so certificates built from raw structs are
    // still checked
    let p = FactoredPoly::new(p.leading.clone(), p.factors.clone(), eps)?;
    let lead_inv = p.leading.inv().expect("leading nonzero");
    let mut cofactors = Vec::with_capacity(p.factors.len());
    let mut complements = Vec::with_capacity(p.factors.len());
    let mut groups = Vec::with_capacity(p.factors.len());
    for i in 0..p.factors.len() {
        let shifted = normalized_cofactor_shifted(&p, i)?;
        let q = DensePoly::from_shifted_basis(&shifted, &p.factors[i].0).scale(&lead_inv);
        cofactors.push(q);
        complements.push(p.complement(i));
        groups.push(vec![i]);
    }
    let cert = UnityCertificate {
        source: p,
        mode: CertificateMode::Full,
        groups,
        cofactors,
        complements,
    };
    cert.verify(eps)?;
    Ok(cert)
}

/// Closed-form simple-root cofactors `Q_i = prod_{j != i} 1/(l_j - l_i)`
/// (times the reciprocal leading coefficient). Requires all `p_i = 1`.
pub fn simple_root_cofactors<F: Field>(p: &FactoredPoly<F>) -> Result<Vec<F>> {
    if p.factors.iter().any(|(_, m)| *m != 1) {
        return Err(Error::input(
            "simple_root_cofactors requires all multiplicities equal to 1",
        ));
    }
    let lead_inv = p.leading.inv().expect("leading nonzero");
    let mut out = Vec::with_capacity(p.factors.len());
    for (i, (li, _)) in p.factors.iter().enumerate() {
        let mut q = lead_inv.clone();
        for (j, (lj, _)) in p.factors.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = lj.clone() - li.clone();
            q = q * d
                .inv()
                .ok_or_else(|| Error::input("duplicate root in simple_root_cofactors"))?;
        }
        out.push(q);
    }
    Ok(out)
}

use crate::scalar::GaussianRational;
use num_traits::Zero;

/// Partition of unity over Q(i) with conjugate factors combined so every
/// cofactor is real.
///
/// The root multiset must be closed under conjugation. Real roots keep
/// their own cofactor; each conjugate pair `k, conj(k)` contributes one
/// real cofactor against `P / ((x+k)(x+conj k))^{p_k}`.
pub fn real_partition(
    p: &FactoredPoly<GaussianRational>,
) -> Result<UnityCertificate<GaussianRational>> {
    if !p.leading.is_real() {
        return Err(Error::input("real_partition requires a real leading coefficient"));
    }
    // pair up conjugate roots
    let mut used = vec![false; p.factors.len()];
    let mut reals: Vec<usize> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..p.factors.len() {
        if used[i] {
            continue;
        }
        let (lambda, mult) = &p.factors[i];
        if lambda.is_real() {
            used[i] = true;
            reals.push(i);
            continue;
        }
        let conj = lambda.conj();
        let mate = (i + 1..p.factors.len())
            .find(|&j| !used[j] && p.factors[j].0 == conj && p.factors[j].1 == *mult);
        match mate {
            Some(j) => {
                used[i] = true;
                used[j] = true;
                pairs.push((i, j));
            }
            None => {
                return Err(Error::input(format!(
                    "root set is not closed under conjugation: no mate for {} (multiplicity {})",
                    lambda, mult
                )));
            }
        }
    }

    let full = partition_of_unity(p, 0.0)?;
    let mut groups = Vec::new();
    let mut cofactors = Vec::new();
    let mut complements = Vec::new();
    for &i in &reals {
        groups.push(vec![i]);
        cofactors.push(full.cofactors[i].clone());
        complements.push(full.complements[i].clone());
    }
    for &(i, j) in &pairs {
        let mult = p.factors[i].1;
        // Q_{m mbar} = Q_m (x+conj k)^p + Q_mbar (x+k)^p
        let q = full.cofactors[i].clone() * p.factor_poly(j)
            + full.cofactors[j].clone() * p.factor_poly(i);
        groups.push(vec![i, j]);
        cofactors.push(q);
        complements.push(p.complement_of(&[i, j]));
        debug_assert_eq!(mult, p.factors[j].1);
    }
    let cert = UnityCertificate {
        source: p.clone(),
        mode: CertificateMode::GroupedReal,
        groups,
        cofactors,
        complements,
    };
    // realness is part of the contract
    for q in &cert.cofactors {
        if q.coeffs().iter().any(|c| !Zero::is_zero(&c.im)) {
            return Err(Error::math(format!(
                "grouped cofactor has a nonzero imaginary part: {}",
                q
            )));
        }
    }
    cert.verify(0.0)?;
    Ok(cert)
}

/// Factor a floating-point polynomial by root finding.
///
/// Roots are located with the Durand-Kerner simultaneous iteration on
/// the monic normalisation; roots within `cluster_tol` of each other are
/// merged into a single root (their mean) with summed multiplicity. The
/// result is re-expanded and must match the input to within `1e-8`
/// relative coefficient error.
pub fn factor_numeric(
    p: &DensePoly<Complex64>,
    cluster_tol: f64,
) -> Result<FactoredPoly<Complex64>> {
    let deg = p
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::input("factor_numeric requires degree >= 1"))?;
    let leading = *p.leading().unwrap();
    let monic = p.monic().unwrap();
    let roots = durand_kerner(&monic, deg);

    // merge clusters (union-find over pairwise distances)
    let mut parent: Vec<usize> = (0..deg).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..deg {
        for j in (i + 1)..deg {
            if (roots[i] - roots[j]).norm() <= cluster_tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut clusters: std::collections::BTreeMap<usize, Vec<Complex64>> = Default::default();
    for i in 0..deg {
        let r = find(&mut parent, i);
        clusters.entry(r).or_default().push(roots[i]);
    }
    let mut factors = Vec::new();
    for members in clusters.values() {
        let mean = members.iter().sum::<Complex64>() / members.len() as f64;
        // a cluster of size m approximates a root of the (m-1)-th
        // derivative; a few Newton steps there restore full accuracy
        let polished = newton_polish(&monic, mean, members.len());
        factors.push((-polished, members.len()));
    }
    factors.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let result = FactoredPoly::new(leading, factors, 0.0)?;
    // residual gate
    let expanded = result.expand();
    let scale = p
        .coeffs()
        .iter()
        .map(|c| c.norm())
        .fold(1.0_f64, f64::max);
    let diff = expanded - p.clone();
    let err = diff.coeffs().iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    if err > 1e-8 * scale {
        return Err(Error::math(format!(
            "unreliable factorization: residual {:.3e} exceeds bound",
            err / scale
        )));
    }
    Ok(result)
}

fn newton_polish(monic: &DensePoly<Complex64>, start: Complex64, mult: usize) -> Complex64 {
    let mut target = monic.clone();
    for _ in 1..mult {
        target = target.derivative();
    }
    let deriv = target.derivative();
    let mut z = start;
    for _ in 0..60 {
        let d = deriv.eval(&z);
        if d.norm() < 1e-300 {
            break;
        }
        let step = target.eval(&z) / d;
        z -= step;
        if step.norm() <= 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    // keep the polish only if it did not wander off
    if (z - start).norm() <= 1e-2 * start.norm().max(1.0) {
        z
    } else {
        start
    }
}

/// Fields over which the toolkit can factor a dense polynomial into
/// linear factors: exact rationals (rational-root search) and floating
/// complex (numeric root finding). A field without an implementation
/// simply does not support spectrum-style operations.
pub trait FactorableField: Field {
    fn factor_poly(p: &DensePoly<Self>, eps: f64) -> Result<FactoredPoly<Self>>;
}

impl FactorableField for num_rational::BigRational {
    fn factor_poly(p: &DensePoly<Self>, _eps: f64) -> Result<FactoredPoly<Self>> {
        factor_rational_roots(p)
    }
}

impl FactorableField for Complex64 {
    fn factor_poly(p: &DensePoly<Self>, eps: f64) -> Result<FactoredPoly<Self>> {
        // cluster radius: comfortably above the equality epsilon
        factor_numeric(p, (eps * 100.0).max(1e-9))
    }
}

/// Factor a rational polynomial into linear factors by rational-root
/// search with deflation. Errors when the polynomial does not split over
/// the rationals (or when coefficient divisors get out of hand).
pub fn factor_rational_roots(
    p: &DensePoly<num_rational::BigRational>,
) -> Result<FactoredPoly<num_rational::BigRational>> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, ToPrimitive};

    if p.degree().is_none_or(|d| d < 1) {
        return Err(Error::input("factorization requires degree >= 1"));
    }
    let leading = p.leading().unwrap().clone();
    let mut rest = p.monic().unwrap();
    let mut factors: Vec<(BigRational, usize)> = Vec::new();

    // strip roots at zero first
    let mut zero_mult = 0usize;
    while !rest.is_zero() && Field::is_zero(&rest.coeff(0)) && rest.degree() != Some(0) {
        rest = rest
            .div_rem(&DensePoly::x())
            .map(|(q, _)| q)
            .unwrap();
        zero_mult += 1;
    }
    if zero_mult > 0 {
        factors.push((BigRational::from(BigInt::from(0)), zero_mult));
    }

    while rest.degree().is_some_and(|d| d >= 1) {
        // integer model: multiply by the lcm of denominators
        let mut denom_lcm = BigInt::one();
        for c in rest.coeffs() {
            denom_lcm = num_integer::lcm(denom_lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> = rest
            .coeffs()
            .iter()
            .map(|c| (c * BigRational::from(denom_lcm.clone())).to_integer())
            .collect();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let bound = BigInt::from(1_000_000_000_000u64);
        if a0 > bound || an > bound {
            return Err(Error::budget(
                "rational-root search: coefficients too large to enumerate divisors",
            ));
        }
        let a0u = a0.to_u64().unwrap();
        let anu = an.to_u64().unwrap();
        let mut root: Option<BigRational> = None;
        'search: for num in divisors(a0u) {
            for den in divisors(anu) {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(
                        BigInt::from(sign) * BigInt::from(num),
                        BigInt::from(den),
                    );
                    if Field::is_zero(&rest.eval(&cand)) {
                        root = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        let Some(r) = root else {
            return Err(Error::math(format!(
                "polynomial does not split over the rationals (stuck at {})",
                rest
            )));
        };
        // deflate with full multiplicity; factor is (x + lambda), lambda = -r
        let lin = DensePoly::x_plus(-r.clone());
        let mut mult = 0usize;
        loop {
            let (q, rem) = rest.div_rem(&lin).unwrap();
            if rem.is_zero() {
                rest = q;
                mult += 1;
            } else {
                break;
            }
        }
        factors.push((-r, mult));
    }
    FactoredPoly::new(leading, factors, 0.0)
}

fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        // zero constant term is handled by the zero-root strip; if it
        // still shows up, only the trivial divisor matters
        return vec![1];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Durand-Kerner simultaneous root iteration for a monic polynomial.
fn durand_kerner(monic: &DensePoly<Complex64>, deg: usize) -> Vec<Complex64> {
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| seed.powu(k as u32 + 1))
        .collect();
    let scale = monic
        .coeffs()
        .iter()
        .map(|c| c.norm())
        .fold(1.0_f64, f64::max);
    for _ in 0..1000 {
        let mut max_step = 0.0_f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                // nudge coincident iterates apart
                z[i] += Complex64::new(1e-8, 1e-8);
                continue;
            }
            let step = monic.eval(&z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step <= 1e-14 * scale.max(1.0) {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};
    use num_rational::BigRational;

    fn poly(cs: &[i64]) -> DensePoly<BigRational> {
        DensePoly::from_coeffs(cs.iter().map(|&c| rat_int(c)).collect())
    }

    fn fp(factors: &[(i64, usize)]) -> FactoredPoly<BigRational> {
        FactoredPoly::monic(
            factors.iter().map(|&(l, p)| (rat_int(l), p)).collect(),
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn ext_gcd_cases() {
        // (x+1, x+2): g = 1, s = -1, t = 1
        let (g, s, t) = ext_gcd(&poly(&[1, 1]), &poly(&[2, 1])).unwrap();
        assert_eq!(g, poly(&[1]));
        assert_eq!(s, poly(&[-1]));
        assert_eq!(t, poly(&[1]));

        // identical inputs: g = x^2, s = 1, t = 0
        let (g, s, t) = ext_gcd(&poly(&[0, 0, 1]), &poly(&[0, 0, 1])).unwrap();
        assert_eq!(g, poly(&[0, 0, 1]));
        assert_eq!(s, poly(&[1]));
        assert_eq!(t, poly(&[]));

        // (x^2, x+1): g = 1, s = 1, t = 1 - x
        let (g, s, t) = ext_gcd(&poly(&[0, 0, 1]), &poly(&[1, 1])).unwrap();
        assert_eq!(g, poly(&[1]));
        assert_eq!(s, poly(&[1]));
        assert_eq!(t, poly(&[1, -1]));
    }

    #[test]
    fn ext_gcd_bezout_property() {
        let a = poly(&[2, 0, 3, 1]);
        let b = poly(&[-1, 4, 1]);
        let (g, s, t) = ext_gcd(&a, &b).unwrap();
        assert_eq!(s * a + t * b, g);
    }

    #[test]
    fn inverse_series_examples() {
        // mu=1, lambda=0, p=2 -> 1 - x
        let q = nilpotent_inverse_series(&rat_int(1), &rat_int(0), 2).unwrap();
        assert_eq!(q, poly(&[1, -1]));
        // product with (x+1) is 1 mod x^2
        let prod = q * poly(&[1, 1]);
        assert_eq!(prod.rem_mod(&poly(&[0, 0, 1])), poly(&[1]));

        // mu=2, lambda=0, p=1 -> 1/2
        let q = nilpotent_inverse_series(&rat_int(2), &rat_int(0), 1).unwrap();
        assert_eq!(q, DensePoly::constant(rat(1, 2)));

        // mu=0, lambda=1, p=3: product with x is 1 mod (x+1)^3
        let q = nilpotent_inverse_series(&rat_int(0), &rat_int(1), 3).unwrap();
        let expected = -(poly(&[1])
            + poly(&[1, 1])
            + poly(&[1, 1]) * poly(&[1, 1]));
        assert_eq!(q, expected);
        let modulus = poly(&[1, 1]).pow(3);
        assert_eq!((q * poly(&[0, 1])).rem_mod(&modulus), poly(&[1]));
    }

    #[test]
    fn series_pole_rejected() {
        let err = nilpotent_inverse_series(&rat_int(3), &rat_int(3), 2).unwrap_err();
        assert!(err.to_string().contains("series pole"));
    }

    #[test]
    fn partition_simple_pair() {
        // (x+1)(x+2): Q_0 = 1, Q_1 = -1
        let p = fp(&[(1, 1), (2, 1)]);
        let cert = partition_of_unity(&p, 0.0).unwrap();
        assert_eq!(cert.cofactors[0], poly(&[1]));
        assert_eq!(cert.cofactors[1], poly(&[-1]));
        cert.verify(0.0).unwrap();
    }

    #[test]
    fn partition_single_factor() {
        let p = fp(&[(5, 3)]);
        let cert = partition_of_unity(&p, 0.0).unwrap();
        assert_eq!(cert.cofactors.len(), 1);
        assert_eq!(cert.cofactors[0], poly(&[1]));
        assert_eq!(cert.complements[0], poly(&[1]));
    }

    #[test]
    fn partition_with_multiplicity() {
        // x^2 (x+1): Q_0 = 1 - x against (x+1), Q_1 = 1 against x^2
        let p = fp(&[(0, 2), (1, 1)]);
        let cert = partition_of_unity(&p, 0.0).unwrap();
        assert_eq!(cert.cofactors[0], poly(&[1, -1]));
        assert_eq!(cert.cofactors[1], poly(&[1]));
    }

    #[test]
    fn partition_rejects_duplicates() {
        let p = FactoredPoly {
            leading: rat_int(1),
            factors: vec![(rat_int(1), 1), (rat_int(1), 2)],
        };
        assert!(partition_of_unity(&p, 0.0).is_err());
    }

    #[test]
    fn partition_nonmonic() {
        let p = FactoredPoly::new(rat_int(3), vec![(rat_int(0), 2), (rat_int(-1), 2)], 0.0)
            .unwrap();
        let cert = partition_of_unity(&p, 0.0).unwrap();
        cert.verify(0.0).unwrap();
    }

    #[test]
    fn simple_root_closed_form_agrees() {
        let p = fp(&[(1, 1), (2, 1), (-3, 1)]);
        let cert = partition_of_unity(&p, 0.0).unwrap();
        let consts = simple_root_cofactors(&p).unwrap();
        for (q, c) in cert.cofactors.iter().zip(&consts) {
            assert_eq!(q, &DensePoly::constant(c.clone()));
        }
    }

    #[test]
    fn real_partition_pure_pair() {
        // (x+i)(x-i) = x^2 + 1: single group, Q = 1 against P^{pair} = 1
        let i = GaussianRational::i();
        let p = FactoredPoly::monic(vec![(i.clone(), 1), (-i.clone(), 1)], 0.0).unwrap();
        let cert = real_partition(&p).unwrap();
        assert_eq!(cert.cofactors.len(), 1);
        assert_eq!(cert.cofactors[0], DensePoly::one());
        assert_eq!(cert.complements[0], DensePoly::one());
    }

    #[test]
    fn real_partition_mixed() {
        // x (x^2+1): one real root and a conjugate pair
        let i = GaussianRational::i();
        let zero = GaussianRational::from_i64(0);
        let p = FactoredPoly::monic(
            vec![(zero, 1), (i.clone(), 1), (-i.clone(), 1)],
            0.0,
        )
        .unwrap();
        let cert = real_partition(&p).unwrap();
        assert_eq!(cert.cofactors.len(), 2);
        cert.verify(0.0).unwrap();
        for q in &cert.cofactors {
            assert!(q.coeffs().iter().all(|c| Zero::is_zero(&c.im)));
        }
    }

    #[test]
    fn real_partition_all_real_matches_full() {
        let one = GaussianRational::from_i64(1);
        let two = GaussianRational::from_i64(2);
        let p = FactoredPoly::monic(vec![(one, 1), (two, 1)], 0.0).unwrap();
        let grouped = real_partition(&p).unwrap();
        let full = partition_of_unity(&p, 0.0).unwrap();
        assert_eq!(grouped.cofactors, full.cofactors);
        assert_eq!(grouped.complements, full.complements);
    }

    #[test]
    fn real_partition_rejects_unpaired() {
        let i = GaussianRational::i();
        let p = FactoredPoly::monic(vec![(i, 1)], 0.0).unwrap();
        assert!(real_partition(&p).is_err());
    }

    #[test]
    fn factor_numeric_quadratic() {
        // x^2 - 3x + 2 -> roots 1, 2 stored as lambda = -1, -2
        let p = DensePoly::from_coeffs(vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(-3.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let f = factor_numeric(&p, 1e-6).unwrap();
        assert_eq!(f.factors.len(), 2);
        let mut lambdas: Vec<f64> = f.factors.iter().map(|(l, _)| l.re).collect();
        lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((lambdas[0] + 2.0).abs() < 1e-9);
        assert!((lambdas[1] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn factor_numeric_double_root() {
        let p = DensePoly::from_coeffs(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let f = factor_numeric(&p, 1e-6).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].1, 2);
        assert!(f.factors[0].0.norm() < 1e-7);
    }

    #[test]
    fn factor_numeric_near_triple_cluster() {
        // (x-1)^2 (x-1.0000001) with wide tolerance collapses to one root
        let a = DensePoly::from_coeffs(vec![
            Complex64::new(-1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let b = DensePoly::from_coeffs(vec![
            Complex64::new(-1.000_000_1, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let p = a.clone() * a * b;
        let f = factor_numeric(&p, 1e-3).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].1, 3);
    }
}
