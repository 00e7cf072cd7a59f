//! Decompositions of an operator along a factored polynomial: projector
//! construction, null-space splitting, and the forward/backward maps of
//! the inhomogeneous-problem equivalence.

use super::{apply_multipoly, apply_poly, sample_vector, CommutingFamily, OperatorHandle, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{vec_add, vec_is_zero, vec_norm, vec_scale, vec_sub, Mat};
use crate::mpoly::MultiPoly;
use crate::polyalg::{partition_of_unity, DensePoly, FactoredPoly, FactorableField, UnityCertificate};
use crate::posets::{AlphaSystem, SubsetMask};
use crate::scalar::Field;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Projector matrices are materialised only below this dense dimension.
const MATERIALIZE_LIMIT: usize = 64;

/// An operator together with a factored polynomial annihilating
/// structure and the partition-of-unity certificate that drives all
/// projector and solve operations.
pub struct OperatorDecomposition<F: Field> {
    pub base: OperatorHandle<F>,
    pub poly: FactoredPoly<F>,
    pub certificate: UnityCertificate<F>,
    pub tol: Tolerances,
    projector_mats: Option<Vec<Mat<F>>>,
}

/// Outcome of a backward solve: the reconstruction, the factor-problem
/// components it came from, and the relative residual
/// `|P u - f| / max(|f|, 1)`.
#[derive(Clone, Debug)]
pub struct SolveReport<F: Field> {
    pub residual: f64,
    pub exact_zero: bool,
    pub components: Vec<Vec<F>>,
    pub reconstruction: Vec<F>,
}

/// Build the decomposition: runs the partition of unity on `poly` and
/// spot-checks the operator identity `sum Q_i[D] P^i[D] = id` on random
/// vectors. Projectors are materialised for small dense/diagonal
/// backends and act through repeated applies otherwise.
pub fn build_decomposition<F: Field>(
    base: OperatorHandle<F>,
    poly: FactoredPoly<F>,
    tol: Tolerances,
) -> Result<OperatorDecomposition<F>> {
    let certificate = partition_of_unity(&poly, tol.eps)?;
    let mut dec = OperatorDecomposition {
        base,
        poly,
        certificate,
        tol,
        projector_mats: None,
    };
    if dec.base.dim <= MATERIALIZE_LIMIT {
        if let Some(m) = dec.base.to_matrix() {
            let mats = (0..dec.poly.factors.len())
                .map(|i| projector_matrix(&m, &dec, i))
                .collect();
            dec.projector_mats = Some(mats);
        }
    }
    // identity spot check (holds on all of V, not just the null space)
    let mut rng = ChaCha8Rng::seed_from_u64(dec.tol.spot_seed);
    for _ in 0..3 {
        let v: Vec<F> = sample_vector(&mut rng, dec.base.dim);
        let mut acc = vec![F::zero(); dec.base.dim];
        for i in 0..dec.poly.factors.len() {
            let w = dec.apply_complement(i, &v)?;
            acc = vec_add(&acc, &apply_poly(&dec.base, &dec.certificate.cofactors[i], &w)?);
        }
        let diff = vec_sub(&acc, &v);
        let scale = vec_norm(&v).max(1.0);
        if !vec_is_zero(&diff, dec.tol.eps * scale) {
            return Err(Error::math(
                "partition-of-unity operator identity failed its spot check",
            ));
        }
    }
    Ok(dec)
}

fn projector_matrix<F: Field>(
    m: &Mat<F>,
    dec: &OperatorDecomposition<F>,
    i: usize,
) -> Mat<F> {
    // Proj_i = Q_i[D] P^i[D]
    let n = m.rows;
    let mut cols = Vec::with_capacity(n);
    for c in 0..n {
        let mut e = vec![F::zero(); n];
        e[c] = F::one();
        let w = dec.apply_complement_with(m, i, &e);
        cols.push(poly_apply_matrix(m, &dec.certificate.cofactors[i], &w));
    }
    Mat::from_cols(n, &cols)
}

fn poly_apply_matrix<F: Field>(m: &Mat<F>, q: &DensePoly<F>, v: &[F]) -> Vec<F> {
    if q.is_zero() {
        return vec![F::zero(); v.len()];
    }
    let coeffs = q.coeffs();
    let mut acc = vec_scale(coeffs.last().unwrap(), v);
    for c in coeffs.iter().rev().skip(1) {
        acc = vec_add(&m.apply(&acc), &vec_scale(c, v));
    }
    acc
}

impl<F: Field> OperatorDecomposition<F> {
    pub fn dim(&self) -> usize {
        self.base.dim
    }

    pub fn num_factors(&self) -> usize {
        self.poly.factors.len()
    }

    /// `P[D] v`, computed factor by factor.
    pub fn apply_full(&self, v: &[F]) -> Result<Vec<F>> {
        let mut out = vec_scale(&self.poly.leading, v);
        for (lambda, p) in &self.poly.factors {
            out = self.base.apply_shifted_power(lambda, *p, &out)?;
        }
        Ok(out)
    }

    /// `P^i[D] v` (the complementary product, leading coefficient
    /// included).
    pub fn apply_complement(&self, i: usize, v: &[F]) -> Result<Vec<F>> {
        let mut out = vec_scale(&self.poly.leading, v);
        for (j, (lambda, p)) in self.poly.factors.iter().enumerate() {
            if j != i {
                out = self.base.apply_shifted_power(lambda, *p, &out)?;
            }
        }
        Ok(out)
    }

    fn apply_complement_with(&self, m: &Mat<F>, i: usize, v: &[F]) -> Vec<F> {
        let mut out = vec_scale(&self.poly.leading, v);
        for (j, (lambda, p)) in self.poly.factors.iter().enumerate() {
            if j != i {
                for _ in 0..*p {
                    out = vec_add(&m.apply(&out), &vec_scale(lambda, &out));
                }
            }
        }
        out
    }

    /// `Proj_i v = Q_i[D] P^i[D] v`.
    pub fn apply_projector(&self, i: usize, v: &[F]) -> Result<Vec<F>> {
        if let Some(mats) = &self.projector_mats {
            return Ok(mats[i].apply(v));
        }
        let w = self.apply_complement(i, v)?;
        apply_poly(&self.base, &self.certificate.cofactors[i], &w)
    }

    pub fn projector_matrix(&self, i: usize) -> Option<&Mat<F>> {
        self.projector_mats.as_ref().map(|m| &m[i])
    }

    /// Relative residual of `u` as a null vector of `P[D]`.
    pub fn null_residual(&self, u: &[F]) -> Result<f64> {
        let pu = self.apply_full(u)?;
        Ok(vec_norm(&pu) / vec_norm(u).max(1.0))
    }

    fn require_null(&self, u: &[F]) -> Result<()> {
        let pu = self.apply_full(u)?;
        let scale = vec_norm(u).max(1.0);
        if !vec_is_zero(&pu, self.tol.null_tol * scale) {
            return Err(Error::Input(format!(
                "vector is not in the null space of P[D]: relative residual {:.3e}",
                vec_norm(&pu) / scale
            )));
        }
        Ok(())
    }
}

/// Split a certified null vector of `P[D]` into its projector
/// components; each component lands in the null space of its factor and
/// the components sum back to `u`.
pub fn split_nullvector<F: Field>(
    dec: &OperatorDecomposition<F>,
    u: &[F],
) -> Result<Vec<Vec<F>>> {
    dec.require_null(u)?;
    let mut parts = Vec::with_capacity(dec.num_factors());
    let mut total = vec![F::zero(); u.len()];
    for i in 0..dec.num_factors() {
        let part = dec.apply_projector(i, u)?;
        total = vec_add(&total, &part);
        parts.push(part);
    }
    let scale = vec_norm(u).max(1.0);
    if !vec_is_zero(&vec_sub(&total, u), dec.tol.null_tol * scale) {
        return Err(Error::math("projector components do not sum back to the input"));
    }
    for (i, part) in parts.iter().enumerate() {
        let (lambda, p) = &dec.poly.factors[i];
        let w = dec.base.apply_shifted_power(lambda, *p, part)?;
        if !vec_is_zero(&w, dec.tol.null_tol * scale) {
            return Err(Error::math(format!(
                "component {} escapes the null space of its factor",
                i
            )));
        }
    }
    Ok(parts)
}

/// The forward map of the inhomogeneous equivalence: `u` goes to the
/// tuple `(P^0[D] u, ..., P^m[D] u)` of factor-problem solutions.
pub fn solve_forward<F: Field>(
    dec: &OperatorDecomposition<F>,
    u: &[F],
) -> Result<Vec<Vec<F>>> {
    (0..dec.num_factors())
        .map(|i| dec.apply_complement(i, u))
        .collect()
}

/// The backward map: reconstruct `u = sum_i Q_i[D] u_i` from a tuple of
/// factor-problem solutions `(D + lambda_i)^{p_i} u_i = f`, and report
/// the residual of `P u = f`.
pub fn solve_backward<F: Field>(
    dec: &OperatorDecomposition<F>,
    tuple: &[Vec<F>],
    f: &[F],
) -> Result<SolveReport<F>> {
    if tuple.len() != dec.num_factors() {
        return Err(Error::input(format!(
            "tuple length {} does not match factor count {}",
            tuple.len(),
            dec.num_factors()
        )));
    }
    let scale = vec_norm(f).max(1.0);
    for (i, u_i) in tuple.iter().enumerate() {
        let (lambda, p) = &dec.poly.factors[i];
        // factor problems are posed for the monic factors; the leading
        // coefficient belongs to the complements
        let w = dec.base.apply_shifted_power(lambda, *p, u_i)?;
        if !vec_is_zero(&vec_sub(&w, f), dec.tol.null_tol * scale) {
            return Err(Error::input(format!(
                "tuple entry {} does not solve its factor problem",
                i
            )));
        }
    }
    let mut u = vec![F::zero(); dec.dim()];
    for (i, u_i) in tuple.iter().enumerate() {
        u = vec_add(&u, &apply_poly(&dec.base, &dec.certificate.cofactors[i], u_i)?);
    }
    let defect = vec_sub(&dec.apply_full(&u)?, f);
    Ok(SolveReport {
        residual: vec_norm(&defect) / scale,
        exact_zero: defect.iter().all(|c| c.is_zero()),
        components: tuple.to_vec(),
        reconstruction: u,
    })
}

/// Forward map for a generalized system: `u` goes to `(P^J u)_{J in
/// alpha}` in the member order of `alpha`.
pub fn alpha_forward<F: Field>(
    factors: &CommutingFamily<F>,
    alpha: &AlphaSystem,
    u: &[F],
) -> Result<BTreeMap<SubsetMask, Vec<F>>> {
    alpha.check_alpha_role()?;
    let mut out = BTreeMap::new();
    for j in &alpha.members {
        out.insert(*j, factors.apply_complement(j, u)?);
    }
    Ok(out)
}

/// Backward map for a generalized system: given cofactor polynomials
/// `Q_J` in the commuting family `d_family` and a tuple with
/// `P_J u_J = f`, reconstruct `u = sum_J Q_J[D] u_J` and report the
/// residual of `P u = f`.
///
/// When the members of `alpha` are pairwise disjoint the forward map
/// inverts this one on solution tuples; with overlapping members the
/// reconstruction still solves `P u = f` but the round trip can move the
/// tuple.
pub fn alpha_solve<F: Field>(
    factors: &CommutingFamily<F>,
    d_family: &CommutingFamily<F>,
    alpha: &AlphaSystem,
    cofactors: &BTreeMap<SubsetMask, MultiPoly>,
    tuple: &BTreeMap<SubsetMask, Vec<F>>,
    f: &[F],
    tol: &Tolerances,
) -> Result<SolveReport<F>> {
    alpha.check_alpha_role()?;
    if factors.dim() != d_family.dim() {
        return Err(Error::input("factor and family dimensions disagree"));
    }
    let scale = vec_norm(f).max(1.0);
    for j in &alpha.members {
        let u_j = tuple.get(j).ok_or_else(|| {
            Error::input(format!("tuple is missing entry for {:?}", j.indices()))
        })?;
        let w = factors.apply_subset(j, u_j)?;
        if !vec_is_zero(&vec_sub(&w, f), tol.null_tol * scale) {
            return Err(Error::input(format!(
                "tuple entry for {:?} does not solve its subsystem",
                j.indices()
            )));
        }
    }
    let mut u = vec![F::zero(); factors.dim()];
    let mut components = Vec::new();
    for j in &alpha.members {
        let q = cofactors.get(j).ok_or_else(|| {
            Error::input(format!("missing cofactor for {:?}", j.indices()))
        })?;
        let u_j = &tuple[j];
        u = vec_add(&u, &apply_multipoly(&d_family.ops, q, u_j)?);
        components.push(u_j.clone());
    }
    let full = SubsetMask::EMPTY;
    let pu = factors.apply_complement(&full, &u)?;
    let defect = vec_sub(&pu, f);
    Ok(SolveReport {
        residual: vec_norm(&defect) / scale,
        exact_zero: defect.iter().all(|c| c.is_zero()),
        components,
        reconstruction: u,
    })
}

/// Expand a factor-null vector into its canonical graded pieces: with
/// `Q_i = sum_s c_s (x+lambda_i)^s`, the piece of grade `s` is
/// `c_s (D+lambda_i)^s P^i[D] u_i`. The pieces sum to `u_i` and the
/// grade-`s` piece is annihilated by `(D+lambda_i)^{p_i - s}`. The
/// grade-0 coefficient is `prod_{j != i} (lambda_j - lambda_i)^{-p_j}`
/// (over the leading coefficient).
pub fn filtration_expand<F: Field>(
    dec: &OperatorDecomposition<F>,
    i: usize,
    u_i: &[F],
) -> Result<Vec<Vec<F>>> {
    let (lambda, p) = dec.poly.factors[i].clone();
    let scale = vec_norm(u_i).max(1.0);
    let w0 = dec.base.apply_shifted_power(&lambda, p, u_i)?;
    if !vec_is_zero(&w0, dec.tol.null_tol * scale) {
        return Err(Error::input(format!(
            "vector is not annihilated by factor {} (relative residual {:.3e})",
            i,
            vec_norm(&w0) / scale
        )));
    }
    let shifted = dec.certificate.cofactors[i].in_shifted_basis(&lambda);
    let base = dec.apply_complement(i, u_i)?;
    let mut pieces = Vec::with_capacity(p);
    let mut power = base;
    for s in 0..p {
        let c = shifted.get(s).cloned().unwrap_or_else(F::zero);
        pieces.push(vec_scale(&c, &power));
        if s + 1 < p {
            power = dec.base.apply_shifted(&lambda, &power)?;
        }
    }
    let mut total = vec![F::zero(); u_i.len()];
    for piece in &pieces {
        total = vec_add(&total, piece);
    }
    if !vec_is_zero(&vec_sub(&total, u_i), dec.tol.null_tol * scale) {
        return Err(Error::math("filtration pieces do not sum back to the input"));
    }
    Ok(pieces)
}

/// One generalized eigencomponent of an eigenspace report.
#[derive(Clone, Debug)]
pub struct EigenComponent<F: Field> {
    /// Factor root: the component solves `(D + lambda)^{multiplicity}`.
    pub lambda: F,
    pub multiplicity: usize,
    /// Dimension of the component (dense/diagonal backends).
    pub dim: usize,
}

/// The mu-eigenspace of `P[D]` described through generalized eigendata
/// of `D`.
#[derive(Clone, Debug)]
pub struct EigenStructure<F: Field> {
    pub mu: F,
    pub shifted: FactoredPoly<F>,
    pub components: Vec<EigenComponent<F>>,
    pub total_dim: usize,
    /// `dim N(P[D] - mu)` computed independently by rank.
    pub independent_dim: usize,
}

/// Describe the mu-eigenspace of `P[D]`: factor `P - mu` over the field,
/// decompose the eigenspace into generalized eigenspaces of `D`, and
/// cross-check the dimension count against a direct rank computation.
/// Requires a dense or diagonal backend (apply backends expose no rank).
pub fn eigen_structure<F: FactorableField>(
    base: &OperatorHandle<F>,
    poly: &FactoredPoly<F>,
    mu: &F,
    tol: Tolerances,
) -> Result<EigenStructure<F>> {
    let shifted_dense = poly.expand() - DensePoly::constant(mu.clone());
    let shifted = F::factor_poly(&shifted_dense, tol.eps)?;
    let m = base.to_matrix().ok_or_else(|| {
        Error::input("eigen_structure requires a dense or diagonal backend")
    })?;
    let mut components = Vec::new();
    let mut total = 0usize;
    for (lambda, p) in &shifted.factors {
        let mut factor_mat = Mat::identity(base.dim);
        for _ in 0..*p {
            let mut shift = m.clone();
            for i in 0..base.dim {
                shift[(i, i)] = shift[(i, i)].clone() + lambda.clone();
            }
            factor_mat = shift * factor_mat;
        }
        let dim = base.dim - factor_mat.rank(tol.eps);
        total += dim;
        components.push(EigenComponent {
            lambda: lambda.clone(),
            multiplicity: *p,
            dim,
        });
    }
    // independent check: rank of P[D] - mu
    let mut pm = Mat::identity(base.dim).scale(&poly.leading);
    for (lambda, p) in &poly.factors {
        for _ in 0..*p {
            let mut shift = m.clone();
            for i in 0..base.dim {
                shift[(i, i)] = shift[(i, i)].clone() + lambda.clone();
            }
            pm = shift * pm;
        }
    }
    for i in 0..base.dim {
        pm[(i, i)] = pm[(i, i)].clone() - mu.clone();
    }
    let independent = base.dim - pm.rank(tol.eps);
    if independent != total {
        return Err(Error::math(format!(
            "eigenspace dimension mismatch: components sum to {}, rank says {}",
            total, independent
        )));
    }
    Ok(EigenStructure {
        mu: mu.clone(),
        shifted,
        components,
        total_dim: total,
        independent_dim: independent,
    })
}
