//! Polynomial identities applied to concrete linear operators.
//!
//! An [`OperatorHandle`] is a square operator behind one of three
//! backends: a dense matrix, a diagonal spectral model, or an opaque
//! apply callback. All identities act through operator applications;
//! projector matrices are materialised only for small dense backends.

mod decomp;

pub use decomp::{
    alpha_forward, alpha_solve, build_decomposition, eigen_structure, filtration_expand,
    solve_backward, solve_forward, split_nullvector, EigenComponent, EigenStructure,
    OperatorDecomposition, SolveReport,
};

use crate::error::{Error, Result};
use crate::linalg::{vec_add, vec_norm, vec_scale, vec_sub, Mat};
use crate::polyalg::DensePoly;
use crate::scalar::Field;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Seed for the deterministic spot-check sampler.
pub const SPOT_CHECK_SEED: u64 = 0x5EED_0B5E_55ED_2024;

/// Tolerances threaded through operator-level checks. `eps` is the
/// floating equality epsilon; `null_tol` the relative null-membership
/// threshold (exact fields ignore both). `spot_seed` seeds the
/// deterministic sampler behind the linearity/commutation spot checks.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub eps: f64,
    pub null_tol: f64,
    pub spot_seed: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps: crate::scalar::DEFAULT_EPSILON,
            null_tol: 1e-8,
            spot_seed: SPOT_CHECK_SEED,
        }
    }
}

impl Tolerances {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.spot_seed = seed;
        self
    }
}

type ApplyFn<F> = Arc<dyn Fn(&[F]) -> Vec<F> + Send + Sync>;

#[derive(Clone)]
pub enum Backend<F: Field> {
    Dense(Mat<F>),
    /// Eigenvalue/multiplicity pairs; the operator is diagonal with each
    /// eigenvalue repeated along the diagonal.
    Diagonal(Vec<(F, usize)>),
    Apply(ApplyFn<F>),
}

#[derive(Clone)]
pub struct OperatorHandle<F: Field> {
    pub dim: usize,
    pub backend: Backend<F>,
}

impl<F: Field> std::fmt::Debug for OperatorHandle<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.backend {
            Backend::Dense(_) => write!(f, "OperatorHandle[dense {}x{}]", self.dim, self.dim),
            Backend::Diagonal(_) => write!(f, "OperatorHandle[diagonal {}]", self.dim),
            Backend::Apply(_) => write!(f, "OperatorHandle[apply {}]", self.dim),
        }
    }
}

/// Deterministic sample vector with small integer entries.
pub(crate) fn sample_vector<F: Field>(rng: &mut ChaCha8Rng, dim: usize) -> Vec<F> {
    (0..dim).map(|_| F::from_i64(rng.gen_range(-9..=9))).collect()
}

impl<F: Field> OperatorHandle<F> {
    pub fn dense(mat: Mat<F>) -> Result<Self> {
        if mat.rows != mat.cols {
            return Err(Error::input("dense operator must be square"));
        }
        Ok(Self { dim: mat.rows, backend: Backend::Dense(mat) })
    }

    pub fn diagonal(entries: Vec<(F, usize)>) -> Result<Self> {
        if entries.iter().any(|(_, m)| *m == 0) {
            return Err(Error::input("diagonal multiplicities must be positive"));
        }
        let dim = entries.iter().map(|(_, m)| m).sum();
        if dim == 0 {
            return Err(Error::input("diagonal operator must have positive dimension"));
        }
        Ok(Self { dim, backend: Backend::Diagonal(entries) })
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, backend: Backend::Dense(Mat::zeros(dim, dim)) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, backend: Backend::Dense(Mat::identity(dim)) }
    }

    /// Register a matrix-free operator. Linearity is spot-checked on
    /// random triples `(a, u, v)`: the callback must be re-entrant and
    /// satisfy `f(a u + v) = a f(u) + f(v)` within tolerance.
    pub fn from_apply(dim: usize, f: ApplyFn<F>, tol: &Tolerances) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("apply operator must have positive dimension"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(tol.spot_seed);
        for _ in 0..4 {
            let a = F::from_i64(rng.gen_range(-5..=5));
            let u: Vec<F> = sample_vector(&mut rng, dim);
            let v: Vec<F> = sample_vector(&mut rng, dim);
            let lhs = f(&vec_add(&vec_scale(&a, &u), &v));
            if lhs.len() != dim {
                return Err(Error::input("apply callback returned a wrong-length vector"));
            }
            let rhs = vec_add(&vec_scale(&a, &f(&u)), &f(&v));
            let diff = vec_sub(&lhs, &rhs);
            let scale = vec_norm(&rhs).max(1.0);
            if !crate::linalg::vec_is_zero(&diff, tol.eps * scale) {
                return Err(Error::input(
                    "apply callback failed the linearity spot check",
                ));
            }
        }
        Ok(Self { dim, backend: Backend::Apply(f) })
    }

    pub fn apply(&self, v: &[F]) -> Result<Vec<F>> {
        if v.len() != self.dim {
            return Err(Error::input(format!(
                "dimension mismatch: operator dim {}, vector dim {}",
                self.dim,
                v.len()
            )));
        }
        Ok(match &self.backend {
            Backend::Dense(m) => m.apply(v),
            Backend::Diagonal(entries) => {
                let mut out = Vec::with_capacity(self.dim);
                let mut idx = 0;
                for (e, mult) in entries {
                    for _ in 0..*mult {
                        out.push(e.clone() * v[idx].clone());
                        idx += 1;
                    }
                }
                out
            }
            Backend::Apply(f) => {
                let out = f(v);
                if out.len() != self.dim {
                    return Err(Error::input(
                        "apply callback returned a wrong-length vector",
                    ));
                }
                out
            }
        })
    }

    /// `(D + lambda) v`.
    pub fn apply_shifted(&self, lambda: &F, v: &[F]) -> Result<Vec<F>> {
        Ok(vec_add(&self.apply(v)?, &vec_scale(lambda, v)))
    }

    /// `(D + lambda)^p v`.
    pub fn apply_shifted_power(&self, lambda: &F, p: usize, v: &[F]) -> Result<Vec<F>> {
        let mut out = v.to_vec();
        for _ in 0..p {
            out = self.apply_shifted(lambda, &out)?;
        }
        Ok(out)
    }

    /// The diagonal as a flat vector, when the backend is diagonal.
    pub fn diagonal_entries(&self) -> Option<Vec<F>> {
        match &self.backend {
            Backend::Diagonal(entries) => {
                let mut out = Vec::with_capacity(self.dim);
                for (e, m) in entries {
                    out.extend(std::iter::repeat_n(e.clone(), *m));
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Materialise as a dense matrix. `None` for apply backends.
    pub fn to_matrix(&self) -> Option<Mat<F>> {
        match &self.backend {
            Backend::Dense(m) => Some(m.clone()),
            Backend::Diagonal(_) => {
                Some(Mat::diagonal(&self.diagonal_entries().unwrap()))
            }
            Backend::Apply(_) => None,
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.backend, Backend::Dense(_))
    }
}

/// Evaluate `q[D] v` through operator applications (Horner). Diagonal
/// backends evaluate `q` at each eigenvalue instead.
pub fn apply_poly<F: Field>(
    d: &OperatorHandle<F>,
    q: &DensePoly<F>,
    v: &[F],
) -> Result<Vec<F>> {
    if v.len() != d.dim {
        return Err(Error::input(format!(
            "dimension mismatch: operator dim {}, vector dim {}",
            d.dim,
            v.len()
        )));
    }
    if let Backend::Diagonal(_) = &d.backend {
        let diag = d.diagonal_entries().unwrap();
        return Ok(diag
            .iter()
            .zip(v)
            .map(|(e, x)| q.eval(e) * x.clone())
            .collect());
    }
    if q.is_zero() {
        return Ok(vec![F::zero(); d.dim]);
    }
    let coeffs = q.coeffs();
    let mut acc = vec_scale(coeffs.last().unwrap(), v);
    for c in coeffs.iter().rev().skip(1) {
        acc = vec_add(&d.apply(&acc)?, &vec_scale(c, v));
    }
    Ok(acc)
}

/// Evaluate a multivariate polynomial on a commuting operator family:
/// `mp[D_1, ..., D_k] v`, term by term.
pub fn apply_multipoly<F: Field>(
    family: &[OperatorHandle<F>],
    mp: &crate::mpoly::MultiPoly,
    v: &[F],
) -> Result<Vec<F>> {
    if family.is_empty() {
        return Err(Error::input("empty operator family"));
    }
    let dim = family[0].dim;
    if mp.nvars != family.len() {
        return Err(Error::input(format!(
            "polynomial in {} variables applied to a family of {} operators",
            mp.nvars,
            family.len()
        )));
    }
    let mut acc = vec![F::zero(); dim];
    for (mono, coeff) in mp.terms() {
        let mut w = v.to_vec();
        for (i, &e) in mono.0.iter().enumerate() {
            for _ in 0..e {
                w = family[i].apply(&w)?;
            }
        }
        acc = vec_add(&acc, &vec_scale(&F::from_rational(coeff), &w));
    }
    Ok(acc)
}

/// A family of operators checked for pairwise commutation on random
/// vectors. Commutation is the standing hypothesis everywhere downstream
/// and cannot be proven for apply backends, so a failed spot check is a
/// hard error.
#[derive(Clone, Debug)]
pub struct CommutingFamily<F: Field> {
    pub ops: Vec<OperatorHandle<F>>,
}

impl<F: Field> CommutingFamily<F> {
    pub fn new(ops: Vec<OperatorHandle<F>>, tol: &Tolerances) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::input("empty operator family"));
        }
        let dim = ops[0].dim;
        if ops.iter().any(|o| o.dim != dim) {
            return Err(Error::input("family members disagree on dimension"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(tol.spot_seed);
        for i in 0..ops.len() {
            for j in (i + 1)..ops.len() {
                for _ in 0..8 {
                    let v: Vec<F> = sample_vector(&mut rng, dim);
                    let ab = ops[i].apply(&ops[j].apply(&v)?)?;
                    let ba = ops[j].apply(&ops[i].apply(&v)?)?;
                    let diff = vec_sub(&ab, &ba);
                    let scale = vec_norm(&ab).max(vec_norm(&ba)).max(1.0);
                    if !crate::linalg::vec_is_zero(&diff, tol.eps * scale) {
                        return Err(Error::input(format!(
                            "operators {} and {} fail the commutation spot check",
                            i, j
                        )));
                    }
                }
            }
        }
        Ok(Self { ops })
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Apply the product of the operators indexed by `set` (in index
    /// order; they commute, so order is irrelevant).
    pub fn apply_subset(&self, set: &crate::posets::SubsetMask, v: &[F]) -> Result<Vec<F>> {
        let mut out = v.to_vec();
        for i in set.indices() {
            out = self.ops[i].apply(&out)?;
        }
        Ok(out)
    }

    /// Apply the complementary product `P^J = prod_{i not in J} P_i`.
    pub fn apply_complement(&self, set: &crate::posets::SubsetMask, v: &[F]) -> Result<Vec<F>> {
        let mut out = v.to_vec();
        for i in 0..self.ops.len() {
            if !set.contains(i) {
                out = self.ops[i].apply(&out)?;
            }
        }
        Ok(out)
    }
}
