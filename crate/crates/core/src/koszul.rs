//! The Koszul complex of a commuting operator family.
//!
//! For factors `P_0, ..., P_m` acting on `V`, the complex places a copy
//! `V_J` of `V` at every subset `J` of `L = {0..m}` and connects them by
//! the signed maps
//!
//! `P_{J,i} = (-1)^{|J<i|} P_i : V_J -> V_{J u {i}}`,
//! `|J<i| = #{j in J : j < i}`.
//!
//! Commutation alone makes the grades compose to zero; a homotopy family
//! `Q_i` with `sum Q_i P_i = id` and `[Q_i, P_j] = 0` makes the complex
//! exact, witnessed by the grade-wise identity
//! `Q(p+1) P(p) + P(p-1) Q(p) = id`. The backward maps carry the same
//! sign bookkeeping: `(-1)^{|J\{j\} < j|} Q_j : V_J -> V_{J \ {j}}`.

use crate::error::{Error, Result};
use crate::linalg::{vec_add, vec_is_zero, vec_norm, vec_sub, Mat};
use crate::opcore::{sample_vector, CommutingFamily, OperatorHandle, Tolerances};
use crate::posets::{IndexSet, SubsetMask};
use crate::scalar::Field;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Densest complex we are willing to materialise for rank computations.
pub const RANK_DIM_BUDGET: usize = 4096;

pub struct KoszulComplex<F: Field> {
    pub ground: IndexSet,
    pub dim: usize,
    pub factors: CommutingFamily<F>,
    pub homotopy: Option<Vec<OperatorHandle<F>>>,
    pub tol: Tolerances,
}

/// The Koszul sign `(-1)^{|J<i|}` as a field element.
pub fn koszul_sign<F: Field>(j_set: &SubsetMask, i: usize) -> F {
    if j_set.count_below(i).is_multiple_of(2) {
        F::one()
    } else {
        -F::one()
    }
}

/// Build the complex; the factors are spot-checked for pairwise
/// commutation (hard error on failure).
pub fn build_complex<F: Field>(
    factors: Vec<OperatorHandle<F>>,
    tol: Tolerances,
) -> Result<KoszulComplex<F>> {
    let ground = IndexSet::new(factors.len().saturating_sub(1))?;
    let family = CommutingFamily::new(factors, &tol)?;
    Ok(KoszulComplex {
        ground,
        dim: family.dim(),
        factors: family,
        homotopy: None,
        tol,
    })
}

impl<F: Field> KoszulComplex<F> {
    /// Attach a homotopy family; `[Q_i, P_j] = 0` and `sum Q_i P_i = id`
    /// are spot-checked on random vectors.
    pub fn with_homotopy(mut self, homotopy: Vec<OperatorHandle<F>>) -> Result<Self> {
        if homotopy.len() != self.factors.len() {
            return Err(Error::input("homotopy family size must match the factors"));
        }
        if homotopy.iter().any(|q| q.dim != self.dim) {
            return Err(Error::input("homotopy operator dimension mismatch"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.tol.spot_seed);
        for _ in 0..8 {
            let v: Vec<F> = sample_vector(&mut rng, self.dim);
            // sum Q_i P_i = id
            let mut acc = vec![F::zero(); self.dim];
            for (q, p) in homotopy.iter().zip(&self.factors.ops) {
                acc = vec_add(&acc, &q.apply(&p.apply(&v)?)?);
            }
            let scale = vec_norm(&v).max(1.0);
            if !vec_is_zero(&vec_sub(&acc, &v), self.tol.eps * scale) {
                return Err(Error::input(
                    "homotopy family fails the unit identity spot check",
                ));
            }
            // [Q_i, P_j] = 0
            for q in &homotopy {
                for p in &self.factors.ops {
                    let qp = q.apply(&p.apply(&v)?)?;
                    let pq = p.apply(&q.apply(&v)?)?;
                    let s = vec_norm(&qp).max(vec_norm(&pq)).max(1.0);
                    if !vec_is_zero(&vec_sub(&qp, &pq), self.tol.eps * s) {
                        return Err(Error::input(
                            "homotopy family fails the commutation spot check",
                        ));
                    }
                }
            }
        }
        self.homotopy = Some(homotopy);
        Ok(self)
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// Number of grades: `p` runs over `0 ..= num_factors()`.
    pub fn top_grade(&self) -> usize {
        self.num_factors()
    }

    /// Subsets of size `p`, in ascending bitmask order; this fixes the
    /// block layout of `V(p)`.
    pub fn grade_subsets(&self, p: usize) -> Vec<SubsetMask> {
        self.ground.all_subsets().filter(|s| s.len() == p).collect()
    }

    pub fn grade_dim(&self, p: usize) -> usize {
        self.grade_subsets(p).len() * self.dim
    }

    pub fn total_dim(&self) -> usize {
        (1usize << self.num_factors()) * self.dim
    }

    /// Apply `P(p): V(p) -> V(p+1)` through block applies.
    pub fn apply_forward(&self, p: usize, x: &[F]) -> Result<Vec<F>> {
        let src = self.grade_subsets(p);
        let dst = self.grade_subsets(p + 1);
        if x.len() != src.len() * self.dim {
            return Err(Error::input("koszul apply: grade dimension mismatch"));
        }
        let pos: BTreeMap<SubsetMask, usize> =
            dst.iter().enumerate().map(|(k, s)| (*s, k)).collect();
        let mut out = vec![F::zero(); dst.len() * self.dim];
        for (sj, j_set) in src.iter().enumerate() {
            let xj = &x[sj * self.dim..(sj + 1) * self.dim];
            for i in 0..self.num_factors() {
                if j_set.contains(i) {
                    continue;
                }
                let target = pos[&j_set.insert(i)];
                let w = self.factors.ops[i].apply(xj)?;
                let sign: F = koszul_sign(j_set, i);
                let dst_slice = &mut out[target * self.dim..(target + 1) * self.dim];
                for (o, wv) in dst_slice.iter_mut().zip(&w) {
                    *o = o.clone() + sign.clone() * wv.clone();
                }
            }
        }
        Ok(out)
    }

    /// Apply `Q(p): V(p) -> V(p-1)` (requires the homotopy).
    pub fn apply_backward(&self, p: usize, x: &[F]) -> Result<Vec<F>> {
        let homotopy = self
            .homotopy
            .as_ref()
            .ok_or_else(|| Error::input("no homotopy attached"))?;
        let src = self.grade_subsets(p);
        let dst = self.grade_subsets(p.wrapping_sub(1));
        if p == 0 {
            return Err(Error::input("Q(0) is the trivial map"));
        }
        if x.len() != src.len() * self.dim {
            return Err(Error::input("koszul apply: grade dimension mismatch"));
        }
        let pos: BTreeMap<SubsetMask, usize> =
            dst.iter().enumerate().map(|(k, s)| (*s, k)).collect();
        let mut out = vec![F::zero(); dst.len() * self.dim];
        for (sj, j_set) in src.iter().enumerate() {
            let xj = &x[sj * self.dim..(sj + 1) * self.dim];
            for j in j_set.indices() {
                let stripped = j_set.remove(j);
                let target = pos[&stripped];
                let w = homotopy[j].apply(xj)?;
                let sign: F = koszul_sign(&stripped, j);
                let dst_slice = &mut out[target * self.dim..(target + 1) * self.dim];
                for (o, wv) in dst_slice.iter_mut().zip(&w) {
                    *o = o.clone() + sign.clone() * wv.clone();
                }
            }
        }
        Ok(out)
    }

    /// `P(p)` as a block matrix (dense/diagonal backends only).
    pub fn forward_matrix(&self, p: usize) -> Result<Mat<F>> {
        let src = self.grade_subsets(p);
        let dst = self.grade_subsets(p + 1);
        let factor_mats: Vec<Mat<F>> = self
            .factors
            .ops
            .iter()
            .map(|o| {
                o.to_matrix().ok_or_else(|| {
                    Error::input("matrix assembly requires dense or diagonal backends")
                })
            })
            .collect::<Result<_>>()?;
        let pos: BTreeMap<SubsetMask, usize> =
            dst.iter().enumerate().map(|(k, s)| (*s, k)).collect();
        let mut m = Mat::zeros(dst.len() * self.dim, src.len() * self.dim);
        for (sj, j_set) in src.iter().enumerate() {
            for i in 0..self.num_factors() {
                if j_set.contains(i) {
                    continue;
                }
                let di = pos[&j_set.insert(i)];
                let sign: F = koszul_sign(j_set, i);
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        m[(di * self.dim + r, sj * self.dim + c)] =
                            sign.clone() * factor_mats[i][(r, c)].clone();
                    }
                }
            }
        }
        Ok(m)
    }
}

/// Per-grade composite residual of `P(p+1) o P(p)`; commutation alone
/// must make every entry zero (exact over exact fields).
#[derive(Clone, Debug)]
pub struct ComplexReport {
    pub per_grade: Vec<f64>,
    pub max_residual: f64,
    pub is_zero: bool,
}

pub fn verify_complex<F: Field>(kc: &KoszulComplex<F>) -> Result<ComplexReport> {
    let mut per_grade = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(kc.tol.spot_seed);
    for p in 0..kc.top_grade() {
        let residual = if kc.factors.ops.iter().all(|o| o.to_matrix().is_some())
            && kc.total_dim() <= RANK_DIM_BUDGET
        {
            let m1 = kc.forward_matrix(p)?;
            let m2 = kc.forward_matrix(p + 1)?;
            (m2 * m1).max_magnitude()
        } else {
            // matrix-free: probe with random vectors
            let mut worst = 0.0_f64;
            for _ in 0..8 {
                let x: Vec<F> = sample_vector(&mut rng, kc.grade_dim(p));
                let y = kc.apply_forward(p + 1, &kc.apply_forward(p, &x)?)?;
                worst = worst.max(vec_norm(&y) / vec_norm(&x).max(1.0));
            }
            worst
        };
        per_grade.push(residual);
    }
    let max_residual = per_grade.iter().copied().fold(0.0, f64::max);
    Ok(ComplexReport {
        per_grade,
        is_zero: max_residual <= if F::EXACT { 0.0 } else { kc.tol.eps },
        max_residual,
    })
}

/// Per-grade residual of the homotopy identity
/// `Q(p+1) P(p) + P(p-1) Q(p) = id_{V(p)}`.
#[derive(Clone, Debug)]
pub struct HomotopyReport {
    pub per_grade: Vec<f64>,
    pub max_residual: f64,
    pub holds: bool,
}

pub fn verify_homotopy<F: Field>(kc: &KoszulComplex<F>) -> Result<HomotopyReport> {
    if kc.homotopy.is_none() {
        return Err(Error::input("verify_homotopy requires a homotopy family"));
    }
    let mut per_grade = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(kc.tol.spot_seed ^ 0xFF);
    let probes = if F::EXACT { 4 } else { 8 };
    for p in 0..=kc.top_grade() {
        let gdim = kc.grade_dim(p);
        let mut worst = 0.0_f64;
        // exact fields: check on a full basis, which decides the identity
        let vectors: Vec<Vec<F>> = if F::EXACT && gdim <= RANK_DIM_BUDGET {
            (0..gdim)
                .map(|k| {
                    let mut e = vec![F::zero(); gdim];
                    e[k] = F::one();
                    e
                })
                .collect()
        } else {
            (0..probes).map(|_| sample_vector(&mut rng, gdim)).collect()
        };
        for x in vectors {
            let mut acc = vec![F::zero(); gdim];
            if p < kc.top_grade() {
                let fwd = kc.apply_forward(p, &x)?;
                acc = vec_add(&acc, &kc.apply_backward(p + 1, &fwd)?);
            }
            if p > 0 {
                let bwd = kc.apply_backward(p, &x)?;
                acc = vec_add(&acc, &kc.apply_forward(p - 1, &bwd)?);
            }
            let diff = vec_sub(&acc, &x);
            worst = worst.max(vec_norm(&diff) / vec_norm(&x).max(1.0));
        }
        per_grade.push(worst);
    }
    let max_residual = per_grade.iter().copied().fold(0.0, f64::max);
    let holds = max_residual <= if F::EXACT { 0.0 } else { kc.tol.eps };
    if !holds {
        let grade = per_grade
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(g, _)| g)
            .unwrap_or(0);
        return Err(Error::math(format!(
            "homotopy identity fails at grade {} with residual {:.3e}",
            grade, max_residual
        )));
    }
    Ok(HomotopyReport { per_grade, max_residual, holds })
}

/// Rank data for one grade of the complex.
#[derive(Clone, Debug)]
pub struct GradeRank {
    pub grade: usize,
    pub dim_kernel: usize,
    pub rank_previous: usize,
    pub exact: bool,
}

/// Decide exactness grade by grade through rank computations. Exact at
/// grade `p` iff `dim ker P(p) = rank P(p-1)` (with the trivial maps at
/// the ends).
pub fn exactness_by_rank<F: Field>(kc: &KoszulComplex<F>) -> Result<Vec<GradeRank>> {
    if kc.total_dim() > RANK_DIM_BUDGET {
        return Err(Error::budget(format!(
            "total complex dimension {} exceeds the rank budget {}",
            kc.total_dim(),
            RANK_DIM_BUDGET
        )));
    }
    let eps = kc.tol.eps;
    let mut ranks = Vec::new(); // rank of P(p) for p = 0..top
    let mut kernels = Vec::new();
    for p in 0..kc.top_grade() {
        let m = kc.forward_matrix(p)?;
        let r = m.rank(eps);
        ranks.push(r);
        kernels.push(m.cols - r);
    }
    let mut out = Vec::new();
    for p in 0..=kc.top_grade() {
        let dim_kernel = if p < kc.top_grade() {
            kernels[p]
        } else {
            kc.grade_dim(p) // the top map is the zero map to 0
        };
        let rank_previous = if p == 0 { 0 } else { ranks[p - 1] };
        out.push(GradeRank {
            grade: p,
            dim_kernel,
            rank_previous,
            exact: dim_kernel == rank_previous,
        });
    }
    Ok(out)
}

/// Is the two-factor subcomplex
/// `0 -> V -> V + V -> V -> 0` built from `(P_i, P_j)` exact?
/// Equivalent to both stacked maps having full rank `n`.
pub fn diamond_exact<F: Field>(kc: &KoszulComplex<F>, i: usize, j: usize) -> Result<bool> {
    if i == j {
        return Err(Error::input("diamond requires two distinct factor indices"));
    }
    let pi = kc.factors.ops[i]
        .to_matrix()
        .ok_or_else(|| Error::input("diamond_exact requires dense or diagonal backends"))?;
    let pj = kc.factors.ops[j]
        .to_matrix()
        .ok_or_else(|| Error::input("diamond_exact requires dense or diagonal backends"))?;
    let eps = kc.tol.eps;
    let n = kc.dim;
    let injective = pi.vstack(&pj).rank(eps) == n;
    let surjective = pj.hstack(&pi.scale(&-F::one())).rank(eps) == n;
    Ok(injective && surjective)
}

/// Reconstruct the unique `u` with `P^i u = u^i` for all `i` from factor
/// solutions `P_i u^i = f`, using only diamond exactness (no cofactor
/// identity). Errors name the failing consistency pair, and the final
/// `P u = f` is verified before returning.
pub fn reconstruct_qfree<F: Field>(
    kc: &KoszulComplex<F>,
    f: &[F],
    tuple: &[Vec<F>],
) -> Result<Vec<F>> {
    let ell1 = kc.num_factors();
    if tuple.len() != ell1 {
        return Err(Error::input("tuple length must match the factor count"));
    }
    for i in 0..ell1 {
        for j in (i + 1)..ell1 {
            if !diamond_exact(kc, i, j)? {
                return Err(Error::math(format!(
                    "diamond ({}, {}) is not exact; reconstruction unavailable",
                    i, j
                )));
            }
        }
    }
    let scale = vec_norm(f).max(1.0);
    for (i, u_i) in tuple.iter().enumerate() {
        let w = kc.factors.ops[i].apply(u_i)?;
        if !vec_is_zero(&vec_sub(&w, f), kc.tol.null_tol * scale) {
            return Err(Error::input(format!(
                "tuple entry {} does not solve its factor problem",
                i
            )));
        }
    }

    let full: Vec<usize> = (0..ell1).collect();
    let mut memo: BTreeMap<SubsetMask, Vec<F>> = BTreeMap::new();
    let u = chase(kc, &full, tuple, &mut memo)?;

    // final audit: P u = f
    let mut pu = u.clone();
    for op in &kc.factors.ops {
        pu = op.apply(&pu)?;
    }
    if !vec_is_zero(&vec_sub(&pu, f), kc.tol.null_tol * scale) {
        return Err(Error::math("reconstructed vector does not solve P u = f"));
    }
    Ok(u)
}

/// For the subfamily indexed by `active`, produce the unique `u` with
/// `prod_{k in active, k != i} P_k u = u^i` for every `i` in `active`.
fn chase<F: Field>(
    kc: &KoszulComplex<F>,
    active: &[usize],
    tuple: &[Vec<F>],
    memo: &mut BTreeMap<SubsetMask, Vec<F>>,
) -> Result<Vec<F>> {
    let key = SubsetMask::from_indices(active);
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let result = if active.len() == 1 {
        tuple[active[0]].clone()
    } else {
        let a = active[0];
        let b = active[1];
        let rest_a: Vec<usize> = active.iter().copied().filter(|&k| k != a).collect();
        let rest_b: Vec<usize> = active.iter().copied().filter(|&k| k != b).collect();
        let va = chase(kc, &rest_a, tuple, memo)?;
        let vb = chase(kc, &rest_b, tuple, memo)?;
        // both are potentials for the same entry one diamond level up
        let pb_va = kc.factors.ops[b].apply(&va)?;
        let pa_vb = kc.factors.ops[a].apply(&vb)?;
        let s = vec_norm(&pb_va).max(vec_norm(&pa_vb)).max(1.0);
        if !vec_is_zero(&vec_sub(&pb_va, &pa_vb), kc.tol.null_tol * s) {
            return Err(Error::input(format!(
                "inconsistent tuple: consistency fails at the pair ({}, {})",
                a, b
            )));
        }
        let ma = kc.factors.ops[a].to_matrix().unwrap();
        let mb = kc.factors.ops[b].to_matrix().unwrap();
        let stacked = ma.vstack(&mb);
        let mut rhs = va.clone();
        rhs.extend_from_slice(&vb);
        stacked.solve(&rhs, kc.tol.eps).ok_or_else(|| {
            Error::math(format!(
                "no common potential for the pair ({}, {}) despite diamond exactness",
                a, b
            ))
        })?
    };
    memo.insert(key, result.clone());
    Ok(result)
}
