//! Shared test fixtures and independent oracles.
//!
//! The partial-fraction oracle here solves for cofactors by equating
//! coefficients in `sum Q_i P^i = 1` — a route entirely separate from
//! the library's truncated-series construction.

#![allow(dead_code)]

use num_rational::BigRational;
use opkit::linalg::Mat;
use opkit::polyalg::{DensePoly, FactoredPoly};
use opkit::scalar::rat_int;
use rand::rngs::StdRng;
use rand::Rng;

pub fn rat(num: i64, den: i64) -> BigRational {
    opkit::scalar::rat(num, den)
}

pub fn poly(cs: &[i64]) -> DensePoly<BigRational> {
    DensePoly::from_coeffs(cs.iter().map(|&c| rat_int(c)).collect())
}

pub fn rvec(entries: &[i64]) -> Vec<BigRational> {
    entries.iter().map(|&e| rat_int(e)).collect()
}

pub fn random_rational(rng: &mut StdRng) -> BigRational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

/// Random factored polynomial with distinct rational roots in [-9, 9].
pub fn random_factored(
    rng: &mut StdRng,
    max_ell: usize,
    max_p: usize,
) -> FactoredPoly<BigRational> {
    loop {
        let nfactors = rng.gen_range(1..=max_ell + 1);
        let mut roots: Vec<BigRational> = Vec::new();
        while roots.len() < nfactors {
            let r = random_rational(rng);
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
        let factors = roots
            .into_iter()
            .map(|r| (r, rng.gen_range(1..=max_p)))
            .collect();
        if let Ok(p) = FactoredPoly::monic(factors, 0.0) {
            return p;
        }
    }
}

/// Brute-force partial-fraction cofactors: set up the linear system in
/// the unknown coefficients of the `Q_i` (degree <= p_i - 1) from
/// `sum_i Q_i P^i = 1` and solve it. Returns the cofactors and whether
/// the square system was uniquely solvable.
pub fn oracle_cofactors(p: &FactoredPoly<BigRational>) -> (Vec<DensePoly<BigRational>>, bool) {
    let total: usize = p.factors.iter().map(|(_, m)| m).sum();
    // columns: one per unknown coefficient; rows: coefficients of x^t
    let mut cols: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..p.factors.len() {
        let complement = p.complement(i);
        for s in 0..p.factors[i].1 {
            // contribution of coefficient of x^s in Q_i
            let shifted = DensePoly::from_coeffs(
                std::iter::repeat(BigRational::from_integer(0.into()))
                    .take(s)
                    .chain([BigRational::from_integer(1.into())])
                    .collect(),
            ) * complement.clone();
            let mut col = vec![BigRational::from_integer(0.into()); total];
            for (t, c) in shifted.coeffs().iter().enumerate() {
                if t < total {
                    col[t] = c.clone();
                }
            }
            cols.push(col);
        }
    }
    let a = Mat::from_cols(total, &cols);
    let mut rhs = vec![BigRational::from_integer(0.into()); total];
    rhs[0] = BigRational::from_integer(1.into());
    let unique = a.rank(0.0) == total;
    let x = a.solve(&rhs, 0.0).expect("partial fraction system must be consistent");
    // slice the solution back into per-factor polynomials
    let mut out = Vec::new();
    let mut offset = 0;
    for (_, m) in &p.factors {
        out.push(DensePoly::from_coeffs(x[offset..offset + m].to_vec()));
        offset += m;
    }
    (out, unique)
}

pub fn random_matrix(rng: &mut StdRng, n: usize) -> Mat<BigRational> {
    Mat::from_fn(n, n, |_, _| rat_int(rng.gen_range(-5..=5)))
}

/// Random unimodular integer matrix (product of elementary operations),
/// exactly invertible.
pub fn random_unimodular(rng: &mut StdRng, n: usize) -> Mat<BigRational> {
    let mut m: Mat<BigRational> = Mat::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c = rat_int(rng.gen_range(-2..=2));
        // row_i += c * row_j
        for col in 0..n {
            let v = m[(i, col)].clone() + c.clone() * m[(j, col)].clone();
            m[(i, col)] = v;
        }
    }
    m
}

/// Jordan block `J_q(eigenvalue)` (ones on the superdiagonal).
pub fn jordan_block(eigenvalue: &BigRational, q: usize) -> Mat<BigRational> {
    let mut m = Mat::zeros(q, q);
    for i in 0..q {
        m[(i, i)] = eigenvalue.clone();
        if i + 1 < q {
            m[(i, i + 1)] = rat_int(1);
        }
    }
    m
}

pub fn block_diag(blocks: &[Mat<BigRational>]) -> Mat<BigRational> {
    let n: usize = blocks.iter().map(|b| b.rows).sum();
    let mut m = Mat::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for r in 0..b.rows {
            for c in 0..b.cols {
                m[(off + r, off + c)] = b[(r, c)].clone();
            }
        }
        off += b.rows;
    }
    m
}

/// An operator with known Jordan structure for a factored polynomial:
/// for each factor `(x+lambda_i)^{p_i}` a Jordan block `J_{q_i}(-lambda_i)`
/// with `q_i <= p_i` (so the block lies inside `N(P_i)`), plus an
/// invertible-on-P part with spectrum away from the roots. Conjugated by
/// a random unimodular matrix. Returns `(matrix, per-factor null dims)`.
pub fn jordan_instance(
    rng: &mut StdRng,
    p: &FactoredPoly<BigRational>,
    extra: usize,
) -> (Mat<BigRational>, Vec<usize>) {
    let mut blocks = Vec::new();
    let mut dims = Vec::new();
    for (lambda, mult) in &p.factors {
        let q = rng.gen_range(1..=*mult);
        blocks.push(jordan_block(&-lambda.clone(), q));
        dims.push(q);
    }
    for _ in 0..extra {
        // eigenvalue clear of all roots
        let mut e = rat_int(rng.gen_range(10..=15));
        while p.factors.iter().any(|(l, _)| -l.clone() == e) {
            e = e + rat_int(1);
        }
        blocks.push(jordan_block(&e, 1));
    }
    let d = block_diag(&blocks);
    let t = random_unimodular(rng, d.rows);
    let t_inv = t.inverse(0.0).expect("unimodular invertible");
    (t.clone() * d * t_inv, dims)
}

/// Basis of the column space.
pub fn column_space_basis(m: &Mat<BigRational>) -> Vec<Vec<BigRational>> {
    // pivot columns of the original matrix span the range
    let r = m.rank(0.0);
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    for c in 0..m.cols {
        if basis.len() == r {
            break;
        }
        let cand = m.col(c);
        let with = Mat::from_cols(m.rows, &[basis.clone(), vec![cand.clone()]].concat());
        if with.rank(0.0) > basis.len() {
            basis.push(cand);
        }
    }
    basis
}

/// Basis of the intersection of two spans.
pub fn intersect_spans(
    n: usize,
    a: &[Vec<BigRational>],
    b: &[Vec<BigRational>],
) -> Vec<Vec<BigRational>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let ma = Mat::from_cols(n, a);
    let mb = Mat::from_cols(n, b);
    // kernel of [A | -B]: x = A u = B v
    let stacked = ma.hstack(&mb.scale(&rat_int(-1)));
    let kernel = stacked.kernel_basis(0.0);
    let mut out = Vec::new();
    for k in kernel {
        let u = &k[..a.len()];
        let x = ma.apply(u);
        let with = Mat::from_cols(n, &[out.clone(), vec![x.clone()]].concat());
        if with.rank(0.0) > out.len() {
            out.push(x);
        }
    }
    out
}

/// Bezout cofactors for a family of univariate rational polynomials:
/// `sum_i q_i p_i = 1`, or `None` when the gcd is not 1.
pub fn multi_bezout(polys: &[DensePoly<BigRational>]) -> Option<Vec<DensePoly<BigRational>>> {
    use opkit::polyalg::ext_gcd;
    assert!(!polys.is_empty());
    let mut g = polys[0].clone();
    let mut cofs: Vec<DensePoly<BigRational>> = vec![DensePoly::one()];
    for p in &polys[1..] {
        let (g2, s, t) = ext_gcd(&g, p).ok()?;
        // g2 = s*g + t*p: fold s into the accumulated cofactors
        for c in &mut cofs {
            *c = c.clone() * s.clone();
        }
        cofs.push(t);
        g = g2;
    }
    if g.is_one() {
        Some(cofs)
    } else {
        None
    }
}

/// Evaluate a polynomial at a matrix.
pub fn poly_at_matrix(p: &DensePoly<BigRational>, m: &Mat<BigRational>) -> Mat<BigRational> {
    let n = m.rows;
    let mut acc = Mat::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = m.clone() * acc;
        for i in 0..n {
            acc[(i, i)] = acc[(i, i)].clone() + c.clone();
        }
    }
    acc
}
