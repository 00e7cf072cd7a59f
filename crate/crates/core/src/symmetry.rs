//! Weak and strong symmetry machinery.
//!
//! A weak symmetry of `P[D]` is an operator on `V` that maps the null
//! space of `P[D]` into itself; restricted to that null space it
//! decomposes into blocks `Proj_i o S o Proj_j` between the factor null
//! spaces. A strong symmetry preserves every eigenspace of `P[D]`; for
//! degree-2 polynomials there is a complete finite check.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::opcore::{OperatorDecomposition, OperatorHandle, Tolerances};
use crate::polyalg::{factor_rational_roots, DensePoly};
use crate::scalar::Field;
use num_rational::BigRational;

/// The block decomposition of a weak symmetry over the factor null
/// spaces. Block `(i, j)` is the matrix of `Proj_i o S` from the basis
/// of `N(P_j)` to the basis of `N(P_i)`.
#[derive(Debug)]
pub struct SymmetryBlocks<F: Field> {
    /// Kernel bases of the factors `(D+lambda_i)^{p_i}`, one matrix of
    /// basis columns per factor.
    pub null_bases: Vec<Mat<F>>,
    /// Row-major blocks: `blocks[i][j]` maps coordinates over
    /// `null_bases[j]` to coordinates over `null_bases[i]`.
    pub blocks: Vec<Vec<Mat<F>>>,
}

impl<F: Field> SymmetryBlocks<F> {
    pub fn num_factors(&self) -> usize {
        self.null_bases.len()
    }

    pub fn null_dims(&self) -> Vec<usize> {
        self.null_bases.iter().map(|b| b.cols).collect()
    }
}

/// Kernel basis of `(D+lambda)^p` as a column matrix.
fn factor_null_basis<F: Field>(
    dec: &OperatorDecomposition<F>,
    i: usize,
) -> Result<Mat<F>> {
    let m = dec
        .base
        .to_matrix()
        .ok_or_else(|| Error::input("symmetry blocks require a dense or diagonal backend"))?;
    let (lambda, p) = dec.poly.factors[i].clone();
    let mut factor = Mat::identity(dec.base.dim);
    for _ in 0..p {
        let mut shift = m.clone();
        for r in 0..dec.base.dim {
            shift[(r, r)] = shift[(r, r)].clone() + lambda.clone();
        }
        factor = shift * factor;
    }
    let kernel = factor.kernel_basis(dec.tol.eps);
    Ok(Mat::from_cols(dec.base.dim, &kernel))
}

/// Compute all `(num_factors)^2` blocks of a weak symmetry `S`.
///
/// `S` must map `N(P[D])` into itself; this is checked on the computed
/// null bases and a violating basis vector is reported on failure.
pub fn symmetry_blocks<F: Field>(
    dec: &OperatorDecomposition<F>,
    s: &OperatorHandle<F>,
) -> Result<SymmetryBlocks<F>> {
    if s.dim != dec.base.dim {
        return Err(Error::input("symmetry operator dimension mismatch"));
    }
    let k = dec.num_factors();
    let mut null_bases = Vec::with_capacity(k);
    for i in 0..k {
        null_bases.push(factor_null_basis(dec, i)?);
    }
    // weak-symmetry gate: S of every null-basis vector stays in N(P)
    for (j, basis) in null_bases.iter().enumerate() {
        for c in 0..basis.cols {
            let v = basis.col(c);
            let sv = s.apply(&v)?;
            let residual = dec.null_residual(&sv)?;
            if residual > dec.tol.null_tol {
                return Err(Error::math(format!(
                    "S is not a weak symmetry: image of basis vector {} of N(P_{}) \
                     leaves N(P) (relative residual {:.3e})",
                    c, j, residual
                )));
            }
        }
    }
    let mut blocks = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            let basis_j = &null_bases[j];
            let mut image_cols = Vec::with_capacity(basis_j.cols);
            for c in 0..basis_j.cols {
                let sv = s.apply(&basis_j.col(c))?;
                image_cols.push(dec.apply_projector(i, &sv)?);
            }
            let image = Mat::from_cols(dec.base.dim, &image_cols);
            // coordinates over the basis of N(P_i)
            let coords = null_bases[i].solve_matrix(&image, dec.tol.eps).ok_or_else(|| {
                Error::math(format!(
                    "projected image does not lie in N(P_{}) (block ({}, {}))",
                    i, i, j
                ))
            })?;
            row.push(coords);
        }
        blocks.push(row);
    }
    Ok(SymmetryBlocks { null_bases, blocks })
}

/// Reassemble the blocks into the matrix of `S` restricted to `N(P)`,
/// expressed on the concatenated factor bases. Exact round trip in
/// rational mode.
pub fn reconstruct_symmetry<F: Field>(blocks: &SymmetryBlocks<F>) -> Mat<F> {
    let dims = blocks.null_dims();
    let total: usize = dims.iter().sum();
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0, |acc, d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    let mut m = Mat::zeros(total, total);
    for (i, row) in blocks.blocks.iter().enumerate() {
        for (j, block) in row.iter().enumerate() {
            for r in 0..block.rows {
                for c in 0..block.cols {
                    m[(offsets[i] + r, offsets[j] + c)] = block[(r, c)].clone();
                }
            }
        }
    }
    m
}

/// Matrix of `S` restricted to `N(P)` over the same concatenated basis,
/// computed directly (the reconstruction must match this exactly).
pub fn restricted_matrix<F: Field>(
    dec: &OperatorDecomposition<F>,
    s: &OperatorHandle<F>,
    blocks: &SymmetryBlocks<F>,
) -> Result<Mat<F>> {
    let full_basis: Vec<Vec<F>> = blocks
        .null_bases
        .iter()
        .flat_map(|b| (0..b.cols).map(|c| b.col(c)).collect::<Vec<_>>())
        .collect();
    let basis_mat = Mat::from_cols(dec.base.dim, &full_basis);
    let mut image_cols = Vec::with_capacity(full_basis.len());
    for v in &full_basis {
        image_cols.push(s.apply(v)?);
    }
    let image = Mat::from_cols(dec.base.dim, &image_cols);
    basis_mat
        .solve_matrix(&image, dec.tol.eps)
        .ok_or_else(|| Error::math("restriction of S does not stay in N(P)"))
}

/// Verdict of the degree-2 strong-symmetry characterization.
#[derive(Clone, Debug)]
pub struct StrongSymmetryReport {
    pub verdict: bool,
    /// `(description, passed)` per condition actually checked.
    pub conditions: Vec<(String, bool)>,
}

fn preserves_subspace<F: Field>(
    s_mat: &Mat<F>,
    basis: &[Vec<F>],
    s: &OperatorHandle<F>,
    eps: f64,
) -> Result<bool> {
    if basis.is_empty() {
        return Ok(true);
    }
    let b = Mat::from_cols(s_mat.rows, basis);
    let mut image_cols = Vec::with_capacity(basis.len());
    for v in basis {
        image_cols.push(s.apply(v)?);
    }
    let im = Mat::from_cols(s_mat.rows, &image_cols);
    Ok(b.hstack(&im).rank(eps) == b.rank(eps))
}

/// Rational eigenvalues of a dense rational operator, from the
/// characteristic polynomial. Errors if the spectrum is not rational.
pub fn rational_spectrum(d: &Mat<BigRational>) -> Result<Vec<(BigRational, usize)>> {
    let cp = DensePoly::from_coeffs(d.char_poly());
    if cp.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let factored = factor_rational_roots(&cp)?;
    // char poly roots r correspond to stored lambda = -r
    Ok(factored
        .factors
        .into_iter()
        .map(|(lambda, p)| (-lambda, p))
        .collect())
}

/// Decide whether `S` is a strong symmetry of
/// `P = (D + lambda1)(D + lambda2)` by the three-condition degree-2
/// characterization: with `xi0 = (lambda1+lambda2)/2`,
///
/// (i) if `-xi0` is an eigenvalue, `S` preserves `N((D+xi0)^2)`;
/// (ii) for an eigenvalue pair `-xi`, `-(lambda1+lambda2-xi)` with
///      `xi != xi0`, `S` preserves `N(D+xi) + N(D+lambda1+lambda2-xi)`;
/// (iii) for an unpaired eigenvalue `-xi`, `S` preserves `N(D+xi)`.
///
/// Requires a dense backend with rational spectrum.
pub fn strong_symmetry_degree2(
    d: &OperatorHandle<BigRational>,
    lambda1: &BigRational,
    lambda2: &BigRational,
    s: &OperatorHandle<BigRational>,
    tol: &Tolerances,
) -> Result<StrongSymmetryReport> {
    let m = d
        .to_matrix()
        .ok_or_else(|| Error::input("strong symmetry check requires a dense backend"))?;
    if s.dim != d.dim {
        return Err(Error::input("symmetry operator dimension mismatch"));
    }
    let spectrum = rational_spectrum(&m)?;
    let eigenvalues: Vec<BigRational> = spectrum.iter().map(|(e, _)| e.clone()).collect();
    let sum = lambda1 + lambda2;
    let xi0 = &sum / BigRational::from_integer(2.into());

    let shifted_kernel = |xi: &BigRational, power: usize| -> Vec<Vec<BigRational>> {
        let mut factor = Mat::identity(d.dim);
        for _ in 0..power {
            let mut shift = m.clone();
            for r in 0..d.dim {
                shift[(r, r)] = shift[(r, r)].clone() + xi.clone();
            }
            factor = shift * factor;
        }
        factor.kernel_basis(tol.eps)
    };

    let mut conditions = Vec::new();
    let mut verdict = true;

    // condition (i)
    if eigenvalues.contains(&-xi0.clone()) {
        let basis = shifted_kernel(&xi0, 2);
        let ok = preserves_subspace(&m, &basis, s, tol.eps)?;
        conditions.push((format!("(i) preserves N((D+{})^2)", xi0), ok));
        verdict &= ok;
    }
    // conditions (ii)/(iii) per eigenvalue
    let mut seen: Vec<BigRational> = Vec::new();
    for e in &eigenvalues {
        let xi = -e.clone();
        if xi == xi0 || seen.contains(&xi) {
            continue;
        }
        let partner = &sum - &xi; // xi' with xi + xi' = lambda1 + lambda2
        let partner_present = eigenvalues.contains(&-partner.clone());
        if partner_present {
            let mut basis = shifted_kernel(&xi, 1);
            basis.extend(shifted_kernel(&partner, 1));
            let ok = preserves_subspace(&m, &basis, s, tol.eps)?;
            conditions.push((
                format!("(ii) preserves N(D+{}) + N(D+{})", xi, partner),
                ok,
            ));
            verdict &= ok;
            seen.push(partner.clone());
        } else {
            let basis = shifted_kernel(&xi, 1);
            let ok = preserves_subspace(&m, &basis, s, tol.eps)?;
            conditions.push((format!("(iii) preserves N(D+{})", xi), ok));
            verdict &= ok;
        }
        seen.push(xi);
    }
    Ok(StrongSymmetryReport { verdict, conditions })
}

/// Brute-force strong-symmetry definition for degree-2 polynomials:
/// `S` preserves `N((D+xi1)(D+xi2))` for every factorization with
/// `xi1 + xi2 = lambda1 + lambda2` that touches the spectrum.
pub fn strong_symmetry_bruteforce(
    d: &OperatorHandle<BigRational>,
    lambda1: &BigRational,
    lambda2: &BigRational,
    s: &OperatorHandle<BigRational>,
    tol: &Tolerances,
) -> Result<bool> {
    let m = d
        .to_matrix()
        .ok_or_else(|| Error::input("strong symmetry check requires a dense backend"))?;
    let spectrum = rational_spectrum(&m)?;
    let sum = lambda1 + lambda2;
    // relevant factorizations: xi1 = -e for a spectrum point e (all
    // others give trivial eigenspaces), plus the symmetric partner
    let mut xis: Vec<BigRational> = Vec::new();
    for (e, _) in &spectrum {
        let xi = -e.clone();
        if !xis.contains(&xi) {
            xis.push(xi.clone());
        }
        let partner = &sum - &xi;
        if !xis.contains(&partner) {
            xis.push(partner);
        }
    }
    for xi1 in &xis {
        let xi2 = &sum - xi1;
        let mut shift1 = m.clone();
        let mut shift2 = m.clone();
        for r in 0..d.dim {
            shift1[(r, r)] = shift1[(r, r)].clone() + xi1.clone();
            shift2[(r, r)] = shift2[(r, r)].clone() + xi2.clone();
        }
        let product = shift1 * shift2;
        let basis = product.kernel_basis(tol.eps);
        if !preserves_subspace(&m, &basis, s, tol.eps)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Build the elementary weak symmetry `E : V -> V` that sends the
/// `b`-th null-basis vector of factor `j` to the `a`-th null-basis
/// vector of factor `i` and kills the rest of `N(P)`:
/// `E = n_{i,a} * (b-th coordinate functional of Proj_j)`.
/// These operators span, on `N(P)`, the full space of maps, which is
/// the dimension count behind the block decomposition.
pub fn elementary_symmetry<F: Field>(
    dec: &OperatorDecomposition<F>,
    blocks: &SymmetryBlocks<F>,
    i: usize,
    a: usize,
    j: usize,
    b: usize,
) -> Result<OperatorHandle<F>> {
    let n = dec.base.dim;
    let basis_j = &blocks.null_bases[j];
    // left inverse of the basis matrix: L = (B^T B)^{-1} B^T
    let bt = basis_j.transpose();
    let gram = bt.clone() * basis_j.clone();
    let gram_inv = gram
        .inverse(dec.tol.eps)
        .ok_or_else(|| Error::math("null basis Gram matrix is singular"))?;
    let left = gram_inv * bt;
    // functional row: b-th row of L composed with Proj_j
    let mut proj_cols = Vec::with_capacity(n);
    for c in 0..n {
        let mut e = vec![F::zero(); n];
        e[c] = F::one();
        proj_cols.push(dec.apply_projector(j, &e)?);
    }
    let proj = Mat::from_cols(n, &proj_cols);
    let row = {
        let lp = left * proj;
        (0..n).map(|c| lp[(b, c)].clone()).collect::<Vec<F>>()
    };
    let col = blocks.null_bases[i].col(a);
    let e = Mat::from_fn(n, n, |r, c| col[r].clone() * row[c].clone());
    OperatorHandle::dense(e)
}
