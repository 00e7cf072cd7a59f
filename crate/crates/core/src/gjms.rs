//! Conformal Laplacian (GJMS) operators on diagonal spectral models.
//!
//! On an Einstein structure with constant scalar curvature `Sc`, the
//! order-2k operator factors as
//!
//! `P_k = prod_{i=1..k} (Lap + c_i Sc) = prod_{i=1..k} (Y + b_i Sc)`
//!
//! with `c_i = (n+2i-2)(n-2i) / (4n(n-1))`, `b_i = i(1-i) / (n(n-1))`
//! and `Y = Lap + c_1 Sc`. The "manifold" here is a diagonal spectral
//! model: an eigenvalue/multiplicity list for `Lap`, with a unit-sphere
//! preset (`Lap`-eigenvalues `l(l+n-1)`, `Sc = n(n-1)`, standard
//! harmonic multiplicities).
//!
//! Sign note: the paper's companion statement of the reconstruction
//! coefficient uses the opposite sign convention for `b_i`; under the
//! factored form above the printed coefficient differs from the true
//! partial-fraction cofactors by `(-1)^{k-1}`. The solve reports both
//! and asserts the oracle-validated sign (`P_k u = f`).

use crate::error::{Error, Result};
use crate::linalg::{vec_norm, vec_sub};
use crate::opcore::OperatorHandle;
use crate::polyalg::{simple_root_cofactors, FactoredPoly};
use crate::scalar::{rat_int, Field};

use num_rational::BigRational;


/// Exact GJMS coefficient data for dimension `n` and order parameter `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GJMSSpec {
    pub n: usize,
    pub k: usize,
    pub sc: BigRational,
    /// `c_1 .. c_k` (index 0 is `c_1`).
    pub c: Vec<BigRational>,
    /// `b_1 .. b_k` (index 0 is `b_1 = 0`).
    pub b: Vec<BigRational>,
}

impl GJMSSpec {
    pub fn new(n: usize, k: usize, sc: BigRational) -> Result<Self> {
        if n < 3 {
            return Err(Error::input("GJMS spec requires dimension n >= 3"));
        }
        if k < 1 {
            return Err(Error::input("GJMS spec requires order k >= 1"));
        }
        let nn = rat_int(n as i64);
        let denom_c = rat_int(4) * &nn * (&nn - <BigRational as num_traits::One>::one());
        let denom_b = &nn * (&nn - <BigRational as num_traits::One>::one());
        let mut c = Vec::with_capacity(k);
        let mut b = Vec::with_capacity(k);
        for i in 1..=k {
            let ii = rat_int(i as i64);
            let ci = (&nn + &ii + &ii - rat_int(2)) * (&nn - &ii - &ii) / &denom_c;
            let bi = &ii * (<BigRational as num_traits::One>::one() - &ii) / &denom_b;
            c.push(ci);
            b.push(bi);
        }
        // internal consistency: b_i = c_i - c_1
        for i in 0..k {
            if b[i] != &c[i] - &c[0] {
                return Err(Error::math(format!(
                    "coefficient consistency b_i = c_i - c_1 fails at i = {}",
                    i + 1
                )));
            }
        }
        // the roots b_i Sc are mutually distinct whenever Sc != 0
        if !sc.is_zero() {
            for i in 0..k {
                for j in (i + 1)..k {
                    if &b[i] * &sc == &b[j] * &sc {
                        return Err(Error::math("roots b_i Sc are not distinct"));
                    }
                }
            }
        }
        Ok(Self { n, k, sc, c, b })
    }

    /// The factored form of `P_k` as a polynomial in `Y`: roots
    /// `b_i Sc`, collapsing to the single factor `y^k` when `Sc = 0`.
    pub fn factored_in_y(&self) -> Result<FactoredPoly<BigRational>> {
        if self.sc.is_zero() {
            return FactoredPoly::monic(vec![(<BigRational as num_traits::Zero>::zero(), self.k)], 0.0);
        }
        FactoredPoly::monic(
            self.b.iter().map(|b| (b * &self.sc, 1)).collect(),
            0.0,
        )
    }
}

/// Exact `c` and `b` coefficient lists (the Sc-free part of the spec).
pub fn gjms_coefficients(n: usize, k: usize) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    let spec = GJMSSpec::new(n, k, <BigRational as num_traits::Zero>::zero())?;
    Ok((spec.c, spec.b))
}

/// A diagonal stand-in for the Laplacian: eigenvalue/multiplicity pairs.
#[derive(Clone, Debug)]
pub struct SpectralModel<F: Field> {
    pub n: usize,
    pub entries: Vec<(F, usize)>,
    pub preset: Option<String>,
}

impl<F: Field> SpectralModel<F> {
    pub fn new(n: usize, entries: Vec<(F, usize)>) -> Result<Self> {
        if entries.is_empty() || entries.iter().any(|(_, m)| *m == 0) {
            return Err(Error::input("spectral model needs positive multiplicities"));
        }
        Ok(Self { n, entries, preset: None })
    }

    /// Unit-sphere preset: Laplacian eigenvalues `l(l+n-1)` for
    /// `l = 0..=l_max` with the standard harmonic multiplicities, and
    /// `Sc = n(n-1)`.
    pub fn unit_sphere(n: usize, l_max: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::input("unit sphere preset requires n >= 2"));
        }
        let mut entries = Vec::with_capacity(l_max + 1);
        for l in 0..=l_max {
            let eig = F::from_i64((l * (l + n - 1)) as i64);
            entries.push((eig, sphere_multiplicity(n, l)));
        }
        Ok(Self { n, entries, preset: Some(format!("unit-sphere({})", l_max)) })
    }

    pub fn dim(&self) -> usize {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn sphere_scalar_curvature(n: usize) -> BigRational {
        rat_int((n * (n - 1)) as i64)
    }
}

/// Dimension of degree-`l` spherical harmonics on the n-sphere.
fn sphere_multiplicity(n: usize, l: usize) -> usize {
    let choose = |top: usize, bottom: usize| -> usize {
        if bottom > top {
            return 0;
        }
        let mut acc: u128 = 1;
        for i in 0..bottom {
            acc = acc * (top - i) as u128 / (i + 1) as u128;
        }
        acc as usize
    };
    match l {
        0 => 1,
        1 => n + 1,
        _ => choose(n + l, l) - choose(n + l - 2, l - 2),
    }
}

/// The assembled operators on a model: `Y`, `P_k`, and the factored
/// polynomial of `P_k` in `Y`.
pub struct GJMSOperators<F: Field> {
    pub y: OperatorHandle<F>,
    pub p_k: OperatorHandle<F>,
    pub factored: FactoredPoly<F>,
    /// Diagonal of `Y` per model entry (before multiplicity expansion).
    pub y_entries: Vec<F>,
    /// Diagonal of `P_k` per model entry.
    pub p_entries: Vec<F>,
}

/// Realise `Y = Lap + c_1 Sc` and `P_k` on the model, checking the two
/// product forms (in `Lap` and in `Y`) against each other entrywise.
pub fn gjms_operator<F: Field>(
    spec: &GJMSSpec,
    model: &SpectralModel<F>,
    eps: f64,
) -> Result<GJMSOperators<F>> {
    let sc = F::from_rational(&spec.sc);
    let c1 = F::from_rational(&spec.c[0]);
    let mut y_entries = Vec::with_capacity(model.entries.len());
    let mut p_entries = Vec::with_capacity(model.entries.len());
    for (lap, _) in &model.entries {
        let y = lap.clone() + c1.clone() * sc.clone();
        // product in Lap
        let mut p_lap = F::one();
        for ci in &spec.c {
            p_lap = p_lap * (lap.clone() + F::from_rational(ci) * sc.clone());
        }
        // product in Y
        let mut p_y = F::one();
        for bi in &spec.b {
            p_y = p_y * (y.clone() + F::from_rational(bi) * sc.clone());
        }
        let scale = p_lap.magnitude().max(1.0);
        if !(p_lap.clone() - p_y.clone()).near_zero(eps * scale) {
            return Err(Error::math(
                "product forms in Lap and in Y disagree on a model entry",
            ));
        }
        y_entries.push(y);
        p_entries.push(p_lap);
    }
    let y = OperatorHandle::diagonal(
        y_entries
            .iter()
            .cloned()
            .zip(model.entries.iter().map(|(_, m)| *m))
            .collect(),
    )?;
    let p_k = OperatorHandle::diagonal(
        p_entries
            .iter()
            .cloned()
            .zip(model.entries.iter().map(|(_, m)| *m))
            .collect(),
    )?;
    let exact = spec.factored_in_y()?;
    let factored = FactoredPoly::new(
        F::from_rational(&exact.leading),
        exact
            .factors
            .iter()
            .map(|(l, p)| (F::from_rational(l), *p))
            .collect(),
        if F::EXACT { 0.0 } else { eps * 1e-3 },
    )?;
    Ok(GJMSOperators { y, p_k, factored, y_entries, p_entries })
}

/// One component of the null-space (or eigenspace) report.
#[derive(Clone, Debug)]
pub struct SpectralComponent<F: Field> {
    /// Which factor (1-based `i` with root `b_i Sc`); `None` for
    /// eigenspace reports keyed by eigenvalue instead.
    pub factor: Option<usize>,
    /// The `Y`-eigenvalue of the component.
    pub y_eigenvalue: F,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct NullspaceReport<F: Field> {
    pub components: Vec<SpectralComponent<F>>,
    pub total_dim: usize,
    /// `dim N(P_k)` read off the diagonal directly.
    pub direct_dim: usize,
}

/// Decompose `N(P_k)` into `Y`-eigenspaces: for each factor `i`, the
/// model entries whose `Y`-eigenvalue equals `-b_i Sc`. On diagonal
/// models with `Sc = 0` this reduces to `N(Y)` (no nilpotent part).
pub fn gjms_nullspace<F: Field>(
    spec: &GJMSSpec,
    model: &SpectralModel<F>,
    eps: f64,
) -> Result<NullspaceReport<F>> {
    let ops = gjms_operator(spec, model, eps)?;
    let sc = F::from_rational(&spec.sc);
    let mut components = Vec::new();
    let mut total = 0usize;
    if spec.sc.is_zero() {
        // N(P_k) = N(Y^k) = N(Y) on a diagonal model
        let mut dim = 0usize;
        for (y, (_, m)) in ops.y_entries.iter().zip(&model.entries) {
            if y.near_zero(eps) {
                dim += m;
            }
        }
        if dim > 0 {
            components.push(SpectralComponent {
                factor: Some(1),
                y_eigenvalue: F::zero(),
                dim,
            });
            total = dim;
        }
    } else {
        for (i, b) in spec.b.iter().enumerate() {
            let target = -(F::from_rational(b) * sc.clone());
            let mut dim = 0usize;
            for (y, (_, m)) in ops.y_entries.iter().zip(&model.entries) {
                let scale = y.magnitude().max(target.magnitude()).max(1.0);
                if (y.clone() - target.clone()).near_zero(eps * scale) {
                    dim += m;
                }
            }
            if dim > 0 {
                components.push(SpectralComponent {
                    factor: Some(i + 1),
                    y_eigenvalue: target,
                    dim,
                });
                total += dim;
            }
        }
    }
    let mut direct = 0usize;
    for (p, (_, m)) in ops.p_entries.iter().zip(&model.entries) {
        if p.near_zero(eps) {
            direct += m;
        }
    }
    if direct != total {
        return Err(Error::math(format!(
            "null space audit failed: components sum to {}, diagonal says {}",
            total, direct
        )));
    }
    Ok(NullspaceReport { components, total_dim: total, direct_dim: direct })
}

/// Result of the order-reduction solve, including the sign audit of the
/// printed reconstruction coefficient.
#[derive(Clone, Debug)]
pub struct GJMSSolveReport<F: Field> {
    pub residual: f64,
    pub exact_zero: bool,
    pub components: Vec<Vec<F>>,
    pub reconstruction: Vec<F>,
    /// Partial-fraction cofactors actually used (one constant per factor).
    pub cofactors: Vec<F>,
    /// The printed closed-form coefficients, for the audit.
    pub printed_coefficients: Vec<F>,
    /// `cofactor_i = sign * printed_i` for all `i`; the audit records the
    /// oracle-validated sign, which is `(-1)^{k-1}`.
    pub relative_sign: i64,
}

/// Reduce `P_k u = f` to the `k` second-order problems
/// `(Y + b_i Sc) u_i = f`, solve them entrywise on the diagonal model,
/// and reconstruct `u` through the partial-fraction cofactors. The
/// reconstruction is validated against `P_k u = f` (the oracle), and the
/// printed closed-form coefficient is audited against the cofactors.
pub fn gjms_solve<F: Field>(
    spec: &GJMSSpec,
    model: &SpectralModel<F>,
    f: &[F],
    eps: f64,
) -> Result<GJMSSolveReport<F>> {
    let ops = gjms_operator(spec, model, eps)?;
    let dim = model.dim();
    if f.len() != dim {
        return Err(Error::input(format!(
            "right-hand side has length {}, model dimension is {}",
            f.len(),
            dim
        )));
    }
    if spec.sc.is_zero() && spec.k > 1 {
        return Err(Error::input(
            "order reduction requires Sc != 0 (factors coincide at Sc = 0)",
        ));
    }
    let sc = F::from_rational(&spec.sc);

    // solve the k diagonal factor problems
    let mut components = Vec::with_capacity(spec.k);
    for (i, b) in spec.b.iter().enumerate() {
        let root = F::from_rational(b) * sc.clone();
        let mut u_i = Vec::with_capacity(dim);
        let mut idx = 0usize;
        for (y, (_, m)) in ops.y_entries.iter().zip(&model.entries) {
            let denom = y.clone() + root.clone();
            for _ in 0..*m {
                let fe = &f[idx];
                if denom.near_zero(eps) {
                    if fe.near_zero(eps) {
                        u_i.push(F::zero());
                    } else {
                        return Err(Error::math(format!(
                            "factor {} is singular on a model entry with nonzero data",
                            i + 1
                        )));
                    }
                } else {
                    u_i.push(fe.clone() * denom.inv().unwrap());
                }
                idx += 1;
            }
        }
        components.push(u_i);
    }

    // cofactors: k = 1 is the direct inverse, otherwise simple roots
    let cofactors: Vec<F> = if spec.k == 1 {
        vec![F::one()]
    } else {
        let exact = spec.factored_in_y()?;
        simple_root_cofactors(&exact)?
            .iter()
            .map(F::from_rational)
            .collect()
    };
    let mut u = vec![F::zero(); dim];
    for (q, u_i) in cofactors.iter().zip(&components) {
        for (acc, x) in u.iter_mut().zip(u_i) {
            *acc = acc.clone() + q.clone() * x.clone();
        }
    }

    // oracle: P_k u = f on the diagonal
    let pu = ops.p_k.apply(&u)?;
    let defect = vec_sub(&pu, f);
    let scale = vec_norm(f).max(1.0);
    let residual = vec_norm(&defect) / scale;
    let exact_zero = defect.iter().all(|c| c.is_zero());
    if F::EXACT && !exact_zero {
        return Err(Error::math(
            "exact-mode reconstruction failed the oracle P_k u = f",
        ));
    }

    // printed coefficient audit:
    // gamma_i = (n(n-1)/Sc)^{k-1} prod_{j != i} 1/((j-i)(j+i-1))
    let (printed, relative_sign) = if spec.k == 1 {
        (vec![F::one()], 1)
    } else {
        let nn = rat_int((spec.n * (spec.n - 1)) as i64);
        let lead = (&nn / &spec.sc).pow((spec.k - 1) as i32);
        let mut printed = Vec::with_capacity(spec.k);
        for i in 1..=spec.k as i64 {
            let mut prod = lead.clone();
            for j in 1..=spec.k as i64 {
                if j != i {
                    prod /= rat_int((j - i) * (j + i - 1));
                }
            }
            printed.push(F::from_rational(&prod));
        }
        let expected = if (spec.k - 1).is_multiple_of(2) { 1i64 } else { -1 };
        // audit that cofactor_i = expected * printed_i holds exactly
        for (q, g) in cofactors.iter().zip(&printed) {
            let signed = if expected == 1 { g.clone() } else { -g.clone() };
            let scale = q.magnitude().max(1.0);
            if !(q.clone() - signed).near_zero(eps * scale) {
                return Err(Error::math(
                    "sign audit failed: cofactors are not +/- the printed coefficients",
                ));
            }
        }
        (printed, expected)
    };

    Ok(GJMSSolveReport {
        residual,
        exact_zero,
        components,
        reconstruction: u,
        cofactors,
        printed_coefficients: printed,
        relative_sign,
    })
}

#[derive(Clone, Debug)]
pub struct EigenReport<F: Field> {
    pub mu: F,
    pub components: Vec<SpectralComponent<F>>,
    pub total_dim: usize,
}

/// Describe the mu-eigenspace of `P_k` on the model: group model entries
/// by `Y`-eigenvalue among those where `P_k` evaluates to `mu`. Diagonal
/// models carry no nilpotent part, so every component is a true
/// `Y`-eigenspace.
pub fn gjms_eigenstructure<F: Field>(
    spec: &GJMSSpec,
    model: &SpectralModel<F>,
    mu: &F,
    eps: f64,
) -> Result<EigenReport<F>> {
    let ops = gjms_operator(spec, model, eps)?;
    let mut components: Vec<SpectralComponent<F>> = Vec::new();
    for ((y, p), (_, m)) in ops
        .y_entries
        .iter()
        .zip(&ops.p_entries)
        .zip(&model.entries)
    {
        let scale = p.magnitude().max(mu.magnitude()).max(1.0);
        if (p.clone() - mu.clone()).near_zero(eps * scale) {
            match components
                .iter_mut()
                .find(|c| (c.y_eigenvalue.clone() - y.clone()).near_zero(eps))
            {
                Some(c) => c.dim += m,
                None => components.push(SpectralComponent {
                    factor: None,
                    y_eigenvalue: y.clone(),
                    dim: *m,
                }),
            }
        }
    }
    let total_dim = components.iter().map(|c| c.dim).sum();
    Ok(EigenReport { mu: mu.clone(), components, total_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn coefficients_for_dimension_four() {
        let (c, b) = gjms_coefficients(4, 3).unwrap();
        assert_eq!(c, vec![rat(1, 6), rat(0, 1), rat(-1, 3)]);
        assert_eq!(b, vec![rat(0, 1), rat(-1, 6), rat(-1, 2)]);
    }

    #[test]
    fn b1_vanishes_for_all_n() {
        for n in 3..=12 {
            let (_, b) = gjms_coefficients(n, 8).unwrap();
            assert!(b[0].is_zero());
        }
    }

    #[test]
    fn consistency_b_equals_c_minus_c1() {
        // verified internally by construction; exercise the whole range
        for n in 3..=12 {
            for k in 1..=8 {
                assert!(GJMSSpec::new(n, k, rat_int(7)).is_ok());
            }
        }
    }

    #[test]
    fn dimension_gate() {
        assert!(GJMSSpec::new(2, 1, rat_int(1)).is_err());
    }

    #[test]
    fn sphere_multiplicities() {
        // S^4: 1, 5, 14, 30, ...
        assert_eq!(sphere_multiplicity(4, 0), 1);
        assert_eq!(sphere_multiplicity(4, 1), 5);
        assert_eq!(sphere_multiplicity(4, 2), 14);
        // S^2: 2l + 1
        for l in 0..6 {
            assert_eq!(sphere_multiplicity(2, l), 2 * l + 1);
        }
    }

    #[test]
    fn product_forms_agree_on_sphere() {
        let spec = GJMSSpec::new(4, 2, SpectralModel::<BigRational>::sphere_scalar_curvature(4))
            .unwrap();
        let model = SpectralModel::<BigRational>::unit_sphere(4, 3).unwrap();
        let ops = gjms_operator(&spec, &model, 0.0).unwrap();
        assert_eq!(ops.factored.factors.len(), 2);
        // k = 1 is the conformal Laplacian factor itself
        let spec1 = GJMSSpec::new(4, 1, rat_int(12)).unwrap();
        let ops1 = gjms_operator(&spec1, &model, 0.0).unwrap();
        assert_eq!(ops1.y_entries, ops1.p_entries);
    }

    #[test]
    fn sc_zero_collapses_to_power() {
        let spec = GJMSSpec::new(5, 3, rat_int(0)).unwrap();
        let f = spec.factored_in_y().unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].1, 3);
        let model =
            SpectralModel::new(5, vec![(rat_int(0), 2), (rat_int(3), 1)]).unwrap();
        let report = gjms_nullspace(&spec, &model, 0.0).unwrap();
        assert_eq!(report.total_dim, 2); // N(Y^k) = N(Y): the zero entries
    }

    #[test]
    fn nullspace_hits_engineered_root() {
        let sc = rat_int(12);
        let spec = GJMSSpec::new(4, 2, sc.clone()).unwrap();
        // engineer a model entry with Y-eigenvalue exactly -b_2 Sc:
        // Lap-eigenvalue = -b_2 Sc - c_1 Sc
        let target = -(&spec.b[1] * &sc) - &spec.c[0] * &sc;
        let model =
            SpectralModel::new(4, vec![(target, 3), (rat_int(1), 2)]).unwrap();
        let report = gjms_nullspace(&spec, &model, 0.0).unwrap();
        assert_eq!(report.total_dim, 3);
        assert_eq!(report.components.len(), 1);
        assert_eq!(report.components[0].factor, Some(2));
    }

    #[test]
    fn generic_model_trivial_nullspace() {
        let spec = GJMSSpec::new(5, 2, rat_int(20)).unwrap();
        let model =
            SpectralModel::new(5, vec![(rat_int(1), 2), (rat_int(7), 3)]).unwrap();
        let report = gjms_nullspace(&spec, &model, 0.0).unwrap();
        assert_eq!(report.total_dim, 0);
    }

    #[test]
    fn solve_k2_cofactors_and_residual() {
        let n = 4usize;
        let sc = rat_int(12);
        let spec = GJMSSpec::new(n, 2, sc.clone()).unwrap();
        // generic model away from the factor kernels
        let model = SpectralModel::new(
            4,
            vec![(rat_int(1), 1), (rat_int(5), 2), (rat_int(7), 1)],
        )
        .unwrap();
        let f: Vec<BigRational> = (0..model.dim()).map(|i| rat_int(i as i64 + 1)).collect();
        let report = gjms_solve(&spec, &model, &f, 0.0).unwrap();
        assert!(report.exact_zero);
        // Q_1 = -n(n-1)/(2 Sc), Q_2 = +n(n-1)/(2 Sc)
        let expect = rat_int((n * (n - 1)) as i64) / (rat_int(2) * &sc);
        assert_eq!(report.cofactors[0], -expect.clone());
        assert_eq!(report.cofactors[1], expect);
        assert_eq!(report.relative_sign, -1); // k = 2: (-1)^{k-1}
    }

    #[test]
    fn solve_on_sphere_with_kernel_avoiding_data() {
        // on S^4 the second factor of P_2 kills constants (l = 0); data
        // supported away from that block solves exactly
        let spec = GJMSSpec::new(4, 2, rat_int(12)).unwrap();
        let model = SpectralModel::<BigRational>::unit_sphere(4, 2).unwrap();
        let mut f: Vec<BigRational> = (0..model.dim()).map(|_| rat_int(3)).collect();
        f[0] = rat_int(0); // the single l = 0 entry
        let report = gjms_solve(&spec, &model, &f, 0.0).unwrap();
        assert!(report.exact_zero);
        // and with data hitting the kernel the solve refuses, naming the factor
        let bad: Vec<BigRational> = (0..model.dim()).map(|_| rat_int(3)).collect();
        let err = gjms_solve(&spec, &model, &bad, 0.0).unwrap_err();
        assert!(err.to_string().contains("factor 2"));
    }

    #[test]
    fn solve_k1_direct_inverse() {
        let spec = GJMSSpec::new(4, 1, rat_int(12)).unwrap();
        let model = SpectralModel::<BigRational>::unit_sphere(4, 1).unwrap();
        let f: Vec<BigRational> = (0..model.dim()).map(|_| rat_int(6)).collect();
        let report = gjms_solve(&spec, &model, &f, 0.0).unwrap();
        assert!(report.exact_zero);
    }

    #[test]
    fn eigenstructure_single_and_zero() {
        let spec = GJMSSpec::new(4, 2, rat_int(12)).unwrap();
        let model = SpectralModel::<BigRational>::unit_sphere(4, 2).unwrap();
        let ops = gjms_operator(&spec, &model, 0.0).unwrap();
        // mu at a single model entry
        let mu = ops.p_entries[1].clone();
        let report = gjms_eigenstructure(&spec, &model, &mu, 0.0).unwrap();
        assert_eq!(report.total_dim, model.entries[1].1);
        // mu = 0 coincides with the null space report
        let zero = gjms_eigenstructure(&spec, &model, &<BigRational as num_traits::Zero>::zero(), 0.0).unwrap();
        let nulls = gjms_nullspace(&spec, &model, 0.0).unwrap();
        assert_eq!(zero.total_dim, nulls.total_dim);
    }

    #[test]
    fn eigenstructure_engineered_collision() {
        // two distinct Y-eigenvalues with the same P_k value: for k = 2,
        // P_k(y) = y(y + b_2 Sc) is symmetric about -b_2 Sc / 2
        let sc = rat_int(12);
        let spec = GJMSSpec::new(4, 2, sc.clone()).unwrap();
        let root = &spec.b[1] * &sc; // P factors are y and y + b_2 Sc
        let c1sc = &spec.c[0] * &sc;
        // P(y) = y (y + b_2 Sc) is symmetric about -b_2 Sc / 2 = 1;
        // y1 = 3 and y2 = -b_2 Sc - 3 = -1 share the product value
        let y1 = rat_int(3);
        let y2 = -&root - rat_int(3);
        let model = SpectralModel::new(
            4,
            vec![(y1.clone() - &c1sc, 2), (y2.clone() - &c1sc, 3)],
        )
        .unwrap();
        let mu = y1.clone() * (y1 + root);
        let report = gjms_eigenstructure(&spec, &model, &mu, 0.0).unwrap();
        assert_eq!(report.components.len(), 2);
        assert_eq!(report.total_dim, 5);
    }
}
