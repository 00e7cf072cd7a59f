//! Buchberger's algorithm with cofactor tracking.
//!
//! Every basis element carries its representation as a combination of
//! the input generators, updated through all S-polynomial reductions, so
//! the reduced basis comes with a transform matrix. When the basis is
//! `{1}` the transform row for 1 is exactly a unit-ideal certificate.

use super::{IdealCertificate, MultiPoly, UnitStatus};
use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::One;

#[derive(Clone, Debug)]
pub struct GroebnerConfig {
    /// Cap on the total number of stored terms (basis plus transform).
    pub max_terms: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        Self { max_terms: 1_000_000 }
    }
}

pub struct GroebnerResult {
    /// Reduced Groebner basis, monic, sorted by leading term.
    pub basis: Vec<MultiPoly>,
    /// `basis[i] = sum_j transform[i][j] * gens[j]`.
    pub transform: Vec<Vec<MultiPoly>>,
}

struct Tracked {
    poly: MultiPoly,
    rep: Vec<MultiPoly>,
}

impl Tracked {
    fn term_count(&self) -> usize {
        self.poly.term_count() + self.rep.iter().map(|r| r.term_count()).sum::<usize>()
    }
}

/// Reduce `f` against the current basis, keeping the representation in
/// sync. Performs a full normal-form reduction (all terms).
fn reduce(f: &mut Tracked, basis: &[Tracked]) {
    loop {
        let mut reduced = false;
        // find the largest reducible term
        let target = f.poly.terms().rev().find_map(|(m, c)| {
            basis.iter().enumerate().find_map(|(bi, b)| {
                let (lm, lc) = b.poly.leading()?;
                if lm.divides(m) {
                    Some((bi, m.clone(), c.clone(), lm.div_into(m), lc.clone()))
                } else {
                    None
                }
            })
        });
        if let Some((bi, _m, c, quot_mono, lc)) = target {
            let factor = -(c / lc);
            let b = &basis[bi];
            f.poly.add_scaled(&factor, &quot_mono, &b.poly);
            for (fr, br) in f.rep.iter_mut().zip(&b.rep) {
                fr.add_scaled(&factor, &quot_mono, br);
            }
            reduced = true;
        }
        if !reduced {
            return;
        }
    }
}

/// Compute a reduced Groebner basis with a transform matrix expressing
/// each basis element in terms of the input generators.
pub fn groebner(gens: &[MultiPoly], config: &GroebnerConfig) -> Result<GroebnerResult> {
    if gens.is_empty() || gens.iter().all(|g| g.is_zero()) {
        return Err(Error::input("groebner requires a nonzero generator"));
    }
    let nvars = gens[0].nvars;
    if gens.iter().any(|g| g.nvars != nvars) {
        return Err(Error::input("generators disagree on variable count"));
    }

    let unit_rep = |k: usize| -> Vec<MultiPoly> {
        (0..gens.len())
            .map(|j| {
                if j == k {
                    MultiPoly::one(nvars)
                } else {
                    MultiPoly::zero(nvars)
                }
            })
            .collect()
    };

    let mut basis: Vec<Tracked> = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        if !g.is_zero() {
            basis.push(Tracked { poly: g.clone(), rep: unit_rep(k) });
        }
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pairs.push((i, j));
        }
    }

    while let Some(pos) = select_pair(&pairs, &basis) {
        let (i, j) = pairs.swap_remove(pos);
        let (lm_i, lc_i) = basis[i].poly.leading().unwrap();
        let (lm_j, lc_j) = basis[j].poly.leading().unwrap();
        // product criterion: coprime leading monomials reduce to zero
        if lm_i.mul(lm_j) == lm_i.lcm(lm_j) {
            continue;
        }
        let lcm = lm_i.lcm(lm_j);
        let mono_i = lm_i.div_into(&lcm);
        let mono_j = lm_j.div_into(&lcm);
        let scale_j = -(lc_i / lc_j);

        let mut s = Tracked {
            poly: MultiPoly::zero(nvars),
            rep: vec![MultiPoly::zero(nvars); gens.len()],
        };
        s.poly.add_scaled(&BigRational::one(), &mono_i, &basis[i].poly);
        s.poly.add_scaled(&scale_j, &mono_j, &basis[j].poly);
        for ((sr, ir), jr) in s.rep.iter_mut().zip(&basis[i].rep).zip(&basis[j].rep) {
            sr.add_scaled(&BigRational::one(), &mono_i, ir);
            sr.add_scaled(&scale_j, &mono_j, jr);
        }
        reduce(&mut s, &basis);
        if s.poly.is_zero() {
            continue;
        }
        let new_idx = basis.len();
        basis.push(s);
        for k in 0..new_idx {
            pairs.push((k, new_idx));
        }

        let total: usize = basis.iter().map(Tracked::term_count).sum();
        if total > config.max_terms {
            return Err(Error::budget(format!(
                "basis budget exceeded: {} terms (cap {})",
                total, config.max_terms
            )));
        }
    }

    // minimise: drop elements whose leading monomial another leading
    // monomial divides
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let lm_i = basis[i].poly.leading().unwrap().0.clone();
        for j in 0..basis.len() {
            if i != j && keep[j] {
                let lm_j = basis[j].poly.leading().unwrap().0;
                if lm_i.divides(lm_j) && (&lm_i != lm_j || i < j) {
                    keep[j] = false;
                }
            }
        }
    }
    let mut minimal: Vec<Tracked> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(t, k)| k.then_some(t))
        .collect();

    // tail-reduce each survivor against the others and normalise monic
    for idx in 0..minimal.len() {
        let mut current = Tracked {
            poly: minimal[idx].poly.clone(),
            rep: minimal[idx].rep.clone(),
        };
        let others: Vec<Tracked> = minimal
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != idx)
            .map(|(_, t)| Tracked { poly: t.poly.clone(), rep: t.rep.clone() })
            .collect();
        reduce(&mut current, &others);
        let lc = current.poly.leading().unwrap().1.clone();
        let inv = lc.recip();
        current.poly = current.poly.scale(&inv);
        current.rep = current.rep.iter().map(|r| r.scale(&inv)).collect();
        minimal[idx] = current;
    }
    minimal.sort_by(|a, b| {
        b.poly
            .leading()
            .unwrap()
            .0
            .cmp(a.poly.leading().unwrap().0)
    });

    Ok(GroebnerResult {
        basis: minimal.iter().map(|t| t.poly.clone()).collect(),
        transform: minimal.into_iter().map(|t| t.rep).collect(),
    })
}

fn select_pair(pairs: &[(usize, usize)], basis: &[Tracked]) -> Option<usize> {
    // normal strategy: smallest lcm degree first
    pairs
        .iter()
        .enumerate()
        .min_by_key(|(_, &(i, j))| {
            let lm_i = basis[i].poly.leading().unwrap().0;
            let lm_j = basis[j].poly.leading().unwrap().0;
            lm_i.lcm(lm_j).total_degree()
        })
        .map(|(pos, _)| pos)
}

/// Decide whether the generators span the unit ideal; when they do, the
/// certificate carries cofactors with `sum Q_i P_i = 1` exactly.
pub fn unit_certificate(gens: &[MultiPoly], config: &GroebnerConfig) -> Result<IdealCertificate> {
    let result = groebner(gens, config)?;
    let is_unit = result.basis.len() == 1 && result.basis[0].is_one();
    let cert = if is_unit {
        IdealCertificate {
            generators: gens.to_vec(),
            cofactors: result.transform.into_iter().next().unwrap(),
            status: UnitStatus::Unit,
        }
    } else {
        IdealCertificate {
            generators: gens.to_vec(),
            cofactors: Vec::new(),
            status: UnitStatus::NotUnit,
        }
    };
    cert.verify()?;
    Ok(cert)
}
