//! From dual certificates to direct cofactors.
//!
//! Given relative-invertibility certificates `1 = sum_{j in J} Q_{J,j} P_j`
//! for the subsets `J` in the upper complement of a downward-closed
//! system `alpha`, this builds polynomials `Q_I`, `I in alpha`, with
//!
//! `1 = sum_{I in alpha} Q_I P^I`,   `P^I = prod_{j not in I} P_j`,
//!
//! by induction over the inclusion order of the upper complement: a
//! one-step-down subset that lands in `alpha` contributes its cofactor
//! directly; one that stays in the upper complement is expanded
//! recursively and its identity multiplied through by the missing factor.

use super::{IdealCertificate, MultiPoly, UnitStatus};
use crate::error::{Error, Result};
use crate::posets::{AlphaSystem, SubsetMask};
use std::collections::BTreeMap;

pub fn dual_to_alpha(
    factors: &[MultiPoly],
    alpha: &AlphaSystem,
    certs: &BTreeMap<SubsetMask, IdealCertificate>,
) -> Result<BTreeMap<SubsetMask, MultiPoly>> {
    alpha.check_alpha_role()?;
    if alpha.ground.size() != factors.len() {
        return Err(Error::input("alpha ground set does not match factor count"));
    }
    if *alpha != alpha.lower_closure() {
        return Err(Error::input(
            "dual_to_alpha requires alpha to be closed downward",
        ));
    }
    let nvars = factors[0].nvars;
    let full = alpha.ground.full_mask();
    let mut memo: BTreeMap<SubsetMask, BTreeMap<SubsetMask, MultiPoly>> = BTreeMap::new();
    let result = build(full, factors, alpha, certs, &mut memo)?;

    // the identity is the product: verify it before handing it out
    let mut acc = MultiPoly::zero(nvars);
    for (i_set, q) in &result {
        let mut term = q.clone();
        for j in 0..factors.len() {
            if !i_set.contains(j) {
                term = term.mul(&factors[j]);
            }
        }
        acc = acc.add(&term);
    }
    if !acc.is_one() {
        return Err(Error::math(format!(
            "constructed alpha cofactors do not sum to 1 (got {})",
            acc
        )));
    }
    Ok(result)
}

/// For `j_set` in the upper complement of `alpha`, produce `Q_{I}` with
/// `1 = sum_{I in alpha} Q_I P_{j_set \ I}`.
fn build(
    j_set: SubsetMask,
    factors: &[MultiPoly],
    alpha: &AlphaSystem,
    certs: &BTreeMap<SubsetMask, IdealCertificate>,
    memo: &mut BTreeMap<SubsetMask, BTreeMap<SubsetMask, MultiPoly>>,
) -> Result<BTreeMap<SubsetMask, MultiPoly>> {
    if let Some(hit) = memo.get(&j_set) {
        return Ok(hit.clone());
    }
    let nvars = factors[0].nvars;
    let cert = certs.get(&j_set).ok_or_else(|| {
        Error::input(format!(
            "missing unit certificate for required subset {:?}",
            j_set.indices()
        ))
    })?;
    if cert.status != UnitStatus::Unit {
        return Err(Error::math(format!(
            "subset {:?} carries a not-unit certificate",
            j_set.indices()
        )));
    }
    let indices = j_set.indices();
    if cert.cofactors.len() != indices.len() {
        return Err(Error::input(format!(
            "certificate for {:?} has {} cofactors, expected {}",
            indices,
            cert.cofactors.len(),
            indices.len()
        )));
    }
    cert.verify()?;

    let mut result: BTreeMap<SubsetMask, MultiPoly> = BTreeMap::new();
    let add = |map: &mut BTreeMap<SubsetMask, MultiPoly>, key: SubsetMask, q: MultiPoly| {
        let entry = map.entry(key).or_insert_with(|| MultiPoly::zero(nvars));
        *entry = entry.add(&q);
        if entry.is_zero() {
            map.remove(&key);
        }
    };

    for (pos, &j) in indices.iter().enumerate() {
        let q_jj = &cert.cofactors[pos];
        let step_down = j_set.remove(j);
        if alpha.contains(&step_down) {
            // P_j = P_{j_set \ step_down}: direct contribution
            add(&mut result, step_down, q_jj.clone());
        } else {
            // expand P_j through the identity for the smaller subset:
            // P_j = sum_I Q'_I P_{j_set \ (I \ {j})}
            let sub = build(step_down, factors, alpha, certs, memo)?;
            for (i_set, q_sub) in sub {
                let key = i_set.remove(j);
                add(&mut result, key, q_jj.mul(&q_sub));
            }
        }
    }
    memo.insert(j_set, result.clone());
    Ok(result)
}

/// Fold cofactors indexed by a downward-closed system onto an antichain
/// dominating it: each `Q_I` is pushed to some member `I' >= I` by
/// multiplying with the factors of `I' \ I`. The folded identity
/// `1 = sum Q'_{I'} P^{I'}` is verified before returning.
pub fn fold_to_antichain(
    factors: &[MultiPoly],
    cofactors: &BTreeMap<SubsetMask, MultiPoly>,
    antichain: &AlphaSystem,
) -> Result<BTreeMap<SubsetMask, MultiPoly>> {
    let nvars = factors[0].nvars;
    let mut out: BTreeMap<SubsetMask, MultiPoly> = BTreeMap::new();
    for (i_set, q) in cofactors {
        let target = antichain
            .members
            .iter()
            .find(|t| i_set.is_subset_of(t))
            .ok_or_else(|| {
                Error::input(format!(
                    "no antichain member dominates {:?}",
                    i_set.indices()
                ))
            })?;
        let mut term = q.clone();
        for j in target.difference(i_set).indices() {
            term = term.mul(&factors[j]);
        }
        let entry = out
            .entry(*target)
            .or_insert_with(|| MultiPoly::zero(nvars));
        *entry = entry.add(&term);
    }
    let mut acc = MultiPoly::zero(nvars);
    for (i_set, q) in &out {
        let mut term = q.clone();
        for j in 0..factors.len() {
            if !i_set.contains(j) {
                term = term.mul(&factors[j]);
            }
        }
        acc = acc.add(&term);
    }
    if !acc.is_one() {
        return Err(Error::math("folded cofactors do not sum to 1"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::{certify_beta_decomposition, GroebnerConfig};
    use crate::posets::IndexSet;

    fn linear(shift: i64) -> MultiPoly {
        MultiPoly::from_int_terms(1, &[(&[1], 1), (&[0], shift)])
    }

    fn lower_closed(ell: usize, members: &[&[usize]]) -> AlphaSystem {
        AlphaSystem::new(
            IndexSet::new(ell).unwrap(),
            members.iter().map(|m| SubsetMask::from_indices(m)),
        )
        .unwrap()
        .lower_closure()
    }

    fn certs_for(
        factors: &[MultiPoly],
        alpha: &AlphaSystem,
    ) -> BTreeMap<SubsetMask, IdealCertificate> {
        let upper = alpha.upper_complement();
        certify_beta_decomposition(factors, &upper, &GroebnerConfig::default()).unwrap()
    }

    #[test]
    fn pair_of_coprime_linear_factors() {
        // factors {x, x+1}, alpha the singletons closed down
        let factors = vec![linear(0), linear(1)];
        let alpha = lower_closed(1, &[&[0], &[1]]);
        let certs = certs_for(&factors, &alpha);
        let q = dual_to_alpha(&factors, &alpha, &certs).unwrap();
        // Q_{{0}} (x+1) + Q_{{1}} x = 1 with Q_{{0}} = 1, Q_{{1}} = -1
        assert_eq!(
            q.get(&SubsetMask::from_indices(&[0])).unwrap(),
            &MultiPoly::one(1)
        );
        assert_eq!(
            q.get(&SubsetMask::from_indices(&[1])).unwrap(),
            &MultiPoly::one(1).scale(&crate::scalar::rat(-1, 1))
        );
    }

    #[test]
    fn unit_factors_collapse_to_empty_set() {
        let factors = vec![MultiPoly::one(1), MultiPoly::one(1)];
        let alpha = lower_closed(1, &[&[]]);
        let certs = certs_for(&factors, &alpha);
        let q = dual_to_alpha(&factors, &alpha, &certs).unwrap();
        assert!(q.contains_key(&SubsetMask::EMPTY));
    }

    #[test]
    fn missing_certificate_is_named() {
        let factors = vec![linear(0), linear(1)];
        let alpha = lower_closed(1, &[&[0], &[1]]);
        let err = dual_to_alpha(&factors, &alpha, &BTreeMap::new()).unwrap_err();
        assert!(err.to_string().contains("missing unit certificate"));
    }

    #[test]
    fn three_linear_factors_match_univariate_partition() {
        // factors {x, x+1, x+2}, alpha = all |I| <= 1
        let factors = vec![linear(0), linear(1), linear(2)];
        let alpha = lower_closed(2, &[&[0], &[1], &[2]]);
        let certs = certs_for(&factors, &alpha);
        let q = dual_to_alpha(&factors, &alpha, &certs).unwrap();

        // fold onto the singleton antichain and compare residues with the
        // univariate partition of unity
        let singletons = AlphaSystem::new(
            IndexSet::new(2).unwrap(),
            (0..3).map(|i| SubsetMask::from_indices(&[i])),
        )
        .unwrap();
        let folded = fold_to_antichain(&factors, &q, &singletons).unwrap();

        let fp = crate::polyalg::FactoredPoly::monic(
            vec![
                (crate::scalar::rat_int(0), 1),
                (crate::scalar::rat_int(1), 1),
                (crate::scalar::rat_int(2), 1),
            ],
            0.0,
        )
        .unwrap();
        let cert = crate::polyalg::partition_of_unity(&fp, 0.0).unwrap();
        for i in 0..3 {
            let folded_q = folded
                .get(&SubsetMask::from_indices(&[i]))
                .unwrap()
                .to_dense()
                .unwrap();
            let modulus = fp.factor_poly(i);
            assert_eq!(folded_q.rem_mod(&modulus), cert.cofactors[i]);
        }
    }
}
