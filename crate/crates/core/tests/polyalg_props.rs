//! Property tests for the polynomial partition-of-unity layer.

mod common;

use num_rational::BigRational;
use opkit::polyalg::{
    nilpotent_inverse_series, partition_of_unity, real_partition, simple_root_cofactors,
    DensePoly, FactoredPoly,
};
use opkit::scalar::{rat, GaussianRational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn factored_poly(max_factors: usize, max_p: usize) -> impl Strategy<Value = FactoredPoly<BigRational>> {
    proptest::collection::vec((rational(), 1..=max_p), 1..=max_factors).prop_filter_map(
        "distinct roots",
        |factors| FactoredPoly::monic(factors, 0.0).ok(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_identity_holds(p in factored_poly(6, 4)) {
        let cert = partition_of_unity(&p, 0.0).unwrap();
        // verify() checks both the identity and the degree bounds
        cert.verify(0.0).unwrap();
    }

    #[test]
    fn simple_roots_match_closed_form(p in factored_poly(5, 1)) {
        let cert = partition_of_unity(&p, 0.0).unwrap();
        let consts = simple_root_cofactors(&p).unwrap();
        for (q, c) in cert.cofactors.iter().zip(&consts) {
            prop_assert_eq!(q, &DensePoly::constant(c.clone()));
        }
    }

    #[test]
    fn inverse_series_is_inverse_mod_power(
        mu in rational(),
        lambda in rational(),
        p in 1usize..=5,
    ) {
        prop_assume!(mu != lambda);
        let series = nilpotent_inverse_series(&mu, &lambda, p).unwrap();
        let modulus = DensePoly::x_plus(lambda).pow(p);
        let product = series * DensePoly::x_plus(mu);
        prop_assert_eq!(product.rem_mod(&modulus), DensePoly::one());
    }

    #[test]
    fn real_partition_is_real_and_sums_to_one(
        real_roots in proptest::collection::vec(-5i64..=5, 0..=2),
        pair_res in proptest::collection::vec((-3i64..=3, 1i64..=3), 1..=2),
    ) {
        // assemble a conjugate-closed root set: distinct real roots plus
        // conjugate pairs with nonzero imaginary part
        let mut factors: Vec<(GaussianRational, usize)> = Vec::new();
        for r in real_roots {
            let g = GaussianRational::from_real(rat(r, 1));
            if factors.iter().any(|(f, _)| f == &g) { continue; }
            factors.push((g, 1));
        }
        for (re, im) in pair_res {
            let k = GaussianRational::new(rat(re, 1), rat(im, 1));
            if factors.iter().any(|(f, _)| f == &k || f == &k.conj()) { continue; }
            factors.push((k.clone(), 1));
            factors.push((k.conj(), 1));
        }
        if let Ok(p) = FactoredPoly::monic(factors, 0.0) {
            let cert = real_partition(&p).unwrap();
            cert.verify(0.0).unwrap();
            for q in &cert.cofactors {
                for c in q.coeffs() {
                    prop_assert!(c.is_real());
                }
            }
        }
    }
}
