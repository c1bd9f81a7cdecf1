use num_bigint::BigInt;
use num_traits::Signed;
use partstab::random::{random_spec, random_upper_spec, seeded};
use partstab::series::{expand_factor, series_mul_truncated};
use partstab::spec::instantiate_factors;
use partstab::{
    coefficient_by_enumeration, expand_laurent_product, expand_product, expand_product_cauchy, presets, Error, Factor,
    LaurentPolynomial, ProductSpec, Sign, TruncatedSeries, ZPolynomial,
};
use proptest::prelude::*;

fn canonical(p: &ZPolynomial) -> bool {
    p.coeffs().last().is_none_or(|c| c != &BigInt::from(0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn in_place_matches_cauchy(seed in any::<u64>(), order in 0usize..=20) {
        let spec = random_spec(&mut seeded(seed));
        let a = expand_product(&spec, order).unwrap();
        let b = expand_product_cauchy::<ZPolynomial>(&spec, order).unwrap();
        prop_assert_eq!(a.polys(), b.polys());
    }

    #[test]
    fn expansion_matches_enumeration(seed in any::<u64>()) {
        let spec = random_spec(&mut seeded(seed));
        let seq = expand_product(&spec, 12).unwrap();
        for n in 0..=12 {
            let e: ZPolynomial = coefficient_by_enumeration(&spec, n).unwrap();
            prop_assert_eq!(&e, seq.poly(n), "n = {}", n);
        }
    }

    #[test]
    fn sequence_shape(seed in any::<u64>()) {
        let spec = random_spec(&mut seeded(seed));
        let seq = expand_product(&spec, 15).unwrap();
        prop_assert_eq!(seq.poly(0), &ZPolynomial::one());
        prop_assert!(seq.polys().iter().all(canonical));
        let head = seq.truncated(7);
        prop_assert_eq!(head.polys(), &seq.polys()[..=7]);
    }

    #[test]
    fn denominators_count_objects(seed in any::<u64>()) {
        let spec = random_upper_spec(&mut seeded(seed));
        let seq = expand_product(&spec, 30).unwrap();
        for p in seq.polys() {
            prop_assert!(p.coeffs().iter().all(|c| !c.is_negative()));
        }
    }

    #[test]
    fn spec_json_round_trip(seed in any::<u64>()) {
        let spec = random_spec(&mut seeded(seed));
        let back = ProductSpec::from_json(&spec.to_json()).unwrap();
        prop_assert_eq!(&back, &spec);
    }

    #[test]
    fn instantiation_order(seed in any::<u64>(), order in 1usize..=30) {
        let spec = random_spec(&mut seeded(seed));
        let factors = instantiate_factors(&spec, order).unwrap();
        let key = |f: &Factor| (f.q_exp, f.z_exp, f.sign);
        prop_assert!(factors.windows(2).all(|w| key(&w[0]) <= key(&w[1])));
        prop_assert!(factors.iter().all(|f| f.q_exp >= 1 && f.q_exp as usize <= order));
    }

    #[test]
    fn factor_products_commute(
        za in 0i64..=3, qa in 1i64..=4, ea in -3i64..=3,
        zb in -2i64..=2, qb in 1i64..=4, eb in -3i64..=3,
        plus in any::<bool>(),
    ) {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let (f, g) = (Factor::new(sign, za, qa, ea), Factor::new(Sign::Minus, zb, qb, eb));
        let order = 16;
        let fs: TruncatedSeries<LaurentPolynomial> = expand_factor(&f, order).unwrap();
        let gs = expand_factor(&g, order).unwrap();
        let fg = series_mul_truncated(&fs, &gs).unwrap();
        prop_assert_eq!(&fg, &series_mul_truncated(&gs, &fs).unwrap());
        let mut in_place = fs.clone();
        in_place.mul_factor_in_place(&g).unwrap();
        prop_assert_eq!(&in_place, &fg);
        // a factor times its inverse is 1
        let inv = expand_factor(&Factor::new(sign, za, qa, -ea), order).unwrap();
        prop_assert_eq!(series_mul_truncated(&fs, &inv).unwrap(), TruncatedSeries::one(order));
    }
}

#[test]
fn laurent_presets_match_cauchy() {
    for spec in [presets::crank(), presets::donaldson_thomas()] {
        let a = expand_laurent_product(&spec, 20).unwrap();
        let b = expand_product_cauchy::<LaurentPolynomial>(&spec, 20).unwrap();
        assert_eq!(a.polys(), b.polys(), "{}", spec.label());
    }
}

#[test]
fn preset_oracles() {
    for name in ["partitions", "no_ones", "plane_partitions", "subsums(3,1)", "subsums(4,2)", "plane_overpartitions"] {
        let spec = ProductSpec::preset(name).unwrap();
        let seq = expand_product(&spec, 16).unwrap();
        for n in 0..=16 {
            let e: ZPolynomial = coefficient_by_enumeration(&spec, n).unwrap();
            assert_eq!(&e, seq.poly(n), "{name} n = {n}");
        }
    }
}

#[test]
fn mismatched_orders_refused() {
    let a = TruncatedSeries::<ZPolynomial>::one(4);
    let b = TruncatedSeries::<ZPolynomial>::one(5);
    assert!(matches!(series_mul_truncated(&a, &b), Err(Error::OrderMismatch { .. })));
}
