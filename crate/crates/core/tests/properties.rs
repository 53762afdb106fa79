use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use twobridge::exactmath::{rat, GaussLaurent};
use twobridge::jones::{
    corrected_sides, grading_set_from_jones, grading_set_skein, jones_bracket, ConventionRecord,
    KhDecomposition,
};
use twobridge::lensfloer::{d_invariant, LensSpace};
use twobridge::rho::{i_invariant, rho, ISign};
use twobridge::twobridge::{OrientationClass, TwoBridge};

fn coprime(pmin: i64, pmax: i64) -> impl Strategy<Value = (i64, i64)> {
    (pmin..=pmax)
        .prop_flat_map(|p| (Just(p), 1..p))
        .prop_filter("coprime", |(p, q)| p.gcd(q) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_is_conjugation_invariant_and_mirror_odd((p, q) in coprime(2, 400)) {
        let l = LensSpace::new(p, q).unwrap();
        for i in 0..p {
            prop_assert_eq!(d_invariant(p, q, i).unwrap(), d_invariant(p, q, l.conjugate(i)).unwrap());
        }
        let mut a: Vec<_> = (0..p).map(|i| d_invariant(p, q, i).unwrap()).collect();
        let mut b: Vec<_> = (0..p).map(|i| -d_invariant(p, p - q, i).unwrap()).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn rho_is_even_in_n((a, b) in coprime(2, 1000), n in 0i64..1000) {
        prop_assert_eq!(rho(a, b, n).unwrap(), rho(a, b, -n).unwrap());
        prop_assert_eq!(rho(a, b, n).unwrap(), rho(a, b, n + a).unwrap());
    }

    #[test]
    fn rho_of_trivial_representation_vanishes((a, b) in coprime(2, 1000)) {
        prop_assert_eq!(rho(a, b, 0).unwrap(), rat(0, 1));
    }

    #[test]
    fn i_is_integral_past_the_tested_range((p, q) in coprime(201, 400)) {
        for i in 0..p {
            prop_assert!(i_invariant(p, q, i, ISign::Plus).is_ok());
        }
    }

    #[test]
    fn jones_determinant_and_dual_route((p, q) in coprime(2, 70)) {
        let k = TwoBridge::new(p, q).unwrap();
        let j = jones_bracket(&k);
        prop_assert_eq!(j.eval_at_i().norm(), BigInt::from(p * p));
        let s = k.signature(OrientationClass::O1).unwrap();
        let lk = (k.components() == 2).then(|| k.linking_number().unwrap());
        let m = grading_set_from_jones(&j, s, lk).unwrap();
        prop_assert_eq!(&m, &grading_set_skein(&k).unwrap());
        prop_assert_eq!(KhDecomposition::from_grading_set(&m, s).reduced_euler_characteristic(), j.clone());
        let back: GaussLaurent = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        prop_assert_eq!(back, j);
    }

    #[test]
    fn corrected_identity_holds((p, q) in coprime(2, 80)) {
        let k = TwoBridge::new(p, q).unwrap();
        let (lhs, rhs) = corrected_sides(&k, &ConventionRecord::frozen()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
