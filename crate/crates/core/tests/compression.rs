use num_rational::Rational64;
use proptest::prelude::*;
use zstructure::compression::{
    conjugate_affine, envelope, linear_control_defect, CompressionMap, HHat, ProperFunctionPair,
    SublinearFn,
};
use zstructure::metric_models::{hyperbolic, ModelPoint};

fn r(x: i64) -> Rational64 {
    Rational64::from_integer(x)
}

fn pair_strategy() -> impl Strategy<Value = ProperFunctionPair> {
    (0i64..6, 1i64..4, 2i64..5, 0i64..3)
        .prop_filter_map("derivative at 0 below 1", |(p, a, c, b)| ProperFunctionPair::new(r(p), r(a), r(c), r(b)).ok())
}

fn phi_strategy() -> impl Strategy<Value = SublinearFn> {
    prop_oneof![
        Just(SublinearFn::Log),
        Just(SublinearFn::LogLog),
        Just(SublinearFn::Zero),
        Just(SublinearFn::Power { c: 1.0, p: 0.5 }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn branches_agree_at_psi0(pair in pair_strategy(), phi in phi_strategy()) {
        let h = HHat::new(pair.clone(), phi.clone());
        prop_assert_eq!(h.eval(pair.psi0()), pair.psi0());
        prop_assert_eq!(phi.eval(pair.f_inv(0.0)) + pair.psi0(), pair.psi0());
    }

    #[test]
    fn hhat_is_concave_beyond_psi0(pair in pair_strategy(), phi in phi_strategy(),
                                   x in 0.0f64..200.0, step in 1e-3f64..10.0) {
        let h = HHat::new(pair.clone(), phi);
        let p = pair.psi0();
        let (a, b, c) = (p + x, p + x + step, p + x + 2.0 * step);
        let second = h.eval(a) - 2.0 * h.eval(b) + h.eval(c);
        prop_assert!(second <= 1e-9, "second difference {}", second);
        // hence ĥ(x)/x is nonincreasing there
        if a > 0.0 {
            prop_assert!(h.eval(c) / c <= h.eval(a) / a + 1e-12);
        }
    }

    #[test]
    fn one_dimensional_contract(pair in pair_strategy(), phi in phi_strategy(),
                                a in 0.0f64..500.0, u in 0.0f64..1.0, big_r in 0.0f64..5.0) {
        let h = HHat::new(pair.clone(), phi);
        let b = a + u * pair.psi(big_r);
        let bound = h.phi_star_at(big_r);
        prop_assert!((h.eval(a) - h.eval(b)).abs() <= bound + 1e-9 * bound.max(1.0));
    }

    #[test]
    fn radial_compression_keeps_direction(x in -1e3f64..1e3, y in -1e3f64..1e3) {
        let pair = envelope(&[], Some((r(2), r(3)))).unwrap();
        let h = HHat::new(pair, SublinearFn::Log);
        let e2 = CompressionMap::euclidean(h.clone(), 2);
        let c = e2.compress_vec(&[x, y]).unwrap();
        prop_assert!((c[0] * y - c[1] * x).abs() <= 1e-9 * (x.hypot(y) * c[0].hypot(c[1])).max(1.0));
        prop_assert!(c[0] * x + c[1] * y >= 0.0);
        let h2 = CompressionMap::hyperbolic(h);
        let p = hyperbolic::lift(x / 100.0, y / 100.0);
        if let ModelPoint::Hyperbolic(q) = h2.compress(&ModelPoint::Hyperbolic(p)).unwrap() {
            prop_assert!((q[0] * p[1] - q[1] * p[0]).abs() <= 1e-9 * (p[0].hypot(p[1]) * q[0].hypot(q[1])).max(1.0));
            prop_assert!(q[0] * p[0] + q[1] * p[1] >= 0.0);
        } else {
            prop_assert!(false, "wrong point type");
        }
    }

    /// A compression pushed through a diagonal bi-Lipschitz map `L` still
    /// compresses, with the contract scaled by the Lipschitz constant.
    #[test]
    fn contract_transfers_through_diagonal_maps(l1 in 0.25f64..4.0, l2 in 0.25f64..4.0,
                                                 x in -40.0f64..40.0, y in -40.0f64..40.0,
                                                 th in 0.0f64..6.3, u in 0.0f64..1.0,
                                                 big_r in 0.0f64..3.0) {
        let pair = envelope(&[], Some((r(2), r(3)))).unwrap();
        let map = CompressionMap::euclidean(HHat::new(pair.clone(), SublinearFn::Log), 2);
        let lip = l1.max(l2).max(1.0 / l1.min(l2));
        let conj = |p: &[f64]| {
            let q = map.compress_vec(&[p[0] / l1, p[1] / l2]).unwrap();
            [q[0] * l1, q[1] * l2]
        };
        let d = u * pair.psi(big_r) / lip;
        let a = [x, y];
        let b = [x + d * th.cos(), y + d * th.sin()];
        let (ha, hb) = (conj(&a), conj(&b));
        let dh = (ha[0] - hb[0]).hypot(ha[1] - hb[1]);
        let bound = lip * 4.0 * map.phi_star_at(big_r);
        prop_assert!(dh <= bound * (1.0 + 1e-9), "{} > {}", dh, bound);
    }

    #[test]
    fn conjugated_scalings_approach_identity(k in 1u32..4, m in prop_oneof![Just(1.0f64/3.0), Just(2.0), Just(10.0)]) {
        let pair = envelope(&[], Some((r(2), r(3)))).unwrap();
        let map = CompressionMap::euclidean(HHat::log_precomposed(pair, SublinearFn::Log), 1);
        let t = 10f64.powi(4 + k as i32);
        let d = linear_control_defect(&map, m, t).unwrap();
        let y = conjugate_affine(&map, &[vec![m]], &[0.0], &[t]).unwrap()[0];
        // the defect bounds the relative displacement
        prop_assert!(((y - t) / t).abs() <= d.value() + 1e-12);
    }
}
