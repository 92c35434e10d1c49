mod common;

use common::{alexander_det_at, float_cover_order, float_signature, seifert_from_symmetric};
use foinv::knot::{
    alexander_polynomial, alexander_second_derivative_at_1, branched_cover_h1_order, tristram_levine_signature,
    CoverOrder, KnotCatalog, KnotError, SeifertMatrix,
};
use foinv::laurent::LaurentPolynomial;
use num_bigint::BigInt;
use proptest::prelude::*;

fn times_t_g(delta: &LaurentPolynomial, g: i64, t: i128) -> i128 {
    delta
        .terms()
        .map(|(e, c)| {
            let c: i128 = c.try_into().unwrap();
            c * t.pow((e + g) as u32)
        })
        .sum()
}

fn check_against_integer_det(v: &SeifertMatrix) {
    let delta = alexander_polynomial(v);
    let g = v.genus() as i64;
    let unit = alexander_det_at(v, 1);
    assert!(unit == 1 || unit == -1);
    for t in [-3i128, -2, 2, 3, 5] {
        assert_eq!(alexander_det_at(v, t), unit * times_t_g(&delta, g, t), "t = {t}, V = {v:?}");
    }
}

#[test]
fn catalog_polynomials_match_known_values() {
    let cat = KnotCatalog::builtin();
    let expect = [
        ("unknot", vec![(0, 1)]),
        ("trefoil", vec![(-1, 1), (0, -1), (1, 1)]),
        ("figure-eight", vec![(-1, -1), (0, 3), (1, -1)]),
        ("T(2,5)", vec![(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]),
        ("T(2,7)", vec![(-3, 1), (-2, -1), (-1, 1), (0, -1), (1, 1), (2, -1), (3, 1)]),
    ];
    for (label, terms) in expect {
        let v = cat.get(label).unwrap();
        assert_eq!(alexander_polynomial(&v), LaurentPolynomial::from_terms(terms), "{label}");
        check_against_integer_det(&v);
    }
}

#[test]
fn second_derivative_pinned_values() {
    let cat = KnotCatalog::builtin();
    for (label, d) in [("unknot", 0), ("trefoil", 2), ("figure-eight", -2), ("T(2,5)", 6), ("T(2,7)", 12)] {
        assert_eq!(alexander_second_derivative_at_1(&cat.get(label).unwrap()), BigInt::from(d), "{label}");
    }
}

#[test]
fn signatures_agree_with_eigenvalue_count() {
    let cat = KnotCatalog::builtin();
    for label in KnotCatalog::builtin_labels() {
        let v = cat.get(label).unwrap();
        for n in 2..=7 {
            for m in 1..n {
                match (tristram_levine_signature(&v, m, n), float_signature(&v, m, n)) {
                    (Ok(s), Some(f)) => assert_eq!(s, f, "{label} at {m}/{n}"),
                    (Err(KnotError::SingularForm { .. }), None) => {}
                    (a, b) => panic!("{label} at {m}/{n}: exact {a:?}, float {b:?}"),
                }
            }
        }
    }
}

#[test]
fn torus_knot_signatures_pinned() {
    let cat = KnotCatalog::builtin();
    assert_eq!(tristram_levine_signature(&cat.get("trefoil").unwrap(), 1, 2), Ok(-2));
    assert_eq!(tristram_levine_signature(&cat.get("T(2,5)").unwrap(), 1, 2), Ok(-4));
    assert_eq!(tristram_levine_signature(&cat.get("T(2,7)").unwrap(), 1, 3), Ok(-4));
    assert_eq!(tristram_levine_signature(&cat.get("figure-eight").unwrap(), 1, 2), Ok(0));
    // ω = exp(2πi/6) is a root of the trefoil polynomial
    assert_eq!(tristram_levine_signature(&cat.get("trefoil").unwrap(), 1, 6), Err(KnotError::SingularForm { m: 1, n: 6 }));
}

#[test]
fn cover_orders_pinned() {
    let cat = KnotCatalog::builtin();
    let tref = cat.get("trefoil").unwrap();
    assert_eq!(branched_cover_h1_order(&tref, 2), Ok(CoverOrder::Finite(BigInt::from(3))));
    assert_eq!(branched_cover_h1_order(&tref, 3), Ok(CoverOrder::Finite(BigInt::from(4))));
    assert_eq!(branched_cover_h1_order(&tref, 6), Ok(CoverOrder::Infinite));
    assert_eq!(branched_cover_h1_order(&cat.get("figure-eight").unwrap(), 2), Ok(CoverOrder::Finite(BigInt::from(5))));
    assert_eq!(branched_cover_h1_order(&cat.get("T(2,5)").unwrap(), 2), Ok(CoverOrder::Finite(BigInt::from(5))));
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(matches!(SeifertMatrix::new(vec![vec![1, 0], vec![0, 1]]), Err(KnotError::NotUnimodular(_))));
    assert!(matches!(SeifertMatrix::new(vec![vec![1]]), Err(KnotError::OddDimension(1))));
    assert!(matches!(SeifertMatrix::new(vec![vec![1, 0], vec![0]]), Err(KnotError::NotSquare { .. })));
    let tref = SeifertMatrix::trefoil();
    assert_eq!(tristram_levine_signature(&tref, 0, 3), Err(KnotError::BadRoot { m: 0, n: 3 }));
    assert_eq!(branched_cover_h1_order(&tref, 1), Err(KnotError::BadCoverDegree(1)));
}

fn seifert_strategy() -> impl Strategy<Value = SeifertMatrix> {
    (1usize..=3).prop_flat_map(|g| {
        let len = (2 * g) * (2 * g + 1) / 2;
        prop::collection::vec(-2i64..=2, len).prop_map(move |s| seifert_from_symmetric(g, &s))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn alexander_is_symmetric_and_normalized(v in seifert_strategy()) {
        let d = alexander_polynomial(&v);
        prop_assert!(d.is_symmetric());
        prop_assert_eq!(d.eval_at_one(), BigInt::from(1));
        check_against_integer_det(&v);
    }

    #[test]
    fn signature_is_conjugation_symmetric(v in seifert_strategy(), n in 2i64..=6, m0 in 1i64..6) {
        let m = 1 + (m0 - 1) % (n - 1);
        let a = tristram_levine_signature(&v, m, n);
        let b = tristram_levine_signature(&v, n - m, n);
        prop_assert_eq!(&a, &b);
        if let (Ok(s), Some(f)) = (&a, float_signature(&v, m, n)) {
            prop_assert_eq!(*s, f);
        }
    }

    #[test]
    fn cover_order_matches_root_product(v in seifert_strategy(), n in 2i64..=6) {
        let f = float_cover_order(&v, n);
        match branched_cover_h1_order(&v, n).unwrap() {
            CoverOrder::Finite(k) => {
                let k: f64 = k.to_string().parse().unwrap();
                prop_assert!((k - f).abs() <= 1e-6 * k.max(1.0), "exact {k}, float {f}");
            }
            CoverOrder::Infinite => prop_assert!(f < 1e-6, "float {f}"),
        }
    }

    #[test]
    fn connected_sum_is_additive(a in seifert_strategy(), b in seifert_strategy(), n in 2i64..=5) {
        let s = a.block_sum(&b);
        prop_assert_eq!(alexander_polynomial(&s), &alexander_polynomial(&a) * &alexander_polynomial(&b));
        prop_assert_eq!(
            alexander_second_derivative_at_1(&s),
            alexander_second_derivative_at_1(&a) + alexander_second_derivative_at_1(&b)
        );
        if let (Ok(x), Ok(y)) = (tristram_levine_signature(&a, 1, n), tristram_levine_signature(&b, 1, n)) {
            prop_assert_eq!(tristram_levine_signature(&s, 1, n), Ok(x + y));
        }
    }
}
