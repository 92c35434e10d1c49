mod common;

use common::float_signature;
use foinv::acceptance::oracle;
use foinv::calculus::{
    casson, check_admissibility, d0_invariant, expand_surgery_chain, lambda_fo, CalcError, FourManifold, ThreeManifold,
    TorusDescriptor,
};
use foinv::exact::{q_frac, q_int, Q};
use foinv::gluing::GluingMatrix;
use foinv::knot::{alexander_second_derivative_at_1, KnotCatalog, KnotInSphere};
use num_rational::BigRational;
use num_bigint::BigInt;
use num_traits::Signed;

fn knot(label: &str) -> KnotInSphere {
    KnotCatalog::builtin().knot_in_s3(label).unwrap()
}

fn ddelta(label: &str) -> Q {
    BigRational::from_integer(alexander_second_derivative_at_1(&knot(label).seifert))
}

fn poincare() -> ThreeManifold {
    ThreeManifold::named_sphere("Sigma(2,3,5)", q_int(-1)).unwrap()
}

#[test]
fn casson_surgery_formula() {
    for label in KnotCatalog::builtin_labels() {
        for q in -6..=6 {
            let y = ThreeManifold::surgery_one_over_q(knot(label), q);
            let want = Q::from_integer(BigInt::from(q)) * ddelta(label) / q_int(2);
            assert_eq!(casson(&y).unwrap().value, want, "{label}, q = {q}");
        }
    }
    let k = KnotInSphere::new("trefoil", knot("trefoil").seifert, poincare()).unwrap();
    assert_eq!(casson(&ThreeManifold::surgery_one_over_q(k, 3)).unwrap().value, q_int(2));
    // -1 surgery on the left-handed trefoil is the Poincaré sphere up to orientation
    assert_eq!(casson(&ThreeManifold::surgery_one_over_q(knot("trefoil"), -1)).unwrap().value.abs(), q_int(1));
}

#[test]
fn named_spheres_need_integral_values() {
    assert!(matches!(ThreeManifold::named_sphere("bad", q_frac(1, 2)), Err(CalcError::NonIntegralCasson { .. })));
}

#[test]
fn product_takes_casson_of_factor() {
    let y = ThreeManifold::surgery_one_over_q(knot("T(2,5)"), 3);
    assert_eq!(lambda_fo(&FourManifold::product(y.clone())).unwrap().value, casson(&y).unwrap().value);
    assert_eq!(lambda_fo(&FourManifold::product(poincare())).unwrap().value, q_int(-1));
}

#[test]
fn mapping_torus_matches_eigenvalue_signatures() {
    for label in KnotCatalog::builtin_labels() {
        let k = knot(label);
        for n in 2..=5 {
            let x = FourManifold::mapping_torus(n, k.clone());
            match lambda_fo(&x) {
                Ok(v) => {
                    let sum: i64 = (1..n).map(|m| float_signature(&k.seifert, m, n).expect("nonsingular")).sum();
                    assert_eq!(v.value, q_frac(sum, 8), "{label}, n = {n}");
                }
                Err(CalcError::NotAdmissible { .. }) => {
                    assert!(!check_admissibility(&x).admissible);
                }
                Err(e) => panic!("{label}, n = {n}: {e}"),
            }
        }
    }
    assert_eq!(lambda_fo(&FourManifold::mapping_torus(2, knot("trefoil"))).unwrap().value, q_frac(-1, 4));
}

#[test]
fn mapping_torus_of_non_qhs_cover_is_rejected() {
    let x = FourManifold::mapping_torus(6, knot("trefoil"));
    let r = check_admissibility(&x);
    assert!(!r.admissible);
    assert!(r.finding("branched-cover-qhs").is_some_and(|f| !f.passed && f.blocking));
    match lambda_fo(&x) {
        Err(CalcError::NotAdmissible { term, .. }) => assert!(term.contains("X_6")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn torus_surgery_and_chain_agree() {
    let bases = [
        (FourManifold::mapping_torus(2, knot("trefoil")), TorusDescriptor::MappingTorusOfBranchLocus, ddelta("trefoil")),
        (FourManifold::mapping_torus(3, knot("T(2,5)")), TorusDescriptor::MappingTorusOfBranchLocus, ddelta("T(2,5)")),
        (FourManifold::product(ThreeManifold::S3), TorusDescriptor::ProductTorus(knot("figure-eight")), ddelta("figure-eight")),
    ];
    for (base, torus, dd) in bases {
        let b = lambda_fo(&base).unwrap().value;
        for q in -5i64..=5 {
            let x = FourManifold::torus_surgery(base.clone(), torus.clone(), 1, q);
            let direct = lambda_fo(&x).unwrap().value;
            assert_eq!(direct, &b + Q::from_integer(BigInt::from(q)) * &dd / q_int(2), "{x}");
            assert_eq!(expand_surgery_chain(&x, q.unsigned_abs()).unwrap().value, direct, "{x}");
            let flipped = FourManifold::torus_surgery(base.clone(), torus.clone(), -1, -q);
            assert_eq!(lambda_fo(&flipped).unwrap().value, direct);
        }
    }
}

#[test]
fn d0_of_zero_surgeries_is_second_derivative() {
    for label in KnotCatalog::builtin_labels() {
        let x = FourManifold::product(ThreeManifold::ZeroSurgery(knot(label)));
        assert_eq!(d0_invariant(&x).unwrap().value, ddelta(label), "{label}");
        let y = FourManifold::torus_surgery(FourManifold::mapping_torus(2, knot("trefoil")), TorusDescriptor::MappingTorusOfBranchLocus, 0, 1);
        assert_eq!(d0_invariant(&y).unwrap().value, ddelta("trefoil"));
    }
    let not_zero = FourManifold::mapping_torus(2, knot("trefoil"));
    assert!(d0_invariant(&not_zero).is_err());
}

#[test]
fn fiber_sum_is_additive() {
    let a = FourManifold::mapping_torus(2, knot("trefoil"));
    let b = FourManifold::mapping_torus(3, knot("T(2,7)"));
    let bl = TorusDescriptor::MappingTorusOfBranchLocus;
    let want = lambda_fo(&a).unwrap().value + lambda_fo(&b).unwrap().value;
    let fs = FourManifold::fiber_sum(a.clone(), bl.clone(), b.clone(), bl.clone());
    assert_eq!(lambda_fo(&fs).unwrap().value, want);
    let ex = FourManifold::excision(a, bl.clone(), b, bl, GluingMatrix::fiber_sum());
    assert_eq!(lambda_fo(&ex).unwrap().value, want);
}

#[test]
fn excision_gate_agrees_with_mayer_vietoris_on_all_small_matrices() {
    let a = FourManifold::mapping_torus(2, knot("trefoil"));
    let b = FourManifold::mapping_torus(3, knot("T(2,5)"));
    let bl = TorusDescriptor::MappingTorusOfBranchLocus;
    let mut seen = [0usize; 2];
    let r = -2i64..=2;
    for m00 in r.clone() {
        for m01 in r.clone() {
            for m10 in r.clone() {
                for m11 in r.clone() {
                    if m00 * m11 - m01 * m10 != -1 {
                        continue;
                    }
                    for p in r.clone() {
                        for q in r.clone() {
                            let g = GluingMatrix([[m00, m01, 0], [m10, m11, 0], [p, q, 1]]);
                            let x = FourManifold::excision(a.clone(), bl.clone(), b.clone(), bl.clone(), g);
                            let rep = check_admissibility(&x);
                            let homology = rep.finding("excision-homology").expect("homology finding").passed;
                            let level = rep.finding("excision-homology-level").expect("level finding").passed;
                            assert_eq!(homology, oracle::mayer_vietoris(&g) == (1, 1), "{g}");
                            assert_eq!(level, oracle::homology_level(&g), "{g}");
                            assert_eq!(rep.admissible, homology, "{g}");
                            seen[homology as usize] += 1;
                            match lambda_fo(&x) {
                                Ok(_) => assert!(homology && level, "{g}"),
                                Err(CalcError::NotAdmissible { .. }) => assert!(!homology, "{g}"),
                                Err(CalcError::Unresolvable { reason, .. }) => {
                                    assert!(homology && !level, "{g}");
                                    assert!(reason.contains(&g.to_string()));
                                }
                                Err(e) => panic!("{g}: {e}"),
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0);
}

#[test]
fn determinant_plus_one_is_blocked() {
    let a = FourManifold::mapping_torus(2, knot("trefoil"));
    let bl = TorusDescriptor::MappingTorusOfBranchLocus;
    let x = FourManifold::excision(a.clone(), bl.clone(), a, bl, GluingMatrix::IDENTITY);
    let r = check_admissibility(&x);
    assert!(!r.admissible);
    assert!(r.finding("gluing-orientation").is_some_and(|f| !f.passed && f.blocking));
}

#[test]
fn traces_name_the_rules_used() {
    let x = FourManifold::torus_surgery(FourManifold::mapping_torus(2, knot("trefoil")), TorusDescriptor::MappingTorusOfBranchLocus, 1, 2);
    let v = lambda_fo(&x).unwrap();
    let rules = v.rules();
    assert!(rules.contains(&"mapping-torus-signature"));
    assert!(rules.contains(&"torus-surgery"));
    assert_eq!(v.value_string(), "7/4");
}
