use exactfield::FieldElement;
use lorentz::{is_isometry, minkowski_product, reflection, LorentzMap, LorentzVector};
use proptest::prelude::*;

fn small() -> impl Strategy<Value = FieldElement> {
    (-4i64..=4, 1i64..=3, 0usize..4).prop_map(|(n, d, r)| {
        let rad = [1u32, 2, 3, 5][r];
        FieldElement::frac(n, d) * FieldElement::sqrt_of(rad)
    })
}

fn vector() -> impl Strategy<Value = LorentzVector> {
    prop::collection::vec(small(), 5).prop_map(LorentzVector::new)
}

fn space_like() -> impl Strategy<Value = LorentzVector> {
    vector().prop_filter("space-like", |v| v.norm_sq().is_positive())
}

fn isometry() -> impl Strategy<Value = LorentzMap> {
    prop::collection::vec(space_like(), 1..4).prop_map(|vs| {
        vs.iter()
            .map(|v| reflection(v).unwrap())
            .fold(LorentzMap::identity(5), |acc, r| acc.compose(&r))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn isometries_preserve_products(g in isometry(), u in vector(), w in vector()) {
        prop_assert!(is_isometry(g.rows()));
        prop_assert_eq!(minkowski_product(&g.apply(&u), &g.apply(&w)).unwrap(), u.dot(&w));
    }

    #[test]
    fn reflection_is_projective(v in space_like(), n in 1i64..7, d in 1i64..5, neg in any::<bool>()) {
        let lambda = FieldElement::frac(if neg { -n } else { n }, d);
        prop_assert_eq!(reflection(&v.scale(&lambda)).unwrap(), reflection(&v).unwrap());
    }

    #[test]
    fn det_sign_is_multiplicative(g in isometry(), h in isometry()) {
        let gh = g.compose(&h);
        let recomputed = LorentzMap::from_rows(gh.rows().to_vec()).unwrap();
        prop_assert_eq!(recomputed.det_sign(), g.det_sign() * h.det_sign());
        prop_assert!(g.compose(&g.inverse()).is_identity());
    }
}

#[test]
fn antipodal_map_is_orientation_preserving() {
    let a = LorentzMap::diagonal(&[1, -1, -1, -1, -1]).unwrap();
    assert_eq!(a.det_sign(), 1);
    assert!(a.compose(&a).is_identity());
}

#[test]
fn reflection_of_table_vector_is_an_involution() {
    let v = LorentzVector::parse(&["1", "sqrt2", "0", "0", "0"]).unwrap();
    let r = reflection(&v).unwrap();
    assert!(r.compose(&r).is_identity());
    assert_eq!(r.apply(&v), v.neg());
}
