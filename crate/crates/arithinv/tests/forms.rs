use std::collections::BTreeSet;

use arithinv::*;
use exactfield::FieldElement;
use num_rational::BigRational;
use polytope::builtin_polytope;
use proptest::prelude::*;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn diag(entries: &[i64]) -> QuadraticFormQ {
    QuadraticFormQ::from_diagonal(entries.iter().map(|&n| q(n)).collect()).unwrap()
}

fn fixture(name: &str) -> QuadraticFormQ {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_form(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn set(places: &[Place]) -> RamificationSet {
    places.iter().copied().collect()
}

const P2: Place = Place::Prime(2);
const P3: Place = Place::Prime(3);
const P5: Place = Place::Prime(5);
const INF: Place = Place::Infinity;

fn derived_form(polytope: &str) -> QuadraticFormQ {
    let p = builtin_polytope(polytope).unwrap();
    let u = p.normals();
    let gram: Vec<Vec<FieldElement>> = u.iter().map(|a| u.iter().map(|b| a.dot(b)).collect()).collect();
    QuadraticFormQ::from_gram(&cyclic_product_gram(&gram, 5).unwrap()).unwrap()
}

#[test]
fn hasse_examples() {
    for place in [P2, P3, P5, INF] {
        assert_eq!(hasse_invariant(&diag(&[-1, 1, 1, 1, 1]), place), Ok(1));
    }
    assert_eq!(hasse_invariant(&diag(&[1, 1, 1, 1, 1]), INF), Ok(1));
    assert_eq!(hasse_invariant(&diag(&[-1, -1, -1, -1, -1]), INF), Ok(1));
    assert_eq!(hasse_invariant(&diag(&[-1, -1, 1, 1, 1]), INF), Ok(-1));
}

#[test]
fn anchors_under_hasse_convention() {
    let c = fixture("form_24cell.txt");
    let p = fixture("form_P.txt");
    assert_eq!(ramification_set(&c, Convention::Hasse).unwrap(), set(&[]));
    assert_eq!(ramification_set(&p, Convention::Hasse).unwrap(), set(&[P2, P5]));
}

#[test]
fn anchor_for_r_under_even_clifford_convention() {
    let r = fixture("form_R.txt");
    assert_eq!(ramification_set(&r, Convention::EvenClifford).unwrap(), set(&[P3, INF]));
    assert_eq!(ramification_set(&r, Convention::Hasse).unwrap(), set(&[P2, P3]));
}

#[test]
fn pairwise_verdicts() {
    let forms = [fixture("form_24cell.txt"), fixture("form_P.txt"), fixture("form_R.txt")];
    for convention in [Convention::Hasse, Convention::EvenClifford] {
        for i in 0..3 {
            for j in 0..3 {
                let v = commensurability_verdict(&forms[i], &forms[j], convention).unwrap();
                let want = if i == j { Verdict::Indistinguishable } else { Verdict::Incommensurable };
                assert_eq!(v, want, "{i} {j} {convention}");
            }
        }
    }
}

#[test]
fn fixtures_match_polytope_normals() {
    for (polytope, file) in [("kerckhoff_storm", "form_P.txt"), ("rectified_5_cell", "form_R.txt")] {
        let derived = derived_form(polytope);
        let shipped = fixture(file);
        assert_eq!(derived.signature(), (4, 1));
        for convention in [Convention::Hasse, Convention::EvenClifford] {
            assert_eq!(ramification_set(&derived, convention), ramification_set(&shipped, convention), "{polytope}");
        }
        let ratio = derived.discriminant() / shipped.discriminant();
        assert_eq!(square_class(&ratio), square_class(&q(1)), "{polytope}");
    }
}

#[test]
fn cyclic_products_must_be_rational() {
    let s2 = FieldElement::sqrt_of(2);
    let one = FieldElement::one();
    let gram: Vec<Vec<FieldElement>> =
        (0..3).map(|i| (0..3).map(|j| if i == j { one.clone() } else { s2.clone() }).collect()).collect();
    assert!(matches!(cyclic_product_gram(&gram, 3), Err(ArithError::Irrational(_))));
}

#[test]
fn signature_is_checked() {
    let f = diag(&[1, 1, 1, 1, 1]);
    assert_eq!(ramification_set(&f, Convention::Hasse), Err(ArithError::Signature { positive: 5, negative: 0 }));
    assert!(commensurability_verdict(&f, &f, Convention::Hasse).is_err());
}

#[test]
fn places_are_ordered_with_infinity_last() {
    assert_eq!(set(&[INF, P5, P2]).to_string(), "{2, 5, inf}");
    assert_eq!(set(&[]).to_string(), "{}");
    assert_eq!(diag(&[-3, 10, 1, 1, 1]).places(), vec![P2, P3, P5, INF]);
}

#[test]
fn gram_and_diagonal_agree() {
    let gram = vec![
        vec![q(0), q(1), q(0)],
        vec![q(1), q(0), q(0)],
        vec![q(0), q(0), q(3)],
    ];
    let f = QuadraticFormQ::from_gram(&gram).unwrap();
    assert_eq!(f.signature(), (2, 1));
    assert_eq!(square_class(&f.discriminant()), (-3).into());
    assert!(QuadraticFormQ::from_gram(&[vec![q(1), q(2)], vec![q(3), q(1)]]).is_err());
    assert!(QuadraticFormQ::from_gram(&[vec![q(1), q(1)], vec![q(1), q(1)]]).is_err());
}

#[test]
fn parse_errors() {
    let line = |t: &str| match parse_form(t) {
        Err(ArithError::Parse { line, .. }) => line,
        other => panic!("{other:?}"),
    };
    assert_eq!(line("form 1, x, 3\n"), 1);
    assert_eq!(line("# comment\nquadric 1 2\n"), 2);
    assert_eq!(line("form 1, 0, 1\n"), 1);
    assert_eq!(line("gram\n1 2\n3 4\n"), 1);
    assert_eq!(line("\n\n"), 1);
    assert_eq!(line("form 1, 1\nform 2\n"), 2);
    assert_eq!(parse_form("form -1, 1/2, 1, 1, 1 # tail\n").unwrap().diagonal()[1], BigRational::new(1.into(), 2.into()));
}

fn entry() -> impl Strategy<Value = i64> {
    (1i64..=40).prop_flat_map(|n| prop_oneof![Just(n), Just(-n)])
}

fn lorentzian() -> impl Strategy<Value = Vec<i64>> {
    (proptest::collection::vec(1i64..=40, 4), 1i64..=40, 0usize..5).prop_map(|(pos, neg, at)| {
        let mut v = pos;
        v.insert(at, -neg);
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hasse_is_permutation_and_square_invariant(v in proptest::collection::vec(entry(), 5), i in 0usize..5, j in 0usize..5, s in 1i64..12) {
        let f = diag(&v);
        let mut w = v.clone();
        w.swap(i, j);
        w[i] *= s * s;
        let g = diag(&w);
        for place in f.places().into_iter().chain(g.places()) {
            prop_assert_eq!(hasse_invariant(&f, place), hasse_invariant(&g, place));
        }
    }

    #[test]
    fn ramification_is_even_and_similarity_invariant(v in lorentzian(), lambda in 1i64..30) {
        let f = diag(&v);
        let scaled: Vec<i64> = v.iter().map(|a| a * lambda).collect();
        let g = diag(&scaled);
        for convention in [Convention::Hasse, Convention::EvenClifford] {
            let a = ramification_set(&f, convention).unwrap();
            prop_assert_eq!(a.len() % 2, 0);
            prop_assert_eq!(Ok(a), ramification_set(&g, convention));
        }
    }

    #[test]
    fn conventions_differ_by_two_and_infinity(v in lorentzian()) {
        let f = diag(&v);
        let a: BTreeSet<Place> = ramification_set(&f, Convention::Hasse).unwrap().0;
        let b: BTreeSet<Place> = ramification_set(&f, Convention::EvenClifford).unwrap().0;
        let diff: BTreeSet<Place> = a.symmetric_difference(&b).copied().collect();
        prop_assert_eq!(diff, BTreeSet::from([P2, INF]));
        prop_assert!(!a.contains(&INF));
    }
}
