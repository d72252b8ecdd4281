use lorentz::{reflection, LorentzMap, LorentzVector};
use polytope::{builtin_polytope, parse_polytope, AngleClass, Analysis, Polytope, PolytopeError};
use proptest::prelude::*;

fn v(s: &[&str]) -> LorentzVector {
    LorentzVector::parse(s).unwrap()
}

fn mirrors() -> Vec<LorentzVector> {
    vec![
        v(&["0", "1", "-1", "0"]),
        v(&["0", "0", "1", "-1"]),
        v(&["0", "0", "0", "1"]),
        v(&["1", "sqrt2", "0", "0"]),
        v(&["1", "0", "sqrt3", "1"]),
    ]
}

fn isometry(word: &[usize]) -> LorentzMap {
    let ms = mirrors();
    word.iter().fold(LorentzMap::identity(4), |acc, &k| acc.compose(&reflection(&ms[k]).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn isometric_images_have_same_combinatorics(word in prop::collection::vec(0usize..5, 0..4)) {
        let g = isometry(&word);
        let base = builtin_polytope("ideal_regular_tetrahedron_3d").unwrap();
        let normals = base.normals().iter().map(|u| g.apply(u)).collect();
        let image = Polytope::new("image", normals, base.labels().to_vec()).unwrap();
        let a = Analysis::new(base).unwrap();
        let b = Analysis::new(image).unwrap();
        prop_assert_eq!(a.f_vector(), b.f_vector());
        prop_assert_eq!(a.ideal_vertex_count(), b.ideal_vertex_count());
        prop_assert_eq!(a.ridge_angles().unwrap(), b.ridge_angles().unwrap());
        for (x, y) in a.vertices().iter().zip(b.vertices()) {
            prop_assert_eq!(&x.facets, &y.facets);
            prop_assert!(g.apply(&x.point).same_ray(&y.point));
        }
    }

    #[test]
    fn angles_are_symmetric(i in 0usize..24, j in 0usize..24) {
        prop_assume!(i != j);
        let p = builtin_polytope("kerckhoff_storm").unwrap();
        prop_assert_eq!(p.dihedral_angle(i, j).unwrap(), p.dihedral_angle(j, i).unwrap());
    }
}

#[test]
fn every_face_is_closed() {
    let a = Analysis::new(builtin_polytope("kerckhoff_storm").unwrap()).unwrap();
    let p = a.polytope();
    for face in a.lattice().faces() {
        for i in 0..p.facet_count() {
            let on = face.vertices.iter().all(|&x| a.vertices()[x].point.dot(p.normal(i)).is_zero());
            assert_eq!(on, face.facets.contains(&i));
        }
    }
    let interior = a.interior_point();
    assert!(p.normals().iter().all(|u| interior.dot(u).is_negative()));
}

#[test]
fn file_round_trip() {
    let p = builtin_polytope("kerckhoff_storm").unwrap();
    let text = p.to_string();
    let q = parse_polytope("copy", &text).unwrap();
    assert_eq!(p.normals(), q.normals());
    assert_eq!(p.labels(), q.labels());
}

#[test]
fn rejects_bad_inputs() {
    let timelike = "dim 2\nnormal 2, 1, 0\nnormal 1, -2, 0\nnormal 1, 1, sqrt3\n";
    assert_eq!(parse_polytope("t", timelike).unwrap_err(), PolytopeError::NotSpaceLike(0));
    let dup = "dim 2\nnormal 1, -2, 0\nnormal 2, -4, 0\n";
    assert_eq!(parse_polytope("d", dup).unwrap_err(), PolytopeError::DuplicateNormal(0, 1));
    let short = "dim 2\nnormal 1, 2\n";
    assert!(matches!(parse_polytope("s", short), Err(PolytopeError::Parse { line: 2, .. })));
    let bad_field = "dim 2\n# comment\nnormal 1, sqrt7, 0\n";
    assert!(matches!(parse_polytope("b", bad_field), Err(PolytopeError::Parse { line: 3, .. })));
    assert!(matches!(parse_polytope("e", "label X\n"), Err(PolytopeError::Parse { line: 1, .. })));
}

#[test]
fn unbounded_or_degenerate_inputs() {
    // Two sides of the ideal triangle bound an infinite-area region.
    let two = Polytope::new("two", vec![v(&["1", "-2", "0"]), v(&["1", "1", "-sqrt3"])], vec![]).unwrap();
    assert!(Analysis::new(two).is_err());
    // A redundant normal far outside the triangle.
    let mut normals: Vec<LorentzVector> = builtin_polytope("ideal_triangle_2d").unwrap().normals().to_vec();
    normals.push(v(&["3", "-4", "0"]));
    let p = Polytope::new("extra", normals, vec![]).unwrap();
    assert_eq!(Analysis::new(p.clone()).unwrap_err(), PolytopeError::RedundantNormal(3));
    assert_eq!(p.dihedral_angle(0, 3), Err(PolytopeError::DegenerateAngle(0, 3)));
}

#[test]
fn general_angle_breaks_coxeter_check() {
    // A triangle with two ideal vertices and one vertex where the sides
    // meet with cosine 1/4.
    let u1 = v(&["0", "1", "0"]);
    let u2 = v(&["0", "-1/4", "(1/4)*sqrt15"]);
    assert_eq!(AngleClass::between(&u1, &u2).unwrap().to_string(), "angle(cos=1/4)");
    // The side through the far ends (1, 0, −1) and (1, −√15/4, −1/4) of the
    // other two.
    let u3 = v(&["1", "-(1/5)*sqrt15", "-1"]);
    let p = Polytope::new("quarter", vec![u1, u2, u3], vec![]).unwrap();
    let a = Analysis::new(p).unwrap();
    let (ok, diagram) = a.coxeter_check().unwrap();
    assert!(!ok);
    assert!(diagram.to_string().contains("general cos=1/4"));
    assert!(matches!(a.orbifold_euler_characteristic(), Err(PolytopeError::NotCoxeter(..))));
}
