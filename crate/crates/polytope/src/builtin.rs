use exactfield::FieldElement;
use lorentz::subspace::sum_zero_to_r14;
use lorentz::LorentzVector;

use crate::enumerate::lorentz_orthogonal;
use crate::{Polytope, PolytopeError};

const NAMES: [&str; 4] = ["kerckhoff_storm", "rectified_5_cell", "ideal_regular_tetrahedron_3d", "ideal_triangle_2d"];

pub fn builtin_names() -> &'static [&'static str] {
    &NAMES
}

pub fn builtin_polytope(name: &str) -> Result<Polytope, PolytopeError> {
    match name {
        "kerckhoff_storm" => Ok(kerckhoff_storm()),
        "rectified_5_cell" => Ok(rectified_5_cell()),
        "ideal_regular_tetrahedron_3d" => Ok(ideal_regular_tetrahedron()),
        "ideal_triangle_2d" => Ok(ideal_triangle_2d()),
        _ => Err(PolytopeError::UnknownBuiltin(name.to_string())),
    }
}

fn vector(coords: &[&str]) -> LorentzVector {
    LorentzVector::parse(coords).expect("builtin coordinates")
}

const KS_TABLE: [[&str; 5]; 24] = [
    ["sqrt2", "1", "1", "1", "(1/3)*sqrt15"],
    ["sqrt2", "1", "1", "1", "-(1/5)*sqrt15"],
    ["1", "sqrt2", "0", "0", "0"],
    ["sqrt2", "1", "-1", "1", "-(1/3)*sqrt15"],
    ["sqrt2", "1", "-1", "1", "(1/5)*sqrt15"],
    ["1", "0", "sqrt2", "0", "0"],
    ["sqrt2", "1", "-1", "-1", "(1/3)*sqrt15"],
    ["sqrt2", "1", "-1", "-1", "-(1/5)*sqrt15"],
    ["1", "0", "0", "sqrt2", "0"],
    ["sqrt2", "1", "1", "-1", "-(1/3)*sqrt15"],
    ["sqrt2", "1", "1", "-1", "(1/5)*sqrt15"],
    ["1", "0", "0", "-sqrt2", "0"],
    ["sqrt2", "-1", "1", "-1", "(1/3)*sqrt15"],
    ["sqrt2", "-1", "1", "-1", "-(1/5)*sqrt15"],
    ["1", "0", "-sqrt2", "0", "0"],
    ["sqrt2", "-1", "1", "1", "-(1/3)*sqrt15"],
    ["sqrt2", "-1", "1", "1", "(1/5)*sqrt15"],
    ["1", "-sqrt2", "0", "0", "0"],
    ["sqrt2", "-1", "-1", "1", "(1/3)*sqrt15"],
    ["sqrt2", "-1", "-1", "1", "-(1/5)*sqrt15"],
    ["sqrt5", "0", "0", "0", "-sqrt6"],
    ["sqrt2", "-1", "-1", "-1", "-(1/3)*sqrt15"],
    ["sqrt2", "-1", "-1", "-1", "(1/5)*sqrt15"],
    ["sqrt5", "0", "0", "0", "sqrt6"],
];

fn ks_kind(last: &FieldElement) -> &'static str {
    let r = |s: &str| -> FieldElement { s.parse().expect("constant") };
    if last.is_zero() {
        "E"
    } else if last.abs() == r("(1/3)*sqrt15") {
        "P"
    } else if last.abs() == r("(1/5)*sqrt15") {
        "N"
    } else {
        "T"
    }
}

fn kerckhoff_storm() -> Polytope {
    let normals: Vec<LorentzVector> = KS_TABLE.iter().map(|row| vector(row)).collect();
    let labels = normals.iter().map(|u| Some(ks_kind(u.get(4)).to_string())).collect();
    Polytope::new("kerckhoff_storm", normals, labels).expect("valid builtin")
}

/// The light-like point `(√30, q)` for the simplex edge `{i, j}`, in `R^{1,4}`.
fn midpoint(i: usize, j: usize) -> LorentzVector {
    let mut coords = vec![FieldElement::sqrt_of(30)];
    coords.extend((0..5).map(|k| FieldElement::from_int(if k == i || k == j { 3 } else { -2 })));
    sum_zero_to_r14(&LorentzVector::new(coords)).expect("sum-zero point")
}

/// The normal through the given points, pointing away from `inside`,
/// scaled to unit length when possible and otherwise to leading entry ±1.
fn supporting_normal(points: &[LorentzVector], inside: &LorentzVector) -> LorentzVector {
    let d = inside.dim();
    let mut u = None;
    'search: for a in 0..points.len() {
        for b in a + 1..points.len() {
            for c in b + 1..points.len() {
                for e in c + 1..points.len() {
                    let chosen = [&points[a], &points[b], &points[c], &points[e]];
                    let x = lorentz_orthogonal(&chosen[..d - 1]);
                    if !x.is_zero() {
                        u = Some(x);
                        break 'search;
                    }
                }
            }
        }
    }
    let u = u.expect("points span a hyperplane");
    let u = if u.dot(inside).is_positive() { u.neg() } else { u };
    let scale = match u.norm_sq().sqrt() {
        Ok(Some(r)) => r,
        _ => u.coords().iter().find(|c| !c.is_zero()).expect("nonzero").abs(),
    };
    u.scale(&scale.inverse().expect("nonzero scale"))
}

fn rectified_5_cell() -> Polytope {
    let edges: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
    let points: Vec<LorentzVector> = edges.iter().map(|&(i, j)| midpoint(i, j)).collect();
    let center = points[1..].iter().fold(points[0].clone(), |acc, p| acc.add(p));
    let mut normals = Vec::new();
    let mut labels = Vec::new();
    for i in 0..5 {
        let at: Vec<LorentzVector> =
            edges.iter().zip(&points).filter(|((a, b), _)| *a == i || *b == i).map(|(_, p)| p.clone()).collect();
        normals.push(supporting_normal(&at, &center));
        labels.push(Some("T".to_string()));
    }
    for i in 0..5 {
        let avoid: Vec<LorentzVector> =
            edges.iter().zip(&points).filter(|((a, b), _)| *a != i && *b != i).map(|(_, p)| p.clone()).collect();
        normals.push(supporting_normal(&avoid, &center));
        labels.push(Some("O".to_string()));
    }
    Polytope::new("rectified_5_cell", normals, labels).expect("valid builtin")
}

/// Vertices `(√3, ε)` for `ε ∈ {(1,1,1), (1,−1,−1), (−1,1,−1), (−1,−1,1)}`;
/// the facet opposite `(√3, ε)` has normal `(1, −√3·ε)`.
fn ideal_regular_tetrahedron() -> Polytope {
    let eps = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];
    let s3 = FieldElement::sqrt_of(3);
    let normals = eps
        .iter()
        .map(|e| {
            let mut c = vec![FieldElement::one()];
            c.extend(e.iter().map(|&x| &s3 * &FieldElement::from_int(-x)));
            LorentzVector::new(c)
        })
        .collect();
    let labels = ["P", "J", "R", "F"].iter().map(|s| Some(s.to_string())).collect();
    Polytope::new("ideal_regular_tetrahedron_3d", normals, labels).expect("valid builtin")
}

/// The ideal triangle with vertices at angles `0, 2π/3, 4π/3` on the circle
/// at infinity.
pub fn ideal_triangle_2d() -> Polytope {
    let normals = vec![vector(&["1", "-2", "0"]), vector(&["1", "1", "-sqrt3"]), vector(&["1", "1", "sqrt3"])];
    Polytope::new("ideal_triangle_2d", normals, vec![]).expect("valid builtin")
}
