//! Facet and vertex classes of the Kerckhoff–Storm polytope.

use std::fmt;

use exactfield::FieldElement;

use crate::{Analysis, PolytopeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FacetKind {
    Positive,
    Negative,
    Equatorial,
    Tetrahedral,
}

impl FacetKind {
    pub fn letter(self) -> char {
        match self {
            FacetKind::Positive => 'P',
            FacetKind::Negative => 'N',
            FacetKind::Equatorial => 'E',
            FacetKind::Tetrahedral => 'T',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Upper,
    Lower,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FacetClass {
    pub kind: FacetKind,
    pub side: Side,
}

impl fmt::Display for FacetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Upper => " upper",
            Side::Lower => " lower",
            Side::Neither => "",
        };
        write!(f, "{}{side}", self.kind.letter())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexClass {
    Finite,
    EquatorialIdeal,
    UpperIdeal,
    LowerIdeal,
}

fn kind_of(last: &FieldElement) -> Option<FacetKind> {
    let r = |s: &str| -> FieldElement { s.parse().expect("constant") };
    let a = last.abs();
    if a.is_zero() {
        Some(FacetKind::Equatorial)
    } else if a == r("(1/3)*sqrt15") {
        Some(FacetKind::Positive)
    } else if a == r("(1/5)*sqrt15") {
        Some(FacetKind::Negative)
    } else if a == r("sqrt6") {
        Some(FacetKind::Tetrahedral)
    } else {
        None
    }
}

fn check_shape(a: &Analysis) -> Result<(), PolytopeError> {
    let p = a.polytope();
    if p.ambient_dim() != 5 || p.constraint().is_some() {
        return Err(PolytopeError::NotKerckhoffStorm("expected a polytope in R^(1,4)".into()));
    }
    if p.facet_count() != 24 {
        return Err(PolytopeError::NotKerckhoffStorm(format!("{} normals instead of 24", p.facet_count())));
    }
    let mut counts = [0usize; 4];
    for (i, u) in p.normals().iter().enumerate() {
        let k = kind_of(u.get(4))
            .ok_or_else(|| PolytopeError::NotKerckhoffStorm(format!("normal {i} has last coordinate {}", u.get(4))))?;
        counts[k as usize] += 1;
    }
    if counts != [8, 8, 6, 2] {
        return Err(PolytopeError::NotKerckhoffStorm(format!("facet kind counts {counts:?}")));
    }
    Ok(())
}

/// Kind by last normal coordinate; side by the sign of `x4` on the facet's
/// vertices (upper means all `x4 ≤ 0`).
pub fn classify_facets(a: &Analysis) -> Result<Vec<FacetClass>, PolytopeError> {
    check_shape(a)?;
    let p = a.polytope();
    let lat = a.lattice();
    (0..p.facet_count())
        .map(|i| {
            let kind = kind_of(p.normal(i).get(4)).expect("checked");
            let face = lat.face(lat.facet_face(i));
            let signs: Vec<_> = face.vertices.iter().map(|&v| a.vertices()[v].point.get(4).sign()).collect();
            let side = if kind == FacetKind::Equatorial {
                Side::Neither
            } else if signs.iter().all(|s| !s.as_i8().is_positive()) {
                Side::Upper
            } else if signs.iter().all(|s| !s.as_i8().is_negative()) {
                Side::Lower
            } else {
                Side::Neither
            };
            Ok(FacetClass { kind, side })
        })
        .collect()
}

pub fn classify_vertices(a: &Analysis) -> Result<Vec<VertexClass>, PolytopeError> {
    check_shape(a)?;
    Ok(a.vertices()
        .iter()
        .map(|v| {
            if !v.ideal {
                VertexClass::Finite
            } else if v.point.get(4).is_zero() {
                VertexClass::EquatorialIdeal
            } else if v.point.get(4).is_negative() {
                VertexClass::UpperIdeal
            } else {
                VertexClass::LowerIdeal
            }
        })
        .collect())
}
