use std::fmt;

use lorentz::{LorentzMap, LorentzVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use polytope::AngleClass;
use rayon::prelude::*;

use crate::quotient::{FaceRef, QuotientComplex};
use crate::{FacetRef, GluingSchema};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RidgeKind {
    Interior,
    Boundary,
}

impl fmt::Display for RidgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RidgeKind::Interior => "interior",
            RidgeKind::Boundary => "boundary",
        })
    }
}

/// The walk around one ridge orbit.
#[derive(Clone, Debug)]
pub struct RidgeCycle {
    pub orbit: usize,
    pub label: String,
    pub kind: RidgeKind,
    pub length: usize,
    /// Sum of the dihedral angles as a multiple of π, when all are exact.
    pub angle_sum: Option<BigRational>,
    /// Composite of the pairing maps around an interior cycle.
    pub return_map: Option<LorentzMap>,
    pub trivial_return: bool,
    pub visits: Vec<FaceRef>,
    pub passed: bool,
}

impl RidgeCycle {
    pub fn angle_sum_text(&self) -> String {
        match &self.angle_sum {
            None => "non-exact".to_string(),
            Some(q) if q.is_zero() => "0".to_string(),
            Some(q) if q.is_one() => "pi".to_string(),
            Some(q) if q.is_integer() => format!("{q}*pi"),
            Some(q) => format!("({q})*pi"),
        }
    }
}

pub(crate) struct Walk {
    /// Visited ridges with the facet each one is left through.
    pub visits: Vec<(FaceRef, usize)>,
    /// Composite map from the first visit's copy to the last visit's copy.
    pub map: LorentzMap,
    pub closed: bool,
}

pub(crate) fn other_facet(s: &GluingSchema, r: FaceRef, f: usize) -> usize {
    let fs = &s.cell_of(r.copy).lattice().face(r.face).facets;
    if fs[0] == f {
        fs[1]
    } else {
        fs[0]
    }
}

/// Alternating facet/pairing walk from ridge `start` leaving through `exit`,
/// until it closes up or reaches an unpaired facet.
pub(crate) fn walk(s: &GluingSchema, start: FaceRef, exit: usize, limit: usize) -> Walk {
    let dim = s.cell_of(start.copy).polytope().ambient_dim();
    let mut visits = vec![(start, exit)];
    let mut map = LorentzMap::identity(dim);
    loop {
        let (r, out) = *visits.last().expect("nonempty walk");
        let Some(t) = s.partner(FacetRef::new(r.copy, out)) else {
            return Walk { visits, map, closed: false };
        };
        let face = s.transport(t.pairing, t.forward, r.face).expect("pairings carry ridges");
        let next = FaceRef { copy: t.target.copy, face };
        let next_exit = other_facet(s, next, t.target.facet);
        map = t.map.compose(&map);
        if (next, next_exit) == (start, exit) {
            return Walk { visits, map, closed: true };
        }
        if visits.len() >= limit {
            return Walk { visits, map, closed: false };
        }
        visits.push((next, next_exit));
    }
}

fn angle_multiple(s: &GluingSchema, r: FaceRef) -> Option<BigRational> {
    match s.cell_of(r.copy).ridge_angle(r.face).ok()? {
        AngleClass::Submultiple(m) => Some(BigRational::new(BigInt::one(), BigInt::from(m))),
        _ => None,
    }
}

pub(crate) fn ridge_points(s: &GluingSchema, r: FaceRef) -> Vec<LorentzVector> {
    let cell = s.cell_of(r.copy);
    cell.lattice().face(r.face).vertices.iter().map(|&v| cell.analysis().vertices()[v].point.clone()).collect()
}

fn check_orbit(q: &QuotientComplex<'_>, orbit: usize) -> RidgeCycle {
    let s = q.schema();
    let o = q.orbit(orbit);
    let rep = o.rep();
    let facets = s.cell_of(rep.copy).lattice().face(rep.face).facets.clone();
    let limit = 2 * o.len() + 2;
    let forward = walk(s, rep, facets[0], limit);
    let (kind, visits, return_map) = if forward.closed {
        (RidgeKind::Interior, forward.visits.iter().map(|v| v.0).collect::<Vec<_>>(), Some(forward.map))
    } else {
        let back = walk(s, rep, facets[1], limit);
        let mut visits: Vec<FaceRef> = back.visits.iter().skip(1).rev().map(|v| v.0).collect();
        visits.extend(forward.visits.iter().map(|v| v.0));
        (RidgeKind::Boundary, visits, None)
    };
    let angle_sum = visits.iter().map(|&r| angle_multiple(s, r)).sum::<Option<BigRational>>();
    let trivial_return = match &return_map {
        Some(m) => m.agrees_on(&LorentzMap::identity(m.dim()), &ridge_points(s, rep)),
        None => true,
    };
    let target = match kind {
        RidgeKind::Interior => BigRational::from_integer(BigInt::from(2)),
        RidgeKind::Boundary => BigRational::one(),
    };
    let passed = trivial_return && angle_sum.as_ref() == Some(&target) && visits.len() <= o.len();
    RidgeCycle { orbit, label: o.label.clone(), kind, length: visits.len(), angle_sum, return_map, trivial_return, visits, passed }
}

/// Walks every codimension-2 orbit.
pub fn ridge_check(q: &QuotientComplex<'_>) -> Vec<RidgeCycle> {
    let n = q.schema().dim();
    if n < 2 {
        return Vec::new();
    }
    q.orbits_of_dim(n - 2).par_iter().filter(|&&i| !q.orbit(i).ideal).map(|&i| check_orbit(q, i)).collect()
}
