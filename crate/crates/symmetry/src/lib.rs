//! Isometry groups of hyperbolic polytopes: exact search for all
//! symmetries, the named maps of the Kerckhoff–Storm polytope, and a small
//! expression language for naming group elements.

use std::collections::HashMap;
use std::fmt;

use lorentz::{LorentzError, LorentzMap, LorentzVector};
use polytope::{Analysis, FaceLattice, Polytope};
use thiserror::Error;

mod expr;
pub mod ks;
mod search;

pub use expr::{parse_symmetry_expr, LabelPerm, SymExpr, SymmetryContext};
pub use search::automorphism_group;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("unknown symmetry '{0}'")]
    UnknownName(String),
    #[error("map does not preserve the polytope")]
    NotASymmetry,
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
    #[error(transparent)]
    Polytope(#[from] polytope::PolytopeError),
    #[error("labeling inconsistency: {0}")]
    Labeling(String),
    #[error("bad symmetry expression at column {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("structure check failed: {0}")]
    Structure(String),
}

/// An isometry of a polytope with the permutation it induces on facets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Symmetry {
    map: LorentzMap,
    perm: Vec<usize>,
    label: Option<String>,
}

/// Direction key of a space-like vector up to positive scaling.
pub(crate) fn ray_key(u: &LorentzVector) -> LorentzVector {
    let lead = u.coords().iter().find(|c| !c.is_zero()).expect("nonzero vector").abs();
    u.scale(&lead.inverse().expect("nonzero"))
}

pub(crate) fn normal_index(p: &Polytope) -> HashMap<LorentzVector, usize> {
    p.normals().iter().enumerate().map(|(i, u)| (ray_key(u), i)).collect()
}

impl Symmetry {
    /// Checks that `map` permutes the facet normals up to positive scalars.
    pub fn from_map(p: &Polytope, map: LorentzMap) -> Result<Symmetry, SymmetryError> {
        Self::from_map_indexed(p, &normal_index(p), map)
    }

    pub(crate) fn from_map_indexed(
        p: &Polytope,
        index: &HashMap<LorentzVector, usize>,
        map: LorentzMap,
    ) -> Result<Symmetry, SymmetryError> {
        if map.dim() != p.ambient_dim() {
            return Err(SymmetryError::NotASymmetry);
        }
        let mut perm = Vec::with_capacity(p.facet_count());
        for u in p.normals() {
            let j = index.get(&ray_key(&map.apply(u))).ok_or(SymmetryError::NotASymmetry)?;
            perm.push(*j);
        }
        Ok(Symmetry { map, perm, label: None })
    }

    pub fn identity(p: &Polytope) -> Symmetry {
        Symmetry { map: LorentzMap::identity(p.ambient_dim()), perm: (0..p.facet_count()).collect(), label: None }
    }

    pub fn map(&self) -> &LorentzMap {
        &self.map
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Symmetry {
        self.label = Some(label.into());
        self
    }

    pub fn det_sign(&self) -> i8 {
        self.map.det_sign()
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_identity()
    }

    pub fn facet_image(&self, i: usize) -> usize {
        self.perm[i]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Symmetry) -> Symmetry {
        Symmetry {
            map: self.map.compose(&other.map),
            perm: other.perm.iter().map(|&i| self.perm[i]).collect(),
            label: None,
        }
    }

    pub fn inverse(&self) -> Symmetry {
        let mut perm = vec![0; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            perm[j] = i;
        }
        Symmetry { map: self.map.inverse(), perm, label: None }
    }

    pub fn apply(&self, v: &LorentzVector) -> LorentzVector {
        self.map.apply(v)
    }

    /// The image of face `f`, found through its facet set.
    pub fn face_image(&self, lattice: &FaceLattice, f: usize) -> usize {
        let face = lattice.face(f);
        if face.facets.is_empty() {
            return f;
        }
        let mut img: Vec<usize> = face.facets.iter().map(|&i| self.perm[i]).collect();
        img.sort_unstable();
        lattice.by_facets(&img).expect("symmetries permute faces")
    }

    pub fn vertex_image(&self, a: &Analysis, v: usize) -> usize {
        let lat = a.lattice();
        let f = self.face_image(lat, lat.vertex_face(v));
        lat.face(f).vertices[0]
    }

    /// Whether `self` and `other` are the same group element.
    pub fn same_element(&self, other: &Symmetry) -> bool {
        self.map == other.map
    }
}

impl fmt::Debug for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symmetry({:?}, {:?})", self.label, self.perm)
    }
}

/// A finite group of symmetries ordered lexicographically by facet
/// permutation, so the identity comes first.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    elements: Vec<Symmetry>,
    by_perm: HashMap<Vec<usize>, usize>,
}

impl SymmetryGroup {
    pub(crate) fn from_elements(mut elements: Vec<Symmetry>) -> SymmetryGroup {
        elements.sort_by(|a, b| a.perm.cmp(&b.perm));
        elements.dedup_by(|a, b| a.perm == b.perm);
        let by_perm = elements.iter().enumerate().map(|(k, s)| (s.perm.clone(), k)).collect();
        SymmetryGroup { elements, by_perm }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Symmetry] {
        &self.elements
    }

    pub fn identity(&self) -> &Symmetry {
        &self.elements[0]
    }

    pub fn by_perm(&self, perm: &[usize]) -> Option<&Symmetry> {
        self.by_perm.get(perm).map(|&k| &self.elements[k])
    }

    pub fn contains(&self, s: &Symmetry) -> bool {
        self.by_perm(&s.perm).is_some_and(|t| t.map == s.map)
    }

    /// Checks closure under composition and inverses.
    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|s| {
            self.contains(&s.inverse()) && self.elements.iter().all(|t| self.contains(&s.compose(t)))
        })
    }

    /// Orbits of the facet action, each sorted, ordered by least element.
    pub fn facet_orbits(&self) -> Vec<Vec<usize>> {
        let n = self.elements[0].perm.len();
        orbits(n, |i| self.elements.iter().map(move |s| s.perm[i]))
    }

    pub fn vertex_orbits(&self, a: &Analysis) -> Vec<Vec<usize>> {
        orbits(a.vertices().len(), |v| self.elements.iter().map(move |s| s.vertex_image(a, v)))
    }
}

fn orbits<I: Iterator<Item = usize>>(n: usize, images: impl Fn(usize) -> I) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let mut orbit: Vec<usize> = images(i).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &j in &orbit {
            seen[j] = true;
        }
        out.push(orbit);
    }
    out
}
