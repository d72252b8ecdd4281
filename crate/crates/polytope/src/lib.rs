//! Finite-volume hyperbolic Coxeter polytopes given by outward normals in
//! `R^{1,n}`: vertices, face lattice, dihedral angles, vertex links,
//! Coxeter diagrams, orbifold Euler characteristic and volume.
//!
//! A polytope is `∩ {x : ⟨x, u⟩ ≤ 0}` over its normals `u`, optionally
//! intersected with a hyperplane `w^⊥` (used for boundary cells).

use std::collections::HashMap;
use std::fmt;

use exactfield::FieldElement;
use lorentz::{LorentzVector, VectorClass};
use thiserror::Error;

mod angle;
mod bitset;
mod builtin;
mod coxeter;
mod enumerate;
mod io;
pub mod ks;
mod lattice;
mod link;

pub use angle::{AngleClass, Cosine};
pub use bitset::IndexSet;
pub use builtin::{builtin_names, builtin_polytope, ideal_triangle_2d};
pub use coxeter::{coxeter_group_order, CoxeterDiagram, DiagramEdge, EdgeStyle};
pub use enumerate::{enumerate_vertices, lorentz_orthogonal};
pub use io::parse_polytope;
pub use lattice::{Face, FaceLattice};
pub use link::{horosphere_point, CrossSection, LinkEdge, LinkFace, LinkGeometry, LinkShape, VertexLink};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("unknown builtin polytope '{0}'")]
    UnknownBuiltin(String),
    #[error("normal {0} is not space-like")]
    NotSpaceLike(usize),
    #[error("normals {0} and {1} are positive multiples of each other")]
    DuplicateNormal(usize, usize),
    #[error("normal {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("the constraint vector must be space-like and orthogonal to every normal")]
    BadConstraint,
    #[error("polytope has empty interior")]
    EmptyInterior,
    #[error("unbounded face: edge {0:?} has {1} vertices")]
    UnboundedFace(Vec<usize>, usize),
    #[error("normal {0} does not support a facet")]
    RedundantNormal(usize),
    #[error("facets {0} and {1} define nested half-spaces")]
    DegenerateAngle(usize, usize),
    #[error("not the Kerckhoff-Storm polytope: {0}")]
    NotKerckhoffStorm(String),
    #[error("stabilizer of face {0:?} is not a supported finite Coxeter group")]
    NonSphericalStabilizer(Vec<usize>),
    #[error("polytope is not Coxeter: ridge between facets {0} and {1} has angle {2}")]
    NotCoxeter(usize, usize, String),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A polytope presented by outward space-like normals.
#[derive(Clone, Debug)]
pub struct Polytope {
    name: String,
    normals: Vec<LorentzVector>,
    labels: Vec<Option<String>>,
    constraint: Option<LorentzVector>,
}

impl Polytope {
    pub fn new(name: impl Into<String>, normals: Vec<LorentzVector>, labels: Vec<Option<String>>) -> Result<Self, PolytopeError> {
        Self::build(name.into(), normals, labels, None)
    }

    /// The polytope cut out inside the hyperplane `w^⊥`; every normal must
    /// already lie in `w^⊥`.
    pub fn with_constraint(
        name: impl Into<String>,
        normals: Vec<LorentzVector>,
        labels: Vec<Option<String>>,
        w: LorentzVector,
    ) -> Result<Self, PolytopeError> {
        Self::build(name.into(), normals, labels, Some(w))
    }

    fn build(
        name: String,
        normals: Vec<LorentzVector>,
        mut labels: Vec<Option<String>>,
        constraint: Option<LorentzVector>,
    ) -> Result<Self, PolytopeError> {
        let d = normals.first().map_or(0, LorentzVector::dim);
        for (i, u) in normals.iter().enumerate() {
            if u.dim() != d {
                return Err(PolytopeError::DimensionMismatch { index: i, expected: d, found: u.dim() });
            }
            if u.is_zero() || u.classify() != Ok(VectorClass::SpaceLike) {
                return Err(PolytopeError::NotSpaceLike(i));
            }
        }
        for i in 0..normals.len() {
            for j in i + 1..normals.len() {
                if normals[i].same_ray(&normals[j]) {
                    return Err(PolytopeError::DuplicateNormal(i, j));
                }
            }
        }
        if let Some(w) = &constraint {
            let ok = w.dim() == d
                && w.classify() == Ok(VectorClass::SpaceLike)
                && normals.iter().all(|u| u.dot(w).is_zero());
            if !ok {
                return Err(PolytopeError::BadConstraint);
            }
        }
        labels.resize(normals.len(), None);
        Ok(Polytope { name, normals, labels, constraint })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient_dim(&self) -> usize {
        self.normals.first().map_or(0, LorentzVector::dim)
    }

    /// Hyperbolic dimension of the polytope.
    pub fn dim(&self) -> usize {
        self.ambient_dim() - 1 - usize::from(self.constraint.is_some())
    }

    pub fn normals(&self) -> &[LorentzVector] {
        &self.normals
    }

    pub fn normal(&self, i: usize) -> &LorentzVector {
        &self.normals[i]
    }

    pub fn facet_count(&self) -> usize {
        self.normals.len()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels[i].as_deref()
    }

    /// The label of facet `i`, or `f<i>` when it has none.
    pub fn display_label(&self, i: usize) -> String {
        self.labels[i].clone().unwrap_or_else(|| format!("f{i}"))
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn constraint(&self) -> Option<&LorentzVector> {
        self.constraint.as_ref()
    }

    pub fn relabeled(&self, labels: Vec<Option<String>>) -> Polytope {
        let mut p = self.clone();
        p.labels = labels;
        p.labels.resize(p.normals.len(), None);
        p
    }

    pub fn dihedral_angle(&self, i: usize, j: usize) -> Result<AngleClass, PolytopeError> {
        AngleClass::between(&self.normals[i], &self.normals[j]).ok_or(PolytopeError::DegenerateAngle(i, j))
    }
}

/// A vertex: its canonical projective representative (first coordinate 1)
/// and the full set of facets through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub point: LorentzVector,
    pub ideal: bool,
    pub facets: Vec<usize>,
}

impl Vertex {
    /// The representative on the hyperboloid `⟨x,x⟩ = −1` for a finite
    /// vertex, when its scale factor lies in the field.
    pub fn normalized(&self) -> Option<LorentzVector> {
        if self.ideal {
            return None;
        }
        let n = -self.point.norm_sq();
        let root = n.sqrt().ok()??;
        Some(self.point.scale(&root.inverse().ok()?))
    }
}

/// A polytope together with its vertices and face lattice.
#[derive(Clone, Debug)]
pub struct Analysis {
    polytope: Polytope,
    vertices: Vec<Vertex>,
    lattice: FaceLattice,
    interior: LorentzVector,
}

impl Analysis {
    pub fn new(polytope: Polytope) -> Result<Self, PolytopeError> {
        let vertices = enumerate_vertices(&polytope);
        let interior = enumerate::interior_point(&polytope, &vertices)?;
        let lattice = FaceLattice::build(&polytope, &vertices)?;
        Ok(Analysis { polytope, vertices, lattice, interior })
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Result<&Vertex, PolytopeError> {
        self.vertices.get(v).ok_or(PolytopeError::UnknownVertex(v))
    }

    pub fn lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    /// A point strictly inside every half-space.
    pub fn interior_point(&self) -> &LorentzVector {
        &self.interior
    }

    pub fn ideal_vertex_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.ideal).count()
    }

    pub fn finite_vertex_count(&self) -> usize {
        self.vertices.len() - self.ideal_vertex_count()
    }

    /// Face counts from vertices up to facets.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.dim()).map(|k| self.lattice.faces_of_dim(k).len()).collect()
    }

    /// The ridge shared by facets `i` and `j`, if they are adjacent.
    pub fn ridge(&self, i: usize, j: usize) -> Option<usize> {
        self.lattice.ridge(i, j)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.ridge(i, j).is_some()
    }

    /// Dihedral angle class of every ridge, keyed by face id.
    pub fn ridge_angles(&self) -> Result<Vec<(usize, AngleClass)>, PolytopeError> {
        let n = self.dim();
        if n < 2 {
            return Ok(Vec::new());
        }
        self.lattice
            .faces_of_dim(n - 2)
            .iter()
            .map(|&f| {
                let fs = &self.lattice.face(f).facets;
                Ok((f, self.polytope.dihedral_angle(fs[0], fs[1])?))
            })
            .collect()
    }

    pub fn vertex_link(&self, v: usize) -> Result<VertexLink, PolytopeError> {
        link::vertex_link(self, v)
    }

    /// Whether every ridge angle is `π/m`, with the Coxeter diagram.
    pub fn coxeter_check(&self) -> Result<(bool, CoxeterDiagram), PolytopeError> {
        coxeter::coxeter_check(self)
    }

    pub fn orbifold_euler_characteristic(&self) -> Result<num_rational::BigRational, PolytopeError> {
        coxeter::orbifold_euler_characteristic(self)
    }

    /// Volume as a rational multiple of `π^{n/2}` (even dimensions only).
    pub fn volume_coefficient(&self) -> Result<Option<num_rational::BigRational>, PolytopeError> {
        let chi = self.orbifold_euler_characteristic()?;
        Ok(coxeter::gauss_bonnet_coefficient(self.dim()).map(|c| c * chi))
    }

    /// Order of the finite reflection group fixing face `f`.
    pub fn stabilizer_order(&self, f: usize) -> Result<u64, PolytopeError> {
        coxeter::face_group_order(self, &self.lattice.face(f).facets)
    }

    /// Facet `i` as a polytope of one lower dimension, with the projected
    /// normals of its neighbours; labels are inherited.
    pub fn facet_polytope(&self, i: usize) -> Result<(Polytope, Vec<usize>), PolytopeError> {
        let p = &self.polytope;
        let w = p.normal(i);
        let ww = w.norm_sq();
        let mut normals = Vec::new();
        let mut labels = Vec::new();
        let mut sources = Vec::new();
        for j in 0..p.facet_count() {
            if j == i || !self.adjacent(i, j) {
                continue;
            }
            normals.push(project_away(p.normal(j), w, &ww));
            labels.push(p.labels[j].clone());
            sources.push(j);
        }
        let mut name = format!("{}/facet{i}", p.name);
        if let Some(l) = p.label(i) {
            name = format!("{}/{l}", p.name);
        }
        let poly = match p.constraint() {
            None => Polytope::with_constraint(name, normals, labels, w.clone())?,
            Some(_) => return Err(PolytopeError::BadConstraint),
        };
        Ok((poly, sources))
    }
}

/// `u − (⟨u,w⟩/⟨w,w⟩)·w`.
pub fn project_away(u: &LorentzVector, w: &LorentzVector, ww: &FieldElement) -> LorentzVector {
    let t = &u.dot(w) / ww;
    u.sub(&w.scale(&t))
}

impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&io::to_text(self))
    }
}

/// Counts of labels as a sorted multiset, e.g. `[("E", 2), ("N", 2), ("P", 2)]`.
pub fn label_multiset<'a>(labels: impl IntoIterator<Item = &'a str>) -> Vec<(String, usize)> {
    let mut m: HashMap<&str, usize> = HashMap::new();
    for l in labels {
        *m.entry(l).or_default() += 1;
    }
    let mut v: Vec<_> = m.into_iter().map(|(k, c)| (k.to_string(), c)).collect();
    v.sort();
    v
}
