//! Face-pairing schemas over copies of hyperbolic polytopes, the quotient
//! complexes they define, and checks that a quotient is a hyperbolic
//! manifold (possibly with cusps and totally geodesic boundary).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use lorentz::{LorentzError, LorentzMap, LorentzVector};
use polytope::{builtin_polytope, AngleClass, Analysis, FaceLattice, Polytope, PolytopeError};
use symmetry::{automorphism_group, SymmetryError, SymmetryGroup};
use thiserror::Error;

mod builtin;
mod io;
mod isomorphism;
mod link;
mod ops;
mod quotient;
mod ridge;
mod verify;
pub mod volume;

pub use builtin::{builtin_schema, builtin_schema_names, figure_eight_swap};
pub use io::{parse_schema, resolve_cell, to_text};
pub use isomorphism::{combinatorial_isomorphism, Isomorphism};
pub use link::{
    classify_volume, cusp_check, pairing_action, spherical_check, CuspReport, Flag, LinkCell, LinkComplex, SphereVerdict,
    SphericalReport, Surface,
};
pub use ops::{
    boundary_complex, components, double, orientability, orientation_cover, quotient_by_involution, restricted,
    rows_expr, BoundaryComplex, CopyAction, Orientability,
};
pub use quotient::{FaceRef, Orbit, QuotientComplex, Step};
pub use ridge::{ridge_check, RidgeCycle, RidgeKind};
pub use verify::{
    euler_characteristic, verify_manifold, BoundarySummary, CheckReport, EdgeLinkReport, EulerReport, VerifyOptions,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GluingError {
    #[error("unknown schema '{0}'")]
    UnknownSchema(String),
    #[error("unknown copy {0}")]
    UnknownCopy(usize),
    #[error("unknown facet {0}")]
    UnknownFacet(FacetRef),
    #[error("facet {0} is already paired")]
    AlreadyPaired(FacetRef),
    #[error("facet {0} is paired with itself by a map fixing it")]
    SelfPairing(FacetRef),
    #[error("pairing {pairing}: {reason}")]
    BadPairing { pairing: String, reason: String },
    #[error("schema has no boundary")]
    NoBoundary,
    #[error("not an automorphism of the schema: {0}")]
    NotAnAutomorphism(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Io(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
}

pub type Result<T> = std::result::Result<T, GluingError>;

/// A polytope together with the lookups the gluing code needs.
pub struct Cell {
    source: String,
    analysis: Analysis,
    vertex_index: HashMap<LorentzVector, usize>,
    by_vertices: HashMap<Vec<usize>, usize>,
    group: OnceLock<SymmetryGroup>,
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cell").field("source", &self.source).finish()
    }
}

impl Cell {
    pub fn new(source: impl Into<String>, polytope: Polytope) -> Result<Cell> {
        let analysis = Analysis::new(polytope)?;
        let vertex_index =
            analysis.vertices().iter().enumerate().map(|(i, v)| (v.point.canonical_projective(), i)).collect();
        let by_vertices =
            analysis.lattice().faces().iter().enumerate().map(|(i, f)| (f.vertices.clone(), i)).collect();
        Ok(Cell { source: source.into(), analysis, vertex_index, by_vertices, group: OnceLock::new() })
    }

    /// Shared cell for a builtin polytope.
    pub fn builtin(name: &str) -> Result<Arc<Cell>> {
        static CACHE: OnceLock<Mutex<HashMap<String, Arc<Cell>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(c) = cache.lock().expect("cell cache").get(name) {
            return Ok(c.clone());
        }
        let cell = Arc::new(Cell::new(format!("builtin:{name}"), builtin_polytope(name)?)?);
        Ok(cache.lock().expect("cell cache").entry(name.to_string()).or_insert(cell).clone())
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn analysis(&self) -> &Analysis {
        &self.analysis
    }

    pub fn polytope(&self) -> &Polytope {
        self.analysis.polytope()
    }

    pub fn lattice(&self) -> &FaceLattice {
        self.analysis.lattice()
    }

    pub fn dim(&self) -> usize {
        self.analysis.dim()
    }

    pub fn facet_count(&self) -> usize {
        self.polytope().facet_count()
    }

    pub fn group(&self) -> &SymmetryGroup {
        self.group.get_or_init(|| automorphism_group(&self.analysis))
    }

    /// Index of the vertex lying on the ray of `p`.
    pub fn locate_vertex(&self, p: &LorentzVector) -> Option<usize> {
        if p.is_zero() {
            return None;
        }
        self.vertex_index.get(&p.canonical_projective()).copied()
    }

    pub fn face_by_vertices(&self, vertices: &[usize]) -> Option<usize> {
        self.by_vertices.get(vertices).copied()
    }

    /// Image under `map` of face `f` of this cell as a face of `target`.
    pub fn map_face(&self, target: &Cell, map: &LorentzMap, f: usize) -> Option<usize> {
        let a = self.analysis.vertices();
        let mut image = Vec::new();
        for &v in &self.lattice().face(f).vertices {
            image.push(target.locate_vertex(&map.apply(&a[v].point))?);
        }
        image.sort_unstable();
        let g = target.face_by_vertices(&image)?;
        (target.lattice().face(g).dim == self.lattice().face(f).dim).then_some(g)
    }

    pub fn facet_label(&self, i: usize) -> String {
        self.polytope().display_label(i)
    }

    /// Facet labels of the facets containing `f`, space separated.
    pub fn face_label(&self, f: usize) -> String {
        let lat = self.lattice();
        let mut labels: Vec<String> = lat.face(f).facets.iter().map(|&i| self.facet_label(i)).collect();
        labels.sort();
        labels.join(" ")
    }

    pub fn ridge_angle(&self, ridge: usize) -> Result<AngleClass> {
        let fs = &self.lattice().face(ridge).facets;
        Ok(self.polytope().dihedral_angle(fs[0], fs[1])?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacetRef {
    pub copy: usize,
    pub facet: usize,
}

impl FacetRef {
    pub fn new(copy: usize, facet: usize) -> FacetRef {
        FacetRef { copy, facet }
    }
}

impl fmt::Display for FacetRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}.f{}", self.copy, self.facet)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingCopy {
    pub cell: usize,
    pub mirror: bool,
}

/// Identification of `source` with `target` by `map`, which carries the
/// source cell onto the target cell and the source facet onto the target facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub source: FacetRef,
    pub target: FacetRef,
    pub map: LorentzMap,
    pub expr: String,
}

#[derive(Clone, Debug, Default)]
struct FaceMap {
    forward: HashMap<usize, usize>,
    backward: HashMap<usize, usize>,
}

/// One side of a pairing, seen from one of its facets.
#[derive(Clone, Copy, Debug)]
pub struct Transition<'a> {
    pub pairing: usize,
    pub forward: bool,
    pub target: FacetRef,
    pub map: &'a LorentzMap,
}

#[derive(Clone, Debug)]
pub struct GluingSchema {
    name: String,
    cells: Vec<Arc<Cell>>,
    copies: Vec<GluingCopy>,
    pairings: Vec<Pairing>,
    inverses: Vec<LorentzMap>,
    face_maps: Vec<FaceMap>,
    partner: HashMap<FacetRef, (usize, bool)>,
}

impl GluingSchema {
    pub fn new(name: impl Into<String>) -> GluingSchema {
        GluingSchema {
            name: name.into(),
            cells: Vec::new(),
            copies: Vec::new(),
            pairings: Vec::new(),
            inverses: Vec::new(),
            face_maps: Vec::new(),
            partner: HashMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn add_cell(&mut self, cell: Arc<Cell>) -> usize {
        if let Some(i) = self.cells.iter().position(|c| Arc::ptr_eq(c, &cell)) {
            return i;
        }
        self.cells.push(cell);
        self.cells.len() - 1
    }

    pub fn add_copies(&mut self, cell: usize, count: usize, mirror: bool) -> Vec<usize> {
        assert!(cell < self.cells.len(), "unknown cell {cell}");
        let start = self.copies.len();
        self.copies.extend((0..count).map(|_| GluingCopy { cell, mirror }));
        (start..start + count).collect()
    }

    pub fn cells(&self) -> &[Arc<Cell>] {
        &self.cells
    }

    pub fn copies(&self) -> &[GluingCopy] {
        &self.copies
    }

    pub fn copy_count(&self) -> usize {
        self.copies.len()
    }

    pub fn cell_of(&self, copy: usize) -> &Cell {
        &self.cells[self.copies[copy].cell]
    }

    pub fn cell_arc(&self, copy: usize) -> &Arc<Cell> {
        &self.cells[self.copies[copy].cell]
    }

    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    /// Dimension of the cells (0 for an empty schema).
    pub fn dim(&self) -> usize {
        self.cells.first().map_or(0, |c| c.dim())
    }

    pub fn facet_refs(&self) -> Vec<FacetRef> {
        (0..self.copies.len())
            .flat_map(|c| (0..self.cell_of(c).facet_count()).map(move |f| FacetRef::new(c, f)))
            .collect()
    }

    pub fn unpaired_facets(&self) -> Vec<FacetRef> {
        self.facet_refs().into_iter().filter(|r| !self.partner.contains_key(r)).collect()
    }

    pub fn is_closed(&self) -> bool {
        self.facet_refs().iter().all(|r| self.partner.contains_key(r))
    }

    pub fn facet_label(&self, r: FacetRef) -> String {
        self.cell_of(r.copy).facet_label(r.facet)
    }

    /// The pairing leaving facet `r`, oriented away from `r`.
    pub fn partner(&self, r: FacetRef) -> Option<Transition<'_>> {
        let &(k, forward) = self.partner.get(&r)?;
        Some(self.transition(k, forward))
    }

    /// Every way of leaving facet `r`: one, or two for a facet paired with itself.
    pub fn transitions(&self, r: FacetRef) -> Vec<Transition<'_>> {
        match self.partner.get(&r) {
            None => Vec::new(),
            Some(&(k, forward)) => {
                let p = &self.pairings[k];
                if p.source == p.target {
                    vec![self.transition(k, true), self.transition(k, false)]
                } else {
                    vec![self.transition(k, forward)]
                }
            }
        }
    }

    pub fn transition(&self, pairing: usize, forward: bool) -> Transition<'_> {
        let p = &self.pairings[pairing];
        if forward {
            Transition { pairing, forward, target: p.target, map: &p.map }
        } else {
            Transition { pairing, forward, target: p.source, map: &self.inverses[pairing] }
        }
    }

    /// Image of a face of the departure facet under a pairing.
    pub fn transport(&self, pairing: usize, forward: bool, face: usize) -> Option<usize> {
        let m = &self.face_maps[pairing];
        if forward { m.forward.get(&face) } else { m.backward.get(&face) }.copied()
    }

    pub fn add_pairing(
        &mut self,
        source: FacetRef,
        target: FacetRef,
        map: LorentzMap,
        expr: impl Into<String>,
    ) -> Result<usize> {
        let expr = expr.into();
        for r in [source, target] {
            if r.copy >= self.copies.len() {
                return Err(GluingError::UnknownCopy(r.copy));
            }
            if r.facet >= self.cell_of(r.copy).facet_count() {
                return Err(GluingError::UnknownFacet(r));
            }
            if self.partner.contains_key(&r) {
                return Err(GluingError::AlreadyPaired(r));
            }
        }
        let name = format!("{source} -> {target} via {expr}");
        let bad = |reason: &str| GluingError::BadPairing { pairing: name.clone(), reason: reason.to_string() };
        let (a, b) = (self.cell_of(source.copy), self.cell_of(target.copy));
        if map.dim() != a.polytope().ambient_dim() || map.dim() != b.polytope().ambient_dim() {
            return Err(bad("dimension mismatch"));
        }
        if !b.polytope().normal(target.facet).same_ray(&map.apply(a.polytope().normal(source.facet))) {
            return Err(bad("hyperplane not carried onto the target hyperplane"));
        }
        match (a.polytope().constraint(), b.polytope().constraint()) {
            (None, None) => {}
            (Some(w), Some(w2)) => {
                let image = map.apply(w);
                if !(w2.same_ray(&image) || w2.same_ray(&image.neg())) {
                    return Err(bad("ambient hyperplane not preserved"));
                }
            }
            _ => return Err(bad("cells of different kinds")),
        }
        let (la, lb) = (a.lattice(), b.lattice());
        let fa = la.facet_face(source.facet);
        let fb = lb.facet_face(target.facet);
        let mut forward = HashMap::new();
        for (id, face) in la.faces().iter().enumerate() {
            if !face.facets.contains(&source.facet) {
                continue;
            }
            let g = a.map_face(b, &map, id).ok_or_else(|| bad("a face is not carried onto a face"))?;
            if !lb.contains(fb, g) {
                return Err(bad("a face leaves the target facet"));
            }
            forward.insert(id, g);
        }
        if forward.get(&fa) != Some(&fb) {
            return Err(bad("facet not carried onto the target facet"));
        }
        if source == target && forward.iter().all(|(x, y)| x == y) {
            return Err(GluingError::SelfPairing(source));
        }
        let backward: HashMap<usize, usize> = forward.iter().map(|(&x, &y)| (y, x)).collect();
        if backward.len() != forward.len() {
            return Err(bad("face map is not injective"));
        }
        let k = self.pairings.len();
        self.inverses.push(map.inverse());
        self.face_maps.push(FaceMap { forward, backward });
        self.pairings.push(Pairing { source, target, map, expr });
        self.partner.insert(source, (k, true));
        if target != source {
            self.partner.insert(target, (k, false));
        }
        Ok(k)
    }

    /// A schema with the same copies and only the listed pairings.
    pub fn with_pairings(&self, keep: impl IntoIterator<Item = usize>) -> Result<GluingSchema> {
        let mut s = GluingSchema::new(self.name.clone());
        s.cells = self.cells.clone();
        s.copies = self.copies.clone();
        for k in keep {
            let p = &self.pairings[k];
            s.add_pairing(p.source, p.target, p.map.clone(), p.expr.clone())?;
        }
        Ok(s)
    }
}
