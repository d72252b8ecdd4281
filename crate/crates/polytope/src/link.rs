use std::fmt;

use exactfield::FieldElement;
use lorentz::LorentzVector;

use crate::{AngleClass, Analysis, PolytopeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkGeometry {
    Euclidean,
    Spherical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkShape {
    Segment,
    Polygon(usize),
    Tetrahedron,
    TriangularPrism,
    Parallelepiped,
    Other(Vec<usize>),
}

impl fmt::Display for LinkShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkShape::Segment => f.write_str("segment"),
            LinkShape::Polygon(k) => write!(f, "{k}-gon"),
            LinkShape::Tetrahedron => f.write_str("tetrahedron"),
            LinkShape::TriangularPrism => f.write_str("triangular prism"),
            LinkShape::Parallelepiped => f.write_str("parallelepiped"),
            LinkShape::Other(fv) => write!(f, "polytope {fv:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkFace {
    pub facet: usize,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkEdge {
    pub ridge: usize,
    pub facets: (usize, usize),
    pub angle: AngleClass,
}

/// The section of the cusp at an ideal vertex by the horosphere
/// `⟨x, r⟩ = −1`, where `r` is the vertex representative with `x0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossSection {
    /// One point per edge of the polytope at the vertex, keyed by edge face id.
    pub points: Vec<(usize, LorentzVector)>,
    /// Squared Euclidean lengths of the 1-skeleton of the section, as
    /// pairs of indices into `points`.
    pub segments: Vec<(usize, usize, FieldElement)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLink {
    pub vertex: usize,
    pub geometry: LinkGeometry,
    pub faces: Vec<LinkFace>,
    pub edges: Vec<LinkEdge>,
    /// Face counts of the link, from its vertices upwards.
    pub f_vector: Vec<usize>,
    pub shape: LinkShape,
    pub cross_section: Option<CrossSection>,
}

impl VertexLink {
    pub fn labels(&self) -> Vec<&str> {
        self.faces.iter().map(|f| f.label.as_str()).collect()
    }
}

/// The point where the geodesic from the ideal point `r` through `w`
/// meets the horosphere `⟨x, r⟩ = −1`.
pub fn horosphere_point(r: &LorentzVector, w: &LorentzVector) -> LorentzVector {
    let beta = -(FieldElement::one() / r.dot(w));
    let alpha = (FieldElement::one() + &(&beta * &beta) * &w.norm_sq()) / FieldElement::from_int(2);
    r.scale(&alpha).add(&w.scale(&beta))
}

pub(crate) fn vertex_link(a: &Analysis, v: usize) -> Result<VertexLink, PolytopeError> {
    let vertex = a.vertex(v)?;
    let p = a.polytope();
    let lat = a.lattice();
    let n = a.dim();
    let fv = lat.vertex_face(v);
    let faces = vertex.facets.iter().map(|&i| LinkFace { facet: i, label: p.display_label(i) }).collect();
    let mut edges = Vec::new();
    if n >= 2 {
        for r in lat.superfaces(fv, n - 2) {
            let fs = &lat.face(r).facets;
            edges.push(LinkEdge { ridge: r, facets: (fs[0], fs[1]), angle: p.dihedral_angle(fs[0], fs[1])? });
        }
    }
    let f_vector: Vec<usize> = (1..n).map(|k| lat.superfaces(fv, k).len()).collect();
    let shape = match (n, f_vector.as_slice()) {
        (2, _) => LinkShape::Segment,
        (3, [k, _]) => LinkShape::Polygon(*k),
        (4, [4, 6, 4]) => LinkShape::Tetrahedron,
        (4, [6, 9, 5]) => LinkShape::TriangularPrism,
        (4, [8, 12, 6]) => LinkShape::Parallelepiped,
        _ => LinkShape::Other(f_vector.clone()),
    };
    let cross_section = vertex.ideal.then(|| cross_section(a, v));
    Ok(VertexLink {
        vertex: v,
        geometry: if vertex.ideal { LinkGeometry::Euclidean } else { LinkGeometry::Spherical },
        faces,
        edges,
        f_vector,
        shape,
        cross_section,
    })
}

fn cross_section(a: &Analysis, v: usize) -> CrossSection {
    let lat = a.lattice();
    let fv = lat.vertex_face(v);
    let r = &a.vertices()[v].point;
    let edge_ids = lat.superfaces(fv, 1);
    let points: Vec<(usize, LorentzVector)> = edge_ids
        .iter()
        .map(|&e| {
            let other = *lat.face(e).vertices.iter().find(|&&x| x != v).expect("edge has two vertices");
            (e, horosphere_point(r, &a.vertices()[other].point))
        })
        .collect();
    let mut segments = Vec::new();
    if a.dim() >= 2 {
        for g in lat.superfaces(fv, 2) {
            let ends: Vec<usize> = (0..points.len()).filter(|&k| lat.contains(g, points[k].0)).collect();
            if let [x, y] = ends[..] {
                let d = points[x].1.sub(&points[y].1);
                segments.push((x, y, d.norm_sq()));
            }
        }
    }
    CrossSection { points, segments }
}
