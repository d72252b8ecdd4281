use std::collections::{HashMap, HashSet};

use crate::{IndexSet, Polytope, PolytopeError, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    /// All facets containing the face, sorted.
    pub facets: Vec<usize>,
    /// All vertices of the face, sorted.
    pub vertices: Vec<usize>,
    /// True only for ideal vertices.
    pub ideal: bool,
}

/// All faces of a polytope ordered by dimension, then by facet set.
/// The polytope itself is the last face.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    faces: Vec<Face>,
    by_dim: Vec<Vec<usize>>,
    by_facets: HashMap<Vec<usize>, usize>,
    vertex_face: Vec<usize>,
    facet_face: Vec<usize>,
}

impl FaceLattice {
    pub(crate) fn build(p: &Polytope, vertices: &[Vertex]) -> Result<Self, PolytopeError> {
        let nv = vertices.len();
        let nf = p.facet_count();
        let n = p.dim();
        let facet_sets: Vec<IndexSet> = (0..nf)
            .map(|i| IndexSet::from_indices(nv, (0..nv).filter(|&v| vertices[v].facets.contains(&i))))
            .collect();

        let mut seen: HashSet<IndexSet> = HashSet::new();
        let mut stack: Vec<IndexSet> = Vec::new();
        for s in &facet_sets {
            if !s.is_empty() && seen.insert(s.clone()) {
                stack.push(s.clone());
            }
        }
        while let Some(s) = stack.pop() {
            for f in &facet_sets {
                let t = s.intersection(f);
                if !t.is_empty() && seen.insert(t.clone()) {
                    stack.push(t);
                }
            }
        }
        for v in 0..nv {
            seen.insert(IndexSet::from_indices(nv, [v]));
        }
        let top = IndexSet::from_indices(nv, 0..nv);
        seen.insert(top.clone());

        let mut sets: Vec<IndexSet> = seen.into_iter().collect();
        sets.sort_by_key(IndexSet::len);
        let mut dims = vec![0usize; sets.len()];
        for a in 0..sets.len() {
            if sets[a].len() == 1 {
                continue;
            }
            let mut best = None;
            for b in 0..a {
                if sets[b].len() < sets[a].len() && sets[b].is_subset(&sets[a]) {
                    best = Some(best.map_or(dims[b], |m: usize| m.max(dims[b])));
                }
            }
            dims[a] = best.map_or(0, |m| m + 1);
        }

        let mut faces: Vec<Face> = sets
            .iter()
            .zip(&dims)
            .map(|(s, &dim)| {
                let vs = s.to_vec();
                let facets = if s == &top && dim == n {
                    Vec::new()
                } else {
                    (0..nf).filter(|&i| s.is_subset(&facet_sets[i])).collect()
                };
                let ideal = dim == 0 && vertices[vs[0]].ideal;
                Face { dim, facets, vertices: vs, ideal }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.facets, &a.vertices).cmp(&(b.dim, &b.facets, &b.vertices)));

        if faces.last().map(|f| f.dim) != Some(n) {
            return Err(PolytopeError::EmptyInterior);
        }
        let mut by_dim = vec![Vec::new(); n + 1];
        for (id, f) in faces.iter().enumerate() {
            if f.dim > n {
                return Err(PolytopeError::EmptyInterior);
            }
            by_dim[f.dim].push(id);
            if f.dim == 1 && f.vertices.len() != 2 {
                return Err(PolytopeError::UnboundedFace(f.facets.clone(), f.vertices.len()));
            }
        }
        let mut facet_face = vec![usize::MAX; nf];
        if n >= 1 {
            for &id in &by_dim[n - 1] {
                for &i in &faces[id].facets {
                    if faces[id].facets.len() == 1 {
                        facet_face[i] = id;
                    }
                }
            }
        }
        if let Some(i) = facet_face.iter().position(|&f| f == usize::MAX) {
            return Err(PolytopeError::RedundantNormal(i));
        }
        let mut vertex_face = vec![0; nv];
        for &id in &by_dim[0] {
            vertex_face[faces[id].vertices[0]] = id;
        }
        let by_facets = faces.iter().enumerate().map(|(id, f)| (f.facets.clone(), id)).collect();
        Ok(FaceLattice { faces, by_dim, by_facets, vertex_face, facet_face })
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces_of_dim(&self, k: usize) -> &[usize] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn top(&self) -> usize {
        self.faces.len() - 1
    }

    /// The face whose full facet set is exactly `facets` (sorted).
    pub fn by_facets(&self, facets: &[usize]) -> Option<usize> {
        self.by_facets.get(facets).copied()
    }

    pub fn vertex_face(&self, v: usize) -> usize {
        self.vertex_face[v]
    }

    pub fn facet_face(&self, i: usize) -> usize {
        self.facet_face[i]
    }

    /// The ridge shared by facets `i` and `j`.
    pub fn ridge(&self, i: usize, j: usize) -> Option<usize> {
        let mut key = [i, j];
        key.sort_unstable();
        let id = self.by_facets(&key)?;
        let n = self.by_dim.len() - 1;
        (n >= 2 && self.faces[id].dim == n - 2).then_some(id)
    }

    pub fn contains(&self, big: usize, small: usize) -> bool {
        let (b, s) = (&self.faces[big], &self.faces[small]);
        s.dim <= b.dim && s.vertices.iter().all(|v| b.vertices.binary_search(v).is_ok())
    }

    /// Faces of dimension `k` contained in `f`.
    pub fn subfaces(&self, f: usize, k: usize) -> Vec<usize> {
        self.faces_of_dim(k).iter().copied().filter(|&g| self.contains(f, g)).collect()
    }

    /// Faces of dimension `k` containing `f`.
    pub fn superfaces(&self, f: usize, k: usize) -> Vec<usize> {
        self.faces_of_dim(k).iter().copied().filter(|&g| self.contains(g, f)).collect()
    }
}
