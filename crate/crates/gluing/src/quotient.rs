use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use lorentz::LorentzMap;
use rayon::prelude::*;

use crate::{FacetRef, GluingSchema};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceRef {
    pub copy: usize,
    pub face: usize,
}

/// How an orbit member is reached from an earlier member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub parent: usize,
    pub pairing: usize,
    pub forward: bool,
}

#[derive(Clone, Debug)]
pub struct Orbit {
    pub dim: usize,
    pub ideal: bool,
    /// Members in breadth-first order from the representative, which comes first.
    pub members: Vec<FaceRef>,
    pub steps: Vec<Option<Step>>,
    pub label: String,
}

impl Orbit {
    pub fn rep(&self) -> FaceRef {
        self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Pairings crossed from the representative to member `i`, in order.
    pub fn path(&self, i: usize) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        let mut k = i;
        while let Some(s) = self.steps[k] {
            out.push((s.pairing, s.forward));
            k = s.parent;
        }
        out.reverse();
        out
    }
}

/// Closes `items` under `neighbors`, returning each class as a breadth-first
/// tree rooted at its least element under `key`.
pub(crate) fn close<T, K>(
    items: &[T],
    neighbors: impl Fn(T) -> Vec<(T, usize, bool)>,
    key: impl Fn(&T) -> K,
) -> Vec<(Vec<T>, Vec<Option<Step>>)>
where
    T: Copy + Eq + Hash,
    K: Ord,
{
    let mut seen: HashMap<T, ()> = HashMap::with_capacity(items.len());
    let mut out = Vec::new();
    for &start in items {
        if seen.contains_key(&start) {
            continue;
        }
        let mut class = vec![start];
        seen.insert(start, ());
        let mut k = 0;
        while k < class.len() {
            for (t, _, _) in neighbors(class[k]) {
                if seen.insert(t, ()).is_none() {
                    class.push(t);
                }
            }
            k += 1;
        }
        let root = *class.iter().min_by_key(|t| key(t)).expect("nonempty class");
        let mut members = vec![root];
        let mut steps = vec![None];
        let mut index: HashMap<T, usize> = HashMap::from([(root, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (t, pairing, forward) in neighbors(members[i]) {
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(t) {
                    e.insert(members.len());
                    queue.push_back(members.len());
                    members.push(t);
                    steps.push(Some(Step { parent: i, pairing, forward }));
                }
            }
        }
        out.push((members, steps));
    }
    out
}

/// The faces of all copies up to identification by the pairings.
pub struct QuotientComplex<'s> {
    schema: &'s GluingSchema,
    orbits: Vec<Orbit>,
    orbit_of: HashMap<FaceRef, usize>,
    by_dim: Vec<Vec<usize>>,
}

impl<'s> QuotientComplex<'s> {
    pub fn new(schema: &'s GluingSchema) -> QuotientComplex<'s> {
        let n = schema.dim();
        let per_dim: Vec<Vec<Orbit>> = (0..=n)
            .into_par_iter()
            .map(|k| {
                let items: Vec<FaceRef> = (0..schema.copy_count())
                    .flat_map(|c| {
                        schema.cell_of(c).lattice().faces_of_dim(k).iter().map(move |&f| FaceRef { copy: c, face: f })
                    })
                    .collect();
                let key = |r: &FaceRef| (r.copy, schema.cell_of(r.copy).lattice().face(r.face).facets.clone());
                let mut orbits: Vec<Orbit> = close(&items, |r| face_neighbors(schema, r), key)
                    .into_iter()
                    .map(|(members, steps)| {
                        let rep = members[0];
                        let cell = schema.cell_of(rep.copy);
                        let face = cell.lattice().face(rep.face);
                        Orbit { dim: k, ideal: face.ideal, label: cell.face_label(rep.face), members, steps }
                    })
                    .collect();
                orbits.sort_by_cached_key(|o| key(&o.rep()));
                orbits
            })
            .collect();
        let mut orbits = Vec::new();
        let mut by_dim = Vec::new();
        for group in per_dim {
            let start = orbits.len();
            orbits.extend(group);
            by_dim.push((start..orbits.len()).collect());
        }
        let mut orbit_of = HashMap::new();
        for (i, o) in orbits.iter().enumerate() {
            for &m in &o.members {
                orbit_of.insert(m, i);
            }
        }
        QuotientComplex { schema, orbits, orbit_of, by_dim }
    }

    pub fn schema(&self) -> &'s GluingSchema {
        self.schema
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn orbit(&self, i: usize) -> &Orbit {
        &self.orbits[i]
    }

    pub fn orbits_of_dim(&self, k: usize) -> &[usize] {
        self.by_dim.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn orbit_of(&self, r: FaceRef) -> Option<usize> {
        self.orbit_of.get(&r).copied()
    }

    /// Orbit of a whole facet.
    pub fn facet_orbit(&self, r: FacetRef) -> usize {
        let face = self.schema.cell_of(r.copy).lattice().facet_face(r.facet);
        self.orbit_of[&FaceRef { copy: r.copy, face }]
    }

    /// Map from the coordinates of the representative's copy to those of member `i`.
    pub fn chain_map(&self, orbit: usize, i: usize) -> LorentzMap {
        let o = &self.orbits[orbit];
        let dim = self.schema.cell_of(o.rep().copy).polytope().ambient_dim();
        o.path(i)
            .into_iter()
            .fold(LorentzMap::identity(dim), |acc, (k, fwd)| self.schema.transition(k, fwd).map.compose(&acc))
    }

    /// Orbit counts per dimension, ideal vertices included.
    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn ideal_orbits(&self) -> Vec<usize> {
        self.orbits_of_dim(0).iter().copied().filter(|&i| self.orbits[i].ideal).collect()
    }

    pub fn finite_vertex_orbits(&self) -> Vec<usize> {
        self.orbits_of_dim(0).iter().copied().filter(|&i| !self.orbits[i].ideal).collect()
    }

    /// Alternating count of the non-ideal orbits.
    pub fn euler_characteristic(&self) -> i64 {
        self.orbits.iter().filter(|o| !o.ideal).map(|o| if o.dim % 2 == 0 { 1 } else { -1 }).sum()
    }
}

pub(crate) fn face_neighbors(s: &GluingSchema, r: FaceRef) -> Vec<(FaceRef, usize, bool)> {
    let face = s.cell_of(r.copy).lattice().face(r.face);
    let mut out = Vec::new();
    for &f in &face.facets {
        for t in s.transitions(FacetRef::new(r.copy, f)) {
            if let Some(g) = s.transport(t.pairing, t.forward, r.face) {
                out.push((FaceRef { copy: t.target.copy, face: g }, t.pairing, t.forward));
            }
        }
    }
    out
}
