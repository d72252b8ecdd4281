use std::collections::HashMap;

use polytope::AngleClass;

use crate::{Cell, FacetRef, GluingSchema};

/// A copy bijection with a facet bijection for every copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub copies: Vec<usize>,
    pub facets: Vec<Vec<usize>>,
}

fn angle(cell: &Cell, i: usize, j: usize) -> Option<AngleClass> {
    cell.analysis().ridge(i, j).and_then(|r| cell.ridge_angle(r).ok())
}

/// Facet bijections from `a` to `b` preserving adjacency, angles and faces.
fn facet_bijections(a: &Cell, b: &Cell) -> Vec<Vec<usize>> {
    let n = a.facet_count();
    if n != b.facet_count() || a.dim() != b.dim() || a.analysis().f_vector() != b.analysis().f_vector() {
        return Vec::new();
    }
    let ga: Vec<Vec<Option<AngleClass>>> = (0..n).map(|i| (0..n).map(|j| angle(a, i, j)).collect()).collect();
    let gb: Vec<Vec<Option<AngleClass>>> = (0..n).map(|i| (0..n).map(|j| angle(b, i, j)).collect()).collect();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        k: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ga: &[Vec<Option<AngleClass>>],
        gb: &[Vec<Option<AngleClass>>],
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = perm.len();
        if k == n {
            out.push(perm.clone());
            return;
        }
        for t in 0..n {
            if used[t] || (0..k).any(|i| ga[i][k] != gb[perm[i]][t]) {
                continue;
            }
            perm[k] = t;
            used[t] = true;
            rec(k + 1, perm, used, ga, gb, out);
            used[t] = false;
        }
        perm[k] = usize::MAX;
    }
    rec(0, &mut perm, &mut used, &ga, &gb, &mut out);
    let (la, lb) = (a.lattice(), b.lattice());
    out.retain(|p| {
        la.faces().iter().all(|f| {
            if f.facets.is_empty() {
                return true;
            }
            let mut img: Vec<usize> = f.facets.iter().map(|&i| p[i]).collect();
            img.sort_unstable();
            lb.by_facets(&img).is_some_and(|g| lb.face(g).dim == f.dim)
        })
    });
    out
}

fn map_face(cell_a: &Cell, cell_b: &Cell, perm: &[usize], f: usize) -> Option<usize> {
    let face = cell_a.lattice().face(f);
    let mut img: Vec<usize> = face.facets.iter().map(|&i| perm[i]).collect();
    img.sort_unstable();
    cell_b.lattice().by_facets(&img)
}

struct Search<'a> {
    s1: &'a GluingSchema,
    s2: &'a GluingSchema,
    candidates: HashMap<(usize, usize), Vec<Vec<usize>>>,
    copies: Vec<Option<usize>>,
    facets: Vec<Option<Vec<usize>>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn candidates(&mut self, c1: usize, c2: usize) -> Vec<Vec<usize>> {
        let key = (self.s1.copies()[c1].cell, self.s2.copies()[c2].cell);
        let (s1, s2) = (self.s1, self.s2);
        self.candidates
            .entry(key)
            .or_insert_with(|| facet_bijections(s1.cell_of(c1), s2.cell_of(c2)))
            .clone()
    }

    /// Checks every pairing of `s1` at copy `c` whose other end is assigned.
    fn consistent(&self, c: usize) -> bool {
        let (s1, s2) = (self.s1, self.s2);
        let (Some(c2), Some(p)) = (self.copies[c], self.facets[c].as_ref()) else { return true };
        for f in 0..s1.cell_of(c).facet_count() {
            let image = FacetRef::new(c2, p[f]);
            let t1 = s1.partner(FacetRef::new(c, f));
            let t2 = s2.partner(image);
            match (t1, t2) {
                (None, None) => {}
                (Some(t1), Some(t2)) => {
                    let other = t1.target.copy;
                    let (Some(o2), Some(q)) = (self.copies[other], self.facets[other].as_ref()) else { continue };
                    if t2.target != FacetRef::new(o2, q[t1.target.facet]) {
                        return false;
                    }
                    let (a, b) = (s1.cell_of(c), s2.cell_of(c2));
                    let (a2, b2) = (s1.cell_of(other), s2.cell_of(o2));
                    for (id, face) in a.lattice().faces().iter().enumerate() {
                        if !face.facets.contains(&f) {
                            continue;
                        }
                        let via1 = s1.transport(t1.pairing, t1.forward, id).and_then(|g| map_face(a2, b2, q, g));
                        let via2 = map_face(a, b, p, id).and_then(|g| s2.transport(t2.pairing, t2.forward, g));
                        if via1.is_none() || via1 != via2 {
                            return false;
                        }
                    }
                }
                _ => return false,
            }
        }
        true
    }

    fn next_copy(&self) -> Option<usize> {
        let n = self.copies.len();
        let frontier = (0..n).find(|&c| {
            self.copies[c].is_none()
                && self.s1.facet_refs().iter().any(|r| {
                    r.copy == c && self.s1.partner(*r).is_some_and(|t| self.copies[t.target.copy].is_some())
                })
        });
        frontier.or_else(|| (0..n).find(|&c| self.copies[c].is_none()))
    }

    fn run(&mut self) -> bool {
        let Some(c) = self.next_copy() else { return true };
        for c2 in 0..self.s2.copy_count() {
            if self.used[c2] {
                continue;
            }
            for p in self.candidates(c, c2) {
                self.copies[c] = Some(c2);
                self.facets[c] = Some(p);
                self.used[c2] = true;
                let ok = (0..self.copies.len()).filter(|&d| self.copies[d].is_some()).all(|d| self.consistent(d));
                if ok && self.run() {
                    return true;
                }
                self.used[c2] = false;
                self.copies[c] = None;
                self.facets[c] = None;
            }
        }
        false
    }
}

/// Searches for a bijection of copies and facets that preserves faces,
/// dihedral angles, the pairings and their face maps.
pub fn combinatorial_isomorphism(s1: &GluingSchema, s2: &GluingSchema) -> Option<Isomorphism> {
    if s1.dim() != s2.dim() || s1.copy_count() != s2.copy_count() || s1.pairings().len() != s2.pairings().len() {
        return None;
    }
    let n = s1.copy_count();
    let mut search = Search {
        s1,
        s2,
        candidates: HashMap::new(),
        copies: vec![None; n],
        facets: vec![None; n],
        used: vec![false; n],
    };
    if !search.run() {
        return None;
    }
    Some(Isomorphism {
        copies: search.copies.into_iter().map(|c| c.expect("assigned")).collect(),
        facets: search.facets.into_iter().map(|f| f.expect("assigned")).collect(),
    })
}
