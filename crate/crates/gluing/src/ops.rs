use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use exactfield::FieldElement;
use lorentz::{solve, LorentzMap, LorentzVector};
use petgraph::unionfind::UnionFind;
use polytope::project_away;

use crate::link::Flag;
use crate::ridge::{other_facet, walk};
use crate::quotient::FaceRef;
use crate::{Cell, FacetRef, GluingError, GluingSchema, Result};

/// `rows[...]` text of a map, accepted by the symmetry expression parser.
pub fn rows_expr(m: &LorentzMap) -> String {
    let rows: Vec<String> =
        m.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
    format!("rows[{}]", rows.join("; "))
}

/// The schema keeping only the pairings accepted by `keep`.
pub fn restricted(s: &GluingSchema, keep: impl Fn(usize, &crate::Pairing) -> bool) -> Result<GluingSchema> {
    let idx: Vec<usize> = s.pairings().iter().enumerate().filter(|(k, p)| keep(*k, p)).map(|(k, _)| k).collect();
    s.with_pairings(idx)
}

/// Copies grouped into connected components of the pairing graph.
pub fn components(s: &GluingSchema) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(s.copy_count());
    for p in s.pairings() {
        uf.union(p.source.copy, p.target.copy);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..s.copy_count() {
        groups.entry(uf.find(c)).or_default().push(c);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientability {
    pub orientable: bool,
    /// Sign of each copy relative to its mirror flag, when orientable.
    pub signs: Vec<i8>,
    /// A pairing whose constraint could not be met.
    pub conflict: Option<usize>,
}

/// Propagates copy orientations through the pairings: a pairing with
/// determinant sign `d` from a copy of sign `σ` to one of sign `σ′` is
/// compatible when `σ′·d = −σ`.
pub fn orientability(s: &GluingSchema) -> Orientability {
    let n = s.copy_count();
    let mut sign = vec![0i8; n];
    let mut conflict = None;
    let mut adj: Vec<Vec<(usize, usize, i8)>> = vec![Vec::new(); n];
    for (k, p) in s.pairings().iter().enumerate() {
        let d = p.map.det_sign();
        adj[p.source.copy].push((k, p.target.copy, d));
        adj[p.target.copy].push((k, p.source.copy, d));
    }
    for start in 0..n {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for &(k, other, d) in &adj[c] {
                let want = -sign[c] * d;
                if sign[other] == 0 {
                    sign[other] = want;
                    stack.push(other);
                } else if sign[other] != want && conflict.is_none() {
                    conflict = Some(k);
                }
            }
        }
    }
    let signs = sign.iter().zip(s.copies()).map(|(&x, c)| if c.mirror { -x } else { x }).collect();
    Orientability { orientable: conflict.is_none(), signs, conflict }
}

/// Copies `(c, +)` and `(c, −)` at indices `2c` and `2c + 1`, with each
/// pairing lifted to join compatible signs.
pub fn orientation_cover(s: &GluingSchema) -> Result<GluingSchema> {
    let mut out = GluingSchema::new(format!("orientation cover of {}", s.name()));
    for cell in s.cells() {
        out.add_cell(cell.clone());
    }
    for c in s.copies() {
        out.add_copies(c.cell, 1, c.mirror);
        out.add_copies(c.cell, 1, !c.mirror);
    }
    let lift = |c: usize, sign: i8| 2 * c + usize::from(sign < 0);
    for p in s.pairings() {
        let d = p.map.det_sign();
        for sign in [1i8, -1] {
            out.add_pairing(
                FacetRef::new(lift(p.source.copy, sign), p.source.facet),
                FacetRef::new(lift(p.target.copy, -d * sign), p.target.facet),
                p.map.clone(),
                p.expr.clone(),
            )?;
        }
    }
    Ok(out)
}

/// Two copies of `s`, the second mirrored, with every unpaired facet glued
/// to its twin by the identity.
pub fn double(s: &GluingSchema) -> Result<GluingSchema> {
    let boundary = s.unpaired_facets();
    if boundary.is_empty() {
        return Err(GluingError::NoBoundary);
    }
    let mut out = GluingSchema::new(format!("double of {}", s.name()));
    for cell in s.cells() {
        out.add_cell(cell.clone());
    }
    let k = s.copy_count();
    for c in s.copies() {
        out.add_copies(c.cell, 1, c.mirror);
    }
    for c in s.copies() {
        out.add_copies(c.cell, 1, !c.mirror);
    }
    for shift in [0, k] {
        for p in s.pairings() {
            out.add_pairing(
                FacetRef::new(p.source.copy + shift, p.source.facet),
                FacetRef::new(p.target.copy + shift, p.target.facet),
                p.map.clone(),
                p.expr.clone(),
            )?;
        }
    }
    for r in boundary {
        let dim = s.cell_of(r.copy).polytope().ambient_dim();
        out.add_pairing(r, FacetRef::new(r.copy + k, r.facet), LorentzMap::identity(dim), "id")?;
    }
    Ok(out)
}

/// An involution of a schema given copy by copy: copy `c` goes to
/// `images[c].0` by the map `images[c].1`.
#[derive(Clone, Debug)]
pub struct CopyAction {
    pub images: Vec<(usize, LorentzMap)>,
    /// Expression text of each map, used to name derived pairings.
    pub exprs: Vec<String>,
}

impl CopyAction {
    pub fn new(images: Vec<(usize, LorentzMap)>) -> CopyAction {
        let exprs = images.iter().map(|(_, m)| rows_expr(m)).collect();
        CopyAction { images, exprs }
    }

    fn facet_image(&self, s: &GluingSchema, r: FacetRef) -> Option<FacetRef> {
        let (c2, m) = &self.images[r.copy];
        let (a, b) = (s.cell_of(r.copy), s.cell_of(*c2));
        let g = a.map_face(b, m, a.lattice().facet_face(r.facet))?;
        Some(FacetRef::new(*c2, b.lattice().face(g).facets[0]))
    }

    /// Checks that the action is an involution carrying cells to cells and
    /// pairings to pairings.
    pub fn check(&self, s: &GluingSchema) -> Result<()> {
        let err = |m: String| GluingError::NotAnAutomorphism(m);
        if self.images.len() != s.copy_count() {
            return Err(err("wrong number of copies".into()));
        }
        for (c, (c2, m)) in self.images.iter().enumerate() {
            let (back, m2) = self.images.get(*c2).ok_or_else(|| err(format!("unknown copy {c2}")))?;
            if *back != c || !m2.compose(m).is_identity() {
                return Err(err(format!("not an involution at copy {c}")));
            }
            let (a, b) = (s.cell_of(c), s.cell_of(*c2));
            if a.map_face(b, m, a.lattice().top()).is_none() {
                return Err(err(format!("copy {c} is not carried onto copy {c2}")));
            }
        }
        for p in s.pairings() {
            let (src, tgt) = (self.facet_image(s, p.source), self.facet_image(s, p.target));
            let (Some(src), Some(tgt)) = (src, tgt) else {
                return Err(err(format!("facet of {} -> {} not carried to a facet", p.source, p.target)));
            };
            let want = self.images[p.target.copy].1.compose(&p.map).compose(&self.images[p.source.copy].1.inverse());
            let ok = s.partner(src).is_some_and(|t| t.target == tgt && *t.map == want);
            if !ok {
                return Err(err(format!("pairing {} -> {} has no image", p.source, p.target)));
            }
        }
        Ok(())
    }

    /// The action on flags of the schema's copies.
    pub fn flag_action<'a>(&'a self, s: &'a GluingSchema) -> impl Fn(Flag) -> Option<Flag> + 'a {
        move |x: Flag| {
            let (c2, m) = &self.images[x.copy];
            let (a, b) = (s.cell_of(x.copy), s.cell_of(*c2));
            Some(Flag { copy: *c2, base: a.map_face(b, m, x.base)?, face: a.map_face(b, m, x.face)? })
        }
    }

    /// The action on faces of the schema's copies.
    pub fn face_image(&self, s: &GluingSchema, r: FaceRef) -> Option<FaceRef> {
        let (c2, m) = &self.images[r.copy];
        Some(FaceRef { copy: *c2, face: s.cell_of(r.copy).map_face(s.cell_of(*c2), m, r.face)? })
    }
}

/// The quotient of `s` by a copy-exchanging involution: copies `c < g(c)`
/// are kept and pairings into dropped copies are redirected through `g`.
pub fn quotient_by_involution(s: &GluingSchema, g: &CopyAction) -> Result<GluingSchema> {
    g.check(s)?;
    if g.images.iter().enumerate().any(|(c, (c2, _))| c == *c2) {
        return Err(GluingError::Unsupported("involution fixing a copy".into()));
    }
    let kept: Vec<usize> = (0..s.copy_count()).filter(|&c| c < g.images[c].0).collect();
    let new_index: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut out = GluingSchema::new(format!("{} / involution", s.name()));
    for cell in s.cells() {
        out.add_cell(cell.clone());
    }
    for &c in &kept {
        out.add_copies(s.copies()[c].cell, 1, s.copies()[c].mirror);
    }
    for &c in &kept {
        for f in 0..s.cell_of(c).facet_count() {
            let Some(t) = s.partner(FacetRef::new(c, f)) else { continue };
            let expr = if t.forward {
                s.pairings()[t.pairing].expr.clone()
            } else {
                rows_expr(t.map)
            };
            let (target, map, expr) = match new_index.get(&t.target.copy) {
                Some(&i) => (FacetRef::new(i, t.target.facet), t.map.clone(), expr),
                None => {
                    let (c2, gm) = &g.images[t.target.copy];
                    let image = g.facet_image(s, t.target).ok_or_else(|| GluingError::NotAnAutomorphism("facet".into()))?;
                    let expr = format!("{}*{}", g.exprs[t.target.copy], expr);
                    (FacetRef::new(new_index[c2], image.facet), gm.compose(t.map), expr)
                }
            };
            let source = FacetRef::new(new_index[&c], f);
            if let Some(existing) = out.partner(source) {
                if existing.target != target || *existing.map != map {
                    return Err(GluingError::NotAnAutomorphism(format!("inconsistent image of {source}")));
                }
                continue;
            }
            out.add_pairing(source, target, map, expr)?;
        }
    }
    Ok(out)
}

/// The boundary of a schema as a schema one dimension lower.
#[derive(Clone, Debug)]
pub struct BoundaryComplex {
    pub schema: GluingSchema,
    /// The unpaired facet behind each boundary copy.
    pub sources: Vec<FacetRef>,
    pub components: Vec<Vec<usize>>,
}

fn independent_rows(points: &[LorentzVector], want: usize) -> Vec<usize> {
    let mut reduced: Vec<(usize, Vec<FieldElement>)> = Vec::new();
    let mut chosen = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let mut v = p.coords().to_vec();
        for (col, r) in &reduced {
            if v[*col].is_zero() {
                continue;
            }
            let f = &v[*col] / &r[*col];
            for (x, y) in v.iter_mut().zip(r) {
                *x -= &(&f * y);
            }
        }
        if let Some(col) = v.iter().position(|x| !x.is_zero()) {
            reduced.push((col, v));
            chosen.push(i);
            if chosen.len() == want {
                break;
            }
        }
    }
    chosen
}

fn scale_between(a: &LorentzVector, b: &LorentzVector) -> Option<FieldElement> {
    (&a.norm_sq() / &b.norm_sq()).sqrt().ok()?
}

/// Unpaired facets as cells, glued along ridges joined by boundary ridge chains.
pub fn boundary_complex(s: &GluingSchema) -> Result<BoundaryComplex> {
    let sources = s.unpaired_facets();
    let mut out = GluingSchema::new(format!("boundary of {}", s.name()));
    let mut cache: HashMap<(usize, usize), (Arc<Cell>, Vec<usize>)> = HashMap::new();
    let mut facet_sources = Vec::new();
    for r in &sources {
        let key = (s.copies()[r.copy].cell, r.facet);
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
            let parent = s.cell_of(r.copy);
            let (poly, src) = parent.analysis().facet_polytope(r.facet)?;
            let cell = Arc::new(Cell::new(format!("{}#{}", parent.source(), r.facet), poly)?);
            e.insert((cell, src));
        }
        let (cell, src) = cache[&key].clone();
        let idx = out.add_cell(cell);
        out.add_copies(idx, 1, s.copies()[r.copy].mirror);
        facet_sources.push(src);
    }
    let index: HashMap<FacetRef, usize> = sources.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let n = s.dim();
    let bad = |m: String| GluingError::BadPairing { pairing: "boundary".into(), reason: m };
    for (a, r) in sources.iter().enumerate() {
        let cell = s.cell_of(r.copy);
        let lat = cell.lattice();
        let ridges: Vec<usize> = lat.subfaces(lat.facet_face(r.facet), n - 2);
        for ridge in ridges {
            let start = FaceRef { copy: r.copy, face: ridge };
            let h = other_facet(s, start, r.facet);
            let w = walk(s, start, h, 4 * s.facet_refs().len());
            let &(end, exit) = w.visits.last().expect("nonempty");
            if w.closed || s.partner(FacetRef::new(end.copy, exit)).is_some() {
                return Err(bad(format!("ridge chain from {r} does not end on the boundary")));
            }
            let entry = other_facet(s, end, exit);
            let b = *index.get(&FacetRef::new(end.copy, exit)).ok_or_else(|| bad("chain end is not a boundary facet".into()))?;
            let ka = facet_sources[a].iter().position(|&x| x == h).ok_or_else(|| bad("ridge facet missing".into()))?;
            let kb = facet_sources[b].iter().position(|&x| x == entry).ok_or_else(|| bad("ridge facet missing".into()))?;
            if (a, ka) > (b, kb) {
                continue;
            }
            let pa = cell.polytope();
            let pb = s.cell_of(end.copy).polytope();
            let (uf, ue) = (pa.normal(r.facet), pb.normal(exit));
            let na = project_away(pa.normal(h), uf, &uf.norm_sq());
            let nb = project_away(pb.normal(entry), ue, &ue.norm_sq());
            let alpha = scale_between(uf, ue).ok_or_else(|| bad("normal scale outside the field".into()))?;
            let beta = scale_between(&na, &nb).ok_or_else(|| bad("normal scale outside the field".into()))?;
            let points: Vec<LorentzVector> =
                lat.face(ridge).vertices.iter().map(|&v| cell.analysis().vertices()[v].point.clone()).collect();
            let chosen = independent_rows(&points, n - 1);
            let mut basis: Vec<LorentzVector> = chosen.iter().map(|&i| points[i].clone()).collect();
            let mut images: Vec<LorentzVector> = basis.iter().map(|p| w.map.apply(p)).collect();
            basis.push(uf.clone());
            images.push(ue.scale(&alpha));
            basis.push(na);
            images.push(nb.scale(&beta));
            let rows = |vs: &[LorentzVector]| vs.iter().map(|v| v.coords().to_vec()).collect::<Vec<_>>();
            let x = solve(rows(&basis), rows(&images)).ok_or_else(|| bad("degenerate ridge".into()))?;
            let d = x.len();
            let m: Vec<Vec<FieldElement>> = (0..d).map(|i| (0..d).map(|j| x[j][i].clone()).collect()).collect();
            let map = LorentzMap::from_rows(m)?;
            let (ra, rb) = (FacetRef::new(a, ka), FacetRef::new(b, kb));
            if out.partner(ra).is_some() || out.partner(rb).is_some() {
                continue;
            }
            let expr = rows_expr(&map);
            out.add_pairing(ra, rb, map, expr)?;
        }
    }
    let comps = components(&out);
    Ok(BoundaryComplex { schema: out, sources, components: comps })
}
