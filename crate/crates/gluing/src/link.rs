use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use exactfield::FieldElement;
use petgraph::unionfind::UnionFind;
use polytope::LinkGeometry;

use crate::quotient::{close, FaceRef, QuotientComplex, Step};
use crate::ridge::{RidgeCycle, RidgeKind};
use crate::volume::{sphere_area, vertex_link_volume, VolumeEstimate};
use crate::{FacetRef, GluingSchema, VerifyOptions};

/// A face of one copy together with a face of its link: `base ⊊ face`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    pub copy: usize,
    pub base: usize,
    pub face: usize,
}

#[derive(Clone, Debug)]
pub struct LinkCell {
    pub dim: usize,
    pub members: Vec<Flag>,
    pub steps: Vec<Option<Step>>,
}

impl LinkCell {
    pub fn rep(&self) -> Flag {
        self.members[0]
    }

    fn path(&self, i: usize) -> Vec<(usize, bool)> {
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

/// The glued link of a face orbit, as a cell complex.
pub struct LinkComplex<'a> {
    schema: &'a GluingSchema,
    base_dim: usize,
    cells: Vec<LinkCell>,
    index: HashMap<Flag, (usize, usize)>,
}

fn flag_neighbors(s: &GluingSchema, x: Flag) -> Vec<(Flag, usize, bool)> {
    let face = s.cell_of(x.copy).lattice().face(x.face);
    let mut out = Vec::new();
    for &f in &face.facets {
        for t in s.transitions(FacetRef::new(x.copy, f)) {
            let (Some(b), Some(g)) = (s.transport(t.pairing, t.forward, x.base), s.transport(t.pairing, t.forward, x.face))
            else {
                continue;
            };
            out.push((Flag { copy: t.target.copy, base: b, face: g }, t.pairing, t.forward));
        }
    }
    out
}

impl<'a> LinkComplex<'a> {
    /// The link of the orbit with the given members; with `facets`, only
    /// faces lying in one of those facets are kept.
    pub fn new(schema: &'a GluingSchema, members: &[FaceRef], facets: Option<&HashSet<FacetRef>>) -> LinkComplex<'a> {
        let base_dim = members.first().map_or(0, |m| schema.cell_of(m.copy).lattice().face(m.face).dim);
        let keep = |x: &Flag| -> bool {
            match facets {
                None => true,
                Some(set) => {
                    let face = schema.cell_of(x.copy).lattice().face(x.face);
                    face.facets.iter().any(|&f| set.contains(&FacetRef::new(x.copy, f)))
                }
            }
        };
        let mut items = Vec::new();
        for m in members {
            let cell = schema.cell_of(m.copy);
            let lat = cell.lattice();
            for k in base_dim + 1..=cell.dim() {
                for f in lat.superfaces(m.face, k) {
                    let x = Flag { copy: m.copy, base: m.face, face: f };
                    if keep(&x) {
                        items.push(x);
                    }
                }
            }
        }
        let dim_of = |x: &Flag| schema.cell_of(x.copy).lattice().face(x.face).dim - base_dim - 1;
        let mut cells: Vec<LinkCell> = close(
            &items,
            |x| flag_neighbors(schema, x).into_iter().filter(|(y, _, _)| keep(y)).collect(),
            |x| (dim_of(x), *x),
        )
        .into_iter()
        .map(|(members, steps)| LinkCell { dim: dim_of(&members[0]), members, steps })
        .collect();
        cells.sort_by_key(|c| (c.dim, c.rep()));
        let mut index = HashMap::new();
        for (i, c) in cells.iter().enumerate() {
            for (j, &m) in c.members.iter().enumerate() {
                index.insert(m, (i, j));
            }
        }
        LinkComplex { schema, base_dim, cells, index }
    }

    pub fn cells(&self) -> &[LinkCell] {
        &self.cells
    }

    pub fn cell_of(&self, x: Flag) -> Option<usize> {
        self.index.get(&x).map(|p| p.0)
    }

    pub fn top_dim(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn counts(&self) -> Vec<usize> {
        let top = self.top_dim().map_or(0, |d| d + 1);
        let mut v = vec![0; top];
        for c in &self.cells {
            v[c.dim] += 1;
        }
        v
    }

    pub fn euler(&self) -> i64 {
        self.cells.iter().map(|c| if c.dim % 2 == 0 { 1 } else { -1 }).sum()
    }

    fn sides(&self, x: Flag) -> Vec<usize> {
        let lat = self.schema.cell_of(x.copy).lattice();
        let d = lat.face(x.face).dim;
        lat.subfaces(x.face, d - 1).into_iter().filter(|&g| lat.contains(g, x.base)).collect()
    }

    /// Number of top-cell sides in each codimension-1 cell.
    pub fn incidences(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        let Some(top) = self.top_dim() else { return out };
        if top == 0 {
            return out;
        }
        for c in self.cells.iter().filter(|c| c.dim == top - 1) {
            out.insert(self.cell_of(c.rep()).expect("indexed"), 0);
        }
        for c in self.cells.iter().filter(|c| c.dim == top) {
            let x = c.rep();
            for g in self.sides(x) {
                if let Some(e) = self.cell_of(Flag { face: g, ..x }) {
                    *out.entry(e).or_insert(0) += 1;
                }
            }
        }
        out
    }

    pub fn has_boundary(&self) -> bool {
        self.incidences().values().any(|&k| k == 1)
    }

    /// Every codimension-1 cell borders one or two top cells.
    pub fn is_pseudomanifold(&self) -> bool {
        self.incidences().values().all(|&k| k == 1 || k == 2)
    }

    fn transport_to(&self, cell: usize, member: usize, mut face: usize) -> usize {
        for (k, fwd) in self.cells[cell].path(member) {
            face = self.schema.transport(k, fwd, face).expect("path stays in facets");
        }
        face
    }

    fn corners(&self, x: Flag) -> Vec<usize> {
        let lat = self.schema.cell_of(x.copy).lattice();
        lat.subfaces(x.face, self.base_dim + 1).into_iter().filter(|&h| lat.contains(h, x.base)).collect()
    }

    /// Combinatorial type of a two-dimensional link.
    pub fn surface(&self) -> Option<Surface> {
        if self.top_dim() != Some(2) {
            return None;
        }
        let polys: Vec<usize> = (0..self.cells.len()).filter(|&i| self.cells[i].dim == 2).collect();
        let mut incid: BTreeMap<usize, Vec<(usize, i8)>> = BTreeMap::new();
        let mut sizes = Vec::new();
        for (pi, &p) in polys.iter().enumerate() {
            let x = self.cells[p].rep();
            let lat = self.schema.cell_of(x.copy).lattice();
            let sides = self.sides(x);
            let ends = |g: usize| -> Vec<usize> { self.corners(x).into_iter().filter(|&h| lat.contains(g, h)).collect() };
            sizes.push(sides.len());
            let mut prev = sides[0];
            let e0 = ends(prev);
            if e0.len() != 2 {
                return None;
            }
            let (mut from, mut to) = (e0[0], e0[1]);
            for _ in 0..sides.len() {
                let flag = Flag { face: prev, ..x };
                let &(e, j) = self.index.get(&flag)?;
                let rep = self.cells[e].rep();
                let rep_ends = self.corners(rep);
                let a = self.transport_to(e, j, rep_ends[0]);
                let dir = if a == from && self.transport_to(e, j, rep_ends[1]) == to {
                    1
                } else if a == to {
                    -1
                } else {
                    return None;
                };
                incid.entry(e).or_default().push((pi, dir));
                let next = sides.iter().copied().find(|&g| g != prev && ends(g).contains(&to))?;
                let ne = ends(next);
                from = to;
                to = if ne[0] == from { ne[1] } else { ne[0] };
                prev = next;
            }
            if prev != sides[0] {
                return None;
            }
        }
        let vertices = self.cells.iter().filter(|c| c.dim == 0).count();
        let edges = self.cells.iter().filter(|c| c.dim == 1).count();
        let manifold = self.cells.iter().enumerate().filter(|(_, c)| c.dim == 1).all(|(i, _)| {
            let k = incid.get(&i).map_or(0, Vec::len);
            k == 1 || k == 2
        });
        let mut sign: Vec<i8> = vec![0; polys.len()];
        let mut orientable = true;
        let mut uf = UnionFind::new(polys.len());
        for list in incid.values() {
            if let [(p1, _), (p2, _)] = list[..] {
                uf.union(p1, p2);
            }
        }
        for start in 0..polys.len() {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut stack = vec![start];
            while let Some(p) = stack.pop() {
                for list in incid.values() {
                    let [(p1, d1), (p2, d2)] = list[..] else { continue };
                    let (a, da, b, db) = if p1 == p { (p1, d1, p2, d2) } else if p2 == p { (p2, d2, p1, d1) } else { continue };
                    let want = -sign[a] * da * db;
                    if sign[b] == 0 {
                        sign[b] = want;
                        stack.push(b);
                    } else if sign[b] != want {
                        orientable = false;
                    }
                }
            }
        }
        let connected = polys.is_empty() || (0..polys.len()).all(|p| uf.equiv(0, p));
        let mut vuf = UnionFind::new(self.cells.len());
        let mut touched = Vec::new();
        for (&e, list) in &incid {
            if list.len() != 1 {
                continue;
            }
            let rep = self.cells[e].rep();
            let ends: Vec<usize> = self.corners(rep).into_iter().filter_map(|h| self.cell_of(Flag { face: h, ..rep })).collect();
            if let [a, b] = ends[..] {
                vuf.union(a, b);
                touched.extend([a, b]);
            }
        }
        let roots: HashSet<usize> = touched.iter().map(|&v| vuf.find(v)).collect();
        Some(Surface {
            vertices,
            edges,
            polygons: polys.len(),
            polygon_sizes: sizes,
            euler: vertices as i64 - edges as i64 + polys.len() as i64,
            connected,
            manifold,
            orientable,
            boundary_components: roots.len(),
        })
    }

    /// Cells mapped to themselves by a cellular involution, or an error
    /// when the action is not defined on some cell or does not respect cells.
    pub fn fixed_cells(&self, action: impl Fn(Flag) -> Option<Flag>) -> Result<Vec<usize>, String> {
        let mut fixed = Vec::new();
        for (i, c) in self.cells.iter().enumerate() {
            let mut image = None;
            for &m in &c.members {
                let y = action(m).ok_or_else(|| format!("action undefined on {m:?}"))?;
                let j = self.cell_of(y).ok_or_else(|| format!("image {y:?} is not in the link"))?;
                if image.is_some_and(|k| k != j) {
                    return Err(format!("cell {i} is not carried to a single cell"));
                }
                image = Some(j);
            }
            if image == Some(i) {
                fixed.push(i);
            }
        }
        Ok(fixed)
    }

    /// Squared side lengths of the polygons of a horospherical section.
    pub fn section_side_lengths(&self) -> Option<Vec<Vec<FieldElement>>> {
        if self.base_dim != 0 || self.top_dim() != Some(2) {
            return None;
        }
        let mut out = Vec::new();
        for c in self.cells.iter().filter(|c| c.dim == 2) {
            let x = c.rep();
            let cell = self.schema.cell_of(x.copy);
            let v = cell.lattice().face(x.base).vertices[0];
            let section = cell.analysis().vertex_link(v).ok()?.cross_section?;
            let point = |e: usize| section.points.iter().find(|p| p.0 == e).map(|p| p.1.clone());
            let lat = cell.lattice();
            let mut lengths = Vec::new();
            for g in self.sides(x) {
                let ends: Vec<usize> = self.corners(x).into_iter().filter(|&h| lat.contains(g, h)).collect();
                let d = point(ends[0])?.sub(&point(ends[1])?);
                lengths.push(d.norm_sq());
            }
            out.push(lengths);
        }
        Some(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surface {
    pub vertices: usize,
    pub edges: usize,
    pub polygons: usize,
    pub polygon_sizes: Vec<usize>,
    pub euler: i64,
    pub connected: bool,
    /// Every edge borders one or two polygons.
    pub manifold: bool,
    pub orientable: bool,
    pub boundary_components: usize,
}

impl Surface {
    pub fn name(&self) -> &'static str {
        if !self.connected || !self.manifold {
            return "not a connected surface";
        }
        match (self.euler, self.boundary_components, self.orientable) {
            (2, 0, _) => "sphere",
            (1, 0, _) => "projective plane",
            (1, 1, _) => "disk",
            (0, 0, true) => "torus",
            (0, 0, false) => "Klein bottle",
            (0, 1, _) => "Moebius band",
            (0, 2, _) => "annulus",
            _ => "other surface",
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (V={}, E={}, F={}, chi={})", self.name(), self.vertices, self.edges, self.polygons, self.euler)
    }
}

/// The involution induced on flags by the given pairings.
pub fn pairing_action<'a>(schema: &'a GluingSchema, pairings: &'a [usize]) -> impl Fn(Flag) -> Option<Flag> + 'a {
    move |x: Flag| {
        let face = schema.cell_of(x.copy).lattice().face(x.face);
        for &f in &face.facets {
            if let Some(t) = schema.partner(FacetRef::new(x.copy, f)) {
                if pairings.contains(&t.pairing) {
                    return Some(Flag {
                        copy: t.target.copy,
                        base: schema.transport(t.pairing, t.forward, x.base)?,
                        face: schema.transport(t.pairing, t.forward, x.face)?,
                    });
                }
            }
        }
        None
    }
}

#[derive(Clone, Debug)]
pub struct CuspReport {
    pub orbit: usize,
    pub members: usize,
    /// Link shapes of the member vertices with multiplicities.
    pub shapes: Vec<(String, usize)>,
    pub counts: Vec<usize>,
    pub euler: i64,
    pub boundary: bool,
    pub manifold: bool,
    pub complete: bool,
    /// Scale factors different from 1 found around closed cycles.
    pub scale_defects: Vec<FieldElement>,
    pub self_identified: usize,
    pub surface: Option<Surface>,
    pub passed: bool,
}

/// Euclidean check of the link of an ideal vertex orbit.
pub fn cusp_check(q: &QuotientComplex<'_>, orbit: usize) -> CuspReport {
    let s = q.schema();
    let o = q.orbit(orbit);
    let link = LinkComplex::new(s, &o.members, None);
    let mut shapes: BTreeMap<String, usize> = BTreeMap::new();
    for m in &o.members {
        let cell = s.cell_of(m.copy);
        let v = cell.lattice().face(m.face).vertices[0];
        let name = match cell.analysis().vertex_link(v) {
            Ok(l) if l.geometry == LinkGeometry::Euclidean => l.shape.to_string(),
            Ok(_) => "spherical".to_string(),
            Err(e) => e.to_string(),
        };
        *shapes.entry(name).or_insert(0) += 1;
    }
    let point = |m: FaceRef| {
        let cell = s.cell_of(m.copy);
        cell.analysis().vertices()[cell.lattice().face(m.face).vertices[0]].point.clone()
    };
    let mut height: Vec<FieldElement> = vec![FieldElement::one(); o.len()];
    let mut scale_defects = Vec::new();
    let mut ratio_ok = true;
    let index: HashMap<FaceRef, usize> = o.members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let ratio = |from: FaceRef, to: FaceRef, k: usize, fwd: bool| -> Option<FieldElement> {
        point(to).positive_ratio(&s.transition(k, fwd).map.apply(&point(from)))
    };
    for i in 1..o.len() {
        let st = o.steps[i].expect("non-root has a step");
        match ratio(o.members[st.parent], o.members[i], st.pairing, st.forward) {
            Some(l) => height[i] = &height[st.parent] / &l,
            None => ratio_ok = false,
        }
    }
    let mut self_identified = 0;
    for (i, &m) in o.members.iter().enumerate() {
        let cell = s.cell_of(m.copy);
        for &f in &cell.lattice().face(m.face).facets {
            for t in s.transitions(FacetRef::new(m.copy, f)) {
                let Some(w) = s.transport(t.pairing, t.forward, m.face) else { continue };
                let image = FaceRef { copy: t.target.copy, face: w };
                if image == m && t.target.facet == f {
                    self_identified += 1;
                }
                let Some(&j) = index.get(&image) else {
                    ratio_ok = false;
                    continue;
                };
                match ratio(m, image, t.pairing, t.forward) {
                    Some(l) => {
                        let expected = &height[i] / &l;
                        if expected != height[j] {
                            scale_defects.push(&expected / &height[j]);
                        }
                    }
                    None => ratio_ok = false,
                }
            }
        }
    }
    scale_defects.sort();
    scale_defects.dedup();
    let euler = link.euler();
    let boundary = link.has_boundary();
    let manifold = link.is_pseudomanifold();
    let surface = link.surface();
    let complete = ratio_ok && scale_defects.is_empty();
    let link_dim = link.top_dim().unwrap_or(0);
    let euler_ok = if link_dim >= 2 { euler == 0 } else { euler == i64::from(boundary) };
    let surface_ok = surface.as_ref().is_none_or(|sf| sf.connected && sf.manifold);
    let passed = manifold && complete && self_identified == 0 && euler_ok && surface_ok;
    CuspReport {
        orbit,
        members: o.len(),
        shapes: shapes.into_iter().collect(),
        counts: link.counts(),
        euler,
        boundary,
        manifold,
        complete,
        scale_defects,
        self_identified,
        surface,
        passed,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SphereVerdict {
    Sphere,
    Hemisphere,
    /// Volume matches the sphere (or hemisphere) divided by `k`.
    Quotient { k: u32, boundary: bool },
    /// Some boundary ridge chain has angle sum other than π.
    NotClosedLink,
    Inconclusive,
}

impl fmt::Display for SphereVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphereVerdict::Sphere => f.write_str("sphere"),
            SphereVerdict::Hemisphere => f.write_str("hemisphere"),
            SphereVerdict::Quotient { k, boundary: false } => write!(f, "sphere/{k}"),
            SphereVerdict::Quotient { k, boundary: true } => write!(f, "hemisphere/{k}"),
            SphereVerdict::NotClosedLink => f.write_str("not a closed link"),
            SphereVerdict::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

/// Places the volume of a spherical link of dimension `m` on the spectrum
/// of sphere and hemisphere quotients.
pub fn classify_volume(volume: f64, m: usize, boundary: bool, tolerance: f64) -> SphereVerdict {
    let full = sphere_area(m + 1);
    let target = if boundary { full / 2.0 } else { full };
    if volume <= tolerance {
        return SphereVerdict::Inconclusive;
    }
    let k = (target / volume).round().max(1.0);
    if (volume - target / k).abs() > tolerance {
        return SphereVerdict::Inconclusive;
    }
    match (k as u32, boundary) {
        (1, false) => SphereVerdict::Sphere,
        (1, true) => SphereVerdict::Hemisphere,
        (k, boundary) => SphereVerdict::Quotient { k, boundary },
    }
}

#[derive(Clone, Debug)]
pub struct SphericalReport {
    pub orbit: usize,
    pub members: usize,
    pub counts: Vec<usize>,
    pub euler: i64,
    pub boundary: bool,
    pub manifold: bool,
    pub corners: bool,
    pub singular_ridges: usize,
    pub surface: Option<Surface>,
    pub volume: VolumeEstimate,
    pub verdict: SphereVerdict,
    pub passed: bool,
}

/// Spherical check of the link of a finite vertex orbit.
pub fn spherical_check(
    q: &QuotientComplex<'_>,
    orbit: usize,
    ridges: &[RidgeCycle],
    opts: &VerifyOptions,
) -> SphericalReport {
    let s = q.schema();
    let o = q.orbit(orbit);
    let n = s.dim();
    let link = LinkComplex::new(s, &o.members, None);
    let by_orbit: HashMap<usize, &RidgeCycle> = ridges.iter().map(|r| (r.orbit, r)).collect();
    let mut corners = false;
    let mut singular = HashSet::new();
    let mut volume = VolumeEstimate::zero();
    for m in &o.members {
        let cell = s.cell_of(m.copy);
        let lat = cell.lattice();
        if n >= 2 {
            for r in lat.superfaces(m.face, n - 2) {
                let Some(id) = q.orbit_of(FaceRef { copy: m.copy, face: r }) else { continue };
                match by_orbit.get(&id) {
                    Some(rc) if !rc.passed && rc.kind == RidgeKind::Boundary => corners = true,
                    Some(rc) if !rc.passed => {
                        singular.insert(id);
                    }
                    _ => {}
                }
            }
        }
        let v = lat.face(m.face).vertices[0];
        volume = volume.add(&vertex_link_volume(cell.analysis(), v, opts.samples, opts.seed));
    }
    let boundary = link.has_boundary();
    let manifold = link.is_pseudomanifold();
    let euler = link.euler();
    let surface = link.surface();
    let m = n.saturating_sub(1);
    let verdict = if corners {
        SphereVerdict::NotClosedLink
    } else {
        classify_volume(volume.value, m, boundary, opts.tolerance)
    };
    let euler_ok = if boundary { euler == 1 } else { euler == 1 + if m.is_multiple_of(2) { 1 } else { -1 } };
    let surface_ok = surface.as_ref().is_none_or(|sf| matches!(sf.name(), "sphere" | "disk"));
    let passed = manifold
        && !corners
        && singular.is_empty()
        && euler_ok
        && surface_ok
        && matches!(verdict, SphereVerdict::Sphere | SphereVerdict::Hemisphere);
    SphericalReport {
        orbit,
        members: o.len(),
        counts: link.counts(),
        euler,
        boundary,
        manifold,
        corners,
        singular_ridges: singular.len(),
        surface,
        volume,
        verdict,
        passed,
    }
}
