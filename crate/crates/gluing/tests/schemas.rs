use std::collections::{BTreeMap, HashSet};

use gluing::*;
use lorentz::{LorentzMap, LorentzVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use petgraph::unionfind::UnionFind;
use symmetry::ks::KsFrame;
use symmetry::Symmetry;

fn opts() -> VerifyOptions {
    VerifyOptions { samples: 100_000, ..Default::default() }
}

fn schema(name: &str) -> GluingSchema {
    builtin_schema(name).unwrap()
}

fn ks_frame(s: &GluingSchema) -> KsFrame {
    let cell = s.cell_of(0);
    KsFrame::new(cell.analysis(), cell.group()).unwrap()
}

fn facet_set(facets: &[usize]) -> HashSet<FacetRef> {
    facets.iter().map(|&f| FacetRef::new(0, f)).collect()
}

// Union-find over (copy, facet) pairs straight from the pairing records.
fn facet_classes(s: &GluingSchema) -> Vec<Vec<FacetRef>> {
    let refs = s.facet_refs();
    let index: BTreeMap<FacetRef, usize> = refs.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut uf = UnionFind::<usize>::new(refs.len());
    for p in s.pairings() {
        uf.union(index[&p.source], index[&p.target]);
    }
    let mut classes: BTreeMap<usize, Vec<FacetRef>> = BTreeMap::new();
    for (i, &r) in refs.iter().enumerate() {
        classes.entry(uf.find(i)).or_default().push(r);
    }
    classes.into_values().collect()
}

struct Oracle<'a> {
    s: &'a GluingSchema,
}

impl Oracle<'_> {
    fn points(&self, copy: usize, vertices: &[usize]) -> Vec<LorentzVector> {
        let a = self.s.cell_of(copy).analysis();
        vertices.iter().map(|&v| a.vertices()[v].point.clone()).collect()
    }

    fn locate(&self, copy: usize, pts: &[LorentzVector]) -> Vec<usize> {
        let a = self.s.cell_of(copy).analysis();
        let mut out: Vec<usize> = pts
            .iter()
            .map(|p| {
                let key = p.canonical_projective();
                a.vertices().iter().position(|v| v.point.canonical_projective() == key).expect("vertex image")
            })
            .collect();
        out.sort();
        out
    }

    fn facets_containing(&self, copy: usize, vertices: &[usize]) -> Vec<usize> {
        let p = self.s.cell_of(copy).polytope();
        let pts = self.points(copy, vertices);
        (0..p.facet_count()).filter(|&f| pts.iter().all(|x| x.dot(p.normal(f)).is_zero())).collect()
    }

    fn partner(&self, r: FacetRef) -> Option<(FacetRef, LorentzMap)> {
        self.s.pairings().iter().find_map(|p| {
            if p.source == r {
                Some((p.target, p.map.clone()))
            } else if p.target == r {
                Some((p.source, p.map.inverse()))
            } else {
                None
            }
        })
    }

    fn angle_multiple(&self, copy: usize, f: usize, g: usize) -> f64 {
        let p = self.s.cell_of(copy).polytope();
        let (u, v) = (p.normal(f).to_f64(), p.normal(g).to_f64());
        let dot = |x: &[f64], y: &[f64]| -x[0] * y[0] + x[1..].iter().zip(&y[1..]).map(|(a, b)| a * b).sum::<f64>();
        let c = -dot(&u, &v) / (dot(&u, &u) * dot(&v, &v)).sqrt();
        c.acos() / std::f64::consts::PI
    }

    /// Walks from a ridge through `exit` until it closes or hits an unpaired
    /// facet; returns the visited ridges, the angle sum in units of π, the
    /// composite map, and whether it closed.
    fn walk(&self, copy: usize, ridge: Vec<usize>, exit: usize) -> (usize, f64, LorentzMap, bool) {
        let dim = self.s.cell_of(copy).polytope().ambient_dim();
        let start = (copy, ridge.clone(), exit);
        let (mut c, mut r, mut out) = start.clone();
        let mut map = LorentzMap::identity(dim);
        let mut steps = 0;
        let mut sum = 0.0;
        loop {
            let fs = self.facets_containing(c, &r);
            assert_eq!(fs.len(), 2);
            steps += 1;
            sum += self.angle_multiple(c, fs[0], fs[1]);
            let Some((t, m)) = self.partner(FacetRef::new(c, out)) else { return (steps, sum, map, false) };
            let image: Vec<LorentzVector> = self.points(c, &r).iter().map(|x| m.apply(x)).collect();
            map = m.compose(&map);
            c = t.copy;
            r = self.locate(c, &image);
            let fs = self.facets_containing(c, &r);
            out = if fs[0] == t.facet { fs[1] } else { fs[0] };
            if (c, r.clone(), out) == start {
                return (steps, sum, map, true);
            }
            assert!(steps < 100);
        }
    }

    /// Cycle data for every non-ideal ridge class, keyed by sorted labels.
    fn ridge_classes(&self) -> BTreeMap<(String, usize, bool), usize> {
        let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::new();
        let mut out = BTreeMap::new();
        let n = self.s.dim();
        for copy in 0..self.s.copy_count() {
            let cell = self.s.cell_of(copy);
            let lat = cell.lattice();
            for id in 0..lat.len() {
                let face = lat.face(id);
                if face.dim != n - 2 || seen.contains(&(copy, face.vertices.clone())) {
                    continue;
                }
                let fs = self.facets_containing(copy, &face.vertices);
                let (len, sum, map, closed) = self.walk(copy, face.vertices.clone(), fs[0]);
                let (len, sum) = if closed {
                    assert!(map.agrees_on(&LorentzMap::identity(map.dim()), &self.points(copy, &face.vertices)));
                    (len, sum)
                } else {
                    let (back, back_sum, _, _) = self.walk(copy, face.vertices.clone(), fs[1]);
                    let first = self.angle_multiple(copy, fs[0], fs[1]);
                    (len + back - 1, sum + back_sum - first)
                };
                for m in self.class_members(copy, &face.vertices) {
                    seen.insert(m);
                }
                let target = if closed { 2.0 } else { 1.0 };
                assert!((sum - target).abs() < 1e-9, "angle sum {sum}");
                *out.entry((cell.face_label(id), len, closed)).or_insert(0) += 1;
            }
        }
        out
    }

    fn class_members(&self, copy: usize, ridge: &[usize]) -> Vec<(usize, Vec<usize>)> {
        let mut out = vec![(copy, ridge.to_vec())];
        let mut i = 0;
        while i < out.len() {
            let (c, r) = out[i].clone();
            for f in self.facets_containing(c, &r) {
                if let Some((t, m)) = self.partner(FacetRef::new(c, f)) {
                    let image: Vec<LorentzVector> = self.points(c, &r).iter().map(|x| m.apply(x)).collect();
                    let next = (t.copy, self.locate(t.copy, &image));
                    if !out.contains(&next) {
                        out.push(next);
                    }
                }
            }
            i += 1;
        }
        out
    }
}

fn reported_ridges(s: &GluingSchema) -> BTreeMap<(String, usize, bool), usize> {
    let q = QuotientComplex::new(s);
    let mut out = BTreeMap::new();
    for r in ridge_check(&q) {
        assert!(r.passed, "ridge orbit {} [{}]", r.orbit, r.label);
        let rep = r.visits[0];
        let label = s.cell_of(rep.copy).face_label(rep.face);
        *out.entry((label, r.length, r.kind == RidgeKind::Interior)).or_insert(0) += 1;
    }
    out
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn builtin_names_resolve() {
    for name in builtin_schema_names() {
        assert_eq!(schema(name).name(), *name);
    }
    assert!(matches!(builtin_schema("nope"), Err(GluingError::UnknownSchema(_))));
}

#[test]
fn manifold_m_pairings() {
    let s = schema("manifold_M");
    let cell = s.cell_of(0);
    assert_eq!(cell.facet_count(), 24);
    assert_eq!(s.pairings().len(), 9);
    let mut paired: BTreeMap<String, usize> = BTreeMap::new();
    for p in s.pairings() {
        for r in [p.source, p.target] {
            *paired.entry(s.facet_label(r)).or_insert(0) += 1;
        }
    }
    assert_eq!(paired, BTreeMap::from([("N".into(), 8), ("P".into(), 8), ("T".into(), 2)]));
    let unpaired: Vec<String> = s.unpaired_facets().iter().map(|&r| s.facet_label(r)).collect();
    assert_eq!(unpaired, vec!["E"; 6]);
}

#[test]
fn pairing_maps_are_symmetries() {
    for name in builtin_schema_names() {
        let s = schema(name);
        for p in s.pairings() {
            let cell = s.cell_of(p.source.copy);
            let sym = Symmetry::from_map(cell.polytope(), p.map.clone()).unwrap();
            assert!(cell.group().contains(&sym), "{name}: {}", p.expr);
        }
    }
}

#[test]
fn facet_orbits_match_union_find() {
    for name in builtin_schema_names() {
        let s = schema(name);
        let q = QuotientComplex::new(&s);
        let n = s.dim();
        let classes = facet_classes(&s);
        assert_eq!(q.orbits_of_dim(n - 1).len(), classes.len(), "{name}");
        for class in &classes {
            let orbits: HashSet<usize> = class.iter().map(|&r| q.facet_orbit(r)).collect();
            assert_eq!(orbits.len(), 1, "{name}");
        }
    }
    let m = schema("manifold_M");
    let mut by_label: BTreeMap<String, usize> = BTreeMap::new();
    for class in facet_classes(&m) {
        *by_label.entry(m.facet_label(class[0])).or_insert(0) += 1;
    }
    assert_eq!(by_label, BTreeMap::from([("E".into(), 6), ("N".into(), 4), ("P".into(), 4), ("T".into(), 1)]));
}

#[test]
fn figure_eight_orbits() {
    let s = schema("figure_eight");
    let q = QuotientComplex::new(&s);
    assert_eq!(q.counts(), vec![1, 2, 4, 2]);
    let mut labels: Vec<String> = q.orbits_of_dim(2).iter().map(|&i| q.orbit(i).label.clone()).collect();
    labels.sort();
    assert_eq!(labels, vec!["F", "J", "P", "R"]);
    assert_eq!(q.ideal_orbits().len(), 1);
}

#[test]
fn figure_eight_edges_have_valence_six() {
    let s = schema("figure_eight");
    let q = QuotientComplex::new(&s);
    let ridges = ridge_check(&q);
    assert_eq!(ridges.len(), 2);
    for r in &ridges {
        assert_eq!(r.kind, RidgeKind::Interior);
        assert_eq!(r.length, 6);
        assert!(r.trivial_return);
        assert_eq!(r.angle_sum, Some(rational(2, 1)));
    }
    assert_eq!(reported_ridges(&s), Oracle { s: &s }.ridge_classes());
}

#[test]
fn manifold_m_ridges_match_walk_oracle() {
    let s = schema("manifold_M");
    let oracle = Oracle { s: &s }.ridge_classes();
    assert_eq!(reported_ridges(&s), oracle);
    let expected = BTreeMap::from([
        (("E N".to_string(), 2, false), 12),
        (("E P".to_string(), 2, false), 12),
        (("N P".to_string(), 4, true), 8),
        (("P P".to_string(), 6, true), 2),
        (("P T".to_string(), 4, true), 2),
    ]);
    assert_eq!(oracle, expected);
}

#[test]
fn manifold_m_ridge_report() {
    let s = schema("manifold_M");
    let q = QuotientComplex::new(&s);
    for r in ridge_check(&q) {
        let want = match r.kind {
            RidgeKind::Interior => rational(2, 1),
            RidgeKind::Boundary => rational(1, 1),
        };
        assert_eq!(r.angle_sum, Some(want));
        if r.label == "N P" {
            assert_eq!(r.length, 4);
            assert!(r.trivial_return);
        }
    }
}

#[test]
fn manifold_m_verifies() {
    let s = schema("manifold_M");
    let r = verify_manifold(&s, &opts());
    assert!(r.passed, "{r}");
    assert_eq!(r.euler.chi, 1);
    assert_eq!(r.euler.volume, Some(rational(4, 3)));
    assert_eq!(r.euler.consistent(), Some(true));
    assert!(!r.orientability.orientable);
    assert_eq!(r.boundary.cells, 6);
    assert_eq!(r.boundary.components, 1);
    assert_eq!(r.boundary.euler, Some(0));
    assert_eq!(r.spheres.len(), 2);
    for sp in &r.spheres {
        assert_eq!(sp.members, 12);
        assert_eq!(sp.verdict, SphereVerdict::Hemisphere);
        assert!((sp.volume.value - std::f64::consts::PI.powi(2)).abs() < 0.05);
    }
    for c in &r.cusps {
        assert!(c.complete);
    }
}

#[test]
fn positive_stage_has_quarter_spheres_with_corners() {
    let m = schema("manifold_M");
    let pos = restricted(&m, |_, p| p.expr.starts_with("phi")).unwrap();
    let r = verify_manifold(&pos, &opts());
    assert_eq!(r.spheres.len(), 4);
    for sp in &r.spheres {
        assert_eq!(sp.members, 6);
        assert!(sp.corners);
        assert_eq!(sp.verdict, SphereVerdict::NotClosedLink);
        assert!((sp.volume.value - std::f64::consts::PI.powi(2) / 2.0).abs() < 0.05);
    }
    assert!(!r.passed);
}

#[test]
fn single_copy_has_unglued_links() {
    let mut s = GluingSchema::new("single");
    let c = s.add_cell(Cell::builtin("kerckhoff_storm").unwrap());
    s.add_copies(c, 1, false);
    let r = verify_manifold(&s, &opts());
    assert_eq!(r.spheres.len(), 24);
    for sp in &r.spheres {
        assert_eq!(sp.members, 1);
        assert_eq!(sp.verdict, SphereVerdict::NotClosedLink);
    }
    assert!(!r.passed);
}

#[test]
fn cusp_slices_of_m() {
    let m = schema("manifold_M");
    let frame = ks_frame(&m);
    let tetra = facet_set(&[frame.upper_tetrahedral, frame.lower_tetrahedral]);
    let negative: Vec<usize> = (0..24).filter(|&f| m.cell_of(0).polytope().label(f) == Some("N")).collect();
    let negative = facet_set(&negative);
    let pos = restricted(&m, |_, p| p.expr.starts_with("phi")).unwrap();

    let slice = |s: &GluingSchema, facets: &HashSet<FacetRef>| -> Vec<Surface> {
        let q = QuotientComplex::new(s);
        q.ideal_orbits()
            .into_iter()
            .filter_map(|o| {
                let l = LinkComplex::new(s, &q.orbit(o).members, Some(facets));
                (l.top_dim() == Some(2)).then(|| l.surface()).flatten()
            })
            .filter(|sf| sf.connected)
            .collect()
    };

    let torus = slice(&pos, &tetra);
    assert_eq!(torus.len(), 1);
    assert_eq!((torus[0].name(), torus[0].polygons), ("torus", 8));
    assert!(torus[0].polygon_sizes.iter().all(|&k| k == 3));

    let klein = slice(&m, &tetra);
    assert_eq!(klein.len(), 1);
    assert_eq!((klein[0].name(), klein[0].polygons), ("Klein bottle", 4));

    let small = slice(&m, &negative);
    assert_eq!(small.len(), 1);
    assert_eq!((small[0].name(), small[0].polygons), ("torus", 4));
}

#[test]
fn g_and_i_act_freely_on_the_cusp_torus() {
    let m = schema("manifold_M");
    let frame = ks_frame(&m);
    let cell = m.cell_of(0);
    let pos = restricted(&m, |_, p| p.expr.starts_with("phi")).unwrap();
    let q = QuotientComplex::new(&pos);
    let tetra = facet_set(&[frame.upper_tetrahedral, frame.lower_tetrahedral]);
    let orbit = q
        .ideal_orbits()
        .into_iter()
        .find(|&o| LinkComplex::new(&pos, &q.orbit(o).members, Some(&tetra)).top_dim() == Some(2))
        .unwrap();
    let link = LinkComplex::new(&pos, &q.orbit(orbit).members, Some(&tetra));
    for name in ["g", "i"] {
        let sym = frame.pairing_symmetry(cell.group(), name).unwrap();
        let action = CopyAction::new(vec![(0, sym.map().clone())]);
        action.check(&pos).unwrap();
        assert_eq!(link.fixed_cells(action.flag_action(&pos)), Ok(vec![]), "{name}");
    }
    let a = frame.antipodal();
    assert!(CopyAction::new(vec![(0, a.map().clone())]).check(&pos).is_err());
}

#[test]
fn figure_eight_cusp_is_equilateral_torus() {
    let s = schema("figure_eight");
    let q = QuotientComplex::new(&s);
    let c = cusp_check(&q, q.ideal_orbits()[0]);
    assert!(c.passed && c.complete && c.scale_defects.is_empty());
    let sf = c.surface.unwrap();
    assert_eq!((sf.name(), sf.vertices, sf.edges, sf.polygons), ("torus", 4, 12, 8));
    let link = LinkComplex::new(&s, &q.orbit(q.ideal_orbits()[0]).members, None);
    let sides = link.section_side_lengths().unwrap();
    assert_eq!(sides.len(), 8);
    let first = sides[0][0].clone();
    assert!(sides.iter().flatten().all(|x| *x == first));
}

#[test]
fn figure_eight_and_gieseking_verify() {
    let f8 = verify_manifold(&schema("figure_eight"), &opts());
    assert!(f8.passed, "{f8}");
    assert!(f8.orientability.orientable);
    assert_eq!(f8.euler.chi, 0);
    let g = verify_manifold(&schema("gieseking"), &opts());
    assert!(g.passed, "{g}");
    assert!(!g.orientability.orientable);
    assert_eq!(g.orbit_counts, vec![1, 1, 2, 1]);
    let sf = g.cusps[0].surface.as_ref().unwrap();
    assert_eq!((sf.name(), sf.polygons), ("Klein bottle", 4));
}

#[test]
fn figure_eight_swap_is_free() {
    let s = schema("figure_eight");
    let g = figure_eight_swap(&s).unwrap();
    g.check(&s).unwrap();
    let q = QuotientComplex::new(&s);
    for o in q.orbits() {
        for &m in &o.members {
            assert_ne!(g.face_image(&s, m), Some(m));
        }
    }
    let link = LinkComplex::new(&s, &q.orbit(q.ideal_orbits()[0]).members, None);
    assert_eq!(link.fixed_cells(g.flag_action(&s)), Ok(vec![]));
}

// Exhaustive sign assignment: orientable iff some choice of copy signs
// satisfies σ′·d = −σ on every pairing.
fn orientable_by_search(s: &GluingSchema) -> bool {
    let n = s.copy_count();
    (0..1u32 << n).any(|mask| {
        let sign = |c: usize| if mask >> c & 1 == 1 { -1 } else { 1 };
        s.pairings().iter().all(|p| sign(p.target.copy) * i32::from(p.map.det_sign()) == -sign(p.source.copy))
    })
}

#[test]
fn orientability_matches_search() {
    for name in builtin_schema_names() {
        let s = schema(name);
        assert_eq!(orientability(&s).orientable, orientable_by_search(&s), "{name}");
    }
    assert!(!orientability(&schema("manifold_M")).orientable);
    assert!(orientability(&schema("figure_eight")).orientable);
}

#[test]
fn double_of_m() {
    let m = schema("manifold_M");
    let n = double(&m).unwrap();
    assert!(n.is_closed());
    assert_eq!(n.copy_count(), 2);
    assert!(n.copies()[1].mirror && !n.copies()[0].mirror);
    let r = verify_manifold(&n, &opts());
    assert!(r.passed, "{r}");
    assert_eq!(r.euler.chi, 2);
    assert_eq!(r.euler.volume, Some(rational(8, 3)));
    assert!(!r.orientability.orientable);
    let chi_m = QuotientComplex::new(&m).euler_characteristic();
    let chi_dm = QuotientComplex::new(&boundary_complex(&m).unwrap().schema).euler_characteristic();
    assert_eq!(r.euler.chi, 2 * chi_m - chi_dm);
    assert!(matches!(double(&n), Err(GluingError::NoBoundary)));
    assert_eq!(boundary_complex(&n).unwrap().schema.copy_count(), 0);
}

#[test]
fn boundary_of_m() {
    let b = boundary_complex(&schema("manifold_M")).unwrap();
    assert_eq!(b.schema.copy_count(), 6);
    assert_eq!(b.components.len(), 1);
    assert!(b.schema.is_closed());
    assert_eq!(QuotientComplex::new(&b.schema).euler_characteristic(), 0);
}

#[test]
fn cut_boundary_is_figure_eight() {
    let cut = schema("cut_N_split");
    let r = verify_manifold(&cut, &opts());
    assert!(r.passed, "{r}");
    assert_eq!(r.euler.chi, 2);
    assert_eq!(r.unpaired, 2);
    let b = boundary_complex(&cut).unwrap();
    assert_eq!(b.components.len(), 1);
    assert!(b.sources.iter().all(|&f| cut.facet_label(f) == "T"));
    assert!(combinatorial_isomorphism(&b.schema, &schema("figure_eight")).is_some());
    let cover = orientation_cover(&cut).unwrap();
    assert!(orientability(&cover).orientable);
    assert_eq!(boundary_complex(&cover).unwrap().components.len(), 2);
}

#[test]
fn isomorphism_examples() {
    let f8 = schema("figure_eight");
    let id = combinatorial_isomorphism(&f8, &f8).unwrap();
    assert_eq!(id.copies.len(), 2);
    assert!(combinatorial_isomorphism(&f8, &schema("gieseking")).is_none());
}

#[test]
fn reports_are_deterministic() {
    let s = schema("gieseking");
    let a = verify_manifold(&s, &opts()).to_string();
    let b = verify_manifold(&schema("gieseking"), &opts()).to_string();
    assert_eq!(a, b);
    for key in ["schema:", "orbits:", "ridges:", "links:", "chi:", "orientability:", "boundary:"] {
        assert!(a.contains(key));
    }
}
