//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! The process exits 0 even when a criterion fails so that the workspace
//! test run stays usable; set `ACCEPTANCE_STRICT=1` to turn failures into
//! a nonzero exit status.

use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use arithinv::{hilbert_symbol, Convention, Place};
use exactfield::FieldElement;
use gluing::{
    builtin_schema, cusp_check, figure_eight_swap, restricted, CopyAction, FacetRef, GluingSchema, LinkComplex,
    QuotientComplex,
};
use hypglue::{Options, Outcome, Report};
use num_bigint::BigInt;
use num_rational::BigRational;
use polytope::{builtin_polytope, Analysis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symmetry::automorphism_group;
use symmetry::ks::KsFrame;

type Outcome13 = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn report(run: hypglue::Run) -> Result<(Report, Outcome), String> {
    run.map_err(|e| e.to_string())
}

fn value<'r>(r: &'r Report, path: &str) -> Result<&'r str, String> {
    r.value(path).ok_or_else(|| format!("report has no '{path}'"))
}

fn expect(r: &Report, path: &str, want: &str) -> Result<(), String> {
    let got = value(r, path)?;
    ensure(got == want, format!("{path}: expected {want}, got {got}"))
}

fn opts() -> Options {
    Options::default()
}

fn analyze(name: &str) -> Result<Report, String> {
    Ok(report(hypglue::analyze(&format!("builtin:{name}"), &opts()))?.0)
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, format!("took {:.1}s, limit {:.0}s", t.as_secs_f64(), limit.as_secs_f64()))
}

fn c1() -> Outcome13 {
    let start = Instant::now();
    let r = analyze("kerckhoff_storm")?;
    expect(&r, "polytope/facets", "24")?;
    expect(&r, "polytope/f-vector", "(44, 120, 100, 24)")?;
    expect(&r, "polytope/vertices/ideal", "20")?;
    within(Duration::from_secs(60), start)?;
    Ok(format!("f-vector {}, ideal 20", value(&r, "polytope/f-vector")?))
}

fn c2() -> Outcome13 {
    let r = analyze("kerckhoff_storm")?;
    let want =
        [("P upper", 4), ("P lower", 4), ("N upper", 4), ("N lower", 4), ("E", 6), ("T upper", 1), ("T lower", 1)];
    let node = r.get("polytope/facet classes").ok_or("no facet classes")?;
    ensure(node.children.len() == want.len(), format!("{} classes", node.children.len()))?;
    for (k, n) in want {
        expect(&r, &format!("polytope/facet classes/{k}"), &n.to_string())?;
    }
    Ok("P 4+4, N 4+4, E 6, T 1+1".into())
}

fn c3() -> Outcome13 {
    let r = analyze("kerckhoff_storm")?;
    let angles = r.get("polytope/dihedral angles").ok_or("no angles")?;
    let kinds: Vec<&str> = angles.children.iter().filter(|c| c.value.is_some()).map(|c| c.key.as_str()).collect();
    ensure(kinds == ["pi/2", "pi/3"], format!("angle kinds {kinds:?}"))?;
    for pair in &angles.get("by label pair").ok_or("no pairs")?.children {
        let v = pair.value.as_deref().unwrap_or("");
        ensure(v.starts_with("pi/3") == (pair.key == "P-P"), format!("{}: {v}", pair.key))?;
    }
    let count = |k: &str| angles.get(k).and_then(|c| c.value.clone()).unwrap_or_default();
    Ok(format!("pi/2 x{}, pi/3 x{} (all on P-P)", count("pi/2"), count("pi/3")))
}

fn c4() -> Outcome13 {
    let r = analyze("kerckhoff_storm")?;
    let links = r.get("polytope/vertex links").ok_or("no links")?;
    let want = [
        ("euclidean parallelepiped [EENNPP]", "12"),
        ("euclidean triangular prism [NPPPT]", "8"),
        ("spherical tetrahedron [ENPP]", "24"),
    ];
    ensure(links.children.len() == 3, format!("{} link types", links.children.len()))?;
    for (k, n) in want {
        ensure(links.get(k).and_then(|c| c.value.as_deref()) == Some(n), format!("{k} != {n}"))?;
    }
    Ok("12 EEPPNN parallelepipeds, 8 TNPPP prisms, 24 PPNE tetrahedra".into())
}

fn c5() -> Outcome13 {
    let start = Instant::now();
    let (p, outcome) = report(hypglue::symmetries("builtin:kerckhoff_storm", &opts()))?;
    expect(&p, "symmetry/order", "48")?;
    expect(&p, "symmetry/orientation preserving", "24")?;
    for check in ["a central", "side stabilizer acts as S4 on upper positive facets", "r = a m l m n l m"] {
        let v = value(&p, &format!("symmetry/structure/{check}"))?;
        ensure(v.starts_with("pass"), format!("{check}: {v}"))?;
    }
    ensure(outcome == Outcome::Pass, "structure verdict")?;
    let (r, _) = report(hypglue::symmetries("builtin:rectified_5_cell", &opts()))?;
    expect(&r, "symmetry/order", "120")?;
    within(Duration::from_secs(60), start)?;
    Ok("|Sym(P)| = 48, |Sym+(P)| = 24, |Sym(R)| = 120, relation holds".into())
}

fn c6() -> Outcome13 {
    let p = analyze("kerckhoff_storm")?;
    expect(&p, "polytope/orbifold euler characteristic", "1")?;
    expect(&p, "polytope/volume", "(4/3)*pi^2")?;
    let r = analyze("rectified_5_cell")?;
    expect(&r, "polytope/orbifold euler characteristic", "1/6")?;
    expect(&r, "polytope/volume", "(2/9)*pi^2")?;
    Ok("P: chi 1, vol 4pi^2/3; R: chi 1/6, vol 2pi^2/9".into())
}

fn c7() -> Outcome13 {
    let a = Analysis::new(builtin_polytope("rectified_5_cell").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let p = a.polytope();
    ensure(p.facet_count() == 10, "facet count")?;
    let mut shapes = BTreeMap::new();
    for i in 0..10 {
        let (f, _) = a.facet_polytope(i).map_err(|e| e.to_string())?;
        let fv = Analysis::new(f).map_err(|e| e.to_string())?.f_vector();
        let shape = match fv.as_slice() {
            [6, 12, 8] => "octahedron",
            [4, 6, 4] => "tetrahedron",
            _ => return Err(format!("facet {i} has f-vector {fv:?}")),
        };
        ensure(p.label(i) == Some(&shape[..1].to_uppercase()), format!("facet {i} label"))?;
        *shapes.entry(shape).or_insert(0) += 1;
    }
    ensure(shapes.values().all(|&n| n == 5), format!("{shapes:?}"))?;
    for v in 0..a.vertices().len() {
        let link = a.vertex_link(v).map_err(|e| e.to_string())?;
        let mut ls = link.labels();
        ls.sort();
        ensure(ls == ["O", "O", "O", "T", "T"], format!("vertex {v}: {ls:?}"))?;
    }
    let r = analyze("rectified_5_cell")?;
    expect(&r, "polytope/dihedral angles/by label pair/O-O", "pi/3 x10")?;
    expect(&r, "polytope/dihedral angles/by label pair/O-T", "pi/2 x20")?;
    ensure(r.get("polytope/dihedral angles/by label pair").map(|n| n.children.len()) == Some(2), "extra pairs")?;
    Ok("5 octahedra, 5 tetrahedra, vertices on OOOTT, O-O pi/3, O-T pi/2".into())
}

fn c8() -> Outcome13 {
    let start = Instant::now();
    let (r, outcome) = report(hypglue::glue("builtin:manifold_M", true, &opts()))?;
    ensure(outcome == Outcome::Pass, "verification failed")?;
    let ridges = r.get("verification/ridges").ok_or("no ridges")?;
    let np: Vec<_> = ridges.children.iter().filter(|c| c.key.starts_with("N P")).collect();
    ensure(np.len() == 1 && np[0].key == "N P interior length 4", format!("{np:?}"))?;
    let v = np[0].value.as_deref().unwrap_or("");
    ensure(v.contains("return trivial") && v.ends_with("pass"), v.to_string())?;
    expect(&r, "verification/euler characteristic/chi", "1")?;
    expect(&r, "verification/orientability/orientable", "no")?;
    expect(&r, "verification/boundary/cells", "6")?;
    expect(&r, "verification/boundary/chi", "0")?;
    let comps = r.get("verification/boundary/component cells").ok_or("no components")?;
    let cells: Vec<&str> = comps.children.iter().flat_map(|c| c.value.as_deref().unwrap_or("").split(", ")).collect();
    ensure(cells.len() == 6 && cells.iter().all(|c| c.ends_with(":E")), format!("{cells:?}"))?;
    let spheres = r.get("verification/finite vertex links").ok_or("no finite links")?;
    let pi2 = std::f64::consts::PI.powi(2);
    let mut worst: f64 = 0.0;
    for s in &spheres.children {
        let vol: f64 = s
            .value_at("volume")
            .and_then(|v| v.split_whitespace().next())
            .and_then(|v| v.parse().ok())
            .ok_or("volume")?;
        worst = worst.max((vol - pi2).abs());
    }
    ensure(!spheres.children.is_empty() && worst < 0.05, format!("hemisphere deviation {worst}"))?;
    within(Duration::from_secs(600), start)?;
    Ok(format!("pass, chi 1, non-orientable, 6 E boundary cells, hemisphere deviation {worst:.1e}"))
}

fn c9() -> Outcome13 {
    let (r, outcome) = report(hypglue::glue("builtin:double_N", true, &opts()))?;
    ensure(outcome == Outcome::Pass, "verification failed")?;
    expect(&r, "schema/unpaired facets", "0")?;
    expect(&r, "verification/euler characteristic/chi", "2")?;
    expect(&r, "verification/euler characteristic/volume", "(8/3)*pi^2")?;
    expect(&r, "verification/orientability/orientable", "no")?;
    Ok("closed, chi 2, vol 8pi^2/3, non-orientable".into())
}

fn c10() -> Outcome13 {
    let (g, _) = report(hypglue::glue("builtin:cut_N_split", false, &opts()))?;
    expect(&g, "quotient/chi", "2")?;
    let (b, outcome) = report(hypglue::boundary("builtin:cut_N_split", Some("builtin:figure_eight"), &opts()))?;
    expect(&b, "comparison/isomorphic", "yes")?;
    ensure(outcome == Outcome::Pass, "comparison failed")?;
    let (c, _) = report(hypglue::cover("builtin:cut_N_split", &opts()))?;
    let comps = c.get("orientation cover/boundary/component cells").ok_or("no cover boundary")?;
    ensure(comps.children.len() == 2, format!("{} components", comps.children.len()))?;
    Ok("chi 2, boundary ~ figure-eight, cover has 2 boundary components".into())
}

fn schema(name: &str) -> Result<GluingSchema, String> {
    builtin_schema(name).map_err(|e| e.to_string())
}

fn c11() -> Outcome13 {
    let (r, outcome) = report(hypglue::glue("builtin:figure_eight", true, &opts()))?;
    ensure(outcome == Outcome::Pass, "figure-eight verification failed")?;
    let ridges = r.get("verification/ridges").ok_or("no ridges")?;
    ensure(ridges.children.len() == 2, "edge classes")?;
    for e in &ridges.children {
        let v = e.value.as_deref().unwrap_or("");
        ensure(e.key.ends_with("length 6") && v.starts_with("1 orbits") && v.contains("return trivial"), v.to_string())?;
    }
    let s = schema("figure_eight")?;
    let q = QuotientComplex::new(&s);
    let cusp = q.ideal_orbits()[0];
    let c = cusp_check(&q, cusp);
    let sf = c.surface.clone().ok_or("no cusp surface")?;
    ensure(sf.name() == "torus" && sf.polygons == 8 && sf.polygon_sizes.iter().all(|&k| k == 3), sf.to_string())?;
    let sides = LinkComplex::new(&s, &q.orbit(cusp).members, None).section_side_lengths().ok_or("no section")?;
    let first = sides[0][0].clone();
    ensure(sides.iter().flatten().all(|x| *x == first), "triangles not equilateral")?;
    let swap = figure_eight_swap(&s).map_err(|e| e.to_string())?;
    ensure(q.orbits().iter().flat_map(|o| &o.members).all(|&m| swap.face_image(&s, m) != Some(m)), "swap fixes a face")?;

    let (gk, outcome) = report(hypglue::glue("builtin:gieseking", true, &opts()))?;
    ensure(outcome == Outcome::Pass, "gieseking verification failed")?;
    let section = gk.get("verification/cusps").and_then(|c| c.children.first()).and_then(|c| c.value_at("section"));
    ensure(section.is_some_and(|s| s.starts_with("Klein bottle") && s.contains("F=4")), format!("{section:?}"))?;

    let m = schema("manifold_M")?;
    let cell = m.cell_of(0);
    let frame = KsFrame::new(cell.analysis(), cell.group()).map_err(|e| e.to_string())?;
    let pos = restricted(&m, |_, p| p.expr.starts_with("phi")).map_err(|e| e.to_string())?;
    let qp = QuotientComplex::new(&pos);
    let tetra: HashSet<FacetRef> =
        [frame.upper_tetrahedral, frame.lower_tetrahedral].iter().map(|&f| FacetRef::new(0, f)).collect();
    let torus = qp
        .ideal_orbits()
        .into_iter()
        .map(|o| LinkComplex::new(&pos, &qp.orbit(o).members, Some(&tetra)))
        .find(|l| l.top_dim() == Some(2))
        .ok_or("no cusp torus")?;
    let t = torus.surface().ok_or("cusp torus is not a surface")?;
    ensure(t.name() == "torus" && t.polygons == 8, t.to_string())?;
    let i = frame.pairing_symmetry(cell.group(), "i").map_err(|e| e.to_string())?;
    let action = CopyAction::new(vec![(0, i.map().clone())]);
    action.check(&pos).map_err(|e| e.to_string())?;
    ensure(torus.fixed_cells(action.flag_action(&pos)) == Ok(vec![]), "i has fixed points")?;
    Ok("valence 6 trivial, equilateral torus of 8, Gieseking Klein bottle of 4, i free".into())
}

fn form_path(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn c12() -> Outcome13 {
    let start = Instant::now();
    let files: Vec<String> = ["form_24cell.txt", "form_P.txt", "form_R.txt"].iter().map(|f| form_path(f)).collect();
    let (r, _) = report(hypglue::invariants(&files, Convention::Hasse, &opts()))?;
    let sets: Vec<&str> = files
        .iter()
        .map(|f| r.at(&["invariants", f, "ramification"]).and_then(|n| n.value.as_deref()).ok_or("no set"))
        .collect::<Result<_, _>>()?;
    let verdicts = r.get("invariants/verdicts").ok_or("no verdicts")?;
    let all_incommensurable =
        verdicts.children.len() == 3 && verdicts.children.iter().all(|v| v.value.as_deref() == Some("incommensurable"));
    let want = ["{}", "{2, 5}", "{3, inf}"];
    let detail = format!("sets {} (want {}), verdicts incommensurable: {all_incommensurable}", sets.join(" "), want.join(" "));
    within(Duration::from_secs(1), start)?;
    ensure(sets == want && all_incommensurable, detail.clone())?;
    Ok(detail)
}

fn random_element(rng: &mut ChaCha8Rng) -> FieldElement {
    let mut coeffs: [BigRational; 8] = Default::default();
    for c in coeffs.iter_mut() {
        if rng.gen_bool(0.5) {
            *c = BigRational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=5)));
        }
    }
    FieldElement::from_coeffs(coeffs)
}

fn field_axioms(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for k in 0..10_000 {
        let (a, b, c) = (random_element(rng), random_element(rng), random_element(rng));
        ensure(&(&a * &b) * &c == &a * &(&b * &c), format!("associativity, case {k}"))?;
        ensure(&a * &b == &b * &a && &a + &b == &b + &a, format!("commutativity, case {k}"))?;
        ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), format!("distributivity, case {k}"))?;
        ensure((&(&a - &b) + &b - &a).is_zero(), format!("additive inverse, case {k}"))?;
        if !a.is_zero() {
            let inv = a.inverse().map_err(|e| e.to_string())?;
            ensure((&a * &inv).is_one(), format!("multiplicative inverse, case {k}"))?;
        }
    }
    Ok(())
}

fn lorentz_preservation() -> Result<usize, String> {
    let mut checked = 0;
    for (name, order) in [("kerckhoff_storm", 48), ("rectified_5_cell", 120)] {
        let a = Analysis::new(builtin_polytope(name).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let g = automorphism_group(&a);
        ensure(g.order() == order, format!("{name}: order {}", g.order()))?;
        let normals = a.polytope().normals();
        let dim = normals[0].dim();
        let mut probes: Vec<lorentz::LorentzVector> = (0..dim).map(|i| lorentz::LorentzVector::basis(dim, i)).collect();
        probes.extend(normals.iter().cloned());
        for s in g.elements() {
            for u in &probes {
                let mu = s.apply(u);
                for v in &probes {
                    ensure(mu.dot(&s.apply(v)) == u.dot(v), format!("{name}: product not preserved"))?;
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn squarefree(mut n: i64) -> i64 {
    let sign = n.signum();
    n = n.abs();
    let mut out = 1;
    let mut d = 2;
    while d * d <= n {
        while n % (d * d) == 0 {
            n /= d * d;
        }
        if n % d == 0 {
            out *= d;
            n /= d;
        }
        d += 1;
    }
    sign * out * n
}

// Primitive solutions of a·x² + b·y² ≡ z² modulo p³ (2⁵ for p = 2) with
// square-free a, b lift to p-adic zeros.
fn local_oracle(a: i64, b: i64, p: i64) -> i8 {
    let (a, b) = (squarefree(a), squarefree(b));
    let m = if p == 2 { 32 } else { p * p * p };
    let f = |x: i64, y: i64, z: i64| (a * x * x + b * y * y - z * z).rem_euclid(m) == 0;
    let hit = (0..m).any(|y| (0..m).any(|z| f(1, y, z)))
        || (0..m).step_by(p as usize).any(|x| (0..m).any(|z| f(x, 1, z)))
        || (0..m).step_by(p as usize).any(|x| (0..m).step_by(p as usize).any(|y| f(x, y, 1)));
    if hit {
        1
    } else {
        -1
    }
}

fn prime_divisors(n: u64) -> Vec<u64> {
    let mut n = n;
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn hilbert_suite(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let q = |n: i64| BigRational::from_integer(n.into());
    for k in 0..1_000 {
        let (a, b) = loop {
            let a = rng.gen_range(-200i64..=200);
            let b = rng.gen_range(-200i64..=200);
            if a != 0 && b != 0 {
                break (a, b);
            }
        };
        let mut places: Vec<Place> = prime_divisors((2 * a * b).unsigned_abs()).into_iter().map(Place::Prime).collect();
        places.push(Place::Infinity);
        let mut product = 1i8;
        for &pl in &places {
            product *= hilbert_symbol(&q(a), &q(b), pl).map_err(|e| e.to_string())?;
        }
        ensure(product == 1, format!("product formula fails for ({a}, {b}), case {k}"))?;
        for p in [2u64, 3, 5] {
            let got = hilbert_symbol(&q(a), &q(b), Place::Prime(p)).map_err(|e| e.to_string())?;
            ensure(got == local_oracle(a, b, p as i64), format!("({a}, {b})_{p} disagrees with the oracle"))?;
        }
    }
    Ok(())
}

fn determinism() -> Result<(), String> {
    let runs = |threads: usize| -> Result<Vec<String>, String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        pool.install(|| {
            let mut out = Vec::new();
            out.push(report(hypglue::glue("builtin:manifold_M", true, &opts()))?.0.to_text());
            out.push(report(hypglue::analyze("builtin:kerckhoff_storm", &opts()))?.0.to_json_like());
            out.push(report(hypglue::cover("builtin:cut_N_split", &opts()))?.0.to_text());
            Ok(out)
        })
    };
    let one = runs(1)?;
    ensure(one == runs(1)?, "repeated single-thread runs differ")?;
    ensure(one == runs(4)?, "reports depend on the thread count")?;
    Ok(())
}

fn c13() -> Outcome13 {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    field_axioms(&mut rng)?;
    let n = lorentz_preservation()?;
    hilbert_suite(&mut rng)?;
    determinism()?;
    Ok(format!("10^4 field cases, {n} symmetries preserve the product, 10^3 symbol pairs, reports stable"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome13); 13] = [
        ("f-vector of P", c1),
        ("facet classes of P", c2),
        ("dihedral angles of P", c3),
        ("vertex links of P", c4),
        ("symmetry groups", c5),
        ("volumes via Gauss-Bonnet", c6),
        ("rectified 5-cell structure", c7),
        ("manifold certification of M", c8),
        ("double N", c9),
        ("cut and boundary", c10),
        ("figure-eight fixture", c11),
        ("ramification sets", c12),
        ("property suites", c13),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {title}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {title}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
