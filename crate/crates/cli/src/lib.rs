//! Front end for the polytope, gluing and invariant libraries.
//!
//! Every command produces a [`Report`]; `main` only parses arguments,
//! renders the report and maps the outcome to an exit status.

pub mod report;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use arithinv::{commensurability_verdict, parse_form, ramification_set, Convention, QuadraticFormQ};
use exactfield::FieldElement;
use gluing::volume::{VolumeMethod, DEFAULT_SAMPLES, DEFAULT_SEED};
use gluing::{
    boundary_complex, builtin_schema, builtin_schema_names, combinatorial_isomorphism, orientability,
    orientation_cover, parse_schema, resolve_cell, to_text, verify_manifold, CheckReport, GluingSchema,
    QuotientComplex, RidgeKind, VerifyOptions,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use polytope::{builtin_names, builtin_polytope, label_multiset, parse_polytope, Analysis, AngleClass, Polytope};
use symmetry::automorphism_group;

pub use report::{Node, Report};

/// Malformed or missing input; maps to exit status 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Bits used for decimal approximations of exact values.
    pub precision: u32,
    pub seed: u64,
    pub samples: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { precision: 64, seed: DEFAULT_SEED, samples: DEFAULT_SAMPLES }
    }
}

impl Options {
    fn verify(&self) -> VerifyOptions {
        VerifyOptions { samples: self.samples, seed: self.seed, ..VerifyOptions::default() }
    }
}

pub type Run = Result<(Report, Outcome), InputError>;

struct Source {
    name: String,
    bytes: Vec<u8>,
    path: Option<PathBuf>,
}

impl Source {
    fn load(reference: &str) -> Result<Source, InputError> {
        if reference.starts_with("builtin:") {
            return Ok(Source { name: reference.to_string(), bytes: reference.as_bytes().to_vec(), path: None });
        }
        let path = PathBuf::from(reference);
        let bytes = std::fs::read(&path).map_err(|e| InputError(format!("{reference}: {e}")))?;
        Ok(Source { name: reference.to_string(), bytes, path: Some(path) })
    }

    fn builtin(&self) -> Option<&str> {
        self.name.strip_prefix("builtin:")
    }

    fn text(&self) -> Result<&str, InputError> {
        std::str::from_utf8(&self.bytes).map_err(|_| InputError(format!("{}: not valid UTF-8", self.name)))
    }

    fn error(&self, e: impl fmt::Display) -> InputError {
        InputError(format!("{}: {e}", self.name))
    }

    fn input(&self) -> (String, Vec<u8>) {
        (self.name.clone(), self.bytes.clone())
    }
}

fn load_polytope(src: &Source) -> Result<Polytope, InputError> {
    match src.builtin() {
        Some(name) => builtin_polytope(name).map_err(|e| src.error(e)),
        None => {
            let stem = src.path.as_deref().and_then(Path::file_stem).and_then(|s| s.to_str()).unwrap_or("polytope");
            parse_polytope(stem, src.text()?).map_err(|e| src.error(e))
        }
    }
}

fn load_schema(src: &Source) -> Result<GluingSchema, InputError> {
    match src.builtin() {
        Some(name) => builtin_schema(name).map_err(|e| src.error(e)),
        None => {
            let base = src.path.as_deref().and_then(Path::parent).map(Path::to_path_buf);
            parse_schema(src.text()?, |r| resolve_cell(r, base.as_deref())).map_err(|e| src.error(e))
        }
    }
}

fn load_form(src: &Source) -> Result<QuadraticFormQ, InputError> {
    if src.builtin().is_some() {
        return Err(src.error("forms are read from files"));
    }
    parse_form(src.text()?).map_err(|e| src.error(e))
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

/// `q·π^k` in the exact grammar, with `pi` as a formal symbol.
pub fn pi_multiple(q: &BigRational, k: u32) -> String {
    let pi = if k == 1 { "pi".to_string() } else { format!("pi^{k}") };
    if q.is_zero() {
        "0".into()
    } else if q.is_integer() && q.numer() == &BigInt::from(1) {
        pi
    } else if q.is_integer() {
        format!("{q}*{pi}")
    } else {
        format!("({q})*{pi}")
    }
}

/// Decimal expansion of `q` truncated to `digits` fractional digits.
pub fn decimal(q: &BigRational, digits: usize) -> String {
    let neg = q.is_negative();
    let a = q.abs();
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (a.numer() * &scale) / a.denom();
    let int = &scaled / &scale;
    let frac = (&scaled % &scale).to_string();
    let frac = format!("{}{frac}", "0".repeat(digits - frac.len()));
    format!("{}{int}.{frac}", if neg { "-" } else { "" })
}

/// Certified decimal for an exact value, tagged with the bit precision used.
pub fn approx(x: &FieldElement, precision: u32) -> String {
    let iv = x.approx(precision);
    let digits = ((precision as f64 * std::f64::consts::LOG10_2).floor() as usize).clamp(1, 60);
    let mid = (&iv.lo + &iv.hi) / BigInt::from(2);
    let width = &iv.hi - &iv.lo;
    let shown = (digits as i64 - 1).max(1) as usize;
    let err = width.numer().bits() as i64 - width.denom().bits() as i64;
    format!("{} [{precision} bits, width 2^{err}]", decimal(&mid, shown))
}

fn counts_node(key: &str, items: impl IntoIterator<Item = (String, usize)>) -> Node {
    let mut n = Node::branch(key);
    for (k, c) in items {
        n.add(k, c);
    }
    n
}

fn tally<K: Ord>(keys: impl IntoIterator<Item = K>) -> BTreeMap<K, usize> {
    let mut m = BTreeMap::new();
    for k in keys {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}

fn angle_key(a: &AngleClass) -> (u8, String) {
    match a {
        AngleClass::Submultiple(m) => (0, format!("{m:08}")),
        other => (1, other.to_string()),
    }
}

/// Combinatorial and metric summary of a polytope.
pub fn polytope_section(a: &Analysis, opts: &Options) -> Result<Node, InputError> {
    let err = |e: polytope::PolytopeError| InputError(e.to_string());
    let p = a.polytope();
    let n = a.dim();
    let mut root = Node::branch("polytope");
    root.add("name", p.name());
    root.add("dim", n);
    root.add("facets", p.facet_count());
    let fv = a.f_vector();
    root.add("f-vector", format!("({})", join(&fv)));
    let mut v = Node::branch("vertices");
    v.add("ideal", a.ideal_vertex_count());
    v.add("finite", a.finite_vertex_count());
    root.push(v);
    let labels: Vec<String> = (0..p.facet_count()).map(|i| p.display_label(i)).collect();
    root.push(counts_node("facet labels", label_multiset(labels.iter().map(String::as_str))));
    if let Ok(classes) = polytope::ks::classify_facets(a) {
        let t = tally(classes.iter().map(|c| (c.kind, c.side)));
        let items = t.into_iter().map(|((k, s), c)| (polytope::ks::FacetClass { kind: k, side: s }.to_string(), c));
        root.push(counts_node("facet classes", items));
    }

    let mut pairs: BTreeMap<(String, (u8, String)), (AngleClass, usize)> = BTreeMap::new();
    let mut general = Vec::new();
    for i in 0..p.facet_count() {
        for j in i + 1..p.facet_count() {
            if a.ridge(i, j).is_none() {
                continue;
            }
            let class = p.dihedral_angle(i, j).map_err(err)?;
            let (x, y) = if labels[i] <= labels[j] { (&labels[i], &labels[j]) } else { (&labels[j], &labels[i]) };
            let e = pairs.entry((format!("{x}-{y}"), angle_key(&class))).or_insert((class.clone(), 0));
            e.1 += 1;
            if let AngleClass::General(c) = &class {
                general.push((format!("{x}-{y}"), c.clone()));
            }
        }
    }
    let mut angles = Node::branch("dihedral angles");
    let mut totals: BTreeMap<(u8, String), (String, usize)> = BTreeMap::new();
    for ((_, key), (class, c)) in &pairs {
        totals.entry(key.clone()).or_insert((class.to_string(), 0)).1 += c;
    }
    for (name, c) in totals.values() {
        angles.add(name.clone(), c);
    }
    let mut by_pair = Node::branch("by label pair");
    for ((pair, _), (class, c)) in &pairs {
        by_pair.add(pair.clone(), format!("{class} x{c}"));
    }
    angles.push(by_pair);
    if !general.is_empty() {
        let mut g = Node::branch("cosines");
        for (pair, c) in general {
            let shown = match c.value() {
                Some(v) => approx(&v, opts.precision),
                None => format!("{}sqrt({})", if c.negative { "-" } else { "" }, approx(&c.square, opts.precision)),
            };
            g.add(pair, shown);
        }
        angles.push(g);
    }
    root.push(angles);
    let (coxeter, _) = a.coxeter_check().map_err(err)?;
    root.add("coxeter", yes_no(coxeter));

    let mut links: BTreeMap<String, usize> = BTreeMap::new();
    for vtx in 0..a.vertices().len() {
        let l = a.vertex_link(vtx).map_err(err)?;
        let mut ls: Vec<&str> = l.labels();
        ls.sort();
        let geometry = match l.geometry {
            polytope::LinkGeometry::Euclidean => "euclidean",
            polytope::LinkGeometry::Spherical => "spherical",
        };
        *links.entry(format!("{geometry} {} [{}]", l.shape, ls.concat())).or_insert(0) += 1;
    }
    root.push(counts_node("vertex links", links));
    if let Ok(chi) = a.orbifold_euler_characteristic() {
        root.add("orbifold euler characteristic", chi);
    }
    if let Ok(Some(v)) = a.volume_coefficient() {
        root.add("volume", pi_multiple(&v, (n / 2) as u32));
    }
    Ok(root)
}

pub fn analyze(reference: &str, opts: &Options) -> Run {
    let src = Source::load(reference)?;
    let p = load_polytope(&src)?;
    let a = Analysis::new(p).map_err(|e| src.error(e))?;
    let mut r = Report::new("analyze", &[src.input()]);
    r.section(polytope_section(&a, opts)?);
    Ok((r, Outcome::Pass))
}

pub fn symmetries(reference: &str, _opts: &Options) -> Run {
    let src = Source::load(reference)?;
    let p = load_polytope(&src)?;
    let a = Analysis::new(p).map_err(|e| src.error(e))?;
    let g = automorphism_group(&a);
    let mut r = Report::new("symmetries", &[src.input()]);
    let mut s = Node::branch("symmetry");
    s.add("polytope", a.polytope().name());
    s.add("order", g.order());
    s.add("orientation preserving", g.elements().iter().filter(|e| e.det_sign() > 0).count());
    s.add("closed under composition", yes_no(g.is_closed()));
    let mut fo: Vec<usize> = g.facet_orbits().iter().map(Vec::len).collect();
    fo.sort_unstable_by(|a, b| b.cmp(a));
    s.add("facet orbit sizes", join(fo));
    let mut vo: Vec<usize> = g.vertex_orbits(&a).iter().map(Vec::len).collect();
    vo.sort_unstable_by(|a, b| b.cmp(a));
    s.add("vertex orbit sizes", join(vo));
    let mut ok = true;
    if let Ok(frame) = symmetry::ks::structure_check_p(&g, &a) {
        let mut c = Node::branch("structure");
        for check in &frame.checks {
            let detail = if check.detail.is_empty() { String::new() } else { format!(" ({})", check.detail) };
            c.add(check.name.clone(), format!("{}{detail}", pass_fail(check.passed)));
        }
        ok = frame.passed();
        c.add("verdict", pass_fail(ok));
        s.push(c);
    }
    r.section(s);
    Ok((r, Outcome::from_bool(ok)))
}

fn schema_node(s: &GluingSchema) -> Node {
    let mut n = Node::branch("schema");
    n.add("name", s.name());
    n.add("dim", s.dim());
    n.add("cells", join(s.cells().iter().map(|c| c.source().to_string())));
    n.add("copies", s.copy_count());
    n.add("pairings", s.pairings().len());
    n.add("unpaired facets", s.unpaired_facets().len());
    n
}

fn boundary_components_node(s: &GluingSchema) -> Result<Node, InputError> {
    let mut n = Node::branch("component cells");
    if s.is_closed() {
        return Ok(n);
    }
    let b = boundary_complex(s).map_err(|e| InputError(e.to_string()))?;
    for (i, comp) in b.components.iter().enumerate() {
        let cells = comp.iter().map(|&c| {
            let r = b.sources[c];
            format!("{}:{}", r, s.facet_label(r))
        });
        n.add(format!("component {i}"), join(cells));
    }
    Ok(n)
}

/// The verification tree for a manifold check.
pub fn verification_section(s: &GluingSchema, c: &CheckReport, precision: u32) -> Result<Node, InputError> {
    let mut v = Node::branch("verification");
    let mut orbits = Node::branch("orbits");
    for (k, n) in c.orbit_counts.iter().enumerate() {
        orbits.add(format!("dim {k}"), n);
    }
    orbits.add("ideal vertex orbits", c.ideal_vertex_orbits);
    orbits.add("finite vertex orbits", c.finite_vertex_orbits);
    v.push(orbits);

    let mut ridges = Node::branch("ridges");
    let mut kinds: BTreeMap<(String, String, usize), (usize, bool, bool)> = BTreeMap::new();
    for r in &c.ridges {
        let e = kinds.entry((r.label.clone(), r.kind.to_string(), r.length)).or_insert((0, true, true));
        e.0 += 1;
        e.1 &= r.passed;
        e.2 &= r.kind == RidgeKind::Boundary || r.trivial_return;
    }
    for ((label, kind, len), (count, passed, trivial)) in &kinds {
        let sum = c
            .ridges
            .iter()
            .find(|r| &r.label == label && &r.kind.to_string() == kind && r.length == *len)
            .and_then(|r| r.angle_sum.clone());
        let sum = sum.map(|q| pi_multiple(&q, 1)).unwrap_or_else(|| "inexact".into());
        let ret = if kind == "interior" { format!(", return {}", if *trivial { "trivial" } else { "NONTRIVIAL" }) } else { String::new() };
        ridges.add(
            format!("{label} {kind} length {len}"),
            format!("{count} orbits, angle sum {sum}{ret}, {}", pass_fail(*passed)),
        );
    }
    v.push(ridges);

    if !c.edge_links.is_empty() {
        let mut e = Node::branch("edge links");
        let t = tally(c.edge_links.iter().map(|l| l.surface.as_ref().map_or("none", |s| s.name())));
        for (name, count) in t {
            e.add(name, count);
        }
        e.add("verdict", pass_fail(c.edge_links.iter().all(|l| l.passed)));
        v.push(e);
    }

    let mut cusps = Node::branch("cusps");
    for k in &c.cusps {
        let mut n = Node::branch(format!("orbit {}", k.orbit));
        n.add("members", k.members);
        n.add("vertex links", join(k.shapes.iter().map(|(s, m)| format!("{s} x{m}"))));
        if let Some(sf) = &k.surface {
            n.add("section", sf);
        }
        n.add("counts", format!("({})", join(&k.counts)));
        n.add("boundary", yes_no(k.boundary));
        n.add("complete", yes_no(k.complete));
        if !k.scale_defects.is_empty() {
            n.add("scale defects", join(k.scale_defects.iter()));
        }
        n.add("verdict", pass_fail(k.passed));
        cusps.push(n);
    }
    v.push(cusps);

    let mut spheres = Node::branch("finite vertex links");
    for k in &c.spheres {
        let mut n = Node::branch(format!("orbit {}", k.orbit));
        n.add("members", k.members);
        n.add("counts", format!("({})", join(&k.counts)));
        n.add("boundary", yes_no(k.boundary));
        let method = match k.volume.method {
            VolumeMethod::Quadrature { order } => format!("gauss-legendre order {order}"),
            VolumeMethod::MonteCarlo { samples } => format!("monte-carlo {samples} samples"),
        };
        let digits = ((precision as f64 * std::f64::consts::LOG10_2) as usize).clamp(1, 15);
        n.add("volume", format!("{:.*} +- {:.1e} [f64, {method}]", digits, k.volume.value, k.volume.error));
        n.add("link", k.verdict);
        n.add("verdict", pass_fail(k.passed));
        spheres.push(n);
    }
    v.push(spheres);

    let mut e = Node::branch("euler characteristic");
    e.add("chi", c.euler.chi);
    e.add("non-ideal orbit counts", format!("({})", join(&c.euler.f_vector)));
    if let Some(vol) = &c.euler.volume {
        e.add("volume", pi_multiple(vol, 2));
    }
    if let Some(vol) = &c.euler.copies_volume {
        e.add("volume of copies", pi_multiple(vol, 2));
    }
    v.push(e);

    let mut o = Node::branch("orientability");
    o.add("orientable", yes_no(c.orientability.orientable));
    if let Some(p) = c.orientability.conflict {
        let p = &s.pairings()[p];
        o.add("conflicting pairing", format!("{} -> {} by {}", p.source, p.target, p.expr));
    }
    v.push(o);

    let mut b = Node::branch("boundary");
    b.add("cells", c.boundary.cells);
    b.add("components", c.boundary.components);
    if let Some(chi) = c.boundary.euler {
        b.add("chi", chi);
    }
    if let Some(err) = &c.boundary.error {
        b.add("error", err);
    }
    b.push(boundary_components_node(s)?);
    v.push(b);
    v.add("verdict", pass_fail(c.passed));
    Ok(v)
}

pub fn glue(reference: &str, check: bool, opts: &Options) -> Run {
    let src = Source::load(reference)?;
    let s = load_schema(&src)?;
    let mut r = Report::new(if check { "glue --check" } else { "glue" }, &[src.input()]);
    r.section(schema_node(&s));
    if !check {
        let q = QuotientComplex::new(&s);
        let mut n = Node::branch("quotient");
        n.add("orbit counts", format!("({})", join(q.counts())));
        n.add("chi", q.euler_characteristic());
        n.add("orientable", yes_no(orientability(&s).orientable));
        r.section(n);
        return Ok((r, Outcome::Pass));
    }
    let c = verify_manifold(&s, &opts.verify());
    r.section(verification_section(&s, &c, opts.precision)?);
    Ok((r, Outcome::from_bool(c.passed)))
}

fn derived_section(key: &str, s: &GluingSchema) -> Result<Node, InputError> {
    let q = QuotientComplex::new(s);
    let mut n = Node::branch(key);
    n.add("name", s.name());
    n.add("copies", s.copy_count());
    n.add("pairings", s.pairings().len());
    n.add("closed", yes_no(s.is_closed()));
    n.add("orbit counts", format!("({})", join(q.counts())));
    n.add("chi", q.euler_characteristic());
    n.add("orientable", yes_no(orientability(s).orientable));
    if !s.is_closed() {
        let mut b = Node::branch("boundary");
        b.add("cells", s.unpaired_facets().len());
        b.push(boundary_components_node(s)?);
        n.push(b);
    }
    n.add("text", to_text(s));
    Ok(n)
}

pub fn boundary(reference: &str, isomorphic_to: Option<&str>, _opts: &Options) -> Run {
    let src = Source::load(reference)?;
    let s = load_schema(&src)?;
    let other = isomorphic_to.map(Source::load).transpose()?;
    let mut inputs = vec![src.input()];
    inputs.extend(other.iter().map(Source::input));
    let mut r = Report::new("boundary", &inputs);
    r.section(schema_node(&s));
    if s.is_closed() {
        let mut n = Node::branch("boundary");
        n.add("cells", 0);
        r.section(n);
        return Ok((r, Outcome::from_bool(other.is_none())));
    }
    let b = boundary_complex(&s).map_err(|e| src.error(e))?;
    let mut n = derived_section("boundary", &b.schema)?;
    let mut comps = Node::branch("component cells");
    for (i, comp) in b.components.iter().enumerate() {
        let cells = comp.iter().map(|&c| format!("{}:{}", b.sources[c], s.facet_label(b.sources[c])));
        comps.add(format!("component {i}"), join(cells));
    }
    n.children.insert(0, comps);
    r.section(n);
    let mut outcome = Outcome::Pass;
    if let Some(o) = other {
        let target = load_schema(&o)?;
        let iso = combinatorial_isomorphism(&b.schema, &target);
        let mut m = Node::branch("comparison");
        m.add("target", target.name());
        m.add("isomorphic", yes_no(iso.is_some()));
        if let Some(iso) = iso {
            m.add("copy map", join(iso.copies.iter().enumerate().map(|(i, j)| format!("{i}->{j}"))));
        }
        outcome = Outcome::from_bool(m.value_at("isomorphic") == Some("yes"));
        r.section(m);
    }
    Ok((r, outcome))
}

pub fn double(reference: &str, _opts: &Options) -> Run {
    let src = Source::load(reference)?;
    let s = load_schema(&src)?;
    let d = gluing::double(&s).map_err(|e| src.error(e))?;
    let mut r = Report::new("double", &[src.input()]);
    r.section(schema_node(&s));
    r.section(derived_section("double", &d)?);
    Ok((r, Outcome::Pass))
}

pub fn cover(reference: &str, _opts: &Options) -> Run {
    let src = Source::load(reference)?;
    let s = load_schema(&src)?;
    let c = orientation_cover(&s).map_err(|e| src.error(e))?;
    let mut r = Report::new("cover", &[src.input()]);
    r.section(schema_node(&s));
    r.section(derived_section("orientation cover", &c)?);
    Ok((r, Outcome::Pass))
}

pub fn invariants(references: &[String], convention: Convention, _opts: &Options) -> Run {
    let sources: Vec<Source> = references.iter().map(|r| Source::load(r)).collect::<Result<_, _>>()?;
    let forms: Vec<QuadraticFormQ> = sources.iter().map(load_form).collect::<Result<_, _>>()?;
    let inputs: Vec<_> = sources.iter().map(Source::input).collect();
    let mut r = Report::new("invariants", &inputs);
    let mut sec = Node::branch("invariants");
    sec.add("convention", convention);
    let mut sets = Vec::new();
    for (src, f) in sources.iter().zip(&forms) {
        let mut n = Node::branch(src.name.clone());
        n.add("diagonal", f);
        let (pos, neg) = f.signature();
        n.add("signature", format!("({pos}, {neg})"));
        n.add("discriminant", f.discriminant());
        let set = ramification_set(f, convention).map_err(|e| src.error(e))?;
        n.add("ramification", &set);
        sets.push(set);
        sec.push(n);
    }
    let mut pairs = Node::branch("verdicts");
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            let v = commensurability_verdict(&forms[i], &forms[j], convention).map_err(|e| InputError(e.to_string()))?;
            pairs.add(format!("{} ~ {}", sources[i].name, sources[j].name), v);
        }
    }
    sec.push(pairs);
    r.section(sec);
    Ok((r, Outcome::Pass))
}

pub fn builtin_list() -> Run {
    let mut r = Report::new("builtin --list", &[]);
    let mut p = Node::branch("polytopes");
    for n in builtin_names() {
        p.add(*n, format!("builtin:{n}"));
    }
    let mut s = Node::branch("schemas");
    for n in builtin_schema_names() {
        s.add(*n, format!("builtin:{n}"));
    }
    r.section(p);
    r.section(s);
    Ok((r, Outcome::Pass))
}
