use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::link::{cusp_check, spherical_check, CuspReport, LinkComplex, SphericalReport, Surface};
use crate::ops::{boundary_complex, orientability, Orientability};
use crate::quotient::QuotientComplex;
use crate::ridge::{ridge_check, RidgeCycle};
use crate::volume::{DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::GluingSchema;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Monte-Carlo samples for links that are not simplices.
    pub samples: usize,
    pub seed: u64,
    /// Absolute tolerance when matching link volumes to the spectrum.
    pub tolerance: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { samples: DEFAULT_SAMPLES, seed: DEFAULT_SEED, tolerance: 0.05 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerReport {
    pub chi: i64,
    /// Non-ideal orbit counts per dimension.
    pub f_vector: Vec<usize>,
    /// In dimension 4, `(4/3)·χ`: the volume as a multiple of `π²`.
    pub volume: Option<BigRational>,
    /// Sum of the volumes of the copies as multiples of `π²`.
    pub copies_volume: Option<BigRational>,
}

impl EulerReport {
    pub fn consistent(&self) -> Option<bool> {
        Some(self.volume.as_ref()? == self.copies_volume.as_ref()?)
    }
}

pub fn euler_characteristic(q: &QuotientComplex<'_>) -> EulerReport {
    let s = q.schema();
    let n = s.dim();
    let f_vector: Vec<usize> =
        (0..=n).map(|k| q.orbits_of_dim(k).iter().filter(|&&i| !q.orbit(i).ideal).count()).collect();
    let chi = q.euler_characteristic();
    let (volume, copies_volume) = if n == 4 {
        let v = BigRational::new(BigInt::from(4 * chi), BigInt::from(3));
        let total = (0..s.copy_count())
            .map(|c| s.cell_of(c).analysis().volume_coefficient().ok().flatten())
            .sum::<Option<BigRational>>();
        (Some(v), total)
    } else {
        (None, None)
    };
    EulerReport { chi, f_vector, volume, copies_volume }
}

#[derive(Clone, Debug)]
pub struct EdgeLinkReport {
    pub orbit: usize,
    pub label: String,
    pub surface: Option<Surface>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundarySummary {
    pub cells: usize,
    pub components: usize,
    pub euler: Option<i64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub schema: String,
    pub dim: usize,
    pub copies: usize,
    pub pairings: usize,
    pub unpaired: usize,
    pub orbit_counts: Vec<usize>,
    pub ideal_vertex_orbits: usize,
    pub finite_vertex_orbits: usize,
    pub ridges: Vec<RidgeCycle>,
    pub edge_links: Vec<EdgeLinkReport>,
    pub cusps: Vec<CuspReport>,
    pub spheres: Vec<SphericalReport>,
    pub euler: EulerReport,
    pub orientability: Orientability,
    pub boundary: BoundarySummary,
    pub passed: bool,
}

fn boundary_summary(s: &GluingSchema) -> BoundarySummary {
    let cells = s.unpaired_facets().len();
    if cells == 0 {
        return BoundarySummary { cells, components: 0, euler: Some(0), error: None };
    }
    match boundary_complex(s) {
        Ok(b) => {
            let q = QuotientComplex::new(&b.schema);
            BoundarySummary { cells, components: b.components.len(), euler: Some(q.euler_characteristic()), error: None }
        }
        Err(e) => BoundarySummary { cells, components: 0, euler: None, error: Some(e.to_string()) },
    }
}

/// Runs every check on the quotient of `s`.
pub fn verify_manifold(s: &GluingSchema, opts: &VerifyOptions) -> CheckReport {
    let q = QuotientComplex::new(s);
    let n = s.dim();
    let ridges: Vec<RidgeCycle> = ridge_check(&q);
    let edge_links: Vec<EdgeLinkReport> = if n == 4 {
        q.orbits_of_dim(1)
            .par_iter()
            .map(|&i| {
                let o = q.orbit(i);
                let surface = LinkComplex::new(s, &o.members, None).surface();
                let passed = surface.as_ref().is_some_and(|sf| matches!(sf.name(), "sphere" | "disk"));
                EdgeLinkReport { orbit: i, label: o.label.clone(), surface, passed }
            })
            .collect()
    } else {
        Vec::new()
    };
    let ideal = q.ideal_orbits();
    let finite = q.finite_vertex_orbits();
    let cusps: Vec<CuspReport> = ideal.par_iter().map(|&i| cusp_check(&q, i)).collect();
    let spheres: Vec<SphericalReport> = finite.par_iter().map(|&i| spherical_check(&q, i, &ridges, opts)).collect();
    let euler = euler_characteristic(&q);
    let orientability = orientability(s);
    let boundary = boundary_summary(s);
    let passed = ridges.iter().all(|r| r.passed)
        && edge_links.iter().all(|e| e.passed)
        && cusps.iter().all(|c| c.passed)
        && spheres.iter().all(|c| c.passed)
        && euler.consistent() != Some(false)
        && boundary.error.is_none();
    CheckReport {
        schema: s.name().to_string(),
        dim: n,
        copies: s.copy_count(),
        pairings: s.pairings().len(),
        unpaired: s.unpaired_facets().len(),
        orbit_counts: q.counts(),
        ideal_vertex_orbits: ideal.len(),
        finite_vertex_orbits: finite.len(),
        ridges,
        edge_links,
        cusps,
        spheres,
        euler,
        orientability,
        boundary,
        passed,
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "schema:")?;
        writeln!(f, "  name: {}", self.schema)?;
        writeln!(f, "  dim: {}", self.dim)?;
        writeln!(f, "  copies: {}", self.copies)?;
        writeln!(f, "  pairings: {}", self.pairings)?;
        writeln!(f, "  unpaired facets: {}", self.unpaired)?;
        writeln!(f, "orbits:")?;
        for (k, c) in self.orbit_counts.iter().enumerate() {
            writeln!(f, "  dim {k}: {c}")?;
        }
        writeln!(f, "  ideal vertex orbits: {}", self.ideal_vertex_orbits)?;
        writeln!(f, "  finite vertex orbits: {}", self.finite_vertex_orbits)?;
        writeln!(f, "ridges:")?;
        for r in &self.ridges {
            let ret = match r.kind {
                crate::RidgeKind::Interior if r.trivial_return => " return trivial",
                crate::RidgeKind::Interior => " return NONTRIVIAL",
                crate::RidgeKind::Boundary => "",
            };
            writeln!(
                f,
                "  orbit {} [{}]: {} length {} sum {}{} {}",
                r.orbit,
                r.label,
                r.kind,
                r.length,
                r.angle_sum_text(),
                ret,
                verdict(r.passed)
            )?;
        }
        writeln!(f, "links:")?;
        for e in &self.edge_links {
            let name = e.surface.as_ref().map_or("not a surface".to_string(), |s| s.to_string());
            writeln!(f, "  edge orbit {} [{}]: {} {}", e.orbit, e.label, name, verdict(e.passed))?;
        }
        for c in &self.cusps {
            let shapes: Vec<String> = c.shapes.iter().map(|(s, k)| format!("{k} x {s}")).collect();
            write!(
                f,
                "  cusp orbit {}: euclidean, {} members ({}), counts {:?}, chi {}, {}, {}",
                c.orbit,
                c.members,
                shapes.join(", "),
                c.counts,
                c.euler,
                if c.boundary { "with boundary" } else { "closed" },
                if c.complete { "complete" } else { "incomplete" },
            )?;
            if let Some(sf) = &c.surface {
                write!(f, ", {sf}")?;
            }
            writeln!(f, " {}", verdict(c.passed))?;
        }
        for sp in &self.spheres {
            write!(
                f,
                "  vertex orbit {}: spherical, {} members, counts {:?}, chi {}, {}, volume {}, verdict by volume spectrum: {}",
                sp.orbit,
                sp.members,
                sp.counts,
                sp.euler,
                if sp.boundary { "with boundary" } else { "closed" },
                sp.volume,
                sp.verdict,
            )?;
            if let Some(sf) = &sp.surface {
                write!(f, ", {sf}")?;
            }
            writeln!(f, " {}", verdict(sp.passed))?;
        }
        writeln!(f, "chi:")?;
        writeln!(f, "  value: {}", self.euler.chi)?;
        writeln!(f, "  orbit counts: {:?}", self.euler.f_vector)?;
        if let Some(v) = &self.euler.volume {
            writeln!(f, "  volume: ({v})*pi^2")?;
        }
        if let Some(v) = &self.euler.copies_volume {
            writeln!(f, "  volume of copies: ({v})*pi^2")?;
        }
        if let Some(ok) = self.euler.consistent() {
            writeln!(f, "  gauss-bonnet: {}", verdict(ok))?;
        }
        writeln!(f, "orientability:")?;
        writeln!(f, "  orientable: {}", self.orientability.orientable)?;
        if let Some(k) = self.orientability.conflict {
            writeln!(f, "  conflict at pairing {k}")?;
        }
        writeln!(f, "boundary:")?;
        writeln!(f, "  cells: {}", self.boundary.cells)?;
        writeln!(f, "  components: {}", self.boundary.components)?;
        if let Some(x) = self.boundary.euler {
            writeln!(f, "  chi: {x}")?;
        }
        if let Some(e) = &self.boundary.error {
            writeln!(f, "  error: {e}")?;
        }
        writeln!(f, "verdict: {}", if self.passed { "pass" } else { "fail" })
    }
}
