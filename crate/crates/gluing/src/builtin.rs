use symmetry::ks::KsFrame;
use symmetry::{parse_symmetry_expr, SymmetryContext};

use crate::ops::{double, quotient_by_involution, restricted, CopyAction};
use crate::{Cell, FacetRef, GluingError, GluingSchema, Result};

const NAMES: [&str; 5] = ["manifold_M", "double_N", "cut_N_split", "figure_eight", "gieseking"];

pub fn builtin_schema_names() -> &'static [&'static str] {
    &NAMES
}

pub fn builtin_schema(name: &str) -> Result<GluingSchema> {
    let mut s = match name {
        "manifold_M" => manifold_m()?,
        "double_N" => double(&manifold_m()?)?,
        "cut_N_split" => {
            let n = double(&manifold_m()?)?;
            restricted(&n, |_, p| !(p.expr == "g" && p.source.copy == 1))?
        }
        "figure_eight" => figure_eight()?,
        "gieseking" => {
            let f = figure_eight()?;
            quotient_by_involution(&f, &figure_eight_swap(&f)?)?
        }
        _ => return Err(GluingError::UnknownSchema(name.to_string())),
    };
    s.set_name(name);
    Ok(s)
}

fn manifold_m() -> Result<GluingSchema> {
    let cell = Cell::builtin("kerckhoff_storm")?;
    let a = cell.analysis();
    let group = cell.group();
    let frame = KsFrame::new(a, group)?;
    let mut s = GluingSchema::new("manifold_M");
    let idx = s.add_cell(cell.clone());
    s.add_copies(idx, 1, false);
    for x in ['P', 'R', 'F', 'J'] {
        let name = format!("phi_{x}");
        let phi = frame.pairing_symmetry(group, &name)?;
        let upper = frame.upper_facet(x).expect("letter");
        s.add_pairing(FacetRef::new(0, upper), FacetRef::new(0, phi.facet_image(upper)), phi.map().clone(), name)?;
    }
    let g = frame.pairing_symmetry(group, "g")?;
    let tu = frame.upper_tetrahedral;
    s.add_pairing(FacetRef::new(0, tu), FacetRef::new(0, g.facet_image(tu)), g.map().clone(), "g")?;
    let i = frame.pairing_symmetry(group, "i")?;
    let p = cell.polytope();
    for k in (0..p.facet_count()).filter(|&k| p.label(k) == Some("N")) {
        let j = i.facet_image(k);
        if k < j {
            s.add_pairing(FacetRef::new(0, k), FacetRef::new(0, j), i.map().clone(), "i")?;
        }
    }
    Ok(s)
}

fn figure_eight() -> Result<GluingSchema> {
    let cell = Cell::builtin("ideal_regular_tetrahedron_3d")?;
    let ctx = SymmetryContext::new(cell.analysis(), cell.group());
    let mut s = GluingSchema::new("figure_eight");
    let idx = s.add_cell(cell.clone());
    s.add_copies(idx, 1, false);
    s.add_copies(idx, 1, true);
    for f in 0..cell.facet_count() {
        let cycle = match cell.polytope().label(f) {
            Some("P") => "(JFR)",
            Some("R") => "(PFJ)",
            Some("F") => "(PRJ)",
            Some("J") => "(PFR)",
            other => return Err(GluingError::Unsupported(format!("unexpected tetrahedron label {other:?}"))),
        };
        let expr = format!("perm({cycle})");
        let sym = ctx.resolve(&parse_symmetry_expr(&expr)?)?;
        s.add_pairing(FacetRef::new(0, f), FacetRef::new(1, sym.facet_image(f)), sym.map().clone(), expr)?;
    }
    Ok(s)
}

/// The involution of the figure-eight schema exchanging its two tetrahedra.
pub fn figure_eight_swap(s: &GluingSchema) -> Result<CopyAction> {
    let cell = s.cell_of(0);
    let ctx = SymmetryContext::new(cell.analysis(), cell.group());
    let expr = "perm((PF)(JR))";
    let g = ctx.resolve(&parse_symmetry_expr(expr)?)?;
    Ok(CopyAction { images: vec![(1, g.map().clone()), (0, g.map().clone())], exprs: vec![expr.into(), expr.into()] })
}
