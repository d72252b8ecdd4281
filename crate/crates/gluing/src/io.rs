use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use lorentz::LorentzMap;
use polytope::{builtin_names, parse_polytope};
use symmetry::{parse_symmetry_expr, SymExpr, SymmetryContext};

use crate::{Cell, FacetRef, GluingError, GluingSchema, Result};

/// Resolves `builtin:<name>`, a bare builtin name, or a polytope file
/// relative to `base`; a `#<k>` suffix selects facet `k` as a cell.
pub fn resolve_cell(reference: &str, base: Option<&Path>) -> Result<Arc<Cell>> {
    if let Some((parent, facet)) = reference.rsplit_once('#') {
        let k: usize = facet.parse().map_err(|_| GluingError::Io(format!("bad facet index in '{reference}'")))?;
        let parent = resolve_cell(parent, base)?;
        let (poly, _) = parent.analysis().facet_polytope(k)?;
        return Ok(Arc::new(Cell::new(reference, poly)?));
    }
    let name = reference.strip_prefix("builtin:").unwrap_or(reference);
    if builtin_names().contains(&name) {
        return Cell::builtin(name);
    }
    let path = match base {
        Some(b) => b.join(reference),
        None => Path::new(reference).to_path_buf(),
    };
    let text = std::fs::read_to_string(&path).map_err(|e| GluingError::Io(format!("{}: {e}", path.display())))?;
    Ok(Arc::new(Cell::new(reference, parse_polytope(reference, &text)?)?))
}

fn facet_ref(s: &str) -> Option<FacetRef> {
    let (c, f) = s.strip_prefix('c')?.split_once(".f")?;
    Some(FacetRef::new(c.parse().ok()?, f.parse().ok()?))
}

/// Parses the schema text format:
///
/// ```text
/// name <text>
/// copies <k> of <polytope> [mirror]
/// pair c<i>.f<j> c<i'>.f<j'> via <symmetry expression>
/// ```
///
/// Blank lines and `#` comments are ignored.
pub fn parse_schema(text: &str, resolve: impl Fn(&str) -> Result<Arc<Cell>>) -> Result<GluingSchema> {
    let mut s = GluingSchema::new("schema");
    let mut cells: HashMap<String, usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |m: String| GluingError::Parse { line: line_no, message: m };
        let line = match raw.find(" #").or_else(|| raw.starts_with('#').then_some(0)) {
            Some(k) => &raw[..k],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match head {
            "name" => s.set_name(rest),
            "copies" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                let (count, reference, mirror) = match words[..] {
                    [k, "of", r] => (k, r, false),
                    [k, "of", r, "mirror"] => (k, r, true),
                    _ => return Err(err("expected 'copies <k> of <polytope> [mirror]'".into())),
                };
                let count: usize = count.parse().map_err(|_| err(format!("bad count '{count}'")))?;
                let idx = match cells.get(reference) {
                    Some(&k) => k,
                    None => {
                        let cell = resolve(reference).map_err(|e| err(e.to_string()))?;
                        let k = s.add_cell(cell);
                        cells.insert(reference.to_string(), k);
                        k
                    }
                };
                if !s.cells().is_empty() && s.cells()[idx].dim() != s.cells()[0].dim() {
                    return Err(err("cells of different dimensions".into()));
                }
                s.add_copies(idx, count, mirror);
            }
            "pair" => {
                let (refs, expr) = rest.split_once(" via ").ok_or_else(|| err("expected 'via <expression>'".into()))?;
                let refs: Vec<&str> = refs.split_whitespace().collect();
                let [a, b] = refs[..] else { return Err(err("expected two facets".into())) };
                let (src, tgt) = match (facet_ref(a), facet_ref(b)) {
                    (Some(x), Some(y)) => (x, y),
                    _ => return Err(err(format!("bad facet reference in '{refs:?}'"))),
                };
                if src.copy >= s.copy_count() {
                    return Err(err(format!("unknown copy {}", src.copy)));
                }
                let expr = expr.trim();
                let parsed = parse_symmetry_expr(expr).map_err(|e| err(e.to_string()))?;
                let map = match parsed {
                    SymExpr::Rows(rows) => LorentzMap::from_rows(rows).map_err(|e| err(e.to_string()))?,
                    other => {
                        let cell = s.cell_of(src.copy);
                        let ctx = SymmetryContext::new(cell.analysis(), cell.group());
                        ctx.resolve(&other).map_err(|e| err(e.to_string()))?.map().clone()
                    }
                };
                s.add_pairing(src, tgt, map, expr).map_err(|e| err(e.to_string()))?;
            }
            _ => return Err(err(format!("unknown directive '{head}'"))),
        }
    }
    Ok(s)
}

/// Text form of a schema, read back by [`parse_schema`].
pub fn to_text(s: &GluingSchema) -> String {
    let mut out = format!("name {}\n", s.name());
    let copies = s.copies();
    let mut i = 0;
    while i < copies.len() {
        let mut j = i;
        while j < copies.len() && copies[j] == copies[i] {
            j += 1;
        }
        let mirror = if copies[i].mirror { " mirror" } else { "" };
        out.push_str(&format!("copies {} of {}{mirror}\n", j - i, s.cells()[copies[i].cell].source()));
        i = j;
    }
    for p in s.pairings() {
        out.push_str(&format!("pair {} {} via {}\n", p.source, p.target, p.expr));
    }
    out
}
