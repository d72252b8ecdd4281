use lorentz::LorentzVector;

use crate::{Polytope, PolytopeError};

fn perr(line: usize, message: impl Into<String>) -> PolytopeError {
    PolytopeError::Parse { line, message: message.into() }
}

/// Parses the text format: `dim <n>`, then `normal <e0>, …, <en>` lines,
/// each optionally followed by `label <tag>`. `#` starts a comment.
pub fn parse_polytope(name: &str, text: &str) -> Result<Polytope, PolytopeError> {
    let mut dim: Option<usize> = None;
    let mut normals = Vec::new();
    let mut labels: Vec<Option<String>> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "dim" => {
                if dim.is_some() {
                    return Err(perr(line_no, "duplicate dim line"));
                }
                let n: usize = rest.parse().map_err(|_| perr(line_no, format!("bad dimension '{rest}'")))?;
                if n < 2 {
                    return Err(perr(line_no, "dimension must be at least 2"));
                }
                dim = Some(n);
            }
            "normal" => {
                let n = dim.ok_or_else(|| perr(line_no, "normal before dim line"))?;
                let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
                if parts.len() != n + 1 {
                    return Err(perr(line_no, format!("expected {} coordinates, found {}", n + 1, parts.len())));
                }
                let v = LorentzVector::parse(&parts).map_err(|e| perr(line_no, e.to_string()))?;
                normals.push(v);
                labels.push(None);
            }
            "label" => {
                let slot = labels.last_mut().ok_or_else(|| perr(line_no, "label before any normal"))?;
                if rest.is_empty() {
                    return Err(perr(line_no, "empty label"));
                }
                *slot = Some(rest.to_string());
            }
            other => return Err(perr(line_no, format!("unknown keyword '{other}'"))),
        }
    }
    if dim.is_none() {
        return Err(perr(1, "missing dim line"));
    }
    if normals.is_empty() {
        return Err(perr(1, "no normals"));
    }
    Polytope::new(name, normals, labels)
}

pub(crate) fn to_text(p: &Polytope) -> String {
    let mut out = format!("dim {}\n", p.ambient_dim() - 1);
    for (i, u) in p.normals().iter().enumerate() {
        let coords: Vec<String> = u.coords().iter().map(ToString::to_string).collect();
        out.push_str(&format!("normal {}\n", coords.join(", ")));
        if let Some(l) = p.label(i) {
            out.push_str(&format!("label {l}\n"));
        }
    }
    out
}
