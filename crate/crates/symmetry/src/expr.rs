use std::fmt;

use exactfield::FieldElement;
use lorentz::LorentzMap;
use polytope::Analysis;

use crate::ks::{named_symmetry, permutation_to_symmetry, KsFrame};
use crate::{Symmetry, SymmetryError, SymmetryGroup};

/// A permutation of single-letter facet labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelPerm {
    moves: Vec<(char, char)>,
}

impl LabelPerm {
    pub fn identity() -> Self {
        LabelPerm { moves: Vec::new() }
    }

    /// From cycle notation such as `(PF)(JR)`; `(JFR)` sends J to F.
    pub fn from_cycles(s: &str) -> Result<Self, SymmetryError> {
        let err = |position: usize, message: &str| SymmetryError::Parse { position, message: message.into() };
        let mut moves: Vec<(char, char)> = Vec::new();
        let mut chars = s.char_indices().filter(|(_, c)| !c.is_whitespace()).peekable();
        while let Some((pos, c)) = chars.next() {
            if c != '(' {
                return Err(err(pos, "expected '('"));
            }
            let mut cycle = Vec::new();
            loop {
                match chars.next() {
                    Some((_, ')')) => break,
                    Some((p, l)) if l.is_ascii_alphabetic() => {
                        if cycle.contains(&l) || moves.iter().any(|&(x, _)| x == l) {
                            return Err(err(p, "letter repeated"));
                        }
                        cycle.push(l);
                    }
                    Some((p, _)) => return Err(err(p, "expected a label letter")),
                    None => return Err(err(s.len(), "unclosed cycle")),
                }
            }
            for k in 0..cycle.len() {
                let (x, y) = (cycle[k], cycle[(k + 1) % cycle.len()]);
                if x != y {
                    moves.push((x, y));
                }
            }
        }
        moves.sort_unstable();
        Ok(LabelPerm { moves })
    }

    pub(crate) fn from_moves(moves: Vec<(char, char)>) -> Self {
        LabelPerm { moves }
    }

    pub fn apply(&self, c: char) -> char {
        self.moves.iter().find(|&&(x, _)| x == c).map_or(c, |&(_, y)| y)
    }

    pub fn moved(&self) -> impl Iterator<Item = char> + '_ {
        self.moves.iter().map(|&(x, _)| x)
    }
}

impl fmt::Display for LabelPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moves.is_empty() {
            return f.write_str("()");
        }
        let mut done: Vec<char> = Vec::new();
        for &(start, _) in &self.moves {
            if done.contains(&start) {
                continue;
            }
            f.write_str("(")?;
            let mut c = start;
            loop {
                write!(f, "{c}")?;
                done.push(c);
                c = self.apply(c);
                if c == start {
                    break;
                }
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// `name | perm(<cycles>) | rows[<r0>; <r1>; …]`, composed with `*`
/// (left to right as written, so `x*y` is `x∘y`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymExpr {
    Name(String),
    Perm(LabelPerm),
    Rows(Vec<Vec<FieldElement>>),
    Compose(Vec<SymExpr>),
}

pub fn parse_symmetry_expr(s: &str) -> Result<SymExpr, SymmetryError> {
    let err = |position: usize, message: String| SymmetryError::Parse { position, message };
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '*' if depth == 0 => {
                parts.push((start, &s[start..k]));
                start = k + 1;
            }
            _ => {}
        }
    }
    parts.push((start, &s[start..]));
    let mut atoms = Vec::new();
    for (offset, raw) in parts {
        let lead = raw.len() - raw.trim_start().len();
        let pos = offset + lead;
        let t = raw.trim();
        if t.is_empty() {
            return Err(err(pos, "empty factor".into()));
        }
        if let Some(body) = t.strip_prefix("perm(").and_then(|b| b.strip_suffix(')')) {
            let p = LabelPerm::from_cycles(body).map_err(|e| match e {
                SymmetryError::Parse { position, message } => err(pos + 5 + position, message),
                other => other,
            })?;
            atoms.push(SymExpr::Perm(p));
        } else if let Some(body) = t.strip_prefix("rows[").and_then(|b| b.strip_suffix(']')) {
            let mut rows = Vec::new();
            for row in body.split(';') {
                let entries = row
                    .split(',')
                    .map(|x| x.trim().parse::<FieldElement>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| err(pos + 5 + e.position, e.message))?;
                rows.push(entries);
            }
            atoms.push(SymExpr::Rows(rows));
        } else if t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && t.starts_with(|c: char| c.is_ascii_alphabetic()) {
            atoms.push(SymExpr::Name(t.to_string()));
        } else {
            return Err(err(pos, format!("cannot parse '{t}'")));
        }
    }
    Ok(if atoms.len() == 1 { atoms.pop().expect("one atom") } else { SymExpr::Compose(atoms) })
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymExpr::Name(n) => f.write_str(n),
            SymExpr::Perm(p) => write!(f, "perm({p})"),
            SymExpr::Rows(rows) => {
                let rs: Vec<String> =
                    rows.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")).collect();
                write!(f, "rows[{}]", rs.join("; "))
            }
            SymExpr::Compose(parts) => {
                let ps: Vec<String> = parts.iter().map(ToString::to_string).collect();
                f.write_str(&ps.join("*"))
            }
        }
    }
}

/// Everything needed to turn expressions into group elements.
pub struct SymmetryContext<'a> {
    pub analysis: &'a Analysis,
    pub group: &'a SymmetryGroup,
    pub frame: Option<KsFrame>,
}

impl<'a> SymmetryContext<'a> {
    pub fn new(analysis: &'a Analysis, group: &'a SymmetryGroup) -> Self {
        let frame = KsFrame::new(analysis, group).ok();
        SymmetryContext { analysis, group, frame }
    }

    pub fn resolve(&self, e: &SymExpr) -> Result<Symmetry, SymmetryError> {
        let s = match e {
            SymExpr::Name(n) if n == "id" => Symmetry::identity(self.analysis.polytope()),
            SymExpr::Name(n) => match &self.frame {
                Some(frame) => match n.as_str() {
                    "a" | "r" | "l" | "m" | "n" => named_symmetry(self.analysis, n)?,
                    _ => frame.pairing_symmetry(self.group, n)?,
                },
                None => return Err(SymmetryError::UnknownName(n.clone())),
            },
            SymExpr::Perm(p) => match &self.frame {
                Some(frame) => permutation_to_symmetry(self.group, frame, false, p)?,
                None => self.by_label_action(p)?,
            },
            SymExpr::Rows(rows) => {
                let m = LorentzMap::from_rows(rows.clone())?;
                Symmetry::from_map(self.analysis.polytope(), m)?
            }
            SymExpr::Compose(parts) => {
                let mut acc = Symmetry::identity(self.analysis.polytope());
                for part in parts {
                    acc = acc.compose(&self.resolve(part)?);
                }
                acc
            }
        };
        if !self.group.contains(&s) {
            return Err(SymmetryError::NotASymmetry);
        }
        Ok(s)
    }

    /// The unique element acting on single-letter facet labels as `p`.
    fn by_label_action(&self, p: &LabelPerm) -> Result<Symmetry, SymmetryError> {
        let poly = self.analysis.polytope();
        let letter = |i: usize| poly.label(i).and_then(|l| l.chars().next().filter(|_| l.len() == 1));
        for c in p.moved() {
            if !(0..poly.facet_count()).any(|i| letter(i) == Some(c)) {
                return Err(SymmetryError::Labeling(format!("no facet labeled {c}")));
            }
        }
        let matches: Vec<&Symmetry> = self
            .group
            .elements()
            .iter()
            .filter(|s| {
                (0..poly.facet_count()).all(|i| match letter(i) {
                    Some(c) => letter(s.facet_image(i)) == Some(p.apply(c)),
                    None => true,
                })
            })
            .collect();
        match matches.as_slice() {
            [s] => Ok((*s).clone()),
            [] => Err(SymmetryError::Labeling(format!("no symmetry realizes {p}"))),
            _ => Err(SymmetryError::Labeling(format!("{} symmetries realize {p}", matches.len()))),
        }
    }
}
