use std::str::FromStr;

use num_rational::BigRational;

use crate::{ArithError, QuadraticFormQ, Result};

/// Parses `n`, `-n` or `n/d`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    BigRational::from_str(s.trim()).ok()
}

/// Reads a form file:
///
/// ```text
/// form a1, a2, a3, a4, a5
/// ```
///
/// or `gram` followed by one matrix row per line. `#` starts a comment.
pub fn parse_form(text: &str) -> Result<QuadraticFormQ> {
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut gram_at: Option<usize> = None;
    let mut diag: Option<QuadraticFormQ> = None;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |m: String| ArithError::Parse { line: line_no, message: m };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        last = line_no;
        if diag.is_some() {
            return Err(err("unexpected content after 'form'".into()));
        }
        let entries = |s: &str| -> Result<Vec<BigRational>> {
            s.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| parse_rational(t).ok_or_else(|| err(format!("bad rational '{t}'"))))
                .collect()
        };
        if gram_at.is_some() {
            rows.push(entries(line)?);
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match head {
            "form" => {
                let d = entries(rest)?;
                if d.is_empty() {
                    return Err(err("empty form".into()));
                }
                diag = Some(QuadraticFormQ::from_diagonal(d).map_err(|e| err(e.to_string()))?);
            }
            "gram" if rest.trim().is_empty() => gram_at = Some(line_no),
            _ => return Err(err(format!("expected 'form' or 'gram', found '{head}'"))),
        }
    }
    if let Some(f) = diag {
        return Ok(f);
    }
    let Some(start) = gram_at else {
        return Err(ArithError::Parse { line: last.max(1), message: "no form found".into() });
    };
    if rows.is_empty() {
        return Err(ArithError::Parse { line: start, message: "gram without rows".into() });
    }
    QuadraticFormQ::from_gram(&rows).map_err(|e| ArithError::Parse { line: start, message: e.to_string() })
}
