use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{basis_index, FieldElement};

/// A parse failure with the byte offset at which it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at column {}: {}", self.position + 1, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos, message: message.into() })
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digit string"))
    }

    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let paren = self.eat(b'(');
        let neg = paren && self.eat(b'-');
        let n = self.integer()?;
        let mut q = BigRational::from_integer(n);
        if self.eat(b'/') {
            let at = self.pos;
            let d = self.integer()?;
            if d.is_zero() {
                return Err(ParseError { position: at, message: "zero denominator".into() });
            }
            q /= BigRational::from_integer(d);
        }
        if paren && !self.eat(b')') {
            return self.err("expected ')'");
        }
        Ok(if neg { -q } else { q })
    }

    fn radical(&mut self) -> Result<FieldElement, ParseError> {
        self.skip_ws();
        if !self.src[self.pos..].starts_with(b"sqrt") {
            return self.err("expected a radical such as sqrt2");
        }
        self.pos += 4;
        let at = self.pos;
        let d = self.integer()?;
        let idx = u32::try_from(&d).ok().and_then(basis_index).filter(|&i| i > 0);
        match idx {
            Some(i) => {
                let mut e = FieldElement::zero();
                e.coeffs[i] = BigRational::one();
                Ok(e)
            }
            None => Err(ParseError { position: at, message: format!("unsupported radical sqrt{d}") }),
        }
    }

    fn term(&mut self) -> Result<FieldElement, ParseError> {
        match self.peek() {
            Some(b's') => self.radical(),
            Some(c) if c.is_ascii_digit() || c == b'(' => {
                let q = self.rational()?;
                if self.eat(b'*') {
                    Ok(self.radical()?.scale(&q))
                } else {
                    Ok(FieldElement::from_rational(q))
                }
            }
            _ => self.err("expected a term"),
        }
    }
}

pub(crate) fn parse_element(s: &str) -> Result<FieldElement, ParseError> {
    let mut cur = Cursor { src: s.as_bytes(), pos: 0 };
    let mut acc = FieldElement::zero();
    let mut negate = cur.eat(b'-');
    loop {
        let t = cur.term()?;
        if negate {
            acc -= &t;
        } else {
            acc += &t;
        }
        if cur.eat(b'+') {
            negate = false;
        } else if cur.eat(b'-') {
            negate = true;
        } else {
            break;
        }
    }
    if cur.peek().is_some() {
        return cur.err("unexpected trailing input");
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar_forms() {
        let a: FieldElement = "(1/3)*sqrt15".parse().unwrap();
        assert_eq!(a.coeff(6), &BigRational::new(1.into(), 3.into()));
        let b: FieldElement = " -sqrt2 + 3 - 2*sqrt30 ".parse().unwrap();
        assert_eq!(b.to_string(), "3 - sqrt2 - 2*sqrt30");
        let c: FieldElement = "1/2*sqrt5".parse().unwrap();
        assert_eq!(c.to_string(), "(1/2)*sqrt5");
    }

    #[test]
    fn reports_positions() {
        let e = "1 + sqrt7".parse::<FieldElement>().unwrap_err();
        assert_eq!(e.position, 8);
        let e = "1/0".parse::<FieldElement>().unwrap_err();
        assert_eq!(e.position, 2);
        assert!("2 +".parse::<FieldElement>().is_err());
        assert!("2 3".parse::<FieldElement>().is_err());
    }
}
