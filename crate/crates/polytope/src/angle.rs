use std::fmt;

use exactfield::{FieldElement, Sign};
use lorentz::LorentzVector;

/// A real number known through its exact square and its sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cosine {
    pub square: FieldElement,
    pub negative: bool,
}

impl Cosine {
    /// The value itself when its square root lies in the field.
    pub fn value(&self) -> Option<FieldElement> {
        let r = self.square.sqrt().ok()??;
        Some(if self.negative { -r } else { r })
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.square.to_f64().sqrt();
        if self.negative { -r } else { r }
    }
}

impl fmt::Display for Cosine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}sqrt({})", if self.negative { "-" } else { "" }, self.square),
        }
    }
}

/// The relative position of two facet hyperplanes, with
/// `c = −⟨u,v⟩/√(⟨u,u⟩⟨v,v⟩)`: `|c| < 1` an angle with cosine `c`,
/// `c = 1` tangent at infinity, `c > 1` ultraparallel at distance
/// `arccosh c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AngleClass {
    /// The angle `π/m`.
    Submultiple(u32),
    General(Cosine),
    Tangent,
    Ultraparallel(Cosine),
}

fn recognition_table() -> Vec<(u32, FieldElement)> {
    let c = |s: &str| -> FieldElement { s.parse().expect("constant") };
    vec![(3, c("1/4")), (4, c("1/2")), (5, c("3/8 + (1/8)*sqrt5")), (6, c("3/4"))]
}

impl AngleClass {
    /// Classifies the pair of outward normals; `None` when `c ≤ −1`, i.e.
    /// one half-space contains the other.
    pub fn between(u: &LorentzVector, v: &LorentzVector) -> Option<AngleClass> {
        let p = u.dot(v);
        if p.is_zero() {
            return Some(AngleClass::Submultiple(2));
        }
        let square = &(&p * &p) / &(&u.norm_sq() * &v.norm_sq());
        let negative = p.is_positive();
        let cos = Cosine { square: square.clone(), negative };
        match (&square - &FieldElement::one()).sign() {
            Sign::Negative => {
                if !negative {
                    for (m, sq) in recognition_table() {
                        if sq == square {
                            return Some(AngleClass::Submultiple(m));
                        }
                    }
                }
                Some(AngleClass::General(cos))
            }
            _ if negative => None,
            Sign::Zero => Some(AngleClass::Tangent),
            Sign::Positive => Some(AngleClass::Ultraparallel(cos)),
        }
    }

    pub fn is_submultiple(&self) -> bool {
        matches!(self, AngleClass::Submultiple(_))
    }

    /// The angle in radians; zero for tangent and ultraparallel pairs.
    pub fn radians(&self) -> f64 {
        match self {
            AngleClass::Submultiple(m) => std::f64::consts::PI / f64::from(*m),
            AngleClass::General(c) => c.to_f64().acos(),
            _ => 0.0,
        }
    }
}

impl fmt::Display for AngleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleClass::Submultiple(m) => write!(f, "pi/{m}"),
            AngleClass::General(c) => write!(f, "angle(cos={c})"),
            AngleClass::Tangent => f.write_str("tangent"),
            AngleClass::Ultraparallel(c) => write!(f, "ultraparallel(cosh={c})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &[&str]) -> LorentzVector {
        LorentzVector::parse(s).unwrap()
    }

    #[test]
    fn recognises_submultiples() {
        let e1 = v(&["0", "1", "0"]);
        for (m, dir) in [(3, ["0", "-1/2", "(1/2)*sqrt3"]), (4, ["0", "-1", "1"]), (6, ["0", "-(1/2)*sqrt3", "1/2"])] {
            assert_eq!(AngleClass::between(&e1, &v(&dir)), Some(AngleClass::Submultiple(m)));
        }
        let c5: FieldElement = "1/4 + (1/4)*sqrt5".parse().unwrap();
        let u = LorentzVector::new(vec![c5.clone(), -c5, FieldElement::one()]);
        assert!(u.norm_sq().is_one());
        assert_eq!(AngleClass::between(&e1, &u), Some(AngleClass::Submultiple(5)));
    }

    #[test]
    fn obtuse_and_degenerate() {
        let e1 = v(&["0", "1", "0"]);
        let obtuse = v(&["0", "1", "1"]);
        assert!(matches!(AngleClass::between(&e1, &obtuse), Some(AngleClass::General(c)) if c.negative));
        let nested = v(&["1", "2", "0"]);
        assert_eq!(AngleClass::between(&e1, &nested), None);
        let ultra = v(&["1", "-2", "0"]);
        assert!(matches!(AngleClass::between(&e1, &ultra), Some(AngleClass::Ultraparallel(_))));
    }
}
