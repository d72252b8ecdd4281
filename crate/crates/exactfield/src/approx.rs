use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{FieldElement, Sign, RADICANDS};

const START_BITS: u32 = 64;

/// A closed interval with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(q: BigRational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    fn scaled(&self, c: &BigRational) -> Interval {
        if c.is_negative() {
            Interval { lo: &self.hi * c, hi: &self.lo * c }
        } else {
            Interval { lo: &self.lo * c, hi: &self.hi * c }
        }
    }
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

/// Enclosure of `√d` with endpoints on the grid `2^-k`.
pub(crate) fn sqrt_enclosure(d: u32, k: u32) -> Interval {
    let scale = pow2(k);
    let n = BigInt::from(d) * &scale * &scale;
    let s = n.sqrt();
    let lo = BigRational::new(s.clone(), scale.clone());
    if &s * &s == n {
        Interval::point(lo)
    } else {
        Interval { lo, hi: BigRational::new(s + 1, scale) }
    }
}

fn enclosure(a: &FieldElement, k: u32) -> Interval {
    let mut acc = Interval::point(BigRational::zero());
    for (i, c) in a.support() {
        let r = if i == 0 { Interval::point(BigRational::one()) } else { sqrt_enclosure(RADICANDS[i], k) };
        acc = acc.add(&r.scaled(c));
    }
    acc
}

fn quick_sign(a: &FieldElement) -> Option<Sign> {
    let mut terms = a.support().map(|(_, c)| c.is_positive());
    let first = terms.next()?;
    if terms.all(|p| p == first) {
        return Some(if first { Sign::Positive } else { Sign::Negative });
    }
    // Floating evaluation with a generous rigorous error margin.
    let mut value = 0.0f64;
    let mut mag = 0.0f64;
    for (i, c) in a.support() {
        let t = c.to_f64()? * f64::from(RADICANDS[i]).sqrt();
        if !t.is_finite() {
            return None;
        }
        value += t;
        mag += t.abs();
    }
    let margin = mag * 2f64.powi(-40);
    if value > margin {
        Some(Sign::Positive)
    } else if value < -margin {
        Some(Sign::Negative)
    } else {
        None
    }
}

pub(crate) fn sign(a: &FieldElement) -> Sign {
    if a.is_zero() {
        return Sign::Zero;
    }
    if let Some(s) = quick_sign(a) {
        return s;
    }
    let mut k = START_BITS;
    loop {
        let iv = enclosure(a, k);
        if iv.lo.is_positive() {
            return Sign::Positive;
        }
        if iv.hi.is_negative() {
            return Sign::Negative;
        }
        k *= 2;
    }
}

pub(crate) fn approx(a: &FieldElement, precision: u32) -> Interval {
    let precision = precision.max(1);
    if let Some(q) = a.as_rational() {
        return Interval::point(q.clone());
    }
    let total: BigRational = a.support().map(|(_, c)| c.abs()).sum();
    let extra = total.ceil().to_integer().bits() as u32 + 1;
    let target = BigRational::new(BigInt::one(), pow2(precision));
    let mut k = precision + extra;
    loop {
        let iv = enclosure(a, k);
        if iv.width() <= target {
            return iv;
        }
        k *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> FieldElement {
        s.parse().unwrap()
    }

    #[test]
    fn signs_of_small_combinations() {
        assert_eq!(el("sqrt2 + sqrt3 - sqrt5").sign(), Sign::Positive);
        assert_eq!(el("3 - 2*sqrt2").sign(), Sign::Positive);
        assert_eq!(el("0").sign(), Sign::Zero);
        assert_eq!(el("2*sqrt2 - 3").sign(), Sign::Negative);
    }

    #[test]
    fn sign_needs_refinement() {
        // (3 - 2√2)^8 is about 7.8e-7 and has large cancelling coefficients.
        let tiny = el("3 - 2*sqrt2").pow(8);
        assert_eq!(tiny.sign(), Sign::Positive);
        let tinier = el("3 - 2*sqrt2").pow(20);
        assert_eq!((-tinier).sign(), Sign::Negative);
    }

    fn dec(s: &str) -> BigRational {
        let (i, f) = s.split_once('.').unwrap();
        let den = BigInt::from(10).pow(f.len() as u32);
        BigRational::new(format!("{i}{f}").parse::<BigInt>().unwrap(), den)
    }

    #[test]
    fn approx_width_and_containment() {
        // Reference decimals rounded at the last digit shown.
        let cases = [
            ("sqrt2", 20u32, "1.4142135623730950488"),
            ("2 + sqrt3", 10, "3.7320508075688772935"),
            ("sqrt30 - 5*sqrt6 + 1/3", 90, "-6.4368898055308960231"),
        ];
        let ulp = dec("0.0000000000000000001");
        for (s, p, r) in cases {
            let iv = el(s).approx(p);
            assert!(iv.width() <= BigRational::new(1.into(), pow2(p)));
            let r = dec(r);
            let widened = Interval { lo: &iv.lo - &ulp, hi: &iv.hi + &ulp };
            assert!(widened.contains(&r), "{s}");
        }
        assert_eq!(el("0").approx(7), Interval::point(BigRational::zero()));
    }
}
