use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::{FieldElement, FieldError, Sign, MASKS, MASK_INDEX, RADICANDS};

pub(crate) fn sqrt(a: &FieldElement) -> Result<Option<FieldElement>, FieldError> {
    match a.sign() {
        Sign::Negative => return Err(FieldError::NegativeSqrt),
        Sign::Zero => return Ok(Some(FieldElement::zero())),
        Sign::Positive => {}
    }
    if let Some(q) = a.as_rational() {
        for (i, &d) in RADICANDS.iter().enumerate() {
            let d = BigRational::from_integer(BigInt::from(d));
            if let Some(r) = rational_sqrt(&(q / &d)) {
                let mut x = FieldElement::zero();
                x.coeffs[i] = r;
                return Ok(Some(x.abs()));
            }
        }
        return Ok(None);
    }
    Ok(tower_sqrt(a, 0b111).map(|x| x.abs()))
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

// Square root of an element supported on the subfield generated by the
// primes in `avail`, searched as x + y·√p over the next smaller subfield.
fn tower_sqrt(a: &FieldElement, avail: u8) -> Option<FieldElement> {
    if avail == 0 {
        return a.as_rational().and_then(rational_sqrt).map(FieldElement::from_rational);
    }
    let pbit = 1u8 << (7 - avail.leading_zeros() as u8);
    let rest = avail & !pbit;
    let p = match pbit {
        1 => 2,
        2 => 3,
        _ => 5,
    };
    let mut lower = FieldElement::zero();
    let mut upper = FieldElement::zero();
    for (i, c) in a.support() {
        let m = MASKS[i];
        if m & pbit == 0 {
            lower.coeffs[i] = c.clone();
        } else {
            upper.coeffs[MASK_INDEX[(m ^ pbit) as usize]] = c.clone();
        }
    }
    let root_p = FieldElement::sqrt_of(p);
    let pq = BigRational::from_integer(BigInt::from(p));
    if upper.is_zero() {
        if let Some(x) = tower_sqrt(&lower, rest) {
            return Some(x);
        }
        let y = tower_sqrt(&lower.scale(&pq.recip()), rest)?;
        return Some(y * root_p);
    }
    let disc = &(&lower * &lower) - &(&upper * &upper).scale(&pq);
    let s = tower_sqrt(&disc, rest)?;
    let half = BigRational::new(1.into(), 2.into());
    for t in [(&lower + &s).scale(&half), (&lower - &s).scale(&half)] {
        if t.is_zero() {
            continue;
        }
        if let Some(x) = tower_sqrt(&t, rest) {
            if x.is_zero() {
                continue;
            }
            let y = upper.checked_div(&x.scale(&BigRational::from_integer(2.into()))).ok()?;
            let cand = &x + &(&y * &root_p);
            if &(&cand * &cand) == a {
                return Some(cand);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> FieldElement {
        s.parse().unwrap()
    }

    #[test]
    fn rational_norms() {
        assert_eq!(el("8/3").sqrt().unwrap(), Some(el("(2/3)*sqrt6")));
        assert_eq!(el("8/5").sqrt().unwrap(), Some(el("(2/5)*sqrt10")));
        assert_eq!(el("9/4").sqrt().unwrap(), Some(el("3/2")));
        assert_eq!(el("7").sqrt().unwrap(), None);
    }

    #[test]
    fn general_squares() {
        for s in ["1 + sqrt2", "sqrt2 + sqrt3", "2 - sqrt5 + sqrt30", "(1/3)*sqrt6 - sqrt15 + 4"] {
            let x = el(s);
            let sq = &x * &x;
            assert_eq!(sq.sqrt().unwrap(), Some(x.abs()), "{s}");
        }
        assert_eq!(el("-2").sqrt(), Err(FieldError::NegativeSqrt));
        assert_eq!(el("1 + sqrt2").sqrt().unwrap(), None);
    }

    #[test]
    fn zero_root() {
        assert!(el("0").sqrt().unwrap().unwrap().is_zero());
    }
}
