//! Exact arithmetic in the totally real field `Q(√2, √3, √5)`.
//!
//! Elements are stored over the basis `{1, √2, √3, √5, √6, √10, √15, √30}`
//! with rational coefficients, so equality and hashing are coefficient-wise.
//! The real embedding sends every radical to its positive root.

mod approx;
mod parse;
mod sqrt;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use approx::Interval;
pub use parse::ParseError;

/// Radicands of the basis, in basis order.
pub const RADICANDS: [u32; 8] = [1, 2, 3, 5, 6, 10, 15, 30];

// Bit 0 = 2, bit 1 = 3, bit 2 = 5.
const MASKS: [u8; 8] = [0, 1, 2, 4, 3, 5, 6, 7];
const MASK_INDEX: [usize; 8] = [0, 1, 2, 4, 3, 5, 6, 7];
const PRIMES: [u32; 3] = [2, 3, 5];

fn common_factor(mask: u8) -> u32 {
    let mut f = 1;
    for (bit, p) in PRIMES.iter().enumerate() {
        if mask & (1 << bit) != 0 {
            f *= p;
        }
    }
    f
}

/// Index of the basis radical `√d`, if `d` is one of the eight radicands.
pub fn basis_index(d: u32) -> Option<usize> {
    RADICANDS.iter().position(|&r| r == d)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative element")]
    NegativeSqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        match self.as_i8() * rhs.as_i8() {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => Sign::Zero,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: [BigRational; 8],
}

impl FieldElement {
    pub fn zero() -> Self {
        FieldElement { coeffs: Default::default() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `n/d` as a field element. Panics when `d == 0`.
    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut e = Self::zero();
        e.coeffs[0] = q;
        e
    }

    pub fn from_coeffs(coeffs: [BigRational; 8]) -> Self {
        FieldElement { coeffs }
    }

    /// `q·√d` for a basis radicand `d`.
    pub fn surd(q: BigRational, d: u32) -> Option<Self> {
        let i = basis_index(d)?;
        let mut e = Self::zero();
        e.coeffs[i] = q;
        Some(e)
    }

    /// `√d` for a basis radicand `d`. Panics on other radicands.
    pub fn sqrt_of(d: u32) -> Self {
        Self::surd(BigRational::one(), d).expect("radicand outside the basis")
    }

    pub fn coeffs(&self) -> &[BigRational; 8] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub(crate) fn support(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn term_count(&self) -> usize {
        self.support().count()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            if !c.is_zero() {
                *c *= q;
            }
        }
        out
    }

    pub fn sign(&self) -> Sign {
        approx::sign(self)
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Sign::Negative
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Enclosure of the real value of width at most `2^-precision`.
    pub fn approx(&self, precision: u32) -> Interval {
        approx::approx(self, precision)
    }

    /// Nearest-ish `f64` value; for reporting and numeric evidence only.
    pub fn to_f64(&self) -> f64 {
        self.support()
            .map(|(i, c)| c.to_f64().unwrap_or(f64::NAN) * f64::from(RADICANDS[i]).sqrt())
            .sum()
    }

    /// Positive square root inside the field, if one exists.
    pub fn sqrt(&self) -> Result<Option<Self>, FieldError> {
        sqrt::sqrt(self)
    }

    /// The matrix of multiplication by `self` on the basis: column `j` holds
    /// the coordinates of `self · basis_j`.
    pub fn multiplication_matrix(&self) -> [[BigRational; 8]; 8] {
        let mut m: [[BigRational; 8]; 8] = Default::default();
        for j in 0..8 {
            for (i, c) in self.support() {
                let (k, f) = basis_product(i, j);
                m[k][j] += c * BigRational::from_integer(BigInt::from(f));
            }
        }
        m
    }

    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let mut terms = self.support();
        let (i, c) = terms.next().expect("nonzero element");
        if terms.next().is_none() {
            // (c√d)^-1 = √d / (c·d)
            let d = BigRational::from_integer(BigInt::from(RADICANDS[i]));
            let mut out = Self::zero();
            out.coeffs[i] = (c * &d).recip();
            return Ok(out);
        }
        let mut m = self.multiplication_matrix();
        let mut rhs: [BigRational; 8] = Default::default();
        rhs[0] = BigRational::one();
        solve_8x8(&mut m, &mut rhs);
        Ok(FieldElement { coeffs: rhs })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under the Galois automorphism negating the radicals whose
    /// prime bits are set in `mask` (bit 0: √2, bit 1: √3, bit 2: √5).
    pub fn conjugate(&self, mask: u8) -> Self {
        let mut out = self.clone();
        for i in 0..8 {
            if (MASKS[i] & mask).count_ones() % 2 == 1 {
                out.coeffs[i] = -out.coeffs[i].clone();
            }
        }
        out
    }
}

fn basis_product(i: usize, j: usize) -> (usize, u32) {
    let (a, b) = (MASKS[i], MASKS[j]);
    (MASK_INDEX[(a ^ b) as usize], common_factor(a & b))
}

// Gaussian elimination; the matrix of a nonzero element is invertible.
fn solve_8x8(m: &mut [[BigRational; 8]; 8], rhs: &mut [BigRational; 8]) {
    for col in 0..8 {
        let pivot = (col..8)
            .find(|&r| !m[r][col].is_zero())
            .expect("multiplication matrix of a nonzero element is invertible");
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].recip();
        for k in col..8 {
            if !m[col][k].is_zero() {
                m[col][k] *= &inv;
            }
        }
        rhs[col] *= &inv;
        for r in 0..8 {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for k in col..8 {
                if !m[col][k].is_zero() {
                    let t = &f * &m[col][k];
                    m[r][k] -= t;
                }
            }
            let t = &f * &rhs[col];
            rhs[r] -= t;
        }
    }
}

impl Default for FieldElement {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for FieldElement {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        let mut out = FieldElement::zero();
        for (i, a) in self.support() {
            for (j, b) in rhs.support() {
                let (k, f) = basis_product(i, j);
                let t = a * b;
                if f == 1 {
                    out.coeffs[k] += t;
                } else {
                    out.coeffs[k] += t * BigInt::from(f);
                }
            }
        }
        out
    }
}

impl<'a> Div<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    /// Panics on division by zero; see [`FieldElement::checked_div`].
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            if !c.is_zero() {
                *c = -c.clone();
            }
        }
        out
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        for (i, c) in rhs.support() {
            self.coeffs[i] += c;
        }
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        for (i, c) in rhs.support() {
            self.coeffs[i] -= c;
        }
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        *self = &*self * rhs;
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        *self += &rhs;
    }
}

impl SubAssign for FieldElement {
    fn sub_assign(&mut self, rhs: FieldElement) {
        *self -= &rhs;
    }
}

impl std::iter::Sum for FieldElement {
    fn sum<I: Iterator<Item = FieldElement>>(iter: I) -> Self {
        let mut acc = FieldElement::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Order of the real embedding.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>, bare: bool) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else if bare {
        write!(f, "{}/{}", q.numer(), q.denom())
    } else {
        write!(f, "({}/{})", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.support() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            if i == 0 {
                fmt_rational(&mag, f, true)?;
            } else if mag.is_one() {
                write!(f, "sqrt{}", RADICANDS[i])?;
            } else {
                fmt_rational(&mag, f, false)?;
                write!(f, "*sqrt{}", RADICANDS[i])?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

impl std::str::FromStr for FieldElement {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse::parse_element(s)
    }
}
