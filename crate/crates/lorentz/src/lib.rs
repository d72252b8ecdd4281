//! Exact Lorentzian linear algebra in `R^{1,n}` with coordinates in
//! `Q(√2, √3, √5)`.
//!
//! The bilinear form is `⟨x, y⟩ = −x0·y0 + x1·y1 + … + xn·yn`.

use std::fmt;

use exactfield::{FieldElement, Sign};
use thiserror::Error;

pub mod subspace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LorentzError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("zero vector has no causal type")]
    ZeroVector,
    #[error("reflection needs a space-like vector")]
    NotSpaceLike,
    #[error("matrix is not a future-preserving Lorentz isometry")]
    NotIsometry,
    #[error("matrix is not square")]
    NotSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VectorClass {
    TimeLike,
    LightLike,
    SpaceLike,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LorentzVector {
    coords: Vec<FieldElement>,
}

impl LorentzVector {
    pub fn new(coords: Vec<FieldElement>) -> Self {
        LorentzVector { coords }
    }

    pub fn zero(dim: usize) -> Self {
        LorentzVector { coords: vec![FieldElement::zero(); dim] }
    }

    /// The standard basis vector `e_i` of `R^{1,dim-1}`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coords[i] = FieldElement::one();
        v
    }

    /// Builds a vector from coordinates written in the element grammar.
    pub fn parse(coords: &[&str]) -> Result<Self, exactfield::ParseError> {
        let coords = coords.iter().map(|s| s.parse()).collect::<Result<Vec<_>, _>>()?;
        Ok(LorentzVector { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &FieldElement {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElement::is_zero)
    }

    pub fn dot(&self, other: &LorentzVector) -> FieldElement {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let mut acc = -(&self.coords[0] * &other.coords[0]);
        for (a, b) in self.coords[1..].iter().zip(&other.coords[1..]) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> FieldElement {
        self.dot(self)
    }

    pub fn classify(&self) -> Result<VectorClass, LorentzError> {
        if self.is_zero() {
            return Err(LorentzError::ZeroVector);
        }
        Ok(match self.norm_sq().sign() {
            Sign::Negative => VectorClass::TimeLike,
            Sign::Zero => VectorClass::LightLike,
            Sign::Positive => VectorClass::SpaceLike,
        })
    }

    pub fn scale(&self, s: &FieldElement) -> LorentzVector {
        LorentzVector { coords: self.coords.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &LorentzVector) -> LorentzVector {
        LorentzVector { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &LorentzVector) -> LorentzVector {
        LorentzVector { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> LorentzVector {
        LorentzVector { coords: self.coords.iter().map(|c| -c).collect() }
    }

    /// Representative of the ray with `x0 = 1`, or with first nonzero
    /// coordinate 1 when `x0 = 0`.
    pub fn canonical_projective(&self) -> LorentzVector {
        let lead = self.coords.iter().find(|c| !c.is_zero()).expect("nonzero vector");
        let inv = lead.inverse().expect("nonzero lead");
        self.scale(&inv)
    }

    /// Whether the two vectors span the same ray (same direction, positive ratio).
    pub fn same_ray(&self, other: &LorentzVector) -> bool {
        self.positive_ratio(other).is_some()
    }

    /// The `λ > 0` with `other = λ·self`, if any.
    pub fn positive_ratio(&self, other: &LorentzVector) -> Option<FieldElement> {
        let k = self.coords.iter().position(|c| !c.is_zero())?;
        let lambda = other.coords[k].checked_div(&self.coords[k]).ok()?;
        if !lambda.is_positive() {
            return None;
        }
        let ok = self
            .coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| (a * &lambda) == *b);
        ok.then_some(lambda)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(FieldElement::to_f64).collect()
    }
}

impl fmt::Display for LorentzVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for LorentzVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn minkowski_product(u: &LorentzVector, v: &LorentzVector) -> Result<FieldElement, LorentzError> {
    if u.dim() != v.dim() {
        return Err(LorentzError::DimensionMismatch(u.dim(), v.dim()));
    }
    Ok(u.dot(v))
}

pub fn classify_vector(v: &LorentzVector) -> Result<VectorClass, LorentzError> {
    v.classify()
}

/// Determinant by dynamic programming over column subsets; division-free.
pub fn determinant(rows: &[Vec<FieldElement>]) -> FieldElement {
    let n = rows.len();
    if n == 0 {
        return FieldElement::one();
    }
    let mut table: Vec<Option<FieldElement>> = vec![None; 1 << n];
    table[0] = Some(FieldElement::one());
    for mask in 0usize..(1 << n) {
        let Some(acc) = table[mask].take() else { continue };
        if acc.is_zero() {
            continue;
        }
        let k = mask.count_ones() as usize;
        if k == n {
            table[mask] = Some(acc);
            continue;
        }
        for j in 0..n {
            if mask & (1 << j) != 0 || rows[k][j].is_zero() {
                continue;
            }
            let above = (mask >> (j + 1)).count_ones();
            let mut t = &acc * &rows[k][j];
            if above % 2 == 1 {
                t = -t;
            }
            let slot = &mut table[mask | (1 << j)];
            match slot {
                Some(s) => *s += &t,
                None => *slot = Some(t),
            }
        }
        table[mask] = Some(acc);
    }
    table[(1 << n) - 1].clone().unwrap_or_else(FieldElement::zero)
}

/// Solves `A·X = B` over the field; `None` when `A` is singular.
pub fn solve(mut a: Vec<Vec<FieldElement>>, mut b: Vec<Vec<FieldElement>>) -> Option<Vec<Vec<FieldElement>>> {
    let n = a.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        b.swap(p, c);
        let inv = a[c][c].inverse().ok()?;
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for x in b[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for k in 0..n {
                let t = &f * &a[c][k];
                a[r][k] -= &t;
            }
            for k in 0..b[r].len() {
                let t = &f * &b[c][k];
                b[r][k] -= &t;
            }
        }
    }
    Some(b)
}

fn matmul(a: &[Vec<FieldElement>], b: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![FieldElement::zero(); m]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] += &(aik * &b[k][j]);
                }
            }
        }
    }
    out
}

/// Checks `GᵀJG = J` and that `G·e0` has positive first coordinate.
pub fn is_isometry(rows: &[Vec<FieldElement>]) -> bool {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return false;
    }
    for i in 0..n {
        for j in i..n {
            // (GᵀJG)_ij = −g0i·g0j + Σ_k gki·gkj
            let mut s = -(&rows[0][i] * &rows[0][j]);
            for row in &rows[1..] {
                if !row[i].is_zero() && !row[j].is_zero() {
                    s += &(&row[i] * &row[j]);
                }
            }
            let expected = if i != j {
                FieldElement::zero()
            } else if i == 0 {
                FieldElement::from_int(-1)
            } else {
                FieldElement::one()
            };
            if s != expected {
                return false;
            }
        }
    }
    rows[0][0].is_positive()
}

/// A linear isometry of `R^{1,n}` preserving the future light cone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LorentzMap {
    rows: Vec<Vec<FieldElement>>,
    det_sign: i8,
}

impl LorentzMap {
    pub fn identity(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { FieldElement::one() } else { FieldElement::zero() }).collect())
            .collect();
        LorentzMap { rows, det_sign: 1 }
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Self, LorentzError> {
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(LorentzError::NotSquare);
        }
        if !is_isometry(&rows) {
            return Err(LorentzError::NotIsometry);
        }
        let det_sign = determinant(&rows).sign().as_i8();
        Ok(LorentzMap { rows, det_sign })
    }

    /// Diagonal map with the given entries.
    pub fn diagonal(entries: &[i64]) -> Result<Self, LorentzError> {
        let n = entries.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { FieldElement::from_int(entries[i]) } else { FieldElement::zero() })
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    /// Coordinate permutation with signs: `x_i ↦ sign_i · x_{perm_i}` is the
    /// output coordinate `i`.
    pub fn signed_permutation(perm: &[usize], signs: &[i64]) -> Result<Self, LorentzError> {
        let n = perm.len();
        let mut rows = vec![vec![FieldElement::zero(); n]; n];
        for i in 0..n {
            rows[i][perm[i]] = FieldElement::from_int(signs[i]);
        }
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn det_sign(&self) -> i8 {
        self.det_sign
    }

    pub fn is_identity(&self) -> bool {
        *self == LorentzMap::identity(self.dim())
    }

    pub fn apply(&self, v: &LorentzVector) -> LorentzVector {
        assert_eq!(self.dim(), v.dim(), "dimension mismatch");
        let coords = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = FieldElement::zero();
                for (a, b) in row.iter().zip(v.coords()) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect();
        LorentzVector::new(coords)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LorentzMap) -> LorentzMap {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        LorentzMap { rows: matmul(&self.rows, &other.rows), det_sign: self.det_sign * other.det_sign }
    }

    /// `J·Gᵀ·J`.
    pub fn inverse(&self) -> LorentzMap {
        let n = self.dim();
        let mut rows = vec![vec![FieldElement::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let v = &self.rows[j][i];
                rows[i][j] = if (i == 0) != (j == 0) { -v } else { v.clone() };
            }
        }
        LorentzMap { rows, det_sign: self.det_sign }
    }

    /// Whether the two maps agree on every vector of `span`.
    pub fn agrees_on(&self, other: &LorentzMap, span: &[LorentzVector]) -> bool {
        span.iter().all(|v| self.apply(v) == other.apply(v))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.iter().map(FieldElement::to_f64).collect()).collect()
    }
}

impl fmt::Display for LorentzMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LorentzMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LorentzMap[{self}]")
    }
}

/// The reflection `x ↦ x − 2⟨x,v⟩/⟨v,v⟩ · v` in the hyperplane `v^⊥`.
pub fn reflection(v: &LorentzVector) -> Result<LorentzMap, LorentzError> {
    let nv = v.norm_sq();
    if !nv.is_positive() {
        return Err(LorentzError::NotSpaceLike);
    }
    let n = v.dim();
    let two_over = FieldElement::from_int(2).checked_div(&nv).expect("positive norm");
    let mut rows = vec![vec![FieldElement::zero(); n]; n];
    for i in 0..n {
        let vi = &v.coords()[i] * &two_over;
        for j in 0..n {
            let mut e = &vi * &v.coords()[j];
            if j == 0 {
                e = -e;
            }
            rows[i][j] = if i == j { FieldElement::one() - e } else { -e };
        }
    }
    Ok(LorentzMap { rows, det_sign: -1 })
}
