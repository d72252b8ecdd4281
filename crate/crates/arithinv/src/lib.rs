//! Hilbert symbols, Hasse invariants and quaternion ramification sets of
//! rational quadratic forms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use exactfield::FieldElement;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

mod parse;

pub use parse::{parse_form, parse_rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("zero argument")]
    Zero,
    #[error("{0} is not a valid place")]
    InvalidPlace(u64),
    #[error("expected signature (4,1), found ({positive},{negative})")]
    Signature { positive: usize, negative: usize },
    #[error("expected a symmetric {0}x{0} matrix")]
    Shape(usize),
    #[error("degenerate form")]
    Degenerate,
    #[error("entry {0} is not rational")]
    Irrational(String),
    #[error("ramification set {0} has odd cardinality")]
    OddRamification(String),
    #[error("no basis of cyclic-product vectors found")]
    NoBasis,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, ArithError>;

/// A place of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl Place {
    pub fn prime(p: u64) -> Result<Place> {
        if is_prime(p) {
            Ok(Place::Prime(p))
        } else {
            Err(ArithError::InvalidPlace(p))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Place {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(Place::Infinity),
            t => Place::prime(t.parse().map_err(|_| ArithError::Parse { line: 0, message: format!("bad place '{t}'") })?),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `n ≠ 0` as `p^k · m` with `p ∤ m`.
fn split(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut k = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return (k, m);
        }
        m = q;
        k += 1;
    }
}

/// Valuation and unit part of a nonzero rational at `p`, the unit part
/// returned as an integer in the same square class modulo `p`-adic units
/// (numerator times denominator).
fn local_parts(q: &BigRational, p: &BigInt) -> (i64, BigInt) {
    let (a, u) = split(q.numer(), p);
    let (b, w) = split(q.denom(), p);
    (i64::from(a) - i64::from(b), u * w)
}

fn legendre(a: &BigInt, p: &BigInt) -> i8 {
    let e = (p - 1u32) / 2u32;
    let r = a.mod_floor(p).modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

fn mod8(u: &BigInt) -> u32 {
    u.mod_floor(&BigInt::from(8)).to_u32().expect("small")
}

/// The Hilbert symbol `(a, b)_v`: `+1` iff `a·x² + b·y² = z²` has a
/// nontrivial solution over the completion of Q at `v`.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(ArithError::Zero);
    }
    match place {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Prime(p) => {
            if !is_prime(p) {
                return Err(ArithError::InvalidPlace(p));
            }
            let pb = BigInt::from(p);
            let (alpha, u) = local_parts(a, &pb);
            let (beta, v) = local_parts(b, &pb);
            if p == 2 {
                let eps = |x: &BigInt| ((mod8(x) - 1) / 2) % 2;
                let omega = |x: &BigInt| {
                    let r = mod8(x);
                    ((r * r - 1) / 8) % 2
                };
                let e = eps(&u) * eps(&v) + (alpha.rem_euclid(2) as u32) * omega(&v) + (beta.rem_euclid(2) as u32) * omega(&u);
                Ok(if e.is_multiple_of(2) { 1 } else { -1 })
            } else {
                let mut s: i8 = if (alpha * beta).rem_euclid(2) == 1 && (p - 1) / 2 % 2 == 1 { -1 } else { 1 };
                if beta.rem_euclid(2) == 1 {
                    s *= legendre(&u, &pb);
                }
                if alpha.rem_euclid(2) == 1 {
                    s *= legendre(&v, &pb);
                }
                Ok(s)
            }
        }
    }
}

fn small_primes(n: &BigInt, out: &mut BTreeSet<u64>) {
    let mut m = n.abs();
    let mut d = 2u64;
    while !m.is_one() && !m.is_zero() {
        let db = BigInt::from(d);
        if &db * &db > m {
            out.insert(m.to_u64().expect("prime factor fits in u64"));
            break;
        }
        let (_, r) = m.div_rem(&db);
        if r.is_zero() {
            out.insert(d);
            while m.is_multiple_of(&db) {
                m /= &db;
            }
        }
        d += 1;
    }
}

/// The square-free integer in the square class of `q`, with square factors
/// found by trial division and a final perfect-square test.
pub fn square_class(q: &BigRational) -> BigInt {
    let n = q.numer() * q.denom();
    let sign = if n.sign() == Sign::Minus { -BigInt::one() } else { BigInt::one() };
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut d = 2u64;
    while d < 100_000 {
        let db = BigInt::from(d);
        if &db * &db > m {
            break;
        }
        let mut k = 0;
        while m.is_multiple_of(&db) {
            m /= &db;
            k += 1;
        }
        if k % 2 == 1 {
            out *= &db;
        }
        d += 1;
    }
    let r = m.sqrt();
    if &r * &r != m {
        out *= m;
    }
    sign * out
}

/// A nondegenerate rational quadratic form, kept in diagonal shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticFormQ {
    diag: Vec<BigRational>,
}

impl QuadraticFormQ {
    pub fn from_diagonal(diag: Vec<BigRational>) -> Result<QuadraticFormQ> {
        if diag.iter().any(Zero::is_zero) {
            return Err(ArithError::Degenerate);
        }
        Ok(QuadraticFormQ { diag })
    }

    /// Diagonalizes a symmetric Gram matrix by symmetric elimination and
    /// reduces every entry to its square-free representative.
    pub fn from_gram(gram: &[Vec<BigRational>]) -> Result<QuadraticFormQ> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) || (0..n).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
            return Err(ArithError::Shape(n));
        }
        let mut g: Vec<Vec<BigRational>> = gram.to_vec();
        let mut diag = Vec::with_capacity(n);
        for k in 0..n {
            if g[k][k].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !g[j][j].is_zero()) {
                    g.swap(k, j);
                    for row in g.iter_mut() {
                        row.swap(k, j);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !g[k][j].is_zero()) {
                    for i in 0..n {
                        let x = g[j][i].clone();
                        g[k][i] += x;
                    }
                    for row in g.iter_mut() {
                        let x = row[j].clone();
                        row[k] += x;
                    }
                } else {
                    return Err(ArithError::Degenerate);
                }
            }
            let pivot = g[k][k].clone();
            let row = g[k].clone();
            for i in k + 1..n {
                let f = &row[i] / &pivot;
                for j in k + 1..n {
                    let x = &f * &row[j];
                    g[i][j] -= x;
                }
            }
            diag.push(BigRational::from_integer(square_class(&pivot)));
        }
        QuadraticFormQ::from_diagonal(diag)
    }

    pub fn diagonal(&self) -> &[BigRational] {
        &self.diag
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Numbers of positive and negative diagonal entries.
    pub fn signature(&self) -> (usize, usize) {
        let pos = self.diag.iter().filter(|a| a.is_positive()).count();
        (pos, self.diag.len() - pos)
    }

    pub fn discriminant(&self) -> BigRational {
        self.diag.iter().fold(BigRational::one(), |acc, a| acc * a)
    }

    /// Primes at which some entry is not a unit, together with 2.
    pub fn bad_primes(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::from([2]);
        for a in &self.diag {
            small_primes(a.numer(), &mut out);
            small_primes(a.denom(), &mut out);
        }
        out
    }

    /// Every place where an invariant of this form can be nontrivial.
    pub fn places(&self) -> Vec<Place> {
        self.bad_primes().into_iter().map(Place::Prime).chain([Place::Infinity]).collect()
    }
}

impl fmt::Display for QuadraticFormQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.diag.iter().map(ToString::to_string).collect();
        write!(f, "<{}>", entries.join(", "))
    }
}

/// `∏_{i<j} (a_i, a_j)_v`.
pub fn hasse_invariant(f: &QuadraticFormQ, place: Place) -> Result<i8> {
    let d = f.diagonal();
    let mut s = 1;
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            s *= hilbert_symbol(&d[i], &d[j], place)?;
        }
    }
    Ok(s)
}

/// `∏_{i≤j} (a_i, a_j)_v`.
pub fn witt_product(f: &QuadraticFormQ, place: Place) -> Result<i8> {
    let d = f.diagonal();
    let mut s = hasse_invariant(f, place)?;
    for a in d {
        s *= hilbert_symbol(a, a, place)?;
    }
    Ok(s)
}

/// How the quaternion class of a quinary form is read off its local
/// invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `ε·(−1,−d)·(−1,−1)` with `ε = ∏_{i≤j}(a_i,a_j)`; equal to the
    /// Hasse invariant `∏_{i<j}` in dimension 5.
    #[default]
    Hasse,
    /// The class of the even Clifford algebra, `∏_{i<j}(a_i,a_j)·(−1,−1)`.
    EvenClifford,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Hasse => "hasse",
            Convention::EvenClifford => "even-clifford",
        })
    }
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Convention, String> {
        match s {
            "hasse" => Ok(Convention::Hasse),
            "even-clifford" => Ok(Convention::EvenClifford),
            _ => Err(format!("unknown convention '{s}' (expected hasse or even-clifford)")),
        }
    }
}

fn minus_one() -> BigRational {
    -BigRational::one()
}

/// The local quaternion class `±1` of a quinary form at `place`.
pub fn local_class(f: &QuadraticFormQ, place: Place, convention: Convention) -> Result<i8> {
    let m1 = minus_one();
    match convention {
        Convention::Hasse => {
            let eps = witt_product(f, place)?;
            let d = f.discriminant();
            Ok(eps * hilbert_symbol(&m1, &-d, place)? * hilbert_symbol(&m1, &m1, place)?)
        }
        Convention::EvenClifford => Ok(hasse_invariant(f, place)? * hilbert_symbol(&m1, &m1, place)?),
    }
}

/// A finite set of places, printed in increasing order with `inf` last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RamificationSet(pub BTreeSet<Place>);

impl RamificationSet {
    pub fn contains(&self, p: Place) -> bool {
        self.0.contains(&p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for RamificationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

impl FromIterator<Place> for RamificationSet {
    fn from_iter<I: IntoIterator<Item = Place>>(iter: I) -> Self {
        RamificationSet(iter.into_iter().collect())
    }
}

pub fn check_signature(f: &QuadraticFormQ) -> Result<()> {
    match f.signature() {
        (4, 1) => Ok(()),
        (positive, negative) => Err(ArithError::Signature { positive, negative }),
    }
}

/// Places where the quaternion algebra of a signature `(4,1)` form ramifies.
pub fn ramification_set(f: &QuadraticFormQ, convention: Convention) -> Result<RamificationSet> {
    check_signature(f)?;
    let mut out = BTreeSet::new();
    for place in f.places() {
        if local_class(f, place, convention)? == -1 {
            out.insert(place);
        }
    }
    let set = RamificationSet(out);
    if set.len() % 2 == 1 {
        return Err(ArithError::OddRamification(set.to_string()));
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Incommensurable,
    /// Equal ramification sets: this invariant does not separate the forms.
    Indistinguishable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Incommensurable => "incommensurable",
            Verdict::Indistinguishable => "indistinguishable-by-this-invariant",
        })
    }
}

pub fn commensurability_verdict(f1: &QuadraticFormQ, f2: &QuadraticFormQ, convention: Convention) -> Result<Verdict> {
    let (a, b) = (ramification_set(f1, convention)?, ramification_set(f2, convention)?);
    Ok(if a == b { Verdict::Indistinguishable } else { Verdict::Incommensurable })
}

/// The rational Gram matrix of Vinberg's cyclic-product vectors
/// `g_{0 i_1} g_{i_1 i_2} ⋯ g_{i_{k-1} i_k} e_{i_k}` for a Gram matrix whose
/// cyclic products are rational. Paths are explored breadth-first and kept
/// while they enlarge a nondegenerate span.
pub fn cyclic_product_gram(gram: &[Vec<FieldElement>], rank: usize) -> Result<Vec<Vec<BigRational>>> {
    let n = gram.len();
    if gram.iter().any(|r| r.len() != n) {
        return Err(ArithError::Shape(n));
    }
    let rational = |x: &FieldElement| x.as_rational().cloned().ok_or_else(|| ArithError::Irrational(x.to_string()));
    // A path vector is (coefficient, end index); ⟨(c,i),(c',j)⟩ = c·c'·g_ij.
    let product = |a: &(FieldElement, usize), b: &(FieldElement, usize)| &(&a.0 * &b.0) * &gram[a.1][b.1];
    let mut chosen: Vec<(FieldElement, usize)> = Vec::new();
    let mut frontier = vec![(FieldElement::one(), 0usize)];
    let mut visited_ends = 0;
    for _ in 0..=n {
        let mut next = Vec::new();
        for v in &frontier {
            let mut trial = chosen.clone();
            trial.push(v.clone());
            let m: Vec<Vec<BigRational>> =
                trial.iter().map(|a| trial.iter().map(|b| rational(&product(a, b))).collect()).collect::<Result<_>>()?;
            if !determinant(m).is_zero() {
                chosen = trial;
                if chosen.len() == rank {
                    return chosen.iter().map(|a| chosen.iter().map(|b| rational(&product(a, b))).collect()).collect();
                }
            }
            for j in 0..n {
                if j != v.1 && !gram[v.1][j].is_zero() {
                    next.push((&v.0 * &gram[v.1][j], j));
                }
            }
        }
        visited_ends += frontier.len();
        if visited_ends > 100_000 {
            break;
        }
        next.truncate(4 * n * n);
        frontier = next;
    }
    Err(ArithError::NoBasis)
}

fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else { return BigRational::zero() };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= &m[k][k];
        for i in k + 1..n {
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let x = &f * &m[k][j];
                m[i][j] -= x;
            }
        }
    }
    det
}
