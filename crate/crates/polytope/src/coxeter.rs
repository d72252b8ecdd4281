use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{AngleClass, Analysis, Cosine, PolytopeError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeStyle {
    /// `π/3`.
    Plain,
    /// `π/m` for `m ≥ 4`.
    Labeled(u32),
    Thick,
    Dotted(Cosine),
    General(Cosine),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramEdge {
    pub a: usize,
    pub b: usize,
    pub style: EdgeStyle,
}

/// Generalized Coxeter diagram: one node per facet, no edge for right angles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterDiagram {
    pub nodes: Vec<String>,
    pub edges: Vec<DiagramEdge>,
}

impl fmt::Display for CoxeterDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes {}", self.nodes.join(" "))?;
        for e in &self.edges {
            let style = match &e.style {
                EdgeStyle::Plain => "plain".to_string(),
                EdgeStyle::Labeled(m) => format!("label {m}"),
                EdgeStyle::Thick => "thick".to_string(),
                EdgeStyle::Dotted(c) => format!("dotted cosh={c}"),
                EdgeStyle::General(c) => format!("general cos={c}"),
            };
            writeln!(f, "edge {} {} {style}", e.a, e.b)?;
        }
        Ok(())
    }
}

/// The first ridge whose angle is not `π/m`; ideal ridges (only possible
/// in dimension 2) must be tangent instead.
fn coxeter_ridges_ok(a: &Analysis) -> Result<Option<(usize, AngleClass)>, PolytopeError> {
    Ok(a.ridge_angles()?.into_iter().find(|(f, c)| {
        if a.lattice().face(*f).ideal {
            *c != AngleClass::Tangent
        } else {
            !c.is_submultiple()
        }
    }))
}

pub(crate) fn coxeter_check(a: &Analysis) -> Result<(bool, CoxeterDiagram), PolytopeError> {
    let p = a.polytope();
    let ok = coxeter_ridges_ok(a)?.is_none();
    let nodes = (0..p.facet_count()).map(|i| p.display_label(i)).collect();
    let mut edges = Vec::new();
    for i in 0..p.facet_count() {
        for j in i + 1..p.facet_count() {
            let style = match p.dihedral_angle(i, j)? {
                AngleClass::Submultiple(2) => continue,
                AngleClass::Submultiple(3) => EdgeStyle::Plain,
                AngleClass::Submultiple(m) => EdgeStyle::Labeled(m),
                AngleClass::Tangent => EdgeStyle::Thick,
                AngleClass::Ultraparallel(c) => EdgeStyle::Dotted(c),
                AngleClass::General(c) => EdgeStyle::General(c),
            };
            edges.push(DiagramEdge { a: i, b: j, style });
        }
    }
    Ok((ok, CoxeterDiagram { nodes, edges }))
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Order of the finite Coxeter group with the given symmetric matrix of
/// exponents (`m[i][j]` with `m[i][i] = 1`), or `None` if it is infinite
/// or of an unsupported type.
pub fn coxeter_group_order(m: &[Vec<u32>]) -> Option<u64> {
    let n = m.len();
    let mut seen = vec![false; n];
    let mut order = 1u64;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let x = comp[k];
            for y in 0..n {
                if !seen[y] && m[x][y] >= 3 {
                    seen[y] = true;
                    comp.push(y);
                }
            }
            k += 1;
        }
        order = order.checked_mul(component_order(m, &comp)?)?;
    }
    Some(order)
}

fn component_order(m: &[Vec<u32>], comp: &[usize]) -> Option<u64> {
    let r = comp.len();
    let mut labels = Vec::new();
    let mut degree = vec![0usize; r];
    for a in 0..r {
        for b in a + 1..r {
            let l = m[comp[a]][comp[b]];
            if l >= 3 {
                labels.push(l);
                degree[a] += 1;
                degree[b] += 1;
            }
        }
    }
    if r == 1 {
        return Some(2);
    }
    if r == 2 {
        return Some(2 * u64::from(labels[0]));
    }
    if labels.len() != r - 1 {
        return None;
    }
    let max_deg = *degree.iter().max()?;
    if max_deg == 3 {
        // Star with three arms: only D4 among rank ≤ 4.
        return (r == 4 && labels.iter().all(|&l| l == 3)).then_some(192);
    }
    if max_deg > 3 {
        return None;
    }
    // A path: read labels in order from one end.
    let start = (0..r).find(|&a| degree[a] == 1)?;
    let mut path = vec![start];
    let mut seq = Vec::new();
    while path.len() < r {
        let cur = *path.last()?;
        let next = (0..r).find(|&b| !path.contains(&b) && m[comp[cur]][comp[b]] >= 3)?;
        seq.push(m[comp[cur]][comp[next]]);
        path.push(next);
    }
    let rev: Vec<u32> = seq.iter().rev().copied().collect();
    let n = r as u64;
    let is = |p: &[u32]| seq == p || rev == p;
    let fours = seq.iter().filter(|&&l| l == 4).count();
    let fives = seq.iter().filter(|&&l| l == 5).count();
    let others = seq.iter().filter(|&&l| l != 3 && l != 4 && l != 5).count();
    if others > 0 {
        return None;
    }
    if fours == 0 && fives == 0 {
        return Some(factorial(n + 1));
    }
    if fours == 1 && fives == 0 && (seq[0] == 4 || seq[r - 2] == 4) {
        return Some((1u64 << n) * factorial(n));
    }
    if is(&[3, 4, 3]) {
        return Some(1152);
    }
    if is(&[5, 3]) {
        return Some(120);
    }
    if is(&[5, 3, 3]) {
        return Some(14400);
    }
    None
}

/// Order of the reflection group generated by the given facets.
pub(crate) fn face_group_order(a: &Analysis, facets: &[usize]) -> Result<u64, PolytopeError> {
    let p = a.polytope();
    let k = facets.len();
    let mut m = vec![vec![1u32; k]; k];
    for x in 0..k {
        for y in x + 1..k {
            match p.dihedral_angle(facets[x], facets[y])? {
                AngleClass::Submultiple(e) => {
                    m[x][y] = e;
                    m[y][x] = e;
                }
                _ => return Err(PolytopeError::NonSphericalStabilizer(facets.to_vec())),
            }
        }
    }
    coxeter_group_order(&m).ok_or_else(|| PolytopeError::NonSphericalStabilizer(facets.to_vec()))
}

pub(crate) fn orbifold_euler_characteristic(a: &Analysis) -> Result<BigRational, PolytopeError> {
    if let Some((f, angle)) = coxeter_ridges_ok(a)? {
        let fs = &a.lattice().face(f).facets;
        return Err(PolytopeError::NotCoxeter(fs[0], fs[1], angle.to_string()));
    }
    let mut chi = BigRational::zero();
    for face in a.lattice().faces() {
        if face.ideal {
            continue;
        }
        let order = face_group_order(a, &face.facets)?;
        let term = BigRational::new(BigInt::one(), BigInt::from(order));
        if face.dim % 2 == 0 {
            chi += term;
        } else {
            chi -= term;
        }
    }
    Ok(chi)
}

/// The rational `c` with `Vol = c·π^{n/2}·χ` in even dimension `n`.
pub(crate) fn gauss_bonnet_coefficient(n: usize) -> Option<BigRational> {
    if n % 2 == 1 {
        return None;
    }
    let half = (n / 2) as u32;
    let num = BigInt::from(-2).pow(half);
    let den: BigInt = (1..n).step_by(2).map(BigInt::from).product();
    Some(BigRational::new(num, den))
}
