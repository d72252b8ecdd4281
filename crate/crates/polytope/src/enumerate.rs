use std::collections::HashMap;

use exactfield::{FieldElement, Sign};
use lorentz::{determinant, LorentzVector};
use rayon::prelude::*;

use crate::{Polytope, PolytopeError, Vertex};

/// A vector `x` with `⟨x, v⟩ = 0` for each of the `d − 1` given vectors of
/// `R^{1,d-1}`, built from signed maximal minors. It is zero exactly when
/// the inputs are linearly dependent.
pub fn lorentz_orthogonal(vs: &[&LorentzVector]) -> LorentzVector {
    let d = vs[0].dim();
    assert_eq!(vs.len() + 1, d, "need d - 1 vectors");
    let rows: Vec<Vec<FieldElement>> = vs
        .iter()
        .map(|v| {
            let mut r = v.coords().to_vec();
            r[0] = -&r[0];
            r
        })
        .collect();
    let coords = (0..d)
        .map(|j| {
            let minor: Vec<Vec<FieldElement>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, c)| c.clone()).collect())
                .collect();
            let m = determinant(&minor);
            if j % 2 == 1 { -m } else { m }
        })
        .collect();
    LorentzVector::new(coords)
}

fn lorentz_orthogonal_f64(vs: &[Vec<f64>]) -> Vec<f64> {
    let d = vs[0].len();
    let rows: Vec<Vec<f64>> = vs
        .iter()
        .map(|v| {
            let mut r = v.clone();
            r[0] = -r[0];
            r
        })
        .collect();
    (0..d)
        .map(|j| {
            let mut minor: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &c)| c).collect())
                .collect();
            let m = det_f64(&mut minor);
            if j % 2 == 1 { -m } else { m }
        })
        .collect()
}

fn det_f64(a: &mut [Vec<f64>]) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

fn dot_f64(x: &[f64], y: &[f64]) -> f64 {
    -x[0] * y[0] + x[1..].iter().zip(&y[1..]).map(|(a, b)| a * b).sum::<f64>()
}

fn norm_f64(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

const TOL: f64 = 1e-9;

/// Floating-point screen: `false` means the subset certainly yields no
/// vertex, `true` means it must be checked exactly.
fn plausible(rows: &[Vec<f64>], normals: &[Vec<f64>]) -> bool {
    let x = lorentz_orthogonal_f64(rows);
    let scale: f64 = rows.iter().map(|r| norm_f64(r)).product();
    let xn = norm_f64(&x);
    if xn <= TOL * scale.max(1.0) {
        return true;
    }
    if dot_f64(&x, &x) > TOL * xn * xn {
        return false;
    }
    if x[0].abs() <= TOL * xn {
        return true;
    }
    let s = x[0].signum();
    normals.iter().all(|u| s * dot_f64(&x, u) <= TOL * xn * norm_f64(u))
}

/// All vertices, finite and ideal, sorted by facet set.
pub fn enumerate_vertices(p: &Polytope) -> Vec<Vertex> {
    let normals = p.normals();
    let d = p.ambient_dim();
    let free = d - 1 - usize::from(p.constraint().is_some());
    let normals_f: Vec<Vec<f64>> = normals.iter().map(LorentzVector::to_f64).collect();
    let constraint_f = p.constraint().map(LorentzVector::to_f64);
    let found: Vec<(LorentzVector, bool)> = combinations(normals.len(), free)
        .into_par_iter()
        .filter_map(|subset| {
            let mut rows_f: Vec<Vec<f64>> = subset.iter().map(|&i| normals_f[i].clone()).collect();
            rows_f.extend(constraint_f.clone());
            if !plausible(&rows_f, &normals_f) {
                return None;
            }
            let mut rows: Vec<&LorentzVector> = subset.iter().map(|&i| &normals[i]).collect();
            rows.extend(p.constraint());
            let x = lorentz_orthogonal(&rows);
            if x.is_zero() {
                return None;
            }
            let nsq = x.norm_sq();
            if nsq.is_positive() {
                return None;
            }
            let x = if x.get(0).is_negative() { x.neg() } else { x };
            if normals.iter().any(|u| x.dot(u).is_positive()) {
                return None;
            }
            Some((x.canonical_projective(), nsq.is_zero()))
        })
        .collect();
    let mut unique: HashMap<LorentzVector, bool> = HashMap::new();
    for (x, ideal) in found {
        unique.insert(x, ideal);
    }
    let mut vertices: Vec<Vertex> = unique
        .into_iter()
        .map(|(point, ideal)| {
            let facets = (0..normals.len()).filter(|&i| point.dot(&normals[i]).is_zero()).collect();
            Vertex { point, ideal, facets }
        })
        .collect();
    vertices.sort_by(|a, b| a.facets.cmp(&b.facets));
    vertices
}

/// The barycenter of the vertex representatives, checked to be strictly
/// inside every half-space.
pub(crate) fn interior_point(p: &Polytope, vertices: &[Vertex]) -> Result<LorentzVector, PolytopeError> {
    let Some(first) = vertices.first() else {
        return Err(PolytopeError::EmptyInterior);
    };
    let c = vertices[1..].iter().fold(first.point.clone(), |acc, v| acc.add(&v.point));
    if p.normals().iter().all(|u| c.dot(u).sign() == Sign::Negative) {
        Ok(c)
    } else {
        Err(PolytopeError::EmptyInterior)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(24, 4).len(), 10626);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn orthogonal_vector_is_orthogonal() {
        let a = LorentzVector::parse(&["1", "sqrt2", "0", "0"]).unwrap();
        let b = LorentzVector::parse(&["0", "1", "1", "sqrt3"]).unwrap();
        let c = LorentzVector::parse(&["2", "0", "1", "1/2"]).unwrap();
        let x = lorentz_orthogonal(&[&a, &b, &c]);
        assert!(!x.is_zero());
        for v in [&a, &b, &c] {
            assert!(x.dot(v).is_zero());
        }
        assert!(lorentz_orthogonal(&[&a, &a, &c]).is_zero());
    }
}
