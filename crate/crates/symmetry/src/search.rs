use std::collections::HashMap;

use exactfield::{FieldElement, Sign};
use lorentz::{solve, LorentzMap, LorentzVector};
use polytope::Analysis;
use rayon::prelude::*;

use crate::{normal_index, Symmetry, SymmetryGroup};

/// Interned normalized Gram entries: `(sign of ⟨u_i,u_j⟩, c²)`.
struct GramCodes {
    codes: Vec<Vec<u32>>,
    /// Sorted row multiset per facet, as an interned code.
    row_class: Vec<u32>,
}

impl GramCodes {
    fn new(normals: &[LorentzVector]) -> Self {
        let n = normals.len();
        let norms: Vec<FieldElement> = normals.iter().map(LorentzVector::norm_sq).collect();
        let mut intern: HashMap<(Sign, FieldElement), u32> = HashMap::new();
        let mut codes = vec![vec![u32::MAX; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let p = normals[i].dot(&normals[j]);
                let sq = &(&p * &p) / &(&norms[i] * &norms[j]);
                let next = intern.len() as u32;
                let c = *intern.entry((p.sign(), sq)).or_insert(next);
                codes[i][j] = c;
                codes[j][i] = c;
            }
        }
        let mut rows: HashMap<Vec<u32>, u32> = HashMap::new();
        let row_class = (0..n)
            .map(|i| {
                let mut r = codes[i].clone();
                r.sort_unstable();
                let next = rows.len() as u32;
                *rows.entry(r).or_insert(next)
            })
            .collect();
        GramCodes { codes, row_class }
    }
}

fn rank(vs: &[&LorentzVector]) -> usize {
    let mut rows: Vec<Vec<FieldElement>> = vs.iter().map(|v| v.coords().to_vec()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else { continue };
        rows.swap(p, r);
        let inv = rows[r][c].inverse().expect("nonzero pivot");
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let f = &rows[k][c] * &inv;
                for j in c..cols {
                    let t = &f * &rows[r][j];
                    rows[k][j] -= &t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Facets of a basis of the ambient space, rarest Gram rows first.
fn choose_basis(normals: &[LorentzVector], gram: &GramCodes) -> Vec<usize> {
    let n = normals.len();
    let mut freq: HashMap<u32, usize> = HashMap::new();
    for &c in &gram.row_class {
        *freq.entry(c).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (freq[&gram.row_class[i]], i));
    let d = normals[0].dim();
    let mut basis: Vec<usize> = Vec::new();
    for i in order {
        let mut trial: Vec<&LorentzVector> = basis.iter().map(|&k| &normals[k]).collect();
        trial.push(&normals[i]);
        if rank(&trial) == trial.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    basis
}

/// The linear map sending `u_b` to `λ_b·u_{img(b)}` for the basis facets,
/// with `λ_b` restoring the norm.
fn candidate(normals: &[LorentzVector], basis: &[usize], images: &[usize]) -> Option<LorentzMap> {
    let d = normals[0].dim();
    let ut: Vec<Vec<FieldElement>> = basis.iter().map(|&b| normals[b].coords().to_vec()).collect();
    let mut vt = Vec::with_capacity(d);
    for (&b, &j) in basis.iter().zip(images) {
        let ratio = &normals[b].norm_sq() / &normals[j].norm_sq();
        let lambda = ratio.sqrt().ok()??;
        vt.push(normals[j].scale(&lambda).coords().to_vec());
    }
    let gt = solve(ut, vt)?;
    let rows = (0..d).map(|i| (0..d).map(|j| gt[j][i].clone()).collect()).collect();
    LorentzMap::from_rows(rows).ok()
}

/// All isometries of the polytope, by backtracking over images of a basis
/// of facets that respect the normalized Gram matrix.
pub fn automorphism_group(a: &Analysis) -> SymmetryGroup {
    let p = a.polytope();
    let normals = p.normals();
    assert!(p.constraint().is_none(), "symmetry search needs an unconstrained polytope");
    let gram = GramCodes::new(normals);
    let basis = choose_basis(normals, &gram);
    let index = normal_index(p);
    let n = normals.len();
    let first: Vec<usize> = (0..n).filter(|&j| gram.row_class[j] == gram.row_class[basis[0]]).collect();
    let found: Vec<Symmetry> = first
        .into_par_iter()
        .flat_map_iter(|j0| {
            let mut out = Vec::new();
            let mut images = vec![j0];
            extend(&gram, &basis, &mut images, &mut |imgs| {
                if let Some(m) = candidate(normals, &basis, imgs) {
                    if let Ok(s) = Symmetry::from_map_indexed(p, &index, m) {
                        out.push(s);
                    }
                }
            });
            out
        })
        .collect();
    SymmetryGroup::from_elements(found)
}

fn extend(gram: &GramCodes, basis: &[usize], images: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    let k = images.len();
    if k == basis.len() {
        visit(images);
        return;
    }
    let b = basis[k];
    for j in 0..gram.row_class.len() {
        if gram.row_class[j] != gram.row_class[b] || images.contains(&j) {
            continue;
        }
        let consistent = (0..k).all(|t| gram.codes[basis[t]][b] == gram.codes[images[t]][j]);
        if consistent {
            images.push(j);
            extend(gram, basis, images, visit);
            images.pop();
        }
    }
}
