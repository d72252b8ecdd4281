//! Floating-point volumes of spherical vertex links.

use std::f64::consts::PI;
use std::fmt;

use gauss_quad::GaussLegendre;
use nalgebra::DMatrix;
use polytope::Analysis;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const DEFAULT_SAMPLES: usize = 10_000_000;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VolumeMethod {
    Quadrature { order: usize },
    MonteCarlo { samples: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeEstimate {
    pub value: f64,
    /// Absolute error bound (difference of two orders, or three standard deviations).
    pub error: f64,
    pub method: VolumeMethod,
}

impl VolumeEstimate {
    pub fn zero() -> Self {
        VolumeEstimate { value: 0.0, error: 0.0, method: VolumeMethod::Quadrature { order: 0 } }
    }

    pub fn add(&self, other: &VolumeEstimate) -> VolumeEstimate {
        let method = match (self.method, other.method) {
            (VolumeMethod::MonteCarlo { samples }, _) | (_, VolumeMethod::MonteCarlo { samples }) => {
                VolumeMethod::MonteCarlo { samples }
            }
            (VolumeMethod::Quadrature { order: a }, VolumeMethod::Quadrature { order: b }) => {
                VolumeMethod::Quadrature { order: a.max(b) }
            }
        };
        VolumeEstimate { value: self.value + other.value, error: self.error + other.error, method }
    }
}

impl fmt::Display for VolumeEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6} +- {:.1e}", self.value, self.error)?;
        match self.method {
            VolumeMethod::Quadrature { order } => write!(f, " (quadrature, order {order})"),
            VolumeMethod::MonteCarlo { samples } => write!(f, " (monte carlo, {samples} samples)"),
        }
    }
}

/// Area of the unit sphere `S^{d-1}` in `R^d`.
pub fn sphere_area(d: usize) -> f64 {
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (d as f64 - 2.0) * sphere_area(d - 2),
    }
}

pub fn lorentz_dot(a: &[f64], b: &[f64]) -> f64 {
    -a[0] * b[0] + a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<f64>()
}

/// An orthonormal basis of the space-like vectors orthogonal to all of `fixed`.
pub fn orthonormal_complement(fixed: &[Vec<f64>], ambient: usize) -> Vec<Vec<f64>> {
    let mut done: Vec<(Vec<f64>, f64)> = Vec::new();
    for u in fixed {
        let mut w = u.clone();
        for (b, bb) in &done {
            let c = lorentz_dot(&w, b) / bb;
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let ww = lorentz_dot(&w, &w);
        if ww.abs() > 1e-12 {
            done.push((w, ww));
        }
    }
    let mut out = Vec::new();
    for k in 0..ambient {
        let mut w = vec![0.0; ambient];
        w[k] = 1.0;
        for (b, bb) in &done {
            let c = lorentz_dot(&w, b) / bb;
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let ww = lorentz_dot(&w, &w);
        if ww > 1e-9 {
            let s = ww.sqrt();
            let unit: Vec<f64> = w.into_iter().map(|x| x / s).collect();
            done.push((unit.clone(), 1.0));
            out.push(unit);
        }
    }
    out
}

fn collapsed_integral(rule: &GaussLegendre, w: &[Vec<f64>]) -> f64 {
    let n = w.len();
    let d = w[0].len();
    let k = n - 1;
    let nodes: Vec<(f64, f64)> = rule.as_node_weight_pairs().iter().map(|&(x, wt)| ((x + 1.0) / 2.0, wt / 2.0)).collect();
    let m = nodes.len();
    let mut total = 0.0;
    let mut idx = vec![0usize; k];
    let mut point = vec![0.0; d];
    loop {
        let mut weight = 1.0;
        let mut rest = 1.0;
        let mut lambdas = Vec::with_capacity(n);
        for &i in &idx {
            let (u, wt) = nodes[i];
            weight *= wt * rest;
            lambdas.push(rest * u);
            rest *= 1.0 - u;
        }
        lambdas.push(rest);
        point.iter_mut().for_each(|x| *x = 0.0);
        for (l, v) in lambdas.iter().zip(w) {
            point.iter_mut().zip(v).for_each(|(x, y)| *x += l * y);
        }
        let r = point.iter().map(|x| x * x).sum::<f64>().sqrt();
        total += weight * r.powi(-(n as i32));
        let mut j = 0;
        loop {
            if j == k {
                return total;
            }
            idx[j] += 1;
            if idx[j] < m {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Volume of the spherical simplex spanned by `n` unit vectors in `R^n`,
/// by tensor Gauss-Legendre quadrature in collapsed coordinates.
pub fn spherical_simplex_volume(vertices: &[Vec<f64>], order: usize) -> VolumeEstimate {
    let n = vertices.len();
    let det = DMatrix::from_fn(n, n, |i, j| vertices[i][j]).determinant().abs();
    if n == 1 {
        return VolumeEstimate { value: 1.0, error: 0.0, method: VolumeMethod::Quadrature { order } };
    }
    let coarse = GaussLegendre::new(order.max(2)).expect("order at least 2");
    let fine = GaussLegendre::new(2 * order.max(2)).expect("order at least 2");
    let a = det * collapsed_integral(&coarse, vertices);
    let b = det * collapsed_integral(&fine, vertices);
    VolumeEstimate { value: b, error: (a - b).abs(), method: VolumeMethod::Quadrature { order: 2 * order.max(2) } }
}

/// Volume of `{t ∈ S^{d-1} : ⟨t, u⟩ ≤ 0 for every u}` by sampling.
pub fn spherical_cone_volume_mc(normals: &[Vec<f64>], d: usize, samples: usize, seed: u64) -> VolumeEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = vec![0.0; d];
    let mut hits = 0usize;
    for _ in 0..samples {
        t.iter_mut().for_each(|x| *x = StandardNormal.sample(&mut rng));
        if normals.iter().all(|u| u.iter().zip(&t).map(|(a, b)| a * b).sum::<f64>() <= 0.0) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples.max(1) as f64;
    let area = sphere_area(d);
    let sigma = (p * (1.0 - p) / samples.max(1) as f64).sqrt();
    VolumeEstimate { value: p * area, error: 3.0 * sigma * area, method: VolumeMethod::MonteCarlo { samples } }
}

/// Volume of the spherical link of finite vertex `v`.
pub fn vertex_link_volume(a: &Analysis, v: usize, samples: usize, seed: u64) -> VolumeEstimate {
    let vertex = &a.vertices()[v];
    let p = a.polytope();
    let mut point = vertex.point.to_f64();
    let s = (-lorentz_dot(&point, &point)).sqrt();
    point.iter_mut().for_each(|x| *x /= s);
    let mut fixed = vec![point.clone()];
    if let Some(w) = p.constraint() {
        fixed.push(w.to_f64());
    }
    let basis = orthonormal_complement(&fixed, point.len());
    let coords = |x: &[f64]| -> Vec<f64> { basis.iter().map(|b| lorentz_dot(x, b)).collect() };
    let d = basis.len();
    let lat = a.lattice();
    let fv = lat.vertex_face(v);
    let edges = lat.superfaces(fv, 1);
    if vertex.facets.len() == d && edges.len() == d {
        let dirs: Vec<Vec<f64>> = edges
            .iter()
            .map(|&e| {
                let other = *lat.face(e).vertices.iter().find(|&&x| x != v).expect("edge has two vertices");
                let w = a.vertices()[other].point.to_f64();
                let c = lorentz_dot(&w, &point);
                let t: Vec<f64> = w.iter().zip(&point).map(|(x, y)| x + c * y).collect();
                let mut t = coords(&t);
                let r = t.iter().map(|x| x * x).sum::<f64>().sqrt();
                t.iter_mut().for_each(|x| *x /= r);
                t
            })
            .collect();
        return spherical_simplex_volume(&dirs, 16);
    }
    let normals: Vec<Vec<f64>> = vertex.facets.iter().map(|&i| coords(&p.normal(i).to_f64())).collect();
    spherical_cone_volume_mc(&normals, d, samples, seed ^ v as u64)
}
