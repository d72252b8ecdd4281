//! The coordinate-sum-zero subspace of `R^{1,5}` and its identification
//! with `R^{1,4}`.
//!
//! The spatial part uses the orthonormal basis proportional to
//! `(1,−1,0,0,0)`, `(1,1,−2,0,0)`, `(1,1,1,−3,0)`, `(1,1,1,1,−4)`; every
//! entry lies in the field.

use exactfield::FieldElement;

use crate::LorentzVector;

/// Orthonormal basis of the sum-zero hyperplane of `R^5`.
pub fn sum_zero_basis() -> [[FieldElement; 5]; 4] {
    let c = |s: &str| -> FieldElement { s.parse().expect("constant") };
    let z = FieldElement::zero;
    let a = c("(1/2)*sqrt2");
    let b = c("(1/6)*sqrt6");
    let d = c("(1/6)*sqrt3");
    let e = c("(1/10)*sqrt5");
    [
        [a.clone(), -&a, z(), z(), z()],
        [b.clone(), b.clone(), &b * &FieldElement::from_int(-2), z(), z()],
        [d.clone(), d.clone(), d.clone(), &d * &FieldElement::from_int(-3), z()],
        [e.clone(), e.clone(), e.clone(), e.clone(), &e * &FieldElement::from_int(-4)],
    ]
}

/// Maps a vector of `R^{1,5}` whose spatial part has coordinate sum zero
/// to `R^{1,4}`, preserving the Lorentzian product. Returns `None` when the
/// spatial coordinates do not sum to zero.
pub fn sum_zero_to_r14(v: &LorentzVector) -> Option<LorentzVector> {
    assert_eq!(v.dim(), 6, "expected a vector of R^(1,5)");
    let sum: FieldElement = v.coords()[1..].iter().cloned().sum();
    if !sum.is_zero() {
        return None;
    }
    let mut out = vec![v.get(0).clone()];
    for u in sum_zero_basis() {
        let mut acc = FieldElement::zero();
        for (a, b) in u.iter().zip(&v.coords()[1..]) {
            acc += &(a * b);
        }
        out.push(acc);
    }
    Some(LorentzVector::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_orthonormal() {
        let b = sum_zero_basis();
        for i in 0..4 {
            for j in 0..4 {
                let dot: FieldElement = b[i].iter().zip(&b[j]).map(|(x, y)| x * y).sum();
                assert_eq!(dot, FieldElement::from_int((i == j) as i64));
            }
            let s: FieldElement = b[i].iter().cloned().sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn edge_point_conversion() {
        let p = LorentzVector::parse(&["sqrt30", "3", "3", "-2", "-2", "-2"]).unwrap();
        assert!(p.norm_sq().is_zero());
        let q = sum_zero_to_r14(&p).unwrap();
        let expected = LorentzVector::parse(&["sqrt30", "0", "(5/3)*sqrt6", "(5/3)*sqrt3", "sqrt5"]).unwrap();
        assert_eq!(q, expected);
        assert!(q.norm_sq().is_zero());
    }
}
