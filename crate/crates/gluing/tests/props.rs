use std::collections::HashSet;
use std::f64::consts::PI;
use std::sync::OnceLock;

use gluing::volume::{sphere_area, spherical_simplex_volume};
use gluing::*;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn m() -> &'static GluingSchema {
    static S: OnceLock<GluingSchema> = OnceLock::new();
    S.get_or_init(|| builtin_schema("manifold_M").unwrap())
}

fn subset(mask: u16) -> GluingSchema {
    restricted(m(), |k, _| mask >> k & 1 == 1).unwrap()
}

fn random_rotation(seed: &[f64], n: usize) -> DMatrix<f64> {
    DMatrix::from_iterator(n, n, seed.iter().copied()).qr().q()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orbits_partition_faces(mask in 0u16..512) {
        let s = subset(mask);
        let q = QuotientComplex::new(&s);
        let lat = s.cell_of(0).lattice();
        let mut seen = HashSet::new();
        for o in q.orbits() {
            for &r in &o.members {
                prop_assert!(seen.insert(r));
                prop_assert_eq!(lat.face(r.face).dim, o.dim);
                prop_assert_eq!(q.orbit_of(r), q.orbit_of(o.rep()));
            }
        }
        prop_assert_eq!(seen.len(), lat.len());
        prop_assert_eq!(q.orbits_of_dim(3).len(), 24 - s.pairings().len());
    }

    #[test]
    fn ridge_walks_cover_each_orbit(mask in 0u16..512) {
        let s = subset(mask);
        let q = QuotientComplex::new(&s);
        for r in ridge_check(&q) {
            let o = q.orbit(r.orbit);
            let members: HashSet<FaceRef> = o.members.iter().copied().collect();
            let visits: HashSet<FaceRef> = r.visits.iter().copied().collect();
            prop_assert_eq!(r.length, r.visits.len());
            prop_assert!(visits.is_subset(&members));
            if r.kind == RidgeKind::Interior {
                prop_assert!(r.length <= o.len());
            }
        }
    }

    #[test]
    fn chi_is_gauss_bonnet_consistent(mask in 0u16..512) {
        let s = subset(mask);
        let q = QuotientComplex::new(&s);
        let e = euler_characteristic(&q);
        prop_assert_eq!(e.f_vector.iter().sum::<usize>(), q.orbits().iter().filter(|o| !o.ideal).count());
        prop_assert_eq!(e.copies_volume.clone(), Some(num_rational::BigRational::new(4.into(), 3.into())));
    }

    #[test]
    fn restriction_round_trips_through_text(mask in 0u16..512) {
        let s = subset(mask);
        let back = parse_schema(&to_text(&s), |r| resolve_cell(r, None)).unwrap();
        prop_assert_eq!(back.pairings(), s.pairings());
    }

    #[test]
    fn volume_spectrum(k in 1u32..12, boundary: bool, m in 1usize..4, noise in -0.01f64..0.01) {
        let full = sphere_area(m + 1) / if boundary { 2.0 } else { 1.0 };
        let v = classify_volume(full / f64::from(k) + noise, m, boundary, 0.05);
        let want = match (k, boundary) {
            (1, false) => SphereVerdict::Sphere,
            (1, true) => SphereVerdict::Hemisphere,
            (k, boundary) => SphereVerdict::Quotient { k, boundary },
        };
        prop_assert_eq!(v, want);
    }

    #[test]
    fn simplex_volume_is_rotation_invariant(seed in proptest::collection::vec(-1.0f64..1.0, 16)) {
        let r = random_rotation(&seed, 4);
        let vertices: Vec<Vec<f64>> = (0..4).map(|i| r.column(i).iter().copied().collect()).collect();
        let v = spherical_simplex_volume(&vertices, 16);
        prop_assert!((v.value - 2.0 * PI * PI / 16.0).abs() < 1e-6);
    }
}
