mod oracle;

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use toric_picard::cone::{dual_cone, validate_fan, vectors, Cone, Fan};
use toric_picard::divisor::{convexity, section_basis, RhoClass};
use toric_picard::job::{canonicalize, JobInput};
use toric_picard::lattice::{
    hermite_normal_form, int, integer_kernel, primitive_part, smith_normal_form, IntMatrix,
    IntVector,
};
use toric_picard::polytope::hull_of_ints;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, cols), rows).prop_map(move |r| {
        let rows: Vec<IntVector> = r.iter().map(|x| IntVector::from_i64s(x)).collect();
        IntMatrix::from_rows(&rows, cols)
    })
}

fn fans() -> Vec<Fan> {
    vec![
        validate_fan(2, vectors(&[&[1, 0], &[0, 1], &[-1, -1]]), vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap(),
        validate_fan(
            2,
            vectors(&[&[1, 0], &[0, 1], &[-1, 2], &[0, -1]]),
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
        .unwrap(),
        validate_fan(
            3,
            vectors(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]]),
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        )
        .unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_is_a_unimodular_transform(m in matrix(3, 4)) {
        let h = hermite_normal_form(&m);
        prop_assert_eq!(h.u.mul(&m), h.h.clone());
        prop_assert!(h.u.determinant().abs().is_one());
        let mut last = None;
        for (r, &p) in h.pivots.iter().enumerate() {
            prop_assert!(h.h.get(r, p).is_positive());
            for above in 0..r {
                let x = h.h.get(above, p);
                prop_assert!(!x.is_negative() && x < h.h.get(r, p));
            }
            prop_assert!(last.is_none_or(|l| l < p));
            last = Some(p);
        }
    }

    #[test]
    fn snf_diagonal_divides(m in matrix(3, 3)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.s.clone());
        let d = s.diagonal();
        for w in d.windows(2) {
            prop_assert!(w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && (&w[1] % &w[0]).is_zero());
        }
        prop_assert_eq!(m.determinant().abs(), d.iter().fold(int(1), |a, x| a * x).abs());
    }

    #[test]
    fn kernel_is_saturated(m in matrix(2, 4)) {
        let k = integer_kernel(&m);
        prop_assert_eq!(k.len(), 4 - m.rank());
        for v in &k {
            prop_assert!(m.mul_vec(v).is_zero());
        }
        if !k.is_empty() {
            // Saturated iff every invariant factor of the basis is one.
            let snf = smith_normal_form(&IntMatrix::from_rows(&k, 4));
            prop_assert!(snf.diagonal().iter().all(|x| x.is_one()));
        }
    }

    #[test]
    fn primitive_part_is_idempotent(v in prop::collection::vec(-20i64..=20, 3)) {
        let v = IntVector::from_i64s(&v);
        prop_assume!(!v.is_zero());
        let p = primitive_part(&v).unwrap();
        prop_assert!(p.is_primitive());
        prop_assert_eq!(primitive_part(&p).unwrap(), p.clone());
        prop_assert_eq!(p.scale(&v.content()), v);
    }

    #[test]
    fn double_dual_is_identity(gens in prop::collection::vec((-3i64..=3, -3i64..=3, 1i64..=3), 3..6)) {
        let g: Vec<IntVector> = gens.iter().map(|&(a, b, c)| IntVector::from_i64s(&[a, b, c])).collect();
        let c = Cone::new(g, 3).unwrap();
        prop_assume!(c.is_full_dimensional());
        let dd = dual_cone(&dual_cone(&c).unwrap()).unwrap();
        let extreme: Vec<IntVector> = {
            let mut e: Vec<IntVector> = c.extreme_generators().iter().map(|&i| c.generators()[i].clone()).collect();
            e.sort();
            e.dedup();
            e
        };
        prop_assert_eq!(dd.generators().to_vec(), extreme);
    }

    #[test]
    fn fiber_enumeration_matches_box_scan(pts in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 4..8)) {
        let v: Vec<IntVector> = pts.iter().map(|p| IntVector::from_i64s(p)).collect();
        let p = hull_of_ints(&v).unwrap();
        let found: Vec<Vec<i64>> = p.lattice_points().iter().map(|x| x.entries().iter().map(|e| e.try_into().unwrap()).collect()).collect();
        let brute: Vec<Vec<i64>> = oracle::box_points(&[-4; 3], &[4; 3])
            .into_iter()
            .filter(|x| p.contains_int(&IntVector::from_i64s(x)))
            .collect();
        prop_assert_eq!(found, brute);
    }

    #[test]
    fn convexity_ignores_linear_twists(idx in 0usize..3, rho in prop::collection::vec(0i64..=4, 4), m in prop::collection::vec(-2i64..=2, 3)) {
        let f = &fans()[idx];
        let d = f.rays().len();
        let n = f.lattice_rank();
        let rho: Vec<i64> = rho[..d].to_vec();
        prop_assume!(rho.iter().any(|&x| x > 0));
        let twisted: Vec<i64> = (0..d)
            .map(|i| rho[i] + f.rays()[i].dot(&IntVector::from_i64s(&m[..n])).to_string().parse::<i64>().unwrap())
            .collect();
        prop_assume!(twisted.iter().all(|&x| x >= 0) && twisted.iter().any(|&x| x > 0));
        let a = RhoClass::from_i64s(&rho).unwrap();
        let b = RhoClass::from_i64s(&twisted).unwrap();
        let ca = convexity(f, &a).unwrap();
        prop_assert_eq!(ca, convexity(f, &b).unwrap());
        if ca != toric_picard::divisor::Convexity::NotConvex {
            prop_assert_eq!(section_basis(f, &a).unwrap().len(), section_basis(f, &b).unwrap().len());
        }
    }

    #[test]
    fn canonical_bytes_ignore_ray_order(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let f = &fans()[2];
        let mut order: Vec<usize> = (0..f.rays().len()).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let mut pos = vec![0; order.len()];
        for (k, &i) in order.iter().enumerate() {
            pos[i] = k;
        }
        let job = |rays: Vec<IntVector>, cones: Vec<Vec<usize>>, rho: Vec<num_bigint::BigInt>| JobInput {
            lattice_rank: Some(3),
            rays,
            max_cones: cones,
            rho: Some(rho),
            ..Default::default()
        };
        let rho: Vec<num_bigint::BigInt> = (1..=4).map(int).collect();
        let a = job(f.rays().to_vec(), f.max_cones().to_vec(), rho.clone());
        let b = job(
            order.iter().map(|&i| f.rays()[i].clone()).collect(),
            f.max_cones().iter().map(|c| c.iter().rev().map(|&i| pos[i]).collect()).collect(),
            order.iter().map(|&i| rho[i].clone()).collect(),
        );
        prop_assert_eq!(canonicalize(&a).bytes, canonicalize(&b).bytes);
    }
}
