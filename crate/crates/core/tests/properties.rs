use building_ramsey::building_calc::{density_bound_rhs, partition_check, sphere_ratio_check};
use building_ramsey::padic::{cartan_by_minors, cartan_coordinates, PAdicMatrix};
use building_ramsey::root_system::{Coweight, RootDatum};
use building_ramsey::tree_lab::{derived_set, TreeBall, Vertex, VertexSet};
use proptest::prelude::*;

fn datum() -> impl Strategy<Value = RootDatum> {
    prop::sample::select(vec!["A1", "A2", "A3", "B2", "C2", "G2", "B3", "C3"])
        .prop_map(|s| RootDatum::from_label(s).unwrap())
}

fn with_coweight(lo: i64, hi: i64) -> impl Strategy<Value = (RootDatum, Coweight)> {
    datum().prop_flat_map(move |d| {
        let n = d.rank();
        (Just(d), prop::collection::vec(lo..=hi, n).prop_map(Coweight))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn h_is_additive((d, a) in with_coweight(0, 6), seed in 0i64..7) {
        let b = Coweight(a.0.iter().map(|x| (x + seed) % 5).collect());
        let sum = a.clone() + b.clone();
        prop_assert_eq!(
            d.height_two_rho(&sum).unwrap(),
            d.height_two_rho(&a).unwrap() + d.height_two_rho(&b).unwrap()
        );
    }

    #[test]
    fn dominant_rep_is_orbit_invariant((d, l) in with_coweight(-5, 5), word in prop::collection::vec(1usize..=3, 0..8)) {
        let word: Vec<usize> = word.into_iter().map(|i| 1 + (i - 1) % d.rank()).collect();
        let w = d.element_from_word(&word);
        let (dom, cert) = d.dominant_rep_coweight(&l);
        prop_assert!(dom.is_dominant());
        prop_assert_eq!(cert.apply(&l), dom.clone());
        prop_assert_eq!(d.dominant_rep_coweight(&w.apply(&l)).0, dom);
    }

    #[test]
    fn star_is_an_involution((d, l) in with_coweight(0, 6)) {
        let s = d.star_involution(&l);
        prop_assert!(s.is_dominant());
        prop_assert_eq!(d.star_involution(&s), l.clone());
        if d.is_minus_one_type() {
            prop_assert_eq!(s, l);
        }
    }

    #[test]
    fn coroot_lattice_is_closed((d, m) in with_coweight(-4, 4), (_e, k) in with_coweight(-4, 4)) {
        let n = d.rank();
        let lift = |m: &Coweight| (1..=n).fold(Coweight::zero(n), |acc, i| acc + m.0[i - 1] * d.simple_coroot(i));
        let a = lift(&m);
        let k = Coweight(k.0.iter().cycle().take(n).copied().collect());
        let b = lift(&k);
        prop_assert!(d.in_coroot_lattice(&a));
        prop_assert!(d.in_coroot_lattice(&(a.clone() + b.clone())));
        prop_assert!(d.in_coroot_lattice(&(a - b)));
    }

    #[test]
    fn sphere_sizes_are_integers((d, l) in with_coweight(0, 4), q in 2u64..6) {
        prop_assert!(d.sphere_size(&l, q).is_ok());
    }

    #[test]
    fn sphere_ratio_and_partition((d, mu) in with_coweight(1, 3), extra in prop::collection::vec(0i64..3, 3), q in 2u64..4) {
        let lambda = mu.clone() + Coweight(extra[..d.rank()].to_vec());
        prop_assert!(sphere_ratio_check(&d, q, &mu, &lambda).unwrap().holds);
        if lambda.is_strongly_dominant() {
            prop_assert!(partition_check(&d, q, &lambda, &mu).unwrap().holds);
        }
    }

    #[test]
    fn density_bound_decreases((d, l) in with_coweight(1, 4), ell in 1u32..5, i in 0usize..3, q in 2u64..4) {
        let v = density_bound_rhs(&d, q, ell, 1, &l).unwrap();
        prop_assert!(density_bound_rhs(&d, q, ell + 1, 1, &l).unwrap() < v);
        let mut bigger = l.clone();
        bigger.0[i % d.rank()] += 1;
        prop_assert!(density_bound_rhs(&d, q, ell, 1, &bigger).unwrap() < v);
    }

    #[test]
    fn cartan_total_is_det_valuation(rows in prop::collection::vec(prop::collection::vec(-20i64..20, 3), 3), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        if let Ok(m) = PAdicMatrix::from_ints(&rows, p) {
            let c = cartan_coordinates(&m);
            prop_assert_eq!(c.total(), m.det_valuation());
            prop_assert_eq!(c, cartan_by_minors(&m));
        }
    }

    #[test]
    fn derived_set_matches_pairs(bits in prop::collection::vec(any::<bool>(), 46), t in 0u32..9) {
        let ball = TreeBall::new(2, 4).unwrap();
        let all: Vec<Vertex> = (0..=4).flat_map(|n| ball.sphere(n)).collect();
        let x = VertexSet::from_vertices(ball, all.iter().zip(&bits).filter(|(_, &b)| b).map(|(v, _)| *v)).unwrap();
        let dx = derived_set(&x, t);
        for v in x.iter() {
            let expect = x.iter().any(|y| ball.distance(v, y) == t);
            prop_assert_eq!(dx.contains(v), expect);
        }
        prop_assert!(dx.iter().all(|v| x.contains(v)));
    }
}
