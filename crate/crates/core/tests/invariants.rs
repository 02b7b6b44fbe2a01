//! Property tests: randomized inputs against the structural invariants the
//! unit tests pin down at fixed values.

use num::{BigInt, BigRational, Zero};
use proptest::prelude::*;

use cornerlab_core::configs::{
    apex, count_corners, count_matrix_pattern, count_squares, decompose_sigma, fourth_vertex,
    GridFunction, PatternSpec,
};
use cornerlab_core::ramsey::Coloring;
use cornerlab_core::saturation::{
    check_saturated, katz_tao_probe, min_saturated_search, SaturationKind, SearchMode,
};
use cornerlab_core::{random_subset, Domain, GaussianElem, GridPoint, GridVector, PointSet};

fn small_prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(3u32), Just(5), Just(7), Just(11)]
}

fn plane_set() -> impl Strategy<Value = PointSet> {
    (small_prime(), 0.05f64..0.95, any::<u64>()).prop_map(|(p, density, seed)| {
        random_subset(Domain::prime_plane(p).unwrap(), density, seed).unwrap()
    })
}

fn grid_set() -> impl Strategy<Value = PointSet> {
    (2u32..=6, 0.05f64..0.95, any::<u64>()).prop_map(|(n, density, seed)| {
        random_subset(Domain::integer_grid(n).unwrap(), density, seed).unwrap()
    })
}

fn any_set() -> impl Strategy<Value = PointSet> {
    prop_oneof![plane_set(), grid_set()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hex_encoding_roundtrips(s in any_set()) {
        let back = PointSet::from_hex(s.domain(), &s.to_hex()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn random_subset_is_seed_deterministic(
        p in small_prime(),
        density in 0.05f64..0.95,
        seed in any::<u64>(),
    ) {
        let d = Domain::prime_plane(p).unwrap();
        let a = random_subset(d, density, seed).unwrap();
        let b = random_subset(d, density, seed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn corner_count_is_translation_invariant(s in plane_set(), dx in 0i64..11, dy in 0i64..11) {
        let d = s.domain();
        let v = GridVector::new(dx, dy);
        let shifted = PointSet::from_points(d, s.iter().map(|q| d.add(q, v).unwrap()));
        prop_assert_eq!(count_corners(&shifted, false), count_corners(&s, false));
        prop_assert_eq!(count_squares(&shifted, false), count_squares(&s, false));
    }

    #[test]
    fn corner_count_is_rotation_invariant(s in plane_set()) {
        let d = s.domain();
        let rotate = |q: GridPoint| {
            GaussianElem::from_point(q, &d).unwrap().times_i().to_point()
        };
        let rotated = PointSet::from_points(d, s.iter().map(rotate));
        prop_assert_eq!(rotated.len(), s.len());
        prop_assert_eq!(count_corners(&rotated, false), count_corners(&s, false));
        prop_assert_eq!(count_squares(&rotated, false), count_squares(&s, false));
    }

    #[test]
    fn matrix_pattern_counter_specializes_to_corners(s in plane_set()) {
        let p = match s.domain() { Domain::PrimePlane { p } => p, _ => unreachable!() };
        let spec = PatternSpec::corners(p);
        prop_assert_eq!(
            count_matrix_pattern(&s, &spec, false).unwrap(),
            count_corners(&s, false)
        );
    }

    #[test]
    fn sigma_decomposition_is_exact(s in plane_set()) {
        let d = decompose_sigma(&s, false).unwrap();
        let sigma = BigRational::from(BigInt::from(count_corners(&s, false)));
        prop_assert_eq!(&d.total, &sigma);
        prop_assert!(d.single_f_terms.iter().all(|t| t.is_zero()));
        prop_assert!(d.two_f_terms_pairwise_equal());
        prop_assert_eq!(d.term_sum(), sigma);
    }

    #[test]
    fn apex_and_fourth_vertex_invert_the_arm_construction(
        p in small_prime(),
        ax in 0i64..11, ay in 0i64..11,
        yx in 0i64..11, yy in 0i64..11,
    ) {
        let domain = Domain::prime_plane(p).unwrap();
        let alpha = GaussianElem::new(ax, ay, p);
        let y = GaussianElem::new(yx, yy, p);
        prop_assume!(!y.is_zero());
        let beta = alpha.add(y.times_i());
        let gamma = alpha.add(y);
        prop_assert_eq!(
            apex(beta.to_point(), gamma.to_point(), &domain).unwrap(),
            alpha.to_point()
        );
        let fourth = fourth_vertex(
            alpha.to_point(), beta.to_point(), gamma.to_point(), &domain,
        ).unwrap();
        prop_assert_eq!(beta.add(gamma).sub(alpha).to_point(), fourth);
    }

    #[test]
    fn gaussian_arithmetic_obeys_field_laws(
        p in small_prime(),
        ar in 0i64..11, ai in 0i64..11,
        br in 0i64..11, bi in 0i64..11,
    ) {
        let a = GaussianElem::new(ar, ai, p);
        let b = GaussianElem::new(br, bi, p);
        prop_assert_eq!(a.mul(b), b.mul(a));
        prop_assert_eq!(a.mul(b).norm(), (a.norm() as u64 * b.norm() as u64 % p as u64) as u32);
        prop_assert_eq!(a.conj().mul(a).to_point(), GridPoint { x: a.norm(), y: 0 });
        // Invertibility is exactly nonvanishing norm: for p = 1 mod 4 the
        // ring has zero divisors, so nonzero elements can still fail.
        if a.is_unit() {
            prop_assert_eq!(a.mul(a.inv().unwrap()), GaussianElem::one(p));
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn greedy_search_yields_saturated_config_free_sets(
        p in small_prime(),
        seed in any::<u64>(),
        square in any::<bool>(),
    ) {
        let kind = if square { SaturationKind::Square } else { SaturationKind::Corner };
        let d = Domain::prime_plane(p).unwrap();
        let r = min_saturated_search(d, kind, SearchMode::Greedy, None, seed).unwrap();
        let rep = check_saturated(&r.best_set, kind);
        prop_assert!(rep.is_config_free);
        prop_assert!(rep.is_saturated);
    }

    #[test]
    fn doubled_apex_sums_cap_the_probe_sumset(p in prop_oneof![Just(7u32), Just(11)], seed in any::<u64>()) {
        let d = Domain::prime_plane(p).unwrap();
        let r = min_saturated_search(d, SaturationKind::SquareCover, SearchMode::Greedy, None, seed)
            .unwrap();
        let probe = katz_tao_probe(&r.best_set).unwrap();
        // a + b = 2 * apex, and doubling is a bijection mod an odd prime.
        prop_assert!(probe.sumset_size <= u64::from(r.best_set.len()));
        prop_assert_eq!(probe.covered, probe.diffset_size);
    }

    #[test]
    fn coloring_json_roundtrips(
        p in small_prime(),
        r in 2u16..=4,
        seed in any::<u64>(),
    ) {
        let c = Coloring::random(Domain::prime_plane(p).unwrap(), r, seed).unwrap();
        let back = Coloring::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn color_classes_partition_the_domain(
        p in small_prime(),
        r in 2u16..=4,
        seed in any::<u64>(),
    ) {
        let d = Domain::prime_plane(p).unwrap();
        let c = Coloring::random(d, r, seed).unwrap();
        let total: u32 = (0..r).map(|k| c.class(k).len()).sum();
        prop_assert_eq!(total, d.point_count());
        prop_assert!(GridFunction::balanced_indicator(&c.class(0)).sum().is_zero());
    }

    #[test]
    fn translation_preserves_monochromatic_structure(
        p in small_prime(),
        seed in any::<u64>(),
        dx in 0i64..11, dy in 0i64..11,
    ) {
        let d = Domain::prime_plane(p).unwrap();
        let c = Coloring::random(d, 2, seed).unwrap();
        let v = GridVector::new(dx, dy);
        let shifted = c.map_points(|q| d.add(q, v).unwrap()).unwrap();
        for color in 0..2u16 {
            prop_assert_eq!(
                count_corners(&shifted.class(color), false),
                count_corners(&c.class(color), false)
            );
        }
    }
}
