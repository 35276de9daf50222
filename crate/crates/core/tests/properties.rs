//! Randomized cross-module properties: closure under sampling, invariance of
//! the c_k under the choice of auxiliary points, duality round trips, and
//! partition canonicalization.

use degen_simplex::{
    compute_coupling, construct_dual, duality_residual, geodesic_distance, invariant_sequence,
    matrix_identities, one_stress_residual, radon_partition, random_degenerate_config,
    random_on_space, reflect_through_span, solve_one_stress, OneStress, QuadConfig, SpaceForm,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn all_spaces() -> Vec<SpaceForm> {
    vec![
        SpaceForm::euclidean(2),
        SpaceForm::euclidean(3),
        SpaceForm::spherical(2),
        SpaceForm::hyperbolic(2),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sampled_points_stay_on_their_quadric(seed in 0u64..4096) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for space in all_spaces() {
            let p = random_on_space(&space, &mut rng).unwrap();
            prop_assert!(space.quadric_residual(p.coords()).abs() < 1e-12);
        }
    }

    #[test]
    fn reflection_is_an_involution(seed in 0u64..4096) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for space in all_spaces() {
            let span: Vec<_> = (0..space.dim())
                .map(|_| random_on_space(&space, &mut rng).unwrap())
                .collect();
            let p = random_on_space(&space, &mut rng).unwrap();
            let once = match reflect_through_span(&space, &p, &span) {
                Ok(q) => q,
                // A randomly collapsed span is legitimate to refuse.
                Err(_) => continue,
            };
            let twice = reflect_through_span(&space, &once, &span).unwrap();
            let diff = (twice.coords() - p.coords()).amax();
            prop_assert!(diff < 1e-8, "reflection twice moved a point by {diff}");
        }
    }

    #[test]
    fn geodesic_distance_is_symmetric(seed in 0u64..4096) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for space in all_spaces() {
            let p = random_on_space(&space, &mut rng).unwrap();
            let q = random_on_space(&space, &mut rng).unwrap();
            let d_pq = geodesic_distance(&space, &p, &q).unwrap();
            let d_qp = geodesic_distance(&space, &q, &p).unwrap();
            prop_assert!(d_pq >= 0.0);
            prop_assert!((d_pq - d_qp).abs() < 1e-12);
        }
    }

    #[test]
    fn solved_stresses_annihilate_their_configuration(seed in 0u64..4096) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for space in all_spaces() {
            let (verts, stress) = random_degenerate_config(&space, &mut rng).unwrap();
            let res = one_stress_residual(&space, &verts, stress.values()).unwrap();
            prop_assert!(res < 1e-9, "stress residual {res}");
        }
    }

    #[test]
    fn partition_is_scale_canonical(seed in 0u64..4096, scale in 0.01f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = SpaceForm::euclidean(2);
        let (_, stress) = random_degenerate_config(&space, &mut rng).unwrap();
        let base = radon_partition(&space, stress.values()).unwrap();
        for s in [scale, -scale] {
            let scaled: Vec<f64> = stress.values().iter().map(|v| v * s).collect();
            let p = radon_partition(&space, &scaled).unwrap();
            prop_assert_eq!(&p.positive, &base.positive);
            prop_assert_eq!(&p.negative, &base.negative);
        }
    }
}

#[test]
fn invariants_ignore_the_auxiliary_points() {
    // The reference points P, Q enter only the Euclidean construction; the
    // curved route rejects them.
    let cfg = QuadConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for space in [SpaceForm::euclidean(2), SpaceForm::euclidean(3)] {
        let (verts, stress) = random_degenerate_config(&space, &mut rng).unwrap();
        let reference = invariant_sequence(&space, &verts, stress.values(), None, None, &cfg)
            .unwrap();
        for _ in 0..5 {
            let p = random_on_space(&space, &mut rng).unwrap();
            let q = random_on_space(&space, &mut rng).unwrap();
            let moved =
                invariant_sequence(&space, &verts, stress.values(), Some(&p), Some(&q), &cfg)
                    .unwrap();
            for (a, b) in reference.c.iter().zip(moved.c.iter()) {
                let scale = a.abs().max(1.0);
                assert!(
                    (a - b).abs() / scale < 1e-7,
                    "c_k moved with the auxiliary points: {a} vs {b}"
                );
            }
        }
    }
    let sphere = SpaceForm::spherical(2);
    let (verts, stress) = random_degenerate_config(&sphere, &mut rng).unwrap();
    let p = random_on_space(&sphere, &mut rng).unwrap();
    assert!(
        invariant_sequence(&sphere, &verts, stress.values(), Some(&p), None, &cfg).is_err()
    );
}

#[test]
fn duality_round_trip_on_random_configurations() {
    let mut rng = ChaCha8Rng::seed_from_u64(97);
    let c = 1.7;
    for n in [2usize, 3] {
        let space = SpaceForm::euclidean(n);
        for _ in 0..10 {
            let (verts, stress) = random_degenerate_config(&space, &mut rng).unwrap();
            let dual = match construct_dual(&space, &verts, c) {
                Ok(d) => d,
                // A draw with a degenerate facet has no dual; skip it.
                Err(_) => continue,
            };
            let ortho = duality_residual(&space, &verts, &dual.b).unwrap();
            assert!(ortho < 1e-9, "orthogonality residual {ortho}");

            let coupling = compute_coupling(&space, &verts, &dual.b, stress.values()).unwrap();
            assert!(coupling.r_spread < 1e-9, "r spread {}", coupling.r_spread);
            for (a, b) in stress.values().iter().zip(coupling.beta.values()) {
                assert!((a - b).abs() < 1e-9, "beta is not proportional to alpha");
            }

            let report =
                matrix_identities(&space, &verts, &dual.b, c, stress.values(), coupling.beta.values())
                    .unwrap();
            assert!(report.diagonal_residual < 1e-8);
            assert!(report.identity_residual < 1e-8);

            // The dual of the dual is the translated primal, exactly.
            let bidual = construct_dual(&space, &dual.b, c).unwrap();
            let scale = verts
                .iter()
                .map(|v| v.coords().amax())
                .fold(1.0f64, f64::max);
            for (orig, back) in verts.iter().zip(bidual.b.iter()) {
                let tilde = orig.coords() - &dual.translation;
                let diff = (tilde - back.coords()).amax();
                assert!(diff / scale < 1e-7, "bidual strayed by {diff}");
            }
        }
    }
}

#[test]
fn canonical_stress_sign_convention_is_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let space = SpaceForm::euclidean(3);
    let (verts, stress) = random_degenerate_config(&space, &mut rng).unwrap();
    let solved = solve_one_stress(&space, &verts).unwrap();
    let flipped: Vec<f64> = stress.values().iter().map(|v| -2.5 * v).collect();
    let renormalized = OneStress::from_raw(&flipped).unwrap();
    for (a, b) in solved.values().iter().zip(renormalized.values()) {
        assert!((a - b).abs() < 1e-12);
    }
}
