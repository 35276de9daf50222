//! Seeded verification suites behind `verify --suite`.
//!
//! Every check derives its randomness from (seed, fixed stream index), so a
//! suite's output is byte-identical across runs and independent of check
//! ordering. Output is plain text: one PASS/FAIL line per check.

use clap::ValueEnum;
use degen_simplex::{
    characteristic_polynomial, charpoly_matrix_check, compute_coupling, construct_dual,
    duality_residual, embed_in_higher, fixtures, gauss_map_limit, induce_k_stress,
    invariant_sequence, lift_experiment, matrix_identities, minkowski_residual,
    one_stress_residual, partition_sums, radon_partition, random_degenerate_config,
    random_enclosing_config, random_full_simplex, random_on_space, root_reciprocity,
    similarity_residual, solve_one_stress, trace_path, verify_stress_condition, LiftOptions,
    MotionPath, QuadConfig, SpaceForm,
};
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::commands::CliError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Stress,
    Invariants,
    Dual,
    Motion,
    All,
}

pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn sub_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn run_check(
    results: &mut Vec<CheckResult>,
    name: &str,
    body: impl FnOnce() -> Result<String, String>,
) {
    let (passed, detail) = match body() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    results.push(CheckResult {
        name: name.to_string(),
        passed,
        detail,
    });
}

fn stress_suite(seed: u64, cfg: &QuadConfig, results: &mut Vec<CheckResult>) {
    run_check(results, "stress.flat-partition-sum", || {
        let mut worst = 0.0f64;
        for (stream, n) in [(1u64, 2usize), (2, 3)] {
            let mut rng = sub_rng(seed, stream);
            let space = SpaceForm::euclidean(n);
            for _ in 0..20 {
                let (verts, stress) =
                    random_degenerate_config(&space, &mut rng).map_err(|e| e.to_string())?;
                let partition =
                    radon_partition(&space, stress.values()).map_err(|e| e.to_string())?;
                let sums =
                    partition_sums(&space, &verts, &partition, cfg).map_err(|e| e.to_string())?;
                worst = worst.max(sums.residual.abs());
            }
        }
        if worst < 1e-8 {
            Ok(format!("max |residual| {worst:.3e} over 40 configurations"))
        } else {
            Err(format!("residual {worst:.3e} exceeds 1e-8"))
        }
    });

    run_check(results, "stress.curved-partition-sum", || {
        let mut details = Vec::new();
        for (stream, space, count, tol) in [
            (3u64, SpaceForm::spherical(1), 10usize, 1e-8),
            (4, SpaceForm::spherical(2), 10, 1e-5),
            (5, SpaceForm::hyperbolic(1), 10, 1e-8),
            (6, SpaceForm::hyperbolic(2), 10, 1e-5),
        ] {
            let mut rng = sub_rng(seed, stream);
            let mut worst = 0.0f64;
            for _ in 0..count {
                let (verts, stress) =
                    random_degenerate_config(&space, &mut rng).map_err(|e| e.to_string())?;
                let partition =
                    radon_partition(&space, stress.values()).map_err(|e| e.to_string())?;
                let sums =
                    partition_sums(&space, &verts, &partition, cfg).map_err(|e| e.to_string())?;
                worst = worst.max(sums.residual.abs());
            }
            if worst >= tol {
                return Err(format!(
                    "residual {worst:.3e} exceeds {tol:.0e} on curvature {} dim {}",
                    space.kappa(),
                    space.dim()
                ));
            }
            details.push(format!("{worst:.3e}"));
        }
        Ok(format!(
            "max |residual| per (k,n) block: {}",
            details.join(", ")
        ))
    });

    run_check(results, "stress.one-sided-exact", || {
        let (space, verts) = fixtures::circle_thirds();
        let stress = solve_one_stress(&space, &verts).map_err(|e| e.to_string())?;
        let partition = radon_partition(&space, stress.values()).map_err(|e| e.to_string())?;
        let sums = partition_sums(&space, &verts, &partition, cfg).map_err(|e| e.to_string())?;
        if sums.residual.abs() < 1e-12 {
            Ok(format!(
                "thirds of the circle sum to 2π within {:.3e}",
                sums.residual.abs()
            ))
        } else {
            Err(format!("residual {:.3e} exceeds 1e-12", sums.residual.abs()))
        }
    });

    run_check(results, "stress.one-sided-random", || {
        let mut rng = sub_rng(seed, 7);
        let space = SpaceForm::spherical(2);
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let (verts, stress) =
                random_enclosing_config(&space, &mut rng).map_err(|e| e.to_string())?;
            let partition = radon_partition(&space, stress.values()).map_err(|e| e.to_string())?;
            let sums =
                partition_sums(&space, &verts, &partition, cfg).map_err(|e| e.to_string())?;
            worst = worst.max(sums.residual.abs());
        }
        if worst < 1e-6 {
            Ok(format!("max |sum − 4π| {worst:.3e} over 5 configurations"))
        } else {
            Err(format!("residual {worst:.3e} exceeds 1e-6"))
        }
    });

    run_check(results, "stress.solution-residual", || {
        let mut worst = 0.0f64;
        for (stream, space) in [
            (8u64, SpaceForm::euclidean(2)),
            (9, SpaceForm::euclidean(3)),
            (10, SpaceForm::spherical(2)),
            (11, SpaceForm::hyperbolic(2)),
        ] {
            let mut rng = sub_rng(seed, stream);
            for _ in 0..10 {
                let (verts, stress) =
                    random_degenerate_config(&space, &mut rng).map_err(|e| e.to_string())?;
                let res = one_stress_residual(&space, &verts, stress.values())
                    .map_err(|e| e.to_string())?;
                worst = worst.max(res);
            }
        }
        if worst < 1e-9 {
            Ok(format!("max residual {worst:.3e} over 40 configurations"))
        } else {
            Err(format!("residual {worst:.3e} exceeds 1e-9"))
        }
    });

    run_check(results, "stress.induced-equilibrium", || {
        let mut rng = sub_rng(seed, 12);
        let space = SpaceForm::euclidean(2);
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let (verts, stress) =
                random_degenerate_config(&space, &mut rng).map_err(|e| e.to_string())?;
            for k in [1usize, 2] {
                let ks = induce_k_stress(&space, &verts, stress.values(), k, cfg)
                    .map_err(|e| e.to_string())?;
                let res =
                    verify_stress_condition(&space, &verts, &ks).map_err(|e| e.to_string())?;
                worst = worst.max(res);
            }
        }
        if worst < 1e-8 {
            Ok(format!("max equilibrium residual {worst:.3e}"))
        } else {
            Err(format!("equilibrium residual {worst:.3e} exceeds 1e-8"))
        }
    });
}

fn invariants_suite(seed: u64, cfg: &QuadConfig, results: &mut Vec<CheckResult>) {
    run_check(results, "invariants.reference-point-free", || {
        let mut worst = 0.0f64;
        for (stream, n) in [(20u64, 2usize), (21, 3)] {
            let mut rng = sub_rng(seed, stream);
            let space = SpaceForm::euclidean(n);
            for _ in 0..10 {
                let (verts, stress) =
                    random_degenerate_config(&space, &mut rng).map_err(|e| e.to_string())?;
                let reference =
                    invariant_sequence(&space, &verts, stress.values(), None, None, cfg)
                        .map_err(|e| e.to_string())?;
                for _ in 0..3 {
                    let p = random_on_space(&space, &mut rng).map_err(|e| e.to_string())?;
                    let q = random_on_space(&space, &mut rng).map_err(|e| e.to_string())?;
                    let moved = invariant_sequence(
                        &space,
                        &verts,
                        stress.values(),
                        Some(&p),
                        Some(&q),
                        cfg,
                    )
                    .map_err(|e| e.to_string())?;
                    for (a, b) in reference.c.iter().zip(moved.c.iter()) {
                        worst = worst.max((a - b).abs() / a.abs().max(1.0));
                    }
                }
            }
        }
        if worst < 1e-8 {
            Ok(format!("max relative drift {worst:.3e} over 60 reference pairs"))
        } else {
            Err(format!("drift {worst:.3e} exceeds 1e-8"))
        }
    });

    run_check(results, "invariants.root-structure", || {
        for (stream, n) in [(22u64, 2usize), (23, 3)] {
            let mut rng = sub_rng(seed, stream);
            let space = SpaceForm::euclidean(n);
            for _ in 0..20 {
                let (verts, stress) =
                    random_degenerate_config(&space, &mut rng).map_err(|e| e.to_string())?;
                let seq = invariant_sequence(&space, &verts, stress.values(), None, None, cfg)
                    .map_err(|e| e.to_string())?;
                let poly = characteristic_polynomial(&seq);
                let roots = poly.roots().map_err(|e| e.to_string())?;
                let max_mod = roots.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(1.0);
                let zeros = roots.iter().filter(|z| z.norm() <= 1e-7 * max_mod).count();
                if zeros != 1 {
                    return Err(format!("expected exactly one vanishing root, found {zeros}"));
                }
                for z in roots.iter().filter(|z| z.norm() > 1e-7 * max_mod) {
                    if z.im.abs() >= 1e-7 * z.norm() {
                        return Err(format!("non-real root {z} in the flat spectrum"));
                    }
                }
            }
        }
        Ok("one vanishing root and a real spectrum on 40 configurations".into())
    });

    run_check(results, "invariants.c1-routes", || {
        let mut worst = 0.0f64;
        for (stream, space) in [(24u64, SpaceForm::spherical(2)), (25, SpaceForm::hyperbolic(2))] {
            let mut rng = sub_rng(seed, stream);
            for _ in 0..10 {
                let (verts, stress) =
                    random_degenerate_config(&space, &mut rng).map_err(|e| e.to_string())?;
                let seq = invariant_sequence(&space, &verts, stress.values(), None, None, cfg)
                    .map_err(|e| e.to_string())?;
                let closed = degen_simplex::c1_from_alpha_sum(&space, stress.values())
                    .map_err(|e| e.to_string())?;
                let p = random_on_space(&space, &mut rng).map_err(|e| e.to_string())?;
                let q = random_on_space(&space, &mut rng).map_err(|e| e.to_string())?;
                let g = degen_simplex::c1_g_route(&space, &verts, stress.values(), &p, &q)
                    .map_err(|e| e.to_string())?;
                worst = worst.max((seq.c[1] - closed).abs()).max((g - closed).abs());
            }
        }
        if worst < 1e-8 {
            Ok(format!("max route disagreement {worst:.3e} over 20 configurations"))
        } else {
            Err(format!("route disagreement {worst:.3e} exceeds 1e-8"))
        }
    });

    run_check(results, "invariants.spectral-cross-check", || {
        let mut worst = 0.0f64;
        for (stream, n) in [(26u64, 2usize), (27, 3)] {
            let mut rng = sub_rng(seed, stream);
            let space = SpaceForm::euclidean(n);
            for _ in 0..10 {
                let (verts, stress) =
                    random_degenerate_config(&space, &mut rng).map_err(|e| e.to_string())?;
                let gap = charpoly_matrix_check(&space, &verts, stress.values())
                    .map_err(|e| e.to_string())?;
                worst = worst.max(gap);
            }
        }
        if worst < 1e-8 {
            Ok(format!("max coefficient gap {worst:.3e} over 20 configurations"))
        } else {
            Err(format!("coefficient gap {worst:.3e} exceeds 1e-8"))
        }
    });

    run_check(results, "invariants.fixtures", || {
        let (space, square) = fixtures::square();
        let stress = solve_one_stress(&space, &square).map_err(|e| e.to_string())?;
        let seq = invariant_sequence(&space, &square, stress.values(), None, None, cfg)
            .map_err(|e| e.to_string())?;
        if seq.c[1].abs() >= 1e-12 {
            return Err(format!("square c1 = {:.3e}, expected 0", seq.c[1]));
        }
        let (space, tri) = fixtures::triangle_with_centroid();
        let raw = [1.0, 1.0, 1.0, -3.0];
        let seq = invariant_sequence(&space, &tri, &raw, None, None, cfg)
            .map_err(|e| e.to_string())?;
        if (seq.c[1] - 4.0 / 3.0).abs() >= 1e-12 {
            return Err(format!("centroid c1 = {}, expected 4/3", seq.c[1]));
        }
        Ok("square c1 = 0 and centroid c1 = 4/3 reproduced".into())
    });
}

fn dual_suite(seed: u64, cfg: &QuadConfig, results: &mut Vec<CheckResult>) {
    run_check(results, "dual.random-configurations", || {
        let c = 1.0;
        let mut counted = 0usize;
        let mut worst_ortho = 0.0f64;
        let mut worst_spread = 0.0f64;
        let mut worst_beta = 0.0f64;
        let mut worst_identity = 0.0f64;
        let mut worst_rec = 0.0f64;
        for (stream, n) in [(40u64, 2usize), (41, 3)] {
            let mut rng = sub_rng(seed, stream);
            let space = SpaceForm::euclidean(n);
            for _ in 0..10 {
                let (verts, stress) =
                    random_degenerate_config(&space, &mut rng).map_err(|e| e.to_string())?;
                let dual = match construct_dual(&space, &verts, c) {
                    Ok(d) => d,
                    Err(_) => continue,
                };
                counted += 1;
                worst_ortho = worst_ortho
                    .max(duality_residual(&space, &verts, &dual.b).map_err(|e| e.to_string())?);
                let coupling = compute_coupling(&space, &verts, &dual.b, stress.values())
                    .map_err(|e| e.to_string())?;
                worst_spread = worst_spread.max(coupling.r_spread);
                for (a, b) in stress.values().iter().zip(coupling.beta.values()) {
                    worst_beta = worst_beta.max((a - b).abs());
                }
                let ids = matrix_identities(
                    &space,
                    &verts,
                    &dual.b,
                    c,
                    stress.values(),
                    coupling.beta.values(),
                )
                .map_err(|e| e.to_string())?;
                worst_identity = worst_identity
                    .max(ids.diagonal_residual)
                    .max(ids.identity_residual)
                    .max(ids.coupling_gap);
                let primal_seq =
                    invariant_sequence(&space, &verts, stress.values(), None, None, cfg)
                        .map_err(|e| e.to_string())?;
                let dual_seq =
                    invariant_sequence(&space, &dual.b, coupling.beta.values(), None, None, cfg)
                        .map_err(|e| e.to_string())?;
                let rec = root_reciprocity(
                    &characteristic_polynomial(&primal_seq),
                    &characteristic_polynomial(&dual_seq),
                    ids.c_hat,
                )
                .map_err(|e| e.to_string())?;
                worst_rec = worst_rec.max(rec.residual);
            }
        }
        if counted < 15 {
            return Err(format!("only {counted} of 20 draws admitted a dual"));
        }
        if worst_ortho >= 1e-9 {
            return Err(format!("orthogonality residual {worst_ortho:.3e} exceeds 1e-9"));
        }
        if worst_spread >= 1e-9 {
            return Err(format!("r spread {worst_spread:.3e} exceeds 1e-9"));
        }
        if worst_beta >= 1e-9 {
            return Err(format!("beta mismatch {worst_beta:.3e} exceeds 1e-9"));
        }
        if worst_identity >= 1e-8 {
            return Err(format!("matrix identity residual {worst_identity:.3e} exceeds 1e-8"));
        }
        if worst_rec >= 1e-6 {
            return Err(format!("reciprocity residual {worst_rec:.3e} exceeds 1e-6"));
        }
        Ok(format!(
            "{counted} duals: ortho {worst_ortho:.1e}, spread {worst_spread:.1e}, beta {worst_beta:.1e}, identities {worst_identity:.1e}, reciprocity {worst_rec:.1e}"
        ))
    });

    run_check(results, "dual.fixtures", || {
        let (space, square) = fixtures::square();
        let dual = construct_dual(&space, &square, 1.0).map_err(|e| e.to_string())?;
        let bidual = construct_dual(&space, &dual.b, 1.0).map_err(|e| e.to_string())?;
        let mut gap = 0.0f64;
        for (orig, back) in square.iter().zip(bidual.b.iter()) {
            gap = gap.max(((orig.coords() - &dual.translation) - back.coords()).amax());
        }
        if gap >= 1e-12 {
            return Err(format!("square biduality gap {gap:.3e} exceeds 1e-12"));
        }
        let (space, orth) = fixtures::right_triangle_with_orthocenter();
        let dual = construct_dual(&space, &orth, 1.0).map_err(|e| e.to_string())?;
        let primal: Vec<DVector<f64>> = orth.iter().map(|p| p.coords().clone()).collect();
        let dual_pts: Vec<DVector<f64>> = dual.b.iter().map(|p| p.coords().clone()).collect();
        let sim = similarity_residual(&primal, &dual_pts).map_err(|e| e.to_string())?;
        if sim >= 1e-7 {
            return Err(format!("orthocenter similarity residual {sim:.3e} exceeds 1e-7"));
        }
        Ok(format!(
            "square biduality gap {gap:.1e}; orthocenter similarity {sim:.1e}"
        ))
    });
}

fn motion_suite(seed: u64, cfg: &QuadConfig, results: &mut Vec<CheckResult>) {
    run_check(results, "motion.rectangle-constraint", || {
        let path = MotionPath::rectangle(2.0, 1.0).map_err(|e| e.to_string())?;
        let ts: Vec<f64> = (0..=10).map(|i| 0.05 * i as f64).collect();
        let trace = trace_path(&path, &ts, cfg).map_err(|e| e.to_string())?;
        let worst = trace.samples.iter().map(|s| s.s.abs()).fold(0.0f64, f64::max);
        if worst < 1e-10 {
            Ok(format!("max |S| {worst:.3e} over t in [0, 0.5]"))
        } else {
            Err(format!("|S| reaches {worst:.3e}, exceeding 1e-10"))
        }
    });

    run_check(results, "motion.trapezoid-constraint", || {
        let (l, d, b1) = fixtures::TRAPEZOID_PARAMS;
        let path = MotionPath::trapezoid(l, d, b1).map_err(|e| e.to_string())?;
        let ts: Vec<f64> = (0..=10).map(|i| 0.05 * i as f64).collect();
        let trace = trace_path(&path, &ts, cfg).map_err(|e| e.to_string())?;
        let worst = trace.samples.iter().map(|s| s.s.abs()).fold(0.0f64, f64::max);
        if worst < 1e-10 {
            Ok(format!("max |S| {worst:.3e} over t in [0, 0.5]"))
        } else {
            Err(format!("|S| reaches {worst:.3e}, exceeding 1e-10"))
        }
    });

    run_check(results, "motion.centroid-lift", || {
        let (plane, verts) = fixtures::triangle_with_centroid();
        let (space, verts) = embed_in_higher(&plane, &verts, 1).map_err(|e| e.to_string())?;
        let opts = LiftOptions {
            perturbations: 8,
            seed,
            ..LiftOptions::default()
        };
        let report = lift_experiment(&space, &verts, &opts, cfg).map_err(|e| e.to_string())?;
        if !report.sign_constant || report.common_sign != 1.0 {
            return Err("the lift changed the sign of S across perturbations".into());
        }
        if !report.nonvanishing {
            return Err("a retained lift left S unchanged".into());
        }
        let worst_rich = report
            .samples
            .iter()
            .filter_map(|s| s.richardson)
            .fold(0.0f64, f64::max);
        if worst_rich >= 0.05 {
            return Err(format!("Richardson deviation {worst_rich:.3e} exceeds 5%"));
        }
        Ok(format!(
            "8 lifts, sign +1 throughout, max Richardson deviation {worst_rich:.3e}"
        ))
    });

    run_check(results, "motion.minkowski", || {
        let mut worst = 0.0f64;
        for (stream, n) in [(60u64, 1usize), (61, 2), (62, 3)] {
            let mut rng = sub_rng(seed, stream);
            let space = SpaceForm::euclidean(n + 1);
            for _ in 0..15 {
                let verts =
                    random_full_simplex(&space, n, &mut rng).map_err(|e| e.to_string())?;
                let res = minkowski_residual(&space, &verts, None, cfg)
                    .map_err(|e| e.to_string())?;
                worst = worst.max(res.outward);
            }
        }
        if worst < 1e-10 {
            Ok(format!("max residual {worst:.3e} over 45 simplices"))
        } else {
            Err(format!("residual {worst:.3e} exceeds 1e-10"))
        }
    });

    run_check(results, "motion.gauss-map", || {
        let path = MotionPath::rectangle(2.0, 1.0).map_err(|e| e.to_string())?;
        let ts: Vec<f64> = (0..6).map(|i| 0.4 / 2f64.powi(i)).collect();
        let samples = gauss_map_limit(&path, &ts, cfg).map_err(|e| e.to_string())?;
        let worst = samples.iter().map(|s| s.residual).fold(0.0f64, f64::max);
        let last = samples.last().map(|s| s.residual).unwrap_or(f64::NAN);
        if last >= 1e-3 {
            return Err(format!("final similarity residual {last:.3e} exceeds 1e-3"));
        }
        if worst >= 1e-6 {
            return Err(format!(
                "rectangle normals strayed from the dual shape by {worst:.3e}"
            ));
        }
        Ok(format!("similarity residual stays below {worst:.3e}"))
    });

    run_check(results, "motion.spherical-sum", || {
        let stats = degen_simplex::spherical_sum_sample(1, 2, 100, seed, cfg)
            .map_err(|e| e.to_string())?;
        if stats.violations > 0 {
            return Err(format!("{} samples broke the facet-sum bound", stats.violations));
        }
        Ok(format!(
            "100 samples, min gap {:.3e}, resampled {}",
            stats.min_gap, stats.resampled
        ))
    });
}

pub fn cmd_verify(
    suite: Suite,
    seed: u64,
    cfg: &QuadConfig,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let mut results = Vec::new();
    if matches!(suite, Suite::Stress | Suite::All) {
        stress_suite(seed, cfg, &mut results);
    }
    if matches!(suite, Suite::Invariants | Suite::All) {
        invariants_suite(seed, cfg, &mut results);
    }
    if matches!(suite, Suite::Dual | Suite::All) {
        dual_suite(seed, cfg, &mut results);
    }
    if matches!(suite, Suite::Motion | Suite::All) {
        motion_suite(seed, cfg, &mut results);
    }

    let mut lines = Vec::with_capacity(results.len() + 1);
    let mut passed = 0usize;
    for r in &results {
        lines.push(format!(
            "{} {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        ));
        if r.passed {
            passed += 1;
        }
    }
    let suite_name = format!("{suite:?}").to_lowercase();
    lines.push(format!(
        "suite {suite_name}: {passed}/{} checks passed (seed {seed})",
        results.len()
    ));
    let text = lines.join("\n");
    crate::commands::emit(&text, out)?;

    if passed != results.len() {
        Err(CliError::Verification(format!(
            "{} of {} checks failed",
            results.len() - passed,
            results.len()
        )))
    } else {
        Ok(())
    }
}
