//! Command implementations: analyze, dual, lift, sample.

use std::fs;
use std::path::{Path, PathBuf};

use degen_simplex::{
    characteristic_polynomial, cocircularity_test, compute_coupling, construct_dual,
    duality_residual, embed_in_higher, invariant_sequence, lift_experiment, matrix_identities,
    one_stress_residual, partition_sums, radon_partition, root_reciprocity, similarity_residual,
    solve_one_stress, spherical_sum_sample, sphere_volume, trace_path, CharPoly, GeomError,
    InvariantRoute, LabeledPoint, LiftOptions, MotionPath, MotionTrace, OneStress, QuadConfig,
    RadonPartition, SpaceForm,
};
use nalgebra::DVector;

use crate::doc::{
    CharPolyDoc, ComplexDoc, DualDoc, InputDocument, InvariantDoc, LiftRecordDoc, LiftReportDoc,
    LiftSampleDoc, PartitionDoc, ReciprocityDoc, ReportDocument, SampleReportDoc, SpaceDoc,
    SphereFitDoc, StressDoc, ToleranceDoc, REPORT_SCHEMA,
};

/// Errors carrying their process exit code: 1 invalid input, 2 violated
/// model assumption, 3 verification failure.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Assumption(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Assumption(_) => 2,
            CliError::Verification(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Assumption(m) | CliError::Verification(m) => m,
        }
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::NotDegenerate
            | GeomError::DegenerateFace(_)
            | GeomError::Singular(_)
            | GeomError::Unsupported(_) => CliError::Assumption(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

pub fn timestamp_field(no_timestamp: bool) -> Option<String> {
    if no_timestamp {
        None
    } else {
        Some(chrono::Utc::now().to_rfc3339())
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    // Exactly one trailing newline, whether the renderer added one or not,
    // and the same bytes on stdout and in --out files.
    let text = format!("{}\n", text.trim_end_matches('\n'));
    match out {
        Some(path) => fs::write(path, &text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match write!(stdout, "{text}") {
                Ok(()) => Ok(()),
                // A closed pipe (e.g. `| head`) is not an error worth a panic.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(CliError::Input(format!("cannot write to stdout: {e}"))),
            }
        }
    }
}

fn to_json(value: &impl serde::Serialize) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("serialization failed: {e}")))
}

pub fn read_input(path: &Path) -> Result<InputDocument, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{} is not a valid input document: {e}", path.display())))
}

fn build_configuration(input: &InputDocument) -> Result<(SpaceForm, Vec<LabeledPoint>), CliError> {
    let space = input.space.to_space().map_err(CliError::Input)?;
    // n + 2 vertices with n ≤ dim: a degenerate (n+1)-simplex may be
    // confined to a lower-dimensional subspace of the model space.
    if input.vertices.len() < 3 || input.vertices.len() > space.dim() + 2 {
        return Err(CliError::Input(format!(
            "analysis expects between 3 and dim + 2 = {} vertices, got {}",
            space.dim() + 2,
            input.vertices.len()
        )));
    }
    let verts = input
        .vertices
        .iter()
        .enumerate()
        .map(|(i, coords)| {
            space.point_from_slice(coords).map_err(|e| {
                CliError::Input(format!("vertex {} is not a point of the space: {e}", i + 1))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((space, verts))
}

fn one_based(labels: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = labels.iter().map(|i| i + 1).collect();
    v.sort_unstable();
    v
}

fn partition_case(partition: &RadonPartition) -> usize {
    if partition.negative.is_empty() || partition.positive.is_empty() {
        0
    } else {
        partition.positive.len().min(partition.negative.len())
    }
}

fn charpoly_doc(poly: &CharPoly) -> Result<CharPolyDoc, CliError> {
    let roots = poly
        .roots()?
        .iter()
        .map(|z| ComplexDoc { re: z.re, im: z.im })
        .collect();
    Ok(CharPolyDoc {
        coefficients: poly.coefficients().to_vec(),
        roots,
    })
}

struct Analysis {
    space: SpaceForm,
    verts: Vec<LabeledPoint>,
    raw_alpha: Vec<f64>,
    poly: CharPoly,
    report: ReportDocument,
}

fn analyze_input(
    input: &InputDocument,
    tol: f64,
    cfg: &QuadConfig,
    timestamp: Option<String>,
) -> Result<Analysis, CliError> {
    let (space, verts) = build_configuration(input)?;
    let canonical = solve_one_stress(&space, &verts)?;

    let (raw_alpha, source) = match &input.alpha {
        Some(supplied) => {
            let residual = one_stress_residual(&space, &verts, supplied)?;
            let scale = supplied.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
            if residual > 1e-6 * scale {
                return Err(CliError::Input(format!(
                    "the supplied alpha is not a stress of this configuration (residual {residual:.3e})"
                )));
            }
            (supplied.clone(), "supplied")
        }
        None => (canonical.values().to_vec(), "solved"),
    };
    let stress_residual = one_stress_residual(&space, &verts, &raw_alpha)?;

    let partition = radon_partition(&space, &raw_alpha)?;
    let sums = partition_sums(&space, &verts, &partition, cfg)?;
    let seq = invariant_sequence(&space, &verts, &raw_alpha, None, None, cfg)?;
    let poly = characteristic_polynomial(&seq);

    let mut diagnostics = vec![format!("stress source: {source}")];
    let n = verts.len() - 2;
    if seq.c[1].abs() <= tol {
        if space.is_flat() {
            diagnostics.push("c1 vanishes within tol: the vertices lie on a common sphere".into());
        } else {
            diagnostics
                .push("c1 vanishes within tol: the stress coefficients sum to zero".into());
        }
    }
    if partition_case(&partition) == 0 {
        diagnostics.push(
            "one-sided partition: no open half-space separates the classes; the volume target is |S^n|"
                .into(),
        );
    }

    let report = ReportDocument {
        schema: REPORT_SCHEMA.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp,
        seed: input.seed,
        tolerances: ToleranceDoc::new(tol, cfg),
        space: SpaceDoc::of(&space),
        n,
        stress: StressDoc {
            alpha: canonical.values().to_vec(),
            alpha_raw: raw_alpha.clone(),
            source: source.to_string(),
            residual: stress_residual,
        },
        partition: PartitionDoc {
            x1: one_based(&partition.positive),
            x2: one_based(&partition.negative),
            case: partition_case(&partition),
            target: partition.target,
            sum_x1: sums.positive,
            sum_x2: sums.negative,
            residual: sums.residual,
            volume_error: sums.error,
        },
        invariants: InvariantDoc {
            c: seq.c.clone(),
            errors: seq.errors.clone(),
            route: match seq.route {
                InvariantRoute::Determinant => "determinant".to_string(),
                InvariantRoute::FaceVolumes => "face-volumes".to_string(),
            },
        },
        charpoly: charpoly_doc(&poly)?,
        dual: None,
        diagnostics,
    };

    Ok(Analysis {
        space,
        verts,
        raw_alpha,
        poly,
        report,
    })
}

pub fn cmd_analyze(
    input_path: &Path,
    tol: f64,
    cfg: &QuadConfig,
    no_timestamp: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let input = read_input(input_path)?;
    let analysis = analyze_input(&input, tol, cfg, timestamp_field(no_timestamp))?;
    emit(&to_json(&analysis.report)?, out)
}

pub fn cmd_dual(
    input_path: &Path,
    c_flag: Option<f64>,
    tol: f64,
    cfg: &QuadConfig,
    no_timestamp: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let input = read_input(input_path)?;
    let mut analysis = analyze_input(&input, tol, cfg, timestamp_field(no_timestamp))?;
    let c = c_flag.or(input.c).unwrap_or(1.0);

    let space = &analysis.space;
    let verts = &analysis.verts;
    let dual = construct_dual(space, verts, c)?;
    let ortho = duality_residual(space, verts, &dual.b)?;
    let coupling = compute_coupling(space, verts, &dual.b, &analysis.raw_alpha)?;
    let identities =
        matrix_identities(space, verts, &dual.b, c, &analysis.raw_alpha, coupling.beta.values())?;

    // β must be the canonical stress of B and proportional to α.
    let canonical_alpha = OneStress::from_raw(&analysis.raw_alpha).map_err(CliError::from)?;
    let beta_gap = canonical_alpha
        .values()
        .iter()
        .zip(coupling.beta.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);

    let dual_seq = invariant_sequence(space, &dual.b, coupling.beta.values(), None, None, cfg)?;
    let dual_poly = characteristic_polynomial(&dual_seq);
    let reciprocity = if verts.len() <= 8 {
        let rec = root_reciprocity(&analysis.poly, &dual_poly, identities.c_hat)?;
        Some(ReciprocityDoc {
            c_hat: rec.c_hat,
            products: rec
                .products
                .iter()
                .map(|z| ComplexDoc { re: z.re, im: z.im })
                .collect(),
            residual: rec.residual,
        })
    } else {
        None
    };

    let sphere_fit = match cocircularity_test(space, &dual.b) {
        Ok(fit) => SphereFitDoc {
            center: fit.center.iter().copied().collect(),
            radius: fit.radius,
            residual: fit.residual,
            cospherical: fit.residual <= tol,
        },
        Err(e) => {
            analysis
                .report
                .diagnostics
                .push(format!("sphere fit of the dual unavailable: {e}"));
            SphereFitDoc {
                center: vec![],
                radius: f64::NAN,
                residual: f64::NAN,
                cospherical: false,
            }
        }
    };

    let bidual = construct_dual(space, &dual.b, c)?;
    let biduality_gap = verts
        .iter()
        .zip(bidual.b.iter())
        .map(|(orig, back)| ((orig.coords() - &dual.translation) - back.coords()).amax())
        .fold(0.0f64, f64::max);

    let primal_pts: Vec<DVector<f64>> = verts.iter().map(|v| v.coords().clone()).collect();
    let dual_pts: Vec<DVector<f64>> = dual.b.iter().map(|v| v.coords().clone()).collect();
    let sim = similarity_residual(&primal_pts, &dual_pts)?;

    analysis.report.dual = Some(DualDoc {
        c,
        translation: dual.translation.iter().copied().collect(),
        b: dual.b.iter().map(|p| p.coords().iter().copied().collect()).collect(),
        orthogonality_residual: ortho,
        r: coupling.r.clone(),
        r_spread: coupling.r_spread,
        beta: coupling.beta.values().to_vec(),
        beta_proportional_to_alpha: beta_gap <= tol,
        t_a: coupling.t_a,
        t_b: coupling.t_b,
        coupling_residual: coupling.coupling_residual,
        c_hat: identities.c_hat,
        diagonal_residual: identities.diagonal_residual,
        identity_residual: identities.identity_residual,
        coupling_gap: identities.coupling_gap,
        dual_charpoly: charpoly_doc(&dual_poly)?,
        reciprocity,
        sphere_fit,
        biduality_gap,
        similarity_residual: sim,
        similar_to_primal: sim <= tol,
    });

    emit(&to_json(&analysis.report)?, out)
}

pub enum LiftMode {
    Preset {
        name: String,
        params: Vec<(String, f64)>,
    },
    Random {
        heights: Option<Vec<f64>>,
        perturbations: usize,
        seed: u64,
    },
    VertexLift {
        apex: usize,
        direction: Vec<f64>,
    },
}

pub struct LiftRequest {
    pub input: Option<PathBuf>,
    pub mode: LiftMode,
    pub t_max: Option<f64>,
    pub steps: usize,
    pub csv: bool,
    pub tol: f64,
    pub no_timestamp: bool,
    pub out: Option<PathBuf>,
}

fn preset_path(name: &str, params: &[(String, f64)]) -> Result<MotionPath, CliError> {
    let get = |key: &str| -> Result<f64, CliError> {
        params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| CliError::Input(format!("preset {name} needs --{key}")))
    };
    match name {
        "rectangle" => Ok(MotionPath::rectangle(get("a")?, get("b")?)?),
        "trapezoid" => Ok(MotionPath::trapezoid(get("l")?, get("d")?, get("b1")?)?),
        other => Err(CliError::Input(format!(
            "unknown preset {other}; expected rectangle or trapezoid"
        ))),
    }
}

fn trace_grid(path: &MotionPath, t_max: Option<f64>, steps: usize) -> Result<Vec<f64>, CliError> {
    let (lo, hi) = path.t_range();
    let hi = t_max.unwrap_or(hi).min(hi);
    if !(hi > lo) || steps == 0 {
        return Err(CliError::Input(format!(
            "trace range is empty: [{lo}, {hi}] with {steps} steps"
        )));
    }
    Ok((0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .collect())
}

fn trace_csv(trace: &MotionTrace) -> Result<String, CliError> {
    let m = trace
        .samples
        .first()
        .map(|s| s.face_volumes.len())
        .unwrap_or(0);
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string(), "S".to_string(), "A0A1_sq".to_string()];
    header.extend((1..=m).map(|i| format!("V_{i}")));
    wtr.write_record(&header)
        .map_err(|e| CliError::Input(format!("csv write failed: {e}")))?;
    for s in &trace.samples {
        let mut row = vec![s.t.to_string(), s.s.to_string(), s.a0a1_sq.to_string()];
        row.extend(s.face_volumes.iter().map(|v| v.to_string()));
        wtr.write_record(&row)
            .map_err(|e| CliError::Input(format!("csv write failed: {e}")))?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| CliError::Input(format!("csv write failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Input(format!("csv write failed: {e}")))
}

fn trace_json(
    trace: &MotionTrace,
    label: &str,
    timestamp: Option<String>,
) -> Result<String, CliError> {
    let samples: Vec<serde_json::Value> = trace
        .samples
        .iter()
        .map(|s| {
            serde_json::json!({
                "t": s.t,
                "S": s.s,
                "A0A1_sq": s.a0a1_sq,
                "face_volumes": s.face_volumes,
            })
        })
        .collect();
    let mut doc = serde_json::json!({
        "schema": "degen-simplex.trace/1",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "path": label,
        "x1": one_based(&trace.partition.positive),
        "x2": one_based(&trace.partition.negative),
        "samples": samples,
    });
    if let Some(ts) = timestamp {
        doc["timestamp"] = serde_json::Value::String(ts);
    }
    serde_json::to_string_pretty(&doc)
        .map_err(|e| CliError::Input(format!("serialization failed: {e}")))
}

pub fn cmd_lift(req: &LiftRequest, cfg: &QuadConfig) -> Result<(), CliError> {
    match &req.mode {
        LiftMode::Preset { name, params } => {
            let path = preset_path(name, params)?;
            let ts = trace_grid(&path, req.t_max, req.steps)?;
            let trace = trace_path(&path, &ts, cfg)?;
            let text = if req.csv {
                trace_csv(&trace)?
            } else {
                trace_json(&trace, name, timestamp_field(req.no_timestamp))?
            };
            emit(&text, req.out.as_deref())
        }
        LiftMode::VertexLift { apex, direction } => {
            let input_path = req.input.as_ref().ok_or_else(|| {
                CliError::Input("a vertex lift needs --input".into())
            })?;
            let input = read_input(input_path)?;
            let (space, verts) = build_configuration(&input)?;
            if *apex == 0 || *apex > verts.len() {
                return Err(CliError::Input(format!(
                    "--apex is a 1-based vertex label in 1..={}",
                    verts.len()
                )));
            }
            // A direction with one extra coordinate asks for an out-of-plane
            // lift; embed the flat configuration one dimension higher first.
            let (space, verts) = if space.is_flat() && direction.len() == space.dim() + 1 {
                embed_in_higher(&space, &verts, 1)?
            } else {
                (space, verts)
            };
            let path = MotionPath::vertex_lift(&space, &verts, apex - 1, direction)?;
            let ts = trace_grid(&path, req.t_max, req.steps)?;
            let trace = trace_path(&path, &ts, cfg)?;
            let text = if req.csv {
                trace_csv(&trace)?
            } else {
                trace_json(&trace, "vertex-lift", timestamp_field(req.no_timestamp))?
            };
            emit(&text, req.out.as_deref())
        }
        LiftMode::Random {
            heights,
            perturbations,
            seed,
        } => {
            let input_path = req.input.as_ref().ok_or_else(|| {
                CliError::Input("a random lift experiment needs --input".into())
            })?;
            let input = read_input(input_path)?;
            let (space, verts) = build_configuration(&input)?;
            let mut diagnostics = Vec::new();
            // A configuration that spans its ambient space has no room to
            // lift; embed it one dimension higher first.
            let (space, verts) = if space.is_flat() && space.dim() == verts.len() - 2 {
                diagnostics.push(
                    "configuration spans the ambient space; embedded one dimension higher".into(),
                );
                embed_in_higher(&space, &verts, 1)?
            } else {
                (space, verts)
            };
            let mut opts = LiftOptions::default();
            if let Some(h) = heights {
                opts.heights = h.clone();
            }
            opts.perturbations = *perturbations;
            opts.seed = input.seed.unwrap_or(*seed);
            let report = lift_experiment(&space, &verts, &opts, cfg)?;
            let doc = LiftReportDoc {
                schema: "degen-simplex.lift/1".to_string(),
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                timestamp: timestamp_field(req.no_timestamp),
                seed: opts.seed,
                tolerances: ToleranceDoc::new(req.tol, cfg),
                space: SpaceDoc::of(&space),
                heights: opts.heights.clone(),
                perturbations: opts.perturbations,
                excluded: report.excluded,
                sign_constant: report.sign_constant,
                common_sign: report.common_sign,
                nonvanishing: report.nonvanishing,
                c_obstruction: report.c_obstruction,
                x1: one_based(&report.partition.positive),
                x2: one_based(&report.partition.negative),
                samples: report
                    .samples
                    .iter()
                    .map(|s| LiftSampleDoc {
                        index: s.index,
                        apex: s.apex + 1,
                        joint: s.joint,
                        sign: s.sign,
                        richardson: s.richardson,
                        rho_limit: s.rho_limit,
                        records: s
                            .records
                            .iter()
                            .map(|r| LiftRecordDoc {
                                h: r.h,
                                delta_s: r.delta_s,
                                a0a1_sq: r.a0a1_sq,
                                rho: r.rho,
                            })
                            .collect(),
                    })
                    .collect(),
                diagnostics,
            };
            emit(&to_json(&doc)?, req.out.as_deref())
        }
    }
}

pub fn cmd_sample(
    theorem: &str,
    n: usize,
    d: Option<usize>,
    count: usize,
    seed: u64,
    tol: f64,
    cfg: &QuadConfig,
    no_timestamp: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if theorem != "spherical-sum" {
        return Err(CliError::Input(format!(
            "unknown theorem {theorem}; expected spherical-sum"
        )));
    }
    let d = d.unwrap_or(n + 1);
    let stats = spherical_sum_sample(n, d, count, seed, cfg)?;
    let doc = SampleReportDoc {
        schema: "degen-simplex.sample/1".to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: timestamp_field(no_timestamp),
        theorem: theorem.to_string(),
        n,
        d,
        count,
        seed,
        tolerances: ToleranceDoc::new(tol, cfg),
        resampled: stats.resampled,
        target: sphere_volume(n),
        min_gap: stats.min_gap,
        max_gap: stats.max_gap,
        mean_gap: stats.mean_gap,
        violations: stats.violations,
    };
    emit(&to_json(&doc)?, out)?;
    if stats.violations > 0 {
        return Err(CliError::Verification(format!(
            "{} of {} samples violated the facet-sum bound",
            stats.violations, count
        )));
    }
    Ok(())
}
