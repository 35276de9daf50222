//! Input and report documents: the JSON surface of the tool.
//!
//! Field order in the structs below is the serialization order, and every
//! report embeds the tolerance/quadrature context it was produced under, so
//! a report is reproducible from its own header plus the input and seed.

use degen_simplex::{QuadConfig, SpaceForm};
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: &str = "degen-simplex.report/1";
pub const INPUT_SCHEMA: &str = "degen-simplex.input/1";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SpaceDoc {
    /// −1 hyperbolic, 0 flat, +1 spherical.
    pub curvature: i32,
    /// Intrinsic dimension d of the model space.
    pub dim: usize,
}

impl SpaceDoc {
    pub fn to_space(&self) -> Result<SpaceForm, String> {
        let curvature = match self.curvature {
            -1 => degen_simplex::Curvature::Hyperbolic,
            0 => degen_simplex::Curvature::Flat,
            1 => degen_simplex::Curvature::Spherical,
            other => return Err(format!("curvature must be -1, 0, or 1, got {other}")),
        };
        SpaceForm::new(curvature, self.dim).map_err(|e| e.to_string())
    }

    pub fn of(space: &SpaceForm) -> Self {
        SpaceDoc {
            curvature: space.kappa() as i32,
            dim: space.dim(),
        }
    }
}

/// The analysis input: a space, its vertex coordinates (ambient length:
/// dim for flat, dim+1 for curved), and optional overrides.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InputDocument {
    #[serde(default = "default_input_schema")]
    pub schema: String,
    pub space: SpaceDoc,
    pub vertices: Vec<Vec<f64>>,
    /// Optional raw stress override; invariants are computed from it as-is.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    /// Dual normalization constant; commands fall back to 1.0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn default_input_schema() -> String {
    INPUT_SCHEMA.to_string()
}

/// Tolerance/quadrature context echoed into every report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToleranceDoc {
    /// General comparison tolerance for report-level flags.
    pub tol: f64,
    pub quad_rel_tol: f64,
    pub quad_abs_tol: f64,
    pub quad_max_depth: u32,
    pub quad_max_cells: u64,
}

impl ToleranceDoc {
    pub fn new(tol: f64, cfg: &QuadConfig) -> Self {
        ToleranceDoc {
            tol,
            quad_rel_tol: cfg.rel_tol,
            quad_abs_tol: cfg.abs_tol,
            quad_max_depth: cfg.max_depth,
            quad_max_cells: cfg.max_cells,
        }
    }

}

#[derive(Clone, Debug, Serialize)]
pub struct StressDoc {
    /// Canonical stress: unit norm, majority-positive sign.
    pub alpha: Vec<f64>,
    /// The vector invariants were computed from ("solved" or "supplied").
    pub alpha_raw: Vec<f64>,
    pub source: String,
    /// ‖Σαᵢ·Aᵢ‖∞ (plus |Σαᵢ| when flat) for `alpha_raw`.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionDoc {
    /// 1-based vertex labels with positive stress.
    pub x1: Vec<usize>,
    /// 1-based vertex labels with negative stress.
    pub x2: Vec<usize>,
    /// Size of the smaller class; 0 for the one-sided spherical case.
    pub case: usize,
    pub target: f64,
    pub sum_x1: f64,
    pub sum_x2: f64,
    /// sum_x1 − sum_x2 − target.
    pub residual: f64,
    /// Accumulated volume error estimate.
    pub volume_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantDoc {
    /// c₀ … c_{n+1}.
    pub c: Vec<f64>,
    pub errors: Vec<f64>,
    pub route: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexDoc {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharPolyDoc {
    /// Monic coefficients in descending powers: entry j is (−1)^j·c_j.
    pub coefficients: Vec<f64>,
    pub roots: Vec<ComplexDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereFitDoc {
    pub center: Vec<f64>,
    pub radius: f64,
    pub residual: f64,
    /// residual < tol: the points lie on a common sphere.
    pub cospherical: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReciprocityDoc {
    pub c_hat: f64,
    pub products: Vec<ComplexDoc>,
    /// min over pairings of max |λᵢ·μ_{σ(i)} − ĉ|.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DualDoc {
    pub c: f64,
    /// Shift applied to the primal before solving (A_{n+2} goes to 0).
    pub translation: Vec<f64>,
    /// Dual points in the translated frame; the last is the origin.
    pub b: Vec<Vec<f64>>,
    /// max |(Aᵢ−Aⱼ)·(Bₖ−Bₗ)| over disjoint index pairs.
    pub orthogonality_residual: f64,
    pub r: Vec<f64>,
    pub r_spread: f64,
    /// The dual's canonical stress.
    pub beta: Vec<f64>,
    pub beta_proportional_to_alpha: bool,
    pub t_a: f64,
    pub t_b: f64,
    pub coupling_residual: f64,
    pub c_hat: f64,
    pub diagonal_residual: f64,
    pub identity_residual: f64,
    pub coupling_gap: f64,
    pub dual_charpoly: CharPolyDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reciprocity: Option<ReciprocityDoc>,
    pub sphere_fit: SphereFitDoc,
    /// max coordinate gap of dual(dual(A)) against the translated primal.
    pub biduality_gap: f64,
    pub similarity_residual: f64,
    pub similar_to_primal: bool,
}

/// The full analysis/dual report.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema: String,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tolerances: ToleranceDoc,
    pub space: SpaceDoc,
    /// Intrinsic dimension n of the configuration (vertex count − 2).
    pub n: usize,
    pub stress: StressDoc,
    pub partition: PartitionDoc,
    pub invariants: InvariantDoc,
    pub charpoly: CharPolyDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual: Option<DualDoc>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftRecordDoc {
    pub h: f64,
    pub delta_s: f64,
    pub a0a1_sq: f64,
    pub rho: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftSampleDoc {
    pub index: usize,
    /// 1-based apex label.
    pub apex: usize,
    pub joint: bool,
    pub sign: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub richardson: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_limit: Option<f64>,
    pub records: Vec<LiftRecordDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftReportDoc {
    pub schema: String,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub seed: u64,
    pub tolerances: ToleranceDoc,
    pub space: SpaceDoc,
    pub heights: Vec<f64>,
    pub perturbations: usize,
    pub excluded: usize,
    pub sign_constant: bool,
    pub common_sign: f64,
    pub nonvanishing: bool,
    /// c_{n−1} of the canonical stress at the base configuration.
    pub c_obstruction: f64,
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub samples: Vec<LiftSampleDoc>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleReportDoc {
    pub schema: String,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub theorem: String,
    pub n: usize,
    pub d: usize,
    pub count: usize,
    pub seed: u64,
    pub tolerances: ToleranceDoc,
    pub resampled: usize,
    pub target: f64,
    pub min_gap: f64,
    pub max_gap: f64,
    pub mean_gap: f64,
    pub violations: usize,
}
