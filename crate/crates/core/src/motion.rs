//! Motions of degenerate simplices and the facet-volume constraint.
//!
//! A degenerate simplex confined to M^n inside M^d satisfies
//! S = Σ_{X₁} V_n(Fᵢ) − Σ_{X₂} V_n(Fᵢ) − target = 0, where X₁/X₂ is the
//! Radon partition of the facets and the target is V_n(𝕊ⁿ) for one-sided
//! spherical configurations and zero otherwise. The machinery here probes
//! what happens when the vertices move:
//!
//! * [`MotionPath`] — preset and custom vertex motions, including the two
//!   classical constraint-preserving families through a rectangle and an
//!   isosceles trapezoid;
//! * [`constraint_value`] / [`trace_path`] — S along a motion;
//! * [`lift_experiment`] — randomized lifts out of M^n measuring
//!   ΔS / |A₀A₁|², whose sign is pinned by the invariant c_{n−1};
//! * [`lemma_ratio_check`] — the differential identity relating the
//!   weighted facet-volume derivatives to c_{n−1}·d|A₀A₁|²;
//! * [`spherical_sum_sample`] — facet-volume sums of random non-degenerate
//!   spherical simplices, always below V_n(𝕊ⁿ);
//! * [`minkowski_residual`] / [`gauss_map_limit`] — the Minkowski relation
//!   for facet normals and the convergence of the normal configuration to
//!   the dual shape.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dual::construct_dual;
use crate::error::{GeomError, Result};
use crate::invariant::invariant_sequence;
use crate::linalg::{null_space, orthonormal_span, similarity_residual};
use crate::quadrature::QuadConfig;
use crate::space::{
    coord_refs, gram_norm, project_to_span, reflect_through_span, Curvature, LabeledPoint,
    SpaceForm,
};
use crate::stress::{radon_partition, solve_one_stress, RadonPartition};
use crate::volume::{simplex_volume, sphere_volume, Volume};

/// Re-embed a configuration into the same space form with `extra` more
/// dimensions, appending zero coordinates. A planar configuration has to
/// live in a larger ambient space before it can be lifted.
pub fn embed_in_higher(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    extra: usize,
) -> Result<(SpaceForm, Vec<LabeledPoint>)> {
    let bigger = SpaceForm::new(space.curvature(), space.dim() + extra)?;
    let mut out = Vec::with_capacity(verts.len());
    for v in verts {
        space.check_len(v.coords())?;
        let mut coords = DVector::zeros(bigger.ambient_dim());
        coords.rows_mut(0, space.ambient_dim()).copy_from(v.coords());
        out.push(LabeledPoint::from_validated(coords));
    }
    Ok((bigger, out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    /// Continuous but possibly with corners (piecewise paths).
    Continuous,
}

/// A one-parameter motion t ↦ (A₁(t), …, A_{n+2}(t)) in a space form.
///
/// The apex is the vertex whose reflection through the span of the others
/// defines the lift magnitude |A₀A₁|².
pub struct MotionPath {
    space: SpaceForm,
    label: String,
    apex: usize,
    t_range: (f64, f64),
    smoothness: Smoothness,
    eval: Box<dyn Fn(f64) -> Result<Vec<LabeledPoint>> + Send + Sync>,
}

fn finite_positive(value: f64, name: &str) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(GeomError::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )));
    }
    Ok(())
}

impl MotionPath {
    pub fn space(&self) -> &SpaceForm {
        &self.space
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn apex(&self) -> usize {
        self.apex
    }

    pub fn t_range(&self) -> (f64, f64) {
        self.t_range
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    /// Override the parameter range (presets default to [0, 0.5] and
    /// vertex lifts to [0, 1]).
    pub fn with_t_range(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(GeomError::InvalidParameter(format!(
                "invalid parameter range [{lo}, {hi}]"
            )));
        }
        self.t_range = (lo, hi);
        Ok(self)
    }

    pub fn at(&self, t: f64) -> Result<Vec<LabeledPoint>> {
        let (lo, hi) = self.t_range;
        if !(t >= lo && t <= hi) {
            return Err(GeomError::InvalidParameter(format!(
                "parameter {t} outside the path range [{lo}, {hi}]"
            )));
        }
        (self.eval)(t)
    }

    /// The rectangle family: vertices (±a, ±b, 0) with one diagonal pair
    /// fixed and the other raised to z = t. All four facets stay congruent
    /// in pairs across the partition, so S ≡ 0 while the simplex becomes
    /// non-degenerate.
    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        finite_positive(a, "rectangle half-width a")?;
        finite_positive(b, "rectangle half-height b")?;
        let space = SpaceForm::euclidean(3);
        let eval_space = space;
        let eval = move |t: f64| -> Result<Vec<LabeledPoint>> {
            [
                [a, b, 0.0],
                [-a, b, t],
                [-a, -b, 0.0],
                [a, -b, t],
            ]
            .iter()
            .map(|c| eval_space.point_from_slice(c))
            .collect()
        };
        Ok(MotionPath {
            space,
            label: format!("rectangle(a={a}, b={b})"),
            apex: 1,
            t_range: (0.0, 0.5),
            smoothness: Smoothness::Smooth,
            eval: Box::new(eval),
        })
    }

    /// The isosceles-trapezoid family: legs of length `l`, diagonals `d`,
    /// bottom base `b1`. One diagonal vertex pair is raised to z = t, which
    /// keeps the two legs equal and the two diagonals equal, so the facets
    /// stay congruent in pairs and S ≡ 0. With rectangle parameters
    /// (b1 = 2·x₃) this reduces to [`MotionPath::rectangle`].
    pub fn trapezoid(l: f64, d: f64, b1: f64) -> Result<Self> {
        finite_positive(l, "trapezoid leg l")?;
        finite_positive(d, "trapezoid diagonal d")?;
        finite_positive(b1, "trapezoid base b1")?;
        let x3 = (d * d - l * l) / (2.0 * b1);
        let h_sq = l * l - (x3 - b1 / 2.0).powi(2);
        if !(x3 > 0.0 && h_sq > 0.0) {
            return Err(GeomError::InvalidParameter(format!(
                "leg {l}, diagonal {d}, and base {b1} do not close up to a trapezoid"
            )));
        }
        let h = h_sq.sqrt();
        let space = SpaceForm::euclidean(3);
        let eval_space = space;
        let half = b1 / 2.0;
        let eval = move |t: f64| -> Result<Vec<LabeledPoint>> {
            [
                [half, 0.0, t],
                [-half, 0.0, 0.0],
                [x3, h, 0.0],
                [-x3, h, t],
            ]
            .iter()
            .map(|c| eval_space.point_from_slice(c))
            .collect()
        };
        Ok(MotionPath {
            space,
            label: format!("trapezoid(l={l}, d={d}, b1={b1})"),
            apex: 0,
            t_range: (0.0, 0.5),
            smoothness: Smoothness::Smooth,
            eval: Box::new(eval),
        })
    }

    /// Move a single vertex with unit speed along `direction` (geodesically
    /// for curved spaces, where the direction must be form-orthogonal to
    /// the vertex), keeping every other vertex fixed.
    pub fn vertex_lift(
        space: &SpaceForm,
        verts: &[LabeledPoint],
        apex: usize,
        direction: &[f64],
    ) -> Result<Self> {
        if verts.len() < 3 {
            return Err(GeomError::InvalidParameter(
                "a motion path needs at least three vertices".into(),
            ));
        }
        if apex >= verts.len() {
            return Err(GeomError::InvalidParameter(format!(
                "apex index {apex} out of range for {} vertices",
                verts.len()
            )));
        }
        for v in verts {
            space.check_len(v.coords())?;
        }
        if direction.len() != space.ambient_dim() {
            return Err(GeomError::DimensionMismatch {
                expected: space.ambient_dim(),
                got: direction.len(),
            });
        }
        let dir = DVector::from_row_slice(direction);
        let norm_sq = space.form_dot(&dir, &dir);
        if !(norm_sq.is_finite() && norm_sq > 0.0) {
            return Err(GeomError::InvalidParameter(
                "lift direction must have positive length".into(),
            ));
        }
        let unit = &dir / norm_sq.sqrt();
        if !space.is_flat() {
            let tangency = space.form_dot(&unit, verts[apex].coords());
            if tangency.abs() > 1e-8 {
                return Err(GeomError::InvalidParameter(format!(
                    "lift direction is not tangent at the apex (⟨v, u⟩ = {tangency:.3e})"
                )));
            }
        }
        let base: Vec<LabeledPoint> = verts.to_vec();
        let eval_space = *space;
        let eval = move |t: f64| -> Result<Vec<LabeledPoint>> {
            let mut out = base.clone();
            let v = base[apex].coords();
            let moved = match eval_space.curvature() {
                Curvature::Flat => v + &unit * t,
                Curvature::Spherical => v * t.cos() + &unit * t.sin(),
                Curvature::Hyperbolic => v * t.cosh() + &unit * t.sinh(),
            };
            out[apex] = if eval_space.is_flat() {
                LabeledPoint::from_validated(moved)
            } else {
                eval_space.point(moved)?
            };
            Ok(out)
        };
        Ok(MotionPath {
            space: *space,
            label: format!("vertex-lift(apex={})", apex + 1),
            apex,
            t_range: (0.0, 1.0),
            smoothness: Smoothness::Smooth,
            eval: Box::new(eval),
        })
    }

    /// Piecewise-linear interpolation through a list of configurations
    /// (flat space only), with knots spread uniformly over `t_range`.
    pub fn waypoints(
        space: &SpaceForm,
        configs: Vec<Vec<LabeledPoint>>,
        t_range: (f64, f64),
    ) -> Result<Self> {
        if !space.is_flat() {
            return Err(GeomError::Unsupported(
                "waypoint interpolation is defined for flat space".into(),
            ));
        }
        if configs.len() < 2 {
            return Err(GeomError::InvalidParameter(
                "waypoint paths need at least two configurations".into(),
            ));
        }
        let m = configs[0].len();
        if m < 3 {
            return Err(GeomError::InvalidParameter(
                "a motion path needs at least three vertices".into(),
            ));
        }
        for cfg in &configs {
            if cfg.len() != m {
                return Err(GeomError::DimensionMismatch {
                    expected: m,
                    got: cfg.len(),
                });
            }
            for v in cfg {
                space.check_len(v.coords())?;
            }
        }
        let (lo, hi) = t_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(GeomError::InvalidParameter(format!(
                "invalid parameter range [{lo}, {hi}]"
            )));
        }
        let segments = configs.len() - 1;
        let eval = move |t: f64| -> Result<Vec<LabeledPoint>> {
            let s = ((t - lo) / (hi - lo) * segments as f64).clamp(0.0, segments as f64);
            let seg = (s.floor() as usize).min(segments - 1);
            let frac = s - seg as f64;
            Ok((0..m)
                .map(|i| {
                    let a = configs[seg][i].coords();
                    let b = configs[seg + 1][i].coords();
                    LabeledPoint::from_validated(a * (1.0 - frac) + b * frac)
                })
                .collect())
        };
        Ok(MotionPath {
            space: *space,
            label: "waypoints".into(),
            apex: 0,
            t_range,
            smoothness: Smoothness::Continuous,
            eval: Box::new(eval),
        })
    }
}

/// |A₀A₁|²: the squared (form) length of the chord from the apex vertex to
/// its mirror image through the span of the other vertices. Zero exactly
/// when the configuration is confined to the lower-dimensional subspace.
pub fn apex_displacement_sq(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    apex: usize,
) -> Result<f64> {
    if apex >= verts.len() {
        return Err(GeomError::InvalidParameter(format!(
            "apex index {apex} out of range for {} vertices",
            verts.len()
        )));
    }
    let others: Vec<LabeledPoint> = verts
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != apex)
        .map(|(_, v)| v.clone())
        .collect();
    let mirrored = reflect_through_span(space, &verts[apex], &others)?;
    let diff = verts[apex].coords() - mirrored.coords();
    Ok(space.form_dot(&diff, &diff))
}

/// The constraint S and the facet volumes behind it.
#[derive(Clone, Debug)]
pub struct ConstraintValue {
    /// Σ_{X₁} V − Σ_{X₂} V − target.
    pub s: f64,
    /// V_n(Fᵢ) for every facet, in vertex order.
    pub per_face: Vec<Volume>,
    pub target: f64,
}

/// Evaluate the volume constraint of a (possibly lifted) configuration
/// against a partition frozen at the start of the motion.
pub fn constraint_value(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    partition: &RadonPartition,
    cfg: &QuadConfig,
) -> Result<ConstraintValue> {
    let m = verts.len();
    if partition.positive.len() + partition.negative.len() != m {
        return Err(GeomError::InvalidParameter(
            "partition does not match the vertex count".into(),
        ));
    }
    let mut per_face = Vec::with_capacity(m);
    for i in 0..m {
        let facet: Vec<LabeledPoint> = verts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let vol = simplex_volume(space, &facet, cfg).map_err(|e| match e {
            GeomError::DegenerateFace(msg) => {
                GeomError::DegenerateFace(format!("facet {}: {msg}", i + 1))
            }
            other => other,
        })?;
        per_face.push(vol);
    }
    let mut s = -partition.target;
    for &i in &partition.positive {
        s += per_face[i].value;
    }
    for &i in &partition.negative {
        s -= per_face[i].value;
    }
    Ok(ConstraintValue {
        s,
        per_face,
        target: partition.target,
    })
}

#[derive(Clone, Debug)]
pub struct TraceSample {
    pub t: f64,
    pub s: f64,
    /// |A₀A₁|² for the path's apex vertex.
    pub a0a1_sq: f64,
    pub face_volumes: Vec<f64>,
}

/// A sampled motion with the partition frozen at the start.
#[derive(Clone, Debug)]
pub struct MotionTrace {
    pub samples: Vec<TraceSample>,
    pub partition: RadonPartition,
}

/// Sample S, |A₀A₁|², and the facet volumes along a path. The Radon
/// partition is computed once from the initial (degenerate) configuration.
pub fn trace_path(path: &MotionPath, ts: &[f64], cfg: &QuadConfig) -> Result<MotionTrace> {
    let space = path.space();
    let start = path.at(path.t_range().0)?;
    let alpha = solve_one_stress(space, &start)?;
    let partition = radon_partition(space, alpha.values())?;
    let mut samples = Vec::with_capacity(ts.len());
    for &t in ts {
        let verts = path.at(t)?;
        let cv = constraint_value(space, &verts, &partition, cfg)?;
        let a0a1_sq = apex_displacement_sq(space, &verts, path.apex())?;
        samples.push(TraceSample {
            t,
            s: cv.s,
            a0a1_sq,
            face_volumes: cv.per_face.iter().map(|v| v.value).collect(),
        });
    }
    Ok(MotionTrace { samples, partition })
}

/// The continuous stress frame along a motion: α_apex = ‖F_apex‖ and
/// α_i = −‖F_i‖·cos θ_i, with θ_i the dihedral angle between facets F_i
/// and F_apex along their common ridge. At a degenerate configuration the
/// frame is proportional to the static stress.
#[derive(Clone, Debug)]
pub struct MotionStressFrame {
    pub alpha: Vec<f64>,
    /// Dihedral angles; the apex entry is zero by convention.
    pub theta: Vec<f64>,
    pub apex: usize,
}

fn facet_scale(space: &SpaceForm, facet: &[LabeledPoint], cfg: &QuadConfig) -> Result<f64> {
    if space.is_flat() {
        let k = facet.len() - 1;
        let factorial: f64 = (1..=k).map(|i| i as f64).product();
        Ok(simplex_volume(space, facet, cfg)?.value * factorial)
    } else {
        gram_norm(space, facet)
    }
}

pub fn motion_stress_frame(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    apex: usize,
) -> Result<MotionStressFrame> {
    let m = verts.len();
    if m < 3 {
        return Err(GeomError::InvalidParameter(
            "a stress frame needs at least three vertices".into(),
        ));
    }
    if apex >= m {
        return Err(GeomError::InvalidParameter(format!(
            "apex index {apex} out of range for {m} vertices"
        )));
    }
    for v in verts {
        space.check_len(v.coords())?;
    }
    let cfg = QuadConfig::default();
    let mut alpha = vec![0.0; m];
    let mut theta = vec![0.0; m];
    let without = |skip: &[usize]| -> Vec<LabeledPoint> {
        verts
            .iter()
            .enumerate()
            .filter(|(j, _)| !skip.contains(j))
            .map(|(_, v)| v.clone())
            .collect()
    };
    alpha[apex] = facet_scale(space, &without(&[apex]), &cfg)?;
    for i in 0..m {
        if i == apex {
            continue;
        }
        let scale = facet_scale(space, &without(&[i]), &cfg)?;
        let ridge = without(&[apex, i]);
        let refs = coord_refs(&ridge);
        let perp = |p: &LabeledPoint| -> Result<DVector<f64>> {
            Ok(p.coords() - project_to_span(space, &refs, p.coords())?)
        };
        let u_apex = perp(&verts[apex])?;
        let u_i = perp(&verts[i])?;
        let sq_apex = space.form_dot(&u_apex, &u_apex);
        let sq_i = space.form_dot(&u_i, &u_i);
        let tol = 1e-10 * verts[apex].coords().norm().max(1.0);
        if !(sq_apex > tol * tol && sq_i > tol * tol) {
            return Err(GeomError::DegenerateFace(format!(
                "vertex {} or the apex lies in the span of the ridge opposite both",
                i + 1
            )));
        }
        let ua = u_apex / sq_apex.sqrt();
        let ui = u_i / sq_i.sqrt();
        let cos = space.form_dot(&ua, &ui);
        let rej = &ui - &ua * cos;
        let sin = space.form_dot(&rej, &rej).max(0.0).sqrt();
        theta[i] = sin.atan2(cos);
        alpha[i] = -scale * cos;
    }
    Ok(MotionStressFrame { alpha, theta, apex })
}

/// One evaluation of the differential identity along a path.
#[derive(Clone, Copy, Debug)]
pub struct RatioSample {
    pub t: f64,
    /// The weighted facet-volume derivative sum.
    pub lhs: f64,
    /// −¼·α_apex²·c_{n−1}·(|A₀A₁|²)'.
    pub rhs: f64,
    /// lhs / rhs; `None` when the path does not leave the subspace, where
    /// both sides vanish and the identity is indeterminate.
    pub ratio: Option<f64>,
    pub a0a1_sq: f64,
}

/// Check the differential identity at the given parameters of a smooth
/// path: the two sides agree asymptotically as t → 0, so the reported
/// ratios approach 1. Flat space supports any n; curved spaces support
/// n ≤ 2 (closed-form volumes make the numerical derivative reliable).
pub fn lemma_ratio_check(
    path: &MotionPath,
    ts: &[f64],
    fd_step: f64,
    cfg: &QuadConfig,
) -> Result<Vec<RatioSample>> {
    let space = path.space();
    if ts.is_empty() {
        return Err(GeomError::InvalidParameter(
            "the ratio check needs at least one parameter".into(),
        ));
    }
    finite_positive(fd_step, "finite-difference step")?;
    let (lo, hi) = path.t_range();
    let start = path.at(lo)?;
    let m = start.len();
    let n = m - 2;
    if !space.is_flat() && n > 2 {
        return Err(GeomError::Unsupported(
            "the curved ratio check is limited to n <= 2".into(),
        ));
    }
    let apex = path.apex();
    let frame0 = motion_stress_frame(space, &start, apex)?;
    let seq = invariant_sequence(space, &start, &frame0.alpha, None, None, cfg)?;
    let c_obstruction = seq.c[n - 1];
    let factorial: f64 = (1..=n).map(|i| i as f64).product();
    let front = if space.is_flat() {
        2.0 * factorial * factorial
    } else {
        2.0 * factorial
    };

    let gap_at = |t: f64| -> Result<f64> {
        apex_displacement_sq(space, &path.at(t)?, apex)
    };
    let mut gaps = Vec::with_capacity(ts.len());
    for &t in ts {
        if !(t - fd_step >= lo && t + fd_step <= hi) {
            return Err(GeomError::InvalidParameter(format!(
                "parameter {t} leaves no room for the finite-difference step"
            )));
        }
        gaps.push(gap_at(t)?);
    }
    let confined = gaps.iter().all(|&g| g < 1e-16);
    if !confined {
        // Precondition of the identity: |A₀A₁|² strictly increasing in t.
        let mut order: Vec<usize> = (0..ts.len()).collect();
        order.sort_by(|&a, &b| ts[a].partial_cmp(&ts[b]).unwrap());
        for pair in order.windows(2) {
            if gaps[pair[1]] <= gaps[pair[0]] {
                return Err(GeomError::InvalidParameter(
                    "|A0A1|^2 is not strictly increasing on the grid".into(),
                ));
            }
        }
    }

    let mut out = Vec::with_capacity(ts.len());
    for (&t, &gap) in ts.iter().zip(&gaps) {
        let verts = path.at(t)?;
        let plus = path.at(t + fd_step)?;
        let minus = path.at(t - fd_step)?;
        let frame = motion_stress_frame(space, &verts, apex)?;
        let mut lhs = 0.0;
        for i in 0..m {
            let facet = |vs: &[LabeledPoint]| -> Vec<LabeledPoint> {
                vs.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, v)| v.clone())
                    .collect()
            };
            let v_plus = simplex_volume(space, &facet(&plus), cfg)?.value;
            let v_minus = simplex_volume(space, &facet(&minus), cfg)?.value;
            let deriv = (v_plus - v_minus) / (2.0 * fd_step);
            let weight: f64 = (0..m).filter(|&s| s != i).map(|s| frame.alpha[s]).product();
            let here = facet(&verts);
            let factor = if space.is_flat() {
                simplex_volume(space, &here, cfg)?.value
            } else {
                gram_norm(space, &here)?
            };
            lhs += weight * factor * deriv;
        }
        lhs *= front;
        let gap_deriv = (gap_at(t + fd_step)? - gap_at(t - fd_step)?) / (2.0 * fd_step);
        if !confined && gap_deriv <= 0.0 {
            return Err(GeomError::InvalidParameter(
                "(|A0A1|^2)' is not positive on the grid".into(),
            ));
        }
        let rhs = -0.25 * frame0.alpha[apex] * frame0.alpha[apex] * c_obstruction * gap_deriv;
        let ratio = if gap < 1e-16 { None } else { Some(lhs / rhs) };
        out.push(RatioSample {
            t,
            lhs,
            rhs,
            ratio,
            a0a1_sq: gap,
        });
    }
    Ok(out)
}

/// Options for [`lift_experiment`].
#[derive(Clone, Debug)]
pub struct LiftOptions {
    /// Number of random perturbation directions (alternating single-vertex
    /// and joint perturbations).
    pub perturbations: usize,
    /// Height grid, largest first; consecutive entries should halve so the
    /// Richardson comparison of ρ(h) and ρ(h/2) applies.
    pub heights: Vec<f64>,
    pub seed: u64,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            perturbations: 50,
            heights: vec![1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4, 1.5625e-4],
            seed: 2024,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LiftRecord {
    pub h: f64,
    pub delta_s: f64,
    pub a0a1_sq: f64,
    /// ΔS / |A₀A₁|².
    pub rho: f64,
}

#[derive(Clone, Debug)]
pub struct LiftSample {
    pub index: usize,
    /// The vertex used for the |A₀A₁|² reference.
    pub apex: usize,
    /// Whether every vertex was perturbed (as opposed to the apex alone).
    pub joint: bool,
    pub records: Vec<LiftRecord>,
    /// Sign of ΔS at the smallest height.
    pub sign: f64,
    /// max over height pairs (h ≤ 1e−3) of |ρ(h) − ρ(h/2)| / |ρ(h/2)|.
    pub richardson: Option<f64>,
    /// ρ extrapolated from the two smallest heights.
    pub rho_limit: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct LiftReport {
    pub samples: Vec<LiftSample>,
    /// Perturbations dropped because a facet degenerated along them.
    pub excluded: usize,
    /// Whether sign(ΔS) agreed across all retained records with
    /// |A₀A₁|² ≤ 1e−4.
    pub sign_constant: bool,
    /// The common sign (0 when `sign_constant` is false).
    pub common_sign: f64,
    /// Whether every retained record with |A₀A₁|² ∈ (0, 1e−4] had ΔS ≠ 0.
    pub nonvanishing: bool,
    /// c_{n−1} of the initial configuration under the normalized stress.
    pub c_obstruction: f64,
    pub partition: RadonPartition,
}

/// Perturb a degenerate flat configuration out of its subspace along
/// seeded random directions and record how the constraint S reacts.
///
/// The theory: when c_{n−1} ≠ 0, every small lift changes S, and the sign
/// of ΔS is the same for all of them; ρ(h) = ΔS/|A₀A₁|² converges as the
/// heights shrink. Perturbation k draws from an independent, reproducible
/// RNG stream, so results do not depend on evaluation order.
pub fn lift_experiment(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    opts: &LiftOptions,
    cfg: &QuadConfig,
) -> Result<LiftReport> {
    if !space.is_flat() {
        return Err(GeomError::Unsupported(
            "lift experiments are implemented for flat space".into(),
        ));
    }
    if opts.perturbations == 0 || opts.heights.is_empty() {
        return Err(GeomError::InvalidParameter(
            "need at least one perturbation and one height".into(),
        ));
    }
    for &h in &opts.heights {
        finite_positive(h, "lift height")?;
    }
    let m = verts.len();
    let n = m - 2;
    let alpha = solve_one_stress(space, verts)?;
    let partition = radon_partition(space, alpha.values())?;
    let seq = invariant_sequence(space, verts, alpha.values(), None, None, cfg)?;
    let c_obstruction = seq.c[n - 1];
    let s0 = constraint_value(space, verts, &partition, cfg)?.s;

    let base = verts[0].coords();
    let edges: Vec<DVector<f64>> = verts[1..].iter().map(|v| v.coords() - base).collect();
    let q = orthonormal_span(&edges);
    let complement = null_space(&q.transpose());
    if complement.is_empty() {
        return Err(GeomError::InvalidParameter(
            "the configuration already spans the ambient space; embed it higher first".into(),
        ));
    }

    let mut samples = Vec::new();
    let mut excluded = 0usize;
    let mut sign_constant = true;
    let mut nonvanishing = true;
    let mut common_sign = 0.0f64;
    'perturbation: for index in 0..opts.perturbations {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(index as u64);
        let joint = index % 2 == 1;
        let apex = (index / 2) % m;
        let mut disp: Vec<DVector<f64>> = vec![DVector::zeros(space.ambient_dim()); m];
        {
            let mut fill = |slot: &mut DVector<f64>| {
                for basis in &complement {
                    let g: f64 = rng.sample(StandardNormal);
                    *slot += basis * g;
                }
            };
            if joint {
                for slot in disp.iter_mut() {
                    fill(slot);
                }
            } else {
                fill(&mut disp[apex]);
            }
        }
        let total: f64 = disp.iter().map(|d| d.norm_squared()).sum::<f64>().sqrt();
        if total < 1e-12 {
            excluded += 1;
            continue;
        }
        for d in disp.iter_mut() {
            *d /= total;
        }

        let mut records = Vec::with_capacity(opts.heights.len());
        for &h in &opts.heights {
            let lifted: Vec<LabeledPoint> = verts
                .iter()
                .zip(&disp)
                .map(|(v, d)| LabeledPoint::from_validated(v.coords() + d * h))
                .collect();
            let cv = match constraint_value(space, &lifted, &partition, cfg) {
                Ok(cv) => cv,
                Err(GeomError::DegenerateFace(_)) => {
                    excluded += 1;
                    continue 'perturbation;
                }
                Err(e) => return Err(e),
            };
            let a0a1_sq = apex_displacement_sq(space, &lifted, apex)?;
            let delta_s = cv.s - s0;
            records.push(LiftRecord {
                h,
                delta_s,
                a0a1_sq,
                rho: delta_s / a0a1_sq,
            });
        }
        let sign = records.last().map_or(0.0, |r| r.delta_s.signum());
        for r in &records {
            if r.a0a1_sq > 0.0 && r.a0a1_sq <= 1e-4 {
                if r.delta_s == 0.0 {
                    nonvanishing = false;
                } else if common_sign == 0.0 {
                    common_sign = r.delta_s.signum();
                } else if r.delta_s.signum() != common_sign {
                    sign_constant = false;
                }
            }
        }
        let mut richardson: Option<f64> = None;
        for pair in records.windows(2) {
            if pair[0].h <= 1e-3 && pair[1].rho != 0.0 {
                let dev = ((pair[0].rho - pair[1].rho) / pair[1].rho).abs();
                richardson = Some(richardson.map_or(dev, |r: f64| r.max(dev)));
            }
        }
        let rho_limit = (records.len() >= 2).then(|| {
            let last = records[records.len() - 1].rho;
            let prev = records[records.len() - 2].rho;
            (4.0 * last - prev) / 3.0
        });
        samples.push(LiftSample {
            index,
            apex,
            joint,
            records,
            sign,
            richardson,
            rho_limit,
        });
    }
    if common_sign == 0.0 {
        sign_constant = false;
    }
    Ok(LiftReport {
        samples,
        excluded,
        sign_constant,
        common_sign: if sign_constant { common_sign } else { 0.0 },
        nonvanishing,
        c_obstruction,
        partition,
    })
}

/// Statistics of facet-volume sums over random non-degenerate spherical
/// simplices: the sum always stays below the volume of 𝕊ⁿ.
#[derive(Clone, Debug)]
pub struct SumSampleStats {
    pub count: usize,
    /// Samples rejected (and redrawn) for near-degeneracy.
    pub resampled: usize,
    /// Gaps V_n(𝕊ⁿ) − Σ V_n(Fᵢ): smallest and largest observed.
    pub min_gap: f64,
    pub max_gap: f64,
    pub mean_gap: f64,
    /// Number of samples with a non-positive gap (zero if the bound holds).
    pub violations: usize,
}

/// Sample `count` non-degenerate (n+1)-simplices on 𝕊^d and compare each
/// facet-volume sum against V_n(𝕊ⁿ).
pub fn spherical_sum_sample(
    n: usize,
    d: usize,
    count: usize,
    seed: u64,
    cfg: &QuadConfig,
) -> Result<SumSampleStats> {
    if !(1..=2).contains(&n) {
        return Err(GeomError::Unsupported(
            "spherical sum sampling supports n in {1, 2}".into(),
        ));
    }
    if d < n + 1 {
        return Err(GeomError::InvalidParameter(format!(
            "need ambient sphere dimension at least {} for non-degenerate simplices, got {d}",
            n + 1
        )));
    }
    if count == 0 {
        return Err(GeomError::InvalidParameter("count must be positive".into()));
    }
    let space = SpaceForm::spherical(d);
    let target = sphere_volume(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut resampled = 0usize;
    let mut min_gap = f64::INFINITY;
    let mut max_gap = f64::NEG_INFINITY;
    let mut sum_gap = 0.0;
    let mut violations = 0usize;
    let budget = 1000 * count;
    let mut drawn = 0usize;
    let mut kept = 0usize;
    while kept < count {
        if drawn >= budget {
            return Err(GeomError::Singular(
                "sampling budget exhausted while rejecting degenerate draws".into(),
            ));
        }
        drawn += 1;
        let verts: Vec<LabeledPoint> = (0..n + 2)
            .map(|_| crate::sample::random_on_space(&space, &mut rng))
            .collect::<Result<_>>()?;
        let mut coords = DMatrix::zeros(n + 2, space.ambient_dim());
        for (i, v) in verts.iter().enumerate() {
            coords.row_mut(i).copy_from(&v.coords().transpose());
        }
        if crate::linalg::svd_rank(&coords) != n + 2 {
            resampled += 1;
            continue;
        }
        let mut total = 0.0;
        let mut ok = true;
        for i in 0..n + 2 {
            let facet: Vec<LabeledPoint> = verts
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| v.clone())
                .collect();
            match simplex_volume(&space, &facet, cfg) {
                Ok(v) => total += v.value,
                Err(GeomError::DegenerateFace(_)) => {
                    ok = false;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if !ok {
            resampled += 1;
            continue;
        }
        let gap = target - total;
        min_gap = min_gap.min(gap);
        max_gap = max_gap.max(gap);
        sum_gap += gap;
        if gap <= 0.0 {
            violations += 1;
        }
        kept += 1;
    }
    Ok(SumSampleStats {
        count,
        resampled,
        min_gap,
        max_gap,
        mean_gap: sum_gap / count as f64,
        violations,
    })
}

/// Residuals of the Minkowski relation for a non-degenerate simplex.
#[derive(Clone, Copy, Debug)]
pub struct MinkowskiResidual {
    /// ‖Σ V_n(Fᵢ)·uᵢ‖ with all normals pointing outward.
    pub outward: f64,
    /// The partition-signed version (outward normals on the positive side,
    /// inward on the negative side), when a partition was supplied.
    pub partition_signed: Option<f64>,
}

fn outward_normal(
    verts: &[LabeledPoint],
    omit: usize,
) -> Result<DVector<f64>> {
    let facet: Vec<&DVector<f64>> = verts
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != omit)
        .map(|(_, v)| v.coords())
        .collect();
    let dim = facet[0].len();
    let mut edges = DMatrix::zeros(facet.len() - 1, dim);
    for (row, f) in facet[1..].iter().enumerate() {
        edges.row_mut(row).copy_from(&(*f - facet[0]).transpose());
    }
    let kernel = null_space(&edges);
    if kernel.len() != 1 {
        return Err(GeomError::DegenerateFace(format!(
            "facet {} does not span a hyperplane",
            omit + 1
        )));
    }
    let mut u = kernel.into_iter().next().unwrap();
    if u.dot(&(verts[omit].coords() - facet[0])) > 0.0 {
        u = -u;
    }
    Ok(u)
}

/// Evaluate the Minkowski relation Σ V_n(Fᵢ)·uᵢ = 0 for a non-degenerate
/// (n+1)-simplex in ℝ^{n+1} (n+2 vertices).
pub fn minkowski_residual(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    partition: Option<&RadonPartition>,
    cfg: &QuadConfig,
) -> Result<MinkowskiResidual> {
    if !space.is_flat() {
        return Err(GeomError::Unsupported(
            "the Minkowski relation is evaluated in flat space".into(),
        ));
    }
    let m = verts.len();
    if m < 3 {
        return Err(GeomError::InvalidParameter(
            "a simplex needs at least three vertices".into(),
        ));
    }
    let n = m - 2;
    if space.dim() != n + 1 {
        return Err(GeomError::InvalidParameter(format!(
            "a solid (n+1)-simplex with {m} vertices needs ambient dimension {}, got {}",
            n + 1,
            space.dim()
        )));
    }
    for v in verts {
        space.check_len(v.coords())?;
    }
    let base = verts[0].coords();
    let edges: Vec<DVector<f64>> = verts[1..].iter().map(|v| v.coords() - base).collect();
    if orthonormal_span(&edges).ncols() != n + 1 {
        return Err(GeomError::DegenerateFace(
            "the simplex is degenerate; the Minkowski relation needs a solid simplex".into(),
        ));
    }
    if let Some(p) = partition {
        if p.positive.len() + p.negative.len() != m {
            return Err(GeomError::InvalidParameter(
                "partition does not match the vertex count".into(),
            ));
        }
    }
    let mut plain = DVector::zeros(space.ambient_dim());
    let mut signed = DVector::zeros(space.ambient_dim());
    for i in 0..m {
        let facet: Vec<LabeledPoint> = verts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let vol = simplex_volume(space, &facet, cfg)?.value;
        let u = outward_normal(verts, i)?;
        plain += &u * vol;
        if let Some(p) = partition {
            // Sign convention: the normal itself flips to inward on the
            // negative side, and that side is then subtracted.
            if p.positive.contains(&i) {
                signed += &u * vol;
            } else {
                signed -= &(-&u) * vol;
            }
        }
    }
    Ok(MinkowskiResidual {
        outward: plain.norm(),
        partition_signed: partition.map(|_| signed.norm()),
    })
}

#[derive(Clone, Copy, Debug)]
pub struct GaussSample {
    pub t: f64,
    /// Shape distance (up to similarity) between the normal configuration
    /// and the dual of the initial configuration.
    pub residual: f64,
}

/// Follow the Gauss map along a lift path: at each t, collect the facet
/// normals (outward on the positive side of the partition, inward on the
/// negative side) as points on the unit sphere and compare their shape to
/// the dual of the initial degenerate configuration. As t → 0 the residual
/// tends to zero: the normal configuration converges to the dual shape.
pub fn gauss_map_limit(path: &MotionPath, ts: &[f64], cfg: &QuadConfig) -> Result<Vec<GaussSample>> {
    let space = path.space();
    if !space.is_flat() {
        return Err(GeomError::Unsupported(
            "the Gauss-map limit is evaluated in flat space".into(),
        ));
    }
    let start = path.at(path.t_range().0)?;
    let m = start.len();
    let n = m - 2;
    if space.dim() != n + 1 {
        return Err(GeomError::InvalidParameter(format!(
            "the Gauss map needs ambient dimension {}, got {}",
            n + 1,
            space.dim()
        )));
    }
    let alpha = solve_one_stress(space, &start)?;
    let partition = radon_partition(space, alpha.values())?;
    let reference: Vec<DVector<f64>> = construct_dual(space, &start, 1.0)?
        .b
        .iter()
        .map(|p| p.coords().clone())
        .collect();
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        let verts = path.at(t)?;
        let mut normals = Vec::with_capacity(m);
        for i in 0..m {
            let u = outward_normal(&verts, i)?;
            normals.push(if partition.positive.contains(&i) { u } else { -u });
        }
        let residual = similarity_residual(&normals, &reference)?;
        out.push(GaussSample { t, residual });
    }
    let _ = cfg;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::stress::OneStress;
    use approx::assert_abs_diff_eq;

    fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
        (0..=steps)
            .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
            .collect()
    }

    #[test]
    fn rectangle_path_keeps_the_constraint() {
        let path = MotionPath::rectangle(2.0, 1.0).unwrap();
        let trace = trace_path(&path, &grid(0.0, 0.5, 10), &QuadConfig::default()).unwrap();
        for sample in &trace.samples {
            assert!(
                sample.s.abs() < 1e-10,
                "S({}) = {} should vanish along the rectangle family",
                sample.t,
                sample.s
            );
        }
        assert!(trace.samples[0].a0a1_sq < 1e-16);
        assert!(trace.samples[10].a0a1_sq > 1e-4);
    }

    #[test]
    fn trapezoid_path_keeps_the_constraint() {
        let (l, d, b1) = fixtures::TRAPEZOID_PARAMS;
        let path = MotionPath::trapezoid(l, d, b1).unwrap();
        let trace = trace_path(&path, &grid(0.0, 0.5, 10), &QuadConfig::default()).unwrap();
        for sample in &trace.samples {
            assert!(
                sample.s.abs() < 1e-10,
                "S({}) = {} should vanish along the trapezoid family",
                sample.t,
                sample.s
            );
        }
    }

    #[test]
    fn trapezoid_with_rectangle_parameters_matches_the_rectangle_preset() {
        let (a, b) = (2.0, 1.0);
        let rect = MotionPath::rectangle(a, b).unwrap();
        let trap = MotionPath::trapezoid(
            2.0 * b,
            (4.0 * a * a + 4.0 * b * b).sqrt(),
            2.0 * a,
        )
        .unwrap();
        // Same motion up to a relabeling and a shift of the origin.
        let relabel = [3usize, 2, 0, 1];
        for &t in &[0.0, 0.25] {
            let r = rect.at(t).unwrap();
            let s = trap.at(t).unwrap();
            for i in 0..4 {
                let expected = r[relabel[i]].coords() + DVector::from_row_slice(&[0.0, b, 0.0]);
                for (x, e) in s[i].coords().iter().zip(expected.iter()) {
                    assert_abs_diff_eq!(*x, *e, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn infeasible_trapezoid_lengths_are_rejected() {
        assert!(MotionPath::trapezoid(2.2, 1.2, 2.4).is_err());
        assert!(MotionPath::trapezoid(1.0, 10.0, 0.5).is_err());
    }

    #[test]
    fn frame_is_proportional_to_the_static_stress() {
        let (space, verts) = fixtures::triangle_with_centroid();
        let stress = solve_one_stress(&space, &verts).unwrap();
        for apex in [0, 3] {
            let frame = motion_stress_frame(&space, &verts, apex).unwrap();
            let normalized = OneStress::from_raw(&frame.alpha).unwrap();
            for (f, s) in normalized.values().iter().zip(stress.values()) {
                assert_abs_diff_eq!(*f, *s, epsilon = 1e-12);
            }
        }

        // Spherical check: S² equator triangle with an apex off the equator.
        let space = SpaceForm::spherical(3);
        let r = 1.0 / 3.0f64.sqrt();
        let verts: Vec<LabeledPoint> = [
            [r, r, r, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ]
        .iter()
        .map(|c| space.point_from_slice(c).unwrap())
        .collect();
        let stress = solve_one_stress(&space, &verts).unwrap();
        let frame = motion_stress_frame(&space, &verts, 0).unwrap();
        let normalized = OneStress::from_raw(&frame.alpha).unwrap();
        for (f, s) in normalized.values().iter().zip(stress.values()) {
            assert_abs_diff_eq!(*f, *s, epsilon = 1e-10);
        }
    }

    #[test]
    fn lemma_ratio_for_the_lifted_centroid() {
        let (plane, verts) = fixtures::triangle_with_centroid();
        let (space, verts) = embed_in_higher(&plane, &verts, 1).unwrap();
        let path =
            MotionPath::vertex_lift(&space, &verts, 3, &[0.0, 0.0, 1.0]).unwrap();
        let samples =
            lemma_ratio_check(&path, &[1e-2, 5e-3], 1e-6, &QuadConfig::default()).unwrap();
        let r0 = samples[0].ratio.unwrap();
        let r1 = samples[1].ratio.unwrap();
        // In flat space the differential identity is exact along the whole
        // path, so both samples sit at the finite-difference noise floor and
        // "closer to 1" is capped there instead of demanded strictly.
        assert!((r0 - 1.0).abs() < 1e-6, "ratio at t=1e-2 was {r0}");
        assert!(
            (r1 - 1.0).abs() <= (r0 - 1.0).abs().max(1e-6),
            "ratio should not drift away from 1: {r0} then {r1}"
        );
    }

    #[test]
    fn lemma_ratio_on_the_sphere() {
        let space = SpaceForm::spherical(3);
        let r = 1.0 / 3.0f64.sqrt();
        let verts: Vec<LabeledPoint> = [
            [r, r, r, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ]
        .iter()
        .map(|c| space.point_from_slice(c).unwrap())
        .collect();
        let path =
            MotionPath::vertex_lift(&space, &verts, 0, &[0.0, 0.0, 0.0, 1.0]).unwrap();
        let samples =
            lemma_ratio_check(&path, &[1e-2, 5e-3], 1e-6, &QuadConfig::default()).unwrap();
        let r0 = samples[0].ratio.unwrap();
        let r1 = samples[1].ratio.unwrap();
        assert!((r0 - 1.0).abs() < 0.05, "spherical ratio at t=1e-2 was {r0}");
        assert!((r1 - 1.0).abs() <= (r0 - 1.0).abs() + 1e-12);
    }

    #[test]
    fn confined_path_reports_indeterminate_ratios() {
        let (space, verts) = fixtures::triangle_with_centroid();
        // Move the centroid inside the plane: never lifts.
        let path = MotionPath::vertex_lift(&space, &verts, 3, &[1.0, 0.0]).unwrap();
        let samples =
            lemma_ratio_check(&path, &[1e-2, 5e-3], 1e-6, &QuadConfig::default()).unwrap();
        for s in samples {
            assert!(s.ratio.is_none());
            assert!(s.a0a1_sq < 1e-16);
        }
    }

    #[test]
    fn lifting_the_centroid_fixture_increases_s() {
        let (plane, verts) = fixtures::triangle_with_centroid();
        let (space, verts) = embed_in_higher(&plane, &verts, 1).unwrap();
        let opts = LiftOptions {
            perturbations: 12,
            ..LiftOptions::default()
        };
        let report = lift_experiment(&space, &verts, &opts, &QuadConfig::default()).unwrap();
        assert_eq!(report.excluded, 0);
        assert!(report.nonvanishing);
        assert!(report.sign_constant);
        // The lone negative vertex is the centroid: lifting makes the outer
        // facet strictly smaller than the sum of the inner ones.
        assert_eq!(report.common_sign, 1.0);
        // c₁ of the unit-normalized stress (1,1,1,−3)/(2√3); the raw vector
        // gives 4/3 and c₁ is homogeneous of degree one.
        assert_abs_diff_eq!(report.c_obstruction, 2.0 * 3.0f64.sqrt() / 9.0, epsilon = 1e-12);
        for sample in &report.samples {
            if let Some(r) = sample.richardson {
                assert!(r < 0.05, "Richardson deviation {r} too large");
            }
        }
    }

    #[test]
    fn square_lifts_barely_move_s() {
        let (plane, verts) = fixtures::square();
        let (space, verts) = embed_in_higher(&plane, &verts, 1).unwrap();
        let opts = LiftOptions {
            perturbations: 8,
            ..LiftOptions::default()
        };
        let report = lift_experiment(&space, &verts, &opts, &QuadConfig::default()).unwrap();
        assert!(report.c_obstruction.abs() < 1e-12);
        for sample in &report.samples {
            let rho = sample.records.last().unwrap().rho;
            assert!(
                rho.abs() < 1e-4,
                "with c_{{n-1}} = 0 the ratio must collapse, got {rho}"
            );
        }
    }

    #[test]
    fn spherical_facet_sums_stay_below_the_sphere_volume() {
        let stats = spherical_sum_sample(1, 2, 50, 11, &QuadConfig::default()).unwrap();
        assert_eq!(stats.violations, 0);
        assert!(stats.min_gap > 0.0);
        let stats = spherical_sum_sample(2, 3, 20, 11, &QuadConfig::default()).unwrap();
        assert_eq!(stats.violations, 0);
        assert!(stats.min_gap > 0.0);
    }

    #[test]
    fn minkowski_relation_on_a_regular_simplex() {
        let space = SpaceForm::euclidean(3);
        let verts: Vec<LabeledPoint> = [
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ]
        .iter()
        .map(|c| space.point_from_slice(c).unwrap())
        .collect();
        let res = minkowski_residual(&space, &verts, None, &QuadConfig::default()).unwrap();
        assert!(res.outward < 1e-12);

        // Degenerate input is rejected.
        let (plane, sq) = fixtures::square();
        let (space3, flat) = embed_in_higher(&plane, &sq, 1).unwrap();
        assert!(matches!(
            minkowski_residual(&space3, &flat, None, &QuadConfig::default()),
            Err(GeomError::DegenerateFace(_))
        ));
    }

    #[test]
    fn minkowski_relation_along_the_rectangle_path() {
        let path = MotionPath::rectangle(2.0, 1.0).unwrap();
        let start = path.at(0.0).unwrap();
        let alpha = solve_one_stress(path.space(), &start).unwrap();
        let partition = radon_partition(path.space(), alpha.values()).unwrap();
        let verts = path.at(0.3).unwrap();
        let res = minkowski_residual(path.space(), &verts, Some(&partition), &QuadConfig::default())
            .unwrap();
        assert!(res.outward < 1e-12);
        assert!(res.partition_signed.unwrap() < 1e-12);
    }

    #[test]
    fn gauss_map_tends_to_the_dual_shape() {
        // The rectangle family is exactly similar to its dual at every t:
        // the scaled normals are (∓tb, ∓ta, 2ab), a b:a-aspect rectangle just
        // like the dual, so the residual trace is flat at zero.
        let path = MotionPath::rectangle(2.0, 1.0).unwrap();
        let ts: Vec<f64> = (0..8).map(|i| 0.4 / 2f64.powi(i)).collect();
        let samples = gauss_map_limit(&path, &ts, &QuadConfig::default()).unwrap();
        for s in &samples {
            // The Procrustes residual is a square root, so exact similarity
            // lands at √eps ≈ 1.5e-8 rather than machine epsilon.
            assert!(s.residual < 1e-6, "rectangle shape must stay similar, got {}", s.residual);
        }
    }

    #[test]
    fn gauss_map_of_a_generic_lift_converges() {
        // An asymmetric quadrilateral has no exact-similarity shortcut: the
        // residual genuinely shrinks with the lift height.
        let plane = SpaceForm::euclidean(2);
        let flat: Vec<LabeledPoint> = [[0.0, 0.0], [3.0, 0.0], [1.0, 2.0], [2.2, 0.9]]
            .iter()
            .map(|c| plane.point_from_slice(c).unwrap())
            .collect();
        let (space, verts) = embed_in_higher(&plane, &flat, 1).unwrap();
        let path = MotionPath::vertex_lift(&space, &verts, 0, &[0.0, 0.0, 1.0]).unwrap();
        let ts: Vec<f64> = (0..8).map(|i| 0.4 / 2f64.powi(i)).collect();
        let samples = gauss_map_limit(&path, &ts, &QuadConfig::default()).unwrap();
        assert!(samples[0].residual > 1e-3, "start far from similar: {}", samples[0].residual);
        for pair in samples.windows(2) {
            assert!(
                pair[1].residual < pair[0].residual,
                "Gauss-map residual should decrease: {} then {}",
                pair[0].residual,
                pair[1].residual
            );
        }
        assert!(
            samples.last().unwrap().residual < 1e-3,
            "final residual {}",
            samples.last().unwrap().residual
        );
    }

    #[test]
    fn constraint_value_names_the_degenerate_facet() {
        let space = SpaceForm::euclidean(2);
        let verts: Vec<LabeledPoint> = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.0, 1.0]]
            .iter()
            .map(|c| space.point_from_slice(c).unwrap())
            .collect();
        let partition = RadonPartition {
            positive: vec![0, 2],
            negative: vec![1, 3],
            case: crate::stress::PartitionCase::Proper,
            target: 0.0,
        };
        let err = constraint_value(&space, &verts, &partition, &QuadConfig::default())
            .unwrap_err();
        match err {
            GeomError::DegenerateFace(msg) => {
                assert!(msg.contains("facet 4"), "message was: {msg}")
            }
            other => panic!("expected a degenerate-facet error, got {other:?}"),
        }
    }

    #[test]
    fn waypoint_paths_interpolate_linearly() {
        let (space, a) = fixtures::square();
        let b: Vec<LabeledPoint> = a
            .iter()
            .map(|v| LabeledPoint::from_validated(v.coords() * 3.0))
            .collect();
        let path = MotionPath::waypoints(&space, vec![a.clone(), b], (0.0, 1.0)).unwrap();
        let mid = path.at(0.5).unwrap();
        for (m, v) in mid.iter().zip(&a) {
            for (x, e) in m.coords().iter().zip(v.coords().iter()) {
                assert_abs_diff_eq!(*x, 2.0 * e, epsilon = 1e-15);
            }
        }
        let thirds = fixtures::circle_thirds();
        assert!(MotionPath::waypoints(&thirds.0, vec![thirds.1.clone(), thirds.1], (0.0, 1.0))
            .is_err());
    }

    #[test]
    fn embedding_preserves_the_stress() {
        let (plane, verts) = fixtures::triangle_with_centroid();
        let before = solve_one_stress(&plane, &verts).unwrap();
        let (space, lifted) = embed_in_higher(&plane, &verts, 2).unwrap();
        assert_eq!(space.ambient_dim(), 4);
        let after = solve_one_stress(&space, &lifted).unwrap();
        for (a, b) in before.values().iter().zip(after.values()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-12);
        }
    }
}
