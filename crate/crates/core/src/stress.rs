//! Stresses of degenerate simplices.
//!
//! A degenerate (n+1)-simplex is a list of n+2 vertices confined to an
//! n-dimensional model space. Its 1-stress is the essentially unique
//! coefficient vector α with Σαᵢ·Aᵢ = 0 (ambient linear dependence in the
//! curved models, affine dependence — Σαᵢ = 0 included — in the flat one).
//! Higher stresses live on the k-faces of the vertex set: the induced
//! (k+1)-stress weights a face F by (Π_{s∈F} α_s) times the face weight,
//! which is k!·V_k(F) in flat space and the Gram norm ‖F‖ otherwise. These
//! weights are in equilibrium: around every (k−1)-face the weighted inward
//! unit normals of the incident k-faces cancel, which
//! [`verify_stress_condition`] measures directly.
//!
//! The sign pattern of α splits the facets into the two classes of the
//! Radon partition; [`partition_sums`] evaluates the facet-volume identity
//! attached to that partition.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::linalg::null_space;
use crate::quadrature::QuadConfig;
use crate::space::{coord_refs, gram_norm, project_to_span, Curvature, LabeledPoint, SpaceForm};
use crate::volume::{simplex_volume, sphere_volume};

/// A face of the vertex set, stored as strictly increasing vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face(Vec<usize>);

impl Face {
    pub fn new(indices: &[usize]) -> Result<Self> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != indices.len() || sorted.is_empty() {
            return Err(GeomError::InvalidParameter(
                "a face is a nonempty set of distinct vertex indices".into(),
            ));
        }
        Ok(Face(sorted))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn vertex_count(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().map(|i| i.to_string()).join(","))
    }
}

/// The 1-stress of a degenerate simplex, normalized to unit Euclidean norm
/// with the majority of entries positive (ties broken so the first entry is
/// positive). All entries of a valid 1-stress are nonzero.
#[derive(Clone, Debug)]
pub struct OneStress {
    values: Vec<f64>,
}

impl OneStress {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Normalize an externally supplied stress vector into the canonical
    /// scale and sign convention. The caller is responsible for the vector
    /// actually annihilating its configuration; see [`one_stress_residual`].
    pub fn from_raw(values: &[f64]) -> Result<Self> {
        if values.len() < 3 {
            return Err(GeomError::InvalidParameter(
                "a stress needs at least three entries".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(GeomError::InvalidParameter("stress entries must be finite".into()));
        }
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(GeomError::InvalidParameter("stress must be nonzero".into()));
        }
        let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if values.iter().any(|v| v.abs() <= 1e-10 * max) {
            return Err(GeomError::DegenerateFace(
                "stress has a vanishing entry, so a facet is degenerate".into(),
            ));
        }
        let mut values: Vec<f64> = values.iter().map(|v| v / norm).collect();
        apply_sign_convention(&mut values);
        Ok(OneStress { values })
    }
}

fn apply_sign_convention(values: &mut [f64]) {
    let pos = values.iter().filter(|v| **v > 0.0).count();
    let neg = values.len() - pos;
    let flip = match pos.cmp(&neg) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => values[0] < 0.0,
        std::cmp::Ordering::Greater => false,
    };
    if flip {
        for v in values.iter_mut() {
            *v = -*v;
        }
    }
}

/// The dependence system whose null space holds the 1-stress: ambient
/// coordinates as rows, plus a row of ones in the flat case.
fn dependence_matrix(space: &SpaceForm, verts: &[LabeledPoint]) -> DMatrix<f64> {
    let cols = verts.len();
    let ambient = space.ambient_dim();
    let rows = if space.is_flat() { ambient + 1 } else { ambient };
    let mut m = DMatrix::zeros(rows, cols);
    for (j, v) in verts.iter().enumerate() {
        for i in 0..ambient {
            m[(i, j)] = v.coords()[i];
        }
        if space.is_flat() {
            m[(ambient, j)] = 1.0;
        }
    }
    m
}

fn check_config(space: &SpaceForm, verts: &[LabeledPoint]) -> Result<()> {
    if verts.len() < 3 {
        return Err(GeomError::InvalidParameter(
            "a degenerate simplex needs at least three vertices".into(),
        ));
    }
    for v in verts {
        space.check_len(v.coords())?;
    }
    Ok(())
}

/// Solve for the 1-stress of a degenerate simplex.
///
/// Errors with [`GeomError::NotDegenerate`] when the vertices are in general
/// position, and with [`GeomError::DegenerateFace`] when the dependence is
/// not unique or touches a degenerate facet (a vanishing coefficient).
pub fn solve_one_stress(space: &SpaceForm, verts: &[LabeledPoint]) -> Result<OneStress> {
    check_config(space, verts)?;
    let m = dependence_matrix(space, verts);
    let ns = null_space(&m);
    match ns.len() {
        0 => Err(GeomError::NotDegenerate),
        1 => {
            let alpha: Vec<f64> = ns[0].iter().copied().collect();
            let max = alpha.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if let Some(i) = alpha.iter().position(|v| v.abs() <= 1e-10 * max) {
                return Err(GeomError::DegenerateFace(format!(
                    "stress vanishes at vertex {i}, so the facet opposite it is degenerate"
                )));
            }
            let mut values = alpha;
            apply_sign_convention(&mut values);
            Ok(OneStress { values })
        }
        d => Err(GeomError::DegenerateFace(format!(
            "the dependence has dimension {d}; the configuration is degenerate in excess"
        ))),
    }
}

/// ‖Σαᵢ·Aᵢ‖∞ (plus |Σαᵢ| in the flat case): the defect of a candidate
/// stress vector against its configuration.
pub fn one_stress_residual(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    alpha: &[f64],
) -> Result<f64> {
    check_config(space, verts)?;
    if alpha.len() != verts.len() {
        return Err(GeomError::DimensionMismatch {
            expected: verts.len(),
            got: alpha.len(),
        });
    }
    let m = dependence_matrix(space, verts);
    let residual = m * DVector::from_row_slice(alpha);
    Ok(residual.amax())
}

/// A stress of order m: weights on the faces with m vertices.
#[derive(Clone, Debug)]
pub struct KStress {
    order: usize,
    values: BTreeMap<Face, f64>,
}

impl KStress {
    pub fn new(order: usize, values: BTreeMap<Face, f64>) -> Result<Self> {
        if order < 1 {
            return Err(GeomError::InvalidParameter("stress order must be >= 1".into()));
        }
        if values.keys().any(|f| f.vertex_count() != order) {
            return Err(GeomError::InvalidParameter(format!(
                "all faces of an order-{order} stress must have {order} vertices"
            )));
        }
        Ok(KStress { order, values })
    }

    /// Number of vertices in each supporting face (the stress order).
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, face: &Face) -> Option<f64> {
        self.values.get(face).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Face, f64)> {
        self.values.iter().map(|(f, v)| (f, *v))
    }

    /// Overwrite a single face weight (used to probe the equilibrium test).
    pub fn set(&mut self, face: Face, value: f64) -> Result<()> {
        if face.vertex_count() != self.order {
            return Err(GeomError::InvalidParameter(format!(
                "face {face} does not match stress order {}",
                self.order
            )));
        }
        self.values.insert(face, value);
        Ok(())
    }
}

/// Induce the (k+1)-stress from a 1-stress: each k-face F receives
/// (Π_{s∈F} α_s) · k!·V_k(F) in flat space, (Π α_s) · ‖F‖ otherwise.
pub fn induce_k_stress(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    alpha: &[f64],
    k: usize,
    cfg: &QuadConfig,
) -> Result<KStress> {
    check_config(space, verts)?;
    if alpha.len() != verts.len() {
        return Err(GeomError::DimensionMismatch {
            expected: verts.len(),
            got: alpha.len(),
        });
    }
    let n = verts.len() - 2;
    if k > n {
        return Err(GeomError::InvalidParameter(format!(
            "k-stress order is bounded by the face dimension: k = {k} > n = {n}"
        )));
    }
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    let mut values = BTreeMap::new();
    for subset in (0..verts.len()).combinations(k + 1) {
        let face_verts: Vec<LabeledPoint> = subset.iter().map(|&i| verts[i].clone()).collect();
        let product: f64 = subset.iter().map(|&i| alpha[i]).product();
        let weight = if space.is_flat() {
            factorial * simplex_volume(space, &face_verts, cfg)?.value
        } else {
            gram_norm(space, &face_verts)?
        };
        values.insert(Face::new(&subset)?, product * weight);
    }
    KStress::new(k + 1, values)
}

/// Verify the equilibrium condition of a stress of order m ≥ 2: at every
/// face F with m−1 vertices, Σ_G ω(G)·u_{F,G} over the incident faces
/// G ⊃ F must vanish, where u_{F,G} is the unit normal of F inside G
/// pointing into G. Returns the largest residual norm over all F.
pub fn verify_stress_condition(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    stress: &KStress,
) -> Result<f64> {
    check_config(space, verts)?;
    let order = stress.order();
    if order < 2 {
        return Err(GeomError::InvalidParameter(
            "the equilibrium condition applies to stresses of order >= 2".into(),
        ));
    }
    let coords = coord_refs(verts);
    let mut worst = 0.0f64;
    for hinge in (0..verts.len()).combinations(order - 1) {
        let span: Vec<&DVector<f64>> = hinge.iter().map(|&i| coords[i]).collect();
        let mut resid = DVector::zeros(space.ambient_dim());
        for w in 0..verts.len() {
            if hinge.contains(&w) {
                continue;
            }
            let mut face_idx = hinge.clone();
            face_idx.push(w);
            let face = Face::new(&face_idx)?;
            let omega = stress.get(&face).ok_or_else(|| {
                GeomError::InvalidParameter(format!("stress value missing for face {face}"))
            })?;
            let projected = project_to_span(space, &span, coords[w])?;
            let perp = coords[w] - projected;
            let norm_sq = space.form_dot(&perp, &perp);
            if norm_sq <= 0.0 || norm_sq.sqrt() <= 1e-12 * coords[w].norm().max(1.0) {
                return Err(GeomError::DegenerateFace(format!(
                    "vertex {w} does not leave the span of the hinge face"
                )));
            }
            resid += perp * (omega / norm_sq.sqrt());
        }
        worst = worst.max(resid.norm());
    }
    Ok(worst)
}

/// The two classes of the Radon partition, read off the stress signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionCase {
    /// The minority class is empty (all stress entries share one sign);
    /// only possible on the sphere, where the facets then cover all of Sⁿ.
    Empty,
    /// The minority class holds a single vertex.
    Singleton,
    /// Both classes hold at least two vertices.
    Proper,
}

/// Facet classes induced by the stress signs. Facet i (the face omitting
/// vertex i) is on the positive side exactly when αᵢ > 0 under the sign
/// convention of [`OneStress`].
#[derive(Clone, Debug)]
pub struct RadonPartition {
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    pub case: PartitionCase,
    /// The constant side of the facet-volume identity: the total volume of
    /// Sⁿ in the `Empty` case, zero otherwise.
    pub target: f64,
}

/// Classify the Radon partition of a stress vector.
pub fn radon_partition(space: &SpaceForm, alpha: &[f64]) -> Result<RadonPartition> {
    let stress = OneStress::from_raw(alpha)?;
    let n = alpha.len() - 2;
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for (i, v) in stress.values().iter().enumerate() {
        if *v > 0.0 {
            positive.push(i);
        } else {
            negative.push(i);
        }
    }
    let case = match negative.len() {
        0 => PartitionCase::Empty,
        1 => PartitionCase::Singleton,
        _ => PartitionCase::Proper,
    };
    if case == PartitionCase::Empty && space.curvature() != Curvature::Spherical {
        return Err(GeomError::InvalidParameter(
            "a one-sided dependence cannot occur outside the sphere".into(),
        ));
    }
    let target = if case == PartitionCase::Empty {
        sphere_volume(n)
    } else {
        0.0
    };
    Ok(RadonPartition {
        positive,
        negative,
        case,
        target,
    })
}

/// The two facet-volume sums of a Radon partition.
#[derive(Clone, Copy, Debug)]
pub struct PartitionSums {
    pub positive: f64,
    pub negative: f64,
    pub target: f64,
    /// positive − negative − target; zero in exact arithmetic.
    pub residual: f64,
    /// Accumulated volume error estimates (nonzero only on quadrature routes).
    pub error: f64,
}

/// Evaluate Σ_{i ∈ X₁} V_n(Fᵢ) and Σ_{i ∈ X₂} V_n(Fᵢ) for the facets Fᵢ
/// (vertex set minus vertex i) of a degenerate simplex.
pub fn partition_sums(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    partition: &RadonPartition,
    cfg: &QuadConfig,
) -> Result<PartitionSums> {
    check_config(space, verts)?;
    if partition.positive.len() + partition.negative.len() != verts.len() {
        return Err(GeomError::InvalidParameter(
            "partition does not match the vertex count".into(),
        ));
    }
    let facet_volume = |i: usize| -> Result<(f64, f64)> {
        let facet: Vec<LabeledPoint> = verts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let v = simplex_volume(space, &facet, cfg)?;
        Ok((v.value, v.error))
    };
    let mut positive = 0.0;
    let mut negative = 0.0;
    let mut error = 0.0;
    for &i in &partition.positive {
        let (v, e) = facet_volume(i)?;
        positive += v;
        error += e;
    }
    for &i in &partition.negative {
        let (v, e) = facet_volume(i)?;
        negative += v;
        error += e;
    }
    Ok(PartitionSums {
        positive,
        negative,
        target: partition.target,
        residual: positive - negative - partition.target,
        error,
    })
}
