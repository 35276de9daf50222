//! Constant-curvature model spaces and points constrained to them.
//!
//! Three families are supported, all normalized to curvature κ ∈ {-1, 0, +1}:
//!
//! * **flat** space: `dim` coordinates, the standard inner product;
//! * **spherical** space: the unit sphere x·x = 1 in `dim + 1` coordinates;
//! * **hyperbolic** space: the upper sheet (x₀ > 0) of x·x = -1 under the
//!   Lorentzian form x·y = -x₀y₀ + x₁y₁ + … + x_d y_d.
//!
//! In the curved cases a point of the space is an ambient vector on the
//! quadric x·x = κ, and the geodesic subspace through a set of points is the
//! intersection of their ambient *linear* span with the quadric. In the flat
//! case the relevant span is affine. [`project_to_span`] implements both
//! notions and is the workhorse behind reflections, dihedral angles and
//! stress equilibrium checks.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};

/// Absolute tolerance for accepting an input point as lying on the quadric.
/// Accepted points are snapped (rescaled) onto the quadric exactly.
pub const QUADRIC_TOL: f64 = 1e-8;

/// Relative singular-value threshold below which directions are treated as
/// rank-deficient throughout the crate.
pub const RANK_REL_TOL: f64 = 1e-10;

/// Sign of the sectional curvature of a model space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Curvature {
    Hyperbolic,
    Flat,
    Spherical,
}

impl Curvature {
    /// The curvature value κ ∈ {-1, 0, +1}.
    pub fn kappa(self) -> f64 {
        match self {
            Curvature::Hyperbolic => -1.0,
            Curvature::Flat => 0.0,
            Curvature::Spherical => 1.0,
        }
    }

    /// Inverse of [`Curvature::kappa`]; only the three normalized values are
    /// accepted.
    pub fn from_kappa(kappa: f64) -> Result<Self> {
        if kappa == -1.0 {
            Ok(Curvature::Hyperbolic)
        } else if kappa == 0.0 {
            Ok(Curvature::Flat)
        } else if kappa == 1.0 {
            Ok(Curvature::Spherical)
        } else {
            Err(GeomError::InvalidParameter(format!(
                "curvature must be -1, 0 or +1, got {kappa}"
            )))
        }
    }
}

/// A model space `M^dim` of constant curvature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpaceForm {
    curvature: Curvature,
    dim: usize,
}

impl SpaceForm {
    pub fn new(curvature: Curvature, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(GeomError::InvalidParameter(
                "space dimension must be at least 1".into(),
            ));
        }
        Ok(SpaceForm { curvature, dim })
    }

    pub fn euclidean(dim: usize) -> Self {
        SpaceForm::new(Curvature::Flat, dim).expect("dim >= 1")
    }

    pub fn spherical(dim: usize) -> Self {
        SpaceForm::new(Curvature::Spherical, dim).expect("dim >= 1")
    }

    pub fn hyperbolic(dim: usize) -> Self {
        SpaceForm::new(Curvature::Hyperbolic, dim).expect("dim >= 1")
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    pub fn kappa(&self) -> f64 {
        self.curvature.kappa()
    }

    /// Intrinsic dimension of the space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of ambient coordinates: `dim` for flat space, `dim + 1` for
    /// the curved models.
    pub fn ambient_dim(&self) -> usize {
        match self.curvature {
            Curvature::Flat => self.dim,
            _ => self.dim + 1,
        }
    }

    pub fn is_flat(&self) -> bool {
        self.curvature == Curvature::Flat
    }

    /// The ambient bilinear form. Standard dot product for flat and
    /// spherical coordinates, the Lorentzian form for hyperbolic ones.
    ///
    /// The form is defined on arbitrary ambient vectors (differences of
    /// points included), not just on points of the space.
    pub fn metric_dot(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.form_dot(x, y))
    }

    /// Unchecked bilinear form; callers guarantee matching lengths.
    pub(crate) fn form_dot(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        match self.curvature {
            Curvature::Hyperbolic => x.dot(y) - 2.0 * x[0] * y[0],
            _ => x.dot(y),
        }
    }

    pub(crate) fn check_len(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.ambient_dim() {
            return Err(GeomError::DimensionMismatch {
                expected: self.ambient_dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// |x·x - κ| for curved spaces; 0 for flat space.
    pub fn quadric_residual(&self, x: &DVector<f64>) -> f64 {
        if self.is_flat() {
            0.0
        } else {
            (self.form_dot(x, x) - self.kappa()).abs()
        }
    }

    /// Validate `coords` as a point of the space.
    ///
    /// Curved points must satisfy x·x = κ within [`QUADRIC_TOL`] (they are
    /// then rescaled exactly onto the quadric), and hyperbolic points must
    /// lie on the upper sheet. Non-finite coordinates are rejected.
    pub fn point(&self, coords: DVector<f64>) -> Result<LabeledPoint> {
        self.check_len(&coords)?;
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(GeomError::InvalidParameter(
                "coordinates must be finite".into(),
            ));
        }
        match self.curvature {
            Curvature::Flat => Ok(LabeledPoint { coords }),
            Curvature::Spherical => {
                let residual = self.quadric_residual(&coords);
                if residual > QUADRIC_TOL {
                    return Err(GeomError::OffQuadric {
                        residual,
                        tol: QUADRIC_TOL,
                    });
                }
                let norm = coords.norm();
                Ok(LabeledPoint {
                    coords: coords / norm,
                })
            }
            Curvature::Hyperbolic => {
                let residual = self.quadric_residual(&coords);
                if residual > QUADRIC_TOL {
                    return Err(GeomError::OffQuadric {
                        residual,
                        tol: QUADRIC_TOL,
                    });
                }
                if coords[0] <= 0.0 {
                    return Err(GeomError::InvalidParameter(
                        "hyperboloid point must lie on the upper sheet (x0 > 0)".into(),
                    ));
                }
                let scale = (-self.form_dot(&coords, &coords)).sqrt();
                Ok(LabeledPoint {
                    coords: coords / scale,
                })
            }
        }
    }

    pub fn point_from_slice(&self, coords: &[f64]) -> Result<LabeledPoint> {
        self.point(DVector::from_row_slice(coords))
    }
}

/// A validated point of a [`SpaceForm`], labeled by its position in whatever
/// vertex list it belongs to.
///
/// Invariant: for curved spaces the coordinates lie exactly on the quadric
/// (inputs within [`QUADRIC_TOL`] are snapped at construction).
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPoint {
    coords: DVector<f64>,
}

impl LabeledPoint {
    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    /// Wrap coordinates that are already known to satisfy the invariant
    /// (e.g. produced by an exact geodesic formula).
    pub(crate) fn from_validated(coords: DVector<f64>) -> Self {
        LabeledPoint { coords }
    }
}

/// Collect coordinate references out of a vertex slice.
pub(crate) fn coord_refs(verts: &[LabeledPoint]) -> Vec<&DVector<f64>> {
    verts.iter().map(|v| v.coords()).collect()
}

/// Geodesic distance between two points of the space.
pub fn geodesic_distance(space: &SpaceForm, x: &LabeledPoint, y: &LabeledPoint) -> Result<f64> {
    space.check_len(x.coords())?;
    space.check_len(y.coords())?;
    let d = space.form_dot(x.coords(), y.coords());
    Ok(match space.curvature() {
        Curvature::Flat => (x.coords() - y.coords()).norm(),
        Curvature::Spherical => d.clamp(-1.0, 1.0).acos(),
        Curvature::Hyperbolic => (-d).max(1.0).acosh(),
    })
}

/// ‖F‖ for a curved-space face F: the square root of the absolute Gram
/// determinant |det(B_i·B_j)|^{1/2} of its vertices under the ambient form.
///
/// Undefined for flat space (the flat counterpart of a face weight is the
/// scaled simplex volume k!·V_k, which has no Gram-normal description).
pub fn gram_norm(space: &SpaceForm, verts: &[LabeledPoint]) -> Result<f64> {
    if space.is_flat() {
        return Err(GeomError::Unsupported(
            "the Gram norm ||F|| is defined only in curved spaces".into(),
        ));
    }
    if verts.is_empty() {
        return Err(GeomError::InvalidParameter(
            "Gram norm requires at least one vertex".into(),
        ));
    }
    for v in verts {
        space.check_len(v.coords())?;
    }
    let g = gram_matrix(space, verts);
    Ok(g.determinant().abs().sqrt())
}

/// Gram matrix of the vertices under the ambient form.
pub(crate) fn gram_matrix(space: &SpaceForm, verts: &[LabeledPoint]) -> DMatrix<f64> {
    let m = verts.len();
    DMatrix::from_fn(m, m, |i, j| {
        space.form_dot(verts[i].coords(), verts[j].coords())
    })
}

/// Project `p` onto the span of `span_pts`: the ambient *linear* span for
/// curved spaces (projection under the ambient form), the *affine* span for
/// flat space. Errors if the spanning set is rank-deficient.
pub(crate) fn project_to_span(
    space: &SpaceForm,
    span_pts: &[&DVector<f64>],
    p: &DVector<f64>,
) -> Result<DVector<f64>> {
    if span_pts.is_empty() {
        return Err(GeomError::InvalidParameter(
            "projection span must contain at least one point".into(),
        ));
    }
    if space.is_flat() {
        let base = span_pts[0];
        if span_pts.len() == 1 {
            return Ok(base.clone());
        }
        let dirs: Vec<DVector<f64>> = span_pts[1..].iter().map(|s| *s - base).collect();
        let m = dirs.len();
        let g = DMatrix::from_fn(m, m, |i, j| dirs[i].dot(&dirs[j]));
        let rhs = DVector::from_fn(m, |i, _| dirs[i].dot(&(p - base)));
        let coeff = solve_gram(&g, &rhs)?;
        let mut out = base.clone();
        for (i, d) in dirs.iter().enumerate() {
            out += d * coeff[i];
        }
        Ok(out)
    } else {
        let m = span_pts.len();
        let g = DMatrix::from_fn(m, m, |i, j| space.form_dot(span_pts[i], span_pts[j]));
        let rhs = DVector::from_fn(m, |i, _| space.form_dot(span_pts[i], p));
        let coeff = solve_gram(&g, &rhs)?;
        let mut out = DVector::zeros(p.len());
        for (i, s) in span_pts.iter().enumerate() {
            out += *s * coeff[i];
        }
        Ok(out)
    }
}

/// Solve a (possibly indefinite) Gram system with an explicit rank guard.
fn solve_gram(g: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let svd = g.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if !(smax > 0.0) || svd.singular_values.iter().any(|&s| s <= RANK_REL_TOL * smax) {
        return Err(GeomError::DegenerateFace(
            "projection span is rank-deficient".into(),
        ));
    }
    svd.solve(rhs, 0.0)
        .map_err(|e| GeomError::Singular(e.to_string()))
}

/// Reflect `p` through the geodesic subspace spanned by `span` (linear span
/// for curved spaces, affine hull for flat space): p ↦ 2·π(p) − p where π is
/// the orthogonal projection onto the span.
///
/// In curved spaces the subspace must be non-degenerate (for hyperbolic
/// space: timelike), which holds exactly when `span` consists of points of
/// the space with full-rank Gram matrix; the reflected point then lies on
/// the quadric again, on the same sheet.
pub fn reflect_through_span(
    space: &SpaceForm,
    p: &LabeledPoint,
    span: &[LabeledPoint],
) -> Result<LabeledPoint> {
    space.check_len(p.coords())?;
    for v in span {
        space.check_len(v.coords())?;
    }
    let refs = coord_refs(span);
    let projected = project_to_span(space, &refs, p.coords())?;
    let reflected = projected * 2.0 - p.coords();
    if space.is_flat() {
        Ok(LabeledPoint::from_validated(reflected))
    } else {
        // Mathematically exact; `point` snaps the floating-point drift.
        space.point(reflected)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(space: &SpaceForm, coords: &[f64]) -> LabeledPoint {
        space.point_from_slice(coords).unwrap()
    }

    #[test]
    fn metric_dot_matches_each_model() {
        let e2 = SpaceForm::euclidean(2);
        let x = DVector::from_row_slice(&[1.0, 2.0]);
        let y = DVector::from_row_slice(&[3.0, -1.0]);
        assert_abs_diff_eq!(e2.metric_dot(&x, &y).unwrap(), 1.0, epsilon = 1e-15);

        let s2 = SpaceForm::spherical(2);
        let e1 = DVector::from_row_slice(&[1.0, 0.0, 0.0]);
        let e2v = DVector::from_row_slice(&[0.0, 1.0, 0.0]);
        assert_abs_diff_eq!(s2.metric_dot(&e1, &e2v).unwrap(), 0.0, epsilon = 1e-15);

        let h2 = SpaceForm::hyperbolic(2);
        let a = DVector::from_row_slice(&[2f64.sqrt(), 1.0, 0.0]);
        let b = DVector::from_row_slice(&[2f64.sqrt(), -1.0, 0.0]);
        assert_abs_diff_eq!(h2.metric_dot(&a, &b).unwrap(), -3.0, epsilon = 1e-14);
    }

    #[test]
    fn metric_dot_rejects_wrong_length() {
        let s2 = SpaceForm::spherical(2);
        let short = DVector::from_row_slice(&[1.0, 0.0]);
        let ok = DVector::from_row_slice(&[1.0, 0.0, 0.0]);
        assert!(matches!(
            s2.metric_dot(&short, &ok),
            Err(GeomError::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn point_snaps_small_drift_and_rejects_large() {
        let s2 = SpaceForm::spherical(2);
        let drifted = DVector::from_row_slice(&[1.0 + 4e-9, 0.0, 0.0]);
        let p = s2.point(drifted).unwrap();
        assert_abs_diff_eq!(p.coords().norm(), 1.0, epsilon = 1e-15);

        let far = DVector::from_row_slice(&[1.0 + 1e-6, 0.0, 0.0]);
        assert!(matches!(s2.point(far), Err(GeomError::OffQuadric { .. })));

        let h2 = SpaceForm::hyperbolic(2);
        let lower = DVector::from_row_slice(&[-1.0, 0.0, 0.0]);
        assert!(matches!(h2.point(lower), Err(GeomError::InvalidParameter(_))));
    }

    #[test]
    fn gram_norm_frozen_examples() {
        let s2 = SpaceForm::spherical(2);
        let b1 = pt(&s2, &[1.0, 0.0, 0.0]);
        let s = 1.0 / 2f64.sqrt();
        let b2 = pt(&s2, &[s, s, 0.0]);
        // det [[1, s],[s, 1]] = 1/2.
        assert_abs_diff_eq!(
            gram_norm(&s2, &[b1.clone(), b2]).unwrap(),
            s,
            epsilon = 1e-14
        );
        // A single on-quadric vertex always has ||F|| = 1.
        assert_abs_diff_eq!(gram_norm(&s2, &[b1]).unwrap(), 1.0, epsilon = 1e-15);
        let h1 = SpaceForm::hyperbolic(1);
        let v = pt(&h1, &[1.0, 0.0]);
        assert_abs_diff_eq!(gram_norm(&h1, &[v]).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn gram_norm_rejects_flat_space() {
        let e2 = SpaceForm::euclidean(2);
        let p = pt(&e2, &[0.0, 0.0]);
        assert!(matches!(
            gram_norm(&e2, &[p]),
            Err(GeomError::Unsupported(_))
        ));
    }

    #[test]
    fn reflect_through_plane_in_flat_space() {
        let e3 = SpaceForm::euclidean(3);
        let p = pt(&e3, &[0.4, -0.3, 1.0]);
        let span = [
            pt(&e3, &[0.0, 0.0, 0.0]),
            pt(&e3, &[1.0, 0.0, 0.0]),
            pt(&e3, &[0.0, 1.0, 0.0]),
        ];
        let r = reflect_through_span(&e3, &p, &span).unwrap();
        assert_abs_diff_eq!(r.coords()[0], 0.4, epsilon = 1e-14);
        assert_abs_diff_eq!(r.coords()[1], -0.3, epsilon = 1e-14);
        assert_abs_diff_eq!(r.coords()[2], -1.0, epsilon = 1e-14);
    }

    #[test]
    fn reflect_on_sphere_frozen_example() {
        let s2 = SpaceForm::spherical(2);
        let s = 1.0 / 2f64.sqrt();
        let p = pt(&s2, &[0.0, s, s]);
        let span = [pt(&s2, &[1.0, 0.0, 0.0]), pt(&s2, &[0.0, 1.0, 0.0])];
        let r = reflect_through_span(&s2, &p, &span).unwrap();
        assert_abs_diff_eq!(r.coords()[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.coords()[1], s, epsilon = 1e-14);
        assert_abs_diff_eq!(r.coords()[2], -s, epsilon = 1e-14);
    }

    #[test]
    fn reflect_is_an_involution_on_the_hyperboloid() {
        let h2 = SpaceForm::hyperbolic(2);
        let p = h2
            .point(DVector::from_row_slice(&[
                (1.0f64 + 0.09 + 0.49).sqrt(),
                0.3,
                0.7,
            ]))
            .unwrap();
        let span = [
            h2.point(DVector::from_row_slice(&[1.0, 0.0, 0.0])).unwrap(),
            h2.point(DVector::from_row_slice(&[2f64.sqrt(), 1.0, 0.0]))
                .unwrap(),
        ];
        let r = reflect_through_span(&h2, &p, &span).unwrap();
        assert!(r.coords()[0] > 0.0, "reflection must stay on the upper sheet");
        assert_abs_diff_eq!(h2.quadric_residual(r.coords()), 0.0, epsilon = 1e-12);
        let rr = reflect_through_span(&h2, &r, &span).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(rr.coords()[i], p.coords()[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn reflect_rejects_rank_deficient_span() {
        let e2 = SpaceForm::euclidean(2);
        let p = pt(&e2, &[1.0, 1.0]);
        let span = [pt(&e2, &[0.0, 0.0]), pt(&e2, &[0.0, 0.0])];
        assert!(matches!(
            reflect_through_span(&e2, &p, &span),
            Err(GeomError::DegenerateFace(_))
        ));
    }
}
