//! Simplex volumes in the three model geometries.
//!
//! For a face F with vertices B₁, …, B_{k+1}:
//!
//! * flat: V_k = √det(E·Eᵀ) / k! for the edge matrix E (rows B_{i+1} − B₁);
//! * curved, k = 1: geodesic arc length, arccos(B₁·B₂) on the sphere and
//!   arccosh(−B₁·B₂) on the hyperboloid;
//! * curved, k = 2: interior-angle sum, κ·(Σθ − π);
//! * curved, k = 3: adaptive quadrature of the cone parameterization,
//!   V_k = ‖F‖ · ∫_{Δ^k} |x(u)·x(u)|^{-(k+1)/2} du with x(u) = Σ uᵢBᵢ.
//!
//! The quadrature route is also exposed for k ≤ 2 as an independent
//! cross-check of the closed forms. Points of a curved simplex are the
//! radial (central) projections of the convex hull of its vertices, so the
//! vertices must be linearly independent; in flat space they must be
//! affinely independent. V₀ = 1 by convention.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::quadrature::{integrate_simplex, QuadConfig};
use crate::space::{
    coord_refs, geodesic_distance, gram_matrix, Curvature, LabeledPoint, SpaceForm, RANK_REL_TOL,
};

/// A volume together with a conservative numerical error estimate
/// (zero for closed-form routes).
#[derive(Clone, Copy, Debug)]
pub struct Volume {
    pub value: f64,
    pub error: f64,
}

impl Volume {
    fn exact(value: f64) -> Self {
        Volume { value, error: 0.0 }
    }
}

/// k-dimensional volume of the simplex spanned by `verts` (k = len − 1).
pub fn simplex_volume(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    cfg: &QuadConfig,
) -> Result<Volume> {
    if verts.is_empty() {
        return Err(GeomError::InvalidParameter(
            "a simplex needs at least one vertex".into(),
        ));
    }
    for v in verts {
        space.check_len(v.coords())?;
    }
    let k = verts.len() - 1;
    if k == 0 {
        return Ok(Volume::exact(1.0));
    }
    match space.curvature() {
        Curvature::Flat => flat_volume(verts).map(Volume::exact),
        _ => match k {
            1 => curved_arc_length(space, verts).map(Volume::exact),
            2 => curved_triangle_area(space, verts).map(Volume::exact),
            3 => simplex_volume_quadrature(space, verts, cfg),
            _ => Err(GeomError::Unsupported(format!(
                "curved simplex volume supports k <= 3, got k = {k}"
            ))),
        },
    }
}

fn flat_volume(verts: &[LabeledPoint]) -> Result<f64> {
    let k = verts.len() - 1;
    let base = verts[0].coords();
    let dim = base.len();
    let mut e = DMatrix::zeros(k, dim);
    for i in 0..k {
        e.row_mut(i).copy_from(&(verts[i + 1].coords() - base).transpose());
    }
    let svd = e.svd(false, false);
    let smax = svd.singular_values.max();
    if !(smax > 0.0) || svd.singular_values.iter().any(|&s| s <= RANK_REL_TOL * smax) {
        return Err(GeomError::DegenerateFace(
            "flat simplex has affinely dependent vertices".into(),
        ));
    }
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    Ok(svd.singular_values.iter().product::<f64>() / factorial)
}

fn require_nondegenerate_gram(space: &SpaceForm, verts: &[LabeledPoint]) -> Result<DMatrix<f64>> {
    let g = gram_matrix(space, verts);
    let svd = g.clone().svd(false, false);
    let smax = svd.singular_values.max();
    if !(smax > 0.0) || svd.singular_values.iter().any(|&s| s <= RANK_REL_TOL * smax) {
        return Err(GeomError::DegenerateFace(
            "curved simplex has linearly dependent vertices".into(),
        ));
    }
    Ok(g)
}

fn curved_arc_length(space: &SpaceForm, verts: &[LabeledPoint]) -> Result<f64> {
    require_nondegenerate_gram(space, verts)?;
    geodesic_distance(space, &verts[0], &verts[1])
}

/// Interior angle at `v` between the geodesics toward `p` and `q`, measured
/// in the tangent space at `v`.
pub(crate) fn tangent_angle(
    space: &SpaceForm,
    v: &DVector<f64>,
    p: &DVector<f64>,
    q: &DVector<f64>,
) -> Result<f64> {
    let vv = space.form_dot(v, v);
    let tang = |x: &DVector<f64>| x - v * (space.form_dot(v, x) / vv);
    let tp = tang(p);
    let tq = tang(q);
    let np = space.form_dot(&tp, &tp);
    let nq = space.form_dot(&tq, &tq);
    if np <= 0.0 || nq <= 0.0 {
        return Err(GeomError::DegenerateFace(
            "triangle has a vanishing tangent direction".into(),
        ));
    }
    Ok((space.form_dot(&tp, &tq) / (np * nq).sqrt())
        .clamp(-1.0, 1.0)
        .acos())
}

fn curved_triangle_area(space: &SpaceForm, verts: &[LabeledPoint]) -> Result<f64> {
    require_nondegenerate_gram(space, verts)?;
    let c = coord_refs(verts);
    let sum = tangent_angle(space, c[0], c[1], c[2])?
        + tangent_angle(space, c[1], c[0], c[2])?
        + tangent_angle(space, c[2], c[0], c[1])?;
    Ok(space.kappa() * (sum - std::f64::consts::PI))
}

/// Quadrature route for curved volumes, valid for 1 ≤ k ≤ 3. Serves as the
/// primary route for k = 3 and as an independent cross-check for k ≤ 2.
pub fn simplex_volume_quadrature(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    cfg: &QuadConfig,
) -> Result<Volume> {
    if space.is_flat() {
        return Err(GeomError::Unsupported(
            "the cone-parameterization quadrature applies to curved spaces only".into(),
        ));
    }
    for v in verts {
        space.check_len(v.coords())?;
    }
    let k = verts.len() - 1;
    if k == 0 {
        return Ok(Volume::exact(1.0));
    }
    let g = require_nondegenerate_gram(space, verts)?;
    let gram_norm = g.determinant().abs().sqrt();
    let m = verts.len();
    let exponent = -0.5 * (k as f64 + 1.0);
    let integrand = |u: &[f64]| {
        let mut q = 0.0;
        for i in 0..m {
            q += u[i] * u[i] * g[(i, i)];
            for j in (i + 1)..m {
                q += 2.0 * u[i] * u[j] * g[(i, j)];
            }
        }
        q.abs().powf(exponent)
    };
    let quad = integrate_simplex(k, integrand, cfg)?;
    Ok(Volume {
        value: gram_norm * quad.value,
        error: gram_norm * quad.error,
    })
}

/// Total k-volume of the unit k-sphere, 2·π^{(k+1)/2} / Γ((k+1)/2).
pub fn sphere_volume(k: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf((k as f64 + 1.0) / 2.0) / gamma_half(k + 1)
}

/// Γ(m/2) for integer m ≥ 1.
fn gamma_half(m: usize) -> f64 {
    let mut value = if m.is_multiple_of(2) {
        1.0
    } else {
        std::f64::consts::PI.sqrt()
    };
    let mut x = m as f64 / 2.0;
    while x > 1.0 {
        x -= 1.0;
        value *= x;
    }
    value
}
