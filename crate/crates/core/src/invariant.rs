//! Geometric invariants of a stressed degenerate simplex.
//!
//! A degenerate simplex with stress α carries a sequence of numbers
//! c₀ = 1, c₁, …, c_{n+1} that do not depend on how they are extracted
//! from the configuration:
//!
//! * flat route: c_{k+1} = Σ_F (Π_{s∈F} α_s) · d_F(P,Q) over the faces F
//!   with k+1 vertices, where d_F is the polarized Gram determinant
//!   [`d_face`] with respect to an arbitrary pair of reference points P, Q
//!   (the sum is independent of the choice);
//! * curved route: c_{k+1} = κ·(k+2)·k! · Σ_F (Π α_s)·‖F‖·V_k(F), no
//!   reference points involved;
//! * for c₁ in curved space also the closed form 2κ·Σαᵢ and, in every
//!   space, the two-point function route Σαᵢ·g_{Aᵢ}(P,Q).
//!
//! The invariants are the signed coefficients of the characteristic
//! polynomial f(x) = Σᵢ (−1)ⁱ cᵢ x^{n+1−i}, whose roots are the spectral
//! fingerprint of the configuration; in flat space c_{n+1} = 0, so x = 0 is
//! always among them.

use itertools::Itertools;
use nalgebra::{Complex, DMatrix};

use crate::error::{GeomError, Result};
use crate::linalg::{char_poly_coeffs, companion_roots};
use crate::quadrature::QuadConfig;
use crate::space::{geodesic_distance, gram_norm, Curvature, LabeledPoint, SpaceForm};
use crate::volume::{simplex_volume, tangent_angle};

/// The two-point function g_B(P,Q): in flat space the polarized square
/// distance (B−P)·(B−Q); in the curved models 2·⟨B−P, B−Q⟩ / (1 + κ·⟨P,Q⟩)
/// under the ambient form. Equivalently, the derivative of twice the area
/// of the geodesic triangle (B,P,Q) in the hinge angle at B, which
/// [`g_point_from_area_derivative`] evaluates directly.
pub fn g_point(
    space: &SpaceForm,
    b: &LabeledPoint,
    p: &LabeledPoint,
    q: &LabeledPoint,
) -> Result<f64> {
    for v in [b, p, q] {
        space.check_len(v.coords())?;
    }
    let bp = b.coords() - p.coords();
    let bq = b.coords() - q.coords();
    let chord = space.form_dot(&bp, &bq);
    if space.is_flat() {
        return Ok(chord);
    }
    let denom = 1.0 + space.kappa() * space.form_dot(p.coords(), q.coords());
    if denom.abs() <= 1e-12 {
        return Err(GeomError::Singular(
            "g is singular for antipodal reference points".into(),
        ));
    }
    Ok(2.0 * chord / denom)
}

/// Reference route for [`g_point`]: rebuild the geodesic triangle (B,P,Q)
/// with its side lengths and hinge angle at B in a canonical position of
/// the two-dimensional model space, and differentiate twice its area in the
/// hinge angle by a central difference of step `h`.
pub fn g_point_from_area_derivative(
    space: &SpaceForm,
    b: &LabeledPoint,
    p: &LabeledPoint,
    q: &LabeledPoint,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(GeomError::InvalidParameter("step must be positive".into()));
    }
    let da = geodesic_distance(space, b, p)?;
    let db = geodesic_distance(space, b, q)?;
    if da <= 1e-8 || db <= 1e-8 {
        return Err(GeomError::InvalidParameter(
            "the hinge is undefined when a reference point coincides with B".into(),
        ));
    }
    let theta = if space.is_flat() {
        let u = p.coords() - b.coords();
        let v = q.coords() - b.coords();
        (u.dot(&v) / (u.norm() * v.norm())).clamp(-1.0, 1.0).acos()
    } else {
        tangent_angle(space, b.coords(), p.coords(), q.coords())?
    };
    if theta <= h || theta >= std::f64::consts::PI - h {
        return Err(GeomError::InvalidParameter(
            "hinge angle too close to 0 or π for the finite difference".into(),
        ));
    }
    let model = SpaceForm::new(space.curvature(), 2)?;
    let doubled_area = |t: f64| -> Result<f64> {
        let verts = canonical_triangle(&model, da, db, t)?;
        Ok(2.0 * simplex_volume(&model, &verts, &QuadConfig::default())?.value)
    };
    Ok((doubled_area(theta + h)? - doubled_area(theta - h)?) / (2.0 * h))
}

/// Triangle with hinge vertex at a canonical pole of the 2-dimensional
/// model, sides of lengths `a` and `b`, and hinge angle `theta`.
fn canonical_triangle(
    model: &SpaceForm,
    a: f64,
    b: f64,
    theta: f64,
) -> Result<Vec<LabeledPoint>> {
    let coords: [[f64; 3]; 3] = match model.curvature() {
        Curvature::Flat => [
            [0.0, 0.0, 0.0],
            [a, 0.0, 0.0],
            [b * theta.cos(), b * theta.sin(), 0.0],
        ],
        Curvature::Spherical => [
            [0.0, 0.0, 1.0],
            [a.sin(), 0.0, a.cos()],
            [b.sin() * theta.cos(), b.sin() * theta.sin(), b.cos()],
        ],
        Curvature::Hyperbolic => [
            [1.0, 0.0, 0.0],
            [a.cosh(), a.sinh(), 0.0],
            [b.cosh(), b.sinh() * theta.cos(), b.sinh() * theta.sin()],
        ],
    };
    let len = model.ambient_dim();
    coords.iter().map(|c| model.point_from_slice(&c[..len])).collect()
}

/// Polarized Gram determinant of a face with respect to reference points
/// P and Q: det[(Fᵢ − P)·(Fⱼ − Q)] over the face vertices, in flat space.
/// d_∅ = 1 by convention (an empty face is not representable here; the
/// convention enters the invariant sequence as c₀ = 1).
pub fn d_face(face: &[LabeledPoint], p: &LabeledPoint, q: &LabeledPoint) -> Result<f64> {
    if face.is_empty() {
        return Ok(1.0);
    }
    let dim = p.coords().len();
    if q.coords().len() != dim || face.iter().any(|v| v.coords().len() != dim) {
        return Err(GeomError::DimensionMismatch {
            expected: dim,
            got: q.coords().len(),
        });
    }
    let m = face.len();
    let mat = DMatrix::from_fn(m, m, |i, j| {
        (face[i].coords() - p.coords()).dot(&(face[j].coords() - q.coords()))
    });
    // A zero row (face vertex equal to P) or zero column (equal to Q) makes
    // the determinant exactly zero; detect it so the top invariant c_{n+1}
    // is exactly zero for the default reference pair.
    for i in 0..m {
        if mat.row(i).iter().all(|&x| x == 0.0) || mat.column(i).iter().all(|&x| x == 0.0) {
            return Ok(0.0);
        }
    }
    Ok(mat.determinant())
}

/// How an invariant sequence was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvariantRoute {
    /// Flat route through polarized Gram determinants.
    Determinant,
    /// Curved route through face weights and face volumes.
    FaceVolumes,
}

/// The invariants c₀ = 1, c₁, …, c_{n+1} with per-entry error estimates
/// (nonzero only where a quadrature volume enters).
#[derive(Clone, Debug)]
pub struct InvariantSequence {
    pub c: Vec<f64>,
    pub errors: Vec<f64>,
    pub route: InvariantRoute,
}

impl InvariantSequence {
    /// Intrinsic dimension n of the configuration the sequence came from.
    pub fn n(&self) -> usize {
        self.c.len() - 2
    }
}

/// Compute the invariant sequence of a stressed configuration. For flat
/// space, `p` and `q` override the default reference pair (the last two
/// vertices); the result is independent of the choice. The curved route
/// takes no reference points.
pub fn invariant_sequence(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    alpha: &[f64],
    p: Option<&LabeledPoint>,
    q: Option<&LabeledPoint>,
    cfg: &QuadConfig,
) -> Result<InvariantSequence> {
    if verts.len() < 3 {
        return Err(GeomError::InvalidParameter(
            "a degenerate simplex needs at least three vertices".into(),
        ));
    }
    if alpha.len() != verts.len() {
        return Err(GeomError::DimensionMismatch {
            expected: verts.len(),
            got: alpha.len(),
        });
    }
    for v in verts {
        space.check_len(v.coords())?;
    }
    let n = verts.len() - 2;
    let mut c = vec![1.0];
    let mut errors = vec![0.0];
    if space.is_flat() {
        let p = p.unwrap_or(&verts[n]);
        let q = q.unwrap_or(&verts[n + 1]);
        space.check_len(p.coords())?;
        space.check_len(q.coords())?;
        for k in 0..=n {
            let mut sum = 0.0;
            for subset in (0..verts.len()).combinations(k + 1) {
                let prod: f64 = subset.iter().map(|&i| alpha[i]).product();
                let face: Vec<LabeledPoint> =
                    subset.iter().map(|&i| verts[i].clone()).collect();
                sum += prod * d_face(&face, p, q)?;
            }
            c.push(sum);
            errors.push(0.0);
        }
        Ok(InvariantSequence {
            c,
            errors,
            route: InvariantRoute::Determinant,
        })
    } else {
        if p.is_some() || q.is_some() {
            return Err(GeomError::InvalidParameter(
                "the curved invariant route takes no reference points".into(),
            ));
        }
        for k in 0..=n {
            let factorial: f64 = (1..=k).map(|i| i as f64).product();
            let scale = space.kappa() * (k as f64 + 2.0) * factorial;
            let mut sum = 0.0;
            let mut err = 0.0;
            for subset in (0..verts.len()).combinations(k + 1) {
                let prod: f64 = subset.iter().map(|&i| alpha[i]).product();
                let face: Vec<LabeledPoint> =
                    subset.iter().map(|&i| verts[i].clone()).collect();
                let norm = gram_norm(space, &face)?;
                let vol = simplex_volume(space, &face, cfg)?;
                sum += prod * norm * vol.value;
                err += prod.abs() * norm * vol.error;
            }
            c.push(scale * sum);
            errors.push(scale.abs() * err);
        }
        Ok(InvariantSequence {
            c,
            errors,
            route: InvariantRoute::FaceVolumes,
        })
    }
}

/// Closed form for the first curved invariant: c₁ = 2κ·Σαᵢ.
pub fn c1_from_alpha_sum(space: &SpaceForm, alpha: &[f64]) -> Result<f64> {
    if space.is_flat() {
        return Err(GeomError::Unsupported(
            "the closed form c1 = 2k*sum(alpha) applies to curved spaces only".into(),
        ));
    }
    Ok(2.0 * space.kappa() * alpha.iter().sum::<f64>())
}

/// The two-point route for the first invariant: c₁ = Σᵢ αᵢ·g_{Aᵢ}(P,Q),
/// independent of the reference pair in every model space.
pub fn c1_g_route(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    alpha: &[f64],
    p: &LabeledPoint,
    q: &LabeledPoint,
) -> Result<f64> {
    if alpha.len() != verts.len() {
        return Err(GeomError::DimensionMismatch {
            expected: verts.len(),
            got: alpha.len(),
        });
    }
    let mut sum = 0.0;
    for (v, a) in verts.iter().zip(alpha) {
        sum += a * g_point(space, v, p, q)?;
    }
    Ok(sum)
}

/// The characteristic polynomial f(x) = Σᵢ (−1)ⁱ cᵢ x^{n+1−i}, stored as
/// monic coefficients in descending powers.
#[derive(Clone, Debug)]
pub struct CharPoly {
    coeffs: Vec<f64>,
}

impl CharPoly {
    /// Monic coefficients in descending powers: entry j is (−1)^j c_j.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &a| acc * x + a)
    }

    /// Roots via the companion matrix, sorted by modulus then argument.
    pub fn roots(&self) -> Result<Vec<Complex<f64>>> {
        companion_roots(&self.coeffs)
    }
}

/// Assemble the characteristic polynomial from an invariant sequence.
pub fn characteristic_polynomial(seq: &InvariantSequence) -> CharPoly {
    let coeffs = seq
        .c
        .iter()
        .enumerate()
        .map(|(j, &c)| if j % 2 == 0 { c } else { -c })
        .collect();
    CharPoly { coeffs }
}

/// Cross-check of the flat invariants against the spectral route: the
/// characteristic polynomial of the n×n matrix C₁C₂ᵀD₁ — with C₁, C₂ the
/// difference matrices of A₁, …, A_n against the reference vertices A_{n+1}
/// and A_{n+2}, and D₁ = diag(α₁, …, α_n) — equals f(x)/x. Returns the
/// largest coefficient deviation between the two routes.
pub fn charpoly_matrix_check(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    alpha: &[f64],
) -> Result<f64> {
    if !space.is_flat() {
        return Err(GeomError::Unsupported(
            "the spectral cross-check applies to flat space only".into(),
        ));
    }
    if verts.len() < 3 {
        return Err(GeomError::InvalidParameter(
            "a degenerate simplex needs at least three vertices".into(),
        ));
    }
    if alpha.len() != verts.len() {
        return Err(GeomError::DimensionMismatch {
            expected: verts.len(),
            got: alpha.len(),
        });
    }
    let n = verts.len() - 2;
    let d = space.ambient_dim();
    let mut c1 = DMatrix::zeros(n, d);
    let mut c2 = DMatrix::zeros(n, d);
    for i in 0..n {
        c1.row_mut(i)
            .copy_from(&(verts[i].coords() - verts[n].coords()).transpose());
        c2.row_mut(i)
            .copy_from(&(verts[i].coords() - verts[n + 1].coords()).transpose());
    }
    let d1 = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        alpha[..n].iter().copied(),
    ));
    let m = &c1 * c2.transpose() * d1;
    let spectral = char_poly_coeffs(&m);
    let seq = invariant_sequence(space, verts, alpha, None, None, &QuadConfig::default())?;
    let f = characteristic_polynomial(&seq);
    // f(x)/x just drops the vanishing constant term c_{n+1}.
    let direct = &f.coefficients()[..=n];
    let mut worst = 0.0f64;
    for (a, b) in spectral.iter().zip(direct) {
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}
