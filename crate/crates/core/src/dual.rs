//! Dual configurations of Euclidean degenerate simplices.
//!
//! Fix a constant c ≠ 0 and translate the configuration so that the last
//! vertex sits at the origin. The dual of A is the configuration B with
//! B_{n+2} = 0 and, for every other index i, ⟨B_i, A_j − A_{n+2}⟩ = c for
//! all j ∉ {i, n+2}. The two configurations are locked together:
//!
//! * differences are orthogonal, (A_i − A_j)·(B_k − B_l) = 0 whenever the
//!   index pairs are disjoint;
//! * r_i = (A_j − A_i)·(B_k − B_i) does not depend on the choice of j ≠ k
//!   (both ≠ i), and αᵢ·rᵢ is constant over i;
//! * B is itself degenerate with stress β ∝ α, and the dual of B is
//!   similar to A;
//! * with difference matrices against the two reference vertices,
//!   C₁E₂ᵀ = E₁C₂ᵀ = diag(r₁, …, r_n) and the n×n products satisfy
//!   (C₂ᵀD₁C₁)(E₂ᵀD₂E₁) = ĉ·I with ĉ = (αᵢrᵢ)(βᵢrᵢ)/c;
//! * the nonzero roots of the primal and dual characteristic polynomials
//!   multiply in pairs to the same ĉ ([`root_reciprocity`]);
//! * B lies on a sphere exactly when c_{n−1} of the primal vanishes, the
//!   counterpart of "A lies on a sphere exactly when c₁ = 0"
//!   ([`cocircularity_test`]).

use itertools::Itertools;
use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::invariant::CharPoly;
use crate::linalg::{companion_roots, orthonormal_span, solve_full_rank, svd_rank};
use crate::space::{coord_refs, LabeledPoint, SpaceForm};
use crate::stress::{solve_one_stress, OneStress};

/// A dual configuration, kept in the translated frame in which the last
/// vertex of both the primal and the dual is the origin.
#[derive(Clone, Debug)]
pub struct DualConfiguration {
    /// The n+2 dual vertices; the last one is the origin.
    pub b: Vec<LabeledPoint>,
    /// The construction constant c.
    pub c: f64,
    /// The translation that was subtracted from the primal vertices
    /// (the coordinates of A_{n+2}).
    pub translation: DVector<f64>,
}

fn require_flat(space: &SpaceForm) -> Result<()> {
    if !space.is_flat() {
        return Err(GeomError::Unsupported(
            "dual configurations are defined in flat space".into(),
        ));
    }
    Ok(())
}

fn check_pair_lengths(space: &SpaceForm, verts: &[LabeledPoint]) -> Result<()> {
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

/// Construct the dual of a flat degenerate simplex with constant `c`.
///
/// Works for any ambient dimension d ≥ n: the dual is built inside the
/// n-dimensional span of the translated vertices.
pub fn construct_dual(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    c: f64,
) -> Result<DualConfiguration> {
    require_flat(space)?;
    check_pair_lengths(space, verts)?;
    if !(c.is_finite() && c != 0.0) {
        return Err(GeomError::InvalidParameter(
            "the dual constant c must be finite and nonzero".into(),
        ));
    }
    let n = verts.len() - 2;
    let translation = verts[n + 1].coords().clone();
    let tilde: Vec<DVector<f64>> = verts[..=n]
        .iter()
        .map(|v| v.coords() - &translation)
        .collect();
    let q = orthonormal_span(&tilde);
    if q.ncols() != n {
        return Err(GeomError::DegenerateFace(format!(
            "the translated vertices span dimension {}, expected {n}",
            q.ncols()
        )));
    }
    let coords: Vec<DVector<f64>> = tilde.iter().map(|t| q.transpose() * t).collect();
    let rhs = DVector::from_element(n, c);
    let mut b = Vec::with_capacity(n + 2);
    for i in 0..=n {
        let mut m = DMatrix::zeros(n, n);
        for (row, j) in (0..=n).filter(|&j| j != i).enumerate() {
            m.row_mut(row).copy_from(&coords[j].transpose());
        }
        if svd_rank(&m) != n {
            return Err(GeomError::DegenerateFace(format!(
                "vertices other than {} do not span the configuration",
                i + 1
            )));
        }
        let y = solve_full_rank(&m, &rhs)?;
        b.push(LabeledPoint::from_validated(&q * y));
    }
    b.push(LabeledPoint::from_validated(DVector::zeros(
        space.ambient_dim(),
    )));
    Ok(DualConfiguration { b, c, translation })
}

/// Largest orthogonality defect max |(A_i − A_j)·(B_k − B_l)| over index
/// pairs {i,j} and {k,l} that are disjoint. Zero in exact arithmetic for a
/// configuration and its dual; differences make the frames irrelevant.
pub fn duality_residual(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    b: &[LabeledPoint],
) -> Result<f64> {
    require_flat(space)?;
    check_pair_lengths(space, verts)?;
    check_pair_lengths(space, b)?;
    if verts.len() != b.len() {
        return Err(GeomError::DimensionMismatch {
            expected: verts.len(),
            got: b.len(),
        });
    }
    let a = coord_refs(verts);
    let bc = coord_refs(b);
    let mut worst = 0.0f64;
    for pair in (0..verts.len()).combinations(2) {
        let da = a[pair[0]] - a[pair[1]];
        for other in (0..verts.len()).combinations(2) {
            if pair.iter().any(|i| other.contains(i)) {
                continue;
            }
            let db = bc[other[0]] - bc[other[1]];
            worst = worst.max(da.dot(&db).abs());
        }
    }
    Ok(worst)
}

/// The coupling data between a configuration and its dual.
#[derive(Clone, Debug)]
pub struct DualCoupling {
    /// r_i = (A_j − A_i)·(B_k − B_i) with the canonical choice of j, k.
    pub r: Vec<f64>,
    /// Largest deviation of r_i over all admissible choices of (j, k).
    pub r_spread: f64,
    /// The dual's own stress (normalized); proportional to the primal's.
    pub beta: OneStress,
    /// Mean of the products αᵢ·rᵢ.
    pub t_a: f64,
    /// Mean of the products βᵢ·rᵢ for the normalized β.
    pub t_b: f64,
    /// Largest deviation of αᵢ·rᵢ (and βᵢ·rᵢ) from their means.
    pub coupling_residual: f64,
}

impl DualCoupling {
    /// The reciprocity constant ĉ = t_A·t_B / c for the stress scales that
    /// produced `t_a` and `t_b`.
    pub fn c_hat(&self, c: f64) -> f64 {
        self.t_a * self.t_b / c
    }
}

/// Compute r, the dual stress β, and the coupling products.
pub fn compute_coupling(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    b: &[LabeledPoint],
    alpha: &[f64],
) -> Result<DualCoupling> {
    require_flat(space)?;
    check_pair_lengths(space, verts)?;
    check_pair_lengths(space, b)?;
    let m = verts.len();
    if b.len() != m || alpha.len() != m {
        return Err(GeomError::DimensionMismatch {
            expected: m,
            got: b.len().min(alpha.len()),
        });
    }
    let a = coord_refs(verts);
    let bc = coord_refs(b);
    let r_of = |i: usize, j: usize, k: usize| (a[j] - a[i]).dot(&(bc[k] - bc[i]));
    let mut r = Vec::with_capacity(m);
    let mut r_spread = 0.0f64;
    for i in 0..m {
        let others: Vec<usize> = (0..m).filter(|&j| j != i).collect();
        let canonical = r_of(i, others[0], others[1]);
        for &j in &others {
            for &k in &others {
                if j != k {
                    r_spread = r_spread.max((r_of(i, j, k) - canonical).abs());
                }
            }
        }
        r.push(canonical);
    }
    let beta = solve_one_stress(space, b)?;
    let t_a = alpha.iter().zip(&r).map(|(x, y)| x * y).sum::<f64>() / m as f64;
    let t_b = beta
        .values()
        .iter()
        .zip(&r)
        .map(|(x, y)| x * y)
        .sum::<f64>()
        / m as f64;
    let mut coupling_residual = 0.0f64;
    for i in 0..m {
        coupling_residual = coupling_residual.max((alpha[i] * r[i] - t_a).abs());
        coupling_residual = coupling_residual.max((beta.values()[i] * r[i] - t_b).abs());
    }
    Ok(DualCoupling {
        r,
        r_spread,
        beta,
        t_a,
        t_b,
        coupling_residual,
    })
}

/// Residuals of the matrix identities binding a primal/dual pair.
#[derive(Clone, Debug)]
pub struct MatrixIdentityReport {
    /// Diagonal of the difference-matrix products, the matrix route to r.
    pub r: Vec<f64>,
    /// Largest deviation of C₁E₂ᵀ and E₁C₂ᵀ from diag(r).
    pub diagonal_residual: f64,
    /// ĉ from the product identity, read off as trace/n.
    pub c_hat: f64,
    /// Largest entry of (C₂ᵀD₁C₁)(E₂ᵀD₂E₁) − ĉ·I, scaled by max(1, |ĉ|).
    pub identity_residual: f64,
    /// |ĉ − t_A·t_B/c| scaled by max(1, |ĉ|), with t_A, t_B the means of
    /// αᵢrᵢ and βᵢrᵢ over i = 1..n.
    pub coupling_gap: f64,
}

/// Evaluate the matrix identities for a primal/dual pair with the supplied
/// stresses (any scales; the residuals refer to those scales).
pub fn matrix_identities(
    space: &SpaceForm,
    verts: &[LabeledPoint],
    b: &[LabeledPoint],
    c: f64,
    alpha: &[f64],
    beta: &[f64],
) -> Result<MatrixIdentityReport> {
    require_flat(space)?;
    check_pair_lengths(space, verts)?;
    check_pair_lengths(space, b)?;
    let m = verts.len();
    if b.len() != m || alpha.len() != m || beta.len() != m {
        return Err(GeomError::DimensionMismatch {
            expected: m,
            got: b.len().min(alpha.len()).min(beta.len()),
        });
    }
    if !(c.is_finite() && c != 0.0) {
        return Err(GeomError::InvalidParameter(
            "the dual constant c must be finite and nonzero".into(),
        ));
    }
    let n = m - 2;
    if n < 1 {
        return Err(GeomError::InvalidParameter(
            "matrix identities need n >= 1".into(),
        ));
    }
    // Difference matrices restricted to an orthonormal basis of the common
    // span, so the product identity is between square n×n matrices even
    // when the ambient dimension exceeds n.
    let a_last = verts[m - 1].coords();
    let b_last = b[m - 1].coords();
    let mut spanning: Vec<DVector<f64>> = verts[..m - 1]
        .iter()
        .map(|v| v.coords() - a_last)
        .collect();
    spanning.extend(b[..m - 1].iter().map(|v| v.coords() - b_last));
    let q = orthonormal_span(&spanning);
    if q.ncols() != n {
        return Err(GeomError::DegenerateFace(format!(
            "primal and dual span dimension {}, expected {n}",
            q.ncols()
        )));
    }
    let row_diff = |verts: &[LabeledPoint], i: usize, j: usize| -> DVector<f64> {
        q.transpose() * (verts[i].coords() - verts[j].coords())
    };
    let mut c1 = DMatrix::zeros(n, n);
    let mut c2 = DMatrix::zeros(n, n);
    let mut e1 = DMatrix::zeros(n, n);
    let mut e2 = DMatrix::zeros(n, n);
    for i in 0..n {
        c1.row_mut(i).copy_from(&row_diff(verts, i, n).transpose());
        c2.row_mut(i).copy_from(&row_diff(verts, i, n + 1).transpose());
        e1.row_mut(i).copy_from(&row_diff(b, i, n).transpose());
        e2.row_mut(i).copy_from(&row_diff(b, i, n + 1).transpose());
    }
    let p1 = &c1 * e2.transpose();
    let p2 = &e1 * c2.transpose();
    let mut r = Vec::with_capacity(n);
    let mut diagonal_residual = 0.0f64;
    for i in 0..n {
        r.push(0.5 * (p1[(i, i)] + p2[(i, i)]));
    }
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { r[i] } else { 0.0 };
            diagonal_residual = diagonal_residual.max((p1[(i, j)] - target).abs());
            diagonal_residual = diagonal_residual.max((p2[(i, j)] - target).abs());
        }
    }
    let d1 = DMatrix::from_diagonal(&DVector::from_iterator(n, alpha[..n].iter().copied()));
    let d2 = DMatrix::from_diagonal(&DVector::from_iterator(n, beta[..n].iter().copied()));
    let product = (c2.transpose() * &d1 * &c1) * (e2.transpose() * &d2 * &e1);
    let c_hat = product.trace() / n as f64;
    let scale = c_hat.abs().max(1.0);
    let mut identity_residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { c_hat } else { 0.0 };
            identity_residual = identity_residual.max((product[(i, j)] - target).abs() / scale);
        }
    }
    let t_a = (0..n).map(|i| alpha[i] * r[i]).sum::<f64>() / n as f64;
    let t_b = (0..n).map(|i| beta[i] * r[i]).sum::<f64>() / n as f64;
    let coupling_gap = (c_hat - t_a * t_b / c).abs() / scale;
    Ok(MatrixIdentityReport {
        r,
        diagonal_residual,
        c_hat,
        identity_residual,
        coupling_gap,
    })
}

/// Matched products of the nonzero primal and dual roots.
#[derive(Clone, Debug)]
pub struct Reciprocity {
    /// λᵢ·μ_{σ(i)} under the best permutation σ.
    pub products: Vec<Complex<f64>>,
    /// The reciprocity constant the products are compared against.
    pub c_hat: f64,
    /// min over σ of max_i |λᵢ·μ_{σ(i)}/ĉ − 1|: the products are checked at
    /// unit scale, where eigenvalue-based roots are trustworthy, instead of
    /// at the scale of ĉ.
    pub residual: f64,
}

/// Check the root reciprocity: each polynomial has exactly one vanishing
/// root, and the remaining roots pair up so that λᵢ·μ_{σ(i)} = ĉ. The
/// stresses behind the two polynomials must be the ones that produced
/// `c_hat` (any rescaling changes roots and ĉ together).
pub fn root_reciprocity(primal: &CharPoly, dual: &CharPoly, c_hat: f64) -> Result<Reciprocity> {
    if primal.degree() != dual.degree() {
        return Err(GeomError::DimensionMismatch {
            expected: primal.degree(),
            got: dual.degree(),
        });
    }
    let n = primal.degree() - 1;
    if n > 6 {
        return Err(GeomError::Unsupported(
            "root matching is implemented for n <= 6".into(),
        ));
    }
    if c_hat == 0.0 || !c_hat.is_finite() {
        return Err(GeomError::InvalidParameter(
            "root reciprocity needs a finite nonzero constant".into(),
        ));
    }
    // The dual's nonzero roots are ĉ/λᵢ; when ĉ is small they crowd the
    // structural zero root and the companion eigenvalues smear the cluster.
    // Substituting x = ĉ·y divides coefficient k by ĉᵏ and moves the roots
    // to 1/λᵢ — unit scale — without changing the identity under test.
    let scaled: Vec<f64> = dual
        .coefficients()
        .iter()
        .enumerate()
        .map(|(k, c)| c / c_hat.powi(k as i32))
        .collect();
    // Roots come sorted by modulus; the first is the structural zero root.
    let lam: Vec<Complex<f64>> = primal.roots()?[1..].to_vec();
    let nu: Vec<Complex<f64>> = companion_roots(&scaled)?[1..].to_vec();
    let one = Complex::new(1.0, 0.0);
    let mut best: Option<(f64, Vec<Complex<f64>>)> = None;
    for perm in (0..n).permutations(n) {
        let unit: Vec<Complex<f64>> = (0..n).map(|i| lam[i] * nu[perm[i]]).collect();
        let worst = unit
            .iter()
            .map(|p| (p - one).norm())
            .fold(0.0f64, f64::max);
        if best.as_ref().is_none_or(|(w, _)| worst < *w) {
            best = Some((worst, unit));
        }
    }
    let (residual, unit) = best.expect("at least one permutation");
    Ok(Reciprocity {
        products: unit.iter().map(|p| p * c_hat).collect(),
        c_hat,
        residual,
    })
}

/// A sphere fitted through the leading points of a configuration.
#[derive(Clone, Debug)]
pub struct SphereFit {
    pub center: DVector<f64>,
    pub radius: f64,
    /// max |dist(Pᵢ, center) − radius| over the points beyond the fit set.
    pub residual: f64,
}

impl SphereFit {
    /// Signed distance of a point from the fitted sphere: negative inside,
    /// positive outside.
    pub fn signed_residual(&self, p: &LabeledPoint) -> f64 {
        (p.coords() - &self.center).norm() - self.radius
    }
}

/// Fit the sphere through the first d+1 points (d the ambient dimension)
/// and measure how far the remaining points are from it. A configuration
/// lies on a sphere exactly when its first invariant vanishes; its dual
/// does exactly when c_{n−1} of the primal vanishes.
pub fn cocircularity_test(space: &SpaceForm, points: &[LabeledPoint]) -> Result<SphereFit> {
    require_flat(space)?;
    let d = space.ambient_dim();
    if points.len() < d + 1 {
        return Err(GeomError::InvalidParameter(format!(
            "a sphere fit in dimension {d} needs at least {} points",
            d + 1
        )));
    }
    for p in points {
        space.check_len(p.coords())?;
    }
    let base = points[0].coords();
    let mut m = DMatrix::zeros(d, d);
    let mut rhs = DVector::zeros(d);
    for i in 0..d {
        let diff = points[i + 1].coords() - base;
        rhs[i] = 0.5 * (points[i + 1].coords().norm_squared() - base.norm_squared());
        m.row_mut(i).copy_from(&diff.transpose());
    }
    if svd_rank(&m) != d {
        return Err(GeomError::DegenerateFace(
            "sphere fit needs affinely independent leading points".into(),
        ));
    }
    let center = solve_full_rank(&m, &rhs)?;
    let radius = (base - &center).norm();
    let mut residual = 0.0f64;
    for p in &points[d + 1..] {
        residual = residual.max(((p.coords() - &center).norm() - radius).abs());
    }
    Ok(SphereFit {
        center,
        radius,
        residual,
    })
}

/// Curved counterpart of the sphere test: a curved configuration lies in an
/// affine hyperplane of the ambient space exactly when Σαᵢ = 0. Returns
/// the sum.
pub fn affine_dependence_test(space: &SpaceForm, alpha: &[f64]) -> Result<f64> {
    if space.is_flat() {
        return Err(GeomError::Unsupported(
            "the affine-dependence criterion applies to curved spaces".into(),
        ));
    }
    Ok(alpha.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::invariant::{characteristic_polynomial, invariant_sequence};
    use crate::linalg::similarity_residual;
    use crate::quadrature::QuadConfig;
    use approx::assert_abs_diff_eq;

    fn coords_close(a: &LabeledPoint, expected: &[f64], tol: f64) {
        for (x, e) in a.coords().iter().zip(expected) {
            assert_abs_diff_eq!(*x, *e, epsilon = tol);
        }
    }

    #[test]
    fn square_dual_is_the_reflected_square() {
        let (space, verts) = fixtures::square();
        let dual = construct_dual(&space, &verts, 1.0).unwrap();
        let expected: [&[f64]; 4] = [&[0.0, 1.0], &[1.0, 1.0], &[1.0, 0.0], &[0.0, 0.0]];
        for (b, e) in dual.b.iter().zip(expected) {
            coords_close(b, e, 1e-12);
        }
        assert!(duality_residual(&space, &verts, &dual.b).unwrap() < 1e-12);

        // The bidual reproduces the primal exactly (A₄ is already the origin).
        let bidual = construct_dual(&space, &dual.b, 1.0).unwrap();
        for (p, v) in bidual.b.iter().zip(&verts) {
            for (x, e) in p.coords().iter().zip(v.coords().iter()) {
                assert_abs_diff_eq!(*x, *e, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn rectangle_dual_frozen_coordinates() {
        let (space, verts) = fixtures::rectangle(2.0, 1.0);
        let dual = construct_dual(&space, &verts, 1.0).unwrap();
        // Width c/(2a) = 1/4, height c/(2b) = 1/2.
        let expected: [&[f64]; 4] = [
            &[-0.25, 0.0],
            &[-0.25, 0.5],
            &[0.0, 0.5],
            &[0.0, 0.0],
        ];
        for (b, e) in dual.b.iter().zip(expected) {
            coords_close(b, e, 1e-12);
        }
    }

    #[test]
    fn square_coupling_and_matrix_identities() {
        let (space, verts) = fixtures::square();
        let raw = [1.0, -1.0, 1.0, -1.0];
        let dual = construct_dual(&space, &verts, 1.0).unwrap();
        let coupling = compute_coupling(&space, &verts, &dual.b, &raw).unwrap();
        let expected_r = [-1.0, 1.0, -1.0, 1.0];
        for (r, e) in coupling.r.iter().zip(expected_r) {
            assert_abs_diff_eq!(*r, e, epsilon = 1e-12);
        }
        assert!(coupling.r_spread < 1e-12);
        assert_abs_diff_eq!(coupling.t_a, -1.0, epsilon = 1e-12);
        assert!(coupling.coupling_residual < 1e-12);

        // With raw β the product identity is exactly c·I = I.
        let report =
            matrix_identities(&space, &verts, &dual.b, 1.0, &raw, &raw).unwrap();
        assert!(report.diagonal_residual < 1e-12);
        assert_abs_diff_eq!(report.c_hat, 1.0, epsilon = 1e-12);
        assert!(report.identity_residual < 1e-12);
        assert!(report.coupling_gap < 1e-12);
    }

    #[test]
    fn square_root_reciprocity() {
        let (space, verts) = fixtures::square();
        let raw = [1.0, -1.0, 1.0, -1.0];
        let cfg = QuadConfig::default();
        let dual = construct_dual(&space, &verts, 1.0).unwrap();
        let coupling = compute_coupling(&space, &verts, &dual.b, &raw).unwrap();
        let f = characteristic_polynomial(
            &invariant_sequence(&space, &verts, &raw, None, None, &cfg).unwrap(),
        );
        let beta = coupling.beta.values().to_vec();
        let g = characteristic_polynomial(
            &invariant_sequence(&space, &dual.b, &beta, None, None, &cfg).unwrap(),
        );
        let t_a = raw
            .iter()
            .zip(&coupling.r)
            .map(|(a, r)| a * r)
            .sum::<f64>()
            / 4.0;
        let c_hat = t_a * coupling.t_b / 1.0;
        let rec = root_reciprocity(&f, &g, c_hat).unwrap();
        assert!(
            rec.residual < 1e-7,
            "square reciprocity residual {}",
            rec.residual
        );
    }

    #[test]
    fn orthocenter_dual_is_similar_to_the_primal() {
        let (space, verts) = fixtures::right_triangle_with_orthocenter();
        let dual = construct_dual(&space, &verts, 1.0).unwrap();
        assert!(duality_residual(&space, &verts, &dual.b).unwrap() < 1e-12);
        let a: Vec<_> = verts.iter().map(|v| v.coords().clone()).collect();
        let b: Vec<_> = dual.b.iter().map(|v| v.coords().clone()).collect();
        let resid = similarity_residual(&a, &b).unwrap();
        assert!(
            resid < 1e-7,
            "orthocentric dual must be similar to the primal: {resid}"
        );
    }

    #[test]
    fn dual_scales_linearly_in_c() {
        let (space, verts) = fixtures::triangle_with_centroid();
        let d1 = construct_dual(&space, &verts, 1.0).unwrap();
        let d2 = construct_dual(&space, &verts, 2.0).unwrap();
        for (x, y) in d1.b.iter().zip(&d2.b) {
            for (a, b) in x.coords().iter().zip(y.coords().iter()) {
                assert_abs_diff_eq!(2.0 * a, *b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn dual_in_higher_ambient_dimension() {
        // The square lifted to the z = 0.3 plane of R³.
        let space = SpaceForm::euclidean(3);
        let verts: Vec<LabeledPoint> = [
            [1.0, 0.0, 0.3],
            [1.0, 1.0, 0.3],
            [0.0, 1.0, 0.3],
            [0.0, 0.0, 0.3],
        ]
        .iter()
        .map(|c| space.point_from_slice(c).unwrap())
        .collect();
        let dual = construct_dual(&space, &verts, 1.0).unwrap();
        assert!(duality_residual(&space, &verts, &dual.b).unwrap() < 1e-12);
        let coupling =
            compute_coupling(&space, &verts, &dual.b, &[1.0, -1.0, 1.0, -1.0]).unwrap();
        assert!(coupling.r_spread < 1e-12);
        assert!(coupling.coupling_residual < 1e-12);
        let report = matrix_identities(
            &space,
            &verts,
            &dual.b,
            1.0,
            &[1.0, -1.0, 1.0, -1.0],
            coupling.beta.values(),
        )
        .unwrap();
        assert!(report.diagonal_residual < 1e-12);
        assert!(report.identity_residual < 1e-10);
    }

    #[test]
    fn sphere_fits_of_the_fixtures() {
        let (space, verts) = fixtures::square();
        let fit = cocircularity_test(&space, &verts).unwrap();
        assert_abs_diff_eq!(fit.radius, 0.5f64.sqrt(), epsilon = 1e-12);
        assert!(fit.residual < 1e-12, "square vertices are concyclic");

        let (space, verts) = fixtures::triangle_with_centroid();
        let fit = cocircularity_test(&space, &verts).unwrap();
        // The centroid sits strictly inside the circumcircle.
        let signed = fit.signed_residual(&verts[3]);
        assert_abs_diff_eq!(signed, -(2.0f64.sqrt()) / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.residual, 2.0f64.sqrt() / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn affine_dependence_in_curved_space() {
        let (space, _) = fixtures::circle_thirds();
        assert_abs_diff_eq!(
            affine_dependence_test(&space, &[1.0, 1.0, 1.0]).unwrap(),
            3.0,
            epsilon = 0.0
        );
        let flat = SpaceForm::euclidean(2);
        assert!(affine_dependence_test(&flat, &[1.0, -1.0, 1.0, -1.0]).is_err());
    }
}
