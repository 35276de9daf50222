//! Dense linear-algebra helpers shared across modules.
//!
//! Everything here operates on small matrices (at most a handful of rows),
//! so numerical robustness is preferred over scalability: rank decisions go
//! through the SVD with the crate-wide relative threshold, and polynomial
//! roots come from the eigenvalues of the companion matrix.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::space::RANK_REL_TOL;

/// Right null space of `m`: the singular directions with σ ≤ tol·σ_max.
/// Returns an orthonormal basis (possibly empty).
pub(crate) fn null_space(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    // Pad wide matrices with zero rows: the thin SVD of an r×c matrix with
    // r < c does not carry the c − r trailing right-singular directions.
    let square = if m.nrows() < m.ncols() {
        let mut s = DMatrix::zeros(m.ncols(), m.ncols());
        s.rows_mut(0, m.nrows()).copy_from(m);
        s
    } else {
        m.clone()
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("SVD with v_t requested");
    let smax = svd.singular_values.max().max(0.0);
    let tol = RANK_REL_TOL * smax;
    let mut basis = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= tol {
            basis.push(v_t.row(i).transpose());
        }
    }
    basis
}

/// Numerical rank with the crate-wide relative threshold.
pub(crate) fn svd_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.max().max(0.0);
    sv.iter().filter(|&&s| s > RANK_REL_TOL * smax).count()
}

/// Solve a square full-rank system, erroring on rank deficiency.
pub(crate) fn solve_full_rank(m: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if !(smax > 0.0) || svd.singular_values.iter().any(|&s| s <= RANK_REL_TOL * smax) {
        return Err(GeomError::Singular("linear system is rank-deficient".into()));
    }
    svd.solve(rhs, 0.0).map_err(|e| GeomError::Singular(e.to_string()))
}

/// Orthonormal basis (as columns) of the span of the given vectors.
pub(crate) fn orthonormal_span(vectors: &[DVector<f64>]) -> DMatrix<f64> {
    if vectors.is_empty() {
        return DMatrix::zeros(0, 0);
    }
    let dim = vectors[0].len();
    let mut m = DMatrix::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.column_mut(j).copy_from(v);
    }
    let svd = m.svd(true, false);
    let u = svd.u.expect("SVD with u requested");
    let smax = svd.singular_values.max().max(0.0);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_REL_TOL * smax)
        .count();
    u.columns(0, rank).into_owned()
}

/// Coefficients of det(xI − M) for a square matrix, by the
/// Faddeev–LeVerrier recurrence: monic, highest degree first.
pub fn char_poly_coeffs(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "characteristic polynomial needs a square matrix");
    let mut coeffs = vec![1.0];
    let mut acc = DMatrix::<f64>::identity(n, n);
    for k in 1..=n {
        acc = m * acc;
        let c = -acc.trace() / k as f64;
        coeffs.push(c);
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    coeffs
}

/// Roots of a monic real polynomial (coefficients highest degree first),
/// via the eigenvalues of its companion matrix. Sorted by (modulus,
/// argument) so repeated calls are directly comparable.
pub fn companion_roots(coeffs: &[f64]) -> Result<Vec<Complex<f64>>> {
    if coeffs.is_empty() || coeffs[0] == 0.0 {
        return Err(GeomError::InvalidParameter(
            "polynomial must be monic with a nonzero leading coefficient".into(),
        ));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(GeomError::InvalidParameter(
            "polynomial coefficients must be finite".into(),
        ));
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[0];
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        companion[(i, n - 1)] = -coeffs[n - i] / lead;
    }
    let mut roots: Vec<Complex<f64>> = companion.complex_eigenvalues().iter().copied().collect();
    roots.sort_by(|a, b| {
        let ka = (a.norm(), a.arg());
        let kb = (b.norm(), b.arg());
        ka.partial_cmp(&kb).expect("finite eigenvalues")
    });
    Ok(roots)
}

/// Shape distance between two labeled point lists, invariant under
/// translation, scaling and orthogonal maps (reflections included).
///
/// Both configurations are centered and scaled to unit Frobenius norm; the
/// residual is ‖X − YR‖_F after the optimal orthogonal alignment R, which is
/// zero exactly when the configurations are similar with matching labels.
/// Being a Euclidean distance of normalized shapes, the residual of an
/// exactly similar pair computed in floating point lands near √ε ≈ 1e−8,
/// not near ε itself.
pub fn similarity_residual(x: &[DVector<f64>], y: &[DVector<f64>]) -> Result<f64> {
    if x.len() != y.len() || x.is_empty() {
        return Err(GeomError::InvalidParameter(
            "shape comparison needs two equally sized nonempty point lists".into(),
        ));
    }
    let normalize = |pts: &[DVector<f64>]| -> Result<DMatrix<f64>> {
        let dim = pts[0].len();
        let mut centroid = DVector::zeros(dim);
        for p in pts {
            if p.len() != dim {
                return Err(GeomError::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            centroid += p;
        }
        centroid /= pts.len() as f64;
        let mut m = DMatrix::zeros(pts.len(), dim);
        for (i, p) in pts.iter().enumerate() {
            m.row_mut(i).copy_from(&(p - &centroid).transpose());
        }
        let norm = m.norm();
        if norm <= 0.0 {
            return Err(GeomError::DegenerateFace(
                "shape comparison needs a non-collapsed configuration".into(),
            ));
        }
        Ok(m / norm)
    };
    let xm = normalize(x)?;
    let ym = normalize(y)?;
    if xm.ncols() != ym.ncols() {
        return Err(GeomError::DimensionMismatch {
            expected: xm.ncols(),
            got: ym.ncols(),
        });
    }
    // max_R tr(Rᵀ YᵀX) over orthogonal R is the nuclear norm of YᵀX.
    let cross = ym.transpose() * &xm;
    let nuclear: f64 = cross.svd(false, false).singular_values.iter().sum();
    Ok((2.0 - 2.0 * nuclear).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn null_space_of_dependent_columns() {
        // Columns of a 2x3 matrix with a known dependence: c0 + c1 = c2.
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 0.0, 1.0, 1.0]);
        let ns = null_space(&m);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        let prod = &m * v;
        assert!(prod.norm() < 1e-12, "null vector must vanish: {prod}");
        assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn char_poly_of_known_matrix() {
        // [[2,1],[0,3]] has det(xI−M) = x² − 5x + 6.
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 3.0]);
        let c = char_poly_coeffs(&m);
        assert_abs_diff_eq!(c[0], 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(c[1], -5.0, epsilon = 1e-13);
        assert_abs_diff_eq!(c[2], 6.0, epsilon = 1e-13);
    }

    #[test]
    fn companion_roots_of_cubic_with_zero_root() {
        // x³ − (4/3)x² + (1/3)x = x(x − 1)(x − 1/3).
        let roots = companion_roots(&[1.0, -4.0 / 3.0, 1.0 / 3.0, 0.0]).unwrap();
        assert_eq!(roots.len(), 3);
        assert_abs_diff_eq!(roots[0].norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(roots[1].re, 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(roots[2].re, 1.0, epsilon = 1e-12);
        assert!(roots.iter().all(|r| r.im.abs() < 1e-12));
    }

    #[test]
    fn companion_roots_conjugate_pair_order() {
        // x² + 1 → ±i sorted by argument: −i before +i.
        let roots = companion_roots(&[1.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(roots[0].im, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(roots[1].im, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn similarity_residual_detects_similar_shapes() {
        let x: Vec<DVector<f64>> = [[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]]
            .iter()
            .map(|c| DVector::from_row_slice(c))
            .collect();
        // Rotate by 90°, scale by 3, translate.
        let y: Vec<DVector<f64>> = x
            .iter()
            .map(|p| {
                DVector::from_row_slice(&[
                    4.0 - 3.0 * p[1],
                    -1.0 + 3.0 * p[0],
                ])
            })
            .collect();
        assert!(similarity_residual(&x, &y).unwrap() < 1e-7);
        // A genuinely different shape keeps a visible residual.
        let z: Vec<DVector<f64>> = [[0.0, 0.0], [1.0, 0.0], [1.0, 2.0]]
            .iter()
            .map(|c| DVector::from_row_slice(c))
            .collect();
        assert!(similarity_residual(&x, &z).unwrap() > 1e-2);
    }
}
