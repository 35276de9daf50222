//! Seeded random generators for configurations on the three space forms.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{GeomError, Result};
use crate::linalg::svd_rank;
use crate::space::{LabeledPoint, SpaceForm};
use crate::stress::{radon_partition, solve_one_stress, OneStress, PartitionCase};

const REJECTION_BUDGET: usize = 10_000;

/// Draw one point: a standard Gaussian vector in flat space, a normalized
/// Gaussian on the sphere, and a Gaussian spatial part completed to the
/// upper hyperboloid sheet in hyperbolic space.
pub fn random_on_space<R: Rng + ?Sized>(space: &SpaceForm, rng: &mut R) -> Result<LabeledPoint> {
    let d = space.dim();
    let gauss = |rng: &mut R, len: usize| -> DVector<f64> {
        DVector::from_fn(len, |_, _| rng.sample(StandardNormal))
    };
    match space.curvature() {
        crate::space::Curvature::Flat => Ok(LabeledPoint::from_validated(gauss(rng, d))),
        crate::space::Curvature::Spherical => loop {
            let v = gauss(rng, d + 1);
            let norm = v.norm();
            if norm > 1e-6 {
                return space.point(v / norm);
            }
        },
        crate::space::Curvature::Hyperbolic => {
            let spatial = gauss(rng, d);
            let mut coords = DVector::zeros(d + 1);
            coords[0] = (1.0 + spatial.norm_squared()).sqrt();
            coords.rows_mut(1, d).copy_from(&spatial);
            space.point(coords)
        }
    }
}

/// Draw a degenerate (n+1)-simplex with n = dim: n+2 points of Mⁿ, which
/// always carry a dependence; draws whose stress is not unique or touches
/// a vanishing coefficient are rejected and redrawn. Returns the vertices
/// together with their normalized stress.
pub fn random_degenerate_config<R: Rng + ?Sized>(
    space: &SpaceForm,
    rng: &mut R,
) -> Result<(Vec<LabeledPoint>, OneStress)> {
    let m = space.dim() + 2;
    for _ in 0..REJECTION_BUDGET {
        let verts: Vec<LabeledPoint> = (0..m)
            .map(|_| random_on_space(space, rng))
            .collect::<Result<_>>()?;
        match solve_one_stress(space, &verts) {
            Ok(stress) => return Ok((verts, stress)),
            Err(GeomError::DegenerateFace(_)) | Err(GeomError::NotDegenerate) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GeomError::Singular(
        "sampling budget exhausted while drawing a degenerate configuration".into(),
    ))
}

/// Draw a spherical configuration whose stress is one-sided (the vertices
/// are not confined to any open half-sphere), by rejection on the
/// partition case.
pub fn random_enclosing_config<R: Rng + ?Sized>(
    space: &SpaceForm,
    rng: &mut R,
) -> Result<(Vec<LabeledPoint>, OneStress)> {
    if space.curvature() != crate::space::Curvature::Spherical {
        return Err(GeomError::Unsupported(
            "one-sided configurations exist only on the sphere".into(),
        ));
    }
    for _ in 0..REJECTION_BUDGET {
        let (verts, stress) = random_degenerate_config(space, rng)?;
        let partition = radon_partition(space, stress.values())?;
        if partition.case == PartitionCase::Empty {
            return Ok((verts, stress));
        }
    }
    Err(GeomError::Singular(
        "sampling budget exhausted while drawing a one-sided configuration".into(),
    ))
}

/// Draw n+2 points in general position: a non-degenerate (n+1)-simplex.
/// Needs dim ≥ n+1 so there is room to span.
pub fn random_full_simplex<R: Rng + ?Sized>(
    space: &SpaceForm,
    n: usize,
    rng: &mut R,
) -> Result<Vec<LabeledPoint>> {
    if space.dim() < n + 1 {
        return Err(GeomError::InvalidParameter(format!(
            "a non-degenerate (n+1)-simplex with n = {n} needs dimension at least {}",
            n + 1
        )));
    }
    let m = n + 2;
    for _ in 0..REJECTION_BUDGET {
        let verts: Vec<LabeledPoint> = (0..m)
            .map(|_| random_on_space(space, rng))
            .collect::<Result<_>>()?;
        let full_rank = if space.is_flat() {
            let base = verts[0].coords();
            let mut edges = DMatrix::zeros(m - 1, space.ambient_dim());
            for (i, v) in verts[1..].iter().enumerate() {
                edges.row_mut(i).copy_from(&(v.coords() - base).transpose());
            }
            svd_rank(&edges) == m - 1
        } else {
            let mut coords = DMatrix::zeros(m, space.ambient_dim());
            for (i, v) in verts.iter().enumerate() {
                coords.row_mut(i).copy_from(&v.coords().transpose());
            }
            svd_rank(&coords) == m
        };
        if full_rank {
            return Ok(verts);
        }
    }
    Err(GeomError::Singular(
        "sampling budget exhausted while drawing a non-degenerate simplex".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_points_satisfy_their_quadrics() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for space in [
            SpaceForm::euclidean(3),
            SpaceForm::spherical(2),
            SpaceForm::hyperbolic(2),
        ] {
            for _ in 0..20 {
                let p = random_on_space(&space, &mut rng).unwrap();
                assert!(space.quadric_residual(p.coords()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_draws_carry_a_stress() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for space in [
            SpaceForm::euclidean(2),
            SpaceForm::euclidean(3),
            SpaceForm::spherical(1),
            SpaceForm::spherical(2),
            SpaceForm::hyperbolic(2),
        ] {
            let (verts, stress) = random_degenerate_config(&space, &mut rng).unwrap();
            assert_eq!(verts.len(), space.dim() + 2);
            assert_eq!(stress.values().len(), verts.len());
        }
    }

    #[test]
    fn enclosing_draws_have_one_sided_stress() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let space = SpaceForm::spherical(1);
        let (_, stress) = random_enclosing_config(&space, &mut rng).unwrap();
        assert!(stress.values().iter().all(|&v| v > 0.0));
        assert!(random_enclosing_config(&SpaceForm::euclidean(2), &mut rng).is_err());
    }

    #[test]
    fn full_simplices_span() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let verts = random_full_simplex(&SpaceForm::euclidean(3), 2, &mut rng).unwrap();
        assert_eq!(verts.len(), 4);
        assert!(matches!(
            solve_one_stress(&SpaceForm::euclidean(3), &verts),
            Err(GeomError::NotDegenerate)
        ));
        assert!(random_full_simplex(&SpaceForm::euclidean(2), 2, &mut rng).is_err());
    }
}
