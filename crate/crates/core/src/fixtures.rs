//! Small hand-checked configurations shared across the test suites and the
//! sample command of the CLI. Each returns the space together with the
//! vertex list; the documented stress and invariant values are exact.

use crate::space::{LabeledPoint, SpaceForm};

fn points(space: &SpaceForm, coords: &[&[f64]]) -> Vec<LabeledPoint> {
    coords
        .iter()
        .map(|c| space.point_from_slice(c).expect("fixture point must be valid"))
        .collect()
}

/// Unit square (1,0), (1,1), (0,1), (0,0) in ℝ². Stress ∝ (1, −1, 1, −1);
/// the dual with c = 1 is the square reflected across the diagonal.
pub fn square() -> (SpaceForm, Vec<LabeledPoint>) {
    let space = SpaceForm::euclidean(2);
    let verts = points(
        &space,
        &[&[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0], &[0.0, 0.0]],
    );
    (space, verts)
}

/// Axis-aligned rectangle with half-width a and half-height b, centered at
/// the origin: (a,b), (−a,b), (−a,−b), (a,−b). Stress ∝ (1, −1, 1, −1);
/// the dual with constant c is the rectangle with half-width c/(4a) and
/// half-height c/(4b), up to the vertex pairing of the duality.
pub fn rectangle(a: f64, b: f64) -> (SpaceForm, Vec<LabeledPoint>) {
    let space = SpaceForm::euclidean(2);
    let verts = points(&space, &[&[a, b], &[-a, b], &[-a, -b], &[a, -b]]);
    (space, verts)
}

/// Right triangle (0,0), (1,0), (0,1) with its centroid (1/3, 1/3).
/// Stress ∝ (1, 1, 1, −3); invariants c₁ = 4/3, c₂ = 1/3, c₃ = 0 for the
/// raw stress and the default point pair, so the characteristic polynomial
/// is x³ − 4/3·x² + 1/3·x with roots {0, 1/3, 1}.
pub fn triangle_with_centroid() -> (SpaceForm, Vec<LabeledPoint>) {
    let space = SpaceForm::euclidean(2);
    let verts = points(
        &space,
        &[
            &[0.0, 0.0],
            &[1.0, 0.0],
            &[0.0, 1.0],
            &[1.0 / 3.0, 1.0 / 3.0],
        ],
    );
    (space, verts)
}

/// Three equally spaced points on the circle S¹. Stress ∝ (1, 1, 1), the
/// one-sided case: the three arcs cover the circle once, so the facet
/// volumes sum to 2π. For the raw stress (1,1,1): c₁ = 6 and c₂ = 3√3·π.
pub fn circle_thirds() -> (SpaceForm, Vec<LabeledPoint>) {
    let space = SpaceForm::spherical(1);
    let s = 3f64.sqrt() / 2.0;
    let verts = points(&space, &[&[1.0, 0.0], &[-0.5, s], &[-0.5, -s]]);
    (space, verts)
}

/// Triangle (0,0), (4,0), (1,3) with its orthocenter (1,1).
/// Stress ∝ (3, 1, 2, −6); the dual configuration is similar to the primal
/// after relabeling, the classical self-duality of the orthocentric case.
pub fn right_triangle_with_orthocenter() -> (SpaceForm, Vec<LabeledPoint>) {
    let space = SpaceForm::euclidean(2);
    let verts = points(
        &space,
        &[&[0.0, 0.0], &[4.0, 0.0], &[1.0, 3.0], &[1.0, 1.0]],
    );
    (space, verts)
}

/// Parameters (leg, diagonal, base) of the isosceles-trapezoid flex used by
/// the motion suites: legs 1.2, diagonals 2.2, fixed base 2.4. The moving
/// base then has length 2·x₃ with x₃ = (d² − l²)/(2·b₁).
pub const TRAPEZOID_PARAMS: (f64, f64, f64) = (1.2, 2.2, 2.4);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_expected_sizes() {
        assert_eq!(square().1.len(), 4);
        assert_eq!(rectangle(2.0, 1.0).1.len(), 4);
        assert_eq!(triangle_with_centroid().1.len(), 4);
        assert_eq!(circle_thirds().1.len(), 3);
        assert_eq!(right_triangle_with_orthocenter().1.len(), 4);
    }

    #[test]
    fn circle_thirds_lie_on_the_circle() {
        let (space, verts) = circle_thirds();
        for v in &verts {
            assert!(space.quadric_residual(v.coords()).abs() < 1e-12);
        }
    }
}
