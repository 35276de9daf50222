//! Stresses, invariants, duals, and flexes of degenerate simplices in the
//! three constant-curvature model spaces: Euclidean ℝⁿ, the sphere Sⁿ, and
//! the hyperboloid model of hyperbolic space Hⁿ.
//!
//! A *degenerate (n+1)-simplex* is an ordered list of n+2 vertices confined
//! to an n-dimensional space — one vertex more than fits in general
//! position. Such a configuration carries an essentially unique linear
//! dependence, its 1-stress, and through it a surprisingly rigid bundle of
//! structure: induced stresses on all faces, a Radon partition of its
//! facets with a volume identity, a sequence of geometric invariants with a
//! characteristic polynomial, a dual configuration with reciprocal
//! spectrum, and a second-order rigidity law for lifts into a higher
//! dimension. This crate computes all of these and exposes numerical
//! experiments that probe the identities behind them.
//!
//! Entry points:
//!
//! * [`SpaceForm`], [`LabeledPoint`] — the model spaces and their points;
//! * [`solve_one_stress`], [`induce_k_stress`], [`radon_partition`] —
//!   stresses and the facet partition;
//! * [`invariant_sequence`], [`characteristic_polynomial`] — invariants;
//! * [`simplex_volume`] — flat, spherical, and hyperbolic simplex volumes;
//! * the `dual` and `motion` modules — dual configurations and flexes.

pub mod dual;
pub mod error;
pub mod fixtures;
mod linalg;
pub mod motion;
pub mod quadrature;
pub mod sample;
pub mod space;
pub mod stress;
pub mod volume;

pub mod invariant;

pub use dual::{
    affine_dependence_test, cocircularity_test, compute_coupling, construct_dual,
    duality_residual, matrix_identities, root_reciprocity, DualConfiguration, DualCoupling,
    MatrixIdentityReport, Reciprocity, SphereFit,
};
pub use error::{GeomError, Result};
pub use invariant::{
    c1_from_alpha_sum, c1_g_route, characteristic_polynomial, charpoly_matrix_check, d_face,
    g_point, g_point_from_area_derivative, invariant_sequence, CharPoly, InvariantRoute,
    InvariantSequence,
};
pub use linalg::{char_poly_coeffs, companion_roots, similarity_residual};
pub use motion::{
    apex_displacement_sq, constraint_value, embed_in_higher, gauss_map_limit, lemma_ratio_check,
    lift_experiment, minkowski_residual, motion_stress_frame, spherical_sum_sample, trace_path,
    ConstraintValue, GaussSample, LiftOptions, LiftRecord, LiftReport, LiftSample,
    MinkowskiResidual, MotionPath, MotionStressFrame, MotionTrace, RatioSample, Smoothness,
    SumSampleStats, TraceSample,
};
pub use quadrature::{integrate_simplex, QuadConfig, QuadResult};
pub use sample::{
    random_degenerate_config, random_enclosing_config, random_full_simplex, random_on_space,
};
pub use space::{
    geodesic_distance, gram_norm, reflect_through_span, Curvature, LabeledPoint, SpaceForm,
    QUADRIC_TOL, RANK_REL_TOL,
};
pub use stress::{
    induce_k_stress, one_stress_residual, partition_sums, radon_partition, solve_one_stress,
    verify_stress_condition, Face, KStress, OneStress, PartitionCase, PartitionSums,
    RadonPartition,
};
pub use volume::{simplex_volume, simplex_volume_quadrature, sphere_volume, Volume};
