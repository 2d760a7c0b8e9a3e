//! The 3-RPR manipulator: geometry, configurations and its polynomial
//! systems.
//!
//! The platform pose is `(B1x, B1y, tx, ty)`: the position of the first
//! platform joint and `(cos alpha, sin alpha)` of the platform orientation,
//! tied together by `tx^2 + ty^2 = 1`. With this parametrization every
//! constraint is polynomial:
//!
//! ```text
//! B2 = B1 + d1 (tx, ty)
//! B3 = B1 + d3 (tx bx - ty by, tx by + ty bx)      (bx, by) = (cos beta, sin beta)
//! E1 = |B1 - A1|^2 - r1^2
//! E2 = |B2 - A2|^2 - r2^2
//! E3 = |B3 - A3|^2 - r3^2
//! E4 = tx^2 + ty^2 - 1
//! ```

mod config;
mod geometry;
mod systems;

pub use config::parse_geometry_config;
pub use geometry::{
    beta_from_degrees, beta_from_sides, default_beta_tol, BetaFit, Geometry, Orientation,
};
pub use systems::{
    build_constraints, build_cusp_system, build_singular_system, constraint_residuals, inverse_kinematics,
    model_vars, Configuration, JointLengths, Pose, CUSP_UNKNOWNS, POSE_VARS,
};
