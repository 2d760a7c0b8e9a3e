//! Certified kinematic analysis of planar 3-RPR parallel manipulators.

pub mod error;
pub mod numeric;
pub mod poly;
pub mod model;
pub mod solver;
pub mod atlas;
