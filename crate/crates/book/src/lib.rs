//! The chapters of the book under `book/src`, one module each, so that
//! `cargo test --doc` compiles and runs every listing.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/numbers.md")]
pub mod numbers {}
#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}
#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}
#[doc = include_str!("../../../book/src/solver.md")]
pub mod solver {}
#[doc = include_str!("../../../book/src/direct_kinematics.md")]
pub mod direct_kinematics {}
#[doc = include_str!("../../../book/src/cusps.md")]
pub mod cusps {}
#[doc = include_str!("../../../book/src/singular_curves.md")]
pub mod singular_curves {}
#[doc = include_str!("../../../book/src/profile.md")]
pub mod profile {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
