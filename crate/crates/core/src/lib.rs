//! Constant-width bodies: Reuleaux polygons, ball polyhedra and their
//! surgered completions, support-function evaluation, and extremality
//! diagnostics.
//!
//! The crate is organized bottom-up:
//!
//! - [`geom`]: small fixed-size vectors, unit directions, spherical charts.
//! - [`tol`]: the tolerance bands every validation and check draws from.
//! - [`grid`]: antipode-closed direction grids from subdivided icosahedra.
//! - [`reuleaux2d`]: planar Reuleaux polygons and sampled polar fields.
//! - [`ballpoly3d`]: ball polyhedra of finite point sets, their edge
//!   combinatorics, and the extremal-set certificate.
//! - [`meissner3d`]: surgery on extremal ball polyhedra producing smooth-
//!   edged constant-width bodies, plus rotated planar bodies.
//! - [`support3d`]: support-function evaluation, analytic and numeric, with
//!   curvature data and Minkowski combination.
//! - [`extremality`]: curvature-based extremality diagnostics, perturbation
//!   probes, translation fitting, and constant-width validation.
//! - [`mesh`]: triangulated boundary meshes and file export.
//! - [`bodyspec`]: serializable body descriptions for the CLI.

pub mod ballpoly3d;
pub mod bodyspec;
pub mod error;
pub mod extremality;
pub mod geom;
pub mod grid;
pub mod meissner3d;
pub mod mesh;
pub mod reuleaux2d;
pub mod support3d;
pub mod tol;

pub use error::{CwError, Result};
pub use tol::Tolerances;
