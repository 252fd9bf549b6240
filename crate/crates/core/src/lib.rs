//! Exact coincidence invariants for maps from spheres into spheres,
//! projective spaces and Grassmannians of 2-planes.
//!
//! The layers build on each other:
//!
//! * [`abelian`] — finitely generated abelian groups, Smith normal form,
//!   kernels, images, quotients;
//! * [`homotopy_db`] — a validated table of homotopy groups of spheres with
//!   suspension, antipodal and boundary maps;
//! * [`fibration`] — homotopy groups of projective spaces and the boundary
//!   of their Stiefel fibrations;
//! * [`coincidence`] — looseness, Nielsen and minimum numbers, and the
//!   configuration-space filtration;
//! * [`cli`] — request/response types behind the `coincalc` binary.

pub mod abelian;
pub mod cli;
pub mod coincidence;

mod error;
pub mod fibration;
pub mod homotopy_db;
pub mod report;
pub mod trace;

pub use error::{Error, Result};
pub use homotopy_db::{Database, Field};
