//! Strong blocking sets in small projective spaces over prime fields, and the
//! minimal linear codes they correspond to.
//!
//! The crate is organised around [`geometry::Geometry`], an immutable
//! incidence structure for PG(k-1, q) whose point subsets are single-word
//! bitmasks. On top of it sit the strong blocking set checks
//! ([`blocking`]), linear codes and their minimality ([`codes`]), the
//! GL(k,2) action and orbit classification ([`classify`]), and exhaustive
//! and randomized searches ([`search`]). [`format`] reads and writes the
//! plain-text point-set and generator-matrix files.

pub mod blocking;
pub mod classify;
pub mod codes;
pub mod combinatorics;
mod error;
pub mod format;
pub mod geometry;
pub mod search;

pub use error::{Error, Result};
pub use geometry::{build_geometry, Geometry, Mask, PointSet, Subspace};
