//! Quadrics of PG(3,2) and PG(4,2) as point sets.

use std::sync::Arc;

use super::{FieldElement, Geometry, Mask, PointSet};
use crate::error::Result;

/// Points of the geometry where the quadratic form vanishes.
pub fn zero_set<F>(geometry: &Arc<Geometry>, form: F) -> PointSet
where
    F: Fn(&[FieldElement]) -> FieldElement,
{
    let mask = geometry.points().iter().filter(|p| form(&p.coords) == 0).fold(0 as Mask, |m, p| m | 1 << p.index);
    PointSet::new(geometry, mask).expect("mask built from geometry points")
}

/// x0*x1 + x2*x3 over GF(2).
pub fn hyperbolic_form(x: &[FieldElement]) -> FieldElement {
    (x[0] & x[1]) ^ (x[2] & x[3])
}

/// x0^2 + x1*x2 + x3*x4 over GF(2).
pub fn parabolic_form(x: &[FieldElement]) -> FieldElement {
    x[0] ^ (x[1] & x[2]) ^ (x[3] & x[4])
}

/// The hyperbolic quadric Q+(3,2): zero set of x0*x1 + x2*x3 in PG(3,2).
pub fn hyperbolic_quadric(geometry: &Arc<Geometry>) -> Result<PointSet> {
    geometry.check_is(4, 2)?;
    Ok(zero_set(geometry, hyperbolic_form))
}

/// The parabolic quadric Q(4,2): zero set of x0^2 + x1*x2 + x3*x4 in PG(4,2).
pub fn parabolic_quadric(geometry: &Arc<Geometry>) -> Result<PointSet> {
    geometry.check_is(5, 2)?;
    Ok(zero_set(geometry, parabolic_form))
}
