use std::fmt;
use std::sync::Arc;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::{bits, FieldElement, Geometry, Mask};
use crate::error::{Error, Result};

/// A subset of the points of a geometry.
#[derive(Clone)]
pub struct PointSet {
    geometry: Arc<Geometry>,
    mask: Mask,
}

impl PointSet {
    pub fn new(geometry: &Arc<Geometry>, mask: Mask) -> Result<Self> {
        if mask & !geometry.full_mask() != 0 {
            return Err(Error::PointOutOfRange {
                index: (Mask::BITS - 1 - mask.leading_zeros()) as usize,
                points: geometry.num_points(),
            });
        }
        Ok(Self { geometry: Arc::clone(geometry), mask })
    }

    pub fn empty(geometry: &Arc<Geometry>) -> Self {
        Self { geometry: Arc::clone(geometry), mask: 0 }
    }

    pub fn full(geometry: &Arc<Geometry>) -> Self {
        Self { geometry: Arc::clone(geometry), mask: geometry.full_mask() }
    }

    pub fn from_indices(geometry: &Arc<Geometry>, indices: &[usize]) -> Result<Self> {
        let mut mask = 0;
        for &i in indices {
            if i >= geometry.num_points() {
                return Err(Error::PointOutOfRange { index: i, points: geometry.num_points() });
            }
            mask |= 1 << i;
        }
        Ok(Self { geometry: Arc::clone(geometry), mask })
    }

    /// Points given by coordinate vectors; any nonzero scalar multiple is accepted.
    pub fn from_coords<V: AsRef<[FieldElement]>>(geometry: &Arc<Geometry>, coords: &[V]) -> Result<Self> {
        let mut mask = 0;
        for v in coords {
            mask |= 1 << geometry.index_of(v.as_ref())?;
        }
        Ok(Self { geometry: Arc::clone(geometry), mask })
    }

    pub fn geometry(&self) -> &Arc<Geometry> {
        &self.geometry
    }

    pub fn mask(&self) -> Mask {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.geometry.num_points() && self.mask >> index & 1 == 1
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        bits(self.mask)
    }

    /// Normalized coordinates of the members, in canonical order.
    pub fn coords(&self) -> Vec<Vec<FieldElement>> {
        self.indices().map(|i| self.geometry.point(i).coords.clone()).collect()
    }

    pub fn with_mask(&self, mask: Mask) -> Self {
        debug_assert_eq!(mask & !self.geometry.full_mask(), 0);
        Self { geometry: Arc::clone(&self.geometry), mask }
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.same_geometry(other)?;
        Ok(self.with_mask(self.mask | other.mask))
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet> {
        self.same_geometry(other)?;
        Ok(self.with_mask(self.mask & other.mask))
    }

    fn same_geometry(&self, other: &PointSet) -> Result<()> {
        if self.geometry == other.geometry {
            Ok(())
        } else {
            Err(Error::GeometryMismatch)
        }
    }

    /// Rank of the span of the members.
    pub fn rank(&self) -> usize {
        self.geometry.rank_of(self.mask)
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask && self.geometry == other.geometry
    }
}

impl Eq for PointSet {}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PointSet", 4)?;
        st.serialize_field("k", &self.geometry.k())?;
        st.serialize_field("q", &self.geometry.q())?;
        st.serialize_field("indices", &self.indices().collect::<Vec<_>>())?;
        st.serialize_field("points", &self.coords())?;
        st.end()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.geometry)?;
        f.debug_set().entries(self.indices()).finish()
    }
}
