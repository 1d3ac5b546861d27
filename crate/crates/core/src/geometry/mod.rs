//! Projective spaces PG(k-1, q) over prime fields, with precomputed incidence.
//!
//! Points are indexed in lexicographic order of their normalized coordinate
//! vectors (first nonzero coordinate equal to 1), reading each vector as a
//! base-q integer with the first coordinate most significant. Every point
//! subset is a [`Mask`]: bit `i` set means point `i` is a member. Hyperplane
//! `i` is the zero set of the linear form whose coefficients are the
//! coordinates of point `i`, so hyperplanes share the point ordering.

pub mod field;
pub mod linalg;
mod pointset;
pub mod quadric;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

pub use field::{is_prime, FieldElement, PrimeField};
pub use linalg::{rank_gf, EchelonBasis, Gf2Basis, RowEchelon};
pub use pointset::PointSet;
pub use quadric::{hyperbolic_quadric, parabolic_quadric};

use crate::error::{Error, Result};

/// Bitmask over point indices.
pub type Mask = u64;

/// Incidence masks are single machine words.
pub const MAX_POINTS: usize = Mask::BITS as usize;

#[inline]
pub(crate) fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Upper bounds enforced by [`Geometry::build_with_limits`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeometryLimits {
    pub max_k: usize,
    pub max_q: u32,
}

impl Default for GeometryLimits {
    fn default() -> Self {
        Self { max_k: 8, max_q: 7 }
    }
}

/// A point of PG(k-1, q).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    pub index: usize,
    pub coords: Vec<FieldElement>,
}

/// A projective subspace given by a reduced basis and its member points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    k: usize,
    q: u32,
    basis: Vec<Vec<FieldElement>>,
    member_mask: Mask,
}

impl Subspace {
    /// Projective dimension: 0 for a point, 1 for a line, k-2 for a hyperplane.
    pub fn dim_projective(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<FieldElement>] {
        &self.basis
    }

    pub fn member_mask(&self) -> Mask {
        self.member_mask
    }

    pub fn len(&self) -> usize {
        self.member_mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.member_mask == 0
    }

    pub fn contains_point(&self, index: usize) -> bool {
        index < MAX_POINTS && self.member_mask >> index & 1 == 1
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.member_mask & !self.member_mask == 0
    }
}

/// The projective space PG(k-1, q) with its full incidence structure.
pub struct Geometry {
    k: usize,
    field: PrimeField,
    points: Vec<ProjPoint>,
    // base-q integer of each point's normalized coordinates
    codes: Vec<u32>,
    // any nonzero vector code -> index of its projective point
    lookup: Vec<u8>,
    lines: Vec<Subspace>,
    hyperplanes: Vec<Subspace>,
    hyperplane_masks: Vec<Mask>,
    lines_through: Vec<Vec<usize>>,
    coline_masks: Vec<Mask>,
    cells: Vec<Mask>,
}

impl fmt::Debug for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PG({},{})", self.k - 1, self.q())
    }
}

impl PartialEq for Geometry {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.field == other.field
    }
}

impl Eq for Geometry {}

/// Number of points of PG(k-1, q).
pub fn point_count(k: usize, q: u32) -> u128 {
    let q = q as u128;
    (0..k).map(|i| q.pow(i as u32)).sum()
}

/// Build PG(k-1, q) under the default limits.
pub fn build_geometry(k: usize, q: u32) -> Result<Arc<Geometry>> {
    Geometry::build(k, q).map(Arc::new)
}

impl Geometry {
    pub fn build(k: usize, q: u32) -> Result<Self> {
        Self::build_with_limits(k, q, &GeometryLimits::default())
    }

    pub fn build_with_limits(k: usize, q: u32, limits: &GeometryLimits) -> Result<Self> {
        let field = PrimeField::new(q)?;
        if k < 2 {
            return Err(Error::InvalidDimension(k));
        }
        let too_large = |reason: String| Error::GeometryTooLarge { projective_dim: k - 1, q, reason };
        if k > limits.max_k {
            return Err(too_large(format!("k = {k} exceeds the cap of {}", limits.max_k)));
        }
        if q > limits.max_q {
            return Err(too_large(format!("q = {q} exceeds the cap of {}", limits.max_q)));
        }
        let n = point_count(k, q);
        if n > MAX_POINTS as u128 {
            return Err(too_large(format!("{n} points do not fit the {MAX_POINTS}-bit incidence masks")));
        }

        let total = q.pow(k as u32);
        let mut points = Vec::with_capacity(n as usize);
        let mut codes = Vec::with_capacity(n as usize);
        for code in 1..total {
            let coords = decode(code, k, q);
            if coords.iter().find(|&&x| x != 0) == Some(&1) {
                codes.push(code);
                points.push(ProjPoint { index: points.len(), coords });
            }
        }
        debug_assert_eq!(points.len() as u128, n);

        let mut lookup = vec![u8::MAX; total as usize];
        for p in &points {
            for lambda in field.units() {
                lookup[encode(&field.scale(&p.coords, lambda), q) as usize] = p.index as u8;
            }
        }

        let mut geometry = Self {
            k,
            field,
            points,
            codes,
            lookup,
            lines: Vec::new(),
            hyperplanes: Vec::new(),
            hyperplane_masks: Vec::new(),
            lines_through: Vec::new(),
            coline_masks: Vec::new(),
            cells: Vec::new(),
        };

        geometry.hyperplane_masks = geometry
            .points
            .iter()
            .map(|dual| {
                geometry
                    .points
                    .iter()
                    .filter(|p| field.dot(&dual.coords, &p.coords) == 0)
                    .fold(0, |m, p| m | 1 << p.index)
            })
            .collect();
        geometry.hyperplanes = geometry
            .hyperplane_masks
            .iter()
            .map(|&m| geometry.span_mask(m).expect("hyperplanes are nonempty"))
            .collect();

        let n = geometry.points.len();
        let mut covered: HashSet<Mask> = HashSet::new();
        let mut lines = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let pair = 1 << i | 1 << j;
                if lines.iter().any(|l: &Subspace| l.member_mask & pair == pair) {
                    continue;
                }
                let line = geometry.span_mask(pair).expect("nonempty");
                if covered.insert(line.member_mask) {
                    lines.push(line);
                }
            }
        }
        geometry.lines_through = (0..n)
            .map(|p| lines.iter().enumerate().filter(|(_, l)| l.contains_point(p)).map(|(i, _)| i).collect())
            .collect();
        geometry.lines = lines;

        // codimension-2 subspaces; for k = 2 this is the empty subspace
        let mut seen = HashSet::new();
        let mut colines = Vec::new();
        for (a, &ha) in geometry.hyperplane_masks.iter().enumerate() {
            for &hb in &geometry.hyperplane_masks[a + 1..] {
                if seen.insert(ha & hb) {
                    colines.push(ha & hb);
                }
            }
        }
        geometry.cells = colines
            .iter()
            .flat_map(|&l| geometry.hyperplane_masks.iter().filter(move |&&h| h & l == l).map(move |&h| h & !l))
            .collect();
        geometry.coline_masks = colines;

        Ok(geometry)
    }

    /// Dimension of the underlying vector space.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn projective_dim(&self) -> usize {
        self.k - 1
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn full_mask(&self) -> Mask {
        if self.points.len() == MAX_POINTS {
            Mask::MAX
        } else {
            (1 << self.points.len()) - 1
        }
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn point(&self, index: usize) -> &ProjPoint {
        &self.points[index]
    }

    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    pub fn hyperplanes(&self) -> &[Subspace] {
        &self.hyperplanes
    }

    /// Membership table: bit `p` of entry `h` is set iff point `p` lies on hyperplane `h`.
    pub fn hyperplane_masks(&self) -> &[Mask] {
        &self.hyperplane_masks
    }

    pub fn line_masks(&self) -> impl Iterator<Item = Mask> + '_ {
        self.lines.iter().map(Subspace::member_mask)
    }

    /// Member masks of the codimension-2 subspaces.
    pub fn coline_masks(&self) -> &[Mask] {
        &self.coline_masks
    }

    /// The sets `H \ L` for every hyperplane `H` and codimension-2 subspace
    /// `L ⊂ H`. A point set meets every hyperplane in a spanning set iff it
    /// meets every one of these cells.
    pub fn cells(&self) -> &[Mask] {
        &self.cells
    }

    pub(crate) fn code(&self, index: usize) -> u32 {
        self.codes[index]
    }

    /// Index of the projective point of a nonzero vector (any scalar multiple).
    pub fn index_of(&self, coords: &[FieldElement]) -> Result<usize> {
        if coords.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, found: coords.len() });
        }
        for &c in coords {
            self.field.check(c as u32)?;
        }
        let code = encode(coords, self.q());
        if code == 0 {
            return Err(Error::ZeroVector);
        }
        Ok(self.lookup[code as usize] as usize)
    }

    /// Index of the point of a nonzero vector packed as a base-q integer.
    pub(crate) fn index_of_code(&self, code: u32) -> usize {
        self.lookup[code as usize] as usize
    }

    /// Rank of the span of the points in `mask`.
    pub fn rank_of(&self, mask: Mask) -> usize {
        self.rank_reaches(mask, usize::MAX)
    }

    /// Incremental rank of `mask`, stopping as soon as `target` is reached.
    pub fn rank_reaches(&self, mask: Mask, target: usize) -> usize {
        if self.q() == 2 {
            let mut basis = Gf2Basis::new();
            for p in bits(mask) {
                basis.insert(self.codes[p]);
                if basis.rank() >= target {
                    break;
                }
            }
            basis.rank()
        } else {
            let mut basis = EchelonBasis::new(self.field, self.k);
            for p in bits(mask) {
                basis.insert(&self.points[p].coords);
                if basis.rank() >= target {
                    break;
                }
            }
            basis.rank()
        }
    }

    fn span_mask(&self, mask: Mask) -> Result<Subspace> {
        if mask == 0 {
            return Err(Error::EmptySpan);
        }
        let mut basis = EchelonBasis::new(self.field, self.k);
        for p in bits(mask) {
            basis.insert(&self.points[p].coords);
        }
        let member_mask = self.points.iter().filter(|p| basis.contains(&p.coords)).fold(0, |m, p| m | 1 << p.index);
        Ok(Subspace { k: self.k, q: self.q(), basis: basis.into_echelon().basis, member_mask })
    }

    /// Smallest subspace containing the given points.
    pub fn span(&self, points: &PointSet) -> Result<Subspace> {
        if points.geometry().as_ref() != self {
            return Err(Error::GeometryMismatch);
        }
        self.span_mask(points.mask())
    }

    /// The subspace spanned by the points of `mask`.
    pub fn subspace(&self, mask: Mask) -> Result<Subspace> {
        if mask & !self.full_mask() != 0 {
            return Err(Error::ForeignSubspace);
        }
        self.span_mask(mask)
    }

    fn check_own(&self, sub: &Subspace) -> Result<()> {
        let own = sub.k == self.k
            && sub.q == self.q()
            && sub.member_mask & !self.full_mask() == 0
            && sub.member_mask != 0
            && self.span_mask(sub.member_mask)?.member_mask == sub.member_mask;
        if own {
            Ok(())
        } else {
            Err(Error::ForeignSubspace)
        }
    }

    /// Indices of the hyperplanes containing `sub`, in increasing order.
    pub fn pencil_through(&self, sub: &Subspace) -> Result<Vec<usize>> {
        self.check_own(sub)?;
        Ok(self
            .hyperplane_masks
            .iter()
            .enumerate()
            .filter(|(_, &h)| h & sub.member_mask == sub.member_mask)
            .map(|(i, _)| i)
            .collect())
    }

    /// Indices of the lines through a point, in increasing order.
    pub fn lines_through(&self, point: usize) -> &[usize] {
        &self.lines_through[point]
    }

    /// Indices of the hyperplanes through a point.
    pub fn hyperplanes_through(&self, point: usize) -> Vec<usize> {
        self.hyperplane_masks.iter().enumerate().filter(|(_, &h)| h >> point & 1 == 1).map(|(i, _)| i).collect()
    }

    pub(crate) fn check_is(&self, k: usize, q: u32) -> Result<()> {
        if self.k == k && self.q() == q {
            Ok(())
        } else {
            Err(Error::WrongGeometry { expected_dim: k - 1, expected_q: q, found_dim: self.k - 1, found_q: self.q() })
        }
    }
}

fn decode(mut code: u32, k: usize, q: u32) -> Vec<FieldElement> {
    let mut v = vec![0; k];
    for x in v.iter_mut().rev() {
        *x = (code % q) as FieldElement;
        code /= q;
    }
    v
}

fn encode(v: &[FieldElement], q: u32) -> u32 {
    v.iter().fold(0, |acc, &x| acc * q + x as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_binomial(n: u32, r: u32, q: u128) -> u128 {
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 0..r {
            num *= q.pow(n - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        num / den
    }

    #[test]
    fn pg32_census() {
        let g = build_geometry(4, 2).unwrap();
        assert_eq!(g.num_points(), 15);
        assert_eq!(g.lines().len(), 35);
        assert_eq!(g.hyperplanes().len(), 15);
        for p in 0..15 {
            assert_eq!(g.lines_through(p).len(), 7);
            assert_eq!(g.hyperplanes_through(p).len(), 7);
        }
        for line in g.lines() {
            assert_eq!(line.len(), 3);
            assert_eq!(line.dim_projective(), 1);
            assert_eq!(g.pencil_through(line).unwrap().len(), 3);
        }
        for h in g.hyperplanes() {
            assert_eq!(h.len(), 7);
            assert_eq!(h.dim_projective(), 2);
        }
    }

    #[test]
    fn point_counts() {
        assert_eq!(build_geometry(3, 2).unwrap().num_points(), 7);
        let g = build_geometry(5, 2).unwrap();
        assert_eq!(g.num_points(), 31);
        assert_eq!(g.hyperplanes().len(), 31);
        assert_eq!(build_geometry(6, 2).unwrap().num_points(), 63);
        assert_eq!(build_geometry(3, 3).unwrap().num_points(), 13);
    }

    #[test]
    fn incidence_counts_match_gaussian_binomials() {
        for (k, q) in [(2usize, 2u32), (3, 2), (4, 2), (5, 2), (6, 2), (3, 3), (4, 3), (3, 5), (3, 7)] {
            let g = build_geometry(k, q).unwrap();
            let qq = q as u128;
            assert_eq!(g.num_points() as u128, gaussian_binomial(k as u32, 1, qq));
            assert_eq!(g.lines().len() as u128, gaussian_binomial(k as u32, 2, qq));
            assert_eq!(g.hyperplanes().len(), g.num_points());
            for l in g.lines() {
                assert_eq!(l.len() as u32, q + 1);
            }
            if k >= 3 {
                assert_eq!(g.coline_masks().len() as u128, gaussian_binomial(k as u32, 2, qq));
            }
            assert_eq!(g.cells().len(), g.coline_masks().len() * (q as usize + 1));
            for &c in g.cells() {
                assert_eq!(c.count_ones(), q.pow(k as u32 - 2));
            }
        }
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let g = build_geometry(3, 3).unwrap();
        let coords: Vec<_> = g.points().iter().map(|p| p.coords.clone()).collect();
        let mut sorted = coords.clone();
        sorted.sort();
        assert_eq!(coords, sorted);
        assert_eq!(coords[0], vec![0, 0, 1]);
        assert_eq!(coords[12], vec![1, 2, 2]);
        assert_eq!(g.index_of(&[0, 2, 2]).unwrap(), g.index_of(&[0, 1, 1]).unwrap());
        assert_eq!(g.index_of(&[0, 0, 0]), Err(Error::ZeroVector));
    }

    #[test]
    fn hyperplane_table_agrees_with_dot_products() {
        for (k, q) in [(4usize, 2u32), (3, 5), (4, 3)] {
            let g = build_geometry(k, q).unwrap();
            let f = g.field();
            for (h, &mask) in g.hyperplane_masks().iter().enumerate() {
                for p in g.points() {
                    let on = f.dot(&g.point(h).coords, &p.coords) == 0;
                    assert_eq!(mask >> p.index & 1 == 1, on);
                }
            }
        }
    }

    #[test]
    fn span_examples() {
        let g = build_geometry(4, 2).unwrap();
        let one = PointSet::from_indices(&g, &[3]).unwrap();
        let s = g.span(&one).unwrap();
        assert_eq!((s.dim_projective(), s.len()), (0, 1));
        let two = PointSet::from_indices(&g, &[0, 5]).unwrap();
        let s = g.span(&two).unwrap();
        assert_eq!((s.dim_projective(), s.len()), (1, 3));
        let e = [vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]];
        let three = PointSet::from_coords(&g, &e).unwrap();
        let s = g.span(&three).unwrap();
        assert_eq!((s.dim_projective(), s.len()), (2, 7));
        let empty = PointSet::empty(&g);
        assert_eq!(g.span(&empty), Err(Error::EmptySpan));
    }

    #[test]
    fn three_noncollinear_points_close_to_a_plane() {
        // brute-force closure: keep adding the third point of every line through two members
        let g = build_geometry(4, 2).unwrap();
        let start: Mask = 1 << 0 | 1 << 1 | 1 << 3;
        let mut closure = start;
        loop {
            let mut next = closure;
            for l in g.line_masks() {
                if (l & closure).count_ones() >= 2 {
                    next |= l;
                }
            }
            if next == closure {
                break;
            }
            closure = next;
        }
        assert_eq!(closure.count_ones(), 7);
        assert_eq!(g.subspace(start).unwrap().member_mask(), closure);
    }

    #[test]
    fn pencils() {
        let g = build_geometry(4, 2).unwrap();
        let p = g.subspace(1 << 4).unwrap();
        assert_eq!(g.pencil_through(&p).unwrap().len(), 7);
        assert_eq!(g.lines_through(4).len(), 7);
        let fano = build_geometry(3, 2).unwrap();
        for p in 0..7 {
            assert_eq!(fano.lines_through(p).len(), 3);
        }
        let foreign = fano.subspace(1).unwrap();
        assert_eq!(g.pencil_through(&foreign), Err(Error::ForeignSubspace));
    }

    #[test]
    fn limits() {
        assert_eq!(build_geometry(4, 4).unwrap_err(), Error::NotPrime(4));
        assert_eq!(build_geometry(1, 2).unwrap_err(), Error::InvalidDimension(1));
        assert!(matches!(build_geometry(7, 2), Err(Error::GeometryTooLarge { .. })));
        assert!(matches!(build_geometry(3, 11), Err(Error::GeometryTooLarge { .. })));
        let tight = GeometryLimits { max_k: 3, max_q: 7 };
        assert!(matches!(Geometry::build_with_limits(4, 2, &tight), Err(Error::GeometryTooLarge { .. })));
    }
}
