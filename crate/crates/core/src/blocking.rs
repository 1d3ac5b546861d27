//! Strong blocking set verification and the PG(3,2) structural checks.
//!
//! A point set `S` is a strong blocking set when every hyperplane `H`
//! satisfies `span(S ∩ H) = H`. [`verify`] tests this directly with an
//! incremental rank computation per hyperplane. [`is_strong_mask`] is the
//! word-level form used by the search engines: `S ∩ H` fails to span `H`
//! exactly when it sits inside some codimension-2 subspace `L ⊂ H`, so `S`
//! is strong iff it meets every cell `H \ L`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{bits, Geometry, Mask, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportMode {
    /// Stop at the first failing hyperplane.
    #[default]
    ShortCircuit,
    /// Record every failing hyperplane.
    Total,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperplaneFailure {
    pub hyperplane: usize,
    /// Rank of `span(S ∩ H)`; the hyperplane itself has rank k-1.
    pub attained_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockingReport {
    pub is_strong: bool,
    pub failing_hyperplanes: Vec<HyperplaneFailure>,
    /// `|S ∩ H|` → number of hyperplanes with that intersection size.
    pub intersection_profile: BTreeMap<usize, usize>,
}

impl BlockingReport {
    pub fn profile_sum(&self) -> usize {
        self.intersection_profile.iter().map(|(size, count)| size * count).sum()
    }
}

/// `|S ∩ H|` for every hyperplane, as a size → count map.
pub fn intersection_profile(geometry: &Geometry, mask: Mask) -> BTreeMap<usize, usize> {
    let mut profile = BTreeMap::new();
    for &h in geometry.hyperplane_masks() {
        *profile.entry((h & mask).count_ones() as usize).or_insert(0) += 1;
    }
    profile
}

/// Strong blocking set check with short-circuit reporting.
pub fn is_strong_blocking_set(set: &PointSet) -> BlockingReport {
    verify(set, ReportMode::ShortCircuit)
}

pub fn verify(set: &PointSet, mode: ReportMode) -> BlockingReport {
    let geometry = set.geometry();
    let mask = set.mask();
    let target = geometry.k() - 1;
    let mut failing = Vec::new();
    for (index, &h) in geometry.hyperplane_masks().iter().enumerate() {
        let attained = geometry.rank_reaches(mask & h, target);
        if attained < target {
            failing.push(HyperplaneFailure { hyperplane: index, attained_rank: attained });
            if mode == ReportMode::ShortCircuit && mask != 0 {
                break;
            }
        }
    }
    BlockingReport {
        is_strong: failing.is_empty(),
        failing_hyperplanes: failing,
        intersection_profile: intersection_profile(geometry, mask),
    }
}

/// Word-level strong blocking set test over the geometry's cells.
#[inline]
pub fn is_strong_mask(geometry: &Geometry, mask: Mask) -> bool {
    geometry.cells().iter().all(|&c| c & mask != 0)
}

/// Lower bound `(k-1)(q+1)` on the size of a strong blocking set in PG(k-1, q).
pub fn lower_bound(k: usize, q: u32) -> usize {
    (k - 1) * (q as usize + 1)
}

fn require_pg32_nine(set: &PointSet) -> Result<()> {
    set.geometry().check_is(4, 2)?;
    if set.len() != 9 {
        return Err(Error::WrongSize { expected: 9, found: set.len() });
    }
    Ok(())
}

/// Lines of the geometry entirely contained in `mask`.
pub fn contained_lines(geometry: &Geometry, mask: Mask) -> Vec<Mask> {
    geometry.line_masks().filter(|&l| l & !mask == 0).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    /// Every plane meets S in at most 5 points.
    pub at_most_five: bool,
    /// Every plane through a line of S meets S in two concurrent lines of S.
    pub line_planes_are_line_pairs: bool,
    pub holds: bool,
    pub max_plane_intersection: usize,
    pub planes_over_five: Vec<usize>,
    pub bad_line_planes: Vec<usize>,
    pub intersection_profile: BTreeMap<usize, usize>,
}

/// Plane intersections of a 9-point set of PG(3,2): at most 5 points each, and
/// exactly two concurrent lines of S in every plane through a line of S.
pub fn check_lemma1(set: &PointSet) -> Result<Lemma1Report> {
    require_pg32_nine(set)?;
    let geometry = set.geometry();
    let mask = set.mask();
    let lines = contained_lines(geometry, mask);
    let mut planes_over_five = Vec::new();
    let mut bad_line_planes = Vec::new();
    let mut max_plane_intersection = 0;
    for (index, &plane) in geometry.hyperplane_masks().iter().enumerate() {
        let meet = plane & mask;
        let size = meet.count_ones() as usize;
        max_plane_intersection = max_plane_intersection.max(size);
        if size > 5 {
            planes_over_five.push(index);
        }
        let in_plane: Vec<Mask> = lines.iter().copied().filter(|&l| l & !plane == 0).collect();
        if in_plane.is_empty() {
            continue;
        }
        let two_lines = size == 5
            && in_plane
                .iter()
                .enumerate()
                .any(|(i, &a)| in_plane[i + 1..].iter().any(|&b| a | b == meet && (a & b).count_ones() == 1));
        if !two_lines {
            bad_line_planes.push(index);
        }
    }
    let at_most_five = planes_over_five.is_empty();
    let line_planes_are_line_pairs = bad_line_planes.is_empty();
    Ok(Lemma1Report {
        at_most_five,
        line_planes_are_line_pairs,
        holds: at_most_five && line_planes_are_line_pairs,
        max_plane_intersection,
        planes_over_five,
        bad_line_planes,
        intersection_profile: intersection_profile(geometry, mask),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma2Report {
    pub holds: bool,
    /// (point, number of lines of S through it), for every point of S.
    pub lines_through_point: Vec<(usize, usize)>,
    pub violating_points: Vec<usize>,
}

/// Every point of a 9-point set of PG(3,2) lies on exactly two lines of S.
pub fn check_lemma2(set: &PointSet) -> Result<Lemma2Report> {
    require_pg32_nine(set)?;
    let geometry = set.geometry();
    let lines = contained_lines(geometry, set.mask());
    let lines_through_point: Vec<(usize, usize)> =
        bits(set.mask()).map(|p| (p, lines.iter().filter(|&&l| l >> p & 1 == 1).count())).collect();
    let violating_points: Vec<usize> =
        lines_through_point.iter().filter(|(_, count)| *count != 2).map(|(p, _)| *p).collect();
    Ok(Lemma2Report { holds: violating_points.is_empty(), lines_through_point, violating_points })
}
