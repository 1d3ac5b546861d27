//! The action of GL(k,2) on point sets of PG(k-1,2): canonical forms,
//! orbits, stabilizers, and the orbit classification of fixed-size subsets.
//!
//! Over GF(2) the scalar group is trivial, so GL(k,2) acts faithfully on
//! the points and coincides with PGL(k,2). Elements are kept as point
//! permutations; applying one to a mask is a walk over its set bits.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::blocking::{intersection_profile, is_strong_blocking_set};
use crate::combinatorics::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::geometry::{bits, Geometry, Mask, PointSet};

pub const DEFAULT_GROUP_BUDGET: u128 = 10_000_000;
pub const DEFAULT_SUBSET_BUDGET: u128 = 10_000_000;

/// Orbit sizes of the 9-point subsets of PG(3,2), largest class first in the
/// order the configurations are usually listed: quadrics, point plus plane
/// complement, plane plus two points, punctured plane plus a triple whose
/// plane misses / contains the removed point.
pub const PG32_NINE_POINT_ORBITS: [u64; 5] = [280, 105, 420, 1680, 2520];

/// |GL(k,2)| = (2^k - 1)(2^k - 2)...(2^k - 2^(k-1)).
pub fn gl_order(k: usize) -> u128 {
    (0..k).map(|i| (1u128 << k) - (1u128 << i)).product()
}

/// Multiset of hyperplane intersection sizes, as size → multiplicity.
pub type Signature = BTreeMap<usize, usize>;

pub fn intersection_signature(set: &PointSet) -> Signature {
    intersection_profile(set.geometry(), set.mask())
}

#[inline]
fn permute(perm: &[u8], mask: Mask) -> Mask {
    bits(mask).fold(0, |m, p| m | 1 << perm[p])
}

/// An invertible matrix over GF(2) with the permutation it induces on points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    k: usize,
    /// Column `j` is the image of the `j`-th unit vector, packed with
    /// coordinate 0 in the most significant of the `k` bits.
    columns: Vec<u32>,
    pub point_permutation: Vec<u8>,
}

impl GroupElement {
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        (0..self.k).map(|r| self.columns.iter().map(|&c| (c >> (self.k - 1 - r) & 1) as u8).collect()).collect()
    }

    pub fn apply(&self, mask: Mask) -> Mask {
        permute(&self.point_permutation, mask)
    }

    pub fn apply_set(&self, set: &PointSet) -> PointSet {
        set.with_mask(self.apply(set.mask()))
    }
}

fn require_binary(geometry: &Geometry) -> Result<()> {
    if geometry.q() != 2 {
        return Err(Error::Unsupported(format!(
            "group actions are implemented for q = 2 only, got q = {}",
            geometry.q()
        )));
    }
    Ok(())
}

fn induced_permutation(geometry: &Geometry, columns: &[u32]) -> Vec<u8> {
    let k = geometry.k();
    (0..geometry.num_points())
        .map(|p| {
            let code = geometry.code(p);
            let image = (0..k).filter(|j| code >> (k - 1 - j) & 1 == 1).fold(0, |acc, j| acc ^ columns[j]);
            geometry.index_of_code(image) as u8
        })
        .collect()
}

/// Sequences of linearly independent columns in lexicographic order.
struct IndependentColumns {
    k: usize,
    columns: Vec<u32>,
    // spans[j]: bitset over vectors of the span of columns[..j]
    spans: Vec<u64>,
    started: bool,
    done: bool,
}

impl IndependentColumns {
    fn new(k: usize) -> Self {
        Self { k, columns: vec![0; k], spans: vec![0; k + 1], started: false, done: false }
    }

    fn extend_span(span: u64, c: u32) -> u64 {
        bits(span).fold(span, |s, v| s | 1 << (v as u32 ^ c))
    }

    fn smallest_from(&self, j: usize, from: u32) -> Option<u32> {
        (from..1 << self.k).find(|&v| self.spans[j] >> v & 1 == 0)
    }

    fn fill_from(&mut self, j: usize) {
        for i in j..self.k {
            let c = self.smallest_from(i, 1).expect("a free vector exists below full rank");
            self.columns[i] = c;
            self.spans[i + 1] = Self::extend_span(self.spans[i], c);
        }
    }

    fn advance(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.spans[0] = 1;
            self.fill_from(0);
            return Some(&self.columns);
        }
        for j in (0..self.k).rev() {
            if let Some(c) = self.smallest_from(j, self.columns[j] + 1) {
                self.columns[j] = c;
                self.spans[j + 1] = Self::extend_span(self.spans[j], c);
                self.fill_from(j + 1);
                return Some(&self.columns);
            }
        }
        self.done = true;
        None
    }
}

/// Every element of GL(k,2) with its point permutation, each exactly once.
pub fn group_elements(geometry: &Geometry, budget: u128) -> Result<impl Iterator<Item = GroupElement> + '_> {
    require_binary(geometry)?;
    let k = geometry.k();
    let order = gl_order(k);
    if order > budget {
        return Err(Error::BudgetExceeded { what: "group enumeration", required: order, budget });
    }
    let mut cols = IndependentColumns::new(k);
    Ok(std::iter::from_fn(move || {
        let columns = cols.advance()?.to_vec();
        let point_permutation = induced_permutation(geometry, &columns);
        Some(GroupElement { k, columns, point_permutation })
    }))
}

/// GL(k,2) stored as flat point permutations.
pub struct PermutationGroup {
    geometry: Arc<Geometry>,
    order: usize,
    perms: Vec<u8>,
    columns: Vec<u32>,
}

impl PermutationGroup {
    pub fn new(geometry: &Arc<Geometry>) -> Result<Self> {
        Self::with_budget(geometry, DEFAULT_GROUP_BUDGET)
    }

    pub fn with_budget(geometry: &Arc<Geometry>, budget: u128) -> Result<Self> {
        let n = geometry.num_points();
        let k = geometry.k();
        let mut perms = Vec::new();
        let mut columns = Vec::new();
        let mut order = 0;
        for g in group_elements(geometry, budget)? {
            debug_assert_eq!(g.point_permutation.len(), n);
            perms.extend_from_slice(&g.point_permutation);
            columns.extend_from_slice(&g.columns);
            order += 1;
        }
        debug_assert_eq!(columns.len(), order * k);
        Ok(Self { geometry: Arc::clone(geometry), order, perms, columns })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn geometry(&self) -> &Arc<Geometry> {
        &self.geometry
    }

    pub fn permutations(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.perms.chunks_exact(self.geometry.num_points())
    }

    pub fn element(&self, i: usize) -> GroupElement {
        let n = self.geometry.num_points();
        let k = self.geometry.k();
        GroupElement {
            k,
            columns: self.columns[i * k..(i + 1) * k].to_vec(),
            point_permutation: self.perms[i * n..(i + 1) * n].to_vec(),
        }
    }

    pub fn apply(&self, i: usize, mask: Mask) -> Mask {
        let n = self.geometry.num_points();
        permute(&self.perms[i * n..(i + 1) * n], mask)
    }

    fn check(&self, set: &PointSet) -> Result<()> {
        if set.geometry() != &self.geometry {
            return Err(Error::GeometryMismatch);
        }
        Ok(())
    }

    /// Images of `mask` under every element, sorted and deduplicated.
    pub fn orbit(&self, mask: Mask) -> Vec<Mask> {
        let mut orbit: Vec<Mask> = self.permutations().map(|p| permute(p, mask)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }

    pub fn canonical_mask(&self, mask: Mask) -> Mask {
        self.permutations().map(|p| permute(p, mask)).min().unwrap_or(mask)
    }

    pub fn stabilizer_mask(&self, mask: Mask) -> usize {
        self.permutations().filter(|p| permute(p, mask) == mask).count()
    }
}

/// Smallest image mask of `set` under the group; equal iff same orbit.
pub fn canonical_form(set: &PointSet, group: &PermutationGroup) -> Result<PointSet> {
    group.check(set)?;
    Ok(set.with_mask(group.canonical_mask(set.mask())))
}

/// Number of group elements fixing `set` setwise.
pub fn stabilizer_order(set: &PointSet, group: &PermutationGroup) -> Result<usize> {
    group.check(set)?;
    Ok(group.stabilizer_mask(set.mask()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub representative: PointSet,
    pub orbit_size: u64,
    pub stabilizer_order: u64,
    pub signature: Signature,
    pub is_strong: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyConfig {
    pub subset_budget: u128,
    pub group_budget: u128,
    /// 0 uses all available cores.
    pub workers: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self { subset_budget: DEFAULT_SUBSET_BUDGET, group_budget: DEFAULT_GROUP_BUDGET, workers: 0 }
    }
}

pub(crate) fn thread_pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool")
}

/// Orbits of GL(k,2) on all `size`-subsets of the points, largest orbit
/// first, ties broken by signature.
pub fn classify_subsets(geometry: &Arc<Geometry>, size: usize, config: &ClassifyConfig) -> Result<Vec<OrbitReport>> {
    require_binary(geometry)?;
    let n = geometry.num_points();
    let total = binomial(n, size);
    if total > config.subset_budget {
        return Err(Error::BudgetExceeded {
            what: "subset classification",
            required: total,
            budget: config.subset_budget,
        });
    }
    let group = PermutationGroup::with_budget(geometry, config.group_budget)?;
    thread_pool(config.workers).install(|| classify_with_group(&group, size))
}

pub fn classify_with_group(group: &PermutationGroup, size: usize) -> Result<Vec<OrbitReport>> {
    let geometry = group.geometry();
    let n = geometry.num_points();
    let total = binomial(n, size);
    const CHUNK: u128 = 1 << 14;
    let chunks = total.div_ceil(CHUNK);

    let buckets = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local: HashMap<Signature, Vec<Mask>> = HashMap::new();
            let len = CHUNK.min(total - c * CHUNK) as usize;
            for m in Combinations::from_rank(n, size, c * CHUNK).take(len) {
                local.entry(intersection_profile(geometry, m)).or_default().push(m);
            }
            local
        })
        .reduce(HashMap::new, |mut a, b| {
            for (sig, masks) in b {
                a.entry(sig).or_default().extend(masks);
            }
            a
        });

    let mut buckets: Vec<(Signature, Vec<Mask>)> = buckets.into_iter().collect();
    buckets.sort_by(|a, b| a.0.cmp(&b.0));

    let per_bucket: Vec<Vec<OrbitReport>> = buckets
        .into_par_iter()
        .map(|(signature, mut masks)| {
            masks.sort_unstable();
            let mut assigned: HashSet<Mask> = HashSet::with_capacity(masks.len());
            let mut reports = Vec::new();
            for &m in &masks {
                if assigned.contains(&m) {
                    continue;
                }
                let orbit = group.orbit(m);
                for &o in &orbit {
                    debug_assert_eq!(intersection_profile(geometry, o), signature);
                    assigned.insert(o);
                }
                let representative = PointSet::new(geometry, orbit[0]).expect("orbit stays in the geometry");
                let is_strong = is_strong_blocking_set(&representative).is_strong;
                reports.push(OrbitReport {
                    stabilizer_order: group.stabilizer_mask(orbit[0]) as u64,
                    orbit_size: orbit.len() as u64,
                    signature: signature.clone(),
                    representative,
                    is_strong,
                });
            }
            reports
        })
        .collect();

    let mut reports: Vec<OrbitReport> = per_bucket.into_iter().flatten().collect();
    reports.sort_by(|a, b| {
        b.orbit_size
            .cmp(&a.orbit_size)
            .then_with(|| a.signature.cmp(&b.signature))
            .then_with(|| a.representative.mask().cmp(&b.representative.mask()))
    });
    Ok(reports)
}

/// Keep one representative per orbit, preserving first-seen order.
pub fn orbit_representatives(sets: &[PointSet], group: &PermutationGroup) -> Result<Vec<PointSet>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in sets {
        if seen.insert(canonical_form(s, group)?.mask()) {
            out.push(s.clone());
        }
    }
    Ok(out)
}

pub mod configurations {
    //! Explicit members of the five orbits of 9-point subsets of PG(3,2).

    use serde::Serialize;

    use super::*;
    use crate::blocking::lower_bound;
    use crate::geometry::hyperbolic_quadric;

    #[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
    pub enum NinePointType {
        /// Hyperbolic quadric.
        Quadric,
        /// A point P of a plane π together with the 8 points off π.
        PointAndPlaneComplement,
        /// A plane and two points off it.
        PlaneAndTwoPoints,
        /// π \ {P} with three points off π whose plane meets π in a line missing P.
        PuncturedPlaneLineMissesPoint,
        /// π \ {P} with three points off π whose plane meets π in a line through P.
        PuncturedPlaneLineThroughPoint,
    }

    impl NinePointType {
        pub const ALL: [NinePointType; 5] = [
            Self::Quadric,
            Self::PointAndPlaneComplement,
            Self::PlaneAndTwoPoints,
            Self::PuncturedPlaneLineMissesPoint,
            Self::PuncturedPlaneLineThroughPoint,
        ];

        pub fn expected_orbit_size(self) -> u64 {
            let i = Self::ALL.iter().position(|&t| t == self).expect("listed");
            PG32_NINE_POINT_ORBITS[i]
        }
    }

    fn require_pg32(geometry: &Geometry) -> Result<()> {
        geometry.check_is(4, 2)?;
        debug_assert_eq!(lower_bound(4, 2), 9);
        Ok(())
    }

    /// The line `span(triple) ∩ plane`, for a triple of points off the plane.
    pub fn trace_line(geometry: &Geometry, plane: Mask, triple: Mask) -> Mask {
        geometry.subspace(triple).expect("nonempty").member_mask() & plane
    }

    /// One member of each of the five classes, built from plane 0 and its
    /// lowest-indexed points.
    pub fn nine_point_witnesses(geometry: &Arc<Geometry>) -> Result<Vec<(NinePointType, PointSet)>> {
        require_pg32(geometry)?;
        let plane = geometry.hyperplane_masks()[0];
        let outside: Vec<usize> = bits(geometry.full_mask() & !plane).collect();
        let p = plane.trailing_zeros() as usize;
        let triple = 1 << outside[0] | 1 << outside[1] | 1 << outside[2];
        let line = trace_line(geometry, plane, triple);
        let p_off = bits(plane & !line).next().expect("plane has points off a line");
        let p_on = bits(line).next().expect("line is nonempty");
        let sets = [
            (NinePointType::Quadric, hyperbolic_quadric(geometry)?.mask()),
            (NinePointType::PointAndPlaneComplement, (geometry.full_mask() & !plane) | 1 << p),
            (NinePointType::PlaneAndTwoPoints, plane | 1 << outside[0] | 1 << outside[1]),
            (NinePointType::PuncturedPlaneLineMissesPoint, (plane & !(1 << p_off)) | triple),
            (NinePointType::PuncturedPlaneLineThroughPoint, (plane & !(1 << p_on)) | triple),
        ];
        sets.into_iter().map(|(t, m)| Ok((t, PointSet::new(geometry, m)?))).collect()
    }

    /// Tally of (plane π, point P ∈ π, triple off π) choices forming π \ {P} ∪ triple.
    #[derive(Debug, Clone, PartialEq, Eq, Serialize)]
    pub struct PuncturedPlaneCensus {
        pub raw_choices: u64,
        pub choices_line_misses_point: u64,
        pub choices_line_through_point: u64,
        pub distinct_sets_line_misses_point: u64,
        pub distinct_sets_line_through_point: u64,
    }

    pub fn punctured_plane_census(geometry: &Arc<Geometry>) -> Result<PuncturedPlaneCensus> {
        require_pg32(geometry)?;
        let mut census = PuncturedPlaneCensus {
            raw_choices: 0,
            choices_line_misses_point: 0,
            choices_line_through_point: 0,
            distinct_sets_line_misses_point: 0,
            distinct_sets_line_through_point: 0,
        };
        let mut misses = HashSet::new();
        let mut through = HashSet::new();
        for &plane in geometry.hyperplane_masks() {
            let outside = geometry.full_mask() & !plane;
            let off: Vec<usize> = bits(outside).collect();
            for triple in Combinations::new(off.len(), 3) {
                let triple_mask = bits(triple).fold(0, |m, i| m | 1 << off[i]);
                let line = trace_line(geometry, plane, triple_mask);
                for p in bits(plane) {
                    census.raw_choices += 1;
                    let set = (plane & !(1 << p)) | triple_mask;
                    if line >> p & 1 == 1 {
                        census.choices_line_through_point += 1;
                        through.insert(set);
                    } else {
                        census.choices_line_misses_point += 1;
                        misses.insert(set);
                    }
                }
            }
        }
        census.distinct_sets_line_misses_point = misses.len() as u64;
        census.distinct_sets_line_through_point = through.len() as u64;
        Ok(census)
    }
}
