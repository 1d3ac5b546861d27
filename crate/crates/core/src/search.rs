//! Searches for strong blocking sets of a given size.
//!
//! * [`find_all_sbs`] enumerates every subset of the requested size.
//! * [`prove_nonexistence`] runs the pruned engine, which is complete: it
//!   returns every strong blocking set of the size, and an empty exhausted
//!   result is a proof that none exist. It branches on the cell `H \ L`
//!   (see [`crate::blocking`]) with the fewest usable points; a solution must
//!   take one of them, so branch `i` takes the `i`-th candidate and forbids
//!   the earlier ones, partitioning the solutions. A node is dropped when a
//!   cell has no usable point left or when more pairwise disjoint unhit
//!   cells remain than points still to be chosen.
//! * [`search_line_union`] samples unions of pairwise disjoint lines.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::blocking::{is_strong_blocking_set, is_strong_mask};
use crate::classify::thread_pool;
use crate::combinatorics::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::geometry::{bits, build_geometry, Geometry, Mask, PointSet};

pub const DEFAULT_EXHAUSTIVE_BUDGET: u64 = 1_000_000_000;
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// Environment variable overriding the default node/trial budget.
pub const BUDGET_ENV: &str = "STRONGBLOCK_BUDGET";

// work units are processed in fixed-size waves so that budget cut-offs do
// not depend on the number of workers
const WAVE: usize = 64;
const TARGET_UNITS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    PrunedExhaustive,
    RandomizedLineUnion,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Self::Exhaustive),
            "pruned" | "pruned-exhaustive" => Ok(Self::PrunedExhaustive),
            "line-union" | "randomized-line-union" => Ok(Self::RandomizedLineUnion),
            other => Err(Error::Unsupported(format!("unknown search mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub k: usize,
    pub q: u32,
    pub target_size: usize,
    pub mode: SearchMode,
    /// Node limit (pruned), subset limit (exhaustive) or trial limit (line union).
    pub budget: u64,
    pub seed: u64,
    /// 0 uses all available cores.
    pub workers: usize,
}

impl SearchConfig {
    pub fn new(k: usize, q: u32, target_size: usize, mode: SearchMode) -> Self {
        Self { k, q, target_size, mode, budget: default_budget(), seed: 0, workers: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::Unsupported("search budget must be positive".into()));
        }
        Ok(())
    }
}

/// Default node budget, from `STRONGBLOCK_BUDGET` when set.
pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&b| b > 0).unwrap_or(DEFAULT_NODE_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    /// Distinct strong blocking sets, in increasing mask order.
    pub found: Vec<PointSet>,
    pub nodes_explored: u64,
    /// True iff the whole search space was covered, so `found` is complete.
    pub exhausted: bool,
}

impl SearchResult {
    /// Re-check every found set with the rank-based verifier.
    pub fn verify_all(&self) -> bool {
        self.found.iter().all(|s| is_strong_blocking_set(s).is_strong)
    }
}

fn to_sets(geometry: &Arc<Geometry>, mut masks: Vec<Mask>) -> Vec<PointSet> {
    masks.sort_unstable();
    masks.dedup();
    masks.into_iter().map(|m| PointSet::new(geometry, m).expect("search stays in the geometry")).collect()
}

/// Every strong blocking set of `size` points, by plain enumeration.
pub fn find_all_sbs(geometry: &Arc<Geometry>, size: usize) -> Result<SearchResult> {
    find_all_sbs_with(geometry, size, DEFAULT_EXHAUSTIVE_BUDGET, 0)
}

pub fn find_all_sbs_with(geometry: &Arc<Geometry>, size: usize, budget: u64, workers: usize) -> Result<SearchResult> {
    let n = geometry.num_points();
    let total = binomial(n, size);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "exhaustive search (use the pruned mode)",
            required: total,
            budget: budget as u128,
        });
    }
    const CHUNK: u128 = 1 << 16;
    let chunks = total.div_ceil(CHUNK);
    let found: Vec<Mask> = thread_pool(workers).install(|| {
        (0..chunks)
            .into_par_iter()
            .flat_map_iter(|c| {
                let len = CHUNK.min(total - c * CHUNK) as usize;
                Combinations::from_rank(n, size, c * CHUNK)
                    .take(len)
                    .filter(|&m| is_strong_mask(geometry, m))
                    .collect::<Vec<_>>()
            })
            .collect()
    });
    Ok(SearchResult { found: to_sets(geometry, found), nodes_explored: total as u64, exhausted: true })
}

#[derive(Debug, Clone, Copy)]
struct Node {
    chosen: Mask,
    excluded: Mask,
    remaining: usize,
}

enum Step {
    Dead,
    /// Every cell is hit; any `remaining` of the allowed points complete a solution.
    Complete(Mask),
    /// Candidate points of the most constrained unhit cell.
    Branch(Mask),
}

struct Engine<'a> {
    cells: &'a [Mask],
    full: Mask,
}

impl Engine<'_> {
    #[inline]
    fn step(&self, node: &Node) -> Step {
        let allowed = self.full & !node.chosen & !node.excluded;
        let mut best = 0;
        let mut best_count = u32::MAX;
        let mut packed = 0;
        let mut packing = 0;
        for &cell in self.cells {
            if cell & node.chosen != 0 {
                continue;
            }
            let cand = cell & allowed;
            let count = cand.count_ones();
            if count == 0 {
                return Step::Dead;
            }
            if count < best_count {
                best_count = count;
                best = cand;
            }
            if cand & packed == 0 {
                packed |= cand;
                packing += 1;
            }
        }
        if best_count == u32::MAX {
            if (allowed.count_ones() as usize) < node.remaining {
                Step::Dead
            } else {
                Step::Complete(allowed)
            }
        } else if packing > node.remaining {
            Step::Dead
        } else {
            Step::Branch(best)
        }
    }

    fn children(node: Node, cand: Mask) -> impl Iterator<Item = Node> {
        let mut excluded = node.excluded;
        bits(cand).map(move |p| {
            let child = Node { chosen: node.chosen | 1 << p, excluded, remaining: node.remaining - 1 };
            excluded |= 1 << p;
            child
        })
    }

    fn complete(node: &Node, allowed: Mask, out: &mut Vec<Mask>) {
        let free: Vec<usize> = bits(allowed).collect();
        for pick in Combinations::new(free.len(), node.remaining) {
            out.push(bits(pick).fold(node.chosen, |m, i| m | 1 << free[i]));
        }
    }
}

struct Worker<'a> {
    engine: &'a Engine<'a>,
    nodes: u64,
    cap: u64,
    found: Vec<Mask>,
}

impl Worker<'_> {
    /// Depth-first search below `node`; false if the node cap was hit.
    fn explore(&mut self, node: Node) -> bool {
        self.nodes += 1;
        if self.nodes > self.cap {
            return false;
        }
        match self.engine.step(&node) {
            Step::Dead => true,
            Step::Complete(allowed) => {
                Engine::complete(&node, allowed, &mut self.found);
                true
            }
            Step::Branch(cand) => Engine::children(node, cand).all(|child| self.explore(child)),
        }
    }
}

/// Complete pruned search for strong blocking sets of `size` points.
pub fn prove_nonexistence(geometry: &Arc<Geometry>, size: usize, config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let engine = Engine { cells: geometry.cells(), full: geometry.full_mask() };
    let budget = config.budget;
    let mut nodes = 0u64;
    let mut found = Vec::new();

    // breadth-first split into independent work units
    let mut frontier = vec![Node { chosen: 0, excluded: 0, remaining: size }];
    while !frontier.is_empty() && frontier.len() < TARGET_UNITS {
        let mut next = Vec::new();
        for node in frontier {
            nodes += 1;
            match engine.step(&node) {
                Step::Dead => {}
                Step::Complete(allowed) => Engine::complete(&node, allowed, &mut found),
                Step::Branch(cand) => next.extend(Engine::children(node, cand)),
            }
        }
        frontier = next;
        if nodes > budget {
            return Ok(SearchResult { found: to_sets(geometry, found), nodes_explored: nodes, exhausted: false });
        }
    }

    let mut exhausted = true;
    thread_pool(config.workers).install(|| {
        for wave in frontier.chunks(WAVE) {
            let cap = budget.saturating_sub(nodes);
            let results: Vec<(bool, u64, Vec<Mask>)> = wave
                .par_iter()
                .map(|&unit| {
                    let mut w = Worker { engine: &engine, nodes: 0, cap, found: Vec::new() };
                    let complete = w.explore(unit);
                    (complete, w.nodes.min(cap), w.found)
                })
                .collect();
            for (complete, n, f) in results {
                nodes += n;
                found.extend(f);
                exhausted &= complete;
            }
            if !exhausted || nodes > budget {
                exhausted = false;
                break;
            }
        }
    });

    Ok(SearchResult { found: to_sets(geometry, found), nodes_explored: nodes, exhausted })
}

/// Union of the given lines, or `None` if two of them share a point.
pub fn disjoint_line_union(geometry: &Geometry, lines: &[usize]) -> Option<Mask> {
    let mut union = 0;
    for &l in lines {
        let m = geometry.lines()[l].member_mask();
        if m & union != 0 {
            return None;
        }
        union |= m;
    }
    Some(union)
}

/// Best-effort search over unions of `line_count` pairwise disjoint lines.
///
/// Worker `w` draws from a generator seeded with `seed + w` and runs its
/// share of `budget` trials; results are identical for a fixed seed and
/// worker count. `exhausted` is always false.
pub fn search_line_union(geometry: &Arc<Geometry>, line_count: usize, config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    if geometry.q() != 2 {
        return Err(Error::Unsupported("line-union search needs q = 2".into()));
    }
    let workers = if config.workers == 0 { rayon::current_num_threads() } else { config.workers };
    let lines = geometry.lines().len();
    let per_worker: Vec<u64> = (0..workers as u64)
        .map(|w| config.budget / workers as u64 + u64::from(w < config.budget % workers as u64))
        .collect();

    let found: Vec<Mask> = thread_pool(workers).install(|| {
        per_worker
            .par_iter()
            .enumerate()
            .flat_map_iter(|(w, &trials)| {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(w as u64));
                let mut hits = Vec::new();
                let mut picked = Vec::with_capacity(line_count);
                for _ in 0..trials {
                    picked.clear();
                    let mut union = 0;
                    for _ in 0..line_count * 16 {
                        if picked.len() == line_count {
                            break;
                        }
                        let l = rng.random_range(0..lines);
                        if let Some(u) = disjoint_line_union(geometry, &[l]).filter(|&m| m & union == 0) {
                            union |= u;
                            picked.push(l);
                        }
                    }
                    if picked.len() == line_count && is_strong_mask(geometry, union) {
                        hits.push(union);
                    }
                }
                hits
            })
            .collect()
    });

    Ok(SearchResult { found: to_sets(geometry, found), nodes_explored: config.budget, exhausted: false })
}

/// Run the search described by `config`.
pub fn run(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let geometry = build_geometry(config.k, config.q)?;
    match config.mode {
        SearchMode::Exhaustive => find_all_sbs_with(&geometry, config.target_size, config.budget, config.workers),
        SearchMode::PrunedExhaustive => prove_nonexistence(&geometry, config.target_size, config),
        SearchMode::RandomizedLineUnion => {
            let per_line = config.q as usize + 1;
            if !config.target_size.is_multiple_of(per_line) {
                return Err(Error::Unsupported(format!(
                    "target size {} is not a multiple of the line size {per_line}",
                    config.target_size
                )));
            }
            search_line_union(&geometry, config.target_size / per_line, config)
        }
    }
}
