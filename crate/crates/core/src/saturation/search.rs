//! Minimum saturated set search: exhaustive sweep, branch-and-bound with
//! symmetry canonization, and greedy maximal construction.
//!
//! Determinism contract: for a fixed (domain, kind, mode, budget, seed) the
//! returned set, size, and status are identical run to run and do not depend
//! on the rayon thread count. Unbudgeted branch-and-bound finishes with a
//! witness pass that re-derives the lexicographically least optimal set, so
//! the parallel phase only has to establish the optimal size. Budgeted runs
//! execute sequentially for exact reproducibility of the explored region.

use std::sync::atomic::{AtomicU32, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cover::CoverState;
use super::{CopyMode, SaturationKind};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::rng::rng_from;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exact,
    BranchBound,
    Greedy,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    ProvedOptimal,
    BestFound,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best_set: PointSet,
    pub best_size: u32,
    pub status: SearchStatus,
    pub nodes_explored: u64,
    pub wall_time: Duration,
}

/// Largest point count the exhaustive mode accepts.
pub const EXACT_LIMIT: u32 = 25;

const CHECKPOINT_VERSION: u32 = 1;

/// Serialized branch-and-bound state. `path` is the current chain of chosen
/// point indices (strictly increasing); `cursors[d]` is the next candidate
/// index to try at depth d, one entry longer than `path`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchCheckpoint {
    pub version: u32,
    pub domain: Domain,
    pub kind: SaturationKind,
    pub seed: u64,
    pub canonize: bool,
    pub budget: Option<u64>,
    pub path: Vec<u32>,
    pub cursors: Vec<u32>,
    pub best_hex: Option<String>,
    pub best_size: Option<u32>,
    pub nodes_explored: u64,
}

pub fn save_checkpoint(cp: &SearchCheckpoint) -> String {
    serde_json::to_string_pretty(cp).expect("checkpoint serializes")
}

pub fn load_checkpoint(text: &str) -> Result<SearchCheckpoint> {
    let cp: SearchCheckpoint =
        serde_json::from_str(text).map_err(|e| Error::BadCheckpoint(e.to_string()))?;
    if cp.version != CHECKPOINT_VERSION {
        return Err(Error::BadCheckpoint(format!(
            "version {} unsupported (expected {CHECKPOINT_VERSION})",
            cp.version
        )));
    }
    let n = cp.domain.point_count();
    if cp.cursors.len() != cp.path.len() + 1 {
        return Err(Error::BadCheckpoint(
            "cursor stack must be one longer than the path".into(),
        ));
    }
    if !cp.path.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::BadCheckpoint("path indices must increase".into()));
    }
    if cp.path.iter().any(|&i| i >= n) || cp.cursors.iter().any(|&c| c > n) {
        return Err(Error::BadCheckpoint("index out of domain range".into()));
    }
    if cp.path.iter().zip(&cp.cursors).any(|(&p, &c)| c <= p) {
        return Err(Error::BadCheckpoint(
            "cursors lag behind their chosen indices".into(),
        ));
    }
    match (&cp.best_hex, cp.best_size) {
        (Some(hex), Some(size)) => {
            let set = PointSet::from_hex(cp.domain, hex)
                .map_err(|e| Error::BadCheckpoint(format!("best set: {e}")))?;
            if set.len() != size {
                return Err(Error::BadCheckpoint(
                    "recorded best size disagrees with the bitset".into(),
                ));
            }
        }
        (None, None) => {}
        _ => {
            return Err(Error::BadCheckpoint(
                "best_hex and best_size must be present together".into(),
            ));
        }
    }
    Ok(cp)
}

/// Periodic checkpoint emission: `sink` receives a snapshot roughly every
/// `interval` explored nodes, and always once more if the budget stops the
/// search early.
pub struct CheckpointConfig<'a> {
    pub interval: u64,
    pub sink: &'a mut dyn FnMut(&SearchCheckpoint),
}

/// Maximal configuration-free set grown in a seeded random point order.
/// Maximality makes the result saturated: every skipped point was already
/// covered when visited, and coverage only grows.
fn greedy_set(domain: Domain, kind: SaturationKind, seed: u64) -> PointSet {
    let n = domain.point_count();
    let mut order: Vec<u32> = (0..n).collect();
    order.shuffle(&mut rng_from(seed));
    let mut cov = CoverState::new(domain, kind, CopyMode::Similar);
    for q in order {
        if !cov.is_covered(q) {
            cov.add(q);
        }
    }
    debug_assert_eq!(cov.uncovered_outside(), 0);
    cov.to_point_set()
}

/// Lexicographically next m-combination of 0..n, in place.
fn next_combination(c: &mut [u32], n: u32) -> bool {
    let m = c.len();
    let mut i = m;
    while i > 0 {
        i -= 1;
        if c[i] < n - (m - i) as u32 {
            c[i] += 1;
            for j in i + 1..m {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn exact_search(
    domain: Domain,
    kind: SaturationKind,
    budget: Option<u64>,
    seed: u64,
) -> Result<SearchResult> {
    let n = domain.point_count();
    if n > EXACT_LIMIT {
        return Err(Error::ExactLimitExceeded {
            points: n,
            limit: EXACT_LIMIT,
        });
    }
    let start = Instant::now();
    let mut nodes = 0u64;
    for m in 0..=n {
        let mut combo: Vec<u32> = (0..m).collect();
        loop {
            if budget.is_some_and(|b| nodes >= b) {
                let set = greedy_set(domain, kind, seed);
                return Ok(SearchResult {
                    best_size: set.len(),
                    best_set: set,
                    status: SearchStatus::BestFound,
                    nodes_explored: nodes,
                    wall_time: start.elapsed(),
                });
            }
            nodes += 1;
            let mut set = PointSet::empty(domain);
            for &i in &combo {
                set.insert_index(i as usize);
            }
            if super::check_saturated(&set, kind).is_saturated {
                return Ok(SearchResult {
                    best_size: m,
                    best_set: set,
                    status: SearchStatus::ProvedOptimal,
                    nodes_explored: nodes,
                    wall_time: start.elapsed(),
                });
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    unreachable!("every maximal configuration-free set is saturated, so the sweep always finds one")
}

/// Permutation tables for the config-preserving symmetry group, point index
/// to point index. Empty when the table would be unreasonably large, which
/// silently disables canonization (still correct, just slower).
pub(crate) fn symmetry_perms(domain: &Domain, mode: CopyMode) -> Vec<Vec<u32>> {
    const MAX_ENTRIES: u64 = 8_000_000;
    let n = domain.point_count() as u64;
    let mut perms = Vec::new();
    match *domain {
        Domain::PrimePlane { p } => {
            // Maps z -> u*z + t and z -> u*conj(z) + t with u an invertible
            // Gaussian. Axis-parallel configurations survive only u in
            // {1, -1} (plain) and u in {i, -i} (conjugated: i*conj is the
            // coordinate swap).
            let mut unit_maps: Vec<(u32, u32, bool)> = Vec::new();
            match mode {
                CopyMode::Similar => {
                    for a in 0..p {
                        for b in 0..p {
                            if (a * a + b * b) % p == 0 {
                                continue;
                            }
                            unit_maps.push((a, b, false));
                            unit_maps.push((a, b, true));
                        }
                    }
                }
                CopyMode::AxisParallel => {
                    unit_maps.extend([
                        (1, 0, false),
                        (p - 1, 0, false),
                        (0, 1, true),
                        (0, p - 1, true),
                    ]);
                }
            }
            let group = unit_maps.len() as u64 * n;
            if group * n > MAX_ENTRIES {
                return Vec::new();
            }
            let p64 = u64::from(p);
            for &(a, b, conj) in &unit_maps {
                let (a, b) = (u64::from(a), u64::from(b));
                for tx in 0..p64 {
                    for ty in 0..p64 {
                        let mut perm = vec![0u32; n as usize];
                        for (idx, slot) in perm.iter_mut().enumerate() {
                            let pt = domain.point_at(idx);
                            let (x, mut y) = (u64::from(pt.x), u64::from(pt.y));
                            if conj {
                                y = (p64 - y) % p64;
                            }
                            let nx = (a * x + (p64 - b) * y) % p64;
                            let ny = (a * y + b * x) % p64;
                            let fx = (nx + tx) % p64;
                            let fy = (ny + ty) % p64;
                            *slot = (fy * p64 + fx) as u32;
                        }
                        perms.push(perm);
                    }
                }
            }
        }
        Domain::IntegerGrid { n: side } => {
            let s = side - 1;
            type M = fn(u32, u32, u32) -> (u32, u32);
            let all: [M; 8] = [
                |x, y, _| (x, y),
                |x, y, s| (s - y, x),
                |x, y, s| (s - x, s - y),
                |x, y, s| (y, s - x),
                |x, y, s| (s - x, y),
                |x, y, s| (x, s - y),
                |x, y, _| (y, x),
                |x, y, s| (s - y, s - x),
            ];
            // Rotations by 90 degrees and single-axis reflections break
            // axis-parallel corners; the half-turn and the transposes do not.
            let maps: &[M] = match mode {
                CopyMode::Similar => &all,
                CopyMode::AxisParallel => &[all[0], all[2], all[6], all[7]],
            };
            for map in maps {
                let mut perm = vec![0u32; n as usize];
                for (idx, slot) in perm.iter_mut().enumerate() {
                    let pt = domain.point_at(idx);
                    let (x, y) = map(pt.x, pt.y, s);
                    *slot = y * side + x;
                }
                perms.push(perm);
            }
        }
    }
    perms
}

enum RunOutcome {
    Exhausted,
    BudgetHit,
}

struct Explorer<'a> {
    domain: Domain,
    kind: SaturationKind,
    seed: u64,
    canonize: bool,
    budget: Option<u64>,
    n: u32,
    requires_free: bool,
    cov: CoverState,
    path: Vec<u32>,
    cursors: Vec<u32>,
    undos: Vec<Vec<u32>>,
    root_depth: usize,
    perms: &'a [Vec<u32>],
    buf: Vec<u32>,
    nodes: u64,
    best_size: u32,
    best_set: PointSet,
    shared: Option<&'a AtomicU32>,
    next_ckpt: u64,
}

fn atomic_min(a: &AtomicU32, v: u32) {
    let mut cur = a.load(Ordering::Relaxed);
    while v < cur {
        match a.compare_exchange_weak(cur, v, Ordering::Relaxed, Ordering::Relaxed) {
            Ok(_) => break,
            Err(c) => cur = c,
        }
    }
}

impl<'a> Explorer<'a> {
    fn new(
        domain: Domain,
        kind: SaturationKind,
        seed: u64,
        canonize: bool,
        budget: Option<u64>,
        perms: &'a [Vec<u32>],
        incumbent: PointSet,
    ) -> Self {
        Explorer {
            domain,
            kind,
            seed,
            canonize,
            budget,
            n: domain.point_count(),
            requires_free: kind.requires_free(),
            cov: CoverState::new(domain, kind, CopyMode::Similar),
            path: Vec::new(),
            cursors: vec![0],
            undos: Vec::new(),
            root_depth: 0,
            perms,
            buf: Vec::new(),
            nodes: 0,
            best_size: incumbent.len(),
            best_set: incumbent,
            shared: None,
            next_ckpt: u64::MAX,
        }
    }

    fn push(&mut self, i: u32) {
        let undo = self.cov.add(i);
        self.path.push(i);
        self.undos.push(undo);
    }

    fn pop(&mut self) {
        let undo = self.undos.pop().expect("pop matches a push");
        self.cov.remove_last(undo);
        self.path.pop();
    }

    fn effective_best(&self) -> u32 {
        match self.shared {
            Some(a) => a.load(Ordering::Relaxed).min(self.best_size),
            None => self.best_size,
        }
    }

    /// The current path is canonical when no symmetry maps it to a strictly
    /// lex-smaller sorted index sequence. Prefix-canonical chains cover every
    /// orbit: the orbit's lex-least member has all its prefixes canonical.
    fn path_is_canonical(&mut self) -> bool {
        for perm in self.perms {
            self.buf.clear();
            self.buf
                .extend(self.path.iter().map(|&i| perm[i as usize]));
            self.buf.sort_unstable();
            if self.buf.as_slice() < self.path.as_slice() {
                return false;
            }
        }
        true
    }

    /// Admissible completion bound: the set must reach this size before all
    /// currently uncovered points can be covered, since a point is covered
    /// through a pair with at least one new member and each pair covers at
    /// most six points.
    fn lower_bound(&self) -> u32 {
        let s = self.path.len() as u64;
        let u = u64::from(self.cov.uncovered_outside());
        let base = s * s.saturating_sub(1);
        let mut t = s;
        loop {
            t += 1;
            if 3 * (t * (t - 1) - base) >= u {
                return t as u32;
            }
        }
    }

    fn to_checkpoint(&self) -> SearchCheckpoint {
        SearchCheckpoint {
            version: CHECKPOINT_VERSION,
            domain: self.domain,
            kind: self.kind,
            seed: self.seed,
            canonize: self.canonize,
            budget: self.budget,
            path: self.path.clone(),
            cursors: self.cursors.clone(),
            best_hex: Some(self.best_set.to_hex()),
            best_size: Some(self.best_size),
            nodes_explored: self.nodes,
        }
    }

    /// DFS over increasing index chains. In normal mode records improvements
    /// into best_set/best_size; in witness mode (`witness = Some(limit)`)
    /// returns the first — lexicographically least — solution of size at
    /// most `limit`.
    fn run(
        &mut self,
        witness: Option<u32>,
        checkpoint: &mut Option<CheckpointConfig<'_>>,
    ) -> (RunOutcome, Option<PointSet>) {
        loop {
            let depth = self.path.len();
            debug_assert_eq!(self.cursors.len(), depth + 1);
            if let Some(c) = checkpoint.as_mut() {
                if self.nodes >= self.next_ckpt {
                    let cp = self.to_checkpoint();
                    (c.sink)(&cp);
                    self.next_ckpt = self.nodes + c.interval;
                }
            }
            let i = self.cursors[depth];
            if i >= self.n {
                if depth == self.root_depth {
                    return (RunOutcome::Exhausted, None);
                }
                self.pop();
                self.cursors.pop();
                continue;
            }
            self.cursors[depth] = i + 1;
            if self.requires_free && self.cov.is_covered(i) {
                continue;
            }
            if self.budget.is_some_and(|b| self.nodes >= b) {
                return (RunOutcome::BudgetHit, None);
            }
            self.nodes += 1;
            self.push(i);
            if self.canonize && !self.path_is_canonical() {
                self.pop();
                continue;
            }
            if self.cov.uncovered_outside() == 0 {
                let size = self.path.len() as u32;
                match witness {
                    Some(limit) => {
                        debug_assert!(size <= limit);
                        let set = self.cov.to_point_set();
                        return (RunOutcome::Exhausted, Some(set));
                    }
                    None => {
                        if size < self.effective_best() {
                            self.best_size = size;
                            self.best_set = self.cov.to_point_set();
                            if let Some(a) = self.shared {
                                atomic_min(a, size);
                            }
                        }
                    }
                }
                self.pop();
                continue;
            }
            let lb = self.lower_bound();
            let prune = match witness {
                Some(limit) => lb > limit,
                None => lb >= self.effective_best(),
            };
            if prune {
                self.pop();
                continue;
            }
            self.cursors.push(i + 1);
        }
    }
}

/// Lexicographically least saturated set of size at most `limit`, over
/// canonical chains when `perms` is nonempty. The limit must be achievable.
fn witness_pass(
    domain: Domain,
    kind: SaturationKind,
    seed: u64,
    canonize: bool,
    perms: &[Vec<u32>],
    limit: u32,
    incumbent: &PointSet,
) -> (PointSet, u64) {
    let mut ex = Explorer::new(domain, kind, seed, canonize, None, perms, incumbent.clone());
    let (_, found) = ex.run(Some(limit), &mut None);
    debug_assert!(found.is_some(), "witness limit must be achievable");
    (found.unwrap_or_else(|| incumbent.clone()), ex.nodes)
}

/// Branch-and-bound minimum saturated set search.
///
/// `canonize` toggles symmetry pruning (results are identical either way).
/// With `budget: None` and no checkpointing the root subtrees run on the
/// rayon pool sharing an atomic size bound, then a sequential witness pass
/// re-derives the lexicographically least optimal set, making the outcome
/// thread-count independent. A node budget or a checkpoint/resume request
/// forces the fully sequential path. On a budget stop the final state is
/// flushed to the checkpoint sink, and the best set seen so far (at worst
/// the greedy incumbent) is returned as BestFound.
pub fn branch_bound_search(
    domain: Domain,
    kind: SaturationKind,
    budget: Option<u64>,
    seed: u64,
    canonize: bool,
    resume: Option<SearchCheckpoint>,
    mut checkpoint: Option<CheckpointConfig<'_>>,
) -> Result<SearchResult> {
    let start = Instant::now();
    let perms_storage = if canonize {
        symmetry_perms(&domain, CopyMode::Similar)
    } else {
        Vec::new()
    };
    let perms = perms_storage.as_slice();
    let incumbent = greedy_set(domain, kind, seed);

    if let Some(cp) = &resume {
        if cp.domain != domain || cp.kind != kind {
            return Err(Error::BadCheckpoint(
                "checkpoint was produced for a different search".into(),
            ));
        }
        if cp.seed != seed || cp.canonize != canonize || cp.budget != budget {
            return Err(Error::BadCheckpoint(
                "checkpoint parameters (seed/canonize/budget) disagree with the request".into(),
            ));
        }
    }

    if budget.is_none() && resume.is_none() && checkpoint.is_none() {
        return Ok(parallel_branch_bound(
            domain, kind, seed, canonize, perms, incumbent, start,
        ));
    }

    // Sequential path: reproducible node-by-node, checkpointable.
    let mut ex = Explorer::new(domain, kind, seed, canonize, budget, perms, incumbent);
    if let Some(cp) = resume {
        for &i in &cp.path {
            if ex.requires_free && ex.cov.is_covered(i) {
                return Err(Error::BadCheckpoint(
                    "checkpoint path contains a forbidden configuration".into(),
                ));
            }
            ex.push(i);
        }
        ex.cursors = cp.cursors.clone();
        ex.nodes = cp.nodes_explored;
        if let (Some(hex), Some(size)) = (&cp.best_hex, cp.best_size) {
            ex.best_set = PointSet::from_hex(domain, hex)
                .map_err(|e| Error::BadCheckpoint(format!("best set: {e}")))?;
            ex.best_size = size;
        }
    }
    if let Some(c) = &checkpoint {
        ex.next_ckpt = ex.nodes + c.interval;
    }
    let (outcome, _) = ex.run(None, &mut checkpoint);
    match outcome {
        RunOutcome::Exhausted => {
            let mut nodes = ex.nodes;
            let (best_set, best_size) = if budget.is_none() {
                let (w, wn) =
                    witness_pass(domain, kind, seed, canonize, perms, ex.best_size, &ex.best_set);
                nodes += wn;
                let size = w.len();
                (w, size)
            } else {
                (ex.best_set, ex.best_size)
            };
            Ok(SearchResult {
                best_set,
                best_size,
                status: SearchStatus::ProvedOptimal,
                nodes_explored: nodes,
                wall_time: start.elapsed(),
            })
        }
        RunOutcome::BudgetHit => {
            if let Some(c) = checkpoint.as_mut() {
                let cp = ex.to_checkpoint();
                (c.sink)(&cp);
            }
            Ok(SearchResult {
                best_set: ex.best_set,
                best_size: ex.best_size,
                status: SearchStatus::BestFound,
                nodes_explored: ex.nodes,
                wall_time: start.elapsed(),
            })
        }
    }
}

/// Unbudgeted run: depth-2 canonical prefixes become independent tasks that
/// share only the atomic best-size bound, with a witness pass at the end.
fn parallel_branch_bound(
    domain: Domain,
    kind: SaturationKind,
    seed: u64,
    canonize: bool,
    perms: &[Vec<u32>],
    incumbent: PointSet,
    start: Instant,
) -> SearchResult {
    let n = domain.point_count();
    let shared = AtomicU32::new(incumbent.len());
    let mut gen_nodes = 0u64;
    let mut tasks: Vec<(u32, u32)> = Vec::new();
    {
        let mut ex = Explorer::new(
            domain,
            kind,
            seed,
            canonize,
            None,
            perms,
            incumbent.clone(),
        );
        for i in 0..n {
            gen_nodes += 1;
            ex.push(i);
            if canonize && !ex.path_is_canonical() {
                ex.pop();
                continue;
            }
            if ex.cov.uncovered_outside() == 0 {
                atomic_min(&shared, 1);
                ex.pop();
                continue;
            }
            if ex.lower_bound() < shared.load(Ordering::Relaxed) {
                for j in i + 1..n {
                    if ex.requires_free && ex.cov.is_covered(j) {
                        continue;
                    }
                    gen_nodes += 1;
                    ex.push(j);
                    if canonize && !ex.path_is_canonical() {
                        ex.pop();
                        continue;
                    }
                    if ex.cov.uncovered_outside() == 0 {
                        atomic_min(&shared, 2);
                    } else if ex.lower_bound() < shared.load(Ordering::Relaxed) {
                        tasks.push((i, j));
                    }
                    ex.pop();
                }
            }
            ex.pop();
        }
    }

    let task_nodes: u64 = tasks
        .par_iter()
        .map(|&(i, j)| {
            let mut ex = Explorer::new(
                domain,
                kind,
                seed,
                canonize,
                None,
                perms,
                incumbent.clone(),
            );
            ex.shared = Some(&shared);
            ex.best_size = shared.load(Ordering::Relaxed);
            ex.push(i);
            ex.push(j);
            ex.root_depth = 2;
            ex.cursors = vec![n, n, j + 1];
            // Tasks were vetted at generation; re-check under the possibly
            // improved bound before exploring.
            if ex.lower_bound() >= ex.effective_best() {
                return 0u64;
            }
            let (_, _) = ex.run(None, &mut None);
            if ex.best_size < shared.load(Ordering::Relaxed) {
                atomic_min(&shared, ex.best_size);
            }
            ex.nodes
        })
        .sum();

    let optimal = shared.load(Ordering::Relaxed).min(incumbent.len());
    let (best_set, witness_nodes) =
        witness_pass(domain, kind, seed, canonize, perms, optimal, &incumbent);
    SearchResult {
        best_size: best_set.len(),
        best_set,
        status: SearchStatus::ProvedOptimal,
        nodes_explored: gen_nodes + task_nodes + witness_nodes,
        wall_time: start.elapsed(),
    }
}

/// Minimum saturated set search dispatch.
///
/// Exact: ascending-cardinality exhaustive sweep (domains of at most
/// [`EXACT_LIMIT`] points), every subset vetted by the independent checker.
/// BranchBound: DFS with the six-per-pair covering bound and symmetry
/// canonization. Greedy: one seeded maximal-growth pass, never proved.
/// The budget caps explored nodes; a stopped search reports BestFound and
/// still returns a genuinely saturated set (at worst the greedy incumbent).
pub fn min_saturated_search(
    domain: Domain,
    kind: SaturationKind,
    mode: SearchMode,
    budget: Option<u64>,
    seed: u64,
) -> Result<SearchResult> {
    match mode {
        SearchMode::Greedy => {
            let start = Instant::now();
            let set = greedy_set(domain, kind, seed);
            Ok(SearchResult {
                best_size: set.len(),
                best_set: set,
                status: SearchStatus::BestFound,
                nodes_explored: u64::from(domain.point_count()),
                wall_time: start.elapsed(),
            })
        }
        SearchMode::Exact => exact_search(domain, kind, budget, seed),
        SearchMode::BranchBound => {
            branch_bound_search(domain, kind, budget, seed, true, None, None)
        }
    }
}
