//! Maximum configuration-free sets: exact branch-and-bound at desk scale and
//! a seeded tabu search for everything larger, plus batch density tables.

use num::rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::configs::{
    corner_completions, count_corners, count_matrix_pattern, count_squares,
    square_diagonal_completions, square_edge_completions, PatternSpec,
};
use crate::domain::{Domain, GridVector};
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::rng::{derive_seed, rng_from};
use crate::saturation::{symmetry_perms, CopyMode, CoverState, SaturationKind};
use rand::seq::SliceRandom;
use rand::Rng;

/// Which configuration the set must avoid.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalKind {
    Corner,
    Square,
    MatrixPattern(PatternSpec),
}

impl ExtremalKind {
    pub fn label(&self) -> &'static str {
        match self {
            ExtremalKind::Corner => "corner",
            ExtremalKind::Square => "square",
            ExtremalKind::MatrixPattern(_) => "matrix_pattern",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalMode {
    Exact,
    Heuristic,
}

/// Outcome of a maximum-free-set search. `density` is the exact fraction
/// max_size_found / point_count.
#[derive(Clone, Debug)]
pub struct ExtremalRecord {
    pub domain: Domain,
    pub kind: ExtremalKind,
    pub max_size_found: u32,
    pub proved: bool,
    pub example_set: PointSet,
    pub density: Ratio<u64>,
}

/// Largest point count the exact mode accepts (branch-and-bound with
/// symmetry canonization; at most [`EXACT_PLAIN_LIMIT`] points it runs as a
/// plain exhaustive DFS).
pub const EXACT_MAX_LIMIT: u32 = 49;
pub const EXACT_PLAIN_LIMIT: u32 = 25;

const TABU_TENURE: u64 = 7;
const RESTARTS: u64 = 8;
const DEFAULT_HEURISTIC_MOVES: u64 = 20_000;
/// Canonicity is only checked on prefixes up to this depth: pruning fewer
/// duplicate branches stays exhaustive, and deep checks cost more than they
/// save.
const CANON_DEPTH: usize = 4;

/// Incremental "would adding this point create a configuration" flags with
/// stack-discipline undo. Corner/Square reuse the saturation bookkeeping;
/// matrix patterns get their own parameter scan.
enum FreeCover {
    Pair(CoverState),
    Matrix(MatrixCover),
}

impl FreeCover {
    fn new(domain: Domain, kind: &ExtremalKind) -> FreeCover {
        match kind {
            ExtremalKind::Corner => {
                FreeCover::Pair(CoverState::new(domain, SaturationKind::Corner, CopyMode::Similar))
            }
            ExtremalKind::Square => {
                FreeCover::Pair(CoverState::new(domain, SaturationKind::Square, CopyMode::Similar))
            }
            ExtremalKind::MatrixPattern(spec) => FreeCover::Matrix(MatrixCover::new(domain, spec)),
        }
    }

    fn is_covered(&self, idx: u32) -> bool {
        match self {
            FreeCover::Pair(c) => c.is_covered(idx),
            FreeCover::Matrix(c) => c.covered[idx as usize],
        }
    }

    fn add(&mut self, q: u32) -> Vec<u32> {
        match self {
            FreeCover::Pair(c) => c.add(q),
            FreeCover::Matrix(c) => c.add(q),
        }
    }

    fn remove_last(&mut self, undo: Vec<u32>) {
        match self {
            FreeCover::Pair(c) => c.remove_last(undo),
            FreeCover::Matrix(c) => c.remove_last(undo),
        }
    }

    fn to_point_set(&self) -> PointSet {
        match self {
            FreeCover::Pair(c) => c.to_point_set(),
            FreeCover::Matrix(c) => {
                let mut s = PointSet::empty(c.domain);
                for &m in &c.members {
                    s.insert_index(m as usize);
                }
                s
            }
        }
    }
}

struct MatrixCover {
    domain: Domain,
    p: u32,
    mats: Vec<crate::configs::Mat2>,
    in_set: Vec<bool>,
    covered: Vec<bool>,
    members: Vec<u32>,
}

impl MatrixCover {
    fn new(domain: Domain, spec: &PatternSpec) -> Self {
        let n = domain.point_count() as usize;
        let p = spec.p;
        MatrixCover {
            domain,
            p,
            mats: spec.mats.clone(),
            in_set: vec![false; n],
            covered: vec![false; n],
            members: Vec::new(),
        }
    }

    /// Points newly covered by instances through q: parameters (x, y) whose
    /// instance contains q and misses exactly one other point.
    fn add(&mut self, q: u32) -> Vec<u32> {
        let d = &self.domain;
        let p = self.p as i64;
        let qpt = d.point_at(q as usize);
        let mut cands: Vec<u32> = Vec::new();
        for dy in 0..p {
            for dx in 0..p {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let y = GridVector::new(dx, dy);
                // q in the base-point role.
                let mut miss: Option<u32> = None;
                let mut many = false;
                for m in &self.mats {
                    let t = d.add(qpt, m.mul_vec(y, self.p)).expect("mod-p add");
                    let ti = d.index(t) as u32;
                    if !self.in_set[ti as usize] && ti != q {
                        match miss {
                            None => miss = Some(ti),
                            Some(prev) if prev == ti => {}
                            Some(_) => {
                                many = true;
                                break;
                            }
                        }
                    }
                }
                if !many {
                    if let Some(c) = miss {
                        cands.push(c);
                    }
                }
                // q in an offset role.
                for j in 0..self.mats.len() {
                    let v = self.mats[j].mul_vec(y, self.p);
                    let x = d
                        .add(qpt, GridVector::new(-v.dx, -v.dy))
                        .expect("mod-p add");
                    let xi = d.index(x) as u32;
                    let mut miss: Option<u32> = None;
                    let mut many = false;
                    if !self.in_set[xi as usize] && xi != q {
                        miss = Some(xi);
                    }
                    for (l, m) in self.mats.iter().enumerate() {
                        if l == j {
                            continue;
                        }
                        let t = d.add(x, m.mul_vec(y, self.p)).expect("mod-p add");
                        let ti = d.index(t) as u32;
                        if !self.in_set[ti as usize] && ti != q {
                            match miss {
                                None => miss = Some(ti),
                                Some(prev) if prev == ti => {}
                                Some(_) => {
                                    many = true;
                                    break;
                                }
                            }
                        }
                    }
                    if !many {
                        if let Some(c) = miss {
                            cands.push(c);
                        }
                    }
                }
            }
        }
        let mut flipped = Vec::new();
        for c in cands {
            let ci = c as usize;
            if !self.covered[ci] {
                self.covered[ci] = true;
                flipped.push(c);
            }
        }
        self.in_set[q as usize] = true;
        self.members.push(q);
        flipped
    }

    fn remove_last(&mut self, flipped: Vec<u32>) {
        let q = self.members.pop().expect("remove matches an add");
        self.in_set[q as usize] = false;
        for c in flipped {
            self.covered[c as usize] = false;
        }
    }
}

/// Stateless "would adding q create a configuration with members of s"
/// check, used where arbitrary removals make incremental flags unusable.
fn creates_config(q: u32, s: &PointSet, kind: &ExtremalKind) -> bool {
    let d = s.domain();
    let qpt = d.point_at(q as usize);
    match kind {
        ExtremalKind::Corner => s.iter().any(|a| {
            corner_completions(qpt, a, &d)
                .map(|cs| cs.iter().any(|&c| s.contains(c)))
                .unwrap_or(false)
        }),
        ExtremalKind::Square => s.iter().any(|a| {
            if let Ok(Some((u, v))) = square_diagonal_completions(qpt, a, &d) {
                if s.contains(u) && s.contains(v) {
                    return true;
                }
            }
            square_edge_completions(qpt, a, &d)
                .map(|pairs| pairs.iter().any(|&(u, v)| s.contains(u) && s.contains(v)))
                .unwrap_or(false)
        }),
        ExtremalKind::MatrixPattern(spec) => {
            let p = spec.p as i64;
            for dy in 0..p {
                for dx in 0..p {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let y = GridVector::new(dx, dy);
                    let offsets: Vec<_> =
                        spec.mats.iter().map(|m| m.mul_vec(y, spec.p)).collect();
                    if offsets
                        .iter()
                        .all(|&v| s.contains(d.add(qpt, v).expect("mod-p add")))
                    {
                        return true;
                    }
                    for j in 0..offsets.len() {
                        let v = offsets[j];
                        let x = d
                            .add(qpt, GridVector::new(-v.dx, -v.dy))
                            .expect("mod-p add");
                        if !s.contains(x) {
                            continue;
                        }
                        if offsets.iter().enumerate().all(|(l, &w)| {
                            l == j || {
                                let t = d.add(x, w).expect("mod-p add");
                                t == qpt || s.contains(t)
                            }
                        }) {
                            return true;
                        }
                    }
                }
            }
            false
        }
    }
}

/// Random maximal configuration-free set (initial incumbent for both modes).
fn greedy_free(domain: Domain, kind: &ExtremalKind, seed: u64) -> PointSet {
    let n = domain.point_count();
    let mut order: Vec<u32> = (0..n).collect();
    order.shuffle(&mut rng_from(seed));
    let mut cov = FreeCover::new(domain, kind);
    for q in order {
        if !cov.is_covered(q) {
            cov.add(q);
        }
    }
    cov.to_point_set()
}

fn validate_kind(domain: Domain, kind: &ExtremalKind) -> Result<()> {
    if let ExtremalKind::MatrixPattern(spec) = kind {
        match domain {
            Domain::PrimePlane { p } if p == spec.p => {}
            Domain::PrimePlane { p } => {
                return Err(Error::DomainMismatch(format!(
                    "pattern is over F_{}, domain is F_{p}",
                    spec.p
                )))
            }
            Domain::IntegerGrid { .. } => {
                return Err(Error::DomainMismatch(
                    "matrix patterns act mod p; use a prime plane".into(),
                ))
            }
        }
    }
    Ok(())
}

/// DFS maximum-free-set search over increasing indices. Prunes with
/// |current| + |still addable| and (shallow) symmetry canonization; exact
/// when it exhausts the tree within budget.
fn exact_max(
    domain: Domain,
    kind: &ExtremalKind,
    budget: Option<u64>,
    seed: u64,
) -> Result<(PointSet, bool)> {
    let n = domain.point_count();
    if n > EXACT_MAX_LIMIT {
        return Err(Error::ExactLimitExceeded {
            points: n,
            limit: EXACT_MAX_LIMIT,
        });
    }
    let perms = if n > EXACT_PLAIN_LIMIT {
        symmetry_perms(&domain, CopyMode::Similar)
    } else {
        Vec::new()
    };
    let mut best_set = greedy_free(domain, kind, seed);
    let mut best = best_set.len();
    let mut cov = FreeCover::new(domain, kind);
    let mut cursors: Vec<u32> = vec![0];
    let mut undos: Vec<Vec<u32>> = Vec::new();
    let mut path: Vec<u32> = Vec::new();
    let mut buf: Vec<u32> = Vec::new();
    let mut nodes = 0u64;
    let mut exhausted = true;
    loop {
        let depth = path.len();
        let i = cursors[depth];
        if i >= n {
            if depth == 0 {
                break;
            }
            cov.remove_last(undos.pop().expect("undo per push"));
            path.pop();
            cursors.pop();
            continue;
        }
        cursors[depth] = i + 1;
        if cov.is_covered(i) {
            continue;
        }
        if budget.is_some_and(|b| nodes >= b) {
            exhausted = false;
            break;
        }
        nodes += 1;
        undos.push(cov.add(i));
        path.push(i);
        let mut canonical = true;
        if path.len() <= CANON_DEPTH {
            for perm in &perms {
                buf.clear();
                buf.extend(path.iter().map(|&ix| perm[ix as usize]));
                buf.sort_unstable();
                if buf.as_slice() < path.as_slice() {
                    canonical = false;
                    break;
                }
            }
        }
        if !canonical {
            cov.remove_last(undos.pop().expect("undo per push"));
            path.pop();
            continue;
        }
        let size = path.len() as u32;
        if size > best {
            best = size;
            best_set = cov.to_point_set();
        }
        let addable = (i + 1..n).filter(|&j| !cov.is_covered(j)).count() as u32;
        if size + addable <= best {
            cov.remove_last(undos.pop().expect("undo per push"));
            path.pop();
            continue;
        }
        cursors.push(i + 1);
    }
    Ok((best_set, exhausted))
}

/// One tabu run: add a random admissible point while possible; when stuck,
/// kick out one or two random members and bar them for [`TABU_TENURE`]
/// moves. Every improvement on the best size is recorded.
fn tabu_restart(domain: Domain, kind: &ExtremalKind, moves: u64, seed: u64) -> PointSet {
    let n = domain.point_count();
    let mut rng = rng_from(seed);
    let mut current = greedy_free(domain, kind, derive_seed(seed, 0xD1CE));
    let mut members: Vec<u32> = current.iter_indices().map(|i| i as u32).collect();
    let mut tabu_until = vec![0u64; n as usize];
    let mut best = current.clone();
    let mut order: Vec<u32> = (0..n).collect();
    for it in 0..moves {
        order.shuffle(&mut rng);
        let mut added = false;
        for &q in &order {
            if current.contains_index(q as usize) || tabu_until[q as usize] > it {
                continue;
            }
            if !creates_config(q, &current, kind) {
                current.insert_index(q as usize);
                members.push(q);
                added = true;
                break;
            }
        }
        if added {
            if members.len() as u32 > best.len() {
                best = current.clone();
            }
            continue;
        }
        let kicks = (1 + rng.random_range(0..2u32)).min(members.len() as u32);
        for _ in 0..kicks {
            let ix = rng.random_range(0..members.len());
            let q = members.swap_remove(ix);
            current.remove_index(q as usize);
            tabu_until[q as usize] = it + TABU_TENURE;
        }
    }
    best
}

/// Maximum configuration-free set search.
///
/// Exact mode runs the branch-and-bound on domains of at most
/// [`EXACT_MAX_LIMIT`] points; `proved` is true only when the tree was
/// exhausted within budget. Heuristic mode runs [`RESTARTS`] parallel tabu
/// searches (budget = total move count, default
/// [`DEFAULT_HEURISTIC_MOVES`]) and reduces deterministically: largest set,
/// ties broken toward the lexicographically least bitset.
pub fn max_config_free(
    domain: Domain,
    kind: ExtremalKind,
    mode: ExtremalMode,
    budget: Option<u64>,
    seed: u64,
) -> Result<ExtremalRecord> {
    validate_kind(domain, &kind)?;
    let (example_set, proved) = match mode {
        ExtremalMode::Exact => exact_max(domain, &kind, budget, seed)?,
        ExtremalMode::Heuristic => {
            let moves_total = budget.unwrap_or(DEFAULT_HEURISTIC_MOVES);
            let per_restart = (moves_total / RESTARTS).max(1);
            let runs: Vec<PointSet> = (0..RESTARTS)
                .into_par_iter()
                .map(|r| tabu_restart(domain, &kind, per_restart, derive_seed(seed, r)))
                .collect();
            let best = runs
                .into_iter()
                .reduce(|a, b| {
                    use std::cmp::Ordering;
                    match b.len().cmp(&a.len()) {
                        Ordering::Greater => b,
                        Ordering::Less => a,
                        Ordering::Equal => {
                            if b.cmp_lex(&a) == Ordering::Less {
                                b
                            } else {
                                a
                            }
                        }
                    }
                })
                .expect("at least one restart");
            (best, false)
        }
    };
    debug_assert_eq!(count_config(&example_set, &kind)?, 0);
    let max_size_found = example_set.len();
    Ok(ExtremalRecord {
        domain,
        kind,
        max_size_found,
        proved,
        example_set,
        density: Ratio::new(u64::from(max_size_found), u64::from(domain.point_count())),
    })
}

/// Configuration count for the extremal kind (0 = free), via the counting
/// module: independent of the incremental search bookkeeping.
pub fn count_config(s: &PointSet, kind: &ExtremalKind) -> Result<u64> {
    Ok(match kind {
        ExtremalKind::Corner => count_corners(s, false),
        ExtremalKind::Square => count_squares(s, false),
        ExtremalKind::MatrixPattern(spec) => count_matrix_pattern(s, spec, false)?,
    })
}

/// One row of a density table. `witness` is the hex bitset of the example.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityRow {
    pub size: u32,
    pub kind: String,
    pub max_found: u32,
    pub proved: bool,
    pub witness: String,
}

/// Batch driver over [`max_config_free`]. Matrix-pattern kinds are rejected
/// here (their p is tied to one plane, so a size sweep is meaningless).
pub fn density_table(
    kind: &ExtremalKind,
    domains: &[Domain],
    mode: ExtremalMode,
    budget: Option<u64>,
    seed: u64,
) -> Result<Vec<(DensityRow, Ratio<u64>)>> {
    if matches!(kind, ExtremalKind::MatrixPattern(_)) {
        return Err(Error::InvalidParameter(
            "density tables sweep domain sizes; matrix patterns are tied to a single p".into(),
        ));
    }
    let mut rows = Vec::with_capacity(domains.len());
    for (i, &d) in domains.iter().enumerate() {
        let rec = max_config_free(d, kind.clone(), mode, budget, derive_seed(seed, i as u64))?;
        rows.push((
            DensityRow {
                size: d.size(),
                kind: kind.label().to_string(),
                max_found: rec.max_size_found,
                proved: rec.proved,
                witness: rec.example_set.to_hex(),
            },
            rec.density,
        ));
    }
    Ok(rows)
}

/// CSV emission: the density column is the exact fraction max_found/size².
pub fn density_table_csv(rows: &[(DensityRow, Ratio<u64>)]) -> String {
    let mut out = String::from("size,kind,max_found,proved,density,witness\n");
    for (row, density) in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.size, row.kind, row.max_found, row.proved, density, row.witness
        ));
    }
    out
}

/// JSON emission: array of `{"size","kind","max_found","proved","witness"}`.
pub fn density_table_json(rows: &[(DensityRow, Ratio<u64>)]) -> String {
    let bare: Vec<&DensityRow> = rows.iter().map(|(r, _)| r).collect();
    serde_json::to_string_pretty(&bare).expect("rows serialize")
}
