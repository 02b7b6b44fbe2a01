//! Incremental coverage bookkeeping for the saturation searches.
//!
//! A point t outside the current set is *covered* when the set already
//! contains the other vertices of some configuration through t (two for
//! corners, three for squares). The searches grow and shrink a set one point
//! at a time; [`CoverState`] maintains the covered flags and the count of
//! uncovered outside points under those moves, with exact undo.

use super::{CopyMode, SaturationKind};
use crate::configs::{
    axis_corner_completions, corner_completions, square_diagonal_completions,
    square_edge_completions,
};
use crate::domain::{Domain, GridPoint, GridVector};
use crate::pointset::PointSet;

/// The two missing vertices of every axis-parallel square through both `a`
/// and `b`. The pair is an edge (two squares, one per side) or a diagonal
/// (one square); anything leaving an integer grid is dropped.
pub(crate) fn axis_square_completions(
    a: GridPoint,
    b: GridPoint,
    domain: &Domain,
) -> Vec<(GridPoint, GridPoint)> {
    debug_assert_ne!(a, b);
    let d = domain.sub(b, a);
    let mut out = Vec::with_capacity(2);
    let mut push = |u: Option<GridPoint>, v: Option<GridPoint>| {
        if let (Some(u), Some(v)) = (u, v) {
            out.push((u, v));
        }
    };
    if d.dy == 0 {
        // Horizontal edge: squares above and below.
        for sign in [1i64, -1] {
            let off = GridVector::new(0, sign * d.dx);
            push(domain.add(a, off), domain.add(b, off));
        }
    } else if d.dx == 0 {
        for sign in [1i64, -1] {
            let off = GridVector::new(sign * d.dy, 0);
            push(domain.add(a, off), domain.add(b, off));
        }
    } else if domain.reduce(d.dx - d.dy) == 0 {
        // Main diagonal {x, x+(w,w)}: the square's other corners.
        let w = d.dx;
        push(
            domain.add(a, GridVector::new(w, 0)),
            domain.add(a, GridVector::new(0, w)),
        );
    } else if domain.reduce(d.dx + d.dy) == 0 {
        // Anti-diagonal {x+(0,w), x+(w,0)} with w = d.dx: missing are the
        // base corner x = a - (0,w) and the far corner x + (w,w).
        let w = d.dx;
        push(
            domain.add(a, GridVector::new(0, -w)),
            domain.add(a, GridVector::new(w, 0)),
        );
    }
    out
}

/// Appends every point newly coverable through the pair (a, b): for corners
/// all completions, for squares the vertex opposite an already-present third
/// vertex of a square through a and b.
pub(crate) fn pair_coverage(
    a: GridPoint,
    b: GridPoint,
    domain: &Domain,
    kind: SaturationKind,
    mode: CopyMode,
    in_set: &[bool],
    out: &mut Vec<u32>,
) {
    match kind {
        SaturationKind::Corner => {
            let comps = match mode {
                CopyMode::Similar => corner_completions(a, b, domain),
                CopyMode::AxisParallel => axis_corner_completions(a, b, domain),
            }
            .expect("pair points are distinct");
            out.extend(comps.into_iter().map(|t| domain.index(t) as u32));
        }
        SaturationKind::Square | SaturationKind::SquareCover => {
            let mut consider = |u: GridPoint, v: GridPoint| {
                let (ui, vi) = (domain.index(u), domain.index(v));
                if in_set[ui] {
                    out.push(vi as u32);
                }
                if in_set[vi] {
                    out.push(ui as u32);
                }
            };
            match mode {
                CopyMode::Similar => {
                    if let Some((u, v)) =
                        square_diagonal_completions(a, b, domain).expect("distinct")
                    {
                        consider(u, v);
                    }
                    for (u, v) in square_edge_completions(a, b, domain).expect("distinct") {
                        consider(u, v);
                    }
                }
                CopyMode::AxisParallel => {
                    for (u, v) in axis_square_completions(a, b, domain) {
                        consider(u, v);
                    }
                }
            }
        }
    }
}

pub(crate) struct CoverState {
    domain: Domain,
    kind: SaturationKind,
    mode: CopyMode,
    covered: Vec<bool>,
    in_set: Vec<bool>,
    members: Vec<u32>,
    uncovered_outside: u32,
}

impl CoverState {
    pub(crate) fn new(domain: Domain, kind: SaturationKind, mode: CopyMode) -> Self {
        let n = domain.point_count() as usize;
        CoverState {
            domain,
            kind,
            mode,
            covered: vec![false; n],
            in_set: vec![false; n],
            members: Vec::new(),
            uncovered_outside: n as u32,
        }
    }

    pub(crate) fn is_covered(&self, idx: u32) -> bool {
        self.covered[idx as usize]
    }

    pub(crate) fn uncovered_outside(&self) -> u32 {
        self.uncovered_outside
    }

    /// Adds point `q`; returns the indices whose covered flag this add
    /// flipped, to be passed back to [`CoverState::remove_last`].
    pub(crate) fn add(&mut self, q: u32) -> Vec<u32> {
        let qi = q as usize;
        debug_assert!(!self.in_set[qi]);
        let qp = self.domain.point_at(qi);
        let mut candidates: Vec<u32> = Vec::new();
        for &m in &self.members {
            pair_coverage(
                qp,
                self.domain.point_at(m as usize),
                &self.domain,
                self.kind,
                self.mode,
                &self.in_set,
                &mut candidates,
            );
        }
        if !self.covered[qi] {
            self.uncovered_outside -= 1;
        }
        self.in_set[qi] = true;
        let mut newly = Vec::with_capacity(candidates.len());
        for t in candidates {
            let ti = t as usize;
            if !self.covered[ti] {
                self.covered[ti] = true;
                newly.push(t);
                if !self.in_set[ti] {
                    self.uncovered_outside -= 1;
                }
            }
        }
        self.members.push(q);
        newly
    }

    /// Exact inverse of the matching [`CoverState::add`].
    pub(crate) fn remove_last(&mut self, newly: Vec<u32>) {
        let q = self.members.pop().expect("remove_last on an empty set");
        for &t in &newly {
            let ti = t as usize;
            debug_assert!(self.covered[ti]);
            self.covered[ti] = false;
            if !self.in_set[ti] {
                self.uncovered_outside += 1;
            }
        }
        let qi = q as usize;
        self.in_set[qi] = false;
        if !self.covered[qi] {
            self.uncovered_outside += 1;
        }
    }

    pub(crate) fn to_point_set(&self) -> PointSet {
        let mut s = PointSet::empty(self.domain);
        for &m in &self.members {
            s.insert_index(m as usize);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;
    use crate::pointset::random_subset;
    use crate::saturation::point_is_covered;

    /// Brute-force reference: all axis-parallel squares through both points,
    /// found by scanning every (base, side) pair.
    fn axis_squares_scan(
        a: GridPoint,
        b: GridPoint,
        domain: &Domain,
    ) -> Vec<(GridPoint, GridPoint)> {
        let size = domain.size() as i64;
        let mut found: Vec<Vec<GridPoint>> = Vec::new();
        for base in domain.points() {
            for w in 1..size {
                let verts: Vec<Option<GridPoint>> = [(0, 0), (w, 0), (0, w), (w, w)]
                    .iter()
                    .map(|&(dx, dy)| domain.add(base, GridVector::new(dx, dy)))
                    .collect();
                if verts.iter().any(|v| v.is_none()) {
                    continue;
                }
                let vs: Vec<GridPoint> = verts.into_iter().map(|v| v.unwrap()).collect();
                let mut sorted = vs.clone();
                sorted.sort_by_key(|&t| domain.index(t));
                sorted.dedup();
                if sorted.len() == 4
                    && sorted.contains(&a)
                    && sorted.contains(&b)
                    && !found.contains(&sorted)
                {
                    found.push(sorted);
                }
            }
        }
        found
            .into_iter()
            .map(|sq| {
                let rest: Vec<GridPoint> =
                    sq.into_iter().filter(|&v| v != a && v != b).collect();
                (rest[0], rest[1])
            })
            .collect()
    }

    fn normalize(domain: &Domain, mut v: Vec<(GridPoint, GridPoint)>) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = v
            .drain(..)
            .map(|(u, w)| {
                let (ui, wi) = (domain.index(u), domain.index(w));
                (ui.min(wi), ui.max(wi))
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    #[test]
    fn axis_square_completions_match_scan() {
        for domain in [Domain::prime_plane(5).unwrap(), Domain::integer_grid(5).unwrap()] {
            for ai in 0..domain.point_count() as usize {
                for bi in (ai + 1)..domain.point_count() as usize {
                    let (a, b) = (domain.point_at(ai), domain.point_at(bi));
                    let fast = normalize(&domain, axis_square_completions(a, b, &domain));
                    let slow = normalize(&domain, axis_squares_scan(a, b, &domain));
                    assert_eq!(fast, slow, "{domain} pair {a} {b}");
                }
            }
        }
    }

    #[test]
    fn incremental_cover_matches_pointwise_check() {
        let cases = [
            (Domain::prime_plane(5).unwrap(), SaturationKind::Corner),
            (Domain::prime_plane(5).unwrap(), SaturationKind::Square),
            (Domain::integer_grid(4).unwrap(), SaturationKind::Corner),
            (Domain::integer_grid(4).unwrap(), SaturationKind::Square),
        ];
        for (domain, kind) in cases {
            for seed in 0..6u64 {
                let sample = random_subset(domain, 0.35, seed).unwrap();
                let order: Vec<u32> = sample.iter_indices().map(|i| i as u32).collect();
                let mut cov = CoverState::new(domain, kind, CopyMode::Similar);
                let mut undos = Vec::new();
                for &q in &order {
                    undos.push(cov.add(q));
                }
                // Pop a suffix to exercise undo, keeping a prefix set.
                let keep = order.len() / 2;
                while cov.members.len() > keep {
                    let u = undos.pop().unwrap();
                    cov.remove_last(u);
                }
                let set = cov.to_point_set();
                let mut expected_uncovered = 0;
                for idx in 0..domain.point_count() {
                    let t = domain.point_at(idx as usize);
                    if set.contains(t) {
                        continue;
                    }
                    let covered = point_is_covered(&set, t, kind, CopyMode::Similar);
                    assert_eq!(
                        cov.is_covered(idx),
                        covered,
                        "{domain} {kind:?} seed {seed} point {t}"
                    );
                    if !covered {
                        expected_uncovered += 1;
                    }
                }
                assert_eq!(cov.uncovered_outside(), expected_uncovered);
            }
        }
    }
}
