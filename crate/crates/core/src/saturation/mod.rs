//! Saturation: configuration-free sets that cannot be extended.
//!
//! A set S is *saturated* for a configuration kind when S contains no copy of
//! the configuration but adding any outside point completes one. The checker
//! here ([`check_saturated`]) scans coverage point by point and is kept
//! deliberately independent from the incremental bookkeeping the searches in
//! [`search`] use, so each validates the other.

mod cover;
mod katz_tao;
mod search;

pub use katz_tao::{katz_tao_probe, KatzTaoReport, TORSION_NOTE};
pub use search::{
    branch_bound_search, load_checkpoint, min_saturated_search, save_checkpoint, CheckpointConfig,
    SearchCheckpoint, SearchMode, SearchResult, SearchStatus,
};

use serde::{Deserialize, Serialize};

use crate::configs::{
    axis_corner_completions, corner_completions, square_diagonal_completions,
    square_edge_completions,
};
use crate::domain::{Domain, GridPoint};
use crate::error::{Error, Result};
use crate::pointset::PointSet;

use cover::axis_square_completions;
pub(crate) use cover::CoverState;
pub(crate) use search::symmetry_perms;

/// Which configuration a saturation question is about.
///
/// `SquareCover` relaxes `Square`: it drops the square-freeness requirement
/// and asks only that every outside point completes a square with three set
/// members. Freeness is vacuous for it, so `is_config_free` is reported as
/// `true` regardless of content.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SaturationKind {
    Corner,
    Square,
    SquareCover,
}

impl SaturationKind {
    pub(crate) fn requires_free(self) -> bool {
        !matches!(self, SaturationKind::SquareCover)
    }
}

/// Whether configurations may be tilted (any similar copy) or must be
/// axis-parallel. All headline claims concern `Similar`; `AxisParallel`
/// exists for comparison experiments.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CopyMode {
    Similar,
    AxisParallel,
}

/// Outcome of a saturation check.
///
/// Invariants: `is_saturated` implies `is_config_free` and no witnesses;
/// otherwise exactly one witness field is populated — a configuration
/// contained in the set, or an uncovered outside point.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SaturationReport {
    pub is_config_free: bool,
    pub is_saturated: bool,
    pub witness_uncovered: Option<GridPoint>,
    pub witness_config: Option<Vec<GridPoint>>,
}

/// True when no triple of S forms a (possibly tilted) isosceles right
/// triangle. Pairwise: S is corner-free iff no completion of a member pair
/// lands back in S.
pub fn is_corner_free(s: &PointSet) -> bool {
    corner_witness(s, CopyMode::Similar).is_none()
}

/// True when no quadruple of S forms a (possibly tilted) square.
pub fn is_square_free(s: &PointSet) -> bool {
    square_witness(s, CopyMode::Similar).is_none()
}

fn corner_witness(s: &PointSet, mode: CopyMode) -> Option<Vec<GridPoint>> {
    let domain = s.domain();
    let pts = s.points_vec();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let comps = match mode {
                CopyMode::Similar => corner_completions(a, b, &domain),
                CopyMode::AxisParallel => axis_corner_completions(a, b, &domain),
            }
            .expect("member points are distinct");
            // Scanning z > b only would miss corners whose third point
            // precedes the pair, so membership is checked for all six.
            if let Some(z) = comps.into_iter().find(|&z| s.contains(z)) {
                return Some(vec![a, b, z]);
            }
        }
    }
    None
}

fn square_witness(s: &PointSet, mode: CopyMode) -> Option<Vec<GridPoint>> {
    let domain = s.domain();
    let pts = s.points_vec();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            match mode {
                CopyMode::Similar => {
                    if let Some((u, v)) =
                        square_diagonal_completions(a, b, &domain).expect("distinct")
                    {
                        if s.contains(u) && s.contains(v) {
                            return Some(vec![a, u, b, v]);
                        }
                    }
                    for (u, v) in square_edge_completions(a, b, &domain).expect("distinct") {
                        if s.contains(u) && s.contains(v) {
                            return Some(vec![a, b, v, u]);
                        }
                    }
                }
                CopyMode::AxisParallel => {
                    for (u, v) in axis_square_completions(a, b, &domain) {
                        if s.contains(u) && s.contains(v) {
                            return Some(vec![a, b, u, v]);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Is `t` (assumed outside S) the missing vertex of a configuration whose
/// other vertices all lie in S?
pub(crate) fn point_is_covered(
    s: &PointSet,
    t: GridPoint,
    kind: SaturationKind,
    mode: CopyMode,
) -> bool {
    let domain = s.domain();
    match kind {
        SaturationKind::Corner => s.iter().any(|m| {
            let comps = match mode {
                CopyMode::Similar => corner_completions(t, m, &domain),
                CopyMode::AxisParallel => axis_corner_completions(t, m, &domain),
            }
            .expect("t is outside S, so t != m");
            comps.into_iter().any(|z| z != m && s.contains(z))
        }),
        SaturationKind::Square | SaturationKind::SquareCover => s.iter().any(|m| match mode {
            CopyMode::Similar => {
                let diag = square_diagonal_completions(t, m, &domain)
                    .expect("distinct")
                    .is_some_and(|(u, v)| s.contains(u) && s.contains(v));
                diag || square_edge_completions(t, m, &domain)
                    .expect("distinct")
                    .into_iter()
                    .any(|(u, v)| s.contains(u) && s.contains(v))
            }
            CopyMode::AxisParallel => axis_square_completions(t, m, &domain)
                .into_iter()
                .any(|(u, v)| s.contains(u) && s.contains(v)),
        }),
    }
}

/// Full saturation check with tilted (similar) copies.
pub fn check_saturated(s: &PointSet, kind: SaturationKind) -> SaturationReport {
    check_saturated_mode(s, kind, CopyMode::Similar)
}

/// Saturation check with an explicit copy mode.
///
/// Scan order is deterministic: containment witnesses come from the
/// lexicographic pair scan, uncovered witnesses are the first uncovered
/// point in row-major order.
pub fn check_saturated_mode(
    s: &PointSet,
    kind: SaturationKind,
    mode: CopyMode,
) -> SaturationReport {
    if kind.requires_free() {
        let witness = match kind {
            SaturationKind::Corner => corner_witness(s, mode),
            SaturationKind::Square => square_witness(s, mode),
            SaturationKind::SquareCover => unreachable!(),
        };
        if let Some(config) = witness {
            return SaturationReport {
                is_config_free: false,
                is_saturated: false,
                witness_uncovered: None,
                witness_config: Some(config),
            };
        }
    }
    for t in s.complement_iter() {
        if !point_is_covered(s, t, kind, mode) {
            return SaturationReport {
                is_config_free: true,
                is_saturated: false,
                witness_uncovered: Some(t),
                witness_config: None,
            };
        }
    }
    SaturationReport {
        is_config_free: true,
        is_saturated: true,
        witness_uncovered: None,
        witness_config: None,
    }
}

/// The p-point column {(0, i) : i in F_p} — the classical witness that a
/// corner-saturated set of size p exists in F_p x F_p. Any outside (a, b)
/// forms a corner with (0, b) and (0, a + b).
pub fn vertical_line_set(p: u32) -> Result<PointSet> {
    let domain = Domain::prime_plane(p)?;
    Ok(PointSet::from_points(
        domain,
        (0..p).map(|i| GridPoint::new(0, i)),
    ))
}

/// Smallest m with p^2 - m <= 6 * C(m, 2): a corner-saturated set must have
/// at least this many points, because each member pair covers at most six
/// outside points. Asymptotically p / sqrt(3).
pub fn corner_sat_lower_bound(p: u32) -> u32 {
    let total = u64::from(p) * u64::from(p);
    (0..)
        .find(|&m| {
            let m = u64::from(m);
            total - m.min(total) <= 3 * m * m.saturating_sub(1)
        })
        .expect("the quadratic side eventually dominates")
}

/// Reference lower bound p^{12/11} - p^{3/5} for square-saturated sets in
/// F_p x F_p, valid when p = 3 mod 4.
pub fn square_sat_lower_bound(p: u32) -> Result<f64> {
    if p % 4 != 3 {
        return Err(Error::WrongResidue { p });
    }
    let pf = f64::from(p);
    Ok(pf.powf(12.0 / 11.0) - pf.powf(3.0 / 5.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;

    fn pt(x: u32, y: u32) -> GridPoint {
        GridPoint::new(x, y)
    }

    /// O(|S|^3) reference for the pairwise corner-freeness check.
    fn corner_free_cubic(s: &PointSet) -> bool {
        let d = s.domain();
        let pts = s.points_vec();
        for (i, &a) in pts.iter().enumerate() {
            for (j, &b) in pts.iter().enumerate().skip(i + 1) {
                for &c in &pts[j + 1..] {
                    if crate::configs::is_isosceles_right(a, b, c, &d).unwrap()
                        || crate::configs::is_isosceles_right(b, a, c, &d).unwrap()
                        || crate::configs::is_isosceles_right(c, a, b, &d).unwrap()
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn two_point_sets_are_corner_free() {
        let d = Domain::prime_plane(5).unwrap();
        let s = PointSet::from_points(d, [pt(0, 0), pt(3, 4)]);
        assert!(is_corner_free(&s));
    }

    #[test]
    fn vertical_line_is_corner_free() {
        for p in [3u32, 5, 7, 11] {
            assert!(is_corner_free(&vertical_line_set(p).unwrap()));
        }
    }

    #[test]
    fn unit_corner_detected() {
        let d = Domain::prime_plane(5).unwrap();
        let s = PointSet::from_points(d, [pt(0, 0), pt(1, 0), pt(0, 1)]);
        assert!(!is_corner_free(&s));
    }

    #[test]
    fn pairwise_freeness_matches_cubic_scan() {
        for seed in 0..20u64 {
            let d = Domain::prime_plane(5).unwrap();
            let s = crate::pointset::random_subset(d, 0.3, seed).unwrap();
            assert_eq!(is_corner_free(&s), corner_free_cubic(&s), "seed {seed}");
        }
        for seed in 0..10u64 {
            let d = Domain::integer_grid(6).unwrap();
            let s = crate::pointset::random_subset(d, 0.25, seed).unwrap();
            assert_eq!(is_corner_free(&s), corner_free_cubic(&s), "grid seed {seed}");
        }
    }

    #[test]
    fn square_freeness_spot_checks() {
        let d = Domain::integer_grid(4).unwrap();
        let unit = PointSet::from_points(d, [pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]);
        assert!(!is_square_free(&unit));
        let tilted = PointSet::from_points(d, [pt(1, 0), pt(2, 1), pt(1, 2), pt(0, 1)]);
        assert!(!is_square_free(&tilted));
        let three = PointSet::from_points(d, [pt(0, 0), pt(1, 0), pt(1, 1)]);
        assert!(is_square_free(&three));
    }

    #[test]
    fn vertical_line_is_saturated_small_primes() {
        for p in [3u32, 5, 7, 11, 13] {
            let s = vertical_line_set(p).unwrap();
            let rep = check_saturated(&s, SaturationKind::Corner);
            assert!(rep.is_saturated, "p = {p}");
            assert!(rep.is_config_free);
            assert!(rep.witness_uncovered.is_none() && rep.witness_config.is_none());
        }
    }

    #[test]
    fn empty_set_is_not_saturated() {
        let d = Domain::prime_plane(5).unwrap();
        let rep = check_saturated(&PointSet::empty(d), SaturationKind::Corner);
        assert!(!rep.is_saturated);
        assert!(rep.is_config_free);
        assert_eq!(rep.witness_uncovered, Some(pt(0, 0)));
    }

    #[test]
    fn full_plane_is_not_saturated() {
        let d = Domain::prime_plane(5).unwrap();
        let rep = check_saturated(&PointSet::full(d), SaturationKind::Corner);
        assert!(!rep.is_saturated);
        assert!(!rep.is_config_free);
        let config = rep.witness_config.unwrap();
        assert_eq!(config.len(), 3);
        assert!(rep.witness_uncovered.is_none());
    }

    #[test]
    fn report_witnesses_are_faithful() {
        // Uncovered witness really is uncovered; config witness really is
        // a corner inside the set.
        let d = Domain::prime_plane(7).unwrap();
        for seed in 0..15u64 {
            let s = crate::pointset::random_subset(d, 0.2, seed).unwrap();
            let rep = check_saturated(&s, SaturationKind::Corner);
            match (&rep.witness_config, rep.witness_uncovered) {
                (Some(config), None) => {
                    assert!(!rep.is_config_free);
                    assert!(config.iter().all(|&q| s.contains(q)));
                    let (a, b, c) = (config[0], config[1], config[2]);
                    assert!(
                        crate::configs::is_isosceles_right(a, b, c, &d).unwrap()
                            || crate::configs::is_isosceles_right(b, a, c, &d).unwrap()
                            || crate::configs::is_isosceles_right(c, a, b, &d).unwrap()
                    );
                }
                (None, Some(t)) => {
                    assert!(!s.contains(t));
                    assert!(!point_is_covered(&s, t, SaturationKind::Corner, CopyMode::Similar));
                }
                (None, None) => assert!(rep.is_saturated),
                (Some(_), Some(_)) => panic!("both witnesses populated"),
            }
        }
    }

    #[test]
    fn square_cover_ignores_contained_squares() {
        // The full plane contains squares but trivially covers: no outside
        // points remain, so the relaxed kind calls it saturated.
        let d = Domain::prime_plane(3).unwrap();
        let rep = check_saturated(&PointSet::full(d), SaturationKind::SquareCover);
        assert!(rep.is_saturated);
        assert!(rep.is_config_free);
        let strict = check_saturated(&PointSet::full(d), SaturationKind::Square);
        assert!(!strict.is_saturated);
    }

    #[test]
    fn vertical_line_examples() {
        let s = vertical_line_set(3).unwrap();
        assert_eq!(s.points_vec(), vec![pt(0, 0), pt(0, 1), pt(0, 2)]);
        for p in [3u32, 5, 7, 23, 101] {
            assert_eq!(vertical_line_set(p).unwrap().len(), p);
        }
    }

    #[test]
    fn corner_lower_bound_values() {
        // 9 - m <= 3m(m-1) first holds at m = 3 (m = 2 gives 7 <= 6).
        assert_eq!(corner_sat_lower_bound(3), 3);
        assert_eq!(corner_sat_lower_bound(5), 4);
        // 49 - m <= 3m(m-1) first holds at m = 5 (m = 4 gives 45 <= 36).
        assert_eq!(corner_sat_lower_bound(7), 5);
    }

    #[test]
    fn corner_lower_bound_tracks_p_over_sqrt3() {
        let p = 10_007u32;
        let bound = corner_sat_lower_bound(p) as f64;
        let asymptotic = f64::from(p) / 3f64.sqrt();
        assert!((bound / asymptotic - 1.0).abs() < 0.01, "ratio {}", bound / asymptotic);
    }

    #[test]
    fn corner_lower_bound_never_exceeds_p() {
        for p in [3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 101] {
            assert!(corner_sat_lower_bound(p) <= p, "p = {p}");
        }
    }

    #[test]
    fn square_lower_bound_values() {
        let v7 = square_sat_lower_bound(7).unwrap();
        assert!((v7 - (7f64.powf(12.0 / 11.0) - 7f64.powf(0.6))).abs() < 1e-12);
        assert!((v7 - 5.1404940105).abs() < 1e-9);
        let v3 = square_sat_lower_bound(3).unwrap();
        assert!((v3 - (3f64.powf(12.0 / 11.0) - 3f64.powf(0.6))).abs() < 1e-12);
        assert_eq!(square_sat_lower_bound(5), Err(Error::WrongResidue { p: 5 }));
        assert_eq!(square_sat_lower_bound(13), Err(Error::WrongResidue { p: 13 }));
    }

    #[test]
    fn square_lower_bound_monotone() {
        let mut last = f64::MIN;
        for p in (3u32..1000).filter(|p| p % 4 == 3) {
            let v = square_sat_lower_bound(p).unwrap();
            assert!(v > last);
            last = v;
        }
        // Sparse sample of large arguments.
        let big: Vec<f64> = [10_007u32, 100_003, 999_983]
            .iter()
            .filter(|&&p| p % 4 == 3)
            .map(|&p| square_sat_lower_bound(p).unwrap())
            .collect();
        assert!(big.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn axis_parallel_mode_differs_from_similar() {
        // A diagonal pair saturates nothing axis-parallel in a 2x2 grid,
        // while in similar mode it is already saturated.
        let d = Domain::integer_grid(2).unwrap();
        let s = PointSet::from_points(d, [pt(0, 0), pt(1, 1)]);
        let tilted = check_saturated_mode(&s, SaturationKind::Corner, CopyMode::Similar);
        assert!(tilted.is_saturated);
        let axis = check_saturated_mode(&s, SaturationKind::Corner, CopyMode::AxisParallel);
        assert!(!axis.is_saturated);
        assert!(axis.witness_uncovered.is_some());
    }
}
