//! Exact configuration counts.
//!
//! All counts are over ordered instances (x, y): `count_corners` sums
//! A(x) A(x+y) A(x+rot90 y) over all positions x and displacements y, and
//! `count_squares` adds the factor A(x+y+rot90 y). The degenerate y = 0
//! terms (each contributing 1 per member of A) are excluded unless
//! `include_degenerate` is set. For p odd the three corner points are
//! automatically pairwise distinct when y != 0, so a corner-free set is
//! exactly a set with count 0.
//!
//! Ordered-to-unordered divisors: a corner triangle determines its ordered
//! pair (x is the right-angle vertex and y its leg with rot90(y) the other
//! leg), so the divisor is 1; a square is counted from each of its four
//! vertices, so the divisor is 4.

use rayon::prelude::*;

use crate::configs::PatternSpec;
use crate::domain::{Domain, GridVector};
use crate::error::{Error, Result};
use crate::pointset::PointSet;

/// Ordered corner count. Iterates over member pairs (x, x + y), so grid
/// displacements automatically range over the full Minkowski difference.
pub fn count_corners(a: &PointSet, include_degenerate: bool) -> u64 {
    let d = a.domain();
    let pts = a.points_vec();
    let base = if include_degenerate { a.len() as u64 } else { 0 };
    let total: u64 = pts
        .par_iter()
        .map(|&x| {
            let mut c = 0u64;
            for &q in &pts {
                if q == x {
                    continue;
                }
                let y = d.sub(q, x);
                if let Some(t) = d.add(x, d.rot90(y)) {
                    if a.contains(t) {
                        c += 1;
                    }
                }
            }
            c
        })
        .sum();
    base + total
}

/// Ordered square count (corner plus the opposite vertex).
pub fn count_squares(a: &PointSet, include_degenerate: bool) -> u64 {
    let d = a.domain();
    let pts = a.points_vec();
    let base = if include_degenerate { a.len() as u64 } else { 0 };
    let total: u64 = pts
        .par_iter()
        .map(|&x| {
            let mut c = 0u64;
            for &q in &pts {
                if q == x {
                    continue;
                }
                let y = d.sub(q, x);
                let ry = d.rot90(y);
                let third = match d.add(x, ry) {
                    Some(t) if a.contains(t) => t,
                    _ => continue,
                };
                if let Some(fourth) = d.add(third, y) {
                    if a.contains(fourth) {
                        c += 1;
                    }
                }
            }
            c
        })
        .sum();
    base + total
}

/// Ordered count of the pattern (x, x + M_1 y, ..., x + M_k y) inside A.
/// Prime plane only; the matrices act mod p.
pub fn count_matrix_pattern(
    a: &PointSet,
    spec: &PatternSpec,
    include_degenerate: bool,
) -> Result<u64> {
    let d = a.domain();
    let p = match d {
        Domain::PrimePlane { p } => p,
        Domain::IntegerGrid { .. } => {
            return Err(Error::DomainMismatch(
                "matrix patterns act mod p; use a prime plane".into(),
            ))
        }
    };
    if spec.p != p {
        return Err(Error::DomainMismatch(format!(
            "pattern is over F_{}, set lives in F_{}",
            spec.p, p
        )));
    }
    let pts = a.points_vec();
    let base = if include_degenerate { a.len() as u64 } else { 0 };
    let total: u64 = pts
        .par_iter()
        .map(|&x| {
            let mut c = 0u64;
            for dy in 0..p as i64 {
                for dx in 0..p as i64 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let y = GridVector::new(dx, dy);
                    if spec.mats.iter().all(|m| {
                        d.add(x, m.mul_vec(y, p)).is_some_and(|t| a.contains(t))
                    }) {
                        c += 1;
                    }
                }
            }
            c
        })
        .sum();
    Ok(base + total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::GridPoint;
    use crate::pointset::random_subset;

    /// Reference loop: x over the whole domain, y over the full displacement
    /// range (all residues mod p, or the Minkowski range on grids).
    fn naive_count(a: &PointSet, squares: bool, include_degenerate: bool) -> u64 {
        let d = a.domain();
        let s = d.size() as i64;
        let (lo, hi) = match d {
            Domain::PrimePlane { .. } => (0, s - 1),
            Domain::IntegerGrid { .. } => (-(s - 1), s - 1),
        };
        let mut count = 0u64;
        for x in d.points() {
            for dy in lo..=hi {
                for dx in lo..=hi {
                    if dx == 0 && dy == 0 && !include_degenerate {
                        continue;
                    }
                    let y = GridVector::new(dx, dy);
                    let ry = d.rot90(y);
                    let ok = a.contains(x)
                        && d.add(x, y).is_some_and(|t| a.contains(t))
                        && d.add(x, ry).is_some_and(|t| a.contains(t))
                        && (!squares
                            || d.add(x, GridVector::new(y.dx + ry.dx, y.dy + ry.dy))
                                .is_some_and(|t| a.contains(t)));
                    if ok {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn full_f3_has_72_corners_and_squares() {
        let d = Domain::prime_plane(3).unwrap();
        let full = PointSet::full(d);
        assert_eq!(count_corners(&full, false), 72);
        assert_eq!(count_squares(&full, false), 72);
        assert_eq!(count_corners(&full, true), 81);
        assert_eq!(count_squares(&full, true), 81);
    }

    #[test]
    fn vertical_line_has_no_corners() {
        let d = Domain::prime_plane(5).unwrap();
        let line = PointSet::from_points(d, (0..5).map(|i| GridPoint::new(0, i)));
        assert_eq!(count_corners(&line, false), 0);
    }

    #[test]
    fn unit_square_ordered_count_is_4() {
        // One choice of x per vertex; the orientation of y is forced.
        let d = Domain::integer_grid(6).unwrap();
        let sq = PointSet::from_points(
            d,
            [
                GridPoint::new(2, 2),
                GridPoint::new(3, 2),
                GridPoint::new(2, 3),
                GridPoint::new(3, 3),
            ],
        );
        assert_eq!(count_squares(&sq, false), 4);
        assert_eq!(count_squares(&sq, false), naive_count(&sq, true, false));
    }

    #[test]
    fn matches_naive_on_all_f3_subsets() {
        let d = Domain::prime_plane(3).unwrap();
        for mask in 0u32..512 {
            let a = PointSet::from_points(
                d,
                (0..9).filter(|i| mask >> i & 1 == 1).map(|i| d.point_at(i)),
            );
            assert_eq!(count_corners(&a, false), naive_count(&a, false, false));
            assert_eq!(count_squares(&a, false), naive_count(&a, true, false));
        }
    }

    #[test]
    fn matches_naive_on_random_sets() {
        for (domain, seed) in [
            (Domain::prime_plane(7).unwrap(), 11u64),
            (Domain::integer_grid(8).unwrap(), 12),
        ] {
            for k in 0..8 {
                let a = random_subset(domain, 0.1 + 0.1 * k as f64, seed + k).unwrap();
                for flag in [false, true] {
                    assert_eq!(count_corners(&a, flag), naive_count(&a, false, flag));
                    assert_eq!(count_squares(&a, flag), naive_count(&a, true, flag));
                }
            }
        }
    }

    #[test]
    fn matrix_pattern_specializes_to_corners_and_squares() {
        let d = Domain::prime_plane(7).unwrap();
        for seed in 0..5 {
            let a = random_subset(d, 0.4, 100 + seed).unwrap();
            assert_eq!(
                count_matrix_pattern(&a, &PatternSpec::corners(7), false).unwrap(),
                count_corners(&a, false)
            );
            assert_eq!(
                count_matrix_pattern(&a, &PatternSpec::squares(7), false).unwrap(),
                count_squares(&a, false)
            );
        }
    }

    #[test]
    fn full_plane_matrix_pattern_count() {
        // Every (x, y != 0) qualifies: p^2 (p^2 - 1).
        for p in [3u32, 5, 7] {
            let d = Domain::prime_plane(p).unwrap();
            let full = PointSet::full(d);
            let n = p as u64 * p as u64;
            for spec in [PatternSpec::corners(p), PatternSpec::squares(p)] {
                assert_eq!(
                    count_matrix_pattern(&full, &spec, false).unwrap(),
                    n * (n - 1)
                );
            }
        }
    }

    #[test]
    fn identity_only_pattern_counts_ordered_pairs() {
        let d = Domain::prime_plane(5).unwrap();
        let a = random_subset(d, 0.5, 3).unwrap();
        let spec = PatternSpec::new(5, vec![crate::configs::Mat2::identity(5)]).unwrap();
        assert_eq!(
            count_matrix_pattern(&a, &spec, false).unwrap(),
            a.len() as u64 * (a.len() as u64 - 1)
        );
    }

    #[test]
    fn pattern_on_grid_rejected() {
        let d = Domain::integer_grid(5).unwrap();
        let a = PointSet::full(d);
        assert!(count_matrix_pattern(&a, &PatternSpec::corners(5), false).is_err());
    }

    #[test]
    fn counts_independent_of_thread_pool_size() {
        let d = Domain::prime_plane(11).unwrap();
        let a = random_subset(d, 0.5, 77).unwrap();
        let reference = count_corners(&a, false);
        for threads in [1usize, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let got = pool.install(|| count_corners(&a, false));
            assert_eq!(got, reference);
        }
    }
}
