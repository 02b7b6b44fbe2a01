//! Fiber-uniformity check for the change of variables behind pattern
//! averaging.
//!
//! For a pattern (M_1, ..., M_k), substituting x = z_1 + ... + z_k and
//! y = -(M_1^{-1} z_1 + ... + M_k^{-1} z_k) realizes every instance tuple
//! (x, x + M_1 y, ..., x + M_k y) as the image of a linear map
//! Phi: (F_p^2)^k -> (F_p^2)^2, z -> (x, y); the tuple and the pair (x, y)
//! determine each other, so fibers are measured over (x, y) cells. The check
//! verifies that all nonempty fibers have one cardinality (and measures it),
//! and whether Phi is onto the full (x, y) space.

use crate::configs::PatternSpec;
use crate::domain::GridVector;
use crate::error::Result;

/// Tuples enumerated exhaustively when p^{2k} is at most this.
const ENUMERATION_LIMIT: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CoverReport {
    /// Every (x, y) pair is hit.
    pub surjective: bool,
    /// All nonempty fibers share one cardinality.
    pub uniform: bool,
    /// That common cardinality.
    pub fiber_size: u64,
    /// Number of distinct (x, y) pairs hit.
    pub image_size: u64,
    /// p^{2k}, the number of z tuples.
    pub tuple_count: u64,
    /// True when the report comes from full enumeration rather than rank.
    pub enumerated: bool,
}

/// Rank of a matrix over F_p by Gaussian elimination. `rows[i]` has `cols`
/// entries in `0..p`.
fn rank_mod_p(mut rows: Vec<Vec<u32>>, cols: usize, p: u32) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] % p != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = crate::gaussian::mod_inv(rows[rank][col] % p, p) as u64;
        for c in col..cols {
            rows[rank][c] = (rows[rank][c] as u64 * inv % p as u64) as u32;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] % p != 0 {
                let f = rows[r][col] as u64;
                for c in col..cols {
                    let sub = f * rows[rank][c] as u64 % p as u64;
                    rows[r][c] = ((rows[r][c] as u64 + p as u64 - sub) % p as u64) as u32;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub fn uniform_cover_check(spec: &PatternSpec) -> Result<CoverReport> {
    let p = spec.p;
    let k = spec.k();
    let inverses: Vec<_> = spec
        .mats
        .iter()
        .map(|m| m.inv(p).map(|mi| mi.neg(p)))
        .collect::<Result<_>>()?;

    // Rows of Phi as a 4 x 2k matrix: two coordinate rows of x = sum z_j,
    // then two rows of y = sum (-M_j^{-1}) z_j.
    let mut rows = vec![vec![0u32; 2 * k]; 4];
    for (j, mi) in inverses.iter().enumerate() {
        rows[0][2 * j] = 1;
        rows[1][2 * j + 1] = 1;
        rows[2][2 * j] = mi.a;
        rows[2][2 * j + 1] = mi.b;
        rows[3][2 * j] = mi.c;
        rows[3][2 * j + 1] = mi.d;
    }
    let rank = rank_mod_p(rows, 2 * k, p);
    let tuple_count = (p as u64 * p as u64).pow(k as u32);
    let image_by_rank = (p as u64).pow(rank as u32);
    let fiber_by_rank = tuple_count / image_by_rank;

    if tuple_count > ENUMERATION_LIMIT {
        return Ok(CoverReport {
            surjective: rank == 4,
            uniform: true,
            fiber_size: fiber_by_rank,
            image_size: image_by_rank,
            tuple_count,
            enumerated: false,
        });
    }

    // Exhaustive enumeration of all z tuples.
    let p2 = (p * p) as u64;
    let cells = (p2 * p2) as usize;
    let mut counts = vec![0u64; cells];
    let mut z = vec![0u64; k];
    loop {
        let (mut x1, mut x2, mut y1, mut y2) = (0i64, 0i64, 0i64, 0i64);
        for (j, &code) in z.iter().enumerate() {
            let (a, b) = ((code % p as u64) as i64, (code / p as u64) as i64);
            x1 += a;
            x2 += b;
            let v = inverses[j].mul_vec(GridVector::new(a, b), p);
            y1 += v.dx;
            y2 += v.dy;
        }
        let m = p as i64;
        let cell = ((x1.rem_euclid(m) * m + x2.rem_euclid(m)) * m + y1.rem_euclid(m)) * m
            + y2.rem_euclid(m);
        counts[cell as usize] += 1;

        // Odometer over the k base-p^2 digits.
        let mut j = 0;
        loop {
            if j == k {
                break;
            }
            z[j] += 1;
            if z[j] < p2 {
                break;
            }
            z[j] = 0;
            j += 1;
        }
        if j == k {
            break;
        }
    }

    let image_size = counts.iter().filter(|&&c| c > 0).count() as u64;
    let fiber = counts.iter().copied().find(|&c| c > 0).unwrap_or(0);
    let uniform = counts.iter().all(|&c| c == 0 || c == fiber);
    let surjective = image_size == p2 * p2;
    debug_assert_eq!(image_size, image_by_rank);
    debug_assert!(uniform && fiber == fiber_by_rank);
    Ok(CoverReport {
        surjective,
        uniform,
        fiber_size: fiber,
        image_size,
        tuple_count,
        enumerated: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::Mat2;

    #[test]
    fn corner_pattern_is_a_bijection() {
        for p in [3u32, 5, 7] {
            let r = uniform_cover_check(&PatternSpec::corners(p)).unwrap();
            assert!(r.enumerated);
            assert!(r.surjective && r.uniform);
            assert_eq!(r.fiber_size, 1);
            assert_eq!(r.image_size, (p as u64).pow(4));
        }
    }

    #[test]
    fn square_pattern_fibers_are_p_squared() {
        for p in [3u32, 5] {
            let r = uniform_cover_check(&PatternSpec::squares(p)).unwrap();
            assert!(r.enumerated);
            assert!(r.surjective && r.uniform);
            assert_eq!(r.fiber_size, (p as u64).pow(2));
        }
    }

    #[test]
    fn single_matrix_covers_a_slice_uniformly() {
        let p = 5;
        let spec = PatternSpec::new(p, vec![Mat2::identity(p)]).unwrap();
        let r = uniform_cover_check(&spec).unwrap();
        assert!(r.uniform);
        assert!(!r.surjective);
        assert_eq!(r.fiber_size, 1);
        assert_eq!(r.image_size, (p as u64).pow(2));
    }

    #[test]
    fn rank_path_agrees_with_enumeration_prediction() {
        // p = 13, k = 3: 13^6 tuples is past the enumeration limit.
        let r = uniform_cover_check(&PatternSpec::squares(13)).unwrap();
        assert!(!r.enumerated);
        assert!(r.surjective && r.uniform);
        assert_eq!(r.fiber_size, 13 * 13);
    }

    #[test]
    fn fiber_size_scales_with_extra_matrices() {
        // k = 4 at p = 3: rank stays 4, fibers are p^{2(k-2)} = 81.
        let p = 3;
        let spec = PatternSpec::new(
            p,
            vec![
                Mat2::identity(p),
                Mat2::rot90(p),
                Mat2::one_plus_rot90(p),
                Mat2::new(2, 0, 0, 2, p),
            ],
        )
        .unwrap();
        let r = uniform_cover_check(&spec).unwrap();
        assert!(r.uniform && r.surjective);
        assert_eq!(r.fiber_size, 81);
    }
}
