//! Configuration predicates, exact counting, cover checks, and the balanced
//! trilinear decomposition.
//!
//! The central configuration is the corner {x, x + y, x + rot90(y)} with
//! y != 0; adding x + y + rot90(y) turns it into a square. Generic patterns
//! are lists of invertible 2x2 matrices (M_1, ..., M_k) over F_p, counted as
//! tuples (x, x + M_1 y, ..., x + M_k y).

mod counting;
mod cover;
mod predicates;
mod sigma;

pub use counting::{count_corners, count_matrix_pattern, count_squares};
pub use cover::{uniform_cover_check, CoverReport};
pub use predicates::{
    apex, axis_corner_completions, corner_completions, fourth_vertex, is_axis_corner,
    is_isosceles_right, square_diagonal_completions, square_edge_completions,
};
pub use sigma::{
    decompose_sigma, rational_to_string, sigma_trilinear, GridFunction, SigmaDecomposition,
};

use serde::{Deserialize, Serialize};

use crate::domain::GridVector;
use crate::error::{Error, Result};

/// A 2x2 matrix over F_p, entries canonical in `0..p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl Mat2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64, p: u32) -> Self {
        let m = p as i64;
        Mat2 {
            a: a.rem_euclid(m) as u32,
            b: b.rem_euclid(m) as u32,
            c: c.rem_euclid(m) as u32,
            d: d.rem_euclid(m) as u32,
        }
    }

    pub fn identity(_p: u32) -> Self {
        Mat2 { a: 1, b: 0, c: 0, d: 1 }
    }

    /// Rotation by 90 degrees: [[0, -1], [1, 0]].
    pub fn rot90(p: u32) -> Self {
        Mat2::new(0, -1, 1, 0, p)
    }

    /// y -> y + rot90(y): [[1, -1], [1, 1]].
    pub fn one_plus_rot90(p: u32) -> Self {
        Mat2::new(1, -1, 1, 1, p)
    }

    pub fn det(&self, p: u32) -> u32 {
        let m = p as i64;
        ((self.a as i64 * self.d as i64 - self.b as i64 * self.c as i64).rem_euclid(m)) as u32
    }

    pub fn inv(&self, p: u32) -> Result<Mat2> {
        let det = self.det(p);
        if det == 0 {
            return Err(Error::InvalidPattern(format!(
                "matrix [[{}, {}], [{}, {}]] is singular mod {p}",
                self.a, self.b, self.c, self.d
            )));
        }
        let di = crate::gaussian::mod_inv(det, p) as i64;
        Ok(Mat2::new(
            self.d as i64 * di,
            -(self.b as i64) * di,
            -(self.c as i64) * di,
            self.a as i64 * di,
            p,
        ))
    }

    pub fn mul_vec(&self, v: GridVector, p: u32) -> GridVector {
        let m = p as i64;
        GridVector::new(
            (self.a as i64 * v.dx + self.b as i64 * v.dy).rem_euclid(m),
            (self.c as i64 * v.dx + self.d as i64 * v.dy).rem_euclid(m),
        )
    }

    pub fn neg(&self, p: u32) -> Mat2 {
        Mat2::new(
            -(self.a as i64),
            -(self.b as i64),
            -(self.c as i64),
            -(self.d as i64),
            p,
        )
    }
}

/// An ordered list of pairwise distinct invertible matrices over F_p.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PatternSpec {
    pub p: u32,
    pub mats: Vec<Mat2>,
}

impl PatternSpec {
    pub fn new(p: u32, mats: Vec<Mat2>) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::InvalidPattern("pattern needs at least one matrix".into()));
        }
        for (i, m) in mats.iter().enumerate() {
            if m.det(p) == 0 {
                return Err(Error::InvalidPattern(format!("matrix {i} is singular mod {p}")));
            }
            for (j, m2) in mats.iter().enumerate().take(i) {
                if m == m2 {
                    return Err(Error::InvalidPattern(format!("matrices {j} and {i} coincide")));
                }
            }
        }
        Ok(PatternSpec { p, mats })
    }

    /// [I, rot90]: the corner pattern.
    pub fn corners(p: u32) -> Self {
        PatternSpec::new(p, vec![Mat2::identity(p), Mat2::rot90(p)]).unwrap()
    }

    /// [I, rot90, I + rot90]: the square pattern.
    pub fn squares(p: u32) -> Self {
        PatternSpec::new(
            p,
            vec![Mat2::identity(p), Mat2::rot90(p), Mat2::one_plus_rot90(p)],
        )
        .unwrap()
    }

    pub fn k(&self) -> usize {
        self.mats.len()
    }
}
