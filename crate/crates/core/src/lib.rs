//! Search and verification engine for corner and square configurations in
//! the finite plane F_p x F_p and the integer grid [n] x [n].
//!
//! A *corner* is a triple {x, x + y, x + rot90(y)} with y != 0 (an isosceles
//! right triangle, any orientation); adding the fourth point
//! x + y + rot90(y) gives a *square*. The crate provides exact configuration
//! counting, saturation and extremal searches, two-coloring audits, and the
//! Bessel-integral bound used for the continuous analogue of these problems.

pub mod analysis;
pub mod configs;
pub mod domain;
pub mod error;
pub mod extremal;
pub mod gaussian;
pub mod pointset;
pub mod ramsey;
pub mod rng;
pub mod saturation;

pub use domain::{Domain, GridPoint, GridVector};
pub use error::{Error, Result};
pub use gaussian::GaussianElem;
pub use pointset::{random_subset, PointSet};
