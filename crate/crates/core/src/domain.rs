//! Domains: the finite prime plane F_p x F_p and the integer grid [n] x [n].
//!
//! Points are always canonical (coordinates in `0..size`). Vectors are signed;
//! in the prime plane they are reduced mod p to `0..p`, in the integer grid
//! they stay signed and adding one to a point can leave the domain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported side length. Keeps `size * size` comfortably in `u32`
/// and index arithmetic in `usize`.
pub const MAX_SIZE: u32 = 46_340;

/// A point of the domain, with both coordinates in `0..size`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: u32,
    pub y: u32,
}

impl GridPoint {
    pub const fn new(x: u32, y: u32) -> Self {
        GridPoint { x, y }
    }
}

impl std::fmt::Display for GridPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A displacement between points. Components are canonical residues in
/// `0..p` for the prime plane and arbitrary signed integers for the grid.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GridVector {
    pub dx: i64,
    pub dy: i64,
}

impl GridVector {
    pub const fn new(dx: i64, dy: i64) -> Self {
        GridVector { dx, dy }
    }

    pub fn is_zero(&self) -> bool {
        self.dx == 0 && self.dy == 0
    }
}

/// Either F_p x F_p (p an odd prime, arithmetic wraps mod p) or the grid
/// [n] x [n] (no wraparound).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    PrimePlane { p: u32 },
    IntegerGrid { n: u32 },
}

impl Domain {
    /// F_p x F_p. Rejects composites and p = 2 (halving must be possible).
    pub fn prime_plane(p: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidDomain(format!("p = {p} is not an odd prime")));
        }
        if p > MAX_SIZE {
            return Err(Error::InvalidDomain(format!("p = {p} exceeds maximum size {MAX_SIZE}")));
        }
        Ok(Domain::PrimePlane { p })
    }

    /// [n] x [n] with n >= 1.
    pub fn integer_grid(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDomain("grid side must be at least 1".into()));
        }
        if n > MAX_SIZE {
            return Err(Error::InvalidDomain(format!("n = {n} exceeds maximum size {MAX_SIZE}")));
        }
        Ok(Domain::IntegerGrid { n })
    }

    pub fn size(&self) -> u32 {
        match *self {
            Domain::PrimePlane { p } => p,
            Domain::IntegerGrid { n } => n,
        }
    }

    pub fn point_count(&self) -> u32 {
        self.size() * self.size()
    }

    pub fn is_prime_plane(&self) -> bool {
        matches!(self, Domain::PrimePlane { .. })
    }

    /// p mod 4 for prime planes, None for grids.
    pub fn p_mod_4(&self) -> Option<u32> {
        match *self {
            Domain::PrimePlane { p } => Some(p % 4),
            Domain::IntegerGrid { .. } => None,
        }
    }

    pub fn contains(&self, pt: GridPoint) -> bool {
        let s = self.size();
        pt.x < s && pt.y < s
    }

    /// Row-major index: `y * size + x`. Bit and array layouts throughout the
    /// crate use this order.
    pub fn index(&self, pt: GridPoint) -> usize {
        debug_assert!(self.contains(pt));
        pt.y as usize * self.size() as usize + pt.x as usize
    }

    /// Inverse of [`Domain::index`].
    pub fn point_at(&self, idx: usize) -> GridPoint {
        let s = self.size() as usize;
        debug_assert!(idx < s * s);
        GridPoint::new((idx % s) as u32, (idx / s) as u32)
    }

    /// All points in row-major order.
    pub fn points(&self) -> impl Iterator<Item = GridPoint> {
        let s = self.size();
        (0..s).flat_map(move |y| (0..s).map(move |x| GridPoint::new(x, y)))
    }

    /// Canonical residue of a signed value: in `0..p` for the prime plane,
    /// unchanged for grids.
    pub fn reduce(&self, v: i64) -> i64 {
        match *self {
            Domain::PrimePlane { p } => v.rem_euclid(p as i64),
            Domain::IntegerGrid { .. } => v,
        }
    }

    pub fn reduce_vec(&self, v: GridVector) -> GridVector {
        GridVector::new(self.reduce(v.dx), self.reduce(v.dy))
    }

    /// b - a as a domain vector.
    pub fn sub(&self, b: GridPoint, a: GridPoint) -> GridVector {
        self.reduce_vec(GridVector::new(
            b.x as i64 - a.x as i64,
            b.y as i64 - a.y as i64,
        ))
    }

    /// a + v; None when the result leaves an integer grid.
    pub fn add(&self, a: GridPoint, v: GridVector) -> Option<GridPoint> {
        let x = a.x as i64 + v.dx;
        let y = a.y as i64 + v.dy;
        self.point_from_coords(x, y)
    }

    /// Canonicalizes raw signed coordinates into a point, if possible.
    pub fn point_from_coords(&self, x: i64, y: i64) -> Option<GridPoint> {
        match *self {
            Domain::PrimePlane { p } => {
                let p = p as i64;
                Some(GridPoint::new(
                    x.rem_euclid(p) as u32,
                    y.rem_euclid(p) as u32,
                ))
            }
            Domain::IntegerGrid { n } => {
                let n = n as i64;
                if (0..n).contains(&x) && (0..n).contains(&y) {
                    Some(GridPoint::new(x as u32, y as u32))
                } else {
                    None
                }
            }
        }
    }

    /// Rotation by 90 degrees: (v1, v2) -> (-v2, v1).
    pub fn rot90(&self, v: GridVector) -> GridVector {
        self.reduce_vec(GridVector::new(-v.dy, v.dx))
    }

    /// Squared Euclidean length mod p (prime plane only).
    pub fn norm_mod(&self, v: GridVector) -> Result<u32> {
        match *self {
            Domain::PrimePlane { p } => {
                let p = p as i64;
                Ok(((v.dx * v.dx + v.dy * v.dy).rem_euclid(p)) as u32)
            }
            Domain::IntegerGrid { .. } => Err(Error::DomainMismatch(
                "norm mod p is defined on the prime plane only".into(),
            )),
        }
    }

    /// Multiplicative inverse of 2 mod p (prime plane only).
    pub fn inv2(&self) -> Result<u32> {
        match *self {
            Domain::PrimePlane { p } => Ok((p + 1) / 2),
            Domain::IntegerGrid { .. } => Err(Error::DomainMismatch(
                "halving mod p is defined on the prime plane only".into(),
            )),
        }
    }
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Domain::PrimePlane { p } => write!(f, "F_{p}^2"),
            Domain::IntegerGrid { n } => write!(f, "[{n}]^2"),
        }
    }
}

/// Trial-division primality test; sizes here are small.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
