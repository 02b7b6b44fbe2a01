//! Arithmetic in F_p[i] = F_p[x]/(x^2 + 1), identifying the plane point
//! (a, b) with a + bi.
//!
//! For p = 3 mod 4 the ring is a field; for p = 1 mod 4 it has zero divisors
//! (exactly the elements of norm 0). Multiplication by i acts on coordinates
//! as rotation by 90 degrees, which is what ties this ring to the geometry.

use serde::{Deserialize, Serialize};

use crate::domain::{Domain, GridPoint};
use crate::error::{Error, Result};

/// `base^exp mod m` by square and multiply.
pub fn modpow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue mod a prime, via Fermat.
pub fn mod_inv(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    modpow(a as u64, p as u64 - 2, p as u64) as u32
}

/// An element re + im*i of F_p[i], with both components in `0..p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GaussianElem {
    pub re: u32,
    pub im: u32,
    pub p: u32,
}

impl GaussianElem {
    pub fn new(re: i64, im: i64, p: u32) -> Self {
        let m = p as i64;
        GaussianElem {
            re: re.rem_euclid(m) as u32,
            im: im.rem_euclid(m) as u32,
            p,
        }
    }

    pub fn from_point(pt: GridPoint, domain: &Domain) -> Result<Self> {
        match *domain {
            Domain::PrimePlane { p } => Ok(GaussianElem::new(pt.x as i64, pt.y as i64, p)),
            Domain::IntegerGrid { .. } => Err(Error::DomainMismatch(
                "Gaussian arithmetic is defined on the prime plane only".into(),
            )),
        }
    }

    pub fn to_point(self) -> GridPoint {
        GridPoint::new(self.re, self.im)
    }

    pub fn zero(p: u32) -> Self {
        GaussianElem { re: 0, im: 0, p }
    }

    pub fn one(p: u32) -> Self {
        GaussianElem { re: 1, im: 0, p }
    }

    /// The imaginary unit i.
    pub fn i(p: u32) -> Self {
        GaussianElem { re: 0, im: 1, p }
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    fn check_p(self, other: Self) -> u32 {
        debug_assert_eq!(self.p, other.p, "mixed moduli in Gaussian arithmetic");
        self.p
    }

    pub fn add(self, other: Self) -> Self {
        let p = self.check_p(other);
        GaussianElem::new(
            self.re as i64 + other.re as i64,
            self.im as i64 + other.im as i64,
            p,
        )
    }

    pub fn sub(self, other: Self) -> Self {
        let p = self.check_p(other);
        GaussianElem::new(
            self.re as i64 - other.re as i64,
            self.im as i64 - other.im as i64,
            p,
        )
    }

    pub fn neg(self) -> Self {
        GaussianElem::new(-(self.re as i64), -(self.im as i64), self.p)
    }

    /// (a + bi)(c + di) = (ac - bd) + (ad + bc)i.
    pub fn mul(self, other: Self) -> Self {
        let p = self.check_p(other);
        let (a, b) = (self.re as i64, self.im as i64);
        let (c, d) = (other.re as i64, other.im as i64);
        GaussianElem::new(a * c - b * d, a * d + b * c, p)
    }

    /// Multiplication by i: (a, b) -> (-b, a), i.e. rotation by 90 degrees.
    pub fn times_i(self) -> Self {
        GaussianElem::new(-(self.im as i64), self.re as i64, self.p)
    }

    pub fn conj(self) -> Self {
        GaussianElem::new(self.re as i64, -(self.im as i64), self.p)
    }

    /// re^2 + im^2 mod p. Zero exactly for the non-invertible elements.
    pub fn norm(self) -> u32 {
        let (a, b) = (self.re as u64, self.im as u64);
        ((a * a + b * b) % self.p as u64) as u32
    }

    pub fn is_unit(self) -> bool {
        self.norm() != 0
    }

    /// conj / norm. Fails on elements of norm 0: the zero element always,
    /// and the zero divisors when p = 1 mod 4.
    pub fn inv(self) -> Result<Self> {
        let n = self.norm();
        if n == 0 {
            return Err(Error::NonInvertible {
                re: self.re,
                im: self.im,
                p: self.p,
            });
        }
        let ninv = mod_inv(n, self.p) as i64;
        let c = self.conj();
        Ok(GaussianElem::new(c.re as i64 * ninv, c.im as i64 * ninv, self.p))
    }

    /// Scale by a plain field element.
    pub fn scale(self, s: u32) -> Self {
        GaussianElem::new(self.re as i64 * s as i64, self.im as i64 * s as i64, self.p)
    }
}

impl std::fmt::Display for GaussianElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}+{}i", self.re, self.im)
    }
}
