//! Dense bitset of domain points with O(1) membership.
//!
//! Bit i corresponds to the point with row-major index i (see
//! [`Domain::index`]). The hex form used in JSON artifacts streams the bits
//! in index order, four per digit, most significant bit of each digit first,
//! padded with zero bits up to a whole digit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{Domain, GridPoint};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointSet {
    domain: Domain,
    words: Vec<u64>,
    len: u32,
}

impl PointSet {
    pub fn empty(domain: Domain) -> Self {
        let bits = domain.point_count() as usize;
        PointSet {
            domain,
            words: vec![0u64; bits.div_ceil(64)],
            len: 0,
        }
    }

    pub fn full(domain: Domain) -> Self {
        let mut s = PointSet::empty(domain);
        for idx in 0..domain.point_count() as usize {
            s.insert_index(idx);
        }
        s
    }

    pub fn from_points<I: IntoIterator<Item = GridPoint>>(domain: Domain, pts: I) -> Self {
        let mut s = PointSet::empty(domain);
        for pt in pts {
            s.insert(pt);
        }
        s
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, pt: GridPoint) -> bool {
        self.contains_index(self.domain.index(pt))
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    /// Returns true if the point was newly inserted.
    pub fn insert(&mut self, pt: GridPoint) -> bool {
        debug_assert!(self.domain.contains(pt));
        self.insert_index(self.domain.index(pt))
    }

    pub fn insert_index(&mut self, idx: usize) -> bool {
        let w = &mut self.words[idx / 64];
        let mask = 1u64 << (idx % 64);
        if *w & mask == 0 {
            *w |= mask;
            self.len += 1;
            true
        } else {
            false
        }
    }

    /// Returns true if the point was present.
    pub fn remove(&mut self, pt: GridPoint) -> bool {
        self.remove_index(self.domain.index(pt))
    }

    pub fn remove_index(&mut self, idx: usize) -> bool {
        let w = &mut self.words[idx / 64];
        let mask = 1u64 << (idx % 64);
        if *w & mask != 0 {
            *w &= !mask;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    /// Member points in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = GridPoint> + '_ {
        self.iter_indices().map(|idx| self.domain.point_at(idx))
    }

    pub fn iter_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rem = w;
            std::iter::from_fn(move || {
                if rem == 0 {
                    return None;
                }
                let bit = rem.trailing_zeros() as usize;
                rem &= rem - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    /// Non-member points in row-major order.
    pub fn complement_iter(&self) -> impl Iterator<Item = GridPoint> + '_ {
        let total = self.domain.point_count() as usize;
        (0..total)
            .filter(move |&idx| !self.contains_index(idx))
            .map(|idx| self.domain.point_at(idx))
    }

    pub fn points_vec(&self) -> Vec<GridPoint> {
        self.iter().collect()
    }

    /// Image under a point map (a new set over the same domain).
    pub fn map_points<F: FnMut(GridPoint) -> GridPoint>(&self, mut f: F) -> PointSet {
        PointSet::from_points(self.domain, self.iter().map(|pt| f(pt)))
    }

    /// Set order by earliest differing point: the set containing the smallest
    /// index where the two differ sorts first. For equal-cardinality sets this
    /// is lexicographic order on the sorted index sequences; it is the
    /// tie-break order used by searches.
    pub fn cmp_lex(&self, other: &PointSet) -> std::cmp::Ordering {
        debug_assert_eq!(self.domain, other.domain);
        for (a, b) in self.words.iter().zip(&other.words) {
            if a != b {
                let idx_bit = 1u64 << (a ^ b).trailing_zeros();
                return if a & idx_bit != 0 {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                };
            }
        }
        std::cmp::Ordering::Equal
    }

    /// Hex artifact form: ceil(size^2 / 4) lowercase digits, bits in
    /// row-major index order, most significant bit of each digit first.
    pub fn to_hex(&self) -> String {
        let bits = self.domain.point_count() as usize;
        let digits = bits.div_ceil(4);
        let mut out = String::with_capacity(digits);
        for d in 0..digits {
            let mut nib = 0u8;
            for k in 0..4 {
                let idx = 4 * d + k;
                if idx < bits && self.contains_index(idx) {
                    nib |= 1 << (3 - k);
                }
            }
            out.push(char::from_digit(nib as u32, 16).unwrap());
        }
        out
    }

    pub fn from_hex(domain: Domain, hex: &str) -> Result<Self> {
        let bits = domain.point_count() as usize;
        let digits = bits.div_ceil(4);
        if hex.len() != digits {
            return Err(Error::BadBitset(format!(
                "expected {digits} hex digits for {domain}, got {}",
                hex.len()
            )));
        }
        let mut s = PointSet::empty(domain);
        for (d, c) in hex.chars().enumerate() {
            let nib = c.to_digit(16).ok_or_else(|| {
                Error::BadBitset(format!("non-hex digit {c:?} at position {d}"))
            })? as u8;
            if c.is_uppercase() {
                return Err(Error::BadBitset(format!(
                    "uppercase digit {c:?} at position {d}; hex form is lowercase"
                )));
            }
            for k in 0..4 {
                if nib >> (3 - k) & 1 == 1 {
                    let idx = 4 * d + k;
                    if idx >= bits {
                        return Err(Error::BadBitset(format!(
                            "padding bit set past the last point (bit {idx}, domain {domain})"
                        )));
                    }
                    s.insert_index(idx);
                }
            }
        }
        Ok(s)
    }
}

/// Independent density-`density` sample of the domain.
///
/// The generator is pinned as part of the artifact contract: ChaCha8 seeded
/// with `seed` via `seed_from_u64`, one f64 draw per point in row-major
/// order, a point joining the set when its draw is `< density`. Density 0
/// yields the empty set and density 1 the full domain.
pub fn random_subset(domain: Domain, density: f64, seed: u64) -> Result<PointSet> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!(
            "density must lie in [0, 1], got {density}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = PointSet::empty(domain);
    for idx in 0..domain.point_count() as usize {
        if rng.random::<f64>() < density {
            s.insert_index(idx);
        }
    }
    Ok(s)
}
