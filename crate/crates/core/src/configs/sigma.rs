//! The trilinear corner form and its balanced decomposition, in exact
//! rational arithmetic.
//!
//! sigma(f, g, h) = sum over x and y of f(x) g(x+y) h(x+rot90 y), with the
//! y = 0 terms excluded by default. Writing the indicator of R as
//! rho + f_R with rho = |R| / p^2 constant and f_R mean-zero expands
//! sigma(R, R, R) into eight terms: one main rho^3 term, three with a single
//! f_R factor (identically zero, since a mean-zero factor is summed over a
//! full coset in those positions), three with two f_R factors, and the
//! trilinear f_R term. All eight are computed exactly; denominators are
//! powers of p^2.

use num::{BigInt, BigRational, Zero};

use crate::configs::counting::count_corners;
use crate::domain::{Domain, GridPoint};
use crate::error::{Error, Result};
use crate::pointset::PointSet;

/// A dense rational-valued function on the domain, indexed row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct GridFunction {
    domain: Domain,
    values: Vec<BigRational>,
}

impl GridFunction {
    pub fn from_values(domain: Domain, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != domain.point_count() as usize {
            return Err(Error::InvalidParameter(format!(
                "function on {domain} needs {} values, got {}",
                domain.point_count(),
                values.len()
            )));
        }
        Ok(GridFunction { domain, values })
    }

    pub fn constant(domain: Domain, c: BigRational) -> Self {
        let n = domain.point_count() as usize;
        GridFunction {
            domain,
            values: vec![c; n],
        }
    }

    /// 0/1 indicator of a set.
    pub fn indicator(set: &PointSet) -> Self {
        let domain = set.domain();
        let values = (0..domain.point_count() as usize)
            .map(|idx| {
                if set.contains_index(idx) {
                    BigRational::from_integer(BigInt::from(1))
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        GridFunction { domain, values }
    }

    /// Density of a set as an exact rational |R| / size^2.
    pub fn density(set: &PointSet) -> BigRational {
        BigRational::new(
            BigInt::from(set.len()),
            BigInt::from(set.domain().point_count()),
        )
    }

    /// The mean-zero part of an indicator: R(x) - |R| / size^2.
    pub fn balanced_indicator(set: &PointSet) -> Self {
        let rho = Self::density(set);
        let mut f = Self::indicator(set);
        for v in &mut f.values {
            *v -= rho.clone();
        }
        f
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn value(&self, pt: GridPoint) -> &BigRational {
        &self.values[self.domain.index(pt)]
    }

    pub fn sum(&self) -> BigRational {
        self.values.iter().sum()
    }
}

/// Exact sigma(f, g, h) over the prime plane.
pub fn sigma_trilinear(
    f: &GridFunction,
    g: &GridFunction,
    h: &GridFunction,
    include_degenerate: bool,
) -> Result<BigRational> {
    let d = f.domain;
    if g.domain != d || h.domain != d {
        return Err(Error::DomainMismatch(
            "sigma needs three functions on one domain".into(),
        ));
    }
    let p = match d {
        Domain::PrimePlane { p } => p as usize,
        Domain::IntegerGrid { .. } => {
            return Err(Error::DomainMismatch(
                "sigma sums over full cosets; use a prime plane".into(),
            ))
        }
    };
    let n = p * p;
    // Shift tables: adding y and rot90(y) as index permutations.
    let mut acc = BigRational::zero();
    for ydy in 0..p {
        for ydx in 0..p {
            if ydx == 0 && ydy == 0 && !include_degenerate {
                continue;
            }
            let ry_dx = (p - ydy) % p;
            let ry_dy = ydx;
            for idx in 0..n {
                let (x, y) = (idx % p, idx / p);
                let i2 = (x + ydx) % p + p * ((y + ydy) % p);
                let i3 = (x + ry_dx) % p + p * ((y + ry_dy) % p);
                let term = &f.values[idx] * &g.values[i2] * &h.values[i3];
                acc += term;
            }
        }
    }
    Ok(acc)
}

/// The eight-term balanced expansion of sigma(R, R, R).
#[derive(Clone, PartialEq, Debug)]
pub struct SigmaDecomposition {
    /// rho^3 summed over all counted (x, y) pairs.
    pub main_term: BigRational,
    /// (f, rho, rho), (rho, f, rho), (rho, rho, f): each exactly zero.
    pub single_f_terms: [BigRational; 3],
    /// (f, f, rho), (f, rho, f), (rho, f, f).
    pub two_f_terms: [BigRational; 3],
    /// (f, f, f).
    pub three_f_term: BigRational,
    /// sigma(R, R, R); equals the sum of the eight terms and the ordered
    /// corner count.
    pub total: BigRational,
    pub include_degenerate: bool,
}

impl SigmaDecomposition {
    pub fn term_sum(&self) -> BigRational {
        let mut s = self.main_term.clone();
        for t in &self.single_f_terms {
            s += t;
        }
        for t in &self.two_f_terms {
            s += t;
        }
        s += &self.three_f_term;
        s
    }

    pub fn two_f_terms_pairwise_equal(&self) -> bool {
        self.two_f_terms[0] == self.two_f_terms[1] && self.two_f_terms[1] == self.two_f_terms[2]
    }
}

/// Expands sigma(R, R, R) into the eight balanced terms, exactly.
///
/// Internally the mean-zero factor is scaled by p^2 to an integer function
/// F(x) = p^2 R(x) - |R|, all eight sums are accumulated in one pass over
/// (y, x) as i128 integers, and each is divided by p^6 at the end.
pub fn decompose_sigma(r: &PointSet, include_degenerate: bool) -> Result<SigmaDecomposition> {
    let d = r.domain();
    let p = match d {
        Domain::PrimePlane { p } => p as usize,
        Domain::IntegerGrid { .. } => {
            return Err(Error::DomainMismatch(
                "the balanced expansion sums over full cosets; use a prime plane".into(),
            ))
        }
    };
    let n = p * p;
    let card = r.len() as i128;
    let f: Vec<i128> = (0..n)
        .map(|idx| if r.contains_index(idx) { n as i128 - card } else { -card })
        .collect();

    let mut pairs = 0i128;
    let (mut s1, mut s2, mut s3) = (0i128, 0i128, 0i128);
    let (mut t12, mut t13, mut t23) = (0i128, 0i128, 0i128);
    let mut t123 = 0i128;
    for ydy in 0..p {
        for ydx in 0..p {
            if ydx == 0 && ydy == 0 && !include_degenerate {
                continue;
            }
            let ry_dx = (p - ydy) % p;
            let ry_dy = ydx;
            for idx in 0..n {
                let (x, y) = (idx % p, idx / p);
                let a = f[idx];
                let b = f[(x + ydx) % p + p * ((y + ydy) % p)];
                let c = f[(x + ry_dx) % p + p * ((y + ry_dy) % p)];
                pairs += 1;
                s1 += a;
                s2 += b;
                s3 += c;
                t12 += a * b;
                t13 += a * c;
                t23 += b * c;
                t123 += a * b * c;
            }
        }
    }

    let p2 = BigInt::from(n);
    let denom = &p2 * &p2 * &p2; // p^6
    let rat = |num: i128| BigRational::new(BigInt::from(num), denom.clone());
    // Each factor carries a 1/p^2: rho = card / p^2 and f = F / p^2, so every
    // triple product is (integer) / p^6 and the terms below just collect the
    // integer numerators.
    let main_term = rat(card * card * card * pairs);

    let single_f_terms = [
        rat(card * card * s1),
        rat(card * card * s2),
        rat(card * card * s3),
    ];
    let two_f_terms = [rat(card * t12), rat(card * t13), rat(card * t23)];
    let three_f_term = rat(t123);

    let mut total = main_term.clone();
    for t in &single_f_terms {
        total += t;
    }
    for t in &two_f_terms {
        total += t;
    }
    total += &three_f_term;
    debug_assert_eq!(
        total,
        BigRational::from_integer(BigInt::from(count_corners(r, include_degenerate))),
        "decomposition must sum to the ordered corner count"
    );

    Ok(SigmaDecomposition {
        main_term,
        single_f_terms,
        two_f_terms,
        three_f_term,
        total,
        include_degenerate,
    })
}

/// Exact decimal-free rendering "num/den" for report output.
pub fn rational_to_string(x: &BigRational) -> String {
    if x.denom() == &BigInt::from(1) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
