//! Coloring audits: monochromatic tilted-corner counts against the p³/4
//! heuristic bound, axis-parallel corner detection under any number of
//! colors, and monochromatic collinear triples with prescribed norms.

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::configs::{
    count_corners, decompose_sigma, is_axis_corner, SigmaDecomposition,
};
use crate::domain::{Domain, GridPoint, GridVector};
use crate::error::{Error, Result};
use crate::gaussian::{mod_inv, modpow};
use crate::pointset::PointSet;
use crate::rng::rng_from;
use rand::Rng;

/// A total coloring of a domain with colors 0..r.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Coloring {
    domain: Domain,
    r: u16,
    colors: Vec<u16>,
}

/// File form: {"p": 5, "r": 2, "colors": [...]} for the prime plane or
/// {"n": 4, "r": 2, "colors": [...]} for the integer grid, row-major.
#[derive(Serialize, Deserialize)]
struct ColoringFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    r: u16,
    colors: Vec<u16>,
}

impl Coloring {
    pub fn new(domain: Domain, r: u16, colors: Vec<u16>) -> Result<Self> {
        if r == 0 {
            return Err(Error::BadColoring("need at least one color".into()));
        }
        if colors.len() != domain.point_count() as usize {
            return Err(Error::BadColoring(format!(
                "{domain} has {} points, got {} colors",
                domain.point_count(),
                colors.len()
            )));
        }
        if let Some(&bad) = colors.iter().find(|&&c| c >= r) {
            return Err(Error::BadColoring(format!(
                "color {bad} out of range for r = {r}"
            )));
        }
        Ok(Coloring { domain, r, colors })
    }

    pub fn solid(domain: Domain, r: u16, color: u16) -> Result<Self> {
        let n = domain.point_count() as usize;
        Coloring::new(domain, r, vec![color; n])
    }

    pub fn random(domain: Domain, r: u16, seed: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::BadColoring("need at least one color".into()));
        }
        let mut rng = rng_from(seed);
        let colors = (0..domain.point_count())
            .map(|_| rng.random_range(0..r))
            .collect();
        Coloring::new(domain, r, colors)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn num_colors(&self) -> u16 {
        self.r
    }

    pub fn color_at(&self, pt: GridPoint) -> u16 {
        self.colors[self.domain.index(pt)]
    }

    /// The points of one color as a set (empty for out-of-range colors).
    pub fn class(&self, color: u16) -> PointSet {
        let mut s = PointSet::empty(self.domain);
        for (idx, &c) in self.colors.iter().enumerate() {
            if c == color {
                s.insert_index(idx);
            }
        }
        s
    }

    /// Color-preserving image under a bijective point map.
    pub fn map_points<F: FnMut(GridPoint) -> GridPoint>(&self, mut f: F) -> Result<Self> {
        let mut colors = vec![u16::MAX; self.colors.len()];
        for (idx, &c) in self.colors.iter().enumerate() {
            let target = f(self.domain.point_at(idx));
            let ti = self.domain.index(target);
            if colors[ti] != u16::MAX {
                return Err(Error::BadColoring("point map is not a bijection".into()));
            }
            colors[ti] = c;
        }
        Coloring::new(self.domain, self.r, colors)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ColoringFile =
            serde_json::from_str(text).map_err(|e| Error::BadColoring(e.to_string()))?;
        let domain = match (file.p, file.n) {
            (Some(p), None) => Domain::prime_plane(p)?,
            (None, Some(n)) => Domain::integer_grid(n)?,
            _ => {
                return Err(Error::BadColoring(
                    "give exactly one of \"p\" (prime plane) or \"n\" (integer grid)".into(),
                ))
            }
        };
        Coloring::new(domain, file.r, file.colors)
    }

    pub fn to_json(&self) -> String {
        let (p, n) = match self.domain {
            Domain::PrimePlane { p } => (Some(p), None),
            Domain::IntegerGrid { n } => (None, Some(n)),
        };
        serde_json::to_string(&ColoringFile {
            p,
            n,
            r: self.r,
            colors: self.colors.clone(),
        })
        .expect("coloring serializes")
    }
}

/// Ordered monochromatic corner counts of the two color classes, plus the
/// reporting bound p³/4 − C·p^{5/2}. C is a caller-chosen reporting
/// parameter (default [`DEFAULT_BOUND_C`]), never asserted as sharp.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MonoCornerCounts {
    pub sigma_r: u64,
    pub sigma_b: u64,
    pub bound: f64,
    pub c_constant: f64,
}

pub const DEFAULT_BOUND_C: f64 = 5.0;

pub fn mono_corner_counts(c: &Coloring, c_constant: Option<f64>) -> Result<MonoCornerCounts> {
    let p = match c.domain {
        Domain::PrimePlane { p } => p,
        Domain::IntegerGrid { .. } => {
            return Err(Error::DomainMismatch(
                "monochromatic corner counting runs on the prime plane".into(),
            ))
        }
    };
    if c.r != 2 {
        return Err(Error::WrongColorCount {
            expected: 2,
            got: c.r,
        });
    }
    let cc = c_constant.unwrap_or(DEFAULT_BOUND_C);
    let pf = f64::from(p);
    Ok(MonoCornerCounts {
        sigma_r: count_corners(&c.class(0), false),
        sigma_b: count_corners(&c.class(1), false),
        bound: pf.powi(3) / 4.0 - cc * pf.powf(2.5),
        c_constant: cc,
    })
}

/// Exact balanced-expansion audit of σ_R + σ_B.
///
/// `idealized_main` is |R|³/p² + |B|³/p² (the textbook main term, which
/// silently includes the degenerate y = 0 pairs); `exact_main` is the
/// density-cubed term actually summed over y ≠ 0. All corrections are the
/// two- and three-balanced-factor terms, and
/// exact_main + correction_sum = σ_R + σ_B holds exactly.
#[derive(Clone, Debug)]
pub struct DecompositionAudit {
    pub red: SigmaDecomposition,
    pub blue: SigmaDecomposition,
    pub idealized_main: BigRational,
    pub exact_main: BigRational,
    pub correction_sum: BigRational,
    pub sigma_total: BigRational,
    pub residual_vs_idealized: BigRational,
}

pub fn mono_decomposition_audit(c: &Coloring) -> Result<DecompositionAudit> {
    if c.r != 2 {
        return Err(Error::WrongColorCount {
            expected: 2,
            got: c.r,
        });
    }
    let red_set = c.class(0);
    let blue_set = c.class(1);
    let red = decompose_sigma(&red_set, false)?;
    let blue = decompose_sigma(&blue_set, false)?;
    let n = BigInt::from(c.domain.point_count());
    let cube = |s: &PointSet| BigInt::from(s.len()).pow(3);
    let idealized_main = BigRational::new(cube(&red_set) + cube(&blue_set), n);
    let exact_main = red.main_term.clone() + blue.main_term.clone();
    let mut correction_sum = red.three_f_term.clone() + blue.three_f_term.clone();
    for t in red.two_f_terms.iter().chain(blue.two_f_terms.iter()) {
        correction_sum += t;
    }
    let sigma_total = red.total.clone() + blue.total.clone();
    debug_assert_eq!(exact_main.clone() + correction_sum.clone(), sigma_total);
    let residual_vs_idealized = sigma_total.clone() - idealized_main.clone();
    Ok(DecompositionAudit {
        red,
        blue,
        idealized_main,
        exact_main,
        correction_sum,
        sigma_total,
        residual_vs_idealized,
    })
}

/// A monochromatic axis-parallel corner {apex, apex+(d,0), apex+(0,d)}.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct MonoAxisCorner {
    pub apex: GridPoint,
    pub arm_x: GridPoint,
    pub arm_y: GridPoint,
    pub color: u16,
    pub d: u32,
}

/// First monochromatic axis-parallel corner in scan order (apex row-major,
/// then leg length d = 1, 2, ... — mod-p wrap on the prime plane), or None.
pub fn find_mono_axis_corner(c: &Coloring) -> Option<MonoAxisCorner> {
    let d = c.domain;
    let size = d.size();
    for idx in 0..d.point_count() as usize {
        let apex = d.point_at(idx);
        let color = c.colors[idx];
        for leg in 1..size {
            let l = i64::from(leg);
            let (Some(arm_x), Some(arm_y)) = (
                d.add(apex, GridVector::new(l, 0)),
                d.add(apex, GridVector::new(0, l)),
            ) else {
                break; // grid edge: longer legs only overshoot further
            };
            if c.color_at(arm_x) == color && c.color_at(arm_y) == color {
                debug_assert!(is_axis_corner(apex, arm_x, arm_y, &d).unwrap_or(false));
                return Some(MonoAxisCorner {
                    apex,
                    arm_x,
                    arm_y,
                    color,
                    d: leg,
                });
            }
        }
    }
    None
}

/// Euler's criterion: x is a nonzero square mod the odd prime p.
pub fn is_quadratic_residue(x: u32, p: u32) -> Result<bool> {
    let xr = x % p;
    if xr == 0 {
        return Err(Error::ZeroInput);
    }
    Ok(modpow(u64::from(xr), u64::from((p - 1) / 2), u64::from(p)) == 1)
}

/// A monochromatic collinear triple with prescribed step norms.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CollinearTriple {
    pub x: GridPoint,
    pub y: GridPoint,
    pub z: GridPoint,
    pub color: u16,
}

/// First monochromatic collinear triple x, y, z with ‖y−x‖ = a, ‖z−y‖ = b
/// and both steps along one direction, or None.
///
/// Directions are scanned up to scalar equivalence ((1, s) for s = 0..p,
/// then (0, 1)); per direction the step scalars solve t² ≡ a/‖v‖ and
/// t² ≡ b/‖v‖, and the degenerate z = x (t₂ = −t₁) is skipped. Solutions
/// force a/b to be a quadratic residue, so non-residue ratios are refused
/// with NotQuadraticResidue unless `force` is set (a forced scan just
/// proves emptiness).
pub fn find_mono_collinear_triple(
    c: &Coloring,
    a: u32,
    b: u32,
    force: bool,
) -> Result<Option<CollinearTriple>> {
    let p = match c.domain {
        Domain::PrimePlane { p } => p,
        Domain::IntegerGrid { .. } => {
            return Err(Error::DomainMismatch(
                "norm-prescribed collinear triples live in the prime plane".into(),
            ))
        }
    };
    if c.r != 2 {
        return Err(Error::WrongColorCount {
            expected: 2,
            got: c.r,
        });
    }
    if a % p == 0 || b % p == 0 {
        return Err(Error::ZeroInput);
    }
    let ratio = (u64::from(a % p) * u64::from(mod_inv(b % p, p)) % u64::from(p)) as u32;
    if !is_quadratic_residue(ratio, p)? && !force {
        return Err(Error::NotQuadraticResidue { value: ratio, p });
    }

    let sqrts = |target: u32| -> Vec<u32> {
        (1..p)
            .filter(|&t| (u64::from(t) * u64::from(t)) % u64::from(p) == u64::from(target))
            .collect()
    };
    let mut directions: Vec<GridVector> = (0..p)
        .map(|s| GridVector::new(1, i64::from(s)))
        .collect();
    directions.push(GridVector::new(0, 1));

    for v in directions {
        let norm = c.domain.norm_mod(v)?;
        if norm == 0 {
            continue; // isotropic direction: t²·0 never hits a nonzero norm
        }
        let ninv = u64::from(mod_inv(norm, p));
        let ta = ((u64::from(a % p) * ninv) % u64::from(p)) as u32;
        let tb = ((u64::from(b % p) * ninv) % u64::from(p)) as u32;
        let t1s = sqrts(ta);
        if t1s.is_empty() {
            continue;
        }
        let t2s = sqrts(tb);
        for idx in 0..c.domain.point_count() as usize {
            let x = c.domain.point_at(idx);
            let color = c.colors[idx];
            for &t1 in &t1s {
                let step1 = GridVector::new(
                    i64::from(t1) * v.dx % i64::from(p),
                    i64::from(t1) * v.dy % i64::from(p),
                );
                let y = c.domain.add(x, step1).expect("mod-p add");
                if c.color_at(y) != color {
                    continue;
                }
                for &t2 in &t2s {
                    if (t1 + t2) % p == 0 {
                        continue; // z would fall back on x
                    }
                    let step2 = GridVector::new(
                        i64::from(t2) * v.dx % i64::from(p),
                        i64::from(t2) * v.dy % i64::from(p),
                    );
                    let z = c.domain.add(y, step2).expect("mod-p add");
                    if c.color_at(z) != color {
                        continue;
                    }
                    // independent recheck of the prescribed norms
                    let n1 = c.domain.norm_mod(c.domain.sub(y, x))?;
                    let n2 = c.domain.norm_mod(c.domain.sub(z, y))?;
                    debug_assert_eq!((n1, n2), (a % p, b % p));
                    if (n1, n2) != (a % p, b % p) {
                        continue;
                    }
                    return Ok(Some(CollinearTriple { x, y, z, color }));
                }
            }
        }
    }
    Ok(None)
}
