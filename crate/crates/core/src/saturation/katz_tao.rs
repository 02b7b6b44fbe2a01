//! Difference-set probe over the Gaussian integers mod p.
//!
//! For a set S, collect the ordered diagonal pairs (β, γ) of squares whose
//! apex also lies in S, transport them to a = (1+i)β, b = (1−i)γ, and
//! measure |{a+b}| and |{a−b}|. The identities a + b = 2·apex and
//! a − b = 2i·(fourth vertex) tie the two counts to the geometry: the sums
//! land in 2S and the distinct differences count exactly the covered fourth
//! vertices. The 11/6-exponent difference bound this probes is a theorem for
//! torsion-free abelian groups only, so over F_p[i] the numbers are an
//! empirical analogue, never an asserted inequality.

use serde::Serialize;

use crate::configs::{apex, fourth_vertex};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::gaussian::GaussianElem;
use crate::pointset::PointSet;

/// Caveat copied into CLI output next to the probe numbers.
pub const TORSION_NOTE: &str = "the 11/6-exponent difference bound is proved for torsion-free \
abelian groups; over the mod-p Gaussian integers these counts are an empirical analogue only";

#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct KatzTaoReport {
    /// Distinct fourth vertices over all collected pairs (independent recount).
    pub covered: u64,
    /// Ordered diagonal pairs (β, γ), β ≠ γ, whose apex lies in S.
    pub g_size: u64,
    /// |{a + b}| — always at most |S| because a + b = 2·apex ∈ 2S.
    pub sumset_size: u64,
    /// |{a − b}| — equals `covered` because a − b = 2i·(fourth vertex).
    pub diffset_size: u64,
    /// |S|^(11/6), the torsion-free-group comparison value.
    pub kt_rhs: f64,
}

pub fn katz_tao_probe(s: &PointSet) -> Result<KatzTaoReport> {
    let domain = s.domain();
    let Domain::PrimePlane { p } = domain else {
        return Err(Error::DomainMismatch(
            "the difference-set probe works on the mod-p plane".into(),
        ));
    };
    if p % 4 != 3 {
        return Err(Error::WrongResidue { p });
    }
    let n = domain.point_count() as usize;
    let pts = s.points_vec();
    let mut fourth_seen = vec![false; n];
    let mut sum_seen = vec![false; n];
    let mut diff_seen = vec![false; n];
    let mut g_size = 0u64;
    let one_plus_i = GaussianElem::new(1, 1, p);
    let one_minus_i = GaussianElem::new(1, -1, p);
    for &beta in &pts {
        for &gamma in &pts {
            if beta == gamma {
                continue;
            }
            let alpha = apex(beta, gamma, &domain)?;
            if !s.contains(alpha) {
                continue;
            }
            g_size += 1;
            let delta = fourth_vertex(alpha, beta, gamma, &domain)?;
            fourth_seen[domain.index(delta)] = true;
            let a = one_plus_i.mul(GaussianElem::from_point(beta, &domain)?);
            let b = one_minus_i.mul(GaussianElem::from_point(gamma, &domain)?);
            sum_seen[domain.index(a.add(b).to_point())] = true;
            diff_seen[domain.index(a.sub(b).to_point())] = true;
        }
    }
    let count = |v: &[bool]| v.iter().filter(|&&x| x).count() as u64;
    Ok(KatzTaoReport {
        covered: count(&fourth_seen),
        g_size,
        sumset_size: count(&sum_seen),
        diffset_size: count(&diff_seen),
        kt_rhs: f64::from(s.len()).powf(11.0 / 6.0),
    })
}
