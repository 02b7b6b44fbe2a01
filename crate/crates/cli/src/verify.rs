//! The invariant battery behind `verify-claims`: one named check per claim
//! family, each reporting pass/fail plus the measured values.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, Zero};
use rand::Rng;
use serde_json::{json, Value};

use cornerlab_core::analysis::{
    bessel_j0, measure_lower_bound, minimize_g, DEFAULT_SEARCH_LIMIT, DEFAULT_TOLERANCE,
};
use cornerlab_core::configs::{
    apex, count_corners, count_matrix_pattern, count_squares, decompose_sigma, fourth_vertex,
    uniform_cover_check, GridFunction, PatternSpec,
};
use cornerlab_core::extremal::{count_config, density_table, ExtremalKind, ExtremalMode};
use cornerlab_core::ramsey::{
    is_quadratic_residue, mono_corner_counts, mono_decomposition_audit, Coloring,
};
use cornerlab_core::rng::{derive_seed, rng_from};
use cornerlab_core::saturation::{
    branch_bound_search, check_saturated, corner_sat_lower_bound, katz_tao_probe,
    min_saturated_search, vertical_line_set, CheckpointConfig, SaturationKind, SearchCheckpoint,
    SearchMode, SearchStatus,
};
use cornerlab_core::{random_subset, Domain, GaussianElem, PointSet};

use crate::manifest::{emit_document, OutTarget};
use crate::{domain_from, Failure};

struct Check {
    name: &'static str,
    pass: bool,
    measured: Value,
}

fn ok(name: &'static str, pass: bool, measured: Value) -> Check {
    Check { name, pass, measured }
}

fn bessel_g_min() -> Check {
    let m = minimize_g(DEFAULT_SEARCH_LIMIT, DEFAULT_TOLERANCE);
    ok(
        "bessel.g_min",
        (m.g_min - (-0.9683275949)).abs() < 1e-8,
        json!({"g_min": m.g_min, "t_star": m.t_star}),
    )
}

fn bessel_first_root() -> Check {
    let v = bessel_j0(2.404825557695773).expect("in range");
    ok("bessel.first_root", v.abs() < 1e-10, json!({"j0_at_root": v}))
}

fn bessel_measure_bound() -> Check {
    let v = measure_lower_bound();
    ok(
        "bessel.measure_bound",
        v >= 0.0079 && (v - 0.0079181).abs() < 1e-6,
        json!({"bound": v}),
    )
}

fn saturation_column(p_list: &[u32]) -> Check {
    let mut rows = Vec::new();
    let mut pass = true;
    for &p in p_list {
        let line = vertical_line_set(p).expect("odd prime");
        let report = check_saturated(&line, SaturationKind::Corner);
        let lb = corner_sat_lower_bound(p);
        pass &= report.is_saturated && report.is_config_free && lb <= p;
        rows.push(json!({"p": p, "saturated": report.is_saturated, "lower_bound": lb}));
    }
    ok("saturation.column_saturated", pass, Value::Array(rows))
}

/// apex((1+i)-diagonal pair) recovers the right angle, and the closed-form
/// -i((1+i)/2·beta - (1-i)/2·gamma) matches beta + gamma - alpha, on random
/// corners.
fn gaussian_identities(p_list: &[u32], seed: u64) -> Check {
    const TRIALS: u32 = 1000;
    let mut pass = true;
    for &p in p_list {
        let domain = Domain::prime_plane(p).expect("validated");
        let mut rng = rng_from(derive_seed(seed, u64::from(p)));
        let half = GaussianElem::new(2, 0, p).inv().expect("odd p");
        let one_plus_i = GaussianElem::new(1, 1, p);
        let one_minus_i = GaussianElem::new(1, -1, p);
        for _ in 0..TRIALS {
            let alpha = GaussianElem::new(
                i64::from(rng.random_range(0..p)),
                i64::from(rng.random_range(0..p)),
                p,
            );
            let y = loop {
                let y = GaussianElem::new(
                    i64::from(rng.random_range(0..p)),
                    i64::from(rng.random_range(0..p)),
                    p,
                );
                if !y.is_zero() {
                    break y;
                }
            };
            // Right angle at alpha, diagonal pair ordered so that
            // gamma = alpha + i(alpha - beta).
            let beta = alpha.add(y.times_i());
            let gamma = alpha.add(y);
            let apexed = apex(beta.to_point(), gamma.to_point(), &domain).expect("distinct");
            pass &= apexed == alpha.to_point();
            let fv = fourth_vertex(alpha.to_point(), beta.to_point(), gamma.to_point(), &domain)
                .expect("is a corner");
            let analytic = one_plus_i
                .mul(half)
                .mul(beta)
                .sub(one_minus_i.mul(half).mul(gamma))
                .times_i()
                .neg();
            pass &= analytic.to_point() == fv;
            pass &= beta.add(gamma).sub(alpha).to_point() == fv;
        }
    }
    ok(
        "gaussian.corner_identities",
        pass,
        json!({"primes": p_list, "trials_per_prime": TRIALS}),
    )
}

/// Definition-level loops over all (x, y) parameter pairs, independent of
/// the pair-scan counters under test.
fn brute_counts(s: &PointSet) -> (u64, u64) {
    let domain = s.domain();
    let n = domain.point_count() as usize;
    let (mut corners, mut squares) = (0u64, 0u64);
    for xi in 0..n {
        let x = domain.point_at(xi);
        for yi in 0..n {
            let vy = domain.point_at(yi);
            let v = cornerlab_core::GridVector::new(i64::from(vy.x), i64::from(vy.y));
            if v.dx == 0 && v.dy == 0 {
                continue;
            }
            let Some(b) = domain.add(x, v) else { continue };
            let Some(c) = domain.add(x, domain.rot90(v)) else {
                continue;
            };
            if s.contains(x) && s.contains(b) && s.contains(c) {
                corners += 1;
                let Some(d) = domain.add(b, domain.rot90(v)) else {
                    continue;
                };
                if s.contains(d) {
                    squares += 1;
                }
            }
        }
    }
    (corners, squares)
}

fn counting_brute_force(seed: u64) -> Check {
    let mut pass = true;
    let mut exhaustive = 0u32;

    let d3 = Domain::prime_plane(3).expect("prime");
    let spec3 = PatternSpec::corners(3);
    for mask in 0u32..512 {
        let s = PointSet::from_points(
            d3,
            (0..9)
                .filter(|i| (mask >> i) & 1 == 1)
                .map(|i| d3.point_at(i)),
        );
        let (bc, bs) = brute_counts(&s);
        pass &= count_corners(&s, false) == bc;
        pass &= count_squares(&s, false) == bs;
        pass &= count_matrix_pattern(&s, &spec3, false).expect("prime plane") == bc;
        exhaustive += 1;
    }

    let mut random_sets = 0u32;
    for &p in &[5u32, 7] {
        let domain = Domain::prime_plane(p).expect("prime");
        let spec = PatternSpec::corners(p);
        pass &= {
            let full = PointSet::full(domain);
            let (bc, bs) = brute_counts(&full);
            count_corners(&full, false) == bc && count_squares(&full, false) == bs
        };
        for i in 0..25u64 {
            let density = 0.2 + 0.6 * (i as f64) / 24.0;
            let s = random_subset(domain, density, derive_seed(seed, u64::from(p) * 100 + i))
                .expect("density in range");
            let (bc, bs) = brute_counts(&s);
            pass &= count_corners(&s, false) == bc;
            pass &= count_squares(&s, false) == bs;
            pass &= count_matrix_pattern(&s, &spec, false).expect("prime plane") == bc;
            random_sets += 1;
        }
    }
    ok(
        "counting.brute_force_agreement",
        pass,
        json!({"exhaustive_sets_p3": exhaustive, "random_sets": random_sets}),
    )
}

fn sigma_identity(seed: u64) -> Check {
    let mut pass = true;
    let mut sets = 0u32;
    for &p in &[5u32, 7, 11] {
        let domain = Domain::prime_plane(p).expect("prime");
        for i in 0..1000u64 {
            let density = 0.1 + 0.8 * (i as f64) / 999.0;
            let s = random_subset(domain, density, derive_seed(seed, u64::from(p) * 10_000 + i))
                .expect("density in range");
            let d = decompose_sigma(&s, false).expect("prime plane");
            let sigma = BigRational::from(BigInt::from(count_corners(&s, false)));
            pass &= d.total == sigma;
            pass &= d.single_f_terms.iter().all(|t| t.is_zero());
            pass &= d.two_f_terms_pairwise_equal();
            pass &= d.term_sum() == d.total;
            sets += 1;
        }
    }
    ok(
        "sigma.decomposition_identity",
        pass,
        json!({"sets_checked": sets, "primes": [5, 7, 11]}),
    )
}

fn cover_uniformity() -> Check {
    let mut rows = Vec::new();
    let mut pass = true;
    let cases: Vec<(PatternSpec, u64)> = vec![
        (PatternSpec::corners(3), 1),
        (PatternSpec::corners(5), 1),
        (PatternSpec::squares(3), 9),
    ];
    for (spec, expected_fiber) in cases {
        let report = uniform_cover_check(&spec).expect("valid spec");
        pass &= report.surjective && report.uniform && report.fiber_size == expected_fiber;
        rows.push(json!({
            "p": spec.p,
            "k": spec.k(),
            "fiber_size": report.fiber_size,
            "tuple_count": report.tuple_count,
            "enumerated": report.enumerated,
        }));
    }
    ok("cover.fiber_uniformity", pass, Value::Array(rows))
}

fn search_exact_f3() -> Check {
    let domain = Domain::prime_plane(3).expect("prime");
    let exact = min_saturated_search(domain, SaturationKind::Corner, SearchMode::Exact, None, 0)
        .expect("within exact limit");
    let bb = min_saturated_search(domain, SaturationKind::Corner, SearchMode::BranchBound, None, 0)
        .expect("small domain");
    let report = check_saturated(&exact.best_set, SaturationKind::Corner);
    let pass = exact.best_size == 3
        && exact.status == SearchStatus::ProvedOptimal
        && bb.best_size == 3
        && bb.status == SearchStatus::ProvedOptimal
        && bb.best_set == exact.best_set
        && report.is_saturated;
    ok(
        "search.exact_f3_minimum",
        pass,
        json!({"best_size": exact.best_size, "witness_hex": exact.best_set.to_hex()}),
    )
}

fn search_checkpoint_roundtrip(seed: u64) -> Check {
    let domain = Domain::prime_plane(5).expect("prime");
    let full = branch_bound_search(domain, SaturationKind::Corner, None, seed, true, None, None)
        .expect("small domain");
    let mut last: Option<SearchCheckpoint> = None;
    let mut sink = |cp: &SearchCheckpoint| last = Some(cp.clone());
    let cfg = CheckpointConfig {
        interval: 25,
        sink: &mut sink,
    };
    let partial = branch_bound_search(
        domain,
        SaturationKind::Corner,
        Some(40),
        seed,
        true,
        None,
        Some(cfg),
    )
    .expect("small domain");
    let mut resumed_ok = false;
    if let Some(mut cp) = last {
        cp.budget = None;
        if let Ok(resumed) =
            branch_bound_search(domain, SaturationKind::Corner, None, seed, true, Some(cp), None)
        {
            resumed_ok = resumed.best_size == full.best_size
                && resumed.best_set == full.best_set
                && resumed.status == SearchStatus::ProvedOptimal;
        }
    }
    ok(
        "search.checkpoint_roundtrip",
        resumed_ok,
        json!({"full_size": full.best_size, "partial_size": partial.best_size}),
    )
}

fn extremal_grid_trend(grid_list: &[u32], seed: u64) -> Check {
    let mut sides: Vec<u32> = grid_list.to_vec();
    sides.sort_unstable();
    sides.dedup();
    let domains: Vec<Domain> = sides
        .iter()
        .map(|&n| Domain::integer_grid(n).expect("validated"))
        .collect();
    let rows = density_table(&ExtremalKind::Corner, &domains, ExtremalMode::Heuristic, None, seed)
        .expect("no matrix kinds");
    let mut pass = true;
    let mut out = Vec::new();
    let mut prev = 0u32;
    for ((row, density), domain) in rows.iter().zip(&domains) {
        pass &= row.max_found >= prev;
        prev = row.max_found;
        let witness = PointSet::from_hex(*domain, &row.witness).expect("row witness parses");
        pass &= witness.len() == row.max_found;
        pass &= count_config(&witness, &ExtremalKind::Corner).expect("corner kind") == 0;
        out.push(json!({
            "n": row.size,
            "max_found": row.max_found,
            "density": density.to_string(),
        }));
    }
    ok("extremal.grid_trend", pass, Value::Array(out))
}

fn ramsey_all_red() -> Check {
    let domain = Domain::prime_plane(5).expect("prime");
    let coloring = Coloring::solid(domain, 2, 0).expect("valid");
    let counts = mono_corner_counts(&coloring, None).expect("plane, two colors");
    ok(
        "ramsey.all_red_counts",
        counts.sigma_r == 600 && counts.sigma_b == 0,
        json!({"sigma_r": counts.sigma_r, "sigma_b": counts.sigma_b}),
    )
}

fn ramsey_audit(seed: u64) -> Check {
    let domain = Domain::prime_plane(7).expect("prime");
    let mut pass = true;
    for i in 0..20u64 {
        let coloring = Coloring::random(domain, 2, derive_seed(seed, 777 + i)).expect("valid");
        let audit = mono_decomposition_audit(&coloring).expect("plane, two colors");
        pass &= audit.exact_main.clone() + audit.correction_sum.clone() == audit.sigma_total;
        for color in 0..2u16 {
            pass &= GridFunction::balanced_indicator(&coloring.class(color))
                .sum()
                .is_zero();
        }
    }
    ok(
        "ramsey.decomposition_audit",
        pass,
        json!({"colorings_checked": 20, "p": 7}),
    )
}

fn ramsey_qr() -> Check {
    let qrs: Vec<u32> = (1..7)
        .filter(|&x| is_quadratic_residue(x, 7).expect("nonzero"))
        .collect();
    ok("ramsey.qr_table_mod7", qrs == vec![1, 2, 4], json!({"residues": qrs}))
}

/// For covering pairs (beta, gamma) with their apex inside the set, the sums
/// (1+i)beta + (1-i)gamma land in the doubled set 2S, and the distinct
/// differences match both probe counters.
fn katz_tao_containment(seed: u64) -> Check {
    let mut pass = true;
    let mut rows = Vec::new();
    for &p in &[7u32, 11] {
        let domain = Domain::prime_plane(p).expect("prime");
        let result = min_saturated_search(
            domain,
            SaturationKind::SquareCover,
            SearchMode::Greedy,
            None,
            derive_seed(seed, u64::from(p)),
        )
        .expect("greedy always succeeds");
        let set = &result.best_set;
        let probe = katz_tao_probe(set).expect("p = 3 mod 4");

        let mut doubled = vec![false; domain.point_count() as usize];
        for q in set.iter() {
            let two_q = GaussianElem::from_point(q, &domain).expect("plane").scale(2);
            doubled[domain.index(two_q.to_point())] = true;
        }
        let one_plus_i = GaussianElem::new(1, 1, p);
        let one_minus_i = GaussianElem::new(1, -1, p);
        let mut diff_seen = vec![false; domain.point_count() as usize];
        let mut covered_seen = vec![false; domain.point_count() as usize];
        let mut pairs = 0u64;
        let members = set.points_vec();
        for &beta in &members {
            for &gamma in &members {
                if beta == gamma {
                    continue;
                }
                let apx = apex(beta, gamma, &domain).expect("distinct");
                if !set.contains(apx) {
                    continue;
                }
                pairs += 1;
                let gb = GaussianElem::from_point(beta, &domain).expect("plane");
                let gg = GaussianElem::from_point(gamma, &domain).expect("plane");
                let a = one_plus_i.mul(gb);
                let b = one_minus_i.mul(gg);
                pass &= doubled[domain.index(a.add(b).to_point())];
                diff_seen[domain.index(a.sub(b).to_point())] = true;
                // a - b = 2i * (fourth vertex of the covering square)
                let fourth = gb.add(gg).sub(GaussianElem::from_point(apx, &domain).expect("plane"));
                covered_seen[domain.index(fourth.to_point())] = true;
            }
        }
        let diffs = diff_seen.iter().filter(|&&v| v).count() as u64;
        let covered = covered_seen.iter().filter(|&&v| v).count() as u64;
        pass &= pairs == probe.g_size;
        pass &= diffs == probe.diffset_size;
        pass &= covered == probe.covered;
        pass &= diffs == covered;
        rows.push(json!({
            "p": p,
            "set_size": set.len(),
            "g_size": pairs,
            "covered": covered,
        }));
    }
    ok("katz_tao.sum_containment", pass, Value::Array(rows))
}

fn determinism_reruns(seed: u64) -> Check {
    let m1 = minimize_g(DEFAULT_SEARCH_LIMIT, DEFAULT_TOLERANCE);
    let m2 = minimize_g(DEFAULT_SEARCH_LIMIT, DEFAULT_TOLERANCE);
    let domain = Domain::prime_plane(7).expect("prime");
    let g1 = min_saturated_search(domain, SaturationKind::Corner, SearchMode::Greedy, None, seed)
        .expect("greedy");
    let g2 = min_saturated_search(domain, SaturationKind::Corner, SearchMode::Greedy, None, seed)
        .expect("greedy");
    let pass = m1.g_min.to_bits() == m2.g_min.to_bits()
        && m1.t_star.to_bits() == m2.t_star.to_bits()
        && g1.best_set == g2.best_set;
    ok(
        "determinism.reruns_identical",
        pass,
        json!({"greedy_hex": g1.best_set.to_hex()}),
    )
}

pub fn run(p_list: &[u32], grid_list: &[u32], seed: u64, target: &OutTarget) -> Result<(), Failure> {
    if p_list.is_empty() {
        return Err(Failure::Usage("--p-list needs at least one odd prime".into()));
    }
    if grid_list.is_empty() {
        return Err(Failure::Usage("--grid-list needs at least one side".into()));
    }
    for &p in p_list {
        domain_from(Some(p), None)?;
    }
    for &n in grid_list {
        domain_from(None, Some(n))?;
    }

    let checks = vec![
        bessel_g_min(),
        bessel_first_root(),
        bessel_measure_bound(),
        saturation_column(p_list),
        gaussian_identities(p_list, seed),
        counting_brute_force(seed),
        sigma_identity(seed),
        cover_uniformity(),
        search_exact_f3(),
        search_checkpoint_roundtrip(seed),
        extremal_grid_trend(grid_list, seed),
        ramsey_all_red(),
        ramsey_audit(seed),
        ramsey_qr(),
        katz_tao_containment(seed),
        determinism_reruns(seed),
    ];

    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name)
        .collect();
    let all_passed = failed.is_empty();
    let results = json!({
        "all_passed": all_passed,
        "checks": checks
            .iter()
            .map(|c| json!({"name": c.name, "pass": c.pass, "measured": c.measured}))
            .collect::<Vec<_>>(),
    });

    let mut params = BTreeMap::new();
    params.insert("p_list".into(), json!(p_list));
    params.insert("grid_list".into(), json!(grid_list));
    emit_document("verify-claims", params, seed, "report", results, target)?;

    if all_passed {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{} of {} checks failed: {}",
            failed.len(),
            checks.len(),
            failed.join(", ")
        )))
    }
}
