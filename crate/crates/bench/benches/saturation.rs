use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cornerlab_core::saturation::{
    check_saturated, min_saturated_search, SaturationKind, SearchMode,
};
use cornerlab_core::{random_subset, Domain};

fn bench_saturation(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_saturated_corner");
    for &p in &[11u32, 31, 61] {
        let domain = Domain::prime_plane(p).unwrap();
        let s = random_subset(domain, 0.3, 7).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(p), &s, |b, s| {
            b.iter(|| check_saturated(s, SaturationKind::Corner))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("greedy_corner_sat");
    for &p in &[11u32, 31, 61] {
        let domain = Domain::prime_plane(p).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(p), &domain, |b, &d| {
            b.iter(|| {
                min_saturated_search(d, SaturationKind::Corner, SearchMode::Greedy, None, 0)
                    .unwrap()
            })
        });
    }
    group.finish();

    c.bench_function("branch_bound_f5_corner", |b| {
        let domain = Domain::prime_plane(5).unwrap();
        b.iter(|| {
            min_saturated_search(domain, SaturationKind::Corner, SearchMode::BranchBound, None, 0)
                .unwrap()
        })
    });
}

criterion_group!(benches, bench_saturation);
criterion_main!(benches);
