use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rwlimit::hull_geometry::{convex_hull, mean_width, volume, PointSet};
use rwlimit::path_metrics::rho_skorokhod;
use rwlimit::rw_engine::{clt_trajectory, sample_walk, IncrementLaw, TrajectoryKind};
use rwlimit::CovSpec;

fn walks(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_walk");
    for d in [1, 3] {
        let law = IncrementLaw::gaussian(vec![0.0; d], CovSpec::identity(d)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(d), &law, |b, law| {
            let mut seed = 0;
            b.iter(|| {
                seed += 1;
                sample_walk(law, 10_000, seed).unwrap()
            })
        });
    }
    g.finish();
}

fn skorokhod(c: &mut Criterion) {
    let law = IncrementLaw::rademacher(1).unwrap();
    let mut g = c.benchmark_group("rho_skorokhod");
    g.sample_size(20);
    for n in [20, 100] {
        let f = clt_trajectory(&sample_walk(&law, n, 1).unwrap(), TrajectoryKind::Step, &[0.0]).unwrap();
        let h = clt_trajectory(&sample_walk(&law, n, 2).unwrap(), TrajectoryKind::Step, &[0.0]).unwrap();
        g.bench_function(BenchmarkId::from_parameter(n), |b| b.iter(|| rho_skorokhod(&f, &h).unwrap()));
    }
    g.finish();
}

fn hulls(c: &mut Criterion) {
    let mut g = c.benchmark_group("hull");
    for d in [2, 3] {
        let law = IncrementLaw::gaussian(vec![0.0; d], CovSpec::identity(d)).unwrap();
        let walk = sample_walk(&law, 10_000, 7).unwrap();
        let points = PointSet::from_walk(&walk, 0.01);
        g.bench_function(format!("convex_hull_d{d}"), |b| b.iter(|| convex_hull(&points)));
        let body = convex_hull(&points);
        g.bench_function(format!("mean_width_d{d}"), |b| b.iter(|| mean_width(&body, 1024).unwrap()));
        g.bench_function(format!("volume_d{d}"), |b| b.iter(|| volume(&body)));
    }
    g.finish();
}

criterion_group!(benches, walks, skorokhod, hulls);
criterion_main!(benches);
