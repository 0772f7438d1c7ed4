use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use pointpair_core::bounds::{estimate_quasimetric_constant, find, verify_bound, DEFAULT_TOL};
use pointpair_core::geometry::{DomainShape, PairSampler};
use pointpair_core::search::{conjecture_scan, RefineOptions};

fn campaigns(c: &mut Criterion) {
    let mut g = c.benchmark_group("campaign");
    g.sample_size(10);
    let b = find("thm3.1").unwrap();
    for d in [DomainShape::half_space(2).unwrap(), DomainShape::unit_ball(2).unwrap()] {
        let s = PairSampler::new(d.clone(), 0, 10_000);
        g.bench_function(format!("thm3.1_{}_1e4", d.name()), |bn| {
            bn.iter(|| verify_bound(&b, &d, 2.0, &s, DEFAULT_TOL).unwrap())
        });
    }
    let h = DomainShape::half_space(2).unwrap();
    let s = PairSampler::new(h.clone(), 0, 10_000);
    g.bench_function("quasi_halfspace_1e4", |bn| {
        bn.iter(|| estimate_quasimetric_constant(&h, 4.0, &s, None).unwrap())
    });
    let disk = DomainShape::unit_ball(2).unwrap();
    let s = PairSampler::new(disk, 0, 10_000);
    let opts = RefineOptions {
        starts: 4,
        pool: 256,
        ..RefineOptions::with_seed(0)
    };
    g.bench_function("conjecture_scan_refined", |bn| {
        bn.iter(|| conjecture_scan(4.0, Complex64::new(0.5, 0.0), &s, Some(&opts)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, campaigns);
criterion_main!(benches);
