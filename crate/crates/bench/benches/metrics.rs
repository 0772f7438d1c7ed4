use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pointpair_core::geometry::{DomainShape, PairSampler, Point};
use pointpair_core::metrics::{gpp, j_star, s_metric, t_metric, SMode};
use pointpair_core::specfun::{ell_k, gamma2, lambda2_estimate};

fn domains() -> Vec<DomainShape> {
    vec![
        DomainShape::half_space(2).unwrap(),
        DomainShape::unit_ball(2).unwrap(),
        DomainShape::punctured_at_origin(2).unwrap(),
        DomainShape::strip(2, 1.0).unwrap(),
        DomainShape::ball_complement_in_box(2, 2.0, 1.0).unwrap(),
    ]
}

fn pairs(d: &DomainShape, n: usize) -> Vec<(Point, Point)> {
    PairSampler::new(d.clone(), 1, n).pairs().collect()
}

fn pointwise(c: &mut Criterion) {
    let mut g = c.benchmark_group("pointwise");
    for d in domains() {
        let ps = pairs(&d, 256);
        g.bench_with_input(BenchmarkId::new("gpp", d.name()), &ps, |b, ps| {
            b.iter(|| ps.iter().map(|(x, y)| gpp(&d, 2.0, x, y).unwrap()).sum::<f64>())
        });
        g.bench_with_input(BenchmarkId::new("jstar", d.name()), &ps, |b, ps| {
            b.iter(|| ps.iter().map(|(x, y)| j_star(&d, x, y).unwrap()).sum::<f64>())
        });
        g.bench_with_input(BenchmarkId::new("t", d.name()), &ps, |b, ps| {
            b.iter(|| ps.iter().map(|(x, y)| t_metric(&d, x, y).unwrap()).sum::<f64>())
        });
    }
    g.finish();
}

fn triangular_ratio(c: &mut Criterion) {
    let mut g = c.benchmark_group("s_metric");
    g.sample_size(20);
    for d in domains() {
        let ps = pairs(&d, 32);
        g.bench_with_input(BenchmarkId::new("closed_form", d.name()), &ps, |b, ps| {
            b.iter(|| {
                ps.iter()
                    .map(|(x, y)| s_metric(&d, x, y, SMode::ClosedForm).unwrap().value)
                    .sum::<f64>()
            })
        });
        g.bench_with_input(BenchmarkId::new("brute_force", d.name()), &ps, |b, ps| {
            b.iter(|| {
                ps.iter()
                    .map(|(x, y)| s_metric(&d, x, y, SMode::BruteForce).unwrap().value)
                    .sum::<f64>()
            })
        });
    }
    g.finish();
}

fn special_functions(c: &mut Criterion) {
    c.bench_function("ell_k", |b| b.iter(|| ell_k(black_box(0.9)).unwrap()));
    c.bench_function("gamma2", |b| b.iter(|| gamma2(black_box(1e4)).unwrap()));
    c.bench_function("lambda2_estimate", |b| {
        b.iter(|| lambda2_estimate(black_box(1e8)).unwrap())
    });
}

criterion_group!(benches, pointwise, triangular_ratio, special_functions);
criterion_main!(benches);
