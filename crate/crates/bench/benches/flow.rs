use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use maslov_core::flow::{spectral_flow, CoorientedCurve, FlowOptions, FnFamily, Operator};
use maslov_core::gap::gap;
use maslov_core::maslov::{maslov_index, MaslovOptions};
use maslov_core::random::{self, CurveRecipe, RandomLagrangianCurve};
use maslov_core::relation::{spectral_projection, PencilRelation, SpectralWindow};
use maslov_core::{c, Metric, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(11)
}

fn bench_maslov(cr: &mut Criterion) {
    let mut g = cr.benchmark_group("maslov_index");
    g.sample_size(20);
    let tol = Tolerances::default();
    let opts = MaslovOptions::default();
    for p in [1, 2, 4] {
        let recipe = CurveRecipe { p, vary_form: true, start_intersection: 1, speed: 6.0, move_mu: true, closed: false };
        let curve = RandomLagrangianCurve::new(recipe, &mut rng());
        g.bench_with_input(BenchmarkId::from_parameter(p), &curve, |b, cv| {
            b.iter(|| maslov_index(black_box(cv), &tol, &opts).unwrap().value)
        });
    }
    g.finish();
}

fn bench_flow(cr: &mut Criterion) {
    let mut g = cr.benchmark_group("spectral_flow_unitary");
    let tol = Tolerances::default();
    let axis = CoorientedCurve::positive_real_axis();
    for n in [4, 16] {
        let h = random::hermitian(n, 8.0, &mut rng());
        let flow = random::PhaseFlow::new(&h);
        let fam = FnFamily::new(0.0, 1.0, |s| Ok(Operator::Matrix(flow.at(s))));
        g.bench_with_input(BenchmarkId::from_parameter(n), &fam, |b, f| {
            b.iter(|| spectral_flow(black_box(f), &axis, &tol, &FlowOptions::default()).unwrap().total)
        });
    }
    g.finish();
}

fn bench_gap(cr: &mut Criterion) {
    let mut g = cr.benchmark_group("gap");
    for n in [8, 32] {
        let mut r = rng();
        let metric = Arc::new(Metric::new(random::hpd(n, 0.5, 2.0, &mut r)).unwrap());
        let (m, k) = (random::frame(&metric, n / 2, &mut r), random::frame(&metric, n / 2, &mut r));
        g.bench_function(BenchmarkId::from_parameter(n), |b| b.iter(|| gap(black_box(&m), black_box(&k)).unwrap().gap));
    }
    g.finish();
}

fn bench_projection(cr: &mut Criterion) {
    let tol = Tolerances::default();
    let mut r = rng();
    let n = 16;
    let e = random::gaussian(n, n, &mut r);
    let f = random::gaussian(n, n, &mut r);
    let rel = PencilRelation::new(e, f, &tol).unwrap();
    let w = SpectralWindow::disk(c(0.0, 0.0), 1.0);
    cr.bench_function("spectral_projection_16", |b| b.iter(|| spectral_projection(black_box(&rel), &w, &tol).map(|p| p.rank)));
}

criterion_group!(benches, bench_maslov, bench_flow, bench_gap, bench_projection);
criterion_main!(benches);
