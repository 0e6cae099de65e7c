//! Benchmarks for the four hot kernels: noncommutative rewriting, skew
//! multiplication through the embedding, oracle interpolation, and full
//! graph construction. All arithmetic is exact, so these track the cost
//! of big-rational growth rather than flop counts.

use criterion::{criterion_group, criterion_main, Criterion};
use dq_core::dq::{pbw_normal_form, DqParams, FreeExpression, Phi};
use dq_core::graph::module_graph;
use dq_core::hc::{ActGen, ActionContext, Tableau};
use dq_core::rat::{rat_int, Rat};

fn quartic() -> DqParams {
    DqParams::new("0,0,0,0,1".parse().unwrap()).unwrap()
}

fn bench_pbw(c: &mut Criterion) {
    let params = quartic();
    let word: FreeExpression = "w*w*v*u".parse().unwrap();
    c.bench_function("pbw_normal_form w*w*v*u", |b| {
        b.iter(|| pbw_normal_form(std::hint::black_box(&word), &params).unwrap())
    });
}

fn bench_phi(c: &mut Criterion) {
    let phi = Phi::new(&"0,0,0,0,1".parse().unwrap()).unwrap();
    let relation: FreeExpression = "w*w - v*v*u - v*w".parse().unwrap();
    c.bench_function("phi on the square relation", |b| {
        b.iter(|| phi.apply(std::hint::black_box(&relation)))
    });
}

fn bench_oracle(c: &mut Criterion) {
    let params = quartic();
    let t = Tableau::t0(Rat::new(1.into(), 3.into()));
    c.bench_function("oracle solve for w at 1/3", |b| {
        b.iter(|| {
            let mut ctx = ActionContext::new(&params);
            ctx.oracle(ActGen::W, std::hint::black_box(&t)).unwrap()
        })
    });
}

fn bench_graph(c: &mut Criterion) {
    let params = DqParams::new("4,0,-5,0,1".parse().unwrap()).unwrap();
    let mut group = c.benchmark_group("module_graph");
    group.sample_size(10);
    group.bench_function("integral window 8", |b| {
        b.iter(|| module_graph(&params, &rat_int(0), 8, true).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_pbw, bench_phi, bench_oracle, bench_graph);
criterion_main!(benches);
