use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ctxgraph::bounds::{fractional_packing, independence_number, lovasz_theta};
use ctxgraph::boxes::{is_local, pr_box, singlet_chsh_box};
use ctxgraph::kscolor::{
    classify_colorability, p33_vectors, peres_mermin_square, verify_multiplicative_proof,
    ColoringProblem,
};
use ctxgraph::numkernel::eig_sym;
use ctxgraph_bench::{symmetric_matrix, theta_graphs};

fn graph_bounds(c: &mut Criterion) {
    let mut group = c.benchmark_group("bounds");
    for (name, g) in theta_graphs() {
        group.bench_function(format!("theta/{name}"), |b| {
            b.iter(|| lovasz_theta(black_box(&g), None).unwrap())
        });
        group.bench_function(format!("alpha_star/{name}"), |b| {
            b.iter(|| fractional_packing(black_box(&g), None).unwrap().value)
        });
        group.bench_function(format!("alpha/{name}"), |b| {
            b.iter(|| independence_number(black_box(&g)).0)
        });
    }
    group.finish();
}

fn eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("eig_sym");
    for n in [8, 16, 32] {
        let m = symmetric_matrix(n);
        group.bench_function(format!("n{n}"), |b| {
            b.iter(|| eig_sym(black_box(&m)).unwrap())
        });
    }
    group.finish();
}

fn locality(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_local");
    let pr = pr_box(2, 0.5).unwrap();
    let singlet = singlet_chsh_box();
    group.bench_function("pr_half", |b| {
        b.iter(|| is_local(black_box(&pr), 1e-9).unwrap().local)
    });
    group.bench_function("singlet", |b| {
        b.iter(|| is_local(black_box(&singlet), 1e-9).unwrap().local)
    });
    group.finish();
}

fn kochen_specker(c: &mut Criterion) {
    let mut group = c.benchmark_group("kscolor");
    group.sample_size(10);
    let cp = ColoringProblem::from_vectors(&p33_vectors());
    group.bench_function("p33", |b| b.iter(|| classify_colorability(black_box(&cp))));
    let square = peres_mermin_square();
    group.bench_function("peres_mermin", |b| {
        b.iter(|| {
            verify_multiplicative_proof(black_box(&square))
                .unwrap()
                .is_proof()
        })
    });
    group.finish();
}

criterion_group!(benches, graph_bounds, eigen, locality, kochen_specker);
criterion_main!(benches);
