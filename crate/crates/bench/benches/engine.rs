use criterion::{criterion_group, criterion_main, Criterion};

use residua::forms::twisted_form_basis;
use residua::griffiths::vanishing_hodge_numbers;
use residua::matrix::rat_int;
use residua::poly::quotient_ring_dim;
use residua::universal::UniversalEngine;
use residua::{HomogPoly, ProblemSpec};

fn fermat(n: usize, d: usize) -> HomogPoly {
    let mut f = HomogPoly::zero(n + 1, d);
    for i in 0..=n {
        let mut e = vec![0u8; n + 1];
        e[i] = d as u8;
        f.add_term(e, rat_int(1));
    }
    f
}

fn bench_quotient_ring(c: &mut Criterion) {
    let f = fermat(3, 4);
    c.bench_function("quotient_ring_dim quartic surface mid degree", |b| {
        b.iter(|| quotient_ring_dim(std::hint::black_box(&f), 8).unwrap())
    });
}

fn bench_hodge_k3(c: &mut Criterion) {
    let f = fermat(3, 4);
    c.bench_function("vanishing_hodge_numbers K3", |b| {
        b.iter(|| vanishing_hodge_numbers(std::hint::black_box(&f)).unwrap())
    });
}

fn bench_form_basis(c: &mut Criterion) {
    c.bench_function("twisted_form_basis n=3 p=2 m=8", |b| {
        b.iter(|| twisted_form_basis(3, 2, std::hint::black_box(8)))
    });
}

fn bench_char_module(c: &mut Criterion) {
    let spec = ProblemSpec::new(1, 3).unwrap();
    c.bench_function("char_module_piece n=1 d=3 k=3", |b| {
        b.iter(|| {
            // fresh engine so the per-instance rank cache cannot hide the work
            let engine = UniversalEngine::new(&spec);
            engine.char_module_piece(std::hint::black_box(3))
        })
    });
}

criterion_group!(
    benches,
    bench_quotient_ring,
    bench_hodge_k3,
    bench_form_basis,
    bench_char_module
);
criterion_main!(benches);
