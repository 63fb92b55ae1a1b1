//! Criterion benchmarks for the hot paths: law checking, morphism
//! checking, and symbolic quantifier evaluation.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use fibra::fibered::{check_morphism, pointwise_hom_morphism};
use fibra::propcat::{check_fa, Elem};
use fibra::rat;
use fibra_bench::{fuzzy_host, lukasiewicz_host, powerset_host};

fn bench_check_fa(c: &mut Criterion) {
    let pow = powerset_host();
    c.bench_function("check_fa powerset", |b| {
        b.iter(|| black_box(check_fa(black_box(&pow))).ok())
    });
    let fuzzy = fuzzy_host();
    c.bench_function("check_fa fuzzy (probed)", |b| {
        b.iter(|| black_box(check_fa(black_box(&fuzzy))).ok())
    });
}

fn bench_check_morphism(c: &mut Criterion) {
    let l5 = lukasiewicz_host(5, 2);
    let l2 = lukasiewicz_host(2, 2);
    let f = pointwise_hom_morphism("l5->l2", &l5, &l2, &[0, 0, 0, 0, 1]).unwrap();
    c.bench_function("check_morphism chain collapse", |b| {
        b.iter(|| black_box(check_morphism(black_box(&f))).ok())
    });
}

fn bench_fuzzy_quantifier(c: &mut Criterion) {
    let fuzzy = fuzzy_host();
    let atom = fuzzy.concrete.as_ref().unwrap().atom_object("B").unwrap();
    let half = Elem::Fuz(vec![rat(1, 2), rat(1, 2)]);
    c.bench_function("Oprod of the constant 1/2 predicate", |b| {
        b.iter(|| {
            fuzzy
                .quant(black_box("Oprod"), atom, fuzzy.base.terminal, &half)
                .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_check_fa,
    bench_check_morphism,
    bench_fuzzy_quantifier
);
criterion_main!(benches);
