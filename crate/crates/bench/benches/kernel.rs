use criterion::{black_box, criterion_group, criterion_main, Criterion};

use genmoon::abgrp::FiniteAbelianGroup;
use genmoon::bkm;
use genmoon::chars::{self, ShippedData};
use genmoon::emcoh::{self, AbelianCocycle3, Cochain2};
use genmoon::exact::Cyclotomic;
use genmoon::fps::{self, Conventions, Diagram};
use genmoon::lattice;

fn cyclotomic(c: &mut Criterion) {
    let a = &(&Cyclotomic::e(1, 12) + &Cyclotomic::e(5, 36)) + &Cyclotomic::from_integer(3);
    let b = &Cyclotomic::e(7, 24) - &Cyclotomic::e(1, 9);
    c.bench_function("cyclotomic mul conductor 72", |bn| bn.iter(|| black_box(&a) * black_box(&b)));
    c.bench_function("cyclotomic inverse", |bn| bn.iter(|| black_box(&a).inverse()));
}

fn series(c: &mut Criterion) {
    let db = ShippedData::load();
    let one = db.get("1A").unwrap().series.clone();
    let b4 = db.get("4B").unwrap().clone();
    c.bench_function("expand J to q^50", |bn| bn.iter(|| chars::expand_eta_combination(black_box(&one), 50).unwrap()));
    c.bench_function("s_transform 2A to q^20", |bn| {
        let e = db.get("2A").unwrap().series.clone();
        bn.iter(|| chars::s_transform(black_box(&e), 20).unwrap())
    });
    c.bench_function("fhat 4B (7,1)", |bn| bn.iter(|| chars::fhat(&db, &b4, 7, 1, 2).unwrap()));
}

fn cohomology(c: &mut Criterion) {
    let a = FiniteAbelianGroup::new(vec![4, 2]).unwrap();
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
    let f = Cochain2::random(&a, 8, true, &mut rng);
    let inv = emcoh::d2(&f).inverse();
    c.bench_function("d2 on Z/4xZ/2", |bn| bn.iter(|| emcoh::d2(black_box(&f))));
    c.bench_function("cocycle check on Z/4xZ/2", |bn| bn.iter(|| emcoh::cocycle_violation(black_box(&inv))));
    c.bench_function("trivialize coboundary on Z/4xZ/2", |bn| bn.iter(|| emcoh::trivialize(black_box(&inv)).unwrap()));
    let sup = AbelianCocycle3::super_sign();
    c.bench_function("trivialize super cocycle", |bn| bn.iter(|| emcoh::trivialize(black_box(&sup)).unwrap()));
}

fn lattices(c: &mut Criterion) {
    let t = "12|2+".parse().unwrap();
    c.bench_function("discriminant 12|2+", |bn| bn.iter(|| lattice::build_discriminant(black_box(t)).unwrap().rho_is_quadratic()));
}

fn embedding(c: &mut Criterion) {
    let e = fps::parse_exponents("1/2,1/3,-1/4,1/2,3/4,1/2").unwrap();
    c.bench_function("octagon 1 to order 6", |bn| {
        bn.iter(|| fps::check_diagram(black_box(&e), Diagram::Octagon1, 6, Conventions::default()).unwrap())
    });
}

fn roots(c: &mut Criterion) {
    let db = ShippedData::load();
    let b4 = db.get("4B").unwrap().clone();
    let mut g = c.benchmark_group("bkm");
    g.sample_size(20);
    g.bench_function("mult table 4B a<=4 |b|<=8", |bn| bn.iter(|| bkm::mult_table(&db, &b4, 4, 8).unwrap()));
    g.bench_function("denominator identity degree 6", |bn| bn.iter(|| bkm::denominator_check_1a(&db, 6).unwrap()));
    g.finish();
}

criterion_group!(benches, cyclotomic, series, cohomology, lattices, embedding, roots);
criterion_main!(benches);
