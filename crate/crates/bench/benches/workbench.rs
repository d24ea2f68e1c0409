use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use supermagic::composition::symmetric_by_name;
use supermagic::magicsquare::{form_b, magic};
use supermagic::models::{br25, el53};
use supermagic::structconst::{check_super_jacobi, derivations, is_simple};
use supermagic::triality::tri;
use supermagic::{Field, FieldMatrix};

fn gf(p: u32) -> Field {
    Field::new(p).unwrap()
}

fn elimination(c: &mut Criterion) {
    let f = gf(3);
    let n = 200;
    let data: Vec<u32> = (0..n * n).map(|k| ((k * 7 + k / n * 13) % 3) as u32).collect();
    let m = FieldMatrix::from_data(f, n, n, data).unwrap();
    c.bench_function("rank 200x200 over GF(3)", |b| b.iter(|| black_box(&m).rank()));
    c.bench_function("kernel 200x200 over GF(3)", |b| b.iter(|| black_box(&m).kernel()));
}

fn constructions(c: &mut Criterion) {
    let f = gf(3);
    let s8 = symmetric_by_name("S8", f).unwrap();
    let s12 = symmetric_by_name("S1.2", f).unwrap();
    c.bench_function("tri(S8)", |b| b.iter(|| tri(black_box(&s8)).unwrap()));
    c.bench_function("magic(S8,S1.2)", |b| b.iter(|| magic(black_box(&s8), black_box(&s12)).unwrap()));
    let g = magic(&s8, &s12).unwrap();
    c.bench_function("form_b on g(S8,S1.2)", |b| b.iter(|| form_b(black_box(&g)).unwrap()));
    c.bench_function("br(2;5)", |b| b.iter(|| br25(gf(5)).unwrap()));
}

fn checks(c: &mut Criterion) {
    let f = gf(3);
    let s8 = symmetric_by_name("S8", f).unwrap();
    let e8 = magic(&s8, &s8).unwrap();
    let mut group = c.benchmark_group("checks");
    group.sample_size(10);
    group.bench_function("super-Jacobi on e8", |b| b.iter(|| check_super_jacobi(black_box(&e8.algebra))));
    let e = el53(f).unwrap();
    group.bench_function("simplicity of el(5;3)", |b| b.iter(|| is_simple(black_box(e.algebra()))));
    group.bench_function("derivations of el(5;3)", |b| b.iter(|| derivations(black_box(e.algebra()))));
    group.finish();
}

criterion_group!(benches, elimination, constructions, checks);
criterion_main!(benches);
