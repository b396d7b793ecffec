use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use fixcalc_core::{
    barycentric_subdivide, catalog, comb_index, gen, index_oracle, lefschetz_homology, lefschetz_hopf, riemann_lower,
    SimplexSet,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lefschetz(c: &mut Criterion) {
    let inst = catalog::sphere_reflection(8).unwrap();
    c.bench_function("hopf/sphere-reflection-8", |b| {
        b.iter(|| lefschetz_hopf(black_box(&inst.map)))
    });
    c.bench_function("homology/sphere-reflection-8", |b| {
        b.iter(|| lefschetz_homology(black_box(&inst.map)))
    });

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = Arc::new(gen::random_complex(&mut rng, 7, 3, 40));
    let f = gen::random_self_map(&mut rng, &x);
    c.bench_function("homology/random-40", |b| b.iter(|| lefschetz_homology(black_box(&f))));
    let sd = barycentric_subdivide(&x);
    let sf = fixcalc_core::maps::subdivide_map(&f, &sd);
    c.bench_function("homology/random-40-subdivided", |b| {
        b.iter(|| lefschetz_homology(black_box(&sf)))
    });
}

fn index(c: &mut Criterion) {
    let inst = catalog::sphere_rotation(8).unwrap();
    let full = SimplexSet::full(inst.complex());
    c.bench_function("comb_index/sphere-rotation-8", |b| {
        b.iter(|| comb_index(black_box(&inst.map), black_box(&full)).unwrap())
    });
    c.bench_function("oracle/sphere-rotation-8", |b| {
        b.iter(|| index_oracle(black_box(&inst.map), black_box(&full)).unwrap())
    });
}

fn riemann(c: &mut Criterion) {
    let inst = catalog::path_reflection();
    let h = inst.values.clone().unwrap();
    c.bench_function("riemann_lower/path-reflection-16", |b| {
        b.iter(|| riemann_lower(black_box(&h), black_box(&inst.map), 16).unwrap())
    });
}

criterion_group!(benches, lefschetz, index, riemann);
criterion_main!(benches);
