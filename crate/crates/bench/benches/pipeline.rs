use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weakfan_core::generators::random_nilpotent;
use weakfan_core::search::search_period;
use weakfan_core::{example_fan, lattice_k3, lmhs_check, model_operators, validate_weak_fan, weight_filtration};

fn linear_algebra(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let l = Arc::new(lattice_k3());
    let n = random_nilpotent(&mut rng, &l, 3);
    c.bench_function("rref_22x22", |b| b.iter(|| black_box(n.matrix()).rref()));
    c.bench_function("weight_filtration_index_3", |b| b.iter(|| weight_filtration(black_box(&n), 2).unwrap()));
}

fn fan_and_orbits(c: &mut Criterion) {
    let fan = example_fan();
    c.bench_function("validate_weak_fan_example", |b| b.iter(|| validate_weak_fan(black_box(&fan), 2)));
    let m = model_operators();
    let p = search_period(&m.lattice);
    c.bench_function("lmhs_check_n1", |b| b.iter(|| lmhs_check(black_box(&m.n1), &p, 2).unwrap()));
}

criterion_group!(benches, linear_algebra, fan_and_orbits);
criterion_main!(benches);
