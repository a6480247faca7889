use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weakfan_core::generators::{random_nilpotent, small_vector};
use weakfan_core::{
    exp_nilpotent, image, kernel, lattice_k3, log_unipotent, nilpotency_index, verify_weight_filtration, wedge,
    weight_filtration, InfinitesimalIsometry, Matrix, QuadraticLattice, Rational, Subspace, WeightFiltration,
};

fn k3() -> Arc<QuadraticLattice> {
    Arc::new(lattice_k3())
}

/// W_{c+k} = Σ_{j ≥ max(0, −k)} ker N^{k+j+1} ∩ im N^j.
fn oracle(n: &InfinitesimalIsometry, center: i32) -> WeightFiltration {
    let index = nilpotency_index(n).unwrap() as i32;
    let dim = n.lattice().rank();
    let pow = |k: i32| n.matrix().pow(k.max(0) as u32);
    let mut steps = BTreeMap::new();
    for k in -index..=index {
        let mut w = Subspace::zero(dim);
        for j in (-k).max(0)..=index {
            let piece = kernel(&pow(k + j + 1)).intersect(&image(&pow(j))).unwrap();
            w = w.sum(&piece).unwrap();
        }
        steps.insert(center + k, w);
    }
    WeightFiltration::new(center, dim, steps).unwrap()
}

#[test]
fn wedge_is_an_infinitesimal_isometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let l = k3();
    let g = l.gram().clone();
    for _ in 0..100 {
        let u = small_vector(&mut rng, 22, 3);
        let v = small_vector(&mut rng, 22, 3);
        let n = wedge(&l, &u, &v).unwrap();
        let m = n.matrix();
        assert!((&(&m.transpose() * &g) + &(&g * m)).is_zero());
        let x = small_vector(&mut rng, 22, 2);
        let y = small_vector(&mut rng, 22, 2);
        assert_eq!(l.pairing(&n.apply(&x), &y), -l.pairing(&x, &n.apply(&y)));
    }
}

#[test]
fn exp_log_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let l = k3();
    let g = l.gram().clone();
    for i in 0..50 {
        let n = random_nilpotent(&mut rng, &l, 2 + i % 2);
        let t = exp_nilpotent(&n).unwrap();
        assert_eq!(&(&t.matrix().transpose() * &g) * t.matrix(), g);
        assert_eq!(log_unipotent(&t).unwrap(), n);
    }
}

#[test]
fn weight_filtration_matches_kernel_image_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let l = k3();
    for i in 0..40 {
        let n = random_nilpotent(&mut rng, &l, 2 + i % 2);
        let center = rng.gen_range(-2..=3);
        let w = weight_filtration(&n, center).unwrap();
        assert_eq!(w, oracle(&n, center));
        assert!(verify_weight_filtration(&n, &w).unwrap().is_valid());
    }
}

#[test]
fn weight_filtration_is_unique() {
    // every single-step change to a strictly increasing position breaks an axiom
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let l = k3();
    for i in 0..20 {
        let n = random_nilpotent(&mut rng, &l, 2 + i % 2);
        let w = weight_filtration(&n, 2).unwrap();
        let (lo, hi) = w.range();
        for j in lo + 1..hi {
            let (below, at, above) = (w.get(j - 1), w.get(j), w.get(j + 1));
            if below != at {
                let v = verify_weight_filtration(&n, &w.with_step(j, below.clone()).unwrap()).unwrap();
                assert!(!v.is_valid(), "lowering W_{j} went undetected");
            }
            if above != at {
                let v = verify_weight_filtration(&n, &w.with_step(j, above.clone()).unwrap()).unwrap();
                assert!(!v.is_valid(), "raising W_{j} went undetected");
            }
        }
        let off_center = WeightFiltration::new(2, 22, w.shifted(1).steps().clone()).unwrap();
        assert!(!verify_weight_filtration(&n, &off_center).unwrap().is_valid());
    }
}

#[test]
fn weight_filtration_is_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let l = k3();
    for i in 0..10 {
        let n = random_nilpotent(&mut rng, &l, 2 + i % 2);
        let s = Rational::new(rng.gen_range(1..9).into(), rng.gen_range(1..9).into());
        assert_eq!(weight_filtration(&n.scale(&s), 1).unwrap(), weight_filtration(&n, 1).unwrap());
        assert_eq!(weight_filtration(&n.neg(), 1).unwrap(), weight_filtration(&n, 1).unwrap());
    }
}

#[test]
fn zero_matrix_is_type_one() {
    let l = k3();
    let z = InfinitesimalIsometry::new(l.clone(), Matrix::zeros(22, 22)).unwrap();
    assert_eq!(nilpotency_index(&z).unwrap(), 1);
    assert_eq!(weight_filtration(&z, 2).unwrap(), WeightFiltration::pure(2, 22));
}
