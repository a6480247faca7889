//! Random instances on the K3 lattice for property tests and benchmarks.
//!
//! Nilpotents are wedge sums `Σ c_ij x_i∧x_j` over a totally isotropic triple
//! (index 2) or `e∧u` with `e` isotropic, `u ∈ e^⊥`, `Q(u,u) ≠ 0` (index 3),
//! conjugated by products of unipotent lattice automorphisms.

use std::sync::Arc;

use rand::Rng;

use crate::lattice::{k3_basis, QuadraticLattice};
use crate::matrix::Matrix;
use crate::nilpotent::{exp_nilpotent, nilpotency_index, wedge, InfinitesimalIsometry, LatticeAutomorphism};
use crate::scalar::{int, GaussianRational, Rational};

/// Integer vector with entries in `-bound..=bound`.
pub fn small_vector<R: Rng>(rng: &mut R, len: usize, bound: i64) -> Vec<Rational> {
    (0..len).map(|_| int(rng.gen_range(-bound..=bound))).collect()
}

/// Rational with numerator in `-bound..=bound` and denominator in `1..=bound`.
pub fn small_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    Rational::new(rng.gen_range(-bound..=bound).into(), rng.gen_range(1..=bound.max(1)).into())
}

pub fn small_gaussian<R: Rng>(rng: &mut R, bound: i64) -> GaussianRational {
    GaussianRational::new(small_rational(rng, bound), small_rational(rng, bound))
}

/// `v − Q(v, e) f` for `Q(e, f) = 1`: a vector orthogonal to `e`.
fn orthogonalize(l: &QuadraticLattice, v: &[Rational], e: &[Rational], f: &[Rational]) -> Vec<Rational> {
    let c = l.pairing(v, e);
    v.iter().zip(f).map(|(x, y)| x - &c * y).collect()
}

/// `exp(e_i∧u)` or `exp(f_i∧u)` for a random hyperbolic basis vector and random `u` orthogonal to it.
pub fn random_unipotent<R: Rng>(rng: &mut R, lattice: &Arc<QuadraticLattice>) -> LatticeAutomorphism {
    loop {
        let i = rng.gen_range(1..=3);
        let (x, y) = if rng.gen_bool(0.5) { (k3_basis::e(i), k3_basis::f(i)) } else { (k3_basis::f(i), k3_basis::e(i)) };
        let v = small_vector(rng, k3_basis::RANK, 1);
        let u = orthogonalize(lattice, &v, &x, &y);
        let m = wedge(lattice, &x, &u).expect("rank-length vectors");
        if m.is_zero() {
            continue;
        }
        return exp_nilpotent(&m).expect("e∧u is nilpotent for isotropic e and u ⊥ e");
    }
}

/// `T N T⁻¹`.
pub fn conjugate(n: &InfinitesimalIsometry, t: &LatticeAutomorphism) -> InfinitesimalIsometry {
    let inv = t.matrix().inverse().expect("automorphisms are invertible");
    let m: Matrix<Rational> = &(t.matrix() * n.matrix()) * &inv;
    InfinitesimalIsometry::new(n.lattice().clone(), m).expect("conjugation by an isometry")
}

/// Random nilpotent infinitesimal isometry of the K3 lattice with the given index (2 or 3).
pub fn random_nilpotent<R: Rng>(rng: &mut R, lattice: &Arc<QuadraticLattice>, index: usize) -> InfinitesimalIsometry {
    assert!(index == 2 || index == 3, "index must be 2 or 3");
    use k3_basis::{e, f};
    loop {
        let base = if index == 2 {
            let triple = [e(1), e(2), e(3)];
            let mut acc = InfinitesimalIsometry::zero(lattice.clone());
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                let c = int(rng.gen_range(-2..=2));
                let w = wedge(lattice, &triple[a], &triple[b]).expect("rank-length vectors");
                acc = acc.add(&w.scale(&c)).expect("same lattice");
            }
            acc
        } else {
            let v = small_vector(rng, k3_basis::RANK, 2);
            let u = orthogonalize(lattice, &v, &e(1), &f(1));
            wedge(lattice, &e(1), &u).expect("rank-length vectors")
        };
        if nilpotency_index(&base).ok() != Some(index) {
            continue;
        }
        let mut n = base;
        for _ in 0..rng.gen_range(1..=2) {
            n = conjugate(&n, &random_unipotent(rng, lattice));
        }
        return n;
    }
}
