use std::sync::Arc;

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weakfan_core::generators::{conjugate, random_nilpotent, random_unipotent, small_gaussian, small_rational};
use weakfan_core::k3_basis::{add, e, f, scale};
use weakfan_core::orbit::h_polynomial;
use weakfan_core::scalar::{frac, int, Field};
use weakfan_core::search::search_period;
use weakfan_core::{
    act, in_period_domain, lmhs_check, model_operators, orbit_condition, GaussianRational, InfinitesimalIsometry,
    PeriodVector,
};

type C = GaussianRational;

fn fixture_period() -> PeriodVector {
    let m = model_operators();
    // ω = −f1 − i(f2 + f3)
    let re = scale(&f(1), &int(-1));
    let im = scale(&add(&f(2), &f(3)), &int(-1));
    PeriodVector::from_parts(m.lattice.clone(), &re, &im).unwrap()
}

#[test]
fn brute_force_search_finds_the_fixture_period() {
    let m = model_operators();
    assert_eq!(search_period(&m.lattice), fixture_period());
}

#[test]
fn fixture_period_satisfies_the_orbit_condition() {
    let m = model_operators();
    let p = fixture_period();
    let d = in_period_domain(&p);
    assert!(d.q_omega_omega.is_zero());
    assert!(d.q_omega_conj.is_zero());
    let sum = m.n1.add(&m.n2).unwrap();
    for (n, slope) in [(&m.n1, 4), (&m.n2, 4), (&sum, 8)] {
        let v = orbit_condition(n, &p).unwrap();
        assert!(v.holds);
        assert_eq!(v.coefficients, vec![int(0), int(slope)]);
        let y0 = v.threshold.clone().unwrap();
        assert_eq!(y0, int(1));
        for dy in [1, 2, 17] {
            let y = &y0 + int(dy);
            assert!(v.evaluate(&y).is_positive());
            let moved = act(&C::new(int(0), y), n, &p).unwrap();
            assert!(in_period_domain(&moved).in_domain);
        }
    }
}

#[test]
fn fixture_period_gives_a_mixed_hodge_structure() {
    let m = model_operators();
    let p = fixture_period();
    for n in [&m.n1, &m.n2] {
        let r = lmhs_check(n, &p, 2).unwrap();
        assert!(r.is_mhs(), "{:?}", r.failures());
        let numbers: Vec<_> = r.pieces.iter().map(|g| (g.weight, g.hodge_numbers.clone())).collect();
        assert_eq!(
            numbers,
            vec![
                (1, vec![(0, 1, 1), (1, 0, 1)]),
                (2, vec![(1, 1, 18)]),
                (3, vec![(1, 2, 1), (2, 1, 1)]),
            ]
        );
    }
}

fn random_period(rng: &mut ChaCha8Rng) -> PeriodVector {
    let m = model_operators();
    let mut omega = vec![C::zero(); 22];
    while omega.iter().all(Zero::is_zero) {
        omega = (0..22).map(|_| if rng.gen_bool(0.3) { small_gaussian(rng, 3) } else { C::zero() }).collect();
    }
    PeriodVector::new(m.lattice.clone(), omega).unwrap()
}

fn random_operator(rng: &mut ChaCha8Rng) -> InfinitesimalIsometry {
    let m = model_operators();
    let index = rng.gen_range(2..=3);
    random_nilpotent(rng, &m.lattice, index)
}

#[test]
fn h_is_real_and_matches_closed_form() {
    // h(y) = Q(ω, exp(−2iyN) ω̄), so c_k = (−2i)^k / k! · Q(ω, N^k ω̄)
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..50 {
        let n = random_operator(&mut rng);
        let p = random_period(&mut rng);
        let h = h_polynomial(&n, &p).unwrap();
        assert!(h.iter().all(GaussianRational::is_real));
        let mg = n.matrix().to_gaussian();
        let mut v = p.conj();
        let mut coeff = C::one();
        let mut closed = Vec::new();
        for k in 0..3 {
            if k > 0 {
                v = mg.apply(&v);
                coeff = coeff * C::new(int(0), int(-2)) * C::from_rational(&frac(1, k));
            }
            closed.push(coeff.clone() * p.lattice().pairing(p.omega(), &v));
        }
        while closed.len() > 1 && closed.last().is_some_and(Zero::is_zero) {
            closed.pop();
        }
        assert_eq!(h, closed);
    }
}

#[test]
fn action_preserves_the_pairing() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let n = random_operator(&mut rng);
        let x = random_period(&mut rng);
        let y = random_period(&mut rng);
        let z = small_gaussian(&mut rng, 5);
        let (ex, ey) = (act(&z, &n, &x).unwrap(), act(&z, &n, &y).unwrap());
        let l = x.lattice();
        assert_eq!(l.pairing(ex.omega(), ey.omega()), l.pairing(x.omega(), y.omega()));
        assert_eq!(l.pairing(ex.omega(), ex.omega()), l.pairing(x.omega(), x.omega()));
    }
}

/// Images of the fixture period under random lattice automorphisms: still `Q(ω, ω) = 0`.
fn random_isotropic_period(rng: &mut ChaCha8Rng) -> PeriodVector {
    let m = model_operators();
    let mut p = fixture_period();
    for _ in 0..2 {
        let t = random_unipotent(rng, &m.lattice).matrix().to_gaussian();
        p = PeriodVector::new(m.lattice.clone(), t.apply(p.omega())).unwrap();
    }
    p
}

#[test]
fn domain_membership_is_horizontal() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..20 {
        let n = random_operator(&mut rng);
        let p = random_isotropic_period(&mut rng);
        let y = small_rational(&mut rng, 6).abs() + frac(1, 2);
        let reference = in_period_domain(&act(&C::new(int(0), y.clone()), &n, &p).unwrap());
        for x in [int(1), int(-3), frac(7, 2)] {
            let d = in_period_domain(&act(&C::new(x, y.clone()), &n, &p).unwrap());
            assert_eq!(d.q_omega_conj, reference.q_omega_conj);
            assert_eq!(d.in_domain, reference.in_domain);
        }
    }
}

#[test]
fn orbit_threshold_is_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut held = 0;
    let l = Arc::clone(&model_operators().lattice);
    for i in 0..40 {
        let mut n = random_operator(&mut rng);
        if i % 2 == 0 {
            // conjugates of the model operator, so that the condition holds often
            n = conjugate(&model_operators().n1, &random_unipotent(&mut rng, &l));
        }
        let p = random_isotropic_period(&mut rng);
        let v = orbit_condition(&n, &p).unwrap();
        if let Some(y0) = v.threshold.clone() {
            held += 1;
            for dy in [1, 2, 17] {
                let moved = act(&C::new(int(0), &y0 + int(dy)), &n, &p).unwrap();
                assert!(in_period_domain(&moved).in_domain);
            }
        } else {
            assert!(!v.coefficients.last().unwrap().is_positive());
        }
    }
    assert!(held > 0);
}

#[test]
fn zero_operator_reduces_to_domain_test() {
    let m = model_operators();
    let zero = InfinitesimalIsometry::zero(m.lattice.clone());
    let p = PeriodVector::from_parts(m.lattice.clone(), &add(&e(1), &f(1)), &add(&e(3), &f(3))).unwrap();
    assert!(in_period_domain(&p).in_domain);
    let r = lmhs_check(&zero, &p, 2).unwrap();
    assert!(r.is_mhs());
    assert_eq!(r.pieces[0].hodge_numbers, vec![(0, 2, 1), (1, 1, 20), (2, 0, 1)]);
}
