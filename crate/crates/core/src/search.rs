//! Brute-force search for a period vector satisfying the orbit condition for the model operators.
//!
//! Candidates are `ω = a + ib` with `a, b` supported on `e1, f1, e2, f2, e3, f3` and
//! coordinates in {−1, 0, 1}. The search keeps those with `Q(ω, ω) = 0` whose
//! linear coefficient `−4 Q(a, N b)` of `h` is positive for `N1 = e1∧e2` and
//! `N2 = e1∧e3`, then picks the smallest total support, ties broken lexicographically.

use std::sync::Arc;

use crate::lattice::QuadraticLattice;
use crate::orbit::PeriodVector;
use crate::scalar::{int, Rational};

type Hyp = [i64; 6];

/// Pairing on three hyperbolic planes in coordinates `(e1, f1, e2, f2, e3, f3)`.
fn q(x: &Hyp, y: &Hyp) -> i64 {
    (0..3).map(|i| x[2 * i] * y[2 * i + 1] + x[2 * i + 1] * y[2 * i]).sum()
}

/// `Q(a, (u∧v) b) = Q(b,u) Q(a,v) − Q(b,v) Q(a,u)`.
fn q_wedge(a: &Hyp, u: &Hyp, v: &Hyp, b: &Hyp) -> i64 {
    q(b, u) * q(a, v) - q(b, v) * q(a, u)
}

fn unit(k: usize) -> Hyp {
    let mut v = [0; 6];
    v[k] = 1;
    v
}

/// Real and imaginary parts of the search result in hyperbolic coordinates.
pub fn search_coordinates() -> (Hyp, Hyp) {
    let (e1, e2, e3) = (unit(0), unit(2), unit(4));
    let vectors: Vec<Hyp> = (0..729)
        .map(|mut k| {
            let mut v = [0; 6];
            for x in v.iter_mut() {
                *x = (k % 3) as i64 - 1;
                k /= 3;
            }
            v
        })
        .collect();
    let support = |v: &Hyp| v.iter().filter(|&&x| x != 0).count();
    let mut best: Option<(usize, Hyp, Hyp)> = None;
    for a in &vectors {
        for b in &vectors {
            // Q(ω,ω) = Q(a,a) − Q(b,b) + 2i Q(a,b)
            if q(a, a) != q(b, b) || q(a, b) != 0 {
                continue;
            }
            let c1 = -4 * q_wedge(a, &e1, &e2, b);
            let c2 = -4 * q_wedge(a, &e1, &e3, b);
            if c1 <= 0 || c2 <= 0 {
                continue;
            }
            let key = (support(a) + support(b), *a, *b);
            if best.as_ref().is_none_or(|b0| key < *b0) {
                best = Some(key);
            }
        }
    }
    let (_, a, b) = best.expect("a candidate exists");
    (a, b)
}

fn embed(rank: usize, v: &Hyp) -> Vec<Rational> {
    let mut out = vec![int(0); rank];
    for (k, x) in v.iter().enumerate() {
        out[k] = int(*x);
    }
    out
}

/// The search result as a period vector on the K3 lattice: `ω = −f1 − i(f2 + f3)`.
pub fn search_period(lattice: &Arc<QuadraticLattice>) -> PeriodVector {
    let (a, b) = search_coordinates();
    PeriodVector::from_parts(lattice.clone(), &embed(lattice.rank(), &a), &embed(lattice.rank(), &b))
        .expect("the search result is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_result() {
        let (a, b) = search_coordinates();
        assert_eq!(a, [0, -1, 0, 0, 0, 0]);
        assert_eq!(b, [0, 0, 0, -1, 0, -1]);
    }
}
