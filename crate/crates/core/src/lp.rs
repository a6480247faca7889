//! Exact feasibility of `{x ≥ 0 : A x = b}` over the rationals.
//!
//! Phase-one simplex with Bland's rule on the rows left after an exact
//! row reduction of `[A | b]`. No tolerances anywhere.

use num::{Signed, Zero};

use crate::matrix::Matrix;
use crate::scalar::{int, Rational};

/// A nonnegative solution of `a·x = b`, or `None` when none exists.
pub fn find_nonnegative_solution(a: &Matrix<Rational>, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length does not match row count");
    let n = a.cols();
    let rhs = Matrix::from_columns(a.rows(), &[b.to_vec()]).expect("column length checked");
    let (reduced, pivots) = a.hstack(&rhs).expect("row counts match").rref_with_pivots();
    if pivots.last() == Some(&n) {
        return None;
    }
    let m = pivots.len();
    if n == 0 {
        return Some(Vec::new());
    }

    // tableau columns: x (n), artificials (m), rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = vec![int(0); width];
            let flip = reduced.get(i, n).is_negative();
            for j in 0..n {
                let v = reduced.get(i, j).clone();
                row[j] = if flip { -v } else { v };
            }
            row[n + i] = int(1);
            let r = reduced.get(i, n).clone();
            row[width - 1] = if flip { -r } else { r };
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    // phase-one objective: minimize the sum of artificials; cost row holds reduced costs
    let mut cost = vec![int(0); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }

    loop {
        // Bland: lowest-index entering column with negative reduced cost
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / &t[i][enter];
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let best = &t[l][width - 1] / &t[l][enter];
                    if ratio < best || (ratio == best && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        let Some(r) = leave else {
            // unbounded direction cannot occur in phase one (objective bounded below by 0)
            unreachable!("phase-one simplex is bounded");
        };
        pivot(&mut t, &mut cost, r, enter);
        basis[r] = enter;
    }

    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![int(0); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        } else if !t[i][width - 1].is_zero() {
            return None;
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rational>], cost: &mut [Rational], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        *v = &*v / &p;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}
