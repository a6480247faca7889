//! Integral quadratic lattices: the hyperbolic plane, E8(-1) and the K3 lattice.

use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{inertia, Inertia, Matrix};
use crate::scalar::{int, Field, Rational};
use crate::subspace::{kernel, Subspace};

/// Free module of finite rank with a symmetric integral Gram matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticLattice {
    gram: Matrix<Rational>,
}

impl std::fmt::Debug for QuadraticLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QuadraticLattice(rank {})", self.rank())
    }
}

impl QuadraticLattice {
    pub fn new(gram: Matrix<Rational>) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare { rows: gram.rows(), cols: gram.cols() });
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        for i in 0..gram.rows() {
            for j in 0..gram.cols() {
                if !gram.get(i, j).is_integer() {
                    return Err(Error::NonIntegerGram { row: i, col: j });
                }
            }
        }
        Ok(Self { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix<Rational> {
        &self.gram
    }

    /// Q(x, y) = xᵀ G y, extended bilinearly (no conjugation) to any scalar field.
    pub fn pairing<T: Field>(&self, x: &[T], y: &[T]) -> T {
        let n = self.rank();
        assert!(x.len() == n && y.len() == n, "vector length does not match lattice rank");
        let mut acc = T::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                let g = self.gram.get(i, j);
                if g.is_zero() || y[j].is_zero() {
                    continue;
                }
                acc = acc + x[i].clone() * T::from_rational(g) * y[j].clone();
            }
        }
        acc
    }

    /// G·v, the linear form Q(·, v) as a coordinate vector.
    pub fn dual<T: Field>(&self, v: &[T]) -> Vec<T> {
        self.gram.map(T::from_rational).apply(v)
    }

    pub fn inertia(&self) -> Inertia {
        inertia(&self.gram).expect("Gram matrix is square and symmetric")
    }

    /// Even iff every diagonal Gram entry is even.
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram.get(i, i).to_integer().is_even())
    }

    pub fn determinant(&self) -> Rational {
        self.gram.determinant().expect("Gram matrix is square")
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    /// (n_plus, n_minus); errors when the form is degenerate.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let i = self.inertia();
        if i.zero > 0 {
            return Err(Error::DegenerateLattice { nullity: i.zero });
        }
        Ok((i.positive, i.negative))
    }

    /// {x : Q(x, v) = 0 for all v}.
    pub fn orthogonal_complement<T: Field>(&self, vectors: &[Vec<T>]) -> Result<Subspace<T>> {
        for v in vectors {
            if v.len() != self.rank() {
                return Err(Error::DimensionMismatch { expected: self.rank(), found: v.len() });
            }
        }
        let forms: Vec<Vec<T>> = vectors.iter().map(|v| self.dual(v)).collect();
        Ok(kernel(&Matrix::from_rows(self.rank(), forms)?))
    }

    /// Gram matrix of Q restricted to a rational subspace, in its canonical basis.
    pub fn restricted_gram(&self, sub: &Subspace<Rational>) -> Matrix<Rational> {
        let b = sub.basis();
        &(b * &self.gram) * &b.transpose()
    }

    /// Standard basis vector `i` of the lattice.
    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![int(0); self.rank()];
        v[i] = int(1);
        v
    }
}

pub fn direct_sum(a: &QuadraticLattice, b: &QuadraticLattice) -> QuadraticLattice {
    QuadraticLattice { gram: a.gram.block_diag(&b.gram) }
}

/// The hyperbolic plane, basis (e, f) with Q(e, f) = 1.
pub fn lattice_u() -> QuadraticLattice {
    QuadraticLattice { gram: Matrix::from_i64(2, 2, &[0, 1, 1, 0]) }
}

/// E8(-1): the negated Cartan matrix of E8, nodes in Bourbaki order
/// (chain 1-3-4-5-6-7-8, node 2 attached to node 4).
pub fn lattice_e8_minus() -> QuadraticLattice {
    const EDGES: [(usize, usize); 7] = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];
    let mut g = Matrix::from_fn(8, 8, |i, j| if i == j { int(-2) } else { int(0) });
    for (a, b) in EDGES {
        g.set(a - 1, b - 1, int(1));
        g.set(b - 1, a - 1, int(1));
    }
    QuadraticLattice { gram: g }
}

/// U ⊕ U ⊕ U ⊕ E8(-1) ⊕ E8(-1), rank 22.
///
/// Coordinates: `e_i = 2(i-1)`, `f_i = 2(i-1)+1` for the three hyperbolic planes
/// (see [`k3_basis`]), then the two E8(-1) blocks at 6..14 and 14..22.
pub fn lattice_k3() -> QuadraticLattice {
    let u = lattice_u();
    let e8 = lattice_e8_minus();
    let mut l = direct_sum(&u, &u);
    l = direct_sum(&l, &u);
    l = direct_sum(&l, &e8);
    direct_sum(&l, &e8)
}

/// Named vectors of the K3 lattice basis.
pub mod k3_basis {
    use super::*;

    pub const RANK: usize = 22;

    /// Isotropic `e_i` of the `i`-th hyperbolic plane, `i` in 1..=3.
    pub fn e(i: usize) -> Vec<Rational> {
        assert!((1..=3).contains(&i));
        unit(2 * (i - 1))
    }

    /// Isotropic `f_i` with Q(e_i, f_i) = 1.
    pub fn f(i: usize) -> Vec<Rational> {
        assert!((1..=3).contains(&i));
        unit(2 * (i - 1) + 1)
    }

    pub fn unit(k: usize) -> Vec<Rational> {
        let mut v = vec![int(0); RANK];
        v[k] = int(1);
        v
    }

    pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn scale(a: &[Rational], s: &Rational) -> Vec<Rational> {
        a.iter().map(|x| x * s).collect()
    }
}
