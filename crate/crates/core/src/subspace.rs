//! Linear subspaces in canonical reduced row-echelon form.

use num::Zero;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, GaussianRational, Rational};

/// A subspace of `T^n`, stored as the RREF of a basis (rows, no zero rows).
///
/// Two subspaces are equal exactly when their canonical bases are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace<T> {
    ambient_dim: usize,
    basis: Matrix<T>,
}

impl<T: Field> Subspace<T> {
    pub fn zero(n: usize) -> Self {
        Self { ambient_dim: n, basis: Matrix::zeros(0, n) }
    }

    pub fn full(n: usize) -> Self {
        Self { ambient_dim: n, basis: Matrix::identity(n) }
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix<T>) -> Self {
        let (r, rank) = m.rref();
        let basis = Matrix::from_fn(rank, m.cols(), |i, j| r.get(i, j).clone());
        Self { ambient_dim: m.cols(), basis }
    }

    pub fn span(ambient_dim: usize, vectors: &[Vec<T>]) -> Result<Self> {
        let m = Matrix::from_rows(ambient_dim, vectors.to_vec())?;
        Ok(Self::row_space(&m))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical basis: rows in reduced row-echelon form.
    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<T>> {
        self.basis.row_vectors()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[T]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length does not match ambient dimension");
        self.coordinates(v).is_some()
    }

    /// Coefficients of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        // RREF basis: the coefficient of row i is v at that row's pivot column
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let row = self.basis.row(i);
            let p = row.iter().position(|x| !x.is_zero()).expect("zero row in canonical basis");
            let c = rest[p].clone();
            if !c.is_zero() {
                for (r, b) in rest.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *r = r.clone() - c.clone() * b.clone();
                    }
                }
            }
            coords.push(c);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::row_space(&self.basis.vstack(&other.basis)?))
    }

    /// {x : <y, x> = 0 for all y in self}, with the plain (non-conjugating) dot product.
    pub fn annihilator(&self) -> Self {
        kernel(&self.basis)
    }

    /// Intersection computed as the annihilator of the sum of annihilators.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let ann = self.annihilator().basis.vstack(&other.annihilator().basis)?;
        Ok(kernel(&ann))
    }

    /// Image of the subspace under a linear map.
    pub fn map_by(&self, m: &Matrix<T>) -> Result<Self> {
        if m.cols() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: m.cols() });
        }
        let images: Vec<Vec<T>> = self.basis_vectors().iter().map(|v| m.apply(v)).collect();
        Self::span(m.rows(), &images)
    }

    /// {x in self : m·x in target}.
    pub fn preimage_within(&self, m: &Matrix<T>, target: &Self) -> Result<Self> {
        if m.cols() != self.ambient_dim || m.rows() != target.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: m.cols() });
        }
        // kernel of c ↦ m(Σ c_i b_i) modulo target
        let ann = target.annihilator();
        let images: Vec<Vec<T>> = self.basis_vectors().iter().map(|v| m.apply(v)).collect();
        let mut coeff_map = Matrix::zeros(ann.dim(), self.dim());
        for (j, img) in images.iter().enumerate() {
            for i in 0..ann.dim() {
                let v = dot(ann.basis.row(i), img);
                coeff_map.set(i, j, v);
            }
        }
        let coeffs = kernel(&coeff_map);
        let vectors: Vec<Vec<T>> = coeffs.basis_vectors().iter().map(|c| self.combine(c)).collect();
        Self::span(self.ambient_dim, &vectors)
    }

    /// Σ c_i b_i over the canonical basis.
    pub fn combine(&self, coeffs: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.ambient_dim];
        for (c, i) in coeffs.iter().zip(0..self.dim()) {
            if c.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(self.basis.row(i)) {
                *o = o.clone() + c.clone() * b.clone();
            }
        }
        out
    }

    /// Vectors of `self` completing a basis of `sub` to a basis of `self`.
    pub fn complement_basis(&self, sub: &Self) -> Result<Vec<Vec<T>>> {
        if !sub.is_subspace_of(self) {
            return Err(Error::Precondition("complement requested for a non-subspace".into()));
        }
        let mut acc = sub.clone();
        let mut out = Vec::new();
        for v in self.basis_vectors() {
            if !acc.contains(&v) {
                acc = acc.sum(&Self::span(self.ambient_dim, std::slice::from_ref(&v))?)?;
                out.push(v);
            }
        }
        Ok(out)
    }

    pub fn conj(&self) -> Self {
        Self::row_space(&self.basis.conj())
    }

    pub fn map_scalars<U: Field>(&self, f: impl Fn(&T) -> U) -> Subspace<U> {
        Subspace::row_space(&self.basis.map(f))
    }
}

impl Subspace<Rational> {
    pub fn to_gaussian(&self) -> Subspace<GaussianRational> {
        self.map_scalars(GaussianRational::from_rational)
    }
}

impl<T: Field> std::fmt::Debug for Subspace<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in {}: {:?})", self.dim(), self.ambient_dim, self.basis)
    }
}

pub fn dot<T: Field>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// {x : m·x = 0}.
pub fn kernel<T: Field>(m: &Matrix<T>) -> Subspace<T> {
    let n = m.cols();
    let (r, pivots) = m.rref_with_pivots();
    let mut vectors = Vec::new();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![T::zero(); n];
        v[free] = T::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -r.get(row, free).clone();
        }
        vectors.push(v);
    }
    Subspace::span(n, &vectors).expect("kernel vectors have ambient length")
}

/// Column span of `m`.
pub fn image<T: Field>(m: &Matrix<T>) -> Subspace<T> {
    Subspace::row_space(&m.transpose())
}

/// The map induced by `m` on `quot_of / sub`, in the basis of
/// `quot_of.complement_basis(sub)`; column `i` holds the coordinates of the image
/// of the `i`-th complement vector.
pub fn induced_map_on_quotient<T: Field>(m: &Matrix<T>, sub: &Subspace<T>, quot_of: &Subspace<T>) -> Result<Matrix<T>> {
    let n = quot_of.ambient_dim();
    if !m.is_square() || m.rows() != n || sub.ambient_dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.rows() });
    }
    if !sub.is_subspace_of(quot_of) {
        return Err(Error::NotInvariant("sub is not contained in quot_of".into()));
    }
    if !sub.map_by(m)?.is_subspace_of(sub) {
        return Err(Error::NotInvariant("map does not preserve sub".into()));
    }
    if !quot_of.map_by(m)?.is_subspace_of(quot_of) {
        return Err(Error::NotInvariant("map does not preserve quot_of".into()));
    }
    let comp = quot_of.complement_basis(sub)?;
    // coordinates against [complement | sub basis]
    let mut frame = comp.clone();
    frame.extend(sub.basis_vectors());
    let frame_t = Matrix::from_columns(n, &frame)?;
    let d = comp.len();
    let mut out = Matrix::zeros(d, d);
    for (j, c) in comp.iter().enumerate() {
        let target = m.apply(c);
        let coords = solve(&frame_t, &target).ok_or_else(|| Error::NotInvariant("image left quot_of".into()))?;
        for i in 0..d {
            out.set(i, j, coords[i].clone());
        }
    }
    Ok(out)
}

/// A solution of `a·x = b` when one exists; free variables set to zero.
pub fn solve<T: Field>(a: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    assert_eq!(b.len(), a.rows());
    let col = Matrix::from_columns(a.rows(), &[b.to_vec()]).ok()?;
    let aug = a.hstack(&col).ok()?;
    let (r, pivots) = aug.rref_with_pivots();
    if pivots.last() == Some(&a.cols()) {
        return None;
    }
    let mut x = vec![T::zero(); a.cols()];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r.get(row, a.cols()).clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn v(e: &[i64]) -> Vec<Rational> {
        e.iter().map(|&x| int(x)).collect()
    }

    fn sp(n: usize, vs: &[&[i64]]) -> Subspace<Rational> {
        Subspace::span(n, &vs.iter().map(|x| v(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&Matrix::<Rational>::zeros(3, 3)), Subspace::full(3));
        assert_eq!(kernel(&Matrix::<Rational>::identity(3)), Subspace::zero(3));
        assert_eq!(kernel(&Matrix::from_i64(2, 2, &[1, 1, 1, 1])), sp(2, &[&[1, -1]]));
    }

    #[test]
    fn image_examples() {
        assert_eq!(image(&Matrix::<Rational>::zeros(2, 2)), Subspace::zero(2));
        assert_eq!(image(&Matrix::<Rational>::identity(4)), Subspace::full(4));
        assert_eq!(image(&Matrix::from_i64(2, 2, &[1, 2, 2, 4])), sp(2, &[&[1, 2]]));
    }

    #[test]
    fn intersect_and_sum_examples() {
        let a = sp(3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert_eq!(sp(2, &[&[1, 0]]).intersect(&sp(2, &[&[0, 1]])).unwrap(), Subspace::zero(2));
        let b = sp(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.intersect(&b).unwrap(), sp(3, &[&[0, 1, 0]]));
        assert_eq!(a.sum(&Subspace::zero(3)).unwrap(), a);
        assert_eq!(sp(2, &[&[1, 0]]).sum(&sp(2, &[&[0, 1]])).unwrap(), Subspace::full(2));
        assert_eq!(
            sp(3, &[&[1, 1, 0]]).sum(&sp(3, &[&[1, -1, 0]])).unwrap(),
            sp(3, &[&[1, 0, 0], &[0, 1, 0]])
        );
        assert!(a.intersect(&Subspace::zero(2)).is_err());
        assert!(a.sum(&Subspace::full(4)).is_err());
    }

    #[test]
    fn induced_map_examples() {
        let full = Subspace::<Rational>::full(3);
        let e1 = sp(3, &[&[1, 0, 0]]);
        let id = Matrix::<Rational>::identity(3);
        assert_eq!(induced_map_on_quotient(&id, &e1, &full).unwrap(), Matrix::identity(2));
        assert_eq!(induced_map_on_quotient(&Matrix::zeros(3, 3), &e1, &full).unwrap(), Matrix::zeros(2, 2));
        // J e1 = 0, J e2 = e1, J e3 = e2; on V/<e1> with cosets [e2],[e3]: [e2] -> 0, [e3] -> [e2]
        let j = Matrix::from_i64(3, 3, &[0, 1, 0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(induced_map_on_quotient(&j, &e1, &full).unwrap(), Matrix::from_i64(2, 2, &[0, 1, 0, 0]));
        // <e3> is not J-invariant
        let e3 = sp(3, &[&[0, 0, 1]]);
        assert!(matches!(induced_map_on_quotient(&j, &e3, &full), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn preimage() {
        let j = Matrix::from_i64(3, 3, &[0, 1, 0, 0, 0, 1, 0, 0, 0]);
        let full = Subspace::<Rational>::full(3);
        let e1 = sp(3, &[&[1, 0, 0]]);
        assert_eq!(full.preimage_within(&j, &e1).unwrap(), sp(3, &[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(full.preimage_within(&j, &Subspace::zero(3)).unwrap(), e1);
    }

    #[test]
    fn solve_consistency() {
        let a = Matrix::from_i64(2, 3, &[1, 2, 3, 0, 1, 1]);
        let x = solve(&a, &v(&[6, 2])).unwrap();
        assert_eq!(a.apply(&x), v(&[6, 2]));
        let s = Matrix::from_i64(2, 2, &[1, 1, 1, 1]);
        assert!(solve(&s, &v(&[1, 2])).is_none());
    }
}
