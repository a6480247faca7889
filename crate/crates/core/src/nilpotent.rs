//! Infinitesimal isometries, unipotent automorphisms and the exp/log correspondence.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::QuadraticLattice;
use crate::matrix::Matrix;
use crate::scalar::{int, Rational};
use crate::subspace::{image, Subspace};

/// A rational matrix `N` with `Q(Nx, y) + Q(x, Ny) = 0`, i.e. `Nᵀ G + G N = 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct InfinitesimalIsometry {
    lattice: Arc<QuadraticLattice>,
    matrix: Matrix<Rational>,
}

/// A rational matrix `T` with `Tᵀ G T = G`.
#[derive(Clone, PartialEq, Eq)]
pub struct LatticeAutomorphism {
    lattice: Arc<QuadraticLattice>,
    matrix: Matrix<Rational>,
}

/// Kulikov type of a K3 degeneration, read off from the nilpotency index of its monodromy logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub enum KulikovType {
    I,
    II,
    III,
}

impl fmt::Display for KulikovType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            KulikovType::I => "I",
            KulikovType::II => "II",
            KulikovType::III => "III",
        };
        f.write_str(s)
    }
}

fn same_lattice(a: &Arc<QuadraticLattice>, b: &Arc<QuadraticLattice>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn check_square(lattice: &QuadraticLattice, m: &Matrix<Rational>) -> Result<()> {
    let n = lattice.rank();
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.rows().max(m.cols()) });
    }
    Ok(())
}

impl InfinitesimalIsometry {
    pub fn new(lattice: Arc<QuadraticLattice>, matrix: Matrix<Rational>) -> Result<Self> {
        check_square(&lattice, &matrix)?;
        let g = lattice.gram();
        let defect = &(&matrix.transpose() * g) + &(g * &matrix);
        if !defect.is_zero() {
            return Err(Error::NotInfinitesimalIsometry);
        }
        Ok(Self { lattice, matrix })
    }

    pub fn zero(lattice: Arc<QuadraticLattice>) -> Self {
        let n = lattice.rank();
        Self { lattice, matrix: Matrix::zeros(n, n) }
    }

    pub fn lattice(&self) -> &Arc<QuadraticLattice> {
        &self.lattice
    }

    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.matrix.apply(v)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self { lattice: self.lattice.clone(), matrix: self.matrix.scale(s) }
    }

    pub fn neg(&self) -> Self {
        Self { lattice: self.lattice.clone(), matrix: -&self.matrix }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !same_lattice(&self.lattice, &other.lattice) {
            return Err(Error::LatticeMismatch);
        }
        Ok(Self { lattice: self.lattice.clone(), matrix: &self.matrix + &other.matrix })
    }

    /// Σ c_i N_i over operators sharing one lattice.
    pub fn linear_combination(terms: &[(Rational, &Self)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or_else(|| Error::Precondition("empty linear combination".into()))?;
        let mut acc = Self::zero(first.lattice.clone());
        for (c, n) in terms {
            acc = acc.add(&n.scale(c))?;
        }
        Ok(acc)
    }

    pub fn kernel(&self) -> Subspace<Rational> {
        crate::subspace::kernel(&self.matrix)
    }

    pub fn image(&self) -> Subspace<Rational> {
        image(&self.matrix)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

impl fmt::Debug for InfinitesimalIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InfinitesimalIsometry({:?})", self.matrix)
    }
}

impl LatticeAutomorphism {
    pub fn new(lattice: Arc<QuadraticLattice>, matrix: Matrix<Rational>) -> Result<Self> {
        check_square(&lattice, &matrix)?;
        let g = lattice.gram();
        if &(&matrix.transpose() * g) * &matrix != *g {
            return Err(Error::NotIsometry);
        }
        Ok(Self { lattice, matrix })
    }

    pub fn identity(lattice: Arc<QuadraticLattice>) -> Self {
        let n = lattice.rank();
        Self { lattice, matrix: Matrix::identity(n) }
    }

    pub fn lattice(&self) -> &Arc<QuadraticLattice> {
        &self.lattice
    }

    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.matrix
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if !same_lattice(&self.lattice, &other.lattice) {
            return Err(Error::LatticeMismatch);
        }
        Ok(Self { lattice: self.lattice.clone(), matrix: &self.matrix * &other.matrix })
    }
}

impl fmt::Debug for LatticeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeAutomorphism({:?})", self.matrix)
    }
}

/// The map `x ↦ Q(x, u)·v − Q(x, v)·u`, always an infinitesimal isometry.
pub fn wedge(lattice: &Arc<QuadraticLattice>, u: &[Rational], v: &[Rational]) -> Result<InfinitesimalIsometry> {
    let n = lattice.rank();
    for w in [u, v] {
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: w.len() });
        }
    }
    let gu = lattice.dual(u);
    let gv = lattice.dual(v);
    let m = Matrix::from_fn(n, n, |i, j| &v[i] * &gu[j] - &u[i] * &gv[j]);
    InfinitesimalIsometry::new(lattice.clone(), m)
}

/// Smallest `m` with `N^m = 0` (1 for the zero operator).
pub fn nilpotency_index(n: &InfinitesimalIsometry) -> Result<usize> {
    nilpotency_index_of(n.matrix())
}

fn nilpotency_index_of(m: &Matrix<Rational>) -> Result<usize> {
    let size = m.rows();
    let mut power = m.clone();
    for k in 1..=size.max(1) {
        if power.is_zero() {
            return Ok(k);
        }
        power = &power * m;
    }
    Err(Error::NotNilpotent)
}

pub fn commutator(a: &InfinitesimalIsometry, b: &InfinitesimalIsometry) -> Result<InfinitesimalIsometry> {
    if !same_lattice(&a.lattice, &b.lattice) {
        return Err(Error::LatticeMismatch);
    }
    let m = &(&a.matrix * &b.matrix) - &(&b.matrix * &a.matrix);
    InfinitesimalIsometry::new(a.lattice.clone(), m)
}

/// exp(N) = Σ_{k < index} N^k / k!, exact.
pub fn exp_nilpotent(n: &InfinitesimalIsometry) -> Result<LatticeAutomorphism> {
    let index = nilpotency_index(n)?;
    let size = n.matrix.rows();
    let mut sum = Matrix::identity(size);
    let mut term = Matrix::identity(size);
    for k in 1..index {
        term = (&term * &n.matrix).scale(&crate::scalar::frac(1, k as i64));
        sum = &sum + &term;
    }
    LatticeAutomorphism::new(n.lattice.clone(), sum)
}

/// log(T) = Σ_{k ≥ 1} (−1)^{k+1} (T − I)^k / k, exact; `T − I` must be nilpotent.
pub fn log_unipotent(t: &LatticeAutomorphism) -> Result<InfinitesimalIsometry> {
    let size = t.matrix.rows();
    let x = &t.matrix - &Matrix::identity(size);
    let index = nilpotency_index_of(&x).map_err(|_| Error::NotUnipotent)?;
    let mut sum = Matrix::zeros(size, size);
    let mut power = Matrix::identity(size);
    for k in 1..index {
        power = &power * &x;
        let sign = if k % 2 == 1 { 1 } else { -1 };
        sum = &sum + &power.scale(&crate::scalar::frac(sign, k as i64));
    }
    InfinitesimalIsometry::new(t.lattice.clone(), sum)
}

pub fn kulikov_type(n: &InfinitesimalIsometry) -> Result<KulikovType> {
    match nilpotency_index(n)? {
        1 => Ok(KulikovType::I),
        2 => Ok(KulikovType::II),
        3 => Ok(KulikovType::III),
        k => Err(Error::IndexTooLarge(k)),
    }
}

/// Change of basis exhibiting a square-zero `N` as `[[0, A], [0, 0]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockForm {
    /// Columns are the new basis: a basis of im N followed by a complement of im N.
    pub basis: Matrix<Rational>,
    /// `rank N × (n − rank N)` block; full row rank.
    pub a: Matrix<Rational>,
}

impl BlockForm {
    pub fn block_matrix(&self) -> Matrix<Rational> {
        let r = self.a.rows();
        let n = self.basis.rows();
        Matrix::from_fn(n, n, |i, j| if i < r && j >= r { self.a.get(i, j - r).clone() } else { int(0) })
    }

    /// basis · [[0, A], [0, 0]] · basis⁻¹, which equals the original operator.
    pub fn reconstruct(&self) -> Matrix<Rational> {
        let inv = self.basis.inverse().expect("block-form basis is invertible");
        &(&self.basis * &self.block_matrix()) * &inv
    }
}

pub fn block_form(n: &InfinitesimalIsometry) -> Result<BlockForm> {
    if n.is_zero() {
        return Err(Error::Precondition("block form needs a nonzero operator".into()));
    }
    if !(&n.matrix * &n.matrix).is_zero() {
        return Err(Error::Precondition("block form needs N^2 = 0".into()));
    }
    let size = n.matrix.rows();
    let im = n.image();
    let mut columns = im.basis_vectors();
    columns.extend(Subspace::full(size).complement_basis(&im)?);
    let basis = Matrix::from_columns(size, &columns)?;
    let conj = &(&basis.inverse()? * &n.matrix) * &basis;
    let r = im.dim();
    let a = Matrix::from_fn(r, size - r, |i, j| conj.get(i, r + j).clone());
    Ok(BlockForm { basis, a })
}
