//! Period vectors, the action of `exp(zN)`, the nilpotent-orbit condition and
//! limiting mixed Hodge structure checks.

use std::sync::Arc;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::{complexify, weight_filtration};
use crate::lattice::QuadraticLattice;
use crate::nilpotent::{nilpotency_index, InfinitesimalIsometry};
use crate::scalar::{frac, int, Field, GaussianRational, Rational};
use crate::subspace::Subspace;

type C = GaussianRational;

/// Nonzero complex vector `ω`; it determines `F² = <ω>` and `F¹ = ω^⊥`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodVector {
    lattice: Arc<QuadraticLattice>,
    omega: Vec<C>,
}

impl PeriodVector {
    pub fn new(lattice: Arc<QuadraticLattice>, omega: Vec<C>) -> Result<Self> {
        if omega.len() != lattice.rank() {
            return Err(Error::DimensionMismatch { expected: lattice.rank(), found: omega.len() });
        }
        if omega.iter().all(Zero::is_zero) {
            return Err(Error::ZeroPeriod);
        }
        Ok(Self { lattice, omega })
    }

    /// `ω = re + i·im`.
    pub fn from_parts(lattice: Arc<QuadraticLattice>, re: &[Rational], im: &[Rational]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch { expected: re.len(), found: im.len() });
        }
        let omega = re.iter().zip(im).map(|(a, b)| C::new(a.clone(), b.clone())).collect();
        Self::new(lattice, omega)
    }

    pub fn lattice(&self) -> &Arc<QuadraticLattice> {
        &self.lattice
    }

    pub fn omega(&self) -> &[C] {
        &self.omega
    }

    pub fn real_part(&self) -> Vec<Rational> {
        self.omega.iter().map(|z| z.re.clone()).collect()
    }

    pub fn imaginary_part(&self) -> Vec<Rational> {
        self.omega.iter().map(|z| z.im.clone()).collect()
    }

    pub fn conj(&self) -> Vec<C> {
        self.omega.iter().map(Field::conj).collect()
    }

    /// `F² = <ω>`.
    pub fn f2(&self) -> Subspace<C> {
        Subspace::span(self.omega.len(), std::slice::from_ref(&self.omega)).expect("length matches")
    }

    /// `F¹ = {x : Q(ω, x) = 0}`.
    pub fn f1(&self) -> Subspace<C> {
        self.lattice.orthogonal_complement(std::slice::from_ref(&self.omega)).expect("length matches")
    }

    /// `F^p` of the Hodge filtration of weight 2.
    pub fn hodge_step(&self, p: i32) -> Subspace<C> {
        match p {
            p if p <= 0 => Subspace::full(self.omega.len()),
            1 => self.f1(),
            2 => self.f2(),
            _ => Subspace::zero(self.omega.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeDiagnostics {
    /// Q(ω, ω)
    pub q_omega_omega: C,
    /// Q(ω, ω̄), always real.
    pub q_omega_conj: C,
    pub in_domain: bool,
}

/// `Q(ω, ω) = 0` and `Q(ω, ω̄) > 0`.
pub fn in_period_domain(p: &PeriodVector) -> HodgeDiagnostics {
    let q_omega_omega = p.lattice.pairing(&p.omega, &p.omega);
    let q_omega_conj = p.lattice.pairing(&p.omega, &p.conj());
    let in_domain = q_omega_omega.is_zero() && q_omega_conj.is_real() && q_omega_conj.re.is_positive();
    HodgeDiagnostics { q_omega_omega, q_omega_conj, in_domain }
}

/// `Σ_k (zN)^k v / k!` for nilpotent `N` of the given index.
fn exp_apply(z: &C, n: &InfinitesimalIsometry, index: usize, v: &[C]) -> Vec<C> {
    let m = n.matrix().to_gaussian();
    let mut sum = v.to_vec();
    let mut term = v.to_vec();
    for k in 1..index {
        let coeff = z.clone() * C::from_rational(&frac(1, k as i64));
        term = m.apply(&term).into_iter().map(|x| x * coeff.clone()).collect();
        sum = sum.into_iter().zip(&term).map(|(a, b)| a + b.clone()).collect();
    }
    sum
}

/// `exp(zN)·ω`.
pub fn act(z: &C, n: &InfinitesimalIsometry, p: &PeriodVector) -> Result<PeriodVector> {
    if n.lattice().as_ref() != p.lattice.as_ref() {
        return Err(Error::LatticeMismatch);
    }
    let index = nilpotency_index(n)?;
    let omega = exp_apply(z, n, index, &p.omega);
    Ok(PeriodVector { lattice: p.lattice.clone(), omega })
}

/// Coefficients, lowest degree first, of `h(y) = Q(exp(iyN)ω, conj(exp(iyN)ω))`,
/// expanded directly from the two truncated series.
pub fn h_polynomial(n: &InfinitesimalIsometry, p: &PeriodVector) -> Result<Vec<C>> {
    if n.lattice().as_ref() != p.lattice.as_ref() {
        return Err(Error::LatticeMismatch);
    }
    let index = nilpotency_index(n)?;
    let m = n.matrix().to_gaussian();
    // a_k = (i^k / k!) N^k ω
    let mut a: Vec<Vec<C>> = Vec::with_capacity(index);
    let mut power = p.omega.clone();
    let mut coeff = C::one();
    for k in 0..index {
        if k > 0 {
            power = m.apply(&power);
            coeff = coeff * C::i() * C::from_rational(&frac(1, k as i64));
        }
        a.push(power.iter().map(|x| x.clone() * coeff.clone()).collect());
    }
    let conj: Vec<Vec<C>> = a.iter().map(|v| v.iter().map(Field::conj).collect()).collect();
    let mut h = vec![C::zero(); 2 * index - 1];
    for (k, ak) in a.iter().enumerate() {
        for (l, bl) in conj.iter().enumerate() {
            h[k + l] = h[k + l].clone() + p.lattice.pairing(ak, bl);
        }
    }
    while h.len() > 1 && h.last().is_some_and(Zero::is_zero) {
        h.pop();
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitVerdict {
    pub holds: bool,
    /// Real coefficients of `h`, lowest degree first, trailing zeros removed.
    pub coefficients: Vec<Rational>,
    /// When the condition holds: `h(y) > 0` for every `y > threshold`.
    pub threshold: Option<Rational>,
}

impl OrbitVerdict {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn evaluate(&self, y: &Rational) -> Rational {
        self.coefficients.iter().rev().fold(Rational::zero(), |acc, c| acc * y + c)
    }
}

/// Decides whether `exp(iyN)·ω` lies in the period domain for all large `y`.
///
/// Holds iff the leading coefficient of `h` is positive; the threshold is the
/// Cauchy bound `1 + max |c_i / c_n|` (0 for constant `h`).
pub fn orbit_condition(n: &InfinitesimalIsometry, p: &PeriodVector) -> Result<OrbitVerdict> {
    let q = p.lattice.pairing(&p.omega, &p.omega);
    if !q.is_zero() {
        return Err(Error::FirstConditionViolated(q.to_string()));
    }
    let h = h_polynomial(n, p)?;
    if let Some(c) = h.iter().find(|c| !c.is_real()) {
        return Err(Error::Precondition(format!("h has a non-real coefficient {c}")));
    }
    let coefficients: Vec<Rational> = h.into_iter().map(|c| c.re).collect();
    let lead = coefficients.last().expect("at least the constant term").clone();
    if !lead.is_positive() {
        return Ok(OrbitVerdict { holds: false, coefficients, threshold: None });
    }
    let degree = coefficients.len() - 1;
    let threshold = if degree == 0 {
        int(0)
    } else {
        let max = coefficients[..degree].iter().map(|c| (c / &lead).abs()).max().expect("degree ≥ 1");
        Rational::one() + max
    };
    Ok(OrbitVerdict { holds: true, coefficients, threshold: Some(threshold) })
}

/// Opposition test `F^p ⊕ conj(F^{j−p+1}) = Gr_j` on one graded piece.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PurityCheck {
    pub p: i32,
    pub passed: bool,
    /// dim F^p Gr_j + dim conj(F^{j−p+1}) Gr_j
    pub dim_sum: usize,
    /// dim (F^p Gr_j ∩ conj(F^{j−p+1}) Gr_j)
    pub dim_intersection: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPiece {
    pub weight: i32,
    pub dim: usize,
    /// dim F^p Gr for p = 0, 1, 2.
    pub hodge_filtration_dims: Vec<usize>,
    pub checks: Vec<PurityCheck>,
    /// (p, q, h^{p,q}) with p + q = weight, nonzero entries only.
    pub hodge_numbers: Vec<(i32, i32, usize)>,
}

impl GradedPiece {
    pub fn is_pure(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MhsReport {
    pub weight_dims: Vec<(i32, usize)>,
    /// Nonzero graded pieces, increasing weight.
    pub pieces: Vec<GradedPiece>,
}

impl MhsReport {
    pub fn is_mhs(&self) -> bool {
        self.pieces.iter().all(GradedPiece::is_pure)
    }

    /// (weight, p) of every failed opposition test.
    pub fn failures(&self) -> Vec<(i32, i32)> {
        self.pieces
            .iter()
            .flat_map(|g| g.checks.iter().filter(|c| !c.passed).map(move |c| (g.weight, c.p)))
            .collect()
    }
}

/// Checks that `(W(N), F)` is a mixed Hodge structure, `F` being the Hodge filtration of `ω`.
pub fn lmhs_check(n: &InfinitesimalIsometry, p: &PeriodVector, center: i32) -> Result<MhsReport> {
    if n.lattice().as_ref() != p.lattice.as_ref() {
        return Err(Error::LatticeMismatch);
    }
    let w = weight_filtration(n, center)?;
    let f: Vec<Subspace<C>> = (0..=3).map(|k| p.hodge_step(k)).collect();
    let step = |k: i32| f[k.clamp(0, 3) as usize].clone();
    let (lo, hi) = w.range();
    let mut pieces = Vec::new();
    for j in lo + 1..=hi {
        let wj: Subspace<C> = complexify(&w.get(j));
        let wprev: Subspace<C> = complexify(&w.get(j - 1));
        let dim = wj.dim() - wprev.dim();
        if dim == 0 {
            continue;
        }
        // F^p Gr_j lifted to (F^p ∩ W_j) + W_{j−1}
        let lift = |s: &Subspace<C>| s.intersect(&wj).and_then(|x| x.sum(&wprev)).expect("same ambient dimension");
        let hodge_filtration_dims: Vec<usize> = (0..=2).map(|k| lift(&step(k)).dim() - wprev.dim()).collect();
        let mut checks = Vec::new();
        for pp in (j - 2).min(0)..=(j + 1).max(3) {
            let a = lift(&step(pp));
            let b = lift(&step(j - pp + 1).conj());
            let dim_sum = a.dim() + b.dim() - 2 * wprev.dim();
            let dim_intersection = a.intersect(&b).expect("same ambient dimension").dim() - wprev.dim();
            checks.push(PurityCheck { p: pp, passed: dim_sum == dim && dim_intersection == 0, dim_sum, dim_intersection });
        }
        let mut hodge_numbers = Vec::new();
        let fd = |k: i32| if k <= 0 { dim } else if k >= 3 { 0 } else { hodge_filtration_dims[k as usize] };
        for pp in 0..=2 {
            let h = fd(pp) - fd(pp + 1);
            if h > 0 {
                hodge_numbers.push((pp, j - pp, h));
            }
        }
        pieces.push(GradedPiece { weight: j, dim, hodge_filtration_dims, checks, hodge_numbers });
    }
    Ok(MhsReport { weight_dims: w.dims(), pieces })
}
