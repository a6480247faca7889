//! Monodromy weight filtrations: construction by Deligne's recursion and
//! verification of the defining properties, absolute and relative.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::nilpotent::{nilpotency_index, InfinitesimalIsometry};
use crate::scalar::{Field, Rational};
use crate::subspace::Subspace;

/// Increasing filtration `W_j` of a rational vector space.
///
/// Stored indices form a contiguous range; `W_j` is `{0}` below it and the
/// whole space above it. The stored range is normalized so that it holds
/// exactly one `{0}` step at the bottom and one full step at the top, which
/// makes structural equality mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightFiltration {
    center: i32,
    ambient_dim: usize,
    steps: BTreeMap<i32, Subspace<Rational>>,
}

impl WeightFiltration {
    /// Builds a filtration from explicit steps; they must share one ambient
    /// dimension and increase with the index.
    pub fn new(center: i32, ambient_dim: usize, steps: BTreeMap<i32, Subspace<Rational>>) -> Result<Self> {
        let mut prev: Option<(i32, &Subspace<Rational>)> = None;
        for (&j, w) in &steps {
            if w.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, found: w.ambient_dim() });
            }
            if let Some((pj, pw)) = prev {
                if pj + 1 != j {
                    return Err(Error::Precondition(format!("filtration indices jump from {pj} to {j}")));
                }
                if !pw.is_subspace_of(w) {
                    return Err(Error::Precondition(format!("W_{pj} is not contained in W_{j}")));
                }
            }
            prev = Some((j, w));
        }
        let mut f = Self { center, ambient_dim, steps };
        f.normalize();
        Ok(f)
    }

    /// The filtration with `W_{k-1} = 0` and `W_k = V`.
    pub fn pure(center: i32, ambient_dim: usize) -> Self {
        let mut steps = BTreeMap::new();
        steps.insert(center - 1, Subspace::zero(ambient_dim));
        steps.insert(center, Subspace::full(ambient_dim));
        let mut f = Self { center, ambient_dim, steps };
        f.normalize();
        f
    }

    fn normalize(&mut self) {
        let zero = Subspace::zero(self.ambient_dim);
        let full = Subspace::full(self.ambient_dim);
        if self.steps.is_empty() {
            self.steps.insert(self.center, full.clone());
        }
        let (&lo, _) = self.steps.first_key_value().expect("nonempty");
        if self.steps[&lo] != zero {
            self.steps.insert(lo - 1, zero.clone());
        }
        let (&hi, _) = self.steps.last_key_value().expect("nonempty");
        if self.steps[&hi] != full {
            self.steps.insert(hi + 1, full.clone());
        }
        while self.steps.len() >= 2 {
            let mut keys = self.steps.keys();
            let (a, b) = (*keys.next().unwrap(), *keys.next().unwrap());
            if self.steps[&a] == zero && self.steps[&b] == zero {
                self.steps.remove(&a);
            } else {
                break;
            }
        }
        while self.steps.len() >= 2 {
            let mut keys = self.steps.keys().rev();
            let (a, b) = (*keys.next().unwrap(), *keys.next().unwrap());
            if self.steps[&a] == full && self.steps[&b] == full {
                self.steps.remove(&a);
            } else {
                break;
            }
        }
    }

    pub fn center(&self) -> i32 {
        self.center
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Lowest and highest stored index.
    pub fn range(&self) -> (i32, i32) {
        (*self.steps.keys().next().unwrap(), *self.steps.keys().next_back().unwrap())
    }

    pub fn get(&self, j: i32) -> Subspace<Rational> {
        let (lo, hi) = self.range();
        if j < lo {
            Subspace::zero(self.ambient_dim)
        } else if j > hi {
            Subspace::full(self.ambient_dim)
        } else {
            self.steps[&j].clone()
        }
    }

    pub fn steps(&self) -> &BTreeMap<i32, Subspace<Rational>> {
        &self.steps
    }

    /// `(j, dim W_j)` over the stored range.
    pub fn dims(&self) -> Vec<(i32, usize)> {
        self.steps.iter().map(|(&j, w)| (j, w.dim())).collect()
    }

    /// `dim W_j` over the stored range, lowest index first.
    pub fn dim_sequence(&self) -> Vec<usize> {
        self.steps.values().map(Subspace::dim).collect()
    }

    /// Replaces one step; used to build perturbed filtrations in tests and diagnostics.
    pub fn with_step(&self, j: i32, w: Subspace<Rational>) -> Result<Self> {
        let mut steps = self.steps.clone();
        let (lo, hi) = self.range();
        for k in (j.min(lo))..=(j.max(hi)) {
            steps.entry(k).or_insert_with(|| self.get(k));
        }
        steps.insert(j, w);
        Self::new(self.center, self.ambient_dim, steps)
    }

    /// The filtration with every index shifted by `s` (`W'_j = W_{j−s}`).
    pub fn shifted(&self, s: i32) -> Self {
        let steps = self.steps.iter().map(|(&j, w)| (j + s, w.clone())).collect();
        Self { center: self.center + s, ambient_dim: self.ambient_dim, steps }
    }
}

impl fmt::Debug for WeightFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightFiltration(center {}, dims {:?})", self.center, self.dims())
    }
}

/// Monodromy weight filtration of a nilpotent `N` centered at `center`.
///
/// With `N^{m+1} = 0 ≠ N^m`: `W_{k+m} = V`, `W_{k+m−1} = ker N^m`,
/// `W_{k−m} = im N^m`, `W_{k−m−1} = 0`, then the same construction on
/// `ker N^m / im N^m` with `m − 1`.
pub fn weight_filtration(n: &InfinitesimalIsometry, center: i32) -> Result<WeightFiltration> {
    let index = nilpotency_index(n)?;
    let dim = n.lattice().rank();
    let mut steps = BTreeMap::new();
    deligne(n.matrix(), Subspace::zero(dim), Subspace::full(dim), index as i32 - 1, center, &mut steps)?;
    WeightFiltration::new(center, dim, steps)
}

/// Fills `steps` on the subquotient `high / low`, where `N^{m+1}` maps `high` into `low`.
fn deligne(
    n: &Matrix<Rational>,
    low: Subspace<Rational>,
    high: Subspace<Rational>,
    m: i32,
    k: i32,
    steps: &mut BTreeMap<i32, Subspace<Rational>>,
) -> Result<()> {
    if m <= 0 {
        steps.insert(k - 1, low);
        steps.insert(k, high);
        return Ok(());
    }
    let nm = n.pow(m as u32);
    let ker = high.preimage_within(&nm, &low)?;
    let im = high.map_by(&nm)?.sum(&low)?;
    steps.insert(k + m, high);
    steps.insert(k - m - 1, low);
    deligne(n, im, ker, m - 1, k, steps)
}

/// A violated defining property of a (relative) weight filtration.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum FiltrationDefect {
    /// `N·W_j ⊄ W_{j−2}`.
    Shift { index: i32 },
    /// `N^j` fails to be an isomorphism from the weight `upper` piece to the weight `lower` piece
    /// (`graded` is the base-filtration index for relative checks).
    GradedNotIsomorphic { graded: Option<i32>, upper: i32, lower: i32, source_dim: usize, target_dim: usize, rank: usize },
    /// The base filtration is not `N`-stable at this index (relative checks only).
    NotStable { index: i32 },
}

impl fmt::Display for FiltrationDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationDefect::Shift { index } => write!(f, "N·W_{index} is not contained in W_{}", index - 2),
            FiltrationDefect::GradedNotIsomorphic { graded, upper, lower, source_dim, target_dim, rank } => {
                let j = (upper - lower) / 2;
                match graded {
                    Some(l) => write!(f, "on Gr^W_{l}: N^{j}: Gr^M_{upper} -> Gr^M_{lower} has rank {rank} (dims {source_dim} -> {target_dim})"),
                    None => write!(f, "N^{j}: Gr_{upper} -> Gr_{lower} has rank {rank} (dims {source_dim} -> {target_dim})"),
                }
            }
            FiltrationDefect::NotStable { index } => write!(f, "N does not preserve W_{index}"),
        }
    }
}

/// Outcome of a filtration check; valid iff no defects were found.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FiltrationVerdict {
    pub defects: Vec<FiltrationDefect>,
}

impl FiltrationVerdict {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Checks `N^j : hi_src/lo_src → hi_tgt/lo_tgt` is an isomorphism.
/// Returns (source dim, target dim, rank) on failure.
fn graded_isomorphism(
    nj: &Matrix<Rational>,
    src: (&Subspace<Rational>, &Subspace<Rational>),
    tgt: (&Subspace<Rational>, &Subspace<Rational>),
) -> Result<Option<(usize, usize, usize)>> {
    let (src_hi, src_lo) = src;
    let (tgt_hi, tgt_lo) = tgt;
    let source_dim = src_hi.dim() - src_lo.dim();
    let target_dim = tgt_hi.dim() - tgt_lo.dim();
    let comp = src_hi.complement_basis(src_lo)?;
    let images: Vec<Vec<Rational>> = comp.iter().map(|c| nj.apply(c)).collect();
    let lands = images.iter().all(|v| tgt_hi.contains(v));
    let span = Subspace::span(tgt_hi.ambient_dim(), &images)?.sum(tgt_lo)?;
    let rank = span.dim() - tgt_lo.dim();
    // N^j(src_lo) must also land in tgt_lo for the map to be well defined
    let well_defined = src_lo.map_by(nj)?.is_subspace_of(tgt_lo);
    if lands && well_defined && source_dim == target_dim && rank == source_dim {
        Ok(None)
    } else {
        Ok(Some((source_dim, target_dim, rank)))
    }
}

/// Checks `N·W_j ⊆ W_{j−2}` and `N^j : Gr_{k+j} ≅ Gr_{k−j}` for all `j ≥ 0`.
pub fn verify_weight_filtration(n: &InfinitesimalIsometry, w: &WeightFiltration) -> Result<FiltrationVerdict> {
    if w.ambient_dim() != n.lattice().rank() {
        return Err(Error::DimensionMismatch { expected: n.lattice().rank(), found: w.ambient_dim() });
    }
    let mut defects = Vec::new();
    let (lo, hi) = w.range();
    let k = w.center();
    for j in lo..=hi + 2 {
        if !w.get(j).map_by(n.matrix())?.is_subspace_of(&w.get(j - 2)) {
            defects.push(FiltrationDefect::Shift { index: j });
        }
    }
    let reach = (hi - k).max(k - lo) + 1;
    let mut nj = Matrix::identity(w.ambient_dim());
    for j in 0..=reach {
        let src = (&w.get(k + j), &w.get(k + j - 1));
        let tgt = (&w.get(k - j), &w.get(k - j - 1));
        if let Some((s, t, r)) = graded_isomorphism(&nj, (src.0, src.1), (tgt.0, tgt.1))? {
            defects.push(FiltrationDefect::GradedNotIsomorphic {
                graded: None,
                upper: k + j,
                lower: k - j,
                source_dim: s,
                target_dim: t,
                rank: r,
            });
        }
        nj = &nj * n.matrix();
    }
    Ok(FiltrationVerdict { defects })
}

/// Checks that `m` is the relative monodromy filtration of `n` with respect to `w`:
/// `N·M_j ⊆ M_{j−2}` and, on every `Gr^W_l`, `N^j : Gr^M_{l+j} ≅ Gr^M_{l−j}`.
///
/// Errors with [`Error::NotInvariant`] when `N` does not preserve `w`.
pub fn verify_relative_filtration(
    m: &WeightFiltration,
    n: &InfinitesimalIsometry,
    w: &WeightFiltration,
) -> Result<FiltrationVerdict> {
    let dim = n.lattice().rank();
    for f in [m, w] {
        if f.ambient_dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: f.ambient_dim() });
        }
    }
    let (wlo, whi) = w.range();
    for l in wlo..=whi {
        if !w.get(l).map_by(n.matrix())?.is_subspace_of(&w.get(l)) {
            return Err(Error::NotInvariant(format!("N does not preserve W_{l}")));
        }
    }
    let mut defects = Vec::new();
    let (mlo, mhi) = m.range();
    for j in mlo..=mhi + 2 {
        if !m.get(j).map_by(n.matrix())?.is_subspace_of(&m.get(j - 2)) {
            defects.push(FiltrationDefect::Shift { index: j });
        }
    }
    let reach = (mhi - wlo).max(whi - mlo).max(0) + 1;
    for l in wlo..=whi + 1 {
        let wl = w.get(l);
        let wl1 = w.get(l - 1);
        // image of M_i in Gr^W_l, as a subspace between W_{l-1} and W_l
        let induced = |i: i32| -> Result<Subspace<Rational>> { m.get(i).intersect(&wl)?.sum(&wl1) };
        let mut nj = Matrix::identity(dim);
        for j in 0..=reach {
            let (a, b) = (induced(l + j)?, induced(l + j - 1)?);
            let (c, d) = (induced(l - j)?, induced(l - j - 1)?);
            if let Some((s, t, r)) = graded_isomorphism(&nj, (&a, &b), (&c, &d))? {
                defects.push(FiltrationDefect::GradedNotIsomorphic {
                    graded: Some(l),
                    upper: l + j,
                    lower: l - j,
                    source_dim: s,
                    target_dim: t,
                    rank: r,
                });
            }
            nj = &nj * n.matrix();
        }
    }
    Ok(FiltrationVerdict { defects })
}

/// Complexified steps, for Hodge-theoretic checks over Gaussian rationals.
pub fn complexify<T: Field>(w: &Subspace<Rational>) -> Subspace<T> {
    w.map_scalars(T::from_rational)
}
