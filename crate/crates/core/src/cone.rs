//! Rational polyhedral cones generated by commuting nilpotent operators.

use std::cmp::Ordering;
use std::sync::Arc;

use num::Signed;

use crate::error::{Error, Result};
use crate::filtration::{weight_filtration, WeightFiltration};
use crate::lattice::QuadraticLattice;
use crate::lp::find_nonnegative_solution;
use crate::matrix::Matrix;
use crate::nilpotent::{commutator, nilpotency_index, InfinitesimalIsometry};
use crate::report::{Check, ValidationReport};
use crate::scalar::{int, primitive_scale, Rational};
use crate::subspace::{kernel, Subspace};

/// `Σ R≥0 N_i` for nonzero operators `N_i` on one lattice; no generators is the zero cone.
///
/// Equality ignores generator order and positive rescaling of each generator.
#[derive(Clone)]
pub struct NilpotentCone {
    lattice: Arc<QuadraticLattice>,
    generators: Vec<InfinitesimalIsometry>,
}

/// Primitive integral representative of the ray through `n`, as row-major entries.
pub fn ray_key(n: &InfinitesimalIsometry) -> Vec<Rational> {
    let e = n.matrix().entries();
    let s = primitive_scale(e);
    e.iter().map(|x| x * &s).collect()
}

impl NilpotentCone {
    pub fn new(lattice: Arc<QuadraticLattice>, generators: Vec<InfinitesimalIsometry>) -> Result<Self> {
        for g in &generators {
            if g.lattice().as_ref() != lattice.as_ref() {
                return Err(Error::LatticeMismatch);
            }
            if g.is_zero() {
                return Err(Error::ZeroGenerator);
            }
        }
        Ok(Self { lattice, generators })
    }

    pub fn zero(lattice: Arc<QuadraticLattice>) -> Self {
        Self { lattice, generators: Vec::new() }
    }

    pub fn lattice(&self) -> &Arc<QuadraticLattice> {
        &self.lattice
    }

    pub fn generators(&self) -> &[InfinitesimalIsometry] {
        &self.generators
    }

    pub fn is_zero_cone(&self) -> bool {
        self.generators.is_empty()
    }

    /// Sorted, deduplicated primitive generator keys.
    pub fn canonical_key(&self) -> Vec<Vec<Rational>> {
        let mut keys: Vec<_> = self.generators.iter().map(ray_key).collect();
        keys.sort();
        keys.dedup();
        keys
    }

    /// Dimension of the linear span of the generators.
    pub fn dim(&self) -> usize {
        self.flattened().rank()
    }

    /// Generators as the columns of a `(rank²) × r` matrix.
    fn flattened(&self) -> Matrix<Rational> {
        let n = self.lattice.rank();
        let cols: Vec<Vec<Rational>> = self.generators.iter().map(|g| g.matrix().entries().to_vec()).collect();
        Matrix::from_columns(n * n, &cols).expect("generators share the lattice size")
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.generators.len()
    }

    fn require_simplicial(&self) -> Result<()> {
        if self.is_simplicial() {
            Ok(())
        } else {
            Err(Error::NonSimplicial)
        }
    }

    /// Σ a_i N_i.
    pub fn combination(&self, coeffs: &[Rational]) -> Result<InfinitesimalIsometry> {
        if coeffs.len() != self.generators.len() {
            return Err(Error::DimensionMismatch { expected: self.generators.len(), found: coeffs.len() });
        }
        let mut acc = InfinitesimalIsometry::zero(self.lattice.clone());
        for (c, g) in coeffs.iter().zip(&self.generators) {
            acc = acc.add(&g.scale(c))?;
        }
        Ok(acc)
    }

    /// Whether the operator lies in the cone, decided by exact LP.
    pub fn contains(&self, x: &InfinitesimalIsometry) -> bool {
        find_nonnegative_solution(&self.flattened(), x.matrix().entries()).is_some()
    }
}

impl PartialEq for NilpotentCone {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice && self.canonical_key() == other.canonical_key()
    }
}

impl Eq for NilpotentCone {}

impl PartialOrd for NilpotentCone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Fewer generators first, then lexicographic on canonical keys.
impl Ord for NilpotentCone {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.canonical_key(), other.canonical_key());
        a.len().cmp(&b.len()).then_with(|| a.cmp(&b))
    }
}

impl std::fmt::Debug for NilpotentCone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "NilpotentCone({} generators)", self.generators.len())
    }
}

/// Nilpotency of generators, pairwise commutation, and strong convexity.
pub fn validate_cone(c: &NilpotentCone) -> ValidationReport {
    let mut report = ValidationReport::default();

    let bad: Vec<String> = c
        .generators
        .iter()
        .enumerate()
        .filter(|(_, g)| nilpotency_index(g).is_err())
        .map(|(i, _)| i.to_string())
        .collect();
    report.push(Check::new(
        "nilpotent",
        bad.is_empty(),
        if bad.is_empty() { "all generators nilpotent".into() } else { format!("not nilpotent: generators {}", bad.join(", ")) },
    ));

    let mut noncommuting = Vec::new();
    for i in 0..c.generators.len() {
        for j in i + 1..c.generators.len() {
            let zero = commutator(&c.generators[i], &c.generators[j]).map(|m| m.is_zero()).unwrap_or(false);
            if !zero {
                noncommuting.push(format!("[{i},{j}]"));
            }
        }
    }
    report.push(Check::new(
        "commuting",
        noncommuting.is_empty(),
        if noncommuting.is_empty() { "all pairs commute".into() } else { format!("nonzero commutators: {}", noncommuting.join(", ")) },
    ));

    let line = line_witness(c);
    report.push(Check::new(
        "strongly_convex",
        line.is_none(),
        match line {
            None => "cone contains no line".into(),
            Some(w) => format!("Σ c_i N_i = 0 with c = ({})", w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
        },
    ));
    report
}

/// Coefficients `c ≥ 0`, `Σ c = 1`, with `Σ c_i N_i = 0`; exists iff the cone contains a line
/// (generators being nonzero).
fn line_witness(c: &NilpotentCone) -> Option<Vec<Rational>> {
    let flat = c.flattened();
    let ones = Matrix::from_fn(1, flat.cols(), |_, _| int(1));
    let a = flat.vstack(&ones).expect("same column count");
    let mut b = vec![int(0); flat.rows()];
    b.push(int(1));
    find_nonnegative_solution(&a, &b)
}

pub fn is_strongly_convex(c: &NilpotentCone) -> bool {
    line_witness(c).is_none()
}

/// All `2^r` subcones spanned by subsets of the generators, in canonical order.
pub fn faces(c: &NilpotentCone) -> Result<Vec<NilpotentCone>> {
    c.require_simplicial()?;
    let r = c.generators.len();
    let mut out: Vec<NilpotentCone> = (0u64..(1u64 << r))
        .map(|mask| {
            let gens = (0..r).filter(|i| mask & (1 << i) != 0).map(|i| c.generators[i].clone()).collect();
            NilpotentCone { lattice: c.lattice.clone(), generators: gens }
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Default interior sample points for `r` generators, besides `(1, …, 1)`:
/// `(1, 2, 3, …)`, `(3, 1, 1, …)` and `(5, 7, 9, …)`.
pub fn default_samples(r: usize) -> Vec<Vec<Rational>> {
    if r == 0 {
        return Vec::new();
    }
    vec![
        (0..r).map(|i| int(1 + i as i64)).collect(),
        (0..r).map(|i| int(if i == 0 { 3 } else { 1 })).collect(),
        (0..r).map(|i| int(5 + 2 * i as i64)).collect(),
    ]
}

/// Weight filtration of the cone's interior, checked to agree at every sample point
/// and at the barycentric point `(1, …, 1)`.
pub fn cone_weight_filtration(c: &NilpotentCone, center: i32, samples: &[Vec<Rational>]) -> Result<WeightFiltration> {
    let report = validate_cone(c);
    if !report.passed() {
        return Err(Error::Precondition(format!("cone fails validation: {}", report.failures().join("; "))));
    }
    let r = c.generators.len();
    let mut points = vec![vec![int(1); r]];
    for s in samples {
        if s.len() != r {
            return Err(Error::DimensionMismatch { expected: r, found: s.len() });
        }
        if s.iter().any(|x| !x.is_positive()) {
            return Err(Error::Precondition("sample coefficients must be strictly positive".into()));
        }
        points.push(s.clone());
    }
    let mut reference: Option<(WeightFiltration, &Vec<Rational>)> = None;
    for p in &points {
        let w = weight_filtration(&c.combination(p)?, center)?;
        match &reference {
            None => reference = Some((w, p)),
            Some((w0, p0)) if *w0 != w => {
                return Err(Error::InteriorDependence {
                    first: p0.iter().map(|x| x.to_string()).collect(),
                    second: p.iter().map(|x| x.to_string()).collect(),
                })
            }
            _ => {}
        }
    }
    Ok(reference.expect("at least the barycenter").0)
}

/// Whether the relative interiors of two simplicial cones meet:
/// `Σ a_i A_i = Σ b_j B_j` with every `a_i, b_j ≥ 1`.
pub fn relint_intersects(a: &NilpotentCone, b: &NilpotentCone) -> Result<bool> {
    a.require_simplicial()?;
    b.require_simplicial()?;
    if a.lattice != b.lattice {
        return Err(Error::LatticeMismatch);
    }
    let fa = a.flattened();
    let fb = b.flattened();
    let m = fa.hstack(&(-&fb))?;
    // shift a = 1 + a', b = 1 + b'
    let rhs: Vec<Rational> = (0..m.rows())
        .map(|i| {
            let sa: Rational = (0..fa.cols()).map(|j| fa.get(i, j).clone()).sum();
            let sb: Rational = (0..fb.cols()).map(|j| fb.get(i, j).clone()).sum();
            sb - sa
        })
        .collect();
    Ok(find_nonnegative_solution(&m, &rhs).is_some())
}

/// The cone `a ∩ b`, with redundant generators removed.
///
/// Extreme rays of `{(α, β) ≥ 0 : Σ α_i A_i = Σ β_j B_j}` are the circuits of the
/// stacked generator matrix carrying a strictly positive null vector; their images
/// generate the intersection. Exponential in the total generator count.
pub fn intersection(a: &NilpotentCone, b: &NilpotentCone) -> Result<NilpotentCone> {
    if a.lattice != b.lattice {
        return Err(Error::LatticeMismatch);
    }
    let fa = a.flattened();
    let m = fa.hstack(&(-&b.flattened()))?;
    let total = m.cols();
    let mut rays: Vec<InfinitesimalIsometry> = Vec::new();
    for mask in 1u64..(1u64 << total) {
        let cols: Vec<usize> = (0..total).filter(|j| mask & (1 << j) != 0).collect();
        let sub = Matrix::from_fn(m.rows(), cols.len(), |i, j| m.get(i, cols[j]).clone());
        let null = kernel(&sub);
        if null.dim() != 1 {
            continue;
        }
        let mut v = null.basis_vectors().remove(0);
        if v.iter().all(|x| x.is_negative()) {
            v = v.into_iter().map(|x| -x).collect();
        }
        if !v.iter().all(|x| x.is_positive()) {
            continue;
        }
        let mut alpha = vec![int(0); fa.cols()];
        for (k, &j) in cols.iter().enumerate() {
            if j < fa.cols() {
                alpha[j] = v[k].clone();
            }
        }
        let x = a.combination(&alpha)?;
        if !x.is_zero() && !rays.iter().any(|r| ray_key(r) == ray_key(&x)) {
            rays.push(x);
        }
    }
    // drop generators inside the cone of the others
    let mut i = 0;
    while i < rays.len() {
        let others: Vec<_> = rays.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, r)| r.clone()).collect();
        let rest = NilpotentCone { lattice: a.lattice.clone(), generators: others };
        if !rest.generators.is_empty() && rest.contains(&rays[i]) {
            rays.remove(i);
        } else {
            i += 1;
        }
    }
    let mut out = NilpotentCone { lattice: a.lattice.clone(), generators: rays };
    out.generators.sort_by_key(ray_key);
    Ok(out)
}

/// Kernels and images of a cone's generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelImageReport {
    /// ∩_i ker N_i
    pub common_kernel: Subspace<Rational>,
    /// ker(Σ N_i)
    pub sum_kernel: Subspace<Rational>,
    pub kernels_equal: bool,
    /// im N_i, in generator order.
    pub images: Vec<Subspace<Rational>>,
}

pub fn kernel_image_report(c: &NilpotentCone) -> Result<KernelImageReport> {
    if c.generators.is_empty() {
        return Err(Error::Precondition("kernel report needs at least one generator".into()));
    }
    let dim = c.lattice.rank();
    let mut common = Subspace::full(dim);
    for g in &c.generators {
        common = common.intersect(&g.kernel())?;
    }
    let sum = c.combination(&vec![int(1); c.generators.len()])?;
    let sum_kernel = sum.kernel();
    Ok(KernelImageReport {
        kernels_equal: common == sum_kernel,
        common_kernel: common,
        sum_kernel,
        images: c.generators.iter().map(InfinitesimalIsometry::image).collect(),
    })
}

impl NilpotentCone {
    /// Whether `self` is one of the faces of `c`.
    pub fn is_face_of(&self, c: &NilpotentCone) -> bool {
        faces(c).map(|fs| fs.contains(self)).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{k3_basis, lattice_k3};
    use crate::nilpotent::wedge;
    use crate::scalar::frac;
    use k3_basis::{e, f};

    struct Model {
        l: Arc<QuadraticLattice>,
        n1: InfinitesimalIsometry,
        n2: InfinitesimalIsometry,
    }

    fn model() -> Model {
        let l = Arc::new(lattice_k3());
        let n1 = wedge(&l, &e(1), &e(2)).unwrap();
        let n2 = wedge(&l, &e(1), &e(3)).unwrap();
        Model { l, n1, n2 }
    }

    fn cone(m: &Model, gens: &[&InfinitesimalIsometry]) -> NilpotentCone {
        NilpotentCone::new(m.l.clone(), gens.iter().map(|g| (*g).clone()).collect()).unwrap()
    }

    #[test]
    fn zero_cone_validates() {
        let m = model();
        let z = NilpotentCone::zero(m.l.clone());
        assert!(validate_cone(&z).passed());
        assert_eq!(faces(&z).unwrap(), vec![z.clone()]);
        let w = cone_weight_filtration(&z, 2, &[]).unwrap();
        assert_eq!(w, WeightFiltration::pure(2, 22));
    }

    #[test]
    fn model_cone_validates() {
        let m = model();
        let sigma = cone(&m, &[&m.n1, &m.n2]);
        let r = validate_cone(&sigma);
        assert!(r.passed(), "{r:?}");
        assert_eq!(sigma.dim(), 2);
        let line = cone(&m, &[&m.n1, &m.n1.neg()]);
        let r = validate_cone(&line);
        assert!(!r.get("strongly_convex").unwrap().passed);
        assert!(r.get("nilpotent").unwrap().passed);
    }

    #[test]
    fn noncommuting_and_non_nilpotent_generators_flagged() {
        let m = model();
        let h = wedge(&m.l, &e(1), &f(1)).unwrap();
        let r = validate_cone(&cone(&m, &[&h, &m.n1]));
        assert!(!r.get("nilpotent").unwrap().passed);
        assert!(!r.get("commuting").unwrap().passed);
    }

    #[test]
    fn face_lists() {
        let m = model();
        let rho1 = cone(&m, &[&m.n1]);
        let rho2 = cone(&m, &[&m.n2]);
        let sigma = cone(&m, &[&m.n1, &m.n2]);
        let zero = NilpotentCone::zero(m.l.clone());
        assert_eq!(faces(&rho1).unwrap(), {
            let mut v = vec![zero.clone(), rho1.clone()];
            v.sort();
            v
        });
        let fs = faces(&sigma).unwrap();
        assert_eq!(fs.len(), 4);
        for c in [&zero, &rho1, &rho2, &sigma] {
            assert!(fs.contains(c));
        }
        let dependent = cone(&m, &[&m.n1, &m.n1.scale(&int(2))]);
        assert_eq!(faces(&dependent), Err(Error::NonSimplicial));
    }

    #[test]
    fn equality_up_to_positive_scaling() {
        let m = model();
        let a = cone(&m, &[&m.n1, &m.n2]);
        let b = cone(&m, &[&m.n2.scale(&frac(3, 7)), &m.n1.scale(&int(5))]);
        assert_eq!(a, b);
        assert_ne!(a, cone(&m, &[&m.n1.neg(), &m.n2]));
    }

    #[test]
    fn model_interior_filtration_depends_on_sample() {
        // a N1 + b N2 = e1∧(a e2 + b e3) has image span{e1, a e2 + b e3}
        let m = model();
        let sigma = cone(&m, &[&m.n1, &m.n2]);
        for (a, b) in [(1, 1), (1, 2), (3, 1), (5, 7)] {
            let n = sigma.combination(&[int(a), int(b)]).unwrap();
            let w = weight_filtration(&n, 2).unwrap();
            assert_eq!(w.dim_sequence(), vec![0, 2, 20, 22]);
            let v = k3_basis::add(&k3_basis::scale(&e(2), &int(a)), &k3_basis::scale(&e(3), &int(b)));
            assert_eq!(w.get(1), Subspace::span(22, &[e(1), v]).unwrap());
        }
        let samples: Vec<Vec<Rational>> =
            [(1, 2), (3, 1), (5, 7)].iter().map(|&(a, b)| vec![int(a), int(b)]).collect();
        assert_eq!(
            cone_weight_filtration(&sigma, 2, &samples),
            Err(Error::InteriorDependence { first: vec!["1".into(), "1".into()], second: vec!["1".into(), "2".into()] })
        );
        assert!(cone_weight_filtration(&sigma, 2, &[]).is_ok());
    }

    #[test]
    fn type_iii_interior_filtration_is_sample_independent() {
        // e1∧e2 and e1∧f2 commute; a e2 + b f2 has square 2ab > 0, so the interior is type III
        // with W_0 = W_1 = <e1>, W_2 = W_3 = e1^⊥ for every a, b > 0
        let m = model();
        let n2 = wedge(&m.l, &e(1), &f(2)).unwrap();
        let c = cone(&m, &[&m.n1, &n2]);
        assert!(validate_cone(&c).passed());
        let samples: Vec<Vec<Rational>> =
            [(1, 2), (3, 1), (5, 7), (1, 100)].iter().map(|&(a, b)| vec![int(a), int(b)]).collect();
        let w = cone_weight_filtration(&c, 2, &samples).unwrap();
        assert_eq!(w.dim_sequence(), vec![0, 1, 1, 21, 21, 22]);
        assert_eq!(w.get(0), Subspace::span(22, &[e(1)]).unwrap());
        assert_eq!(w.get(2), m.l.orthogonal_complement(&[e(1)]).unwrap());
    }

    #[test]
    fn ray_filtration_is_scale_invariant() {
        let m = model();
        let rho1 = cone(&m, &[&m.n1]);
        let w1 = cone_weight_filtration(&rho1, 2, &[vec![frac(9, 4)], vec![int(100)]]).unwrap();
        assert_eq!(w1, weight_filtration(&m.n1, 2).unwrap());
        assert!(cone_weight_filtration(&rho1, 2, &[vec![int(0)]]).is_err());
        assert!(cone_weight_filtration(&rho1, 2, &[vec![int(1), int(1)]]).is_err());
    }

    #[test]
    fn invalid_cone_has_no_filtration() {
        let m = model();
        let n2 = wedge(&m.l, &e(1), &f(1)).unwrap();
        let c = cone(&m, &[&m.n1, &n2]);
        assert!(matches!(cone_weight_filtration(&c, 2, &[]), Err(Error::Precondition(_))));
    }

    #[test]
    fn default_sample_points() {
        assert!(default_samples(0).is_empty());
        let two: Vec<Vec<Rational>> = [(1, 2), (3, 1), (5, 7)].iter().map(|&(a, b)| vec![int(a), int(b)]).collect();
        assert_eq!(default_samples(2), two);
        assert!(default_samples(4).iter().all(|s| s.len() == 4 && s.iter().all(|x| x.is_positive())));
    }

    #[test]
    fn relative_interiors() {
        let m = model();
        let rho1 = cone(&m, &[&m.n1]);
        let rho2 = cone(&m, &[&m.n2]);
        let sigma = cone(&m, &[&m.n1, &m.n2]);
        for c in [&rho1, &rho2, &sigma] {
            assert!(relint_intersects(c, c).unwrap());
        }
        assert!(!relint_intersects(&rho1, &rho2).unwrap());
        assert!(!relint_intersects(&rho1, &sigma).unwrap());
        let diag = cone(&m, &[&m.n1.add(&m.n2).unwrap()]);
        assert!(relint_intersects(&diag, &sigma).unwrap());
        let zero = NilpotentCone::zero(m.l.clone());
        assert!(relint_intersects(&zero, &zero).unwrap());
        assert!(!relint_intersects(&zero, &rho1).unwrap());
    }

    #[test]
    fn intersections() {
        let m = model();
        let rho1 = cone(&m, &[&m.n1]);
        let rho2 = cone(&m, &[&m.n2]);
        let sigma = cone(&m, &[&m.n1, &m.n2]);
        assert!(intersection(&rho1, &rho2).unwrap().is_zero_cone());
        assert_eq!(intersection(&rho1, &sigma).unwrap(), rho1);
        assert_eq!(intersection(&sigma, &sigma).unwrap(), sigma);
        let diag = cone(&m, &[&m.n1.add(&m.n2).unwrap()]);
        let half = cone(&m, &[&m.n1, &m.n1.add(&m.n2).unwrap()]);
        assert_eq!(intersection(&half, &sigma).unwrap(), half);
        assert_eq!(intersection(&diag, &rho1).unwrap(), NilpotentCone::zero(m.l.clone()));
    }

    #[test]
    fn kernel_reports() {
        let m = model();
        let rho1 = cone(&m, &[&m.n1]);
        let r = kernel_image_report(&rho1).unwrap();
        assert!(r.kernels_equal);
        let doubled = cone(&m, &[&m.n1, &m.n1]);
        assert!(kernel_image_report(&doubled).unwrap().kernels_equal);
        assert!(kernel_image_report(&NilpotentCone::zero(m.l.clone())).is_err());
    }

    #[test]
    fn model_kernels_match_pairing_oracle() {
        // ker(u∧v) for independent u, v is {x : Q(x,u) = Q(x,v) = 0}
        let m = model();
        let sigma = cone(&m, &[&m.n1, &m.n2]);
        let r = kernel_image_report(&sigma).unwrap();
        let oracle_common = m.l.orthogonal_complement(&[e(1), e(2), e(3)]).unwrap();
        let oracle_sum = m.l.orthogonal_complement(&[e(1), k3_basis::add(&e(2), &e(3))]).unwrap();
        assert_eq!(r.common_kernel, oracle_common);
        assert_eq!(r.sum_kernel, oracle_sum);
        assert_eq!(r.common_kernel.dim(), 19);
        assert_eq!(r.sum_kernel.dim(), 20);
        assert!(!r.kernels_equal);
        assert_eq!(r.images[0], Subspace::span(22, &[e(1), e(2)]).unwrap());
        assert_eq!(r.images[1], Subspace::span(22, &[e(1), e(3)]).unwrap());
    }
}
