//! Finite weak fans of nilpotent cones and their axioms.

use std::sync::Arc;

use crate::cone::{
    cone_weight_filtration, default_samples, faces, intersection, relint_intersects, validate_cone, NilpotentCone,
};
use crate::error::{Error, Result};
use crate::lattice::{k3_basis, lattice_k3, QuadraticLattice};
use crate::nilpotent::{wedge, InfinitesimalIsometry};
use crate::report::{Check, ValidationReport};

/// A finite set of cones on one lattice, kept in canonical order, always containing `{0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakFan {
    lattice: Arc<QuadraticLattice>,
    cones: Vec<NilpotentCone>,
}

impl WeakFan {
    /// Adds the zero cone when absent; rejects repeated cones.
    pub fn new(lattice: Arc<QuadraticLattice>, mut cones: Vec<NilpotentCone>) -> Result<Self> {
        if cones.iter().any(|c| c.lattice().as_ref() != lattice.as_ref()) {
            return Err(Error::LatticeMismatch);
        }
        if !cones.iter().any(NilpotentCone::is_zero_cone) {
            cones.push(NilpotentCone::zero(lattice.clone()));
        }
        cones.sort();
        if cones.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCone);
        }
        Ok(Self { lattice, cones })
    }

    pub fn lattice(&self) -> &Arc<QuadraticLattice> {
        &self.lattice
    }

    pub fn cones(&self) -> &[NilpotentCone] {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn position(&self, c: &NilpotentCone) -> Option<usize> {
        self.cones.iter().position(|x| x == c)
    }
}

/// A face of `cones[cone]` that is not in the fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MissingFace {
    pub cone: usize,
    pub face: NilpotentCone,
}

/// `cones[first] ∩ cones[second]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionEntry {
    pub first: usize,
    pub second: usize,
    pub cone: NilpotentCone,
    /// Whether the intersection is a face of both cones.
    pub common_face: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanReport {
    /// `cones_valid`, `face_closure`, `weak_compatibility`.
    pub checks: ValidationReport,
    pub missing_faces: Vec<MissingFace>,
    /// Every unordered pair of distinct cones, in canonical order.
    pub intersections: Vec<IntersectionEntry>,
    /// Axioms not examined.
    pub unchecked: Vec<String>,
}

impl FanReport {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

/// Cone validity, face closure, weak compatibility, and the table of pairwise intersections.
///
/// Weak compatibility: distinct cones whose relative interiors meet must have different
/// interior weight filtrations (sampled with [`default_samples`]).
pub fn validate_weak_fan(f: &WeakFan, center: i32) -> FanReport {
    let cones = &f.cones;
    let mut checks = ValidationReport::default();

    let invalid: Vec<String> = cones
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let r = validate_cone(c);
            (!r.passed()).then(|| format!("cone {i} ({})", r.failures().join("; ")))
        })
        .collect();
    checks.push(Check::new(
        "cones_valid",
        invalid.is_empty(),
        if invalid.is_empty() { format!("{} cones valid", cones.len()) } else { invalid.join(", ") },
    ));

    let mut missing_faces = Vec::new();
    let mut non_simplicial = Vec::new();
    for (i, c) in cones.iter().enumerate() {
        match faces(c) {
            Ok(fs) => {
                for face in fs {
                    if f.position(&face).is_none() {
                        missing_faces.push(MissingFace { cone: i, face });
                    }
                }
            }
            Err(_) => non_simplicial.push(i.to_string()),
        }
    }
    let closed = missing_faces.is_empty() && non_simplicial.is_empty();
    let mut detail = Vec::new();
    if !missing_faces.is_empty() {
        detail.push(format!("{} missing faces", missing_faces.len()));
    }
    if !non_simplicial.is_empty() {
        detail.push(format!("non-simplicial cones {}", non_simplicial.join(", ")));
    }
    checks.push(Check::new(
        "face_closure",
        closed,
        if closed { "every face of every cone is in the fan".into() } else { detail.join("; ") },
    ));

    let mut violations = Vec::new();
    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            match relint_intersects(&cones[i], &cones[j]) {
                Ok(false) => {}
                Ok(true) => {
                    let wi = cone_weight_filtration(&cones[i], center, &default_samples(cones[i].generators().len()));
                    let wj = cone_weight_filtration(&cones[j], center, &default_samples(cones[j].generators().len()));
                    match (wi, wj) {
                        (Ok(a), Ok(b)) if a == b => {
                            violations.push(format!("cones {i}, {j}: interiors meet with equal filtrations"))
                        }
                        (Ok(_), Ok(_)) => {}
                        (Err(e), _) | (_, Err(e)) => {
                            violations.push(format!("cones {i}, {j}: interiors meet, filtration undefined ({e})"))
                        }
                    }
                }
                Err(e) => violations.push(format!("cones {i}, {j}: {e}")),
            }
        }
    }
    checks.push(Check::new(
        "weak_compatibility",
        violations.is_empty(),
        if violations.is_empty() {
            "no distinct cones share interior points and filtration".into()
        } else {
            violations.join("; ")
        },
    ));

    let mut intersections = Vec::new();
    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            if let Ok(cone) = intersection(&cones[i], &cones[j]) {
                let common_face = cone.is_face_of(&cones[i]) && cone.is_face_of(&cones[j]);
                intersections.push(IntersectionEntry { first: i, second: j, cone, common_face });
            }
        }
    }

    FanReport { checks, missing_faces, intersections, unchecked: vec!["group equivariance".into()] }
}

/// The worked model on the K3 lattice: `N1 = e1∧e2`, `N2 = e1∧e3`.
#[derive(Debug, Clone)]
pub struct ModelOperators {
    pub lattice: Arc<QuadraticLattice>,
    pub n1: InfinitesimalIsometry,
    pub n2: InfinitesimalIsometry,
}

impl ModelOperators {
    pub fn sigma(&self) -> NilpotentCone {
        NilpotentCone::new(self.lattice.clone(), vec![self.n1.clone(), self.n2.clone()]).expect("nonzero generators")
    }

    pub fn rho1(&self) -> NilpotentCone {
        NilpotentCone::new(self.lattice.clone(), vec![self.n1.clone()]).expect("nonzero generator")
    }

    pub fn rho2(&self) -> NilpotentCone {
        NilpotentCone::new(self.lattice.clone(), vec![self.n2.clone()]).expect("nonzero generator")
    }
}

pub fn model_operators() -> ModelOperators {
    use k3_basis::e;
    let lattice = Arc::new(lattice_k3());
    let n1 = wedge(&lattice, &e(1), &e(2)).expect("basis vectors have rank length");
    let n2 = wedge(&lattice, &e(1), &e(3)).expect("basis vectors have rank length");
    ModelOperators { lattice, n1, n2 }
}

/// `{σ, ρ1, ρ2, {0}}` for the model operators.
pub fn example_fan() -> WeakFan {
    let m = model_operators();
    WeakFan::new(m.lattice.clone(), vec![m.sigma(), m.rho1(), m.rho2()]).expect("distinct cones")
}
