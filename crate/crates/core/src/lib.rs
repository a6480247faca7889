//! Exact computations for degenerations of K3-type Hodge structures: integral
//! lattices, nilpotent infinitesimal isometries, monodromy weight filtrations,
//! nilpotent cones, weak fans and nilpotent orbits.
//!
//! All arithmetic is over the rationals or the Gaussian rationals; no floating
//! point is used.

pub mod cone;
pub mod error;
pub mod fan;
pub mod filtration;
pub mod generators;
pub mod lattice;
pub mod lp;
pub mod matrix;
pub mod nilpotent;
pub mod orbit;
pub mod report;
pub mod scalar;
pub mod search;
pub mod subspace;

pub use cone::{
    cone_weight_filtration, default_samples, faces, intersection, is_strongly_convex, kernel_image_report,
    relint_intersects, validate_cone, KernelImageReport, NilpotentCone,
};
pub use error::{Error, Result};
pub use fan::{example_fan, model_operators, validate_weak_fan, FanReport, ModelOperators, WeakFan};
pub use filtration::{
    verify_relative_filtration, verify_weight_filtration, weight_filtration, FiltrationDefect, FiltrationVerdict,
    WeightFiltration,
};
pub use lattice::{k3_basis, lattice_e8_minus, lattice_k3, lattice_u, QuadraticLattice};
pub use matrix::{inertia, Inertia, Matrix};
pub use nilpotent::{
    block_form, commutator, exp_nilpotent, kulikov_type, log_unipotent, nilpotency_index, wedge, BlockForm,
    InfinitesimalIsometry, KulikovType, LatticeAutomorphism,
};
pub use orbit::{act, in_period_domain, lmhs_check, orbit_condition, HodgeDiagnostics, MhsReport, OrbitVerdict, PeriodVector};
pub use report::{Check, ValidationReport};
pub use scalar::{parse_rational, GaussianRational, Rational};
pub use subspace::{image, kernel, Subspace};
