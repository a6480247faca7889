//! JSON degeneration descriptions: schema, strict parsing and name resolution.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use weakfan_core::k3_basis;
use weakfan_core::scalar::rational_string;
use weakfan_core::{
    lattice_e8_minus, lattice_k3, lattice_u, wedge, Error, InfinitesimalIsometry, Matrix, PeriodVector,
    QuadraticLattice, Rational,
};

/// A rational written as `"p"` or `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rat(#[serde(with = "rational_string")] pub Rational);

fn rats(v: &[Rational]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

fn unrat(v: &[Rat]) -> Vec<Rational> {
    v.iter().map(|r| r.0.clone()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuiltinLattice {
    #[serde(rename = "U")]
    U,
    #[serde(rename = "E8_minus")]
    E8Minus,
    #[serde(rename = "K3")]
    K3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GramSpec {
    pub gram: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeSpec {
    Builtin(BuiltinLattice),
    Gram(GramSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum OperatorSpec {
    /// `u∧v`, the map `x ↦ Q(x,u) v − Q(x,v) u`.
    Wedge([Vec<Rat>; 2]),
    /// Row-major matrix.
    Matrix(Vec<Vec<Rat>>),
}

/// `ω = real + i·imaginary`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodSpec {
    pub real: Vec<Rat>,
    pub imaginary: Vec<Rat>,
}

fn default_center() -> i32 {
    2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegenerationDescription {
    pub lattice: LatticeSpec,
    #[serde(default)]
    pub operators: BTreeMap<String, OperatorSpec>,
    /// Cone name to generator operator names; an empty list is the zero cone.
    #[serde(default)]
    pub cones: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub fan: Vec<String>,
    #[serde(default)]
    pub period_vectors: BTreeMap<String, PeriodSpec>,
    #[serde(default = "default_center")]
    pub center: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DescriptionError {
    #[error("parse error at {path} (line {line}, column {column}): {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("undefined {kind} \"{name}\" referenced by {referrer}")]
    UndefinedReference { kind: &'static str, name: String, referrer: String },
    #[error("invalid {what}: {message}")]
    Invalid { what: String, message: String },
}

impl DescriptionError {
    fn invalid(what: impl Into<String>, e: impl ToString) -> Self {
        Self::Invalid { what: what.into(), message: e.to_string() }
    }
}

/// Strict parse: unknown keys and malformed rationals are rejected with the JSON path.
pub fn parse(text: &str) -> Result<DegenerationDescription, DescriptionError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let result: Result<DegenerationDescription, _> = serde_path_to_error::deserialize(de);
    result.map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        DescriptionError::Parse { path, line: inner.line(), column: inner.column(), message: inner.to_string() }
    })
}

/// An operator as given, and the result of checking it is an infinitesimal isometry.
#[derive(Debug, Clone)]
pub struct ResolvedOperator {
    pub matrix: Matrix<Rational>,
    pub isometry: Result<InfinitesimalIsometry, Error>,
}

/// A description with every name checked and every object built.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub lattice: Arc<QuadraticLattice>,
    pub operators: BTreeMap<String, ResolvedOperator>,
    pub cones: BTreeMap<String, Vec<String>>,
    pub fan: Vec<String>,
    pub periods: BTreeMap<String, PeriodVector>,
    pub center: i32,
}

fn check_len(what: &str, v: &[Rat], n: usize) -> Result<(), DescriptionError> {
    if v.len() != n {
        return Err(DescriptionError::invalid(what, format!("expected {n} entries, found {}", v.len())));
    }
    Ok(())
}

fn matrix_from(what: &str, rows: &[Vec<Rat>], n: usize) -> Result<Matrix<Rational>, DescriptionError> {
    if rows.len() != n {
        return Err(DescriptionError::invalid(what, format!("expected {n} rows, found {}", rows.len())));
    }
    for r in rows {
        check_len(what, r, n)?;
    }
    Matrix::from_rows(n, rows.iter().map(|r| unrat(r)).collect()).map_err(|e| DescriptionError::invalid(what, e))
}

/// Builds the lattice, operators and period vectors and checks every name reference.
pub fn resolve(d: &DegenerationDescription) -> Result<Resolved, DescriptionError> {
    let lattice = Arc::new(match &d.lattice {
        LatticeSpec::Builtin(BuiltinLattice::U) => lattice_u(),
        LatticeSpec::Builtin(BuiltinLattice::E8Minus) => lattice_e8_minus(),
        LatticeSpec::Builtin(BuiltinLattice::K3) => lattice_k3(),
        LatticeSpec::Gram(g) => {
            let n = g.gram.len();
            let m = matrix_from("lattice", &g.gram, n)?;
            QuadraticLattice::new(m).map_err(|e| DescriptionError::invalid("lattice", e))?
        }
    });
    let n = lattice.rank();

    let mut operators = BTreeMap::new();
    for (name, spec) in &d.operators {
        let what = format!("operator \"{name}\"");
        let (matrix, isometry) = match spec {
            OperatorSpec::Wedge([u, v]) => {
                check_len(&what, u, n)?;
                check_len(&what, v, n)?;
                let w = wedge(&lattice, &unrat(u), &unrat(v)).map_err(|e| DescriptionError::invalid(&what, e))?;
                (w.matrix().clone(), Ok(w))
            }
            OperatorSpec::Matrix(rows) => {
                let m = matrix_from(&what, rows, n)?;
                let iso = InfinitesimalIsometry::new(lattice.clone(), m.clone());
                (m, iso)
            }
        };
        operators.insert(name.clone(), ResolvedOperator { matrix, isometry });
    }

    for (cone, gens) in &d.cones {
        for g in gens {
            if !operators.contains_key(g) {
                return Err(DescriptionError::UndefinedReference {
                    kind: "operator",
                    name: g.clone(),
                    referrer: format!("cone \"{cone}\""),
                });
            }
        }
    }
    for c in &d.fan {
        if !d.cones.contains_key(c) {
            return Err(DescriptionError::UndefinedReference { kind: "cone", name: c.clone(), referrer: "fan".into() });
        }
    }

    let mut periods = BTreeMap::new();
    for (name, spec) in &d.period_vectors {
        let what = format!("period vector \"{name}\"");
        check_len(&what, &spec.real, n)?;
        check_len(&what, &spec.imaginary, n)?;
        let p = PeriodVector::from_parts(lattice.clone(), &unrat(&spec.real), &unrat(&spec.imaginary))
            .map_err(|e| DescriptionError::invalid(&what, e))?;
        periods.insert(name.clone(), p);
    }

    Ok(Resolved { lattice, operators, cones: d.cones.clone(), fan: d.fan.clone(), periods, center: d.center })
}

impl DegenerationDescription {
    /// The K3 model: `N1 = e1∧e2`, `N2 = e1∧e3`, the fan `{σ, ρ1, ρ2, {0}}` and the
    /// period vector `ω = −f1 − i(f2 + f3)`.
    pub fn two_ray_example() -> Self {
        use k3_basis::{add, e, f, scale};
        let minus = Rational::from_integer((-1).into());
        let mut operators = BTreeMap::new();
        operators.insert("N1".to_string(), OperatorSpec::Wedge([rats(&e(1)), rats(&e(2))]));
        operators.insert("N2".to_string(), OperatorSpec::Wedge([rats(&e(1)), rats(&e(3))]));
        let mut cones = BTreeMap::new();
        cones.insert("sigma".to_string(), vec!["N1".to_string(), "N2".to_string()]);
        cones.insert("rho1".to_string(), vec!["N1".to_string()]);
        cones.insert("rho2".to_string(), vec!["N2".to_string()]);
        cones.insert("zero".to_string(), vec![]);
        let mut period_vectors = BTreeMap::new();
        period_vectors.insert(
            "omega".to_string(),
            PeriodSpec { real: rats(&scale(&f(1), &minus)), imaginary: rats(&scale(&add(&f(2), &f(3)), &minus)) },
        );
        Self {
            lattice: LatticeSpec::Builtin(BuiltinLattice::K3),
            operators,
            cones,
            fan: ["sigma", "rho1", "rho2", "zero"].iter().map(|s| s.to_string()).collect(),
            period_vectors,
            center: 2,
        }
    }
}
