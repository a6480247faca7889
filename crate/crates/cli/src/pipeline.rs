//! The validation pipeline: lattice, operators, cones, fan, kernels, orbits.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use weakfan_core::cone::ray_key;
use weakfan_core::{
    commutator, cone_weight_filtration, default_samples, faces, in_period_domain, kernel_image_report, kulikov_type,
    lmhs_check, nilpotency_index, orbit_condition, validate_cone, validate_weak_fan, verify_relative_filtration,
    weight_filtration, Check, Inertia, InfinitesimalIsometry, KulikovType, NilpotentCone, PeriodVector, Rational,
    WeakFan,
};

use crate::description::Resolved;

/// Which sections to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stages {
    All,
    /// Operators and their Kulikov types only.
    Classify,
    /// Orbit checks only.
    Orbits,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSection {
    pub rank: usize,
    pub inertia: Inertia,
    pub determinant: String,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorEntry {
    pub name: String,
    pub rank: Option<usize>,
    pub nilpotency_index: Option<usize>,
    pub kulikov_type: Option<KulikovType>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorEntry {
    pub first: String,
    pub second: String,
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorSection {
    pub operators: Vec<OperatorEntry>,
    /// Every pair of infinitesimal isometries, for information.
    pub commutators: Vec<CommutatorEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDims {
    pub sample: Vec<String>,
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeEntry {
    /// `W(base)` is the base filtration.
    pub base: String,
    /// The operator whose relative filtration `W(Σ N_i)` should be.
    pub operator: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSection {
    pub name: String,
    pub generators: Vec<String>,
    pub dim: Option<usize>,
    pub checks: Vec<Check>,
    /// Weight filtration dimensions at each interior sample, `(1, …, 1)` first.
    pub samples: Vec<SampleDims>,
    /// The common interior filtration, as `(index, dim)` pairs, when the samples agree.
    pub filtration: Option<Vec<(i32, usize)>>,
    /// Relative filtration checks for two-generator cones, for information.
    pub relative: Vec<RelativeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceEntry {
    pub cone: String,
    pub faces: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionLine {
    pub first: String,
    pub second: String,
    pub intersection: String,
    pub common_face: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanSection {
    /// Cone names in canonical order.
    pub cones: Vec<String>,
    pub faces: Vec<FaceEntry>,
    pub checks: Vec<Check>,
    pub missing_faces: Vec<FaceEntry>,
    pub intersections: Vec<IntersectionLine>,
    pub unchecked: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSection {
    pub cone: String,
    pub common_kernel_dim: usize,
    pub sum_kernel_dim: usize,
    pub image_dims: Vec<usize>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgePiece {
    pub weight: i32,
    pub dim: usize,
    /// `(p, q, h^{p,q})`, nonzero entries.
    pub hodge_numbers: Vec<(i32, i32, usize)>,
    pub pure: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSection {
    pub period: String,
    pub cone: String,
    /// The operator tested: a ray generator or the sum of a cone's generators.
    pub operator: String,
    pub q_omega_omega: String,
    pub q_omega_conj: String,
    pub in_domain: bool,
    /// Coefficients of `h(y)`, lowest degree first.
    pub coefficients: Vec<String>,
    pub threshold: Option<String>,
    pub pieces: Vec<HodgePiece>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub center: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operators: Option<OperatorSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cones: Option<Vec<ConeSection>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernels: Option<Vec<KernelSection>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbits: Option<Vec<OrbitSection>>,
    pub overall: bool,
}

impl PipelineReport {
    /// Every verdict, tagged with its section and subject.
    pub fn all_checks(&self) -> Vec<(String, &Check)> {
        let mut out = Vec::new();
        if let Some(l) = &self.lattice {
            out.extend(l.checks.iter().map(|c| ("lattice".to_string(), c)));
        }
        if let Some(o) = &self.operators {
            for e in &o.operators {
                out.extend(e.checks.iter().map(|c| (format!("operator {}", e.name), c)));
            }
        }
        if let Some(cs) = &self.cones {
            for s in cs {
                out.extend(s.checks.iter().map(|c| (format!("cone {}", s.name), c)));
            }
        }
        if let Some(f) = &self.fan {
            out.extend(f.checks.iter().map(|c| ("fan".to_string(), c)));
        }
        if let Some(ks) = &self.kernels {
            for k in ks {
                out.extend(k.checks.iter().map(|c| (format!("kernels {}", k.cone), c)));
            }
        }
        if let Some(os) = &self.orbits {
            for o in os {
                out.extend(o.checks.iter().map(|c| (format!("orbit {} / {}", o.period, o.operator), c)));
            }
        }
        out
    }

    pub fn failures(&self) -> Vec<String> {
        self.all_checks()
            .into_iter()
            .filter(|(_, c)| !c.passed)
            .map(|(s, c)| format!("{s}: {}: {}", c.name, c.detail))
            .collect()
    }
}

fn names(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn lattice_section(r: &Resolved) -> LatticeSection {
    let l = &r.lattice;
    let inertia = l.inertia();
    let mut checks = vec![
        Check::new("even", l.is_even(), if l.is_even() { "all Q(x,x) even".into() } else { "odd diagonal entry".into() }),
        Check::new("unimodular", l.is_unimodular(), format!("det = {}", l.determinant())),
    ];
    checks.push(match l.signature() {
        Ok((p, n)) => Check::new("nondegenerate", true, format!("signature ({p},{n})")),
        Err(e) => Check::new("nondegenerate", false, e.to_string()),
    });
    LatticeSection { rank: l.rank(), inertia, determinant: l.determinant().to_string(), checks }
}

fn operator_section(r: &Resolved) -> OperatorSection {
    let mut operators = Vec::new();
    for (name, op) in &r.operators {
        let mut entry = OperatorEntry { name: name.clone(), rank: None, nilpotency_index: None, kulikov_type: None, checks: vec![] };
        match &op.isometry {
            Err(e) => entry.checks.push(Check::new("isometry", false, e.to_string())),
            Ok(n) => {
                entry.rank = Some(n.rank());
                entry.checks.push(Check::new("isometry", true, "MᵀG + GM = 0".into()));
                match nilpotency_index(n) {
                    Ok(k) => {
                        entry.nilpotency_index = Some(k);
                        entry.checks.push(Check::new("nilpotent", true, format!("N^{k} = 0, index {k}")));
                        match kulikov_type(n) {
                            Ok(t) => {
                                entry.kulikov_type = Some(t);
                                entry.checks.push(Check::new("kulikov_type", true, format!("type {t}")));
                            }
                            Err(e) => entry.checks.push(Check::new("kulikov_type", false, e.to_string())),
                        }
                    }
                    Err(e) => {
                        entry.checks.push(Check::new("nilpotent", false, e.to_string()));
                        entry.checks.push(Check::new("kulikov_type", false, "requires a nilpotent operator".into()));
                    }
                }
            }
        }
        operators.push(entry);
    }
    let valid: Vec<(&String, &InfinitesimalIsometry)> =
        r.operators.iter().filter_map(|(k, v)| v.isometry.as_ref().ok().map(|n| (k, n))).collect();
    let mut commutators = Vec::new();
    for i in 0..valid.len() {
        for j in i + 1..valid.len() {
            let vanishes = commutator(valid[i].1, valid[j].1).map(|c| c.is_zero()).unwrap_or(false);
            commutators.push(CommutatorEntry { first: valid[i].0.clone(), second: valid[j].0.clone(), vanishes });
        }
    }
    OperatorSection { operators, commutators }
}

/// Builds the named cones whose generators are all infinitesimal isometries.
fn build_cones(r: &Resolved) -> BTreeMap<String, Result<NilpotentCone, String>> {
    r.cones
        .iter()
        .map(|(name, gens)| {
            let mut ops = Vec::new();
            for g in gens {
                match &r.operators[g].isometry {
                    Ok(n) => ops.push(n.clone()),
                    Err(e) => return (name.clone(), Err(format!("generator {g}: {e}"))),
                }
            }
            (name.clone(), NilpotentCone::new(r.lattice.clone(), ops).map_err(|e| e.to_string()))
        })
        .collect()
}

/// Names cones for display: `{0}`, a named cone, or `<N1, N2>` from operator names.
struct Namer<'a> {
    fan: Vec<(String, NilpotentCone)>,
    cones: &'a BTreeMap<String, Result<NilpotentCone, String>>,
    rays: Vec<(Vec<Rational>, String)>,
}

impl<'a> Namer<'a> {
    fn new(r: &Resolved, cones: &'a BTreeMap<String, Result<NilpotentCone, String>>) -> Self {
        let fan = r.fan.iter().filter_map(|n| cones[n].as_ref().ok().map(|c| (n.clone(), c.clone()))).collect();
        let rays = r
            .operators
            .iter()
            .filter_map(|(k, v)| v.isometry.as_ref().ok().filter(|n| !n.is_zero()).map(|n| (ray_key(n), k.clone())))
            .collect();
        Self { fan, cones, rays }
    }

    fn name(&self, c: &NilpotentCone) -> String {
        if c.is_zero_cone() {
            return "{0}".into();
        }
        if let Some((n, _)) = self.fan.iter().find(|(_, x)| x == c) {
            return n.clone();
        }
        if let Some((n, _)) = self.cones.iter().find(|(_, x)| x.as_ref().ok() == Some(c)) {
            return n.clone();
        }
        let gens: Vec<String> = c
            .generators()
            .iter()
            .map(|g| {
                let k = ray_key(g);
                self.rays.iter().find(|(r, _)| *r == k).map(|(_, n)| n.clone()).unwrap_or_else(|| "?".into())
            })
            .collect();
        format!("<{}>", gens.join(", "))
    }
}

fn cone_section(r: &Resolved, name: &str, built: &Result<NilpotentCone, String>) -> ConeSection {
    let generators = r.cones[name].clone();
    let mut s = ConeSection {
        name: name.to_string(),
        generators: generators.clone(),
        dim: None,
        checks: vec![],
        samples: vec![],
        filtration: None,
        relative: vec![],
    };
    let c = match built {
        Err(e) => {
            s.checks.push(Check::new("generators", false, e.clone()));
            return s;
        }
        Ok(c) => c,
    };
    s.dim = Some(c.dim());
    let report = validate_cone(c);
    let valid = report.passed();
    s.checks.extend(report.checks);
    if !valid {
        return s;
    }
    let r_gens = c.generators().len();
    let mut points = vec![vec![Rational::from_integer(1.into()); r_gens]];
    for p in default_samples(r_gens) {
        if !points.contains(&p) {
            points.push(p);
        }
    }
    for p in &points {
        if let Ok(w) = c.combination(p).and_then(|n| weight_filtration(&n, r.center)) {
            s.samples.push(SampleDims { sample: names(p), dims: w.dim_sequence() });
        }
    }
    match cone_weight_filtration(c, r.center, &default_samples(r_gens)) {
        Ok(w) => {
            s.checks.push(Check::new("interior_filtration", true, format!("agrees at all {} sample points", points.len())));
            s.filtration = Some(w.dims());
        }
        Err(e) => s.checks.push(Check::new("interior_filtration", false, e.to_string())),
    }
    if r_gens == 2 {
        if let Ok(m) = c.combination(&points[0]).and_then(|n| weight_filtration(&n, r.center)) {
            for (b, o) in [(0, 1), (1, 0)] {
                let base = &c.generators()[b];
                let op = &c.generators()[o];
                let (holds, detail) = match weight_filtration(base, r.center)
                    .and_then(|w| verify_relative_filtration(&m, op, &w))
                {
                    Ok(v) if v.is_valid() => (true, "relative filtration".into()),
                    Ok(v) => (false, v.defects.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")),
                    Err(e) => (false, e.to_string()),
                };
                s.relative.push(RelativeEntry {
                    base: generators[b].clone(),
                    operator: generators[o].clone(),
                    holds,
                    detail,
                });
            }
        }
    }
    s
}

fn fan_section(r: &Resolved, cones: &BTreeMap<String, Result<NilpotentCone, String>>, namer: &Namer) -> FanSection {
    let mut section = FanSection {
        cones: vec![],
        faces: vec![],
        checks: vec![],
        missing_faces: vec![],
        intersections: vec![],
        unchecked: vec![],
    };
    let mut members = Vec::new();
    for n in &r.fan {
        match &cones[n] {
            Ok(c) => members.push(c.clone()),
            Err(e) => {
                section.checks.push(Check::new("construction", false, format!("cone {n}: {e}")));
                return section;
            }
        }
    }
    let fan = match WeakFan::new(r.lattice.clone(), members) {
        Ok(f) => f,
        Err(e) => {
            section.checks.push(Check::new("construction", false, e.to_string()));
            return section;
        }
    };
    let label = |c: &NilpotentCone| {
        if c.is_zero_cone() {
            namer.fan.iter().find(|(_, x)| x.is_zero_cone()).map(|(n, _)| n.clone()).unwrap_or_else(|| "{0}".into())
        } else {
            namer.name(c)
        }
    };
    section.cones = fan.cones().iter().map(label).collect();
    for c in fan.cones() {
        let fs = match faces(c) {
            Ok(fs) => fs.iter().map(label).collect(),
            Err(e) => vec![e.to_string()],
        };
        section.faces.push(FaceEntry { cone: label(c), faces: fs });
    }
    let report = validate_weak_fan(&fan, r.center);
    section.checks.extend(report.checks.checks.clone());
    let mut missing: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for m in &report.missing_faces {
        missing.entry(m.cone).or_default().push(namer.name(&m.face));
    }
    section.missing_faces =
        missing.into_iter().map(|(i, fs)| FaceEntry { cone: label(&fan.cones()[i]), faces: fs }).collect();
    section.intersections = report
        .intersections
        .iter()
        .map(|x| IntersectionLine {
            first: label(&fan.cones()[x.first]),
            second: label(&fan.cones()[x.second]),
            intersection: namer.name(&x.cone),
            common_face: x.common_face,
        })
        .collect();
    section.unchecked = report.unchecked;
    section
}

fn kernel_sections(cones: &BTreeMap<String, Result<NilpotentCone, String>>) -> Vec<KernelSection> {
    let mut out = Vec::new();
    for (name, c) in cones {
        let Ok(c) = c else { continue };
        if !validate_cone(c).passed() {
            continue;
        }
        let Ok(k) = kernel_image_report(c) else { continue };
        let (a, b) = (k.common_kernel.dim(), k.sum_kernel.dim());
        let detail = if k.kernels_equal {
            format!("∩ ker N_i = ker(Σ N_i), dim {a}")
        } else {
            format!("dim ∩ ker N_i = {a}, dim ker(Σ N_i) = {b}")
        };
        out.push(KernelSection {
            cone: name.clone(),
            common_kernel_dim: a,
            sum_kernel_dim: b,
            image_dims: k.images.iter().map(|s| s.dim()).collect(),
            checks: vec![Check::new("kernel_identity", k.kernels_equal, detail)],
        });
    }
    out
}

/// Ray generators and interior sums of the fan's cones (or of all cones without a fan).
fn orbit_targets(
    r: &Resolved,
    cones: &BTreeMap<String, Result<NilpotentCone, String>>,
) -> Vec<(String, String, InfinitesimalIsometry)> {
    let order: Vec<String> = if r.fan.is_empty() { r.cones.keys().cloned().collect() } else { r.fan.clone() };
    let mut out: Vec<(String, String, InfinitesimalIsometry)> = Vec::new();
    for name in order {
        let Ok(c) = &cones[&name] else { continue };
        if c.is_zero_cone() || !validate_cone(c).passed() {
            continue;
        }
        let label = r.cones[&name].join("+");
        let Ok(n) = c.combination(&vec![Rational::from_integer(1.into()); c.generators().len()]) else { continue };
        if !out.iter().any(|(_, l, _)| *l == label) {
            out.push((name, label, n));
        }
    }
    out
}

fn orbit_section(period: &str, p: &PeriodVector, cone: &str, label: &str, n: &InfinitesimalIsometry, center: i32) -> OrbitSection {
    let d = in_period_domain(p);
    let mut s = OrbitSection {
        period: period.to_string(),
        cone: cone.to_string(),
        operator: label.to_string(),
        q_omega_omega: d.q_omega_omega.to_string(),
        q_omega_conj: d.q_omega_conj.to_string(),
        in_domain: d.in_domain,
        coefficients: vec![],
        threshold: None,
        pieces: vec![],
        checks: vec![],
    };
    match orbit_condition(n, p) {
        Ok(v) => {
            s.coefficients = names(&v.coefficients);
            s.threshold = v.threshold.as_ref().map(ToString::to_string);
            let detail = match &v.threshold {
                Some(y0) => format!("h(y) > 0 for y > {y0}"),
                None => "leading coefficient of h is not positive".into(),
            };
            s.checks.push(Check::new("orbit_condition", v.holds, detail));
        }
        Err(e) => s.checks.push(Check::new("orbit_condition", false, e.to_string())),
    }
    match lmhs_check(n, p, center) {
        Ok(m) => {
            s.pieces = m
                .pieces
                .iter()
                .map(|g| HodgePiece { weight: g.weight, dim: g.dim, hodge_numbers: g.hodge_numbers.clone(), pure: g.is_pure() })
                .collect();
            let fails = m.failures();
            let detail = if fails.is_empty() {
                "every graded piece is pure".into()
            } else {
                let list: Vec<String> = fails.iter().map(|(j, p)| format!("(j={j}, p={p})")).collect();
                format!("opposition fails at {}", list.join(", "))
            };
            s.checks.push(Check::new("mixed_hodge_structure", fails.is_empty(), detail));
        }
        Err(e) => s.checks.push(Check::new("mixed_hodge_structure", false, e.to_string())),
    }
    s
}

/// Runs the requested stages in the fixed section order.
pub fn run_pipeline(r: &Resolved, stages: Stages) -> PipelineReport {
    let mut report = PipelineReport {
        center: r.center,
        lattice: None,
        operators: None,
        cones: None,
        fan: None,
        kernels: None,
        orbits: None,
        overall: false,
    };
    let all = stages == Stages::All;
    if all {
        report.lattice = Some(lattice_section(r));
    }
    if (all && !r.operators.is_empty()) || stages == Stages::Classify {
        report.operators = Some(operator_section(r));
    }
    let cones = build_cones(r);
    let namer = Namer::new(r, &cones);
    if all && !r.cones.is_empty() {
        report.cones = Some(cones.iter().map(|(n, c)| cone_section(r, n, c)).collect());
    }
    if all && !r.fan.is_empty() {
        report.fan = Some(fan_section(r, &cones, &namer));
    }
    if all {
        let k = kernel_sections(&cones);
        if !k.is_empty() {
            report.kernels = Some(k);
        }
    }
    if (all || stages == Stages::Orbits) && !r.periods.is_empty() {
        let targets = orbit_targets(r, &cones);
        let mut out = Vec::new();
        for (pname, p) in &r.periods {
            for (cone, label, n) in &targets {
                out.push(orbit_section(pname, p, cone, label, n, r.center));
            }
        }
        report.orbits = Some(out);
    }
    report.overall = report.all_checks().iter().all(|(_, c)| c.passed);
    report
}
