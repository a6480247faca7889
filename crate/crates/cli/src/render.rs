//! Text and JSON rendering of pipeline reports.

use std::fmt::Write;

use weakfan_core::Check;

use crate::pipeline::PipelineReport;

fn mark(passed: bool) -> &'static str {
    if passed {
        "[PASS]"
    } else {
        "[FAIL]"
    }
}

fn check_line(out: &mut String, indent: &str, c: &Check) {
    let _ = writeln!(out, "{indent}{} {}: {}", mark(c.passed), c.name, c.detail);
}

fn dims(d: &[usize]) -> String {
    let v: Vec<String> = d.iter().map(ToString::to_string).collect();
    format!("({})", v.join(","))
}

/// Deterministic plain-text rendering.
pub fn render_text(r: &PipelineReport) -> String {
    let mut out = String::new();
    if let Some(l) = &r.lattice {
        let _ = writeln!(out, "== lattice ==");
        let _ = writeln!(out, "  rank {}, inertia {}, det {}", l.rank, l.inertia, l.determinant);
        for c in &l.checks {
            check_line(&mut out, "  ", c);
        }
    }
    if let Some(o) = &r.operators {
        let _ = writeln!(out, "== operators ==");
        for e in &o.operators {
            let kind = e.kulikov_type.map(|t| format!(", type {t}")).unwrap_or_default();
            let rank = e.rank.map(|k| format!("rank {k}")).unwrap_or_else(|| "not an isometry".into());
            let _ = writeln!(out, "  {}: {rank}{kind}", e.name);
            for c in &e.checks {
                check_line(&mut out, "    ", c);
            }
        }
        for c in &o.commutators {
            let rel = if c.vanishes { "=" } else { "≠" };
            let _ = writeln!(out, "  [{}, {}] {rel} 0", c.first, c.second);
        }
    }
    if let Some(cs) = &r.cones {
        let _ = writeln!(out, "== cones ==");
        for s in cs {
            let dim = s.dim.map(|d| format!(", dim {d}")).unwrap_or_default();
            let _ = writeln!(out, "  {} = <{}>{dim}", s.name, s.generators.join(", "));
            for c in &s.checks {
                check_line(&mut out, "    ", c);
            }
            for p in &s.samples {
                let _ = writeln!(out, "    W at ({}): dims {}", p.sample.join(","), dims(&p.dims));
            }
            for e in &s.relative {
                let verdict = if e.holds { "holds" } else { "fails" };
                let _ = writeln!(
                    out,
                    "    info: W(sum) relative to W({}) for {}: {verdict} ({})",
                    e.base, e.operator, e.detail
                );
            }
        }
    }
    if let Some(f) = &r.fan {
        let _ = writeln!(out, "== fan ==");
        if !f.cones.is_empty() {
            let _ = writeln!(out, "  cones: {}", f.cones.join(", "));
        }
        for e in &f.faces {
            let _ = writeln!(out, "  faces({}) = {{{}}}", e.cone, e.faces.join(", "));
        }
        for c in &f.checks {
            check_line(&mut out, "  ", c);
        }
        for e in &f.missing_faces {
            let _ = writeln!(out, "  missing faces of {}: {}", e.cone, e.faces.join(", "));
        }
        for x in &f.intersections {
            let note = if x.common_face { "" } else { " (not a common face)" };
            let _ = writeln!(out, "  {} ∩ {} = {}{note}", x.first, x.second, x.intersection);
        }
        for u in &f.unchecked {
            let _ = writeln!(out, "  unchecked: {u}");
        }
    }
    if let Some(ks) = &r.kernels {
        let _ = writeln!(out, "== kernels ==");
        for k in ks {
            let _ = writeln!(
                out,
                "  {}: dim ∩ker {}, dim ker(sum) {}, image dims {}",
                k.cone,
                k.common_kernel_dim,
                k.sum_kernel_dim,
                dims(&k.image_dims)
            );
            for c in &k.checks {
                check_line(&mut out, "    ", c);
            }
        }
    }
    if let Some(os) = &r.orbits {
        let _ = writeln!(out, "== orbits ==");
        for o in os {
            let _ = writeln!(out, "  {} under {} ({})", o.period, o.operator, o.cone);
            let _ = writeln!(
                out,
                "    Q(ω,ω) = {}, Q(ω,ω̄) = {}, in domain: {}",
                o.q_omega_omega, o.q_omega_conj, o.in_domain
            );
            if !o.coefficients.is_empty() {
                let y0 = o.threshold.clone().map(|t| format!(", y0 = {t}")).unwrap_or_default();
                let _ = writeln!(out, "    h(y) coefficients [{}]{y0}", o.coefficients.join(", "));
            }
            for p in &o.pieces {
                let h: Vec<String> = p.hodge_numbers.iter().map(|(a, b, n)| format!("h^{{{a},{b}}}={n}")).collect();
                let _ = writeln!(out, "    Gr_{} dim {}: {}", p.weight, p.dim, h.join(" "));
            }
            for c in &o.checks {
                check_line(&mut out, "    ", c);
            }
        }
    }
    let _ = writeln!(out, "OVERALL: {}", if r.overall { "PASS" } else { "FAIL" });
    out
}

pub fn render_json(r: &PipelineReport) -> String {
    serde_json::to_string_pretty(r).expect("reports serialize")
}
