use std::path::PathBuf;
use std::process::Command;

use weakfan_cli::render::{render_json, render_text};
use weakfan_cli::{parse, resolve, run_pipeline, DegenerationDescription, DescriptionError, PipelineReport, Stages};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn weakfan(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_weakfan")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn report_for(name: &str) -> PipelineReport {
    let d = parse(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
    run_pipeline(&resolve(&d).unwrap(), Stages::All)
}

#[test]
fn fixture_file_matches_builtin_example() {
    let text = std::fs::read_to_string(fixture("two_ray_example.json")).unwrap();
    assert_eq!(parse(&text).unwrap(), DegenerationDescription::two_ray_example());
}

#[test]
fn builtin_example_report() {
    let r = run_pipeline(&resolve(&DegenerationDescription::two_ray_example()).unwrap(), Stages::All);
    let fan = r.fan.as_ref().unwrap();
    assert_eq!(fan.cones, ["zero", "rho1", "rho2", "sigma"]);
    assert!(fan.checks.iter().all(|c| c.passed));
    assert!(fan
        .intersections
        .iter()
        .any(|x| x.first == "rho1" && x.second == "rho2" && x.intersection == "{0}"));
    let ops = r.operators.as_ref().unwrap();
    assert!(ops.commutators.iter().all(|c| c.vanishes));
    let failures = r.failures();
    assert_eq!(failures.len(), 2, "{failures:?}");
    assert!(failures[0].starts_with("cone sigma: interior_filtration"));
    assert!(failures[1].starts_with("kernels sigma: kernel_identity"));
    assert!(!r.overall);
    let orbits = r.orbits.as_ref().unwrap();
    assert_eq!(orbits.len(), 3);
    assert!(orbits.iter().all(|o| o.checks.iter().all(|c| c.passed)));
}

#[test]
fn relative_filtration_is_informational() {
    let r = run_pipeline(&resolve(&DegenerationDescription::two_ray_example()).unwrap(), Stages::All);
    let sigma = r.cones.as_ref().unwrap().iter().find(|c| c.name == "sigma").unwrap();
    assert_eq!(sigma.relative.len(), 2);
    assert!(sigma.relative.iter().all(|e| !e.holds));
    assert!(sigma.checks.iter().all(|c| c.name != "relative"));
}

#[test]
fn json_round_trip() {
    let r = report_for("two_ray_example.json");
    let back: PipelineReport = serde_json::from_str(&render_json(&r)).unwrap();
    assert_eq!(back, r);
}

#[test]
fn reports_are_deterministic() {
    let a = report_for("two_ray_example.json");
    let b = report_for("two_ray_example.json");
    assert_eq!(render_text(&a), render_text(&b));
    assert_eq!(render_json(&a), render_json(&b));
}

#[test]
fn empty_description_reports_lattice_only() {
    let r = report_for("empty.json");
    assert!(r.overall);
    assert!(r.lattice.is_some());
    assert!(r.operators.is_none() && r.cones.is_none() && r.fan.is_none() && r.orbits.is_none());
    let json = render_json(&r);
    assert!(!json.contains("\"fan\""));
}

#[test]
fn non_nilpotent_operator_fails() {
    let r = report_for("not_nilpotent.json");
    assert!(!r.overall);
    let op = &r.operators.as_ref().unwrap().operators[0];
    assert!(op.checks.iter().any(|c| c.name == "nilpotent" && !c.passed));
}

#[test]
fn undefined_reference_is_reported() {
    let d = parse(r#"{"lattice": "U", "cones": {"c": ["M"]}}"#).unwrap();
    match resolve(&d) {
        Err(DescriptionError::UndefinedReference { name, .. }) => assert_eq!(name, "M"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn classify_and_orbit_stages() {
    let d = resolve(&DegenerationDescription::two_ray_example()).unwrap();
    let c = run_pipeline(&d, Stages::Classify);
    assert!(c.overall && c.operators.is_some() && c.lattice.is_none() && c.orbits.is_none());
    let o = run_pipeline(&d, Stages::Orbits);
    assert!(o.overall && o.orbits.is_some() && o.operators.is_none());
}

#[test]
fn binary_exit_codes() {
    let (code, out, _) = weakfan(&["paper-example"]);
    assert_eq!(code, 1);
    assert!(out.contains("rho1 ∩ rho2 = {0}"));
    assert!(out.ends_with("OVERALL: FAIL\n"));

    let empty = fixture("empty.json");
    let (code, out, _) = weakfan(&["validate", empty.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.ends_with("OVERALL: PASS\n"));

    let example = fixture("two_ray_example.json");
    let (code, _, _) = weakfan(&["classify", example.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out, _) = weakfan(&["--format", "json", "orbit-check", example.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r: PipelineReport = serde_json::from_str(&out).unwrap();
    assert!(r.overall);

    let (code, _, err) = weakfan(&["validate", "/nonexistent/description.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"));
}

#[test]
fn binary_parse_error_exit_code() {
    let dir = std::env::temp_dir().join(format!("weakfan-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"lattice": "K3", "fan": ["missing"]}"#).unwrap();
    let (code, _, err) = weakfan(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("undefined"), "{err}");
    std::fs::write(&bad, r#"{"lattice": "K3", "operators": {"N": {"wedge": [["x"]]}}}"#).unwrap();
    let (code, _, err) = weakfan(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("operators.N"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn center_override() {
    let example = fixture("two_ray_example.json");
    let (_, out, _) = weakfan(&["--format", "json", "--center", "0", "validate", example.to_str().unwrap()]);
    let r: PipelineReport = serde_json::from_str(&out).unwrap();
    assert_eq!(r.center, 0);
}
