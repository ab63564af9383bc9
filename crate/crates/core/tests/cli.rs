use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

fn instance(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("instances").join(format!("{name}.json"))
}

fn hopfcat(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hopfcat")).args(args).output().unwrap();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), report, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hopfcat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_selected_suites() {
    let p = instance("z3_torsors");
    let (code, r, _) = hopfcat(&["verify", s(&p), "--checks", "comonoids,groupoid", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(r["suites"], json!(["comonoids", "groupoid"]));
    assert!(r["records"]
        .as_array()
        .unwrap()
        .iter()
        .all(|rec| rec["check"].as_str().unwrap().starts_with("comonoids/")
            || rec["check"].as_str().unwrap().starts_with("groupoid/")));
    assert!(r["digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn unknown_suite_is_an_input_error() {
    let p = instance("z2_torsors");
    let (code, r, _) = hopfcat(&["verify", s(&p), "--checks", "nonsense", "--json"]);
    assert_eq!(code, 2);
    assert_eq!(r["verdict"], "input-error");
}

#[test]
fn text_summary_goes_to_stderr() {
    let p = instance("z2_torsors");
    let (code, r, err) = hopfcat(&["verify", s(&p)]);
    assert_eq!(code, 0);
    assert_eq!(r, Value::Null);
    assert!(err.contains("checks passed, verdict pass"), "{err}");
}

#[test]
fn report_file_matches_stdout() {
    let p = instance("z2_group_algebra");
    let out = scratch("report.json", "");
    let (_, r, _) = hopfcat(&["verify", s(&p), "--out", s(&out), "--json"]);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written, r);
}

#[test]
fn build_targets() {
    let (code, r, _) = hopfcat(&["build", s(&instance("z3_group_algebra")), "--target", "hopf-monoid", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(r["structure"]["label"], "R");
    assert!(r["structure"]["hopf_monoid"].is_object());

    let (code, r, _) = hopfcat(&["build", s(&instance("s3_torsors")), "--target", "groupoid", "--json"]);
    assert_eq!(code, 0);
    assert!(r["structure"]["groupoid"].is_object());

    let (code, r, _) = hopfcat(&["build", s(&instance("b2_lie_bialgebra")), "--target", "groupoid", "--json"]);
    assert_ne!(code, 0, "a linear instance has no groupoid: {r}");

    let (code, r, _) = hopfcat(&["build", s(&instance("z2_torsors")), "--target", "nope", "--json"]);
    assert_eq!(code, 2);
    assert_eq!(r["verdict"], "input-error");
}

#[test]
fn order_zero_deformation_is_the_undeformed_build() {
    let p = instance("abelian_precartier");
    let (c1, plain, _) = hopfcat(&["build", s(&p), "--target", "hopf-category", "--json"]);
    let (c2, deformed, _) = hopfcat(&["build", s(&p), "--target", "deformed", "--order", "0", "--json"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(deformed["structure"]["order"], 0);
    assert_eq!(
        serde_json::to_string(&plain["structure"]["hopf_category"]).unwrap(),
        serde_json::to_string(&deformed["structure"]["hopf_category"]).unwrap()
    );

    let (code, r, _) = hopfcat(&["build", s(&p), "--target", "deformed", "--order", "2", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(r["structure"]["order"], 2);
}

#[test]
fn order_above_the_limit_is_rejected() {
    let p = instance("abelian_precartier");
    let (code, _, _) = hopfcat(&["build", s(&p), "--target", "deformed", "--order", "9", "--json"]);
    assert_eq!(code, 2);
}

#[test]
fn empty_instance_is_vacuous() {
    let p = scratch("empty.json", "{}");
    let (code, r, _) = hopfcat(&["verify", s(&p), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "vacuous");
    assert_eq!(r["summary"]["total"], 0);
}

#[test]
fn malformed_input_exits_two() {
    let p = scratch("broken.json", "{\"name\": ");
    let (code, r, _) = hopfcat(&["verify", s(&p), "--json"]);
    assert_eq!(code, 2);
    assert_eq!(r["verdict"], "input-error");

    let p = scratch("unknown_field.json", "{\"name\": \"x\", \"colour\": 3}");
    assert_eq!(hopfcat(&["verify", s(&p), "--json"]).0, 2);

    let missing = std::env::temp_dir().join("hopfcat-no-such-file.json");
    assert_eq!(hopfcat(&["verify", s(&missing), "--json"]).0, 2);
}

#[test]
fn corrupted_comultiplication_names_the_failure() {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(instance("z2_torsors")).unwrap()).unwrap();
    // Δ(1) = (0,0) breaks counitality.
    let c = &mut v["comonoids"][0];
    c["delta"] = json!({"table": [0, 0]});
    let p = scratch("bad_delta.json", &v.to_string());
    let (code, r, _) = hopfcat(&["verify", s(&p), "--checks", "comonoids", "--json"]);
    assert_eq!(code, 1);
    let failing = r["summary"]["failing_checks"].as_array().unwrap();
    assert!(failing.iter().any(|c| c.as_str().unwrap().contains("counit")), "{failing:?}");
}

#[test]
fn non_adapted_comonoid_fails_the_build() {
    let inst = json!({
        "name": "fixed-points",
        "group": {"table": [[0, 1], [1, 0]]},
        "functor": "orbits",
        "atoms": [{"name": "P", "size": 2, "permutations": [[0, 1], [0, 1]]}],
        "comonoids": [{"label": "P", "obj": ["P"], "kind": "diagonal"}]
    });
    let p = scratch("fixed_points.json", &inst.to_string());
    let (code, r, _) = hopfcat(&["build", s(&p), "--target", "hopf-monoid", "--json"]);
    assert_eq!(code, 1);
    assert!(r["error"].as_str().unwrap().contains("adapted"), "{r}");
    assert!(r.get("structure").is_none());
}
