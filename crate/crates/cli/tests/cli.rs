use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const E8_PRIME: &str = "6L-2E1-2E2-2E3-3E4-2E5-2E6-2E7-2E8";
const E3_PRIME: &str = "5L-E1-E2-2E3-2E4-2E5-2E6-2E7-2E8";
const CONIC: &str = "2L-E4-E5-E6-E7-E8";
const NODAL_CUBIC: &str = "3L-E1-E2-E3-2E4-E5-E6-E7-E8";

fn hamlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamlat")).args(args).output().expect("binary runs")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn assert_golden(args: &[&str], golden: &str) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = hamlat(&full);
    let want = std::fs::read_to_string(golden_dir().join(golden)).expect("golden file exists");
    assert_eq!(String::from_utf8_lossy(&out.stdout), want, "hamlat {args:?} drifted from {golden}");
}

#[test]
fn golden_outputs_are_reproduced() {
    assert_golden(&["enumerate-exceptional", "--k", "7"], "exceptional-k7.json");
    assert_golden(&["enumerate-exceptional", "--k", "8"], "exceptional-k8.json");
    assert_golden(&["resolve-polytope", "--l", "4", "--lambda", "1/2"], "resolve-l4.json");
    assert_golden(&["resolve-polytope", "--l", "5"], "resolve-l5.json");
    assert_golden(&["decompose", "--target", E8_PRIME, "--profile", "step2"], "decompose-step2-e8prime.json");
    assert_golden(
        &["decompose", "--target", E8_PRIME, "--profile", "step2", "--lift", NODAL_CUBIC],
        "decompose-step2-lifted-e8prime.json",
    );
    assert_golden(&["decompose", "--target", E3_PRIME, "--profile", "step2"], "decompose-step2-e3prime.json");
    assert_golden(&["decompose", "--target", CONIC, "--profile", "step3"], "decompose-step3-conic.json");
    for l in ["4", "5"] {
        assert_golden(&["fixed-points", "--l", l], &format!("fixed-points-l{l}.json"));
        assert_golden(&["report", "--l", l], &format!("report-l{l}.json"));
    }
    for d in ["hat7", "tilde8", "primed7", "primed8", "hat5", "hat6"] {
        assert_golden(&["verify-dictionary", "--name", d], &format!("dictionary-{d}.json"));
    }
}

#[test]
fn golden_counts_and_conormals() {
    let ex7: Value = serde_json::from_str(&std::fs::read_to_string(golden_dir().join("exceptional-k7.json")).unwrap()).unwrap();
    let ex8: Value = serde_json::from_str(&std::fs::read_to_string(golden_dir().join("exceptional-k8.json")).unwrap()).unwrap();
    assert_eq!(ex7["count"], 56);
    assert_eq!(ex8["count"], 240);

    let r4: Value = serde_json::from_str(&std::fs::read_to_string(golden_dir().join("resolve-l4.json")).unwrap()).unwrap();
    let conormals: Vec<[i64; 2]> = serde_json::from_value(r4["conormals"].clone()).unwrap();
    assert_eq!(
        conormals,
        [[0, 1], [1, 2], [2, 3], [1, 1], [0, -1], [-1, -4], [-1, -3], [-1, -2], [-1, -1], [-1, 0]]
    );
    let si: Vec<i64> = serde_json::from_value(r4["self_intersections"].clone()).unwrap();
    assert_eq!(si, [-2, -2, -1, -2, -3, -1, -2, -2, -2, -1]);

    let r5: Value = serde_json::from_str(&std::fs::read_to_string(golden_dir().join("resolve-l5.json")).unwrap()).unwrap();
    let c5: Vec<[i64; 2]> = serde_json::from_value(r5["conormals"].clone()).unwrap();
    assert_eq!(c5.len(), 11);
    assert!(c5.contains(&[-1, -5]));
    let s5: Vec<i64> = serde_json::from_value(r5["self_intersections"].clone()).unwrap();
    assert_eq!(s5.iter().sum::<i64>(), 12 - 3 * 11);
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [
        vec!["--json", "verify-all"],
        vec!["--json", "report", "--l", "4"],
        vec!["--json", "decompose", "--target", E3_PRIME],
        vec!["--json", "min-area", "--k", "8", "--lambda", "1"],
    ] {
        let a = hamlat(&args);
        let b = hamlat(&args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn verify_all_reports_every_check_and_exit_code_tracks_failures() {
    let out = hamlat(&["--json", "verify-all"]);
    let report = json_of(&out);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() > 40);
    for c in checks {
        assert!(!c["anchor"].as_str().unwrap().is_empty(), "{c}");
    }
    let failed = checks.iter().any(|c| c["status"] == "fail");
    assert_eq!(out.status.code(), Some(if failed { 1 } else { 0 }));
    let flagged: Vec<&str> = checks
        .iter()
        .filter(|c| c["status"] == "flagged")
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert!(flagged.iter().any(|id| id.contains("l3")), "{flagged:?}");
}

#[test]
fn corrupted_fixture_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("hat7.json");
    let bad = dir.path().join("hat7-corrupt.json");
    let hat7 = json_of(&hamlat(&["--json", "verify-dictionary", "--name", "hat7"]));
    let mut images: Vec<String> = hat7["images"]
        .as_array()
        .unwrap()
        .iter()
        .map(|img| serde_json::to_string(img).unwrap())
        .collect();
    std::fs::write(&good, format!(r#"{{"name": "hat7-copy", "images": [{}]}}"#, images.join(","))).unwrap();
    images[7] = r#""3L-E1-E2-E3-E4-E5-E6-E7""#.to_string();
    std::fs::write(&bad, format!(r#"{{"name": "hat7-corrupt", "images": [{}]}}"#, images.join(","))).unwrap();

    let ok = hamlat(&["--json", "verify-dictionary", "--fixture", good.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json_of(&ok)["valid"], true);

    let out = hamlat(&["--json", "verify-dictionary", "--fixture", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["valid"], false);
    assert!(!v["validity_failures"].as_array().unwrap().is_empty());

    let all = hamlat(&["--json", "verify-all", "--fixture", bad.to_str().unwrap()]);
    assert_eq!(all.status.code(), Some(1));
    let report = json_of(&all);
    let check = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "dictionary.hat7-corrupt.valid")
        .expect("fixture checks are appended");
    assert_eq!(check["status"], "fail");
    assert!(check["witness"]["failures"].as_array().is_some_and(|f| !f.is_empty()));
}

#[test]
fn usage_and_resource_errors_exit_2() {
    assert_eq!(hamlat(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(hamlat(&["snf", "--matrix", "1,2;3"]).status.code(), Some(2));
    assert_eq!(hamlat(&["enumerate-exceptional", "--k", "9"]).status.code(), Some(2));
    assert_eq!(hamlat(&["reduced-class", "--l", "7", "--kappa", "0"]).status.code(), Some(2));
    assert_eq!(hamlat(&["slice", "--l", "4", "--x3", "20"]).status.code(), Some(2));
    let tiny = hamlat(&["--max-depth", "2", "decompose", "--target", E8_PRIME]);
    assert_eq!(tiny.status.code(), Some(2));
    assert!(!tiny.stderr.is_empty());
}

#[test]
fn svg_is_written_for_polytope_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("delta.svg");
    let out = hamlat(&["resolve-polytope", "--l", "4", "--svg", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<line").count(), 10);

    let slice = dir.path().join("slice.svg");
    let out = hamlat(&["slice", "--l", "4", "--x3", "3", "--svg", slice.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&slice).unwrap().matches("<circle").count(), 4);

    let none = hamlat(&["snf", "--matrix", "6,0;0,4", "--svg", dir.path().join("x.svg").to_str().unwrap()]);
    assert_eq!(none.status.code(), Some(2));
}

#[test]
fn bless_writes_into_the_given_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = hamlat(&[
        "--bless",
        "--golden-dir",
        dir.path().to_str().unwrap(),
        "enumerate-exceptional",
        "--k",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("exceptional-k6.json")).unwrap()).unwrap();
    assert_eq!(v["count"], 27);
}

#[test]
fn small_commands() {
    let word = json_of(&hamlat(&["--json", "find-word", "--from", "E1", "--to", "3L-2E1-E2-E3-E4-E5-E6-E7", "--max", "4"]));
    assert_eq!(word["k"], 7);
    assert_eq!(word["word"].as_array().unwrap().len(), 3);

    let none = hamlat(&["find-word", "--from", "E1", "--to", "3L-2E1-E2-E3-E4-E5-E6-E7", "--max", "2"]);
    assert_eq!(none.status.code(), Some(1));

    let r = json_of(&hamlat(&["--json", "reduced-class", "--l", "4", "--kappa", "-3"]));
    assert_eq!(r["omega"], serde_json::json!(["1/2", "1/4"]));
    assert_eq!(r["euler"], serde_json::json!(["-1/6", "-1/4"]));
    assert_eq!(r["lambda"], "1/2");
    assert_eq!(r["scale"], "2");

    let s = json_of(&hamlat(&["--json", "snf", "--matrix", "6,0;0,4"]));
    assert_eq!(s["diagonal"], serde_json::json!([2, 12]));
    let s = json_of(&hamlat(&["--json", "snf", "--matrix", "6,0;0,5"]));
    assert_eq!(s["diagonal"], serde_json::json!([1, 30]));

    let fp = json_of(&hamlat(&["--json", "fixed-points", "--l", "5"]));
    let orders: Vec<i64> = fp["isotropy_spheres"].as_array().unwrap().iter().map(|s| s["order"].as_i64().unwrap()).collect();
    assert!(orders.contains(&5));

    let slice = json_of(&hamlat(&["--json", "slice", "--l", "4", "--x3", "3"]));
    assert_eq!(slice["matches_omega"], true);
    assert_eq!(slice["facet_count"], 4);

    let cubic = hamlat(&["--json", "cubic", "verify", "--preset", "mukai"]);
    let v = json_of(&cubic);
    assert_eq!(cubic.status.code(), Some(if v["passed"] == true { 0 } else { 1 }));
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["name"].as_str().unwrap().starts_with("node")));
}
