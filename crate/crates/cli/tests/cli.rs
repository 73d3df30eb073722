use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_signstab"));
    c.env_remove("SIGNSTAB_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
        .display()
        .to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

const A2: &str = r#"{"seed": {"n": 2, "unfrozen": [0, 1], "B": [[0, 1], [-1, 0]]},
                     "steps": [{"flip": 0}, {"flip": 1}, {"flip": 0}]}"#;
const KRON3: &str = r#"{"seed": {"n": 2, "unfrozen": [0, 1], "B": [[0, -3], [3, 0]]},
                        "steps": [{"flip": 0}, {"perm": [1, 0]}]}"#;

#[test]
fn sign_of_a2() {
    let dir = TempDir::new().unwrap();
    let a2 = write(&dir, "a2.json", A2);
    let r = report(&["sign", "--path", &a2, "--point", "[1,1]"]);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["sign"], "++-");
    assert_eq!(r["inputs"]["point"], serde_json::json!(["1", "1"]));
}

#[test]
fn kronecker_stretch_factor() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "kron3.json", KRON3);
    let r = report(&["stretch", "--path", &k, "--stable", "+"]);
    let lambda = r["report"]["lambda"].as_f64().unwrap();
    assert!((lambda - 2.6180339887).abs() < 1e-9);
    assert_eq!(r["report"]["lambda_exact"], "3/2+1/2*sqrt(5)");
}

#[test]
fn transport_on_empty_path() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "empty.json", r#"{"seed": {"n": 1, "unfrozen": [0], "B": [[0]]}, "steps": []}"#);
    let r = report(&["transport", "--path", &p, "--point", "[5]"]);
    assert_eq!(r["final_point"], serde_json::json!(["5"]));
    assert!(r.get("intermediates").is_none());
    let pt = write(&dir, "pt.json", r#"{"coords": ["5"]}"#);
    let traced = report(&["transport", "--path", &p, "--point", &pt, "--trace"]);
    assert_eq!(traced["intermediates"], serde_json::json!([]));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let a2 = write(&dir, "a2.json", A2);
    let broken = write(&dir, "broken.json", "{ not json");
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["sign", "--path", &a2, "--point", "[1,1]"]), 0);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["sign", "--point", "[1,1]"]), 2);
    assert_eq!(code(&["orbit", "--example", "kronecker3", "--point", "[1,0]", "--iters", "4", "--window", "9"]), 2);
    assert_eq!(code(&["sign", "--path", &a2, "--point", "[1,1,1]"]), 1);
    assert_eq!(code(&["sign", "--path", &broken, "--point", "[1,1]"]), 1);
    // A2 without the closing permutation is not a loop.
    assert_eq!(code(&["orbit", "--path", &a2, "--point", "[1,1]"]), 1);
    let out = run(&["sign", "--path", &a2, "--point", "[1,1,1]"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("TropError"));
}

#[test]
fn reports_are_deterministic_and_reproducible() {
    let dir = TempDir::new().unwrap();
    let args = ["signs-enumerate", "--example", "a2", "--json-only"];
    let a = run(&args);
    let b = bin().args(args).env("SIGNSTAB_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stderr.is_empty());
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["count"], 5);

    // The embedded path is itself a valid path file.
    let again = write(&dir, "again.json", &r["inputs"]["path"].to_string());
    let c = run(&["signs-enumerate", "--path", &again, "--json-only"]);
    assert_eq!(a.stdout, c.stdout);

    let out = dir.path().join("report.json");
    let o = run(&["signs-enumerate", "--example", "a2", "--output", out.to_str().unwrap()]);
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read(&out).unwrap(), a.stdout);
}

#[test]
fn orbit_flags_an_all_zero_weak_sign() {
    // With B = 0 the loop rotates the plane by a quarter turn.
    let r = report(&["orbit", "--example", "kronecker0", "--point", "[1,1]", "--iters", "8", "--window", "4"]);
    assert_eq!(r["weak_stable_sign"], "0");
    assert_eq!(r["weak_sign_all_zero"], true);
    assert_eq!(r["stable_sign"], Value::Null);
    assert_eq!(r["empirical"], true);
    let k = report(&["stable-sign", "--example", "kronecker3", "--point", "[1,2]", "--point", "[-1,-5]"]);
    let rows = k["results"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|row| row["stable_sign"] == "+"));
}

#[test]
fn sphere_reports() {
    let stab = "+++00-+--+00-+++";
    let lplus: Value = serde_json::from_str(&fs::read_to_string(data("sphere_lplus.json")).unwrap()).unwrap();
    let r = report(&[
        "eigencheck", "--example", "sphere", "--stable", stab,
        "--lambda", "3/2+1/2*sqrt(5)", "--point", &lplus.to_string(), "--radicand", "5",
    ]);
    assert_eq!(r["all_eigenpairs"], true);
    assert_eq!(r["completions"].as_array().unwrap().len(), 16);
    assert_eq!(r["inputs"]["radicand"], 5);

    let cone = data("sphere_cone.json");
    let c = report(&["compat", "--example", "sphere", "--cone", &cone]);
    assert_eq!(c["mask"], "1000010100000010");
    let h = report(&["hereditary", "--example", "sphere", "--cone", &cone, "--stable", stab]);
    assert_eq!(h["report"]["hereditary"], true);
    let s = report(&["skeleton", "--example", "sphere", "--cone", &cone]);
    let idx: Vec<u64> = s["skeleton"].as_array().unwrap().iter().map(|r| r["index"].as_u64().unwrap()).collect();
    assert_eq!(idx, vec![6, 7, 5, 10]);

    let p = report(&["charpoly", "--example", "sphere", "--sign", "++++-++--+++-+++", "--cycles", "3"]);
    assert_eq!(p["cycle_factor_divides"], true);
    assert_eq!(p["char_poly"].as_array().unwrap().len(), 13);

    let wrong_field = run(&["eigencheck", "--example", "sphere", "--stable", stab,
        "--lambda", "3/2+1/2*sqrt(5)", "--point", &lplus.to_string(), "--radicand", "2"]);
    assert_eq!(wrong_field.status.code(), Some(1));
}

#[test]
fn presentation_and_mutation() {
    let m = report(&["mutate", "--example", "kronecker2"]);
    assert_eq!(m["is_loop"], true);
    assert_eq!(m["seeds"].as_array().unwrap().len(), 3);
    let p = report(&["presentation", "--example", "a2", "--point", "[1,1]"]);
    assert_eq!(p["inputs"]["at"]["sign"], "++-");
    let det = p["det"].as_str().unwrap();
    assert!(det == "1" || det == "-1");
    let q = report(&["presentation", "--example", "a2", "--sign", "++-"]);
    assert_eq!(p["matrix"], q["matrix"]);
    assert_eq!(run(&["presentation", "--example", "a2", "--sign", "+0-"]).status.code(), Some(1));
}

#[test]
fn freezing_and_blocks() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "block.json",
        r#"{"seed": {"n": 3, "unfrozen": [0, 1, 2], "B": [[0, -3, 0], [3, 0, 0], [0, 0, 0]]},
            "steps": [{"flip": 0}, {"perm": [1, 0, 2]}]}"#,
    );
    let r = report(&["freeze", "--path", &p, "--indices", "2", "--blocks"]);
    assert_eq!(r["reduced_path"]["seed"]["unfrozen"], serde_json::json!([0, 1]));
    assert_eq!(r["blocks"]["zero_block"], true);
    assert_eq!(r["blocks"]["radii_agree"], true);
    assert_eq!(run(&["freeze", "--path", &p, "--indices", "0", "--blocks"]).status.code(), Some(1));
    assert_eq!(run(&["freeze", "--path", &p, "--indices", "2", "--tolerance", "0"]).status.code(), Some(2));
}

#[test]
fn duality_check_records_its_seed() {
    let r = report(&["duality-check", "--seed", "11", "--trials", "50"]);
    assert_eq!(r["inputs"]["seed"], 11);
    assert_eq!(r["passed"], true);
    let one = report(&["duality-check", "--example", "sphere"]);
    assert_eq!(one["result"]["dual"], true);
    assert_eq!(run(&["duality-check"]).status.code(), Some(2));
}

#[test]
fn surface_pieces() {
    let p = report(&["pants", "2", "1", "1"]);
    assert_eq!(p["measures"]["e12"], "1");
    assert_eq!(p["measures"]["e11"], "0");
    assert_eq!(p["triangle_regime"], true);
    let a = report(&["annulus", "-3", "-2"]);
    assert_eq!(a["piece"], report(&["annulus", "3", "2"])["piece"]);
    assert_eq!(a["piece"]["family"], "Plus");

    let dir = TempDir::new().unwrap();
    let track = write(
        &dir,
        "track.json",
        r#"{"edges": ["a", "b", "c"], "switches": [{"incoming": "a", "outgoing": ["b", "c"]}]}"#,
    );
    let good = write(&dir, "good.json", r#"{"a": "3/2", "b": 1, "c": "1/2"}"#);
    let bad = write(&dir, "bad.json", r#"{"a": 2, "b": 1, "c": 2}"#);
    let neg = write(&dir, "neg.json", r#"{"a": 0, "b": 1, "c": -1}"#);
    assert_eq!(report(&["track-validate", "--track", &track, "--measure", &good])["report"]["valid"], true);
    assert_eq!(
        report(&["track-validate", "--track", &track, "--measure", &bad])["report"]["violations"],
        serde_json::json!([0])
    );
    assert_eq!(run(&["track-validate", "--track", &track, "--measure", &neg]).status.code(), Some(1));
}
