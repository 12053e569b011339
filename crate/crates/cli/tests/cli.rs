use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use demazure::automorphism::Word;
use demazure::generators::GeneratorPackage;
use serde_json::Value;
use sha2::{Digest, Sha256};

fn repo(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn data(name: &str) -> String {
    repo("data").join(name).display().to_string()
}

fn demazure(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_demazure")).args(args).env_remove("DEMAZURE_SEED").output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = demazure(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn diagnostic(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(2));
    serde_json::from_slice(&out.stderr).unwrap()
}

fn required_keys_present(schema: &str, v: &Value) {
    let s: Value = serde_json::from_str(&fs::read_to_string(repo("schemas").join(schema)).unwrap()).unwrap();
    for k in s["required"].as_array().unwrap() {
        assert!(v.get(k.as_str().unwrap()).is_some(), "{schema}: missing {k}");
    }
}

#[test]
fn roots_of_the_quadrant() {
    let v = ok_json(&["roots", "--cone", &data("quadrant.json"), "--bound", "2"]);
    let got: Vec<(u64, Vec<i64>)> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (r["ray_index"].as_u64().unwrap(), r["e"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect())
        })
        .collect();
    let want = vec![
        (1, vec![-1, 0]),
        (1, vec![-1, 1]),
        (1, vec![-1, 2]),
        (2, vec![0, -1]),
        (2, vec![1, -1]),
        (2, vec![2, -1]),
    ];
    assert_eq!(got, want);
}

#[test]
fn selftest_passes() {
    let v = ok_json(&["selftest"]);
    assert_eq!(v["passed"], Value::Bool(true));
}

#[test]
fn toric_package_on_the_singular_threefold() {
    let v = ok_json(&["generators", "--construction", "toric", "--cone", &data("singular3fold.json")]);
    assert_eq!(v["condition"]["tag"], "gamma");
    required_keys_present("package.schema.json", &v);
    let p: GeneratorPackage = demazure::json::from_str(&v.to_string()).unwrap();
    assert_eq!(p.toric.len(), 3);
}

#[test]
fn domain_errors_exit_two_with_a_diagnostic() {
    let d = diagnostic(&demazure(&["generators", "--construction", "toric", "--cone", &data("nonregular-face.json")]));
    assert_eq!(d["error"]["kind"], "unsupported");
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"rank\": 2, \"rays\": ").unwrap();
    let d = diagnostic(&demazure(&["roots", "--cone", bad.to_str().unwrap()]));
    assert_eq!(d["error"]["kind"], "parse");
    let unknown = demazure(&["roots", "--cone", &data("quadrant.json"), "--bogus"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert_eq!(demazure(&["teleport"]).status.code(), Some(2));
    assert_eq!(demazure(&["roots", "--cone", "/nonexistent.json"]).status.code(), Some(1));
}

fn solve_into(dir: &Path, seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_demazure"));
    cmd.env_remove("DEMAZURE_SEED").args(["--out", dir.to_str().unwrap(), "solve"]);
    cmd.args(["--spec", &data("permutations3-spec.json"), "--from", &data("space-from.json"), "--to", &data("space-to.json")]);
    match seed {
        Some(s) => cmd.args(["--seed", s]),
        None => cmd.env("DEMAZURE_SEED", "5"),
    };
    cmd.output().unwrap()
}

#[test]
fn solve_writes_a_verified_word_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    assert!(solve_into(&a, Some("5")).status.success());
    let result: Value = serde_json::from_str(&fs::read_to_string(a.join("solve.json")).unwrap()).unwrap();
    assert!(result["transcript"].as_array().unwrap().iter().all(|t| t["matches_target"] == Value::Bool(true)));

    let manifest: Value = serde_json::from_str(&fs::read_to_string(a.join("manifest.json")).unwrap()).unwrap();
    required_keys_present("manifest.schema.json", &manifest);
    assert_eq!(manifest["seed"], 5);
    for o in manifest["outputs"].as_array().unwrap() {
        let bytes = fs::read(a.join(o["path"].as_str().unwrap())).unwrap();
        let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(o["sha256"], digest.as_str());
    }

    // The written word acts as claimed.
    let acted = ok_json(&["act", "--word", a.join("word.json").to_str().unwrap(), "--points", &data("space-from.json")]);
    let target: Value = serde_json::from_str(&fs::read_to_string(data("space-to.json")).unwrap()).unwrap();
    assert_eq!(acted, target);
    let text = fs::read_to_string(a.join("word.json")).unwrap();
    let w: Word = demazure::json::from_str(&text).unwrap();
    assert_eq!(demazure::json::to_string(&w).unwrap(), text);

    // Same inputs and seed, from the flag or the environment: identical bytes.
    let b = dir.path().join("b");
    assert!(solve_into(&b, None).status.success());
    for f in ["solve.json", "word.json", "manifest.json"] {
        if f == "manifest.json" {
            let mb: Value = serde_json::from_str(&fs::read_to_string(b.join(f)).unwrap()).unwrap();
            assert_eq!(mb["outputs"], manifest["outputs"]);
        } else {
            assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
        }
    }
}

#[test]
fn plane_demo_and_obstructions() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    let pkg = ok_json(&["generators", "--construction", "saff-plus-root", "--n", "2"]);
    fs::write(&spec, pkg["spec"].to_string()).unwrap();
    let v = ok_json(&["solve", "--spec", spec.to_str().unwrap(), "--from", &data("plane-from.json"), "--to", &data("plane-to.json")]);
    assert_eq!(v["condition"]["tag"], "beta");
    assert_eq!(v["transcript"][0]["matches_target"], Value::Bool(true));

    let s = ok_json(&["obstruct", "--a", "3", "--b", "1", "--samples", "20"]);
    assert_eq!((s["invariant"].as_str(), s["order"].as_u64()), (Some("root_of_unity_pairs"), Some(2)));
    assert_eq!(s["report"]["preserved"], Value::Bool(true));
    let x = ok_json(&["obstruct", "--a", "0", "--b", "2", "--samples", "20"]);
    assert_eq!(x["report"]["preserved"], Value::Bool(true));
    let t = ok_json(&["obstruct", "--a", "2", "--b", "1", "--samples", "2", "--seed", "9"]);
    assert_eq!(t["transports"].as_array().unwrap().len(), 2);
}

#[test]
fn algebra_commands() {
    let c = ok_json(&["commutator", "--a", &data("u.json"), "--b", &data("v.json")]);
    // [y^2 d/dx, x d/dy] = y^2 d/dy - 2xy d/dx, of degree (0, 1).
    assert_eq!(c[0]["e"], serde_json::json!([0, 1]));
    assert_eq!(c[0]["lambda"], "-1");
    assert_eq!(c[0]["rho"], serde_json::json!([2, -1]));
    let ad = ok_json(&["adjoint", "--u", &data("v.json"), "--v", &data("u.json")]);
    assert_eq!(ad["newton"]["vertices"], serde_json::json!([[-1, 2], [2, -1]]));
    let n = ok_json(&["newton", "--derivation", &data("u.json"), "--direction", "1,-1"]);
    assert_eq!(n["degeneration_matches"], Value::Bool(true));
    let k = ok_json(&["check", "--cone", &data("quadrant.json"), "--derivation", &data("u.json")]);
    assert_eq!(k["lnd"]["status"], "certified");
    assert_eq!(k["smooth_in_codim2"], Value::Bool(true));
    let cox = ok_json(&["cox", "--cone", &data("a1-quotient.json"), "--bound", "1"]);
    assert_eq!(cox["class_group_text"], "Z/2");
    assert!(cox["descent"].as_array().unwrap().iter().any(|r| !r["descends_to"].is_null()));
}
