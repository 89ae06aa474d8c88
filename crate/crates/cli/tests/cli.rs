use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn superopt(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superopt")).args(args).current_dir(dir).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn emit(name: &str, dir: &Path) -> String {
    let file = format!("{name}.json");
    let out = superopt(&["examples", "--name", name, "--emit", &file], dir);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["name"], name);
    assert!(v["expected"].is_object());
    file
}

#[test]
fn certify_ex3() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit("ex3", dir.path());
    let out = superopt(&["certify", &f, "--json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let c = &v["certificate"];
    for key in ["c1", "c2", "c3"] {
        assert_eq!(c[key]["verdict"], "pass", "{key}");
    }
    assert_eq!(c["badly_approximable"]["verdict"], "fail");
    assert_eq!(v["config"]["grid"], 256);
    assert_eq!(v["config"]["tol_c1"], 1e-6);
    assert!(v["config"].get("seed").is_some() && v["config"].get("output").is_some());
}

#[test]
fn certify_shifted_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit("ex3_shifted", dir.path());
    let out = superopt(&["certify", &f, "--out", "cert.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = String::from_utf8_lossy(&out.stderr);
    assert!(report.contains("very badly approximable  pass"), "{report}");
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("cert.json")).unwrap()).unwrap();
    assert_eq!(saved["certificate"]["very_badly_approximable"]["verdict"], "pass");
    assert_eq!(saved["config"]["output"], "cert.json");
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit("ex1", dir.path());
    let a = superopt(&["certify", &f, "--json"], dir.path());
    let b = superopt(&["certify", &f, "--json"], dir.path());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("garbage.json"), "{\"m\": 1,").unwrap();
    let out = superopt(&["certify", "garbage.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    assert_eq!(superopt(&["certify", "missing.json"], dir.path()).status.code(), Some(1));
    let f = emit("ex2", dir.path());
    assert_eq!(superopt(&["certify", &f, "--grid", "100"], dir.path()).status.code(), Some(1));
    assert_eq!(superopt(&["certify", &f, "--eps", "-1"], dir.path()).status.code(), Some(1));
    assert_eq!(superopt(&["certify", &f, "--eps=-1"], dir.path()).status.code(), Some(1));
    assert_eq!(superopt(&["approx", &f, "--mode", "fastest"], dir.path()).status.code(), Some(1));
    assert_eq!(superopt(&["examples", "--name", "ex9"], dir.path()).status.code(), Some(1));
    let threads = Command::new(env!("CARGO_BIN_EXE_superopt"))
        .arg("examples")
        .env("SUPEROPT_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(1));
}

#[test]
fn thread_cap_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit("ex3", dir.path());
    let out = Command::new(env!("CARGO_BIN_EXE_superopt"))
        .args(["hankel", "--norm", &f])
        .current_dir(dir.path())
        .env("SUPEROPT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn hankel_norm_and_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit("ex3", dir.path());
    let out = superopt(&["hankel", "--norm", &f], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["norm"].as_f64().unwrap() - 0.790569415042095).abs() < 1e-12);
    assert!(v["stabilized_at"].is_u64());

    let sym = r#"{"m": 1, "n": 1, "coeffs": [{"k": -1, "re": [[2.0]]}, {"k": 0, "re": [[-1.0]]}]}"#;
    std::fs::write(dir.path().join("t.json"), sym).unwrap();
    let out = superopt(&["hankel", "--kernel", "t.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["dimension"], 1);
    // too small a degree budget is inconclusive
    let out = superopt(&["hankel", "--kernel", "t.json", "--dmin", "2", "--dmax", "6"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verdict"], "inconclusive");
}

#[test]
fn approx_modes() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit("ex3", dir.path());
    let out = superopt(&["approx", "--mode", "nehari", &f], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["profile"][0].as_f64().unwrap() - 0.790569415042095).abs() < 1e-3);

    let f = emit("ex3_shifted", dir.path());
    let out = superopt(&["approx", "--mode", "superoptimal", &f], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let p: Vec<f64> = v["profile"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((p[0] - 1.0).abs() < 2e-2 && (p[1] - 0.5).abs() < 2e-2, "{p:?}");
    assert_eq!(v["sv_identity"]["pass"], true);
}

#[test]
fn weights_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = emit("ex3_shifted", dir.path());
    let out = superopt(&["weights", &f, "--level", "0", "--degree", "10"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let w = &json(&out)["weights"];
    assert!((w["admissible"]["lambda_max"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!(w["q"].as_f64().unwrap() < 1.0 - 1e-4);
    assert_eq!(w["pinched_admissible"]["pass"], true);
    assert_eq!(superopt(&["weights", &f, "--level", "5"], dir.path()).status.code(), Some(1));
}

#[test]
fn compose_random_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = superopt(&["compose", "--random", "--seed", "3", "--emit", "sym.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["seed"], 3);
    std::fs::write(dir.path().join("recipe.json"), serde_json::to_string(&v["recipe"]).unwrap()).unwrap();
    let again = superopt(&["compose", "recipe.json"], dir.path());
    assert_eq!(json(&again)["symbol"], v["symbol"]);
    let cert = superopt(&["certify", "sym.json", "--json"], dir.path());
    assert_eq!(cert.status.code(), Some(0));
    assert_eq!(json(&cert)["certificate"]["very_badly_approximable"]["verdict"], "pass");
}
