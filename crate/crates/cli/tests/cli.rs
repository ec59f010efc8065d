use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn prering(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prering"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn strip_runtime(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("runtime_ms");
            m.values_mut().for_each(strip_runtime);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_runtime),
        _ => {}
    }
}

#[test]
fn cantor_depth_three() {
    let out = prering(&["cantor", "--depth", "3", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["parts"], 8);
    assert_eq!(v["total"], "8/27");
    assert_eq!(v["set"].as_array().unwrap().len(), 8);
}

#[test]
fn ftc_on_abs() {
    let out = prering(&[
        "ftc",
        "--f",
        "piecewise{[-1,2]: abs(t)}",
        "--t1",
        "-1",
        "--t2",
        "2",
        "--json",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["conclusion"]["lhs_exact"], "1");
    assert_eq!(v["conclusion"]["rhs_exact"], "1");
    assert_eq!(v["conclusion"]["pass"], true);
    assert_eq!(v["schema"], 1);
}

#[test]
fn function_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_prering"))
        .args(["integrate", "--f", "-", "--t1", "0", "--t2", "1", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"piecewise {\n  [0,1): x^2;\n  [1,2]: 1\n}\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(json(&out)["integral"]["exact"][0], "1/3");
}

#[test]
fn syntax_errors_are_positioned() {
    let out = prering(&[
        "integrate",
        "--f",
        "piecewise {\n [0,1]: }",
        "--t1",
        "0",
        "--t2",
        "1",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "syntax");
    assert_eq!(v["error"]["line"], 2);
    assert_eq!(v["error"]["col"], 9);
    let out = prering(&[
        "integrate",
        "--f",
        "piecewise { [0,1): x; (1,2]: x }",
        "--t1",
        "0",
        "--t2",
        "1",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "domain_gap");
}

#[test]
fn mvt_quarter_circle() {
    let out = prering(&[
        "mvt",
        "--f",
        "(: cos t, sin t :) on [0, 1.5707963267948966]",
        "--g",
        "t on [0, 2]",
        "--a",
        "0",
        "--b",
        "1.5707963267948966",
        "--json",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["conclusion"]["lhs"].as_f64().unwrap() - std::f64::consts::SQRT_2).abs() < 1e-9);
    assert!((v["conclusion"]["rhs"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
}

#[test]
fn failed_premise_exits_nonzero() {
    let out = prering(&[
        "mvt",
        "--f",
        "3 * t on [0,1]",
        "--g",
        "t on [0,1]",
        "--a",
        "0",
        "--b",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("premise failed"));
}

#[test]
fn derive_measure_and_riesz() {
    let out = prering(&["derive", "--f", "abs(x) on [-1,1]", "--x", "0", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["right"]["exact"][0], "1");
    assert_eq!(v["left"]["exact"][0], "-1");

    let out = prering(&[
        "measure",
        "--kind",
        "stieltjes:x^2 on [0,10]",
        "--set",
        "{[0,1), (2,3]}",
        "--json",
    ]);
    assert_eq!(json(&out)["value"], "6");

    let path = std::env::temp_dir().join(format!("prering-counting-{}.tsv", std::process::id()));
    std::fs::write(&path, "# point\tweight\n1/2\t3\n5\t1/4\n").unwrap();
    let kind = format!("counting:{}", path.display());
    let out = prering(&["measure", "--kind", &kind, "--set", "[0,5]", "--json"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(json(&out)["value"], "13/4");

    let out = prering(&["riesz", "--x", "1/4", "--levels", "3", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(v["witness"]["k"].as_u64().unwrap() >= 3);
    assert_eq!(v["pass"], true);
}

#[test]
fn suite_is_deterministic() {
    let run = || {
        let out = prering(&["suite", "--seed", "42", "--json"]);
        assert!(out.status.success());
        let mut v = json(&out);
        strip_runtime(&mut v);
        serde_json::to_string(&v).unwrap()
    };
    let a = run();
    assert_eq!(a, run());
    let text = prering(&["suite", "--seed", "42", "--size", "2", "--sequential"]);
    assert!(text.status.success());
    assert!(String::from_utf8_lossy(&text.stdout).contains("0 fail"));
}
