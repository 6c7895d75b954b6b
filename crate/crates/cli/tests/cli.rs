use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

use crossed_kuperberg::invariant::compute_invariant;
use crossed_kuperberg::{ChiLabeling, FieldDescriptor, HeegaardDiagram, HopfChiCoalgebra};

fn ck(args: &[&str], stdin: Option<&[u8]>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ck"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("ck runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or_default()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn temp(name: &str, contents: &[u8]) -> String {
    let dir = std::env::temp_dir().join(format!("ck-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

fn builtin(args: &[&str]) -> Vec<u8> {
    let mut a = vec!["builtin"];
    a.extend_from_slice(args);
    let o = ck(&a, None, &[]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    o.stdout
}

#[test]
fn builtin_lens_validates_from_stdin() {
    let lens = builtin(&["lens", "5", "2"]);
    let o = ck(&["validate", "-"], Some(&lens), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o), json!({"valid": true, "violations": []}));
}

#[test]
fn rp3_has_four_orbits() {
    let d = temp("l21_orbits.json", &builtin(&["lens", "2", "1"]));
    let x = temp("z4z2_orbits.json", &builtin(&["z4z2"]));
    let o = ck(
        &["labelings", "--diagram", &d, "--xmod", &x, "--orbits"],
        None,
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["count"], json!(4));
    assert_eq!(v["labelings"], json!(6));
}

#[test]
fn invariant_matches_library() {
    let d = temp("l21_inv.json", &builtin(&["lens", "2", "1"]));
    let x = temp("z4z2_inv.json", &builtin(&["z4z2"]));
    let h = temp("kp4_inv.json", &builtin(&["kp4"]));
    let lab = r#"{"alpha":{"u":1},"beta":{"l":0}}"#;
    let o = ck(
        &[
            "invariant",
            "--diagram",
            &d,
            "--xmod",
            &x,
            "--hopf",
            &h,
            "--labeling",
            lab,
        ],
        None,
        &[],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    let v = json_of(&o);
    let a = HopfChiCoalgebra::kp4(FieldDescriptor::Rationals).unwrap();
    let l: ChiLabeling = serde_json::from_str(lab).unwrap();
    let want = compute_invariant(&HeegaardDiagram::lens(2, 1).unwrap(), &l, &a).unwrap();
    assert_eq!(v["value"], json!(want.value.render()));
    assert_eq!(v["normalization_exponent"], json!(-1));
    assert_eq!(v["field"], json!("Q"));
    assert_eq!(v["labeling"], serde_json::from_str::<Value>(lab).unwrap());
}

#[test]
fn builtins_round_trip() {
    for args in [vec!["lens", "7", "3"], vec!["poincare"], vec!["s3"]] {
        let out = builtin(&args);
        let d: HeegaardDiagram = serde_json::from_slice(&out).unwrap();
        assert_eq!(
            serde_json::to_value(&d).unwrap(),
            serde_json::from_slice::<Value>(&out).unwrap()
        );
    }
    for args in [vec!["z4z2"], vec!["cyclic-xmod", "6"]] {
        let out = builtin(&args);
        let cm: crossed_kuperberg::CrossedModule = serde_json::from_slice(&out).unwrap();
        assert_eq!(
            serde_json::to_value(&cm).unwrap(),
            serde_json::from_slice::<Value>(&out).unwrap()
        );
    }
    for args in [
        vec!["kp4"],
        vec!["kp4", "--field", "5"],
        vec!["group-algebra", "6"],
        vec!["group-algebra", "4", "--sign-twist"],
    ] {
        let out = builtin(&args);
        let v: Value = serde_json::from_slice(&out).unwrap();
        let a = HopfChiCoalgebra::from_json(&v).unwrap();
        assert_eq!(a.to_json(), v);
    }
}

#[test]
fn output_is_deterministic() {
    let h = temp("kp4_det.json", &builtin(&["kp4"]));
    let a = ck(&["integrals", &h], None, &[]);
    let b = ck(&["integrals", &h], None, &[]);
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    assert_eq!(v["Lambda"], json!([1, 1, 1, 1]));
    assert_eq!(v["lambda"], json!([[4, 0, 0, 0], [4, 0, 0, 0]]));
}

#[test]
fn malformed_input_exits_2() {
    let bad = temp("bad.json", b"{not json");
    assert_eq!(ck(&["validate", &bad], None, &[]).status.code(), Some(2));
    assert_eq!(
        ck(&["validate", "/nonexistent/ck.json"], None, &[])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ck(&["builtin", "kp4", "--field", "4"], None, &[])
            .status
            .code(),
        Some(2)
    );
    let d = temp("l21_bad.json", &builtin(&["lens", "2", "1"]));
    let h = temp("kp4_bad.json", &builtin(&["kp4"]));
    let o = ck(
        &[
            "invariant",
            "--diagram",
            &d,
            "--hopf",
            &h,
            "--labeling",
            "{\"alpha\":",
        ],
        None,
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_of(&o)["error"], json!("malformed-input"));
    assert_eq!(ck(&["no-such-verb"], None, &[]).status.code(), Some(2));
}

#[test]
fn validation_failures_exit_1() {
    let mut d: Value = serde_json::from_slice(&builtin(&["lens", "3", "1"])).unwrap();
    d["lowers"][0]["points"].as_array_mut().unwrap().pop();
    let o = ck(&["validate", "-"], Some(d.to_string().as_bytes()), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!json_of(&o)["violations"].as_array().unwrap().is_empty());

    let mut x: Value = serde_json::from_slice(&builtin(&["z4z2"])).unwrap();
    x["chi"] = json!([0, 1, 0, 0]);
    let o = ck(&["check-xmod", "-"], Some(x.to_string().as_bytes()), &[]);
    assert_eq!(o.status.code(), Some(1));
    let names: Vec<String> = json_of(&o)["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["axiom"].as_str().unwrap().to_string())
        .collect();
    assert!(names.iter().any(|n| n == "equivariance"), "{names:?}");

    let mut h: Value = serde_json::from_slice(&builtin(&["kp4"])).unwrap();
    h["counit"][1] = json!(2);
    let o = ck(&["check-hopf", "-"], Some(h.to_string().as_bytes()), &[]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn budget_is_enforced() {
    let d = temp("poincare_budget.json", &builtin(&["poincare"]));
    let x = temp("z4z2_budget.json", &builtin(&["z4z2"]));
    let o = ck(
        &["labelings", "--diagram", &d, "--xmod", &x],
        None,
        &[("CK_BUDGET", "10")],
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_of(&o)["error"], json!("budget-exceeded"));
    let o = ck(
        &["labelings", "--diagram", &d, "--xmod", &x],
        None,
        &[("CK_BUDGET", "lots")],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn move_script_keeps_invariant() {
    let d = temp("l31_moves.json", &builtin(&["lens", "3", "1"]));
    let x = temp("z4z2_moves.json", &builtin(&["z4z2"]));
    let h = temp("kp4_moves.json", &builtin(&["kp4"]));
    let script = json!({"format": 1, "moves": [
        {"kind": "basepoint", "lower": "l", "backward": false},
        {"kind": "reverse_upper", "upper": "u"},
        {"kind": "reverse_lower", "lower": "l"},
    ]});
    let s = temp("script.json", script.to_string().as_bytes());
    let lab = r#"{"alpha":{"u":0},"beta":{"l":1}}"#;
    let o = ck(
        &[
            "moves",
            "--diagram",
            &d,
            "--xmod",
            &x,
            "--labeling",
            lab,
            "--script",
            &s,
            "--hopf",
            &h,
        ],
        None,
        &[],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    let v = json_of(&o);
    assert_eq!(v["moves_applied"], json!(3));
    assert_eq!(v["unchanged"], json!(true));
    let out: HeegaardDiagram = serde_json::from_value(v["diagram"].clone()).unwrap();
    assert!(out.is_valid());

    let bad = temp(
        "bad_script.json",
        br#"[{"kind": "destabilize", "upper": "u", "lower": "l"}]"#,
    );
    let o = ck(
        &["moves", "--diagram", &d, "--xmod", &x, "--script", &bad],
        None,
        &[],
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_of(&o)["move_index"], json!(0));
}

#[test]
fn kuperberg_counts_solutions() {
    let d = temp("l31_ku.json", &builtin(&["lens", "3", "1"]));
    let h = temp("z3_ku.json", &builtin(&["group-algebra", "3"]));
    let o = ck(&["kuperberg", "--diagram", &d, "--hopf", &h], None, &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["value"], json!("3"));
    let k = temp("kp4_ku.json", &builtin(&["kp4"]));
    let o = ck(&["kuperberg", "--diagram", &d, "--hopf", &k], None, &[]);
    assert_eq!(o.status.code(), Some(1));
}
