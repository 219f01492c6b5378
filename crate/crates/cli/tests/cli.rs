use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const SUBCOMMANDS: [&str; 13] = [
    "interp", "project", "bmo", "bmoz", "dhilbert", "talpha", "pairing", "clark", "hankel", "rochberg", "vmo", "atoms",
    "suite",
];

fn lab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bernstein-lab"))
        .args(args)
        .current_dir(dir)
        .env_remove("BERNSTEIN_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn report(dir: &Path, args: &[&str]) -> Value {
    let out = lab(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn complex(v: &Value) -> (f64, f64) {
    (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn fixtures() -> tempfile::TempDir {
    let d = tempfile::tempdir().unwrap();
    let mut ones = String::from("n,re,im\n");
    for n in -2000..=2000 {
        ones.push_str(&format!("{n},1,0\n"));
    }
    write(d.path(), "ones.csv", &ones);
    write(d.path(), "sinc.csv", "n,re,im\n0,1,0\n");
    write(d.path(), "one.json", r#"{"kind": "trig", "terms": [[0, 1, 0]]}"#);
    write(d.path(), "a.csv", "n,re,im\n-3,0.5,0\n-1,-1,0.25\n0,2,0\n2,0.75,-1\n4,-0.5,0\n");
    d
}

#[test]
fn help_lists_every_subcommand() {
    let d = tempfile::tempdir().unwrap();
    let out = lab(d.path(), &["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for s in SUBCOMMANDS {
        assert!(text.contains(&format!("  {s} ")), "{s} missing from --help");
    }
    for flag in ["--alpha", "--kappa", "--N", "--tol", "--out", "--format"] {
        assert!(text.contains(flag), "{flag} missing from --help");
    }
}

#[test]
fn talpha_of_ones_is_a_cosine() {
    let d = fixtures();
    let r = report(d.path(), &["talpha", "--alpha", "0.5", "--seq", "ones.csv", "--z", "0.3"]);
    assert_eq!(r["schema"], 1);
    let (re, im) = complex(&r["values"]["value"]);
    // e^{−iπ/2} cos(π(0.3 − 0.5))
    let exact = (PI * (0.3 - 0.5)).cos();
    assert!(re.abs() < 5e-3 && (im + exact).abs() < 5e-3, "{re} {im}");
}

#[test]
fn hankel_of_one_has_unit_norm() {
    let d = fixtures();
    let r = report(d.path(), &["hankel", "--symbol", "one.json", "--N", "8"]);
    assert!((r["values"]["op_norm"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert_eq!(r["values"]["N"], 8);
    assert_eq!(r["table"]["rows"].as_array().unwrap().len(), 17 * 17);
}

#[test]
fn pairing_of_sinc_with_itself() {
    let d = fixtures();
    let r = report(d.path(), &["pairing", "--alpha", "0", "--h", "sinc.csv", "--f", "sinc.csv"]);
    let (re, im) = complex(&r["values"]["value"]);
    assert!((re - 1.0).abs() < 1e-12 && im.abs() < 1e-12);
}

#[test]
fn reports_are_bitwise_reproducible() {
    let d = fixtures();
    let args = ["clark", "--seq", "a.csv", "--alpha", "0.3"];
    let first = lab(d.path(), &args);
    let second = lab(d.path(), &args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    // and independent of the thread count
    let single = Command::new(env!("CARGO_BIN_EXE_bernstein-lab"))
        .args(["hankel", "--symbol", "one.json", "--N", "6"])
        .current_dir(d.path())
        .env("BERNSTEIN_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(single.stdout, lab(d.path(), &["hankel", "--symbol", "one.json", "--N", "6"]).stdout);
}

#[test]
fn clark_norm_equals_x_alpha_norm_from_the_command_line() {
    let d = fixtures();
    let r = report(d.path(), &["clark", "--seq", "a.csv", "--alpha", "0.3"]);
    let v = &r["values"];
    assert!((v["clark_norm"].as_f64().unwrap() - v["x_alpha_norm"].as_f64().unwrap()).abs() < 1e-12);
    let z = report(d.path(), &["bmoz", "--seq", "a.csv"]);
    assert!((z["values"]["bmo_z"].as_f64().unwrap() - v["x_alpha_norm"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn exit_codes_separate_input_from_numerics() {
    let d = fixtures();
    assert_eq!(lab(d.path(), &["hankel", "--symbol", "missing.json"]).status.code(), Some(1));
    assert_eq!(lab(d.path(), &["hankel", "--bogus"]).status.code(), Some(1));
    assert_eq!(lab(d.path(), &["talpha", "--seq", "a.csv", "--z", "x+"]).status.code(), Some(1));
    assert_eq!(lab(d.path(), &["talpha", "--seq", "a.csv", "--alpha", "1.5", "--z", "0"]).status.code(), Some(1));
    write(d.path(), "w.json", r#"{"kind": "trig", "terms": [[1.3, 1, 0]]}"#);
    let out = lab(d.path(), &["project", "--symbol", "w.json", "--z", "0.5", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_bernstein-lab"))
        .args(["bmoz", "--seq", "a.csv"])
        .current_dir(d.path())
        .env("BERNSTEIN_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(1));
}

#[test]
fn csv_outputs_carry_headers_and_sidecars() {
    let d = fixtures();
    let out = lab(d.path(), &["hankel", "--symbol", "one.json", "--N", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("j,k,re,im"));
    assert_eq!(text.lines().count(), 26);

    let out = lab(d.path(), &["project", "--symbol", "one.json", "--mode", "l2", "--N", "3", "--format", "csv", "--out", "p.csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let side: Value = serde_json::from_str(&fs::read_to_string(d.path().join("p.json")).unwrap()).unwrap();
    assert_eq!(side["N"], 3);
    assert!((side["kappa"].as_f64().unwrap() - PI).abs() < 1e-15);
    // P_π 1 = 1: the written samples interpolate back to 1 at the lattice points
    let r = report(d.path(), &["interp", "--samples", "p.csv", "--z", "1"]);
    let (re, im) = complex(&r["values"]["value"]);
    assert!((re - 1.0).abs() < 1e-8 && im.abs() < 1e-8);

    let out = lab(d.path(), &["bmoz", "--seq", "a.csv", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("name,value"));
    assert!(text.lines().any(|l| l.starts_with("bmo_z,")));
}

#[test]
fn dhilbert_writes_a_sequence_file() {
    let d = fixtures();
    let out = lab(d.path(), &["dhilbert", "--seq", "a.csv", "--alpha", "0.5", "--N", "6", "--format", "csv", "--out", "h.csv"]);
    assert!(out.status.success());
    let text = fs::read_to_string(d.path().join("h.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("n,re,im"));
    assert_eq!(text.lines().count(), 14);
}

#[test]
fn atoms_are_validated() {
    let d = fixtures();
    write(d.path(), "atom.csv", "n,re,im\n2,0.25,0\n3,-0.25,0\n");
    let r = report(d.path(), &["atoms", "--atom", "atom.csv", "--seq", "a.csv"]);
    let (alt, _) = complex(&r["values"]["alternating_sum"]);
    assert!(alt.abs() < 1e-15);
    let (p, _) = complex(&r["values"]["pairing"]);
    assert!(p.abs() <= r["values"]["bmo_z"].as_f64().unwrap());
    write(d.path(), "bad.csv", "n,re,im\n0,0.9,0\n1,-0.9,0\n");
    assert_eq!(lab(d.path(), &["atoms", "--atom", "bad.csv"]).status.code(), Some(1));
}

#[test]
fn grid_commands_read_sidecars() {
    let d = fixtures();
    let mut csv = String::from("x,re,im\n");
    for k in -64..=64 {
        let x = k as f64 / 16.0;
        csv.push_str(&format!("{x},{},0\n", if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 }));
    }
    write(d.path(), "sgn.csv", &csv);
    write(d.path(), "sgn.json", r#"{"h": 0.0625, "T": 4, "tail": {"kind": "bounded_by", "constant": 1}}"#);
    let b = report(d.path(), &["bmo", "--grid", "sgn.csv"]);
    assert!(b["values"]["bmo"].as_f64().unwrap() > 0.9);
    let v = report(d.path(), &["vmo", "--grid", "sgn.csv", "--deltas", "0.125,1"]);
    let rows = v["table"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[0][1].as_f64().unwrap() > 0.6);
}

#[test]
fn suite_fast_passes() {
    let d = tempfile::tempdir().unwrap();
    let out = lab(d.path(), &["suite"]);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["values"]["unexpected_failures"], Value::Array(vec![]), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(r["values"]["AC1"]["pass"], true);
    assert!(r.get("timing").is_none());
}

#[test]
fn rochberg_bounds_the_hankel_norm() {
    let d = fixtures();
    write(d.path(), "t.json", r#"{"kind": "trig", "terms": [[2.0, 1, 0], [-1.0, 0.5, 0], [5, 0, 1]]}"#);
    assert_eq!(lab(d.path(), &["rochberg", "--symbol", "t.json"]).status.code(), Some(1));
    let r = report(d.path(), &["rochberg", "--symbol", "t.json", "--reduce", "--N", "12"]);
    let v = &r["values"];
    let total = v["total"].as_f64().unwrap();
    assert!((total - v["q_l"].as_f64().unwrap() - v["q_c"].as_f64().unwrap() - v["q_r"].as_f64().unwrap()).abs() < 1e-12);
    assert!(v["op_norm"].as_f64().unwrap() <= 4.0 * total);
}
