use std::path::Path;
use std::process::{Command, Output};

use lemnis::commands::{self, ModulusChoice, VerifyOptions};
use lemnis::report::Value;
use lemnis::TimeSpec;

fn lemnis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lemnis")).args(args).output().expect("binary runs")
}

fn real(v: Option<&Value>) -> f64 {
    match v {
        Some(Value::Real(x)) => *x,
        other => panic!("expected a real, got {other:?}"),
    }
}

#[test]
fn reports_are_byte_identical() {
    let args = ["constants", "--n", "5", "--modulus", "2"];
    let a = lemnis(&args);
    let b = lemnis(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(!text.contains("elapsed"));
    assert!(text.ends_with("  pass: true\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(lemnis(&["find-moduli", "--n", "3"]).status.code(), Some(0));
    // off-root modulus: checks fail
    assert_eq!(lemnis(&["fit", "--n", "5", "--modulus", "0.5"]).status.code(), Some(1));
    // no third five-body modulus
    let out = lemnis(&["constants", "--n", "5", "--modulus", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
    // clap rejects a modulus value outside [0, 1)
    assert_eq!(lemnis(&["fit", "--modulus", "1.5"]).status.code(), Some(2));
}

#[test]
fn report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = lemnis(&["fit", "--n", "5", "--modulus", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("command: fit\n"));
    assert!(text.contains("beta matches reference: PASS"));
}

#[test]
fn figure_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.svg");
    let out = lemnis(&["figure", "--n", "5", "--modulus", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let svg = std::fs::read_to_string(&path).unwrap();
    // default snapshots t = 0 and t = K/5
    assert!(svg.contains(r#"width="1200""#));
    assert_eq!(svg.matches("<g id=\"panel-").count(), 2);
    // five chords of the nearest-neighbor set per panel
    assert_eq!(svg.matches("<line").count(), 10);

    let bad = lemnis(&["figure", "--n", "3", "--out", "/nonexistent-dir/fig.svg"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn snapshot_distances_sit_at_extrema() {
    let dir = tempfile::tempdir().unwrap();
    let times: Vec<TimeSpec> = ["0", "K/5"].iter().map(|s| s.parse().unwrap()).collect();
    let r = commands::figure(5, ModulusChoice::Index(1), &times, &dir.path().join("f.svg")).unwrap();
    let t0 = r.body.child("t = 0").unwrap();
    assert!((real(t0.get("r15")) - 1.108_730_495_493_916_550).abs() < 1e-12);
    assert!((real(t0.get("r24")) - 1.889_145_301_630_350_845).abs() < 1e-12);
    let tk = r.body.child("t = K/5").unwrap();
    assert!((real(tk.get("r12")) - 0.686_672_792_999_055_739_44).abs() < 1e-12);
    assert!((real(tk.get("r35")) - 0.384_116_843_263_971_867_57).abs() < 1e-12);
}

#[test]
fn verify_dumps_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let opts = VerifyOptions { periods: 1, tol: 1e-10, grid: 64 };
    let r = commands::verify(5, ModulusChoice::Index(1), &opts, Some(Path::new(&csv))).unwrap();
    assert!(r.pass(), "{}", r.render());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 21);
    assert_eq!((header[0], header[1], header[10], header[11]), ("t", "x1", "y5", "vx1"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 65);
    let period = real(r.body.child("choreography").unwrap().get("period tau = 4K"));
    assert_eq!(rows[64][0], period);
    // closure: the last row returns to the first
    for (end, start) in rows[64].iter().zip(&rows[0]).skip(1) {
        assert!((end - start).abs() < 1e-6);
    }
}

#[test]
fn find_moduli_reports_known_values() {
    let r = commands::find_moduli(5).unwrap();
    assert!(r.pass());
    let m1 = real(r.body.child("modulus 1").unwrap().get("m = k^2"));
    let m2 = real(r.body.child("modulus 2").unwrap().get("m = k^2"));
    assert!((m1 - 0.653_660_413_954_773_213).abs() < 1e-12);
    assert!((m2 - 0.997_643_736_031_613_235).abs() < 1e-12);
    assert_eq!(commands::find_moduli(2).unwrap().body.get("count"), Some(&Value::Int(0)));
}

#[test]
fn constants_flag_negative_control() {
    let r = commands::constants(5, ModulusChoice::Index(2), 128, 1e-9).unwrap();
    assert!(r.pass(), "{}", r.render());
    let neg = r.body.child("negative control: product over complementary set").unwrap();
    assert_eq!(neg.get("conserved"), Some(&Value::Bool(false)));
    // a value choice away from any root fails the centre-of-mass check
    let off = commands::constants(5, ModulusChoice::Value(0.7), 64, 1e-9).unwrap();
    assert!(!off.pass());
}

#[test]
fn modulus_choice_parsing() {
    assert_eq!("2".parse::<ModulusChoice>(), Ok(ModulusChoice::Index(2)));
    assert_eq!("0.75".parse::<ModulusChoice>(), Ok(ModulusChoice::Value(0.75)));
    assert_eq!("9e-1".parse::<ModulusChoice>(), Ok(ModulusChoice::Value(0.9)));
    assert!("0".parse::<ModulusChoice>().is_err());
    assert!("1.0".parse::<ModulusChoice>().is_err());
    assert!("k1".parse::<ModulusChoice>().is_err());
}
