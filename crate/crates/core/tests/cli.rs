use std::io::Write;

use heisenberg_weyl::cli::run;
use serde_json::Value;

fn invoke(line: &str) -> (i32, String, String) {
    let argv = std::iter::once("heisenberg-weyl").chain(line.split_whitespace());
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(line: &str) -> Value {
    let (code, out, err) = invoke(line);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn count_reports_weyl_decomposition() {
    let v = json("count --ell 1 --r 1 --t 40");
    assert_eq!(v["t"], 40.0);
    assert_eq!(v["N"], 15);
    assert!((v["main"].as_f64().unwrap() - 10.708).abs() < 1e-3);
    assert!((v["R"].as_f64().unwrap() - 4.29).abs() < 5e-3);
}

#[test]
fn vaaler_check_has_nonnegative_slack() {
    let v = json("vaaler-check --H 25 --grid 10000");
    assert_eq!(v["violations"], 0);
    assert!(v["max_slack"].as_f64().unwrap() >= 0.0);
}

#[test]
fn exit_codes() {
    let (code, _, err) = invoke("count --ell 2 --r 2 3 --t 10");
    assert_eq!(code, 1);
    assert!(err.contains("divisibility"), "{err}");
    let (code, _, err) = invoke("count --ell 1 --r 1 --t 40 --frobnicate");
    assert_eq!(code, 64);
    assert!(err.contains("--frobnicate"), "{err}");
    assert_eq!(invoke("no-such-command").0, 64);
    assert_eq!(invoke("kronecker-search --T 4 --eps0 0.1 --budget 10").0, 2);
    assert_eq!(invoke("--help").0, 0);
}

#[test]
fn csv_has_header() {
    let (code, out, _) = invoke("circle --x 1 2 --format csv");
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines, ["x,count,P", "1,5,1.85840734641", "2,13,0.433629385641"]);
}

#[test]
fn squarefree_and_besicovitch() {
    let v = json("squarefree --Q 9");
    assert_eq!(v["values"], serde_json::json!([2, 3, 5, 6, 7]));
    let v = json("besicovitch --qs 2 3 --H 3");
    assert_eq!(v["vectors_checked"], 48);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let path = std::env::temp_dir().join(format!("hw-config-{}.json", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    write!(f, r#"{{"ell": 1, "r": [1], "t": 100}}"#).unwrap();
    drop(f);
    let from_file = json(&format!("count --config {}", path.display()));
    assert_eq!(from_file["t"], 100.0);
    let overridden = json(&format!("count --config {} --t 40", path.display()));
    assert_eq!(overridden["N"], 15);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn output_file_receives_result() {
    let path = std::env::temp_dir().join(format!("hw-out-{}.json", std::process::id()));
    let (code, out, _) = invoke(&format!("theta --ell 1 --n-max 5 --output {}", path.display()));
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("0.57735026919"));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn every_subcommand_runs() {
    for line in [
        "count --t 10",
        "weyl-error --u 6 7",
        "mean-square --t-max 200 --grid 20",
        "vaaler-check --H 5 --grid 100",
        "estar-compare --u-min 20 --u-max 60 --samples 40 --blocks 4",
        "theta --n-max 10",
        "expsum-check --u 50.3",
        "fejer-check --T 50 --Q 10",
        "fejer-check --T 2 --Q 1 --U 6",
        "squarefree --Q 30",
        "kronecker-search --T 2 --eps0 0.25",
        "besicovitch --Q 4 --H 2",
        "search-exceptional --T 2 --eps0 0.25",
        "circle --x 3",
        "circle-meansquare --xmax 1000 --grid 10",
    ] {
        for format in ["json", "csv"] {
            let (code, out, err) = invoke(&format!("{line} --format {format}"));
            assert_eq!(code, 0, "{line}: {err}");
            assert!(!out.is_empty(), "{line}");
        }
    }
}

#[test]
fn threads_flag_is_validated() {
    assert_eq!(invoke("theta --n-max 5 --threads 0").0, 64);
    assert_eq!(invoke("theta --n-max 5 --threads 3").0, 0);
    assert_eq!(invoke("theta --n-max 5 --threads auto").0, 0);
}
