//! End-to-end checks of the command-line interface against the shipped
//! fixture files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn sadic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sadic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn analyze_alpha_text_report() {
    let out = sadic(&["analyze", fixture("alpha.sadic").to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("torsion_free: true"));
    assert!(text.contains("injective_input: false"));
    assert!(text.contains("h_comb: 1 [certified]"));
    assert!(text.contains("c_true: 1 [exact]"));
    assert!(text.contains("classification: AlmostAutomorphic_c1"));
}

#[test]
fn analyze_json_is_schema_stable() {
    let keys_of = |file: &str| -> Vec<String> {
        let out = sadic(&["analyze", fixture(file).to_str().unwrap(), "--json"]);
        assert!(out.status.success());
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        v.as_object().unwrap().keys().cloned().collect()
    };
    let a = keys_of("alpha.sadic");
    let b = keys_of("ext46.sadic");
    assert_eq!(a, b);
    for key in [
        "torsion_free",
        "primes_offending",
        "h_table",
        "h_comb",
        "height_certified",
        "odometer_primes",
        "height",
        "c_naive",
        "c_true",
        "classification",
        "assumptions",
        "observations",
    ] {
        assert!(a.iter().any(|k| k == key), "missing key {key}");
    }
}

#[test]
fn height_table_command() {
    let out = sadic(&["height", fixture("tau_theta.sadic").to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("level 0: h = 1"));
    assert!(text.contains("level 1: h = 2"));
    assert!(text.contains("h_comb = 2"));
}

#[test]
fn purebase_round_trips_to_trivial_height() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pure.sadic");
    let out = sadic(&[
        "purebase",
        fixture("height2.sadic").to_str().unwrap(),
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = sadic(&["height", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("h_comb = 1"));
    let out = sadic(&["analyze", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("torsion_free: true"));
}

#[test]
fn injectivize_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inj.sadic");
    let out = sadic(&[
        "injectivize",
        fixture("alpha.sadic").to_str().unwrap(),
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("{0,0b}->0"));
    assert!(text.contains("{1,1b}->1"));
    let out = sadic(&["analyze", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report = stdout(&out);
    assert!(report.contains("injective_input: true"));
    assert!(report.contains("c_true: 1"));
}

#[test]
fn cobham_reports_witness() {
    let out = sadic(&[
        "cobham",
        fixture("thue_morse.sadic").to_str().unwrap(),
        fixture("theta.sadic").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("witness prime 2"));
    assert!(text.contains("witness prime 3"));
}

#[test]
fn raw_column_diagnostic() {
    let out = sadic(&[
        "column",
        fixture("alpha.sadic").to_str().unwrap(),
        "--raw",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("c(theta, 1) = 2"));
    assert!(text.contains("c(theta, 3) = 2"));
}

#[test]
fn desub_counts() {
    let alpha = fixture("alpha.sadic");
    let out = sadic(&[
        "desub",
        alpha.to_str().unwrap(),
        "--level",
        "0",
        "--width",
        "27",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "2");
}

#[test]
fn language_lists_persistent_words() {
    let out = sadic(&[
        "language",
        fixture("theta.sadic").to_str().unwrap(),
        "--level",
        "0",
        "--length",
        "2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let words: Vec<&str> = text.lines().collect();
    assert_eq!(words.len(), 6); // 0, 1 and all four 2-words
    assert!(words.contains(&"0 0"));
    assert!(words.contains(&"1 1"));
}

#[test]
fn sequence_selection_in_multi_sequence_files() {
    let durand = fixture("durand.sadic");
    // no --sequence: ambiguous
    let out = sadic(&["height", durand.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let out = sadic(&[
        "height",
        durand.to_str().unwrap(),
        "--sequence",
        "DMIX",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("h_comb = 1"));
}

#[test]
fn exit_codes() {
    // parse error
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.sadic");
    std::fs::write(
        &bad,
        "alphabet A = a\nmorphism m : A -> A length 2\n  a -> a\nend\nsequence S = prefix [] cycle [m]\n",
    )
    .unwrap();
    let out = sadic(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    // hypothesis failure: pure base needs torsion-freeness
    let out = sadic(&["purebase", fixture("ext46.sadic").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // missing file
    let out = sadic(&["analyze", "no-such-file.sadic"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_subcommands() {
    let theta = fixture("theta.sadic");
    let out = sadic(&[
        "oracle",
        "colcard",
        theta.to_str().unwrap(),
        "--base",
        "0",
        "--level",
        "1",
        "--col",
        "0",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1");

    let out = sadic(&[
        "oracle",
        "fibre",
        fixture("thue_morse.sadic").to_str().unwrap(),
        "--residues",
        "0=0,1=0",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "2");

    let out = sadic(&[
        "oracle",
        "residues",
        fixture("tau_theta.sadic").to_str().unwrap(),
        "--level",
        "1",
        "--word",
        "a b a",
        "--mods",
        "2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("mod 2: {0}"));
}
