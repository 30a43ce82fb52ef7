//! End-to-end tests of the binary: exact output contracts, round trips,
//! and exit codes.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn sgqft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgqft"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn sgqft_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sgqft"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn enumerate_genus2_has_seven_records() {
    let out = sgqft(&["enumerate", "--genus", "2", "--legs", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 7);

    let json = sgqft(&["enumerate", "--genus", "2", "--legs", "0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 7);
}

#[test]
fn realize_text_matches_contract() {
    let out = sgqft(&["realize", "--genus", "1", "--legs", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "F[1,1] + 1/2*kappa*F[0,3]");
}

#[test]
fn graph_round_trip_preserves_key() {
    let out = sgqft(&["enumerate", "--genus", "1", "--legs", "1"]);
    for line in stdout(&out).lines() {
        let mut parts = line.split('\t');
        let key = parts.next().unwrap().to_string();
        let _aut = parts.next().unwrap();
        let graph_json = parts.next().unwrap();
        let echoed = sgqft_stdin(&["aut"], graph_json);
        assert!(echoed.status.success());
        let echoed_key = stdout(&echoed).split('\t').next().unwrap().to_string();
        assert_eq!(echoed_key, key, "round trip changed the canonical key");
    }
}

#[test]
fn formats_encode_identical_content() {
    // the free energy in both formats must list the same coefficients
    let text = sgqft(&["free-energy", "--genus", "2", "--legs", "0"]);
    let json = sgqft(&["free-energy", "--genus", "2", "--legs", "0", "--format", "json"]);
    let text_coeffs: Vec<String> = stdout(&text)
        .lines()
        .map(|l| l.split('\t').next().unwrap().to_string())
        .collect();
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let json_coeffs: Vec<String> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["coefficient"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(text_coeffs, json_coeffs);
    assert_eq!(text_coeffs.len(), 7);
    // exact rationals only
    for c in &text_coeffs {
        assert!(!c.contains('.'), "coefficient {c} is not p/q");
    }
}

#[test]
fn op_k_on_theta() {
    let theta =
        r#"{"vertices":[0,0],"edges":[[[0,0],[1,0]],[[0,1],[1,1]],[[0,2],[1,2]]],"legs":[]}"#;
    let out = sgqft_stdin(&["op", "K"], theta);
    assert!(out.status.success());
    let body = stdout(&out);
    assert_eq!(body.lines().count(), 1);
    assert!(body.starts_with("3\t"));
}

#[test]
fn dualize_theta_is_minus_theta() {
    let theta =
        r#"{"vertices":[0,0],"edges":[[[0,0],[1,0]],[[0,1],[1,1]],[[0,2],[1,2]]],"legs":[]}"#;
    let out = sgqft_stdin(&["dualize"], theta);
    let body = stdout(&out);
    assert_eq!(body.lines().count(), 1);
    assert!(body.starts_with("-1\t"));
}

#[test]
fn transform_epsilon_zero_is_identity() {
    let theta =
        r#"{"vertices":[0,0],"edges":[[[0,0],[1,0]],[[0,1],[1,1]],[[0,2],[1,2]]],"legs":[]}"#;
    let out = sgqft_stdin(&["transform", "--epsilon", "0"], theta);
    let body = stdout(&out);
    assert_eq!(body.lines().count(), 1);
    assert!(body.starts_with("1\t"));
}

#[test]
fn verify_exit_codes() {
    let ok = sgqft(&["verify", "--suite", "duality", "--bound", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("PASS"));

    let unknown = sgqft(&["verify", "--suite", "nonsense"]);
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn unknown_flag_exits_with_usage_error() {
    let out = sgqft(&["enumerate", "--genus", "1", "--wat"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    let out = sgqft(&["no-such-subcommand"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unstable_type_is_a_validation_error() {
    let out = sgqft(&["enumerate", "--genus", "0", "--legs", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn genus_cap_guard() {
    let out = Command::new(env!("CARGO_BIN_EXE_sgqft"))
        .args(["enumerate", "--genus", "3", "--legs", "0"])
        .env("SGQFT_GENUS_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("SGQFT_GENUS_CAP"));
}

#[test]
fn s_transform_seed_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("sgqft-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let seed = dir.join("theory.json");
    // shift the symbolic theory by kappa, then shift back by -kappa
    let shifted = sgqft(&["s-transform", "--kappa", "kappa", "--bound", "3"]);
    assert!(shifted.status.success());
    std::fs::write(&seed, stdout(&shifted)).unwrap();
    let back = sgqft(&[
        "s-transform",
        "--kappa",
        "-1*kappa",
        "--bound",
        "3",
        "--seed-file",
        seed.to_str().unwrap(),
    ]);
    assert!(back.status.success());
    let symbolic = sgqft(&["s-transform", "--kappa", "0", "--bound", "3"]);
    assert_eq!(stdout(&back), stdout(&symbolic));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn wick_equals_s_transform_via_cli() {
    let a = sgqft(&["wick", "--kappa", "kappa", "--bound", "3"]);
    let b = sgqft(&["s-transform", "--kappa", "kappa", "--bound", "3"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn hae_emits_expected_symbols() {
    let out = sgqft(&["hae", "--genus", "0", "--npoints", "4", "--emit", "holo"]);
    assert_eq!(stdout(&out).trim(), "D^1:F03");
    let tilde = sgqft(&["hae", "--genus", "1", "--npoints", "1", "--emit", "tilde"]);
    assert_eq!(stdout(&tilde).trim(), "h11 + 1/2*kappa*F03");
    let kz = sgqft(&["hae", "--genus", "2", "--emit", "kz", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&kz)).unwrap();
    assert!(v.as_array().unwrap().iter().any(|t| {
        t["monomial"]
            .as_array()
            .unwrap()
            .iter()
            .any(|s| s.as_str() == Some("amb[2]"))
    }));
}

#[test]
fn labelled_enumerate_and_realize() {
    let out = sgqft(&[
        "enumerate",
        "--genus",
        "1",
        "--leg-counts",
        "1,0",
        "--labels",
        "2",
    ]);
    assert_eq!(stdout(&out).lines().count(), 4);
    let poly = sgqft(&[
        "realize",
        "--genus",
        "1",
        "--leg-counts",
        "1,0",
        "--labels",
        "2",
    ]);
    assert_eq!(
        stdout(&poly).trim(),
        "F[1;1,0] + 1/2*kappa[1,1]*F[0;3,0] + kappa[1,2]*F[0;2,1] + 1/2*kappa[2,2]*F[0;1,2]"
    );
}
