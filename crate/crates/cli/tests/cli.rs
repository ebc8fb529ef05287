//! End-to-end checks of the binary: output agreement between evaluation
//! modes, machine-output stability, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn cep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cep"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .expect("binary runs")
}

fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_modes_agree_on_fixture_circuits() {
    for circuit in ["fixtures/phased_demo.circuit", "fixtures/mixed_parts.circuit"] {
        let naive = cep(&["eval", circuit, "--mode", "naive"]);
        assert!(naive.status.success());
        let full = cep(&["eval", circuit, "--mode", "full"]);
        assert!(full.status.success());
        assert_eq!(stdout(&naive), stdout(&full), "{circuit}");
    }
    // phased mode synthesizes its type assignment from the multiplicative
    // identity, which the power semiring has and sink2 does not
    let naive = cep(&["eval", "fixtures/phased_demo.circuit", "--mode", "naive"]);
    let phased = cep(&["eval", "fixtures/phased_demo.circuit", "--mode", "phased"]);
    assert!(phased.status.success());
    assert!(stdout(&phased).starts_with(stdout(&naive).trim_end()));
    let refused = cep(&["eval", "fixtures/mixed_parts.circuit", "--mode", "phased"]);
    assert_eq!(refused.status.code(), Some(1));
}

#[test]
fn machine_output_is_byte_stable() {
    for args in [
        vec!["classify", "fixtures/p_z5.semiring", "--machine"],
        vec!["classify", "fixtures/b2.semiring", "--machine"],
        vec!["pcfg-verdict", "fixtures/a_then_b.dfa", "--machine"],
        vec!["syntactic", "fixtures/sigma_a_sigma.dfa", "--machine"],
        vec!["eval", "fixtures/phased_demo.circuit", "--mode", "full", "--machine"],
        vec![
            "eval",
            "fixtures/phased_demo.circuit",
            "--mode",
            "phased",
            "--trace",
            "--rank",
            "card",
        ],
    ] {
        let a = cep(&args);
        let b = cep(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn classify_verdict_lines() {
    let out = cep(&["classify", "fixtures/p_z5.semiring", "--machine"]);
    assert!(stdout(&out).contains("verdict: DET"));
    let out = cep(&["classify", "fixtures/b2.semiring", "--machine"]);
    assert!(stdout(&out).contains("verdict: P-complete"));
    let out = cep(&["classify", "fixtures/z6.semiring", "--machine"]);
    assert!(stdout(&out).contains("verdict: P-complete"));
}

#[test]
fn intersect_fixture_decisions() {
    let out = cep(&["intersect", "fixtures/nested.grammar", "fixtures/sigma_a_sigma.dfa"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "non-empty");
    let out = cep(&[
        "intersect",
        "fixtures/only_bs.grammar",
        "fixtures/sigma_a_sigma.dfa",
    ]);
    assert_eq!(stdout(&out).trim(), "empty");
}

#[test]
fn pcfg_verdict_nl_for_piecewise_pattern() {
    let out = cep(&["pcfg-verdict", "fixtures/a_then_b.dfa"]);
    assert!(stdout(&out).contains("verdict: NL"));
}

#[test]
fn phased_trace_matches_the_documented_phase() {
    let out = cep(&[
        "eval",
        "fixtures/phased_demo.circuit",
        "--mode",
        "phased",
        "--trace",
        "--rank",
        "card",
    ]);
    let text = stdout(&out);
    assert!(text.contains("phase 3"));
    assert!(text.contains("frozen: D={1,2,3} E={1,2,3,4} B={1,2,3}"));
    assert!(text.contains("{0,1,2,3,4}"));
}

#[test]
fn exit_codes() {
    // missing file: domain error
    let out = cep(&["classify", "fixtures/nope.semiring"]);
    assert_eq!(out.status.code(), Some(1));
    // usage error
    let out = cep(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    // invalid semiring table: domain error with a witness line
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.semiring");
    std::fs::write(
        &bad,
        "semiring bad\nelements 0 1\nadd\n0 1\n1 1\nmul\n1 0\n0 1\n",
    )
    .unwrap();
    let out = cep(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("invalid semiring"));
}

#[test]
fn demo_subcommands_verify() {
    let out = cep(&["demo-maxplus", "--layers", "5", "--seed", "11"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verified"));
    let out = cep(&["demo-cvp-zd", "-d", "5", "--seed", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verified"));
}

#[test]
fn power_output_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.semiring");
    let out = cep(&[
        "power",
        "fixtures/and2.semigroup",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let check = cep(&["check", path.to_str().unwrap()]);
    assert!(check.status.success());
    let classify = cep(&["classify", path.to_str().unwrap(), "--machine"]);
    assert!(stdout(&classify).contains("verdict: P-complete"));
}
