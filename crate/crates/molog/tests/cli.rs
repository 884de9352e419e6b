//! End-to-end tests of the command-line interface.

use std::path::PathBuf;
use std::process::{Command, Output};

fn molog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_molog"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("molog-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

const CHAIN: &str = "model m1\ndomain w v\nrel r : (w,v)\nletter p : v\npoint (w)\n";

#[test]
fn validate_accepts_presets_and_rejects_bad_declarations() {
    let out = molog(&["validate", "--logic", "modal"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("complete for conjunction/disjunction: yes"));

    let bad = write_temp(
        "bad.logic",
        "letter p : sign +, quant E, type 1\nconn f : perm (2,1), sign +, quant E, types (1;1;1), tonicity (+,+)\n",
    );
    let out = molog(&["validate", "--logic", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_reports_the_uniformity_table() {
    let out = molog(&["validate", "--logic", "modal-intuitionistic", "--porcelain"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("uniform\tc\ttrue"));
    assert!(text.contains("uniform\tnc\ttrue"));
}

#[test]
fn conditions_match_the_golden_transcriptions() {
    for (preset, golden) in [
        ("modal", include_str!("golden/modal.conditions.txt")),
        ("lambek", include_str!("golden/lambek.conditions.txt")),
        (
            "intuitionistic",
            include_str!("golden/intuitionistic.conditions.txt"),
        ),
        (
            "modal-intuitionistic",
            include_str!("golden/modal-intuitionistic.conditions.txt"),
        ),
    ] {
        let out = molog(&["conditions", "--logic", preset]);
        assert!(out.status.success());
        assert_eq!(stdout(&out), golden, "conditions for {preset}");
    }
}

#[test]
fn mc_prints_the_interpretation_and_satisfaction() {
    let model = write_temp("chain.model", CHAIN);
    let out = molog(&[
        "mc",
        "--logic",
        "modal",
        "--model",
        model.to_str().unwrap(),
        "--formula",
        "dia(p)",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("[[dia(p)]] = {w}"));
    assert!(text.contains("|= dia(p): true"));

    let out = molog(&[
        "mc",
        "--logic",
        "modal",
        "--model",
        model.to_str().unwrap(),
        "--formula",
        "box(p)",
        "--porcelain",
    ]);
    assert_eq!(stdout(&out), "interp\t{w, v}\nsat\ttrue\n");
}

#[test]
fn mc_propagates_domain_errors_with_exit_one() {
    let model = write_temp("chain2.model", CHAIN);
    let out = molog(&[
        "mc",
        "--logic",
        "modal",
        "--model",
        model.to_str().unwrap(),
        "--formula",
        "zap(p)",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = molog(&["mc", "--logic", "modal"]);
    assert_eq!(out.status.code(), Some(2)); // usage: missing required flags
}

#[test]
fn bisim_reports_the_verdict_for_self_models() {
    let model = write_temp("self.model", CHAIN);
    let out = molog(&[
        "bisim",
        "--logic",
        "modal",
        "--model",
        model.to_str().unwrap(),
        "--model2",
        model.to_str().unwrap(),
        "--porcelain",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("bisimilar\ttrue"), "got: {text}");
}

#[test]
fn translate_emits_the_golden_exports() {
    let out = molog(&[
        "translate",
        "--logic",
        "modal",
        "--formula",
        "dia(p)",
        "--format",
        "tptp",
    ]);
    assert_eq!(stdout(&out), include_str!("golden/dia_p.tptp"));

    let out = molog(&[
        "translate",
        "--logic",
        "modal",
        "--formula",
        "dia(p)",
        "--format",
        "smtlib",
    ]);
    assert_eq!(stdout(&out), include_str!("golden/dia_p.smt2"));

    let out = molog(&[
        "translate",
        "--logic",
        "lambek",
        "--formula",
        "under(p, comp(p, p))",
        "--format",
        "tptp",
    ]);
    assert_eq!(stdout(&out), include_str!("golden/under_comp.tptp"));

    let out = molog(&[
        "translate",
        "--logic",
        "modal-intuitionistic",
        "--formula",
        "c(imp(p, top))",
        "--format",
        "smtlib",
    ]);
    assert_eq!(stdout(&out), include_str!("golden/c_imp.smt2"));
}

#[test]
fn preserve_finds_letter_counterexamples() {
    let m1 = write_temp("pres1.model", CHAIN);
    let m2 = write_temp(
        "pres2.model",
        "model m2\ndomain a\nrel r :\nletter p :\npoint (a)\n",
    );
    let out = molog(&[
        "preserve",
        "--logic",
        "modal",
        "--model",
        m1.to_str().unwrap(),
        "--model2",
        m2.to_str().unwrap(),
        "--depth",
        "2",
        "--letters",
        "p",
        "--porcelain",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("preserves\tfalse"));
    assert!(text.contains("counterexample\tdia(p)"), "got {text}");
}

#[test]
fn preset_models_with_raw_preorders_are_derived() {
    let raw = write_temp(
        "raw-int.model",
        "domain w v\nrel R : (w,w); (w,v); (v,v)\nletter p : v\npoint (w)\n",
    );
    let out = molog(&[
        "mc",
        "--logic",
        "intuitionistic",
        "--model",
        raw.to_str().unwrap(),
        "--formula",
        "imp(p, p)",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("= {w, v}"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let a = molog(&["conditions", "--logic", "modal", "--seed", "1"]);
    let b = molog(&["conditions", "--logic", "modal", "--seed", "1"]);
    assert_eq!(a.stdout, b.stdout);
}
