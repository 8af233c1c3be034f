//! End-to-end checks of the binary: exit codes, JSON shapes, file
//! emission, and batch ordering.

use std::fs;
use std::process::{Command, Output};

use glp_core::proofs::build_lemma_one_proof;
use glp_core::syntax::parse;
use serde_json::Value;

fn glp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

fn stdout_json(output: &Output) -> Value {
    let text = String::from_utf8_lossy(&output.stdout);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("bad JSON {text:?}: {e}"))
}

#[test]
fn decide_reports_validity_with_exit_zero() {
    let out = glp(&["decide", "--logic", "glp", "--formula", "[1]([0]p1 -> p1)"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("no countermodel"));
}

#[test]
fn decide_emits_a_revalidating_countermodel() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let path_text = path.to_str().unwrap();

    let out = glp(&[
        "decide",
        "--logic",
        "glp",
        "--formula",
        "[1][0]F",
        "--countermodel",
        path_text,
        "--json",
    ]);
    assert_eq!(code(&out), 1);
    let json = stdout_json(&out);
    assert_eq!(json["verdict"], "invalid");
    assert_eq!(json["countermodel_file"], path_text);

    let check = glp(&["model", "check", path_text, "--json"]);
    assert_eq!(code(&check), 0);
    let report = stdout_json(&check);
    assert_eq!(report["frame"]["ok"], true);

    let with_formula = glp(&[
        "model",
        "check",
        path_text,
        "--formula",
        "[1][0]F",
        "--json",
    ]);
    assert_eq!(code(&with_formula), 0);
    assert_eq!(stdout_json(&with_formula)["valid_in_model"], false);
}

#[test]
fn decide_json_formulas_reparse_to_themselves() {
    let out = glp(&[
        "decide",
        "--logic",
        "glp",
        "--formula",
        "[1]( [0] p1 ->p1 )",
        "--json",
    ]);
    let json = stdout_json(&out);
    let printed = json["formula"].as_str().unwrap();
    let reparsed = parse(printed, 4).unwrap();
    assert_eq!(reparsed.to_string(), printed);
}

#[test]
fn unify_search_finds_the_top_witness() {
    let out = glp(&["unify", "search", "--formula", "[1]p0", "--json"]);
    assert_eq!(code(&out), 0);
    let json = stdout_json(&out);
    assert_eq!(json["answer"], "unifiable");
    assert_eq!(json["substitution"]["p0"], "T");
}

#[test]
fn unify_search_unknown_exits_two() {
    let out = glp(&["unify", "search", "--formula", "[0]F"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unify_check_mirrors_verdicts() {
    let yes = glp(&[
        "unify",
        "check",
        "--formula",
        "[1]p0",
        "--subst",
        "p0:=[0]p0 -> p0",
    ]);
    assert_eq!(code(&yes), 0);
    let no = glp(&["unify", "check", "--formula", "[1]p0", "--subst", "p0:=[0]F"]);
    assert_eq!(code(&no), 1);
}

#[test]
fn qchain_verifies_the_ordering_witness() {
    let out = glp(&[
        "unify", "qchain", "--family", "qbig", "--k", "1", "--j", "2", "--json",
    ]);
    assert_eq!(code(&out), 0);
    let json = stdout_json(&out);
    assert_eq!(json["verified"], true);
    assert_eq!(json["theta"]["p0"], "[0]p0 -> p0");
}

#[test]
fn proof_check_accepts_generated_proofs_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("proof.json");
    let proof = build_lemma_one_proof(1).unwrap();
    fs::write(&path, serde_json::to_string(&proof).unwrap()).unwrap();
    let ok = glp(&["proof", "check", path.to_str().unwrap(), "--json"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(stdout_json(&ok)["ok"], true);

    let mut tampered: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    tampered["conclusion"] = Value::String("[1]([0]p1 -> p0)".into());
    fs::write(&path, tampered.to_string()).unwrap();
    let bad = glp(&["proof", "check", path.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);

    fs::write(&path, "{ not json").unwrap();
    let malformed = glp(&["proof", "check", path.to_str().unwrap()]);
    assert_eq!(code(&malformed), 64);
}

#[test]
fn reduce_prints_family_and_transform_formulas() {
    let family = glp(&["reduce", "--family", "qbig", "--k", "2", "--json"]);
    assert_eq!(code(&family), 0);
    let json = stdout_json(&family);
    let expected = glp_core::unify::q_formula(&glp_core::unify::QFamily::new(
        glp_core::unify::QKind::QBig,
        2,
    ))
    .unwrap();
    assert_eq!(json["formula"], expected.to_string());

    let transform = glp(&["reduce", "--transform", "h", "--formula", "[0]p0", "--json"]);
    assert_eq!(stdout_json(&transform)["formula"], "[0]p0 -> p0");

    let neither = glp(&["reduce"]);
    assert_eq!(code(&neither), 64);
    let both = glp(&[
        "reduce", "--transform", "m", "--formula", "p0", "--family", "q", "--k", "1",
    ]);
    assert_eq!(code(&both), 64);
}

#[test]
fn admissible_and_arith_unifiable_exit_codes() {
    let yes = glp(&["admissible", "--premises", "<0>T", "--conclusion", "F"]);
    assert_eq!(code(&yes), 0);
    let no = glp(&["admissible", "--premises", "T", "--conclusion", "[0]F", "--json"]);
    assert_eq!(code(&no), 1);
    assert_eq!(stdout_json(&no)["verdict"]["verdict"], "invalid");

    let unifiable = glp(&["arith-unifiable", "--formula", "p0", "--cross-check"]);
    assert_eq!(code(&unifiable), 0);
    let not = glp(&["arith-unifiable", "--formula", "<0>T", "--cross-check"]);
    assert_eq!(code(&not), 1);
}

#[test]
fn worm_normalize_examples() {
    let worm = glp(&["worm", "normalize", "--formula", "<0>T", "--json"]);
    assert_eq!(code(&worm), 0);
    assert_eq!(stdout_json(&worm)["worm"], "<0><0>T");
    let bot = glp(&["worm", "normalize", "--formula", "F"]);
    assert_eq!(code(&bot), 0);
    let open = glp(&["worm", "normalize", "--formula", "p0"]);
    assert_eq!(code(&open), 64);
}

#[test]
fn batch_preserves_order_and_embeds_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("queries.jsonl");
    fs::write(
        &path,
        concat!(
            r#"{"command":"decide","logic":"glp","formula":"[1]([0]p1 -> p1)"}"#,
            "\n",
            r#"{"command":"unify-search","formula":"[1]p0"}"#,
            "\n",
            r#"{"command":"decide","logic":"gl","formula":"[0]F","max_worlds":4}"#,
            "\n",
        ),
    )
    .unwrap();
    let out = glp(&["batch", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["line"], 1);
    assert_eq!(lines[0]["exit"], 0);
    assert_eq!(lines[1]["answer"], "unifiable");
    assert_eq!(lines[2]["line"], 3);
    assert_eq!(lines[2]["exit"], 1);
    assert_eq!(lines[2]["countermodel"]["worlds"].as_array().unwrap().len(), 2);

    fs::write(&path, "{\"command\":\"decide\",\"logic\":\"walrus\",\"formula\":\"p0\"}\n").unwrap();
    let bad = glp(&["batch", path.to_str().unwrap()]);
    assert_eq!(code(&bad), 64);
}

#[test]
fn max_worlds_env_fallback_and_flag_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_glp"))
        .env("GLP_MAX_WORLDS", "2")
        .args(["decide", "--logic", "glp", "--formula", "p0 -> p0", "--json"])
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out)["cap"], 2);

    let overridden = Command::new(env!("CARGO_BIN_EXE_glp"))
        .env("GLP_MAX_WORLDS", "2")
        .args([
            "decide",
            "--logic",
            "glp",
            "--formula",
            "p0 -> p0",
            "--max-worlds",
            "5",
            "--json",
        ])
        .output()
        .unwrap();
    assert_eq!(stdout_json(&overridden)["cap"], 5);

    let invalid = Command::new(env!("CARGO_BIN_EXE_glp"))
        .env("GLP_MAX_WORLDS", "many")
        .args(["decide", "--logic", "glp", "--formula", "p0"])
        .output()
        .unwrap();
    assert_eq!(invalid.status.code(), Some(64));
}

#[test]
fn usage_errors_exit_sixty_four() {
    assert_eq!(code(&glp(&["decide", "--logic", "nope", "--formula", "p0"])), 64);
    assert_eq!(code(&glp(&["decide", "--logic", "gl", "--formula", "((p0"])), 64);
    assert_eq!(
        code(&glp(&["unify", "qchain", "--family", "q", "--k", "1", "--j", "2"])),
        64
    );
    assert_eq!(code(&glp(&["frobnicate"])), 64);
}
