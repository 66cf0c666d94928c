use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(rel: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "data", rel].iter().collect();
    p.to_string_lossy().into_owned()
}

fn ilbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ilbench")).args(args).output().expect("binary runs")
}

/// Runs with `--format json` and returns the exit code and the report.
fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = ilbench(&all);
    let v =
        serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

#[test]
fn practical_decide_finds_a_countermodel() {
    let (code, v) = json(&["decide", "--logic", "IL-", "--formula", "p |> p", "--mode", "practical:3"]);
    assert_eq!(code, 10);
    assert_eq!(v["verdict"], "non-theorem");
    assert_eq!(v["countermodel"]["model"]["worlds"].as_array().unwrap().len(), 2);
}

#[test]
fn exact_decide_proves_and_practical_cannot() {
    let (code, v) = json(&["decide", "--logic", "IL-(J1)", "--formula", "p |> p", "--mode", "exact"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("theorem")));
    let (code, v) = json(&["decide", "--logic", "IL-(J1)", "--formula", "p |> p", "--mode", "practical:2"]);
    assert_eq!((code, v["verdict"].as_str()), (20, Some("unknown")));
}

#[test]
fn condition_of_the_second_example_fails() {
    let (code, v) =
        json(&["correspond", "--class", "gen", "--frame", &data("j4plus_separation.json"), "--scheme", "J4+"]);
    assert_eq!(code, 10);
    assert_eq!(v["condition_holds"], false);
    assert_eq!(v["agrees"], true);
}

#[test]
fn reproductions_confirm() {
    for (ex, missing) in [("j2plus", "J2+"), ("j4plus", "J4+")] {
        let (code, v) = json(&["reproduce", ex]);
        assert_eq!(code, 0, "{v}");
        assert_eq!(v["conditions"][missing], false);
        assert_eq!(v["refuted_at_x"], true);
        assert_eq!(v["confirmed"], true);
    }
}

#[test]
fn library_verifies() {
    let (code, v) = json(&["library-verify"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], v["checked"]);
    let (code, _) = json(&["library-verify", "--proof", &data("library")]);
    assert_eq!(code, 0);
}

#[test]
fn proof_files_name_their_logic() {
    let (code, v) = json(&["check-proof", "--proof", &data("library/j4-from-j2.proof")]);
    assert_eq!(code, 0);
    assert_eq!(v["logic"], "IL-(J2)");
    // The same derivation does not go through without J2.
    let (code, v) = json(&["check-proof", "--proof", &data("library/j4-from-j2.proof"), "--logic", "IL-(J4)"]);
    assert_eq!(code, 10);
    assert_eq!(v["valid"], false);
}

#[test]
fn model_commands() {
    let model = data("j2plus_separation.json");
    let (code, v) =
        json(&["eval", "--model", &model, "--formula", "(p |> q | r) & (q |> r) -> p |> r", "--world", "x"]);
    assert_eq!((code, &v["holds"]), (10, &Value::Bool(false)));
    let (code, _) = json(&["valid", "--frame", &model, "--formula", "<>p |> p"]);
    assert_eq!(code, 0);
    let (code, v) = json(&["valid", "--frame", &model, "--formula", "(p |> q | r) & (q |> r) -> p |> r"]);
    assert_eq!(code, 10);
    assert!(v["refutation"]["world"].is_string());
    let (code, v) = json(&["frame-check", "--frame", &model, "--logic", "IL-(J2,J4+,J5)"]);
    assert_eq!((code, &v["frame_for_logic"]), (0, &Value::Bool(true)));
    let (code, _) = json(&["frame-check", "--frame", &model, "--logic", "IL-(J2+)"]);
    assert_eq!(code, 10);
}

#[test]
fn canonical_reports_theorems_and_audited_models() {
    let (code, v) = json(&["canonical", "--logic", "IL-(J5)", "--formula", "<>p |> p"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("theorem")));
    let (code, v) = json(&["canonical", "--logic", "IL", "--formula", "[]p"]);
    assert_eq!(code, 10);
    assert_eq!(v["audit"], "passed");
    assert_eq!(v["prec_lemmas"], "hold");
    assert_eq!(v["canonical"]["construction"], "veltman-sequenced");
}

#[test]
fn random_audits_are_reproducible() {
    let args = ["correspond", "--samples", "60", "--seed", "11"];
    let (code, v) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["disagreements"].as_array().unwrap().len(), 0);
    assert_eq!(json(&args).1, v);
}

#[test]
fn json_output_ignores_the_thread_count() {
    let run = |threads: &str| {
        ilbench(&[
            "--threads",
            threads,
            "refute",
            "--logic",
            "IL-(J2,J5)",
            "--formula",
            "(p |> q | r) & (q |> r) -> p |> r",
            "--format",
            "json",
        ])
        .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(ilbench(&["decide", "--logic", "nonsense", "--formula", "p"]).status.code(), Some(64));
    assert_eq!(ilbench(&["parse", "--formula", "p |>"]).status.code(), Some(64));
    assert_eq!(ilbench(&["refute", "--logic", "IL-", "--formula", "p", "--max-worlds", "0"]).status.code(), Some(64));
    assert_eq!(ilbench(&["eval", "--model", "/no/such/file.json", "--formula", "p"]).status.code(), Some(66));
    assert_eq!(ilbench(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(ilbench(&["--help"]).status.code(), Some(0));
}
