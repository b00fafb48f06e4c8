use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use jsonschema::{Draft, JSONSchema};
use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn statikit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_statikit")).args(args).current_dir(fixtures()).output().unwrap()
}

fn json_of(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(bytes)))
}

fn compile(schema: &Value) -> JSONSchema {
    JSONSchema::options().with_draft(Draft::Draft202012).compile(schema).unwrap()
}

fn schemas(command: &str) -> (JSONSchema, JSONSchema) {
    let out = statikit(&[command, "--schema"]);
    assert!(out.status.success());
    let doc = json_of(&out.stdout);
    (compile(&doc["input"]), compile(&doc["output"]))
}

fn assert_valid(schema: &JSONSchema, value: &Value, what: &str) {
    if let Err(errors) = schema.validate(value) {
        let msgs: Vec<String> = errors.map(|e| format!("{}: {e}", e.instance_path)).collect();
        panic!("{what} violates its schema:\n{}", msgs.join("\n"));
    }
}

fn ints(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().parse().unwrap()).collect()
}

fn rays(cone: &Value) -> Vec<Vec<i64>> {
    let mut r: Vec<Vec<i64>> = cone["rays"].as_array().unwrap().iter().map(ints).collect();
    r.sort();
    r
}

#[test]
fn manifest_runs_with_expected_exit_codes_and_valid_documents() {
    let manifest: Value = json_of(&std::fs::read(fixtures().join("manifest.json")).unwrap());
    for entry in manifest.as_array().unwrap() {
        let args: Vec<&str> = entry["args"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
        let expected = entry["exit"].as_i64().unwrap() as i32;
        let out = statikit(&args);
        assert_eq!(out.status.code(), Some(expected), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let (input_schema, output_schema) = schemas(args[0]);
        if expected == 2 {
            assert!(out.stdout.is_empty());
            let err = json_of(&out.stderr);
            assert!(err["error"]["code"].is_string() && err["error"]["path"].is_string() && err["error"]["message"].is_string());
            continue;
        }
        let input = json_of(&std::fs::read(fixtures().join(args.last().unwrap())).unwrap());
        assert_valid(&input_schema, &input, args.last().unwrap());
        let output = json_of(&out.stdout);
        assert_valid(&output_schema, &output, &format!("output of {args:?}"));
        assert!(out.stdout.ends_with(b"}\n"));
        assert_eq!(serde_json::to_string_pretty(&output).unwrap() + "\n", String::from_utf8(out.stdout).unwrap(), "output is canonical");
    }
}

#[test]
fn documented_command_examples() {
    let out = statikit(&["statify", "example1.json"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json_of(&out.stdout);
    let cones: Vec<Vec<Vec<i64>>> = cert["fan"]["cones"].as_array().unwrap().iter().map(rays).collect();
    assert_eq!(cones, vec![vec![vec![0, 1], vec![1, 1]], vec![vec![1, 0], vec![1, 1]]]);
    assert_eq!(cert["valid"], true);

    let out = statikit(&["check-static", "skyscraper.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out.stdout)["static"], false);

    let out = statikit(&["jacobian", "cycle5.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(ints(&json_of(&out.stdout)["invariant_factors"]), vec![5]);
}

#[test]
fn input_errors_point_at_the_offending_value() {
    let cases = [
        (vec!["check-static", "bad_poly.json"], "INVALID_INPUT", "/matrix/0/1"),
        (vec!["chip-equiv", "bad_schema.json"], "SCHEMA_VIOLATION", "/graph/edges/1"),
        (vec!["check-static", "malformed.json"], "MALFORMED_JSON", "/matrix/0"),
        (vec!["jacobian", r#"{"vertices": 3, "edges": [[0, 1], [1, 3]]}"#], "INVALID_INPUT", "/edges/1"),
        (vec!["jacobian", r#"{"vertices": "three", "edges": []}"#], "SCHEMA_VIOLATION", "/vertices"),
        (vec!["check-static", r#"{"vars": ["x"], "matrix": [["x"]], "extra": 1}"#], "SCHEMA_VIOLATION", ""),
        (vec!["tor-dim", r#"{"presentation": {"vars": ["x"], "matrix": [["x", "x^"]]}, "bound": "1"}"#], "INVALID_INPUT", "/presentation/matrix/0/1"),
        (vec!["firing-script", r#"{"graph": {"vertices": 2, "edges": [[0, 1]]}, "d1": [1], "d2": [0, 1]}"#], "DIMENSION_MISMATCH", "/d1"),
        (vec!["jacobian", "no-such-file.json"], "IO_ERROR", ""),
        (vec!["jacobian"], "MISSING_INPUT", ""),
    ];
    for (args, code, path) in cases {
        let out = statikit(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = json_of(&out.stderr);
        assert_eq!(err["error"]["code"], code, "{args:?}: {err}");
        assert_eq!(err["error"]["path"], path, "{args:?}: {err}");
    }
}

#[test]
fn inline_stdin_and_file_inputs_agree() {
    let text = std::fs::read_to_string(fixtures().join("k4.json")).unwrap();
    let from_file = statikit(&["jacobian", "k4.json"]);
    let inline = statikit(&["jacobian", &text]);
    let mut child = Command::new(env!("CARGO_BIN_EXE_statikit"))
        .args(["jacobian", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    let piped = child.wait_with_output().unwrap();
    assert_eq!(from_file.stdout, inline.stdout);
    assert_eq!(from_file.stdout, piped.stdout);
    assert_eq!(ints(&json_of(&from_file.stdout)["invariant_factors"]), vec![4, 4]);
}

#[test]
fn output_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("statikit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("out.json");
    let out = statikit(&["check-static", "skyscraper.json", "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), statikit(&["check-static", "skyscraper.json"]).stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn certificates_replay_and_detect_tampering() {
    let stored = std::fs::read(fixtures().join("example1_certificate.json")).unwrap();
    let fresh = statikit(&["statify", "example1.json"]).stdout;
    assert_eq!(fresh, stored);
    let out = statikit(&["replay", "example1_certificate.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out.stdout)["reproduced"], true);

    let audited = statikit(&["statify", "--audit", "example1.json"]);
    let cert = json_of(&audited.stdout);
    assert_eq!(cert["audit"]["agree"], true);
    let out = statikit(&["replay", std::str::from_utf8(&audited.stdout).unwrap()]);
    assert_eq!(json_of(&out.stdout)["audit_matches"], true);

    let mut tampered = json_of(&stored);
    tampered["charts"][0]["static"] = Value::Bool(false);
    let out = statikit(&["replay", &tampered.to_string()]);
    assert_eq!(out.status.code(), Some(1));
    let outcome = json_of(&out.stdout);
    assert_eq!(outcome["reproduced"], false);
    assert_eq!(outcome["charts_match"][0], false);
}

#[test]
fn tor_dimension_and_theorem_verdicts() {
    let out = statikit(&["tor-dim", "tor_dim_skyscraper.json"]);
    let r = json_of(&out.stdout);
    assert_eq!((r["holds"].as_bool(), r["log_tor_dimension"].as_str()), (Some(false), Some("2")));
    let out = statikit(&["tor-dim", r#"{"presentation": {"vars": ["x", "y"], "matrix": [["x"]]}, "bound": "1"}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out.stdout)["log_tor_dimension"], "1");

    let coarse = json_of(&statikit(&["verify-theorem", "verify_example1_coarse.json"]).stdout);
    assert_eq!((coarse["refines"].as_bool(), coarse["all_static"].as_bool(), coarse["agree"].as_bool()), (Some(false), Some(false), Some(true)));
    let fine = json_of(&statikit(&["verify-theorem", "verify_example1.json"]).stdout);
    assert_eq!((fine["refines"].as_bool(), fine["all_static"].as_bool()), (Some(true), Some(true)));
}
