//! Golden-output tests for the `gha` binary.
//!
//! Each entry of `golden/cases.json` is run and its exit code, stdout and
//! stderr are compared with `golden/<name>.out` / `golden/<name>.err`. JSON
//! output is also validated against `schemas/<schema>.schema.json`.
//! Set `GHA_BLESS=1` to rewrite the expected files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde::Deserialize;
use serde_json::Value;

#[derive(Deserialize)]
struct Case {
    name: String,
    args: Vec<String>,
    exit: i32,
    schema: Option<String>,
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn golden_dir() -> PathBuf {
    root().join("tests/golden")
}

fn run(args: &[String]) -> (i32, String, String) {
    let inputs = golden_dir().join("inputs");
    let args: Vec<String> = args
        .iter()
        .map(|a| a.replace("{inputs}", inputs.to_str().unwrap()))
        .collect();
    let out = Command::new(env!("CARGO_BIN_EXE_gha"))
        .args(&args)
        .output()
        .expect("binary runs");
    // paths differ between machines
    let scrub = |b: Vec<u8>| {
        String::from_utf8(b)
            .unwrap()
            .replace(inputs.to_str().unwrap(), "{inputs}")
    };
    (out.status.code().unwrap_or(-1), scrub(out.stdout), scrub(out.stderr))
}

fn validator(name: &str) -> jsonschema::Validator {
    let path = root().join("schemas").join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn check_file(path: &Path, actual: &str, bless: bool) -> Option<String> {
    if bless {
        if actual.is_empty() {
            let _ = fs::remove_file(path);
        } else {
            fs::write(path, actual).unwrap();
        }
        return None;
    }
    let expected = fs::read_to_string(path).unwrap_or_default();
    (expected != actual).then(|| {
        format!(
            "{} differs\n--- expected\n{expected}\n--- actual\n{actual}",
            path.display()
        )
    })
}

#[test]
fn golden_outputs() {
    let bless = std::env::var_os("GHA_BLESS").is_some();
    let cases: Vec<Case> =
        serde_json::from_str(&fs::read_to_string(golden_dir().join("cases.json")).unwrap()).unwrap();
    let mut failures = Vec::new();
    for case in &cases {
        let (code, stdout, stderr) = run(&case.args);
        if code != case.exit {
            failures.push(format!("{}: exit {code}, expected {}\n{stderr}", case.name, case.exit));
            continue;
        }
        if code != 0 && code != 1 && stderr.is_empty() {
            failures.push(format!("{}: error exit without a message", case.name));
        }
        let dir = golden_dir();
        failures.extend(check_file(&dir.join(format!("{}.out", case.name)), &stdout, bless));
        failures.extend(check_file(&dir.join(format!("{}.err", case.name)), &stderr, bless));
        if let Some(schema) = &case.schema {
            let value: Value = match serde_json::from_str(&stdout) {
                Ok(v) => v,
                Err(e) => {
                    failures.push(format!("{}: stdout is not JSON: {e}", case.name));
                    continue;
                }
            };
            let errors: Vec<String> = validator(schema)
                .iter_errors(&value)
                .map(|e| format!("{}: {e} at {}", case.name, e.instance_path()))
                .collect();
            failures.extend(errors);
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n\n"));
}

#[test]
fn schemas_reject_malformed_output() {
    let v = validator("iso");
    let bad = serde_json::json!({
        "schema_version": 1, "isomorphic": true, "numeric_witness": false, "reason": "x"
    });
    // an isomorphic verdict must name its case
    assert!(!v.is_valid(&bad));
    let v = validator("classify");
    let bad = serde_json::json!({"schema_version": 1, "type": "Cmod", "zdot": "1", "n": 2, "a": "1"});
    assert!(!v.is_valid(&bad));
    let v = validator("build");
    assert!(!v.is_valid(&serde_json::json!({"schema_version": 2, "n": 1, "X": [], "H": [], "Y": []})));
}

#[test]
fn build_output_feeds_verify_and_classify() {
    let descriptor = r#"{"type":"Bprime","orbit":["0"],"zdot":"0","a":"3"}"#;
    let (code, module, err) = run(&["build", "-f", "h^2 + h", "--descriptor", descriptor].map(String::from));
    assert_eq!(code, 0, "{err}");
    let dir = std::env::temp_dir().join(format!("gha-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("module.json");
    fs::write(&path, &module).unwrap();
    let p = path.to_str().unwrap().to_string();
    let (code, report, _) = run(&["verify".into(), "-f".into(), "h^2 + h".into(), "--module".into(), p.clone()]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&report).unwrap()["ok"], true);
    let (code, back, _) = run(&["classify".into(), "-f".into(), "h^2 + h".into(), "--module".into(), p]);
    assert_eq!(code, 0);
    let back: Value = serde_json::from_str(&back).unwrap();
    assert_eq!(back["type"], "Bprime");
    assert_eq!(back["a"], "3");
    let _ = fs::remove_dir_all(dir);
}

#[test]
fn help_and_usage_errors() {
    let (code, out, _) = run(&["--help".to_string()]);
    assert_eq!(code, 0);
    assert!(out.contains("simples"));
    let (code, _, err) = run(&["iso".to_string(), "-f1".to_string(), "h".to_string()]);
    assert_eq!(code, 2);
    assert!(err.contains("--f2"));
}
