use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wlp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wlp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn schema_for(def: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/reports.schema.json");
    let mut schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let obj = schema.as_object_mut().unwrap();
    obj.remove("anyOf");
    obj.insert("$ref".into(), Value::String(format!("#/$defs/{def}")));
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(def: &str, value: &Value) {
    let v = schema_for(def);
    let errors: Vec<String> = v
        .iter_errors(value)
        .map(|e| format!("{e} at {}", e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{def}: {errors:#?}");
}

#[test]
fn random_cubics_hilbert_function() {
    let out = wlp(&["check", "--random", "3", "3", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(
        r["hilbert"],
        serde_json::json!([1, 4, 10, 16, 19, 16, 10, 4, 1, 0])
    );
    assert_eq!(r["wlp"]["overall"], true);
    assert_eq!(r["wlp"]["shortcut_used"], true);
    assert_eq!(r["bounds"]["range_bound2"]["last"], 4);
    assert_valid("CheckReport", &r);
}

#[test]
fn squares_have_wlp() {
    let out = wlp(&["check", "x0^2", "x1^2", "x2^2", "x3^2", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["num_vars"], 4);
    assert_eq!(r["wlp"]["verdicts"].as_array().unwrap().len(), 5);
    assert_valid("CheckReport", &r);
}

#[test]
fn malformed_polynomial_reports_offset() {
    let out = wlp(&["check", "x0^2 + 3*x1^"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("byte 12"), "{err}");
    let out = wlp(&["check", "x0^2", "x4^2", "--vars", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte 0"));
}

#[test]
fn failure_exits_two() {
    let out = wlp(&["check", "x0^3", "x1^3", "x2^3", "x0*x1*x2"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["wlp"]["status"], "fails");
    assert_eq!(r["complete_intersection"], Value::Null);
    assert_valid("CheckReport", &r);
}

#[test]
fn non_artinian_input_is_an_input_error() {
    let out = wlp(&["check", "x0^2", "x0^2", "x1^2", "--vars", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not Artinian up to degree 4"));
}

#[test]
fn bounds_golden() {
    let out = wlp(&["bounds", "3", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["range_main"]["start"], 7);
    assert_eq!(r["range_main"]["last"], 7);
    assert_eq!(r["range_bound2"]["last"], 10);
    assert_eq!(r["splitting"]["lower_b1"], -4);
    assert_eq!(r["splitting"]["upper_bn"], -1);
    assert_valid("BoundReport", &r);
    let r = json(&wlp(&["bounds", "4", "7", "--b1", "-3"]));
    assert_eq!(r["range_bound2"]["last"], 9);
    assert_eq!(r["range_b1"]["last"], 2);
    assert_valid("BoundReport", &r);
    assert_eq!(wlp(&["bounds", "2", "5"]).status.code(), Some(1));
}

#[test]
fn jacobian_commands() {
    let out = wlp(&["jacobian", "x0^3", "--vars", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["smooth_certified"], false);
    assert_valid("JacobianReport", &r);

    let out = wlp(&["jacobian", "x0^3 + x1^3 + x2^3 + x3^3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["smooth_certified"], true);
    assert_eq!(r["wlp_guaranteed_range"]["end"], 3);
    assert_eq!(r["beauville_degree_d"]["certified"], "certified-holds");
    assert_valid("JacobianReport", &r);

    assert_eq!(wlp(&["jacobian", "x0 + x1"]).status.code(), Some(1));
}

#[test]
fn sweep_outputs_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(
        &cfg,
        "n_range = [3, 3]\nd_range = [2, 3]\ntrials_per_cell = 2\nell_trials = 3\nseed = 5\n",
    )
    .unwrap();
    let run = |name: &str| {
        let base = dir.path().join(name);
        let out = wlp(&[
            "sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--output",
            base.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        (
            std::fs::read(base.with_extension("csv")).unwrap(),
            serde_json::from_slice::<Value>(&std::fs::read(base.with_extension("json")).unwrap())
                .unwrap(),
        )
    };
    let (csv1, json1) = run("a");
    let (csv2, _) = run("b");
    assert_eq!(csv1, csv2);
    let text = String::from_utf8(csv1).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("n,d,instance,instance_seed,"));
    assert_valid("SweepResult", &json1);
    assert_eq!(json1["red_flags"], 0);

    let explicit = dir.path().join("only.csv");
    let out = wlp(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "6",
        "--csv",
        explicit.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let other = std::fs::read_to_string(explicit).unwrap();
    assert_ne!(other, text);
}

#[test]
fn sweep_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "d_range = [5, 2]\n").unwrap();
    let out = wlp(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("d_range"));
    let out = wlp(&[
        "sweep",
        "--config",
        dir.path().join("missing.toml").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(wlp(&["check", "--bogus"]).status.code(), Some(1));
    assert_eq!(wlp(&["check"]).status.code(), Some(1));
    assert_eq!(
        wlp(&["check", "x0^2", "--random", "1", "2"]).status.code(),
        Some(1)
    );
    assert_eq!(wlp(&["--help"]).status.code(), Some(0));
}

#[test]
fn rational_field_matches_prime_field() {
    let a = json(&wlp(&["check", "--random", "2", "3", "--seed", "4"]));
    let b = json(&wlp(&[
        "check", "--random", "2", "3", "--seed", "4", "--field", "rational",
    ]));
    assert_eq!(a["hilbert"], b["hilbert"]);
    assert_eq!(a["generators"], b["generators"]);
    assert_eq!(b["field"], "rational");
    assert_eq!(a["wlp"]["overall"], b["wlp"]["overall"]);
}
