use std::path::{Path, PathBuf};
use std::process::Command;

use orbiweyl::files::CategoryFile;
use orbiweyl_core::flow_complex::{build_differential, parse_class, spectral_invariant};
use orbiweyl_core::NovikovSeries;
use serde_json::Value;

fn orbiweyl(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_orbiweyl")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("cli-{}-{name}", std::process::id()))
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.json"));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&doc).expect("schema compiles")
}

fn assert_valid(name: &str, stdout: &str) -> Value {
    let doc: Value = serde_json::from_str(stdout).expect("JSON output");
    let s = schema(name);
    if let Err(errors) = s.validate(&doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{name} output violates its schema: {msgs:?}");
    }
    doc
}

#[test]
fn sectors_k2_has_two_rows() {
    let (code, out, _) = orbiweyl(&["sectors", "--k", "2"]);
    assert_eq!(code, 0);
    let table: Vec<&str> = out.lines().skip(2).take_while(|l| !l.is_empty()).collect();
    assert_eq!(table.len(), 2, "{out}");
    assert!(table[0].starts_with("(1,1)") && table[1].starts_with("(2)"));
    assert!(out.contains("total rank 5"));
}

#[test]
fn weyl_rule_passes() {
    let (code, out, _) = orbiweyl(&["weyl", "--bk-rule", "1/ceil(sqrt(k))", "--k-max", "8"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("verdict: PASS\n"));
    let (code, out, _) = orbiweyl(&["--json", "weyl", "--bk-rule", "1/ceil(sqrt(k))", "--k-max", "8"]);
    assert_eq!(code, 0);
    let doc = assert_valid("weyl", &out);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[7]["hess_det_val"], "8/3");
    assert_eq!(rows[7]["ratio"], "1/3");
}

#[test]
fn constant_areas_fail_the_weyl_rule() {
    // B_k = 1/2 never decays, and total area 1 forces A = 0
    let (code, out, _) = orbiweyl(&["weyl", "--bk-rule", "1/2", "--k-min", "2", "--k-max", "4"]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn idempotent_predicate_fails() {
    let (code, out, _) = orbiweyl(&["idempotents", "--k", "4", "--omega", "1"]);
    assert_eq!(code, 1);
    assert!(out.ends_with("verdict: FAIL\n"));
    let (code, out, _) = orbiweyl(&["--json", "idempotents", "--k", "3", "--omega", "2"]);
    assert_eq!(code, 1);
    let doc = assert_valid("idempotents", &out);
    assert_eq!(doc["idempotents"].as_array().unwrap().len(), 4);
    for row in doc["family"].as_array().unwrap() {
        assert_eq!(row["ratio"], "-1");
        assert_eq!(row["summand_rank"], 1);
    }
    assert_eq!(doc["sublinear"], false);
}

#[test]
fn potential_report() {
    let (code, out, _) = orbiweyl(&["--json", "potential", "--k", "3", "--B", "2/5"]);
    assert_eq!(code, 0);
    let doc = assert_valid("potential", &out);
    assert_eq!(doc["A"], "1/10");
    assert_eq!(doc["hess_det_val"], "6/5");
    assert_eq!(doc["defect_bound"], "6/5");
    assert_eq!(doc["critical_point"].as_array().unwrap().len(), 3);
    let (code, _, err) = orbiweyl(&["potential", "--k", "2", "--B", "1/2", "--A", "1/2"]);
    assert_eq!(code, 2);
    assert!(err.contains("smaller than disc area"));
}

#[test]
fn sectors_json() {
    let (_, out, _) = orbiweyl(&["--json", "sectors", "--k", "4"]);
    let doc = assert_valid("sectors", &out);
    assert_eq!(doc["sectors"].as_array().unwrap().len(), 5);
    assert_eq!(doc["total_rank"], 20);
    let (code, out, _) = orbiweyl(&["--json", "sectors", "--k", "3", "--dim", "2"]);
    assert_eq!(code, 0);
    let doc = assert_valid("sectors", &out);
    assert!(doc["betti"].is_null());
    assert_eq!(doc["sectors"][2]["age"], "2");
}

#[test]
fn flow_verify_and_spectral() {
    let file = scratch("category.json");
    let f = file.to_str().unwrap();
    let (code, out, _) = orbiweyl(&["--json", "--seed", "11", "flow", "verify", "--count", "4", "--size", "5", "--emit", f]);
    assert_eq!(code, 0);
    assert_eq!(assert_valid("flow-verify", &out)["rows"].as_array().unwrap().len(), 4);

    let text = std::fs::read_to_string(&file).unwrap();
    let cat = serde_json::from_str::<CategoryFile>(&text).unwrap().to_category().unwrap();
    let alpha: NovikovSeries = "1/3".parse().unwrap();
    let complex = build_differential(&cat, &alpha).unwrap();
    let mut cycles = 0;
    for g in &cat.generators {
        let x = parse_class(&complex, &g.id).unwrap();
        let (code, out, _) = orbiweyl(&["--json", "flow", "spectral", "--input", f, "--class", &g.id, "--alpha", "1/3"]);
        if complex.is_cycle(&x) {
            cycles += 1;
            assert_eq!(code, 0);
            let doc = assert_valid("flow-spectral", &out);
            let want = spectral_invariant(&complex, &x).unwrap().map(|c| c.to_string());
            assert_eq!(doc["spectral_invariant"].as_str().map(String::from), want);
        } else {
            assert_eq!(code, 2);
        }
    }
    assert!(cycles > 0);
    std::fs::remove_file(file).unwrap();
}

#[test]
fn broken_category_is_rejected() {
    let file = scratch("broken.json");
    let body = r#"{"generators":[{"id":"a","action":0},{"id":"b","action":1},{"id":"c","action":2}],
        "step":1,"counts":[{"k":0,"from":"a","to":"b","value":"1"},{"k":0,"from":"b","to":"c","value":"1"}]}"#;
    std::fs::write(&file, body).unwrap();
    let (code, _, err) = orbiweyl(&["flow", "spectral", "--input", file.to_str().unwrap(), "--class", "a"]);
    assert_eq!(code, 2);
    assert!(err.contains("d² identity fails"), "{err}");
    std::fs::remove_file(file).unwrap();
}

#[test]
fn spec_from_table() {
    let file = scratch("spectrum.json");
    let body = r#"{"val_v":"1/4","spectra":{"1":["0","1/2"],"2":[{"orbit":"x","hamiltonian_integral":"3","cap_orb_points":2}]}}"#;
    std::fs::write(&file, body).unwrap();
    let (code, out, _) = orbiweyl(&["--json", "spec", "--table", file.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code, 0);
    let doc = assert_valid("spec", &out);
    assert_eq!(doc["values"], serde_json::json!(["0", "1/2", "1", "5/2"]));
    let (code, _, _) = orbiweyl(&["spec", "--table", file.to_str().unwrap(), "--k", "3"]);
    assert_eq!(code, 2);
    std::fs::remove_file(file).unwrap();
}

#[test]
fn qm_on_a5() {
    let (code, out, _) = orbiweyl(&["--json", "--seed", "7", "qm", "--group", "a5", "--samples", "20"]);
    assert_eq!(code, 0);
    let doc = assert_valid("qm", &out);
    assert_eq!(doc["constant"], 7);
    assert_eq!(doc["failures"], 0);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 20);
    let (code, _, err) = orbiweyl(&["qm", "--group", "z4"]);
    assert_eq!(code, 2);
    assert!(err.contains("not perfect"));
}

#[test]
fn output_is_deterministic() {
    let runs = [
        vec!["--seed", "3", "qm", "--samples", "10"],
        vec!["--json", "--seed", "5", "flow", "verify", "--count", "3"],
        vec!["--json", "idempotents", "--k", "2", "--omega", "1/2"],
        vec!["potential", "--k", "4", "--B", "1/3", "--gamma", "2"],
    ];
    for args in &runs {
        let first = orbiweyl(args);
        let second = orbiweyl(args);
        assert_eq!(first, second, "{args:?}");
    }
    let a = orbiweyl(&["--seed", "3", "qm", "--samples", "10"]).1;
    let b = orbiweyl(&["--seed", "4", "qm", "--samples", "10"]).1;
    assert_ne!(a, b);
}

#[test]
fn errors_exit_two() {
    for args in [
        vec!["sectors"],
        vec!["potential", "--k", "2", "--B", "one"],
        vec!["weyl", "--bk-rule", "1/sqrt(k)", "--k-max", "3"],
        vec!["weyl", "--bk-rule", "log(k)", "--k-max", "3"],
        vec!["qm", "--group", "s9"],
        vec!["spec", "--table", "/nonexistent/table.json", "--k", "1"],
        vec!["idempotents", "--k", "0", "--omega", "1"],
        vec!["--trunc", "x", "idempotents", "--k", "1", "--omega", "1"],
    ] {
        let (code, out, err) = orbiweyl(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty() && !err.is_empty(), "{args:?}");
    }
}
