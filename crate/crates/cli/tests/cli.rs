use std::path::{Path, PathBuf};
use std::process::Command;

use helly_core::harness::invariant_instance_from_supports;
use helly_core::set_family::extremal_family;
use helly_core::FieldSpec;
use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn helly(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_helly"));
    cmd.args(args).env_remove("HELLY_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    helly(args, &[])
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report-schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

/// Runs with `--json`, validates the report and checks the exit code
/// against the envelope.
fn json_run(args: &[&str], env: &[(&str, &str)]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let r = helly(&full, env);
    let v: Value =
        serde_json::from_str(r.stdout.trim_end()).unwrap_or_else(|e| panic!("{e}: {}", r.stdout));
    let validator = schema();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}\n{v}");
    assert_eq!(v["exit_code"], json!(r.code));
    (r.code, v)
}

fn write(dir: &TempDir, name: &str, content: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, content).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sharpness_d4_gf5() {
    let r = run(&["verify-sharpness", "--d", "4", "--field", "GF:5"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r
        .stdout
        .starts_with("d = 4 over GF:5: 6 operators, sharp\n"));
    assert!(r.stdout.contains("brute-force cross-check: agrees"));
    let (code, v) = json_run(&["verify-sharpness", "--d", "4", "--field", "GF:5"], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["operators"], json!(6));
    assert_eq!(v["result"]["sharp"], json!(true));
}

#[test]
fn odd_dimension_over_gf2_is_rejected() {
    let r = run(&["verify-sharpness", "--d", "3", "--field", "GF:2"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("too small"), "{}", r.stderr);
    let (code, v) = json_run(&["verify-sharpness", "--d", "3", "--field", "GF:2"], &[]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], json!("field_too_small"));
    // Even dimension over GF(2) is sharp.
    assert_eq!(
        run(&["verify-sharpness", "--d", "4", "--field", "GF:2"]).code,
        0
    );
}

#[test]
fn lemma_commands() {
    let r = run(&["lemma", "verify", "--q", "3"]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout,
        "6 families of size 5 checked, all fail condition\n"
    );
    let (code, v) = json_run(&["lemma", "verify", "--q", "4"], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["families_checked"], json!(3432));
    let (code, v) = json_run(
        &[
            "lemma",
            "verify",
            "--q",
            "5",
            "--samples",
            "50",
            "--seed",
            "3",
        ],
        &[],
    );
    assert_eq!(code, 0);
    assert_eq!(v["result"]["exhaustive"], json!(false));
    assert_eq!(json_run(&["lemma", "verify", "--q", "5"], &[]).0, 2);
    assert_eq!(json_run(&["lemma", "verify", "--q", "9"], &[]).0, 2);

    let (code, v) = json_run(&["lemma", "extremal", "--q", "4"], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["size"], json!(6));
    assert_eq!(v["result"]["condition_holds"], json!(true));
    assert_eq!(json_run(&["lemma", "extremal", "--q", "70"], &[]).0, 2);
}

#[test]
fn lemma_witness_files() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "w.json",
        r#"{"q":3,"members":[[1,2],[2,3],[1,3],[1],[2]]}"#,
    );
    let r = run(&["lemma", "witness", s(&f)]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout,
        "redundant union: members {1,4,5} = {1,2} {1} {2} with union {1,2}\n"
    );
    let (_, v) = json_run(&["lemma", "witness", s(&f)], &[]);
    assert_eq!(v["result"]["witness"]["members"], json!([1, 4, 5]));

    let f = write(&dir, "x.json", r#"{"q":3,"members":[[1],[1,2],[3],[2,3]]}"#);
    let (code, v) = json_run(&["lemma", "witness", s(&f)], &[]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["witness"], Value::Null);

    let f = write(&dir, "y.json", r#"{"q":3,"members":[[1],[4]]}"#);
    assert_eq!(json_run(&["lemma", "witness", s(&f)], &[]).0, 2);
}

#[test]
fn malformed_family_reports_position() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", "{\"field\": \"Q\",\n \"dim\": 2,\n \"operators\": [{\"name\": \"A1\", \"matrix\": [[1, \"0\"], [\"0\", \"1\"]]}]}");
    let r = run(&["common-eig", s(&f)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("bad.json:3:"), "{}", r.stderr);
    assert!(r.stderr.contains("expected a string"), "{}", r.stderr);

    let f = write(
        &dir,
        "trunc.json",
        "{\"field\": \"Q\", \"dim\": 2,\n \"operators\": [",
    );
    let r = run(&["common-eig", s(&f)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("trunc.json:2:"), "{}", r.stderr);
    assert_eq!(json_run(&["common-eig", s(&f)], &[]).0, 2);
}

#[test]
fn fault_injection_exit_codes() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (
            r#"{"field":{"GF":4},"dim":1,"operators":[{"name":"A","matrix":[["1"]]}]}"#,
            "not a prime",
        ),
        (
            r#"{"field":"GF:7","dim":2,"operators":[{"name":"A","matrix":[["1","0","0"],["0","1","0"],["0","0","1"]]}]}"#,
            "not 2x2",
        ),
        (
            r#"{"field":"Q","dim":2,"operators":[{"name":"A","matrix":[["1","0"],["0","1"]]},{"name":"A","matrix":[["1","0"],["0","1"]]}]}"#,
            "name",
        ),
        (
            r#"{"field":"Q","dim":2,"operators":[{"name":"A","matrix":[["1/0","0"],["0","1"]]}]}"#,
            "",
        ),
        (
            r#"{"field":"Q","dim":2,"operators":[{"name":"A","matrix":[["0x1","0"],["0","1"]]}]}"#,
            "",
        ),
        (r#"{"field":"R","dim":2,"operators":[]}"#, ""),
    ];
    for (i, (content, needle)) in cases.iter().enumerate() {
        let f = write(&dir, &format!("f{i}.json"), content);
        let r = run(&["common-eig", s(&f)]);
        assert_eq!(r.code, 2, "case {i}: {}", r.stderr);
        assert!(r.stderr.contains(needle), "case {i}: {}", r.stderr);
        assert_eq!(json_run(&["common-eig", s(&f)], &[]).0, 2);
    }
    assert_eq!(
        run(&["verify-sharpness", "--d", "4", "--field", "GF:4"]).code,
        2
    );
    assert_eq!(
        run(&["verify-sharpness", "--d", "1", "--field", "Q"]).code,
        2
    );
    assert_eq!(
        run(&[
            "gen",
            "--strategy",
            "spiral",
            "--d",
            "2",
            "--n",
            "2",
            "--field",
            "Q",
            "--seed",
            "1"
        ])
        .code,
        2
    );
    assert_eq!(run(&["helly-eig"]).code, 2);

    let fam = fixture("uniform_gf2_d2_n3_seed42.json");
    let env = [("HELLY_BUDGET", "2")];
    let r = helly(&["helly-eig", s(&fam), "--k", "2"], &env);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(r.stderr.contains("budget"));
    assert_eq!(json_run(&["helly-eig", s(&fam), "--k", "2"], &env).0, 3);
    assert_eq!(
        json_run(
            &["helly-eig", s(&fam), "--k", "2"],
            &[("HELLY_BUDGET", "lots")]
        )
        .0,
        2
    );
    assert_eq!(
        json_run(
            &["helly-inv", s(&fam), "--l", "2"],
            &[("HELLY_BUDGET", "2")]
        )
        .0,
        3
    );
}

#[test]
fn golden_uniform_family() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.json");
    let r = run(&[
        "gen",
        "--strategy",
        "uniform",
        "--d",
        "2",
        "--n",
        "3",
        "--field",
        "GF:2",
        "--seed",
        "42",
        "-o",
        s(&out),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let golden = std::fs::read_to_string(fixture("uniform_gf2_d2_n3_seed42.json")).unwrap();
    assert_eq!(std::fs::read_to_string(&out).unwrap(), golden);
    let r = run(&["common-eig", s(&out)]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "none\n"));
}

#[test]
fn generated_files_round_trip() {
    let dir = TempDir::new().unwrap();
    for (i, st) in [
        "uniform",
        "planted_eigenvector",
        "planted_invariant",
        "block_scalar",
        "perturbed_sharpness",
    ]
    .iter()
    .enumerate()
    {
        for field in ["Q", "GF:3"] {
            let a = dir.path().join(format!("{i}{field}a.json"));
            let b = dir.path().join(format!("{i}{field}b.json"));
            let args = |p: &Path| {
                vec![
                    "gen",
                    "--strategy",
                    st,
                    "--d",
                    "3",
                    "--n",
                    "4",
                    "--field",
                    field,
                    "--seed",
                    "9",
                    "-o",
                ]
                .into_iter()
                .map(String::from)
                .chain([s(p).to_string()])
                .collect::<Vec<_>>()
            };
            for p in [&a, &b] {
                let owned = args(p);
                let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
                assert_eq!(run(&refs).code, 0);
            }
            let text = std::fs::read_to_string(&a).unwrap();
            assert_eq!(text, std::fs::read_to_string(&b).unwrap());
            let v: Value = serde_json::from_str(&text).unwrap();
            assert_eq!(format!("{}\n", serde_json::to_string(&v).unwrap()), text);
            let (code, report) = json_run(&["common-eig", s(&a)], &[]);
            assert_eq!(code, 0);
            if *st != "uniform" && *st != "perturbed_sharpness" && *st != "planted_invariant" {
                assert!(
                    !report["result"]["lines"].as_array().unwrap().is_empty(),
                    "{st} {field}"
                );
            }
            let (code, g) = json_run(
                &[
                    "gen",
                    "--strategy",
                    st,
                    "--d",
                    "3",
                    "--n",
                    "4",
                    "--field",
                    field,
                    "--seed",
                    "9",
                ],
                &[],
            );
            assert_eq!(code, 0);
            assert_eq!(g["result"]["family"], v);
        }
    }
}

#[test]
fn helly_sweeps() {
    let dir = TempDir::new().unwrap();
    let (_, v) = json_run(&["verify-sharpness", "--d", "2", "--field", "Q"], &[]);
    let fam = write(&dir, "sharp.json", &v["result"]["family"].to_string());

    let r = run(&["helly-eig", s(&fam), "--k", "2"]);
    assert_eq!(r.code, 1, "{}", r.stdout);
    assert!(r.stdout.contains("every subset has a common eigenvector"));
    let (code, v) = json_run(&["helly-eig", s(&fam), "--k", "2"], &[]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["contradiction"], json!(false));
    assert_eq!(v["result"]["counterexample"].as_array().unwrap().len(), 3);

    let (code, v) = json_run(&["helly-eig", s(&fam), "--k", "3"], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["degenerate"], json!(true));

    let tri = write(
        &dir,
        "tri.json",
        r#"{"field":{"GF":3},"dim":2,"operators":[{"name":"U","matrix":[["1","2"],["0","1"]]},{"name":"V","matrix":[["0","1"],["0","2"]]},{"name":"W","matrix":[["2","2"],["0","0"]]}]}"#,
    );
    for l in ["1", "2", "3", "5"] {
        let (code, v) = json_run(&["helly-inv", s(&tri), "--l", l], &[]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["full_family"], json!([["1", "0"]]));
    }
    let r = run(&["helly-inv", s(&fam), "--l", "2"]);
    assert_eq!(r.code, 2, "rational field is rejected");
}

#[test]
fn output_is_independent_of_threads() {
    let fam = fixture("uniform_gf2_d2_n3_seed42.json");
    let commands: Vec<Vec<&str>> = vec![
        vec!["verify-sharpness", "--d", "5", "--field", "GF:7", "--json"],
        vec!["lemma", "verify", "--q", "4"],
        vec!["lemma", "verify", "--q", "5", "--samples", "200", "--json"],
        vec!["helly-eig", s(&fam), "--k", "2", "--json"],
        vec!["helly-inv", s(&fam), "--l", "2"],
        vec![
            "gen",
            "--strategy",
            "perturbed_sharpness",
            "--d",
            "4",
            "--n",
            "7",
            "--field",
            "GF:5",
            "--seed",
            "3",
        ],
    ];
    for args in commands {
        let outputs: Vec<(i32, String)> = ["1", "4"]
            .iter()
            .map(|t| {
                let mut a = args.clone();
                a.extend(["--threads", t]);
                let r = run(&a);
                (r.code, r.stdout)
            })
            .collect();
        assert_eq!(outputs[0], outputs[1], "{args:?}");
    }
}

fn rows(sub: &helly_core::Subspace) -> Value {
    json!(sub.basis().to_strings())
}

#[test]
fn invariant_subspace_pipeline() {
    let dir = TempDir::new().unwrap();
    let f = FieldSpec::Prime(5);
    let supports = vec![vec![1], vec![1, 2], vec![2], vec![3, 2], vec![1, 3]];
    let inst = invariant_instance_from_supports(3, f, &supports, 4).unwrap();
    let fam_json = json!({
        "field": {"GF": 5},
        "dim": 3,
        "operators": inst.family.operators().iter()
            .map(|o| json!({"name": o.name, "matrix": o.matrix.to_strings()}))
            .collect::<Vec<_>>(),
    });
    let fam = write(&dir, "fam.json", &fam_json.to_string());
    let ordered: Vec<Value> = inst.leave_one_out.iter().map(rows).collect();
    let subs = write(
        &dir,
        "subs.json",
        &Value::Array(ordered.clone()).to_string(),
    );
    let (code, v) = json_run(
        &["invsub", s(&fam), "--a0", "A0", "--subspaces", s(&subs)],
        &[],
    );
    assert_eq!(code, 0, "{v}");
    let dim = v["result"]["subspace"]["dim"].as_u64().unwrap();
    assert!((1..3).contains(&dim));

    let named: serde_json::Map<String, Value> = (1..=5)
        .map(|j| (format!("A{j}"), ordered[j - 1].clone()))
        .collect();
    let subs2 = write(&dir, "named.json", &Value::Object(named).to_string());
    let (_, v2) = json_run(
        &["invsub", s(&fam), "--a0", "A0", "--subspaces", s(&subs2)],
        &[],
    );
    assert_eq!(v["result"], v2["result"]);
    let r = run(&["invsub", s(&fam), "--a0", "A0", "--subspaces", s(&subs)]);
    assert!(
        r.stdout.starts_with("common invariant subspace: span{"),
        "{}",
        r.stdout
    );

    assert_eq!(
        json_run(
            &["invsub", s(&fam), "--a0", "B", "--subspaces", s(&subs)],
            &[]
        )
        .0,
        2
    );
    let short = write(
        &dir,
        "short.json",
        &Value::Array(ordered[..4].to_vec()).to_string(),
    );
    assert_eq!(
        json_run(
            &["invsub", s(&fam), "--a0", "A0", "--subspaces", s(&short)],
            &[]
        )
        .0,
        2
    );
    let mut wrong = ordered.clone();
    wrong[0] = json!([["1", "2", "3"]]);
    let wrong = write(&dir, "wrong.json", &Value::Array(wrong).to_string());
    assert_eq!(
        json_run(
            &["invsub", s(&fam), "--a0", "A0", "--subspaces", s(&wrong)],
            &[]
        )
        .0,
        2
    );

    let ext = extremal_family(3).unwrap().members();
    let inst = invariant_instance_from_supports(3, f, &ext, 8).unwrap();
    let fam_json = json!({
        "field": "GF:5",
        "dim": 3,
        "operators": inst.family.operators().iter()
            .map(|o| json!({"name": o.name, "matrix": o.matrix.to_strings()}))
            .collect::<Vec<_>>(),
    });
    let fam = write(&dir, "ext.json", &fam_json.to_string());
    let subs = write(
        &dir,
        "ext_subs.json",
        &Value::Array(inst.leave_one_out.iter().map(rows).collect()).to_string(),
    );
    let (code, v) = json_run(
        &["invsub", s(&fam), "--a0", "A0", "--subspaces", s(&subs)],
        &[],
    );
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], json!("no_witness"));
}
