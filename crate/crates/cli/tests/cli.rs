use std::process::Command;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qstrata"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

#[test]
fn analyze_reports_the_rank_one_radical() {
    let (code, stdout, _) = run(&["analyze", &fixture("p2_skew_n3.json")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("stratum w = {}"));
    assert!(stdout.contains("radical basis: (1, 0, 0)"));
    assert!(stdout.contains("orthogonal torus: dimension 2, components 1"));
}

#[test]
fn analyze_json_exposes_exact_basis_strings() {
    let (code, stdout, _) = run(&["analyze", &fixture("p2_skew_n3.json"), "--json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["n"], 3);
    assert_eq!(doc["strata"].as_array().unwrap().len(), 8);
    assert_eq!(doc["strata"][0]["radical_basis"], serde_json::json!([["1", "0", "0"]]));
    assert_eq!(doc["input"]["n"], 3);
    assert_eq!(doc["hypothesis"]["satisfied"], true);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["analyze", &fixture("uniparameter_t3_n2.json")],
        vec!["analyze", &fixture("uniparameter_t3_n2.json"), "--json"],
        vec!["twist", &fixture("graded_twist_z2.json"), "--json"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first, second, "args {args:?}");
        assert_eq!(first.0, 0);
    }
}

#[test]
fn analyze_rejects_minus_one_with_exit_two() {
    let (code, _, stderr) = run(&["analyze", &fixture("minus_one_n4.json")]);
    assert_eq!(code, 2);
    assert!(stderr.contains("-1") || stderr.contains("square root"), "{stderr}");
}

#[test]
fn psi_renders_the_symbolic_template() {
    let (code, stdout, _) = run(&[
        "psi",
        &fixture("uniparameter_generic_n3.json"),
        "--lambda",
        "*,*,*",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("p^-1*l2*x[1]*x[3] - l1*l3*x[2]"), "{stdout}");
    assert!(stdout.contains("saturate by x[1]*x[2]*x[3]"));
}

#[test]
fn psi_substitutes_rational_points() {
    let (code, stdout, _) = run(&[
        "psi",
        &fixture("uniparameter_t3_n2.json"),
        "--lambda",
        "1,-2",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("x[1]^3 - 1"), "{stdout}");
    assert!(stdout.contains("x[2]^3 + 8"), "{stdout}");
    let (code, stdout, _) = run(&[
        "psi",
        &fixture("uniparameter_t3_n2.json"),
        "--lambda",
        "0,3",
        "--json",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["w"], serde_json::json!([1]));
    let generators: Vec<String> = doc["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert!(generators.contains(&"x[1]".to_string()));
    assert!(generators.contains(&"x[2] - 3".to_string()), "{generators:?}");
}

#[test]
fn psi_rejects_wrong_arity() {
    let (code, _, stderr) = run(&[
        "psi",
        &fixture("uniparameter_generic_n3.json"),
        "--lambda",
        "1,2",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("expected 3"));
}

#[test]
fn fiber_separates_commutative_points() {
    let (code, stdout, _) = run(&[
        "fiber",
        &fixture("commutative_n2.json"),
        "--lambda",
        "1,2",
        "--mu",
        "1,3",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("equivalent: false"), "{stdout}");
    let (code, stdout, _) = run(&[
        "fiber",
        &fixture("commutative_n2.json"),
        "--lambda",
        "1,2",
        "--mu",
        "1,2",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("equivalent: true"));
}

#[test]
fn fiber_is_not_gated_on_the_hypothesis() {
    let (code, stdout, _) = run(&[
        "fiber",
        &fixture("minus_one_n4.json"),
        "--lambda",
        "1,1,1,1",
        "--mu",
        "1,1,1,-1",
        "--json",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["equivalent"], true);
}

#[test]
fn feasibility_builtin_witness_and_infeasibility() {
    let (code, stdout, _) = run(&["feasibility", "--minus-one", "--n", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("feasible within the bicharacter family"));
    assert!(stdout.contains("(2, 0)"));
    let (code, stdout, _) = run(&["feasibility", "--minus-one", "--n", "3", "--json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["exhaustive"], true);
    assert_eq!(doc["searched"], 64);
    assert_eq!(doc["witness"], serde_json::Value::Null);
    let (code, _, stderr) = run(&["feasibility", "--minus-one"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("--n"));
}

#[test]
fn feasibility_reads_problem_files() {
    let (code, stdout, _) = run(&["feasibility", &fixture("minus_one_n4.json")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("expected infeasibility for n >= 4"), "{stdout}");
    assert!(stdout.contains("4096"));
}

#[test]
fn twist_pulls_back_and_analyzes() {
    let (code, stdout, _) = run(&["twist", &fixture("graded_twist_z2.json")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("q~[1,2] = q^2"));
    assert!(stdout.contains("q~[2,3] = q^-2"));
    assert!(stdout.contains("strata: 8"));
    let (code, _, stderr) = run(&["twist", &fixture("commutative_n2.json")]);
    assert_eq!(code, 1);
    assert!(stderr.contains("graded_twist"));
}

#[test]
fn malformed_input_and_flags_exit_one() {
    let (code, _, _) = run(&["analyze", "/nonexistent-problem.json"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["analyze", &fixture("p2_skew_n3.json"), "--bogus"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["--help"]);
    assert_eq!(code, 0);
}

#[test]
fn selftest_passes_through_the_cli() {
    let (code, stdout, _) = run(&["selftest"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("all suites passed"), "{stdout}");
}
