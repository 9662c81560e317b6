use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mcprod::cli::{Report, Status};

fn models_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("models")
}

fn mcprod(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mcprod"));
    cmd.current_dir(models_dir()).args(args).env_remove("MCPROD_MAX_ITER");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_report(args: &[&str], env: &[(&str, &str)]) -> (Report, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = mcprod(&full, env);
    let text = stdout(&out);
    let report = Report::from_json(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    assert_eq!(report.to_json(), text.trim_end(), "machine report does not round-trip");
    (report, out.status.code().unwrap())
}

#[test]
fn cohomology_of_heisenberg_in_degree_two() {
    let out = mcprod(&["cohomology", "heisenberg.model", "--degree", "2"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("dimension 2"), "{text}");
    assert!(text.contains("[a*c]") && text.contains("[b*c]"), "{text}");

    let (report, code) = json_report(&["cohomology", "heisenberg.model", "--degree", "2"], &[]);
    assert_eq!(code, 0);
    assert_eq!(report.status, Status::Success);
    assert_eq!(report.command, ["--json", "cohomology", "heisenberg.model", "--degree", "2"]);
    assert_eq!(report.data["basis"], serde_json::json!(["a*c", "b*c"]));
}

#[test]
fn massey_triple_on_heisenberg() {
    let (report, code) = json_report(&["massey", "heisenberg.model", "a", "a", "b"], &[]);
    assert_eq!(code, 0);
    let product = &report.data["product"];
    assert_eq!(product["representative"], "-a*c");
    assert_eq!(product["zero"], false);
    assert_eq!(report.data["indeterminacy"], serde_json::json!([]));
    assert_eq!(report.data["system"].as_array().unwrap().len(), 4);
}

#[test]
fn obstructed_massey_exits_one() {
    let out = mcprod(&["massey", "exterior_abc.model", "a", "b", "a"], &[]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}

#[test]
fn annihilate_with_one_generator_witness() {
    let args = ["annihilate", "heisenberg.model", "--cocycle", "a*c", "--max-degree", "6"];
    let (report, code) = json_report(&args, &[]);
    assert_eq!(code, 0);
    assert_eq!(report.data["annihilated"], true);
    assert_eq!(report.data["witness_valid"], true);
    let gens = report.data["witness"]["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 1);
    assert_eq!(gens[0]["differential"], "a*c");

    let out = mcprod(&["annihilate", "heisenberg.model", "--cocycle", "a", "--max-degree", "6"], &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn adjunction_cap_comes_from_the_environment() {
    let args = ["annihilate", "heisenberg.model", "--cocycle", "a*b*c", "--max-degree", "6"];
    let out = mcprod(&args, &[("MCPROD_MAX_ITER", "1")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("undecided"));

    let out = mcprod(&args, &[("MCPROD_MAX_ITER", "3")]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let out = mcprod(&args, &[("MCPROD_MAX_ITER", "lots")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mc_product_and_descend() {
    let (report, code) = json_report(
        &["mc-product", "triple_211.model", "--data", "massey_3_211.dgla", "--system", "triple_211.system"],
        &[],
    );
    assert_eq!(code, 0);
    assert_eq!(report.status, Status::Success);

    let (report, code) = json_report(
        &[
            "descend",
            "exterior_ub.model",
            "--euler",
            "u",
            "--x-degree",
            "1",
            "--data",
            "massey_2_21.dgla",
            "--system",
            "empty.system",
            "--class",
            "u*b",
        ],
        &[],
    );
    assert_eq!(code, 0, "{report:?}");
    assert_eq!(report.status, Status::Success);
}

#[test]
fn validate_accepts_bundled_files() {
    for file in ["heisenberg.model", "massey_3_111.dgla", "massey_2_21.dgla"] {
        let out = mcprod(&["validate", file], &[]);
        assert_eq!(out.status.code(), Some(0), "{file}: {}", stdout(&out));
    }
}

#[test]
fn input_errors_exit_two() {
    let out = mcprod(&["massey", "heisenberg.model", "a + q", "b"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at 4: unknown generator"));

    for args in [
        &["cohomology", "nothere.model", "--degree", "1"][..],
        &["cohomology", "heisenberg.model", "--degree", "9"],
        &["cohomology", "heisenberg.model"],
        &["frobnicate"],
    ] {
        assert_eq!(mcprod(args, &[]).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(mcprod(&["--help"], &[]).status.code(), Some(0));
}
