use std::io::Write;
use std::process::{Command, Output};

fn toricmono(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricmono"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

fn temp_config(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn list_shows_condition_status() {
    let o = toricmono(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let quintic = text.lines().find(|l| l.starts_with("quintic")).unwrap();
    assert!(quintic.ends_with("cond2: ok"));
    let octic = text.lines().find(|l| l.starts_with("octic-11222")).unwrap();
    assert!(octic.ends_with("cond2: fails"));
}

#[test]
fn gale_of_quintic() {
    let o = toricmono(&["compute", "gale", "--example", "quintic"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "[-5, 1, 1, 1, 1, 1]");
}

#[test]
fn quintic_edge_monodromy_json() {
    let o = toricmono(&[
        "compute",
        "monodromy",
        "--example",
        "quintic",
        "--loop",
        "edge",
        "--normalization",
        "psi",
        "--json",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["convention"], "scaled-2pi-i, psi-normalized, left-to-right composition");
    let basis: Vec<&str> = v["basis"].as_array().unwrap().iter().map(|b| b.as_str().unwrap()).collect();
    assert_eq!(basis, ["1", "lambda", "lambda^2", "lambda^3"]);
    let row = |i: usize| -> Vec<&str> {
        v["matrix"][i].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect()
    };
    assert_eq!(row(3), ["-5", "0", "0", "1"]);
    assert_eq!(row(1), ["-25/6", "1", "0", "0"]);
}

#[test]
fn output_is_stable() {
    let args = ["compute", "kernel", "--example", "two-param-22211", "--kernel", "conjugate:mu-nu", "--json"];
    assert_eq!(toricmono(&args).stdout, toricmono(&args).stdout);
}

#[test]
fn kernel_matches_edge_loop() {
    let k = json(&toricmono(&["compute", "kernel", "--example", "quintic", "--kernel", "diagonal-ideal", "--json"]));
    let m = json(&toricmono(&["compute", "monodromy", "--example", "quintic", "--loop", "edge", "--json"]));
    assert_eq!(k["matrix"], m["matrix"]);
    let e = json(&toricmono(&["compute", "kernel", "--example", "quintic", "--kernel", "edge", "--json"]));
    assert_eq!(e["matrix"], m["matrix"]);
}

#[test]
fn two_param_discriminant_curve() {
    let o = toricmono(&["compute", "discriminant", "--example", "two-param-22211"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("y = 1/4*(1 - (1/256)/x)^2"));
    let o = toricmono(&["compute", "discriminant", "--example", "two-param-62211", "--json"]);
    assert_eq!(json(&o)["constant"], "1/1728");
}

#[test]
fn ambiguous_edge_is_usage_error() {
    let o = toricmono(&["compute", "monodromy", "--example", "two-param-22211", "--loop", "edge"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("edge:"));
}

#[test]
fn unknown_selectors_are_usage_errors() {
    for args in [
        vec!["compute", "monodromy", "--example", "quintic", "--loop", "spiral"],
        vec!["compute", "kernel", "--example", "quintic", "--kernel", "twist:xi"],
        vec!["compute", "gale", "--example", "nonexistent"],
        vec!["verify"],
    ] {
        assert_eq!(toricmono(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failing_wall_condition_is_reported() {
    let o = toricmono(&["compute", "monodromy", "--example", "octic-11222", "--loop", "edge"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_quintic_json() {
    let o = toricmono(&["verify", "--example", "quintic", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 6);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn verify_all_passes() {
    let o = toricmono(&["verify", "--all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn corruption_fails_verification() {
    let o = toricmono(&["verify", "--example", "quintic", "--corrupt-todd", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["edge_diagonal_ideal", "kernel_diagonal_ideal"]);
}

#[test]
fn config_adds_examples() {
    let cfg = temp_config(
        r#"
schema_version = 1
[[example]]
name = "quadric-quartic"
kind = "one_param"
weights = [1, 1, 1, 1, 1, 1]
degrees = [2, 4]
partition = [0, 0, 1, 1, 1, 1]
"#,
    );
    let path = cfg.path().to_str().unwrap();
    let o = toricmono(&["--config", path, "list"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l.starts_with("quadric-quartic")));
    let o = toricmono(&["--config", path, "verify", "--example", "quadric-quartic"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn empty_config_keeps_builtins() {
    let cfg = temp_config("schema_version = 1\n");
    let with = toricmono(&["--config", cfg.path().to_str().unwrap(), "list"]);
    assert_eq!(with.stdout, toricmono(&["list"]).stdout);
}

#[test]
fn malformed_config_names_the_field() {
    let cfg = temp_config("schema_version = 1\n[output]\nformat = \"xml\"\n");
    let o = toricmono(&["--config", cfg.path().to_str().unwrap(), "list"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("format"), "{err}");
    assert!(err.contains("line"), "{err}");
}

#[test]
fn config_can_select_json() {
    let cfg = temp_config("schema_version = 1\n[output]\nformat = \"json\"\n");
    let o = toricmono(&["--config", cfg.path().to_str().unwrap(), "list"]);
    assert!(json(&o).as_array().unwrap().len() >= 7);
}
