use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lattperm")).args(args).output().expect("spawn lattperm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bad_side_lengths_exit_with_usage_error() {
    for l in ["2", "5"] {
        let o = run(&["dimer", "count", "--d", "2", "--L", l]);
        assert_eq!(o.status.code(), Some(2), "L = {l}");
        assert!(!o.stderr.is_empty());
    }
    let o = run(&["perm", "g", "--d", "1", "--L", "4", "--rho", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn counts_and_removed_sites() {
    let o = run(&["dimer", "count", "--d", "2", "--L", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "272");
    let o = run(&["dimer", "count", "--d", "2", "--L", "4", "--remove", "0,0", "--remove", "1,0", "--counter", "backtracking"]);
    assert_eq!(stdout(&o).trim(), "68");
}

#[test]
fn two_point_csv_is_exact_and_byte_identical() {
    let args = ["perm", "g", "--d", "1", "--L", "4", "--N", "2"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x_1,g_num,g_den"));
    assert!(lines.any(|l| l == "1,1,2"));
}

#[test]
fn worm_output_depends_only_on_seed() {
    let args = ["worm", "xi", "--d", "2", "--L", "6", "--sweeps", "400", "--therm", "20", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("lattperm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("il.json");
    let o = run(&["spec", "il", "--d", "3", "--L", "16", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((v["I_L"].as_f64().unwrap() - 0.2341).abs() < 1e-4);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_reports_follow_schema() {
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let required: Vec<&str> = schema["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let allowed = schema["properties"].as_object().unwrap();
    let o = run(&["verify", "criterion", "2", "--tier", "fast"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for rep in v.as_array().unwrap() {
        let obj = rep.as_object().unwrap();
        for k in &required {
            assert!(obj.contains_key(*k), "missing {k}");
        }
        for k in obj.keys() {
            assert!(allowed.contains_key(k), "unexpected {k}");
        }
        assert_eq!(rep["schema"], "lattperm.report/1");
        assert_eq!(rep["pass"], true);
    }
}

#[test]
fn fast_tier_passes() {
    let o = run(&["verify", "all", "--tier", "fast"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 13);
}

#[test]
fn failing_criterion_exits_nonzero() {
    let o = run(&["verify", "criterion", "13", "--tier", "full"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["pass"], false);
    assert!(v[0]["known_failure"].is_string());
}

#[test]
fn single_site_two_point_value() {
    let o = run(&["perm", "g", "--d", "2", "--L", "4", "--N", "2", "--x", "1,0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "x_1,x_2,g_num,g_den\n1,0,1,4\n");
    let o = run(&["perm", "g", "--d", "2", "--L", "4", "--x", "1,0,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oversized_exact_instances_are_refused() {
    let o = run(&["perm", "zf", "--d", "3", "--L", "4"]);
    assert_eq!(o.status.code(), Some(2));
}
