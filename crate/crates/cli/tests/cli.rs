use std::process::{Command, Output};

fn hyperalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperalg")).args(args).env_remove("HYPERALG_THREADS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn mul_e_f_in_a1() {
    let o = hyperalg(&["mul", "e[1]^(1)", "f[1]^(1)", "--type", "A1", "--p", "5", "--level", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "H(1,1) + f[1]^(1)*e[1]^(1)");
}

#[test]
fn normalize_unit_and_two_factor_product() {
    let o = hyperalg(&["normalize", "1", "--type", "A2", "--p", "3"]);
    assert_eq!(stdout(&o), "1");
    let o = hyperalg(&["normalize", "e[1]^(3)*e[0 1]^(1)", "--type", "A2", "--p", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    // re-normalizing the output reproduces it
    let again = hyperalg(&["normalize", &text, "--type", "A2", "--p", "3"]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn basis_of_plus_and_torus() {
    let o = hyperalg(&["basis", "--space", "plus", "--type", "A1", "--p", "3", "--depth", "1"]);
    assert_eq!(stdout(&o), "1\ne[1]^(1)\ne[1]^(2)");
    let o = hyperalg(&["basis", "--space", "torus", "--type", "A1", "--p", "2", "--depth", "1"]);
    assert_eq!(stdout(&o), "mu(0; 1)\nmu(1; 1)");
}

#[test]
fn parse_error_exits_nonzero() {
    let o = hyperalg(&["normalize", "e[1]^(", "--type", "A2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    let o = hyperalg(&["normalize", "e[5 5]", "--type", "A2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mu_both_forms() {
    let o = hyperalg(&["mu", "--lambda", "1 0", "--n", "1", "--type", "A2", "--p", "2", "--level", "1"]);
    assert_eq!(stdout(&o), "mu(1 0; 1)");
    let o = hyperalg(&["mu", "--lambda", "1", "--n", "1", "--form", "binomial", "--type", "A1", "--p", "2", "--level", "1"]);
    assert_eq!(stdout(&o), "H(1,1)");
}

#[test]
fn structconsts_g2_table() {
    let o = hyperalg(&["structconsts", "--type", "G2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let find = |l: [i64; 2], r: [i64; 2]| {
        v["brackets"]
            .as_array()
            .unwrap()
            .iter()
            .find(|b| b["left"] == serde_json::json!(l) && b["right"] == serde_json::json!(r))
            .map(|b| b["constant"].as_i64().unwrap())
    };
    assert_eq!(find([1, 0], [0, 1]), Some(1));
    assert_eq!(find([1, 0], [1, 1]), Some(2));
    assert_eq!(find([1, 0], [2, 1]), Some(3));
    assert_eq!(find([0, 1], [3, 1]), Some(1));
    assert_eq!(find([2, 1], [1, 1]), Some(3));
}

#[test]
fn frobenius_round_trip() {
    let o = hyperalg(&["frsplit", "e[1 1]^(1)", "--r", "1", "--type", "A2", "--p", "2"]);
    assert!(o.status.success());
    let split = stdout(&o);
    let back = hyperalg(&["fr", &split, "--type", "A2", "--p", "2"]);
    assert_eq!(stdout(&back), "e[1 1]^(1)");
}

#[test]
fn verify_writes_report_and_exit_code() {
    let dir = std::env::temp_dir().join(format!("hyperalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = hyperalg(&[
        "verify", "--statement", "plus-first", "--type", "A2", "--p", "2", "--r", "1", "--n", "1", "--out",
        path.to_str().unwrap(), "--threads", "1",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["bijective"], true);
    assert_eq!(v["source_dim"], 64);
    assert_eq!(v["rank"], 64);
    assert!(v["blocks"].as_array().unwrap().iter().all(|b| b["dim"] == b["rank"]));

    // a block cap below the largest block is an error, not a pass
    let o = hyperalg(&["verify", "--statement", "plus-first", "--type", "A2", "--p", "3", "--cap", "2"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_single_criterion() {
    let o = hyperalg(&["verify", "--criterion", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("[PASS] criterion  3"));
}

#[test]
fn unknown_statement_is_rejected() {
    let o = hyperalg(&["verify", "--statement", "plus-third", "--type", "A2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sabotage_flips_one_constant() {
    // root indices 0 and 2 in A2 are α1 and α2 in the convex order
    let normal = hyperalg(&["mul", "e[0 1]^(1)", "e[1]^(1)", "--type", "A2", "--p", "3"]);
    let bad = hyperalg(&["mul", "e[0 1]^(1)", "e[1]^(1)", "--type", "A2", "--p", "3", "--sabotage", "0,2"]);
    assert!(normal.status.success() && bad.status.success());
    assert_eq!(stdout(&normal), "2*e[1 1]^(1) + e[1 0]^(1)*e[0 1]^(1)");
    assert_eq!(stdout(&bad), "e[1 1]^(1) + e[1 0]^(1)*e[0 1]^(1)");
    // a pair whose sum is not a root cannot be sabotaged
    let o = hyperalg(&["mul", "1", "1", "--type", "A2", "--sabotage", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
}
