use std::process::{Command, Output};

fn wallcross(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wallcross")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

#[test]
fn sod_lists_four_summands() {
    let o = wallcross(&["sod", "--d", "2", "--r", "1", "--a", "0", "--mu=-1+eps", "--mode", "open"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    let d_primes: Vec<u64> = lines
        .iter()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["d_prime"].as_u64().unwrap())
        .collect();
    assert_eq!(d_primes, [2, 1, 0, 0]);
    assert_eq!(lines[0], r#"{"d_prime":2,"parts":[]}"#);
}

#[test]
fn sod_is_deterministic() {
    let args = ["sod", "--d", "3", "--r", "2", "--a", "1", "--mu=-2+eps", "--mode", "open"];
    let first = wallcross(&args).stdout;
    assert!(!first.is_empty());
    assert_eq!(first, wallcross(&args).stdout);
}

#[test]
fn series_verify_passes() {
    let o = wallcross(&["series", "verify", "--r", "1", "--D", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["equal"], true);
    assert_eq!(v["dt"]["coeffs"][10], "500");
}

#[test]
fn series_table() {
    let o = wallcross(&["series", "dt", "--r", "2", "--D", "3", "--out", "table"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "d  dt\n-  --\n0   1\n1   2\n2   7\n3  18\n");
}

#[test]
fn poly_member_origin() {
    let o = wallcross(&["poly", "member", "--kind", "W", "--d", "1", "--point", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "feasible");
}

#[test]
fn poly_member_moving_point() {
    let o = wallcross(&["poly", "member", "--kind", "Wa", "--d", "1", "--a", "2", "--point", "-1", "--direction", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "feasible");
    let o = wallcross(&["poly", "member", "--kind", "Wa", "--d", "1", "--a", "2", "--point", "-1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "infeasible");
}

#[test]
fn decomp_single_and_sweep() {
    let o = wallcross(&["decomp", "--chi", "0,0", "--r", "1", "--a", "0", "--mu=-1+eps"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    let o = wallcross(&["decomp", "--d", "2", "--r", "1", "--a", "1", "--mu=1/5"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn quiver_and_grad() {
    let o = wallcross(&["quiver", "--kind", "triple_loop"]);
    assert_eq!(o.status.code(), Some(0));
    let q: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rep = serde_json::json!({
        "quiver": q,
        "dims": {"1": 1},
        "matrices": {"A": ["2"], "B": ["3"], "C": ["5"]}
    });
    let input = rep.to_string();
    let o = wallcross(&["grad", "--potential", "triple_loop", "--input", &input]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["trace"], "0");
    // Commuting scalars: every gradient vanishes.
    let o = wallcross(&["crit", "--potential", "triple_loop", "--input", &input]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["critical"], true);
}

#[test]
fn stab_reports_both_sides() {
    let input = r#"{"a":0,"r":1,"d":1,"arrows":[
        {"id":"A","role":"loop","entries":["0"]},
        {"id":"B","role":"loop","entries":["0"]},
        {"id":"C","role":"loop","entries":["0"]},
        {"id":"e1","role":"framing","entries":["1"]}]}"#;
    let o = wallcross(&["stab", "--input", input, "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dt"]["semistable"], true);
    assert_eq!(v["pt"]["semistable"], false);
    assert_eq!(v["consistent"], true);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(wallcross(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(wallcross(&["sod", "--d", "2"]).status.code(), Some(64));
    assert_eq!(wallcross(&["sod", "--d", "2", "--r", "1", "--a", "0", "--mu", "x"]).status.code(), Some(64));
    assert_eq!(wallcross(&["poly", "member", "--kind", "Q", "--d", "1", "--point", "0"]).status.code(), Some(64));
    assert_eq!(wallcross(&["--help"]).status.code(), Some(0));
}

#[test]
fn domain_errors_exit_1() {
    // 1/2 is not generic at d = 2.
    let o = wallcross(&["sod", "--d", "2", "--r", "1", "--a", "0", "--mu=1/2", "--mode", "open"]);
    assert_eq!(o.status.code(), Some(1));
    let o = wallcross(&["poly", "member", "--kind", "W", "--d", "2", "--point", "0"]);
    assert_eq!(o.status.code(), Some(1));
}
