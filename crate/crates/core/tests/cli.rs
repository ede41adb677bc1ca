use std::process::{Command, Output};

fn mularith(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mularith")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = mularith(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn eval_examples() {
    assert_eq!(json(&["eval", "sigma_r", "3", "3"])["value"], "6");
    assert_eq!(json(&["eval", "dir(one, one)", "4", "6"])["value"], "12");
    assert_eq!(json(&["eval", "delta", "1", "1"])["value"], "1");
}

#[test]
fn eval_reports_parse_position() {
    let o = mularith(&["eval", "dir(one,, one)", "2", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 8"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn arity_mismatch_is_a_usage_error() {
    assert_eq!(mularith(&["eval", "s", "1", "2", "3"]).status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let ok = mularith(&["verify", "lcm-via-dirichlet", "--box", "20"]);
    assert_eq!(ok.status.code(), Some(0));
    let h = mularith(&["verify", "ramanujan-lcm-convolute", "--box", "1000"]);
    assert_eq!(h.status.code(), Some(0));
    let bad = mularith(&["verify", "tau", "sigma", "--box", "10"]);
    assert_eq!(bad.status.code(), Some(1));
    let rep: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(rep["counterexample"]["args"], serde_json::json!([2]));
    assert_eq!(mularith(&["verify", "no-such-identity"]).status.code(), Some(2));
}

#[test]
fn density_example() {
    let rep = json(&["density", "pairwise-coprime", "-r", "2", "-P", "1e6", "-B", "2000"]);
    let a: f64 = rep["analytic"]["value"].as_str().unwrap().parse().unwrap();
    assert!((a - 0.607927).abs() < 1e-6);
    assert!(rep["gap"].as_f64().unwrap().abs() < 0.01);
}

#[test]
fn table_example() {
    let o = mularith(&["table", "gcd2", "--xs", "100,500,2000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), ["x", "exact", "main_term", "rel_dev"]);
    let devs: Vec<f64> = rd.records().map(|r| r.unwrap()[3].parse::<f64>().unwrap().abs()).collect();
    assert_eq!(devs.len(), 3);
    assert!(devs.windows(2).all(|w| w[1] < w[0]), "{devs:?}");
}

#[test]
fn search_perfect_example() {
    let v = json(&["search-perfect", "-r", "2", "-B", "10"]);
    assert!(v.as_array().unwrap().contains(&serde_json::json!([3, 3])));
}

#[test]
fn bell_dirichlet_convolve_convolute() {
    let b = json(&["bell", "gcd", "-r", "2", "-p", "3", "--degree", "2"]);
    assert_eq!(b["p"], 3);
    let d = json(&["dirichlet", "gcd", "--z", "2,2", "-P", "1e4"]);
    assert!(d["value"].as_str().unwrap().starts_with("3.00514225"));
    assert_eq!(json(&["convolve", "unit", "phi", "sigma", "12"])["value"], "54");
    assert_eq!(json(&["convolute", "lcm", "gcd", "-r", "2", "12"])["value"], "50");
    let mv = json(&["mean-value", "gcd", "-r", "3", "-P", "1e4"]);
    assert!(mv["value"].as_str().unwrap().starts_with("1.36843"));
}

#[test]
fn divergence_exit_code() {
    assert_eq!(mularith(&["dirichlet", "one", "--z", "1"]).status.code(), Some(3));
    assert_eq!(mularith(&["mean-value", "gcd", "-r", "2"]).status.code(), Some(3));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(mularith(&["table", "gcd2", "--xs", "ten"]).status.code(), Some(2));
    assert_eq!(mularith(&["density", "pairwise-coprime", "--precision", "0"]).status.code(), Some(2));
    assert_eq!(mularith(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["dirichlet", "s", "--z", "2,3", "-P", "20000", "--threads", "3"];
    assert_eq!(mularith(&args).stdout, mularith(&["dirichlet", "s", "--z", "2,3", "-P", "20000", "--threads", "1"]).stdout);
}
