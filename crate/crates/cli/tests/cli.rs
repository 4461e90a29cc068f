use std::process::{Command, Output};

use cusptaylor::cmdata::{normalization, registry};
use cusptaylor::numerics::SeriesContext;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cusptaylor")).args(args).env_remove("CUSPTAYLOR_BUDGET_MS").output().unwrap()
}

fn lines(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn certify_with_expectation() {
    let o = run(&["certify", "--disc", "-7", "--prime", "23", "--expect", "nonzero"]);
    assert_eq!(o.status.code(), Some(0));
    let v = lines(&o);
    assert!(v[0].get("config").is_some());
    let c = &v[1];
    assert_eq!(c["verdict"], "ALL_NONZERO");
    assert_eq!(c["shortcut"]["unit"], serde_json::json!([8, 0]));
    assert!(c["wall_time_ms"].is_null());

    let o = run(&["certify", "--disc", "-4", "--prime", "7", "--expect", "nonzero"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(lines(&o).last().unwrap()["error"]["kind"], "verification");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "--disc", "-5", "--prime", "7"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "--disc", "-7", "--prime", "9"]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--m", "2"]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_is_reported() {
    let o = run(&["--max-steps", "100", "certify", "--disc", "-15", "--prime", "83"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(lines(&o).last().unwrap()["error"]["kind"], "budget");
}

#[test]
fn output_is_deterministic() {
    let a = run(&["scan-residue", "--disc", "-8", "--lmax", "60"]);
    let b = run(&["scan-residue", "--disc", "-8", "--lmax", "60"]);
    assert_eq!(a.stdout, b.stdout);
    let t = run(&["--timing", "certify", "--disc", "-8", "--prime", "17"]);
    assert!(lines(&t)[1]["wall_time_ms"].is_u64());
}

#[test]
fn residue_scan_follows_class_rule() {
    let o = run(&["scan-residue", "--disc", "-8", "--lmax", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let v = lines(&o);
    let rows: Vec<&Value> = v.iter().filter(|r| r.get("prime").is_some()).collect();
    assert!(rows.len() > 20);
    for r in rows {
        let l = r["prime"].as_u64().unwrap();
        assert_eq!(r["tends_to_zero"].as_bool().unwrap(), !matches!(l % 8, 1 | 3), "l = {l}");
    }
}

#[test]
fn coefficient_routes_at_i() {
    let o = run(&["coeff", "--x", "0", "--y", "1", "--m", "2", "--route", "all", "--disc", "-4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &lines(&o)[1];
    assert!(v["max_rel_disagreement"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["routes"].as_object().unwrap().len(), 3);
    // c_i(Δ,2) = κλ²p₂(0)/2! with p₂(0) = −12
    let n = normalization(&registry(-4).unwrap(), &SeriesContext::default()).unwrap();
    let want = (n.kappa * n.lambda * n.lambda * -12.0 / 2.0).re;
    let got = v["value"][0].as_f64().unwrap();
    assert!((got - want).abs() < 1e-10 * want.abs(), "{got} {want}");
}

#[test]
fn zeros_as_csv() {
    let o = run(&["zeros", "--m", "3", "--emit", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "m,kind,x,y,residual");
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().any(|r| {
        let f: Vec<&str> = r.split(',').collect();
        f[1] == "line_re0" && (f[3].parse::<f64>().unwrap() - 1.666).abs() < 5e-4
    }));
}

#[test]
fn avg_check_and_selftest() {
    let o = run(&[
        "avg-check",
        "--kind",
        "elliptic-elliptic",
        "--x0",
        "0",
        "--y0",
        "1.2",
        "--m",
        "1",
        "--n",
        "1",
        "--cmax",
        "30",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(lines(&o)[1]["rel_err"].as_f64().unwrap() < 1e-6);

    let o = run(&["selftest", "--only", "1,2,3,9", "--skip-petersson"]);
    assert_eq!(o.status.code(), Some(0));
    let v = lines(&o);
    assert!(v[1..].iter().all(|r| r["status"] == "PASS"));
    let o = run(&["selftest", "--only", "11", "--skip-petersson"]);
    assert_eq!(lines(&o)[1]["status"], "SKIPPED");
}

#[test]
fn table_lists_nine_points() {
    let v = lines(&run(&["table"]));
    assert_eq!(v.len(), 10);
    let d20 = v.iter().find(|r| r["disc"] == -20).unwrap();
    assert_eq!(d20["field"], "Q(sqrt5)");
    assert!(d20["omega"].as_f64().unwrap() > 0.0);
}
