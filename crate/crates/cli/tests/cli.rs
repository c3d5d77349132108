use std::process::{Command, Output};

use serde_json::Value;

fn lattes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lattes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = lattes(args);
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn code(args: &[&str]) -> i32 {
    lattes(args).status.code().expect("exit code")
}

fn strings(v: &Value) -> Vec<&str> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap())
        .collect()
}

#[test]
fn doubling_map_on_x3_plus_1() {
    let v = json(&["lattes", "--curve", "0,0,0,0,1", "--m", "2"]);
    assert_eq!(v["command"], "lattes");
    assert_eq!(v["config"]["m"], 2);
    let r = &v["result"];
    assert_eq!(r["degree"], 4);
    assert_eq!(strings(&r["numerator"]), ["0", "-8", "0", "0", "1"]);
    assert_eq!(strings(&r["denominator"]), ["4", "0", "0", "4"]);
}

#[test]
fn negative_multiplier_gives_same_map() {
    let a = json(&["lattes", "--curve", "x3p1", "--m", "2"]);
    let b = json(&["lattes", "--curve", "x3p1", "--m", "-2"]);
    assert_eq!(a["result"]["numerator"], b["result"]["numerator"]);
    assert_eq!(a["result"]["denominator"], b["result"]["denominator"]);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["lattes", "--curve", "x3p1", "--m", "1"]), 2);
    assert_eq!(code(&["lattes", "--curve", "x3p1", "--m", "2", "--bogus"]), 2);
    assert_eq!(code(&["height", "--curve", "x3p1", "--m", "2", "--point", "1/0/3"]), 2);
    assert_eq!(code(&["lattes", "--curve", "nope", "--m", "2"]), 2);
}

#[test]
fn singular_curve_exits_3() {
    assert_eq!(code(&["lattes", "--curve", "0,0,0,0,0", "--m", "2"]), 3);
}

#[test]
fn heights_of_torsion_and_wandering_points() {
    let v = json(&[
        "height", "--curve", "x3p1", "--m", "2", "--point", "2,1,inf,-1",
    ]);
    let rows = v["result"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let val = |i: usize| rows[i]["value"].as_f64().unwrap();
    assert!(val(0) <= 1e-6);
    assert_eq!(rows[0]["preperiodic"], true);
    assert!(val(1) > 0.01);
    assert_eq!(rows[1]["preperiodic"], false);
    assert_eq!(val(2), 0.0);
    assert!(val(3) <= 1e-6);
    for r in rows {
        assert_eq!(r["converged"], true);
        assert!(r["error_bound"].as_f64().unwrap() <= 1e-6);
    }
}

#[test]
fn height_budget_exhaustion_exits_4_with_report() {
    let out = lattes(&[
        "height", "--curve", "x3p1", "--m", "2", "--point", "1/7", "--bit-budget", "64",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"][0]["converged"], false);
}

#[test]
fn preperiodic_orbit_data() {
    let v = json(&[
        "preperiodic", "--curve", "x3p1", "--m", "2", "--point", "2,1/4",
    ]);
    let rows = v["result"].as_array().unwrap();
    assert_eq!(rows[0]["status"], "preperiodic");
    assert_eq!(rows[0]["tail"], 1);
    assert_eq!(rows[0]["cycle"], 1);
    assert_eq!(rows[1]["status"], "wandering");
    let h = rows[1]["certificate_height"].as_f64().unwrap();
    assert!(h > rows[1]["threshold"].as_f64().unwrap());
}

#[test]
fn skeleton_values_on_tate6() {
    let v = json(&["skeleton", "--curve", "tate6", "--p", "3", "--t", "1/3,1/2,4/5"]);
    assert_eq!(v["result"]["q"]["valuation"], 1);
    let rows = v["result"]["rows"].as_array().unwrap();
    let vals: Vec<&str> = rows.iter().map(|r| r["val"].as_str().unwrap()).collect();
    assert_eq!(vals, ["1/3", "1/2", "1/5"]);
    assert!(rows.iter().all(|r| r["on_tent"] == true));
    assert_eq!(rows[0]["in_value_group"], false);
}

#[test]
fn skeleton_rejects_t_off_the_circle() {
    assert_eq!(code(&["skeleton", "--curve", "tate6", "--p", "3", "--t", "3/2"]), 3);
    assert_eq!(code(&["skeleton", "--curve", "tate6", "--p", "3", "--t", "0"]), 3);
}

#[test]
fn skeleton_needs_multiplicative_reduction() {
    assert_eq!(code(&["skeleton", "--curve", "x3p1", "--p", "5", "--t", "1/2"]), 3);
}

#[test]
fn q_from_j_accepts_negative_rationals() {
    let v = json(&["q-from-j", "--j", "-1/15558", "--p", "3", "--precision", "20"]);
    assert_eq!(v["result"]["valuation"], 1);
    assert_eq!(v["result"]["j"], "-1/15558");
}

#[test]
fn tate_verify_residuals() {
    let v = json(&[
        "tate-verify", "--curve", "tate6", "--p", "3", "--zeta", "2,-1,4,5,7",
    ]);
    for row in v["result"]["rows"].as_array().unwrap() {
        assert!(row["residual_valuation"].as_i64().unwrap() >= 35, "{row}");
    }
}

#[test]
fn tower_ratios_and_certificates() {
    let v = json(&[
        "tower", "--curve", "x3m2", "--m", "2", "--p", "7", "--q0", "3", "--depth", "2",
    ]);
    let levels = v["result"]["levels"].as_array().unwrap();
    let ratios: Vec<&str> = levels
        .iter()
        .map(|l| l["canonical_height_ratio"].as_str().unwrap())
        .collect();
    assert_eq!(ratios, ["1/1", "1/4", "1/16"]);
    let degrees: Vec<u64> = levels.iter().map(|l| l["degree"].as_u64().unwrap()).collect();
    assert_eq!(degrees, [1, 4, 16]);
    for l in levels {
        assert_eq!(l["unramified_at_p"], "certified");
        assert!(l["residual"].as_f64().unwrap() < 1e-6);
        for s in strings(&l["spectrum"]) {
            assert!(s.ends_with("/1"), "{s}");
        }
    }
}

#[test]
fn tower_preconditions_exit_3() {
    let base = ["tower", "--curve", "x3m2", "--m", "2", "--q0", "3"];
    let with = |extra: &[&str]| {
        let mut a: Vec<&str> = base.to_vec();
        a.extend_from_slice(extra);
        code(&a)
    };
    // bad reduction
    assert_eq!(with(&["--p", "3"]), 3);
    // p divides m
    assert_eq!(with(&["--p", "2"]), 3);
    // depth beyond the supported range
    assert_eq!(with(&["--p", "7", "--depth", "9"]), 3);
    // preperiodic q0
    assert_eq!(
        code(&["tower", "--curve", "x3p1", "--m", "2", "--p", "5", "--q0", "2"]),
        3
    );
}

#[test]
fn spectrum_negative_control() {
    let v = json(&["spectrum", "--poly", "-3,0,1", "--p", "3"]);
    let entries = v["result"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["valuation"], "1/2");
    assert_eq!(entries[0]["multiplicity"], 2);
    assert_eq!(entries[0]["member"], false);
    let v = json(&["spectrum", "--poly", "-3,0,1", "--p", "3", "--e", "2"]);
    assert_eq!(v["result"]["entries"][0]["member"], true);
}

#[test]
fn csv_output_has_header_and_rows() {
    let out = lattes(&[
        "--output", "csv", "height", "--curve", "x3p1", "--m", "2", "--point", "2,1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("point,value,error_bound"));
    assert!(lines[1].starts_with("2,"));
}

#[test]
fn jobs_do_not_change_output() {
    let args = |j: &'static str| {
        [
            "--jobs", j, "height", "--curve", "x3px", "--m", "3", "--point",
            "1,2,1/3,-5/2,7,inf",
        ]
    };
    let one = json(&args("1"));
    let four = json(&args("4"));
    assert_eq!(one["result"], four["result"]);
}
