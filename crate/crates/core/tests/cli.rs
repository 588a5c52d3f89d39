use std::path::Path;

use serde_json::Value;
use superbider::cli::run;

fn args(list: &[&str]) -> Vec<String> {
    std::iter::once("superbider").chain(list.iter().copied()).chain(["--quiet"]).map(String::from).collect()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn info_reports_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h5.json");
    assert_eq!(run(args(&["info", "--family", "H", "--n", "5", "--out", out.to_str().unwrap()])), 0);
    let r = report(&out);
    assert_eq!(r["dimensions"]["dim"], 30);
    assert_eq!(r["dimensions"]["lprime_dim"], 32);
    assert_eq!(r["dimensions"]["top_degree"], 2);
    assert_eq!(r["verdict"], "verified");
    assert_eq!(r["schema_version"], 1);
    assert!(r.get("timings").is_none());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(args(&["bder", "--family", "Stilde", "--n", "5"])), 2);
    assert_eq!(run(args(&["bder", "--family", "H", "--n", "3"])), 2);
    assert_eq!(run(args(&["bder", "--family", "X", "--n", "4"])), 2);
    assert_eq!(run(args(&["der", "--family", "W", "--n", "3", "--field", "modp", "--prime", "91"])), 2);
    assert_eq!(run(args(&["der"])), 2);
}

#[test]
fn w4_modular_biderivations_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w4.json");
    assert_eq!(run(args(&["bder", "--family", "W", "--n", "4", "--field", "modp", "--out", out.to_str().unwrap()])), 0);
    let r = report(&out);
    let b = &r["biderivations"];
    assert_eq!(b["parities"][0]["total_nullity"], 1);
    assert_eq!(b["parities"][1]["total_nullity"], 0);
    assert_eq!(b["certificate"]["valid"], true);
    assert_eq!(r["field"]["kind"], "prime");
    // totals agree with the block table
    for p in b["parities"].as_array().unwrap() {
        let sum: u64 = p["blocks"].as_array().unwrap().iter().map(|x| x["nullity"].as_u64().unwrap()).sum();
        assert_eq!(p["total_nullity"].as_u64().unwrap(), sum);
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("r{i}.json"))).collect();
    for p in &paths {
        assert_eq!(run(args(&["all", "--family", "W", "--n", "3", "--seed", "5", "--out", p.to_str().unwrap()])), 0);
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
}

#[test]
fn perturbed_table_fails_and_clean_table_passes() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("s4.txt");
    let t = table.to_str().unwrap();
    assert_eq!(run(args(&["export", "--family", "S", "--n", "4", "--out", t])), 0);
    assert_eq!(run(args(&["bder", "--table", t])), 0);

    // double one constant and its skew partner: the table stays well formed
    let text = std::fs::read_to_string(&table).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let start = lines.iter().position(|l| l == "constants").unwrap() + 1;
    let first: Vec<i64> = lines[start].split_whitespace().map(|x| x.parse().unwrap()).collect();
    for l in lines.iter_mut().skip(start) {
        let v: Vec<i64> = match l.split_whitespace().map(|x| x.parse::<i64>()).collect::<Result<Vec<_>, _>>() {
            Ok(v) if v.len() == 5 => v,
            _ => continue,
        };
        let same = v[..3] == first[..3] || (v[0] == first[1] && v[1] == first[0] && v[2] == first[2]);
        if same {
            *l = format!("{} {} {} {} {}", v[0], v[1], v[2], 2 * v[3], v[4]);
        }
    }
    std::fs::write(&table, lines.join("\n") + "\n").unwrap();
    let out = dir.path().join("bad.json");
    assert_eq!(run(args(&["bder", "--table", t, "--out", out.to_str().unwrap()])), 1);
    let r = report(&out);
    assert_eq!(r["verdict"], "failed");
    assert_eq!(r["biderivations"]["bracket_is_solution"], false);
    let jacobi_failed = r["checks"].as_array().unwrap().iter().any(|c| c["name"] == "super-jacobi" && c["passed"] == false);
    assert!(jacobi_failed);
}

#[test]
fn malformed_skew_table_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("w2.txt");
    let t = table.to_str().unwrap();
    assert_eq!(run(args(&["export", "--family", "W", "--n", "2", "--out", t])), 0);
    let text = std::fs::read_to_string(&table).unwrap();
    // change one constant without its partner
    let broken = text.replacen("\n0 2 0 1 1\n", "\n0 2 0 5 1\n", 1);
    assert_ne!(broken, text);
    std::fs::write(&table, broken).unwrap();
    assert_eq!(run(args(&["jacobi", "--table", t])), 1);
}

#[test]
fn row_limit_marks_the_run_incomplete() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h5.json");
    assert_eq!(run(args(&["bder", "--family", "H", "--n", "5", "--block-limit", "2", "--out", out.to_str().unwrap()])), 3);
    let r = report(&out);
    assert_eq!(r["verdict"], "incomplete");
    assert_eq!(r["complete"], false);
    let limited = r["biderivations"]["parities"][0]["blocks"].as_array().unwrap().iter().any(|b| b["status"] == "limit_exceeded");
    assert!(limited);
}

#[test]
fn timings_only_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    assert_eq!(run(args(&["jacobi", "--family", "W", "--n", "2", "--timings", "--out", out.to_str().unwrap()])), 0);
    assert!(report(&out)["timings"].is_array());
}
