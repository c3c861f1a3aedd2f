use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hyperlat_core::catalog::get_module;
use hyperlat_core::lattice;
use hyperlat_core::ribbon::{module_gram, BasisChoice};
use hyperlat_core::theta::theta_coefficients;
use num_bigint::BigInt;
use serde_json::Value;

fn hyperlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlat"))
        .args(args)
        .env_remove("HYPERLAT_DATA_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data")
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hyperlat-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn big_strings(v: &Value) -> Vec<BigInt> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().parse().unwrap()).collect()
}

#[test]
fn list_is_the_default() {
    let plain = hyperlat(&[]);
    let listed = hyperlat(&["list"]);
    assert!(plain.status.success());
    assert_eq!(stdout(&plain), stdout(&listed));
    let text = stdout(&plain);
    assert!(text.contains("A 3 → r_E=10, 𝔯=20"), "{text}");
    assert!(text.contains("E5 5 → r_E=12"), "{text}");
}

#[test]
fn gram_text_for_a1() {
    let o = hyperlat(&["gram", "--module", "A", "--level", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().take_while(|l| !l.starts_with("det")).count(), 6);
    assert!(text.contains("det = 4096"));
    assert!(text.contains("snf = 2,4,4,4,4,8"));
}

#[test]
fn gram_json_round_trips() {
    let o = hyperlat(&["gram", "--module", "A", "--level", "2", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows: Vec<Vec<BigInt>> = v["gram"].as_array().unwrap().iter().map(big_strings).collect();
    let expected = module_gram(&get_module("A", 2).unwrap(), BasisChoice::B1).unwrap();
    assert_eq!(rows.len(), 12);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.as_slice(), expected.row(i));
    }
    let det: BigInt = v["determinant"].as_str().unwrap().parse().unwrap();
    assert_eq!(det, BigInt::from(5).pow(9));
    let inv = lattice::invariants(&expected).unwrap();
    assert_eq!(big_strings(&v["elementary_divisors"]), inv.elementary_divisors);
    assert_eq!(v["modular_level"], "25");
}

#[test]
fn gram_csv_and_other_bases() {
    for basis in ["B2", "B3"] {
        let o = hyperlat(&["gram", "--module", "A", "--level", "2", "--basis", basis, "--format", "csv"]);
        assert!(o.status.success(), "{}", stderr(&o));
        let text = stdout(&o);
        assert_eq!(text.lines().count(), 12);
        assert!(text.lines().all(|l| l.split(',').count() == 12));
    }
    let o = hyperlat(&["gram", "--module", "A", "--level", "1", "--basis", "B3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("singular"), "{}", stderr(&o));
    let o = hyperlat(&["gram", "--module", "D", "--level", "3", "--basis", "B3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sublattice"), "{}", stderr(&o));
}

#[test]
fn domain_errors_exit_2() {
    let o = hyperlat(&["gram", "--module", "D", "--level", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no module D at level 4"));
    assert_eq!(hyperlat(&["theta", "--module", "X", "--level", "1"]).status.code(), Some(2));
    assert_eq!(hyperlat(&["gram", "--module", "A"]).status.code(), Some(2));
    assert_eq!(hyperlat(&["gram", "--module", "A", "--level", "1", "--basis", "B9"]).status.code(), Some(2));
}

#[test]
fn theta_lists() {
    let o = hyperlat(&["theta", "--module", "A", "--level", "2", "--max-coeff", "10"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1,0,0,100,450,960,2800,6600,12300,22400,30690\n");
    let o = hyperlat(&["theta", "--module", "E9", "--level", "9", "--max-coeff", "4"]);
    assert_eq!(stdout(&o), "1,0,756,5760,98928\n");
    let o = hyperlat(&["theta", "--module", "A", "--level", "3", "--max-coeff", "0"]);
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn theta_default_length_and_warning() {
    let o = hyperlat(&["theta", "--module", "D", "--level", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim().split(',').count(), 10);
    assert!(stderr(&o).is_empty());
    let o = hyperlat(&["theta", "--module", "D", "--level", "3", "--max-coeff", "10"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn theta_json_and_csv_round_trip() {
    let expected = theta_coefficients(&module_gram(&get_module("A", 1).unwrap(), BasisChoice::B1).unwrap(), 12, 1)
        .unwrap()
        .coefficients;
    let o = hyperlat(&["theta", "--module", "A", "--level", "1", "--max-coeff", "12", "--threads", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(big_strings(&v["coefficients"]), expected);
    assert_eq!(v["max_coeff"], 12);
    let o = hyperlat(&["theta", "--module", "A", "--level", "1", "--max-coeff", "12", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,coefficient"));
    for (i, line) in lines.enumerate() {
        let (idx, c) = line.split_once(',').unwrap();
        assert_eq!(idx.parse::<usize>().unwrap(), i);
        assert_eq!(c.parse::<BigInt>().unwrap(), expected[i]);
    }
}

#[test]
fn verify_filters_by_module() {
    let o = hyperlat(&["verify", "--suite", "fast", "--module", "A", "--level", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    let checks: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|l| l.starts_with("PASS") && l.contains("/A1")), "{text}");
}

#[test]
fn verify_usage_errors() {
    assert_eq!(hyperlat(&["verify", "--module", "A"]).status.code(), Some(2));
    assert_eq!(hyperlat(&["verify", "--suite", "slow"]).status.code(), Some(2));
    assert_eq!(hyperlat(&["verify", "--module", "Q", "--level", "1"]).status.code(), Some(2));
}

#[test]
fn verify_fails_on_tampered_data() {
    let dir = scratch_dir("tamper");
    for f in ["D3", "D6", "E5", "E9", "E21"] {
        std::fs::copy(data_dir().join(format!("{f}.txt")), dir.join(format!("{f}.txt"))).unwrap();
    }
    // Swap two triality labels: the file still parses but no longer grades the graph.
    let path = dir.join("D3.txt");
    let text = std::fs::read_to_string(&path).unwrap();
    let tampered: String = text
        .lines()
        .map(|l| {
            if let Some(rest) = l.strip_prefix("triality:") {
                let mut t: Vec<&str> = rest.split_whitespace().collect();
                let j = (1..t.len()).find(|&j| t[j] != t[0]).unwrap();
                t.swap(0, j);
                format!("triality: {}\n", t.join(" "))
            } else {
                format!("{l}\n")
            }
        })
        .collect();
    std::fs::write(&path, tampered).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hyperlat"))
        .args(["verify", "--suite", "fast", "--module", "D", "--level", "3"])
        .env("HYPERLAT_DATA_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains("invariants/D3")), "{text}");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn validate_bundled_e5() {
    let o = hyperlat(&["validate-module", data_dir().join("E5.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("PASS E5"), "{text}");
    assert!(text.contains("2^30"), "{text}");
}

#[test]
fn validate_reports_parse_errors_with_lines() {
    let dir = scratch_dir("parse");
    let full = std::fs::read_to_string(data_dir().join("E5.txt")).unwrap();
    let truncated: String = full.lines().take(10).map(|l| format!("{l}\n")).collect();
    let path = dir.join("truncated.txt");
    std::fs::write(&path, truncated).unwrap();
    let o = hyperlat(&["validate-module", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 11"), "{}", stderr(&o));

    let short: String = full
        .lines()
        .map(|l| if l.starts_with("triality:") { format!("{} 0\n", l) } else { format!("{l}\n") })
        .collect();
    let path = dir.join("triality.txt");
    std::fs::write(&path, short).unwrap();
    let o = hyperlat(&["validate-module", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("trialities"), "{}", stderr(&o));

    let o = hyperlat(&["validate-module", dir.join("missing.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn validate_reports_invariant_failures() {
    let dir = scratch_dir("invalid");
    // A2 at level 1 has the wrong number of vertices for the fusion recursion.
    let text = "name: bad\nlevel: 1\nrank: 3\ntriality: 0 1 2\nadjacency:\n0 1 0\n0 0 1\n1 0 1\n";
    let path = dir.join("bad.txt");
    std::fs::write(&path, text).unwrap();
    let o = hyperlat(&["validate-module", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).starts_with("FAIL bad"));
    std::fs::remove_dir_all(dir).ok();
}
