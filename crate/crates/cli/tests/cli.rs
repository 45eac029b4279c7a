use assert_cmd::Command;
use serde_json::Value;

fn sl3k() -> Command {
    let mut c = Command::cargo_bin("sl3k").unwrap();
    c.env_remove("SL3K_JOBS");
    c
}

fn json_out(args: &[&str]) -> Value {
    let out = sl3k().args(args).assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).unwrap()
}

fn lines(args: &[&str]) -> Vec<Value> {
    let out = sl3k().args(args).assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn sum_examples() {
    let v = json_out(&["sum", "coarse", "--m", "1,1", "--n", "1,1", "--c", "5,5"]);
    assert_eq!(v["value"], 6);
    assert_eq!(v["approx"][0].as_f64().unwrap(), 6.0);
    assert_eq!(json_out(&["sum", "classical", "--m", "0", "--n", "6", "--c", "6"])["value"], 2);
    let fine = ["sum", "fine", "--m", "1,3", "--n", "1,3", "--d1", "3", "--d2", "1", "--f", "3"];
    assert_eq!(json_out(&fine)["value"], -6);
    let mut oracle = fine.to_vec();
    oracle.push("--oracle");
    assert_eq!(json_out(&oracle)["value"], -6);
}

#[test]
fn negative_characters_parse() {
    let v = json_out(&["sum", "coarse", "--m", "-1,2", "--n", "1,-2", "--c", "3,3"]);
    let w = json_out(&["sum", "coarse", "--m", "-1,2", "--n", "1,-2", "--c", "3,3", "--oracle"]);
    assert_eq!(v["value"], w["value"]);
}

#[test]
fn exact_output_round_trips() {
    let v = json_out(&["--exact", "sum", "hyper-ab", "--m", "1", "--n", "1,1", "--d1", "2", "--d2", "3", "--policy", "ignore"]);
    let exact: sl3_kloosterman::CycSum = serde_json::from_value(v["exact"].clone()).unwrap();
    let (z, _) = exact.to_complex();
    assert!((z.re - v["approx"][0].as_f64().unwrap()).abs() < 1e-12);
    assert!((z.im - v["approx"][1].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn enumerate_counts() {
    assert_eq!(lines(&["enumerate", "stratum", "--d1", "2", "--d2", "2", "--f", "1"]).len(), 1);
    assert_eq!(lines(&["enumerate", "cosets", "--c", "2,2"]).len(), 3);
    assert_eq!(lines(&["enumerate", "plucker", "--c", "2,2"]).len(), 3);
    assert!(lines(&["enumerate", "plucker", "--c", "2,2", "--naive"]).len() > 3);
    let terms = lines(&["enumerate", "kuznetsov-indices", "--N", "2", "--m", "1,1", "--n", "1,1", "--cutoff", "6"]);
    let sigma6: Vec<&Value> = terms.iter().filter(|t| t["term"] == "Sigma6").collect();
    assert!(!sigma6.is_empty());
    assert!(sigma6.iter().all(|t| t["moduli"][2].as_i64().unwrap() % 2 == 0));
}

#[test]
fn verify_exit_codes() {
    sl3k().args(["verify", "plucker-collision"]).assert().code(0);
    sl3k().args(["verify", "divisor", "--s", "2,2", "--nmax", "12", "--D", "2000", "--tol", "1e-3"]).assert().code(0);
    sl3k().args(["verify", "oracle", "--cmax", "4", "--charmax", "1"]).assert().code(0);
    sl3k().args(["verify", "level", "--cmax", "6", "--charmax", "1"]).assert().code(0);
    sl3k().args(["verify", "count", "--cmax", "8"]).assert().code(0);
    sl3k().args(["verify", "hecke", "--seed", "3"]).assert().code(0);
    let out = sl3k().args(["verify", "bounds", "--cmax", "7", "--charmax", "2"]).assert().code(1).get_output().stdout.clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["pass"], false);
    assert_eq!(v["counterexample"]["c"], serde_json::json!([1, 7]));
    sl3k().args(["verify", "bounds", "--cmax", "7", "--charmax", "2", "--nonzero"]).assert().code(0);
}

#[test]
fn usage_errors_exit_2() {
    sl3k().args(["sum", "coarse", "--m", "1", "--n", "1,1", "--c", "5,5"]).assert().code(2);
    sl3k().args(["sum", "coarse", "--m", "1,1", "--n", "1,1", "--c", "0,5"]).assert().code(2);
    sl3k().args(["sum", "hyper-ab", "--m", "1", "--n", "1,1", "--d1", "2", "--d2", "3"]).assert().code(2);
    sl3k().args(["verify", "oracle", "--cmax", "0"]).assert().code(2);
    sl3k().args(["nonsense"]).assert().code(2);
}

#[test]
fn table_is_deterministic_across_jobs() {
    let run = |jobs: &str| {
        sl3k().args(["--jobs", jobs, "table", "--cmax", "4", "--charmax", "1"]).assert().success().get_output().stdout.clone()
    };
    let a = run("1");
    assert_eq!(a, run("2"));
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("c,m1,m2,n1,n2,value"));
    assert_eq!(text.lines().count(), 1 + 16 * 81);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.toml");
    std::fs::write(&path, "cmax = 2\ncharmax = 0\nformat = \"json\"\n").unwrap();
    let out = sl3k().args(["--config", path.to_str().unwrap(), "table"]).assert().success().get_output().stdout.clone();
    assert_eq!(String::from_utf8(out).unwrap().lines().count(), 4);
    std::fs::write(&path, "cmax = -1\n").unwrap();
    sl3k().args(["--config", path.to_str().unwrap(), "table"]).assert().code(2);
    std::fs::write(&path, "colour = 3\n").unwrap();
    sl3k().args(["--config", path.to_str().unwrap(), "table"]).assert().code(2);
}

#[test]
fn jobs_from_environment() {
    let out = sl3k()
        .env("SL3K_JOBS", "1")
        .args(["table", "fine", "--d1", "1,2", "--d2", "2", "--f", "2", "--charmax", "0", "--format", "json"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    assert_eq!(String::from_utf8(out).unwrap().lines().count(), 2);
}
