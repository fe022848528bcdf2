use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_amalgrade"))
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("amalgrade-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn corpus_file(stem: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{stem}.amg"))
}

#[test]
fn bundled_instance_exits_zero() {
    let out = bin().arg("run").arg(corpus_file("non_cm_inclusion")).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("counterexample"));
}

#[test]
fn wrong_expectation_exits_two() {
    let p = scratch("wrong.amg", "name \"wrong\"; ring A = QQ[x]; ideal I in A = (x); amalgam R = duplication(A, I);\nfamily M over R = maximal; check cm(R, M) expect counterexample;");
    assert_eq!(bin().arg("run").arg(&p).output().unwrap().status.code(), Some(2));
}

#[test]
fn parse_error_exits_four() {
    let p = scratch("broken.amg", "ring A = QQ[x];\nideal I in B = (x);");
    let out = bin().arg("run").arg(&p).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stdout).contains("2:12"));
}

#[test]
fn exhausted_budget_exits_three() {
    let out = bin().args(["run", "--budget", "2"]).arg(corpus_file("dup_plane_max")).output().unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stdout));
    let out = bin().arg("run").arg(corpus_file("dup_plane_max")).env("AMALGRADE_BUDGET", "2").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn json_report_shape() {
    let json = scratch("report.json", "");
    let out = bin().args(["run", "--seed", "7", "--field", "fp:32003", "--json"]).arg(&json).arg(corpus_file("dup_line")).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 7);
    let inst = &v["instances"][0];
    assert_eq!(inst["field"], "fp:32003");
    assert!(inst["kernel"]["spairs"].as_u64().unwrap() > 0);
    assert!(inst["timing"]["total_ms"].is_u64());
    let row = &inst["checks"][2]["detail"]["rows"][0];
    assert!(row["kgr"].is_u64() || row["kgr"] == "inf");
}

#[test]
fn infinite_grade_uses_the_sentinel() {
    let json = scratch("inf.json", "");
    let p = scratch("inf.amg", "name \"inf\"; ring A = QQ[x]; ideal I in A = (x); amalgam R = duplication(A, I);\nfamily U over R = [(1)]; check cm(R, U) expect cm;");
    let out = bin().arg("run").arg("--json").arg(&json).arg(&p).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let row = &v["instances"][0]["checks"][0]["detail"]["rows"][0];
    assert_eq!(row["kgr"], "inf");
    assert_eq!(row["ht"], "inf");
}

#[test]
fn bad_field_is_rejected() {
    assert_eq!(bin().args(["corpus", "--field", "fp:12"]).output().unwrap().status.code(), Some(4));
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(0));
}
