use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn memsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_memsim"))
        .args(args)
        .env_remove("MEMSIM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(rel)
}

#[test]
fn run_writes_csv_with_expected_columns() {
    let dir = tempfile::tempdir().unwrap();
    let ckt = dir.path().join("rc.ckt");
    fs::write(&ckt, "V1 in 0 DC 1.2\nR1 in out 1k\nC1 out 0 1p\n.TRAN 10p 1n\n").unwrap();
    let csv = dir.path().join("rc.csv");
    let o = memsim(&["run", ckt.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "time_s,v(in),v(out),i(V1)");
    assert_eq!(text.lines().count(), 102);
}

#[test]
fn malformed_netlist_exits_1_with_line_numbers() {
    let o = memsim(&["run", fixture("bad/01_double_suffix.ckt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn missing_file_exits_1() {
    let o = memsim(&["run", "/nonexistent/netlist.ckt"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn solver_failure_exits_2_with_time_stamp() {
    let dir = tempfile::tempdir().unwrap();
    let ckt = dir.path().join("conflict.ckt");
    fs::write(&ckt, "V1 a 0 DC 1\nV2 a 0 DC 2\nR1 a 0 1k\n.TRAN 1p 1n\n").unwrap();
    let o = memsim(&["run", ckt.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("operating point"), "{}", stderr(&o));
}

#[test]
fn cell_emit_prints_latch_netlist() {
    let o = memsim(&["cell", "d_latch", "emit"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let devices = text
        .lines()
        .filter(|l| {
            let l = l.to_ascii_uppercase();
            l.starts_with("MN") || l.starts_with("MP") || l.starts_with("YM")
        })
        .count();
    assert_eq!(devices, 10);
}

#[test]
fn xor_verify_prints_truth_table() {
    let o = memsim(&["cell", "xor", "verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("0,1,1,0"), "{}", stdout(&o));
}

#[test]
fn unknown_cell_lists_valid_names() {
    let o = memsim(&["cell", "nand3", "verify"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("jk_ff"));
}

#[test]
fn jk_verify_is_deterministic() {
    let args = ["cell", "jk_ff", "verify", "--seed", "7", "--cycles", "64"];
    let a = memsim(&args);
    let b = memsim(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn seed_may_come_from_environment() {
    let flag = memsim(&["cell", "sr_ff", "verify", "--seed", "9", "--cycles", "8"]);
    let env = Command::new(env!("CARGO_BIN_EXE_memsim"))
        .args(["cell", "sr_ff", "verify", "--cycles", "8"])
        .env("MEMSIM_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(stdout(&flag), stdout(&env));
}

#[test]
fn too_few_cycles_rejected() {
    let o = memsim(&["cell", "d_ff", "verify", "--cycles", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = memsim(&["cell", "d_ff", "verify", "--cycles", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn inverted_thresholds_rejected() {
    let o = memsim(&["verify", "--vhigh-frac", "0.2", "--vlow-frac", "0.8"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_passes_every_cell() {
    let o = memsim(&["verify", "--cycles", "16"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("11/11 cells pass"));
}

#[test]
fn unscaled_model_fails_verification() {
    let o = memsim(&["verify", "--cycles", "8", "--a-scale", "1"]);
    assert_eq!(o.status.code(), Some(3));
    for cell in ["and", "or", "xor", "t_ff", "jk_ff"] {
        assert!(
            stdout(&o).lines().any(|l| l.starts_with(cell) && l.contains("FAIL")),
            "{cell}: {}",
            stdout(&o)
        );
    }
}

#[test]
fn json_report_is_valid_and_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let o = memsim(&["report", "--format", "json", "--cycles", "8", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let rows: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    assert_eq!(rows.len(), 5);
    let jk = rows.iter().find(|r| r["cell"] == "jk_ff").unwrap();
    assert_eq!(jk["reference"]["avg_power_uW"], 14.2);
    assert_eq!(jk["reference"]["delay_ps"], 147.0);
}

#[test]
fn markdown_report_has_jk_reference() {
    let o = memsim(&["report", "--cycles", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let jk = stdout(&o).lines().find(|l| l.contains("jk_ff")).unwrap().to_string();
    assert!(jk.contains("14.2") && jk.contains("147"), "{jk}");
}

#[test]
fn unwritable_report_path_exits_1() {
    let o = memsim(&["report", "--cycles", "4", "--out", "/nonexistent/dir/report.md"]);
    assert_eq!(o.status.code(), Some(1));
}
