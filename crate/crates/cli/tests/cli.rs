use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn quditc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quditc"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn setup() -> (tempfile::TempDir, PathBuf) {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_path_buf();
    assert!(quditc(&dir, &["generate", "."]).status.success());
    (tmp, dir)
}

fn xx_count(path: &Path, circuit: usize) -> usize {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v[circuit]["sequence"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|g| g["type"] == "XX")
        .count()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn transpile_bv_qutrit() {
    let (_t, dir) = setup();
    let o = quditc(&dir, &["transpile", "--regime", "qutrit", "bv101.qasm"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(xx_count(&dir.join("bv101.iqc.json"), 0), 2);
    assert!(dir.join("bv101.map.json").is_file());
}

#[test]
fn transpile_swap_test_ququart_mapping() {
    let (_t, dir) = setup();
    let o = quditc(
        &dir,
        &[
            "transpile",
            "--regime",
            "ququart",
            "--mapping",
            "swaptest1.ququart.map.json",
            "swaptest1.qasm",
            "-o",
            "s.iqc.json",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(xx_count(&dir.join("s.iqc.json"), 0), 4);
}

#[test]
fn several_inputs_one_file_and_determinism() {
    let (_t, dir) = setup();
    for out in ["a.iqc.json", "b.iqc.json"] {
        let o = quditc(&dir, &["transpile", "-O", "bv101.qasm", "grover000.qasm", "-o", out]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let a = std::fs::read(dir.join("a.iqc.json")).unwrap();
    assert_eq!(a, std::fs::read(dir.join("b.iqc.json")).unwrap());
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    let side: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("a.map.json")).unwrap()).unwrap();
    assert_eq!(side.as_array().unwrap().len(), 2);
}

#[test]
fn optimize_flag_cuts_rotations() {
    let (_t, dir) = setup();
    let rcount = |flag: &str, out: &str| {
        let o = quditc(
            &dir,
            &["transpile", "--regime", "qubit", flag, "grover000.qasm", "-o", out],
        );
        assert!(o.status.success());
        let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.join(out)).unwrap()).unwrap();
        v[0]["sequence"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|g| g["type"] == "Rphi")
            .count()
    };
    let before = rcount("--no-optimize", "n.iqc.json");
    let after = rcount("-O", "o.iqc.json");
    assert!(after as f64 <= 0.6 * before as f64, "{before} -> {after}");
}

#[test]
fn unmap_modes() {
    let (_t, dir) = setup();
    std::fs::write(
        dir.join("id.qasm"),
        "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\n",
    )
    .unwrap();
    assert!(quditc(&dir, &["transpile", "id.qasm"]).status.success());
    std::fs::write(
        dir.join("s.json"),
        r#"[{"state": "012", "count": 5}, {"state": [0, 1, 0], "count": 7}]"#,
    )
    .unwrap();
    let strict = quditc(
        &dir,
        &["unmap", "s.json", "--sidecar", "id.map.json", "--mode", "strict"],
    );
    assert!(strict.status.success(), "{}", stderr(&strict));
    let v: Value = serde_json::from_str(&stdout(&strict)).unwrap();
    assert_eq!(v, serde_json::json!([{"state": "010", "count": 7}]));
    let loose = quditc(
        &dir,
        &["unmap", "s.json", "--sidecar", "id.map.json", "--mode", "nonstrict"],
    );
    let v: Value = serde_json::from_str(&stdout(&loose)).unwrap();
    assert_eq!(
        v,
        serde_json::json!([{"state": "010", "count": 7}, {"state": "011", "count": 5}])
    );
    std::fs::write(dir.join("e.json"), "[]").unwrap();
    let empty = quditc(&dir, &["unmap", "e.json", "--sidecar", "id.map.json"]);
    assert_eq!(
        serde_json::from_str::<Value>(&stdout(&empty)).unwrap(),
        serde_json::json!([])
    );
}

#[test]
fn verify_all_regimes() {
    let (_t, dir) = setup();
    for regime in ["qubit", "qutrit", "ququart"] {
        let o = quditc(&dir, &["verify", "--regime", regime, "-O", "bv101.qasm"]);
        assert!(o.status.success(), "{regime}: {}", stdout(&o));
        assert!(stdout(&o).contains("DIAGONAL_PHASE PASS"));
    }
}

#[test]
fn verify_detects_corrupted_angle() {
    let (_t, dir) = setup();
    assert!(quditc(&dir, &["transpile", "bv101.qasm"]).status.success());
    let path = dir.join("bv101.iqc.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let seq = v[0]["sequence"].as_array_mut().unwrap();
    let k = seq.iter().position(|g| g["type"] == "Rphi").unwrap();
    let a = seq[k]["angle"].as_f64().unwrap();
    seq[k]["angle"] = serde_json::json!(a + 0.1);
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let o = quditc(&dir, &["verify", "--iqc", "bv101.iqc.json", "bv101.qasm"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("FAIL"));
    let dev: f64 = text
        .rsplit("max deviation ")
        .next()
        .unwrap()
        .trim_end_matches([')', '\n'])
        .parse()
        .unwrap();
    assert!(dev > 1e-3, "{dev}");
}

#[test]
fn verify_cap() {
    let (_t, dir) = setup();
    let o = quditc(&dir, &["verify", "--cap", "16", "bv10101.qasm"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not verifiable at desk scale"));
}

#[test]
fn stats_error_estimate() {
    let (_t, dir) = setup();
    let o = quditc(
        &dir,
        &[
            "stats",
            "--regime",
            "qutrit",
            "--rates",
            "1e-4,1e-3,1e-3,1e-2",
            "bv101.qasm",
        ],
    );
    assert!(o.status.success());
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    let cols: Vec<&str> = line.split_whitespace().collect();
    let (r, xx): (f64, f64) = (cols[3].parse().unwrap(), cols[4].parse().unwrap());
    let e: f64 = cols[5].parse().unwrap();
    assert!((e - (1e-3 * r + 1e-2 * xx)).abs() < 1e-9, "{line}");
    let bad = quditc(&dir, &["stats", "--rates", "1,2", "bv101.qasm"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn user_errors_carry_positions() {
    let (_t, dir) = setup();
    std::fs::write(dir.join("bad.qasm"), "OPENQASM 2.0;\nqreg q[1];\nfoo q[0];\n").unwrap();
    let o = quditc(&dir, &["transpile", "bad.qasm"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.qasm:3:1"), "{}", stderr(&o));
    std::fs::write(dir.join("reset.qasm"), "OPENQASM 2.0;\nqreg q[1];\nreset q[0];\n").unwrap();
    let o = quditc(&dir, &["transpile", "reset.qasm"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("reset"), "{}", stderr(&o));
}

#[test]
fn qubit_runtime_output() {
    let (_t, dir) = setup();
    for rt in ["emulator", "ion"] {
        let out = format!("bv.{rt}.qasm");
        let o = quditc(&dir, &["transpile", "--runtime", rt, "-O", "bv101.qasm", "-o", &out]);
        assert!(o.status.success(), "{}", stderr(&o));
        let text = std::fs::read_to_string(dir.join(&out)).unwrap();
        assert!(text.starts_with("OPENQASM 2.0;"));
        assert!(!text.contains(" h "));
    }
    let o = quditc(&dir, &["transpile", "--runtime", "nope", "bv101.qasm"]);
    assert_eq!(o.status.code(), Some(1));
}
