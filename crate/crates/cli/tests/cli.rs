use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ampsample"));
    c.env_remove("AMPSAMPLE_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn meta(text: &str, key: &str) -> String {
    let prefix = format!("# {key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
        .to_string()
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect()
}

const BELL: &str = "qubits 2\nh 0\ncx 0 1\n";

#[test]
fn bell_sampling_is_byte_identical_across_reruns_and_threads() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "bell.txt", BELL);
    let a = run(&[
        "sample-circuit",
        s(&c),
        "--shots",
        "1000",
        "--seed",
        "7",
        "--threads",
        "1",
    ]);
    let b = run(&[
        "sample-circuit",
        s(&c),
        "--shots",
        "1000",
        "--seed",
        "7",
        "--threads",
        "1",
    ]);
    let t4 = run(&[
        "sample-circuit",
        s(&c),
        "--shots",
        "1000",
        "--seed",
        "7",
        "--threads",
        "4",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, t4.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("# ampsample-sample-circuit/1 columns=shot,bits\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 1000);
    assert!(r.iter().all(|row| row[1] == "00" || row[1] == "11"));
    let other = run(&["sample-circuit", s(&c), "--shots", "1000", "--seed", "8"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "bell.txt", BELL);
    let flag = run(&["sample-circuit", s(&c), "--shots", "50", "--seed", "42"]);
    let env = bin()
        .args(["sample-circuit", s(&c), "--shots", "50"])
        .env("AMPSAMPLE_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn qubit_algorithm_on_pathsum_reports_missing_marginals() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "bell.txt", BELL);
    let o = run(&[
        "sample-circuit",
        s(&c),
        "--algorithm",
        "qubit",
        "--backend",
        "pathsum",
    ]);
    assert!(!o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("marginals unsupported"), "{err}");

    let o = run(&[
        "sample-circuit",
        s(&c),
        "--algorithm",
        "qubit",
        "--shots",
        "20",
    ]);
    assert!(o.status.success());
    assert!(rows(&stdout(&o))
        .iter()
        .all(|row| row[1] == "00" || row[1] == "11"));
}

#[test]
fn trace_respects_evaluation_bound() {
    let dir = TempDir::new().unwrap();
    let c = write(
        &dir,
        "c.txt",
        "qubits 3\nh 0\nt 0\ncx 0 1\nh 2\nrz 2 0.3\ncz 1 2\nh 1\n",
    );
    for backend in ["statevector", "pathsum"] {
        let o = run(&[
            "sample-circuit",
            s(&c),
            "--backend",
            backend,
            "--shots",
            "200",
            "--trace",
            "--json",
        ]);
        assert!(
            o.status.success(),
            "{backend}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
        let bound = doc["meta"]["evaluation_bound_m_2k"].as_u64().unwrap();
        assert_eq!(bound, 7 << 2);
        assert!(doc["meta"]["evaluations_max_per_shot"].as_u64().unwrap() <= bound);
        assert_eq!(doc["meta"]["within_bound"], true);
        let per_gate = doc["meta"]["evaluations_per_gate"].as_array().unwrap();
        assert_eq!(per_gate.len(), 7);
        assert_eq!(per_gate[1], 0, "T is diagonal");
        assert_eq!(per_gate[4], 0, "Rz is diagonal");
    }
}

#[test]
fn stabdecomp_rejects_non_clifford_t_circuits() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.txt", "qubits 1\nrz 0 0.3\n");
    let o = run(&["sample-circuit", s(&c), "--backend", "stabdecomp"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_name_file_and_line() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "bad.txt", "qubits 2\nh 0\nfoo 1\n");
    let o = run(&["sample-circuit", s(&c)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains(&format!("{}:3:", c.display())), "{err}");
    assert!(err.contains("unknown gate `foo`"), "{err}");

    let g = write(&dir, "bad.graph", "edges\n0 0 1\n1 1 x\n");
    let o = run(&["sample-mbqc", s(&g)]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains(&format!("{}:3:", g.display())), "{err}");
}

#[test]
fn ground_sampling_of_minus_x_reports_gap_and_sensitivity() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.txt", "qubits 1\nterm -1 X\n");
    let o = run(&[
        "sample-ground",
        s(&h),
        "--chains",
        "10000",
        "--steps",
        "200",
        "--seed",
        "3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(meta(&text, "gamma").parse::<f64>().unwrap(), 2.0);
    assert!((meta(&text, "s").parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(meta(&text, "gap_bound_holds"), "true");
    assert!(meta(&text, "empirical_tv").parse::<f64>().unwrap() < 0.03);
    assert_eq!(rows(&text).len(), 10000);
}

#[test]
fn degenerate_ground_state_is_an_error() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.txt", "qubits 2\nterm -1 ZZ\n");
    let o = run(&["sample-ground", s(&h), "--chains", "10", "--steps", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("degenerate"), "{err}");
}

#[test]
fn magic_ratio_input_runs_chains() {
    let dir = TempDir::new().unwrap();
    let h = write(
        &dir,
        "m.txt",
        "qubits 2\nfamily\nstate 00 0.6 01 0.8\nstate 10 0.6 11 0.8\nfamily\nstate 00 0.8 10 0.6\nstate 01 0.8 11 0.6\n",
    );
    let o = run(&[
        "sample-ground",
        s(&h),
        "--magic",
        "--chains",
        "4000",
        "--steps",
        "200",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(meta(&text, "kind"), "magic-ratio");
    assert!(meta(&text, "empirical_tv").parse::<f64>().unwrap() < 0.05);
}

#[test]
fn identity_schedule_on_square_records_cycles() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "sq.graph", "edges\n0 0 1\n1 1 2\n2 2 3\n3 3 0\n");
    let o = run(&["sample-mbqc", s(&g), "--shots", "500"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(meta(&text, "cycle_records"), "500");
    let r = rows(&text);
    assert!(r.iter().all(|row| row[1] == "0000" || row[1] == "1111"));
    assert!(r.iter().any(|row| row[1] == "1111"));

    let sched = write(&dir, "h.txt", "qubits 4\nh 0\nh 1\nh 2\nh 3\n");
    let o = run(&[
        "sample-mbqc",
        s(&g),
        "--schedule",
        s(&sched),
        "--shots",
        "500",
    ]);
    assert!(o.status.success());
    assert_ne!(meta(&stdout(&o), "cycle_records"), "500");
}

#[test]
fn all_clifford_budget_is_uniform() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.txt", "qubits 2\nh 0\ncx 0 1\ns 1\nh 1\ncz 0 1\n");
    let o = run(&["budget", s(&c), "--delta", "0.08"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 5);
    for row in &r[..4] {
        assert_eq!(row[1], "1.0");
        let eps: f64 = row[3].parse().unwrap();
        assert!((eps - 0.08 / 16.0 / 4.0).abs() < 1e-15);
    }
    assert_eq!(r[4][3], "-");

    let o = run(&["budget", "--xi", "1,1.2,1.1", "--json"]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((doc["meta"]["eps_sum"].as_f64().unwrap() - 0.01 / 16.0).abs() < 1e-15);
}

#[test]
fn distribution_dumps_reference_law() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "bell.txt", BELL);
    let o = run(&["distribution", s(&c), "--json"]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["schema"], "ampsample-distribution/1");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert!((r[1].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "bell.txt", BELL);
    let out = dir.path().join("out.txt");
    let o = run(&["distribution", s(&c), "-o", s(&out)]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&out)
        .unwrap()
        .starts_with("# ampsample-distribution/1"));
}

#[test]
fn verify_gadget_suite_and_negative_control() {
    let o = run(&["verify", "--suite", "gadgets", "--suite", "reduction"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(meta(&stdout(&o), "all_pass"), "true");

    let o = run(&["verify", "--suite", "gadgets", "--perturb-gadget", "0.01"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert_eq!(meta(&text, "suite.gadgets"), "fail");
    assert!(rows(&text).iter().any(|r| r[1] == "fail"));
}

#[test]
fn verify_robustness_reports_bound() {
    let o = run(&[
        "verify",
        "--quick",
        "--suite",
        "robustness",
        "--eps",
        "0.001",
        "--json",
    ]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    let bound_row = rows
        .iter()
        .find(|r| r[2].as_str().unwrap().starts_with("L1("))
        .expect("bound check present");
    assert_eq!(bound_row[1], "pass");
    assert!(bound_row[3].as_str().unwrap().contains("max L1"));
}

#[test]
fn unknown_suite_is_rejected() {
    let o = run(&["verify", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}
