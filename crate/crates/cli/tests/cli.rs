use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use spinchain::compiler::two_pi_k_rabi;
use spinchain::{ChainConfig, Device, LabelStrategy, PulseSequence};
use tempfile::TempDir;

fn spinchain(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinchain"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], out: &Path) -> String {
    let o = spinchain(args, out);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn floats(row: &[String], from: usize) -> Vec<f64> {
    row[from..].iter().map(|x| x.parse().unwrap()).collect()
}

#[test]
fn spectrum_two_spin_transitions() {
    let dir = TempDir::new().unwrap();
    let report = ok(&["spectrum"], dir.path());
    let t = rows(&dir.path().join("transitions.csv"));
    let cnot = t.iter().find(|r| r[0] == "10" && r[1] == "11").expect("10-11 listed");
    assert!((floats(cnot, 2)[0] - 98.98).abs() < 5e-3);
    let near = t.iter().find(|r| r[0] == "00" && r[1] == "01").unwrap();
    assert!((floats(near, 2)[0] - 100.98).abs() < 5e-3);
    assert!(report.contains("99.98"));
    assert_eq!(rows(&dir.path().join("spectrum.csv")).len(), 4);
}

#[test]
fn spectrum_units() {
    let dir = TempDir::new().unwrap();
    ok(&["spectrum", "--J", "2", "--units", "J"], &dir.path().join("j"));
    ok(&["spectrum", "--J", "2", "--units", "absolute"], &dir.path().join("abs"));
    let j = rows(&dir.path().join("j/transitions.csv"));
    let a = rows(&dir.path().join("abs/transitions.csv"));
    for (x, y) in j.iter().zip(&a) {
        assert!((2.0 * floats(x, 2)[0] - floats(y, 2)[0]).abs() < 1e-9);
    }
}

#[test]
fn uniform_field_reaches_five_levels() {
    let dir = TempDir::new().unwrap();
    let report = ok(&["spectrum", "--spins", "4", "--delta-omega", "0"], dir.path());
    assert!(report.contains("reachable from ground: 5 of 16 levels"), "{report}");
}

#[test]
fn malformed_config_exits_with_config_code() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "coupling = one\n").unwrap();
    let o = spinchain(&["spectrum", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = spinchain(&["spectrum", "--units", "parsecs"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_with_code_three() {
    let dir = TempDir::new().unwrap();
    let o = spinchain(&["shor", "--engine", "rwa", "--strategy", "max-overlap"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn io_failure_exits_with_code_one() {
    let dir = TempDir::new().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let o = spinchain(&["spectrum"], &blocker.join("sub"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "coupling = 3.0\nrabi = 0.2\n").unwrap();
    ok(&["spectrum", "--config", cfg.to_str().unwrap(), "--J", "1.5"], dir.path());
    let written = fs::read_to_string(dir.path().join("config.txt")).unwrap();
    assert!(written.contains("coupling = 1.5\n"));
    assert!(written.contains("rabi = 0.2\n"));
}

#[test]
fn written_config_round_trips() {
    let dir = TempDir::new().unwrap();
    ok(&["spectrum", "--J", "0.7", "--rabi-grid", "0.1,0.3"], &dir.path().join("a"));
    let first = dir.path().join("a/config.txt");
    ok(&["spectrum", "--config", first.to_str().unwrap()], &dir.path().join("b"));
    let a = fs::read_to_string(&first).unwrap();
    let b = fs::read_to_string(dir.path().join("b/config.txt")).unwrap();
    assert!(a.contains("rabi_grid = 0.1,0.3\n"));
    assert_eq!(a.replace("/a\n", "/b\n"), b);
}

#[test]
fn sweep_rows_are_normalized_and_ordered() {
    let dir = TempDir::new().unwrap();
    ok(&["cnot-sweep", "--rabi-grid", "0.1,0.3,0.5", "--delta-omegas", "250,10"], dir.path());
    let r = rows(&dir.path().join("cnot_sweep.csv"));
    assert_eq!(r.len(), 6);
    let keys: Vec<(f64, f64)> = r.iter().map(|x| (x[0].parse().unwrap(), x[1].parse().unwrap())).collect();
    assert_eq!(keys, vec![(250.0, 0.1), (250.0, 0.3), (250.0, 0.5), (10.0, 0.1), (10.0, 0.3), (10.0, 0.5)]);
    for row in &r {
        let p = floats(row, 2);
        assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-8);
    }
}

#[test]
fn narrow_gradient_has_larger_p01_swings() {
    let dir = TempDir::new().unwrap();
    ok(&["cnot-sweep", "--rabi-grid", "0.1:0.2:0.01", "--delta-omegas", "10,250"], dir.path());
    let r = rows(&dir.path().join("cnot_sweep.csv"));
    let amplitude = |d: &str| {
        let p01: Vec<f64> = r.iter().filter(|x| x[0] == d).map(|x| floats(x, 3)[0]).collect();
        p01.iter().cloned().fold(f64::MIN, f64::max) - p01.iter().cloned().fold(f64::MAX, f64::min)
    };
    assert!(amplitude("10.0") > amplitude("250.0"));
}

#[test]
fn two_pi_k_rabi_suppresses_leakage() {
    let cfg = ChainConfig::two_spin(1.0, 100.0, 250.0, 0.1).unwrap();
    let d = Device::new(cfg, LabelStrategy::MaxOverlap).unwrap();
    let rabi = two_pi_k_rabi(d.spectrum(), d.table(), 1).unwrap().rabi;
    let dir = TempDir::new().unwrap();
    ok(&["cnot-sweep", "--rabi-grid", &format!("{rabi:?}"), "--delta-omegas", "250"], dir.path());
    let p = floats(&rows(&dir.path().join("cnot_sweep.csv"))[0], 2);
    assert!(p[1] + p[2] <= 1e-3, "{p:?}");
}

#[test]
fn shor_rwa_output() {
    let dir = TempDir::new().unwrap();
    let summary = ok(&["shor", "--engine", "rwa"], dir.path());
    assert!(summary.contains("pulses = 31"));
    let r = rows(&dir.path().join("shor.csv"));
    assert_eq!(r.len(), 16);
    let quarter: Vec<&str> = r
        .iter()
        .filter(|x| (x[1].parse::<f64>().unwrap() - 0.25).abs() < 1e-12)
        .map(|x| x[0].as_str())
        .collect();
    assert_eq!(quarter, ["1", "3", "5", "7"]);
    let pulses: PulseSequence = fs::read_to_string(dir.path().join("pulses.txt")).unwrap().parse().unwrap();
    assert_eq!(pulses.len(), 31);
    assert!(pulses.pulses().iter().all(|p| p.target.is_some()));
}

#[test]
fn shor_oracle_matches_exact() {
    let dir = TempDir::new().unwrap();
    ok(&["shor", "--engine", "exact"], &dir.path().join("exact"));
    ok(&["shor", "--engine", "oracle"], &dir.path().join("oracle"));
    let e = rows(&dir.path().join("exact/shor.csv"));
    let o = rows(&dir.path().join("oracle/shor.csv"));
    for (a, b) in e.iter().zip(&o) {
        let (pa, pb) = (floats(a, 1)[0], floats(b, 1)[0]);
        assert!((pa - pb).abs() <= 1e-6, "state {}: {pa} vs {pb}", a[0]);
    }
}

#[test]
fn compile_gate_list() {
    let dir = TempDir::new().unwrap();
    let gates = dir.path().join("gates.txt");
    fs::write(&gates, "# CN then U1\ncnot c=1 t=0\nu q=1 theta=1.5707963267948966 phi=0\n").unwrap();
    let summary = ok(&["compile", gates.to_str().unwrap()], dir.path());
    assert!(summary.starts_with("2 gates -> 3 pulses"));
    let text = fs::read_to_string(dir.path().join("pulses.txt")).unwrap();
    let seq: PulseSequence = text.parse().unwrap();
    assert_eq!(seq.len(), 3);
    assert_eq!(seq.to_string(), text);
    fs::write(&gates, "cnot c=1 t=1\n").unwrap();
    assert_eq!(spinchain(&["compile", gates.to_str().unwrap()], dir.path()).status.code(), Some(2));
}

#[test]
fn identical_config_gives_identical_files() {
    let dir = TempDir::new().unwrap();
    for run in ["a", "b"] {
        ok(&["spectrum", "--spins", "3"], &dir.path().join(run).join("s"));
        ok(
            &["cnot-sweep", "--rabi-grid", "0.1,0.2", "--delta-omegas", "50"],
            &dir.path().join(run).join("c"),
        );
    }
    for file in ["s/spectrum.csv", "s/transitions.csv", "s/report.txt", "c/cnot_sweep.csv"] {
        let a = fs::read(dir.path().join("a").join(file)).unwrap();
        let b = fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
}
