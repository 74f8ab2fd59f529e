use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use beamwave_core::params::{check_membership, SetId};
use beamwave_core::solver::{Solver, SolverConfig, WaveSolution};
use beamwave_core::Problem;
use serde_json::Value;
use tempfile::TempDir;

fn beamwave(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beamwave"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

fn json_file(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn params_check_running_example() {
    let d = TempDir::new().unwrap();
    let o = beamwave(d.path(), &["params", "check"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["member"], true);
    assert_eq!(v["case_id"], 1);
}

#[test]
fn params_check_integer_ratio_fails() {
    let d = TempDir::new().unwrap();
    let o = beamwave(d.path(), &["params", "check", "--m", "4"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["member"], false);
}

#[test]
fn params_sample_passes_recheck() {
    let d = TempDir::new().unwrap();
    let o = beamwave(d.path(), &["params", "sample", "--target", "1", "1", "--eps", "0.1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let p: Problem = serde_json::from_value(v["problem"].clone()).unwrap();
    assert!(check_membership(&p, SetId::S).unwrap().member);
    assert!((p.params.mu.to_f64() - 1.0).abs() < 0.1 && (p.params.m.to_f64() - 1.0).abs() < 0.1);
}

#[test]
fn resonance_exit_codes() {
    let d = TempDir::new().unwrap();
    let o = beamwave(d.path(), &["resonance", "--radius", "200"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("kernel size: 4"));
    assert_eq!(data_rows(&fs::read_to_string(d.path().join("resonance.csv")).unwrap()).len(), 4);

    assert_eq!(code(&beamwave(d.path(), &["resonance", "--m", "4"])), 3);
    let o = beamwave(d.path(), &["resonance", "--m", "4", "--floating"]);
    assert_eq!(code(&o), 1);
    assert_eq!(data_rows(&fs::read_to_string(d.path().join("resonance.csv")).unwrap()).len(), 8);

    assert_eq!(code(&beamwave(d.path(), &["resonance", "--radius", "0"])), 2);
}

#[test]
fn usage_errors() {
    let d = TempDir::new().unwrap();
    assert_eq!(code(&beamwave(d.path(), &["solve"])), 2);
    fs::write(d.path().join("bad.json"), "{ not json").unwrap();
    assert_eq!(code(&beamwave(d.path(), &["--config", "bad.json", "params", "check"])), 2);
    assert_eq!(code(&beamwave(d.path(), &["--N", "1", "params", "check"])), 2);
    assert_eq!(code(&beamwave(d.path(), &["--tol-outer", "-1", "params", "check"])), 2);
}

#[test]
fn solve_writes_certified_solution() {
    let d = TempDir::new().unwrap();
    let o = beamwave(d.path(), &["--out", "run", "solve", "--rho", "1e-2", "1e-2", "--plot-data"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_file(&d.path().join("run/solution.json"));
    assert!(v["solution"]["residual_full"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["config"]["N"], 16);

    // round trip: the stored solution re-validates
    let sol: WaveSolution = serde_json::from_value(v["solution"].clone()).unwrap();
    let p: Problem = serde_json::from_value(v["config"]["problem"].clone()).unwrap();
    let s = Solver::new(&p, SolverConfig::default()).unwrap();
    assert!(s.full_residual(sol.rho, &sol.unknowns(), &sol.w, 16).unwrap() <= 1e-10);

    for f in ["rho_alpha.dat", "rho_gamma.dat", "rho_domega.dat"] {
        let t = fs::read_to_string(d.path().join("run").join(f)).unwrap();
        assert!(t.lines().all(|l| l.split_whitespace().count() == 2));
    }
}

#[test]
fn outputs_are_deterministic() {
    let d = TempDir::new().unwrap();
    beamwave(d.path(), &["--out", "a", "solve", "--rho", "1e-3", "2e-3"]);
    beamwave(d.path(), &["--out", "b", "solve", "--rho", "1e-3", "2e-3"]);
    let a = fs::read_to_string(d.path().join("a/solution.json")).unwrap();
    let b = fs::read_to_string(d.path().join("b/solution.json")).unwrap();
    assert_eq!(a.replace("\"a\"", "\"b\""), b);
}

#[test]
fn config_file_and_flag_precedence() {
    let d = TempDir::new().unwrap();
    fs::write(d.path().join("cfg.json"), r#"{"N": 8, "output_dir": "fromcfg"}"#).unwrap();
    let o = beamwave(d.path(), &["--config", "cfg.json", "--N", "6", "solve", "--rho", "1e-3", "0"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_file(&d.path().join("fromcfg/solution.json"));
    assert_eq!(v["config"]["N"], 6);
    assert_eq!(v["solution"]["N"], 6);
}

#[test]
fn continue_axis_branch_has_eleven_rows() {
    let d = TempDir::new().unwrap();
    let o = beamwave(d.path(), &["continue", "--path", "axis1", "--max", "1e-2", "--steps", "10", "--plot-data"]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(d.path().join("branch.csv")).unwrap();
    assert!(csv.starts_with("# config {"));
    assert!(csv.contains("rho1,rho2,omega1,omega2,alpha,gamma,residual_full,norm_w_H0,N\n"));
    assert_eq!(data_rows(&csv).len(), 11);
    assert_eq!(fs::read_to_string(d.path().join("rho_alpha.dat")).unwrap().lines().count(), 11);
}

#[test]
fn evolve_follows_the_wave() {
    let d = TempDir::new().unwrap();
    assert_eq!(code(&beamwave(d.path(), &["--N", "4", "solve", "--rho", "1e-2", "1e-2"])), 0);
    let o = beamwave(d.path(), &["evolve", "--from", "solution.json", "--periods", "5", "--plot-data"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(d.path().join("trajectory.csv")).unwrap();
    assert!(csv.contains("t,energy,energy_rate,H0_norm_u,H0_norm_ut,deviation\n"));
    let max_dev = data_rows(&csv)
        .iter()
        .map(|r| r.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(max_dev <= 1e-6, "{max_dev}");
    assert!(d.path().join("t_energy.dat").exists());

    let o = beamwave(d.path(), &["--out", "s", "evolve", "--state", "final_state.json", "--t-end", "0.5", "--dt", "1e-2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(d.path().join("s/final_state.json").exists());
}

#[test]
fn energy_of_wave_and_state() {
    let d = TempDir::new().unwrap();
    beamwave(d.path(), &["--N", "4", "solve", "--rho", "1e-2", "0"]);
    let o = beamwave(d.path(), &["energy", "--from", "solution.json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["energy"].as_f64().unwrap() > 0.0);
    // the wave is stationary in energy
    assert!(v["energy_rate"].as_f64().unwrap().abs() < 1e-12);
    fs::write(
        d.path().join("state.json"),
        r#"{"u":{"N":2,"coeffs":[]},"ut":{"N":2,"coeffs":[[1,0,1.0,0.0]]},"t":0.0}"#,
    )
    .unwrap();
    let o = beamwave(d.path(), &["energy", "--state", "state.json", "--alpha", "1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["energy_rate"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert!((v["energy"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    let o = beamwave(d.path(), &["energy", "--state", "state.json", "--alpha", "-1e-1", "--gamma", "-2E-3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["alpha"], -0.1);
}

#[test]
fn quiet_suppresses_stdout() {
    let d = TempDir::new().unwrap();
    let o = beamwave(d.path(), &["--quiet", "params", "check"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
}
