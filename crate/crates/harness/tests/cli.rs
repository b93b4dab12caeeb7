use std::path::Path;
use std::process::{Command, Output};

fn sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sim")).args(args).output().expect("sim binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn small_custom(dir: &Path) -> Vec<String> {
    [
        "run",
        "--scenario",
        "custom",
        "--set",
        "t_final=2",
        "--set",
        "steps=20",
        "--set",
        "n_max=8",
        "--set",
        "gamma_m_s=0.05",
        "--fixed-step",
        "0.005",
        "--out",
        dir.to_str().unwrap(),
    ]
    .map(String::from)
    .to_vec()
}

#[test]
fn list_succeeds() {
    let out = sim(&["list"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for id in ["fig2b", "fig4", "figS9", "sw-check", "custom"] {
        assert!(text.contains(id), "{id} missing from list");
    }
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    assert_eq!(code(&sim(&["run", "--scenario", "nope", "--out", out_dir])), 2);
    assert_eq!(code(&sim(&["run", "--scenario", "custom", "--set", "bogus=1", "--out", out_dir])), 2);
    assert_eq!(code(&sim(&["run", "--scenario", "custom", "--set", "delta_m=abc", "--out", out_dir])), 2);
    assert_eq!(code(&sim(&["run", "--scenario", "custom", "--set", "device.delta_m=1", "--out", out_dir])), 2);
}

#[test]
fn instability_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = sim(&[
        "run",
        "--scenario",
        "custom",
        "--set",
        "omega_p=10",
        "--set",
        "delta_m=10",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = std::fs::read_to_string(dir.path().join("manifest.toml")).unwrap();
    assert!(manifest.contains("status = \"failed\""));
}

#[test]
fn unstable_fixed_step_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = small_custom(dir.path());
    let pos = args.iter().position(|a| a == "0.005").unwrap();
    args[pos] = "1.0".into();
    let out = sim(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn fixed_step_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        let args = small_custom(dir);
        let out = sim(&args.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let first = std::fs::read(a.path().join("custom.csv")).unwrap();
    let second = std::fs::read(b.path().join("custom.csv")).unwrap();
    assert!(!first.is_empty());
    assert_eq!(first, second);
}

#[test]
fn empty_sweep_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = sim(&["sweep", "--scenario", "custom", "--axis", "delta_m", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn manifest_reproduces_the_run() {
    let first = tempfile::tempdir().unwrap();
    let args = small_custom(first.path());
    assert_eq!(code(&sim(&args.iter().map(String::as_str).collect::<Vec<_>>())), 0);
    let second = tempfile::tempdir().unwrap();
    let manifest = first.path().join("manifest.toml");
    let out = sim(&["run", "--config", manifest.to_str().unwrap(), "--out", second.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        std::fs::read(first.path().join("custom.csv")).unwrap(),
        std::fs::read(second.path().join("custom.csv")).unwrap()
    );
}
