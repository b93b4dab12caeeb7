use spinmech_harness::{
    execute, run_scenario, sweep, HarnessError, Integrator, ParamValue, ScenarioConfig, DISORDER_BOUND, MANIFEST_FILE,
};

fn small_custom(dir: &std::path::Path) -> ScenarioConfig {
    let mut c = ScenarioConfig::new("custom").unwrap();
    for kv in ["t_final=1", "steps=10", "n_max=6", "gamma_m_s=0.05"] {
        c.set_assignment(kv).unwrap();
    }
    c.integrator = Integrator::Fixed { dt: 0.01 };
    c.output_dir = dir.to_path_buf();
    c
}

#[test]
fn config_round_trips_through_toml() {
    let mut c = ScenarioConfig::new("figS6").unwrap();
    c.set("model.r", "1.0").unwrap();
    c.set("disorder.mode", "seeded").unwrap();
    c.seed = 42;
    let text = toml::to_string(&c.to_toml().unwrap()).unwrap();
    let back = ScenarioConfig::from_toml_str(&text).unwrap();
    assert_eq!(back.resolve().unwrap().float("r").unwrap(), 1.0);
    assert_eq!(back.seed, 42);
    assert_eq!(back.integrator, c.integrator);
    assert_eq!(back.resolve().unwrap().text("mode").unwrap(), "seeded");
}

#[test]
fn unknown_sections_and_keys_are_rejected() {
    assert!(ScenarioConfig::from_toml_str("scenario = \"custom\"\n[model]\nnope = 1\n").is_err());
    assert!(ScenarioConfig::from_toml_str("scenario = \"custom\"\n[weird]\nx = 1\n").is_err());
    assert!(ScenarioConfig::from_toml_str("scenario = \"custom\"\n[integrator]\nmethod = \"fixed\"\n").is_err());
    let ok = ScenarioConfig::from_toml_str("scenario = \"custom\"\n[model]\ndelta_m = 12\n").unwrap();
    assert_eq!(ok.resolve().unwrap().float("delta_m").unwrap(), 12.0);
}

#[test]
fn seeded_disorder_is_reproducible_and_bounded() {
    let run = |seed: u64| {
        let dir = tempfile::tempdir().unwrap();
        let mut c = small_custom(dir.path());
        c.set("n_spins", "3").unwrap();
        c.set("mode", "seeded").unwrap();
        c.seed = seed;
        execute(&c).unwrap().derived
    };
    let (a, b, c) = (run(7), run(7), run(8));
    assert_eq!(a, b);
    assert_ne!(a["delta_dg_offsets"], c["delta_dg_offsets"]);
    for key in ["delta_dg_offsets", "lambda_factors"] {
        for v in a[key].as_array().unwrap() {
            let x = v.as_float().unwrap();
            let offset = if key == "lambda_factors" { x - 1.0 } else { x };
            assert!(offset.abs() <= DISORDER_BOUND);
        }
    }
}

#[test]
fn explicit_disorder_beyond_the_bound_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small_custom(dir.path());
    c.set("mode", "explicit").unwrap();
    c.set("lambda_factors", "1.2").unwrap();
    assert!(matches!(execute(&c), Err(HarnessError::Config(_))));
}

#[test]
fn run_writes_tables_and_checksummed_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_scenario(&small_custom(dir.path())).unwrap();
    assert_eq!(report.outputs.len(), 1);
    let manifest: toml::Table = std::fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap().parse().unwrap();
    let outputs = manifest["outputs"].as_array().unwrap();
    let entry = outputs[0].as_table().unwrap();
    let bytes = std::fs::read(dir.path().join(entry["file"].as_str().unwrap())).unwrap();
    use sha2::Digest;
    assert_eq!(entry["sha256"].as_str().unwrap(), format!("{:x}", sha2::Sha256::digest(&bytes)));
    assert_eq!(entry["rows"].as_integer().unwrap(), 11);
    assert_eq!(manifest["run"]["status"].as_str().unwrap(), "ok");
    let header = String::from_utf8(bytes).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "t,n_phonon,sz_1");
}

#[test]
fn sweep_merges_members_with_an_axis_column() {
    let dir = tempfile::tempdir().unwrap();
    let base = small_custom(dir.path());
    let values = vec!["8".to_string(), "12".to_string()];
    let report = sweep(&base, "delta_m", &values).unwrap();
    assert_eq!(report.members.len(), 2);
    assert!(dir.path().join("delta_m=8").join(MANIFEST_FILE).exists());
    assert!(dir.path().join("delta_m=12").join("custom.csv").exists());
    let merged = std::fs::read_to_string(dir.path().join("custom.csv")).unwrap();
    let mut lines = merged.lines();
    assert_eq!(lines.next().unwrap(), "t,delta_m,n_phonon,sz_1");
    assert_eq!(lines.count(), 22);
    let manifest: toml::Table = std::fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap().parse().unwrap();
    assert_eq!(manifest["sweep"]["completed"].as_integer().unwrap(), 2);
}

#[test]
fn sweep_rejects_bad_axes() {
    let dir = tempfile::tempdir().unwrap();
    let base = small_custom(dir.path());
    assert!(sweep(&base, "delta_m", &[]).is_err());
    assert!(sweep(&base, "hamiltonian", &["rabi".to_string()]).is_err());
    assert!(sweep(&base, "lambda", &["1,2".to_string()]).is_err());
    assert!(sweep(&base, "nope", &["1".to_string()]).is_err());
}

#[test]
fn failing_sweep_member_reports_partial_progress() {
    let dir = tempfile::tempdir().unwrap();
    let base = small_custom(dir.path());
    let err = sweep(&base, "omega_p", &["0".to_string(), "20".to_string()]).unwrap_err();
    match &err {
        HarnessError::Sweep { completed, total, .. } => assert_eq!((*completed, *total), (1, 2)),
        other => panic!("unexpected error {other}"),
    }
    assert_eq!(err.exit_code(), 4);
    let manifest = std::fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap();
    assert!(manifest.contains("status = \"partial\""));
}

#[test]
fn list_axis_values_become_single_entries() {
    let dir = tempfile::tempdir().unwrap();
    let base = small_custom(dir.path());
    let report = sweep(&base, "model.lambda", &["0.5".to_string()]).unwrap();
    let c = &report.members[0];
    assert_eq!(c.outcome.tables[0].rows.len(), 11);
    let mut check = base.clone();
    check.set("lambda", "0.5").unwrap();
    assert_eq!(check.overrides["lambda"], ParamValue::List(vec![0.5]));
}
