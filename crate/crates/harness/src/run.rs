//! Running scenarios, writing their tables and manifests, and sweeps.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::error::{HarnessError, Result};
use crate::params::ParamValue;
use crate::registry::{Context, Outcome};
use crate::table::{sha256_hex, write_atomic, Table};

pub const MANIFEST_FILE: &str = "manifest.toml";

/// One CSV written by a run.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputFile {
    pub file: String,
    pub sha256: String,
    pub rows: usize,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub output_dir: PathBuf,
    pub manifest: PathBuf,
    pub outputs: Vec<OutputFile>,
    pub outcome: Outcome,
}

/// Runs a scenario in memory.
pub fn execute(config: &ScenarioConfig) -> Result<Outcome> {
    let scenario = config.scenario()?;
    let params = config.resolve()?;
    config.integrator.validate()?;
    let ctx = Context { params: &params, integrator: config.integrator, seed: config.seed };
    log::info!("running {} with seed {}", scenario.id, config.seed);
    (scenario.run)(&ctx)
}

fn write_tables(dir: &Path, tables: &[Table]) -> Result<Vec<OutputFile>> {
    tables
        .iter()
        .map(|t| {
            let bytes = t.to_csv()?;
            let file = format!("{}.csv", t.name);
            write_atomic(&dir.join(&file), &bytes)?;
            Ok(OutputFile { file, sha256: sha256_hex(&bytes), rows: t.rows.len() })
        })
        .collect()
}

fn outputs_toml(outputs: &[OutputFile]) -> toml::Value {
    toml::Value::Array(
        outputs
            .iter()
            .map(|o| {
                let mut t = toml::Table::new();
                t.insert("file".into(), o.file.clone().into());
                t.insert("sha256".into(), o.sha256.clone().into());
                t.insert("rows".into(), toml::Value::Integer(o.rows as i64));
                toml::Value::Table(t)
            })
            .collect(),
    )
}

fn run_table(status: &str, started: Instant, error: Option<&HarnessError>) -> toml::Value {
    let mut t = toml::Table::new();
    t.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    t.insert("status".into(), status.into());
    t.insert("wall_time_s".into(), started.elapsed().as_secs_f64().into());
    if let Some(e) = error {
        t.insert("error".into(), e.to_string().into());
        t.insert("exit_code".into(), toml::Value::Integer(e.exit_code().into()));
    }
    toml::Value::Table(t)
}

fn write_manifest(dir: &Path, doc: &toml::Table) -> Result<PathBuf> {
    let text = toml::to_string(doc).map_err(|e| HarnessError::config(format!("manifest serialization: {e}")))?;
    let path = dir.join(MANIFEST_FILE);
    write_atomic(&path, text.as_bytes())?;
    Ok(path)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))
}

/// Runs a scenario and writes `<table>.csv` files plus a manifest that
/// reproduces the run. A failed run still leaves a manifest with its error.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunReport> {
    let started = Instant::now();
    let mut doc = config.to_toml()?;
    let dir = config.output_dir.clone();
    create_dir(&dir)?;
    let outcome = match execute(config) {
        Ok(o) => o,
        Err(e) => {
            doc.insert("run".into(), run_table("failed", started, Some(&e)));
            write_manifest(&dir, &doc)?;
            return Err(e);
        }
    };
    let outputs = write_tables(&dir, &outcome.tables)?;
    doc.insert("run".into(), run_table("ok", started, None));
    doc.insert("derived".into(), toml::Value::Table(outcome.derived.clone()));
    doc.insert("outputs".into(), outputs_toml(&outputs));
    let manifest = write_manifest(&dir, &doc)?;
    Ok(RunReport { output_dir: dir, manifest, outputs, outcome })
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub output_dir: PathBuf,
    pub manifest: PathBuf,
    pub outputs: Vec<OutputFile>,
    pub members: Vec<RunReport>,
}

/// Column name of the swept value; avoids clashing with an existing column.
fn axis_column(table: &Table, axis: &str) -> String {
    if table.columns.iter().any(|c| c == axis) {
        format!("sweep_{axis}")
    } else {
        axis.to_string()
    }
}

/// Concatenates same-named tables of all members with the swept value as an
/// extra column, placed after `t` when the table is a time series.
fn merge(members: &[(f64, &Outcome)], axis: &str) -> Vec<Table> {
    let mut names: Vec<&str> = Vec::new();
    for (_, o) in members {
        for t in &o.tables {
            if !names.contains(&t.name.as_str()) {
                names.push(&t.name);
            }
        }
    }
    names
        .into_iter()
        .map(|name| {
            let first = members.iter().find_map(|(_, o)| o.table(name)).expect("name came from a member");
            let at = usize::from(first.is_time_series());
            let mut columns = first.columns.clone();
            columns.insert(at, axis_column(first, axis));
            let mut merged = Table::with_columns(name, columns);
            for (value, o) in members {
                if let Some(t) = o.table(name) {
                    for row in &t.rows {
                        let mut row = row.clone();
                        row.insert(at, *value);
                        merged.push(row);
                    }
                }
            }
            merged
        })
        .collect()
}

fn axis_value(value: &ParamValue) -> f64 {
    match value {
        ParamValue::Float(x) => *x,
        ParamValue::Int(i) => *i as f64,
        ParamValue::List(v) => v[0],
        ParamValue::Text(_) => unreachable!("sweep axes are numeric"),
    }
}

/// Runs `base` once per value of `axis`, in parallel, each member writing to
/// `<out>/<axis>=<value>/`, then writes merged tables to `<out>/`.
pub fn sweep(base: &ScenarioConfig, axis: &str, values: &[String]) -> Result<SweepReport> {
    let started = Instant::now();
    if values.is_empty() {
        return Err(HarnessError::config("a sweep needs at least one value"));
    }
    let mut configs = Vec::with_capacity(values.len());
    for text in values {
        let mut c = base.clone();
        c.set(axis, text)?;
        let key = axis.rsplit('.').next().expect("split yields a piece");
        let value = c.overrides[key].clone();
        match &value {
            ParamValue::Text(_) => return Err(HarnessError::config(format!("sweep axis {axis} is not numeric"))),
            ParamValue::List(v) if v.len() != 1 => {
                return Err(HarnessError::config(format!(
                    "sweep value {text:?} of list axis {axis} must be one number"
                )))
            }
            _ => {}
        }
        c.output_dir = base.output_dir.join(format!("{key}={}", text.trim()));
        configs.push((axis_value(&value), c));
    }

    let results: Vec<Result<RunReport>> = configs.par_iter().map(|(_, c)| run_scenario(c)).collect();
    let total = results.len();
    let completed = results.iter().filter(|r| r.is_ok()).count();

    create_dir(&base.output_dir)?;
    let mut doc = base.to_toml()?;
    let mut sweep_table = toml::Table::new();
    sweep_table.insert("axis".into(), axis.into());
    sweep_table.insert(
        "values".into(),
        toml::Value::Array(values.iter().map(|v| toml::Value::String(v.trim().to_string())).collect()),
    );
    sweep_table.insert("completed".into(), toml::Value::Integer(completed as i64));
    sweep_table.insert("total".into(), toml::Value::Integer(total as i64));
    doc.insert("sweep".into(), toml::Value::Table(sweep_table));

    let ok: Vec<(f64, &RunReport)> =
        configs.iter().zip(&results).filter_map(|((v, _), r)| r.as_ref().ok().map(|r| (*v, r))).collect();
    let merged = merge(&ok.iter().map(|(v, r)| (*v, &r.outcome)).collect::<Vec<_>>(), axis);
    let outputs = write_tables(&base.output_dir, &merged)?;
    doc.insert("outputs".into(), outputs_toml(&outputs));

    if completed < total {
        let first_error = results.into_iter().find_map(|r| r.err()).expect("some member failed");
        doc.insert("run".into(), run_table("partial", started, Some(&first_error)));
        write_manifest(&base.output_dir, &doc)?;
        return Err(HarnessError::Sweep { completed, total, first_error: Box::new(first_error) });
    }
    doc.insert("run".into(), run_table("ok", started, None));
    let manifest = write_manifest(&base.output_dir, &doc)?;
    let members = results.into_iter().map(|r| r.expect("all members succeeded")).collect();
    Ok(SweepReport { output_dir: base.output_dir.clone(), manifest, outputs, members })
}
