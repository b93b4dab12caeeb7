//! Scenario configuration: a TOML file with sections [model], [device],
//! [integrator], [disorder] and [output], plus `--set key=value` overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use spinmech::dynamics::{EvolveOptions, Method};

use crate::error::{HarnessError, Result};
use crate::params::{ParamSpec, ParamValue, Params, Section};
use crate::registry::{self, Scenario};

/// Top-level tables a manifest adds; ignored when a manifest is read back
/// as a configuration.
const MANIFEST_TABLES: [&str; 4] = ["run", "derived", "outputs", "sweep"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Integrator {
    Adaptive { rtol: f64, atol: f64 },
    Fixed { dt: f64 },
}

impl Default for Integrator {
    fn default() -> Self {
        match Method::default() {
            Method::Adaptive { rtol, atol } => Integrator::Adaptive { rtol, atol },
            Method::FixedStep { dt } => Integrator::Fixed { dt },
        }
    }
}

impl Integrator {
    pub fn method(&self) -> Method {
        match *self {
            Integrator::Adaptive { rtol, atol } => Method::Adaptive { rtol, atol },
            Integrator::Fixed { dt } => Method::FixedStep { dt },
        }
    }

    pub fn options(&self) -> EvolveOptions {
        EvolveOptions { method: self.method(), ..EvolveOptions::default() }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let ok = match *self {
            Integrator::Adaptive { rtol, atol } => rtol > 0.0 && atol > 0.0 && rtol.is_finite() && atol.is_finite(),
            Integrator::Fixed { dt } => dt > 0.0 && dt.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(HarnessError::config(format!("invalid integrator settings {self:?}")))
        }
    }

    pub(crate) fn to_toml(self) -> toml::Table {
        let mut t = toml::Table::new();
        match self {
            Integrator::Adaptive { rtol, atol } => {
                t.insert("method".into(), "adaptive".into());
                t.insert("rtol".into(), rtol.into());
                t.insert("atol".into(), atol.into());
            }
            Integrator::Fixed { dt } => {
                t.insert("method".into(), "fixed".into());
                t.insert("dt".into(), dt.into());
            }
        }
        t
    }

    fn from_toml(table: &toml::Table) -> Result<Self> {
        let float = |key: &str| -> Result<Option<f64>> {
            match table.get(key) {
                None => Ok(None),
                Some(toml::Value::Float(x)) => Ok(Some(*x)),
                Some(toml::Value::Integer(i)) => Ok(Some(*i as f64)),
                Some(v) => Err(HarnessError::config(format!("integrator.{key}: expected a number, found {v}"))),
            }
        };
        for key in table.keys() {
            if !["method", "dt", "rtol", "atol"].contains(&key.as_str()) {
                return Err(HarnessError::config(format!("unknown key integrator.{key}")));
            }
        }
        let method = match table.get("method") {
            None => "adaptive",
            Some(v) => v.as_str().ok_or_else(|| HarnessError::config("integrator.method must be a string"))?,
        };
        let integrator = match method {
            "adaptive" => {
                let Integrator::Adaptive { rtol, atol } = Integrator::default() else { unreachable!() };
                Integrator::Adaptive { rtol: float("rtol")?.unwrap_or(rtol), atol: float("atol")?.unwrap_or(atol) }
            }
            "fixed" => Integrator::Fixed {
                dt: float("dt")?.ok_or_else(|| HarnessError::config("integrator.method = \"fixed\" needs dt"))?,
            },
            other => return Err(HarnessError::config(format!("unknown integrator method {other:?}"))),
        };
        integrator.validate()?;
        Ok(integrator)
    }
}

/// Everything needed to reproduce one scenario run.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub scenario_id: String,
    /// Values replacing declared defaults, keyed by parameter name.
    pub overrides: BTreeMap<String, ParamValue>,
    /// Seed for sampled disorder.
    pub seed: u64,
    pub output_dir: PathBuf,
    pub integrator: Integrator,
}

impl ScenarioConfig {
    /// Defaults of a registered scenario, writing to `out/<id>`.
    pub fn new(scenario_id: &str) -> Result<Self> {
        let scenario = registry::find(scenario_id)?;
        let integrator = match Integrator::default() {
            Integrator::Adaptive { rtol, atol } => {
                Integrator::Adaptive { rtol: rtol * scenario.tolerance_scale, atol: atol * scenario.tolerance_scale }
            }
            fixed => fixed,
        };
        Ok(Self {
            scenario_id: scenario_id.to_string(),
            overrides: BTreeMap::new(),
            seed: 0,
            output_dir: PathBuf::from("out").join(scenario_id),
            integrator,
        })
    }

    pub fn scenario(&self) -> Result<&'static Scenario> {
        registry::find(&self.scenario_id)
    }

    fn spec(&self, key: &str) -> Result<ParamSpec> {
        let (section, bare) = match key.split_once('.') {
            Some((s, k)) => {
                let s =
                    Section::from_name(s).ok_or_else(|| HarnessError::config(format!("unknown section in {key}")))?;
                (Some(s), k)
            }
            None => (None, key),
        };
        (self.scenario()?.params)()
            .into_iter()
            .find(|p| p.key == bare && section.is_none_or(|s| s == p.section))
            .ok_or_else(|| {
                HarnessError::config(format!("{key} is not a declared parameter of scenario {}", self.scenario_id))
            })
    }

    /// Applies `key=value` text, checked against the declared keys.
    pub fn set(&mut self, key: &str, text: &str) -> Result<()> {
        let spec = self.spec(key)?;
        let value = spec.default.parse_like(spec.key, text)?;
        self.overrides.insert(spec.key.to_string(), value);
        Ok(())
    }

    /// Applies one `key=value` assignment.
    pub fn set_assignment(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| HarnessError::config(format!("expected key=value, got {assignment:?}")))?;
        self.set(key.trim(), value)
    }

    pub fn set_value(&mut self, key: &str, value: ParamValue) -> Result<()> {
        let spec = self.spec(key)?;
        if std::mem::discriminant(&spec.default) != std::mem::discriminant(&value) {
            return Err(HarnessError::config(format!("{key}: {value} has the wrong type")));
        }
        self.overrides.insert(spec.key.to_string(), value);
        Ok(())
    }

    /// Declared defaults overlaid with the overrides.
    pub fn resolve(&self) -> Result<Params> {
        let mut values = BTreeMap::new();
        for spec in (self.scenario()?.params)() {
            let v = self.overrides.get(spec.key).cloned().unwrap_or(spec.default);
            values.insert(spec.key.to_string(), v);
        }
        for key in self.overrides.keys() {
            if !values.contains_key(key) {
                return Err(HarnessError::config(format!("{key} is not declared by {}", self.scenario_id)));
            }
        }
        Ok(Params::new(values))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            HarnessError::Config(msg) => HarnessError::config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Reads a configuration or a run manifest.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let doc: toml::Table = text.parse().map_err(|e: toml::de::Error| HarnessError::config(e.to_string()))?;
        let id = doc
            .get("scenario")
            .and_then(|v| v.as_str())
            .ok_or_else(|| HarnessError::config("missing top-level `scenario`"))?;
        let mut config = Self::new(id)?;
        for (key, value) in &doc {
            match key.as_str() {
                "scenario" => {}
                "seed" => {
                    let seed = value.as_integer().filter(|s| *s >= 0);
                    config.seed =
                        seed.ok_or_else(|| HarnessError::config("seed must be a non-negative integer"))? as u64;
                }
                "integrator" => config.integrator = Integrator::from_toml(table_of(key, value)?)?,
                "output" => {
                    for (k, v) in table_of(key, value)? {
                        match (k.as_str(), v.as_str()) {
                            ("dir", Some(dir)) => config.output_dir = PathBuf::from(dir),
                            _ => return Err(HarnessError::config(format!("unknown or mistyped key output.{k}"))),
                        }
                    }
                }
                k if MANIFEST_TABLES.contains(&k) => {}
                section => {
                    let s = Section::from_name(section)
                        .ok_or_else(|| HarnessError::config(format!("unknown top-level key {section}")))?;
                    for (k, v) in table_of(key, value)? {
                        let spec = config.spec(&format!("{}.{k}", s.name()))?;
                        let parsed = spec.default.from_toml_like(spec.key, v)?;
                        config.overrides.insert(spec.key.to_string(), parsed);
                    }
                }
            }
        }
        Ok(config)
    }

    /// The configuration as a TOML document with every resolved parameter.
    pub fn to_toml(&self) -> Result<toml::Table> {
        let params = self.resolve()?;
        let specs = (self.scenario()?.params)();
        let mut doc = toml::Table::new();
        doc.insert("scenario".into(), self.scenario_id.clone().into());
        let seed = i64::try_from(self.seed).map_err(|_| HarnessError::config("seed must fit in 63 bits"))?;
        doc.insert("seed".into(), toml::Value::Integer(seed));
        for section in [Section::Model, Section::Device, Section::Disorder] {
            let mut t = toml::Table::new();
            for spec in specs.iter().filter(|s| s.section == section) {
                t.insert(spec.key.to_string(), params.get(spec.key)?.to_toml());
            }
            if !t.is_empty() {
                doc.insert(section.name().into(), toml::Value::Table(t));
            }
        }
        doc.insert("integrator".into(), toml::Value::Table(self.integrator.to_toml()));
        let mut out = toml::Table::new();
        out.insert("dir".into(), self.output_dir.display().to_string().into());
        doc.insert("output".into(), toml::Value::Table(out));
        Ok(doc)
    }
}

fn table_of<'a>(key: &str, value: &'a toml::Value) -> Result<&'a toml::Table> {
    value.as_table().ok_or_else(|| HarnessError::config(format!("`{key}` must be a table")))
}
