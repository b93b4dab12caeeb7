//! Declared scenario parameters and their typed values.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{HarnessError, Result};

/// Config-file section a parameter lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Section {
    Model,
    Device,
    Integrator,
    Disorder,
    Output,
}

impl Section {
    pub const ALL: [Section; 5] =
        [Section::Model, Section::Device, Section::Integrator, Section::Disorder, Section::Output];

    pub fn name(self) -> &'static str {
        match self {
            Section::Model => "model",
            Section::Device => "device",
            Section::Integrator => "integrator",
            Section::Disorder => "disorder",
            Section::Output => "output",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParamValue {
    Float(f64),
    Int(i64),
    /// A scalar given where a list is expected becomes a one-element list.
    List(Vec<f64>),
    Text(String),
}

impl ParamValue {
    fn kind(&self) -> &'static str {
        match self {
            ParamValue::Float(_) => "float",
            ParamValue::Int(_) => "integer",
            ParamValue::List(_) => "list of floats",
            ParamValue::Text(_) => "string",
        }
    }

    /// Parses command-line text into the same variant as `self`.
    pub fn parse_like(&self, key: &str, text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || HarnessError::config(format!("{key}: cannot read {text:?} as {}", self.kind()));
        Ok(match self {
            ParamValue::Float(_) => ParamValue::Float(parse_float(text).ok_or_else(bad)?),
            ParamValue::Int(_) => ParamValue::Int(text.parse().map_err(|_| bad())?),
            ParamValue::List(_) => {
                let inner = text.trim_start_matches('[').trim_end_matches(']');
                let items =
                    inner.split(',').map(|s| parse_float(s.trim())).collect::<Option<Vec<f64>>>().ok_or_else(bad)?;
                ParamValue::List(items)
            }
            ParamValue::Text(_) => ParamValue::Text(text.to_string()),
        })
    }

    /// Reads a TOML value into the same variant as `self`.
    pub fn from_toml_like(&self, key: &str, value: &toml::Value) -> Result<Self> {
        let bad = || HarnessError::config(format!("{key}: expected {}, found {value}", self.kind()));
        let number = |v: &toml::Value| match v {
            toml::Value::Float(x) => Some(*x),
            toml::Value::Integer(i) => Some(*i as f64),
            _ => None,
        };
        Ok(match self {
            ParamValue::Float(_) => ParamValue::Float(number(value).ok_or_else(bad)?),
            ParamValue::Int(_) => ParamValue::Int(value.as_integer().ok_or_else(bad)?),
            ParamValue::List(_) => match value {
                toml::Value::Array(items) => {
                    ParamValue::List(items.iter().map(number).collect::<Option<Vec<_>>>().ok_or_else(bad)?)
                }
                v => ParamValue::List(vec![number(v).ok_or_else(bad)?]),
            },
            ParamValue::Text(_) => ParamValue::Text(value.as_str().ok_or_else(bad)?.to_string()),
        })
    }

    pub fn to_toml(&self) -> toml::Value {
        match self {
            ParamValue::Float(x) => toml::Value::Float(*x),
            ParamValue::Int(i) => toml::Value::Integer(*i),
            ParamValue::List(v) => toml::Value::Array(v.iter().map(|x| toml::Value::Float(*x)).collect()),
            ParamValue::Text(s) => toml::Value::String(s.clone()),
        }
    }

    pub fn is_numeric(&self) -> bool {
        !matches!(self, ParamValue::Text(_))
    }
}

fn parse_float(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Float(x) => write!(f, "{x}"),
            ParamValue::Int(i) => write!(f, "{i}"),
            ParamValue::List(v) => {
                let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", items.join(","))
            }
            ParamValue::Text(s) => write!(f, "{s}"),
        }
    }
}

/// One overridable key of a scenario.
#[derive(Clone, Debug)]
pub struct ParamSpec {
    pub key: &'static str,
    pub section: Section,
    pub default: ParamValue,
    pub help: &'static str,
}

impl ParamSpec {
    pub fn float(section: Section, key: &'static str, default: f64, help: &'static str) -> Self {
        Self { key, section, default: ParamValue::Float(default), help }
    }

    pub fn int(section: Section, key: &'static str, default: i64, help: &'static str) -> Self {
        Self { key, section, default: ParamValue::Int(default), help }
    }

    pub fn list(section: Section, key: &'static str, default: &[f64], help: &'static str) -> Self {
        Self { key, section, default: ParamValue::List(default.to_vec()), help }
    }

    pub fn text(section: Section, key: &'static str, default: &str, help: &'static str) -> Self {
        Self { key, section, default: ParamValue::Text(default.to_string()), help }
    }
}

/// Fully resolved parameter values of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    values: BTreeMap<String, ParamValue>,
}

impl Params {
    pub(crate) fn new(values: BTreeMap<String, ParamValue>) -> Self {
        Self { values }
    }

    pub fn get(&self, key: &str) -> Result<&ParamValue> {
        self.values.get(key).ok_or_else(|| HarnessError::config(format!("parameter {key} is not declared")))
    }

    pub fn float(&self, key: &str) -> Result<f64> {
        match self.get(key)? {
            ParamValue::Float(x) => Ok(*x),
            ParamValue::Int(i) => Ok(*i as f64),
            other => Err(HarnessError::config(format!("{key} = {other} is not a number"))),
        }
    }

    pub fn int(&self, key: &str) -> Result<i64> {
        match self.get(key)? {
            ParamValue::Int(i) => Ok(*i),
            other => Err(HarnessError::config(format!("{key} = {other} is not an integer"))),
        }
    }

    /// Integer parameter that must be at least `min`.
    pub fn count(&self, key: &str, min: usize) -> Result<usize> {
        let v = self.int(key)?;
        if v < min as i64 {
            return Err(HarnessError::config(format!("{key} must be ≥ {min}, got {v}")));
        }
        Ok(v as usize)
    }

    /// Strictly positive float parameter.
    pub fn positive(&self, key: &str) -> Result<f64> {
        let v = self.float(key)?;
        if v.is_nan() || v <= 0.0 {
            return Err(HarnessError::config(format!("{key} must be positive, got {v}")));
        }
        Ok(v)
    }

    pub fn list(&self, key: &str) -> Result<Vec<f64>> {
        match self.get(key)? {
            ParamValue::List(v) => Ok(v.clone()),
            ParamValue::Float(x) => Ok(vec![*x]),
            other => Err(HarnessError::config(format!("{key} = {other} is not a list"))),
        }
    }

    /// List parameter stretched to `n` entries; a single entry is broadcast.
    pub fn per_spin(&self, key: &str, n: usize) -> Result<Vec<f64>> {
        let v = self.list(key)?;
        match v.len() {
            1 => Ok(vec![v[0]; n]),
            len if len == n => Ok(v),
            len => Err(HarnessError::config(format!("{key} has {len} entries for {n} spins"))),
        }
    }

    pub fn text(&self, key: &str) -> Result<&str> {
        match self.get(key)? {
            ParamValue::Text(s) => Ok(s),
            other => Err(HarnessError::config(format!("{key} = {other} is not a string"))),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &ParamValue)> {
        self.values.iter()
    }
}
