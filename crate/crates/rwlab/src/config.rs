//! Run configuration: one JSON document plus `--set key=value` overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rwlab_core::analysis::Grid;
use rwlab_core::families::{Family, FamilySpec, IntegratorSettings};
use rwlab_core::{AmbientSpec, GeometryOptions};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::harness::{CheckName, FixtureSpec};
use crate::RunError;

/// Residual predicates available to `check`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    ClassA,
    Minimality,
    EtaParallel,
    EigenE3,
    EigenE4,
    EigenEta,
    FrameIdentities,
}

impl Predicate {
    pub const ALL: [Predicate; 7] = [
        Predicate::ClassA,
        Predicate::Minimality,
        Predicate::EtaParallel,
        Predicate::EigenE3,
        Predicate::EigenE4,
        Predicate::EigenEta,
        Predicate::FrameIdentities,
    ];
}

fn default_predicates() -> Vec<Predicate> {
    vec![Predicate::ClassA]
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    pub mesh: Option<PathBuf>,
    pub metadata: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

/// Everything a subcommand may read. Unused sections are ignored by the
/// commands that do not need them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub ambient: Option<AmbientSpec>,
    #[serde(default)]
    pub family: Option<FamilySpec>,
    #[serde(default)]
    pub grid: Option<Grid>,
    #[serde(default = "default_predicates")]
    pub predicates: Vec<Predicate>,
    /// Verdict tolerance for `check`; for `verify` it replaces every
    /// upper-bound tolerance in the suite.
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Per-check tolerance overrides for `verify`.
    #[serde(default)]
    pub tolerances: BTreeMap<CheckName, f64>,
    /// Checks to run in `verify` (default: all).
    #[serde(default)]
    pub checks: Option<Vec<CheckName>>,
    /// Replaces the shipped fixtures in `verify`.
    #[serde(default)]
    pub fixtures: Option<Vec<FixtureSpec>>,
    /// Added to the fixture list in `verify`.
    #[serde(default)]
    pub extra_fixtures: Vec<FixtureSpec>,
    #[serde(default)]
    pub integrator: IntegratorSettings,
    #[serde(default)]
    pub geometry: GeometryOptions,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Add `theta`, `h…` and `H…` columns to generated meshes.
    #[serde(default = "default_true")]
    pub forms: bool,
    #[serde(default)]
    pub output: OutputPaths,
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_value(Value::Object(Default::default())).expect("empty config is valid")
    }
}

impl RunConfig {
    /// Reads `path` (or starts from `{}`), applies the overrides in order and
    /// validates the result.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, RunError> {
        let mut doc = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| RunError::Config(format!("cannot read {}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| RunError::Config(format!("{}: {e}", p.display())))?
            }
            None => Value::Object(Default::default()),
        };
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let cfg: RunConfig = serde_json::from_value(doc).map_err(|e| RunError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if let Some(g) = &self.grid {
            g.validate().map_err(RunError::from)?;
            if g.n_u < 2 || g.n_v < 2 {
                return Err(RunError::Config(format!(
                    "grid needs at least 2 points per direction, got {} x {}",
                    g.n_u, g.n_v
                )));
            }
        }
        let tols = self.tolerance.iter().chain(self.tolerances.values());
        for t in tols {
            if !(*t > 0.0 && t.is_finite()) {
                return Err(RunError::Config(format!("tolerances must be positive, got {t}")));
            }
        }
        self.integrator.validate().map_err(RunError::from)?;
        let fd = &self.geometry.fd;
        if !(fd.first_step > 0.0 && fd.second_step > 0.0) {
            return Err(RunError::Config("finite-difference steps must be positive".into()));
        }
        Ok(())
    }

    pub fn ambient(&self) -> Result<AmbientSpec, RunError> {
        self.ambient
            .ok_or_else(|| RunError::Config("missing `ambient` section".into()))
    }

    pub fn family_spec(&self) -> Result<&FamilySpec, RunError> {
        self.family
            .as_ref()
            .ok_or_else(|| RunError::Config("missing `family` section".into()))
    }

    pub fn build_family(&self) -> Result<Family, RunError> {
        Ok(Family::build(self.ambient()?, self.family_spec()?, &self.integrator)?)
    }
}

/// Parses the right-hand side of `--set`: JSON if it parses, else a string.
fn parse_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

/// Applies `a.b.c=value`. Numeric segments index into arrays; missing
/// object keys are created.
pub fn apply_override(doc: &mut Value, spec: &str) -> Result<(), RunError> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| RunError::Config(format!("override `{spec}` is not of the form key=value")))?;
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(RunError::Config(format!("override path `{path}` has an empty segment")));
    }
    let mut cur = doc;
    for key in &keys {
        cur = match cur {
            Value::Object(map) => map.entry(key.to_string()).or_insert(Value::Null),
            Value::Array(items) => {
                let i: usize = key
                    .parse()
                    .map_err(|_| RunError::Config(format!("`{key}` in `{path}` must index an array")))?;
                let len = items.len();
                items
                    .get_mut(i)
                    .ok_or_else(|| RunError::Config(format!("index {i} in `{path}` is out of range ({len})")))?
            }
            Value::Null => {
                *cur = Value::Object(Default::default());
                match cur {
                    Value::Object(map) => map.entry(key.to_string()).or_insert(Value::Null),
                    _ => unreachable!(),
                }
            }
            _ => {
                return Err(RunError::Config(format!(
                    "cannot descend into a scalar at `{key}` in `{path}`"
                )))
            }
        };
    }
    *cur = parse_value(raw);
    Ok(())
}
