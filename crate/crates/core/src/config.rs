//! Instance files and experiment configs.
//!
//! Per-coordinate fields of an instance file accept a scalar, an explicit
//! list, or a pattern `{"first": .., "second": .., "rest": ..}` that can be
//! expanded to any dimension. `second` defaults to `rest`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::env::{LinearInstance, MonotonicInstance};
use crate::error::{Error, Result};
use crate::harness::{Algorithm, Problem};
use crate::run::Limits;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Values {
    Scalar(f64),
    List(Vec<f64>),
    Pattern {
        first: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        second: Option<f64>,
        rest: f64,
    },
}

impl Values {
    fn fixed_len(&self) -> Option<usize> {
        match self {
            Values::List(v) => Some(v.len()),
            _ => None,
        }
    }

    pub fn expand(&self, d: usize) -> Result<Vec<f64>> {
        match self {
            Values::Scalar(x) => Ok(vec![*x; d]),
            Values::List(v) if v.len() == d => Ok(v.clone()),
            Values::List(v) => Err(Error::Config(format!("list of length {} cannot describe d = {d}", v.len()))),
            Values::Pattern { first, second, rest } => Ok((0..d)
                .map(|i| match i {
                    0 => *first,
                    1 => second.unwrap_or(*rest),
                    _ => *rest,
                })
                .collect()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Linear,
    Logistic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub model: Model,
    /// Dimension used when no field is an explicit list and none is requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub theta: Values,
    pub mu: Values,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_safe: Option<f64>,
    pub a0: Values,
    /// Maximum playable values. Required for linear models; for logistic
    /// models it is the optional cap.
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub max_value: Option<Values>,
    pub sigma2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Linear(LinearInstance),
    Monotonic(MonotonicInstance),
}

impl InstanceFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }

    fn fields(&self) -> Vec<&Values> {
        let mut v = vec![&self.theta, &self.mu, &self.a0];
        v.extend(self.max_value.as_ref());
        v
    }

    /// Dimension: `requested`, else `d`, else the length of the explicit lists.
    pub fn resolve_dim(&self, requested: Option<usize>) -> Result<usize> {
        if let Some(d) = requested.or(self.d) {
            return Ok(d);
        }
        let lens: Vec<usize> = self.fields().iter().filter_map(|v| v.fixed_len()).collect();
        match lens.first() {
            Some(&d) if lens.iter().all(|&l| l == d) => Ok(d),
            Some(_) => Err(Error::Config("per-coordinate lists have different lengths".into())),
            None => Err(Error::Config("dimension not given and no field is an explicit list".into())),
        }
    }

    pub fn build(&self, requested: Option<usize>) -> Result<Instance> {
        let d = self.resolve_dim(requested)?;
        if d == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        let theta = self.theta.expand(d)?;
        let mu = self.mu.expand(d)?;
        let a0 = self.a0.expand(d)?;
        let max_value = self.max_value.as_ref().map(|v| v.expand(d)).transpose()?;
        match self.model {
            Model::Linear => {
                if self.eps_safe.is_some() {
                    log::warn!("eps_safe is ignored for linear models");
                }
                let m = max_value.ok_or_else(|| Error::Config("linear models require M".into()))?;
                Ok(Instance::Linear(LinearInstance::new(theta, mu, self.gamma, a0, m, self.sigma2)?))
            }
            Model::Logistic => {
                let eps_safe = self.eps_safe.ok_or_else(|| Error::Config("logistic models require eps_safe".into()))?;
                let inst = MonotonicInstance::logistic(&theta, &mu, self.gamma, eps_safe, a0, self.sigma2)?;
                Ok(Instance::Monotonic(match max_value {
                    Some(cap) => inst.with_cap(cap)?,
                    None => inst,
                }))
            }
        }
    }
}

fn default_delta() -> f64 {
    0.1
}

fn default_max_epoch() -> u32 {
    Limits::default().max_epoch
}

fn default_max_pulls() -> u64 {
    Limits::default().max_pulls
}

fn default_value_range() -> f64 {
    Limits::default().value_range
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Instance file, relative to the directory of the config file.
    pub instance: PathBuf,
    pub algorithm: Algorithm,
    #[serde(default = "default_delta")]
    pub delta: f64,
    pub n_trials: usize,
    pub master_seed: u64,
    #[serde(default = "default_max_epoch")]
    pub max_epoch: u32,
    #[serde(default = "default_max_pulls")]
    pub max_pulls: u64,
    #[serde(default = "default_value_range")]
    pub value_range: f64,
    #[serde(default)]
    pub simplified_n: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_sweep: Option<Vec<usize>>,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        if cfg.instance.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.instance = dir.join(&cfg.instance);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if self.n_trials == 0 {
            return Err(Error::Config("n_trials must be at least 1".into()));
        }
        if self.max_epoch == 0 {
            return Err(Error::Config("max_epoch must be at least 1".into()));
        }
        if let Some(ds) = &self.d_sweep {
            if ds.is_empty() || ds.iter().any(|&d| d < 2) {
                return Err(Error::Config("d_sweep entries must be at least 2".into()));
            }
        }
        Ok(())
    }

    pub fn limits(&self) -> Limits {
        Limits {
            max_epoch: self.max_epoch,
            max_pulls: self.max_pulls,
            value_range: self.value_range,
            record_trace: false,
        }
    }

    /// One problem per swept dimension, or a single problem when there is no sweep.
    pub fn problems(&self, file: &InstanceFile) -> Result<Vec<Problem>> {
        let dims: Vec<Option<usize>> = match &self.d_sweep {
            Some(ds) => ds.iter().map(|&d| Some(d)).collect(),
            None => vec![None],
        };
        dims.into_iter()
            .map(|d| match (self.algorithm, file.build(d)?) {
                (Algorithm::Linear, Instance::Linear(inst)) => Ok(Problem::Linear(inst)),
                (Algorithm::Monotonic, Instance::Monotonic(inst)) => {
                    Ok(Problem::Monotonic { inst, simplified: self.simplified_n })
                }
                (alg, _) => Err(Error::Config(format!("algorithm {} does not match the instance model", alg.name()))),
            })
            .collect()
    }
}
