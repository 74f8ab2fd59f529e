//! Run configuration: one JSON file, overridden by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use beamwave_core::solver::SolverConfig;
use beamwave_core::{Problem, QuadraticSurd};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "Problem::running_example")]
    pub problem: Problem,
    #[serde(rename = "N", default = "default_n")]
    pub n: usize,
    #[serde(default = "default_tol_inner")]
    pub tol_inner: f64,
    #[serde(default = "default_tol_outer")]
    pub tol_outer: f64,
    #[serde(default)]
    pub varrho: Option<f64>,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

fn default_n() -> usize {
    SolverConfig::default().n
}

fn default_tol_inner() -> f64 {
    SolverConfig::default().tol_inner
}

fn default_tol_outer() -> f64 {
    SolverConfig::default().tol_outer
}

fn default_out() -> PathBuf {
    PathBuf::from(".")
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: Problem::running_example(),
            n: default_n(),
            tol_inner: default_tol_inner(),
            tol_outer: default_tol_outer(),
            varrho: None,
            output_dir: default_out(),
            seed: 0,
        }
    }
}

/// Flag values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub n: Option<usize>,
    pub tol_inner: Option<f64>,
    pub tol_outer: Option<f64>,
    pub varrho: Option<f64>,
    pub seed: Option<u64>,
    pub mu: Option<QuadraticSurd>,
    pub m: Option<QuadraticSurd>,
    pub lambda: Option<f64>,
    pub p: Option<u32>,
    pub jstar: Option<[i64; 2]>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, ov: &Overrides) -> anyhow::Result<Self> {
        let mut cfg = match path {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing config {}", p.display()))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = &ov.out {
            cfg.output_dir = v.clone();
        }
        if let Some(v) = ov.n {
            cfg.n = v;
        }
        if let Some(v) = ov.tol_inner {
            cfg.tol_inner = v;
        }
        if let Some(v) = ov.tol_outer {
            cfg.tol_outer = v;
        }
        if ov.varrho.is_some() {
            cfg.varrho = ov.varrho;
        }
        if let Some(v) = ov.seed {
            cfg.seed = v;
        }
        let pr = &mut cfg.problem.params;
        if let Some(v) = &ov.mu {
            pr.mu = v.clone();
        }
        if let Some(v) = &ov.m {
            pr.m = v.clone();
        }
        if let Some(v) = ov.lambda {
            pr.lambda = v;
        }
        if let Some(v) = ov.p {
            pr.p = v;
        }
        if let Some(v) = ov.jstar {
            pr.jstar = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.problem.params.validate()?;
        for (name, t) in [("tol_inner", self.tol_inner), ("tol_outer", self.tol_outer)] {
            if !(t > 0.0 && t.is_finite()) {
                bail!("{name} must be positive, got {t}");
            }
        }
        if let Some(v) = self.varrho {
            if !(v > 0.0 && v.is_finite()) {
                bail!("varrho must be positive, got {v}");
            }
        }
        let js = self.problem.params.jstar;
        if (self.n as i64) < js[0].max(js[1]) {
            bail!("N = {} is below max(j*) = {}", self.n, js[0].max(js[1]));
        }
        Ok(())
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            n: self.n,
            tol_inner: self.tol_inner,
            tol_outer: self.tol_outer,
            varrho: self.varrho,
            ..SolverConfig::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let c = RunConfig::load(None, &Overrides::default()).unwrap();
        assert_eq!(c, RunConfig::default());
        let ov = Overrides {
            n: Some(8),
            m: Some("4".parse().unwrap()),
            ..Overrides::default()
        };
        let c = RunConfig::load(None, &ov).unwrap();
        assert_eq!(c.n, 8);
        assert_eq!(c.problem.params.m.to_string(), "4");
        let bad = Overrides {
            n: Some(1),
            ..Overrides::default()
        };
        assert!(RunConfig::load(None, &bad).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let c = RunConfig::default();
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        let partial: RunConfig = serde_json::from_str(r#"{"N": 12}"#).unwrap();
        assert_eq!(partial.n, 12);
        assert!(serde_json::from_str::<RunConfig>(r#"{"n": 12}"#).is_err());
    }
}
