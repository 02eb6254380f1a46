//! Seeded multi-trial runner, aggregation and CSV output.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::env::{trial_rng, trial_seed, Environment, LinearInstance, MonotonicInstance};
use crate::error::Result;
use crate::linear::run_linear;
use crate::monotonic::run_monotonic;
use crate::run::{Limits, RunResult};

pub const DEFAULT_GRID_POINTS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Linear,
    Monotonic,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Linear => "linear",
            Algorithm::Monotonic => "monotonic",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Linear(LinearInstance),
    Monotonic { inst: MonotonicInstance, simplified: bool },
}

impl Problem {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            Problem::Linear(_) => Algorithm::Linear,
            Problem::Monotonic { .. } => Algorithm::Monotonic,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Problem::Linear(inst) => inst.dim(),
            Problem::Monotonic { inst, .. } => inst.dim(),
        }
    }

    pub fn best_arm(&self) -> usize {
        match self {
            Problem::Linear(inst) => inst.best_arm(),
            Problem::Monotonic { inst, .. } => inst.best_arm(),
        }
    }

    /// Runs trial `k` on its own stream.
    pub fn run_trial(&self, master_seed: u64, k: u64, delta: f64, limits: &Limits) -> Result<RunResult> {
        let mut rng = trial_rng(master_seed, k);
        let mut result = match self {
            Problem::Linear(inst) => run_linear(inst, delta, &mut rng, limits)?,
            Problem::Monotonic { inst, simplified } => run_monotonic(inst, delta, *simplified, &mut rng, limits)?,
        };
        result.seed = trial_seed(master_seed, k);
        Ok(result)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub delta: f64,
    pub n_trials: usize,
    pub master_seed: u64,
    pub limits: Limits,
}

/// True reward gap between the optimum and recommending `i` at value `a`.
pub fn simple_regret<E: Environment>(env: &E, i: usize, a: f64) -> f64 {
    env.max_safe_value(env.best_arm()) - env.mean_reward(i, a)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub n_trials: usize,
    pub mean_pulls: f64,
    /// Population standard deviation.
    pub std_pulls: f64,
    pub correct_rate: f64,
    /// Trials with a pull above the strict audit threshold (γ for linear, γ + ε_safe for monotonic).
    pub unsafe_trial_count: usize,
    /// Trials with a safe-value pull above γ.
    pub unsafe_safe_trial_count: usize,
    pub inconclusive_count: usize,
    /// `(cumulative pulls, mean simple regret)` on the shared grid.
    pub regret_curve: Vec<(u64, f64)>,
}

/// `(mean, population std)`.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Value of a regret trajectory at `x`: the last sample at or before `x`, the
/// first sample before the trajectory starts.
pub fn step_value(samples: &[(u64, f64)], x: u64) -> Option<f64> {
    let first = samples.first()?;
    let k = samples.partition_point(|s| s.0 <= x);
    Some(if k == 0 { first.1 } else { samples[k - 1].1 })
}

/// Evenly spaced grid from the earliest first sample to the largest total.
pub fn regret_grid(results: &[RunResult], points: usize) -> Vec<u64> {
    let lo = results.iter().filter_map(|r| r.regret_samples.first().map(|s| s.0)).min();
    let hi = results.iter().filter(|r| !r.regret_samples.is_empty()).map(|r| r.total_pulls).max();
    let (Some(lo), Some(hi)) = (lo, hi) else { return Vec::new() };
    if hi <= lo || points < 2 {
        return vec![lo];
    }
    let mut grid: Vec<u64> =
        (0..points).map(|k| lo + ((hi - lo) as f64 * k as f64 / (points - 1) as f64).round() as u64).collect();
    grid.dedup();
    grid
}

pub fn aggregate(results: &[RunResult], best: usize, grid_points: usize) -> Aggregate {
    let pulls: Vec<f64> = results.iter().map(|r| r.total_pulls as f64).collect();
    let (mean_pulls, std_pulls) = mean_std(&pulls);
    let correct = results.iter().filter(|r| r.is_correct(best)).count();
    let grid = regret_grid(results, grid_points);
    let curve = grid
        .iter()
        .map(|&x| {
            let vals: Vec<f64> = results.iter().filter_map(|r| step_value(&r.regret_samples, x)).collect();
            (x, mean_std(&vals).0)
        })
        .collect();
    Aggregate {
        n_trials: results.len(),
        mean_pulls,
        std_pulls,
        correct_rate: if results.is_empty() { 0.0 } else { correct as f64 / results.len() as f64 },
        unsafe_trial_count: results.iter().filter(|r| r.unsafe_pulls_gamma_eps > 0).count(),
        unsafe_safe_trial_count: results.iter().filter(|r| r.unsafe_safe_pulls > 0).count(),
        inconclusive_count: results.iter().filter(|r| r.is_inconclusive()).count(),
        regret_curve: curve,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialSet {
    pub algorithm: Algorithm,
    pub d: usize,
    pub best_arm: usize,
    pub results: Vec<RunResult>,
    pub aggregate: Aggregate,
}

/// Runs every trial, in parallel on the current rayon pool, and aggregates
/// them in trial order.
pub fn run_trials(problem: &Problem, cfg: &TrialConfig) -> Result<TrialSet> {
    if cfg.n_trials == 0 {
        return Err(crate::Error::Parameter("n_trials must be at least 1".into()));
    }
    let results = (0..cfg.n_trials as u64)
        .into_par_iter()
        .map(|k| problem.run_trial(cfg.master_seed, k, cfg.delta, &cfg.limits))
        .collect::<Result<Vec<_>>>()?;
    let best = problem.best_arm();
    let inconclusive = results.iter().filter(|r| r.is_inconclusive()).count();
    if inconclusive > 0 {
        log::warn!("{inconclusive} of {} trials were inconclusive", results.len());
    }
    Ok(TrialSet {
        algorithm: problem.algorithm(),
        d: problem.dim(),
        best_arm: best,
        aggregate: aggregate(&results, best, DEFAULT_GRID_POINTS),
        results,
    })
}

/// `%.9g`-style formatting.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let fixed = format!("{:.*}", (8 - exp).max(0) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const SUMMARY_HEADER: [&str; 7] =
    ["d", "algorithm", "n_trials", "mean_pulls", "std_pulls", "correct_rate", "unsafe_trials"];
pub const REGRET_HEADER: [&str; 4] = ["algorithm", "d", "pulls", "mean_regret"];

pub fn write_summary_csv(path: &Path, sets: &[TrialSet]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(SUMMARY_HEADER)?;
    for s in sets {
        let a = &s.aggregate;
        w.write_record([
            s.d.to_string(),
            s.algorithm.name().to_string(),
            a.n_trials.to_string(),
            fmt_sig(a.mean_pulls),
            fmt_sig(a.std_pulls),
            fmt_sig(a.correct_rate),
            a.unsafe_trial_count.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_regret_csv(path: &Path, sets: &[TrialSet]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(REGRET_HEADER)?;
    for s in sets {
        for &(x, r) in &s.aggregate.regret_curve {
            w.write_record([s.algorithm.name().to_string(), s.d.to_string(), x.to_string(), fmt_sig(r)])?;
        }
    }
    w.flush()?;
    Ok(())
}
