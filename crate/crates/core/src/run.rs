//! Run bookkeeping shared by both algorithms: limits, the audited sampler and
//! the per-run result.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::env::Environment;
use crate::error::Result;
use crate::trace::{PullRole, PullTrace, TraceEntry};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Limits {
    pub max_epoch: u32,
    /// Hard cap on pulls per run. An epoch or estimate that would exceed it is not started.
    pub max_pulls: u64,
    /// Rough width of the value range to be searched. Sizes the inner-loop guard.
    pub value_range: f64,
    pub record_trace: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_epoch: 40, max_pulls: 1_000_000, value_range: 10.0, record_trace: false }
    }
}

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stop {
    Identified,
    EpochLimit,
    PullLimit,
    LoopGuard,
    Invariant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    /// `None` when the run is inconclusive.
    pub identified: Option<usize>,
    /// Identified coordinate, or the current empirical best when inconclusive.
    pub best_guess: usize,
    pub stop: Stop,
    pub total_pulls: u64,
    pub per_epoch_pulls: Vec<u64>,
    /// Pulls whose true safety level exceeded gamma.
    pub unsafe_pulls_gamma: u64,
    /// Pulls whose true safety level exceeded gamma + eps_safe. Equals
    /// `unsafe_pulls_gamma` in the linear setting.
    pub unsafe_pulls_gamma_eps: u64,
    /// Pulls at a tracked safe value whose true safety level exceeded gamma.
    pub unsafe_safe_pulls: u64,
    /// `(cumulative pulls, simple regret)` with strictly increasing pulls.
    pub regret_samples: Vec<(u64, f64)>,
    pub epochs: u32,
    /// Epoch in which each coordinate was eliminated.
    pub eliminated_at: Vec<Option<u32>>,
    pub seed: u64,
    pub trace: Option<PullTrace>,
}

impl RunResult {
    pub fn is_inconclusive(&self) -> bool {
        self.identified.is_none()
    }

    pub fn is_correct(&self, best: usize) -> bool {
        self.identified == Some(best)
    }
}

/// Pulls from an environment while auditing safety against the ground truth
/// and counting pulls per epoch.
pub struct Sampler<'a, E: Environment, R: Rng + ?Sized> {
    env: &'a E,
    rng: &'a mut R,
    eps_safe: f64,
    max_pulls: u64,
    optimum: f64,
    trace: Option<PullTrace>,
    pulls: u64,
    epoch: u32,
    per_epoch: Vec<u64>,
    unsafe_gamma: u64,
    unsafe_gamma_eps: u64,
    unsafe_safe: u64,
    regret: Vec<(u64, f64)>,
}

impl<'a, E: Environment, R: Rng + ?Sized> Sampler<'a, E, R> {
    pub fn new(env: &'a E, rng: &'a mut R, eps_safe: f64, limits: &Limits) -> Self {
        Self {
            env,
            rng,
            eps_safe,
            max_pulls: limits.max_pulls,
            optimum: env.max_safe_value(env.best_arm()),
            trace: limits.record_trace.then(PullTrace::default),
            pulls: 0,
            epoch: 0,
            per_epoch: Vec::new(),
            unsafe_gamma: 0,
            unsafe_gamma_eps: 0,
            unsafe_safe: 0,
            regret: Vec::new(),
        }
    }

    pub fn env(&self) -> &'a E {
        self.env
    }

    pub fn pulls(&self) -> u64 {
        self.pulls
    }

    pub fn begin_epoch(&mut self, epoch: u32) {
        self.epoch = epoch;
        self.per_epoch.push(0);
    }

    pub fn has_budget(&self, n: u64) -> bool {
        self.pulls.saturating_add(n) <= self.max_pulls
    }

    /// Pulls `(i, a)` `n` times and returns the sample means of `y` and `z`.
    pub fn sample_mean(&mut self, i: usize, a: f64, n: u64, role: PullRole) -> Result<(f64, f64)> {
        let gamma = self.env.gamma();
        let level = self.env.safety_level(i, a);
        let within_gamma = level <= gamma;
        let within_eps = level <= gamma + self.eps_safe;
        let (mut sy, mut sz) = (0.0, 0.0);
        for _ in 0..n {
            let obs = self.env.pull(i, a, self.rng)?;
            sy += obs.y;
            sz += obs.z;
            self.pulls += 1;
            if let Some(trace) = &mut self.trace {
                trace.push(TraceEntry {
                    t: self.pulls,
                    epoch: self.epoch,
                    coordinate: i,
                    value: a,
                    role,
                    obs,
                    true_safety_level: level,
                    within_gamma,
                    within_gamma_plus_eps: within_eps,
                });
            }
        }
        if let Some(last) = self.per_epoch.last_mut() {
            *last += n;
        }
        if !within_gamma {
            self.unsafe_gamma += n;
            if role == PullRole::Safe {
                self.unsafe_safe += n;
            }
        }
        if !within_eps {
            self.unsafe_gamma_eps += n;
        }
        let n = n as f64;
        Ok((sy / n, sz / n))
    }

    /// Records the simple regret of recommending coordinate `i` at value `a`.
    /// A sample at the current pull count replaces the previous one.
    pub fn record_regret(&mut self, i: usize, a: f64) {
        let r = self.optimum - self.env.mean_reward(i, a);
        match self.regret.last_mut() {
            Some(last) if last.0 == self.pulls => last.1 = r,
            _ => self.regret.push((self.pulls, r)),
        }
    }

    pub(crate) fn finish(
        self,
        identified: Option<usize>,
        best_guess: usize,
        stop: Stop,
        epochs: u32,
        eliminated_at: Vec<Option<u32>>,
    ) -> RunResult {
        RunResult {
            identified,
            best_guess,
            stop,
            total_pulls: self.pulls,
            per_epoch_pulls: self.per_epoch,
            unsafe_pulls_gamma: self.unsafe_gamma,
            unsafe_pulls_gamma_eps: self.unsafe_gamma_eps,
            unsafe_safe_pulls: self.unsafe_safe,
            regret_samples: self.regret,
            epochs,
            eliminated_at,
            seed: 0,
            trace: self.trace,
        }
    }
}
