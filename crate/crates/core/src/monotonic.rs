//! Safe best-arm identification with monotone responses.
//!
//! Per epoch and active coordinate: re-estimate at the carried safe value,
//! climb the safe value towards `g⁻¹(γ)`, then either climb the unsafe value
//! towards `g⁻¹(γ + ε_safe)` until a threshold crossing is certified, or, once
//! crossed, binary-search the unsafe value back down towards `g⁻¹(γ)`.
//! Coordinates with a certified crossing whose optimistic reward falls below
//! the best pessimistic one are eliminated.

use rand::Rng;

use crate::env::{argmax, Environment, MonotonicInstance};
use crate::error::{Error, Result};
use crate::linear::{ceil_count, check_delta};
use crate::run::{Limits, RunResult, Sampler, Stop};
use crate::trace::PullRole;

/// `⌈2σ² ln(8t²/δ) 4^ℓ⌉`, at least 1.
pub fn n_samples_monotonic(ell: u32, t: u64, delta: f64, sigma2: f64) -> Result<u64> {
    let t = t as f64;
    n_samples_with(ell, 8.0 * t * t, delta, sigma2)
}

/// Experimental variant with `8t²` replaced by `8² = 64`.
pub fn n_samples_simplified(ell: u32, delta: f64, sigma2: f64) -> Result<u64> {
    n_samples_with(ell, 64.0, delta, sigma2)
}

fn n_samples_with(ell: u32, numerator: f64, delta: f64, sigma2: f64) -> Result<u64> {
    check_delta(delta)?;
    if ell == 0 || !(numerator >= 8.0) || !(sigma2 >= 0.0) {
        return Err(Error::Parameter(format!("bad sample-size arguments ell={ell} sigma2={sigma2}")));
    }
    Ok(ceil_count(2.0 * sigma2 * (numerator / delta).ln() * 4f64.powi(ell as i32)))
}

/// One climbing step: `target + a − ĝ(a) − ε`.
pub fn climb_step(target: f64, a: f64, g_hat: f64, eps: f64) -> f64 {
    target + a - g_hat - eps
}

/// Crossing test `ĝ − ε ≥ γ`.
pub fn crosses(g_hat: f64, eps: f64, gamma: f64) -> bool {
    g_hat - eps >= gamma
}

/// Binary-search step towards the epoch-start unsafe value: `a_u0/2 + a/2`.
pub fn bisect_step(a_u0: f64, a: f64) -> f64 {
    a_u0 / 2.0 + a / 2.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicState {
    pub ell: u32,
    pub eps: f64,
    /// Number of the next estimate, starting at 1.
    pub t: u64,
    pub active: Vec<usize>,
    pub a_safe: Vec<f64>,
    pub a_unsafe: Vec<f64>,
    pub unsafe_flag: Vec<bool>,
    pub f_hat_safe: Vec<f64>,
    pub g_hat_safe: Vec<f64>,
    pub f_hat_unsafe: Vec<f64>,
    pub g_hat_unsafe: Vec<f64>,
    /// Estimates taken this epoch on the safe and the unsafe side.
    pub n: Vec<u32>,
    pub m: Vec<u32>,
}

impl MonotonicState {
    pub fn new(inst: &MonotonicInstance) -> Self {
        let d = inst.dim();
        Self {
            ell: 0,
            eps: 1.0,
            t: 1,
            active: (0..d).collect(),
            a_safe: inst.a0().to_vec(),
            a_unsafe: inst.a0().to_vec(),
            unsafe_flag: vec![false; d],
            f_hat_safe: vec![f64::NAN; d],
            g_hat_safe: vec![f64::NAN; d],
            f_hat_unsafe: vec![f64::NAN; d],
            g_hat_unsafe: vec![f64::NAN; d],
            n: vec![0; d],
            m: vec![0; d],
        }
    }
}

/// Removes active coordinates with a certified crossing whose unsafe-side
/// reward plus `2ε` does not exceed the best safe-side reward.
pub fn eliminate_monotonic(state: &MonotonicState) -> Result<Vec<usize>> {
    let best = state.active.iter().map(|&j| state.f_hat_safe[j]).fold(f64::NEG_INFINITY, f64::max);
    let kept: Vec<usize> = state
        .active
        .iter()
        .copied()
        .filter(|&i| !(state.unsafe_flag[i] && state.f_hat_unsafe[i] + 2.0 * state.eps <= best))
        .collect();
    if kept.is_empty() {
        return Err(Error::Invariant(format!("elimination emptied the active set in epoch {}", state.ell)));
    }
    Ok(kept)
}

/// Reason a run stops before identification.
#[derive(Debug)]
pub enum Halt {
    PullLimit,
    LoopGuard,
    Invariant(String),
}

impl From<Error> for Halt {
    fn from(err: Error) -> Self {
        Halt::Invariant(err.to_string())
    }
}

impl Halt {
    fn stop(&self) -> Stop {
        match self {
            Halt::PullLimit => Stop::PullLimit,
            Halt::LoopGuard => Stop::LoopGuard,
            Halt::Invariant(_) => Stop::Invariant,
        }
    }
}

/// State machine for one run. The public methods are the individual steps of
/// an epoch and may be driven directly.
pub struct MonotonicRunner<'a, R: Rng + ?Sized> {
    inst: &'a MonotonicInstance,
    sampler: Sampler<'a, MonotonicInstance, R>,
    pub state: MonotonicState,
    delta: f64,
    simplified: bool,
    limits: Limits,
}

impl<'a, R: Rng + ?Sized> MonotonicRunner<'a, R> {
    pub fn new(
        inst: &'a MonotonicInstance,
        delta: f64,
        simplified: bool,
        rng: &'a mut R,
        limits: &Limits,
    ) -> Result<Self> {
        check_delta(delta)?;
        if limits.max_epoch == 0 {
            return Err(Error::Parameter("max_epoch must be at least 1".into()));
        }
        Ok(Self {
            inst,
            sampler: Sampler::new(inst, rng, inst.eps_safe(), limits),
            state: MonotonicState::new(inst),
            delta,
            simplified,
            limits: *limits,
        })
    }

    pub fn sample_size(&self) -> Result<u64> {
        let (ell, sigma2) = (self.state.ell, self.inst.sigma2());
        if self.simplified {
            n_samples_simplified(ell, self.delta, sigma2)
        } else {
            n_samples_monotonic(ell, self.state.t, self.delta, sigma2)
        }
    }

    /// Advances to the next epoch.
    pub fn begin_epoch(&mut self) {
        self.state.ell += 1;
        self.state.eps = 0.5f64.powi(self.state.ell as i32);
        self.sampler.begin_epoch(self.state.ell);
    }

    fn guard(&self) -> u64 {
        let span = (self.limits.value_range / self.state.eps).ceil() as u64;
        10 * (self.state.ell as u64 + span)
    }

    /// Sample means of `(y, z)` at `(i, a)` using the current `N_{ℓ,t}`.
    pub fn estimate(&mut self, i: usize, a: f64, role: PullRole) -> std::result::Result<(f64, f64), Halt> {
        let n = self.sample_size()?;
        if !self.sampler.has_budget(n) {
            return Err(Halt::PullLimit);
        }
        let means = self.sampler.sample_mean(i, a, n, role)?;
        self.state.t += 1;
        Ok(means)
    }

    fn estimate_safe(&mut self, i: usize) -> std::result::Result<(), Halt> {
        let (f, g) = self.estimate(i, self.state.a_safe[i], PullRole::Safe)?;
        self.state.f_hat_safe[i] = f;
        self.state.g_hat_safe[i] = g;
        self.record_regret();
        Ok(())
    }

    fn estimate_unsafe(&mut self, i: usize, a: f64) -> std::result::Result<f64, Halt> {
        let (f, g) = self.estimate(i, a, PullRole::Unsafe)?;
        self.state.f_hat_unsafe[i] = f;
        self.state.g_hat_unsafe[i] = g;
        self.record_regret();
        Ok(g)
    }

    /// Re-estimates at the carried safe value and climbs while
    /// `γ − ĝ > 2ε`.
    pub fn climb_safe(&mut self, i: usize) -> std::result::Result<(), Halt> {
        let gamma = self.inst.gamma();
        self.state.n[i] = 0;
        self.estimate_safe(i)?;
        let guard = self.guard();
        let mut iterations = 0;
        while gamma - self.state.g_hat_safe[i] > 2.0 * self.state.eps {
            iterations += 1;
            if iterations > guard {
                return Err(Halt::LoopGuard);
            }
            let a = self.state.a_safe[i];
            let next = self.inst.clamp(i, climb_step(gamma, a, self.state.g_hat_safe[i], self.state.eps));
            if next <= a {
                // Pinned at the cap.
                break;
            }
            self.state.a_safe[i] = next;
            self.estimate_safe(i)?;
            self.state.n[i] += 1;
        }
        Ok(())
    }

    /// Estimates at the carried unsafe value and climbs towards
    /// `γ + ε_safe`, setting the flag once `ĝ − ε ≥ γ`.
    pub fn climb_unsafe(&mut self, i: usize) -> std::result::Result<(), Halt> {
        let gamma = self.inst.gamma();
        let target = gamma + self.inst.eps_safe();
        let eps = self.state.eps;
        self.state.m[i] = 0;
        let mut a = self.state.a_unsafe[i];
        let mut g = self.estimate_unsafe(i, a)?;
        let guard = self.guard();
        let mut iterations = 0;
        while target - g > 2.0 * eps {
            iterations += 1;
            if iterations > guard {
                return Err(Halt::LoopGuard);
            }
            let next = self.inst.clamp(i, climb_step(target, a, g, eps));
            if next <= a {
                // Pinned at the cap: test the crossing at the cap itself.
                self.state.unsafe_flag[i] = crosses(g, eps, gamma);
                break;
            }
            a = next;
            self.state.a_unsafe[i] = a;
            g = self.estimate_unsafe(i, a)?;
            if crosses(g, eps, gamma) {
                self.state.unsafe_flag[i] = true;
                break;
            }
            self.state.m[i] += 1;
        }
        self.state.a_unsafe[i] = a;
        Ok(())
    }

    /// Halves the distance between the safe value and the epoch-start unsafe
    /// value until a probe crosses `γ` or lies within `ε` of the start.
    pub fn binary_search_unsafe(&mut self, i: usize) -> std::result::Result<(), Halt> {
        let gamma = self.inst.gamma();
        let eps = self.state.eps;
        let a_u0 = self.state.a_unsafe[i];
        let mut a = bisect_step(a_u0, self.state.a_safe[i]);
        let mut g = self.estimate_unsafe(i, a)?;
        self.state.m[i] = 1;
        let guard = self.guard();
        let mut iterations = 0;
        let carried = loop {
            if crosses(g, eps, gamma) {
                break a;
            }
            iterations += 1;
            if iterations > guard {
                return Err(Halt::LoopGuard);
            }
            let next = bisect_step(a_u0, a);
            if a_u0 - next <= eps {
                break a_u0;
            }
            a = next;
            g = self.estimate_unsafe(i, a)?;
            self.state.m[i] += 1;
        };
        self.state.a_unsafe[i] = carried;
        Ok(())
    }

    /// Processes every active coordinate once.
    pub fn run_epoch_body(&mut self) -> std::result::Result<(), Halt> {
        for k in 0..self.state.active.len() {
            let i = self.state.active[k];
            let before = self.state.a_safe[i];
            self.climb_safe(i)?;
            if self.state.a_safe[i] < before {
                return Err(Halt::Invariant(format!("safe value of coordinate {i} decreased")));
            }
            if self.state.unsafe_flag[i] {
                self.binary_search_unsafe(i)?;
            } else {
                self.climb_unsafe(i)?;
            }
        }
        Ok(())
    }

    fn empirical_best(&self) -> Option<usize> {
        let st = &self.state;
        let candidates: Vec<usize> = st.active.iter().copied().filter(|&i| !st.f_hat_safe[i].is_nan()).collect();
        if candidates.is_empty() {
            return None;
        }
        Some(candidates[argmax(candidates.iter().map(|&i| st.f_hat_safe[i]))])
    }

    fn record_regret(&mut self) {
        if let Some(i) = self.empirical_best() {
            self.sampler.record_regret(i, self.state.a_safe[i]);
        }
    }

    pub fn run(mut self) -> RunResult {
        let d = self.inst.dim();
        let mut eliminated_at = vec![None; d];
        let stop = loop {
            if self.state.active.len() <= 1 {
                break Stop::Identified;
            }
            if self.state.ell >= self.limits.max_epoch {
                break Stop::EpochLimit;
            }
            self.begin_epoch();
            if let Err(halt) = self.run_epoch_body() {
                if let Halt::Invariant(msg) = &halt {
                    log::warn!("{msg}");
                }
                break halt.stop();
            }
            match eliminate_monotonic(&self.state) {
                Ok(kept) => {
                    for &i in &self.state.active {
                        if !kept.contains(&i) {
                            eliminated_at[i] = Some(self.state.ell);
                        }
                    }
                    self.state.active = kept;
                }
                Err(err) => {
                    log::warn!("{err}");
                    break Stop::Invariant;
                }
            }
            self.record_regret();
        };
        let identified = (stop == Stop::Identified).then(|| self.state.active[0]);
        let best_guess = identified.or_else(|| self.empirical_best()).unwrap_or(self.state.active[0]);
        let epochs = self.state.ell;
        self.sampler.finish(identified, best_guess, stop, epochs, eliminated_at)
    }
}

pub fn run_monotonic<R: Rng + ?Sized>(
    inst: &MonotonicInstance,
    delta: f64,
    simplified: bool,
    rng: &mut R,
    limits: &Limits,
) -> Result<RunResult> {
    Ok(MonotonicRunner::new(inst, delta, simplified, rng, limits)?.run())
}
