//! Safe best-arm identification with linear responses.
//!
//! Each epoch halves the tolerance, pulls every active coordinate at its
//! verified safe value, re-estimates both slopes from fresh samples and
//! eliminates coordinates whose optimistic value falls below the best
//! pessimistic one.

use rand::Rng;

use crate::env::{argmax, Environment, LinearInstance};
use crate::error::{Error, Result};
use crate::run::{Limits, RunResult, Sampler, Stop};
use crate::trace::PullRole;

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("delta must lie in (0, 1), got {delta}")))
    }
}

pub(crate) fn ceil_count(x: f64) -> u64 {
    // `as` saturates on overflow; NaN never reaches here.
    x.ceil().max(1.0) as u64
}

/// Samples per active coordinate in epoch `ell`: `⌈2σ² ln(8dℓ²/δ) 4^ℓ⌉`, at least 1.
pub fn n_samples_linear(ell: u32, d: usize, delta: f64, sigma2: f64) -> Result<u64> {
    check_delta(delta)?;
    if ell == 0 || d == 0 || !(sigma2 >= 0.0) {
        return Err(Error::Parameter(format!("bad sample-size arguments ell={ell} d={d} sigma2={sigma2}")));
    }
    let ell_f = ell as f64;
    let log = (8.0 * d as f64 * ell_f * ell_f / delta).ln();
    Ok(ceil_count(2.0 * sigma2 * log * 4f64.powi(ell as i32)))
}

/// `min{max{γ/(μ̂ + ε/â), a0}, M}`, or `M` if the denominator is not positive.
pub fn update_safe_value(mu_hat: f64, eps: f64, a_prev: f64, gamma: f64, a0: f64, max_value: f64) -> f64 {
    let den = mu_hat + eps / a_prev;
    if den <= 0.0 {
        return max_value;
    }
    (gamma / den).max(a0).min(max_value)
}

/// `min{γ/(μ̂ − ε/â), M}`, or `M` if the denominator is not positive.
pub fn update_unsafe_value(mu_hat: f64, eps: f64, a_prev: f64, gamma: f64, max_value: f64) -> f64 {
    let den = mu_hat - eps / a_prev;
    if den <= 0.0 {
        return max_value;
    }
    (gamma / den).min(max_value)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearState {
    pub ell: u32,
    pub eps: f64,
    pub active: Vec<usize>,
    pub a_safe: Vec<f64>,
    pub a_unsafe: Vec<f64>,
    /// Value pulled this epoch, the previous epoch's safe value.
    pub a_prev: Vec<f64>,
    pub theta_hat: Vec<f64>,
    pub mu_hat: Vec<f64>,
}

impl LinearState {
    pub fn new(inst: &LinearInstance) -> Self {
        let d = inst.dim();
        Self {
            ell: 0,
            eps: 1.0,
            active: (0..d).collect(),
            a_safe: inst.a0().to_vec(),
            a_unsafe: inst.max_value().to_vec(),
            a_prev: inst.a0().to_vec(),
            theta_hat: vec![f64::NAN; d],
            mu_hat: vec![f64::NAN; d],
        }
    }

    pub fn upper(&self, i: usize) -> f64 {
        self.a_unsafe[i] * (self.theta_hat[i] + self.eps / self.a_prev[i])
    }

    pub fn lower(&self, i: usize) -> f64 {
        self.a_safe[i] * (self.theta_hat[i] - self.eps / self.a_prev[i])
    }
}

/// Pulls `a_prev` `n` times and returns `(θ̂, μ̂)`.
pub fn estimate_slopes<E: Environment, R: Rng + ?Sized>(
    sampler: &mut Sampler<'_, E, R>,
    i: usize,
    a_prev: f64,
    n: u64,
) -> Result<(f64, f64)> {
    if !(a_prev > 0.0) {
        return Err(Error::Invariant(format!("pull value {a_prev} is not positive")));
    }
    let (y, z) = sampler.sample_mean(i, a_prev, n, PullRole::Safe)?;
    Ok((y / a_prev, z / a_prev))
}

/// Active coordinates whose upper bound reaches the largest lower bound.
pub fn eliminate_linear(state: &LinearState) -> Result<Vec<usize>> {
    let best_lower = state.active.iter().map(|&j| state.lower(j)).fold(f64::NEG_INFINITY, f64::max);
    let kept: Vec<usize> = state.active.iter().copied().filter(|&i| state.upper(i) >= best_lower).collect();
    if kept.is_empty() {
        return Err(Error::Invariant(format!("elimination emptied the active set in epoch {}", state.ell)));
    }
    Ok(kept)
}

fn empirical_best(state: &LinearState) -> Option<usize> {
    let candidates: Vec<usize> = state.active.iter().copied().filter(|&i| !state.theta_hat[i].is_nan()).collect();
    if candidates.is_empty() {
        return None;
    }
    let k = argmax(candidates.iter().map(|&i| state.theta_hat[i] * state.a_safe[i]));
    Some(candidates[k])
}

fn record_regret<R: Rng + ?Sized>(sampler: &mut Sampler<'_, LinearInstance, R>, state: &LinearState) {
    if let Some(i) = empirical_best(state) {
        sampler.record_regret(i, state.a_safe[i]);
    }
}

pub fn run_linear<R: Rng + ?Sized>(
    inst: &LinearInstance,
    delta: f64,
    rng: &mut R,
    limits: &Limits,
) -> Result<RunResult> {
    check_delta(delta)?;
    if limits.max_epoch == 0 {
        return Err(Error::Parameter("max_epoch must be at least 1".into()));
    }
    let d = inst.dim();
    let (gamma, a0, max_value) = (inst.gamma(), inst.a0(), inst.max_value());
    let mut state = LinearState::new(inst);
    let mut sampler = Sampler::new(inst, rng, 0.0, limits);
    let mut eliminated_at = vec![None; d];

    let stop = loop {
        if state.active.len() <= 1 {
            break Stop::Identified;
        }
        if state.ell >= limits.max_epoch {
            break Stop::EpochLimit;
        }
        let ell = state.ell + 1;
        let n = n_samples_linear(ell, d, delta, inst.sigma2())?;
        if !sampler.has_budget(n.saturating_mul(state.active.len() as u64)) {
            break Stop::PullLimit;
        }
        state.ell = ell;
        state.eps = 0.5f64.powi(ell as i32);
        sampler.begin_epoch(ell);

        for k in 0..state.active.len() {
            let i = state.active[k];
            let a_prev = state.a_safe[i];
            let (theta_hat, mu_hat) = estimate_slopes(&mut sampler, i, a_prev, n)?;
            state.a_prev[i] = a_prev;
            state.theta_hat[i] = theta_hat;
            state.mu_hat[i] = mu_hat;
            if a_prev < max_value[i] {
                state.a_safe[i] = update_safe_value(mu_hat, state.eps, a_prev, gamma, a0[i], max_value[i]);
                state.a_unsafe[i] = update_unsafe_value(mu_hat, state.eps, a_prev, gamma, max_value[i]);
            } else {
                state.a_safe[i] = max_value[i];
                state.a_unsafe[i] = max_value[i];
            }
            record_regret(&mut sampler, &state);
        }

        match eliminate_linear(&state) {
            Ok(kept) => {
                for &i in &state.active {
                    if !kept.contains(&i) {
                        eliminated_at[i] = Some(ell);
                    }
                }
                state.active = kept;
            }
            Err(err) => {
                log::warn!("{err}");
                break Stop::Invariant;
            }
        }
        record_regret(&mut sampler, &state);
    };

    let identified = (stop == Stop::Identified).then(|| state.active[0]);
    let best_guess = identified.or_else(|| empirical_best(&state)).unwrap_or(state.active[0]);
    Ok(sampler.finish(identified, best_guess, stop, state.ell, eliminated_at))
}
