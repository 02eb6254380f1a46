//! Instances, noiseless reference implementations and brute-force oracles
//! shared by the integration tests.

#![allow(dead_code)]

use safebai::linear::{update_safe_value, update_unsafe_value};
use safebai::monotonic::{eliminate_monotonic, MonotonicRunner};
use safebai::theory::{gap_linear, gap_monotonic, lower_bound, sample_complexity_upper_linear, xi};
use safebai::{
    run_linear, run_monotonic, trial_rng, Curve, Environment, Limits, LinearInstance, MonotonicInstance, RunResult,
};

pub const DELTA: f64 = 0.1;
pub const ORACLE_MAX_EPOCH: u32 = 25;
pub const VALUE_TOL: f64 = 1e-12;
pub const GAP_TOL: f64 = 1e-4;
pub const GRID: usize = 1_000_000;

pub fn pattern(d: usize, first: f64, second: f64, rest: f64) -> Vec<f64> {
    (0..d).map(|i| [first, second].get(i).copied().unwrap_or(rest)).collect()
}

pub fn benchmark_linear(d: usize) -> LinearInstance {
    LinearInstance::new(pattern(d, 1.0, 0.9, 1.0), pattern(d, 1.0, 1.5, 5.0), 1.0, vec![0.1; d], vec![1.5; d], 0.5)
        .unwrap()
}

pub fn drug(d: usize) -> MonotonicInstance {
    MonotonicInstance::logistic(&pattern(d, 0.01, 10.0, 10.0), &vec![1.0; d], 0.3, 0.1, vec![-3.0; d], 0.1).unwrap()
}

pub fn traced_limits(max_epoch: u32) -> Limits {
    Limits { max_epoch, max_pulls: 1_000_000, value_range: 10.0, record_trace: true }
}

pub fn linear_corpus() -> Vec<(&'static str, LinearInstance)> {
    vec![
        ("benchmark d=5", benchmark_linear(5)),
        ("benchmark d=10", benchmark_linear(10)),
        (
            "two arms",
            LinearInstance::new(vec![1.0, 0.5], vec![1.0, 1.0], 1.0, vec![0.1; 2], vec![1.5; 2], 0.5).unwrap(),
        ),
        (
            "cap binds",
            LinearInstance::new(vec![1.0, 2.0, 0.7], vec![0.2, 4.0, 0.5], 1.0, vec![0.2; 3], vec![1.0, 1.0, 1.2], 0.3)
                .unwrap(),
        ),
        (
            "mixed",
            LinearInstance::new(
                vec![0.6, 1.3, 0.9, 2.0],
                vec![0.8, 2.0, 0.3, 5.0],
                0.8,
                vec![0.05, 0.1, 0.2, 0.05],
                vec![2.0, 2.0, 3.0, 1.0],
                0.2,
            )
            .unwrap(),
        ),
    ]
}

pub fn monotonic_corpus() -> Vec<(&'static str, MonotonicInstance)> {
    let probit = MonotonicInstance::new(
        vec![(Curve::probit(1.0), Curve::probit(0.8)), (Curve::probit(0.3), Curve::probit(0.5))],
        0.4,
        0.1,
        vec![-2.0, -2.0],
        0.1,
    )
    .unwrap();
    vec![
        ("drug d=3", drug(3)),
        ("drug d=5", drug(5)),
        ("drug d=3 capped", drug(3).with_cap(vec![-0.5; 3]).unwrap()),
        (
            "varied slopes",
            MonotonicInstance::logistic(&[2.0, 0.5, 1.0, 3.0], &[1.0, 2.0, 0.5, 4.0], 0.25, 0.05, vec![-4.0; 4], 0.1)
                .unwrap(),
        ),
        ("probit", probit),
    ]
}

pub struct Reference {
    pub pulls: Vec<(usize, f64)>,
    pub identified: Option<usize>,
}

/// Straight-line noiseless linear recursion.
pub fn linear_reference(inst: &LinearInstance) -> Reference {
    let d = inst.dim();
    let gamma = inst.gamma();
    let (theta, mu, a0, m) = (inst.theta(), inst.mu(), inst.a0(), inst.max_value());
    let mut active: Vec<usize> = (0..d).collect();
    let mut a_s = a0.to_vec();
    let mut a_u = m.to_vec();
    let mut a_prev = a0.to_vec();
    let mut th = vec![0.0; d];
    let mut pulls = Vec::new();

    let mut ell = 0;
    while active.len() > 1 && ell < ORACLE_MAX_EPOCH {
        ell += 1;
        let eps = 0.5f64.powi(ell as i32);
        for &i in &active {
            let a = a_s[i];
            pulls.push((i, a));
            th[i] = (a * theta[i]) / a;
            let mh = (a * mu[i]) / a;
            a_prev[i] = a;
            if a >= m[i] {
                a_s[i] = m[i];
                a_u[i] = m[i];
                continue;
            }
            let lo_den = mh + eps / a;
            a_s[i] = if lo_den <= 0.0 { m[i] } else { (gamma / lo_den).max(a0[i]).min(m[i]) };
            let hi_den = mh - eps / a;
            a_u[i] = if hi_den <= 0.0 { m[i] } else { (gamma / hi_den).min(m[i]) };
        }
        let mut best_lower = f64::NEG_INFINITY;
        for &j in &active {
            best_lower = best_lower.max(a_s[j] * (th[j] - eps / a_prev[j]));
        }
        active.retain(|&i| a_u[i] * (th[i] + eps / a_prev[i]) >= best_lower);
        assert!(!active.is_empty());
    }
    Reference { pulls, identified: (active.len() == 1).then(|| active[0]) }
}

/// Straight-line noiseless monotonic recursion.
pub fn monotonic_reference(inst: &MonotonicInstance) -> Reference {
    let d = inst.dim();
    let gamma = inst.gamma();
    let top = gamma + inst.eps_safe();
    let cap = |i: usize, a: f64| inst.cap().map_or(a, |c| a.min(c[i]));
    let f = |i: usize, a: f64| inst.reward_curve(i).eval(a);
    let g = |i: usize, a: f64| inst.safety_curve(i).eval(a);

    let mut active: Vec<usize> = (0..d).collect();
    let mut a_s = inst.a0().to_vec();
    let mut a_u = inst.a0().to_vec();
    let mut crossed = vec![false; d];
    let mut f_s = vec![0.0; d];
    let mut f_u = vec![0.0; d];
    let mut pulls = Vec::new();

    let mut ell = 0;
    while active.len() > 1 && ell < ORACLE_MAX_EPOCH {
        ell += 1;
        let eps = 0.5f64.powi(ell as i32);
        for &i in &active {
            let mut a = a_s[i];
            pulls.push((i, a));
            f_s[i] = f(i, a);
            let mut gs = g(i, a);
            while gamma - gs > 2.0 * eps {
                let next = cap(i, gamma + a - gs - eps);
                if next <= a {
                    break;
                }
                a = next;
                pulls.push((i, a));
                f_s[i] = f(i, a);
                gs = g(i, a);
            }
            a_s[i] = a;

            if !crossed[i] {
                let mut b = a_u[i];
                pulls.push((i, b));
                f_u[i] = f(i, b);
                let mut gu = g(i, b);
                while top - gu > 2.0 * eps {
                    let next = cap(i, top + b - gu - eps);
                    if next <= b {
                        crossed[i] = gu - eps >= gamma;
                        break;
                    }
                    b = next;
                    pulls.push((i, b));
                    f_u[i] = f(i, b);
                    gu = g(i, b);
                    if gu - eps >= gamma {
                        crossed[i] = true;
                        break;
                    }
                }
                a_u[i] = b;
            } else {
                let start = a_u[i];
                let mut b = start / 2.0 + a_s[i] / 2.0;
                loop {
                    pulls.push((i, b));
                    f_u[i] = f(i, b);
                    if g(i, b) - eps >= gamma {
                        a_u[i] = b;
                        break;
                    }
                    let next = start / 2.0 + b / 2.0;
                    if start - next <= eps {
                        a_u[i] = start;
                        break;
                    }
                    b = next;
                }
            }
        }
        let best = active.iter().map(|&j| f_s[j]).fold(f64::NEG_INFINITY, f64::max);
        active.retain(|&i| !(crossed[i] && f_u[i] + 2.0 * eps <= best));
        assert!(!active.is_empty());
    }
    Reference { pulls, identified: (active.len() == 1).then(|| active[0]) }
}

pub fn compare_pulls(run: &RunResult, reference: &Reference) -> Result<(), String> {
    let trace = run.trace.as_ref().ok_or("no trace recorded")?;
    let got: Vec<(usize, f64)> = trace.entries().iter().map(|e| (e.coordinate, e.value)).collect();
    if got.len() != reference.pulls.len() {
        return Err(format!("{} pulls, reference has {}", got.len(), reference.pulls.len()));
    }
    for (k, (a, b)) in got.iter().zip(&reference.pulls).enumerate() {
        if a.0 != b.0 || (a.1 - b.1).abs() > VALUE_TOL * b.1.abs().max(1.0) {
            return Err(format!("pull {k}: ({}, {}) vs reference ({}, {})", a.0, a.1, b.0, b.1));
        }
    }
    if run.identified != reference.identified {
        return Err(format!("identified {:?}, reference {:?}", run.identified, reference.identified));
    }
    Ok(())
}

/// Runs both algorithms noiselessly on their corpora and compares against the
/// references, under both monotonic sample-size schedules.
pub fn check_noiseless_oracles() -> Result<(), String> {
    let lim = traced_limits(ORACLE_MAX_EPOCH);
    for (name, inst) in linear_corpus() {
        let inst = inst.with_sigma2(0.0).unwrap();
        let run = run_linear(&inst, DELTA, &mut trial_rng(1, 0), &lim).unwrap();
        compare_pulls(&run, &linear_reference(&inst)).map_err(|e| format!("linear {name}: {e}"))?;
    }
    for (name, inst) in monotonic_corpus() {
        let inst = inst.with_sigma2(0.0).unwrap();
        for simplified in [false, true] {
            let run = run_monotonic(&inst, DELTA, simplified, &mut trial_rng(1, 0), &lim).unwrap();
            compare_pulls(&run, &monotonic_reference(&inst)).map_err(|e| format!("monotonic {name}: {e}"))?;
        }
    }
    Ok(())
}

pub fn check_replay(seeds: &[u64]) -> Result<(), String> {
    let lim = traced_limits(40);
    for &seed in seeds {
        for (name, inst) in linear_corpus() {
            let a = run_linear(&inst, DELTA, &mut trial_rng(seed, 0), &lim).unwrap();
            let b = run_linear(&inst, DELTA, &mut trial_rng(seed, 0), &lim).unwrap();
            if a != b {
                return Err(format!("linear {name} seed {seed} differs on replay"));
            }
        }
        for (name, inst) in monotonic_corpus() {
            let a = run_monotonic(&inst, DELTA, true, &mut trial_rng(seed, 0), &lim).unwrap();
            let b = run_monotonic(&inst, DELTA, true, &mut trial_rng(seed, 0), &lim).unwrap();
            if a != b {
                return Err(format!("monotonic {name} seed {seed} differs on replay"));
            }
        }
    }
    Ok(())
}

/// `1 ≤ ξ_a(x) ≤ max{x,2}^z + 2^{a²/z}` on a grid of `a`, log-spaced `x` and `z`.
pub fn check_xi_grid() -> Result<(), String> {
    let alphas = [1.0, 2.0, 4.0, 32f64.sqrt()];
    let xs: Vec<f64> = (0..=240).map(|k| 10f64.powf(k as f64 / 40.0)).collect();
    let zs: Vec<f64> = (0..=60).map(|k| 0.25 + 3.75 * k as f64 / 60.0).collect();
    for &a in &alphas {
        for &x in &xs {
            let v = xi(a, x);
            if v < 1.0 {
                return Err(format!("xi_{a}({x}) = {v} < 1"));
            }
            for &z in &zs {
                let bound = x.max(2.0).powf(z) + 2f64.powf(a * a / z);
                if v > bound * (1.0 + 1e-12) {
                    return Err(format!("xi_{a}({x}) = {v} exceeds {bound} at z = {z}"));
                }
            }
        }
    }
    Ok(())
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Best safe reward per arm by brute force over a uniform grid on `[0, M]`.
pub fn linear_grid_values(inst: &LinearInstance) -> Vec<f64> {
    (0..inst.dim())
        .map(|i| {
            let (th, mu, m) = (inst.theta()[i], inst.mu()[i], inst.max_value()[i]);
            let mut best = f64::NEG_INFINITY;
            for k in 0..=GRID {
                let a = m * k as f64 / GRID as f64;
                if a * mu <= inst.gamma() {
                    best = best.max(a * th);
                }
            }
            best
        })
        .collect()
}

/// Best safe reward per arm by brute force over a uniform grid on
/// `[a0, a0 + 40/μ]`, with the logistic curves written out here.
pub fn logistic_grid_values(inst: &MonotonicInstance) -> Vec<f64> {
    (0..inst.dim())
        .map(|i| {
            let (th, mu) = (inst.reward_curve(i).rate, inst.safety_curve(i).rate);
            let (lo, hi) = (inst.a0()[i], inst.a0()[i] + 40.0 / mu);
            let mut best = f64::NEG_INFINITY;
            for k in 0..=GRID {
                let a = lo + (hi - lo) * k as f64 / GRID as f64;
                if logistic(mu * a) <= inst.gamma() {
                    best = best.max(logistic(th * a));
                }
            }
            best
        })
        .collect()
}

fn compare_gaps(closed: impl Fn(usize) -> f64, grid: &[f64]) -> Result<(), String> {
    let top = grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for (i, v) in grid.iter().enumerate() {
        let gap = closed(i);
        if (gap - (top - v)).abs() >= GAP_TOL {
            return Err(format!("arm {i}: closed form {gap}, grid {}", top - v));
        }
    }
    Ok(())
}

pub fn check_linear_gaps(inst: &LinearInstance) -> Result<(), String> {
    compare_gaps(|i| gap_linear(inst, i), &linear_grid_values(inst))
}

pub fn check_logistic_gaps(inst: &MonotonicInstance) -> Result<(), String> {
    compare_gaps(|i| gap_monotonic(inst, i).unwrap(), &logistic_grid_values(inst))
}

/// Drives the monotonic runner step by step, checking the state invariants
/// after every inner loop.
pub fn check_monotonic_invariants(inst: &MonotonicInstance, seed: u64, epochs: u32) -> Result<(), String> {
    let mut rng = trial_rng(seed, 3);
    let lim = Limits { max_epoch: 40, max_pulls: 300_000, value_range: 10.0, record_trace: false };
    let mut runner = MonotonicRunner::new(inst, DELTA, true, &mut rng, &lim).unwrap();
    let a0 = inst.a0().to_vec();
    for _ in 0..epochs {
        if runner.state.active.len() <= 1 {
            break;
        }
        runner.begin_epoch();
        for i in runner.state.active.clone() {
            let (before, flag) = (runner.state.a_safe[i], runner.state.unsafe_flag[i]);
            if runner.climb_safe(i).is_err() {
                return Ok(());
            }
            if runner.state.a_safe[i] < before {
                return Err(format!("arm {i}: safe value fell from {before} to {}", runner.state.a_safe[i]));
            }
            let step = if flag { runner.binary_search_unsafe(i) } else { runner.climb_unsafe(i) };
            if step.is_err() {
                return Ok(());
            }
            let st = &runner.state;
            if st.a_safe[i] < a0[i] || st.a_unsafe[i] < a0[i] {
                return Err(format!("arm {i}: value below a0"));
            }
            if flag && !st.unsafe_flag[i] {
                return Err(format!("arm {i}: unsafe flag was reset"));
            }
        }
        runner.state.active = eliminate_monotonic(&runner.state).map_err(|e| e.to_string())?;
    }
    Ok(())
}

/// `update_unsafe_value ≥ update_safe_value` whenever neither clamp binds.
pub fn check_update_order() -> Result<(), String> {
    let (a0, m) = (1e-9, 1e9);
    for ell in 1..=20 {
        let eps = 0.5f64.powi(ell);
        for k in 1..=40 {
            let mu_hat = 0.25 * k as f64;
            for a_prev in [0.05, 0.1, 0.5, 1.0, 2.0, 3.0] {
                if mu_hat - eps / a_prev <= 0.0 {
                    continue;
                }
                for gamma in [0.1, 0.5, 1.0, 2.0, 5.0] {
                    let s = update_safe_value(mu_hat, eps, a_prev, gamma, a0, m);
                    let u = update_unsafe_value(mu_hat, eps, a_prev, gamma, m);
                    if u < s {
                        return Err(format!("mu_hat={mu_hat} eps={eps} a_prev={a_prev} gamma={gamma}: {u} < {s}"));
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn complexity_corpus() -> Vec<LinearInstance> {
    let mut v: Vec<LinearInstance> = linear_corpus().into_iter().map(|(_, inst)| inst).collect();
    v.push(benchmark_linear(20));
    v.push(LinearInstance::new(vec![1.0, 0.8], vec![1.0, 1.0], 1.0, vec![0.1; 2], vec![1.0, 5.0], 1.0).unwrap());
    v
}

pub fn check_upper_dominates_lower(inst: &LinearInstance) -> Result<(), String> {
    let upper = sample_complexity_upper_linear(inst, DELTA).map_err(|e| e.to_string())?;
    let lower = lower_bound(inst, DELTA).map_err(|e| e.to_string())?.value;
    if upper >= lower {
        Ok(())
    } else {
        Err(format!("upper {upper} < lower {lower}"))
    }
}
