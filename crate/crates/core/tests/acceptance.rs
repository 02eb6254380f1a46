//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Every threshold is pinned below.

mod common;

use std::time::{Duration, Instant};

use common::{benchmark_linear, drug, DELTA};
use safebai::harness::{run_trials, Problem, TrialConfig, TrialSet};
use safebai::theory::{gap_linear, gap_monotonic, lower_bound, predicted_elimination_epoch};
use safebai::{Environment, Limits};

const LINEAR_SEED: u64 = 20240601;
const DRUG_SEED: u64 = 20240602;

const LINEAR_RUNTIME: Duration = Duration::from_secs(60);
const DRUG_RUNTIME: Duration = Duration::from_secs(120);
const GAP_EXACT_TOL: f64 = 1e-12;
const DRUG_GAP: f64 = 0.497;
const DRUG_GAP_TOL: f64 = 0.001;
const SCALING_RATIO: (f64, f64) = (2.0, 6.0);
const EPOCH_BOUND_MIN_TRIALS: usize = 45;
const DRUG_MIN_CORRECT: usize = 19;
const REGRET_RATIO: f64 = 0.5;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn from_check(r: Result<(), String>, ok: &str) -> Outcome {
    match r {
        Ok(()) => outcome(true, ok),
        Err(e) => outcome(false, e),
    }
}

fn trials(problem: &Problem, n_trials: usize, master_seed: u64) -> (TrialSet, Duration) {
    let cfg = TrialConfig { delta: DELTA, n_trials, master_seed, limits: Limits::default() };
    let start = Instant::now();
    let set = run_trials(problem, &cfg).expect("trials run");
    (set, start.elapsed())
}

fn linear_correctness_and_safety() -> Outcome {
    let (set, elapsed) = trials(&Problem::Linear(benchmark_linear(10)), 10, LINEAR_SEED);
    let correct = set.results.iter().filter(|r| r.is_correct(0)).count();
    let unsafe_pulls: u64 = set.results.iter().map(|r| r.unsafe_pulls_gamma).sum();
    outcome(
        correct == 10 && unsafe_pulls == 0 && elapsed < LINEAR_RUNTIME,
        format!(
            "{correct}/10 identified arm 1, {unsafe_pulls} unsafe pulls, {:.2}s (limit {}s)",
            elapsed.as_secs_f64(),
            LINEAR_RUNTIME.as_secs()
        ),
    )
}

fn gap_values() -> Outcome {
    let inst = benchmark_linear(10);
    let mut worst: f64 = 0.0;
    worst = worst.max((gap_linear(&inst, 1) - 0.4).abs());
    for i in 2..10 {
        worst = worst.max((gap_linear(&inst, i) - 0.8).abs());
    }
    let d = drug(3);
    let drug_gap = (1..3).map(|i| gap_monotonic(&d, i).unwrap()).fold(f64::INFINITY, f64::min);
    outcome(
        worst <= GAP_EXACT_TOL && (drug_gap - DRUG_GAP).abs() <= DRUG_GAP_TOL,
        format!("linear max deviation {worst:.1e} (tol {GAP_EXACT_TOL:.0e}), drug min gap {drug_gap:.6} (target {DRUG_GAP} ± {DRUG_GAP_TOL})"),
    )
}

fn scaling() -> Outcome {
    let means: Vec<f64> = [5, 10, 20]
        .iter()
        .map(|&d| trials(&Problem::Linear(benchmark_linear(d)), 10, LINEAR_SEED).0.aggregate.mean_pulls)
        .collect();
    let increasing = means.windows(2).all(|w| w[0] < w[1]);
    let ratio = means[2] / means[0];
    outcome(
        increasing && ratio >= SCALING_RATIO.0 && ratio <= SCALING_RATIO.1,
        format!(
            "mean pulls d=5/10/20: {:.0}/{:.0}/{:.0}, ratio {ratio:.2} (range [{}, {}])",
            means[0], means[1], means[2], SCALING_RATIO.0, SCALING_RATIO.1
        ),
    )
}

fn lower_bound_dominance(set: &TrialSet) -> Outcome {
    let lb = lower_bound(&benchmark_linear(5), DELTA).unwrap().value;
    let mean = set.aggregate.mean_pulls;
    outcome(mean >= lb, format!("mean pulls {mean:.0} over {} trials vs lower bound {lb:.2}", set.results.len()))
}

fn epoch_bound(set: &TrialSet) -> Outcome {
    let inst = benchmark_linear(5);
    let best = inst.best_arm();
    let mut pass = true;
    let mut parts = Vec::new();
    for i in (0..inst.dim()).filter(|&i| i != best) {
        let Some(bound) = predicted_elimination_epoch(&inst, i) else {
            pass = false;
            parts.push(format!("arm {}: no finite bound", i + 1));
            continue;
        };
        let within = set.results.iter().filter(|r| r.eliminated_at[i].is_some_and(|e| e <= bound)).count();
        pass &= within >= EPOCH_BOUND_MIN_TRIALS;
        parts.push(format!("arm {}: {within}/{} by epoch {bound}", i + 1, set.results.len()));
    }
    outcome(pass, format!("{} (need {EPOCH_BOUND_MIN_TRIALS})", parts.join(", ")))
}

fn monotonic_correctness_and_safety() -> Outcome {
    let (set, elapsed) = trials(&Problem::Monotonic { inst: drug(3), simplified: true }, 20, DRUG_SEED);
    let correct = set.results.iter().filter(|r| r.is_correct(0)).count();
    let above_eps: u64 = set.results.iter().map(|r| r.unsafe_pulls_gamma_eps).sum();
    let safe_above: u64 = set.results.iter().map(|r| r.unsafe_safe_pulls).sum();
    outcome(
        correct >= DRUG_MIN_CORRECT && above_eps == 0 && safe_above == 0 && elapsed < DRUG_RUNTIME,
        format!(
            "{correct}/20 identified arm 1 (need {DRUG_MIN_CORRECT}), {above_eps} pulls above gamma+eps_safe, \
             {safe_above} safe-value pulls above gamma, {:.2}s (limit {}s)",
            elapsed.as_secs_f64(),
            DRUG_RUNTIME.as_secs()
        ),
    )
}

fn regret_trend() -> Outcome {
    let (set, _) = trials(&Problem::Linear(benchmark_linear(10)), 10, LINEAR_SEED);
    let curve = &set.aggregate.regret_curve;
    let (first, last) = (curve.first().unwrap().1, curve.last().unwrap().1);
    outcome(
        last <= REGRET_RATIO * first,
        format!(
            "mean regret {first:.4} at {} pulls, {last:.4} at {} pulls (ratio limit {REGRET_RATIO})",
            curve[0].0,
            curve.last().unwrap().0
        ),
    )
}

fn property_suites() -> Vec<(&'static str, Outcome)> {
    let oracle = from_check(common::check_noiseless_oracles(), "5 linear and 5 monotonic instances match");
    let replay = from_check(common::check_replay(&[1, 2, 3]), "identical results on replay");
    let xi = from_check(common::check_xi_grid(), "bound holds on the full grid");
    let gaps = from_check(
        common::check_linear_gaps(&benchmark_linear(5)).and_then(|()| common::check_logistic_gaps(&drug(3))),
        "closed form within 1e-4 of the 10^6-point grid",
    );
    let monotone = from_check(
        (0..10).try_for_each(|seed| common::check_monotonic_invariants(&drug(3), seed, 12)),
        "safe values nondecreasing over 10 seeded runs",
    );
    let updates = from_check(common::check_update_order(), "holds on the grid");
    let upper = from_check(
        common::complexity_corpus().iter().try_for_each(common::check_upper_dominates_lower),
        "holds on the instance corpus",
    );
    vec![
        ("property: noiseless oracle equivalence", oracle),
        ("property: replay determinism", replay),
        ("property: xi grid", xi),
        ("property: gap vs grid oracle", gaps),
        ("property: safe value monotonicity", monotone),
        ("property: unsafe update >= safe update", updates),
        ("property: upper >= lower complexity", upper),
    ]
}

fn main() {
    let d5 = trials(&Problem::Linear(benchmark_linear(5)), 50, LINEAR_SEED).0;
    let mut results = vec![
        ("linear correctness and safety (d=10)", linear_correctness_and_safety()),
        ("gap values", gap_values()),
        ("scaling in d", scaling()),
        ("lower-bound dominance (d=5)", lower_bound_dominance(&d5)),
        ("elimination epoch bound (d=5)", epoch_bound(&d5)),
        ("monotonic correctness and safety (drug d=3)", monotonic_correctness_and_safety()),
        ("regret trend (d=10)", regret_trend()),
    ];
    results.extend(property_suites());

    let mut failed = 0;
    for (name, o) in &results {
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
