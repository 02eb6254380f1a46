//! Closed-form complexity quantities.
//!
//! Linear setting: gaps, the instance-dependent lower bound, the growth
//! function `ξ_a`, the epoch thresholds `Φ_i`, `Ψ¹`–`Ψ³`, case classification,
//! predicted elimination epochs and the resulting sample bound.
//!
//! Monotonic setting: gaps, the extended inverse `g̃⁻¹`, the loop-count bounds
//! `n̄`, `m̄`, the unsafe-value bound `ā_u`, elimination epochs `ℓ̄` and the
//! sample bound built from them.

use serde::{Deserialize, Serialize};

use crate::env::{Environment, LinearInstance, MonotonicInstance};
use crate::error::{Error, Result};
use crate::linear::check_delta;

/// Epoch scan limit for `ℓ̄`.
pub const ELL_BAR_CAP: u32 = 60;

pub fn gap_linear(inst: &LinearInstance, i: usize) -> f64 {
    inst.max_safe_value(inst.best_arm()) - inst.max_safe_value(i)
}

pub fn gap_monotonic(inst: &MonotonicInstance, i: usize) -> Result<f64> {
    inst.check_index(i)?;
    Ok(inst.max_safe_value(inst.best_arm()) - inst.max_safe_value(i))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    /// `δ ≥ 1/2.4`: the logarithm is not positive and the value is reported as 0.
    pub warning: bool,
    /// Some coordinate is saturated, outside the regime the bound is stated for.
    pub heuristic: bool,
}

/// `(2/3) ln(1/(2.4δ)) Σ_{i≠i*} (1 + θ*²/μ*² + θ_i²/μ_i²)/Δ_i²`.
pub fn lower_bound(inst: &LinearInstance, delta: f64) -> Result<LowerBound> {
    check_delta(delta)?;
    let heuristic = (0..inst.dim()).any(|i| is_saturated(inst, i));
    let log = (1.0 / (2.4 * delta)).ln();
    if log <= 0.0 {
        return Ok(LowerBound { value: 0.0, warning: true, heuristic });
    }
    let (s, th, mu) = (inst.best_arm(), inst.theta(), inst.mu());
    let ratio_star = (th[s] / mu[s]).powi(2);
    let sum: f64 = (0..inst.dim())
        .filter(|&i| i != s)
        .map(|i| (1.0 + ratio_star + (th[i] / mu[i]).powi(2)) / gap_linear(inst, i).powi(2))
        .sum();
    Ok(LowerBound { value: 2.0 / 3.0 * log * sum, warning: false, heuristic })
}

/// `ξ_a(x) = 2^{a √(log₂ max{x, 2})}`.
pub fn xi(a: f64, x: f64) -> f64 {
    2f64.powf(a * x.max(2.0).log2().sqrt())
}

/// `C_γ = ξ_{√32}(2γ)`.
pub fn c_gamma(gamma: f64) -> f64 {
    xi(32f64.sqrt(), 2.0 * gamma)
}

/// `M_i μ_i ≤ γ`: the largest playable value is itself safe.
pub fn is_saturated(inst: &LinearInstance, i: usize) -> bool {
    inst.max_value()[i] * inst.mu()[i] <= inst.gamma()
}

/// `α_i = γ/(μ_i M_i) − 1`.
pub fn alpha(inst: &LinearInstance, i: usize) -> f64 {
    inst.gamma() / (inst.mu()[i] * inst.max_value()[i]) - 1.0
}

/// Epoch after which the safe value of `i` is within a factor `1 + α` of the
/// boundary. Undefined terms (square roots or logarithms of nonpositive
/// numbers) are dropped; `α = 0` gives infinity.
pub fn phi(inst: &LinearInstance, i: usize, alpha: f64) -> f64 {
    let gamma = inst.gamma();
    let a0mu = inst.a0()[i] * inst.mu()[i];
    let l = (4.0 / (gamma * alpha)).log2();
    [
        (8.0 * (2.0 * gamma / alpha).log2()).sqrt(),
        (4.0 * (2.0 * gamma / (a0mu * alpha)).log2()).sqrt(),
        4.0 * (2f64.sqrt() / gamma).log2(),
        l + 2.0 * l.log2(),
    ]
    .into_iter()
    .fold(8.0, f64::max)
}

fn log2_ratio(num: f64, x: f64) -> f64 {
    if x > 0.0 {
        (num / x).log2()
    } else {
        f64::INFINITY
    }
}

pub fn psi1(inst: &LinearInstance, i: usize, x: f64) -> f64 {
    let (s, th, mu) = (inst.best_arm(), inst.theta(), inst.mu());
    log2_ratio(4.0 * (2.0 + th[s] / mu[s] + th[i] / mu[i]), x)
}

pub fn psi2(inst: &LinearInstance, i: usize, x: f64) -> f64 {
    let gamma = inst.gamma();
    let m_theta = inst.max_value()[i] * inst.theta()[i];
    log2_ratio(4.0 * (2.0 + m_theta / gamma), x).max((4.0 / gamma).log2())
}

pub fn psi3(x: f64) -> f64 {
    log2_ratio(4.0, x)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseInfo {
    /// 1: neither saturated, 2: only `i`, 3: only `i*`, 4: both.
    pub case: u8,
    pub alpha_i: Option<f64>,
    pub alpha_star: Option<f64>,
}

pub fn classify_case(inst: &LinearInstance, i: usize) -> CaseInfo {
    let s = inst.best_arm();
    let (sat_i, sat_s) = (is_saturated(inst, i), is_saturated(inst, s));
    let case = match (sat_i, sat_s) {
        (false, false) => 1,
        (true, false) => 2,
        (false, true) => 3,
        (true, true) => 4,
    };
    CaseInfo { case, alpha_i: sat_i.then(|| alpha(inst, i)), alpha_star: sat_s.then(|| alpha(inst, s)) }
}

/// Sufficient epoch thresholds for eliminating `i`, one per listed condition.
pub fn elimination_conditions(inst: &LinearInstance, i: usize) -> Vec<f64> {
    let s = inst.best_arm();
    let info = classify_case(inst, i);
    let (th, mu, m) = (inst.theta(), inst.mu(), inst.max_value());
    let gamma = inst.gamma();
    let gap = gap_linear(inst, i);
    let max3 = |a: f64, b: f64, c: f64| a.max(b).max(c);
    let (phi_i1, phi_s1) = (phi(inst, i, 1.0), phi(inst, s, 1.0));
    let unsat = max3(psi1(inst, i, gamma * th[s] / mu[s] - gamma * th[i] / mu[i]), phi_i1, phi_s1);
    match info.case {
        1 => vec![max3(psi1(inst, i, gap), phi_i1, phi_s1)],
        2 => {
            let a_i = alpha(inst, i);
            vec![max3(psi2(inst, i, gap), phi(inst, i, a_i), phi_s1), unsat]
        }
        3 => {
            let a_s = alpha(inst, s);
            vec![max3(psi2(inst, s, gap), phi_i1, phi(inst, s, a_s)), unsat]
        }
        _ => {
            let (a_i, a_s) = (alpha(inst, i), alpha(inst, s));
            let (phi_ia, phi_sa) = (phi(inst, i, a_i), phi(inst, s, a_s));
            vec![
                max3(psi3(gap), phi_ia, phi_sa),
                unsat,
                max3(psi2(inst, i, gamma * th[s] / mu[s] - m[i] * th[i]), phi_ia, phi_s1),
                max3(psi2(inst, s, m[s] * th[s] - gamma * th[i] / mu[i]), phi_i1, phi_sa),
            ]
        }
    }
}

/// Smallest integer epoch meeting one of the case's conditions, at least 1.
/// `None` when every condition is infinite.
pub fn predicted_elimination_epoch(inst: &LinearInstance, i: usize) -> Option<u32> {
    let best = elimination_conditions(inst, i).into_iter().fold(f64::INFINITY, f64::min);
    best.is_finite().then(|| best.ceil().max(1.0) as u32)
}

/// `8σ² Σ ln(8dL_i²/δ) 4^{L_i} + 2 Σ L_i`, with `L_i = 0` contributing nothing.
pub fn upper_bound_from_epochs(epochs: &[u32], d: usize, delta: f64, sigma2: f64) -> f64 {
    epochs
        .iter()
        .filter(|&&l| l > 0)
        .map(|&l| {
            let lf = l as f64;
            8.0 * sigma2 * (8.0 * d as f64 * lf * lf / delta).ln() * 4f64.powf(lf) + 2.0 * lf
        })
        .sum()
}

/// Sample bound over the suboptimal coordinates. Infinite if any of them has
/// no finite elimination epoch.
pub fn sample_complexity_upper_linear(inst: &LinearInstance, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let s = inst.best_arm();
    let mut epochs = Vec::new();
    for i in (0..inst.dim()).filter(|&i| i != s) {
        match predicted_elimination_epoch(inst, i) {
            Some(l) => epochs.push(l),
            None => return Ok(f64::INFINITY),
        }
    }
    Ok(upper_bound_from_epochs(&epochs, inst.dim(), delta, inst.sigma2()))
}

/// The per-coordinate complexity term `N_{c(i),i}` of the case `i` falls in.
pub fn case_term(inst: &LinearInstance, i: usize) -> f64 {
    let s = inst.best_arm();
    let (th, mu, m, a0) = (inst.theta(), inst.mu(), inst.max_value(), inst.a0());
    let gamma = inst.gamma();
    let gap2 = gap_linear(inst, i).powi(2);
    let cg = c_gamma(gamma);
    let init = |j: usize| xi(4.0, 1.0 / (a0[j] * mu[j]));
    let margin = |j: usize| (m[j] * mu[j] / gamma).powi(2) / (gamma - m[j] * mu[j]).powi(2);
    let sat = |j: usize| init(j) * xi(4.0, m[j] * mu[j] / (gamma - m[j] * mu[j]));
    match classify_case(inst, i).case {
        1 => (1.0 + (th[s] / mu[s]).powi(2) + (th[i] / mu[i]).powi(2)) / gap2 + cg * init(i).max(init(s)),
        2 => (1.0 + (m[i] * th[i] / gamma).powi(2)) / gap2 + margin(i) + cg * sat(i).max(init(s)),
        3 => (1.0 + (m[s] * th[s] / gamma).powi(2)) / gap2 + margin(s) + cg * sat(s).max(init(i)),
        _ => 1.0 / gap2 + margin(s) + margin(i) + cg * sat(i).max(sat(s)),
    }
}

/// Extended inverse: `a0` at or below the infimum of the range of `g_i`
/// (0 for both supported families), `g_i⁻¹(x)` up to `γ + ε_safe`, and
/// `g_i⁻¹(γ + ε_safe)` above.
pub fn g_tilde_inverse(inst: &MonotonicInstance, i: usize, x: f64) -> Result<f64> {
    let top = inst.gamma() + inst.eps_safe();
    if x <= 0.0 {
        Ok(inst.a0()[i])
    } else {
        inst.g_inverse(i, x.min(top))
    }
}

fn eps(ell: u32) -> f64 {
    0.5f64.powi(ell as i32)
}

fn loop_bound(inst: &MonotonicInstance, i: usize, ell: u32, level: f64) -> Result<f64> {
    if ell <= 1 {
        return Ok(2.0 * (g_tilde_inverse(inst, i, level - 0.5)? - inst.a0()[i]));
    }
    let e = eps(ell);
    Ok((g_tilde_inverse(inst, i, level - e)? - g_tilde_inverse(inst, i, level - 6.0 * e)?) / e)
}

/// Bound on the safe-value climbing steps of `i` in epoch `ell`.
pub fn n_bar(inst: &MonotonicInstance, i: usize, ell: u32) -> Result<f64> {
    loop_bound(inst, i, ell, inst.gamma())
}

/// Bound on the unsafe-value climbing steps of `i` in epoch `ell`.
pub fn m_bar(inst: &MonotonicInstance, i: usize, ell: u32) -> Result<f64> {
    loop_bound(inst, i, ell, inst.gamma() + inst.eps_safe())
}

/// Upper bound on the unsafe value of `i` carried out of epoch `ell`.
pub fn a_u_bar(inst: &MonotonicInstance, i: usize, ell: u32) -> Result<f64> {
    let (gamma, es) = (inst.gamma(), inst.eps_safe());
    let top = inst.g_inverse(i, gamma + es)?;
    let mut sum = 0.0;
    for s in 1..=ell {
        let x = (gamma + 2.0 * eps(s)).min(gamma + es);
        sum += inst.g_inverse(i, x)? / 2f64.powi((ell - s + 1) as i32);
    }
    Ok(sum + (ell as f64 + 4.0 * top / es) * eps(ell))
}

/// First epoch `ℓ ≤ ELL_BAR_CAP` with `f_i(ā_u^ℓ) + 4ε_ℓ ≤ f_{i*}(g̃_{i*}⁻¹(γ − 3ε_ℓ))`.
pub fn ell_bar(inst: &MonotonicInstance, i: usize) -> Result<Option<u32>> {
    let s = inst.best_arm();
    let (f_i, f_s) = (inst.reward_curve(i), inst.reward_curve(s));
    for ell in 1..=ELL_BAR_CAP {
        let e = eps(ell);
        let lhs = f_i.eval(a_u_bar(inst, i, ell)?) + 4.0 * e;
        let rhs = f_s.eval(g_tilde_inverse(inst, s, inst.gamma() - 3.0 * e)?);
        if lhs <= rhs {
            return Ok(Some(ell));
        }
    }
    Ok(None)
}

/// `⌈log₂(8/ε_safe)⌉`: epochs after which every unsafe flag is set on the clean event.
pub fn ell_unsafe_bound(eps_safe: f64) -> u32 {
    (8.0 / eps_safe).log2().ceil().max(0.0) as u32
}

/// Upper bound on `ℓ̄(i)` in terms of a Lipschitz constant `L` of the inverse
/// safety response. Undefined terms are dropped.
pub fn ell_bar_upper(inst: &MonotonicInstance, i: usize, lipschitz: f64) -> Result<f64> {
    let (gamma, es) = (inst.gamma(), inst.eps_safe());
    let gap = gap_monotonic(inst, i)?;
    let g_gamma = inst.g_inverse(i, gamma)?;
    let r = 2.0 * (lipschitz + 1.0) / gap;
    let terms = [
        3.0 + r.log2() + 2.0 * (r.log2() + 3.0).log2(),
        ((14.0 * lipschitz + 12.0 + 12.0 * g_gamma / es) / gap).log2(),
    ];
    Ok(terms.into_iter().fold((8.0 / es).log2() + 1.0, f64::max))
}

/// The simplified bound
/// `Σ_{i≠i*} (1 + L³ + (1+L) g_i⁻¹(γ)²/ε_safe²)/Δ_i² + Σ_i (g_i⁻¹(γ+ε_safe−½) + g_i⁻¹(γ−½) − 2a0_i)`,
/// or `None` where the inverses at `γ − ½` are undefined.
pub fn lipschitz_sample_bound(inst: &MonotonicInstance, lipschitz: f64) -> Result<Option<f64>> {
    let (gamma, es) = (inst.gamma(), inst.eps_safe());
    let s = inst.best_arm();
    let l = lipschitz;
    let mut total = 0.0;
    for i in 0..inst.dim() {
        let (lo, hi) = match (inst.g_inverse(i, gamma - 0.5), inst.g_inverse(i, gamma + es - 0.5)) {
            (Ok(lo), Ok(hi)) => (lo, hi),
            _ => return Ok(None),
        };
        total += hi + lo - 2.0 * inst.a0()[i];
        if i != s {
            let g = inst.g_inverse(i, gamma)?;
            total += (1.0 + l.powi(3) + (1.0 + l) * g * g / (es * es)) / gap_monotonic(inst, i)?.powi(2);
        }
    }
    Ok(Some(total))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicBounds {
    pub ell_unsafe_bound: u32,
    /// `ℓ̄(i)`; for `i*` the maximum over the others. `None` if not found within the scan cap.
    pub ell_bar: Vec<Option<u32>>,
    /// Per coordinate, `n̄_{i,ℓ}` for `ℓ = 1..=horizon`.
    pub n_bar: Vec<Vec<f64>>,
    pub m_bar: Vec<Vec<f64>>,
    pub a_u_bar: Vec<Vec<f64>>,
    pub lipschitz: Option<f64>,
    pub ell_bar_upper: Vec<Option<f64>>,
    pub lipschitz_sample_bound: Option<f64>,
}

impl MonotonicBounds {
    pub fn horizon(&self) -> u32 {
        self.n_bar.first().map_or(0, |v| v.len() as u32)
    }
}

/// Evaluates every per-coordinate bound. Requires `γ + ε_safe < 1`.
pub fn monotonic_bounds(inst: &MonotonicInstance, lipschitz: Option<f64>) -> Result<MonotonicBounds> {
    if inst.gamma() + inst.eps_safe() >= 1.0 {
        return Err(Error::Domain { value: inst.gamma() + inst.eps_safe() });
    }
    let d = inst.dim();
    let s = inst.best_arm();
    let ell_unsafe = ell_unsafe_bound(inst.eps_safe());
    let mut ell_bars: Vec<Option<u32>> = vec![None; d];
    for i in (0..d).filter(|&i| i != s) {
        ell_bars[i] = ell_bar(inst, i)?;
    }
    let others: Vec<Option<u32>> = (0..d).filter(|&i| i != s).map(|i| ell_bars[i]).collect();
    ell_bars[s] = if others.iter().all(Option::is_some) { others.iter().flatten().max().copied() } else { None };
    if d == 1 {
        ell_bars[s] = Some(0);
    }

    let horizon = ell_bars.iter().flatten().copied().max().unwrap_or(0).max(ell_unsafe);
    let table = |f: &dyn Fn(usize, u32) -> Result<f64>| -> Result<Vec<Vec<f64>>> {
        (0..d).map(|i| (1..=horizon).map(|ell| f(i, ell)).collect()).collect()
    };
    let n = table(&|i, ell| n_bar(inst, i, ell))?;
    let m = table(&|i, ell| m_bar(inst, i, ell))?;
    let a = table(&|i, ell| a_u_bar(inst, i, ell))?;

    let mut upper = vec![None; d];
    let mut lipschitz_sample = None;
    if let Some(l) = lipschitz {
        for (i, slot) in upper.iter_mut().enumerate().filter(|&(i, _)| i != s) {
            *slot = Some(ell_bar_upper(inst, i, l)?).filter(|v| v.is_finite());
        }
        lipschitz_sample = lipschitz_sample_bound(inst, l)?;
    }
    Ok(MonotonicBounds {
        ell_unsafe_bound: ell_unsafe,
        ell_bar: ell_bars,
        n_bar: n,
        m_bar: m,
        a_u_bar: a,
        lipschitz,
        ell_bar_upper: upper,
        lipschitz_sample_bound: lipschitz_sample,
    })
}

/// `t̄ = Σ_i Σ_{ℓ ≤ ℓ̄(i)} (m̄ + n̄ + ℓ + 2)`, or `None` if some `ℓ̄` is unbounded.
pub fn t_bar(bounds: &MonotonicBounds) -> Option<f64> {
    let mut total = 0.0;
    for (i, ell_bar) in bounds.ell_bar.iter().enumerate() {
        for ell in 1..=(*ell_bar)? {
            let k = (ell - 1) as usize;
            total += bounds.m_bar[i][k] + bounds.n_bar[i][k] + ell as f64 + 2.0;
        }
    }
    Some(total)
}

/// Full sample bound: the first `⌈log₂(8/ε_safe)⌉` epochs pay both loop
/// bounds, later epochs up to `ℓ̄(i)` only the safe one, each weighted by
/// `N_{ℓ,t̄}`.
pub fn monotonic_sample_bound(inst: &MonotonicInstance, bounds: &MonotonicBounds, delta: f64) -> Result<Option<f64>> {
    check_delta(delta)?;
    let Some(t) = t_bar(bounds) else { return Ok(None) };
    let n_samples = |ell: u32| -> f64 {
        let raw = 2.0 * inst.sigma2() * (8.0 * t * t / delta).ln() * 4f64.powi(ell as i32);
        raw.ceil().max(1.0)
    };
    let mut total = 0.0;
    for (i, ell_bar) in bounds.ell_bar.iter().enumerate() {
        let ell_bar = ell_bar.expect("t_bar checked every epoch bound");
        for ell in 1..=bounds.ell_unsafe_bound {
            let k = (ell - 1) as usize;
            total += (bounds.m_bar[i][k] + bounds.n_bar[i][k] + ell as f64 + 2.0) * n_samples(ell);
        }
        for ell in (bounds.ell_unsafe_bound + 1)..=ell_bar {
            let k = (ell - 1) as usize;
            total += (bounds.n_bar[i][k] + ell as f64 + 2.0) * n_samples(ell);
        }
    }
    Ok(Some(total))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    Linear,
    Monotonic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryReport {
    pub setting: Setting,
    pub d: usize,
    pub delta: f64,
    pub i_star: usize,
    pub gaps: Vec<f64>,
    pub min_gap: f64,
    pub lower_bound: Option<f64>,
    pub lower_bound_warning: bool,
    pub lower_bound_heuristic: bool,
    /// Case label per coordinate, `None` at `i*` (linear only).
    pub cases: Vec<Option<u8>>,
    /// `α_i` per coordinate (linear only).
    pub alphas: Vec<f64>,
    /// `L_i` (linear) or `ℓ̄(i)` (monotonic). At `i*`, the maximum over the others.
    pub predicted_epochs: Vec<Option<u32>>,
    /// `None` when some predicted epoch is unbounded.
    pub predicted_samples: Option<f64>,
    pub c_gamma: Option<f64>,
    /// `N_{c(i),i}` per coordinate (linear only).
    pub case_terms: Vec<Option<f64>>,
    pub monotonic: Option<MonotonicBounds>,
}

fn min_gap(gaps: &[f64], s: usize) -> f64 {
    gaps.iter().enumerate().filter(|&(i, _)| i != s).map(|(_, &g)| g).fold(f64::INFINITY, f64::min)
}

pub fn linear_report(inst: &LinearInstance, delta: f64) -> Result<TheoryReport> {
    let lb = lower_bound(inst, delta)?;
    let d = inst.dim();
    let s = inst.best_arm();
    let gaps: Vec<f64> = (0..d).map(|i| gap_linear(inst, i)).collect();
    let mut epochs: Vec<Option<u32>> =
        (0..d).map(|i| if i == s { None } else { predicted_elimination_epoch(inst, i) }).collect();
    let others: Vec<Option<u32>> = (0..d).filter(|&i| i != s).map(|i| epochs[i]).collect();
    epochs[s] = if others.iter().all(Option::is_some) { others.iter().flatten().max().copied() } else { None };
    let samples = sample_complexity_upper_linear(inst, delta)?;
    Ok(TheoryReport {
        setting: Setting::Linear,
        d,
        delta,
        i_star: s,
        min_gap: min_gap(&gaps, s),
        gaps,
        lower_bound: Some(lb.value),
        lower_bound_warning: lb.warning,
        lower_bound_heuristic: lb.heuristic,
        cases: (0..d).map(|i| (i != s).then(|| classify_case(inst, i).case)).collect(),
        alphas: (0..d).map(|i| alpha(inst, i)).collect(),
        predicted_epochs: epochs,
        predicted_samples: samples.is_finite().then_some(samples),
        c_gamma: Some(c_gamma(inst.gamma())),
        case_terms: (0..d).map(|i| (i != s).then(|| case_term(inst, i))).collect(),
        monotonic: None,
    })
}

pub fn monotonic_report(inst: &MonotonicInstance, delta: f64, lipschitz: Option<f64>) -> Result<TheoryReport> {
    check_delta(delta)?;
    let d = inst.dim();
    let s = inst.best_arm();
    let gaps = (0..d).map(|i| gap_monotonic(inst, i)).collect::<Result<Vec<f64>>>()?;
    let bounds = monotonic_bounds(inst, lipschitz)?;
    let samples = monotonic_sample_bound(inst, &bounds, delta)?;
    Ok(TheoryReport {
        setting: Setting::Monotonic,
        d,
        delta,
        i_star: s,
        min_gap: min_gap(&gaps, s),
        gaps,
        lower_bound: None,
        lower_bound_warning: false,
        lower_bound_heuristic: false,
        cases: Vec::new(),
        alphas: Vec::new(),
        predicted_epochs: bounds.ell_bar.clone(),
        predicted_samples: samples,
        c_gamma: None,
        case_terms: Vec::new(),
        monotonic: Some(bounds),
    })
}
