//! Ground-truth environments.
//!
//! Two settings are supported. In the linear setting a pull of coordinate `i`
//! at value `a` returns `y = a·θ_i + η` and `z = a·μ_i + w`. In the monotonic
//! setting the slopes are replaced by response curves `f_i` and `g_i`. Noise is
//! Gaussian with variance `sigma2` in both cases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single noisy observation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub y: f64,
    pub z: f64,
}

/// Parametric response family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `1 / (1 + exp(-rate·a))`
    Logistic,
    /// `Φ(rate·a)`, the standard normal CDF. Has no closed-form inverse.
    Probit,
}

/// A monotone response curve `a ↦ family(rate·a)` with range (0, 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub family: Family,
    pub rate: f64,
}

impl Curve {
    pub fn logistic(rate: f64) -> Self {
        Self { family: Family::Logistic, rate }
    }

    pub fn probit(rate: f64) -> Self {
        Self { family: Family::Probit, rate }
    }

    pub fn eval(&self, a: f64) -> f64 {
        let x = self.rate * a;
        match self.family {
            Family::Logistic => {
                if x >= 0.0 {
                    1.0 / (1.0 + (-x).exp())
                } else {
                    let e = x.exp();
                    e / (1.0 + e)
                }
            }
            Family::Probit => 0.5 * libm::erfc(-x / std::f64::consts::SQRT_2),
        }
    }

    /// Solves `eval(a) = x`. Requires a strictly increasing curve and `x` in (0, 1).
    pub fn inverse(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0) || !(self.rate > 0.0) {
            return Err(Error::Domain { value: x });
        }
        match self.family {
            Family::Logistic => Ok((x / (1.0 - x)).ln() / self.rate),
            Family::Probit => Ok(bisect(|a| self.eval(a), x)),
        }
    }

    /// Supremum of the derivative.
    pub fn max_slope(&self) -> f64 {
        match self.family {
            Family::Logistic => self.rate / 4.0,
            Family::Probit => self.rate / (2.0 * std::f64::consts::PI).sqrt(),
        }
    }
}

// Root of an increasing function, bisected down to adjacent floats.
fn bisect(f: impl Fn(f64) -> f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
    while f(lo) > target && lo > -1e300 {
        lo *= 2.0;
    }
    while f(hi) < target && hi < 1e300 {
        hi *= 2.0;
    }
    for _ in 0..4000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (f(hi) - target).abs() < (f(lo) - target).abs() {
        hi
    } else {
        lo
    }
}

/// Common interface used by the algorithms and the safety audit.
pub trait Environment: Sync {
    fn dim(&self) -> usize;
    fn gamma(&self) -> f64;
    fn sigma2(&self) -> f64;
    fn mean_reward(&self, i: usize, a: f64) -> f64;
    /// True safety response at `a`: `a·μ_i` or `g_i(a)`.
    fn safety_level(&self, i: usize, a: f64) -> f64;
    /// Largest reward attainable by coordinate `i` with a safe, playable value.
    fn max_safe_value(&self, i: usize) -> f64;

    fn best_arm(&self) -> usize {
        argmax((0..self.dim()).map(|i| self.max_safe_value(i)))
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.dim() {
            Ok(())
        } else {
            Err(Error::CoordinateOutOfRange { index: i, dim: self.dim() })
        }
    }

    /// Draws one observation. The reward noise is drawn before the safety
    /// noise, and both are drawn even when `sigma2` is zero.
    fn pull<R: Rng + ?Sized>(&self, i: usize, a: f64, rng: &mut R) -> Result<Observation> {
        self.check_index(i)?;
        if !a.is_finite() {
            return Err(Error::Parameter(format!("pull value {a} is not finite")));
        }
        let sd = self.sigma2().sqrt();
        let eta: f64 = rng.sample(StandardNormal);
        let w: f64 = rng.sample(StandardNormal);
        Ok(Observation { y: self.mean_reward(i, a) + sd * eta, z: self.safety_level(i, a) + sd * w })
    }
}

/// Index of the largest value, lowest index on ties.
pub(crate) fn argmax(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.into_iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

fn unique_max(values: &[f64]) -> bool {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tol = 1e-12 * max.abs().max(1.0);
    values.iter().filter(|&&v| max - v <= tol).count() == 1
}

fn check_len(name: &str, len: usize, d: usize) -> Result<()> {
    if len != d {
        return Err(Error::Instance(format!("{name} has length {len}, expected {d}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearInstance {
    theta: Vec<f64>,
    mu: Vec<f64>,
    gamma: f64,
    a0: Vec<f64>,
    max_value: Vec<f64>,
    sigma2: f64,
}

impl LinearInstance {
    pub fn new(
        theta: Vec<f64>,
        mu: Vec<f64>,
        gamma: f64,
        a0: Vec<f64>,
        max_value: Vec<f64>,
        sigma2: f64,
    ) -> Result<Self> {
        let d = theta.len();
        if d == 0 {
            return Err(Error::Instance("no coordinates".into()));
        }
        check_len("mu", mu.len(), d)?;
        check_len("a0", a0.len(), d)?;
        check_len("M", max_value.len(), d)?;
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Instance(format!("gamma must be positive, got {gamma}")));
        }
        if !(sigma2 >= 0.0 && sigma2.is_finite()) {
            return Err(Error::Instance(format!("sigma2 must be nonnegative, got {sigma2}")));
        }
        for i in 0..d {
            let pos = |x: f64| x > 0.0 && x.is_finite();
            if !pos(theta[i]) || !pos(mu[i]) || !pos(a0[i]) || !pos(max_value[i]) {
                return Err(Error::Instance(format!(
                    "coordinate {i}: theta, mu, a0 and M must be positive and finite"
                )));
            }
            if a0[i] > max_value[i] {
                return Err(Error::Instance(format!("coordinate {i}: a0 exceeds M")));
            }
            if a0[i] * mu[i] > gamma {
                return Err(Error::Instance(format!("coordinate {i}: a0 is not safe")));
            }
        }
        let inst = Self { theta, mu, gamma, a0, max_value, sigma2 };
        let values: Vec<f64> = (0..d).map(|i| inst.max_safe_value(i)).collect();
        if !unique_max(&values) {
            return Err(Error::Instance("the best coordinate is not unique".into()));
        }
        Ok(inst)
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn a0(&self) -> &[f64] {
        &self.a0
    }

    /// Maximum playable values `M_i`.
    pub fn max_value(&self) -> &[f64] {
        &self.max_value
    }

    pub fn with_sigma2(mut self, sigma2: f64) -> Result<Self> {
        if !(sigma2 >= 0.0 && sigma2.is_finite()) {
            return Err(Error::Instance(format!("sigma2 must be nonnegative, got {sigma2}")));
        }
        self.sigma2 = sigma2;
        Ok(self)
    }
}

impl Environment for LinearInstance {
    fn dim(&self) -> usize {
        self.theta.len()
    }

    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn sigma2(&self) -> f64 {
        self.sigma2
    }

    fn mean_reward(&self, i: usize, a: f64) -> f64 {
        a * self.theta[i]
    }

    fn safety_level(&self, i: usize, a: f64) -> f64 {
        a * self.mu[i]
    }

    fn max_safe_value(&self, i: usize) -> f64 {
        (self.gamma * self.theta[i] / self.mu[i]).min(self.theta[i] * self.max_value[i])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicInstance {
    reward: Vec<Curve>,
    safety: Vec<Curve>,
    gamma: f64,
    eps_safe: f64,
    a0: Vec<f64>,
    sigma2: f64,
    cap: Option<Vec<f64>>,
}

impl MonotonicInstance {
    /// `responses[i]` is the pair `(f_i, g_i)`.
    pub fn new(responses: Vec<(Curve, Curve)>, gamma: f64, eps_safe: f64, a0: Vec<f64>, sigma2: f64) -> Result<Self> {
        let d = responses.len();
        if d == 0 {
            return Err(Error::Instance("no coordinates".into()));
        }
        check_len("a0", a0.len(), d)?;
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::Instance(format!("gamma must lie in (0, 1), got {gamma}")));
        }
        if !(eps_safe > 0.0 && eps_safe.is_finite()) {
            return Err(Error::Instance(format!("eps_safe must be positive, got {eps_safe}")));
        }
        if !(sigma2 >= 0.0 && sigma2.is_finite()) {
            return Err(Error::Instance(format!("sigma2 must be nonnegative, got {sigma2}")));
        }
        let (reward, safety): (Vec<Curve>, Vec<Curve>) = responses.into_iter().unzip();
        for i in 0..d {
            let (f, g) = (reward[i], safety[i]);
            if !(f.rate >= 0.0 && f.rate.is_finite()) {
                return Err(Error::Instance(format!("coordinate {i}: reward rate must be nonnegative")));
            }
            if !(g.rate > 0.0 && g.rate.is_finite()) {
                return Err(Error::Instance(format!("coordinate {i}: safety rate must be positive")));
            }
            if g.max_slope() > 1.0 {
                return Err(Error::Instance(format!(
                    "coordinate {i}: safety response is not 1-Lipschitz (slope {})",
                    g.max_slope()
                )));
            }
            if !a0[i].is_finite() || g.eval(a0[i]) > gamma {
                return Err(Error::Instance(format!("coordinate {i}: a0 is not safe")));
            }
        }
        let inst = Self { reward, safety, gamma, eps_safe, a0, sigma2, cap: None };
        inst.check_unique()?;
        Ok(inst)
    }

    /// Logistic efficacy and toxicity with rates `theta` and `mu`.
    pub fn logistic(theta: &[f64], mu: &[f64], gamma: f64, eps_safe: f64, a0: Vec<f64>, sigma2: f64) -> Result<Self> {
        check_len("mu", mu.len(), theta.len())?;
        let responses = theta.iter().zip(mu).map(|(&t, &m)| (Curve::logistic(t), Curve::logistic(m))).collect();
        Self::new(responses, gamma, eps_safe, a0, sigma2)
    }

    /// Upper limit on playable values. Proposed values are clamped to it.
    pub fn with_cap(mut self, cap: Vec<f64>) -> Result<Self> {
        check_len("cap", cap.len(), self.dim())?;
        for (i, (&c, &a)) in cap.iter().zip(&self.a0).enumerate() {
            if !c.is_finite() || c < a {
                return Err(Error::Instance(format!("coordinate {i}: cap below a0")));
            }
        }
        self.cap = Some(cap);
        self.check_unique()?;
        Ok(self)
    }

    pub fn with_sigma2(mut self, sigma2: f64) -> Result<Self> {
        if !(sigma2 >= 0.0 && sigma2.is_finite()) {
            return Err(Error::Instance(format!("sigma2 must be nonnegative, got {sigma2}")));
        }
        self.sigma2 = sigma2;
        Ok(self)
    }

    fn check_unique(&self) -> Result<()> {
        let values: Vec<f64> = (0..self.dim()).map(|i| self.max_safe_value(i)).collect();
        if unique_max(&values) {
            Ok(())
        } else {
            Err(Error::Instance("the best coordinate is not unique".into()))
        }
    }

    pub fn eps_safe(&self) -> f64 {
        self.eps_safe
    }

    pub fn a0(&self) -> &[f64] {
        &self.a0
    }

    pub fn cap(&self) -> Option<&[f64]> {
        self.cap.as_deref()
    }

    pub fn reward_curve(&self, i: usize) -> Curve {
        self.reward[i]
    }

    pub fn safety_curve(&self, i: usize) -> Curve {
        self.safety[i]
    }

    /// Clamps `a` to the cap of coordinate `i`, if any.
    pub fn clamp(&self, i: usize, a: f64) -> f64 {
        match &self.cap {
            Some(c) => a.min(c[i]),
            None => a,
        }
    }

    pub fn g_inverse(&self, i: usize, x: f64) -> Result<f64> {
        self.check_index(i)?;
        self.safety[i].inverse(x)
    }

    /// Largest safe playable value, `min(g_i⁻¹(γ), cap_i)`.
    pub fn max_safe_point(&self, i: usize) -> f64 {
        let a = self.safety[i].inverse(self.gamma).expect("gamma lies in (0, 1)");
        self.clamp(i, a)
    }
}

impl Environment for MonotonicInstance {
    fn dim(&self) -> usize {
        self.reward.len()
    }

    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn sigma2(&self) -> f64 {
        self.sigma2
    }

    fn mean_reward(&self, i: usize, a: f64) -> f64 {
        self.reward[i].eval(a)
    }

    fn safety_level(&self, i: usize, a: f64) -> f64 {
        self.safety[i].eval(a)
    }

    fn max_safe_value(&self, i: usize) -> f64 {
        self.reward[i].eval(self.max_safe_point(i))
    }
}

/// Seed of trial `k` under `master`. A SplitMix64 finaliser over both inputs.
pub fn trial_seed(master: u64, k: u64) -> u64 {
    let mut z = master ^ k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random stream owned by trial `k`.
pub fn trial_rng(master: u64, k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(master, k))
}
