//! Bayesian local sampling of step directions.
//!
//! Each local sampler keeps a von Mises–Fisher prior centred on its last
//! successful direction and a list of directions that failed since then.
//! Every failure multiplies the proposal density by `1 - β·k(x, x')`, where
//! `k` is a periodic squared-exponential kernel on the angle between
//! directions. Drawing from the resulting density is done by rejection with
//! the prior as envelope, which is exact because every factor is at most one.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use thiserror::Error;

use crate::cspace::Config;

#[derive(Debug, Error, PartialEq)]
pub enum ProposalError {
    #[error("kernel parameter {name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("beta * sigma^2 = {0} exceeds 1; likelihood factors would go negative")]
    Unbounded(f64),
    #[error("direction must have at least 2 components")]
    TooFewDimensions,
    #[error("mean direction must be unit norm, got norm {0}")]
    NotUnit(f64),
    #[error("concentration must be finite and non-negative, got {0}")]
    BadKappa(f64),
}

/// Periodic squared-exponential kernel parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelParams {
    sigma: f64,
    lambda: f64,
    period: f64,
    beta: f64,
}

impl Default for KernelParams {
    fn default() -> Self {
        KernelParams {
            sigma: 1.0,
            lambda: 0.7,
            period: 2.0 * PI,
            beta: 1.0,
        }
    }
}

impl KernelParams {
    /// Strict constructor: rejects `β·σ² > 1`.
    pub fn new(sigma: f64, lambda: f64, beta: f64) -> Result<Self, ProposalError> {
        let p = Self::new_lenient(sigma, lambda, beta)?;
        if p.beta * p.sigma * p.sigma > 1.0 + 1e-12 {
            return Err(ProposalError::Unbounded(p.beta * p.sigma * p.sigma));
        }
        Ok(p)
    }

    /// Accepts `β·σ² > 1` with a warning; likelihood factors are then clamped
    /// at zero.
    pub fn new_lenient(sigma: f64, lambda: f64, beta: f64) -> Result<Self, ProposalError> {
        for (name, value) in [("sigma", sigma), ("lambda", lambda), ("beta", beta)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ProposalError::NonPositive { name, value });
            }
        }
        if beta * sigma * sigma > 1.0 + 1e-12 {
            log::warn!(
                "beta * sigma^2 = {} > 1; clamping likelihood factors at 0",
                beta * sigma * sigma
            );
        }
        Ok(KernelParams {
            sigma,
            lambda,
            period: 2.0 * PI,
            beta,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Great-circle angle between two unit vectors.
pub fn angle_between(x: &[f64], y: &[f64]) -> f64 {
    dot(x, y).clamp(-1.0, 1.0).acos()
}

/// `k(x, x') = σ²·exp(-2·sin²(π·Δ/p)/λ²)`, with `Δ` the angle between the
/// directions.
pub fn kernel_eval(x: &[f64], x_prime: &[f64], params: &KernelParams) -> f64 {
    kernel_of_angle(angle_between(x, x_prime), params)
}

/// Kernel as a function of the angular separation.
pub fn kernel_of_angle(delta: f64, params: &KernelParams) -> f64 {
    let s = (PI * delta / params.period).sin();
    params.sigma * params.sigma * (-2.0 * s * s / (params.lambda * params.lambda)).exp()
}

/// Von Mises–Fisher distribution on the unit sphere in `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionalPrior {
    mu: Vec<f64>,
    kappa: f64,
}

impl DirectionalPrior {
    pub fn new(mu: Vec<f64>, kappa: f64) -> Result<Self, ProposalError> {
        if mu.len() < 2 {
            return Err(ProposalError::TooFewDimensions);
        }
        let n = norm(&mu);
        if (n - 1.0).abs() > 1e-9 {
            return Err(ProposalError::NotUnit(n));
        }
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(ProposalError::BadKappa(kappa));
        }
        Ok(DirectionalPrior { mu, kappa })
    }

    /// Uniform distribution on the sphere in `R^dim`.
    pub fn uniform(dim: usize) -> Self {
        let mut mu = vec![0.0; dim.max(2)];
        mu[0] = 1.0;
        DirectionalPrior { mu, kappa: 0.0 }
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }
}

/// Uniform direction in `R^dim`.
pub fn uniform_direction<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Draws from vMF(μ, κ) by the tangent-normal decomposition: the component
/// `w` along μ is rejection-sampled (Wood's scheme), the tangent part is a
/// uniform direction orthogonal to μ.
pub fn vmf_sample<R: Rng + ?Sized>(prior: &DirectionalPrior, rng: &mut R) -> Vec<f64> {
    let d = prior.dim();
    let kappa = prior.kappa;
    if kappa == 0.0 {
        return uniform_direction(d, rng);
    }
    let m = (d - 1) as f64;
    // b = (-2κ + sqrt(4κ² + m²)) / m, rewritten to avoid cancellation.
    let b = m / (2.0 * kappa + (4.0 * kappa * kappa + m * m).sqrt());
    let x0 = (1.0 - b) / (1.0 + b);
    let c = kappa * x0 + m * (1.0 - x0 * x0).ln();
    let beta = Beta::new(m / 2.0, m / 2.0).expect("valid beta shape");
    let w = loop {
        let z: f64 = beta.sample(rng);
        let w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
        let u: f64 = rng.random();
        if kappa * w + m * (1.0 - x0 * w).ln() - c >= u.ln() {
            break w.clamp(-1.0, 1.0);
        }
    };
    let mu = &prior.mu;
    let tangent = loop {
        let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let along = dot(&v, mu);
        v.iter_mut().zip(mu).for_each(|(x, m)| *x -= along * m);
        let n = norm(&v);
        if n > 1e-12 {
            v.iter_mut().for_each(|x| *x /= n);
            break v;
        }
    };
    let s = (1.0 - w * w).max(0.0).sqrt();
    let mut out: Vec<f64> = mu.iter().zip(&tangent).map(|(m, t)| w * m + s * t).collect();
    let n = norm(&out);
    out.iter_mut().for_each(|x| *x /= n);
    out
}

/// Settings shared by every local sampler of a planner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProposalConfig {
    pub kernel: KernelParams,
    /// Concentration of the prior once a successful direction exists.
    pub kappa: f64,
    /// Rejection attempts before falling back to a uniform direction.
    pub max_attempts: usize,
}

impl Default for ProposalConfig {
    fn default() -> Self {
        ProposalConfig {
            kernel: KernelParams::default(),
            kappa: 2.0,
            max_attempts: 1000,
        }
    }
}

/// Proposal distribution of one local sampler: the prior and the failures
/// observed since the last success.
#[derive(Clone, Debug, PartialEq)]
pub struct ProposalState {
    prior: DirectionalPrior,
    failures: Vec<Vec<f64>>,
    params: KernelParams,
    attempt: usize,
}

/// Result of [`ProposalState::draw_direction`].
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionDraw {
    pub direction: Vec<f64>,
    /// Set when every rejection attempt failed and the direction is uniform.
    pub fallback: bool,
}

impl ProposalState {
    pub fn new(prior: DirectionalPrior, params: KernelParams) -> Self {
        ProposalState {
            prior,
            failures: Vec::new(),
            params,
            attempt: 1,
        }
    }

    pub fn prior(&self) -> &DirectionalPrior {
        &self.prior
    }

    pub fn failures(&self) -> &[Vec<f64>] {
        &self.failures
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    /// Index `i` of the next attempt; always `failures().len() + 1`.
    pub fn attempt(&self) -> usize {
        self.attempt
    }

    /// Product of the likelihood factors `1 - β·k(x, x'_j)` over recorded
    /// failures; the unnormalized posterior divided by the prior.
    pub fn posterior_weight(&self, x: &[f64]) -> f64 {
        let beta = self.params.beta;
        self.failures
            .iter()
            .map(|f| (1.0 - beta * kernel_eval(x, f, &self.params)).max(0.0))
            .product()
    }

    pub fn draw_direction<R: Rng + ?Sized>(&self, max_attempts: usize, rng: &mut R) -> DirectionDraw {
        if self.failures.is_empty() {
            return DirectionDraw {
                direction: vmf_sample(&self.prior, rng),
                fallback: false,
            };
        }
        for _ in 0..max_attempts {
            let x = vmf_sample(&self.prior, rng);
            let u: f64 = rng.random();
            if u < self.posterior_weight(&x) {
                return DirectionDraw {
                    direction: x,
                    fallback: false,
                };
            }
        }
        DirectionDraw {
            direction: uniform_direction(self.prior.dim(), rng),
            fallback: true,
        }
    }

    pub fn record_failure(&mut self, x_failed: Vec<f64>) {
        debug_assert!((norm(&x_failed) - 1.0).abs() < 1e-9);
        self.failures.push(x_failed);
        self.attempt += 1;
    }

    fn reset(&mut self, mu: Vec<f64>, kappa: f64) {
        self.prior = DirectionalPrior { mu, kappa };
        self.failures.clear();
        self.attempt = 1;
    }
}

/// A local sampler walking through free space: its location and proposal.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalSamplerState {
    location: Config,
    proposal: ProposalState,
    has_success: bool,
    kappa: f64,
}

impl LocalSamplerState {
    /// Fresh sampler at `location` with a uniform prior; the configured
    /// concentration applies from the first success on.
    pub fn new(location: Config, dim: usize, cfg: &ProposalConfig) -> Self {
        LocalSamplerState {
            location,
            proposal: ProposalState::new(DirectionalPrior::uniform(dim), cfg.kernel),
            has_success: false,
            kappa: cfg.kappa,
        }
    }

    pub fn location(&self) -> &Config {
        &self.location
    }

    pub fn proposal(&self) -> &ProposalState {
        &self.proposal
    }

    pub fn has_success(&self) -> bool {
        self.has_success
    }

    pub fn draw_direction<R: Rng + ?Sized>(&self, max_attempts: usize, rng: &mut R) -> DirectionDraw {
        self.proposal.draw_direction(max_attempts, rng)
    }

    pub fn record_failure(&mut self, x_failed: Vec<f64>) {
        self.proposal.record_failure(x_failed);
    }

    /// Moves to `q_new` and recentres the prior on the successful direction.
    pub fn record_success(&mut self, x_success: Vec<f64>, q_new: Config) {
        debug_assert!((norm(&x_success) - 1.0).abs() < 1e-9);
        self.location = q_new;
        self.proposal.reset(x_success, self.kappa);
        self.has_success = true;
    }
}
