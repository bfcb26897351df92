//! Sampling-based planners over a [`Scene`]: the multi-tree forest planner
//! with bandit tree selection and local trees, plus RRT*, bidirectional RRT*
//! and Informed RRT* baselines sharing the same extension machinery.

mod engine;
mod informed;
mod rrf;
mod rooted;

use std::sync::Arc;

use crate::bandit::{BanditConfig, BanditError};
use crate::cspace::{Config, CspaceError, Scene};
use crate::forest::{Forest, ForestDump};
use crate::proposal::ProposalConfig;

pub use informed::InformedSampler;
pub use rooted::{BiRrtStar, InformedRrtStar, RrtStar};
pub use rrf::Rrf;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PlanError {
    #[error("start configuration is in collision")]
    StartInCollision,
    #[error("goal configuration is in collision")]
    GoalInCollision,
    #[error("seeded local tree {0} is in collision")]
    SeedInCollision(usize),
    #[error("invalid planner setting: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Space(#[from] CspaceError),
    #[error(transparent)]
    Bandit(#[from] BanditError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StopMode {
    /// Run until the node budget is spent.
    Nodes,
    /// Also stop after this many wall-clock seconds.
    Time(f64),
    /// Stop as soon as any solution exists.
    FirstSolution,
}

/// Shrinking-ball rewiring radius `min(cap, γ (ln n / n)^(1/d))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RewireConfig {
    /// Explicit γ. `None` uses `2 (1 + 1/d)^(1/d) (μ_free / ζ_d)^(1/d)`
    /// with μ_free the estimated free volume and ζ_d the unit-ball volume.
    pub gamma: Option<f64>,
    /// Radius cap as a multiple of ε.
    pub cap_factor: f64,
    /// Also rewire every node a local tree brings into a rooted tree.
    pub rewire_absorbed: bool,
}

impl Default for RewireConfig {
    fn default() -> Self {
        RewireConfig {
            gamma: None,
            cap_factor: 2.0,
            rewire_absorbed: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlannerConfig {
    pub q_init: Config,
    pub q_target: Config,
    /// Budget `N` of accepted extensions.
    pub max_nodes: usize,
    /// Most local arms alive at once (`k`); 0 disables local trees.
    pub max_local_trees: usize,
    /// Step length and join radius ε (weighted configuration units).
    pub epsilon: f64,
    /// Proposals need `p_potential` strictly above this.
    pub delta_threshold: f64,
    /// Failures a density cell needs before it is proposed.
    pub min_failures: u64,
    /// Density cell edge as a multiple of ε.
    pub failure_cell_factor: f64,
    pub proposal: ProposalConfig,
    pub bandit: BanditConfig,
    pub rewire: RewireConfig,
    /// Probability of sampling the opposite root instead of a uniform point.
    pub goal_bias: f64,
    pub seed: u64,
    pub stop: StopMode,
    /// Hard iteration cap as a multiple of `max_nodes`.
    pub iteration_cap_factor: usize,
    /// User-supplied local-tree roots, created at start-up.
    pub seed_local_trees: Vec<Config>,
}

impl PlannerConfig {
    pub fn new(q_init: Config, q_target: Config) -> Self {
        PlannerConfig {
            q_init,
            q_target,
            max_nodes: 5000,
            max_local_trees: 4,
            epsilon: 1.0,
            delta_threshold: 0.45,
            min_failures: 5,
            failure_cell_factor: 4.0,
            proposal: ProposalConfig::default(),
            bandit: BanditConfig::default(),
            rewire: RewireConfig::default(),
            goal_bias: 0.05,
            seed: 0,
            stop: StopMode::Nodes,
            iteration_cap_factor: 50,
            seed_local_trees: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        let bad = |m: String| Err(PlanError::BadConfig(m));
        if self.max_nodes == 0 {
            return bad("node budget must be positive".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.delta_threshold > 0.0 && self.delta_threshold < 1.0) {
            return bad(format!("delta threshold must lie in (0, 1), got {}", self.delta_threshold));
        }
        if self.min_failures == 0 {
            return bad("min_failures must be at least 1".into());
        }
        for (name, v) in [
            ("failure_cell_factor", self.failure_cell_factor),
            ("rewire cap_factor", self.rewire.cap_factor),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if let Some(g) = self.rewire.gamma {
            if !(g > 0.0 && g.is_finite()) {
                return bad(format!("rewire gamma must be positive, got {g}"));
            }
        }
        if !(0.0..1.0).contains(&self.goal_bias) {
            return bad(format!("goal bias must lie in [0, 1), got {}", self.goal_bias));
        }
        if let StopMode::Time(t) = self.stop {
            if !(t > 0.0) {
                return bad(format!("time budget must be positive, got {t}"));
            }
        }
        if self.iteration_cap_factor == 0 {
            return bad("iteration cap factor must be positive".into());
        }
        if !(self.proposal.kappa >= 0.0) || self.proposal.max_attempts == 0 {
            return bad("proposal needs kappa >= 0 and at least one attempt".into());
        }
        Ok(())
    }
}

/// Cumulative counters. `attempts` always equals
/// `accepted + invalid_obstacles + invalid_connections`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Counters {
    pub iteration: u64,
    /// Accepted extensions (the node budget counter).
    pub nodes: u64,
    pub attempts: u64,
    pub accepted: u64,
    pub invalid_obstacles: u64,
    pub invalid_connections: u64,
    pub live_arms: usize,
    pub local_trees_created: u64,
    /// Proposals that joined an existing tree instead of starting one.
    pub proposals_joined: u64,
    /// Proposals dropped because nearby nodes were unreachable.
    pub proposals_rejected: u64,
    /// Direction draws that exhausted rejection sampling.
    pub fallback_draws: u64,
    pub best_cost: Option<f64>,
}

impl Counters {
    pub fn conserved(&self) -> bool {
        self.attempts == self.accepted + self.invalid_obstacles + self.invalid_connections
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatsRow {
    pub seconds: f64,
    pub counters: Counters,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FirstSolution {
    pub iteration: u64,
    pub nodes: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunStats {
    /// One row per accepted extension, plus a closing row if anything
    /// changed after the last one.
    pub rows: Vec<StatsRow>,
    pub current: Counters,
    pub first_solution: Option<FirstSolution>,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub path: Vec<Config>,
    pub cost: f64,
    /// When this cost was first reached.
    pub iteration: u64,
    pub seconds: f64,
}

/// Common interface of every planner.
pub trait Planner: Send {
    fn name(&self) -> &'static str;
    /// Runs one iteration. Returns `false` once a stop condition holds.
    fn step(&mut self) -> bool;
    fn is_done(&self) -> bool;
    fn stats(&self) -> &RunStats;
    fn solution(&self) -> Option<Solution>;
    fn forest(&self) -> &Forest;
    /// Forest snapshot including local-sampler positions.
    fn dump(&self) -> ForestDump;

    fn run(&mut self) -> PlanResult {
        while self.step() {}
        PlanResult {
            solution: self.solution(),
            stats: self.stats().clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanResult {
    pub solution: Option<Solution>,
    pub stats: RunStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlannerKind {
    Rrf,
    RrtStar,
    BiRrtStar,
    InformedRrtStar,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 4] = [
        PlannerKind::Rrf,
        PlannerKind::RrtStar,
        PlannerKind::BiRrtStar,
        PlannerKind::InformedRrtStar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlannerKind::Rrf => "rrf",
            PlannerKind::RrtStar => "rrt_star",
            PlannerKind::BiRrtStar => "birrt_star",
            PlannerKind::InformedRrtStar => "informed_rrt_star",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let norm = s.to_ascii_lowercase().replace(['-', '*'], "_");
        let norm = norm.trim_end_matches('_');
        Self::ALL.into_iter().find(|k| {
            k.name() == norm
                || matches!(
                    (k, norm),
                    (PlannerKind::Rrf, "rrf_star")
                        | (PlannerKind::RrtStar, "rrt")
                        | (PlannerKind::BiRrtStar, "birrt")
                        | (PlannerKind::InformedRrtStar, "informed")
                )
        })
    }

    pub fn build(self, scene: Arc<Scene>, cfg: PlannerConfig) -> Result<Box<dyn Planner>, PlanError> {
        Ok(match self {
            PlannerKind::Rrf => Box::new(Rrf::new(scene, cfg)?),
            PlannerKind::RrtStar => Box::new(RrtStar::new(scene, cfg)?),
            PlannerKind::BiRrtStar => Box::new(BiRrtStar::new(scene, cfg)?),
            PlannerKind::InformedRrtStar => Box::new(InformedRrtStar::new(scene, cfg)?),
        })
    }
}

/// Builds and runs one planner to completion.
pub fn plan(kind: PlannerKind, scene: Arc<Scene>, cfg: PlannerConfig) -> Result<PlanResult, PlanError> {
    Ok(kind.build(scene, cfg)?.run())
}
