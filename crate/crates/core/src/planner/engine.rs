//! State and extension steps shared by every planner.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bandit::Outcome;
use crate::cspace::{Config, Scene, MAX_CONSECUTIVE_REJECTIONS};
use crate::forest::{Forest, MergeReport, NodeId, TreeId};
use crate::proposer::FailureDensityMap;

use super::{FirstSolution, InformedSampler, PlanError, PlannerConfig, RunStats, Solution, StatsRow, StopMode};

/// Samples used to estimate the free volume for the rewiring constant.
const VOLUME_SAMPLES: usize = 4096;
const VOLUME_SEED: u64 = 0x5eed;

pub(crate) struct Core {
    pub scene: Arc<Scene>,
    pub cfg: PlannerConfig,
    pub forest: Forest,
    pub rng: ChaCha8Rng,
    pub stats: RunStats,
    pub done: bool,
    gamma: f64,
    start: Instant,
    /// Best cost seen so far, with the iteration and time it was reached.
    best_seen: Option<(f64, u64, f64)>,
}

/// Volume of the unit ball in `d` dimensions.
pub(crate) fn unit_ball_volume(d: usize) -> f64 {
    let (mut even, mut odd) = (1.0, 2.0);
    for k in 2..=d {
        let prev = if k % 2 == 0 { even } else { odd };
        let next = prev * 2.0 * PI / k as f64;
        if k % 2 == 0 {
            even = next;
        } else {
            odd = next;
        }
    }
    if d.is_multiple_of(2) {
        even
    } else {
        odd
    }
}

/// Monte Carlo estimate of the free volume in weighted units, from a fixed
/// seed so every planner on a scene sees the same value.
pub(crate) fn free_volume(scene: &Scene) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(VOLUME_SEED);
    let free = (0..VOLUME_SAMPLES)
        .filter(|_| scene.is_free(&scene.spec().sample_uniform(&mut rng)))
        .count();
    let frac = (free.max(1) as f64) / VOLUME_SAMPLES as f64;
    frac * scene.spec().weighted_volume()
}

impl Core {
    pub fn new(scene: Arc<Scene>, mut cfg: PlannerConfig) -> Result<Self, PlanError> {
        cfg.validate()?;
        let spec = scene.spec();
        cfg.q_init = spec.config(cfg.q_init.clone().into_inner())?;
        cfg.q_target = spec.config(cfg.q_target.clone().into_inner())?;
        if !scene.is_free(&cfg.q_init) {
            return Err(PlanError::StartInCollision);
        }
        if !scene.is_free(&cfg.q_target) {
            return Err(PlanError::GoalInCollision);
        }
        let d = spec.dim() as f64;
        let gamma = cfg.rewire.gamma.unwrap_or_else(|| {
            let ratio = free_volume(&scene) / unit_ball_volume(spec.dim());
            2.0 * (1.0 + 1.0 / d).powf(1.0 / d) * ratio.powf(1.0 / d)
        });
        let forest = Forest::new(spec, cfg.q_init.clone(), cfg.q_target.clone(), cfg.epsilon)
            .expect("validated configurations fit the space");
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut core = Core {
            scene,
            cfg,
            forest,
            rng,
            stats: RunStats::default(),
            done: false,
            gamma,
            start: Instant::now(),
            best_seen: None,
        };
        let root = core.forest.tree(TreeId::TARGET).root();
        core.forest.try_merge(root, core.cfg.epsilon, &core.scene);
        core.note_solution();
        core.check_stop();
        Ok(core)
    }

    pub fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    pub fn epsilon(&self) -> f64 {
        self.cfg.epsilon
    }

    pub fn rewire_radius(&self) -> f64 {
        let n = self.forest.node_count().max(2) as f64;
        let d = self.scene.spec().dim() as f64;
        let shrinking = self.gamma * (n.ln() / n).powf(1.0 / d);
        shrinking.min(self.cfg.rewire.cap_factor * self.cfg.epsilon)
    }

    /// Joins a freshly inserted node to nearby trees and rewires it when it
    /// sits in a rooted tree.
    pub fn integrate_node(&mut self, id: NodeId) -> MergeReport {
        let report = self.forest.try_merge(id, self.cfg.epsilon, &self.scene);
        if self.forest.kind_of(id).is_rooted() {
            let r = self.rewire_radius();
            self.forest.rewire(id, r, &self.scene);
            if self.cfg.rewire.rewire_absorbed {
                for &n in &report.newly_rooted {
                    if n != id {
                        self.forest.rewire(n, r, &self.scene);
                    }
                }
            }
        }
        report
    }

    /// Draws until a free configuration appears. Every collision counts as
    /// an attempt and an invalid obstacle.
    fn draw_free(&mut self, goal: &Config, informed: Option<(&InformedSampler, f64)>) -> Option<Config> {
        for _ in 0..MAX_CONSECUTIVE_REJECTIONS {
            let q = if self.rng.random::<f64>() < self.cfg.goal_bias {
                goal.clone()
            } else if let Some((sampler, c_best)) = informed {
                sampler.sample(c_best, &mut self.rng)
            } else {
                self.scene.spec().sample_uniform(&mut self.rng)
            };
            if self.scene.is_free(&q) {
                return Some(q);
            }
            self.stats.current.attempts += 1;
            self.stats.current.invalid_obstacles += 1;
        }
        log::warn!("no free sample after {MAX_CONSECUTIVE_REJECTIONS} draws");
        None
    }

    /// One RRT-style extension of a rooted tree toward a free sample.
    pub fn extend_rooted(
        &mut self,
        tree: TreeId,
        informed: Option<(&InformedSampler, f64)>,
        failures: Option<&mut FailureDensityMap>,
    ) -> Outcome {
        let goal = if tree == TreeId::INIT {
            self.cfg.q_target.clone()
        } else {
            self.cfg.q_init.clone()
        };
        let Some(q_rand) = self.draw_free(&goal, informed) else {
            return Outcome::InCollision;
        };
        let near = self.forest.nearest(&q_rand, tree);
        let from = self.forest.config(near).clone();
        let spec = self.scene.spec();
        let q_new = spec.steer(&from, &q_rand, self.cfg.epsilon);
        self.stats.current.attempts += 1;
        let gap = spec.distance(&from, &q_rand);
        if gap <= 0.0 || !self.scene.motion_valid(&from, &q_new) {
            self.stats.current.invalid_connections += 1;
            if let Some(map) = failures {
                if gap > 0.0 {
                    map.record_failed_sample(&q_rand);
                }
            }
            return Outcome::MotionBlocked;
        }
        let id = self.forest.insert(tree, near, q_new).expect("nearest node is in the tree");
        self.stats.current.accepted += 1;
        self.stats.current.nodes += 1;
        self.integrate_node(id);
        Outcome::Extended
    }

    fn note_solution(&mut self) {
        let Some(cost) = self.forest.best_cost() else {
            return;
        };
        if self.best_seen.is_none_or(|(c, _, _)| cost < c) {
            let (it, secs) = (self.stats.current.iteration, self.elapsed());
            self.best_seen = Some((cost, it, secs));
            if self.stats.first_solution.is_none() {
                self.stats.first_solution = Some(FirstSolution {
                    iteration: it,
                    nodes: self.stats.current.nodes,
                    seconds: secs,
                });
            }
        }
        self.stats.current.best_cost = Some(cost);
    }

    fn check_stop(&mut self) {
        let c = &self.stats.current;
        let cap = (self.cfg.max_nodes as u64).saturating_mul(self.cfg.iteration_cap_factor as u64);
        let stop = c.nodes >= self.cfg.max_nodes as u64
            || c.iteration >= cap
            || match self.cfg.stop {
                StopMode::Nodes => false,
                StopMode::Time(t) => self.elapsed() >= t,
                StopMode::FirstSolution => self.best_seen.is_some(),
            };
        if stop && !self.done {
            self.done = true;
            let changed = self.stats.rows.last().is_none_or(|r| r.counters != self.stats.current);
            if changed {
                self.stats.rows.push(StatsRow {
                    seconds: self.elapsed(),
                    counters: self.stats.current,
                });
            }
            self.stats.seconds = self.elapsed();
        }
    }

    /// Bookkeeping at the end of an iteration.
    pub fn end_iteration(&mut self, outcome: Outcome, live_arms: usize) {
        let c = &mut self.stats.current;
        c.iteration += 1;
        c.live_arms = live_arms;
        c.local_trees_created = self.forest.local_trees_created() as u64;
        self.note_solution();
        debug_assert!(self.stats.current.conserved(), "{:?}", self.stats.current);
        if outcome == Outcome::Extended {
            self.stats.rows.push(StatsRow {
                seconds: self.elapsed(),
                counters: self.stats.current,
            });
        }
        self.check_stop();
    }

    pub fn solution(&self) -> Option<Solution> {
        let sol = self.forest.extract_solution()?;
        let (_, iteration, seconds) = self.best_seen.expect("solution implies a recorded cost");
        Some(Solution {
            path: sol.path,
            cost: sol.cost,
            iteration,
            seconds,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_ball_volumes() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-12);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-12);
        assert!((unit_ball_volume(3) - 4.0 / 3.0 * PI).abs() < 1e-12);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-12);
    }
}
