//! The forest planner: bandit-scheduled rooted and local trees, with local
//! trees born where failed connections cluster and grown by directional
//! proposals that learn from their own failures.

use std::sync::Arc;

use crate::bandit::{ArmId, ArmKind, Bandit, Outcome};
use crate::cspace::{Config, Scene};
use crate::forest::{Forest, ForestDump, NodeId, TreeId};
use crate::proposal::LocalSamplerState;
use crate::proposer::FailureDensityMap;

use super::engine::Core;
use super::{PlanError, Planner, PlannerConfig, RunStats, Solution};

/// A live local arm and the node its sampler currently sits on.
#[derive(Clone, Debug)]
struct Walker {
    arm: ArmId,
    node: NodeId,
    state: LocalSamplerState,
}

/// What happened to a proposed local-tree location.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Placement {
    /// A new local tree and arm were created.
    Born,
    /// The location joined an existing tree within ε.
    Joined,
    /// Nodes lie within ε but none is reachable; dropped to keep new roots
    /// ε-separated.
    Rejected,
}

pub struct Rrf {
    core: Core,
    bandit: Bandit,
    walkers: Vec<Walker>,
    failures: FailureDensityMap,
}

impl Rrf {
    pub fn new(scene: Arc<Scene>, cfg: PlannerConfig) -> Result<Self, PlanError> {
        let seeds = cfg.seed_local_trees.clone();
        let core = Core::new(scene, cfg)?;
        let mut bandit = Bandit::new(core.cfg.bandit);
        bandit.add_arm(TreeId::INIT, ArmKind::Rooted);
        bandit.add_arm(TreeId::TARGET, ArmKind::Rooted);
        let cell = core.cfg.failure_cell_factor * core.cfg.epsilon;
        let failures = FailureDensityMap::new(core.scene.spec(), cell);
        let mut rrf = Rrf {
            core,
            bandit,
            walkers: Vec::new(),
            failures,
        };
        for (i, q) in seeds.into_iter().enumerate() {
            let q = rrf.core.scene.spec().config(q.into_inner())?;
            if !rrf.core.scene.is_free(&q) {
                return Err(PlanError::SeedInCollision(i));
            }
            rrf.place(q);
        }
        rrf.core.stats.current.live_arms = rrf.bandit.live_count();
        rrf.core.stats.current.local_trees_created = rrf.core.forest.local_trees_created() as u64;
        Ok(rrf)
    }

    pub fn failure_map(&self) -> &FailureDensityMap {
        &self.failures
    }

    pub fn live_local_arms(&self) -> usize {
        self.walkers.len()
    }

    /// Joins `q` to a reachable tree within ε, or starts a local tree there.
    fn place(&mut self, q: Config) -> Placement {
        let eps = self.core.epsilon();
        let forest = &self.core.forest;
        let spec = self.core.scene.spec();
        let mut near: Vec<(f64, NodeId)> = forest
            .near_within(&q, eps)
            .into_iter()
            .map(|n| (spec.distance(forest.config(n), &q), n))
            .collect();
        if near.is_empty() {
            debug_assert!(
                forest.nodes().all(|(_, n)| spec.distance(n.config(), &q) > eps),
                "new local root within ε of an existing node"
            );
            let (tree, node) = self.core.forest.add_local_tree(q.clone()).expect("config fits the space");
            let arm = self.bandit.add_arm(tree, ArmKind::Local);
            let state = LocalSamplerState::new(q, spec.dim(), &self.core.cfg.proposal);
            self.walkers.push(Walker { arm, node, state });
            return Placement::Born;
        }
        near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (_, n) in near {
            if self.core.scene.motion_valid(self.core.forest.config(n), &q) {
                let tree = self.core.forest.tree_of(n);
                let id = self.core.forest.insert(tree, n, q).expect("neighbour is in its tree");
                self.core.integrate_node(id);
                self.core.stats.current.proposals_joined += 1;
                return Placement::Joined;
            }
        }
        self.core.stats.current.proposals_rejected += 1;
        Placement::Rejected
    }

    fn maybe_propose(&mut self) {
        let k = self.core.cfg.max_local_trees;
        if k == 0 || self.walkers.len() >= k {
            return;
        }
        let Some(cand) = self.failures.propose(self.core.cfg.min_failures) else {
            return;
        };
        if cand.accepted(self.core.cfg.delta_threshold) {
            self.place(cand.q_local);
        }
    }

    /// One directional step of a local sampler.
    fn extend_local(&mut self, w: usize) -> Outcome {
        let cfg = &self.core.cfg;
        let draw = self.walkers[w]
            .state
            .draw_direction(cfg.proposal.max_attempts, &mut self.core.rng);
        let c = &mut self.core.stats.current;
        if draw.fallback {
            c.fallback_draws += 1;
        }
        c.attempts += 1;
        let scene = &self.core.scene;
        let from = self.core.forest.config(self.walkers[w].node).clone();
        let q_new = scene.spec().offset(&from, &draw.direction, cfg.epsilon);
        let outcome = match &q_new {
            Some(q) if scene.is_free(q) => {
                if scene.motion_valid(&from, q) {
                    Outcome::Extended
                } else {
                    Outcome::MotionBlocked
                }
            }
            _ => Outcome::InCollision,
        };
        match outcome {
            Outcome::InCollision => c.invalid_obstacles += 1,
            Outcome::MotionBlocked => c.invalid_connections += 1,
            Outcome::Extended => {
                c.accepted += 1;
                c.nodes += 1;
            }
        }
        let walker = &mut self.walkers[w];
        if outcome != Outcome::Extended {
            walker.state.record_failure(draw.direction);
            return outcome;
        }
        let q = q_new.expect("extended implies a configuration");
        let tree = self.core.forest.tree_of(walker.node);
        let id = self.core.forest.insert(tree, walker.node, q.clone()).expect("walker node is in its tree");
        walker.state.record_success(draw.direction, q);
        walker.node = id;
        self.core.integrate_node(id);
        outcome
    }
}

impl Planner for Rrf {
    fn name(&self) -> &'static str {
        "rrf"
    }

    fn step(&mut self) -> bool {
        if self.core.done {
            return false;
        }
        self.maybe_propose();
        let arm = self.bandit.pick(&mut self.core.rng);
        let outcome = match self.bandit.arm(arm).kind {
            ArmKind::Rooted => {
                let tree = self.bandit.arm(arm).tree;
                self.core.extend_rooted(tree, None, Some(&mut self.failures))
            }
            ArmKind::Local => {
                let w = self.walkers.iter().position(|w| w.arm == arm).expect("live local arm has a walker");
                self.extend_local(w)
            }
        };
        if self.bandit.update(arm, outcome) {
            self.walkers.retain(|w| w.arm != arm);
        }
        let forest = &self.core.forest;
        let bandit = &mut self.bandit;
        self.walkers.retain(|w| {
            let tree = forest.tree_of(w.node);
            if forest.tree(tree).kind().is_rooted() {
                bandit.kill(w.arm);
                return false;
            }
            bandit.arm_mut(w.arm).tree = tree;
            true
        });
        self.core.end_iteration(outcome, self.bandit.live_count());
        !self.core.done
    }

    fn is_done(&self) -> bool {
        self.core.done
    }

    fn stats(&self) -> &RunStats {
        &self.core.stats
    }

    fn solution(&self) -> Option<Solution> {
        self.core.solution()
    }

    fn forest(&self) -> &Forest {
        &self.core.forest
    }

    fn dump(&self) -> ForestDump {
        let samplers: Vec<Config> = self.walkers.iter().map(|w| w.state.location().clone()).collect();
        self.core.forest.dump(&samplers)
    }
}
