//! Baselines that only grow the start and goal trees.

use std::sync::Arc;

use crate::bandit::{ArmKind, Bandit};
use crate::cspace::Scene;
use crate::forest::{Forest, ForestDump, TreeId};

use super::engine::Core;
use super::{InformedSampler, PlanError, Planner, PlannerConfig, RunStats, Solution};

/// RRT*: grows the start tree only; the goal is reached by an ε-join with
/// the (never extended) goal root.
pub struct RrtStar {
    core: Core,
}

impl RrtStar {
    pub fn new(scene: Arc<Scene>, cfg: PlannerConfig) -> Result<Self, PlanError> {
        Ok(RrtStar {
            core: Core::new(scene, cfg)?,
        })
    }
}

/// Bidirectional RRT*: both rooted trees, chosen per iteration by the same
/// bandit the forest planner uses.
pub struct BiRrtStar {
    core: Core,
    bandit: Bandit,
}

impl BiRrtStar {
    pub fn new(scene: Arc<Scene>, cfg: PlannerConfig) -> Result<Self, PlanError> {
        let mut bandit = Bandit::new(cfg.bandit);
        bandit.add_arm(TreeId::INIT, ArmKind::Rooted);
        bandit.add_arm(TreeId::TARGET, ArmKind::Rooted);
        Ok(BiRrtStar {
            core: Core::new(scene, cfg)?,
            bandit,
        })
    }
}

/// RRT* whose samples come from the informed set once a solution exists.
pub struct InformedRrtStar {
    core: Core,
    sampler: InformedSampler,
}

impl InformedRrtStar {
    pub fn new(scene: Arc<Scene>, cfg: PlannerConfig) -> Result<Self, PlanError> {
        let core = Core::new(scene, cfg)?;
        let sampler = InformedSampler::new(core.scene.spec(), &core.cfg.q_init, &core.cfg.q_target);
        Ok(InformedRrtStar { core, sampler })
    }
}

macro_rules! shared_planner_methods {
    () => {
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
            self.core.forest.dump(&[])
        }
    };
}

impl Planner for RrtStar {
    fn name(&self) -> &'static str {
        "rrt_star"
    }

    fn step(&mut self) -> bool {
        if self.core.done {
            return false;
        }
        let outcome = self.core.extend_rooted(TreeId::INIT, None, None);
        self.core.end_iteration(outcome, 1);
        !self.core.done
    }

    shared_planner_methods!();
}

impl Planner for BiRrtStar {
    fn name(&self) -> &'static str {
        "birrt_star"
    }

    fn step(&mut self) -> bool {
        if self.core.done {
            return false;
        }
        let arm = self.bandit.pick(&mut self.core.rng);
        let tree = self.bandit.arm(arm).tree;
        let outcome = self.core.extend_rooted(tree, None, None);
        self.bandit.update(arm, outcome);
        self.core.end_iteration(outcome, self.bandit.live_count());
        !self.core.done
    }

    shared_planner_methods!();
}

impl Planner for InformedRrtStar {
    fn name(&self) -> &'static str {
        "informed_rrt_star"
    }

    fn step(&mut self) -> bool {
        if self.core.done {
            return false;
        }
        let informed = self.core.forest.best_cost().map(|c| (&self.sampler, c));
        let outcome = self.core.extend_rooted(TreeId::INIT, informed, None);
        self.core.end_iteration(outcome, 1);
        !self.core.done
    }

    shared_planner_methods!();
}
