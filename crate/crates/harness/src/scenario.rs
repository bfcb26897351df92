//! Scenario files: a JSON description of a map, robot, query and planner
//! settings. Paths inside a scenario are relative to the scenario file.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rrf_core::bandit::BanditConfig;
use rrf_core::cspace::{OccupancyGrid, PlanarArm, Robot, Scene, SpaceSpec};
use rrf_core::planner::{PlannerConfig, PlannerKind, StopMode};
use rrf_core::proposal::KernelParams;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read scenario {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("malformed scenario {path}: {reason}")]
    Parse { path: String, reason: String },
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid(msg.into())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RobotSpec {
    #[default]
    Point,
    /// Planar arm. With `mobile_base` the configuration is
    /// `(x, y, θ_1, ..., θ_k)`; otherwise it is the joint angles only and the
    /// base sits at `base`.
    Arm {
        links: Vec<f64>,
        #[serde(default)]
        base: [f64; 2],
        #[serde(default)]
        mobile_base: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopSpec {
    Nodes,
    FirstSolution,
    Time(f64),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelOverrides {
    pub sigma: Option<f64>,
    pub lambda: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BanditOverrides {
    pub eta: Option<f64>,
    pub discount: Option<f64>,
    pub floor: Option<f64>,
    pub initial: Option<f64>,
}

/// Optional replacements for [`PlannerConfig`] defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub max_nodes: Option<usize>,
    pub max_local_trees: Option<usize>,
    pub epsilon: Option<f64>,
    pub delta_threshold: Option<f64>,
    pub min_failures: Option<u64>,
    pub failure_cell_factor: Option<f64>,
    pub goal_bias: Option<f64>,
    pub iteration_cap_factor: Option<usize>,
    pub kappa: Option<f64>,
    pub max_attempts: Option<usize>,
    #[serde(default)]
    pub kernel: KernelOverrides,
    #[serde(default)]
    pub bandit: BanditOverrides,
    pub rewire_gamma: Option<f64>,
    pub rewire_cap_factor: Option<f64>,
}

/// The file format, field for field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    /// PGM occupancy map.
    pub map: PathBuf,
    /// World units per map cell.
    #[serde(default = "one")]
    pub resolution: f64,
    #[serde(default)]
    pub robot: RobotSpec,
    /// Largest workspace step between collision checks. Defaults to a
    /// quarter cell.
    pub collision_resolution: Option<f64>,
    pub weights: Option<Vec<f64>>,
    pub q_init: Vec<f64>,
    pub q_target: Vec<f64>,
    pub planner: Option<String>,
    #[serde(default)]
    pub planners: Vec<String>,
    #[serde(default)]
    pub config: ConfigOverrides,
    #[serde(default = "one_usize")]
    pub repeats: usize,
    /// Explicit seeds; otherwise `base_seed..base_seed + repeats`.
    pub seeds: Option<Vec<u64>>,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "nodes_stop")]
    pub stop: StopSpec,
    #[serde(default)]
    pub seed_local_trees: Vec<Vec<f64>>,
    /// Node-count bucket width for aggregated statistics.
    #[serde(default = "hundred")]
    pub log_every: u64,
}

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

fn hundred() -> u64 {
    100
}

fn nodes_stop() -> StopSpec {
    StopSpec::Nodes
}

/// A validated scenario, ready to run.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub source: PathBuf,
    pub map_path: PathBuf,
    pub scene: Arc<Scene>,
    pub planners: Vec<PlannerKind>,
    /// Settings for every run; only `seed` varies.
    pub config: PlannerConfig,
    pub seeds: Vec<u64>,
    pub log_every: u64,
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        let file: ScenarioFile = serde_json::from_str(&text).map_err(|e| ScenarioError::Parse {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::from_file(file, dir, path)
    }

    /// Builds a scenario, reading the map relative to `dir`.
    pub fn from_file(file: ScenarioFile, dir: &Path, source: &Path) -> Result<Self, ScenarioError> {
        let map_path = dir.join(&file.map);
        let grid = OccupancyGrid::from_pgm(&map_path, file.resolution).map_err(|e| invalid(e.to_string()))?;
        let scene = build_scene(&file, grid)?;
        let planners = planner_list(&file)?;
        let config = build_config(&file, &scene)?;
        if file.repeats == 0 {
            return Err(invalid("repeats must be at least 1"));
        }
        let seeds = match &file.seeds {
            Some(s) if s.is_empty() => return Err(invalid("seed list is empty")),
            Some(s) => s.clone(),
            None => (0..file.repeats as u64).map(|i| file.base_seed + i).collect(),
        };
        if file.log_every == 0 {
            return Err(invalid("log_every must be positive"));
        }
        Ok(Scenario {
            name: file.name,
            source: source.to_path_buf(),
            map_path,
            scene: Arc::new(scene),
            planners,
            config,
            seeds,
            log_every: file.log_every,
        })
    }

    /// Settings for one run.
    pub fn config_for(&self, seed: u64) -> PlannerConfig {
        let mut cfg = self.config.clone();
        cfg.seed = seed;
        cfg
    }
}

fn build_scene(file: &ScenarioFile, grid: OccupancyGrid) -> Result<Scene, ScenarioError> {
    let err = |e: rrf_core::cspace::CspaceError| invalid(e.to_string());
    let res = file.collision_resolution.unwrap_or(grid.resolution() / 4.0);
    let (spec, robot) = match &file.robot {
        RobotSpec::Point => {
            let spec = SpaceSpec::euclidean(vec![(0.0, grid.world_width()), (0.0, grid.world_height())]).map_err(err)?;
            (spec, Robot::Point)
        }
        RobotSpec::Arm {
            links,
            base,
            mobile_base,
        } => {
            let offset = if *mobile_base { 2 } else { 0 };
            let mut bounds = Vec::new();
            let mut wrap = Vec::new();
            if *mobile_base {
                bounds.extend([(0.0, grid.world_width()), (0.0, grid.world_height())]);
                wrap.extend([false, false]);
            }
            for _ in links {
                bounds.push((-PI, PI));
                wrap.push(true);
            }
            let joints = (offset..offset + links.len()).collect();
            let arm = PlanarArm::new(*base, mobile_base.then_some([0, 1]), links.clone(), joints).map_err(err)?;
            (SpaceSpec::new(bounds, wrap).map_err(err)?, Robot::Arm(arm))
        }
    };
    let spec = match &file.weights {
        Some(w) => spec.with_weights(w.clone()).map_err(err)?,
        None => spec,
    };
    Scene::new(spec, grid, robot, res).map_err(err)
}

fn planner_list(file: &ScenarioFile) -> Result<Vec<PlannerKind>, ScenarioError> {
    let mut names: Vec<&str> = file.planner.iter().map(String::as_str).collect();
    names.extend(file.planners.iter().map(String::as_str));
    if names.is_empty() {
        return Err(invalid("no planner given"));
    }
    let mut out = Vec::new();
    for n in names {
        let kind = PlannerKind::parse(n).ok_or_else(|| invalid(format!("unknown planner {n:?}")))?;
        if !out.contains(&kind) {
            out.push(kind);
        }
    }
    Ok(out)
}

fn build_config(file: &ScenarioFile, scene: &Scene) -> Result<PlannerConfig, ScenarioError> {
    let spec = scene.spec();
    let config = |v: &[f64], what: &str| {
        spec.config(v.to_vec()).map_err(|e| invalid(format!("{what}: {e}")))
    };
    let mut cfg = PlannerConfig::new(config(&file.q_init, "q_init")?, config(&file.q_target, "q_target")?);
    let o = &file.config;
    macro_rules! set {
        ($($field:ident),*) => {
            $(if let Some(v) = o.$field {
                cfg.$field = v;
            })*
        };
    }
    set!(
        max_nodes,
        max_local_trees,
        epsilon,
        delta_threshold,
        min_failures,
        failure_cell_factor,
        goal_bias,
        iteration_cap_factor
    );
    if let Some(k) = o.kappa {
        cfg.proposal.kappa = k;
    }
    if let Some(m) = o.max_attempts {
        cfg.proposal.max_attempts = m;
    }
    let k = &o.kernel;
    if k.sigma.is_some() || k.lambda.is_some() || k.beta.is_some() {
        let d = cfg.proposal.kernel;
        cfg.proposal.kernel = KernelParams::new_lenient(
            k.sigma.unwrap_or(d.sigma()),
            k.lambda.unwrap_or(d.lambda()),
            k.beta.unwrap_or(d.beta()),
        )
        .map_err(|e| invalid(e.to_string()))?;
    }
    let b = &o.bandit;
    let d = cfg.bandit;
    cfg.bandit = BanditConfig::new(
        b.eta.unwrap_or(d.eta()),
        b.discount.unwrap_or(d.discount()),
        b.floor.unwrap_or(d.floor()),
        b.initial.unwrap_or(d.initial()),
    )
    .map_err(|e| invalid(e.to_string()))?;
    if o.rewire_gamma.is_some() {
        cfg.rewire.gamma = o.rewire_gamma;
    }
    if let Some(c) = o.rewire_cap_factor {
        cfg.rewire.cap_factor = c;
    }
    cfg.stop = match file.stop {
        StopSpec::Nodes => StopMode::Nodes,
        StopSpec::FirstSolution => StopMode::FirstSolution,
        StopSpec::Time(t) => StopMode::Time(t),
    };
    cfg.seed_local_trees = file
        .seed_local_trees
        .iter()
        .map(|q| config(q, "seed_local_trees"))
        .collect::<Result<_, _>>()?;
    cfg.validate().map_err(|e| invalid(e.to_string()))?;
    if !scene.is_free(&cfg.q_init) {
        return Err(invalid("q_init is in collision"));
    }
    if !scene.is_free(&cfg.q_target) {
        return Err(invalid("q_target is in collision"));
    }
    Ok(cfg)
}
