use std::sync::Arc;

use rrf_core::cspace::{Config, OccupancyGrid, Scene};
use rrf_core::forest::{NodeId, TreeId};
use rrf_core::planner::{
    BiRrtStar, Counters, PlanError, Planner, PlannerConfig, PlannerKind, Rrf, RunStats, StopMode,
};

fn c(x: f64, y: f64) -> Config {
    Config::new(vec![x, y])
}

fn empty(n: usize) -> Arc<Scene> {
    Arc::new(Scene::point_robot(OccupancyGrid::empty(n, n, 1.0).unwrap()).unwrap())
}

/// Two rooms split by a vertical wall with a two-cell gap.
fn walled(gap: bool) -> Arc<Scene> {
    let mut g = OccupancyGrid::empty(20, 20, 1.0).unwrap();
    g.fill_rect(9, 0, 11, 20, true);
    if gap {
        g.fill_rect(9, 9, 11, 11, false);
    }
    Arc::new(Scene::point_robot(g).unwrap())
}

fn cfg(init: Config, target: Config, n: usize, seed: u64) -> PlannerConfig {
    let mut cfg = PlannerConfig::new(init, target);
    cfg.max_nodes = n;
    cfg.seed = seed;
    cfg
}

/// Stats rows with timings dropped.
fn counters(stats: &RunStats) -> Vec<Counters> {
    stats.rows.iter().map(|r| r.counters).collect()
}

/// Dense re-check of a point-robot motion at a tenth of the scene resolution.
fn dense_valid(scene: &Scene, a: &Config, b: &Config) -> bool {
    let step = scene.resolution() / 10.0;
    let n = (scene.spec().distance(a, b) / step).ceil().max(1.0) as usize;
    (0..=n).all(|k| {
        let t = k as f64 / n as f64;
        scene.is_free(&c(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[test]
fn first_extension_on_empty_map_lands_within_epsilon() {
    let scene = empty(10);
    let mut p = Rrf::new(scene, cfg(c(1.0, 1.0), c(9.0, 9.0), 100, 3)).unwrap();
    p.step();
    let f = p.forest();
    assert_eq!(f.node_count(), 3);
    let id = NodeId(2);
    let parent = f.node(id).parent().unwrap();
    assert!(f.space().distance(f.config(id), f.config(parent)) <= 1.0 + 1e-12);
    assert_eq!(p.stats().current.nodes, 1);
}

#[test]
fn without_local_trees_matches_bidirectional_rrt_star() {
    let scene = walled(true);
    for seed in 0..4 {
        let mut base = cfg(c(3.0, 10.0), c(17.0, 10.0), 800, seed);
        base.max_local_trees = 0;
        let mut a = Rrf::new(scene.clone(), base.clone()).unwrap();
        let mut b = BiRrtStar::new(scene.clone(), base).unwrap();
        loop {
            let (ca, cb) = (a.step(), b.step());
            assert_eq!(ca, cb);
            assert_eq!(a.stats().current, b.stats().current, "seed {seed}");
            if !ca {
                break;
            }
        }
        assert_eq!(a.dump().to_text(), b.dump().to_text());
        assert_eq!(counters(a.stats()), counters(b.stats()));
    }
}

#[test]
fn runs_are_deterministic() {
    let scene = walled(true);
    for kind in PlannerKind::ALL {
        let run = || {
            let mut p = kind.build(scene.clone(), cfg(c(3.0, 10.0), c(17.0, 10.0), 1500, 42)).unwrap();
            let res = p.run();
            (p.dump().to_text(), counters(&res.stats), res.solution.map(|s| (s.path, s.cost)))
        };
        let first = run();
        for _ in 0..2 {
            assert_eq!(run(), first, "{kind:?}");
        }
    }
}

#[test]
fn stats_conserve_and_costs_never_rise() {
    let scene = walled(true);
    for kind in PlannerKind::ALL {
        let mut p = kind.build(scene.clone(), cfg(c(3.0, 10.0), c(17.0, 10.0), 2000, 7)).unwrap();
        let mut prev = p.stats().current;
        while p.step() {
            let cur = p.stats().current;
            assert!(cur.conserved(), "{kind:?} {cur:?}");
            assert!(cur.iteration == prev.iteration + 1);
            assert!(cur.attempts >= prev.attempts && cur.nodes >= prev.nodes);
            assert!(cur.invalid_obstacles >= prev.invalid_obstacles);
            assert!(cur.invalid_connections >= prev.invalid_connections);
            assert!(cur.local_trees_created >= prev.local_trees_created);
            if let Some(b) = prev.best_cost {
                assert!(cur.best_cost.unwrap() <= b);
            }
            prev = cur;
        }
        assert!(p.stats().current.conserved());
        p.forest().check_invariants(1e-6).unwrap();
        let rows = &p.stats().rows;
        assert!(rows.windows(2).all(|w| w[0].counters.nodes <= w[1].counters.nodes));
    }
}

#[test]
fn identical_endpoints_give_zero_cost() {
    let scene = empty(10);
    for kind in PlannerKind::ALL {
        let mut p = kind.build(scene.clone(), cfg(c(4.0, 4.0), c(4.0, 4.0), 50, 0)).unwrap();
        assert_eq!(p.solution().unwrap().cost, 0.0);
        p.run();
        assert_eq!(p.solution().unwrap().cost, 0.0);
    }
}

#[test]
fn empty_map_costs_near_straight_line() {
    let scene = empty(10);
    let straight = 8.0 * 2f64.sqrt();
    for kind in [PlannerKind::Rrf, PlannerKind::RrtStar] {
        let costs: Vec<f64> = (0..10)
            .map(|seed| {
                let res = rrf_core::planner::plan(kind, scene.clone(), cfg(c(1.0, 1.0), c(9.0, 9.0), 500, seed)).unwrap();
                res.solution.expect("empty map is solvable").cost
            })
            .collect();
        let m = median(costs);
        assert!(m <= 1.05 * straight, "{kind:?}: median {m} vs {straight}");
    }
}

#[test]
fn walled_off_goal_terminates_without_solution() {
    let scene = walled(false);
    for kind in PlannerKind::ALL {
        let mut p = kind.build(scene.clone(), cfg(c(3.0, 10.0), c(17.0, 10.0), 300, 1)).unwrap();
        let res = p.run();
        assert!(res.solution.is_none(), "{kind:?}");
        assert!(p.is_done());
        assert!(res.stats.current.conserved());
        assert!(res.stats.current.iteration > 0);
        assert!(res.stats.first_solution.is_none());
    }
}

#[test]
fn boxed_in_start_hits_iteration_cap() {
    let mut g = OccupancyGrid::empty(10, 10, 1.0).unwrap();
    g.fill_rect(0, 0, 10, 10, true);
    g.set(1, 1, false);
    g.set(8, 8, false);
    let scene = Arc::new(Scene::point_robot(g).unwrap());
    // Every sample is the unreachable goal, so no extension ever succeeds.
    let mut config = cfg(c(1.5, 1.5), c(8.5, 8.5), 40, 0);
    config.goal_bias = 0.999_999;
    let res = rrf_core::planner::plan(PlannerKind::RrtStar, scene, config).unwrap();
    assert_eq!(res.stats.current.nodes, 0);
    assert!(res.solution.is_none());
    assert_eq!(res.stats.current.iteration, 40 * 50);
}

#[test]
fn first_solution_mode_stops_early() {
    let scene = empty(10);
    let mut config = cfg(c(1.0, 1.0), c(9.0, 9.0), 5000, 2);
    config.stop = StopMode::FirstSolution;
    for kind in PlannerKind::ALL {
        let res = rrf_core::planner::plan(kind, scene.clone(), config.clone()).unwrap();
        let first = res.stats.first_solution.unwrap();
        assert_eq!(first.iteration, res.stats.current.iteration);
        assert!(res.stats.current.nodes < 5000);
    }
}

#[test]
fn informed_improves_within_its_set() {
    let scene = walled(true);
    let res = rrf_core::planner::plan(
        PlannerKind::InformedRrtStar,
        scene,
        cfg(c(3.0, 3.0), c(17.0, 17.0), 3000, 5),
    )
    .unwrap();
    let sol = res.solution.unwrap();
    assert!(sol.cost.is_finite());
    assert!(res.stats.rows.iter().filter_map(|r| r.counters.best_cost).count() > 0);
}

#[test]
fn bidirectional_keeps_both_trees() {
    let scene = empty(10);
    let mut p = BiRrtStar::new(scene, cfg(c(1.0, 1.0), c(9.0, 9.0), 100, 0)).unwrap();
    p.step();
    p.step();
    let f = p.forest();
    assert!(!f.tree(TreeId::INIT).is_empty() && !f.tree(TreeId::TARGET).is_empty());
    assert_eq!(f.node_count(), 4);
}

#[test]
fn rejects_colliding_endpoints() {
    let scene = walled(false);
    assert_eq!(
        Rrf::new(scene.clone(), cfg(c(9.5, 3.0), c(17.0, 10.0), 10, 0)).err(),
        Some(PlanError::StartInCollision)
    );
    assert_eq!(
        Rrf::new(scene.clone(), cfg(c(3.0, 3.0), c(10.5, 10.0), 10, 0)).err(),
        Some(PlanError::GoalInCollision)
    );
    let mut bad = cfg(c(3.0, 3.0), c(17.0, 10.0), 10, 0);
    bad.seed_local_trees = vec![c(9.5, 9.5)];
    assert_eq!(Rrf::new(walled(true), bad).err(), None);
    let mut bad = cfg(c(3.0, 3.0), c(17.0, 10.0), 10, 0);
    bad.seed_local_trees = vec![c(9.5, 2.0)];
    assert_eq!(Rrf::new(scene, bad).err(), Some(PlanError::SeedInCollision(0)));
}

#[test]
fn solutions_hold_at_finer_resolution() {
    let scene = walled(true);
    for kind in PlannerKind::ALL {
        for seed in 0..5 {
            let res = rrf_core::planner::plan(kind, scene.clone(), cfg(c(3.0, 4.0), c(17.0, 15.0), 3000, seed)).unwrap();
            let sol = res.solution.unwrap_or_else(|| panic!("{kind:?} seed {seed} unsolved"));
            let len: f64 = sol.path.windows(2).map(|w| scene.spec().distance(&w[0], &w[1])).sum();
            assert!((len - sol.cost).abs() < 1e-6);
            for w in sol.path.windows(2) {
                assert!(dense_valid(&scene, &w[0], &w[1]), "{kind:?} seed {seed}");
            }
        }
    }
}
