use std::path::{Path, PathBuf};
use std::process::Command;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn rrf(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rrf")).args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn plan_on_empty_map_writes_a_path() {
    let out = tempfile::tempdir().unwrap();
    let o = rrf(&["plan", s(&fixture("empty_small.json")), "--out", s(out.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let path = std::fs::read_to_string(out.path().join("empty_small_rrf.path.txt")).unwrap();
    let waypoints: Vec<Vec<f64>> = path
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(' ').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!(waypoints.len() >= 2);
    assert_eq!(waypoints[0], vec![2.0, 2.0]);
    assert_eq!(*waypoints.last().unwrap(), vec![30.0, 30.0]);
    assert!(out.path().join("empty_small_rrf.stats.csv").exists());
    assert!(out.path().join("empty_small_rrf.dump.txt").exists());
}

#[test]
fn plan_flags_pick_planner_and_seed() {
    let out = tempfile::tempdir().unwrap();
    let args = |dir: &Path| {
        rrf(&[
            "plan",
            s(&fixture("empty_small.json")),
            "--out",
            s(dir),
            "--planner",
            "rrt-star",
            "--seed",
            "99",
        ])
    };
    assert_eq!(args(out.path()).status.code(), Some(0));
    let first = std::fs::read_to_string(out.path().join("empty_small_rrt_star.dump.txt")).unwrap();
    let again = tempfile::tempdir().unwrap();
    assert_eq!(args(again.path()).status.code(), Some(0));
    let second = std::fs::read_to_string(again.path().join("empty_small_rrt_star.dump.txt")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn walled_off_goal_exits_two() {
    let out = tempfile::tempdir().unwrap();
    let o = rrf(&["plan", s(&fixture("walled.json")), "--out", s(out.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.path().join("walled_rrf.path.txt").exists());
    assert!(out.path().join("walled_rrf.dump.txt").exists());
}

#[test]
fn bad_inputs_exit_one() {
    let out = tempfile::tempdir().unwrap();
    let o = rrf(&["plan", s(&fixture("missing_map.json")), "--out", s(out.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("does_not_exist.pgm"));

    let o = rrf(&["plan", s(&fixture("nope.json"))]);
    assert_eq!(o.status.code(), Some(1));

    let bad = out.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "x", "mapp": "a.pgm"}"#).unwrap();
    let o = rrf(&["plan", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed"));

    let o = rrf(&["plan", s(&fixture("empty_small.json")), "--planner", "prm", "--out", s(out.path())]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn render_accepts_dumps_and_rejects_garbage() {
    let out = tempfile::tempdir().unwrap();
    let sc = fixture("empty_small.json");
    assert_eq!(rrf(&["plan", s(&sc), "--out", s(out.path())]).status.code(), Some(0));
    let svg = out.path().join("forest.svg");
    let dump = out.path().join("empty_small_rrf.dump.txt");
    let o = rrf(&["render", s(&dump), s(&sc), "--out", s(&svg)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("class=\"path\""));

    let junk = out.path().join("junk.txt");
    std::fs::write(&junk, "node 0 tree\n").unwrap();
    let o = rrf(&["render", s(&junk), s(&sc), "--out", s(&svg)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bench_writes_runs_and_aggregate() {
    let out = tempfile::tempdir().unwrap();
    let o = rrf(&[
        "bench",
        s(&fixture("empty_small.json")),
        "--workers",
        "2",
        "--out",
        s(out.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let runs = std::fs::read_to_string(out.path().join("empty_small.runs.csv")).unwrap();
    assert_eq!(
        runs.lines().next().unwrap(),
        "scenario,planner,seed,nodes,seconds,best_cost,invalid_obstacles,invalid_connections,live_arms,local_trees_created"
    );
    let agg = std::fs::read_to_string(out.path().join("empty_small.aggregate.csv")).unwrap();
    assert_eq!(agg.lines().next().unwrap(), "scenario,planner,nodes,metric,n,mean,ci_half_width");
    assert!(agg.lines().count() > 1);
}

#[test]
fn gen_maps_matches_bundled_files() {
    let out = tempfile::tempdir().unwrap();
    assert_eq!(rrf(&["gen-maps", "--out", s(out.path())]).status.code(), Some(0));
    let bundled = Path::new(env!("CARGO_MANIFEST_DIR")).join("maps");
    for name in rrf_harness::maps::MAP_NAMES {
        let file = format!("{name}.pgm");
        assert_eq!(
            std::fs::read(out.path().join(&file)).unwrap(),
            std::fs::read(bundled.join(&file)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn bundled_scenarios_load() {
    for name in ["empty", "corridor", "rooms", "maze", "rover"] {
        let sc = rrf_harness::scenario::Scenario::load(scenario(&format!("{name}.json")))
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(sc.name, name);
    }
}
