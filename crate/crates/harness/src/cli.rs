//! Command-line front end. Exit codes: 0 success, 1 input or I/O error,
//! 2 when `plan` finds no solution.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rrf_core::forest::ForestDump;
use rrf_core::planner::{PlannerKind, Solution};

use crate::bench::{self, BenchRecord};
use crate::maps;
use crate::render::render_svg;
use crate::scenario::Scenario;

#[derive(Parser, Debug)]
#[command(name = "rrf", version, about = "Multi-tree sampling-based planning: runs, benchmarks and renders")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one planner once and write the path, stats and forest dump.
    Plan {
        scenario: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Planner to run; defaults to the scenario's first.
        #[arg(long)]
        planner: Option<String>,
        /// Seed to use; defaults to the scenario's first.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run every planner and seed, writing per-run and aggregated CSVs.
    Bench {
        scenario: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Write zero in the seconds column, making output reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Draw a forest dump over its scenario's map.
    Render {
        dump: PathBuf,
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the bundled benchmark maps as PGM files.
    GenMaps {
        #[arg(long, default_value = "maps")]
        out: PathBuf,
    },
}

pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn fail(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
    }
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| fail(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| fail(format!("{}: {e}", path.display())))
}

pub fn path_text(sol: &Solution) -> String {
    let mut out = format!("# cost {}\n", sol.cost);
    for q in &sol.path {
        let coords: Vec<String> = q.coords().iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", coords.join(" "));
    }
    out
}

fn plan(scenario: &Path, out: &Path, planner: Option<String>, seed: Option<u64>) -> Result<i32, Failure> {
    let sc = Scenario::load(scenario).map_err(fail)?;
    let kind = match planner {
        Some(p) => PlannerKind::parse(&p).ok_or_else(|| fail(format!("unknown planner {p:?}")))?,
        None => sc.planners[0],
    };
    let seed = seed.unwrap_or(sc.seeds[0]);
    let mut p = kind.build(sc.scene.clone(), sc.config_for(seed)).map_err(fail)?;
    let result = p.run();
    let stem = format!("{}_{}", sc.name, kind.name());
    let record = BenchRecord::from_stats(&sc.name, kind.name(), seed, &result.stats, sc.log_every, true);
    write(&out.join(format!("{stem}.stats.csv")), &bench::to_csv_string(&[record]))?;
    write(&out.join(format!("{stem}.dump.txt")), &p.dump().to_text())?;
    let c = result.stats.current;
    match result.solution {
        Some(sol) => {
            write(&out.join(format!("{stem}.path.txt")), &path_text(&sol))?;
            println!(
                "{stem}: cost {:.4} with {} waypoints, {} nodes, {} iterations",
                sol.cost,
                sol.path.len(),
                c.nodes,
                c.iteration
            );
            Ok(0)
        }
        None => {
            println!("{stem}: no solution after {} nodes, {} iterations", c.nodes, c.iteration);
            Ok(2)
        }
    }
}

fn run_bench(scenario: &Path, workers: Option<usize>, out: &Path, no_timing: bool) -> Result<i32, Failure> {
    let sc = Scenario::load(scenario).map_err(fail)?;
    let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let records = bench::run_all(&sc, workers, !no_timing).map_err(fail)?;
    let runs = out.join(format!("{}.runs.csv", sc.name));
    write(&runs, &bench::to_csv_string(&records))?;
    let mut agg = Vec::new();
    bench::write_aggregate(&bench::aggregate(&records, sc.log_every), &mut agg).map_err(fail)?;
    let agg_path = out.join(format!("{}.aggregate.csv", sc.name));
    write(&agg_path, &String::from_utf8_lossy(&agg))?;
    for kind in &sc.planners {
        let mine: Vec<&BenchRecord> = records.iter().filter(|r| r.planner == kind.name()).collect();
        let solved = mine.iter().filter(|r| r.final_cost().is_some()).count();
        println!("{}: solved {solved}/{}", kind.name(), mine.len());
    }
    println!("wrote {} and {}", runs.display(), agg_path.display());
    Ok(0)
}

fn render(dump: &Path, scenario: &Path, out: &Path) -> Result<i32, Failure> {
    let sc = Scenario::load(scenario).map_err(fail)?;
    let text = fs::read_to_string(dump).map_err(|e| fail(format!("{}: {e}", dump.display())))?;
    let dump = ForestDump::parse(&text).map_err(|e| fail(format!("malformed dump: {e}")))?;
    let svg = render_svg(&sc.scene, &dump).map_err(fail)?;
    write(out, &svg)?;
    Ok(0)
}

fn gen_maps(out: &Path) -> Result<i32, Failure> {
    fs::create_dir_all(out).map_err(|e| fail(format!("{}: {e}", out.display())))?;
    for name in maps::MAP_NAMES {
        let g = maps::generate(name).expect("bundled map name");
        let path = out.join(format!("{name}.pgm"));
        g.write_pgm(&path).map_err(fail)?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Plan {
            scenario,
            out,
            planner,
            seed,
        } => plan(&scenario, &out, planner, seed),
        Command::Bench {
            scenario,
            workers,
            out,
            no_timing,
        } => run_bench(&scenario, workers, &out, no_timing),
        Command::Render { dump, scenario, out } => render(&dump, &scenario, &out),
        Command::GenMaps { out } => gen_maps(&out),
    };
    result.unwrap_or_else(|f| {
        eprintln!("error: {}", f.message);
        f.code
    })
}
