//! Repeated runs, the per-run CSV and aggregated confidence intervals.

use std::io::{Read, Write};

use rayon::prelude::*;
use rrf_core::planner::{PlanError, PlannerKind, RunStats};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::scenario::Scenario;

/// One line of the run CSV. Column order is fixed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub scenario: String,
    pub planner: String,
    pub seed: u64,
    pub nodes: u64,
    pub seconds: f64,
    pub best_cost: Option<f64>,
    pub invalid_obstacles: u64,
    pub invalid_connections: u64,
    pub live_arms: usize,
    pub local_trees_created: u64,
}

/// Sampled statistics of a single (planner, seed) run.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub scenario: String,
    pub planner: String,
    pub seed: u64,
    /// Ordered by node count; the last row is the final state.
    pub rows: Vec<CsvRow>,
}

impl BenchRecord {
    pub fn final_cost(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.best_cost)
    }

    pub fn seconds(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.seconds)
    }

    /// Builds a record keeping rows whose node count is a multiple of
    /// `every`, plus the final row. Timings are zeroed unless `timing`.
    pub fn from_stats(scenario: &str, planner: &str, seed: u64, stats: &RunStats, every: u64, timing: bool) -> Self {
        let to_row = |seconds: f64, c: &rrf_core::planner::Counters| CsvRow {
            scenario: scenario.to_string(),
            planner: planner.to_string(),
            seed,
            nodes: c.nodes,
            seconds: if timing { seconds } else { 0.0 },
            best_cost: c.best_cost,
            invalid_obstacles: c.invalid_obstacles,
            invalid_connections: c.invalid_connections,
            live_arms: c.live_arms,
            local_trees_created: c.local_trees_created,
        };
        let mut rows: Vec<CsvRow> = stats
            .rows
            .iter()
            .filter(|r| r.counters.nodes % every == 0)
            .map(|r| to_row(r.seconds, &r.counters))
            .collect();
        let last = to_row(stats.seconds, &stats.current);
        if rows.last() != Some(&last) {
            rows.push(last);
        }
        BenchRecord {
            scenario: scenario.to_string(),
            planner: planner.to_string(),
            seed,
            rows,
        }
    }
}

/// Runs one planner with one seed.
pub fn run_one(scenario: &Scenario, kind: PlannerKind, seed: u64, timing: bool) -> Result<BenchRecord, PlanError> {
    let mut planner = kind.build(scenario.scene.clone(), scenario.config_for(seed))?;
    let result = planner.run();
    Ok(BenchRecord::from_stats(
        &scenario.name,
        kind.name(),
        seed,
        &result.stats,
        scenario.log_every,
        timing,
    ))
}

/// Every (planner, seed) pair of the scenario on `workers` threads. The
/// output is ordered by planner (scenario order) then seed, whatever the
/// completion order.
pub fn run_all(scenario: &Scenario, workers: usize, timing: bool) -> Result<Vec<BenchRecord>, PlanError> {
    let pairs: Vec<(PlannerKind, u64)> = scenario
        .planners
        .iter()
        .flat_map(|&k| scenario.seeds.iter().map(move |&s| (k, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        pairs
            .par_iter()
            .map(|&(k, s)| {
                log::info!("{}: {} seed {s}", scenario.name, k.name());
                run_one(scenario, k, s, timing)
            })
            .collect()
    })
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        for row in &r.rows {
            w.serialize(row)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(records: &[BenchRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

/// Parses rows back into records, grouping consecutive rows of the same run.
pub fn read_csv<R: Read>(input: R) -> csv::Result<Vec<BenchRecord>> {
    let mut out: Vec<BenchRecord> = Vec::new();
    for row in csv::Reader::from_reader(input).deserialize() {
        let row: CsvRow = row?;
        match out.last_mut() {
            Some(r) if r.scenario == row.scenario && r.planner == row.planner && r.seed == row.seed => r.rows.push(row),
            _ => out.push(BenchRecord {
                scenario: row.scenario.clone(),
                planner: row.planner.clone(),
                seed: row.seed,
                rows: vec![row],
            }),
        }
    }
    Ok(out)
}

/// Mean and Student-t 95% half-width; the half-width is NaN below two samples.
pub fn mean_ci(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.975);
    (mean, t * var.sqrt() / (n as f64).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub scenario: String,
    pub planner: String,
    pub nodes: u64,
    pub metric: String,
    /// Runs contributing to this bucket.
    pub n: usize,
    pub mean: f64,
    pub ci_half_width: f64,
}

pub const METRICS: [&str; 6] = [
    "seconds",
    "best_cost",
    "invalid_obstacles",
    "invalid_connections",
    "live_arms",
    "local_trees_created",
];

fn metric(row: &CsvRow, name: &str) -> Option<f64> {
    Some(match name {
        "seconds" => row.seconds,
        "best_cost" => return row.best_cost,
        "invalid_obstacles" => row.invalid_obstacles as f64,
        "invalid_connections" => row.invalid_connections as f64,
        "live_arms" => row.live_arms as f64,
        "local_trees_created" => row.local_trees_created as f64,
        _ => return None,
    })
}

/// Statistics across seeds at node counts `bucket, 2·bucket, ...`. A run
/// contributes to a bucket once it has reached that many nodes, with its
/// last row at or below the bucket; cost only counts solved runs.
pub fn aggregate(records: &[BenchRecord], bucket: u64) -> Vec<AggregateRow> {
    let mut planners: Vec<(&str, &str)> = Vec::new();
    for r in records {
        if !planners.contains(&(&r.scenario, &r.planner)) {
            planners.push((&r.scenario, &r.planner));
        }
    }
    let mut out = Vec::new();
    for (scenario, planner) in planners {
        let runs: Vec<&BenchRecord> = records
            .iter()
            .filter(|r| r.scenario == scenario && r.planner == planner)
            .collect();
        let top = runs.iter().filter_map(|r| r.rows.last()).map(|r| r.nodes).max().unwrap_or(0);
        let mut b = bucket;
        while b <= top {
            let at: Vec<&CsvRow> = runs
                .iter()
                .filter(|r| r.rows.last().is_some_and(|l| l.nodes >= b))
                .filter_map(|r| r.rows.iter().rev().find(|row| row.nodes <= b))
                .collect();
            for m in METRICS {
                let values: Vec<f64> = at.iter().filter_map(|row| metric(row, m)).collect();
                let (mean, ci_half_width) = mean_ci(&values);
                out.push(AggregateRow {
                    scenario: scenario.to_string(),
                    planner: planner.to_string(),
                    nodes: b,
                    metric: m.to_string(),
                    n: values.len(),
                    mean,
                    ci_half_width,
                });
            }
            b += bucket;
        }
    }
    out
}

pub fn write_aggregate<W: Write>(rows: &[AggregateRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
