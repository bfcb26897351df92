//! Local-tree location proposals from the density of failed extensions.
//!
//! Free samples whose extension failed are binned into cubic cells in
//! weighted configuration space. The fullest cell is proposed (at its most
//! recent failed sample, which is known to be free) and then emptied.

use std::collections::BTreeMap;

use crate::cspace::{Config, SpaceSpec};

#[derive(Clone, Debug, PartialEq)]
struct Cell {
    count: u64,
    last: Config,
}

#[derive(Clone, Debug)]
pub struct FailureDensityMap {
    space: SpaceSpec,
    cell_size: f64,
    cells: BTreeMap<Vec<i64>, Cell>,
    total: u64,
    max_count: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProposalCandidate {
    pub q_local: Config,
    pub p_potential: f64,
}

impl ProposalCandidate {
    pub fn accepted(&self, delta_threshold: f64) -> bool {
        self.p_potential > delta_threshold
    }
}

impl FailureDensityMap {
    /// # Panics
    /// If `cell_size` is not positive and finite.
    pub fn new(space: &SpaceSpec, cell_size: f64) -> Self {
        assert!(cell_size > 0.0 && cell_size.is_finite(), "bad cell size {cell_size}");
        FailureDensityMap {
            space: space.clone(),
            cell_size,
            cells: BTreeMap::new(),
            total: 0,
            max_count: 0,
        }
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    fn key(&self, q: &Config) -> Vec<i64> {
        (0..self.space.dim())
            .map(|i| ((q[i] - self.space.lower()[i]) * self.space.weights()[i] / self.cell_size).floor() as i64)
            .collect()
    }

    /// Failures currently held (consumed cells no longer count).
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count_at(&self, q: &Config) -> u64 {
        self.cells.get(&self.key(q)).map_or(0, |c| c.count)
    }

    pub fn nonzero_cells(&self) -> usize {
        self.cells.values().filter(|c| c.count > 0).count()
    }

    pub fn record_failed_sample(&mut self, q: &Config) {
        let key = self.key(q);
        let cell = self.cells.entry(key).or_insert_with(|| Cell {
            count: 0,
            last: q.clone(),
        });
        cell.count += 1;
        cell.last = q.clone();
        self.total += 1;
        self.max_count = self.max_count.max(cell.count);
    }

    /// The fullest cell if it holds at least `min_count` failures, with
    /// `p_potential = count / (count + min_count)`. Ties go to the smallest
    /// cell key. The chosen cell is emptied.
    pub fn propose(&mut self, min_count: u64) -> Option<ProposalCandidate> {
        if self.max_count < min_count.max(1) {
            return None;
        }
        let mut best: Option<(&Vec<i64>, u64)> = None;
        for (k, c) in &self.cells {
            if best.is_none_or(|(_, bc)| c.count > bc) {
                best = Some((k, c.count));
            }
        }
        let key = best?.0.clone();
        let cell = self.cells.remove(&key).expect("chosen cell exists");
        self.total -= cell.count;
        self.max_count = self.cells.values().map(|c| c.count).max().unwrap_or(0);
        let c = cell.count as f64;
        Some(ProposalCandidate {
            q_local: cell.last,
            p_potential: c / (c + min_count as f64),
        })
    }
}
