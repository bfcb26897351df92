//! Grid-bucket spatial hash over configurations.
//!
//! Buckets are at least `edge` wide in weighted coordinates along every
//! dimension (wrapped dimensions are split into a whole number of equal
//! buckets), so a bucket whose Chebyshev offset from the query bucket is `m`
//! holds only points at distance `>= (m - 1) * edge`. Spaces with more than
//! [`MAX_HASHED_DIM`] dimensions fall back to linear scans.

use std::collections::HashMap;

use crate::cspace::{Config, SpaceSpec};

use super::NodeId;

pub const MAX_HASHED_DIM: usize = 6;

/// Linear scans win for tiny candidate sets.
const LINEAR_SCAN_BELOW: usize = 48;

#[derive(Clone, Debug)]
pub(crate) struct SpatialIndex {
    space: SpaceSpec,
    edge: f64,
    /// Bucket width per dimension in raw coordinates.
    widths: Vec<f64>,
    /// Number of buckets along each dimension.
    counts: Vec<i64>,
    buckets: HashMap<Vec<i64>, Vec<NodeId>>,
    all: Vec<NodeId>,
}

impl SpatialIndex {
    pub fn new(space: &SpaceSpec, edge: f64) -> Self {
        assert!(edge > 0.0 && edge.is_finite());
        let d = space.dim();
        let mut widths = Vec::with_capacity(d);
        let mut counts = Vec::with_capacity(d);
        for i in 0..d {
            let range = space.upper()[i] - space.lower()[i];
            let raw = edge / space.weights()[i];
            if space.wrap()[i] {
                let n = ((range / raw).floor() as i64).max(1);
                widths.push(range / n as f64);
                counts.push(n);
            } else {
                widths.push(raw);
                counts.push(((range / raw).ceil() as i64).max(1));
            }
        }
        SpatialIndex {
            space: space.clone(),
            edge,
            widths,
            counts,
            buckets: HashMap::new(),
            all: Vec::new(),
        }
    }

    fn linear(&self) -> bool {
        self.space.dim() > MAX_HASHED_DIM
    }

    fn key(&self, q: &Config) -> Vec<i64> {
        (0..self.space.dim())
            .map(|i| {
                let k = ((q[i] - self.space.lower()[i]) / self.widths[i]).floor() as i64;
                k.clamp(0, self.counts[i] - 1)
            })
            .collect()
    }

    pub fn insert(&mut self, id: NodeId, q: &Config) {
        self.all.push(id);
        if !self.linear() {
            let key = self.key(q);
            self.buckets.entry(key).or_default().push(id);
        }
    }

    /// Bucket offsets (modular classes on wrapped dimensions) reachable along
    /// dimension `i` within `m` steps, with their effective step counts.
    fn offsets(&self, i: usize, m: i64) -> Vec<(i64, i64)> {
        if self.space.wrap()[i] {
            let n = self.counts[i];
            if 2 * m + 1 >= n {
                // Every class, each at its shortest modular distance.
                (0..n)
                    .map(|o| {
                        let eff = if o > n / 2 { o - n } else { o };
                        (o, eff.abs())
                    })
                    .collect()
            } else {
                (-m..=m).map(|o| (o, o.abs())).collect()
            }
        } else {
            (-m..=m).map(|o| (o, o.abs())).collect()
        }
    }

    /// Calls `visit` for every bucket at Chebyshev ring distance exactly `m`
    /// (`exact`) or at most `m` (otherwise). Returns the number of bucket
    /// keys enumerated.
    fn for_buckets(&self, center: &[i64], m: i64, exact: bool, mut visit: impl FnMut(&[NodeId])) -> usize {
        let d = self.space.dim();
        let per_dim: Vec<Vec<(i64, i64)>> = (0..d).map(|i| self.offsets(i, m)).collect();
        let mut idx = vec![0usize; d];
        let mut key = vec![0i64; d];
        let mut enumerated = 0;
        'outer: loop {
            enumerated += 1;
            let mut ring = 0;
            let mut inside = true;
            for i in 0..d {
                let (o, eff) = per_dim[i][idx[i]];
                ring = ring.max(eff);
                let mut k = center[i] + o;
                if self.space.wrap()[i] {
                    k = k.rem_euclid(self.counts[i]);
                } else if k < 0 || k >= self.counts[i] {
                    inside = false;
                }
                key[i] = k;
            }
            if inside && (!exact || ring == m) {
                if let Some(ids) = self.buckets.get(&key) {
                    visit(ids);
                }
            }
            for i in 0..d {
                idx[i] += 1;
                if idx[i] < per_dim[i].len() {
                    continue 'outer;
                }
                idx[i] = 0;
            }
            break;
        }
        enumerated
    }

    fn max_ring(&self, center: &[i64]) -> i64 {
        (0..self.space.dim())
            .map(|i| {
                if self.space.wrap()[i] {
                    self.counts[i] / 2
                } else {
                    center[i].max(self.counts[i] - 1 - center[i])
                }
            })
            .max()
            .unwrap_or(0)
    }

    /// Nearest accepted point, ties broken by smaller id. `candidates` must
    /// list every id accepted by `accept`; it drives the linear fallback.
    pub fn nearest<'a>(
        &self,
        q: &Config,
        config_of: impl Fn(NodeId) -> &'a Config,
        accept: impl Fn(NodeId) -> bool,
        candidates: &[NodeId],
    ) -> Option<NodeId> {
        let mut best: Option<(f64, NodeId)> = None;
        let consider = |id: NodeId, best: &mut Option<(f64, NodeId)>| {
            let d = self.space.distance(q, config_of(id));
            match best {
                Some((bd, bid)) if d > *bd || (d == *bd && id > *bid) => {}
                _ => *best = Some((d, id)),
            }
        };
        if self.linear() || candidates.len() < LINEAR_SCAN_BELOW {
            for &id in candidates {
                consider(id, &mut best);
            }
            return best.map(|b| b.1);
        }
        let center = self.key(q);
        let max_ring = self.max_ring(&center);
        let mut visited = 0usize;
        for m in 0..=max_ring {
            let keys = self.for_buckets(&center, m, true, |ids| {
                for &id in ids {
                    visited += 1;
                    if accept(id) {
                        consider(id, &mut best);
                    }
                }
            });
            visited += keys;
            if let Some((bd, _)) = best {
                if bd < m as f64 * self.edge {
                    return best.map(|b| b.1);
                }
            }
            // Sparse tree among many foreign points or empty buckets: scan instead.
            if visited > 4 * candidates.len() {
                best = None;
                for &id in candidates {
                    consider(id, &mut best);
                }
                return best.map(|b| b.1);
            }
        }
        best.map(|b| b.1)
    }

    /// All points within `radius` (inclusive), in no particular order.
    pub fn within<'a>(&self, q: &Config, radius: f64, config_of: impl Fn(NodeId) -> &'a Config) -> Vec<NodeId> {
        let mut out = Vec::new();
        if self.linear() || self.all.len() < LINEAR_SCAN_BELOW {
            for &id in &self.all {
                if self.space.distance(q, config_of(id)) <= radius {
                    out.push(id);
                }
            }
            return out;
        }
        let center = self.key(q);
        let m = ((radius / self.edge).floor() as i64 + 1).min(self.max_ring(&center));
        self.for_buckets(&center, m, false, |ids| {
            for &id in ids {
                if self.space.distance(q, config_of(id)) <= radius {
                    out.push(id);
                }
            }
        });
        out
    }
}
