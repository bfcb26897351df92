//! Configuration spaces, occupancy grids and collision checking.
//!
//! A [`SpaceSpec`] describes the box-bounded configuration space, with some
//! coordinates optionally wrapped (angles identified modulo `2π`). Distances
//! are Euclidean in a per-dimension weighted space, where wrapped coordinates
//! always take the shorter arc. [`Scene`] combines a space with an
//! [`OccupancyGrid`] and a robot model to decide validity of configurations
//! and motions.

mod arm;
mod grid;
mod scene;

use std::f64::consts::{PI, TAU};

use rand::Rng;
use thiserror::Error;

pub use arm::{PlanarArm, Segment};
pub use grid::OccupancyGrid;
pub use scene::{Robot, Scene};

/// Maximum number of consecutive rejections tolerated by [`Scene::sample_free`].
pub const MAX_CONSECUTIVE_REJECTIONS: usize = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum CspaceError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("configuration spaces need at least 2 dimensions, got {0}")]
    TooFewDimensions(usize),
    #[error("dimension {dim}: lower bound {lower} must be below upper bound {upper}")]
    EmptyRange { dim: usize, lower: f64, upper: f64 },
    #[error("dimension {dim} is wrapped but its range width is {width}, expected 2π")]
    BadWrapRange { dim: usize, width: f64 },
    #[error("dimension {dim}: weight {weight} must be positive and finite")]
    BadWeight { dim: usize, weight: f64 },
    #[error("coordinate {dim} = {value} is outside [{lower}, {upper}]")]
    OutOfBounds {
        dim: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("invalid occupancy grid: {0}")]
    InvalidGrid(String),
    #[error("invalid robot: {0}")]
    InvalidRobot(String),
    #[error("collision resolution must be positive, got {0}")]
    BadResolution(f64),
    #[error("space appears fully occupied ({0} consecutive rejections)")]
    FullyOccupied(usize),
    #[error("failed to read map {path}: {reason}")]
    MapIo { path: String, reason: String },
}

/// A point in configuration space.
#[derive(Clone, Debug, PartialEq)]
pub struct Config(Vec<f64>);

impl Config {
    /// Wraps raw coordinates without validation. Use [`SpaceSpec::config`] to
    /// check bounds and canonicalize wrapped coordinates.
    pub fn new(coords: Vec<f64>) -> Self {
        Config(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for Config {
    fn from(coords: Vec<f64>) -> Self {
        Config(coords)
    }
}

impl std::ops::Index<usize> for Config {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Bounds, wrap flags and metric weights of a configuration space.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceSpec {
    lower: Vec<f64>,
    upper: Vec<f64>,
    wrap: Vec<bool>,
    weights: Vec<f64>,
}

impl SpaceSpec {
    pub fn new(bounds: Vec<(f64, f64)>, wrap: Vec<bool>) -> Result<Self, CspaceError> {
        let d = bounds.len();
        if d < 2 {
            return Err(CspaceError::TooFewDimensions(d));
        }
        if wrap.len() != d {
            return Err(CspaceError::DimensionMismatch {
                expected: d,
                got: wrap.len(),
            });
        }
        for (dim, &(lower, upper)) in bounds.iter().enumerate() {
            if !(lower.is_finite() && upper.is_finite() && lower < upper) {
                return Err(CspaceError::EmptyRange { dim, lower, upper });
            }
            let width = upper - lower;
            if wrap[dim] && (width - TAU).abs() > 1e-9 {
                return Err(CspaceError::BadWrapRange { dim, width });
            }
        }
        Ok(SpaceSpec {
            lower: bounds.iter().map(|b| b.0).collect(),
            upper: bounds.iter().map(|b| b.1).collect(),
            wrap,
            weights: vec![1.0; d],
        })
    }

    /// An unwrapped box.
    pub fn euclidean(bounds: Vec<(f64, f64)>) -> Result<Self, CspaceError> {
        let d = bounds.len();
        Self::new(bounds, vec![false; d])
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self, CspaceError> {
        if weights.len() != self.dim() {
            return Err(CspaceError::DimensionMismatch {
                expected: self.dim(),
                got: weights.len(),
            });
        }
        for (dim, &weight) in weights.iter().enumerate() {
            if !(weight.is_finite() && weight > 0.0) {
                return Err(CspaceError::BadWeight { dim, weight });
            }
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn wrap(&self) -> &[bool] {
        &self.wrap
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Volume of the bounding box measured in weighted coordinates.
    pub fn weighted_volume(&self) -> f64 {
        (0..self.dim())
            .map(|i| (self.upper[i] - self.lower[i]) * self.weights[i])
            .product()
    }

    /// Validates `coords` and returns a canonical configuration.
    pub fn config(&self, coords: Vec<f64>) -> Result<Config, CspaceError> {
        self.check_dim(coords.len())?;
        let mut coords = coords;
        self.canonicalize(&mut coords);
        for (dim, &value) in coords.iter().enumerate() {
            if !(value >= self.lower[dim] && value <= self.upper[dim]) {
                return Err(CspaceError::OutOfBounds {
                    dim,
                    value,
                    lower: self.lower[dim],
                    upper: self.upper[dim],
                });
            }
        }
        Ok(Config(coords))
    }

    fn check_dim(&self, got: usize) -> Result<(), CspaceError> {
        if got != self.dim() {
            Err(CspaceError::DimensionMismatch {
                expected: self.dim(),
                got,
            })
        } else {
            Ok(())
        }
    }

    fn assert_dim(&self, c: &Config) {
        assert_eq!(
            c.dim(),
            self.dim(),
            "configuration has {} coordinates, space has {}",
            c.dim(),
            self.dim()
        );
    }

    /// Maps wrapped coordinates into `[lower, upper)`.
    pub fn canonicalize(&self, coords: &mut [f64]) {
        for (i, x) in coords.iter_mut().enumerate() {
            if self.wrap[i] {
                let mut v = self.lower[i] + (*x - self.lower[i]).rem_euclid(TAU);
                if v >= self.upper[i] {
                    v = self.lower[i];
                }
                *x = v;
            }
        }
    }

    /// Whether every coordinate lies within the bounds (wrapped coordinates
    /// are always in bounds once canonicalized).
    pub fn in_bounds(&self, coords: &[f64]) -> bool {
        coords.len() == self.dim()
            && coords.iter().enumerate().all(|(i, &x)| {
                x.is_finite() && (self.wrap[i] || (x >= self.lower[i] && x <= self.upper[i]))
            })
    }

    /// Per-dimension difference `b - a`, using the shorter arc on wrapped
    /// dimensions (in `[-π, π)`).
    pub fn delta(&self, a: &Config, b: &Config) -> Vec<f64> {
        self.assert_dim(a);
        self.assert_dim(b);
        (0..self.dim())
            .map(|i| {
                let d = b.0[i] - a.0[i];
                if self.wrap[i] {
                    shortest_arc(d)
                } else {
                    d
                }
            })
            .collect()
    }

    /// Weighted Euclidean distance with shorter-arc wrapped coordinates.
    ///
    /// Panics when either configuration has the wrong number of coordinates;
    /// see [`SpaceSpec::try_distance`] for a checked variant.
    pub fn distance(&self, a: &Config, b: &Config) -> f64 {
        self.assert_dim(a);
        self.assert_dim(b);
        let mut acc = 0.0;
        for i in 0..self.dim() {
            let mut d = b.0[i] - a.0[i];
            if self.wrap[i] {
                d = shortest_arc(d);
            }
            let d = d * self.weights[i];
            acc += d * d;
        }
        acc.sqrt()
    }

    pub fn try_distance(&self, a: &Config, b: &Config) -> Result<f64, CspaceError> {
        self.check_dim(a.dim())?;
        self.check_dim(b.dim())?;
        Ok(self.distance(a, b))
    }

    /// Point at fraction `t` along the geodesic from `a` to `b`.
    pub fn interpolate(&self, a: &Config, b: &Config, t: f64) -> Config {
        let delta = self.delta(a, b);
        let mut coords: Vec<f64> = a.0.iter().zip(&delta).map(|(x, d)| x + t * d).collect();
        self.canonicalize(&mut coords);
        Config(coords)
    }

    /// Moves from `from` toward `to` by at most `eps`.
    pub fn steer(&self, from: &Config, to: &Config, eps: f64) -> Config {
        debug_assert!(eps > 0.0);
        let d = self.distance(from, to);
        if d <= eps {
            return to.clone();
        }
        self.interpolate(from, to, eps / d)
    }

    /// Moves `len` (weighted units) from `from` along the weighted-space unit
    /// vector `direction`. Returns `None` when the result leaves the bounds.
    pub fn offset(&self, from: &Config, direction: &[f64], len: f64) -> Option<Config> {
        self.assert_dim(from);
        assert_eq!(direction.len(), self.dim());
        let mut coords: Vec<f64> = (0..self.dim())
            .map(|i| from.0[i] + len * direction[i] / self.weights[i])
            .collect();
        self.canonicalize(&mut coords);
        if self.in_bounds(&coords) {
            Some(Config(coords))
        } else {
            None
        }
    }

    /// Unit vector (in weighted space) pointing from `a` toward `b`, or `None`
    /// if they coincide.
    pub fn direction(&self, a: &Config, b: &Config) -> Option<Vec<f64>> {
        let mut v: Vec<f64> = self
            .delta(a, b)
            .iter()
            .zip(&self.weights)
            .map(|(d, w)| d * w)
            .collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n <= 0.0 {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= n);
        Some(v)
    }

    /// Uniform draw from the bounding box.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Config {
        let coords = (0..self.dim())
            .map(|i| rng.random_range(self.lower[i]..self.upper[i]))
            .collect();
        Config(coords)
    }
}

/// Wraps an angle difference into `[-π, π)`.
pub fn shortest_arc(d: f64) -> f64 {
    let v = (d + PI).rem_euclid(TAU) - PI;
    if v >= PI {
        v - TAU
    } else {
        v
    }
}
