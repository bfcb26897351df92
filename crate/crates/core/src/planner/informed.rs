//! Uniform sampling of the informed set `{q : d(q_init, q) + d(q, q_target) <= c}`.
//!
//! Works in weighted coordinates relative to `q_init` (wrapped coordinates
//! use the shortest arc toward `q_target`), where the set is a prolate
//! hyperspheroid with foci at the origin and the goal offset. A unit-ball
//! draw is stretched along the focal axis and reflected onto it with a
//! Householder transform. Distances in the space never exceed these
//! unwrapped offsets, so every returned sample satisfies the defining
//! inequality.

use rand::Rng;

use crate::cspace::{Config, SpaceSpec};
use crate::proposal::uniform_direction;

use super::engine::unit_ball_volume;

/// Ellipse draws that may land outside the bounds before giving up on one call.
const MAX_ELLIPSE_DRAWS: usize = 100_000;

#[derive(Clone, Debug)]
pub struct InformedSampler {
    space: SpaceSpec,
    origin: Config,
    target: Config,
    /// Goal offset in weighted coordinates.
    axis: Vec<f64>,
    c_min: f64,
    /// Householder vector mapping the first basis vector onto the focal axis.
    householder: Option<Vec<f64>>,
}

impl InformedSampler {
    pub fn new(space: &SpaceSpec, q_init: &Config, q_target: &Config) -> Self {
        let axis: Vec<f64> = space
            .delta(q_init, q_target)
            .iter()
            .zip(space.weights())
            .map(|(d, w)| d * w)
            .collect();
        let c_min = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        let householder = (c_min > 0.0)
            .then(|| {
                let mut v: Vec<f64> = axis.iter().map(|a| -a / c_min).collect();
                v[0] += 1.0;
                let n2: f64 = v.iter().map(|x| x * x).sum();
                (n2 > 1e-24).then_some(v)
            })
            .flatten();
        InformedSampler {
            space: space.clone(),
            origin: q_init.clone(),
            target: q_target.clone(),
            axis,
            c_min,
            householder,
        }
    }

    pub fn c_min(&self) -> f64 {
        self.c_min
    }

    fn reflect(&self, x: &mut [f64]) {
        if let Some(v) = &self.householder {
            let vv: f64 = v.iter().map(|a| a * a).sum();
            let vx: f64 = v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            let s = 2.0 * vx / vv;
            x.iter_mut().zip(v).for_each(|(xi, vi)| *xi -= s * vi);
        }
    }

    pub fn contains(&self, q: &Config, c_best: f64) -> bool {
        self.space.distance(&self.origin, q) + self.space.distance(q, &self.target) <= c_best + 1e-9
    }

    fn to_config(&self, u: &[f64]) -> Option<Config> {
        let mut coords: Vec<f64> = (0..self.space.dim())
            .map(|i| self.origin[i] + u[i] / self.space.weights()[i])
            .collect();
        self.space.canonicalize(&mut coords);
        self.space.in_bounds(&coords).then(|| Config::new(coords))
    }

    fn draw_ellipse<R: Rng + ?Sized>(&self, c_best: f64, rng: &mut R) -> Vec<f64> {
        let d = self.space.dim();
        let r1 = c_best / 2.0;
        let r2 = (c_best * c_best - self.c_min * self.c_min).max(0.0).sqrt() / 2.0;
        let radius = rng.random::<f64>().powf(1.0 / d as f64);
        let mut x = uniform_direction(d, rng);
        x[0] *= radius * r1;
        x[1..].iter_mut().for_each(|v| *v *= radius * r2);
        self.reflect(&mut x);
        x.iter_mut().zip(&self.axis).for_each(|(xi, a)| *xi += a / 2.0);
        x
    }

    /// A uniform draw from the informed set intersected with the bounds.
    /// When the set is larger than the bounding box this samples the box and
    /// rejects instead.
    pub fn sample<R: Rng + ?Sized>(&self, c_best: f64, rng: &mut R) -> Config {
        let d = self.space.dim();
        let r1 = c_best / 2.0;
        let r2 = (c_best * c_best - self.c_min * self.c_min).max(0.0).sqrt() / 2.0;
        let volume = unit_ball_volume(d) * r1 * r2.powi(d as i32 - 1);
        if volume < self.space.weighted_volume() {
            for _ in 0..MAX_ELLIPSE_DRAWS {
                let u = self.draw_ellipse(c_best, rng);
                if let Some(q) = self.to_config(&u) {
                    debug_assert!(self.contains(&q, c_best), "informed sample outside the set");
                    return q;
                }
            }
        }
        loop {
            let q = self.space.sample_uniform(rng);
            if self.contains(&q, c_best) {
                return q;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn samples_stay_in_the_informed_set() {
        let space = SpaceSpec::euclidean(vec![(0.0, 10.0), (0.0, 10.0)]).unwrap();
        let a = Config::new(vec![1.0, 1.0]);
        let b = Config::new(vec![8.0, 5.0]);
        let s = InformedSampler::new(&space, &a, &b);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c_best = s.c_min() * 1.1;
        let mut mean = [0.0; 2];
        let n = 20_000;
        for _ in 0..n {
            let q = s.sample(c_best, &mut rng);
            assert!(s.contains(&q, c_best));
            mean[0] += q[0] / n as f64;
            mean[1] += q[1] / n as f64;
        }
        assert!((mean[0] - 4.5).abs() < 0.05 && (mean[1] - 3.0).abs() < 0.05, "{mean:?}");
    }

    #[test]
    fn uniform_over_the_ellipse_area() {
        // Fraction inside the inner ellipse with half the axes is 1/4.
        let space = SpaceSpec::euclidean(vec![(-10.0, 10.0), (-10.0, 10.0)]).unwrap();
        let a = Config::new(vec![-1.0, 0.0]);
        let b = Config::new(vec![1.0, 0.0]);
        let s = InformedSampler::new(&space, &a, &b);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (r1, r2) = (2.0, 3f64.sqrt());
        let n = 40_000;
        let inner = (0..n)
            .filter(|_| {
                let q = s.sample(4.0, &mut rng);
                (q[0] / r1).powi(2) + (q[1] / r2).powi(2) <= 0.25
            })
            .count();
        let frac = inner as f64 / n as f64;
        assert!((frac - 0.25).abs() < 0.01, "{frac}");
    }

    #[test]
    fn wrapped_and_weighted_spaces() {
        let space = SpaceSpec::new(vec![(0.0, 5.0), (-PI, PI), (0.0, TAU)], vec![false, true, true])
            .unwrap()
            .with_weights(vec![1.0, 0.5, 2.0])
            .unwrap();
        let a = Config::new(vec![1.0, 3.0, 0.2]);
        let b = Config::new(vec![2.0, -3.0, 6.0]);
        let s = InformedSampler::new(&space, &a, &b);
        assert!((s.c_min() - space.distance(&a, &b)).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for c in [1.05, 1.5, 4.0] {
            for _ in 0..2000 {
                let q = s.sample(s.c_min() * c, &mut rng);
                assert!(s.contains(&q, s.c_min() * c));
                assert!(space.in_bounds(q.coords()));
            }
        }
    }

    #[test]
    fn axis_aligned_foci_need_no_reflection() {
        let space = SpaceSpec::euclidean(vec![(0.0, 10.0), (0.0, 10.0), (0.0, 10.0)]).unwrap();
        let s = InformedSampler::new(&space, &Config::new(vec![2.0, 5.0, 5.0]), &Config::new(vec![8.0, 5.0, 5.0]));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let q = s.sample(6.5, &mut rng);
            assert!(s.contains(&q, 6.5));
        }
    }
}
