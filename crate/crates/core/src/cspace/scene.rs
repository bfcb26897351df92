use rand::Rng;

use super::{Config, CspaceError, OccupancyGrid, PlanarArm, SpaceSpec, MAX_CONSECUTIVE_REJECTIONS};

/// Robot model occupying the workspace.
#[derive(Clone, Debug, PartialEq)]
pub enum Robot {
    /// A point whose world position is given by coordinates 0 and 1.
    Point,
    Arm(PlanarArm),
}

/// Configuration space, obstacles and robot, plus the collision-checking
/// resolution (largest world-space displacement between two checks along a
/// motion).
#[derive(Clone, Debug)]
pub struct Scene {
    spec: SpaceSpec,
    grid: OccupancyGrid,
    robot: Robot,
    resolution: f64,
}

impl Scene {
    pub fn new(
        spec: SpaceSpec,
        grid: OccupancyGrid,
        robot: Robot,
        resolution: f64,
    ) -> Result<Self, CspaceError> {
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(CspaceError::BadResolution(resolution));
        }
        match &robot {
            Robot::Point => {
                if spec.wrap()[0] || spec.wrap()[1] {
                    return Err(CspaceError::InvalidRobot(
                        "point robot position coordinates cannot be wrapped".into(),
                    ));
                }
            }
            Robot::Arm(arm) => {
                if arm.max_dim() >= spec.dim() {
                    return Err(CspaceError::InvalidRobot(format!(
                        "arm reads coordinate {} but the space has {} dimensions",
                        arm.max_dim(),
                        spec.dim()
                    )));
                }
                if let Some(&dim) = arm.joint_dims().iter().find(|&&d| !spec.wrap()[d]) {
                    return Err(CspaceError::InvalidRobot(format!(
                        "joint coordinate {dim} must be wrapped"
                    )));
                }
            }
        }
        Ok(Scene {
            spec,
            grid,
            robot,
            resolution,
        })
    }

    /// Point robot over the whole grid, checking at a quarter of a cell.
    pub fn point_robot(grid: OccupancyGrid) -> Result<Self, CspaceError> {
        let spec = SpaceSpec::euclidean(vec![
            (0.0, grid.world_width()),
            (0.0, grid.world_height()),
        ])?;
        let r = grid.resolution() / 4.0;
        Self::new(spec, grid, Robot::Point, r)
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    pub fn grid(&self) -> &OccupancyGrid {
        &self.grid
    }

    pub fn robot(&self) -> &Robot {
        &self.robot
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// Same scene with a different collision resolution.
    pub fn with_resolution(&self, resolution: f64) -> Result<Self, CspaceError> {
        Self::new(
            self.spec.clone(),
            self.grid.clone(),
            self.robot.clone(),
            resolution,
        )
    }

    /// A representative workspace point for drawing: the point itself, the
    /// mobile base, or the tip of a fixed-base arm.
    pub fn workspace_point(&self, q: &Config) -> [f64; 2] {
        match &self.robot {
            Robot::Point => [q[0], q[1]],
            Robot::Arm(arm) if arm.base_dims().is_some() => arm.base_position(q),
            Robot::Arm(arm) => arm.tip(q),
        }
    }

    pub fn is_free(&self, q: &Config) -> bool {
        self.is_free_coords(q.coords())
    }

    fn is_free_coords(&self, q: &[f64]) -> bool {
        if !self.spec.in_bounds(q) {
            return false;
        }
        match &self.robot {
            Robot::Point => self.grid.is_free_world(q[0], q[1]),
            Robot::Arm(arm) => arm.segments(q).iter().all(|seg| {
                let n = (seg.length() / self.resolution).ceil().max(1.0) as usize;
                (0..=n).all(|k| {
                    let p = seg.point_at(k as f64 / n as f64);
                    self.grid.is_free_world(p[0], p[1])
                })
            }),
        }
    }

    fn sweep_bound(&self, delta: &[f64]) -> f64 {
        match &self.robot {
            Robot::Point => delta[0].hypot(delta[1]),
            Robot::Arm(arm) => arm.sweep_bound(delta),
        }
    }

    /// Whether the geodesic from `a` to `b` stays in free space. Point robots
    /// are checked exactly against the cells the segment crosses; arms are
    /// checked at configurations no more than `resolution` apart in the
    /// workspace.
    pub fn motion_valid(&self, a: &Config, b: &Config) -> bool {
        // Fixed orientation makes the check exactly symmetric.
        let (a, b) = if lex_less(b, a) { (b, a) } else { (a, b) };
        if !self.is_free(a) || !self.is_free(b) {
            return false;
        }
        if self.robot == Robot::Point {
            return self.grid.segment_free([a[0], a[1]], [b[0], b[1]]);
        }
        let delta = self.spec.delta(a, b);
        let sweep = self.sweep_bound(&delta);
        let n = (sweep / self.resolution).ceil() as usize;
        if n <= 1 {
            return true;
        }
        let mut coords = vec![0.0; a.dim()];
        (1..n).all(|k| {
            let t = k as f64 / n as f64;
            for (i, c) in coords.iter_mut().enumerate() {
                *c = a[i] + t * delta[i];
            }
            self.spec.canonicalize(&mut coords);
            self.is_free_coords(&coords)
        })
    }

    /// Rejection-samples a free configuration. Returns it together with the
    /// number of rejected draws.
    pub fn sample_free<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(Config, usize), CspaceError> {
        for rejected in 0..MAX_CONSECUTIVE_REJECTIONS {
            let q = self.spec.sample_uniform(rng);
            if self.is_free(&q) {
                return Ok((q, rejected));
            }
        }
        Err(CspaceError::FullyOccupied(MAX_CONSECUTIVE_REJECTIONS))
    }
}

fn lex_less(a: &Config, b: &Config) -> bool {
    for (x, y) in a.coords().iter().zip(b.coords()) {
        if x != y {
            return x < y;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, TAU};

    fn wall_scene() -> Scene {
        // 10x10 grid with a one-cell vertical wall at column 5, rows 0..8.
        let mut g = OccupancyGrid::empty(10, 10, 1.0).unwrap();
        g.fill_rect(5, 0, 6, 8, true);
        Scene::point_robot(g).unwrap()
    }

    /// Dense interpolation at a tenth of the scene resolution.
    fn dense_oracle(scene: &Scene, a: &Config, b: &Config) -> bool {
        colliding_length(scene, a, b) == 0.0
    }

    /// Length of the motion found in collision by dense interpolation.
    fn colliding_length(scene: &Scene, a: &Config, b: &Config) -> f64 {
        let d = scene.spec().distance(a, b);
        let step = scene.resolution() / 10.0;
        let n = ((d / step).ceil() as usize).max(1);
        let hits = (0..=n)
            .filter(|&k| !scene.is_free(&scene.spec().interpolate(a, b, k as f64 / n as f64)))
            .count();
        hits as f64 * d / n as f64
    }

    #[test]
    fn point_robot_free_checks() {
        let s = wall_scene();
        assert!(s.is_free(&Config::new(vec![1.5, 1.5])));
        assert!(!s.is_free(&Config::new(vec![5.5, 1.5])));
        assert!(!s.is_free(&Config::new(vec![10.5, 1.5])));
        let empty = Scene::point_robot(OccupancyGrid::empty(10, 10, 1.0).unwrap()).unwrap();
        assert!(empty.is_free(&Config::new(vec![9.99, 0.0])));
    }

    #[test]
    fn motion_through_wall_rejected() {
        let s = wall_scene();
        let a = Config::new(vec![2.0, 3.0]);
        let b = Config::new(vec![8.0, 3.5]);
        assert!(!s.motion_valid(&a, &b));
        assert!(!dense_oracle(&s, &a, &b));
        let c = Config::new(vec![2.0, 9.0]);
        let d = Config::new(vec![8.0, 9.2]);
        assert!(s.motion_valid(&c, &d));
        assert!(dense_oracle(&s, &c, &d));
        assert!(s.motion_valid(&a, &a));
    }

    #[test]
    fn motion_validity_matches_dense_oracle() {
        // Obstacles are blocks of 2x2 cells = 8r wide at r = 0.25.
        let mut g = OccupancyGrid::empty(20, 20, 1.0).unwrap();
        for &(c, r) in &[(3, 3), (8, 12), (14, 5), (10, 16), (5, 9)] {
            g.fill_rect(c, r, c + 2, r + 2, true);
        }
        let s = Scene::point_robot(g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut grazes = 0;
        for _ in 0..2000 {
            let (a, _) = s.sample_free(&mut rng).unwrap();
            let (b, _) = s.sample_free(&mut rng).unwrap();
            let b = s.spec().steer(&a, &b, 4.0);
            let coarse = s.motion_valid(&a, &b);
            assert_eq!(coarse, s.motion_valid(&b, &a));
            if coarse != dense_oracle(&s, &a, &b) {
                // Only corner grazes too short for the oracle's spacing may
                // separate the exact check from it.
                assert!(!coarse, "exact check accepted a motion the oracle rejects");
                assert!(colliding_length(&s, &a, &b) < s.resolution(), "{a:?} {b:?}");
                grazes += 1;
            }
        }
        assert!(grazes <= 20, "{grazes} grazing disagreements");
    }

    #[test]
    fn sample_free_right_half() {
        let mut g = OccupancyGrid::empty(20, 10, 1.0).unwrap();
        g.fill_rect(0, 0, 10, 10, true);
        let s = Scene::point_robot(g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 10_000;
        let mut sum = 0.0;
        let mut rejected = 0;
        for _ in 0..n {
            let (q, r) = s.sample_free(&mut rng).unwrap();
            assert!(q[0] >= 10.0 && s.is_free(&q));
            sum += q[0];
            rejected += r;
        }
        // Uniform on [10, 20): mean 15, sd 10/sqrt(12).
        let sigma = 10.0 / 12f64.sqrt() / (n as f64).sqrt();
        assert!((sum / n as f64 - 15.0).abs() < 3.0 * sigma);
        // About one rejection per accepted sample.
        let ratio = rejected as f64 / n as f64;
        assert!((0.9..1.1).contains(&ratio), "{ratio}");
    }

    #[test]
    fn sample_free_fully_occupied() {
        let g = OccupancyGrid::from_cells(2, 2, 1.0, vec![true; 4]).unwrap();
        let s = Scene::point_robot(g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(s.sample_free(&mut rng), Err(CspaceError::FullyOccupied(_))));
    }

    /// Exact cells touched by a segment, by walking the grid lines it crosses.
    fn traversed_cells(seg: &super::super::Segment, res: f64) -> Vec<(i64, i64)> {
        let mut cells = Vec::new();
        let (x0, y0) = (seg.a[0] / res, seg.a[1] / res);
        let (x1, y1) = (seg.b[0] / res, seg.b[1] / res);
        let mut ts = vec![0.0, 1.0];
        for (p0, p1) in [(x0, x1), (y0, y1)] {
            let (lo, hi) = (p0.min(p1).ceil() as i64, p0.max(p1).floor() as i64);
            for g in lo..=hi {
                if p1 != p0 {
                    ts.push((g as f64 - p0) / (p1 - p0));
                }
            }
        }
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in ts.windows(2) {
            let t = 0.5 * (w[0] + w[1]);
            let c = ((x0 + t * (x1 - x0)).floor() as i64, (y0 + t * (y1 - y0)).floor() as i64);
            if !cells.contains(&c) {
                cells.push(c);
            }
        }
        cells
    }

    #[test]
    fn arm_elbow_crossing_obstacle() {
        let mut g = OccupancyGrid::empty(10, 10, 1.0).unwrap();
        g.set(6, 3, true);
        let spec = SpaceSpec::new(vec![(-PI, PI), (-PI, PI)], vec![true, true]).unwrap();
        let arm = PlanarArm::new([2.5, 2.5], None, vec![3.0, 3.0], vec![0, 1]).unwrap();
        let s = Scene::new(spec, g.clone(), Robot::Arm(arm.clone()), 0.25).unwrap();
        let rasterized_free = |q: &Config| {
            arm.forward_kinematics(q).iter().all(|seg| {
                traversed_cells(seg, 1.0).iter().all(|&(c, r)| {
                    c >= 0 && r >= 0 && !g.is_occupied(c as usize, r as usize)
                })
            })
        };
        // Upper link horizontal, forearm turns down through cell (6, 3).
        let hit = Config::new(vec![0.0, 0.4]);
        assert!(!rasterized_free(&hit));
        assert!(!s.is_free(&hit));
        // Forearm bent upward misses it.
        let miss = Config::new(vec![0.0, -0.6]);
        assert!(rasterized_free(&miss));
        assert!(s.is_free(&miss));
        // Broad agreement with the exact rasterization away from grazing contacts.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut agree = 0;
        for _ in 0..500 {
            let q = s.spec().sample_uniform(&mut rng);
            if s.is_free(&q) == rasterized_free(&q) {
                agree += 1;
            }
        }
        assert!(agree >= 490, "{agree}");
    }

    #[test]
    fn arm_requires_wrapped_joints() {
        let g = OccupancyGrid::empty(4, 4, 1.0).unwrap();
        let spec = SpaceSpec::euclidean(vec![(0.0, TAU), (0.0, TAU)]).unwrap();
        let arm = PlanarArm::new([0.0, 0.0], None, vec![1.0], vec![0]).unwrap();
        assert!(Scene::new(spec, g, Robot::Arm(arm), 0.1).is_err());
    }

    #[test]
    fn arm_motion_symmetry() {
        let mut g = OccupancyGrid::empty(20, 20, 1.0).unwrap();
        g.fill_rect(12, 4, 14, 16, true);
        let spec = SpaceSpec::new(
            vec![(0.0, 20.0), (0.0, 20.0), (-PI, PI), (-PI, PI)],
            vec![false, false, true, true],
        )
        .unwrap();
        let arm = PlanarArm::new([0.0, 0.0], Some([0, 1]), vec![2.0, 1.5], vec![2, 3]).unwrap();
        let s = Scene::new(spec, g, Robot::Arm(arm), 0.25).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let (a, _) = s.sample_free(&mut rng).unwrap();
            let (b, _) = s.sample_free(&mut rng).unwrap();
            let b = s.spec().steer(&a, &b, 2.0);
            assert_eq!(s.motion_valid(&a, &b), s.motion_valid(&b, &a));
        }
    }
}
