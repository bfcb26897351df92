use super::{Config, CspaceError};

/// A straight link between two world points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: [f64; 2],
    pub b: [f64; 2],
}

impl Segment {
    pub fn length(&self) -> f64 {
        (self.b[0] - self.a[0]).hypot(self.b[1] - self.a[1])
    }

    pub fn point_at(&self, t: f64) -> [f64; 2] {
        [
            self.a[0] + t * (self.b[0] - self.a[0]),
            self.a[1] + t * (self.b[1] - self.a[1]),
        ]
    }
}

/// Serial chain of revolute links in the plane.
///
/// The base sits at `base`, optionally translated by two configuration
/// coordinates (`base_dims`) for mobile-base robots. Joint `i` is driven by
/// coordinate `joint_dims[i]`; link `i` points along the cumulative sum of
/// joint angles `0..=i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarArm {
    base: [f64; 2],
    base_dims: Option<[usize; 2]>,
    links: Vec<f64>,
    joint_dims: Vec<usize>,
}

impl PlanarArm {
    pub fn new(
        base: [f64; 2],
        base_dims: Option<[usize; 2]>,
        links: Vec<f64>,
        joint_dims: Vec<usize>,
    ) -> Result<Self, CspaceError> {
        if links.is_empty() {
            return Err(CspaceError::InvalidRobot("arm needs at least one link".into()));
        }
        if let Some(bad) = links.iter().find(|&&l| !(l.is_finite() && l > 0.0)) {
            return Err(CspaceError::InvalidRobot(format!(
                "link lengths must be positive, got {bad}"
            )));
        }
        if links.len() != joint_dims.len() {
            return Err(CspaceError::InvalidRobot(format!(
                "{} links but {} joint dimensions",
                links.len(),
                joint_dims.len()
            )));
        }
        Ok(PlanarArm {
            base,
            base_dims,
            links,
            joint_dims,
        })
    }

    pub fn base(&self) -> [f64; 2] {
        self.base
    }

    pub fn base_dims(&self) -> Option<[usize; 2]> {
        self.base_dims
    }

    pub fn links(&self) -> &[f64] {
        &self.links
    }

    pub fn joint_dims(&self) -> &[usize] {
        &self.joint_dims
    }

    /// Largest configuration index the arm reads.
    pub(crate) fn max_dim(&self) -> usize {
        let base = self.base_dims.map_or(0, |[a, b]| a.max(b));
        self.joint_dims.iter().copied().max().unwrap_or(0).max(base)
    }

    /// World position of the base for configuration `q`.
    pub fn base_position(&self, q: &Config) -> [f64; 2] {
        self.base_at(q.coords())
    }

    fn base_at(&self, q: &[f64]) -> [f64; 2] {
        match self.base_dims {
            Some([i, j]) => [self.base[0] + q[i], self.base[1] + q[j]],
            None => self.base,
        }
    }

    /// Link segments, base first.
    pub fn forward_kinematics(&self, q: &Config) -> Vec<Segment> {
        self.segments(q.coords())
    }

    pub(crate) fn segments(&self, q: &[f64]) -> Vec<Segment> {
        let mut at = self.base_at(q);
        let mut angle = 0.0;
        self.links
            .iter()
            .zip(&self.joint_dims)
            .map(|(&len, &dim)| {
                angle += q[dim];
                let next = [at[0] + len * angle.cos(), at[1] + len * angle.sin()];
                let seg = Segment { a: at, b: next };
                at = next;
                seg
            })
            .collect()
    }

    pub fn tip(&self, q: &Config) -> [f64; 2] {
        self.forward_kinematics(q)
            .last()
            .map(|s| s.b)
            .unwrap_or_else(|| self.base_position(q))
    }

    /// Upper bound on how far any point of the arm moves in the workspace
    /// when interpolating linearly by `delta` (per-coordinate change).
    pub fn sweep_bound(&self, delta: &[f64]) -> f64 {
        let mut bound = match self.base_dims {
            Some([i, j]) => delta[i].hypot(delta[j]),
            None => 0.0,
        };
        // Points distal to joint i rotate about it by at most |Δθ_i| with
        // lever arm no longer than the remaining reach.
        let mut reach: f64 = self.links.iter().sum();
        for (k, &dim) in self.joint_dims.iter().enumerate() {
            bound += delta[dim].abs() * reach;
            reach -= self.links[k];
        }
        bound
    }
}
