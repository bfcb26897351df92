//! Mortal, non-stationary Bernoulli bandit over trees.
//!
//! Each arm keeps an exponentially discounted success frequency. Arms are
//! drawn with probability proportional to that estimate (floored), and local
//! arms die once their estimate drops below the pruning threshold.

use rand::Rng;

use crate::forest::TreeId;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BanditError {
    #[error("need 0 < floor < eta < 1, got floor {floor}, eta {eta}")]
    BadThresholds { floor: f64, eta: f64 },
    #[error("discount must lie in (0, 1], got {0}")]
    BadDiscount(f64),
    #[error("initial probability must lie in [0, 1], got {0}")]
    BadInitial(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BanditConfig {
    eta: f64,
    discount: f64,
    floor: f64,
    initial: f64,
}

impl Default for BanditConfig {
    fn default() -> Self {
        BanditConfig {
            eta: 0.1,
            discount: 0.1,
            floor: 0.02,
            initial: 0.5,
        }
    }
}

impl BanditConfig {
    pub fn new(eta: f64, discount: f64, floor: f64, initial: f64) -> Result<Self, BanditError> {
        if !(floor > 0.0 && floor < eta && eta < 1.0) {
            return Err(BanditError::BadThresholds { floor, eta });
        }
        if !(discount > 0.0 && discount <= 1.0) {
            return Err(BanditError::BadDiscount(discount));
        }
        if !(0.0..=1.0).contains(&initial) {
            return Err(BanditError::BadInitial(initial));
        }
        Ok(BanditConfig {
            eta,
            discount,
            floor,
            initial,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn discount(&self) -> f64 {
        self.discount
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArmId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArmKind {
    /// Grows the start or goal tree; never pruned.
    Rooted,
    Local,
}

/// How an extension attempt ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Extended,
    /// The new configuration (or the uniform sample) was in collision.
    InCollision,
    /// The endpoint was free but the connecting motion collided.
    MotionBlocked,
}

impl Outcome {
    pub fn reward(self) -> f64 {
        match self {
            Outcome::Extended => 1.0,
            Outcome::InCollision | Outcome::MotionBlocked => 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arm {
    pub id: ArmId,
    pub tree: TreeId,
    pub kind: ArmKind,
    pub prob: f64,
    pub pulls: u64,
    pub successes: u64,
    pub alive: bool,
}

impl Arm {
    /// One discounted update of the success estimate.
    pub fn update(&mut self, reward: f64, cfg: &BanditConfig) {
        debug_assert!(self.alive, "updating a pruned arm");
        let w = cfg.discount;
        self.prob = ((1.0 - w) * self.prob + w * reward).clamp(0.0, 1.0);
        self.pulls += 1;
        if reward > 0.0 {
            self.successes += 1;
        }
    }

    pub fn should_prune(&self, cfg: &BanditConfig) -> bool {
        self.kind == ArmKind::Local && self.prob < cfg.eta
    }
}

#[derive(Clone, Debug)]
pub struct Bandit {
    cfg: BanditConfig,
    arms: Vec<Arm>,
}

impl Bandit {
    pub fn new(cfg: BanditConfig) -> Self {
        Bandit { cfg, arms: Vec::new() }
    }

    pub fn config(&self) -> &BanditConfig {
        &self.cfg
    }

    pub fn add_arm(&mut self, tree: TreeId, kind: ArmKind) -> ArmId {
        let id = ArmId(self.arms.len());
        self.arms.push(Arm {
            id,
            tree,
            kind,
            prob: self.cfg.initial,
            pulls: 0,
            successes: 0,
            alive: true,
        });
        id
    }

    pub fn arm(&self, id: ArmId) -> &Arm {
        &self.arms[id.0]
    }

    pub fn arm_mut(&mut self, id: ArmId) -> &mut Arm {
        &mut self.arms[id.0]
    }

    pub fn arms(&self) -> &[Arm] {
        &self.arms
    }

    pub fn alive(&self) -> impl Iterator<Item = &Arm> {
        self.arms.iter().filter(|a| a.alive)
    }

    pub fn live_count(&self) -> usize {
        self.alive().count()
    }

    pub fn live_local_count(&self) -> usize {
        self.alive().filter(|a| a.kind == ArmKind::Local).count()
    }

    fn weight(&self, a: &Arm) -> f64 {
        a.prob.max(self.cfg.floor)
    }

    /// Multinomial draw over living arms, weights `max(prob, floor)`.
    pub fn try_pick<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<ArmId> {
        let total: f64 = self.alive().map(|a| self.weight(a)).sum();
        if total <= 0.0 {
            return None;
        }
        let mut u = rng.random::<f64>() * total;
        let mut last = None;
        for a in self.alive() {
            let w = self.weight(a);
            if u < w {
                return Some(a.id);
            }
            u -= w;
            last = Some(a.id);
        }
        // Rounding left `u` a hair above the final cumulative weight.
        last
    }

    /// # Panics
    /// If no arm is alive.
    pub fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> ArmId {
        self.try_pick(rng).expect("pick with no living arms")
    }

    /// Applies the reward and prunes the arm if it became unprofitable.
    /// Returns whether the arm was pruned.
    pub fn update(&mut self, id: ArmId, outcome: Outcome) -> bool {
        let cfg = self.cfg;
        let arm = &mut self.arms[id.0];
        arm.update(outcome.reward(), &cfg);
        if arm.should_prune(&cfg) {
            arm.alive = false;
            return true;
        }
        false
    }

    pub fn kill(&mut self, id: ArmId) {
        self.arms[id.0].alive = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg_w(w: f64) -> BanditConfig {
        BanditConfig::new(0.1, w, 0.02, 0.5).unwrap()
    }

    fn arm(kind: ArmKind, prob: f64) -> Arm {
        Arm {
            id: ArmId(0),
            tree: TreeId(0),
            kind,
            prob,
            pulls: 0,
            successes: 0,
            alive: true,
        }
    }

    #[test]
    fn config_validation() {
        assert!(BanditConfig::new(0.1, 0.1, 0.2, 0.5).is_err());
        assert!(BanditConfig::new(1.0, 0.1, 0.02, 0.5).is_err());
        assert!(BanditConfig::new(0.1, 0.0, 0.02, 0.5).is_err());
        assert!(BanditConfig::new(0.1, 1.0, 0.02, 0.5).is_ok());
        assert!(BanditConfig::new(0.1, 0.1, 0.02, 1.5).is_err());
    }

    #[test]
    fn single_arm_always_selected() {
        let mut b = Bandit::new(BanditConfig::default());
        let a = b.add_arm(TreeId(0), ArmKind::Rooted);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!((0..100).all(|_| b.pick(&mut rng) == a));
    }

    #[test]
    fn no_living_arms() {
        let mut b = Bandit::new(BanditConfig::default());
        let a = b.add_arm(TreeId(2), ArmKind::Local);
        b.kill(a);
        assert_eq!(b.try_pick(&mut ChaCha8Rng::seed_from_u64(0)), None);
    }

    fn frequencies(b: &Bandit, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = vec![0usize; b.arms().len()];
        for _ in 0..n {
            counts[b.pick(&mut rng).0] += 1;
        }
        counts.iter().map(|&c| c as f64 / n as f64).collect()
    }

    #[test]
    fn multinomial_follows_probabilities() {
        let mut b = Bandit::new(BanditConfig::default());
        let x = b.add_arm(TreeId(0), ArmKind::Rooted);
        let y = b.add_arm(TreeId(1), ArmKind::Rooted);
        b.arm_mut(x).prob = 0.9;
        b.arm_mut(y).prob = 0.1;
        let f = frequencies(&b, 10_000, 1);
        assert!((f[0] - 0.9).abs() < 0.02 && (f[1] - 0.1).abs() < 0.02, "{f:?}");
    }

    #[test]
    fn floor_keeps_zero_arm_reachable() {
        let cfg = BanditConfig::new(0.1, 0.1, 0.01, 0.5).unwrap();
        let mut b = Bandit::new(cfg);
        b.add_arm(TreeId(0), ArmKind::Rooted);
        b.add_arm(TreeId(1), ArmKind::Rooted);
        let z = b.add_arm(TreeId(2), ArmKind::Rooted);
        b.arm_mut(z).prob = 0.0;
        let n = 200_000;
        let f = frequencies(&b, n, 2);
        let want = 0.01 / 1.01;
        let sd = (want * (1.0 - want) / n as f64).sqrt();
        assert!((f[2] - want).abs() < 4.0 * sd, "{} vs {want}", f[2]);
    }

    #[test]
    fn discounted_update_arithmetic() {
        let cfg = cfg_w(0.2);
        let mut a = arm(ArmKind::Local, 0.5);
        a.update(1.0, &cfg);
        assert!((a.prob - 0.6).abs() < 1e-15);
        let mut a = arm(ArmKind::Local, 0.5);
        a.update(0.0, &cfg);
        assert!((a.prob - 0.4).abs() < 1e-15);
        assert_eq!((a.pulls, a.successes), (1, 0));
    }

    #[test]
    fn hundred_successes_from_zero() {
        let cfg = cfg_w(0.2);
        let mut a = arm(ArmKind::Local, 0.0);
        for _ in 0..100 {
            a.update(1.0, &cfg);
        }
        assert!(a.prob > 1.0 - 0.8f64.powi(100) - 1e-9);
        assert_eq!(a.successes, 100);
    }

    #[test]
    fn prune_rule() {
        let cfg = BanditConfig::default();
        assert!(!arm(ArmKind::Rooted, 0.001).should_prune(&cfg));
        assert!(arm(ArmKind::Local, cfg.eta() / 2.0).should_prune(&cfg));
        assert!(!arm(ArmKind::Local, cfg.eta()).should_prune(&cfg));
    }

    #[test]
    fn outcome_rewards() {
        assert_eq!(Outcome::Extended.reward(), 1.0);
        assert_eq!(Outcome::InCollision.reward(), 0.0);
        assert_eq!(Outcome::MotionBlocked.reward(), 0.0);
    }

    #[test]
    fn rooted_arms_survive_failures() {
        let mut b = Bandit::new(BanditConfig::default());
        let r = b.add_arm(TreeId(0), ArmKind::Rooted);
        let l = b.add_arm(TreeId(2), ArmKind::Local);
        for _ in 0..1000 {
            b.update(r, Outcome::InCollision);
        }
        assert!(b.arm(r).alive);
        let mut pruned_at = None;
        for i in 0..100 {
            if b.update(l, Outcome::MotionBlocked) {
                pruned_at = Some(i);
                break;
            }
        }
        // 0.5 * 0.9^k < 0.1 first at k = 16.
        assert_eq!(pruned_at, Some(15));
        assert!(!b.arm(l).alive);
    }

    proptest! {
        #[test]
        fn probabilities_stay_in_unit_interval(
            w in 0.01f64..=1.0,
            p0 in 0.0f64..=1.0,
            rewards in proptest::collection::vec(any::<bool>(), 0..200),
        ) {
            let cfg = BanditConfig::new(0.1, w, 0.02, p0).unwrap();
            let mut a = arm(ArmKind::Rooted, p0);
            for r in rewards {
                a.update(if r { 1.0 } else { 0.0 }, &cfg);
                prop_assert!((0.0..=1.0).contains(&a.prob));
            }
        }

        #[test]
        fn full_weight_tracks_last_reward(rewards in proptest::collection::vec(any::<bool>(), 1..50)) {
            let cfg = cfg_w(1.0);
            let mut a = arm(ArmKind::Rooted, 0.5);
            for &r in &rewards {
                a.update(if r { 1.0 } else { 0.0 }, &cfg);
            }
            prop_assert_eq!(a.prob, if *rewards.last().unwrap() { 1.0 } else { 0.0 });
        }
    }
}
