use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rrf_core::bandit::{ArmKind, Bandit, BanditConfig, Outcome};
use rrf_core::forest::TreeId;

fn outcome(success: bool) -> Outcome {
    if success {
        Outcome::Extended
    } else {
        Outcome::MotionBlocked
    }
}

#[test]
fn stationary_arms_favour_the_better_one() {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = Bandit::new(BanditConfig::default());
        let good = b.add_arm(TreeId(0), ArmKind::Rooted);
        let bad = b.add_arm(TreeId(1), ArmKind::Rooted);
        for _ in 0..10_000 {
            let a = b.pick(&mut rng);
            let p = if a == good { 0.8 } else { 0.2 };
            let hit = rng.random_bool(p);
            b.update(a, outcome(hit));
        }
        let ratio = b.arm(good).pulls as f64 / b.arm(bad).pulls as f64;
        assert!(ratio > 2.0, "seed {seed}: ratio {ratio}");
    }
}

#[test]
fn pruned_arms_are_never_picked() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut b = Bandit::new(BanditConfig::default());
    b.add_arm(TreeId(0), ArmKind::Rooted);
    b.add_arm(TreeId(1), ArmKind::Rooted);
    for _ in 0..100_000 {
        if rng.random_bool(0.02) {
            b.add_arm(TreeId(2), ArmKind::Local);
        }
        let a = b.pick(&mut rng);
        assert!(b.arm(a).alive);
        let success = rng.random_bool(0.4);
        b.update(a, outcome(success));
    }
    assert!(b.arms().iter().any(|a| !a.alive));
    assert!(b.arms().iter().filter(|a| a.kind == ArmKind::Rooted).all(|a| a.alive));
}
