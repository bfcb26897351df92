pub mod bandit;
pub mod cspace;
pub mod forest;
pub mod planner;
pub mod proposal;
pub mod proposer;
