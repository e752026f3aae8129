//! Stochastic approximation for sharp objectives: projected stochastic
//! gradient descent, Kiefer-Wolfowitz finite differences and stochastic
//! Frank-Wolfe, with benchmark problems and concentration diagnostics.

pub mod algorithms;
pub mod bounds;
pub mod fit;
pub mod linalg;
pub mod problem;
pub mod problems;
pub mod projections;
pub mod rng;
pub mod scalar;
pub mod schedule;
pub mod trajectory;
pub mod vector;

pub use problem::{FeasibleSet, OptimumInfo, Problem};
pub use rng::RngStream;
pub use scalar::Scalar;
pub use schedule::{staged_schedule_a, staged_schedule_b, ScheduleError, StepSchedule, TargetedStages};
pub use trajectory::{Record, Thinning, Trajectory};
pub use vector::Vector;

pub type Vec64 = Vector<f64>;
pub type Vec32 = Vector<f32>;
pub type Schedule64 = StepSchedule<f64>;
pub type Schedule32 = StepSchedule<f32>;
pub type Trajectory64 = Trajectory<f64>;
pub type Trajectory32 = Trajectory<f32>;
