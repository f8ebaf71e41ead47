//! Reference planners: RRT, RRT-Connect and PRM, on the same steering and collision
//! primitives as the Learn-and-Link planners.

mod prm;
mod rrt;

pub use prm::{prm_build, prm_query, PrmParams, PrmRoadmap};
pub use rrt::{rrt, rrt_connect, RrtParams};

/// Goal-sampling probability of RRT.
pub const GOAL_BIAS: f64 = 0.05;
/// Neighbors per PRM vertex.
pub const PRM_K: usize = 10;
