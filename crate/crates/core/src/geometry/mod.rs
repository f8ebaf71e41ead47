//! Configuration spaces, sampling, metric and collision checking shared by every planner.

mod env;
mod rng;
mod shapes;
mod space;

pub use env::{box_vertices, chain_forward_kinematics, ChainLink, Environment, Obstacle, Robot, Shape};
pub use rng::Rng;
pub use shapes::{point_segment_distance, segments_intersect, Aabb, Polygon, Vec2};
pub use space::{angle_diff, CSpace, Configuration, Dim, ANGULAR_WEIGHT};
