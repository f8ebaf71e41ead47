//! Learn-and-Link motion planning.
//!
//! Critical regions of a workspace, estimated from previously observed motion plans, seed a
//! forest of independently grown subgraphs that are linked into a roadmap. The crate provides
//! the single-query planner (LLP), the reusable roadmap variant (LL-RM), the RRT, RRT-Connect
//! and PRM baselines on the same geometric primitives, and the critical-region pipeline.

pub mod baselines;
pub mod criticality;
pub mod error;
pub mod geometry;
pub mod io;
pub mod planner;
pub mod planners;
pub mod worlds;

pub use error::{Error, Result};
pub use geometry::{CSpace, Configuration, Environment, Rng};
