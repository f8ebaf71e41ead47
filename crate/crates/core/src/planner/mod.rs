//! Learn-and-Link planners and the graph machinery they share with the baselines.

mod dijkstra;
mod learn_link;
pub mod nn;
mod roadmap;
mod subgraph;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{Configuration, Environment, Rng};

pub use dijkstra::dijkstra;
pub use learn_link::{ll_build, llp_plan, llrm_build, llrm_plan, BuildParams, BuildReport, LlOutput, Mode};
pub use roadmap::{LinkEvent, LinkStatus, PlannerObserver, Roadmap};
pub use subgraph::{ConnectStatus, ExtendStatus, Steer, Subgraph, Vertex, VertexOrigin};

/// Outcome of a planning query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlanStatus {
    Solved,
    TimedOut,
    SampleCapReached,
    InvalidQuery,
}

impl PlanStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlanStatus::Solved => "solved",
            PlanStatus::TimedOut => "timed_out",
            PlanStatus::SampleCapReached => "sample_cap",
            PlanStatus::InvalidQuery => "invalid_query",
        }
    }
}

impl std::fmt::Display for PlanStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlanStats {
    pub samples: u64,
    pub extend_calls: u64,
    pub connect_calls: u64,
    pub link_events: u64,
    /// Query time. Roadmap planners report their construction separately in `build_time`.
    pub wall_time: Duration,
    pub build_time: Duration,
    pub path_length: f64,
    pub vertices: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub status: PlanStatus,
    pub path: Vec<Configuration>,
    pub stats: PlanStats,
}

impl PlanResult {
    pub fn failed(status: PlanStatus, stats: PlanStats) -> Self {
        PlanResult {
            status,
            path: Vec::new(),
            stats,
        }
    }

    pub fn is_solved(&self) -> bool {
        self.status == PlanStatus::Solved
    }
}

/// Sample cap and wall-clock limit; either may be absent.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Budget {
    pub sample_cap: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub fn samples(cap: u64) -> Self {
        Budget {
            sample_cap: Some(cap),
            time_limit: None,
        }
    }

    pub fn time(limit: Duration) -> Self {
        Budget {
            sample_cap: None,
            time_limit: Some(limit),
        }
    }

    /// The failure status when the budget is spent, or `None` while work may continue.
    pub fn exhausted(&self, samples: u64, started: Instant) -> Option<PlanStatus> {
        if self.sample_cap.is_some_and(|cap| samples >= cap) {
            return Some(PlanStatus::SampleCapReached);
        }
        if self.time_limit.is_some_and(|t| started.elapsed() >= t) {
            return Some(PlanStatus::TimedOut);
        }
        None
    }
}

/// Anything that answers a single start/goal query.
pub trait Planner: Send + Sync {
    fn name(&self) -> &str;
    fn solve(
        &self,
        env: &Environment,
        start: &Configuration,
        goal: &Configuration,
        rng: &mut Rng,
    ) -> Result<PlanResult>;
}

/// Sum of metric lengths of consecutive path segments.
pub fn path_length(env: &Environment, path: &[Configuration]) -> f64 {
    path.windows(2).map(|w| env.space().dist(&w[0], &w[1])).sum()
}

/// Checks endpoint equality and every segment at `resolution`.
pub fn validate_path(
    env: &Environment,
    path: &[Configuration],
    start: &Configuration,
    goal: &Configuration,
    resolution: f64,
) -> std::result::Result<(), String> {
    let (Some(first), Some(last)) = (path.first(), path.last()) else {
        return Err("path is empty".into());
    };
    if first != start {
        return Err(format!("path starts at {first}, query start is {start}"));
    }
    if last != goal {
        return Err(format!("path ends at {last}, query goal is {goal}"));
    }
    for (i, w) in path.windows(2).enumerate() {
        if !env.edge_collision_free(&w[0], &w[1], resolution) {
            return Err(format!("segment {i} ({} -> {}) collides", w[0], w[1]));
        }
    }
    Ok(())
}

pub(crate) fn check_query(env: &Environment, start: &Configuration, goal: &Configuration) -> bool {
    let dof = env.space().dim_count();
    start.len() == dof
        && goal.len() == dof
        && env.space().contains(start)
        && env.space().contains(goal)
        && env.is_collision_free(start)
        && env.is_collision_free(goal)
}
