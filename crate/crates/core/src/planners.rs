//! Uniform [`Planner`] front-ends over every algorithm in the crate.

use std::time::Instant;

use crate::baselines::{prm_build, prm_query, rrt, rrt_connect, PrmParams, RrtParams, PRM_K};
use crate::criticality::{critical_seeds, CriticalMask};
use crate::error::Result;
use crate::geometry::{Configuration, Environment, Rng};
use crate::planner::{
    llp_plan, llrm_build, llrm_plan, Budget, BuildParams, PlanResult, PlanStats, PlanStatus, Planner,
};

/// Critical seeds for a mask: `fraction` of its set cells, rounded up.
pub fn critical_count(mask: &CriticalMask, fraction: f64) -> usize {
    (fraction * mask.count() as f64).ceil() as usize
}

/// Uniform seeds for LL-RM: one tenth of the critical seeds, rounded up.
pub fn uniform_count(critical: usize) -> usize {
    critical.div_ceil(10)
}

#[derive(Debug, Clone)]
pub struct RrtPlanner {
    pub budget: Budget,
}

impl Planner for RrtPlanner {
    fn name(&self) -> &str {
        "rrt"
    }

    fn solve(
        &self,
        env: &Environment,
        start: &Configuration,
        goal: &Configuration,
        rng: &mut Rng,
    ) -> Result<PlanResult> {
        rrt(env, start, goal, &RrtParams::new(env, self.budget), rng)
    }
}

#[derive(Debug, Clone)]
pub struct RrtConnectPlanner {
    pub budget: Budget,
}

impl Planner for RrtConnectPlanner {
    fn name(&self) -> &str {
        "rrt-connect"
    }

    fn solve(
        &self,
        env: &Environment,
        start: &Configuration,
        goal: &Configuration,
        rng: &mut Rng,
    ) -> Result<PlanResult> {
        rrt_connect(env, start, goal, &RrtParams::new(env, self.budget), rng)
    }
}

/// Builds a fresh PRM within `build_budget`, then answers the query on it.
#[derive(Debug, Clone)]
pub struct PrmPlanner {
    pub build_budget: Budget,
    pub k: usize,
}

impl PrmPlanner {
    pub fn new(build_budget: Budget) -> Self {
        PrmPlanner { build_budget, k: PRM_K }
    }
}

impl Planner for PrmPlanner {
    fn name(&self) -> &str {
        "prm"
    }

    fn solve(
        &self,
        env: &Environment,
        start: &Configuration,
        goal: &Configuration,
        rng: &mut Rng,
    ) -> Result<PlanResult> {
        let mut params = PrmParams::new(env, self.build_budget);
        params.k = self.k;
        let rm = prm_build(env, &params, rng)?;
        Ok(prm_query(&rm, env, start, goal, params.resolution))
    }
}

/// Single-query Learn-and-Link over a critical mask.
#[derive(Debug, Clone)]
pub struct LlpPlanner {
    pub mask: CriticalMask,
    /// Share of mask cells used as seeds.
    pub cr_fraction: f64,
    pub budget: Budget,
}

impl Planner for LlpPlanner {
    fn name(&self) -> &str {
        "llp"
    }

    fn solve(
        &self,
        env: &Environment,
        start: &Configuration,
        goal: &Configuration,
        rng: &mut Rng,
    ) -> Result<PlanResult> {
        let started = Instant::now();
        let seeds = critical_seeds(&self.mask, critical_count(&self.mask, self.cr_fraction), env, rng);
        let mut budget = self.budget;
        budget.time_limit = budget.time_limit.map(|t| t.saturating_sub(started.elapsed()));
        let params = BuildParams::llp(env, seeds.len(), budget);
        let mut r = llp_plan(&params, &seeds, env, start, goal, rng)?;
        r.stats.wall_time = started.elapsed();
        Ok(r)
    }
}

/// Learn-and-Link roadmap: build within `build_budget`, then one query within `budget`.
#[derive(Debug, Clone)]
pub struct LlRmPlanner {
    pub mask: CriticalMask,
    pub cr_fraction: f64,
    pub build_budget: Budget,
    pub budget: Budget,
}

impl Planner for LlRmPlanner {
    fn name(&self) -> &str {
        "ll-rm"
    }

    fn solve(
        &self,
        env: &Environment,
        start: &Configuration,
        goal: &Configuration,
        rng: &mut Rng,
    ) -> Result<PlanResult> {
        let build_started = Instant::now();
        let seeds = critical_seeds(&self.mask, critical_count(&self.mask, self.cr_fraction), env, rng);
        let mut build_budget = self.build_budget;
        build_budget.time_limit = build_budget
            .time_limit
            .map(|t| t.saturating_sub(build_started.elapsed()));
        let n = seeds.len();
        let params = BuildParams::llrm(env, n, uniform_count(n), build_budget);
        let (mut rm, report) = match llrm_build(&params, &seeds, env, rng) {
            Ok(x) => x,
            Err(crate::Error::NotEnoughSeeds { .. }) => {
                return Ok(PlanResult::failed(PlanStatus::InvalidQuery, PlanStats::default()))
            }
            Err(e) => return Err(e),
        };
        let build_time = build_started.elapsed();
        let query = BuildParams {
            budget: self.budget,
            ..params
        };
        let mut r = llrm_plan(start, goal, &mut rm, &query, env, rng, &mut ())?;
        r.stats.build_time = build_time;
        r.stats.samples += report.stats.samples;
        Ok(r)
    }
}
