use std::time::Instant;

use super::GOAL_BIAS;
use crate::error::Result;
use crate::geometry::{Configuration, Environment, Rng};
use crate::planner::{
    check_query, path_length, Budget, ConnectStatus, ExtendStatus, PlanResult, PlanStats, PlanStatus, Steer, Subgraph,
    Vertex, VertexOrigin,
};

#[derive(Debug, Clone, PartialEq)]
pub struct RrtParams {
    pub step: f64,
    pub resolution: f64,
    pub goal_bias: f64,
    pub budget: Budget,
}

impl RrtParams {
    pub fn new(env: &Environment, budget: Budget) -> Self {
        RrtParams {
            step: env.default_step(),
            resolution: env.default_resolution(),
            goal_bias: GOAL_BIAS,
            budget,
        }
    }
}

fn tree(steer: &mut Steer<'_>, q: &Configuration) -> Subgraph {
    let id = steer.alloc_id();
    Subgraph::new(
        0,
        Vertex {
            id,
            q: q.clone(),
            origin: VertexOrigin::Query,
        },
    )
}

fn finish(
    env: &Environment,
    steer: &Steer<'_>,
    mut stats: PlanStats,
    started: Instant,
    outcome: std::result::Result<Vec<Configuration>, PlanStatus>,
) -> PlanResult {
    stats.extend_calls = steer.extend_calls;
    stats.connect_calls = steer.connect_calls;
    stats.wall_time = started.elapsed();
    match outcome {
        Ok(path) => {
            stats.path_length = path_length(env, &path);
            PlanResult {
                status: PlanStatus::Solved,
                path,
                stats,
            }
        }
        Err(s) => PlanResult::failed(s, stats),
    }
}

/// Single-tree RRT from the start with goal biasing. Solved once the goal is added by a
/// validated steering step.
pub fn rrt(
    env: &Environment,
    start: &Configuration,
    goal: &Configuration,
    params: &RrtParams,
    rng: &mut Rng,
) -> Result<PlanResult> {
    let started = Instant::now();
    if !check_query(env, start, goal) {
        return Ok(PlanResult::failed(PlanStatus::InvalidQuery, PlanStats::default()));
    }
    let mut steer = Steer::new(env, params.step, params.resolution);
    let mut t = tree(&mut steer, start);
    let mut stats = PlanStats::default();
    if env.space().dist(start, goal) == 0.0 {
        return Ok(finish(env, &steer, stats, started, Ok(vec![start.clone()])));
    }
    let outcome = loop {
        if let Some(s) = params.budget.exhausted(stats.samples, started) {
            break Err(s);
        }
        stats.samples += 1;
        let target = if rng.chance(params.goal_bias) {
            goal.clone()
        } else {
            env.space().sample_uniform(rng)
        };
        let i = match t.extend(&target, &mut steer) {
            ExtendStatus::Trapped => continue,
            ExtendStatus::Advanced(i) | ExtendStatus::Reached(i) => i,
        };
        if env.space().dist(&t.vertices()[i].q, goal) <= params.step
            && matches!(t.extend(goal, &mut steer), ExtendStatus::Reached(_))
        {
            break Ok(t.shortest_path(start, goal)?);
        }
    };
    stats.vertices = t.len();
    Ok(finish(env, &steer, stats, started, outcome))
}

/// Bidirectional RRT-Connect: one tree extends toward a random sample, the other connects
/// toward the new vertex, then the roles swap.
pub fn rrt_connect(
    env: &Environment,
    start: &Configuration,
    goal: &Configuration,
    params: &RrtParams,
    rng: &mut Rng,
) -> Result<PlanResult> {
    let started = Instant::now();
    if !check_query(env, start, goal) {
        return Ok(PlanResult::failed(PlanStatus::InvalidQuery, PlanStats::default()));
    }
    let mut steer = Steer::new(env, params.step, params.resolution);
    let mut stats = PlanStats::default();
    if env.space().dist(start, goal) == 0.0 {
        return Ok(finish(env, &steer, stats, started, Ok(vec![start.clone()])));
    }
    let mut from_start = tree(&mut steer, start);
    let mut from_goal = tree(&mut steer, goal);
    let mut start_turn = true;
    let outcome = loop {
        if let Some(s) = params.budget.exhausted(stats.samples, started) {
            break Err(s);
        }
        stats.samples += 1;
        let q_rand = env.space().sample_uniform(rng);
        let (a, b) = if start_turn {
            (&mut from_start, &mut from_goal)
        } else {
            (&mut from_goal, &mut from_start)
        };
        start_turn = !start_turn;
        let i = match a.extend(&q_rand, &mut steer) {
            ExtendStatus::Trapped => continue,
            ExtendStatus::Advanced(i) | ExtendStatus::Reached(i) => i,
        };
        let q_new = a.vertices()[i].q.clone();
        if let ConnectStatus::Reached(_) = b.connect(&q_new, &mut steer) {
            let mut path = from_start.shortest_path(start, &q_new)?;
            let tail = from_goal.shortest_path(&q_new, goal)?;
            path.extend(tail.into_iter().skip(1));
            break Ok(path);
        }
    };
    stats.vertices = from_start.len() + from_goal.len();
    Ok(finish(env, &steer, stats, started, outcome))
}
