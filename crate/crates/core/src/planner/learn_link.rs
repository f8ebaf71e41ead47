//! The Learn-and-Link build loop (single-query and roadmap modes) and roadmap queries.

use std::time::Instant;

use super::roadmap::{LinkStatus, PlannerObserver, Roadmap};
use super::subgraph::{ExtendStatus, Steer, VertexOrigin};
use super::{check_query, path_length, Budget, PlanResult, PlanStats, PlanStatus};
use crate::error::{Error, Result};
use crate::geometry::{Configuration, Environment, Rng};

/// Attempts per requested seed before it is skipped.
pub const SEED_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Single query: no uniform seeds, start and goal seeded immediately, returns a path.
    Llp,
    /// Roadmap: critical plus uniform seeds, returns the linked roadmap.
    LlRm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildParams {
    /// Critical-region seeds.
    pub n: usize,
    /// Uniform seeds; must be zero in LLP mode.
    pub m: usize,
    /// Steering step ε.
    pub step: f64,
    /// Edge validation resolution δ.
    pub resolution: f64,
    pub budget: Budget,
    pub mode: Mode,
}

impl BuildParams {
    /// LLP parameters with the environment's default ε and δ.
    pub fn llp(env: &Environment, n: usize, budget: Budget) -> Self {
        BuildParams {
            n,
            m: 0,
            step: env.default_step(),
            resolution: env.default_resolution(),
            budget,
            mode: Mode::Llp,
        }
    }

    pub fn llrm(env: &Environment, n: usize, m: usize, budget: Budget) -> Self {
        BuildParams {
            n,
            m,
            step: env.default_step(),
            resolution: env.default_resolution(),
            budget,
            mode: Mode::LlRm,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.resolution > 0.0 && self.step > self.resolution) {
            return Err(Error::InvalidParams(format!(
                "need step > resolution > 0 (step {}, resolution {})",
                self.step, self.resolution
            )));
        }
        if self.mode == Mode::Llp && self.m != 0 {
            return Err(Error::InvalidParams(
                "LLP mode takes no uniform seeds (m must be 0)".into(),
            ));
        }
        Ok(())
    }
}

/// Summary of a roadmap-mode build.
#[derive(Debug, Clone, PartialEq)]
pub struct BuildReport {
    /// `Solved` once every subgraph has been linked into one.
    pub status: PlanStatus,
    pub critical_seeds: usize,
    pub uniform_seeds: usize,
    pub stats: PlanStats,
}

#[derive(Debug, Clone)]
pub enum LlOutput {
    Path(PlanResult),
    Roadmap(Roadmap, BuildReport),
}

/// Runs the Learn-and-Link build.
///
/// `cr` is the critical-region point list; `n` distinct entries are drawn from it without
/// replacement, rejecting entries in collision. In LLP mode `query` must hold the start and goal.
pub fn ll_build(
    params: &BuildParams,
    cr: &[Configuration],
    env: &Environment,
    rng: &mut Rng,
    query: Option<(&Configuration, &Configuration)>,
    observer: &mut dyn PlannerObserver,
) -> Result<LlOutput> {
    let started = Instant::now();
    params.validate()?;
    if params.n > cr.len() {
        return Err(Error::NotEnoughSeeds {
            requested: params.n,
            available: cr.len(),
        });
    }
    if params.mode == Mode::Llp {
        let Some((start, goal)) = query else {
            return Err(Error::InvalidParams("LLP mode needs a start and goal".into()));
        };
        if !check_query(env, start, goal) {
            return Ok(LlOutput::Path(PlanResult::failed(
                PlanStatus::InvalidQuery,
                PlanStats::default(),
            )));
        }
    }
    // main-loop samples come from their own stream so seeding never shifts them
    let mut sampler = rng.fork();
    let mut steer = Steer::new(env, params.step, params.resolution);
    let mut rm = Roadmap::new();

    let mut pool: Vec<usize> = (0..cr.len()).collect();
    let mut critical = 0;
    for _ in 0..params.n {
        let mut placed = false;
        for _ in 0..SEED_ATTEMPTS {
            if pool.is_empty() {
                break;
            }
            let k = pool.swap_remove(rng.index(pool.len()));
            if env.is_collision_free(&cr[k]) {
                rm.add_graph(cr[k].clone(), VertexOrigin::Critical, &mut steer);
                placed = true;
                break;
            }
        }
        if placed {
            critical += 1;
        } else {
            log::warn!("critical seed skipped: no collision-free entry left after {SEED_ATTEMPTS} attempts");
        }
    }
    let mut uniform = 0;
    for _ in 0..params.m {
        let found = (0..SEED_ATTEMPTS)
            .map(|_| env.space().sample_uniform(rng))
            .find(|q| env.is_collision_free(q));
        match found {
            Some(q) => {
                rm.add_graph(q, VertexOrigin::Uniform, &mut steer);
                uniform += 1;
            }
            None => log::warn!("uniform seed skipped after {SEED_ATTEMPTS} attempts"),
        }
    }
    if let Some((start, goal)) = query.filter(|_| params.mode == Mode::Llp) {
        rm.add_graph(start.clone(), VertexOrigin::Query, &mut steer);
        rm.add_graph(goal.clone(), VertexOrigin::Query, &mut steer);
    }
    if rm.live_count() == 0 {
        return Err(Error::NotEnoughSeeds {
            requested: params.n + params.m,
            available: 0,
        });
    }

    let mut stats = PlanStats::default();
    let outcome = grow_until_linked(
        &mut rm,
        &mut sampler,
        &mut steer,
        &params.budget,
        started,
        &mut stats,
        observer,
    );
    rm.set_next_vertex_id(steer.next_id);
    stats.extend_calls = steer.extend_calls;
    stats.connect_calls = steer.connect_calls;
    stats.vertices = rm.vertex_total();

    match params.mode {
        Mode::Llp => {
            let (start, goal) = query.expect("checked above");
            let result = match outcome {
                Ok(slot) => {
                    let g = rm.graph(slot).expect("linked graph is live");
                    let path = g.shortest_path(start, goal)?;
                    stats.path_length = path_length(env, &path);
                    stats.wall_time = started.elapsed();
                    PlanResult {
                        status: PlanStatus::Solved,
                        path,
                        stats,
                    }
                }
                Err(status) => {
                    stats.wall_time = started.elapsed();
                    PlanResult::failed(status, stats)
                }
            };
            Ok(LlOutput::Path(result))
        }
        Mode::LlRm => {
            rm.compact();
            stats.wall_time = started.elapsed();
            let report = BuildReport {
                status: outcome.map_or_else(|s| s, |_| PlanStatus::Solved),
                critical_seeds: critical,
                uniform_seeds: uniform,
                stats,
            };
            Ok(LlOutput::Roadmap(rm, report))
        }
    }
}

/// Shared sample / extend / link / swap loop. Returns the slot of the single linked graph.
fn grow_until_linked(
    rm: &mut Roadmap,
    sampler: &mut Rng,
    steer: &mut Steer<'_>,
    budget: &Budget,
    started: Instant,
    stats: &mut PlanStats,
    observer: &mut dyn PlannerObserver,
) -> std::result::Result<usize, PlanStatus> {
    let space = steer.env.space();
    let mut current = rm.first_live().expect("roadmap has a live graph");
    loop {
        if let Some(status) = budget.exhausted(stats.samples, started) {
            return Err(status);
        }
        let q_rand = space.sample_uniform(sampler);
        stats.samples += 1;
        observer.on_sample(&q_rand);
        let g = rm.graph_mut(current).expect("cursor points at a live graph");
        match g.extend(&q_rand, steer) {
            ExtendStatus::Trapped => {}
            ExtendStatus::Advanced(i) | ExtendStatus::Reached(i) => {
                stats.link_events += 1;
                if rm.link(current, i, steer, observer) == LinkStatus::Linked {
                    return Ok(current);
                }
            }
        }
        current = rm.swap(current);
    }
}

/// Single-query planning (LLP).
pub fn llp_plan(
    params: &BuildParams,
    cr: &[Configuration],
    env: &Environment,
    start: &Configuration,
    goal: &Configuration,
    rng: &mut Rng,
) -> Result<PlanResult> {
    match ll_build(params, cr, env, rng, Some((start, goal)), &mut ())? {
        LlOutput::Path(r) => Ok(r),
        LlOutput::Roadmap(..) => Err(Error::InvalidParams("llp_plan needs LLP mode".into())),
    }
}

/// Roadmap build (LL-RM mode).
pub fn llrm_build(
    params: &BuildParams,
    cr: &[Configuration],
    env: &Environment,
    rng: &mut Rng,
) -> Result<(Roadmap, BuildReport)> {
    match ll_build(params, cr, env, rng, None, &mut ())? {
        LlOutput::Roadmap(rm, report) => Ok((rm, report)),
        LlOutput::Path(_) => Err(Error::InvalidParams("llrm_build needs LL-RM mode".into())),
    }
}

/// Answers a query on an existing roadmap. Start and goal subgraphs are appended and linked
/// with the same loop as the build; everything added during a solved query stays in the
/// roadmap. After a failure, graphs grown purely from this query are removed again.
pub fn llrm_plan(
    start: &Configuration,
    goal: &Configuration,
    rm: &mut Roadmap,
    params: &BuildParams,
    env: &Environment,
    rng: &mut Rng,
    observer: &mut dyn PlannerObserver,
) -> Result<PlanResult> {
    let started = Instant::now();
    if !(params.resolution > 0.0 && params.step > params.resolution) {
        return Err(Error::InvalidParams("need step > resolution > 0".into()));
    }
    if !check_query(env, start, goal) {
        return Ok(PlanResult::failed(PlanStatus::InvalidQuery, PlanStats::default()));
    }
    let mut sampler = rng.fork();
    rm.compact();
    let watermark = rm.next_vertex_id();
    let mut steer = Steer::new(env, params.step, params.resolution);
    steer.next_id = watermark;
    rm.add_graph(start.clone(), VertexOrigin::Query, &mut steer);
    rm.add_graph(goal.clone(), VertexOrigin::Query, &mut steer);

    let mut stats = PlanStats::default();
    let outcome = grow_until_linked(
        rm,
        &mut sampler,
        &mut steer,
        &params.budget,
        started,
        &mut stats,
        observer,
    );
    rm.set_next_vertex_id(steer.next_id);
    stats.extend_calls = steer.extend_calls;
    stats.connect_calls = steer.connect_calls;
    let result = match outcome {
        Ok(_) => {
            rm.compact();
            let g = rm.graphs().next().expect("linked roadmap has one graph");
            let path = g.shortest_path(start, goal)?;
            stats.path_length = path_length(env, &path);
            stats.vertices = rm.vertex_total();
            stats.wall_time = started.elapsed();
            PlanResult {
                status: PlanStatus::Solved,
                path,
                stats,
            }
        }
        Err(status) => {
            rm.drop_graphs_newer_than(watermark);
            stats.vertices = rm.vertex_total();
            stats.wall_time = started.elapsed();
            PlanResult::failed(status, stats)
        }
    };
    Ok(result)
}
