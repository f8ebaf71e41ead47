use super::estimate::{estimate_mu, smooth, CriticalityGrid, MotionPlanSet};
use super::grid::{GridSpec, DEFAULT_GRID_SIZE};
use super::mask::{binarize, CriticalMask};
use crate::error::{Error, Result};
use crate::geometry::{Configuration, Environment, Polygon, Rng};
use crate::planner::Planner;

/// Default Gaussian smoothing width, in cells.
pub const DEFAULT_SIGMA: f64 = 2.0;
/// Default fraction of positive cells marked critical.
pub const DEFAULT_QUANTILE: f64 = 0.10;
const ENDPOINT_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingConfig {
    pub problem_count: usize,
    pub repetitions: usize,
    pub grid_width: usize,
    pub grid_height: usize,
    pub sigma: f64,
    pub quantile: f64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            problem_count: 50,
            repetitions: 3,
            grid_width: DEFAULT_GRID_SIZE,
            grid_height: DEFAULT_GRID_SIZE,
            sigma: DEFAULT_SIGMA,
            quantile: DEFAULT_QUANTILE,
        }
    }
}

/// Free/occupied raster of the workspace at grid resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyRaster {
    pub spec: GridSpec,
    pub occupied: Vec<bool>,
}

/// Marks every cell whose footprint overlaps an obstacle.
pub fn obstacle_raster(env: &Environment, spec: &GridSpec) -> OccupancyRaster {
    let occupied = (0..spec.cell_count())
        .map(|c| {
            let cell = Polygon::rect(&spec.cell_rect(c));
            env.obstacle_polygons().iter().any(|o| o.intersects(&cell))
        })
        .collect();
    OccupancyRaster { spec: *spec, occupied }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainingReport {
    pub attempted: usize,
    pub solved: usize,
    pub failed: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct TrainingData {
    pub plans: MotionPlanSet,
    /// Raw estimate.
    pub mu: CriticalityGrid,
    pub smoothed: CriticalityGrid,
    pub mask: CriticalMask,
    pub obstacles: OccupancyRaster,
    pub report: TrainingReport,
}

/// Collision-free configuration drawn uniformly by rejection.
pub fn sample_free(env: &Environment, rng: &mut Rng) -> Result<Configuration> {
    (0..ENDPOINT_ATTEMPTS)
        .map(|_| env.space().sample_uniform(rng))
        .find(|q| env.is_collision_free(q))
        .ok_or_else(|| Error::InvalidEnvironment("no collision-free configuration found".into()))
}

/// Random collision-free start/goal pairs.
pub fn sample_problems(env: &Environment, count: usize, rng: &mut Rng) -> Result<Vec<(Configuration, Configuration)>> {
    (0..count)
        .map(|_| Ok((sample_free(env, rng)?, sample_free(env, rng)?)))
        .collect()
}

/// Solves `problems` with `planner`, one forked stream per problem; failures are skipped.
pub fn solve_problems(
    env: &Environment,
    problems: &[(Configuration, Configuration)],
    planner: &dyn Planner,
    rng: &mut Rng,
    set: &mut MotionPlanSet,
) -> Result<usize> {
    let mut solved = 0;
    for (start, goal) in problems {
        let mut child = rng.fork();
        let r = planner.solve(env, start, goal, &mut child)?;
        if r.is_solved() {
            set.plans.push(r.path);
            set.problems.push((start.clone(), goal.clone()));
            solved += 1;
        } else {
            log::debug!("training query {start} -> {goal} failed: {}", r.status);
        }
    }
    Ok(solved)
}

/// Solves random problems repeatedly and turns the plans into a criticality grid and mask.
pub fn generate_training_data(
    env: &Environment,
    name: &str,
    cfg: &TrainingConfig,
    planner: &dyn Planner,
    rng: &mut Rng,
) -> Result<TrainingData> {
    if cfg.repetitions == 0 || cfg.problem_count == 0 {
        return Err(Error::NoData("need at least one repetition and one problem".into()));
    }
    let spec = GridSpec::new(cfg.grid_width, cfg.grid_height, *env.workspace())?;
    let mut plans = MotionPlanSet::new(name, Vec::new());
    let mut report = TrainingReport::default();
    for rep in 0..cfg.repetitions {
        let problems = sample_problems(env, cfg.problem_count, rng)?;
        let solved = solve_problems(env, &problems, planner, rng, &mut plans)?;
        report.attempted += problems.len();
        report.solved += solved;
        report.failed += problems.len() - solved;
        if solved * 2 < cfg.problem_count {
            let w = format!(
                "repetition {rep}: only {solved} of {} problems solved",
                cfg.problem_count
            );
            log::warn!("{w}");
            report.warnings.push(w);
        }
    }
    if plans.is_empty() {
        return Err(Error::NoData("no training problem was solved".into()));
    }
    let mu = estimate_mu(&plans, &spec)?;
    let smoothed = smooth(&mu, cfg.sigma)?;
    let mask = binarize(&smoothed, cfg.quantile)?;
    Ok(TrainingData {
        plans,
        mu,
        smoothed,
        mask,
        obstacles: obstacle_raster(env, &spec),
        report,
    })
}
