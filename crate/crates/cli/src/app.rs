//! `llplan` subcommands.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{ArgAction, Args, Parser, Subcommand};
use llplan::criticality::{generate_training_data, CriticalMask, CriticalityGrid, GridSpec, TrainingConfig};
use llplan::geometry::Vec2;
use llplan::io::{
    read_grid_pgm, read_mask_pgm, read_path_csv, read_roadmap, write_grid_pgm, write_mask_pgm, write_path_csv,
    write_plans_csv, write_raster_pgm, write_roadmap, GridMeta, Pgm,
};
use llplan::planner::{llrm_build, llrm_plan, Budget, BuildParams, PlanResult, PlanStatus};
use llplan::planners::{critical_count, uniform_count, RrtConnectPlanner};
use llplan::{Configuration, Rng};

use crate::bench::{run_benchmark, write_outputs, BenchmarkConfig, PlannerKind};
use crate::envfile::{environment_to_string, load_environment, LoadedEnv};
use crate::svg::{render_svg, Overlays};
use crate::{read_file, write_file, CliError};

#[derive(Debug, Parser)]
#[command(
    name = "llplan",
    version,
    about = "Learn-and-Link motion planning: critical regions, planners, benchmarks"
)]
pub struct Cli {
    /// Random seed (benchmarks use seed + trial index).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Stop each planning run after this many samples.
    #[arg(long, global = true)]
    pub sample_cap: Option<u64>,
    /// Stop each planning run after this many seconds.
    #[arg(long, global = true)]
    pub time_limit: Option<f64>,
    /// Output file or directory (see each subcommand).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve random problems, estimate criticality and write grid, mask and raster images.
    GenData(GenDataArgs),
    /// Answer one query with any planner and write the path as CSV.
    Plan(PlanArgs),
    /// Build a Learn-and-Link roadmap and save it.
    BuildRm(BuildRmArgs),
    /// Answer a query on a saved roadmap.
    QueryRm(QueryRmArgs),
    /// Run seeded trials of several planners on the environment's fixed query.
    Bench(BenchArgs),
    /// Draw the environment with optional overlays as SVG.
    Render(RenderArgs),
    /// Write one of the built-in benchmark worlds as an environment file.
    World(WorldArgs),
}

#[derive(Debug, Args)]
pub struct GenDataArgs {
    #[arg(long)]
    pub env: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub problems: usize,
    #[arg(long, default_value_t = 3)]
    pub repetitions: usize,
    /// Grid cells per side.
    #[arg(long, default_value_t = 224)]
    pub grid: usize,
    /// Smoothing width in cells.
    #[arg(long, default_value_t = llplan::criticality::DEFAULT_SIGMA)]
    pub sigma: f64,
    /// Fraction of positive cells marked critical.
    #[arg(long, default_value_t = llplan::criticality::DEFAULT_QUANTILE)]
    pub quantile: f64,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// Start configuration, comma separated (defaults to the environment's problem).
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub goal: Option<String>,
}

#[derive(Debug, Args)]
pub struct SeedingArgs {
    /// Critical-region mask (PGM).
    #[arg(long)]
    pub cr: Option<PathBuf>,
    /// Share of mask cells used as seeds.
    #[arg(long, default_value_t = 0.05)]
    pub cr_fraction: f64,
    /// Roadmap build time in seconds (PRM, LL-RM).
    #[arg(long, default_value_t = 1.0)]
    pub build_time: f64,
    /// Build sample cap instead of a build time (reproducible).
    #[arg(long)]
    pub build_samples: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// rrt, rrt-connect, prm, llp or ll-rm.
    #[arg(long)]
    pub planner: String,
    #[arg(long)]
    pub env: PathBuf,
    #[command(flatten)]
    pub query: QueryArgs,
    #[command(flatten)]
    pub seeding: SeedingArgs,
}

#[derive(Debug, Args)]
pub struct BuildRmArgs {
    #[arg(long)]
    pub env: PathBuf,
    #[arg(long)]
    pub cr: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    pub cr_fraction: f64,
    /// Uniform seeds (defaults to a tenth of the critical seeds).
    #[arg(long)]
    pub uniform: Option<usize>,
}

#[derive(Debug, Args)]
pub struct QueryRmArgs {
    #[arg(long)]
    pub env: PathBuf,
    #[arg(long)]
    pub roadmap: PathBuf,
    #[command(flatten)]
    pub query: QueryArgs,
    /// Write the roadmap, including this query's additions, here.
    #[arg(long)]
    pub save: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub env: PathBuf,
    /// Comma-separated planner names.
    #[arg(long, default_value = "rrt,rrt-connect,prm,llp,ll-rm")]
    pub planners: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[command(flatten)]
    pub query: QueryArgs,
    #[command(flatten)]
    pub seeding: SeedingArgs,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub env: PathBuf,
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Criticality grid PGM; its metadata is read from the same path with a .json extension.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    #[arg(long)]
    pub roadmap: Option<PathBuf>,
    /// Path CSV; may be repeated.
    #[arg(long)]
    pub path: Vec<PathBuf>,
    /// Mark the environment's start and goal.
    #[arg(long)]
    pub problem: bool,
}

#[derive(Debug, Args)]
pub struct WorldArgs {
    /// open, two-room, three-corridor or sealed.
    pub name: String,
}

/// Parses `argv` and runs the command, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).try_init();
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::GenData(a) => gen_data(cli, a),
        Command::Plan(a) => plan(cli, a),
        Command::BuildRm(a) => build_rm(cli, a),
        Command::QueryRm(a) => query_rm(cli, a),
        Command::Bench(a) => bench(cli, a),
        Command::Render(a) => render(cli, a),
        Command::World(a) => world(cli, a),
    }
}

impl Cli {
    /// Budget from the global flags, or a time limit of `default_secs`.
    fn budget(&self, default_secs: f64) -> Result<Budget, CliError> {
        if self.sample_cap == Some(0) {
            return Err(CliError::Usage("--sample-cap must be positive".into()));
        }
        let time = match self.time_limit {
            Some(t) if !(t > 0.0 && t.is_finite()) => {
                return Err(CliError::Usage(
                    "--time-limit must be a positive number of seconds".into(),
                ))
            }
            Some(t) => Some(Duration::from_secs_f64(t)),
            None if self.sample_cap.is_none() => Some(Duration::from_secs_f64(default_secs)),
            None => None,
        };
        Ok(Budget {
            sample_cap: self.sample_cap,
            time_limit: time,
        })
    }

    fn out_dir(&self) -> Result<&Path, CliError> {
        self.out
            .as_deref()
            .ok_or_else(|| CliError::Usage("this command needs --out <DIR>".into()))
    }

    /// Writes to `--out` when given, else to stdout.
    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(p) => write_file(p, text),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string())),
        }
    }
}

impl SeedingArgs {
    fn build_budget(&self) -> Result<Budget, CliError> {
        match self.build_samples {
            Some(0) => Err(CliError::Usage("--build-samples must be positive".into())),
            Some(n) => Ok(Budget::samples(n)),
            None if self.build_time > 0.0 && self.build_time.is_finite() => {
                Ok(Budget::time(Duration::from_secs_f64(self.build_time)))
            }
            None => Err(CliError::Usage(
                "--build-time must be a positive number of seconds".into(),
            )),
        }
    }
}

fn parse_config(text: &str, loaded: &LoadedEnv, what: &str) -> Result<Configuration, CliError> {
    let values = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("--{what}: expected comma-separated numbers, got '{text}'")))?;
    loaded
        .env
        .space()
        .config(values)
        .map_err(|e| CliError::Usage(format!("--{what}: {e}")))
}

fn query(args: &QueryArgs, loaded: &LoadedEnv) -> Result<(Configuration, Configuration), CliError> {
    let pick = |flag: &Option<String>, what: &str, fallback: Option<&Configuration>| match flag {
        Some(t) => parse_config(t, loaded, what),
        None => fallback
            .cloned()
            .ok_or_else(|| CliError::Usage(format!("--{what} is required (the environment has no [problem])"))),
    };
    let problem = loaded.problem.as_ref();
    Ok((
        pick(&args.start, "start", problem.map(|p| &p.0))?,
        pick(&args.goal, "goal", problem.map(|p| &p.1))?,
    ))
}

/// Mask images cover the workspace; the grid size comes from the image.
pub fn load_mask(path: &Path, loaded: &LoadedEnv) -> Result<CriticalMask, CliError> {
    let text = read_file(path)?;
    let pgm = Pgm::parse(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    let spec = GridSpec::new(pgm.width, pgm.height, *loaded.env.workspace())?;
    Ok(read_mask_pgm(&text, &spec)?)
}

fn load_grid(path: &Path) -> Result<CriticalityGrid, CliError> {
    let meta_path = path.with_extension("json");
    let meta: GridMeta = serde_json::from_str(&read_file(&meta_path)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", meta_path.display())))?;
    Ok(read_grid_pgm(&read_file(path)?, &meta)?)
}

fn report_result(r: &PlanResult, what: &str) -> Result<(), CliError> {
    match r.status {
        PlanStatus::Solved => {
            log::info!(
                "{what}: solved with {} samples, length {:.3}, {:.3} s",
                r.stats.samples,
                r.stats.path_length,
                (r.stats.wall_time + r.stats.build_time).as_secs_f64()
            );
            Ok(())
        }
        PlanStatus::InvalidQuery => Err(CliError::Invalid(format!(
            "{what}: start or goal is outside the space or in collision"
        ))),
        s => Err(CliError::PlanningFailed(format!(
            "{what}: no path found ({}, {} samples)",
            s.as_str(),
            r.stats.samples
        ))),
    }
}

fn gen_data(cli: &Cli, a: &GenDataArgs) -> Result<(), CliError> {
    let dir = cli.out_dir()?;
    let loaded = load_environment(&a.env)?;
    let cfg = TrainingConfig {
        problem_count: a.problems,
        repetitions: a.repetitions,
        grid_width: a.grid,
        grid_height: a.grid,
        sigma: a.sigma,
        quantile: a.quantile,
    };
    let planner = RrtConnectPlanner {
        budget: cli.budget(10.0)?,
    };
    let name = loaded.name.clone().unwrap_or_else(|| a.env.display().to_string());
    let data = generate_training_data(&loaded.env, &name, &cfg, &planner, &mut Rng::new(cli.seed))?;
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    write_file(&dir.join("plans.csv"), &write_plans_csv(&data.plans)?)?;
    for (stem, grid) in [("mu", &data.mu), ("smoothed", &data.smoothed)] {
        let (pgm, meta) = write_grid_pgm(grid);
        write_file(&dir.join(format!("{stem}.pgm")), &pgm)?;
        write_file(
            &dir.join(format!("{stem}.json")),
            &(serde_json::to_string_pretty(&meta).expect("json") + "\n"),
        )?;
    }
    write_file(&dir.join("mask.pgm"), &write_mask_pgm(&data.mask))?;
    write_file(&dir.join("obstacles.pgm"), &write_raster_pgm(&data.obstacles))?;
    let report = serde_json::json!({
        "attempted": data.report.attempted,
        "solved": data.report.solved,
        "failed": data.report.failed,
        "warnings": data.report.warnings,
        "mask_cells": data.mask.count(),
        "seed": cli.seed,
    });
    write_file(
        &dir.join("report.json"),
        &(serde_json::to_string_pretty(&report).expect("json") + "\n"),
    )?;
    for w in &data.report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn plan(cli: &Cli, a: &PlanArgs) -> Result<(), CliError> {
    let kind: PlannerKind = a.planner.parse()?;
    if kind.needs_mask() && a.seeding.cr.is_none() {
        return Err(CliError::Usage(format!(
            "planner '{}' needs --cr <MASK.pgm>",
            kind.as_str()
        )));
    }
    let loaded = load_environment(&a.env)?;
    let (start, goal) = query(&a.query, &loaded)?;
    let mask = a.seeding.cr.as_deref().map(|p| load_mask(p, &loaded)).transpose()?;
    let planner = kind.build(
        cli.budget(60.0)?,
        a.seeding.build_budget()?,
        mask.as_ref(),
        a.seeding.cr_fraction,
    )?;
    let r = planner.solve(&loaded.env, &start, &goal, &mut Rng::new(cli.seed))?;
    report_result(&r, kind.as_str())?;
    cli.emit(&write_path_csv(&r.path)?)
}

fn build_rm(cli: &Cli, a: &BuildRmArgs) -> Result<(), CliError> {
    let out = cli
        .out
        .as_deref()
        .ok_or_else(|| CliError::Usage("build-rm needs --out <ROADMAP>".into()))?;
    let loaded = load_environment(&a.env)?;
    let mask = load_mask(&a.cr, &loaded)?;
    let mut rng = Rng::new(cli.seed);
    let seeds = llplan::criticality::critical_seeds(&mask, critical_count(&mask, a.cr_fraction), &loaded.env, &mut rng);
    let n = seeds.len();
    let params = BuildParams::llrm(&loaded.env, n, a.uniform.unwrap_or(uniform_count(n)), cli.budget(1.0)?);
    let (rm, report) = llrm_build(&params, &seeds, &loaded.env, &mut rng)?;
    write_file(out, &write_roadmap(&rm))?;
    if report.status != PlanStatus::Solved {
        eprintln!(
            "warning: roadmap not fully linked ({} graphs remain after {} samples)",
            rm.live_count(),
            report.stats.samples
        );
    }
    Ok(())
}

fn query_rm(cli: &Cli, a: &QueryRmArgs) -> Result<(), CliError> {
    let loaded = load_environment(&a.env)?;
    let (start, goal) = query(&a.query, &loaded)?;
    let mut rm = read_roadmap(&read_file(&a.roadmap)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", a.roadmap.display())))?;
    let params = BuildParams::llrm(&loaded.env, 0, 0, cli.budget(60.0)?);
    let r = llrm_plan(
        &start,
        &goal,
        &mut rm,
        &params,
        &loaded.env,
        &mut Rng::new(cli.seed),
        &mut (),
    )?;
    if let Some(p) = &a.save {
        write_file(p, &write_roadmap(&rm))?;
    }
    report_result(&r, "ll-rm query")?;
    cli.emit(&write_path_csv(&r.path)?)
}

fn bench(cli: &Cli, a: &BenchArgs) -> Result<(), CliError> {
    let dir = cli.out_dir()?;
    let planners = a
        .planners
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<Vec<PlannerKind>, _>>()?;
    if planners.iter().any(|k| k.needs_mask()) && a.seeding.cr.is_none() {
        return Err(CliError::Usage("llp and ll-rm need --cr <MASK.pgm>".into()));
    }
    let loaded = load_environment(&a.env)?;
    let (start, goal) = query(&a.query, &loaded)?;
    let mask = a.seeding.cr.as_deref().map(|p| load_mask(p, &loaded)).transpose()?;
    let cfg = BenchmarkConfig {
        planners,
        trials: a.trials,
        budget: cli.budget(60.0)?,
        build_budget: a.seeding.build_budget()?,
        cr_fraction: a.seeding.cr_fraction,
        base_seed: cli.seed,
    };
    let report = run_benchmark(&cfg, &loaded.env, &start, &goal, mask.as_ref(), &mut |r| {
        log::info!("{} trial {}: {}", r.planner, r.trial, r.status.as_str());
    })?;
    write_outputs(&report, &cfg, dir)?;
    for s in &report.summaries {
        eprintln!(
            "{:12} solved {:>4}/{:<4} median time {}",
            s.planner,
            s.solved,
            s.trials,
            s.median_time
                .map(|d| format!("{:.4} s", d.as_secs_f64()))
                .unwrap_or_else(|| "-".into())
        );
    }
    Ok(())
}

fn render(cli: &Cli, a: &RenderArgs) -> Result<(), CliError> {
    let loaded = load_environment(&a.env)?;
    let mask = a.mask.as_deref().map(|p| load_mask(p, &loaded)).transpose()?;
    let grid = a.grid.as_deref().map(load_grid).transpose()?;
    let roadmap = match &a.roadmap {
        Some(p) => Some(read_roadmap(&read_file(p)?).map_err(|e| CliError::Invalid(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let paths = a
        .path
        .iter()
        .map(|p| read_path_csv(&read_file(p)?).map_err(|e| CliError::Invalid(format!("{}: {e}", p.display()))))
        .collect::<Result<Vec<_>, _>>()?;
    let points = match (&loaded.problem, a.problem) {
        (Some((s, g)), true) => vec![Vec2::new(s[0], s[1]), Vec2::new(g[0], g[1])],
        (None, true) => return Err(CliError::Usage("--problem: the environment has no [problem]".into())),
        _ => Vec::new(),
    };
    let overlays = Overlays {
        grid: grid.as_ref(),
        mask: mask.as_ref(),
        roadmap: roadmap.as_ref(),
        paths: paths.iter().map(Vec::as_slice).collect(),
        points,
    };
    cli.emit(&render_svg(&loaded.env, &overlays))
}

fn world(cli: &Cli, a: &WorldArgs) -> Result<(), CliError> {
    let s = llplan::worlds::by_name(&a.name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown world '{}' (expected open, two-room, three-corridor or sealed)",
            a.name
        ))
    })?;
    let loaded = LoadedEnv {
        name: Some(s.name),
        env: s.env,
        problem: Some((s.start, s.goal)),
    };
    cli.emit(&environment_to_string(&loaded))
}
