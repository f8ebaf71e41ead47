//! Seeded benchmark runs: one fixed query, many trials per planner.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use llplan::criticality::CriticalMask;
use llplan::planner::{validate_path, Budget, PlanStatus, Planner};
use llplan::planners::{LlRmPlanner, LlpPlanner, PrmPlanner, RrtConnectPlanner, RrtPlanner};
use llplan::{Configuration, Environment, Rng};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlannerKind {
    Rrt,
    RrtConnect,
    Prm,
    Llp,
    LlRm,
}

impl PlannerKind {
    pub const ALL: [PlannerKind; 5] = [
        PlannerKind::Rrt,
        PlannerKind::RrtConnect,
        PlannerKind::Prm,
        PlannerKind::Llp,
        PlannerKind::LlRm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PlannerKind::Rrt => "rrt",
            PlannerKind::RrtConnect => "rrt-connect",
            PlannerKind::Prm => "prm",
            PlannerKind::Llp => "llp",
            PlannerKind::LlRm => "ll-rm",
        }
    }

    pub fn needs_mask(self) -> bool {
        matches!(self, PlannerKind::Llp | PlannerKind::LlRm)
    }

    /// Planner instance for one configuration.
    pub fn build(
        self,
        budget: Budget,
        build_budget: Budget,
        mask: Option<&CriticalMask>,
        cr_fraction: f64,
    ) -> Result<Box<dyn Planner>, CliError> {
        let mask = || {
            mask.cloned()
                .ok_or_else(|| CliError::Usage(format!("planner '{}' needs a critical-region mask", self.as_str())))
        };
        Ok(match self {
            PlannerKind::Rrt => Box::new(RrtPlanner { budget }),
            PlannerKind::RrtConnect => Box::new(RrtConnectPlanner { budget }),
            PlannerKind::Prm => Box::new(PrmPlanner::new(build_budget)),
            PlannerKind::Llp => Box::new(LlpPlanner {
                mask: mask()?,
                cr_fraction,
                budget,
            }),
            PlannerKind::LlRm => Box::new(LlRmPlanner {
                mask: mask()?,
                cr_fraction,
                build_budget,
                budget,
            }),
        })
    }
}

impl FromStr for PlannerKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        PlannerKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown planner '{s}' (expected rrt, rrt-connect, prm, llp or ll-rm)"
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkConfig {
    pub planners: Vec<PlannerKind>,
    pub trials: usize,
    /// Per-trial planning budget.
    pub budget: Budget,
    /// Roadmap construction budget for PRM and LL-RM.
    pub build_budget: Budget,
    /// Share of mask cells used as critical seeds.
    pub cr_fraction: f64,
    pub base_seed: u64,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            planners: PlannerKind::ALL.to_vec(),
            trials: 100,
            budget: Budget::time(Duration::from_secs(60)),
            build_budget: Budget::time(Duration::from_secs(1)),
            cr_fraction: 0.05,
            base_seed: 0,
        }
    }
}

fn check_budget(b: &Budget, what: &str) -> Result<(), CliError> {
    if b.sample_cap.is_none() && b.time_limit.is_none() {
        return Err(CliError::Invalid(format!("{what} needs a sample cap or a time limit")));
    }
    if b.sample_cap == Some(0) || b.time_limit == Some(Duration::ZERO) {
        return Err(CliError::Invalid(format!("{what} must be positive")));
    }
    Ok(())
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(CliError::Invalid("trials must be at least 1".into()));
        }
        if self.planners.is_empty() {
            return Err(CliError::Invalid("no planners selected".into()));
        }
        check_budget(&self.budget, "planning budget")?;
        check_budget(&self.build_budget, "build budget")?;
        if !(self.cr_fraction > 0.0 && self.cr_fraction <= 1.0) {
            return Err(CliError::Invalid(format!(
                "CR fraction {} must lie in (0, 1]",
                self.cr_fraction
            )));
        }
        Ok(())
    }

    /// Sample-cap budgets only, so every output except timings is reproducible.
    pub fn is_deterministic(&self) -> bool {
        self.budget.time_limit.is_none() && self.build_budget.time_limit.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub planner: String,
    pub trial: usize,
    pub seed: u64,
    pub status: PlanStatus,
    /// Build plus query time.
    pub wall_time: Duration,
    pub build_time: Duration,
    pub samples: u64,
    pub path_length: f64,
    pub vertices: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerSummary {
    pub planner: String,
    pub trials: usize,
    pub solved: usize,
    pub success_rate: f64,
    pub median_samples: Option<f64>,
    pub mean_samples: Option<f64>,
    pub median_path_length: Option<f64>,
    pub median_time: Option<Duration>,
    pub mean_time: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkReport {
    pub records: Vec<TrialRecord>,
    pub summaries: Vec<PlannerSummary>,
}

impl BenchmarkReport {
    pub fn summary(&self, planner: &str) -> Option<&PlannerSummary> {
        self.summaries.iter().find(|s| s.planner == planner)
    }
}

/// Median with the two middle values averaged for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    })
}

pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

pub fn summarize(planner: &str, records: &[TrialRecord]) -> PlannerSummary {
    let solved: Vec<&TrialRecord> = records.iter().filter(|r| r.status == PlanStatus::Solved).collect();
    let samples: Vec<f64> = solved.iter().map(|r| r.samples as f64).collect();
    let lengths: Vec<f64> = solved.iter().map(|r| r.path_length).collect();
    let times: Vec<f64> = solved.iter().map(|r| r.wall_time.as_secs_f64()).collect();
    PlannerSummary {
        planner: planner.to_string(),
        trials: records.len(),
        solved: solved.len(),
        success_rate: solved.len() as f64 / records.len().max(1) as f64,
        median_samples: median(&samples),
        mean_samples: mean(&samples),
        median_path_length: median(&lengths),
        median_time: median(&times).map(Duration::from_secs_f64),
        mean_time: mean(&times).map(Duration::from_secs_f64),
    }
}

/// Runs every planner on the fixed query for `cfg.trials` seeds (`base_seed + trial`, shared
/// across planners). Every solved path is re-validated; an invalid one aborts the run.
pub fn run_benchmark(
    cfg: &BenchmarkConfig,
    env: &Environment,
    start: &Configuration,
    goal: &Configuration,
    mask: Option<&CriticalMask>,
    progress: &mut dyn FnMut(&TrialRecord),
) -> Result<BenchmarkReport, CliError> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.planners.len() * cfg.trials);
    let mut summaries = Vec::new();
    let resolution = env.default_resolution();
    for &kind in &cfg.planners {
        let planner = kind.build(cfg.budget, cfg.build_budget, mask, cfg.cr_fraction)?;
        let first = records.len();
        for trial in 0..cfg.trials {
            let seed = cfg.base_seed.wrapping_add(trial as u64);
            let r = planner
                .solve(env, start, goal, &mut Rng::new(seed))
                .map_err(|e| CliError::Invalid(format!("{} trial {trial}: {e}", kind.as_str())))?;
            if r.is_solved() {
                validate_path(env, &r.path, start, goal, resolution).map_err(|e| {
                    CliError::InvalidPath(format!("{} trial {trial} (seed {seed}): {e}", kind.as_str()))
                })?;
            }
            let rec = TrialRecord {
                planner: kind.as_str().to_string(),
                trial,
                seed,
                status: r.status,
                wall_time: r.stats.wall_time + r.stats.build_time,
                build_time: r.stats.build_time,
                samples: r.stats.samples,
                path_length: if r.is_solved() { r.stats.path_length } else { 0.0 },
                vertices: r.stats.vertices,
            };
            progress(&rec);
            records.push(rec);
        }
        summaries.push(summarize(kind.as_str(), &records[first..]));
    }
    Ok(BenchmarkReport { records, summaries })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_text(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii csv")
}

/// `planner,trial,seed,status,samples,path_length,vertices`; contains no timing.
pub fn trials_csv(report: &BenchmarkReport) -> String {
    csv_text(
        &[
            "planner",
            "trial",
            "seed",
            "status",
            "samples",
            "path_length",
            "vertices",
        ],
        report.records.iter().map(|r| {
            vec![
                r.planner.clone(),
                r.trial.to_string(),
                r.seed.to_string(),
                r.status.as_str().to_string(),
                r.samples.to_string(),
                r.path_length.to_string(),
                r.vertices.to_string(),
            ]
        }),
    )
}

/// Per-planner counts and sample statistics over successes.
pub fn summary_csv(report: &BenchmarkReport) -> String {
    csv_text(
        &[
            "planner",
            "trials",
            "solved",
            "success_rate",
            "median_samples",
            "mean_samples",
            "median_path_length",
        ],
        report.summaries.iter().map(|s| {
            vec![
                s.planner.clone(),
                s.trials.to_string(),
                s.solved.to_string(),
                s.success_rate.to_string(),
                opt(s.median_samples),
                opt(s.mean_samples),
                opt(s.median_path_length),
            ]
        }),
    )
}

pub fn timings_csv(report: &BenchmarkReport) -> String {
    csv_text(
        &["planner", "trial", "seed", "status", "time_s", "build_time_s"],
        report.records.iter().map(|r| {
            vec![
                r.planner.clone(),
                r.trial.to_string(),
                r.seed.to_string(),
                r.status.as_str().to_string(),
                r.wall_time.as_secs_f64().to_string(),
                r.build_time.as_secs_f64().to_string(),
            ]
        }),
    )
}

pub fn timing_summary_csv(report: &BenchmarkReport) -> String {
    csv_text(
        &["planner", "solved", "median_time_s", "mean_time_s"],
        report.summaries.iter().map(|s| {
            vec![
                s.planner.clone(),
                s.solved.to_string(),
                opt(s.median_time.map(|d| d.as_secs_f64())),
                opt(s.mean_time.map(|d| d.as_secs_f64())),
            ]
        }),
    )
}

/// Cumulative solved fraction against time: one row per success, in time order.
pub fn curve_csv(report: &BenchmarkReport) -> String {
    let mut rows = Vec::new();
    for s in &report.summaries {
        let mut times: Vec<f64> = report
            .records
            .iter()
            .filter(|r| r.planner == s.planner && r.status == PlanStatus::Solved)
            .map(|r| r.wall_time.as_secs_f64())
            .collect();
        times.sort_by(f64::total_cmp);
        for (k, t) in times.iter().enumerate() {
            rows.push(vec![
                s.planner.clone(),
                t.to_string(),
                ((k + 1) as f64 / s.trials as f64).to_string(),
            ]);
        }
    }
    csv_text(&["planner", "time_s", "solved_fraction"], rows.into_iter())
}

/// Machine description stored next to timing data.
pub fn host_fingerprint() -> serde_json::Value {
    let cpus = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let cpu_model = std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|s| {
            s.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split(':').nth(1))
                .map(|m| m.trim().to_string())
        })
        .unwrap_or_else(|| "unknown".into());
    serde_json::json!({
        "os": std::env::consts::OS,
        "arch": std::env::consts::ARCH,
        "cpus": cpus,
        "cpu_model": cpu_model,
        "profile": if cfg!(debug_assertions) { "debug" } else { "release" },
        "llplan_version": env!("CARGO_PKG_VERSION"),
    })
}

/// Writes all benchmark artifacts into `dir`. The trial and summary tables carry no timing and
/// are byte-identical across runs in sample-cap mode; timing lives in separate files.
pub fn write_outputs(report: &BenchmarkReport, cfg: &BenchmarkConfig, dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let meta = serde_json::json!({
        "config": cfg,
        "deterministic": cfg.is_deterministic(),
        "host": host_fingerprint(),
    });
    let mut meta_text = serde_json::to_string_pretty(&meta).expect("json");
    let _ = writeln!(meta_text);
    for (name, text) in [
        ("trials.csv", trials_csv(report)),
        ("summary.csv", summary_csv(report)),
        ("timings.csv", timings_csv(report)),
        ("timing_summary.csv", timing_summary_csv(report)),
        ("curve.csv", curve_csv(report)),
        ("meta.json", meta_text),
    ] {
        crate::write_file(&dir.join(name), &text)?;
    }
    Ok(())
}
