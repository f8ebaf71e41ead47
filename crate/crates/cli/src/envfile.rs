//! Versioned TOML environment files.
//!
//! ```toml
//! schema_version = 1
//! name = "two-room"
//!
//! [units]
//! length = "m"
//! angle = "rad"
//!
//! [workspace]
//! min = [0.0, 0.0]
//! max = [16.0, 10.0]
//!
//! [robot]
//! kind = "disc"
//! radius = 0.25
//!
//! [problem]
//! start = [1.5, 2.0]
//! goal = [14.5, 8.0]
//!
//! [[obstacles]]
//! name = "divider-lower"
//! min = [5.0, 0.0]
//! max = [11.0, 4.725]
//! ```

use std::path::Path;

use llplan::geometry::{Aabb, ChainLink, Obstacle, Robot, Shape, Vec2};
use llplan::{Configuration, Environment};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Thinnest corridor in meters, used for the default edge resolution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_corridor_width: Option<f64>,
    pub units: Units,
    pub workspace: WorkspaceSpec,
    pub robot: RobotSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub obstacles: Vec<ObstacleSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    pub length: String,
    pub angle: String,
}

impl Default for Units {
    fn default() -> Self {
        Units {
            length: "m".into(),
            angle: "rad".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceSpec {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RobotSpec {
    Disc { radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    Chain { base: Vec<[f64; 2]>, links: Vec<LinkSpec> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSpec {
    pub length: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub start: Vec<f64>,
    pub goal: Vec<f64>,
}

/// Either `min`/`max` (axis-aligned box) or `vertices` (simple polygon).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 2]>>,
}

/// A parsed environment with its optional fixed query.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedEnv {
    pub name: Option<String>,
    pub env: Environment,
    pub problem: Option<(Configuration, Configuration)>,
}

fn v2(p: [f64; 2]) -> Vec2 {
    Vec2::new(p[0], p[1])
}

fn a2(p: Vec2) -> [f64; 2] {
    [p.x, p.y]
}

/// Line (1-based) of the `index`-th `[[obstacles]]` header, when written in that form.
fn obstacle_line(text: &str, index: usize) -> Option<usize> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| l.trim_start().starts_with("[[obstacles]]"))
        .nth(index)
        .map(|(i, _)| i + 1)
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

impl EnvFile {
    fn obstacle(&self, i: usize) -> Result<Obstacle, String> {
        let o = &self.obstacles[i];
        let shape = match (o.min, o.max, &o.vertices) {
            (Some(min), Some(max), None) => Shape::Rect(Aabb::new(v2(min), v2(max))),
            (None, None, Some(v)) => Shape::Polygon(v.iter().copied().map(v2).collect()),
            _ => return Err("needs either both 'min' and 'max' or 'vertices'".into()),
        };
        Ok(Obstacle {
            name: o.name.clone(),
            shape,
        })
    }

    fn robot(&self) -> Robot {
        match &self.robot {
            RobotSpec::Disc { radius } => Robot::Disc { radius: *radius },
            RobotSpec::Polygon { vertices } => Robot::Polygon {
                vertices: vertices.iter().copied().map(v2).collect(),
            },
            RobotSpec::Chain { base, links } => Robot::Chain {
                base: base.iter().copied().map(v2).collect(),
                links: links
                    .iter()
                    .map(|l| ChainLink {
                        length: l.length,
                        width: l.width,
                    })
                    .collect(),
            },
        }
    }

    /// Builds and validates the environment; `text` is used for line numbers in diagnostics.
    pub fn build(&self, text: &str) -> Result<LoadedEnv, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.units.length != "m" || self.units.angle != "rad" {
            return Err(invalid(format!(
                "units must be length = \"m\" and angle = \"rad\", got \"{}\" and \"{}\"",
                self.units.length, self.units.angle
            )));
        }
        let mut obstacles = Vec::with_capacity(self.obstacles.len());
        for i in 0..self.obstacles.len() {
            let o = self.obstacle(i).map_err(|e| {
                let at = obstacle_line(text, i)
                    .map(|l| format!(" (line {l})"))
                    .unwrap_or_default();
                invalid(format!("obstacle {i}{at}: {e}"))
            })?;
            obstacles.push(o);
        }
        let ws = Aabb::new(v2(self.workspace.min), v2(self.workspace.max));
        let env = Environment::new(ws, obstacles, self.robot())
            .and_then(|e| e.with_min_corridor_width(self.min_corridor_width))
            .map_err(|e| {
                let msg = e.to_string();
                let line = (0..self.obstacles.len())
                    .find(|&i| msg.contains(&format!("obstacle {i} ")))
                    .and_then(|i| obstacle_line(text, i));
                match line {
                    Some(l) => invalid(format!("line {l}: {msg}")),
                    None => invalid(msg),
                }
            })?;
        let problem = match &self.problem {
            None => None,
            Some(p) => {
                let parse = |v: &[f64], what: &str| {
                    env.space()
                        .config(v.to_vec())
                        .map_err(|e| invalid(format!("problem {what}: {e}")))
                };
                Some((parse(&p.start, "start")?, parse(&p.goal, "goal")?))
            }
        };
        Ok(LoadedEnv {
            name: self.name.clone(),
            env,
            problem,
        })
    }

    pub fn from_env(env: &Environment, name: Option<&str>, problem: Option<(&Configuration, &Configuration)>) -> Self {
        let robot = match env.robot() {
            Robot::Disc { radius } => RobotSpec::Disc { radius: *radius },
            Robot::Polygon { vertices } => RobotSpec::Polygon {
                vertices: vertices.iter().copied().map(a2).collect(),
            },
            Robot::Chain { base, links } => RobotSpec::Chain {
                base: base.iter().copied().map(a2).collect(),
                links: links
                    .iter()
                    .map(|l| LinkSpec {
                        length: l.length,
                        width: l.width,
                    })
                    .collect(),
            },
        };
        let obstacles = env
            .obstacles()
            .iter()
            .map(|o| {
                let (min, max, vertices) = match &o.shape {
                    Shape::Rect(b) => (Some(a2(b.min)), Some(a2(b.max)), None),
                    Shape::Polygon(v) => (None, None, Some(v.iter().copied().map(a2).collect())),
                };
                ObstacleSpec {
                    name: o.name.clone(),
                    min,
                    max,
                    vertices,
                }
            })
            .collect();
        EnvFile {
            schema_version: SCHEMA_VERSION,
            name: name.map(str::to_string),
            min_corridor_width: env.min_corridor_width(),
            units: Units::default(),
            workspace: WorkspaceSpec {
                min: a2(env.workspace().min),
                max: a2(env.workspace().max),
            },
            robot,
            problem: problem.map(|(s, g)| ProblemSpec {
                start: s.as_slice().to_vec(),
                goal: g.as_slice().to_vec(),
            }),
            obstacles,
        }
    }
}

pub fn parse_environment(text: &str) -> Result<LoadedEnv, CliError> {
    let file: EnvFile = toml::from_str(text).map_err(|e| invalid(format!("environment file: {e}")))?;
    file.build(text)
}

pub fn load_environment(path: &Path) -> Result<LoadedEnv, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_environment(&text).map_err(|e| match e {
        CliError::Invalid(m) => CliError::Invalid(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn environment_to_string(loaded: &LoadedEnv) -> String {
    let file = EnvFile::from_env(
        &loaded.env,
        loaded.name.as_deref(),
        loaded.problem.as_ref().map(|(s, g)| (s, g)),
    );
    toml::to_string(&file).expect("environment files always serialize")
}
