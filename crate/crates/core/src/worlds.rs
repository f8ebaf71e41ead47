//! Standard benchmark worlds with fixed start/goal pairs.

use std::f64::consts::FRAC_PI_2;

use crate::geometry::{Aabb, Configuration, Environment, Obstacle, Robot, Vec2};

/// An environment with its fixed benchmark query.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub env: Environment,
    pub start: Configuration,
    pub goal: Configuration,
}

/// Half extents of the default rectangular robot footprint.
pub const ROBOT_HALF_EXTENTS: (f64, f64) = (0.25, 0.15);
/// Corridor width as a multiple of the robot's bounding radius.
pub const CORRIDOR_FACTOR: f64 = 2.2;

fn square(side: f64) -> Aabb {
    Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(side, side))
}

/// Radius of the disc robot used in the corridor worlds.
pub const DISC_RADIUS: f64 = 0.25;

fn robot() -> Robot {
    Robot::rectangle(ROBOT_HALF_EXTENTS.0, ROBOT_HALF_EXTENTS.1)
}

fn disc() -> Robot {
    Robot::Disc { radius: DISC_RADIUS }
}

fn corridor_width(robot: &Robot) -> f64 {
    CORRIDOR_FACTOR * robot.bounding_radius()
}

fn q(v: &[f64]) -> Configuration {
    Configuration::new(v.to_vec())
}

/// Vertical wall from `x0` to `x1` spanning the workspace height except for a gap of `gap`
/// centered at `gap_y`.
fn wall_with_gap(x0: f64, x1: f64, height: f64, gap_y: f64, gap: f64, name: &str) -> Vec<Obstacle> {
    vec![
        Obstacle::rect((x0, 0.0), (x1, gap_y - gap / 2.0)).named(&format!("{name}-lower")),
        Obstacle::rect((x0, gap_y + gap / 2.0), (x1, height)).named(&format!("{name}-upper")),
    ]
}

/// Empty 10 m × 10 m workspace; start and goal 8 m apart.
pub fn open_world() -> Scenario {
    let env = Environment::new(square(10.0), vec![], robot()).expect("valid world");
    Scenario {
        name: "open".into(),
        env,
        start: q(&[1.0, 5.0, 0.0]),
        goal: q(&[9.0, 5.0, FRAC_PI_2]),
    }
}

/// Length of the corridor in [`two_room_corridor`].
pub const CORRIDOR_LENGTH: f64 = 6.0;

/// Two 5 m × 10 m rooms joined by a long corridor of width 2.2× the robot's bounding radius.
pub fn two_room_corridor() -> Scenario {
    two_room_with(CORRIDOR_LENGTH)
}

/// [`two_room_corridor`] with a chosen corridor length.
pub fn two_room_with(length: f64) -> Scenario {
    let robot = disc();
    let w = corridor_width(&robot);
    let room = 5.0;
    let ws = Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(2.0 * room + length, 10.0));
    let env = Environment::new(ws, wall_with_gap(room, room + length, 10.0, 5.0, w, "divider"), robot)
        .and_then(|e| e.with_min_corridor_width(Some(w)))
        .expect("valid world");
    Scenario {
        name: "two-room".into(),
        env,
        start: q(&[1.5, 2.0]),
        goal: q(&[2.0 * room + length - 1.5, 8.0]),
    }
}

/// Four chambers in a row separated by three walls, each with one narrow corridor at
/// alternating heights.
pub fn three_corridor() -> Scenario {
    let robot = disc();
    let w = corridor_width(&robot);
    let mut obstacles = Vec::new();
    for (i, (x, gap_y)) in [(3.0, 8.5), (6.5, 1.5), (10.0, 8.5)].into_iter().enumerate() {
        obstacles.extend(wall_with_gap(x, x + 1.0, 10.0, gap_y, w, &format!("wall{i}")));
    }
    let ws = Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(14.0, 10.0));
    let env = Environment::new(ws, obstacles, robot)
        .and_then(|e| e.with_min_corridor_width(Some(w)))
        .expect("valid world");
    Scenario {
        name: "three-corridor".into(),
        env,
        start: q(&[1.0, 2.0]),
        goal: q(&[13.0, 2.0]),
    }
}

/// Two chambers separated by a solid wall; no solution exists.
pub fn sealed_chambers() -> Scenario {
    let env = Environment::new(
        square(10.0),
        vec![Obstacle::rect((4.5, 0.0), (5.5, 10.0)).named("seal")],
        robot(),
    )
    .expect("valid world");
    Scenario {
        name: "sealed".into(),
        env,
        start: q(&[2.0, 5.0, 0.0]),
        goal: q(&[8.0, 5.0, 0.0]),
    }
}

/// Scenario by name.
pub fn by_name(name: &str) -> Option<Scenario> {
    Some(match name {
        "open" => open_world(),
        "two-room" => two_room_corridor(),
        "three-corridor" => three_corridor(),
        "sealed" => sealed_chambers(),
        _ => return None,
    })
}
