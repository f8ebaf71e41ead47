use serde::{Deserialize, Serialize};

use super::shapes::{Aabb, Polygon, Vec2};
use super::space::{CSpace, Configuration, Dim};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub length: f64,
    pub width: f64,
}

/// Robot models. Polygon footprints and chain base footprints are in the body frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Robot {
    Disc { radius: f64 },
    Polygon { vertices: Vec<Vec2> },
    Chain { base: Vec<Vec2>, links: Vec<ChainLink> },
}

impl Robot {
    /// Axis-aligned rectangular footprint centered on the body origin.
    pub fn rectangle(half_x: f64, half_y: f64) -> Robot {
        Robot::Polygon {
            vertices: box_vertices(half_x, half_y),
        }
    }

    /// Configuration-space dimension for this robot.
    pub fn dof(&self) -> usize {
        match self {
            Robot::Disc { .. } => 2,
            Robot::Polygon { .. } => 3,
            Robot::Chain { links, .. } => 2 + links.len(),
        }
    }

    /// Radius of the smallest origin-centered disc covering the footprint (base only for chains).
    pub fn bounding_radius(&self) -> f64 {
        match self {
            Robot::Disc { radius } => *radius,
            Robot::Polygon { vertices } | Robot::Chain { base: vertices, .. } => {
                vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
            }
        }
    }

    /// Smallest feature size of the robot, used to pick the edge validation resolution.
    pub fn feature_size(&self) -> f64 {
        match self {
            Robot::Disc { radius } => *radius,
            Robot::Polygon { vertices } => inner_radius(vertices),
            Robot::Chain { base, links } => links.iter().map(|l| l.width / 2.0).fold(inner_radius(base), f64::min),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidEnvironment(m.to_string()));
        match self {
            Robot::Disc { radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return bad("disc radius must be positive");
                }
            }
            Robot::Polygon { vertices } => {
                if !Polygon::new(vertices.clone()).is_simple() {
                    return bad("robot footprint must be a simple polygon");
                }
            }
            Robot::Chain { base, links } => {
                if !Polygon::new(base.clone()).is_simple() {
                    return bad("chain base footprint must be a simple polygon");
                }
                if links.is_empty() {
                    return bad("chain needs at least one link");
                }
                if links.iter().any(|l| !(l.length > 0.0 && l.width > 0.0)) {
                    return bad("chain link lengths and widths must be positive");
                }
            }
        }
        Ok(())
    }
}

/// Counter-clockwise corners of an origin-centered box.
pub fn box_vertices(half_x: f64, half_y: f64) -> Vec<Vec2> {
    vec![
        Vec2::new(-half_x, -half_y),
        Vec2::new(half_x, -half_y),
        Vec2::new(half_x, half_y),
        Vec2::new(-half_x, half_y),
    ]
}

/// Distance from the body origin to the nearest footprint edge.
fn inner_radius(vertices: &[Vec2]) -> f64 {
    let p = Polygon::new(vertices.to_vec());
    p.edges()
        .map(|(a, b)| super::shapes::point_segment_distance(Vec2::new(0.0, 0.0), a, b))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    Rect(Aabb),
    Polygon(Vec<Vec2>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    pub name: Option<String>,
    pub shape: Shape,
}

impl Obstacle {
    pub fn rect(min: (f64, f64), max: (f64, f64)) -> Self {
        Obstacle {
            name: None,
            shape: Shape::Rect(Aabb::new(Vec2::new(min.0, min.1), Vec2::new(max.0, max.1))),
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn polygon(&self) -> Polygon {
        match &self.shape {
            Shape::Rect(b) => Polygon::rect(b),
            Shape::Polygon(v) => Polygon::new(v.clone()),
        }
    }

    fn label(&self, index: usize) -> String {
        match &self.name {
            Some(n) => format!("obstacle {index} ('{n}')"),
            None => format!("obstacle {index}"),
        }
    }
}

/// A planar workspace with static obstacles and one robot. Immutable once built.
#[derive(Debug, Clone)]
pub struct Environment {
    workspace: Aabb,
    obstacles: Vec<Obstacle>,
    robot: Robot,
    min_corridor_width: Option<f64>,
    space: CSpace,
    obstacle_polys: Vec<Polygon>,
    footprint: Option<Polygon>,
}

impl PartialEq for Environment {
    fn eq(&self, o: &Self) -> bool {
        self.workspace == o.workspace
            && self.obstacles == o.obstacles
            && self.robot == o.robot
            && self.min_corridor_width == o.min_corridor_width
            && self.space == o.space
    }
}

impl Environment {
    pub fn new(workspace: Aabb, obstacles: Vec<Obstacle>, robot: Robot) -> Result<Self> {
        if !(workspace.width() > 0.0 && workspace.height() > 0.0) {
            return Err(Error::InvalidEnvironment("workspace has no area".into()));
        }
        robot.validate()?;
        let mut obstacle_polys = Vec::with_capacity(obstacles.len());
        for (i, ob) in obstacles.iter().enumerate() {
            let poly = ob.polygon();
            if let Shape::Polygon(v) = &ob.shape {
                if v.len() < 3 || !poly.is_simple() {
                    return Err(Error::InvalidEnvironment(format!(
                        "{} is not a simple polygon",
                        ob.label(i)
                    )));
                }
            }
            if let Shape::Rect(b) = &ob.shape {
                if !(b.width() > 0.0 && b.height() > 0.0) {
                    return Err(Error::InvalidEnvironment(format!("{} has no area", ob.label(i))));
                }
            }
            if !workspace.contains(poly.bounds()) {
                return Err(Error::InvalidEnvironment(format!(
                    "{} lies outside the workspace",
                    ob.label(i)
                )));
            }
            obstacle_polys.push(poly);
        }
        let mut dims = vec![
            Dim::linear(workspace.min.x, workspace.max.x),
            Dim::linear(workspace.min.y, workspace.max.y),
        ];
        for _ in 2..robot.dof() {
            dims.push(Dim::angle());
        }
        let space = CSpace::new(dims)?;
        let footprint = match &robot {
            Robot::Polygon { vertices } | Robot::Chain { base: vertices, .. } => Some(Polygon::new(vertices.clone())),
            Robot::Disc { .. } => None,
        };
        Ok(Environment {
            workspace,
            obstacles,
            robot,
            min_corridor_width: None,
            space,
            obstacle_polys,
            footprint,
        })
    }

    /// Declares the thinnest corridor, which tightens the default validation resolution.
    pub fn with_min_corridor_width(mut self, width: Option<f64>) -> Result<Self> {
        if let Some(w) = width {
            if w.is_nan() || w <= 0.0 {
                return Err(Error::InvalidEnvironment("corridor width must be positive".into()));
            }
        }
        self.min_corridor_width = width;
        Ok(self)
    }

    /// Replaces the derived configuration space (e.g. to change metric weights).
    pub fn with_space(mut self, space: CSpace) -> Result<Self> {
        if space.dim_count() != self.robot.dof() {
            return Err(Error::DimensionMismatch {
                expected: self.robot.dof(),
                actual: space.dim_count(),
            });
        }
        self.space = space;
        Ok(self)
    }

    pub fn workspace(&self) -> &Aabb {
        &self.workspace
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    pub fn obstacle_polygons(&self) -> &[Polygon] {
        &self.obstacle_polys
    }

    pub fn robot(&self) -> &Robot {
        &self.robot
    }

    pub fn min_corridor_width(&self) -> Option<f64> {
        self.min_corridor_width
    }

    pub fn space(&self) -> &CSpace {
        &self.space
    }

    /// Default steering step: one twentieth of the workspace diagonal.
    pub fn default_step(&self) -> f64 {
        Vec2::new(self.workspace.width(), self.workspace.height()).norm() / 20.0
    }

    /// Default edge validation resolution: a quarter of the smallest robot or corridor feature.
    pub fn default_resolution(&self) -> f64 {
        let feature = self.robot.feature_size();
        0.25 * self.min_corridor_width.map_or(feature, |w| w.min(feature))
    }

    pub fn is_collision_free(&self, q: &Configuration) -> bool {
        debug_assert_eq!(q.len(), self.robot.dof());
        let (x, y) = q.base();
        let ws = &self.workspace;
        match &self.robot {
            Robot::Disc { radius } => {
                let r = *radius;
                if x - r < ws.min.x || x + r > ws.max.x || y - r < ws.min.y || y + r > ws.max.y {
                    return false;
                }
                let c = Vec2::new(x, y);
                !self.obstacle_polys.iter().any(|p| p.intersects_circle(c, r))
            }
            Robot::Polygon { .. } => {
                let body = self
                    .footprint
                    .as_ref()
                    .expect("polygon footprint")
                    .transformed(Vec2::new(x, y), q[2]);
                self.polygon_free(&body)
            }
            Robot::Chain { links, .. } => {
                let base = self
                    .footprint
                    .as_ref()
                    .expect("chain base")
                    .transformed(Vec2::new(x, y), 0.0);
                self.polygon_free(&base) && chain_links(links, q).iter().all(|l| self.polygon_free(l))
            }
        }
    }

    fn polygon_free(&self, p: &Polygon) -> bool {
        self.workspace.contains(p.bounds()) && !self.obstacle_polys.iter().any(|o| o.intersects(p))
    }

    /// Validates the straight segment `a`–`b` at spacing no larger than `resolution`, endpoints included.
    pub fn edge_collision_free(&self, a: &Configuration, b: &Configuration, resolution: f64) -> bool {
        debug_assert!(resolution > 0.0);
        // canonical direction keeps the checked point set independent of argument order
        let (a, b) = if lex_less(b, a) { (b, a) } else { (a, b) };
        if !self.is_collision_free(a) {
            return false;
        }
        let d = self.space.dist(a, b);
        if d == 0.0 {
            return true;
        }
        if !self.is_collision_free(b) {
            return false;
        }
        let steps = (d / resolution).ceil() as usize;
        (1..steps).all(|i| self.is_collision_free(&self.space.interp(a, b, i as f64 / steps as f64)))
    }
}

fn lex_less(a: &Configuration, b: &Configuration) -> bool {
    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

fn chain_links(links: &[ChainLink], q: &Configuration) -> Vec<Polygon> {
    let mut joint = Vec2::new(q[0], q[1]);
    let mut heading = 0.0;
    links
        .iter()
        .enumerate()
        .map(|(i, l)| {
            heading += q[2 + i];
            let dir = Vec2::new(heading.cos(), heading.sin());
            let poly = Polygon::segment_box(joint, dir, l.length, l.width);
            joint = joint + dir.scale(l.length);
            poly
        })
        .collect()
}

/// Link rectangles of a planar chain at `q = (x, y, θ₁, …, θₖ)`, with cumulative joint angles.
pub fn chain_forward_kinematics(robot: &Robot, q: &Configuration) -> Result<Vec<Polygon>> {
    match robot {
        Robot::Chain { links, .. } => {
            if q.len() != 2 + links.len() {
                return Err(Error::DimensionMismatch {
                    expected: 2 + links.len(),
                    actual: q.len(),
                });
            }
            Ok(chain_links(links, q))
        }
        _ => Err(Error::InvalidParams("forward kinematics needs a chain robot".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rng;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn ws(w: f64, h: f64) -> Aabb {
        Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(w, h))
    }

    fn disc_env(obstacles: Vec<Obstacle>) -> Environment {
        Environment::new(ws(10.0, 10.0), obstacles, Robot::Disc { radius: 0.5 }).unwrap()
    }

    fn q(v: &[f64]) -> Configuration {
        Configuration::new(v.to_vec())
    }

    #[test]
    fn disc_inside_obstacle_collides() {
        let env = disc_env(vec![Obstacle::rect((4.0, 4.0), (6.0, 6.0))]);
        assert!(!env.is_collision_free(&q(&[5.0, 5.0])));
        assert!(disc_env(vec![]).is_collision_free(&q(&[5.0, 5.0])));
    }

    #[test]
    fn disc_near_obstacle_edge() {
        // center 0.4 from the left face of the box, radius 0.5
        let env = disc_env(vec![Obstacle::rect((4.0, 4.0), (6.0, 6.0))]);
        assert!(!env.is_collision_free(&q(&[3.6, 5.0])));
        assert!(env.is_collision_free(&q(&[3.4, 5.0])));
        // diagonal off the corner: distance sqrt(0.32^2*2) ≈ 0.453 < 0.5
        assert!(!env.is_collision_free(&q(&[3.68, 3.68])));
        // distance ≈ 0.566 > 0.5
        assert!(env.is_collision_free(&q(&[3.6, 3.6])));
    }

    #[test]
    fn workspace_boundary_counts_as_collision() {
        let env = disc_env(vec![]);
        assert!(!env.is_collision_free(&q(&[0.4, 5.0])));
        assert!(env.is_collision_free(&q(&[0.5, 5.0])));
    }

    #[test]
    fn obstacle_outside_workspace_is_named() {
        let err = Environment::new(
            ws(10.0, 10.0),
            vec![Obstacle::rect((9.0, 9.0), (11.0, 11.0)).named("spill")],
            Robot::Disc { radius: 0.5 },
        )
        .unwrap_err();
        assert!(err.to_string().contains("spill"), "{err}");
    }

    #[test]
    fn polygon_robot_rotation_matters() {
        // 2 x 0.2 bar in a 1 m gap between two boxes
        let env = Environment::new(
            ws(10.0, 10.0),
            vec![
                Obstacle::rect((0.0, 4.0), (4.5, 6.0)),
                Obstacle::rect((5.5, 4.0), (10.0, 6.0)),
            ],
            Robot::rectangle(1.0, 0.1),
        )
        .unwrap();
        assert!(!env.is_collision_free(&q(&[5.0, 5.0, 0.0])));
        assert!(env.is_collision_free(&q(&[5.0, 5.0, FRAC_PI_2])));
    }

    #[test]
    fn edge_examples() {
        let env = disc_env(vec![Obstacle::rect((4.0, 0.0), (6.0, 10.0))]);
        let a = q(&[2.0, 5.0]);
        assert!(env.edge_collision_free(&a, &a, 0.1));
        let b = q(&[8.0, 5.0]);
        // wall is 2 wide; resolution of half the width must hit it
        assert!(!env.edge_collision_free(&a, &b, 1.0));
        assert!(!env.edge_collision_free(&b, &a, 1.0));
        let open = disc_env(vec![]);
        assert!(open.edge_collision_free(&a, &b, 0.05));
    }

    #[test]
    fn edge_check_is_symmetric() {
        let env = disc_env(vec![
            Obstacle::rect((3.0, 3.0), (3.4, 7.0)),
            Obstacle::rect((6.0, 1.0), (6.3, 5.0)),
        ]);
        let mut rng = Rng::new(99);
        for _ in 0..500 {
            let a = env.space().sample_uniform(&mut rng);
            let b = env.space().sample_uniform(&mut rng);
            assert_eq!(
                env.edge_collision_free(&a, &b, 0.3),
                env.edge_collision_free(&b, &a, 0.3)
            );
        }
    }

    #[test]
    fn chain_zero_pose_is_collinear() {
        let robot = Robot::Chain {
            base: box_vertices(0.2, 0.2),
            links: vec![
                ChainLink {
                    length: 1.0,
                    width: 0.1,
                },
                ChainLink {
                    length: 0.5,
                    width: 0.1,
                },
                ChainLink {
                    length: 0.25,
                    width: 0.1,
                },
            ],
        };
        let links = chain_forward_kinematics(&robot, &q(&[0.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
        let max_x = links.iter().map(|l| l.bounds().max.x).fold(f64::MIN, f64::max);
        assert_abs_diff_eq!(max_x, 1.75, epsilon = 1e-12);
        for l in &links {
            assert_abs_diff_eq!(l.bounds().min.y, -0.05, epsilon = 1e-12);
            assert_abs_diff_eq!(l.bounds().max.y, 0.05, epsilon = 1e-12);
        }
    }

    #[test]
    fn chain_quarter_turn_points_up() {
        let robot = Robot::Chain {
            base: box_vertices(0.2, 0.2),
            links: vec![ChainLink {
                length: 1.0,
                width: 0.1,
            }],
        };
        let links = chain_forward_kinematics(&robot, &q(&[0.0, 0.0, FRAC_PI_2])).unwrap();
        let b = links[0].bounds();
        assert_abs_diff_eq!(b.max.y, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.min.y, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.max.x, 0.05, epsilon = 1e-12);
    }

    #[test]
    fn chain_two_links_tip() {
        let robot = Robot::Chain {
            base: box_vertices(0.2, 0.2),
            links: vec![
                ChainLink {
                    length: 1.0,
                    width: 0.1,
                },
                ChainLink {
                    length: 1.0,
                    width: 0.1,
                },
            ],
        };
        let links = chain_forward_kinematics(&robot, &q(&[0.0, 0.0, FRAC_PI_2, -FRAC_PI_2])).unwrap();
        // second link runs from (0,1) to (1,1); its far edge midpoint is the tip
        let v = links[1].vertices();
        let tip = (v[1] + v[2]).scale(0.5);
        assert_abs_diff_eq!(tip.x, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(tip.y, 1.0, epsilon = 1e-12);
        assert!(chain_forward_kinematics(&robot, &q(&[0.0, 0.0, PI])).is_err());
    }

    #[test]
    fn chain_links_collide_with_walls() {
        let env = Environment::new(
            ws(10.0, 10.0),
            vec![Obstacle::rect((0.0, 6.0), (10.0, 10.0))],
            Robot::Chain {
                base: box_vertices(0.3, 0.3),
                links: vec![
                    ChainLink {
                        length: 1.0,
                        width: 0.1,
                    },
                    ChainLink {
                        length: 1.0,
                        width: 0.1,
                    },
                ],
            },
        )
        .unwrap();
        assert!(env.is_collision_free(&q(&[5.0, 4.5, 0.0, 0.0])));
        assert!(!env.is_collision_free(&q(&[5.0, 4.5, FRAC_PI_2, 0.0])));
        assert_eq!(env.space().dim_count(), 4);
    }
}
