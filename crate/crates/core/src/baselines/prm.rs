use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::geometry::{Configuration, Environment, Rng};
use crate::planner::nn::{self, Keyed};
use crate::planner::{
    check_query, dijkstra, path_length, Budget, PlanResult, PlanStats, PlanStatus, Vertex, VertexOrigin,
};

#[derive(Debug, Clone, PartialEq)]
pub struct PrmParams {
    /// Neighbors tried per vertex.
    pub k: usize,
    pub resolution: f64,
    /// Construction budget: wall-clock limit and/or number of samples drawn.
    pub build_budget: Budget,
}

impl PrmParams {
    pub fn new(env: &Environment, build_budget: Budget) -> Self {
        PrmParams {
            k: super::PRM_K,
            resolution: env.default_resolution(),
            build_budget,
        }
    }
}

/// k-nearest-neighbor roadmap with straight-line local plans. Only endpoints of local plans
/// are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct PrmRoadmap {
    pub vertices: Vec<Vertex>,
    pub adjacency: Vec<Vec<(usize, f64)>>,
    pub k: usize,
    pub samples: u64,
    pub build_time: Duration,
}

impl PrmRoadmap {
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn add_vertex(&mut self, q: Configuration, env: &Environment, resolution: f64) -> usize {
        let near = nn::k_nearest(env.space(), &self.vertices, &q, self.k);
        let idx = self.vertices.len();
        self.vertices.push(Vertex {
            id: idx as u64,
            q,
            origin: VertexOrigin::Uniform,
        });
        self.adjacency.push(Vec::new());
        for (j, d) in near {
            if env.edge_collision_free(&self.vertices[j].q, &self.vertices[idx].q, resolution) {
                self.adjacency[idx].push((j, d));
                self.adjacency[j].push((idx, d));
            }
        }
        idx
    }
}

/// Samples collision-free vertices until the build budget is spent, linking each new
/// vertex to its k nearest predecessors through validated straight segments.
pub fn prm_build(env: &Environment, params: &PrmParams, rng: &mut Rng) -> Result<PrmRoadmap> {
    let started = Instant::now();
    if params.k == 0 {
        return Err(Error::InvalidParams("PRM needs k >= 1".into()));
    }
    let budget = params.build_budget;
    if budget.sample_cap.is_none() && budget.time_limit.is_none() {
        return Err(Error::InvalidParams("PRM build needs a finite budget".into()));
    }
    if budget.sample_cap == Some(0) || budget.time_limit == Some(Duration::ZERO) {
        return Err(Error::InvalidParams("PRM build budget must be positive".into()));
    }
    let mut rm = PrmRoadmap {
        vertices: Vec::new(),
        adjacency: Vec::new(),
        k: params.k,
        samples: 0,
        build_time: Duration::ZERO,
    };
    while budget.exhausted(rm.samples, started).is_none() {
        rm.samples += 1;
        let q = env.space().sample_uniform(rng);
        if env.is_collision_free(&q) {
            rm.add_vertex(q, env, params.resolution);
        }
    }
    rm.build_time = started.elapsed();
    Ok(rm)
}

/// Attaches start and goal to their k nearest roadmap vertices and runs Dijkstra. The
/// roadmap itself is left untouched.
pub fn prm_query(
    rm: &PrmRoadmap,
    env: &Environment,
    start: &Configuration,
    goal: &Configuration,
    resolution: f64,
) -> PlanResult {
    let started = Instant::now();
    let mut stats = PlanStats {
        samples: rm.samples,
        build_time: rm.build_time,
        vertices: rm.vertices.len(),
        ..PlanStats::default()
    };
    if !check_query(env, start, goal) {
        return PlanResult::failed(PlanStatus::InvalidQuery, stats);
    }
    if env.space().dist(start, goal) == 0.0 {
        stats.wall_time = started.elapsed();
        return PlanResult {
            status: PlanStatus::Solved,
            path: vec![start.clone()],
            stats,
        };
    }
    let mut adjacency = rm.adjacency.clone();
    let s = adjacency.len();
    let g = s + 1;
    adjacency.push(Vec::new());
    adjacency.push(Vec::new());
    for (endpoint, q) in [(s, start), (g, goal)] {
        for (j, d) in nn::k_nearest(env.space(), &rm.vertices, q, rm.k) {
            if env.edge_collision_free(q, &rm.vertices[j].q, resolution) {
                adjacency[endpoint].push((j, d));
                adjacency[j].push((endpoint, d));
            }
        }
    }
    let key = |i: usize| {
        if i < s {
            rm.vertices[i].key()
        } else {
            u64::MAX - (g - i) as u64
        }
    };
    let found = dijkstra(&adjacency, key, s, g);
    stats.wall_time = started.elapsed();
    match found {
        Some((idx, _)) => {
            let path: Vec<Configuration> = idx
                .into_iter()
                .map(|i| match i {
                    i if i == s => start.clone(),
                    i if i == g => goal.clone(),
                    i => rm.vertices[i].q.clone(),
                })
                .collect();
            stats.path_length = path_length(env, &path);
            stats.wall_time = started.elapsed();
            PlanResult {
                status: PlanStatus::Solved,
                path,
                stats,
            }
        }
        // the roadmap cannot grow at query time, so a miss is final
        None => PlanResult::failed(PlanStatus::SampleCapReached, stats),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Aabb, Obstacle, Robot, Vec2};
    use crate::planner::validate_path;

    fn env(obstacles: Vec<Obstacle>) -> Environment {
        Environment::new(
            Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(10.0, 10.0)),
            obstacles,
            Robot::Disc { radius: 0.3 },
        )
        .unwrap()
    }

    fn q(x: f64, y: f64) -> Configuration {
        Configuration::new(vec![x, y])
    }

    #[test]
    fn open_world_queries_succeed() {
        let e = env(vec![]);
        let p = PrmParams::new(&e, Budget::samples(300));
        let rm = prm_build(&e, &p, &mut Rng::new(5)).unwrap();
        assert!(rm.vertices.len() > 200);
        for (s, g) in [(q(1.0, 1.0), q(9.0, 9.0)), (q(2.0, 8.0), q(7.5, 1.2))] {
            let r = prm_query(&rm, &e, &s, &g, p.resolution);
            assert!(r.is_solved());
            validate_path(&e, &r.path, &s, &g, p.resolution).unwrap();
        }
    }

    #[test]
    fn sealed_chambers_only_within() {
        let e = env(vec![Obstacle::rect((4.5, 0.0), (5.5, 10.0))]);
        let p = PrmParams::new(&e, Budget::samples(400));
        let rm = prm_build(&e, &p, &mut Rng::new(6)).unwrap();
        assert!(!prm_query(&rm, &e, &q(2.0, 2.0), &q(8.0, 8.0), p.resolution).is_solved());
        assert!(prm_query(&rm, &e, &q(2.0, 2.0), &q(3.0, 8.0), p.resolution).is_solved());
        assert!(prm_query(&rm, &e, &q(7.0, 2.0), &q(8.0, 8.0), p.resolution).is_solved());
    }

    #[test]
    fn every_stored_edge_is_valid_and_k_limited() {
        let e = env(vec![Obstacle::rect((3.0, 3.0), (7.0, 4.0))]);
        let p = PrmParams::new(&e, Budget::samples(200));
        let rm = prm_build(&e, &p, &mut Rng::new(8)).unwrap();
        for (a, nbrs) in rm.adjacency.iter().enumerate() {
            for &(b, _) in nbrs {
                assert!(e.edge_collision_free(&rm.vertices[a].q, &rm.vertices[b].q, p.resolution));
            }
        }
        // a vertex initiates at most k edges
        let initiated: Vec<usize> = rm
            .adjacency
            .iter()
            .enumerate()
            .map(|(a, n)| n.iter().filter(|(b, _)| *b < a).count())
            .collect();
        assert!(initiated.iter().all(|&c| c <= p.k));
    }

    #[test]
    fn budget_validation() {
        let e = env(vec![]);
        let mut p = PrmParams::new(&e, Budget::default());
        assert!(prm_build(&e, &p, &mut Rng::new(1)).is_err());
        p.build_budget = Budget::samples(10);
        p.k = 0;
        assert!(prm_build(&e, &p, &mut Rng::new(1)).is_err());
    }

    #[test]
    fn more_time_more_vertices() {
        let e = env(vec![Obstacle::rect((3.0, 3.0), (7.0, 4.0))]);
        let short = prm_build(
            &e,
            &PrmParams::new(&e, Budget::time(Duration::from_millis(100))),
            &mut Rng::new(3),
        )
        .unwrap();
        let long = prm_build(
            &e,
            &PrmParams::new(&e, Budget::time(Duration::from_millis(1000))),
            &mut Rng::new(3),
        )
        .unwrap();
        assert!(long.vertices.len() > short.vertices.len());
    }
}
