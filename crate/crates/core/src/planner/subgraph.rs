use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::dijkstra::dijkstra;
use super::nn::{self, Keyed};
use crate::error::{Error, Result};
use crate::geometry::{Configuration, Environment};

/// Where a vertex came from. Only used for reporting and rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexOrigin {
    Critical,
    Uniform,
    Query,
    Steering,
}

impl VertexOrigin {
    pub fn as_str(&self) -> &'static str {
        match self {
            VertexOrigin::Critical => "critical",
            VertexOrigin::Uniform => "uniform",
            VertexOrigin::Query => "query",
            VertexOrigin::Steering => "steering",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "critical" => VertexOrigin::Critical,
            "uniform" => VertexOrigin::Uniform,
            "query" => VertexOrigin::Query,
            "steering" => VertexOrigin::Steering,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    /// Globally unique across all graphs of a roadmap, preserved through merges.
    pub id: u64,
    pub q: Configuration,
    pub origin: VertexOrigin,
}

impl Keyed for Vertex {
    fn key(&self) -> u64 {
        self.id
    }
    fn config(&self) -> &Configuration {
        &self.q
    }
}

/// Steering context shared by every graph-growing planner: the environment, step ε,
/// validation resolution δ, a vertex id allocator and call counters.
#[derive(Debug)]
pub struct Steer<'a> {
    pub env: &'a Environment,
    pub step: f64,
    pub resolution: f64,
    pub next_id: u64,
    pub extend_calls: u64,
    pub connect_calls: u64,
}

impl<'a> Steer<'a> {
    pub fn new(env: &'a Environment, step: f64, resolution: f64) -> Self {
        Steer {
            env,
            step,
            resolution,
            next_id: 0,
            extend_calls: 0,
            connect_calls: 0,
        }
    }

    pub fn alloc_id(&mut self) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }
}

/// Result of one steering step; carries the index of `q_new` unless trapped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtendStatus {
    Trapped,
    Advanced(usize),
    Reached(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectStatus {
    Trapped,
    Reached(usize),
}

/// A connected graph grown from a single root configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgraph {
    id: usize,
    vertices: Vec<Vertex>,
    adjacency: Vec<Vec<(usize, f64)>>,
    root: usize,
}

impl Subgraph {
    pub fn new(id: usize, root: Vertex) -> Self {
        Subgraph {
            id,
            vertices: vec![root],
            adjacency: vec![Vec::new()],
            root: 0,
        }
    }

    /// Assembles a graph from raw parts, checking index bounds and connectivity.
    pub fn from_parts(id: usize, vertices: Vec<Vertex>, edges: &[(usize, usize, f64)], root: usize) -> Result<Self> {
        if vertices.is_empty() || root >= vertices.len() {
            return Err(Error::Format(format!("graph {id}: bad root or no vertices")));
        }
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for &(a, b, w) in edges {
            if a >= vertices.len() || b >= vertices.len() || a == b {
                return Err(Error::Format(format!("graph {id}: bad edge {a}-{b}")));
            }
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
        }
        let g = Subgraph {
            id,
            vertices,
            adjacency,
            root,
        };
        if !g.is_connected() {
            return Err(Error::Format(format!("graph {id} is not connected")));
        }
        Ok(g)
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn adjacency(&self) -> &[Vec<(usize, f64)>] {
        &self.adjacency
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Each undirected edge once, as `(a, b, length)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, nbrs)| nbrs.iter().filter(move |(b, _)| a < *b).map(move |&(b, w)| (a, b, w)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn min_vertex_id(&self) -> u64 {
        self.vertices.iter().map(|v| v.id).min().unwrap_or(u64::MAX)
    }

    /// Index of the first vertex bitwise equal to `q`.
    pub fn find(&self, q: &Configuration) -> Option<usize> {
        self.vertices.iter().position(|v| v.q.same_bits(q))
    }

    pub fn nearest(&self, env: &Environment, q: &Configuration) -> usize {
        nn::nearest(env.space(), &self.vertices, q).expect("subgraph is never empty")
    }

    fn push_vertex(&mut self, v: Vertex) -> usize {
        self.vertices.push(v);
        self.adjacency.push(Vec::new());
        self.vertices.len() - 1
    }

    fn push_edge(&mut self, a: usize, b: usize, w: f64) {
        self.adjacency[a].push((b, w));
        self.adjacency[b].push((a, w));
    }

    /// One steering step of at most ε from the nearest vertex toward `target`.
    pub fn extend(&mut self, target: &Configuration, steer: &mut Steer<'_>) -> ExtendStatus {
        steer.extend_calls += 1;
        let env = steer.env;
        let near = self.nearest(env, target);
        let q_near = &self.vertices[near].q;
        let d = env.space().dist(q_near, target);
        if d == 0.0 {
            return ExtendStatus::Reached(near);
        }
        let reached = d <= steer.step;
        let q_new = if reached {
            target.clone()
        } else {
            env.space().interp(q_near, target, steer.step / d)
        };
        if !env.edge_collision_free(q_near, &q_new, steer.resolution) {
            return ExtendStatus::Trapped;
        }
        let len = env.space().dist(q_near, &q_new);
        let id = steer.alloc_id();
        let idx = self.push_vertex(Vertex {
            id,
            q: q_new,
            origin: VertexOrigin::Steering,
        });
        self.push_edge(near, idx, len);
        if reached {
            ExtendStatus::Reached(idx)
        } else {
            ExtendStatus::Advanced(idx)
        }
    }

    /// Repeated extension toward `target` until it is reached or blocked. Intermediate
    /// vertices are kept either way.
    pub fn connect(&mut self, target: &Configuration, steer: &mut Steer<'_>) -> ConnectStatus {
        steer.connect_calls += 1;
        loop {
            match self.extend(target, steer) {
                ExtendStatus::Advanced(_) => continue,
                ExtendStatus::Reached(i) => return ConnectStatus::Reached(i),
                ExtendStatus::Trapped => return ConnectStatus::Trapped,
            }
        }
    }

    /// Merges `other` into this graph, identifying `other`'s vertex `other_at` with `self_at`.
    /// The two vertices must hold the same configuration.
    pub fn absorb(&mut self, other: Subgraph, self_at: usize, other_at: usize) {
        debug_assert!(self.vertices[self_at].q.same_bits(&other.vertices[other_at].q));
        let base = self.vertices.len();
        let map = |k: usize| -> usize {
            match k.cmp(&other_at) {
                std::cmp::Ordering::Less => base + k,
                std::cmp::Ordering::Equal => self_at,
                std::cmp::Ordering::Greater => base + k - 1,
            }
        };
        let Subgraph {
            vertices, adjacency, ..
        } = other;
        for (k, (v, nbrs)) in vertices.into_iter().zip(adjacency).enumerate() {
            let mapped: Vec<(usize, f64)> = nbrs.into_iter().map(|(j, w)| (map(j), w)).collect();
            if k == other_at {
                self.adjacency[self_at].extend(mapped);
            } else {
                self.vertices.push(v);
                self.adjacency.push(mapped);
            }
        }
    }

    /// Breadth-first connectivity check.
    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.vertices.len()
    }

    /// Vertex-index path of minimal total edge length between two vertex indices.
    pub fn shortest_path_indices(&self, from: usize, to: usize) -> Option<(Vec<usize>, f64)> {
        dijkstra(&self.adjacency, |i| self.vertices[i].id, from, to)
    }

    /// Minimal-length configuration sequence between two vertices of this graph.
    pub fn shortest_path(&self, u: &Configuration, v: &Configuration) -> Result<Vec<Configuration>> {
        let from = self.find(u).ok_or(Error::VertexNotFound)?;
        let to = self.find(v).ok_or(Error::VertexNotFound)?;
        Ok(self
            .shortest_path_indices(from, to)
            .map(|(p, _)| p.into_iter().map(|i| self.vertices[i].q.clone()).collect())
            .unwrap_or_default())
    }
}
