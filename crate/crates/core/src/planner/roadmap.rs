use super::subgraph::{ConnectStatus, Steer, Subgraph, Vertex, VertexOrigin};
use crate::geometry::Configuration;

/// Outcome of a link attempt from the current subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkStatus {
    /// Only one live graph remains.
    Linked,
    /// At least one other graph was merged in.
    Connected,
    /// Nothing merged.
    Advanced,
}

/// Bookkeeping emitted after every link attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkEvent {
    pub status: LinkStatus,
    pub live_before: usize,
    pub live_after: usize,
    pub merged: usize,
    pub vertex_total_before: usize,
    pub vertex_total_after: usize,
}

/// Hooks into the build/plan loops.
pub trait PlannerObserver {
    fn on_sample(&mut self, _q: &Configuration) {}
    /// Called after each link attempt; `current` is the slot of the graph that was grown.
    fn on_link(&mut self, _event: &LinkEvent, _roadmap: &Roadmap, _current: usize) {}
}

impl PlannerObserver for () {}

/// Ordered forest of live subgraphs. Merged-away graphs leave empty slots until compaction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Roadmap {
    slots: Vec<Option<Subgraph>>,
    identified_vertices: usize,
    next_vertex_id: u64,
    next_graph_id: usize,
}

impl Roadmap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds a roadmap from stored graphs.
    pub fn from_graphs(graphs: Vec<Subgraph>, next_vertex_id: u64) -> Self {
        let next_graph_id = graphs.iter().map(|g| g.id() + 1).max().unwrap_or(0);
        let floor = graphs
            .iter()
            .flat_map(|g| g.vertices().iter().map(|v| v.id + 1))
            .max()
            .unwrap_or(0);
        Roadmap {
            slots: graphs.into_iter().map(Some).collect(),
            identified_vertices: 0,
            next_vertex_id: next_vertex_id.max(floor),
            next_graph_id,
        }
    }

    pub fn next_vertex_id(&self) -> u64 {
        self.next_vertex_id
    }

    pub(crate) fn set_next_vertex_id(&mut self, id: u64) {
        self.next_vertex_id = id;
    }

    /// Appends a single-vertex graph and returns its slot.
    pub fn add_graph(&mut self, q: Configuration, origin: VertexOrigin, steer: &mut Steer<'_>) -> usize {
        let id = steer.alloc_id();
        let g = Subgraph::new(self.next_graph_id, Vertex { id, q, origin });
        self.next_graph_id += 1;
        self.slots.push(Some(g));
        self.slots.len() - 1
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn graph(&self, slot: usize) -> Option<&Subgraph> {
        self.slots.get(slot).and_then(Option::as_ref)
    }

    pub(crate) fn graph_mut(&mut self, slot: usize) -> Option<&mut Subgraph> {
        self.slots.get_mut(slot).and_then(Option::as_mut)
    }

    /// Live graphs in slot order.
    pub fn graphs(&self) -> impl Iterator<Item = &Subgraph> {
        self.slots.iter().flatten()
    }

    pub fn live_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    /// Live vertices plus those identified away by merges; never decreases.
    pub fn vertex_total(&self) -> usize {
        self.graphs().map(Subgraph::len).sum::<usize>() + self.identified_vertices
    }

    pub fn first_live(&self) -> Option<usize> {
        self.slots.iter().position(Option::is_some)
    }

    /// Drops empty slots.
    pub fn compact(&mut self) {
        self.slots.retain(Option::is_some);
    }

    /// Removes live graphs made only of vertices with ids at or above `watermark`.
    pub(crate) fn drop_graphs_newer_than(&mut self, watermark: u64) {
        for s in &mut self.slots {
            if s.as_ref().is_some_and(|g| g.min_vertex_id() >= watermark) {
                *s = None;
            }
        }
        self.compact();
    }

    /// Next live slot after `current` in cyclic order, or `current` when it is the only one.
    pub fn swap(&self, current: usize) -> usize {
        let n = self.slots.len();
        (1..=n)
            .map(|k| (current + k) % n)
            .find(|&i| self.slots[i].is_some())
            .unwrap_or(current)
    }

    /// Connects every other live graph toward vertex `q_new` of the graph at `current` and
    /// merges those that reach it.
    pub fn link(
        &mut self,
        current: usize,
        q_new: usize,
        steer: &mut Steer<'_>,
        observer: &mut dyn PlannerObserver,
    ) -> LinkStatus {
        let live_before = self.live_count();
        let total_before = self.vertex_total();
        let mut g_curr = self.slots[current].take().expect("current graph is live");
        let target = g_curr.vertices()[q_new].q.clone();
        let mut reached = Vec::new();
        for (i, slot) in self.slots.iter_mut().enumerate() {
            if let Some(g) = slot {
                if let ConnectStatus::Reached(j) = g.connect(&target, steer) {
                    reached.push((i, j));
                }
            }
        }
        for &(i, j) in &reached {
            let g = self.slots[i].take().expect("reached graph is live");
            g_curr.absorb(g, q_new, j);
            self.identified_vertices += 1;
        }
        self.slots[current] = Some(g_curr);
        let live_after = self.live_count();
        let status = if live_after == 1 {
            LinkStatus::Linked
        } else if !reached.is_empty() {
            LinkStatus::Connected
        } else {
            LinkStatus::Advanced
        };
        let event = LinkEvent {
            status,
            live_before,
            live_after,
            merged: reached.len(),
            vertex_total_before: total_before,
            vertex_total_after: self.vertex_total(),
        };
        observer.on_link(&event, self, current);
        status
    }
}
