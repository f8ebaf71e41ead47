use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(PartialEq)]
struct Entry {
    dist: f64,
    key: u64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    // reversed for a min-heap; equal distances pop the lowest key first
    fn cmp(&self, o: &Self) -> Ordering {
        o.dist.total_cmp(&self.dist).then_with(|| o.key.cmp(&self.key))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Shortest path over a weighted undirected adjacency list.
///
/// `key` gives each node a stable identity used for tie-breaking. Returns the node sequence
/// from `source` to `target` and its total length, or `None` when they are disconnected.
pub fn dijkstra(
    adjacency: &[Vec<(usize, f64)>],
    key: impl Fn(usize) -> u64,
    source: usize,
    target: usize,
) -> Option<(Vec<usize>, f64)> {
    let n = adjacency.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry {
        dist: 0.0,
        key: key(source),
        node: source,
    });
    while let Some(Entry { dist: d, node: u, .. }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == target {
            break;
        }
        for &(v, w) in &adjacency[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                prev[v] = u;
                heap.push(Entry {
                    dist: nd,
                    key: key(v),
                    node: v,
                });
            }
        }
    }
    if !dist[target].is_finite() {
        return None;
    }
    let mut path = vec![target];
    let mut cur = target;
    while cur != source {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    Some((path, dist[target]))
}
