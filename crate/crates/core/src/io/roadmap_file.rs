use std::collections::HashMap;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::geometry::Configuration;
use crate::planner::{Roadmap, Subgraph, Vertex, VertexOrigin};

pub const ROADMAP_FORMAT_VERSION: u32 = 1;

/// Serializes the live graphs of a roadmap. Floats use shortest round-trip formatting,
/// so reading the text back reproduces every coordinate bit for bit.
pub fn write_roadmap(rm: &Roadmap) -> String {
    let dims = rm
        .graphs()
        .flat_map(|g| g.vertices())
        .map(|v| v.q.len())
        .next()
        .unwrap_or(0);
    let mut s = String::new();
    let _ = writeln!(s, "llroadmap {ROADMAP_FORMAT_VERSION}");
    let _ = writeln!(s, "dims {dims}");
    let _ = writeln!(s, "next_vertex_id {}", rm.next_vertex_id());
    let _ = writeln!(s, "graphs {}", rm.live_count());
    for g in rm.graphs() {
        let _ = writeln!(
            s,
            "graph {} root {} vertices {} edges {}",
            g.id(),
            g.vertices()[g.root()].id,
            g.len(),
            g.edge_count()
        );
        for v in g.vertices() {
            let _ = write!(s, "v {} {}", v.id, v.origin.as_str());
            for c in v.q.as_slice() {
                let _ = write!(s, " {c}");
            }
            s.push('\n');
        }
        for (a, b, w) in g.edges() {
            let _ = writeln!(s, "e {} {} {w}", g.vertices()[a].id, g.vertices()[b].id);
        }
    }
    s.push_str("end\n");
    s
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<Vec<&'a str>> {
        for (i, l) in self.inner.by_ref() {
            let l = l.split('#').next().unwrap_or("").trim();
            if !l.is_empty() {
                self.line = i + 1;
                return Ok(l.split_whitespace().collect());
            }
        }
        Err(Error::Format("roadmap: unexpected end of file".into()))
    }

    fn err(&self, msg: impl std::fmt::Display) -> Error {
        Error::Format(format!("roadmap line {}: {msg}", self.line))
    }

    fn expect<T: std::str::FromStr>(&self, tok: Option<&&str>, what: &str) -> Result<T> {
        tok.and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err(format!("bad or missing {what}")))
    }

    fn keyed<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let t = self.next()?;
        if t.len() != 2 || t[0] != key {
            return Err(self.err(format!("expected '{key} <value>'")));
        }
        self.expect(t.get(1), key)
    }
}

pub fn read_roadmap(text: &str) -> Result<Roadmap> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    let version: u32 = lines.keyed("llroadmap")?;
    if version != ROADMAP_FORMAT_VERSION {
        return Err(lines.err(format!("unsupported version {version}")));
    }
    let dims: usize = lines.keyed("dims")?;
    let next_vertex_id: u64 = lines.keyed("next_vertex_id")?;
    let count: usize = lines.keyed("graphs")?;
    let mut graphs = Vec::with_capacity(count);
    let mut seen_ids = HashMap::new();
    for _ in 0..count {
        let t = lines.next()?;
        if t.len() != 8 || t[0] != "graph" || t[2] != "root" || t[4] != "vertices" || t[6] != "edges" {
            return Err(lines.err("expected 'graph <id> root <vid> vertices <n> edges <m>'"));
        }
        let gid: usize = lines.expect(t.get(1), "graph id")?;
        let root_id: u64 = lines.expect(t.get(3), "root id")?;
        let nv: usize = lines.expect(t.get(5), "vertex count")?;
        let ne: usize = lines.expect(t.get(7), "edge count")?;
        let mut vertices = Vec::with_capacity(nv);
        let mut local = HashMap::new();
        for i in 0..nv {
            let t = lines.next()?;
            if t.len() != 3 + dims || t[0] != "v" {
                return Err(lines.err(format!("expected 'v <id> <origin>' and {dims} coordinates")));
            }
            let id: u64 = lines.expect(t.get(1), "vertex id")?;
            let origin = VertexOrigin::parse(t[2]).ok_or_else(|| lines.err(format!("unknown origin '{}'", t[2])))?;
            let coords = t[3..]
                .iter()
                .map(|c| c.parse::<f64>().ok().filter(|v| v.is_finite()))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| lines.err("bad coordinate"))?;
            if seen_ids.insert(id, gid).is_some() {
                return Err(lines.err(format!("duplicate vertex id {id}")));
            }
            local.insert(id, i);
            vertices.push(Vertex {
                id,
                q: Configuration::new(coords),
                origin,
            });
        }
        let mut edges = Vec::with_capacity(ne);
        for _ in 0..ne {
            let t = lines.next()?;
            if t.len() != 4 || t[0] != "e" {
                return Err(lines.err("expected 'e <id> <id> <length>'"));
            }
            let a: u64 = lines.expect(t.get(1), "edge endpoint")?;
            let b: u64 = lines.expect(t.get(2), "edge endpoint")?;
            let w: f64 = lines.expect(t.get(3), "edge length")?;
            let (Some(&a), Some(&b)) = (local.get(&a), local.get(&b)) else {
                return Err(lines.err("edge endpoint not in this graph"));
            };
            if !(w.is_finite() && w >= 0.0) {
                return Err(lines.err("edge length must be finite and non-negative"));
            }
            edges.push((a, b, w));
        }
        let root = *local
            .get(&root_id)
            .ok_or_else(|| lines.err("root is not a vertex of the graph"))?;
        graphs.push(Subgraph::from_parts(gid, vertices, &edges, root).map_err(|e| lines.err(e))?);
    }
    if lines.next()? != ["end"] {
        return Err(lines.err("expected 'end'"));
    }
    Ok(Roadmap::from_graphs(graphs, next_vertex_id))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vertex(id: u64, x: f64) -> Vertex {
        Vertex {
            id,
            q: Configuration::new(vec![x, 0.1 + x / 3.0]),
            origin: VertexOrigin::Steering,
        }
    }

    fn sample() -> Roadmap {
        let g0 =
            Subgraph::from_parts(0, vec![vertex(0, 0.0), vertex(3, 1.0 / 7.0)], &[(0, 1, 0.123456789)], 0).unwrap();
        let g1 = Subgraph::from_parts(2, vec![vertex(5, 9.0)], &[], 0).unwrap();
        Roadmap::from_graphs(vec![g0, g1], 11)
    }

    #[test]
    fn round_trip_is_exact() {
        let rm = sample();
        let text = write_roadmap(&rm);
        let back = read_roadmap(&text).unwrap();
        assert_eq!(write_roadmap(&back), text);
        assert_eq!(back.next_vertex_id(), 11);
        let a: Vec<_> = rm.graphs().collect();
        let b: Vec<_> = back.graphs().collect();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.vertices(), y.vertices());
            assert_eq!(x.edges().collect::<Vec<_>>(), y.edges().collect::<Vec<_>>());
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = write_roadmap(&sample()).replace("e 0 3", "e 0 5");
        let err = read_roadmap(&text).unwrap_err().to_string();
        assert!(err.contains("line 8"), "{err}");
        assert!(read_roadmap("llroadmap 2\n").is_err());
        assert!(read_roadmap(&write_roadmap(&sample()).replace("end\n", "")).is_err());
    }
}
