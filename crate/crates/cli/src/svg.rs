//! Deterministic SVG rendering of environments and planner artifacts.

use std::fmt::Write as _;

use llplan::criticality::{CriticalMask, CriticalityGrid};
use llplan::geometry::{Shape, Vec2};
use llplan::planner::{Roadmap, VertexOrigin};
use llplan::{Configuration, Environment};

/// Longest canvas side in pixels.
pub const CANVAS: f64 = 800.0;

#[derive(Debug, Clone, Default)]
pub struct Overlays<'a> {
    pub grid: Option<&'a CriticalityGrid>,
    pub mask: Option<&'a CriticalMask>,
    pub roadmap: Option<&'a Roadmap>,
    pub paths: Vec<&'a [Configuration]>,
    pub points: Vec<Vec2>,
}

fn origin_color(o: VertexOrigin) -> &'static str {
    match o {
        VertexOrigin::Critical => "red",
        VertexOrigin::Uniform => "blue",
        VertexOrigin::Steering => "green",
        VertexOrigin::Query => "orange",
    }
}

const PATH_COLORS: [&str; 4] = ["magenta", "darkorange", "teal", "purple"];

struct Frame {
    min: Vec2,
    max_y: f64,
    scale: f64,
}

impl Frame {
    fn x(&self, x: f64) -> f64 {
        (x - self.min.x) * self.scale
    }

    fn y(&self, y: f64) -> f64 {
        (self.max_y - y) * self.scale
    }

    fn pt(&self, p: Vec2) -> String {
        format!("{:.3},{:.3}", self.x(p.x), self.y(p.y))
    }
}

/// Obstacles black on white, grid values as gray, critical cells green (one rectangle each),
/// roadmap vertices colored by origin (critical red, uniform blue, steering green, query
/// orange), paths as polylines. Output depends only on the inputs.
pub fn render_svg(env: &Environment, overlays: &Overlays<'_>) -> String {
    let ws = env.workspace();
    let scale = CANVAS / ws.width().max(ws.height());
    let f = Frame {
        min: ws.min,
        max_y: ws.max.y,
        scale,
    };
    let (w, h) = (ws.width() * scale, ws.height() * scale);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.3}" height="{h:.3}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect class="free" x="0" y="0" width="{w:.3}" height="{h:.3}" fill="white"/>"#
    );

    let cell = |s: &mut String, spec: &llplan::criticality::GridSpec, c: usize, class: &str, style: &str| {
        let r = spec.cell_rect(c);
        let _ = writeln!(
            s,
            r#"<rect class="{class}" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" {style}/>"#,
            f.x(r.min.x),
            f.y(r.max.y),
            r.width() * scale,
            r.height() * scale
        );
    };
    if let Some(g) = overlays.grid {
        let max = g.max_value();
        for (c, &v) in g.values.iter().enumerate().filter(|(_, &v)| v > 0.0) {
            let level = 255 - (v / max * 200.0).round() as u8;
            cell(
                &mut s,
                &g.spec,
                c,
                "grid",
                &format!(r#"fill="rgb({level},{level},{level})""#),
            );
        }
    }
    if let Some(m) = overlays.mask {
        for c in m.set_cells() {
            cell(&mut s, &m.spec, c, "critical", r#"fill="green" fill-opacity="0.6""#);
        }
    }
    for o in env.obstacles() {
        match &o.shape {
            Shape::Rect(b) => {
                let _ = writeln!(
                    s,
                    r#"<rect class="obstacle" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="black"/>"#,
                    f.x(b.min.x),
                    f.y(b.max.y),
                    b.width() * scale,
                    b.height() * scale
                );
            }
            Shape::Polygon(v) => {
                let pts: Vec<String> = v.iter().map(|&p| f.pt(p)).collect();
                let _ = writeln!(
                    s,
                    r#"<polygon class="obstacle" points="{}" fill="black"/>"#,
                    pts.join(" ")
                );
            }
        }
    }
    if let Some(rm) = overlays.roadmap {
        for g in rm.graphs() {
            for (a, b, _) in g.edges() {
                let (p, q) = (&g.vertices()[a].q, &g.vertices()[b].q);
                let _ = writeln!(
                    s,
                    r#"<line class="edge" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="gray" stroke-width="0.5"/>"#,
                    f.x(p[0]),
                    f.y(p[1]),
                    f.x(q[0]),
                    f.y(q[1])
                );
            }
        }
        for g in rm.graphs() {
            for v in g.vertices() {
                let _ = writeln!(
                    s,
                    r#"<circle class="vertex {}" cx="{:.3}" cy="{:.3}" r="2" fill="{}"/>"#,
                    v.origin.as_str(),
                    f.x(v.q[0]),
                    f.y(v.q[1]),
                    origin_color(v.origin)
                );
            }
        }
    }
    for (i, path) in overlays.paths.iter().enumerate() {
        let pts: Vec<String> = path.iter().map(|q| f.pt(Vec2::new(q[0], q[1]))).collect();
        let _ = writeln!(
            s,
            r#"<polyline class="path" points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            pts.join(" "),
            PATH_COLORS[i % PATH_COLORS.len()]
        );
    }
    for p in &overlays.points {
        let _ = writeln!(
            s,
            r#"<circle class="point" cx="{:.3}" cy="{:.3}" r="3" fill="red"/>"#,
            f.x(p.x),
            f.y(p.y)
        );
    }
    let _ = writeln!(
        s,
        r#"<rect class="border" x="0" y="0" width="{w:.3}" height="{h:.3}" fill="none" stroke="black" stroke-width="2"/>"#
    );
    s.push_str("</svg>\n");
    s
}
