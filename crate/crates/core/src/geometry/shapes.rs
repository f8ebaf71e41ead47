//! Planar primitives and exact intersection tests.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;

    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;

    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn scale(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

/// Axis-aligned rectangle, closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Vec2,
    pub max: Vec2,
}

impl Aabb {
    pub fn new(min: Vec2, max: Vec2) -> Self {
        Aabb { min, max }
    }

    pub fn from_points(points: &[Vec2]) -> Self {
        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        Aabb { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn overlaps(&self, o: &Aabb) -> bool {
        self.min.x <= o.max.x && o.min.x <= self.max.x && self.min.y <= o.max.y && o.min.y <= self.max.y
    }

    pub fn contains_point(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn contains(&self, o: &Aabb) -> bool {
        self.contains_point(o.min) && self.contains_point(o.max)
    }

    pub fn corners(&self) -> [Vec2; 4] {
        [
            self.min,
            Vec2::new(self.max.x, self.min.y),
            self.max,
            Vec2::new(self.min.x, self.max.y),
        ]
    }

    /// Euclidean distance from `p` to the rectangle (zero inside).
    pub fn distance_to_point(&self, p: Vec2) -> f64 {
        let dx = (self.min.x - p.x).max(0.0).max(p.x - self.max.x);
        let dy = (self.min.y - p.y).max(0.0).max(p.y - self.max.y);
        (dx * dx + dy * dy).sqrt()
    }
}

/// Simple polygon with cached bounds and convexity.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Vec2>,
    bounds: Aabb,
    convex: bool,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2>) -> Self {
        let bounds = Aabb::from_points(&vertices);
        let convex = is_convex(&vertices);
        Polygon {
            vertices,
            bounds,
            convex,
        }
    }

    pub fn rect(b: &Aabb) -> Self {
        Polygon {
            vertices: b.corners().to_vec(),
            bounds: *b,
            convex: true,
        }
    }

    /// Rectangle from `start` along unit direction `dir`, `length` long and `width` wide.
    pub fn segment_box(start: Vec2, dir: Vec2, length: f64, width: f64) -> Self {
        let n = Vec2::new(-dir.y, dir.x).scale(width / 2.0);
        let end = start + dir.scale(length);
        let vertices = vec![start - n, end - n, end + n, start + n];
        let bounds = Aabb::from_points(&vertices);
        Polygon {
            vertices,
            bounds,
            convex: true,
        }
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn bounds(&self) -> &Aabb {
        &self.bounds
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    /// Rotates about the body origin by `angle`, then translates by `offset`.
    pub fn transformed(&self, offset: Vec2, angle: f64) -> Polygon {
        let (s, c) = angle.sin_cos();
        let vertices: Vec<Vec2> = self
            .vertices
            .iter()
            .map(|v| Vec2::new(c * v.x - s * v.y + offset.x, s * v.x + c * v.y + offset.y))
            .collect();
        let bounds = Aabb::from_points(&vertices);
        Polygon {
            vertices,
            bounds,
            convex: self.convex,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Point-in-polygon with the boundary counted as inside.
    pub fn contains_point(&self, p: Vec2) -> bool {
        if !self.bounds.contains_point(p) {
            return false;
        }
        let mut inside = false;
        for (a, b) in self.edges() {
            if point_segment_distance(p, a, b) == 0.0 {
                return true;
            }
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Signed area, positive for counter-clockwise winding.
    pub fn signed_area(&self) -> f64 {
        self.edges().map(|(a, b)| a.cross(b)).sum::<f64>() / 2.0
    }

    /// True when no two non-adjacent edges touch.
    pub fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        if n < 3 {
            return false;
        }
        let edges: Vec<(Vec2, Vec2)> = self.edges().collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                if segments_intersect(edges[i].0, edges[i].1, edges[j].0, edges[j].1) {
                    return false;
                }
            }
        }
        self.signed_area().abs() > 0.0
    }

    pub fn intersects(&self, other: &Polygon) -> bool {
        if !self.bounds.overlaps(&other.bounds) {
            return false;
        }
        if self.convex && other.convex {
            return !separated_by_axis(self, other) && !separated_by_axis(other, self);
        }
        for (a, b) in self.edges() {
            for (c, d) in other.edges() {
                if segments_intersect(a, b, c, d) {
                    return true;
                }
            }
        }
        self.contains_point(other.vertices[0]) || other.contains_point(self.vertices[0])
    }

    /// Closed disc intersection.
    pub fn intersects_circle(&self, center: Vec2, radius: f64) -> bool {
        if self.bounds.distance_to_point(center) > radius {
            return false;
        }
        if self.contains_point(center) {
            return true;
        }
        self.edges()
            .any(|(a, b)| point_segment_distance(center, a, b) <= radius)
    }
}

fn is_convex(vertices: &[Vec2]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    let mut sign = 0.0f64;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let c = vertices[(i + 2) % n];
        let z = (b - a).cross(c - b);
        if z != 0.0 {
            if sign == 0.0 {
                sign = z.signum();
            } else if z.signum() != sign {
                return false;
            }
        }
    }
    sign != 0.0
}

/// Separating-axis test using the edge normals of `a`; closed shapes, so touching is not separated.
fn separated_by_axis(a: &Polygon, b: &Polygon) -> bool {
    for (p, q) in a.edges() {
        let e = q - p;
        let axis = Vec2::new(-e.y, e.x);
        let (amin, amax) = project(a.vertices(), axis);
        let (bmin, bmax) = project(b.vertices(), axis);
        if amax < bmin || bmax < amin {
            return true;
        }
    }
    false
}

fn project(points: &[Vec2], axis: Vec2) -> (f64, f64) {
    points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let d = p.dot(axis);
        (lo.min(d), hi.max(d))
    })
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segment intersection, including collinear overlap and touching endpoints.
pub fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((p - a).dot(ab) / len2).clamp(0.0, 1.0)
    };
    (p - (a + ab.scale(t))).norm()
}
