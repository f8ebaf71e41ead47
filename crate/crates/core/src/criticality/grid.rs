use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Aabb, Configuration, Vec2};

/// Default raster size, matching common image-model inputs.
pub const DEFAULT_GRID_SIZE: usize = 224;

/// Regular grid over the workspace. Cell `(ix, iy)` covers the half-open box
/// `[x0, x0 + w) × [y0, y0 + h)`; the far workspace edges belong to the last row/column.
/// Cell indices are `iy * width + ix` with `iy = 0` at minimum y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
    pub bounds: Aabb,
}

impl GridSpec {
    pub fn new(width: usize, height: usize, bounds: Aabb) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParams("grid dimensions must be positive".into()));
        }
        if !(bounds.width() > 0.0 && bounds.height() > 0.0) {
            return Err(Error::InvalidParams("grid bounds have no area".into()));
        }
        Ok(GridSpec { width, height, bounds })
    }

    pub fn cell_count(&self) -> usize {
        self.width * self.height
    }

    pub fn cell_size(&self) -> (f64, f64) {
        (
            self.bounds.width() / self.width as f64,
            self.bounds.height() / self.height as f64,
        )
    }

    /// Fraction of the workspace covered by one cell.
    pub fn cell_fraction(&self) -> f64 {
        1.0 / self.cell_count() as f64
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.width + ix
    }

    pub fn coords(&self, cell: usize) -> (usize, usize) {
        (cell % self.width, cell / self.width)
    }

    /// Continuous grid coordinates (cell units) of a workspace point.
    pub fn to_grid(&self, p: Vec2) -> (f64, f64) {
        let (cw, ch) = self.cell_size();
        ((p.x - self.bounds.min.x) / cw, (p.y - self.bounds.min.y) / ch)
    }

    fn cell_of_grid(&self, gx: f64, gy: f64) -> usize {
        let ix = (gx.floor().max(0.0) as usize).min(self.width - 1);
        let iy = (gy.floor().max(0.0) as usize).min(self.height - 1);
        self.index(ix, iy)
    }

    pub fn cell_of(&self, p: Vec2) -> usize {
        let (gx, gy) = self.to_grid(p);
        self.cell_of_grid(gx, gy)
    }

    pub fn cell_rect(&self, cell: usize) -> Aabb {
        let (ix, iy) = self.coords(cell);
        let (cw, ch) = self.cell_size();
        let min = Vec2::new(self.bounds.min.x + ix as f64 * cw, self.bounds.min.y + iy as f64 * ch);
        Aabb::new(min, Vec2::new(min.x + cw, min.y + ch))
    }

    pub fn cell_center(&self, cell: usize) -> Vec2 {
        let r = self.cell_rect(cell);
        (r.min + r.max).scale(0.5)
    }

    /// Cells containing at least one point of the segment `a`–`b`.
    pub fn segment_cells(&self, a: Vec2, b: Vec2, out: &mut BTreeSet<usize>) {
        let (x0, y0) = self.to_grid(a);
        let (x1, y1) = self.to_grid(b);
        let (dx, dy) = (x1 - x0, y1 - y0);
        // (t, exact x, exact y) for every grid line crossed strictly inside the segment
        let mut events: Vec<(f64, Option<f64>, Option<f64>)> = Vec::new();
        let mut lines = |from: f64, to: f64, d: f64, is_x: bool| {
            if d == 0.0 {
                return;
            }
            let (lo, hi) = (from.min(to), from.max(to));
            let mut k = lo.floor() + 1.0;
            while k < hi {
                let t = (k - from) / d;
                events.push(if is_x { (t, Some(k), None) } else { (t, None, Some(k)) });
                k += 1.0;
            }
        };
        lines(x0, x1, dx, true);
        lines(y0, y1, dy, false);
        events.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut merged: Vec<(f64, Option<f64>, Option<f64>)> = Vec::with_capacity(events.len());
        for e in events {
            match merged.last_mut() {
                Some(last) if last.0 == e.0 => {
                    last.1 = last.1.or(e.1);
                    last.2 = last.2.or(e.2);
                }
                _ => merged.push(e),
            }
        }
        let at = |t: f64| (x0 + t * dx, y0 + t * dy);
        out.insert(self.cell_of_grid(x0, y0));
        out.insert(self.cell_of_grid(x1, y1));
        let mut prev = 0.0;
        for &(t, fx, fy) in &merged {
            let (mx, my) = at((prev + t) / 2.0);
            out.insert(self.cell_of_grid(mx, my));
            let (px, py) = at(t);
            out.insert(self.cell_of_grid(fx.unwrap_or(px), fy.unwrap_or(py)));
            prev = t;
        }
        let (mx, my) = at((prev + 1.0) / 2.0);
        out.insert(self.cell_of_grid(mx, my));
    }
}

/// Cells touched by the polyline through the base positions (first two coordinates) of
/// `path`, in ascending index order.
pub fn rasterize_trace(path: &[Configuration], spec: &GridSpec) -> Vec<usize> {
    let mut cells = BTreeSet::new();
    let pts: Vec<Vec2> = path.iter().map(|q| Vec2::new(q[0], q[1])).collect();
    match pts.len() {
        0 => {}
        1 => {
            cells.insert(spec.cell_of(pts[0]));
        }
        _ => {
            for w in pts.windows(2) {
                spec.segment_cells(w[0], w[1], &mut cells);
            }
        }
    }
    cells.into_iter().collect()
}
