use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::criticality::{CriticalMask, CriticalityGrid, GridSpec, OccupancyRaster};
use crate::error::{Error, Result};

/// Decoded plain (P2) graymap. Row 0 is the top of the image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub pixels: Vec<u16>,
}

/// Scale metadata written next to a criticality PGM: `value = level * scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub spec: GridSpec,
    pub max_value: f64,
    pub scale: f64,
    pub plan_count: usize,
}

impl Pgm {
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        let mut next = |what: &str| {
            tokens
                .next()
                .ok_or_else(|| Error::Format(format!("PGM: missing {what}")))
        };
        if next("magic")? != "P2" {
            return Err(Error::Format("PGM: expected plain 'P2' magic".into()));
        }
        let num = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Format(format!("PGM: bad {what} '{s}'")))
        };
        let width = num(next("width")?, "width")?;
        let height = num(next("height")?, "height")?;
        let maxval = num(next("maxval")?, "maxval")?;
        if width == 0 || height == 0 || maxval == 0 || maxval > u16::MAX as usize {
            return Err(Error::Format("PGM: zero dimension or maxval out of range".into()));
        }
        let mut pixels = Vec::with_capacity(width * height);
        for i in 0..width * height {
            let v = num(next(&format!("pixel {i}"))?, "pixel")?;
            if v > maxval {
                return Err(Error::Format(format!("PGM: pixel {i} exceeds maxval")));
            }
            pixels.push(v as u16);
        }
        if let Ok(extra) = next("") {
            return Err(Error::Format(format!("PGM: trailing data '{extra}'")));
        }
        Ok(Pgm {
            width,
            height,
            maxval: maxval as u16,
            pixels,
        })
    }

    pub fn render(&self) -> String {
        let mut s = format!("P2\n{} {}\n{}\n", self.width, self.height, self.maxval);
        for row in self.pixels.chunks(self.width) {
            let line: Vec<String> = row.iter().map(u16::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Pixel at grid cell `cell` (grid row 0 is minimum y, image row 0 is maximum y).
    fn from_cells(spec: &GridSpec, maxval: u16, level: impl Fn(usize) -> u16) -> Self {
        let mut pixels = Vec::with_capacity(spec.cell_count());
        for r in 0..spec.height {
            let iy = spec.height - 1 - r;
            pixels.extend((0..spec.width).map(|ix| level(spec.index(ix, iy))));
        }
        Pgm {
            width: spec.width,
            height: spec.height,
            maxval,
            pixels,
        }
    }

    fn cell_levels(&self, spec: &GridSpec) -> Result<Vec<u16>> {
        if (self.width, self.height) != (spec.width, spec.height) {
            return Err(Error::Format(format!(
                "PGM is {}x{}, grid is {}x{}",
                self.width, self.height, spec.width, spec.height
            )));
        }
        let mut out = vec![0; spec.cell_count()];
        for (i, &p) in self.pixels.iter().enumerate() {
            let (r, ix) = (i / self.width, i % self.width);
            out[spec.index(ix, spec.height - 1 - r)] = p;
        }
        Ok(out)
    }
}

/// Max-normalized 0–255 rendering of a grid plus the scale needed to recover values.
pub fn write_grid_pgm(grid: &CriticalityGrid) -> (String, GridMeta) {
    let max = grid.max_value();
    let scale = if max > 0.0 { max / 255.0 } else { 0.0 };
    let pgm = Pgm::from_cells(&grid.spec, 255, |c| {
        if max > 0.0 {
            (grid.values[c] / max * 255.0).round() as u16
        } else {
            0
        }
    });
    let meta = GridMeta {
        spec: grid.spec,
        max_value: max,
        scale,
        plan_count: grid.plan_count,
    };
    (pgm.render(), meta)
}

/// Inverse of [`write_grid_pgm`], exact up to the 8-bit quantization.
pub fn read_grid_pgm(text: &str, meta: &GridMeta) -> Result<CriticalityGrid> {
    let pgm = Pgm::parse(text)?;
    let levels = pgm.cell_levels(&meta.spec)?;
    let unit = meta.max_value / pgm.maxval as f64;
    Ok(CriticalityGrid {
        spec: meta.spec,
        values: levels.into_iter().map(|l| l as f64 * unit).collect(),
        plan_count: meta.plan_count,
    })
}

/// Critical cells white (255), others black.
pub fn write_mask_pgm(mask: &CriticalMask) -> String {
    Pgm::from_cells(&mask.spec, 255, |c| if mask.bits[c] { 255 } else { 0 }).render()
}

/// Any nonzero pixel is a critical cell.
pub fn read_mask_pgm(text: &str, spec: &GridSpec) -> Result<CriticalMask> {
    let levels = Pgm::parse(text)?.cell_levels(spec)?;
    CriticalMask::new(*spec, levels.into_iter().map(|l| l > 0).collect())
}

/// Obstacles black (0), free space white.
pub fn write_raster_pgm(raster: &OccupancyRaster) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "{}",
        Pgm::from_cells(&raster.spec, 255, |c| if raster.occupied[c] { 0 } else { 255 }).render()
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Aabb, Vec2};

    fn spec() -> GridSpec {
        GridSpec::new(3, 2, Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(3.0, 2.0))).unwrap()
    }

    #[test]
    fn top_row_is_maximum_y() {
        let mask = CriticalMask::from_cells(spec(), &[spec().index(0, 1)]);
        assert_eq!(write_mask_pgm(&mask), "P2\n3 2\n255\n255 0 0\n0 0 0\n");
    }

    #[test]
    fn mask_round_trip() {
        let mask = CriticalMask::from_cells(spec(), &[0, 4, 5]);
        assert_eq!(read_mask_pgm(&write_mask_pgm(&mask), &spec()).unwrap(), mask);
    }

    #[test]
    fn grid_round_trip_within_quantization() {
        let values = vec![0.0, 1.0, 2.5, 6.0, 3.3, 0.1];
        let grid = CriticalityGrid {
            spec: spec(),
            values: values.clone(),
            plan_count: 7,
        };
        let (text, meta) = write_grid_pgm(&grid);
        let back = read_grid_pgm(&text, &meta).unwrap();
        assert_eq!(back.plan_count, 7);
        for (a, b) in values.iter().zip(&back.values) {
            assert!((a - b).abs() <= meta.scale / 2.0 + 1e-12);
        }
        assert_eq!(back.max_value(), 6.0);
    }

    #[test]
    fn parser_accepts_comments_and_rejects_garbage() {
        let p = Pgm::parse("P2 # c\n2 1 # size\n9\n1 9\n").unwrap();
        assert_eq!(p.pixels, vec![1, 9]);
        assert!(Pgm::parse("P5\n1 1\n1\n0").is_err());
        assert!(Pgm::parse("P2\n2 1\n9\n1").is_err());
        assert!(Pgm::parse("P2\n1 1\n9\n10").is_err());
        assert!(Pgm::parse("P2\n1 1\n9\n1 2").is_err());
    }
}
