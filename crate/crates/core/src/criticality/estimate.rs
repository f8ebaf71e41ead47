use serde::{Deserialize, Serialize};

use super::grid::{rasterize_trace, GridSpec};
use crate::error::{Error, Result};
use crate::geometry::Configuration;

/// Observed motion plans for one environment.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MotionPlanSet {
    pub environment: String,
    pub plans: Vec<Vec<Configuration>>,
    /// Start/goal pair each plan answered, when known.
    pub problems: Vec<(Configuration, Configuration)>,
}

impl MotionPlanSet {
    pub fn new(environment: &str, plans: Vec<Vec<Configuration>>) -> Self {
        MotionPlanSet {
            environment: environment.to_string(),
            plans,
            problems: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.plans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plans.is_empty()
    }
}

/// Per-cell criticality estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalityGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
    /// Number of plans the estimate was computed from.
    pub plan_count: usize,
}

impl CriticalityGrid {
    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn positive_cells(&self) -> usize {
        self.values.iter().filter(|&&v| v > 0.0).count()
    }
}

/// Number of plans whose trace touches each cell; a plan counts once per cell.
pub fn plan_cell_counts(plans: &MotionPlanSet, spec: &GridSpec) -> Vec<u32> {
    let mut counts = vec![0u32; spec.cell_count()];
    for plan in plans.plans.iter().filter(|p| !p.is_empty()) {
        for c in rasterize_trace(plan, spec) {
            counts[c] += 1;
        }
    }
    counts
}

/// Discrete criticality: `f / v`, with `f` the fraction of plans touching a cell and `v`
/// the cell's share of the workspace area.
pub fn estimate_mu(plans: &MotionPlanSet, spec: &GridSpec) -> Result<CriticalityGrid> {
    if plans.is_empty() {
        return Err(Error::NoData("motion plan set is empty".into()));
    }
    let n = plans.len() as f64;
    let v = spec.cell_fraction();
    let values = plan_cell_counts(plans, spec)
        .into_iter()
        .map(|c| (c as f64 / n) / v)
        .collect();
    Ok(CriticalityGrid {
        spec: *spec,
        values,
        plan_count: plans.len(),
    })
}

/// Truncated Gaussian blur (radius 3σ, in cells). Each source cell spreads its value over
/// the in-bounds part of its kernel, renormalized, so total mass is preserved at borders.
pub fn smooth(grid: &CriticalityGrid, sigma: f64) -> Result<CriticalityGrid> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParams(format!("smoothing sigma {sigma} must be >= 0")));
    }
    if sigma == 0.0 {
        return Ok(grid.clone());
    }
    let radius = (3.0 * sigma).ceil() as i64;
    let kernel: Vec<f64> = (-radius..=radius)
        .map(|d| (-(d * d) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let (w, h) = (grid.spec.width as i64, grid.spec.height as i64);
    let spread = |len: i64, src: &dyn Fn(i64) -> f64, dst: &mut dyn FnMut(i64, f64)| {
        for i in 0..len {
            let v = src(i);
            if v == 0.0 {
                continue;
            }
            let lo = (i - radius).max(0);
            let hi = (i + radius).min(len - 1);
            let z: f64 = (lo..=hi).map(|j| kernel[(j - i + radius) as usize]).sum();
            for j in lo..=hi {
                dst(j, v * kernel[(j - i + radius) as usize] / z);
            }
        }
    };
    let mut rows = vec![0.0; grid.values.len()];
    for y in 0..h {
        let base = y * w;
        spread(w, &|x| grid.values[(base + x) as usize], &mut |x, v| {
            rows[(base + x) as usize] += v
        });
    }
    let mut out = vec![0.0; grid.values.len()];
    for x in 0..w {
        spread(h, &|y| rows[(y * w + x) as usize], &mut |y, v| {
            out[(y * w + x) as usize] += v
        });
    }
    Ok(CriticalityGrid {
        spec: grid.spec,
        values: out,
        plan_count: grid.plan_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Aabb, Vec2};
    use approx::assert_relative_eq;

    fn unit4() -> GridSpec {
        GridSpec::new(4, 4, Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0))).unwrap()
    }

    fn q(x: f64, y: f64) -> Configuration {
        Configuration::new(vec![x, y])
    }

    #[test]
    fn single_plan_on_unit_square() {
        // stays inside cell (1, 1), whose area is 1/16 of the workspace
        let plans = MotionPlanSet::new("t", vec![vec![q(0.3, 0.3), q(0.45, 0.4)]]);
        let g = estimate_mu(&plans, &unit4()).unwrap();
        assert_eq!(g.values[unit4().index(1, 1)], 16.0);
        assert_eq!(g.positive_cells(), 1);
        assert!(g.values.iter().enumerate().all(|(i, &v)| i == 5 || v == 0.0));
    }

    #[test]
    fn repeated_plans_saturate() {
        let p = vec![q(0.3, 0.3), q(0.45, 0.4)];
        let one = estimate_mu(&MotionPlanSet::new("t", vec![p.clone()]), &unit4()).unwrap();
        let many = estimate_mu(&MotionPlanSet::new("t", vec![p.clone(), p.clone(), p]), &unit4()).unwrap();
        assert_eq!(one.values, many.values);
    }

    #[test]
    fn revisiting_a_cell_counts_once() {
        let p = vec![q(0.1, 0.1), q(0.2, 0.1), q(0.1, 0.15)];
        let counts = plan_cell_counts(&MotionPlanSet::new("t", vec![p]), &unit4());
        assert_eq!(counts[0], 1);
    }

    #[test]
    fn empty_plan_set_is_an_error() {
        assert!(estimate_mu(&MotionPlanSet::default(), &unit4()).is_err());
    }

    fn impulse(n: usize, at: (usize, usize)) -> CriticalityGrid {
        let spec = GridSpec::new(n, n, Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0))).unwrap();
        let mut values = vec![0.0; n * n];
        values[spec.index(at.0, at.1)] = 7.0;
        CriticalityGrid {
            spec,
            values,
            plan_count: 1,
        }
    }

    #[test]
    fn zero_sigma_is_identity() {
        let g = impulse(9, (4, 4));
        assert_eq!(smooth(&g, 0.0).unwrap(), g);
        assert!(smooth(&g, -1.0).is_err());
    }

    #[test]
    fn impulse_response_keeps_mass_and_symmetry() {
        let g = impulse(15, (7, 7));
        let s = smooth(&g, 1.0).unwrap();
        assert_relative_eq!(s.total(), 7.0, epsilon = 1e-6);
        let spec = s.spec;
        for dy in -3i64..=3 {
            for dx in -3i64..=3 {
                let at = |x: i64, y: i64| s.values[spec.index((7 + x) as usize, (7 + y) as usize)];
                assert_relative_eq!(at(dx, dy), at(-dx, dy), epsilon = 1e-12);
                assert_relative_eq!(at(dx, dy), at(dx, -dy), epsilon = 1e-12);
                assert_relative_eq!(at(dx, dy), at(dy, dx), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn border_impulse_keeps_mass() {
        let g = impulse(10, (0, 9));
        let s = smooth(&g, 2.0).unwrap();
        assert_relative_eq!(s.total(), 7.0, max_relative = 1e-12);
        assert!(s.values.iter().all(|&v| v >= 0.0));
    }
}
