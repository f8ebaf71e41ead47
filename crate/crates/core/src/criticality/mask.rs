use super::estimate::{CriticalityGrid, MotionPlanSet};
use super::grid::{rasterize_trace, GridSpec};
use crate::error::{Error, Result};
use crate::geometry::{Configuration, Environment, Rng, Vec2};

/// Attempts at the non-base coordinates before another cell is picked.
pub const DIM_ATTEMPTS: usize = 100;
/// Cells tried before the mask is declared infeasible.
pub const CELL_ATTEMPTS: usize = 100;

/// Binary critical-region mask over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalMask {
    pub spec: GridSpec,
    pub bits: Vec<bool>,
}

impl CriticalMask {
    pub fn new(spec: GridSpec, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != spec.cell_count() {
            return Err(Error::DimensionMismatch {
                expected: spec.cell_count(),
                actual: bits.len(),
            });
        }
        Ok(CriticalMask { spec, bits })
    }

    pub fn from_cells(spec: GridSpec, cells: &[usize]) -> Self {
        let mut bits = vec![false; spec.cell_count()];
        for &c in cells {
            bits[c] = true;
        }
        CriticalMask { spec, bits }
    }

    /// Indices of set cells, ascending.
    pub fn set_cells(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// Cell-center points of the set cells.
    pub fn points(&self) -> Vec<Vec2> {
        self.set_cells().into_iter().map(|c| self.spec.cell_center(c)).collect()
    }

    /// True when the trace of `plan` touches a set cell.
    pub fn touches(&self, plan: &[Configuration]) -> bool {
        !plan.is_empty() && rasterize_trace(plan, &self.spec).into_iter().any(|c| self.bits[c])
    }
}

/// Marks cells whose value is at least the `(1 - q)` quantile of the positive values.
///
/// With `P` positive cells the threshold is the `ceil(qP)`-th largest positive value, so
/// the set fraction lies in `[q, q + tie mass]`. Zero cells are never set.
pub fn binarize(grid: &CriticalityGrid, q: f64) -> Result<CriticalMask> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParams(format!("quantile {q} must lie in (0, 1)")));
    }
    let mut positive: Vec<f64> = grid.values.iter().copied().filter(|&v| v > 0.0).collect();
    if positive.is_empty() {
        return Err(Error::EmptyGrid);
    }
    positive.sort_by(|a, b| b.total_cmp(a));
    let k = ((q * positive.len() as f64).ceil() as usize).clamp(1, positive.len());
    let threshold = positive[k - 1];
    let bits = grid.values.iter().map(|&v| v > 0.0 && v >= threshold).collect();
    Ok(CriticalMask { spec: grid.spec, bits })
}

/// Criticality of a predicted region against held-out plans: the fraction of plans touching
/// the region divided by the region's share of the workspace.
pub fn score_region(mask: &CriticalMask, heldout: &MotionPlanSet) -> Result<f64> {
    if heldout.is_empty() {
        return Err(Error::NoData("no held-out plans".into()));
    }
    let set = mask.count();
    if set == 0 {
        return Err(Error::EmptyMask);
    }
    let hits = heldout.plans.iter().filter(|p| mask.touches(p)).count();
    let f = hits as f64 / heldout.len() as f64;
    let v = set as f64 / mask.spec.cell_count() as f64;
    Ok(f / v)
}

/// One configuration with base position inside `cell`; the remaining coordinates are drawn
/// uniformly and retried until collision-free.
fn sample_in_cell(cell: usize, spec: &GridSpec, env: &Environment, rng: &mut Rng) -> Option<Configuration> {
    let r = spec.cell_rect(cell);
    let dims = env.space().dims();
    let x = rng.uniform(r.min.x, r.max.x);
    let y = rng.uniform(r.min.y, r.max.y);
    let attempts = if dims.len() > 2 { DIM_ATTEMPTS } else { 1 };
    for _ in 0..attempts {
        let mut values = vec![x, y];
        values.extend(dims[2..].iter().map(|d| rng.uniform(d.lower, d.upper)));
        let q = env.space().config(values).ok()?;
        if env.is_collision_free(&q) {
            return Some(q);
        }
    }
    None
}

/// Offsets tried by [`translated_mask`] before settling for the least-overlapping one.
const TRANSLATION_ATTEMPTS: usize = 1000;

/// Equal-area control region: the mask translated by a random nonzero cell offset, wrapping
/// around the grid edges. Shape and area are kept, only location changes. Offsets are drawn
/// uniformly until the moved region is disjoint from the original; if none is found the
/// draw with the least overlap is used.
pub fn translated_mask(mask: &CriticalMask, rng: &mut Rng) -> CriticalMask {
    let spec = &mask.spec;
    if spec.cell_count() < 2 {
        return mask.clone();
    }
    let set = mask.set_cells();
    let shift = |offset: usize| -> Vec<usize> {
        let (dx, dy) = (offset % spec.width, offset / spec.width);
        set.iter()
            .map(|&c| {
                let (x, y) = spec.coords(c);
                spec.index((x + dx) % spec.width, (y + dy) % spec.height)
            })
            .collect()
    };
    let mut best: Option<(usize, Vec<usize>)> = None;
    for _ in 0..TRANSLATION_ATTEMPTS {
        let cells = shift(1 + rng.index(spec.cell_count() - 1));
        let overlap = cells.iter().filter(|&&c| mask.bits[c]).count();
        if best.as_ref().is_none_or(|(o, _)| overlap < *o) {
            best = Some((overlap, cells));
        }
        if overlap == 0 {
            break;
        }
    }
    let (_, cells) = best.expect("at least one attempt");
    CriticalMask::from_cells(*spec, &cells)
}

/// Draws a collision-free configuration whose base lies in a uniformly chosen set cell.
pub fn sample_critical(mask: &CriticalMask, env: &Environment, rng: &mut Rng) -> Result<Configuration> {
    let cells = mask.set_cells();
    if cells.is_empty() {
        return Err(Error::EmptyMask);
    }
    for _ in 0..CELL_ATTEMPTS {
        let cell = cells[rng.index(cells.len())];
        if let Some(q) = sample_in_cell(cell, &mask.spec, env, rng) {
            return Ok(q);
        }
    }
    Err(Error::InfeasibleMask(CELL_ATTEMPTS * DIM_ATTEMPTS))
}

/// Seeds drawn from `n` distinct set cells chosen uniformly without replacement. Cells with
/// no collision-free configuration are skipped, so fewer than `n` seeds may come back.
pub fn critical_seeds(mask: &CriticalMask, n: usize, env: &Environment, rng: &mut Rng) -> Vec<Configuration> {
    let cells = mask.set_cells();
    if n > cells.len() {
        log::warn!("requested {n} critical seeds from a mask with {} cells", cells.len());
    }
    let mut seeds = Vec::with_capacity(n.min(cells.len()));
    for k in rng.choose_distinct(cells.len(), n) {
        match sample_in_cell(cells[k], &mask.spec, env, rng) {
            Some(q) => seeds.push(q),
            None => log::debug!("critical cell {} has no collision-free configuration", cells[k]),
        }
    }
    seeds
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Aabb, Obstacle, Robot};

    fn spec(n: usize) -> GridSpec {
        GridSpec::new(n, n, Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(10.0, 10.0))).unwrap()
    }

    fn grid(values: Vec<f64>, n: usize) -> CriticalityGrid {
        CriticalityGrid {
            spec: spec(n),
            values,
            plan_count: 1,
        }
    }

    #[test]
    fn uniform_grid_sets_every_positive_cell() {
        let mut v = vec![3.0; 16];
        v[2] = 0.0;
        let m = binarize(&grid(v, 4), 0.1).unwrap();
        assert_eq!(m.count(), 15);
        assert!(!m.bits[2]);
    }

    #[test]
    fn outlier_alone_is_set() {
        let mut v = vec![1.0; 16];
        v[9] = 50.0;
        let m = binarize(&grid(v, 4), 0.05).unwrap();
        assert_eq!(m.set_cells(), vec![9]);
    }

    #[test]
    fn all_zero_grid_is_an_error() {
        assert_eq!(binarize(&grid(vec![0.0; 16], 4), 0.1), Err(Error::EmptyGrid));
        assert!(binarize(&grid(vec![1.0; 16], 4), 1.0).is_err());
    }

    #[test]
    fn set_fraction_is_within_quantile_and_ties() {
        let mut rng = Rng::new(12);
        for _ in 0..200 {
            let n = 8;
            // few distinct levels to force ties
            let v: Vec<f64> = (0..n * n)
                .map(|_| {
                    if rng.chance(0.3) {
                        0.0
                    } else {
                        (rng.index(6) + 1) as f64
                    }
                })
                .collect();
            let q = rng.uniform(0.01, 0.99);
            let g = grid(v.clone(), n);
            let m = binarize(&g, q).unwrap();
            let positive: Vec<f64> = v.iter().copied().filter(|&x| x > 0.0).collect();
            let p = positive.len() as f64;
            let threshold = v
                .iter()
                .zip(&m.bits)
                .filter(|(_, &b)| b)
                .map(|(&x, _)| x)
                .fold(f64::MAX, f64::min);
            let ties = positive.iter().filter(|&&x| x == threshold).count() as f64;
            let frac = m.count() as f64 / p;
            assert!(frac >= q - 1e-12 && frac <= q + ties / p + 1e-12, "q={q} frac={frac}");
            assert!(m.bits.iter().zip(&v).all(|(&b, &x)| !b || x > 0.0));
        }
    }

    #[test]
    fn score_extremes() {
        let s = spec(4);
        let plans = MotionPlanSet::new(
            "t",
            vec![vec![
                Configuration::new(vec![1.0, 1.0]),
                Configuration::new(vec![9.0, 1.0]),
            ]],
        );
        let full = CriticalMask::new(s, vec![true; 16]).unwrap();
        assert_eq!(score_region(&full, &plans).unwrap(), 1.0);
        let far = CriticalMask::from_cells(s, &[s.index(3, 3)]);
        assert_eq!(score_region(&far, &plans).unwrap(), 0.0);
        let empty = CriticalMask::from_cells(s, &[]);
        assert_eq!(score_region(&empty, &plans), Err(Error::EmptyMask));
    }

    fn open_env() -> Environment {
        Environment::new(
            Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(10.0, 10.0)),
            vec![],
            Robot::rectangle(0.3, 0.2),
        )
        .unwrap()
    }

    #[test]
    fn single_cell_sample_lands_in_that_cell() {
        let env = open_env();
        let s = spec(10);
        let cell = s.index(4, 6);
        let m = CriticalMask::from_cells(s, &[cell]);
        let mut rng = Rng::new(1);
        for _ in 0..100 {
            let q = sample_critical(&m, &env, &mut rng).unwrap();
            assert_eq!(s.cell_of(Vec2::new(q[0], q[1])), cell);
            assert!(env.is_collision_free(&q));
        }
        let a = sample_critical(&m, &env, &mut Rng::new(5)).unwrap();
        let b = sample_critical(&m, &env, &mut Rng::new(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn infeasible_mask_errors() {
        let env = Environment::new(
            Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(10.0, 10.0)),
            vec![Obstacle::rect((0.0, 0.0), (5.0, 5.0))],
            Robot::Disc { radius: 0.2 },
        )
        .unwrap();
        let s = spec(10);
        let m = CriticalMask::from_cells(s, &[s.index(1, 1)]);
        assert!(matches!(
            sample_critical(&m, &env, &mut Rng::new(1)),
            Err(Error::InfeasibleMask(_))
        ));
        assert!(critical_seeds(&m, 1, &env, &mut Rng::new(1)).is_empty());
    }

    #[test]
    fn seeds_come_from_distinct_cells() {
        let env = open_env();
        let s = spec(10);
        let cells: Vec<usize> = (20..40).collect();
        let m = CriticalMask::from_cells(s, &cells);
        let seeds = critical_seeds(&m, 12, &env, &mut Rng::new(3));
        let mut used: Vec<usize> = seeds.iter().map(|q| s.cell_of(Vec2::new(q[0], q[1]))).collect();
        assert!(used.iter().all(|c| cells.contains(c)));
        used.sort_unstable();
        used.dedup();
        assert_eq!(used.len(), seeds.len());
    }

    #[test]
    fn translation_keeps_area_and_moves_the_region() {
        let spec = GridSpec::new(8, 6, Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(8.0, 6.0))).unwrap();
        let mask = CriticalMask::from_cells(spec, &[0, 1, 9, 20, 47]);
        let mut rng = Rng::new(3);
        for _ in 0..100 {
            let t = translated_mask(&mask, &mut rng);
            assert_eq!(t.count(), mask.count());
            assert!(t.set_cells().iter().all(|&c| !mask.bits[c]));
        }
    }

    #[test]
    fn crowded_grid_takes_the_least_overlap() {
        // a full row can only land on another row, so any vertical shift is disjoint
        let spec = GridSpec::new(4, 4, Aabb::new(Vec2::new(0.0, 0.0), Vec2::new(4.0, 4.0))).unwrap();
        let row = CriticalMask::from_cells(spec, &[4, 5, 6, 7]);
        let t = translated_mask(&row, &mut Rng::new(1));
        assert_eq!(t.count(), 4);
        assert!(t.set_cells().iter().all(|&c| !row.bits[c]));
        // three quarters of the grid always overlaps itself; the count is still kept
        let big = CriticalMask::from_cells(spec, &(0..12).collect::<Vec<_>>());
        let t = translated_mask(&big, &mut Rng::new(2));
        assert_eq!(t.count(), 12);
        let overlap = t.set_cells().iter().filter(|&&c| big.bits[c]).count();
        assert_eq!(overlap, 8);
    }
}
