//! Critical-region estimation from observed motion plans.

mod estimate;
mod grid;
mod mask;
mod training;

pub use estimate::{estimate_mu, plan_cell_counts, smooth, CriticalityGrid, MotionPlanSet};
pub use grid::{rasterize_trace, GridSpec, DEFAULT_GRID_SIZE};
pub use mask::{binarize, critical_seeds, sample_critical, score_region, translated_mask, CriticalMask};
pub use training::{
    generate_training_data, obstacle_raster, sample_free, sample_problems, solve_problems, OccupancyRaster,
    TrainingConfig, TrainingData, TrainingReport, DEFAULT_QUANTILE, DEFAULT_SIGMA,
};
