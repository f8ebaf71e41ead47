//! Text formats: PGM rasters, plan CSV and the roadmap file.

mod pgm;
mod plans;
mod roadmap_file;

pub use pgm::{read_grid_pgm, read_mask_pgm, write_grid_pgm, write_mask_pgm, write_raster_pgm, GridMeta, Pgm};
pub use plans::{read_path_csv, read_plans_csv, write_path_csv, write_plans_csv};
pub use roadmap_file::{read_roadmap, write_roadmap, ROADMAP_FORMAT_VERSION};
