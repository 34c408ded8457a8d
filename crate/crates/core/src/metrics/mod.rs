//! Subhyperbolic lengths, grid distance estimates and crossing lengths.

pub mod crossing;
pub mod grid;
pub mod paths;
pub mod quadrature;
pub mod uniform;

pub use crossing::{min_crossing_length, min_region_length, CrossingOracle, CrossingResult};
pub use grid::{build_grid, decoration_grid, decoration_patches, GridGraph, GridStats, PatchSpec};
pub use paths::{d_alpha, EstimateKind, PathEstimate};
pub use quadrature::{len_alpha_polyline, DEFAULT_TOL};
pub use uniform::check_uniform_path;
