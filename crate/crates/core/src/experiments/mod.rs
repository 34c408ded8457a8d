//! Scenario runners and their reports.

pub mod alpha_set;
pub mod ex32;
pub mod obstruction;
pub mod report;
pub mod scaling;
pub mod thm43;
pub mod toy;

pub use alpha_set::{
    alpha_set_probe, classify, combine_specs, ex45_trajectories, predicted_alpha_set, probe_algebra, run_combine, run_ex45, AlphaClass, AlphaSet, CombineMode, Ex45Trajectory,
};
pub use ex32::{bisect_c, example32_cell, run_example32, Ex32Options, Ex32Summary, PairOutcome};
pub use obstruction::{obstruction_pair, obstruction_rows, ObstructionProbe, ObstructionRow};
pub use report::{parameter_hash, ExperimentReport, Provenance};
pub use scaling::{exact_l, log2_exact_l, scaling_rows, scaling_table, ScalingRow};
pub use thm43::{run_thm43, ObstructionOptions};
pub use toy::{toy_exhaustion, toy_report, ToyInstance, ToyOutcome};
