//! Weak slice datasets and their checks.

pub mod census;
pub mod checks;
pub mod corridor;
pub mod region;
pub mod witness;

pub use census::{census_aggregate, dyadic_census, CensusRow};
pub use checks::{
    check_slice_condition, check_wsplus, evaluate_dataset, max_component_diameter, measure_dataset, measure_plus, DatasetMeasurements,
    PlusMeasurements, PlusOptions,
};
pub use corridor::{admissible_for_pair, make_corridor_slices, CorridorSlice, SliceKind};
pub use region::{clipped_diameter, dataset_from_json, dataset_to_json, SliceRegion, WsliceDataset};
pub use witness::{slice_failure_witness, Witness, WitnessVerdict};
