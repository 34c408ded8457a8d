//! Planar slit domains, subhyperbolic lengths and weak slice checks.

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod json;
pub mod metrics;
pub mod report;
pub mod slices;
pub mod svg;

pub use error::{Error, Result};

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}
