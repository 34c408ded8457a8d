use serde::{Deserialize, Serialize};

use super::region::WsliceDataset;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    /// Slices with `d_S ∈ (2^{i−1}·base, 2^i·base]`.
    pub i: i32,
    pub m: usize,
    pub sum: f64,
}

pub fn dyadic_census(ds: &WsliceDataset, base_scale: f64) -> Vec<CensusRow> {
    let mut rows: std::collections::BTreeMap<i32, CensusRow> = Default::default();
    for s in &ds.slices {
        let mut i = (s.d_s / base_scale).log2().ceil() as i32;
        // guard the bucket edges against rounding in the logarithm
        while s.d_s > (i as f64).exp2() * base_scale {
            i += 1;
        }
        while s.d_s <= ((i - 1) as f64).exp2() * base_scale {
            i -= 1;
        }
        let e = rows.entry(i).or_insert(CensusRow { i, m: 0, sum: 0.0 });
        e.m += 1;
        e.sum += if ds.alpha == 0.0 { 1.0 } else { s.d_s.powf(ds.alpha) };
    }
    rows.into_values().collect()
}

/// `Σ_i m_i (2^i·base)^α`.
pub fn census_aggregate(rows: &[CensusRow], base_scale: f64, alpha: f64) -> f64 {
    rows.iter().map(|r| r.m as f64 * ((r.i as f64).exp2() * base_scale).powf(alpha)).sum()
}
