//! Metric axioms, exponent monotonicity and the crossing oracle against brute force.

mod common;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn symmetric(u in 0.0..1.0f64, v in 0.0..1.0f64, alpha in 0.0..1.0f64) {
        common::symmetric((u, v, alpha))?;
    }

    #[test]
    fn triangle_inequality(u in 0.0..1.0f64, v in 0.0..1.0f64, w in 0.0..1.0f64, alpha in 0.0..1.0f64) {
        common::triangle((u, v, w, alpha))?;
    }

    #[test]
    fn nonincreasing_in_alpha(u in 0.0..1.0f64, v in 0.0..1.0f64, a1 in 0.0..1.0f64, a2 in 0.0..1.0f64) {
        common::nonincreasing_in_alpha((u, v, a1, a2))?;
    }

    #[test]
    fn crossing_oracle_matches_brute_force(case in common::crossing_case()) {
        common::crossing_matches_brute_force(case)?;
    }
}
