//! Exponent bookkeeping: the scaling identity, family duality and the algebra of combined specs.

use proptest::prelude::*;
use wslice_core::experiments::scaling::{log2_ratio_over_j, primed};
use wslice_core::experiments::{classify, combine_specs, predicted_alpha_set, probe_algebra, AlphaClass, CombineMode};
use wslice_core::geometry::{DecoratedSquareSpec, Family};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ratio_exponent_is_alpha_minus_alpha0(a0 in 0.01..0.99f64, alpha in 0.0..1.0f64, p in 1.0..6.0f64, dq in 1.0..6.0f64, j in 2u32..=12) {
        let q = p + dq;
        let (pp, qp) = primed(Family::Thm43ThinShort, a0, p, q).unwrap();
        let v = log2_ratio_over_j(j, alpha, p, q, pp, qp);
        prop_assert!((v - (alpha - a0)).abs() <= 1e-12, "{} vs {}", v, alpha - a0);
        let (fp, fq) = primed(Family::Thm43FatLong, a0, p, q).unwrap();
        let w = log2_ratio_over_j(j, alpha, p, q, fp, fq);
        prop_assert!((w + (alpha - a0)).abs() <= 1e-12, "{} vs {}", w, a0 - alpha);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Thin-short and fat-long layers trade places away from `α₀`.
    #[test]
    fn reflection_duality(a0 in 0.05..0.95f64, alpha in 0.0..1.0f64) {
        prop_assume!((alpha - a0).abs() > 1e-9);
        let thin = DecoratedSquareSpec::thm43(a0, 3.0, 6.0, &[2]).unwrap();
        let fat = DecoratedSquareSpec::ex44(a0, 3.0, 6.0, &[2]).unwrap();
        prop_assert_ne!(classify(&thin, alpha), classify(&fat, alpha));
        prop_assert_eq!(classify(&thin, alpha) == AlphaClass::WsliceConsistent, alpha < a0);
    }

    #[test]
    fn union_is_union_of_sets(a in 0.05..0.95f64, b in 0.05..0.95f64, probe in proptest::collection::vec(0.0..1.0f64, 20)) {
        prop_assume!((a - b).abs() > 0.02);
        let s = [DecoratedSquareSpec::thm43(a, 3.0, 6.0, &[2, 3]).unwrap(), DecoratedSquareSpec::ex44(b, 3.0, 6.0, &[2, 3]).unwrap()];
        let u = combine_specs(CombineMode::Union, &s).unwrap();
        let mut alphas = probe;
        alphas.extend([a, b, 0.0]);
        for (alpha, got, want) in probe_algebra(CombineMode::Union, &s, &u, &alphas) {
            prop_assert_eq!(got, want, "alpha = {}", alpha);
            prop_assert_eq!(predicted_alpha_set(&u).contains(alpha), got);
        }
    }

    #[test]
    fn intersection_is_intersection_of_sets(kinds in (0u8..3, 0u8..3), a in 0.05..0.6f64, b in 0.05..0.6f64, probe in proptest::collection::vec(0.0..1.0f64, 20)) {
        let make = |k: u8, x: f64| match k {
            0 => DecoratedSquareSpec::thm43(x, 3.0, 6.0, &[2, 4]),
            1 => DecoratedSquareSpec::ex44(x, 3.0, 6.0, &[2, 4]),
            _ => DecoratedSquareSpec::ex46(x, x + 0.3, 3.0, 6.0, &[2, 4]),
        }
        .unwrap();
        let s = [make(kinds.0, a), make(kinds.1, b)];
        let i = combine_specs(CombineMode::Intersection, &s).unwrap();
        let mut alphas = probe;
        alphas.extend([a, b, a + 0.3, b + 0.3, 0.0]);
        for (alpha, got, want) in probe_algebra(CombineMode::Intersection, &s, &i, &alphas) {
            prop_assert_eq!(got, want, "alpha = {}", alpha);
        }
    }
}
