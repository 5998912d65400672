//! Property tests for the structural invariants.

use kappa_core::jacobi::{build_s_finite, sturm_negative_count};
use kappa_core::model::{parse_config, serialize_config, AnyConfig, PointConfig};
use kappa_core::recurrence::{count_from_gamma, gamma_finite};
use proptest::prelude::*;

fn delta_config() -> impl Strategy<Value = PointConfig<f64>> {
    (1usize..=8)
        .prop_flat_map(|n| {
            (
                -5.0..5.0f64,
                prop::collection::vec(0.2..3.0f64, n - 1),
                prop::collection::vec(-10.0..10.0f64, n),
            )
        })
        .prop_map(|(start, increments, strengths)| {
            let mut points = vec![start];
            for inc in increments {
                points.push(points.last().unwrap() + inc);
            }
            PointConfig::delta(points, strengths).unwrap()
        })
}

proptest! {
    #[test]
    fn gaps_are_positive(cfg in delta_config()) {
        prop_assert!(cfg.gaps().iter().all(|d| *d > 0.0));
        prop_assert_eq!(cfg.gaps().len() + 1, cfg.len());
    }

    #[test]
    fn float_config_round_trips_bit_exactly(cfg in delta_config()) {
        let any = AnyConfig::Float { config: cfg, epsilon: 1e-12 };
        let text = serialize_config(&any);
        let reparsed = parse_config(&text).unwrap();
        match (&any, &reparsed) {
            (AnyConfig::Float { config: a, .. }, AnyConfig::Float { config: b, .. }) => {
                prop_assert_eq!(a, b);
            }
            _ => prop_assert!(false, "round trip changed the backend"),
        }
    }

    #[test]
    fn recurrence_count_equals_matrix_inertia(cfg in delta_config()) {
        let tol = cfg.tol(1e-12);
        let total = count_from_gamma(&gamma_finite(&cfg, &tol), &tol).total();
        let sturm = sturm_negative_count(&build_s_finite(&cfg), &0.0, &tol);
        prop_assert_eq!(total, sturm);
    }

    #[test]
    fn count_never_exceeds_size(cfg in delta_config()) {
        let tol = cfg.tol(1e-12);
        let total = count_from_gamma(&gamma_finite(&cfg, &tol), &tol).total();
        prop_assert!(total <= cfg.len());
    }
}

proptest! {
    #[test]
    fn rational_round_trip_is_field_exact(
        numers in prop::collection::vec(-50i64..50, 1..6),
        denoms in prop::collection::vec(1i64..20, 1..6),
    ) {
        let n = numers.len().min(denoms.len());
        let points: Vec<String> = (0..n).map(|i| format!("{i}")).collect();
        let strengths: Vec<String> =
            numers.iter().zip(&denoms).take(n).map(|(p, q)| format!("\"{p}/{q}\"")).collect();
        let text = format!(
            "{{\"kind\":\"delta\",\"scalar\":\"rational\",\"points\":[{}],\"strengths\":[{}]}}",
            points.join(","),
            strengths.join(",")
        );
        let cfg = parse_config(&text).unwrap();
        let reparsed = parse_config(&serialize_config(&cfg)).unwrap();
        match (&cfg, &reparsed) {
            (AnyConfig::Rational { config: a }, AnyConfig::Rational { config: b }) => {
                prop_assert_eq!(a, b);
            }
            _ => prop_assert!(false, "round trip changed the backend"),
        }
    }
}
