//! Browser bindings for the interactive demo page.
//!
//! Three operations, all JSON-string in / JSON-string out so the page needs
//! no bespoke ABI: cross-verify a configuration, sweep one strength, and
//! sample the oracle's secular function for plotting. Errors come back as
//! `{"error": "..."}` rather than exceptions.

use kappa_core::jacobi::{build_s_finite, gerschgorin_lower_bound, sturm_negative_count};
use kappa_core::model::{parse_config, InteractionKind, PointConfig};
use kappa_core::oracle::{count_bound_states, secular, ScanSettings};
use kappa_core::recurrence::{count_from_gamma, gamma_finite};
use kappa_core::report::Json;
use kappa_core::verify::run_all;
use wasm_bindgen::prelude::wasm_bindgen;

fn error_json(message: impl std::fmt::Display) -> String {
    Json::obj(vec![("error", Json::Str(message.to_string()))]).to_string()
}

/// Run every applicable counting method plus the oracle and return the
/// cross-verification report.
#[wasm_bindgen]
pub fn verify_json(config_json: &str) -> String {
    let config = match parse_config(config_json) {
        Ok(c) => c,
        Err(e) => return error_json(e),
    };
    match run_all(&config, true) {
        Ok(report) => report.to_json(false).to_string(),
        Err(e) => error_json(e),
    }
}

fn sweep_counts(config: &PointConfig<f64>, epsilon: f64) -> (usize, usize, usize) {
    let tol = config.tol(epsilon);
    match config.kind() {
        InteractionKind::Delta => (
            count_from_gamma(&gamma_finite(config, &tol), &tol).total(),
            sturm_negative_count(&build_s_finite(config), &0.0, &tol),
            gerschgorin_lower_bound(config),
        ),
        InteractionKind::DeltaPrime => {
            let strengths =
                kappa_core::delta_prime::count_negative_strengths(config, &tol).total();
            let inertia = kappa_core::delta_prime::windowed_inertia_count(config, &tol)
                .map(|r| r.total())
                .unwrap_or(strengths);
            (strengths, inertia, strengths)
        }
    }
}

/// Sweep strength `index` (zero-based) from `from` to `to` inclusive and
/// return `{rows: [{value, recurrence, jacobi, lower_bound}, ...]}`.
#[wasm_bindgen]
pub fn sweep_json(config_json: &str, index: usize, from: f64, to: f64, steps: usize) -> String {
    let config = match parse_config(config_json) {
        Ok(c) => c,
        Err(e) => return error_json(e),
    };
    if steps < 2 {
        return error_json("steps must be at least 2");
    }
    if index >= config.len() {
        return error_json(format!("strength index {index} outside 0..{}", config.len()));
    }
    let base = config.to_float();
    let epsilon = config.mode().epsilon().max(1e-15);

    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let value = from + (to - from) * i as f64 / (steps - 1) as f64;
        let mut strengths = base.strengths().to_vec();
        strengths[index] = value;
        let swept = match PointConfig::new(base.kind(), base.points().to_vec(), strengths) {
            Ok(c) => c,
            Err(e) => return error_json(e),
        };
        let (recurrence, jacobi, lower) = sweep_counts(&swept, epsilon);
        rows.push(Json::obj(vec![
            ("jacobi", Json::usize(jacobi)),
            ("lower_bound", Json::usize(lower)),
            ("recurrence", Json::usize(recurrence)),
            ("value", Json::Float(value)),
        ]));
    }
    Json::obj(vec![("rows", Json::Arr(rows))]).to_string()
}

/// Sample the secular function D(kappa) on `samples` points of
/// `(0, kappa_max]` and locate its roots: `{kappas, values, roots}`.
/// Pass `kappa_max <= 0` to size the range automatically.
#[wasm_bindgen]
pub fn secular_curve_json(config_json: &str, kappa_max: f64, samples: usize) -> String {
    let config = match parse_config(config_json) {
        Ok(c) => c,
        Err(e) => return error_json(e),
    };
    let float = config.to_float();
    let mut settings = ScanSettings::auto_for(&float);
    if kappa_max > 0.0 {
        settings.kappa_max = kappa_max;
    }
    let samples = samples.clamp(16, 20_000);

    let scan = match count_bound_states(&float, &settings) {
        Ok(s) => s,
        Err(e) => return error_json(e),
    };
    let mut kappas = Vec::with_capacity(samples);
    let mut values = Vec::with_capacity(samples);
    for i in 0..samples {
        let k = settings.root_tol
            + (settings.kappa_max - settings.root_tol) * i as f64 / (samples - 1) as f64;
        kappas.push(Json::Float(k));
        values.push(Json::Float(secular(&float, k)));
    }
    Json::obj(vec![
        ("count", Json::usize(scan.count)),
        ("kappas", Json::Arr(kappas)),
        ("roots", Json::Arr(scan.roots.iter().map(|r| Json::Float(*r)).collect())),
        ("values", Json::Arr(values)),
    ])
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    const DELTA: &str = r#"{"kind":"delta","points":[0,1,2],"strengths":[-1,5,-1]}"#;
    const DPRIME: &str = r#"{"kind":"delta_prime","points":[0,1,2],"strengths":[-1,0.5,-2]}"#;

    #[test]
    fn verify_endpoint_agrees() {
        let out = verify_json(DELTA);
        assert!(out.contains("\"agreement\":true"), "{out}");
        assert!(out.contains("\"total\":1"), "{out}");
        let out = verify_json(DPRIME);
        assert!(out.contains("\"total\":2"), "{out}");
    }

    #[test]
    fn verify_endpoint_reports_errors() {
        let out = verify_json("{\"kind\":\"delta\"}");
        assert!(out.starts_with("{\"error\":"), "{out}");
    }

    #[test]
    fn sweep_endpoint_counts_steps() {
        let out = sweep_json(DELTA, 1, -6.0, 0.0, 5);
        assert_eq!(out.matches("\"value\":").count(), 5, "{out}");
        assert!(out.contains("\"recurrence\":"), "{out}");
        let bad = sweep_json(DELTA, 9, 0.0, 1.0, 3);
        assert!(bad.contains("error"), "{bad}");
    }

    #[test]
    fn secular_endpoint_samples_curve() {
        let single = r#"{"kind":"delta","points":[0],"strengths":[-2]}"#;
        let out = secular_curve_json(single, 4.0, 64);
        assert!(out.contains("\"count\":1"), "{out}");
        assert!(out.contains("\"roots\":["), "{out}");
        assert!(out.matches(',').count() >= 64);
    }
}
