//! Cross-verification driver: run every counting method that applies to a
//! configuration and compare the totals.

use crate::delta_prime::{count_negative_strengths, windowed_inertia_count};
use crate::error::{Error, Result};
use crate::jacobi::{build_s_finite, sturm_with_diagnostics};
use crate::model::{AnyConfig, CountReport, InteractionKind, Method, PointConfig};
use crate::oracle::{count_bound_states, ScanSettings};
use crate::recurrence::{count_from_gamma, gamma_finite, phi_signature};
use crate::report::{format_rational_list, Json, VerifyReport};
use crate::scalar::{Scalar, Tol};
use std::time::Instant;

fn require_kind<S: Scalar>(
    config: &PointConfig<S>,
    kind: InteractionKind,
    method: Method,
) -> Result<()> {
    if config.kind() != kind {
        return Err(Error::Unsupported(format!(
            "method `{}` applies to {} configurations only",
            method.label(),
            kind.label()
        )));
    }
    Ok(())
}

fn recurrence_report<S: Scalar>(config: &PointConfig<S>, tol: &Tol) -> Result<CountReport> {
    require_kind(config, InteractionKind::Delta, Method::Recurrence)?;
    Ok(count_from_gamma(&gamma_finite(config, tol), tol))
}

fn jacobi_report<S: Scalar>(config: &PointConfig<S>, tol: &Tol) -> Result<CountReport> {
    match config.kind() {
        InteractionKind::Delta => {
            let s = build_s_finite(config);
            let (count, diagnostics) = sturm_with_diagnostics(&s, &S::zero(), tol);
            Ok(CountReport::new(Method::JacobiInertia, count, 0).with_diagnostics(diagnostics))
        }
        InteractionKind::DeltaPrime => windowed_inertia_count(config, tol),
    }
}

fn phi_report<S: Scalar>(config: &PointConfig<S>, tol: &Tol) -> Result<CountReport> {
    require_kind(config, InteractionKind::Delta, Method::PhiSignature)?;
    let phi = phi_signature(config, tol)?;
    Ok(CountReport::new(Method::PhiSignature, phi.sign_changes, 0)
        .with_diagnostics(phi.diagnostics))
}

fn strengths_report<S: Scalar>(config: &PointConfig<S>, tol: &Tol) -> Result<CountReport> {
    require_kind(config, InteractionKind::DeltaPrime, Method::StrengthCount)?;
    Ok(count_negative_strengths(config, tol))
}

fn oracle_report(config: &AnyConfig, settings: Option<ScanSettings>) -> Result<CountReport> {
    let float = config.to_float();
    let settings = settings.unwrap_or_else(|| ScanSettings::auto_for(&float));
    let scan = count_bound_states(&float, &settings)?;
    let mut report = scan.to_report();
    if matches!(config, AnyConfig::Rational { .. }) {
        report
            .diagnostics
            .push("oracle evaluated in float64 on a rational configuration".to_string());
    }
    Ok(report)
}

/// Run one named method.
pub fn run_method(
    config: &AnyConfig,
    method: Method,
    settings: Option<ScanSettings>,
) -> Result<CountReport> {
    match config {
        AnyConfig::Float { config: c, epsilon } => {
            let tol = c.tol(*epsilon);
            match method {
                Method::Recurrence => recurrence_report(c, &tol),
                Method::JacobiInertia => jacobi_report(c, &tol),
                Method::PhiSignature => phi_report(c, &tol),
                Method::StrengthCount => strengths_report(c, &tol),
                Method::Oracle => oracle_report(config, settings),
            }
        }
        AnyConfig::Rational { config: c } => {
            let tol = Tol::exact();
            match method {
                Method::Recurrence => recurrence_report(c, &tol),
                Method::JacobiInertia => jacobi_report(c, &tol),
                Method::PhiSignature => phi_report(c, &tol),
                Method::StrengthCount => strengths_report(c, &tol),
                Method::Oracle => oracle_report(config, settings),
            }
        }
    }
}

/// Methods that apply to a configuration. The signature method needs two
/// sites, so single-site delta configurations skip it.
pub fn applicable_methods(config: &AnyConfig, with_oracle: bool) -> Vec<Method> {
    let mut methods = match config.kind() {
        InteractionKind::Delta => {
            let mut m = vec![Method::Recurrence, Method::JacobiInertia];
            if config.len() >= 2 {
                m.push(Method::PhiSignature);
            }
            m
        }
        InteractionKind::DeltaPrime => vec![Method::StrengthCount, Method::JacobiInertia],
    };
    if with_oracle {
        methods.push(Method::Oracle);
    }
    methods
}

/// Canonical JSON echo of a configuration.
pub fn config_echo_json(config: &AnyConfig) -> Json {
    match config {
        AnyConfig::Float { config: c, epsilon } => Json::obj(vec![
            ("epsilon", Json::Float(*epsilon)),
            ("kind", Json::Str(c.kind().label().to_string())),
            ("points", Json::Arr(c.points().iter().map(|v| Json::Float(*v)).collect())),
            ("scalar", Json::Str("float64".to_string())),
            (
                "strengths",
                Json::Arr(c.strengths().iter().map(|v| Json::Float(*v)).collect()),
            ),
        ]),
        AnyConfig::Rational { config: c } => Json::obj(vec![
            ("kind", Json::Str(c.kind().label().to_string())),
            ("points", format_rational_list(c.points())),
            ("scalar", Json::Str("rational".to_string())),
            ("strengths", format_rational_list(c.strengths())),
        ]),
    }
}

/// Run all applicable methods and compare totals.
pub fn run_all(config: &AnyConfig, with_oracle: bool) -> Result<VerifyReport> {
    let mut reports = Vec::new();
    let mut timings = Vec::new();
    for method in applicable_methods(config, with_oracle) {
        let start = Instant::now();
        let report = run_method(config, method, None)?;
        timings.push((method, start.elapsed().as_secs_f64() * 1e3));
        reports.push(report);
    }
    let mut verify = VerifyReport::from_methods(reports, config_echo_json(config));
    verify.timings_ms = timings;
    Ok(verify)
}
