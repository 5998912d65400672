//! Domain types and configuration ingestion.

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Scalar, ScalarMode, Tol};
use num_rational::BigRational;
use serde_json::Value;

/// Which family of point interactions a configuration describes.
///
/// `Delta` keeps the solution continuous and jumps its derivative by
/// `strength * f(x)`. `DeltaPrime` keeps the derivative continuous and jumps
/// the value by `strength * f'(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InteractionKind {
    Delta,
    DeltaPrime,
}

impl InteractionKind {
    pub fn label(&self) -> &'static str {
        match self {
            InteractionKind::Delta => "delta",
            InteractionKind::DeltaPrime => "delta_prime",
        }
    }
}

/// A finite ordered set of interaction sites with their strengths.
///
/// Invariants (enforced on construction): sites strictly increasing, one
/// strength per site, every derived gap strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfig<S: Scalar> {
    kind: InteractionKind,
    points: Vec<S>,
    strengths: Vec<S>,
    gaps: Vec<S>,
}

impl<S: Scalar> PointConfig<S> {
    pub fn new(kind: InteractionKind, points: Vec<S>, strengths: Vec<S>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::validation("points", "need at least one point"));
        }
        if strengths.len() != points.len() {
            return Err(Error::validation(
                "strengths",
                format!("{} strengths for {} points", strengths.len(), points.len()),
            ));
        }
        if !S::EXACT {
            for (field, list) in [("points", &points), ("strengths", &strengths)] {
                if let Some(i) = list.iter().position(|v| !v.to_f64().is_finite()) {
                    return Err(Error::validation(field, format!("entry {i} is not finite")));
                }
            }
        }
        let gaps = gaps(&points)?;
        Ok(PointConfig { kind, points, strengths, gaps })
    }

    pub fn delta(points: Vec<S>, strengths: Vec<S>) -> Result<Self> {
        Self::new(InteractionKind::Delta, points, strengths)
    }

    pub fn delta_prime(points: Vec<S>, strengths: Vec<S>) -> Result<Self> {
        Self::new(InteractionKind::DeltaPrime, points, strengths)
    }

    pub fn kind(&self) -> InteractionKind {
        self.kind
    }

    /// Number of interaction sites.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires n >= 1
    }

    pub fn points(&self) -> &[S] {
        &self.points
    }

    pub fn strengths(&self) -> &[S] {
        &self.strengths
    }

    /// Gaps d_k = x_{k+1} - x_k, length n-1.
    pub fn gaps(&self) -> &[S] {
        &self.gaps
    }

    /// Strength of site `k` (1-based, matching the usual indexing).
    pub fn strength(&self, k: usize) -> &S {
        &self.strengths[k - 1]
    }

    /// Gap d_k between sites k and k+1 (1-based, k in 1..n).
    pub fn gap(&self, k: usize) -> &S {
        &self.gaps[k - 1]
    }

    /// 1/d_k with the boundary convention 1/d_0 = 1/d_n = 0.
    pub fn gap_inv_or_zero(&self, k: usize) -> S {
        if k == 0 || k >= self.len() {
            S::zero()
        } else {
            self.gap(k).clone().recip()
        }
    }

    /// Magnitude of the configuration data, used for relative zero tests:
    /// max of |strength_k| and 1/d_k.
    pub fn pivot_scale(&self) -> f64 {
        let s = self
            .strengths
            .iter()
            .map(|a| a.to_f64().abs())
            .fold(0.0f64, f64::max);
        let g = self
            .gaps
            .iter()
            .map(|d| d.to_f64().abs().recip())
            .fold(0.0f64, f64::max);
        s.max(g).max(1.0)
    }

    /// Zero-test tolerance for this configuration at the given epsilon.
    pub fn tol(&self, eps: f64) -> Tol {
        if S::EXACT {
            Tol::exact()
        } else {
            Tol::new(eps, self.pivot_scale())
        }
    }
}

/// Consecutive differences of a strictly increasing list; empty for n = 1.
pub fn gaps<S: Scalar>(points: &[S]) -> Result<Vec<S>> {
    let mut out = Vec::with_capacity(points.len().saturating_sub(1));
    for (i, pair) in points.windows(2).enumerate() {
        let d = pair[1].clone() - pair[0].clone();
        if !d.is_positive_val() {
            return Err(Error::validation(
                "points",
                format!("not strictly increasing at index {i}: gap {d} <= 0"),
            ));
        }
        out.push(d);
    }
    Ok(out)
}

/// A value of the counting recurrences: finite, or the distinguished
/// infinity produced right after a zero entry. No arithmetic is ever done
/// on `Infinity`; it is only counted.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedReal<S: Scalar> {
    Finite(S),
    Infinity,
}

impl<S: Scalar> ExtendedReal<S> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ExtendedReal::Infinity)
    }

    pub fn as_finite(&self) -> Option<&S> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::Infinity => None,
        }
    }
}

/// Label of the counting method that produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Recurrence,
    JacobiInertia,
    PhiSignature,
    StrengthCount,
    Oracle,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Recurrence => "recurrence",
            Method::JacobiInertia => "jacobi_inertia",
            Method::PhiSignature => "phi_signature",
            Method::StrengthCount => "strength_count",
            Method::Oracle => "oracle",
        }
    }
}

/// Outcome of a counting method: negative squares plus the infinite entries
/// of the recurrence (their sum is the full count).
#[derive(Debug, Clone, PartialEq)]
pub struct CountReport {
    pub method: Method,
    pub kappa_minus: usize,
    pub n_infinity: usize,
    pub diagnostics: Vec<String>,
}

impl CountReport {
    pub fn new(method: Method, kappa_minus: usize, n_infinity: usize) -> Self {
        CountReport { method, kappa_minus, n_infinity, diagnostics: Vec::new() }
    }

    pub fn with_diagnostics(mut self, diagnostics: Vec<String>) -> Self {
        self.diagnostics = diagnostics;
        self
    }

    /// Total count of negative squares.
    pub fn total(&self) -> usize {
        self.kappa_minus + self.n_infinity
    }
}

/// A parsed configuration on either scalar backend.
#[derive(Debug, Clone)]
pub enum AnyConfig {
    Float { config: PointConfig<f64>, epsilon: f64 },
    Rational { config: PointConfig<BigRational> },
}

impl AnyConfig {
    pub fn kind(&self) -> InteractionKind {
        match self {
            AnyConfig::Float { config, .. } => config.kind(),
            AnyConfig::Rational { config } => config.kind(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyConfig::Float { config, .. } => config.len(),
            AnyConfig::Rational { config } => config.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mode(&self) -> ScalarMode {
        match self {
            AnyConfig::Float { epsilon, .. } => ScalarMode::Float { epsilon: *epsilon },
            AnyConfig::Rational { .. } => ScalarMode::Rational,
        }
    }

    /// Float view of the configuration (rationals rounded to f64).
    pub fn to_float(&self) -> PointConfig<f64> {
        match self {
            AnyConfig::Float { config, .. } => config.clone(),
            AnyConfig::Rational { config } => PointConfig::new(
                config.kind(),
                config.points().iter().map(Scalar::to_f64).collect(),
                config.strengths().iter().map(Scalar::to_f64).collect(),
            )
            .expect("valid rational config stays valid as floats"),
        }
    }
}

fn field_number(value: &Value, field: &str, index: usize) -> Result<f64> {
    match value {
        Value::Number(n) => n
            .as_f64()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::validation(field, format!("entry {index} is not finite"))),
        other => Err(Error::parse(
            field,
            format!("entry {index} must be a number, got {other}"),
        )),
    }
}

fn field_rational(value: &Value, field: &str, index: usize) -> Result<BigRational> {
    match value {
        Value::Number(n) => {
            let v = n
                .as_f64()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::validation(field, format!("entry {index} is not finite")))?;
            Ok(<BigRational as Scalar>::from_f64(v))
        }
        Value::String(s) => parse_rational(s)
            .ok_or_else(|| Error::parse(field, format!("entry {index}: bad rational `{s}`"))),
        other => Err(Error::parse(
            field,
            format!("entry {index} must be a number or \"p/q\" string, got {other}"),
        )),
    }
}

fn field_list<'a>(doc: &'a Value, field: &str) -> Result<&'a Vec<Value>> {
    match doc.get(field) {
        Some(Value::Array(items)) => Ok(items),
        Some(other) => Err(Error::parse(field, format!("must be an array, got {other}"))),
        None => Err(Error::parse(field, "missing required field")),
    }
}

/// Parse a configuration document.
///
/// ```json
/// { "kind": "delta" | "delta_prime",
///   "points": [...], "strengths": [...],
///   "scalar": "float64" | "rational",   // optional, default float64
///   "epsilon": 1e-12 }                  // optional, Float-mode zero tolerance
/// ```
///
/// In rational mode, points and strengths also accept `"p/q"` strings.
pub fn parse_config(text: &str) -> Result<AnyConfig> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::parse("document", e.to_string()))?;
    if !doc.is_object() {
        return Err(Error::parse("document", "top level must be an object"));
    }

    let kind = match doc.get("kind").and_then(Value::as_str) {
        Some("delta") => InteractionKind::Delta,
        Some("delta_prime") => InteractionKind::DeltaPrime,
        Some(other) => {
            return Err(Error::parse("kind", format!("unknown kind `{other}`")));
        }
        None => return Err(Error::parse("kind", "missing or non-string")),
    };

    let scalar = match doc.get("scalar") {
        None => "float64",
        Some(Value::String(s)) if s == "float64" || s == "rational" => s,
        Some(other) => {
            return Err(Error::parse("scalar", format!("expected \"float64\" or \"rational\", got {other}")));
        }
    };

    let epsilon = match doc.get("epsilon") {
        None => ScalarMode::DEFAULT_EPSILON,
        Some(v) => v
            .as_f64()
            .filter(|e| e.is_finite() && *e >= 0.0)
            .ok_or_else(|| Error::parse("epsilon", "must be a nonnegative number"))?,
    };

    let points_raw = field_list(&doc, "points")?;
    let strengths_raw = field_list(&doc, "strengths")?;

    if scalar == "rational" {
        let points = points_raw
            .iter()
            .enumerate()
            .map(|(i, v)| field_rational(v, "points", i))
            .collect::<Result<Vec<_>>>()?;
        let strengths = strengths_raw
            .iter()
            .enumerate()
            .map(|(i, v)| field_rational(v, "strengths", i))
            .collect::<Result<Vec<_>>>()?;
        Ok(AnyConfig::Rational { config: PointConfig::new(kind, points, strengths)? })
    } else {
        let points = points_raw
            .iter()
            .enumerate()
            .map(|(i, v)| field_number(v, "points", i))
            .collect::<Result<Vec<_>>>()?;
        let strengths = strengths_raw
            .iter()
            .enumerate()
            .map(|(i, v)| field_number(v, "strengths", i))
            .collect::<Result<Vec<_>>>()?;
        Ok(AnyConfig::Float { config: PointConfig::new(kind, points, strengths)?, epsilon })
    }
}

/// Serialize a configuration back into the document format accepted by
/// [`parse_config`]. Float mode round-trips bit-exactly, rational mode
/// field-exactly.
pub fn serialize_config(config: &AnyConfig) -> String {
    fn join<T, F: Fn(&T) -> String>(items: &[T], f: F) -> String {
        items.iter().map(f).collect::<Vec<_>>().join(",")
    }
    match config {
        AnyConfig::Float { config, epsilon } => format!(
            "{{\"epsilon\":{},\"kind\":\"{}\",\"points\":[{}],\"scalar\":\"float64\",\"strengths\":[{}]}}",
            crate::report::format_f64(*epsilon),
            config.kind().label(),
            join(config.points(), |v| crate::report::format_f64(*v)),
            join(config.strengths(), |v| crate::report::format_f64(*v)),
        ),
        AnyConfig::Rational { config } => format!(
            "{{\"kind\":\"{}\",\"points\":[{}],\"scalar\":\"rational\",\"strengths\":[{}]}}",
            config.kind().label(),
            join(config.points(), |v| format!("\"{}\"", format_rational(v))),
            join(config.strengths(), |v| format!("\"{}\"", format_rational(v))),
        ),
    }
}
