//! Canonical JSON report emission.
//!
//! Reports must be byte-identical across runs and platforms: keys sorted,
//! floats always printed with 17 significant digits, `\n` line endings.
//! serde_json's shortest-round-trip float formatting does not give that, so
//! reports are built from this small JSON value type instead.

use crate::model::{CountReport, Method};
use crate::scalar::format_rational;
use num_rational::BigRational;
use std::collections::BTreeMap;

/// Report schema version stamped into every JSON document.
pub const SCHEMA_VERSION: u64 = 1;

/// Fixed 17-significant-digit float formatting.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(BTreeMap<String, Json>),
}

impl Json {
    pub fn obj(entries: Vec<(&str, Json)>) -> Json {
        Json::Obj(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn strings(items: &[String]) -> Json {
        Json::Arr(items.iter().map(|s| Json::Str(s.clone())).collect())
    }

    pub fn usize(v: usize) -> Json {
        Json::Int(v as i64)
    }

    pub fn write(&self, out: &mut String) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => out.push_str(&i.to_string()),
            Json::Float(v) => out.push_str(&format_f64(*v)),
            Json::Str(s) => write_escaped(s, out),
            Json::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Obj(map) => {
                out.push('{');
                for (i, (k, v)) in map.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_escaped(k, out);
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }

}

impl std::fmt::Display for Json {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut out = String::new();
        self.write(&mut out);
        f.write_str(&out)
    }
}

/// Rational list rendered as exact `p/q` strings.
pub fn format_rational_list(items: &[BigRational]) -> Json {
    Json::Arr(items.iter().map(|r| Json::Str(format_rational(r))).collect())
}

fn write_escaped(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

/// JSON form of a single counting report.
pub fn count_report_json(report: &CountReport) -> Json {
    Json::obj(vec![
        ("diagnostics", Json::strings(&report.diagnostics)),
        ("kappa_minus", Json::Int(report.kappa_minus as i64)),
        ("method", Json::Str(report.method.label().to_string())),
        ("n_infinity", Json::Int(report.n_infinity as i64)),
        ("schema", Json::Int(SCHEMA_VERSION as i64)),
        ("total", Json::Int(report.total() as i64)),
    ])
}

/// Cross-verification outcome across all applicable methods.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub methods: Vec<CountReport>,
    pub agreement: bool,
    pub first_disagreement: Option<(Method, Method)>,
    /// Config document echo, already in canonical form.
    pub config_echo: Json,
    /// Wall-clock per method; omitted from reports unless requested, so the
    /// default output stays byte-deterministic.
    pub timings_ms: Vec<(Method, f64)>,
}

impl VerifyReport {
    pub fn from_methods(methods: Vec<CountReport>, config_echo: Json) -> Self {
        let mut agreement = true;
        let mut first_disagreement = None;
        'outer: for (i, a) in methods.iter().enumerate() {
            for b in methods.iter().skip(i + 1) {
                if a.total() != b.total() {
                    agreement = false;
                    first_disagreement = Some((a.method, b.method));
                    break 'outer;
                }
            }
        }
        VerifyReport { methods, agreement, first_disagreement, config_echo, timings_ms: Vec::new() }
    }

    pub fn to_json(&self, with_timings: bool) -> Json {
        let mut entries = vec![
            ("agreement", Json::Bool(self.agreement)),
            ("config", self.config_echo.clone()),
            (
                "first_disagreement",
                match self.first_disagreement {
                    Some((a, b)) => Json::Arr(vec![
                        Json::Str(a.label().to_string()),
                        Json::Str(b.label().to_string()),
                    ]),
                    None => Json::Null,
                },
            ),
            (
                "methods",
                Json::Arr(self.methods.iter().map(count_report_json).collect()),
            ),
            ("schema", Json::Int(SCHEMA_VERSION as i64)),
        ];
        if with_timings {
            let map: BTreeMap<String, Json> = self
                .timings_ms
                .iter()
                .map(|(m, t)| (m.label().to_string(), Json::Float(*t)))
                .collect();
            entries.push(("timings_ms", Json::Obj(map)));
        }
        Json::obj(entries)
    }
}
