//! Negative-eigenvalue counting for one-dimensional Schrödinger operators
//! with point interactions on a finite set of sites.
//!
//! Two interaction families are covered. For delta interactions the count
//! equals the negative inertia of a symmetric tridiagonal matrix built from
//! the strengths and the site gaps; the same number falls out of a scalar
//! pivot recurrence, out of the signature of a piecewise-linear comparison
//! solution, and out of an independent transfer-matrix scan of the actual
//! operator. For delta-prime interactions the count is simply the number of
//! negative strengths, certified by the inertia of a banded window matrix.
//! Counts run on plain floats or on exact rationals, where every branch
//! decision of the recurrences is exact.
//!
//! ```
//! use kappa_core::model::parse_config;
//! use kappa_core::verify::run_all;
//!
//! let cfg = parse_config(r#"{"kind":"delta","points":[0,1],"strengths":[-3,-3]}"#).unwrap();
//! let report = run_all(&cfg, true).unwrap();
//! assert!(report.agreement);
//! assert_eq!(report.methods[0].total(), 2);
//! ```

pub mod dense;
pub mod delta_prime;
pub mod error;
pub mod jacobi;
pub mod model;
pub mod oracle;
pub mod recurrence;
pub mod report;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use model::{AnyConfig, CountReport, ExtendedReal, InteractionKind, Method, PointConfig};
pub use scalar::{Scalar, ScalarMode, Tol};
