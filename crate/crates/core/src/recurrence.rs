//! Counting recurrences for delta interactions.
//!
//! The pivot sequence gamma starts at `strength_1 + 1/d_1` and advances by
//! `gamma_{k+1} = strength_{k+1} + 1/d_{k+1} + 1/d_k - (1/d_k^2)/gamma_k`.
//! A zero entry forces the next entry to be the distinguished infinity and
//! restarts the recurrence one step later without the coupling term. The
//! count of negative squares is the number of negative entries plus the
//! number of infinities.
//!
//! Three variants share that step: the finite sequence (boundary terms
//! dropped on the last row), the tail sequence (strengths extended by zero
//! past the support, gaps extended by one), and the semi-infinite sequence
//! driven by a caller-supplied stream.

use crate::error::{Error, Result};
use crate::model::{CountReport, ExtendedReal, InteractionKind, Method, PointConfig};
use crate::scalar::{Scalar, Tol};

/// Which recurrence produced a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaVariant {
    /// Exactly n entries; last row drops the missing trailing gap.
    Finite,
    /// Infinite continuation with zero strengths, evaluated to stabilization.
    Tail,
    /// Stream-driven prefix of the genuinely infinite problem.
    SemiInfinite,
}

/// A prefix of the counting sequence.
#[derive(Debug, Clone)]
pub struct GammaSequence<S: Scalar> {
    pub values: Vec<ExtendedReal<S>>,
    pub variant: GammaVariant,
    /// Index (1-based) past which entries were not materialized; the skipped
    /// block is provably sign-stable, see the diagnostics.
    pub truncation: Option<usize>,
    pub diagnostics: Vec<String>,
}

impl<S: Scalar> GammaSequence<S> {
    fn push_near_zero_warning(&mut self, index: usize, value: &S, tol: &Tol) {
        if value.is_near_zero(tol) {
            self.diagnostics
                .push(format!("gamma: entry {index} within 10*eps of zero"));
        }
    }
}

/// Finite-variant sequence: n entries, computed entirely from the
/// configuration. For a single interaction the sequence is just the
/// strength, matching the 1x1 matrix.
pub fn gamma_finite<S: Scalar>(config: &PointConfig<S>, tol: &Tol) -> GammaSequence<S> {
    debug_assert_eq!(config.kind(), InteractionKind::Delta);
    let n = config.len();
    let mut seq = GammaSequence {
        values: Vec::with_capacity(n),
        variant: GammaVariant::Finite,
        truncation: None,
        diagnostics: Vec::new(),
    };
    if n == 1 {
        seq.values.push(ExtendedReal::Finite(config.strength(1).clone()));
        return seq;
    }

    let mut cur = config.strength(1).clone() + config.gap(1).clone().recip();
    seq.push_near_zero_warning(1, &cur, tol);
    seq.values.push(ExtendedReal::Finite(cur.clone()));
    let mut k = 1usize;

    while k < n {
        if cur.is_negligible(tol) {
            seq.values.push(ExtendedReal::Infinity);
            if k + 1 == n {
                break;
            }
            // restart two steps later; the trailing gap term drops out on
            // the last row (1/d_n = 0 convention)
            let next = config.strength(k + 2).clone()
                + config.gap(k + 1).clone().recip()
                + config.gap_inv_or_zero(k + 2);
            seq.push_near_zero_warning(k + 2, &next, tol);
            seq.values.push(ExtendedReal::Finite(next.clone()));
            cur = next;
            k += 2;
        } else {
            let dk_inv = config.gap(k).clone().recip();
            let next = config.strength(k + 1).clone()
                + config.gap_inv_or_zero(k + 1)
                + dk_inv.clone()
                - dk_inv.clone() * dk_inv / cur.clone();
            seq.push_near_zero_warning(k + 1, &next, tol);
            seq.values.push(ExtendedReal::Finite(next.clone()));
            cur = next;
            k += 1;
        }
    }
    seq
}

/// Count a sequence: negative squares are its strictly negative finite
/// entries plus its infinities.
pub fn count_from_gamma<S: Scalar>(seq: &GammaSequence<S>, tol: &Tol) -> CountReport {
    let mut kappa_minus = 0usize;
    let mut n_infinity = 0usize;
    for v in &seq.values {
        match v {
            ExtendedReal::Infinity => n_infinity += 1,
            ExtendedReal::Finite(x) => {
                if !x.is_negligible(tol) && x.is_negative() {
                    kappa_minus += 1;
                }
            }
        }
    }
    let mut report = CountReport::new(Method::Recurrence, kappa_minus, n_infinity);
    report.diagnostics = seq.diagnostics.clone();
    if let Some(at) = seq.truncation {
        report
            .diagnostics
            .push(format!("sequence truncated at index {at}; skipped block is sign-stable"));
    }
    report
}

// Gap 1/d_k and strength for the tail-extended problem: strengths vanish and
// gaps become one past the support.
fn tail_gap_inv<S: Scalar>(config: &PointConfig<S>, k: usize) -> S {
    if k < config.len() {
        config.gap(k).clone().recip()
    } else {
        S::one()
    }
}

fn tail_strength<S: Scalar>(config: &PointConfig<S>, k: usize) -> S {
    if k <= config.len() {
        config.strength(k).clone()
    } else {
        S::zero()
    }
}

/// Tail-variant sequence. Entries past the support follow the strength-free
/// recurrence; evaluation stops as soon as the sign pattern of the rest is
/// decided:
///
/// - an entry at index k >= n at or above 1/d_k keeps every later entry
///   positive (case a);
/// - a zero past the support contributes one infinity and then permanently
///   positive entries (case b);
/// - a negative entry past the support is the last nonpositive one (case c);
/// - an entry strictly between 0 and 1/d_k drifts monotonically to a single
///   zero-or-negative event, which is fast-forwarded in closed form rather
///   than iterated when the horizon runs out (case c).
pub fn gamma_tail<S: Scalar>(
    config: &PointConfig<S>,
    horizon: usize,
    tol: &Tol,
) -> Result<GammaSequence<S>> {
    debug_assert_eq!(config.kind(), InteractionKind::Delta);
    let n = config.len();
    if horizon < n {
        return Err(Error::Horizon { requested: horizon, minimum: n });
    }

    let mut seq = GammaSequence {
        values: Vec::new(),
        variant: GammaVariant::Tail,
        truncation: None,
        diagnostics: Vec::new(),
    };

    let mut cur = tail_strength(config, 1) + tail_gap_inv(config, 1);
    seq.push_near_zero_warning(1, &cur, tol);
    seq.values.push(ExtendedReal::Finite(cur.clone()));
    let mut k = 1usize;

    loop {
        // stabilization checks only apply past the support
        if k >= n {
            let dk_inv = tail_gap_inv(config, k);
            if cur.is_negligible(tol) {
                seq.values.push(ExtendedReal::Infinity);
                seq.diagnostics.push(format!(
                    "tail stabilized at index {k} (case b: zero past support, one infinity then positive)"
                ));
                return Ok(seq);
            }
            if cur.is_negative() {
                // one negative event; the very next entry already sits at
                // or above 1/d and the rest stays positive
                let next = tail_gap_inv(config, k + 1).clone() + dk_inv.clone()
                    - dk_inv.clone() * dk_inv.clone() / cur.clone();
                debug_assert!(
                    !(next.clone() - tail_gap_inv(config, k + 1)).is_negative(),
                    "entry after a tail negative must be >= 1/d"
                );
                seq.values.push(ExtendedReal::Finite(next));
                seq.diagnostics.push(format!(
                    "tail stabilized at index {k} (case c: negative past support, rest positive)"
                ));
                return Ok(seq);
            }
            if cur.clone() >= dk_inv.clone() {
                seq.diagnostics.push(format!(
                    "tail stabilized at index {k} (case a: entry >= 1/d, rest positive)"
                ));
                return Ok(seq);
            }
            // drifting: 0 < cur < 1/d_k with unit tail gaps
            if k >= horizon {
                // 1/xi decreases by exactly one per unit-gap step, so the
                // single remaining event can be computed in closed form
                let xi = S::one() - cur.clone();
                let u = xi.recip();
                let steps = (u.clone() - S::one()).ceil_int();
                let xi_event = (u - steps.clone()).recip();
                let event = S::one() - xi_event;
                seq.truncation = Some(k);
                if event.is_negligible(tol) {
                    seq.values.push(ExtendedReal::Finite(S::zero()));
                    seq.values.push(ExtendedReal::Infinity);
                } else {
                    seq.values.push(ExtendedReal::Finite(event));
                }
                seq.diagnostics.push(format!(
                    "tail stabilized past horizon (case c: drift fast-forwarded {} steps to its single event)",
                    steps.to_f64()
                ));
                return Ok(seq);
            }
        }

        if cur.is_negligible(tol) {
            seq.values.push(ExtendedReal::Infinity);
            let next = tail_strength(config, k + 2)
                + tail_gap_inv(config, k + 1)
                + tail_gap_inv(config, k + 2);
            seq.push_near_zero_warning(k + 2, &next, tol);
            seq.values.push(ExtendedReal::Finite(next.clone()));
            if k + 1 == n {
                // the infinity sits exactly on the support boundary; the
                // entry just pushed is already at least 1/d and the rest
                // stays positive
                seq.diagnostics.push(format!(
                    "tail stabilized at index {} (case b: infinity at the boundary, rest positive)",
                    k + 1
                ));
                return Ok(seq);
            }
            cur = next;
            k += 2;
        } else {
            let dk_inv = tail_gap_inv(config, k);
            let next = tail_strength(config, k + 1)
                + tail_gap_inv(config, k + 1)
                + dk_inv.clone()
                - dk_inv.clone() * dk_inv / cur.clone();
            seq.push_near_zero_warning(k + 1, &next, tol);
            seq.values.push(ExtendedReal::Finite(next.clone()));
            cur = next;
            k += 1;
        }
    }
}

/// Semi-infinite sequence driven by a stream of (strength, gap) pairs.
/// Returns the first `horizon` entries; the resulting count is a monotone
/// lower bound for the infinite problem. The stream must yield at least
/// `horizon` pairs (entry k consumes gap d_k of its own pair).
pub fn gamma_semi_infinite<S: Scalar, I>(
    stream: I,
    horizon: usize,
    tol: &Tol,
) -> Result<GammaSequence<S>>
where
    I: IntoIterator<Item = (S, S)>,
{
    if horizon == 0 {
        return Err(Error::Horizon { requested: horizon, minimum: 1 });
    }
    let mut items = Vec::with_capacity(horizon);
    for (i, (strength, gap)) in stream.into_iter().take(horizon).enumerate() {
        if !gap.is_positive_val() {
            return Err(Error::Gap { index: i + 1, value: gap.to_f64() });
        }
        items.push((strength, gap));
    }
    if items.len() < horizon {
        return Err(Error::validation(
            "strength_stream",
            format!("ended after {} of {horizon} requested pairs", items.len()),
        ));
    }

    let strength = |k: usize| -> S { items[k - 1].0.clone() };
    let gap_inv = |k: usize| -> S { items[k - 1].1.clone().recip() };

    let mut seq = GammaSequence {
        values: Vec::with_capacity(horizon),
        variant: GammaVariant::SemiInfinite,
        truncation: None,
        diagnostics: vec![
            "semi-infinite prefix: count is a monotone lower bound for the infinite problem"
                .to_string(),
        ],
    };

    let mut cur = strength(1) + gap_inv(1);
    seq.push_near_zero_warning(1, &cur, tol);
    seq.values.push(ExtendedReal::Finite(cur.clone()));
    let mut k = 1usize;
    while k < horizon {
        if cur.is_negligible(tol) {
            seq.values.push(ExtendedReal::Infinity);
            if k + 1 >= horizon {
                break;
            }
            let next = strength(k + 2) + gap_inv(k + 1) + gap_inv(k + 2);
            seq.push_near_zero_warning(k + 2, &next, tol);
            seq.values.push(ExtendedReal::Finite(next.clone()));
            cur = next;
            k += 2;
        } else {
            let dk_inv = gap_inv(k);
            let next = strength(k + 1) + gap_inv(k + 1) + dk_inv.clone()
                - dk_inv.clone() * dk_inv / cur.clone();
            seq.push_near_zero_warning(k + 1, &next, tol);
            seq.values.push(ExtendedReal::Finite(next.clone()));
            cur = next;
            k += 1;
        }
    }
    Ok(seq)
}

/// Continued fraction A_k built from the strengths and the gaps between
/// them: A_1 = strength_1 and A_{j+1} = strength_{j+1} + 1/(d_j + 1/A_j).
/// Wherever no entry of the pivot sequence vanishes, gamma_k = 1/d_k + A_k.
pub fn continued_fraction_a<S: Scalar>(
    config: &PointConfig<S>,
    k: usize,
    tol: &Tol,
) -> Result<S> {
    debug_assert_eq!(config.kind(), InteractionKind::Delta);
    let n = config.len();
    if k == 0 || k > n {
        return Err(Error::Index(format!("index {k} outside 1..={n}")));
    }
    let mut a = config.strength(1).clone();
    for j in 1..k {
        if a.is_negligible(tol) {
            return Err(Error::DivisionByZero { index: j + 1 });
        }
        let den = config.gap(j).clone() + a.recip();
        if den.is_negligible(tol) {
            return Err(Error::DivisionByZero { index: j + 1 });
        }
        a = config.strength(j + 1).clone() + den.recip();
    }
    Ok(a)
}

/// Nonnegativity criterion: the operator is nonnegative iff A_k > -1/d_k for
/// every k, equivalently iff every pivot entry is positive. Decidable in at
/// most n+1 steps: past the support an entry at or above 1/d certifies a
/// positive tail, anything else produces a negative square.
///
/// Evaluation runs on the tail extension (zero strengths, unit gaps). A
/// vanishing A_j is a removable singularity of the bracket (the following
/// term reduces to the bare strength) and is continued through rather than
/// reported, since the pivot there is positive.
pub fn is_nonnegative<S: Scalar>(config: &PointConfig<S>, horizon: usize, tol: &Tol) -> bool {
    debug_assert_eq!(config.kind(), InteractionKind::Delta);
    let n = config.len();
    let mut a = tail_strength(config, 1);

    for k in 1..=horizon.max(n + 1) {
        let dk_inv = tail_gap_inv(config, k);
        let gamma = dk_inv.clone() + a.clone();
        if gamma.is_negligible(tol) || gamma.is_negative() {
            // zero pivot forces an infinity (one negative square); a
            // negative pivot is one directly
            return false;
        }
        if k >= n && gamma >= dk_inv {
            return true; // positive tail certified
        }
        if k >= n {
            return false; // drifting tail ends in a single negative square
        }
        // step the bracket: A_{k+1} = strength_{k+1} + 1/(d_k + 1/A_k)
        a = if a.is_negligible(tol) {
            tail_strength(config, k + 1)
        } else {
            let den = config.gap(k).clone() + a.recip();
            if den.is_negligible(tol) {
                return false; // gamma_k = 0 up to tolerance
            }
            tail_strength(config, k + 1) + den.recip()
        };
    }
    true
}

/// Piecewise-linear comparison solution: flat left of the first site, kinked
/// by `strength * value` at each site.
#[derive(Debug, Clone)]
pub struct PhiSequence<S: Scalar> {
    /// phi evaluated at the interaction sites, starting at 1.
    pub phi_values: Vec<S>,
    /// (1 + strength_n * d_{n-1}) * phi(x_n) - phi(x_{n-1}); equals
    /// d_{n-1} times the outgoing slope.
    pub final_term: S,
    /// Sign changes across (phi values, final term), zeros skipped.
    pub sign_changes: usize,
    pub diagnostics: Vec<String>,
}

/// Sign changes of a sequence, skipping entries that count as zero.
fn signature<S: Scalar>(values: &[S], tol: &Tol) -> (usize, bool) {
    let mut changes = 0usize;
    let mut saw_zero = false;
    let mut last_sign: Option<bool> = None; // true = negative
    for v in values {
        if v.is_negligible(tol) {
            saw_zero = true;
            continue;
        }
        let neg = v.is_negative();
        if let Some(prev) = last_sign {
            if prev != neg {
                changes += 1;
            }
        }
        last_sign = Some(neg);
    }
    (changes, saw_zero)
}

/// Signature method: propagate the flat-left solution through the sites and
/// count sign changes of (phi(x_1), ..., phi(x_n), final term). Needs at
/// least two sites; the final term is undefined for one.
pub fn phi_signature<S: Scalar>(config: &PointConfig<S>, tol: &Tol) -> Result<PhiSequence<S>> {
    debug_assert_eq!(config.kind(), InteractionKind::Delta);
    let n = config.len();
    if n < 2 {
        return Err(Error::Unsupported(
            "signature sequence needs at least two interaction sites".into(),
        ));
    }

    let mut phi = S::one();
    let mut slope = S::zero();
    let mut phi_values = Vec::with_capacity(n);
    phi_values.push(phi.clone());
    for k in 1..n {
        slope = slope + config.strength(k).clone() * phi.clone();
        phi = phi + slope.clone() * config.gap(k).clone();
        phi_values.push(phi.clone());
    }

    let final_term = (S::one() + config.strength(n).clone() * config.gap(n - 1).clone())
        * phi_values[n - 1].clone()
        - phi_values[n - 2].clone();

    let mut full = phi_values.clone();
    full.push(final_term.clone());
    let (sign_changes, saw_zero) = signature(&full, tol);
    let mut diagnostics = Vec::new();
    if saw_zero {
        diagnostics.push(
            "ZeroInSequence: signature sequence has zero entries; count deferred to the minors identity"
                .to_string(),
        );
    }

    Ok(PhiSequence { phi_values, final_term, sign_changes, diagnostics })
}

/// Verify that the leading principal minors of the finite Jacobi matrix are
/// the phi values rescaled by gap products: Delta_k * d_1...d_k = phi(x_{k+1})
/// for k < n, and Delta_n * d_{n-1} * d_1...d_{n-1} = final term.
#[allow(clippy::needless_range_loop)] // k walks two parallel sequences
pub fn minors_identity_check<S: Scalar>(config: &PointConfig<S>, tol: &Tol) -> Result<bool> {
    debug_assert_eq!(config.kind(), InteractionKind::Delta);
    let n = config.len();
    if n < 2 {
        return Err(Error::Unsupported("minor identity needs at least two sites".into()));
    }
    let minors = crate::jacobi::build_s_finite(config).leading_minors();
    let phi = phi_signature(config, tol)?;

    let close = |lhs: &S, rhs: &S| -> bool {
        if S::EXACT {
            lhs == rhs
        } else {
            let (a, b) = (lhs.to_f64(), rhs.to_f64());
            (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
        }
    };

    let mut gap_product = S::one();
    for k in 1..n {
        gap_product = gap_product * config.gap(k).clone();
        let lhs = minors[k].clone() * gap_product.clone();
        if !close(&lhs, &phi.phi_values[k]) {
            return Ok(false);
        }
    }
    let lhs = minors[n].clone() * gap_product * config.gap(n - 1).clone();
    Ok(close(&lhs, &phi.final_term))
}
