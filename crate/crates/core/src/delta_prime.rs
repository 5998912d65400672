//! Counting machinery for delta-prime interactions.
//!
//! The headline fact is blunt: the number of negative squares equals the
//! number of strictly negative strengths. The certifying object is a banded
//! symmetric matrix assembled over a finite window of sites. It splits as
//! `T = A + B` with `A` carrying the strengths on alternating diagonal
//! positions and `B` a sum of rank-one terms with positive weights `1/d`,
//! which sandwiches the inertia of `T` within one of the inertia of `A`;
//! the closed-form determinant then pins the exact value.

use crate::dense::{inertia_congruence, Dense};
use crate::error::{Error, Result};
use crate::model::{CountReport, InteractionKind, Method, PointConfig};
use crate::scalar::{Scalar, Tol};

/// A window of delta-prime sites embedded into the doubly infinite indexing:
/// strengths beta_s..beta_r and the gaps d_{s-1}..d_{r-1} their rank-one
/// terms weigh. The window matrix has odd dimension 2(r-s)+1.
#[derive(Debug, Clone)]
pub struct DeltaPrimeWindow<S: Scalar> {
    start: i64,
    end: i64,
    strengths: Vec<S>,
    gaps: Vec<S>,
}

impl<S: Scalar> DeltaPrimeWindow<S> {
    /// `strengths` holds beta_s..beta_r, `gaps` holds d_{s-1}..d_{r-1};
    /// both have length r-s+1.
    pub fn new(start: i64, end: i64, strengths: Vec<S>, gaps: Vec<S>) -> Result<Self> {
        if end <= start {
            return Err(Error::Window(format!(
                "window end {end} must exceed start {start}"
            )));
        }
        let span = (end - start) as usize + 1;
        if strengths.len() != span {
            return Err(Error::Window(format!(
                "{} strengths for a window of {span} sites",
                strengths.len()
            )));
        }
        if gaps.len() != span {
            return Err(Error::Window(format!(
                "{} gaps for a window of {span} sites (need d_(s-1)..d_(r-1))",
                gaps.len()
            )));
        }
        if let Some(i) = gaps.iter().position(|d| !d.is_positive_val()) {
            return Err(Error::Gap { index: i, value: gaps[i].to_f64() });
        }
        Ok(DeltaPrimeWindow { start, end, strengths, gaps })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.end
    }

    /// Number of sites in the window.
    pub fn sites(&self) -> usize {
        self.strengths.len()
    }

    /// Dimension 2(r-s)+1 of the window matrix.
    pub fn dim(&self) -> usize {
        2 * (self.sites() - 1) + 1
    }

    pub fn strengths(&self) -> &[S] {
        &self.strengths
    }

    pub fn gaps(&self) -> &[S] {
        &self.gaps
    }

    /// Negative strengths inside the window (the inertia of the A part).
    pub fn negative_strengths(&self, tol: &Tol) -> usize {
        self.strengths
            .iter()
            .filter(|b| !b.is_negligible(tol) && b.is_negative())
            .count()
    }

    /// The rank-one vectors of the B part in window-local coordinates,
    /// paired with their weights 1/d. Interior sites contribute
    /// `e_{2i-1} + beta_i e_{2i} - e_{2i+1}`; the two boundary vectors are
    /// the in-window truncations of the same pattern.
    pub fn rank_one_terms(&self) -> Vec<(S, Vec<S>)> {
        let m = self.sites() - 1;
        let dim = self.dim();
        let mut terms = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let weight = self.gaps[i].clone().recip();
            let mut v = vec![S::zero(); dim];
            if i > 0 {
                v[2 * i - 1] = S::one();
            }
            v[2 * i] = self.strengths[i].clone();
            if i < m {
                v[2 * i + 1] = -S::one();
            }
            terms.push((weight, v));
        }
        terms
    }
}

/// Negative squares directly from the strengths: the count of strictly
/// negative ones. Zero strengths mean the interaction vanishes at that site
/// and are not counted.
pub fn count_negative_strengths<S: Scalar>(config: &PointConfig<S>, tol: &Tol) -> CountReport {
    debug_assert_eq!(config.kind(), InteractionKind::DeltaPrime);
    let kappa = config
        .strengths()
        .iter()
        .filter(|b| !b.is_negligible(tol) && b.is_negative())
        .count();
    CountReport::new(Method::StrengthCount, kappa, 0)
}

/// Assemble the window matrix entry by entry from its band pattern:
/// diagonal `beta_i + beta_i^2 / d` on strength positions and `1/d + 1/d'`
/// on link positions, couplings `+beta_i/d` above, `-beta_i/d` below, and
/// `-1/d` between consecutive links.
pub fn build_t_window<S: Scalar>(window: &DeltaPrimeWindow<S>) -> Dense<S> {
    let m = window.sites() - 1;
    let dim = window.dim();
    let w = |i: usize| window.gaps[i].clone().recip();
    let beta = |i: usize| window.strengths[i].clone();

    let mut t = Dense::zero(dim, dim);
    for i in 0..=m {
        // strength position 2i
        t.set(2 * i, 2 * i, beta(i).clone() + beta(i).clone() * beta(i) * w(i));
        if i > 0 {
            t.set(2 * i - 1, 2 * i, beta(i) * w(i));
            t.set(2 * i, 2 * i - 1, beta(i) * w(i));
        }
        if i < m {
            t.set(2 * i, 2 * i + 1, -(beta(i) * w(i)));
            t.set(2 * i + 1, 2 * i, -(beta(i) * w(i)));
            // link position 2i+1 between sites i and i+1
            t.set(2 * i + 1, 2 * i + 1, w(i) + w(i + 1));
        }
        if i > 0 && i < m {
            t.set(2 * i - 1, 2 * i + 1, -w(i));
            t.set(2 * i + 1, 2 * i - 1, -w(i));
        }
    }
    t
}

/// Closed-form determinant of the window matrix:
/// (sum of window gaps + sum of strengths) * prod(strength_k / d_{k-1}).
pub fn det_t_closed_form<S: Scalar>(window: &DeltaPrimeWindow<S>) -> S {
    let mut first = S::zero();
    for d in window.gaps() {
        first = first + d.clone();
    }
    for b in window.strengths() {
        first = first + b.clone();
    }
    let mut product = S::one();
    for (b, d) in window.strengths().iter().zip(window.gaps()) {
        product = product * b.clone() / d.clone();
    }
    first * product
}

/// Rebuild the window matrix from the strength diagonal plus the rank-one
/// sum, independently of the band formula, and verify the two agree
/// entrywise; then check the inertia bound kappa(T) <= kappa(A).
pub fn rank_one_decomposition_check<S: Scalar>(
    window: &DeltaPrimeWindow<S>,
    tol: &Tol,
) -> bool {
    let banded = build_t_window(window);
    let dim = window.dim();

    let mut assembled = Dense::zero(dim, dim);
    for (i, b) in window.strengths().iter().enumerate() {
        assembled.add_to(2 * i, 2 * i, b.clone());
    }
    for (weight, v) in window.rank_one_terms() {
        assembled.add_outer(&weight, &v);
    }

    let agree = if S::EXACT {
        assembled == banded
    } else {
        assembled.max_abs_diff(&banded) <= 1e-12 * banded.entry_scale()
    };
    if !agree {
        return false;
    }

    let kappa_t = inertia_congruence(&banded, tol).0;
    kappa_t <= window.negative_strengths(tol)
}

/// Embed a finite configuration into a window padded on both sides with
/// positive unit strengths and unit gaps. Sites with vanishing strength are
/// dropped first (their jump condition is trivial). Padding grows until the
/// determinant's leading factor is safely positive, which pins the window
/// inertia at exactly the number of negative strengths.
pub fn embed_config<S: Scalar>(
    config: &PointConfig<S>,
    tol: &Tol,
) -> Result<Option<DeltaPrimeWindow<S>>> {
    debug_assert_eq!(config.kind(), InteractionKind::DeltaPrime);
    let n = config.len();

    // keep nonzero-strength sites; merge the gaps across dropped ones
    let mut kept_strengths: Vec<S> = Vec::new();
    let mut kept_gaps: Vec<S> = Vec::new(); // gaps between kept sites
    let mut pending_gap = S::zero();
    for k in 1..=n {
        let b = config.strength(k);
        if b.is_negligible(tol) {
            if k < n {
                pending_gap = pending_gap + config.gap(k).clone();
            }
            continue;
        }
        if !kept_strengths.is_empty() {
            kept_gaps.push(pending_gap.clone());
        }
        kept_strengths.push(b.clone());
        pending_gap = if k < n { config.gap(k).clone() } else { S::zero() };
    }
    if kept_strengths.is_empty() {
        return Ok(None);
    }

    let kept = kept_strengths.len();

    // every padding site adds one unit gap and one unit strength per side,
    // so the determinant's leading factor grows by 4 per padding step
    let base: f64 = kept_gaps.iter().chain(kept_strengths.iter()).map(Scalar::to_f64).sum();
    let mut pad = (((1.5 - base) / 4.0).ceil().max(1.0)) as usize;
    loop {
        // window data: pad positive sites, the kept config, pad more sites;
        // the leading gap is the phantom one to the window's left neighbor
        let mut strengths = vec![S::one(); pad];
        strengths.extend(kept_strengths.iter().cloned());
        strengths.extend(std::iter::repeat_n(S::one(), pad));

        let mut gaps = vec![S::one(); pad + 1];
        gaps.extend(kept_gaps.iter().cloned());
        gaps.extend(std::iter::repeat_n(S::one(), pad));
        debug_assert_eq!(gaps.len(), strengths.len());

        let mut first = S::zero();
        for v in gaps.iter().chain(strengths.iter()) {
            first = first + v.clone();
        }
        if first > S::from_f64(0.5) {
            let start = 1 - pad as i64;
            let end = (kept + pad) as i64;
            return Ok(Some(DeltaPrimeWindow::new(start, end, strengths, gaps)?));
        }
        pad *= 2;
    }
}

/// Count negative squares through the window matrix: embed, assemble, take
/// the dense inertia. Exact backends use congruence elimination; floats go
/// through tridiagonalization plus the Sturm count.
pub fn windowed_inertia_count<S: Scalar>(
    config: &PointConfig<S>,
    tol: &Tol,
) -> Result<CountReport> {
    let window = match embed_config(config, tol)? {
        Some(w) => w,
        None => {
            return Ok(CountReport::new(Method::JacobiInertia, 0, 0).with_diagnostics(vec![
                "all strengths vanish; the operator is the free one".to_string(),
            ]));
        }
    };
    let t = build_t_window(&window);
    let kappa = if S::EXACT {
        inertia_congruence(&t, tol).0
    } else {
        // tridiagonalization is the numerically safe route for floats
        let tf = Dense::from_fn(t.rows(), t.cols(), |r, c| t.get(r, c).to_f64());
        tf.negative_count(&Tol::new(tol.eps, tf.entry_scale()))
    };
    let kept = config
        .strengths()
        .iter()
        .filter(|b| !b.is_negligible(tol))
        .count();
    Ok(CountReport::new(Method::JacobiInertia, kappa, 0).with_diagnostics(vec![format!(
        "window [{}, {}] with {} padding sites per side",
        window.start(),
        window.end(),
        (window.sites() - kept) / 2
    )]))
}
