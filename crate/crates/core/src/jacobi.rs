//! Jacobi (symmetric tridiagonal) matrices for delta interactions.
//!
//! The negative spectrum of the delta operator is carried by a tridiagonal
//! matrix whose diagonal holds `strength_k + 1/d_{k-1} + 1/d_k` and whose
//! off-diagonal holds `-1/d_k` (missing boundary gaps contribute zero).
//! Everything needed to count its negative eigenvalues lives here: the Sturm
//! pivot recursion, Gerschgorin localization, and the Schur-complement
//! inertia split.

use crate::dense::Dense;
use crate::error::{Error, Result};
use crate::model::{InteractionKind, PointConfig};
use crate::scalar::{Scalar, Tol};

/// Symmetric tridiagonal matrix: `diag` of length n, `offdiag` of length n-1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag<S: Scalar> {
    diag: Vec<S>,
    offdiag: Vec<S>,
}

impl<S: Scalar> SymTridiag<S> {
    pub fn new(diag: Vec<S>, offdiag: Vec<S>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::validation("diag", "matrix must be at least 1x1"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::validation(
                "offdiag",
                format!("length {} does not match diagonal length {}", offdiag.len(), diag.len()),
            ));
        }
        if !S::EXACT {
            for (field, list) in [("diag", &diag), ("offdiag", &offdiag)] {
                if let Some(i) = list.iter().position(|v| !v.to_f64().is_finite()) {
                    return Err(Error::validation(field, format!("entry {i} is not finite")));
                }
            }
        }
        Ok(SymTridiag { diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[S] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[S] {
        &self.offdiag
    }

    /// Largest |entry|, for scaling float zero tests.
    pub fn entry_scale(&self) -> f64 {
        self.diag
            .iter()
            .chain(self.offdiag.iter())
            .map(|v| v.to_f64().abs())
            .fold(0.0, f64::max)
            .max(1.0)
    }

    /// Leading principal minors Delta_0 = 1, Delta_1, ..., Delta_n by the
    /// three-term recursion.
    pub fn leading_minors(&self) -> Vec<S> {
        let n = self.n();
        let mut minors = Vec::with_capacity(n + 1);
        minors.push(S::one());
        minors.push(self.diag[0].clone());
        for k in 1..n {
            let b = self.offdiag[k - 1].clone();
            let prev = minors[k].clone();
            let prev2 = minors[k - 1].clone();
            minors.push(self.diag[k].clone() * prev - b.clone() * b * prev2);
        }
        minors
    }

    pub fn to_dense(&self) -> Dense<S> {
        let n = self.n();
        Dense::from_fn(n, n, |r, c| {
            if r == c {
                self.diag[r].clone()
            } else if r + 1 == c || c + 1 == r {
                self.offdiag[r.min(c)].clone()
            } else {
                S::zero()
            }
        })
    }
}

/// Matrix of the finite-set delta operator: n x n, last diagonal entry has
/// no trailing gap term. For n = 1 this degenerates to the 1x1 matrix
/// holding the single strength.
pub fn build_s_finite<S: Scalar>(config: &PointConfig<S>) -> SymTridiag<S> {
    debug_assert_eq!(config.kind(), InteractionKind::Delta);
    let n = config.len();
    let diag: Vec<S> = (1..=n)
        .map(|k| config.strength(k).clone() + config.gap_inv_or_zero(k - 1) + config.gap_inv_or_zero(k))
        .collect();
    let offdiag: Vec<S> = (1..n).map(|k| -config.gap(k).clone().recip()).collect();
    SymTridiag::new(diag, offdiag).expect("lengths consistent by construction")
}

/// Leading N x N section of the semi-infinite matrix; every row keeps both
/// gap terms, so the section needs gap d_N and requires N < n.
pub fn build_s_truncated<S: Scalar>(config: &PointConfig<S>, window: usize) -> Result<SymTridiag<S>> {
    debug_assert_eq!(config.kind(), InteractionKind::Delta);
    let n = config.len();
    if window == 0 {
        return Err(Error::Window("window size must be at least 1".into()));
    }
    if window >= n {
        return Err(Error::Window(format!(
            "window {window} needs gap d_{window}, but only {} gaps exist",
            n - 1
        )));
    }
    let diag: Vec<S> = (1..=window)
        .map(|k| {
            config.strength(k).clone()
                + config.gap_inv_or_zero(k - 1)
                + config.gap(k).clone().recip()
        })
        .collect();
    let offdiag: Vec<S> = (1..window).map(|k| -config.gap(k).clone().recip()).collect();
    SymTridiag::new(diag, offdiag)
}

/// Count eigenvalues of `t` strictly below `shift` by the Sturm pivot
/// recursion p_k = (a_k - shift) - b_{k-1}^2 / p_{k-1}.
pub fn sturm_negative_count<S: Scalar>(t: &SymTridiag<S>, shift: &S, tol: &Tol) -> usize {
    sturm_with_diagnostics(t, shift, tol).0
}

/// Sturm count plus warnings about zero and near-threshold pivots.
///
/// A vanishing pivot (exactly, or below tolerance in float) is resolved
/// structurally rather than nudged: in the last row it is an eigenvalue
/// sitting exactly at the shift and is not counted; with a vanishing
/// coupling the chain merely restarts; otherwise the 2x2 block
/// [[0, b], [b, *]] has determinant -b^2 < 0, contributes exactly one
/// negative square, and its Schur complement leaves the pivot two rows
/// down untouched. This keeps threshold spectra consistent between the
/// float and exact backends and with the recurrence methods.
pub fn sturm_with_diagnostics<S: Scalar>(
    t: &SymTridiag<S>,
    shift: &S,
    tol: &Tol,
) -> (usize, Vec<String>) {
    let n = t.n();
    let mut diagnostics = Vec::new();
    let mut count = 0usize;
    let mut carry: Option<S> = None;
    let mut k = 0usize;

    while k < n {
        let mut p = t.diag[k].clone() - shift.clone();
        if let Some(prev) = &carry {
            let b = t.offdiag[k - 1].clone();
            p = p - b.clone() * b / prev.clone();
        }

        if p.is_negligible(tol) {
            if k + 1 == n {
                if !S::EXACT {
                    diagnostics.push(format!(
                        "sturm: zero pivot at last index {n}: eigenvalue at the shift, not counted"
                    ));
                }
                break;
            }
            if t.offdiag[k].is_negligible(tol) {
                // decoupled zero block; restart the chain
                carry = None;
                k += 1;
                continue;
            }
            // classify the 2x2 block [[p, b], [b, a']] by its own inertia;
            // with p exactly zero its determinant is -b^2 and the block is
            // indefinite, but a merely negligible pivot against a large
            // next diagonal can tip the determinant positive
            let b = t.offdiag[k].clone();
            let a_next = t.diag[k + 1].clone() - shift.clone();
            let det = p.clone() * a_next.clone() - b.clone() * b;
            let trace_negative = (p + a_next).is_negative();
            let block_negatives = if det.is_negative() {
                1
            } else if det.is_positive_val() {
                if trace_negative {
                    2
                } else {
                    0
                }
            } else if trace_negative {
                1
            } else {
                0
            };
            if !S::EXACT {
                diagnostics.push(format!(
                    "sturm: zero pivot at index {} resolved as a 2x2 block with {} negative square(s)",
                    k + 1,
                    block_negatives
                ));
            }
            count += block_negatives;
            carry = None;
            k += 2;
        } else {
            if p.is_near_zero(tol) {
                diagnostics.push(format!(
                    "sturm: pivot at index {} within 10*eps of zero",
                    k + 1
                ));
            }
            if p.is_negative() {
                count += 1;
            }
            carry = Some(p);
            k += 1;
        }
    }

    (count, diagnostics)
}

/// A Gerschgorin disk: all eigenvalues lie in the union of
/// |lambda - center| <= radius over the rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GerschgorinDisk<S: Scalar> {
    pub center: S,
    pub radius: S,
}

pub fn gerschgorin_disks<S: Scalar>(t: &SymTridiag<S>) -> Vec<GerschgorinDisk<S>> {
    let n = t.n();
    (0..n)
        .map(|i| {
            let left = if i > 0 { t.offdiag[i - 1].clone().abs() } else { S::zero() };
            let right = if i + 1 < n { t.offdiag[i].clone().abs() } else { S::zero() };
            GerschgorinDisk { center: t.diag[i].clone(), radius: left + right }
        })
        .collect()
}

/// Outcome of the Gerschgorin sufficient condition at an index set.
#[derive(Debug, Clone, PartialEq)]
pub struct SuffcondResult {
    /// m = |K| when every inequality holds, 0 otherwise.
    pub lower_bound: usize,
    /// True when the bound is in fact the exact count (all strengths
    /// outside K strictly positive).
    pub exact: bool,
    pub diagnostics: Vec<String>,
}

/// Check `strength_k < -2 (1/d_{k-1} + 1/d_k)` for every k in the index set
/// (1-based; boundary gaps count as zero). All inequalities holding certifies
/// at least |K| negative squares; strictly positive strengths elsewhere
/// upgrade the bound to equality.
pub fn suffcond_check<S: Scalar>(
    config: &PointConfig<S>,
    index_set: &[usize],
) -> Result<SuffcondResult> {
    debug_assert_eq!(config.kind(), InteractionKind::Delta);
    let n = config.len();
    let mut seen = vec![false; n + 1];
    for &k in index_set {
        if k == 0 || k > n {
            return Err(Error::Index(format!("index {k} outside 1..={n}")));
        }
        seen[k] = true;
    }

    let mut diagnostics = Vec::new();
    let two = S::from_i64(2);
    for &k in index_set {
        if k == 1 || k == n {
            diagnostics.push(format!(
                "index {k} touches the boundary: the missing gap counts as 1/d = 0"
            ));
        }
        let bound = -(two.clone() * (config.gap_inv_or_zero(k - 1) + config.gap_inv_or_zero(k)));
        if config.strength(k).clone() >= bound.clone() {
            diagnostics.push(format!(
                "sufficient condition fails at index {k}: strength {} >= {}",
                config.strength(k),
                bound
            ));
            return Ok(SuffcondResult { lower_bound: 0, exact: false, diagnostics });
        }
    }

    let exact = (1..=n).all(|k| seen[k] || config.strength(k).is_positive_val());
    let m = index_set.iter().collect::<std::collections::BTreeSet<_>>().len();
    Ok(SuffcondResult { lower_bound: m, exact, diagnostics })
}

/// Largest index set on which the sufficient condition holds; its size is a
/// certified lower bound for the count.
pub fn gerschgorin_lower_bound<S: Scalar>(config: &PointConfig<S>) -> usize {
    let n = config.len();
    let two = S::from_i64(2);
    (1..=n)
        .filter(|&k| {
            let bound =
                -(two.clone() * (config.gap_inv_or_zero(k - 1) + config.gap_inv_or_zero(k)));
            config.strength(k).clone() < bound
        })
        .count()
}

/// Result of splitting off the leading p x p block.
#[derive(Debug, Clone)]
pub struct SchurSplit<S: Scalar> {
    /// Negative squares of the leading block.
    pub kappa_head: usize,
    /// Schur complement; for tridiagonal input only its first diagonal
    /// entry differs from the trailing block.
    pub complement: SymTridiag<S>,
}

/// Inertia additivity: kappa(T) = kappa(T_11) + kappa(Schur complement),
/// valid whenever the leading block is invertible.
pub fn schur_inertia_split<S: Scalar>(
    t: &SymTridiag<S>,
    block: usize,
    tol: &Tol,
) -> Result<SchurSplit<S>> {
    let n = t.n();
    if block == 0 || block >= n {
        return Err(Error::Index(format!("block size {block} outside 1..{n}")));
    }
    let minors = t.leading_minors();
    let det_head = &minors[block];
    let singular = if S::EXACT {
        *det_head == S::zero()
    } else {
        // minors grow like products of entries; normalize before testing
        det_head.to_f64().abs() <= tol.eps * tol.scale.max(1.0).powi(block as i32)
    };
    if singular {
        return Err(Error::SingularPivot { size: block });
    }

    let head = SymTridiag::new(
        t.diag[..block].to_vec(),
        t.offdiag[..block.saturating_sub(1)].to_vec(),
    )?;
    let kappa_head = sturm_negative_count(&head, &S::zero(), tol);

    let coupling = t.offdiag[block - 1].clone();
    let correction = coupling.clone() * coupling * minors[block - 1].clone() / det_head.clone();
    let mut diag = t.diag[block..].to_vec();
    diag[0] = diag[0].clone() - correction;
    let complement = SymTridiag::new(diag, t.offdiag[block..].to_vec())?;

    Ok(SchurSplit { kappa_head, complement })
}

/// Assemble the delta operator's boundary-relation matrix
/// `T = C D^T - D M(0) D^T` from the raw block patterns. The zero-energy
/// Weyl limits contribute `-1/d_k` in every entry of the interior 2x2
/// blocks and vanish on the two half-line components. Separating odd and
/// even coordinates turns `T` into the finite Jacobi matrix padded by a
/// zero block, which is exactly what tests assert.
pub fn assemble_t_delta<S: Scalar>(config: &PointConfig<S>) -> Dense<S> {
    debug_assert_eq!(config.kind(), InteractionKind::Delta);
    let n = config.len();
    let dim = 2 * n;

    let mut c = Dense::zero(dim, dim);
    let mut d = Dense::zero(dim, dim);
    for k in 1..=n {
        c.set(2 * k - 2, 2 * k - 1, config.strength(k).clone());
        c.set(2 * k - 1, 2 * k - 2, S::one());
        c.set(2 * k - 1, 2 * k - 1, S::one());
        d.set(2 * k - 2, 2 * k - 2, -S::one());
        d.set(2 * k - 2, 2 * k - 1, S::one());
    }

    let mut m = Dense::zero(dim, dim);
    for k in 1..n {
        let w = -config.gap(k).clone().recip();
        for r in 0..2 {
            for cidx in 0..2 {
                m.set(2 * k - 1 + r, 2 * k - 1 + cidx, w.clone());
            }
        }
    }

    let dt = d.transpose();
    c.matmul(&dt).sub(&d.matmul(&m).matmul(&dt))
}

/// Permutation listing odd (1-based) coordinates first, then even ones.
pub fn odd_even_permutation(dim: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..dim).step_by(2).collect();
    perm.extend((1..dim).step_by(2));
    perm
}
