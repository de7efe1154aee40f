//! Stability polynomials of explicit Runge-Kutta methods.
//!
//! On an autonomous linear system `u' = Lu`, one step of an explicit RK
//! method reduces to `u ↦ R_s(τL)u` with the stability polynomial
//! `R_s(z) = Σ_{k=0}^s α_k z^k`, `α_0 = 1`, `α_s ≠ 0`. This module holds
//! the exact-rational representation of `R_s`, the reduction from a
//! Butcher tableau (`α_k = bᵀA^{k-1}·1`), Taylor-method construction,
//! multi-step composition, and linear-order detection.

use crate::rational::{format_rational, inv_factorial, parse_rational, rat_int, Rat};
use num::{One, Zero};
use thiserror::Error;

/// Errors from polynomial construction and manipulation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolynomialError {
    /// The constant coefficient must be exactly 1.
    #[error("a stability polynomial must have constant coefficient 1, got {0}")]
    LeadingOne(String),
    /// No update beyond the constant term: not a method at all.
    #[error("degenerate method: every coefficient beyond the constant term is zero")]
    Degenerate,
    /// Taylor methods start at first order.
    #[error("the Taylor method order must be at least 1")]
    OrderZero,
    /// Composing zero steps is meaningless.
    #[error("the composition step count must be at least 1")]
    StepsZero,
}

/// Exact stability polynomial `R_s(z) = Σ α_k z^k` with `α_0 = 1`,
/// `α_s ≠ 0`, `s ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityPolynomial {
    alpha: Vec<Rat>,
}

impl StabilityPolynomial {
    /// Build from coefficients `α_0..α_s`. Trailing zeros are trimmed
    /// first (tableau reductions produce them routinely); the result must
    /// still have `α_0 = 1` and degree at least 1.
    pub fn from_alpha(mut alpha: Vec<Rat>) -> Result<Self, PolynomialError> {
        while alpha.len() > 1 && alpha.last().is_some_and(Zero::is_zero) {
            alpha.pop();
        }
        match alpha.first() {
            Some(a0) if a0.is_one() => {}
            Some(a0) => return Err(PolynomialError::LeadingOne(format_rational(a0))),
            None => return Err(PolynomialError::Degenerate),
        }
        if alpha.len() < 2 {
            return Err(PolynomialError::Degenerate);
        }
        Ok(StabilityPolynomial { alpha })
    }

    /// Coefficients `α_0..α_s`.
    pub fn alpha(&self) -> &[Rat] {
        &self.alpha
    }

    /// Degree `s` (also the stage count for methods without wasted
    /// stages).
    pub fn degree(&self) -> usize {
        self.alpha.len() - 1
    }

    /// `α_k`, with coefficients beyond the degree read as zero. The
    /// closed-form criteria index past the degree freely; this keeps them
    /// branch-free.
    pub fn coeff(&self, k: usize) -> Rat {
        self.alpha.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// The `p`-stage, order-`p` method whose stability polynomial is the
    /// truncated exponential series: `α_k = 1/k!` for `k ≤ p`.
    pub fn taylor(p: usize) -> Result<Self, PolynomialError> {
        if p == 0 {
            return Err(PolynomialError::OrderZero);
        }
        Self::from_alpha((0..=p).map(inv_factorial).collect())
    }

    /// Stability polynomial of `m` successive steps: the exact polynomial
    /// power `R_s^m`, of degree `m·s`.
    pub fn compose_steps(&self, m: usize) -> Result<Self, PolynomialError> {
        if m == 0 {
            return Err(PolynomialError::StepsZero);
        }
        let mut acc = self.alpha.clone();
        for _ in 1..m {
            acc = convolve(&acc, &self.alpha);
        }
        Self::from_alpha(acc)
    }

    /// Largest `p ≤ s` with `α_k = 1/k!` for all `k ≤ p`: the accuracy
    /// order on autonomous linear systems. A polynomial whose linear term
    /// differs from 1 (e.g. a composed multi-step map approximating
    /// `e^{mτL}`) has linear order 0.
    pub fn linear_order(&self) -> usize {
        let mut p = 0;
        for k in 1..=self.degree() {
            if self.alpha[k] == inv_factorial(k) {
                p = k;
            } else {
                break;
            }
        }
        p
    }
}

fn convolve(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Which set of weights to reduce a tableau with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    /// The main method's weights `b`.
    Main,
    /// The embedded companion's weights `b̂`.
    Embedded,
}

/// Errors from tableau construction, reduction, and parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableauError {
    /// `A`, `b`, `c` (and `b̂` if present) must agree on the stage count.
    #[error("inconsistent tableau dimensions: {0}")]
    Dimensions(String),
    /// Explicit methods have strictly lower-triangular `A`.
    #[error("tableau is not explicit: A[{row}][{col}] is nonzero on or above the diagonal")]
    NotExplicit { row: usize, col: usize },
    /// Embedded weights were requested but the tableau has none.
    #[error("tableau has no embedded weights")]
    NoEmbedded,
    /// The reduction produced no usable polynomial.
    #[error(transparent)]
    Reduction(#[from] PolynomialError),
    /// Stage relabeling with something that is not a permutation.
    #[error("invalid stage permutation: {0}")]
    BadPermutation(String),
    /// Structured-text parsing problems.
    #[error("tableau parse error: {0}")]
    Parse(String),
}

/// Explicit Butcher tableau `(A, b, c)` in exact rationals, with an
/// optional embedded weight vector `b̂` sharing the same stages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ButcherTableau {
    a: Vec<Vec<Rat>>,
    b: Vec<Rat>,
    c: Vec<Rat>,
    bhat: Option<Vec<Rat>>,
}

impl ButcherTableau {
    /// Validate dimensions and explicitness. Row-sum consistency
    /// (`c = A·1`) is *not* enforced here — on autonomous linear systems
    /// the abscissae never enter the update, so a violation is only worth
    /// a warning; query [`ButcherTableau::c_rows_consistent`] for it.
    pub fn new(
        a: Vec<Vec<Rat>>,
        b: Vec<Rat>,
        c: Vec<Rat>,
        bhat: Option<Vec<Rat>>,
    ) -> Result<Self, TableauError> {
        let s = b.len();
        if s == 0 {
            return Err(TableauError::Dimensions("no stages".into()));
        }
        if a.len() != s || a.iter().any(|row| row.len() != s) {
            return Err(TableauError::Dimensions(format!(
                "A must be {s}x{s} to match the {s} weights"
            )));
        }
        if c.len() != s {
            return Err(TableauError::Dimensions(format!(
                "c has {} entries, expected {s}",
                c.len()
            )));
        }
        if let Some(bh) = &bhat {
            if bh.len() != s {
                return Err(TableauError::Dimensions(format!(
                    "bhat has {} entries, expected {s}",
                    bh.len()
                )));
            }
        }
        for (i, row) in a.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if j >= i && !entry.is_zero() {
                    return Err(TableauError::NotExplicit { row: i, col: j });
                }
            }
        }
        Ok(ButcherTableau { a, b, c, bhat })
    }

    /// Stage count.
    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &[Vec<Rat>] {
        &self.a
    }

    pub fn b(&self) -> &[Rat] {
        &self.b
    }

    pub fn c(&self) -> &[Rat] {
        &self.c
    }

    pub fn bhat(&self) -> Option<&[Rat]> {
        self.bhat.as_deref()
    }

    /// Does `c_i = Σ_j A_{i,j}` hold for every stage?
    pub fn c_rows_consistent(&self) -> bool {
        self.a
            .iter()
            .zip(&self.c)
            .all(|(row, ci)| &row.iter().sum::<Rat>() == ci)
    }

    /// Exact stability polynomial of the tableau: `α_0 = 1` and
    /// `α_k = wᵀ A^{k-1} 1` for `k ≥ 1`, with `w` the main or embedded
    /// weights. Trailing zero coefficients are trimmed so `α_s ≠ 0`.
    pub fn stability_coefficients(
        &self,
        which: Which,
    ) -> Result<StabilityPolynomial, TableauError> {
        let w = match which {
            Which::Main => &self.b,
            Which::Embedded => self.bhat.as_ref().ok_or(TableauError::NoEmbedded)?,
        };
        let s = self.stages();
        let mut alpha = Vec::with_capacity(s + 1);
        alpha.push(rat_int(1));
        // v starts as A^0·1 and picks up one factor of A per degree.
        let mut v = vec![rat_int(1); s];
        for _ in 1..=s {
            alpha.push(w.iter().zip(&v).map(|(wi, vi)| wi * vi).sum());
            v = self
                .a
                .iter()
                .map(|row| row.iter().zip(&v).map(|(aij, vj)| aij * vj).sum())
                .collect();
        }
        Ok(StabilityPolynomial::from_alpha(alpha)?)
    }

    /// Relabel stages by `perm` (new stage `i` is old stage `perm[i]`),
    /// carrying `A` rows *and* columns, `b`, `c`, and `b̂` along. The
    /// result must still be explicit; relabelings that break strict
    /// lower-triangularity are rejected.
    pub fn permute_stages(&self, perm: &[usize]) -> Result<Self, TableauError> {
        let s = self.stages();
        if perm.len() != s {
            return Err(TableauError::BadPermutation(format!(
                "length {} for {s} stages",
                perm.len()
            )));
        }
        let mut seen = vec![false; s];
        for &p in perm {
            if p >= s || seen[p] {
                return Err(TableauError::BadPermutation(format!(
                    "{perm:?} is not a permutation of 0..{s}"
                )));
            }
            seen[p] = true;
        }
        let a = (0..s)
            .map(|i| (0..s).map(|j| self.a[perm[i]][perm[j]].clone()).collect())
            .collect();
        let b = perm.iter().map(|&p| self.b[p].clone()).collect();
        let c = perm.iter().map(|&p| self.c[p].clone()).collect();
        let bhat = self
            .bhat
            .as_ref()
            .map(|bh| perm.iter().map(|&p| bh[p].clone()).collect());
        Self::new(a, b, c, bhat)
    }

    /// Parse the structured text format:
    ///
    /// ```json
    /// {
    ///   "s": 3,
    ///   "A": [["0","0","0"], ["1","0","0"], ["1/2","1/2","0"]],
    ///   "b": ["1/2","1/2","0"],
    ///   "c": ["0","1","1"],
    ///   "bhat": ["1","-1/6","1/6"]
    /// }
    /// ```
    ///
    /// Every numeric entry is a string holding an integer, a fraction
    /// `p/q`, or a decimal literal (converted exactly); `bhat` is
    /// optional.
    pub fn from_json_str(text: &str) -> Result<Self, TableauError> {
        let doc: serde_json::Value =
            serde_json::from_str(text).map_err(|e| TableauError::Parse(e.to_string()))?;
        let obj = doc
            .as_object()
            .ok_or_else(|| TableauError::Parse("top level must be an object".into()))?;
        let s = obj
            .get("s")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| TableauError::Parse("field `s` must be a positive integer".into()))?
            as usize;
        let a_rows = obj
            .get("A")
            .and_then(serde_json::Value::as_array)
            .ok_or_else(|| TableauError::Parse("field `A` must be an array of rows".into()))?;
        let a = a_rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let row = row.as_array().ok_or_else(|| {
                    TableauError::Parse(format!("A[{i}] must be an array of entries"))
                })?;
                row.iter()
                    .enumerate()
                    .map(|(j, v)| parse_entry(v, &format!("A[{i}][{j}]")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let b = parse_vector(obj, "b", true)?.expect("required field");
        let c = parse_vector(obj, "c", true)?.expect("required field");
        let bhat = parse_vector(obj, "bhat", false)?;
        if a.len() != s || b.len() != s || c.len() != s {
            return Err(TableauError::Parse(format!(
                "declared s = {s} does not match the array dimensions"
            )));
        }
        Self::new(a, b, c, bhat)
    }
}

fn parse_entry(v: &serde_json::Value, at: &str) -> Result<Rat, TableauError> {
    let s = v
        .as_str()
        .ok_or_else(|| TableauError::Parse(format!("{at} must be a string numeric entry")))?;
    parse_rational(s).map_err(|e| TableauError::Parse(format!("{at}: {e}")))
}

fn parse_vector(
    obj: &serde_json::Map<String, serde_json::Value>,
    field: &str,
    required: bool,
) -> Result<Option<Vec<Rat>>, TableauError> {
    match obj.get(field) {
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| TableauError::Parse(format!("field `{field}` must be an array")))?;
            let parsed = arr
                .iter()
                .enumerate()
                .map(|(i, e)| parse_entry(e, &format!("{field}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Some(parsed))
        }
        None if required => Err(TableauError::Parse(format!("missing field `{field}`"))),
        None => Ok(None),
    }
}
