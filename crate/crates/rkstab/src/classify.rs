//! Strong-stability verdicts from leading energy data.
//!
//! The decision procedure: let `k*` be the leading index, `β* = β_{k*}`,
//! and `Γ*` the leading `k*×k*` block of `γ`.
//!
//! * `β* > 0` — not strongly stable: on a conserving system the energy
//!   grows at order `τ^{2k*}` per step for generic data.
//! * `β* < 0` and `Γ*` negative definite — strongly stable: there is a
//!   step-size restriction `τ‖L‖_H ≤ λ` under which `‖R_s(τL)‖_H ≤ 1`.
//! * otherwise — undetermined: the leading data alone cannot decide.
//!
//! Definiteness is decided in exact rational arithmetic (Sylvester's
//! criterion via fraction-free elimination), never from floating-point
//! eigenvalues: leading blocks in practice have eigenvalues as small as
//! `~1e−10` while their entries are `O(1)`, far inside float round-off
//! if one were to trust a numerical spectrum. The float eigenvalues are
//! still computed and reported, as diagnostics.
//!
//! Two shortcut criteria avoid the full expansion when the linear order
//! is known: an exact iff-test for odd order, and a sufficient-only
//! test for even order whose second inequality compares against the
//! smallest eigenvalue of a Hilbert matrix and therefore carries a
//! guard band.

use crate::energy::{closed_form_leading, leading_data, EnergyEquality};
use crate::linalg::{jacobi_eigenvalues, Mat};
use crate::polynomial::StabilityPolynomial;
use crate::rational::{factorial, inv_factorial, to_f64, Rat};
use num::{BigInt, One, Signed};
use thiserror::Error;

/// Note attached to methods for which an explicit instability witness
/// is known even though the verdict is [`Status::Undetermined`].
pub const NOTE_COUNTEREXAMPLE: &str = "counterexample known";

/// Note attached when the analyzed coefficients contain a rational
/// stand-in for an irrational tableau entry, so `Γ*` and its spectrum
/// are approximations (leading `β*` values may still be exact when the
/// irrational part cancels).
pub const NOTE_APPROXIMATE_INPUT: &str = "approximate-input";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("matrix is not symmetric: entries ({i},{j}) and ({j},{i}) differ")]
    NotSymmetric { i: usize, j: usize },
    #[error("criterion applies to odd linear order only, got {0}")]
    OddOrderRequired(usize),
    #[error("criterion applies to even linear order >= 2 only, got {0}")]
    EvenOrderRequired(usize),
}

/// Outcome of the one-step contraction test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    StronglyStable,
    NotStronglyStable,
    Undetermined,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::StronglyStable => "StronglyStable",
            Status::NotStronglyStable => "NotStronglyStable",
            Status::Undetermined => "Undetermined",
        })
    }
}

/// Full verdict: the decision plus the data it was decided on.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityVerdict {
    pub status: Status,
    /// Leading index `k*`.
    pub k_star: usize,
    /// Leading coefficient `β_{k*}` (exact).
    pub beta_star: Rat,
    /// Exact negative-definiteness of `Γ*`.
    pub gamma_star_definite: bool,
    /// Float spectrum of `Γ*`, sorted descending — diagnostic only,
    /// never used for the decision.
    pub gamma_star_eigenvalues: Vec<f64>,
    /// Annotations such as [`NOTE_COUNTEREXAMPLE`].
    pub notes: Vec<String>,
}

#[allow(clippy::needless_range_loop)] // mirror-pair access reads best with indices
fn check_symmetric(g: &[Vec<Rat>]) -> Result<(), ClassifyError> {
    let n = g.len();
    for (row, r) in g.iter().enumerate() {
        if r.len() != n {
            return Err(ClassifyError::NotSquare {
                row,
                len: r.len(),
                expected: n,
            });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if g[i][j] != g[j][i] {
                return Err(ClassifyError::NotSymmetric { i, j });
            }
        }
    }
    Ok(())
}

/// Exact negative-definiteness via Sylvester's criterion: every leading
/// principal minor `det(G_j)` must satisfy `(−1)^j det(G_j) > 0`.
///
/// The minors are computed by Bareiss fraction-free elimination on an
/// integer scaling of `G` (all entries multiplied by the positive lcm
/// of the denominators, which multiplies `det(G_j)` by `lcm^j > 0` and
/// so preserves every sign). No tolerance is involved anywhere; a zero
/// minor yields `false`.
pub fn is_negative_definite_exact(g: &[Vec<Rat>]) -> Result<bool, ClassifyError> {
    check_symmetric(g)?;
    let n = g.len();
    if n == 0 {
        return Ok(true);
    }
    let mut scale = BigInt::one();
    for row in g {
        for x in row {
            scale = num::integer::lcm(scale, x.denom().clone());
        }
    }
    let mut m: Vec<Vec<BigInt>> = g
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x.numer() * (&scale / x.denom()))
                .collect()
        })
        .collect();
    // Bareiss invariant: entering step k, m[k][k] equals the leading
    // (k+1)×(k+1) minor of the scaled matrix, and all divisions below
    // are exact in the integers.
    let mut prev = BigInt::one();
    for k in 0..n {
        let minor_ok = if (k + 1) % 2 == 1 {
            m[k][k].is_negative()
        } else {
            m[k][k].is_positive()
        };
        if !minor_ok {
            return Ok(false);
        }
        if k + 1 == n {
            break;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(true)
}

/// Float spectrum of a symmetric rational matrix, sorted descending.
///
/// Accuracy is limited by the f64 image of the entries; for the
/// well-separated spectra of dimension ≤ 16 that arise here the Jacobi
/// sweeps deliver ~1e−10 relative error. Decisions must use
/// [`is_negative_definite_exact`] instead.
pub fn symmetric_eigenvalues(g: &[Vec<Rat>]) -> Result<Vec<f64>, ClassifyError> {
    check_symmetric(g)?;
    let n = g.len();
    let m = Mat::from_fn(n, n, |i, j| to_f64(&g[i][j]));
    Ok(jacobi_eigenvalues(&m))
}

/// Decide strong stability from an energy expansion.
pub fn classify_strong_stability(e: &EnergyEquality) -> StabilityVerdict {
    let lead = leading_data(e);
    let definite = is_negative_definite_exact(&lead.gamma_star)
        .expect("leading block of an energy expansion is square and symmetric");
    let eigenvalues = symmetric_eigenvalues(&lead.gamma_star)
        .expect("leading block of an energy expansion is square and symmetric");
    let status = if lead.beta_star.is_positive() {
        Status::NotStronglyStable
    } else if definite {
        // β* < 0 here: it is the first nonzero coefficient.
        Status::StronglyStable
    } else {
        Status::Undetermined
    };
    StabilityVerdict {
        status,
        k_star: lead.k_star,
        beta_star: lead.beta_star,
        gamma_star_definite: definite,
        gamma_star_eigenvalues: eigenvalues,
        notes: Vec::new(),
    }
}

/// [`classify_strong_stability`] on the expansion of `r`, with the
/// known-counterexample registry applied: for the classical four-stage
/// fourth-order method and for ssprk(5,4), explicit systems are known
/// on which the H-norm exceeds 1, so their `Undetermined` verdicts
/// carry [`NOTE_COUNTEREXAMPLE`].
pub fn classify_method(r: &StabilityPolynomial) -> StabilityVerdict {
    let mut verdict = classify_strong_stability(&crate::energy::expand_energy(r));
    if has_known_counterexample(r) {
        verdict.notes.push(NOTE_COUNTEREXAMPLE.to_string());
    }
    verdict
}

fn has_known_counterexample(r: &StabilityPolynomial) -> bool {
    let taylor4 = StabilityPolynomial::taylor(4).expect("4 >= 1");
    if r.alpha() == taylor4.alpha() {
        return true;
    }
    r.alpha() == crate::presets::ssprk54().alpha()
}

/// Exact iff-criterion for odd linear order `p`: strongly stable
/// exactly when `(−1)^{(p+1)/2} (α_{p+1} − 1/(p+1)!) < 0`.
///
/// For odd `p` the leading block `Γ*` is the factorially scaled Hilbert
/// block, always negative definite, so the sign of `β*` alone decides —
/// and this expression is `β*` up to the positive factor 2.
pub fn odd_order_criterion(r: &StabilityPolynomial) -> Result<bool, ClassifyError> {
    let p = r.linear_order();
    if p.is_multiple_of(2) {
        return Err(ClassifyError::OddOrderRequired(p));
    }
    let k = p.div_ceil(2);
    let diff = r.coeff(p + 1) - inv_factorial(p + 1);
    let signed = if k % 2 == 1 { -diff } else { diff };
    Ok(signed.is_negative())
}

/// Result of the even-order sufficient test.
///
/// `Borderline` arises only from the second inequality, which compares
/// a rational expression against the float smallest eigenvalue of a
/// Hilbert matrix: when the two sides agree to better than 1e−9
/// relative, neither "holds" nor "fails" is trustworthy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionOutcome {
    Satisfied,
    NotSatisfied,
    Borderline,
}

/// Sufficient (not necessary) test for even linear order `p ≥ 2`.
///
/// Two conditions, both required:
///
/// 1. exact: the predicted leading coefficient
///    `(−1)^{p/2+1}·2(α_{p+2} − α_{p+1} + 1/(p!(p+2)))` is negative;
/// 2. guarded float: `(−1)^{p/2+1}·((p/2)!)²·(α_{p+1} − 1/(p+1)!)` is
///    less than the smallest eigenvalue `ε` of the Hilbert matrix of
///    order `p/2 + 1`, with a 1e−9 relative guard band around `ε`
///    inside which the outcome is [`CriterionOutcome::Borderline`].
///
/// `Satisfied` implies strongly stable; `NotSatisfied` implies nothing
/// (ssprk(10,4) satisfies it, but condition 2 is conservative).
pub fn even_order_sufficient(r: &StabilityPolynomial) -> Result<CriterionOutcome, ClassifyError> {
    let p = r.linear_order();
    if p % 2 == 1 || p == 0 {
        return Err(ClassifyError::EvenOrderRequired(p));
    }
    let prediction = closed_form_leading(r);
    let first_holds = prediction
        .beta_star
        .as_ref()
        .is_some_and(|b| b.is_negative());
    if !first_holds {
        return Ok(CriterionOutcome::NotSatisfied);
    }
    let half = p / 2;
    let fact = factorial(half);
    let mut lhs = Rat::from_integer(&fact * &fact) * (r.coeff(p + 1) - inv_factorial(p + 1));
    if (half + 1) % 2 == 1 {
        lhs = -lhs;
    }
    let lhs = to_f64(&lhs);
    let eps = *symmetric_eigenvalues(&hilbert_matrix(half + 1))
        .expect("hilbert matrix is symmetric")
        .last()
        .expect("hilbert matrix is nonempty");
    let band = 1e-9 * lhs.abs().max(eps.abs());
    Ok(if lhs < eps - band {
        CriterionOutcome::Satisfied
    } else if lhs > eps + band {
        CriterionOutcome::NotSatisfied
    } else {
        CriterionOutcome::Borderline
    })
}

/// The `n×n` Hilbert matrix, entries `1/(i+j+1)`.
pub fn hilbert_matrix(n: usize) -> Vec<Vec<Rat>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Rat::new(BigInt::one(), BigInt::from(i + j + 1)))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::expand_energy;
    use crate::rational::{rat, rat_int};

    fn taylor(p: usize) -> StabilityPolynomial {
        StabilityPolynomial::taylor(p).unwrap()
    }

    fn gamma_star(r: &StabilityPolynomial) -> Vec<Vec<Rat>> {
        leading_data(&expand_energy(r)).gamma_star
    }

    #[test]
    fn negative_definite_two_by_two() {
        let g = vec![vec![rat_int(-1), rat(-1, 2)], vec![rat(-1, 2), rat(-1, 3)]];
        assert!(is_negative_definite_exact(&g).unwrap());
    }

    #[test]
    fn fourth_order_block_is_indefinite() {
        let g = vec![
            vec![rat_int(-1), rat(-1, 2), rat(-1, 6)],
            vec![rat(-1, 2), rat(-1, 3), rat(-1, 8)],
            vec![rat(-1, 6), rat(-1, 8), rat(-1, 24)],
        ];
        assert!(!is_negative_definite_exact(&g).unwrap());
        assert_eq!(gamma_star(&taylor(4)), g);
    }

    #[test]
    fn negated_identity_is_negative_definite() {
        for n in [1usize, 4] {
            let g: Vec<Vec<Rat>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { rat_int(-1) } else { rat_int(0) })
                        .collect()
                })
                .collect();
            assert!(is_negative_definite_exact(&g).unwrap(), "n={n}");
        }
    }

    #[test]
    fn zero_minor_is_not_definite() {
        // Leading 1×1 minor vanishes.
        let g = vec![vec![rat_int(0), rat_int(1)], vec![rat_int(1), rat_int(-3)]];
        assert!(!is_negative_definite_exact(&g).unwrap());
    }

    #[test]
    fn non_symmetric_rejected() {
        let g = vec![vec![rat_int(-1), rat_int(2)], vec![rat_int(0), rat_int(-1)]];
        assert_eq!(
            is_negative_definite_exact(&g),
            Err(ClassifyError::NotSymmetric { i: 0, j: 1 })
        );
        assert!(symmetric_eigenvalues(&g).is_err());
        let ragged = vec![vec![rat_int(-1)], vec![rat_int(0), rat_int(-1)]];
        assert!(matches!(
            is_negative_definite_exact(&ragged),
            Err(ClassifyError::NotSquare { row: 0, .. })
        ));
    }

    #[test]
    fn eigenvalues_of_third_order_block() {
        let eigs = symmetric_eigenvalues(&gamma_star(&taylor(3))).unwrap();
        assert_eq!(eigs.len(), 2);
        assert!((eigs[0] - (-6.57415e-2)).abs() < 1e-5 * 6.57415e-2);
        assert!((eigs[1] - (-1.26759)).abs() < 1e-5 * 1.26759);
    }

    #[test]
    fn eigenvalues_of_diagonal_matrix() {
        let g = vec![vec![rat_int(-1), rat_int(0)], vec![rat_int(0), rat_int(-2)]];
        let eigs = symmetric_eigenvalues(&g).unwrap();
        assert!((eigs[0] + 1.0).abs() < 1e-14 && (eigs[1] + 2.0).abs() < 1e-14);
    }

    #[test]
    fn delicate_eigenvalue_order_eleven() {
        // 6×6 leading block with spectrum spanning ~10 orders of
        // magnitude; descending order puts the near-zero value first.
        let eigs = symmetric_eigenvalues(&gamma_star(&taylor(11))).unwrap();
        assert_eq!(eigs.len(), 6);
        let tiny = eigs[0];
        assert!(
            ((tiny - (-7.87018e-11)) / 7.87018e-11).abs() < 1e-5,
            "got {tiny:e}"
        );
    }

    #[test]
    fn verdicts_for_taylor_methods() {
        let v3 = classify_method(&taylor(3));
        assert_eq!(v3.status, Status::StronglyStable);
        assert!(v3.gamma_star_definite && v3.notes.is_empty());

        let v5 = classify_method(&taylor(5));
        assert_eq!(v5.status, Status::NotStronglyStable);
        assert_eq!(v5.beta_star, rat(1, 360));

        let v4 = classify_method(&taylor(4));
        assert_eq!(v4.status, Status::Undetermined);
        assert_eq!(v4.notes, vec![NOTE_COUNTEREXAMPLE.to_string()]);
        assert!(!v4.gamma_star_definite);

        let v8 = classify_method(&taylor(8));
        assert_eq!(v8.status, Status::Undetermined);
        assert!(v8.notes.is_empty());
    }

    #[test]
    fn ssprk54_carries_counterexample_note() {
        let v = classify_method(&crate::presets::ssprk54());
        assert_eq!(v.status, Status::Undetermined);
        assert_eq!(v.notes, vec![NOTE_COUNTEREXAMPLE.to_string()]);
    }

    #[test]
    fn mod_four_pattern() {
        use Status::*;
        let expected = [
            NotStronglyStable, // 1
            NotStronglyStable, // 2
            StronglyStable,    // 3
            Undetermined,      // 4
            NotStronglyStable, // 5
            NotStronglyStable, // 6
            StronglyStable,    // 7
            Undetermined,      // 8
        ];
        for (p, want) in (1..=8).zip(expected) {
            assert_eq!(classify_method(&taylor(p)).status, want, "p={p}");
        }
    }

    #[test]
    fn odd_criterion_matches_fixtures() {
        assert!(odd_order_criterion(&crate::presets::ssprk43()).unwrap());
        assert!(odd_order_criterion(&taylor(3)).unwrap());
        assert!(!odd_order_criterion(&taylor(5)).unwrap());
        assert_eq!(
            odd_order_criterion(&taylor(4)),
            Err(ClassifyError::OddOrderRequired(4))
        );
    }

    #[test]
    fn even_criterion_fixtures() {
        assert_eq!(
            even_order_sufficient(&crate::presets::ssprk104()).unwrap(),
            CriterionOutcome::Satisfied
        );
        // Condition 1 holds but the guarded inequality fails by a wide
        // margin (+1/30 against ε ≈ 2.687e−3).
        assert_eq!(
            even_order_sufficient(&taylor(4)).unwrap(),
            CriterionOutcome::NotSatisfied
        );
        assert_eq!(
            even_order_sufficient(&taylor(3)),
            Err(ClassifyError::EvenOrderRequired(3))
        );
        let composed = taylor(4).compose_steps(2).unwrap();
        assert_eq!(
            even_order_sufficient(&composed),
            Err(ClassifyError::EvenOrderRequired(0))
        );
    }

    #[test]
    fn even_criterion_with_tiny_second_condition() {
        // Order 2 with α₃ just below 1/6: the guarded left side is
        // −1/3000, far below ε(Hilbert 2) ≈ 6.57e−2, and the exact
        // condition gives 2(0 − 499/3000 + 1/8) = −31/375 < 0.
        let alpha = vec![rat_int(1), rat_int(1), rat(1, 2), rat(499, 3000)];
        let r = StabilityPolynomial::from_alpha(alpha).unwrap();
        assert_eq!(r.linear_order(), 2);
        assert_eq!(
            even_order_sufficient(&r).unwrap(),
            CriterionOutcome::Satisfied
        );
        // Sufficiency: the full classification must agree.
        assert_eq!(classify_method(&r).status, Status::StronglyStable);
    }

    #[test]
    fn hilbert_entries() {
        let h = hilbert_matrix(3);
        assert_eq!(h[0][0], rat_int(1));
        assert_eq!(h[1][2], rat(1, 4));
        assert_eq!(h[2][2], rat(1, 5));
    }
}
