//! The exact energy equality of one RK step.
//!
//! For `R_s(z) = Σ α_k z^k` and any pair `(L, H)` with `H` SPD, define
//! the semi-inner product `[v, w] = −⟨v, (LᵀH + HL)w⟩`. Then there is a
//! unique set of rationals `β_0..β_s` and a symmetric `s×s` matrix
//! `γ_{i,j}` (`0 ≤ i, j ≤ s−1`) with
//!
//! ```text
//! ‖R_s(τL)u‖²_H = Σ_k β_k τ^{2k} ‖L^k u‖²_H
//!               + Σ_{i,j} γ_{i,j} τ^{i+j+1} [L^i u, L^j u]
//! ```
//!
//! for every `u` and `τ`. [`expand_energy`] computes these coefficients
//! by expanding `⟨L^i u, H L^j u⟩` terms down the index ladder: each
//! cross term `(i, j)` with `i < j` trades one power of `L` across the
//! inner product against one `[L^{i+k}u, L^{j-1-k}u]` correction, until
//! the indices meet (a `‖L^k u‖²_H` term, `i + j` even) or cross (a
//! diagonal `[·,·]` term, `i + j` odd).
//!
//! The first nonzero `β_k` with `k ≥ 1` and the corresponding leading
//! block of `Γ` ([`leading_data`]) feed the classification; the closed
//! forms of [`closed_form_leading`] predict them straight from the α's
//! when the linear order allows, and serve as an independent
//! cross-check of the expansion.

use crate::polynomial::StabilityPolynomial;
use crate::rational::{factorial, inv_factorial, rat, rat_int, Rat};
use num::{BigInt, One, Zero};

/// Exact coefficients of the energy equality: `beta[k]` multiplies
/// `τ^{2k}‖L^k u‖²_H` and `gamma[i][j]` multiplies
/// `τ^{i+j+1}[L^i u, L^j u]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergyEquality {
    beta: Vec<Rat>,
    gamma: Vec<Vec<Rat>>,
}

impl EnergyEquality {
    /// `β_0..β_s`.
    pub fn beta(&self) -> &[Rat] {
        &self.beta
    }

    /// The symmetric `s×s` matrix `γ`, indices `0..s-1`.
    pub fn gamma(&self) -> &[Vec<Rat>] {
        &self.gamma
    }

    /// Degree `s` of the underlying polynomial.
    pub fn degree(&self) -> usize {
        self.beta.len() - 1
    }
}

/// Expand `‖R_s(τL)u‖²_H` into the energy equality.
///
/// Each product pair `(i, j)` with weight `α_iα_j` (doubled when
/// `i < j`) contributes:
///
/// * `i + j` even: `(−1)^{(j−i)/2}` times the weight to `β_{(i+j)/2}`;
/// * `i + j` odd: `(−1)^{(j−i+1)/2}·½` times the weight to the diagonal
///   entry `γ_{m,m}`, `m = (i+j−1)/2`;
/// * and for `k = 0..⌊(j−i)/2⌋−1` a correction `−(−1)^k` times the
///   weight, split half-and-half across the mirrored off-diagonal pair
///   `(i+k, j−1−k)` / `(j−1−k, i+k)` so `γ` stays exactly symmetric.
pub fn expand_energy(r: &StabilityPolynomial) -> EnergyEquality {
    let s = r.degree();
    let a = r.alpha();
    let mut beta = vec![Rat::zero(); s + 1];
    let mut gamma = vec![vec![Rat::zero(); s]; s];
    let half = rat(1, 2);
    for i in 0..=s {
        for j in i..=s {
            let mut w = &a[i] * &a[j];
            if w.is_zero() {
                continue;
            }
            if i < j {
                w *= rat_int(2);
            }
            let d = j - i;
            if (i + j) % 2 == 0 {
                let term = if (d / 2) % 2 == 1 {
                    -w.clone()
                } else {
                    w.clone()
                };
                beta[(i + j) / 2] += term;
            } else {
                let m = (i + j - 1) / 2;
                let term = if d.div_ceil(2) % 2 == 1 {
                    -w.clone()
                } else {
                    w.clone()
                };
                gamma[m][m] += term * &half;
            }
            for k in 0..d / 2 {
                let c = if k % 2 == 0 { -w.clone() } else { w.clone() };
                let (x, y) = (i + k, j - 1 - k);
                let c_half = c * &half;
                gamma[x][y] += &c_half;
                gamma[y][x] += c_half;
            }
        }
    }
    EnergyEquality { beta, gamma }
}

/// The verdict-deciding slice of an [`EnergyEquality`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingData {
    /// Smallest `k ≥ 1` with `β_k ≠ 0`.
    pub k_star: usize,
    /// `β_{k*}`.
    pub beta_star: Rat,
    /// Leading `k*×k*` principal submatrix of `γ`.
    pub gamma_star: Vec<Vec<Rat>>,
}

/// Extract the leading index, coefficient, and submatrix.
///
/// `β_s = α_s² > 0`, so the leading index always exists for a valid
/// polynomial; earlier `β_k` (`1 ≤ k < k*`) vanish by construction.
pub fn leading_data(e: &EnergyEquality) -> LeadingData {
    let k_star = (1..e.beta.len())
        .find(|&k| !e.beta[k].is_zero())
        .expect("β_s = α_s² is nonzero for every valid polynomial");
    let beta_star = e.beta[k_star].clone();
    let gamma_star = e.gamma[..k_star]
        .iter()
        .map(|row| row[..k_star].to_vec())
        .collect();
    LeadingData {
        k_star,
        beta_star,
        gamma_star,
    }
}

/// Closed-form predictions for the leading data of a method of linear
/// order `p ≥ 1`, derived from the structure of the Taylor remainder.
///
/// * Odd `p`: `k* = (p+1)/2`, `β_{k*} = (−1)^{k*}·2(α_{p+1} − 1/(p+1)!)`,
///   and the whole leading block is `γ_{i,j} = −1/(i!·j!·(i+j+1))` — a
///   negated, factorially scaled Hilbert matrix.
/// * Even `p`: the same `γ` formula on the `(p/2+1)`-block plus a
///   correction `ι = (−1)^{p/2+1}(α_{p+1} − 1/(p+1)!)` added at entry
///   `(p/2, p/2)`, and
///   `β_{p/2+1} = (−1)^{p/2+1}·2(α_{p+2} − α_{p+1} + 1/(p!(p+2)))`.
///   When that value is zero the true `k*` lies deeper and only the `γ`
///   block is predicted.
///
/// Every populated field must agree exactly with [`expand_energy`]; the
/// property suite enforces this.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormPrediction {
    /// Linear order the prediction was made for.
    pub linear_order: usize,
    /// Predicted leading index, when determined.
    pub k_star: Option<usize>,
    /// Predicted leading coefficient, when determined.
    pub beta_star: Option<Rat>,
    /// Predicted leading `γ` entries (size `(p+1)/2` for odd `p`,
    /// `p/2+1` for even `p`), when the linear order admits a prediction.
    pub gamma_block: Option<Vec<Vec<Rat>>>,
}

impl ClosedFormPrediction {
    fn silent(p: usize) -> Self {
        ClosedFormPrediction {
            linear_order: p,
            k_star: None,
            beta_star: None,
            gamma_block: None,
        }
    }
}

/// Predict leading data from the coefficients alone. Returns a fully
/// silent prediction for linear order 0 (for which no closed form
/// exists — composed multi-step maps land here).
pub fn closed_form_leading(r: &StabilityPolynomial) -> ClosedFormPrediction {
    let p = r.linear_order();
    if p == 0 {
        return ClosedFormPrediction::silent(0);
    }
    let sign = |k: usize| if k % 2 == 1 { rat_int(-1) } else { rat_int(1) };
    if p % 2 == 1 {
        let k_star = p.div_ceil(2);
        let beta_star = sign(k_star) * rat_int(2) * (r.coeff(p + 1) - inv_factorial(p + 1));
        let block = hilbert_like_block(k_star);
        if beta_star.is_zero() {
            // Unreachable for a genuine linear order p (α_{p+1} would
            // extend it), but stay silent rather than predict k* wrongly.
            return ClosedFormPrediction {
                linear_order: p,
                k_star: None,
                beta_star: None,
                gamma_block: Some(block),
            };
        }
        ClosedFormPrediction {
            linear_order: p,
            k_star: Some(k_star),
            beta_star: Some(beta_star),
            gamma_block: Some(block),
        }
    } else {
        let half = p / 2;
        let iota = sign(half + 1) * (r.coeff(p + 1) - inv_factorial(p + 1));
        let mut block = hilbert_like_block(half + 1);
        let corrected = block[half][half].clone() + iota;
        block[half][half] = corrected;
        let beta_pred = sign(half + 1)
            * rat_int(2)
            * (r.coeff(p + 2) - r.coeff(p + 1)
                + Rat::new(BigInt::one(), factorial(p) * BigInt::from(p + 2)));
        if beta_pred.is_zero() {
            // Only a lower bound k* ≥ p/2 + 1 is known here.
            return ClosedFormPrediction {
                linear_order: p,
                k_star: None,
                beta_star: None,
                gamma_block: Some(block),
            };
        }
        ClosedFormPrediction {
            linear_order: p,
            k_star: Some(half + 1),
            beta_star: Some(beta_pred),
            gamma_block: Some(block),
        }
    }
}

/// `γ_{i,j} = −1/(i!·j!·(i+j+1))` for `0 ≤ i, j < n`.
fn hilbert_like_block(n: usize) -> Vec<Vec<Rat>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    -Rat::new(
                        BigInt::one(),
                        factorial(i) * factorial(j) * BigInt::from(i + j + 1),
                    )
                })
                .collect()
        })
        .collect()
}

/// Order of energy accuracy: on a conserving system the scheme changes
/// `‖u‖²_H` at rate `O(τ^{2k*−1})` per unit time.
pub fn energy_accuracy(l: &LeadingData) -> usize {
    2 * l.k_star - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn taylor(p: usize) -> StabilityPolynomial {
        StabilityPolynomial::taylor(p).unwrap()
    }

    #[test]
    fn euler_expansion() {
        // ‖(I + τL)u‖² = ‖u‖² + τ²‖Lu‖² − τ[u, u] exactly.
        let e = expand_energy(&taylor(1));
        assert_eq!(e.beta(), &[rat_int(1), rat_int(1)]);
        assert_eq!(e.gamma(), &[vec![rat_int(-1)]]);
    }

    #[test]
    fn second_order_expansion() {
        let e = expand_energy(&taylor(2));
        assert_eq!(e.beta(), &[rat_int(1), rat_int(0), rat(1, 4)]);
        assert_eq!(
            e.gamma(),
            &[vec![rat_int(-1), rat(-1, 2)], vec![rat(-1, 2), rat(-1, 2)],]
        );
    }

    #[test]
    fn third_order_leading_block() {
        let e = expand_energy(&taylor(3));
        let l = leading_data(&e);
        assert_eq!(l.k_star, 2);
        assert_eq!(l.beta_star, rat(-1, 12));
        assert_eq!(
            l.gamma_star,
            vec![vec![rat_int(-1), rat(-1, 2)], vec![rat(-1, 2), rat(-1, 3)],]
        );
    }

    #[test]
    fn beta_invariants() {
        for p in 1..=9 {
            let r = taylor(p);
            let e = expand_energy(&r);
            assert_eq!(e.beta()[0], rat_int(1), "β₀ at p={p}");
            let last = r.alpha().last().unwrap();
            assert_eq!(e.beta()[p], last * last, "β_s at p={p}");
        }
    }

    #[test]
    fn gamma_is_symmetric() {
        let r = crate::presets::ssprk104();
        let e = expand_energy(&r);
        let g = e.gamma();
        for (i, row) in g.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(x, &g[j][i]);
            }
        }
    }

    #[test]
    fn ssprk104_gamma_entry() {
        let e = expand_energy(&crate::presets::ssprk104());
        assert_eq!(e.gamma()[2][2], rat(-107, 2160));
    }

    #[test]
    fn leading_taylor7_and_12() {
        let l7 = leading_data(&expand_energy(&taylor(7)));
        assert_eq!((l7.k_star, l7.beta_star), (4, rat(-1, 20160)));
        let l12 = leading_data(&expand_energy(&taylor(12)));
        assert_eq!((l12.k_star, l12.beta_star), (7, rat(-1, 3353011200)));
    }

    #[test]
    fn three_step_fourth_order() {
        let cubed = taylor(4).compose_steps(3).unwrap();
        let l = leading_data(&expand_energy(&cubed));
        assert_eq!(l.k_star, 3);
        assert_eq!(l.beta_star, rat(-1, 24));
        let expected = [
            [rat_int(-3), rat(-9, 2), rat(-9, 2)],
            [rat(-9, 2), rat_int(-9), rat(-81, 8)],
            [rat(-9, 2), rat(-81, 8), rat(-97, 8)],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert_eq!(&l.gamma_star[i][j], want, "({i},{j})");
            }
        }
    }

    #[test]
    fn closed_form_odd() {
        // p = 3, α₄ = 0: β₂ = (−1)²·2·(0 − 1/24) = −1/12.
        let pred = closed_form_leading(&taylor(3));
        assert_eq!(pred.k_star, Some(2));
        assert_eq!(pred.beta_star, Some(rat(-1, 12)));
        let block = pred.gamma_block.unwrap();
        assert_eq!(block[1][1], rat(-1, 3));
        let e = expand_energy(&taylor(3));
        let l = leading_data(&e);
        assert_eq!(block, l.gamma_star);
    }

    #[test]
    fn closed_form_even_with_correction() {
        // ssprk(10,4): even p = 4, α₅ = 17/2160, α₆ = 7/6480.
        let r = crate::presets::ssprk104();
        let pred = closed_form_leading(&r);
        assert_eq!(pred.k_star, Some(3));
        assert_eq!(pred.beta_star, Some(rat(-1, 3240)));
        let block = pred.gamma_block.unwrap();
        // −1/(2!·2!·5) + ι with ι = (−1)³(17/2160 − 1/120) = 1/2160.
        assert_eq!(block[2][2], rat(-107, 2160));
        let l = leading_data(&expand_energy(&r));
        assert_eq!(block, l.gamma_star);
    }

    #[test]
    fn closed_form_silent_for_composed_maps() {
        let sq = taylor(4).compose_steps(2).unwrap();
        let pred = closed_form_leading(&sq);
        assert_eq!(pred.linear_order, 0);
        assert_eq!(pred.k_star, None);
        assert_eq!(pred.gamma_block, None);
    }

    #[test]
    fn accuracy_orders() {
        let l3 = leading_data(&expand_energy(&taylor(3)));
        assert_eq!(energy_accuracy(&l3), 3);
        let l4 = leading_data(&expand_energy(&taylor(4)));
        assert_eq!(energy_accuracy(&l4), 5);
        let l1 = leading_data(&expand_energy(&taylor(1)));
        assert_eq!(energy_accuracy(&l1), 1);
    }
}
