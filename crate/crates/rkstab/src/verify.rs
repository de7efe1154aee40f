//! Floating-point verification harness.
//!
//! The exact analysis answers "is there a step-size restriction under
//! which the method contracts the H-norm?". This module checks those
//! verdicts numerically: it builds concrete systems `u' = Lu` with
//! `LᵀH + HL ⪯ 0`, evaluates the H-operator norm of one step over τ
//! grids, and measures how fast a conserved energy drifts under the
//! discrete flow.
//!
//! Systems come from three generators:
//!
//! * [`make_random_semi_negative`] — seeded random `H = CᵀC + 0.1·I`,
//!   `L = H⁻¹(S − D)` with `S` skew and `D = dissipation·BᵀB`, so that
//!   `LᵀH + HL = −2D` by construction; `dissipation = 0` gives exact
//!   energy conservation.
//! * [`make_skew_conserving`] — `H = I`, `L` skew-symmetric: the
//!   conserving case with no inverse applied, exact to the last bit.
//! * [`make_upwind_advection`] — periodic first-order upwind
//!   differences, the classic method-of-lines stiff test.
//! * [`counterexample_rk4`] — the fixed 3×3 upper-triangular system on
//!   which the classical fourth-order method exceeds norm 1 for small
//!   τ while its two-step composition does not.
//!
//! Norms are computed by a Cholesky similarity: with `H = LcLcᵀ` and
//! `U = Lcᵀ`, the map `M = U·R_s(τL)·U⁻¹` has `‖R_s(τL)‖_H = ‖M‖₂`,
//! which reduces to one symmetric eigensolve of `MᵀM`.

use crate::linalg::{
    cholesky, jacobi_eigenvalues, solve_lower_triangular, solve_upper_triangular, Mat,
};
use crate::polynomial::StabilityPolynomial;
use crate::rational::to_f64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Round-off allowance on the contraction test: a step counts as
/// stable at τ when `‖R_s(τL)‖_H ≤ 1 + STABLE_NORM_SLACK`. The exact
/// inequality has no slack; this absorbs Cholesky/Jacobi noise only.
pub const STABLE_NORM_SLACK: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("H is not symmetric positive definite")]
    NotSpd,
    #[error("semi-negativity violated: lambda_max = {lambda_max:e} exceeds bound {bound:e}")]
    NotSemiNegative { lambda_max: f64, bound: f64 },
    #[error("invalid grid: {0}")]
    BadGrid(String),
}

/// A concrete pair `(L, H)` with `H` SPD and `LᵀH + HL ⪯ 0`: the
/// continuous flow `u' = Lu` cannot increase `‖u‖²_H = ⟨u, Hu⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiNegativeSystem {
    pub l: Mat,
    pub h: Mat,
    pub label: String,
}

impl SemiNegativeSystem {
    /// Dimension `N`.
    pub fn dim(&self) -> usize {
        self.l.rows()
    }
}

/// One τ sweep: the grid, the measured norms, and the largest grid τ
/// that is stable together with every smaller grid τ (`None` when even
/// the smallest τ fails the contraction test).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub tau_grid: Vec<f64>,
    pub h_norms: Vec<f64>,
    pub max_stable_tau: Option<f64>,
}

/// Energy-drift measurement on a conserving system: signed deficits
/// `‖u⁰‖²_H − ‖u^N‖²_H` at each τ (with `N = 1/τ` steps, final time 1)
/// and the least-squares slope of `ln |deficit|` against `ln τ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayMeasurement {
    pub tau_list: Vec<f64>,
    pub deficits: Vec<f64>,
    pub slope: f64,
    /// True when the energy increases (deficits predominantly
    /// negative), the signature of a positive leading coefficient.
    pub energy_grows: bool,
}

fn draw_full(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = rng.gen_range(-1.0..1.0);
        }
    }
    m
}

fn draw_skew(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let x = rng.gen_range(-1.0..1.0);
            m[(i, j)] = x;
            m[(j, i)] = -x;
        }
    }
    m
}

/// Check the defining invariants: `H` symmetric positive definite and
/// `λ_max(LᵀH + HL)` below a round-off bound. The bound is relative to
/// `‖LᵀH + HL‖_F` with an absolute floor of
/// `1e−12·N·‖H‖_F·‖L‖_F`, since for conserving systems the matrix is
/// all round-off and a purely relative test would reject its own noise.
pub fn validate_semi_negative(sys: &SemiNegativeSystem) -> Result<(), VerifyError> {
    let n = sys.dim();
    if sys.h.rows() != n || sys.h.cols() != n || sys.l.cols() != n {
        return Err(VerifyError::NotSpd);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if sys.h[(i, j)] != sys.h[(j, i)] {
                return Err(VerifyError::NotSpd);
            }
        }
    }
    if cholesky(&sys.h).is_none() {
        return Err(VerifyError::NotSpd);
    }
    let m = sys.l.transpose().mul(&sys.h).add(&sys.h.mul(&sys.l));
    let lambda_max = jacobi_eigenvalues(&m)[0];
    let bound =
        (1e-10 * m.frobenius()).max(1e-12 * n as f64 * sys.h.frobenius() * sys.l.frobenius());
    if lambda_max <= bound {
        Ok(())
    } else {
        Err(VerifyError::NotSemiNegative { lambda_max, bound })
    }
}

/// Seeded random system with a dissipation knob.
///
/// Draws (in a fixed order, so identical seeds give bit-identical
/// systems) a skew `S`, a full `B`, and a full `C`, all with entries
/// uniform on `(−1, 1)`; sets `D = dissipation·BᵀB`,
/// `H = CᵀC + 0.1·I`, and `L = H⁻¹(S − D)`. Then
/// `LᵀH + HL = −2D ⪯ 0`, with equality (conservation) exactly when
/// `dissipation = 0`. `B` is drawn even then, to keep the stream layout
/// independent of the knob.
///
/// Panics if `n < 2` or `dissipation` is negative or non-finite.
pub fn make_random_semi_negative(n: usize, seed: u64, dissipation: f64) -> SemiNegativeSystem {
    assert!(n >= 2, "need dimension at least 2, got {n}");
    assert!(
        dissipation >= 0.0 && dissipation.is_finite(),
        "dissipation must be a finite nonnegative number, got {dissipation}"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = draw_skew(&mut rng, n);
    let b = draw_full(&mut rng, n);
    let c = draw_full(&mut rng, n);
    let d = b.transpose().mul(&b).scale(dissipation);
    let mut h = c.transpose().mul(&c);
    for i in 0..n {
        h[(i, i)] += 0.1;
    }
    let rhs = s.add(&d.scale(-1.0));
    let lc = cholesky(&h).expect("CᵀC + 0.1·I is positive definite");
    let z = solve_lower_triangular(&lc, &rhs);
    let l = solve_upper_triangular(&lc.transpose(), &z);
    let sys = SemiNegativeSystem {
        l,
        h,
        label: format!("random(n={n}, seed={seed}, dissipation={dissipation})"),
    };
    validate_semi_negative(&sys).expect("construction gives LᵀH + HL = −2·dissipation·BᵀB");
    sys
}

/// Exactly conserving system: `H = I` and `L` skew-symmetric, so
/// `LᵀH + HL = 0` to the last bit. Panics if `n < 2`.
pub fn make_skew_conserving(n: usize, seed: u64) -> SemiNegativeSystem {
    assert!(n >= 2, "need dimension at least 2, got {n}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sys = SemiNegativeSystem {
        l: draw_skew(&mut rng, n),
        h: Mat::identity(n),
        label: format!("skew(n={n}, seed={seed})"),
    };
    validate_semi_negative(&sys).expect("skew L with H = I conserves exactly");
    sys
}

/// Periodic first-order upwind differences on `n` cells of a unit
/// circle: `L_{ii} = −n`, `L_{i,i−1} = n` (index mod `n`), with the
/// cell-average weight `H = (1/n)·I`. `Lᵀ + L` is circulant with
/// symbol `2n(cos θ − 1) ≤ 0`. Panics if `n < 3`.
pub fn make_upwind_advection(n: usize) -> SemiNegativeSystem {
    assert!(n >= 3, "need at least 3 cells, got {n}");
    let mut l = Mat::zeros(n, n);
    for i in 0..n {
        l[(i, i)] = -(n as f64);
        l[(i, (i + n - 1) % n)] = n as f64;
    }
    let sys = SemiNegativeSystem {
        l,
        h: Mat::identity(n).scale(1.0 / n as f64),
        label: format!("upwind(n={n})"),
    };
    validate_semi_negative(&sys).expect("upwind symbol is nonpositive");
    sys
}

/// The fixed 3×3 system (`H = I`, `L` upper triangular with diagonal
/// −1) on which the classical fourth-order method is known to exceed
/// H-norm 1 for arbitrarily small τ, while its two-step composition
/// stays contractive — the witness behind the "counterexample known"
/// verdict note.
pub fn counterexample_rk4() -> SemiNegativeSystem {
    let l = Mat::from_rows(&[
        vec![-1.0, -2.0, -2.0],
        vec![0.0, -1.0, -2.0],
        vec![0.0, 0.0, -1.0],
    ]);
    let sys = SemiNegativeSystem {
        l,
        h: Mat::identity(3),
        label: "rk4-counterexample".to_string(),
    };
    validate_semi_negative(&sys).expect("Lᵀ + L is negative semi-definite");
    sys
}

/// Dense `R_s(τL)` by Horner evaluation in `τL`.
pub fn evaluate_matrix_polynomial(r: &StabilityPolynomial, l: &Mat, tau: f64) -> Mat {
    let n = l.rows();
    let tl = l.scale(tau);
    let alpha: Vec<f64> = r.alpha().iter().map(to_f64).collect();
    let s = alpha.len() - 1;
    let mut p = Mat::identity(n).scale(alpha[s]);
    for k in (0..s).rev() {
        p = tl.mul(&p);
        for i in 0..n {
            p[(i, i)] += alpha[k];
        }
    }
    p
}

/// `‖R_s(τL)‖_H` via the Cholesky similarity described in the module
/// docs. Exact value 1 at `τ = 0` up to solver round-off (≲ 1e−12).
pub fn h_operator_norm(
    r: &StabilityPolynomial,
    sys: &SemiNegativeSystem,
    tau: f64,
) -> Result<f64, VerifyError> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(VerifyError::BadGrid(format!(
            "tau must be a finite nonnegative number, got {tau}"
        )));
    }
    let rs = evaluate_matrix_polynomial(r, &sys.l, tau);
    let lc = cholesky(&sys.h).ok_or(VerifyError::NotSpd)?;
    // M = U·R·U⁻¹ with U = Lcᵀ: solve Lc·Yᵀ = Rᵀ for Yᵀ = (R·U⁻¹)ᵀ,
    // then left-multiply by U.
    let yt = solve_lower_triangular(&lc, &rs.transpose());
    let m = lc.transpose().mul(&yt.transpose());
    let mtm = m.transpose().mul(&m);
    Ok(jacobi_eigenvalues(&mtm)[0].max(0.0).sqrt())
}

/// Evaluate the norm over a geometric grid of `points` values from
/// `tau_min` to `tau_max` inclusive and locate the largest prefix-stable
/// τ (see [`SweepReport`]).
pub fn stability_sweep(
    r: &StabilityPolynomial,
    sys: &SemiNegativeSystem,
    tau_min: f64,
    tau_max: f64,
    points: usize,
) -> Result<SweepReport, VerifyError> {
    if !(tau_min.is_finite() && tau_max.is_finite()) || tau_min <= 0.0 {
        return Err(VerifyError::BadGrid(format!(
            "tau_min must be positive and finite, got {tau_min}"
        )));
    }
    if tau_max <= tau_min {
        return Err(VerifyError::BadGrid(format!(
            "tau_max ({tau_max}) must exceed tau_min ({tau_min})"
        )));
    }
    if points < 2 {
        return Err(VerifyError::BadGrid(format!(
            "need at least 2 grid points, got {points}"
        )));
    }
    let ratio = tau_max / tau_min;
    let mut tau_grid = Vec::with_capacity(points);
    let mut h_norms = Vec::with_capacity(points);
    let mut max_stable_tau = None;
    let mut prefix_stable = true;
    for i in 0..points {
        let t = i as f64 / (points - 1) as f64;
        let tau = tau_min * ratio.powf(t);
        let norm = h_operator_norm(r, sys, tau)?;
        if prefix_stable && norm <= 1.0 + STABLE_NORM_SLACK {
            max_stable_tau = Some(tau);
        } else {
            prefix_stable = false;
        }
        tau_grid.push(tau);
        h_norms.push(norm);
    }
    Ok(SweepReport {
        tau_grid,
        h_norms,
        max_stable_tau,
    })
}

/// `‖u‖²_H = ⟨u, Hu⟩`.
pub fn h_energy(sys: &SemiNegativeSystem, u: &[f64]) -> f64 {
    let hu = sys.h.mat_vec(u);
    u.iter().zip(&hu).map(|(a, b)| a * b).sum()
}

/// Measure the energy-drift order of `r` on a conserving random system
/// (`n = 8`, dissipation 0, built from `seed`; the initial state comes
/// from an independent stream at `seed + 1`).
///
/// For each τ the flow runs `N = round(1/τ)` steps (final time 1) and
/// records the signed deficit `‖u⁰‖²_H − ‖u^N‖²_H`; the reported slope
/// is the least-squares fit of `ln |deficit|` against `ln τ` and is
/// expected to approach `2k* − 1`.
///
/// `tau_list` must be geometric (consistent ratios to 1e−9 relative),
/// strictly monotone, with at least 4 points, each in `(0, 1]`.
pub fn energy_decay_order(
    r: &StabilityPolynomial,
    seed: u64,
    tau_list: &[f64],
) -> Result<DecayMeasurement, VerifyError> {
    if tau_list.len() < 4 {
        return Err(VerifyError::BadGrid(format!(
            "need at least 4 tau values for a slope fit, got {}",
            tau_list.len()
        )));
    }
    for &tau in tau_list {
        if !tau.is_finite() || tau <= 0.0 || tau > 1.0 {
            return Err(VerifyError::BadGrid(format!(
                "tau values must lie in (0, 1], got {tau}"
            )));
        }
    }
    let r0 = tau_list[1] / tau_list[0];
    if (r0 - 1.0).abs() <= 1e-9 {
        return Err(VerifyError::BadGrid(
            "tau values must be strictly monotone".to_string(),
        ));
    }
    for w in tau_list.windows(2) {
        let ri = w[1] / w[0];
        if (ri - r0).abs() > 1e-9 * r0.abs() {
            return Err(VerifyError::BadGrid(
                "tau values must form a geometric sequence".to_string(),
            ));
        }
    }
    let sys = make_random_semi_negative(8, seed, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let u0: Vec<f64> = (0..sys.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let e0 = h_energy(&sys, &u0);
    let mut deficits = Vec::with_capacity(tau_list.len());
    for &tau in tau_list {
        let step = evaluate_matrix_polynomial(r, &sys.l, tau);
        let n_steps = (1.0 / tau).round().max(1.0) as usize;
        let mut u = u0.clone();
        for _ in 0..n_steps {
            u = step.mat_vec(&u);
        }
        deficits.push(e0 - h_energy(&sys, &u));
    }
    let xs: Vec<f64> = tau_list.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = deficits
        .iter()
        .map(|d| d.abs().max(f64::MIN_POSITIVE).ln())
        .collect();
    let slope = least_squares_slope(&xs, &ys);
    let negatives = deficits.iter().filter(|d| **d < 0.0).count();
    Ok(DecayMeasurement {
        tau_list: tau_list.to_vec(),
        deficits,
        slope,
        energy_grows: 2 * negatives > tau_list.len(),
    })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - xbar) * (y - ybar);
        den += (x - xbar) * (x - xbar);
    }
    num / den
}
