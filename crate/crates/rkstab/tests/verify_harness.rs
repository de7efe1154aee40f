//! Cross-checks between the exact verdicts and the floating-point
//! harness: methods classified as strongly stable must contract on
//! sampled semi-negative systems, methods with a positive leading
//! coefficient must visibly amplify on conserving systems, sweeps must
//! be bit-reproducible, and the exact expansion must reproduce the
//! measured energy balance to near machine precision.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rkstab::energy::expand_energy;
use rkstab::linalg::Mat;
use rkstab::polynomial::{StabilityPolynomial, Which};
use rkstab::presets;
use rkstab::rational::to_f64;
use rkstab::verify::{
    energy_decay_order, evaluate_matrix_polynomial, make_random_semi_negative,
    make_skew_conserving, make_upwind_advection, stability_sweep, SemiNegativeSystem,
};

fn method(name: &str, steps: usize) -> StabilityPolynomial {
    let r = presets::resolve(name, Which::Main)
        .expect("test methods are in the catalog")
        .polynomial;
    if steps > 1 {
        r.compose_steps(steps).expect("steps >= 1")
    } else {
        r
    }
}

/// Methods whose leading coefficient is positive, together with grids
/// coarse enough that the leading excess rises above float noise.
const AMPLIFYING: &[(&str, usize)] = &[
    ("taylor(1)", 1),
    ("taylor(2)", 1),
    ("taylor(5)", 1),
    ("taylor(6)", 1),
    ("taylor(9)", 1),
    ("taylor(10)", 1),
    ("pair2(1)", 1),
    ("pair3(2).embedded", 1),
];

/// Methods the exact analysis certifies as strongly stable.
const CONTRACTING: &[(&str, usize)] = &[
    ("taylor(3)", 1),
    ("taylor(7)", 1),
    ("taylor(11)", 1),
    ("ssprk(4,3)", 1),
    ("ssprk(10,4)", 1),
    ("taylor(4)", 2),
    ("taylor(4)", 3),
    ("ssprk(5,4)", 2),
    ("ssprk(5,4)", 3),
    ("pair3(2)", 1),
    ("pair4(3).embedded", 1),
];

#[test]
fn amplification_is_observable_for_unstable_methods() {
    // A conserving system isolates the β part of the energy balance, so
    // a positive leading coefficient must push the norm above 1. The
    // grid starts at τ‖L‖ ≈ 0.4 so the excess clears the 1e−9 margin
    // even at k* = 6.
    let sys = make_skew_conserving(6, 3);
    for &(name, steps) in AMPLIFYING {
        let r = method(name, steps);
        let report = stability_sweep(&r, &sys, 0.3, 0.9, 25).unwrap();
        assert!(
            report.h_norms.iter().any(|&x| x > 1.0 + 1e-9),
            "{name} (steps {steps}) never exceeded norm 1 on the skew system"
        );
    }
}

#[test]
fn contraction_holds_for_stable_methods_on_random_systems() {
    for &(name, steps) in CONTRACTING {
        let r = method(name, steps);
        for seed in 1..=5 {
            let sys = make_random_semi_negative(8, seed, 0.0);
            let report = stability_sweep(&r, &sys, 1e-4, 1e-1, 15).unwrap();
            assert!(
                report.max_stable_tau.is_some(),
                "{name} (steps {steps}) failed to contract at the small end, seed {seed}"
            );
        }
    }
}

#[test]
fn contraction_survives_dissipation_and_many_seeds() {
    for &(name, steps) in &[("taylor(3)", 1), ("taylor(4)", 2), ("ssprk(10,4)", 1)] {
        let r = method(name, steps);
        for seed in 1..=20 {
            let sys = make_random_semi_negative(8, seed, 0.3);
            let report = stability_sweep(&r, &sys, 1e-4, 1e-1, 12).unwrap();
            assert!(
                report.max_stable_tau.is_some(),
                "{name} (steps {steps}) on dissipative seed {seed}"
            );
        }
        let upwind = make_upwind_advection(12);
        let report = stability_sweep(&r, &upwind, 1e-4, 1e-2, 12).unwrap();
        assert!(report.max_stable_tau.is_some(), "{name} on upwind(12)");
    }
}

#[test]
fn reports_are_bit_reproducible() {
    let r = method("ssprk(10,4)", 1);
    let sys_a = make_random_semi_negative(8, 11, 0.25);
    let sys_b = make_random_semi_negative(8, 11, 0.25);
    assert_eq!(sys_a.l, sys_b.l);
    assert_eq!(sys_a.h, sys_b.h);
    let sweep_a = stability_sweep(&r, &sys_a, 1e-3, 1e-1, 20).unwrap();
    let sweep_b = stability_sweep(&r, &sys_b, 1e-3, 1e-1, 20).unwrap();
    assert_eq!(sweep_a, sweep_b);

    let taus = [0.1, 0.05, 0.025, 0.0125];
    let decay_a = energy_decay_order(&r, 5, &taus).unwrap();
    let decay_b = energy_decay_order(&r, 5, &taus).unwrap();
    assert_eq!(decay_a, decay_b);
}

fn h_inner(h: &Mat, v: &[f64], w: &[f64]) -> f64 {
    let hw = h.mat_vec(w);
    v.iter().zip(&hw).map(|(a, b)| a * b).sum()
}

/// Evaluate both sides of the energy balance in floating point:
/// ‖R(τL)u‖²_H against the β/Γ series with [v, w] = −⟨v, (LᵀH+HL)w⟩.
fn energy_balance_residual(
    r: &StabilityPolynomial,
    sys: &SemiNegativeSystem,
    u: &[f64],
    tau: f64,
) -> f64 {
    let e = expand_energy(r);
    let s = r.degree();
    let m = sys.l.transpose().mul(&sys.h).add(&sys.h.mul(&sys.l));

    let mut powers: Vec<Vec<f64>> = vec![u.to_vec()];
    for k in 1..=s {
        let next = sys.l.mat_vec(&powers[k - 1]);
        powers.push(next);
    }

    let ru = evaluate_matrix_polynomial(r, &sys.l, tau).mat_vec(u);
    let lhs = h_inner(&sys.h, &ru, &ru);

    let mut rhs = 0.0;
    for (k, beta) in e.beta().iter().enumerate() {
        rhs += to_f64(beta) * tau.powi(2 * k as i32) * h_inner(&sys.h, &powers[k], &powers[k]);
    }
    for (i, row) in e.gamma().iter().enumerate() {
        for (j, gamma) in row.iter().enumerate() {
            let mw = m.mat_vec(&powers[j]);
            let bracket: f64 = -powers[i].iter().zip(&mw).map(|(a, b)| a * b).sum::<f64>();
            rhs += to_f64(gamma) * tau.powi((i + j + 1) as i32) * bracket;
        }
    }
    (lhs - rhs).abs() / lhs.max(f64::MIN_POSITIVE)
}

#[test]
fn float_energy_balance_matches_exact_expansion() {
    // Dissipation is switched on so the Γ part of the balance is
    // exercised, not just the β diagonal.
    let methods = [
        ("taylor(2)", 1),
        ("taylor(3)", 1),
        ("taylor(4)", 1),
        ("taylor(6)", 1),
        ("ssprk(10,4)", 1),
    ];
    for &(name, steps) in &methods {
        let r = method(name, steps);
        for seed in [1_u64, 2] {
            let sys = make_random_semi_negative(6, seed, 0.7);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x00c0_ffee);
            let u: Vec<f64> = (0..sys.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for tau in [0.01, 0.02] {
                let rel = energy_balance_residual(&r, &sys, &u, tau);
                assert!(
                    rel <= 1e-10,
                    "{name} seed {seed} tau {tau}: relative residual {rel:e}"
                );
            }
        }
    }
}
