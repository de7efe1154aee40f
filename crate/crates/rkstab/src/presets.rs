//! Named method catalog.
//!
//! * `taylor(p)` — the `p`-stage order-`p` truncated-exponential method,
//!   any `p ≥ 1`;
//! * `ssprk(4,3)`, `ssprk(10,4)`, `ssprk(5,4)` — strong-stability-
//!   preserving methods with known stability polynomials;
//! * `pair2(1)`, `pair3(2)`, `pair4(3)` — embedded pairs with published
//!   tableaux; pick a side with [`Which`] or a `.main`/`.embedded`
//!   suffix on the name.
//!
//! The `ssprk(5,4)` quintic coefficient circulates as a 16-digit decimal;
//! it is stored as the exact rational with that decimal expansion
//! (`4477718303076007/10^18`), so analysis of the printed method is
//! exact. The `pair3(2)` embedded weights involve `√82`, which no
//! rational can hold: the catalog carries a 40-digit truncation and marks
//! the method [`ResolvedMethod::approximate_input`] so verdicts advertise
//! the caveat. (The leading energy coefficient of that method is immune:
//! `√82` cancels from it identically, so the headline classification is
//! exact anyway.)

use crate::polynomial::{ButcherTableau, StabilityPolynomial, Which};
use crate::rational::{inv_factorial, parse_rational, rat, rat_int, Rat};
use thiserror::Error;

/// Errors from catalog lookup.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresetError {
    /// Name not in the catalog.
    #[error("unknown preset `{0}` (available: taylor(p), ssprk(4,3), ssprk(10,4), ssprk(5,4), pair2(1), pair3(2), pair4(3))")]
    Unknown(String),
    /// Embedded side requested from a method that has none.
    #[error("preset `{0}` has no embedded companion")]
    NoEmbedded(String),
    /// `taylor(p)` with an unusable order.
    #[error("invalid Taylor order in `{0}`: must be an integer ≥ 1")]
    BadOrder(String),
}

/// A catalog entry resolved to a concrete polynomial.
#[derive(Clone, Debug)]
pub struct ResolvedMethod {
    /// Canonical display label, e.g. `taylor(4)` or `pair3(2) embedded`.
    pub label: String,
    /// The stability polynomial to analyze.
    pub polynomial: StabilityPolynomial,
    /// True when the coefficients contain a rational stand-in for an
    /// irrational value, so downstream verdicts should carry a note.
    pub approximate_input: bool,
}

/// Look up a preset by name. `which` selects the side of an embedded
/// pair and must be [`Which::Main`] for everything else; a `.main` or
/// `.embedded` suffix on the name overrides it.
pub fn resolve(name: &str, which: Which) -> Result<ResolvedMethod, PresetError> {
    let trimmed = name.trim();
    let (base, which) = match trimmed.strip_suffix(".embedded") {
        Some(base) => (base, Which::Embedded),
        None => match trimmed.strip_suffix(".main") {
            Some(base) => (base, Which::Main),
            None => (trimmed, which),
        },
    };

    if let Some(rest) = base.strip_prefix("taylor(") {
        let Some(digits) = rest.strip_suffix(')') else {
            return Err(PresetError::Unknown(trimmed.to_string()));
        };
        let p: usize = digits
            .parse()
            .map_err(|_| PresetError::BadOrder(trimmed.to_string()))?;
        let polynomial = StabilityPolynomial::taylor(p)
            .map_err(|_| PresetError::BadOrder(trimmed.to_string()))?;
        return finish(base, which, polynomial, false, trimmed);
    }

    let polynomial = match base {
        "ssprk(4,3)" => Some(ssprk43()),
        "ssprk(10,4)" => Some(ssprk104()),
        "ssprk(5,4)" => Some(ssprk54()),
        _ => None,
    };
    if let Some(polynomial) = polynomial {
        return finish(base, which, polynomial, false, trimmed);
    }

    if let Some(t) = pair_tableau(base) {
        let polynomial = t
            .stability_coefficients(which)
            .expect("catalog tableaux reduce cleanly");
        let side = match which {
            Which::Main => "main",
            Which::Embedded => "embedded",
        };
        return Ok(ResolvedMethod {
            label: format!("{base} {side}"),
            polynomial,
            approximate_input: base == "pair3(2)" && which == Which::Embedded,
        });
    }

    Err(PresetError::Unknown(trimmed.to_string()))
}

fn finish(
    base: &str,
    which: Which,
    polynomial: StabilityPolynomial,
    approximate_input: bool,
    full: &str,
) -> Result<ResolvedMethod, PresetError> {
    if which == Which::Embedded {
        return Err(PresetError::NoEmbedded(full.to_string()));
    }
    Ok(ResolvedMethod {
        label: base.to_string(),
        polynomial,
        approximate_input,
    })
}

/// The published tableau of an embedded pair, or `None` for other names.
pub fn pair_tableau(name: &str) -> Option<ButcherTableau> {
    match name {
        "pair2(1)" => Some(pair21()),
        "pair3(2)" => Some(pair32()),
        "pair4(3)" => Some(pair43()),
        _ => None,
    }
}

/// `P_3 + (1/48) z^4`: the 4-stage third-order SSP method.
pub fn ssprk43() -> StabilityPolynomial {
    let mut alpha: Vec<Rat> = (0..=3).map(inv_factorial).collect();
    alpha.push(rat(1, 48));
    StabilityPolynomial::from_alpha(alpha).expect("static coefficients")
}

/// The low-storage 10-stage fourth-order SSP method.
pub fn ssprk104() -> StabilityPolynomial {
    let mut alpha: Vec<Rat> = (0..=4).map(inv_factorial).collect();
    alpha.extend([
        rat(17, 2160),
        rat(7, 6480),
        rat(1, 9720),
        rat(1, 155520),
        rat(1, 4199040),
        rat(1, 251942400),
    ]);
    StabilityPolynomial::from_alpha(alpha).expect("static coefficients")
}

/// The 5-stage fourth-order SSP method: `P_4 + α_5 z^5` with the
/// printed 16-digit decimal held exactly.
pub fn ssprk54() -> StabilityPolynomial {
    let mut alpha: Vec<Rat> = (0..=4).map(inv_factorial).collect();
    alpha.push(ssprk54_quintic_coefficient());
    StabilityPolynomial::from_alpha(alpha).expect("static coefficients")
}

/// `α_5` of `ssprk(5,4)`: `4477718303076007/10^18`, exactly the
/// published decimal `4.477718303076007e-3`.
pub fn ssprk54_quintic_coefficient() -> Rat {
    parse_rational("0.004477718303076007").expect("static literal")
}

fn pair21() -> ButcherTableau {
    let a = vec![
        vec![rat_int(0), rat_int(0), rat_int(0)],
        vec![rat_int(1), rat_int(0), rat_int(0)],
        vec![rat(1, 2), rat(1, 2), rat_int(0)],
    ];
    let b = vec![rat(1, 2), rat(1, 2), rat_int(0)];
    let c = vec![rat_int(0), rat_int(1), rat_int(1)];
    let bhat = vec![rat_int(1), rat(-1, 6), rat(1, 6)];
    ButcherTableau::new(a, b, c, Some(bhat)).expect("static tableau")
}

fn pair32() -> ButcherTableau {
    let a = vec![
        vec![rat_int(0), rat_int(0), rat_int(0), rat_int(0)],
        vec![rat(1, 2), rat_int(0), rat_int(0), rat_int(0)],
        vec![rat_int(-1), rat_int(2), rat_int(0), rat_int(0)],
        vec![rat(1, 6), rat(2, 3), rat(1, 6), rat_int(0)],
    ];
    let b = vec![rat(1, 6), rat(2, 3), rat(1, 6), rat_int(0)];
    let c = vec![rat_int(0), rat(1, 2), rat_int(1), rat_int(1)];
    // The published embedded weights contain √82; r stands in for it.
    let r = sqrt82_approx();
    let bhat = vec![
        (rat_int(22) - &r) / rat_int(72),
        (&r + rat_int(14)) / rat_int(36),
        (&r - rat_int(4)) / rat_int(144),
        (rat_int(16) - &r) / rat_int(48),
    ];
    ButcherTableau::new(a, b, c, Some(bhat)).expect("static tableau")
}

fn pair43() -> ButcherTableau {
    let a = vec![
        vec![rat_int(0); 5],
        vec![rat(2, 5), rat_int(0), rat_int(0), rat_int(0), rat_int(0)],
        vec![rat(-3, 20), rat(3, 4), rat_int(0), rat_int(0), rat_int(0)],
        vec![
            rat(19, 44),
            rat(-15, 44),
            rat(10, 11),
            rat_int(0),
            rat_int(0),
        ],
        vec![
            rat(11, 72),
            rat(25, 72),
            rat(25, 72),
            rat(11, 72),
            rat_int(0),
        ],
    ];
    let b = vec![
        rat(11, 72),
        rat(25, 72),
        rat(25, 72),
        rat(11, 72),
        rat_int(0),
    ];
    let c = vec![rat_int(0), rat(2, 5), rat(3, 5), rat_int(1), rat_int(1)];
    let bhat = vec![
        rat(1251515, 8970912),
        rat(3710105, 8970912),
        rat(2519695, 8970912),
        rat(61105, 8970912),
        rat(119041, 747576),
    ];
    ButcherTableau::new(a, b, c, Some(bhat)).expect("static tableau")
}

/// `√82` truncated to 40 decimal digits. Any approximation this tight
/// leaves every sign decision of the `pair3(2)` analysis unchanged (and
/// the leading energy coefficient is exactly `1/12` no matter what value
/// stands in for the root — it cancels).
fn sqrt82_approx() -> Rat {
    let numer = "90553851381374166265738081669840664130521"
        .parse()
        .expect("static digits");
    let denom = num::BigInt::from(10u32).pow(40);
    Rat::new(numer, denom)
}
