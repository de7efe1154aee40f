//! Command-line front end: classify a method, print or check the
//! built-in reference tables, sweep H-operator norms on test systems,
//! measure the energy-drift order, and replay the fourth-order
//! counterexample.
//!
//! Exit codes: `analyze` maps the verdict (0 strongly stable, 1 not,
//! 2 undetermined); `tables --check`, `verify`, `decay`, and
//! `counterexample` return 0 when the recomputation or measurement is
//! consistent with expectations and 1 when it is not; usage and input
//! errors exit 3.

mod report;
mod tables;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use report::{csv_field, fmt_sig6, AnalysisReport};
use rkstab::classify::{classify_method, Status, NOTE_APPROXIMATE_INPUT, NOTE_COUNTEREXAMPLE};
use rkstab::energy::{energy_accuracy, expand_energy, leading_data};
use rkstab::polynomial::{ButcherTableau, StabilityPolynomial, Which};
use rkstab::presets;
use rkstab::rational::{format_rational, parse_rational};
use rkstab::verify::{
    counterexample_rk4, energy_decay_order, make_random_semi_negative, make_upwind_advection,
    stability_sweep, SweepReport,
};
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "rkstab",
    version,
    about = "Energy-based strong-stability analysis for explicit Runge-Kutta methods"
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Suppress report output (exit codes still carry the outcome).
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one method: leading coefficient, leading block, verdict.
    Analyze(AnalyzeArgs),
    /// Print the reference tables; --check recomputes and compares.
    Tables(TablesArgs),
    /// Sweep the H-operator norm over a τ grid on a test system.
    Verify(VerifyArgs),
    /// Measure the energy-drift order (expected 2k*−1) on a conserving system.
    Decay(DecayArgs),
    /// Replay the fourth-order method on its 3×3 witness system.
    Counterexample(CounterexampleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WhichArg {
    Main,
    Embedded,
}

#[derive(Args)]
struct SourceArgs {
    /// Named preset: taylor(p), ssprk(4,3), ssprk(10,4), ssprk(5,4),
    /// pair2(1), pair3(2), pair4(3); append .embedded for the companion.
    #[arg(long, group = "source", value_name = "NAME")]
    preset: Option<String>,

    /// Stability coefficients a_0, a_1, …, a_s as rationals,
    /// e.g. "1, 1, 1/2, 1/6".
    #[arg(long, group = "source", value_name = "LIST")]
    alpha: Option<String>,

    /// Path to a Butcher tableau in JSON form (fields s, A, b, c,
    /// optional bhat; entries as rational strings).
    #[arg(long, group = "source", value_name = "PATH")]
    tableau: Option<String>,

    /// Analyze the m-fold composition of the method with itself.
    #[arg(long, default_value_t = 1, value_name = "M")]
    steps: usize,

    /// Weight row to use from a tableau or an embedded pair.
    #[arg(long, value_enum, default_value_t = WhichArg::Main)]
    which: WhichArg,
}

#[derive(Args)]
#[command(group = ArgGroup::new("source").required(true).multiple(false))]
struct AnalyzeArgs {
    #[command(flatten)]
    source: SourceArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Linear,
    Rk4Multistep,
    Ssprk,
    Pairs,
}

#[derive(Args)]
struct TablesArgs {
    /// Which family of methods to tabulate.
    #[arg(value_enum)]
    family: FamilyArg,

    /// Restrict linear-family rows to an inclusive order range, e.g. 1..12.
    #[arg(long, value_name = "LO..HI")]
    orders: Option<String>,

    /// Recompute every row and compare against the frozen reference data.
    #[arg(long)]
    check: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SystemArg {
    Random,
    Upwind,
    Rk4Counterexample,
}

#[derive(Args)]
#[command(group = ArgGroup::new("source").required(true).multiple(false))]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Test system to sweep on.
    #[arg(long, value_enum, default_value_t = SystemArg::Random)]
    system: SystemArg,

    /// System dimension (random needs ≥ 2, upwind ≥ 3).
    #[arg(long, default_value_t = 8)]
    dim: usize,

    /// Seed for the random system.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Dissipation strength of the random system (0 = conserving).
    #[arg(long, default_value_t = 0.0)]
    dissipation: f64,

    #[arg(long, default_value_t = 1e-4)]
    tau_min: f64,

    #[arg(long, default_value_t = 1e-1)]
    tau_max: f64,

    /// Number of geometric grid points.
    #[arg(long, default_value_t = 40)]
    points: usize,
}

#[derive(Args)]
#[command(group = ArgGroup::new("source").required(true).multiple(false))]
struct DecayArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Seed for the conserving random system (n = 8).
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Comma-separated geometric τ list, each in (0, 1].
    #[arg(long, default_value = "0.1,0.05,0.025,0.0125,0.00625")]
    taus: String,

    /// Must stay 0: the slope 2k*−1 is only meaningful when the system
    /// conserves energy exactly.
    #[arg(long, default_value_t = 0.0)]
    dissipation: f64,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long, default_value_t = 1e-4)]
    tau_min: f64,

    #[arg(long, default_value_t = 1e-1)]
    tau_max: f64,

    /// Number of geometric grid points.
    #[arg(long, default_value_t = 40)]
    points: usize,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(3);
        }
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    match &cli.command {
        Command::Analyze(args) => cmd_analyze(args, cli.format, cli.quiet),
        Command::Tables(args) => cmd_tables(args, cli.format, cli.quiet),
        Command::Verify(args) => cmd_verify(args, cli.format, cli.quiet),
        Command::Decay(args) => cmd_decay(args, cli.format, cli.quiet),
        Command::Counterexample(args) => cmd_counterexample(args, cli.format, cli.quiet),
    }
}

/// Turn the source flags into a labeled polynomial. The bool reports
/// whether the coefficients contain a rational stand-in for an
/// irrational value.
fn resolve_method(source: &SourceArgs) -> Result<(String, StabilityPolynomial, bool), String> {
    let which = match source.which {
        WhichArg::Main => Which::Main,
        WhichArg::Embedded => Which::Embedded,
    };
    let (mut label, r, approximate) = if let Some(name) = &source.preset {
        let m = presets::resolve(name, which).map_err(|e| e.to_string())?;
        (m.label, m.polynomial, m.approximate_input)
    } else if let Some(list) = &source.alpha {
        let coeffs = list
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let shown = coeffs
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(", ");
        let r = StabilityPolynomial::from_alpha(coeffs).map_err(|e| e.to_string())?;
        (format!("alpha [{shown}]"), r, false)
    } else if let Some(path) = &source.tableau {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
        let tableau = ButcherTableau::from_json_str(&text).map_err(|e| e.to_string())?;
        let r = tableau
            .stability_coefficients(which)
            .map_err(|e| e.to_string())?;
        let mut label = path.clone();
        if matches!(which, Which::Embedded) {
            label.push_str(" (embedded)");
        }
        (label, r, false)
    } else {
        unreachable!("clap enforces exactly one of --preset/--alpha/--tableau")
    };
    if source.steps == 1 {
        return Ok((label, r, approximate));
    }
    let composed = r.compose_steps(source.steps).map_err(|e| e.to_string())?;
    label.push_str(&format!("^{}", source.steps));
    Ok((label, composed, approximate))
}

fn cmd_analyze(args: &AnalyzeArgs, format: Format, quiet: bool) -> Result<i32, String> {
    let (label, r, approximate) = resolve_method(&args.source)?;
    let extra = if approximate {
        vec![NOTE_APPROXIMATE_INPUT.to_string()]
    } else {
        Vec::new()
    };
    let report = AnalysisReport::build(label, &r, extra);
    if !quiet {
        match format {
            Format::Text => print!("{}", report.render_text()),
            Format::Json => println!(
                "{}",
                serde_json::to_string_pretty(&report.to_json()).expect("report serializes")
            ),
            Format::Csv => print!("{}", report.render_csv()),
        }
    }
    Ok(report.exit_code())
}

fn parse_orders(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("--orders expects `lo..hi`, got `{s}`"))?;
    let lo: usize = a
        .trim()
        .parse()
        .map_err(|_| format!("bad order `{}` in --orders", a.trim()))?;
    let hi: usize = b
        .trim()
        .parse()
        .map_err(|_| format!("bad order `{}` in --orders", b.trim()))?;
    if lo < 1 || hi < lo {
        return Err(format!("--orders needs 1 <= lo <= hi, got {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn cmd_tables(args: &TablesArgs, format: Format, quiet: bool) -> Result<i32, String> {
    let orders = match &args.orders {
        Some(s) => Some(parse_orders(s)?),
        None => None,
    };
    let family = match args.family {
        FamilyArg::Linear => tables::Family::Linear,
        FamilyArg::Rk4Multistep => tables::Family::Rk4Multistep,
        FamilyArg::Ssprk => tables::Family::Ssprk,
        FamilyArg::Pairs => tables::Family::Pairs,
    };
    Ok(tables::run(family, orders, args.check, format, quiet))
}

fn max_norm(sweep: &SweepReport) -> f64 {
    sweep
        .h_norms
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
}

fn fmt_stable_tau(t: Option<f64>) -> String {
    match t {
        Some(t) => fmt_sig6(t),
        None => "none".to_string(),
    }
}

fn cmd_verify(args: &VerifyArgs, format: Format, quiet: bool) -> Result<i32, String> {
    let (label, r, _) = resolve_method(&args.source)?;
    let sys = match args.system {
        SystemArg::Random => {
            if args.dim < 2 {
                return Err(format!(
                    "--system random needs --dim >= 2, got {}",
                    args.dim
                ));
            }
            if !(args.dissipation.is_finite() && args.dissipation >= 0.0) {
                return Err(format!(
                    "--dissipation must be finite and nonnegative, got {}",
                    args.dissipation
                ));
            }
            make_random_semi_negative(args.dim, args.seed, args.dissipation)
        }
        SystemArg::Upwind => {
            if args.dim < 3 {
                return Err(format!(
                    "--system upwind needs --dim >= 3, got {}",
                    args.dim
                ));
            }
            make_upwind_advection(args.dim)
        }
        SystemArg::Rk4Counterexample => counterexample_rk4(),
    };
    let sweep = stability_sweep(&r, &sys, args.tau_min, args.tau_max, args.points)
        .map_err(|e| e.to_string())?;
    let verdict = classify_method(&r);

    // A strongly stable verdict must show up as contraction at the small
    // end of the grid. In the other direction only the dedicated witness
    // replay carries a falsifiable expectation: an undetermined method
    // with a known counterexample, run on that very system, must exceed
    // norm 1 somewhere. Everything else is informational (a method that
    // fails strong stability on some system may still contract on this
    // one).
    let consistent = match verdict.status {
        Status::StronglyStable => sweep.max_stable_tau.is_some(),
        _ => {
            let witness_replay = matches!(args.system, SystemArg::Rk4Counterexample)
                && verdict.notes.iter().any(|n| n == NOTE_COUNTEREXAMPLE)
                && {
                    let rk4 = StabilityPolynomial::taylor(4).expect("order 4 is valid");
                    r.alpha() == rk4.alpha()
                };
            if witness_replay {
                sweep.h_norms.iter().any(|&x| x > 1.0 + 1e-9)
            } else {
                true
            }
        }
    };

    if !quiet {
        match format {
            Format::Text => {
                let verdict_line = if verdict.notes.is_empty() {
                    verdict.status.to_string()
                } else {
                    format!("{} ({})", verdict.status, verdict.notes.join("; "))
                };
                print!(
                    "method     : {label}\n\
                     system     : {}\n\
                     verdict    : {verdict_line}\n\
                     grid       : {} points in [{}, {}]\n\
                     max norm   : {:.12e}\n\
                     stable to  : {}\n\
                     consistent : {}\n",
                    sys.label,
                    sweep.tau_grid.len(),
                    fmt_sig6(args.tau_min),
                    fmt_sig6(args.tau_max),
                    max_norm(&sweep),
                    fmt_stable_tau(sweep.max_stable_tau),
                    if consistent { "yes" } else { "no" }
                );
            }
            Format::Json => {
                let value = json!({
                    "method": label,
                    "system": sys.label,
                    "verdict": verdict.status.to_string(),
                    "notes": verdict.notes,
                    "tau_grid": sweep.tau_grid,
                    "h_norms": sweep.h_norms,
                    "max_stable_tau": sweep.max_stable_tau,
                    "consistent": consistent,
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&value).expect("report serializes")
                );
            }
            Format::Csv => {
                let mut out = String::from("tau,h_norm\n");
                for (t, h) in sweep.tau_grid.iter().zip(&sweep.h_norms) {
                    out.push_str(&format!("{t:e},{h:e}\n"));
                }
                print!("{out}");
            }
        }
    }
    Ok(if consistent { 0 } else { 1 })
}

fn cmd_decay(args: &DecayArgs, format: Format, quiet: bool) -> Result<i32, String> {
    if args.dissipation != 0.0 {
        return Err(format!(
            "the drift-order fit needs an exactly conserving system; \
             --dissipation must be 0, got {}",
            args.dissipation
        ));
    }
    let (label, r, _) = resolve_method(&args.source)?;
    let taus = args
        .taus
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| format!("bad tau value `{t}` in --taus"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let meas = energy_decay_order(&r, args.seed, &taus).map_err(|e| e.to_string())?;
    let expected = energy_accuracy(&leading_data(&expand_energy(&r)));
    let pass = (meas.slope - expected as f64).abs() <= 0.3;
    let system_label = format!("random(n=8, seed={}, dissipation=0)", args.seed);

    if !quiet {
        match format {
            Format::Text => {
                let tau_line = meas
                    .tau_list
                    .iter()
                    .map(|t| fmt_sig6(*t))
                    .collect::<Vec<_>>()
                    .join(", ");
                print!(
                    "method   : {label}\n\
                     system   : {system_label}\n\
                     taus     : {tau_line}\n\
                     slope    : {:.5}\n\
                     expected : {expected} (2k*-1)\n\
                     energy   : {}\n\
                     pass     : {}\n",
                    meas.slope,
                    if meas.energy_grows { "grows" } else { "decays" },
                    if pass { "yes" } else { "no" }
                );
            }
            Format::Json => {
                let value = json!({
                    "method": label,
                    "system": system_label,
                    "tau_list": meas.tau_list,
                    "deficits": meas.deficits,
                    "slope": meas.slope,
                    "expected": expected,
                    "energy_grows": meas.energy_grows,
                    "pass": pass,
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&value).expect("report serializes")
                );
            }
            Format::Csv => {
                let mut out = String::from("tau,deficit\n");
                for (t, d) in meas.tau_list.iter().zip(&meas.deficits) {
                    out.push_str(&format!("{t:e},{d:e}\n"));
                }
                print!("{out}");
            }
        }
    }
    Ok(if pass { 0 } else { 1 })
}

fn cmd_counterexample(
    args: &CounterexampleArgs,
    format: Format,
    quiet: bool,
) -> Result<i32, String> {
    let sys = counterexample_rk4();
    let single = StabilityPolynomial::taylor(4).expect("order 4 is valid");
    let double = single.compose_steps(2).map_err(|e| e.to_string())?;
    let fifth = presets::resolve("ssprk(5,4)", Which::Main).map_err(|e| e.to_string())?;

    let sweep_single = stability_sweep(&single, &sys, args.tau_min, args.tau_max, args.points)
        .map_err(|e| e.to_string())?;
    let sweep_double = stability_sweep(&double, &sys, args.tau_min, args.tau_max, args.points)
        .map_err(|e| e.to_string())?;
    let sweep_fifth = stability_sweep(
        &fifth.polynomial,
        &sys,
        args.tau_min,
        args.tau_max,
        args.points,
    )
    .map_err(|e| e.to_string())?;

    let exceeds = sweep_single.h_norms.iter().any(|&x| x > 1.0 + 1e-9);
    let ok = exceeds && sweep_double.max_stable_tau.is_some();

    if !quiet {
        match format {
            Format::Text => {
                print!(
                    "system       : {}\n\
                     taylor(4)    : max norm {:.12e}, exceeds 1: {}\n\
                     taylor(4)^2  : max norm {:.12e}, stable to {}\n\
                     {}   : max norm {:.12e}, stable to {} (informational)\n\
                     conclusion   : {}\n",
                    sys.label,
                    max_norm(&sweep_single),
                    if exceeds { "yes" } else { "no" },
                    max_norm(&sweep_double),
                    fmt_stable_tau(sweep_double.max_stable_tau),
                    fifth.label,
                    max_norm(&sweep_fifth),
                    fmt_stable_tau(sweep_fifth.max_stable_tau),
                    if ok {
                        "single step amplifies, two-step composition contracts"
                    } else {
                        "expected pattern NOT reproduced"
                    }
                );
            }
            Format::Json => {
                let value = json!({
                    "system": sys.label,
                    "single": {
                        "method": "taylor(4)",
                        "max_norm": max_norm(&sweep_single),
                        "exceeds_one": exceeds,
                    },
                    "two_step": {
                        "method": "taylor(4)^2",
                        "max_norm": max_norm(&sweep_double),
                        "max_stable_tau": sweep_double.max_stable_tau,
                    },
                    "informational": {
                        "method": fifth.label,
                        "max_norm": max_norm(&sweep_fifth),
                        "max_stable_tau": sweep_fifth.max_stable_tau,
                    },
                    "consistent": ok,
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&value).expect("report serializes")
                );
            }
            Format::Csv => {
                let mut out = String::from("method,tau,h_norm\n");
                for (name, sweep) in [
                    ("taylor(4)", &sweep_single),
                    ("taylor(4)^2", &sweep_double),
                    (fifth.label.as_str(), &sweep_fifth),
                ] {
                    for (t, h) in sweep.tau_grid.iter().zip(&sweep.h_norms) {
                        out.push_str(&format!("{},{t:e},{h:e}\n", csv_field(name)));
                    }
                }
                print!("{out}");
            }
        }
    }
    Ok(if ok { 0 } else { 1 })
}
