//! `anharmonic`: spectra, states and verification suites from the command
//! line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage error,
//! 3 computation or domain error.

mod output;
mod verify;

use std::process::ExitCode;

use anharmonic::intelligent::{
    default_gis_dim, gis_eigen_residual, gis_solve, squeezed_vacuum, uncertainty_report, GisLabel,
    GisRoute,
};
use anharmonic::spectrum::{energy, ln_big_f};
use anharmonic::states::{coherent, default_dim, even_cat, imaginary_cat, odd_cat, real_cat};
use anharmonic::{CoherentLabel, FockVector, ModelParams};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde_json::Value;

use output::{num, Format, Report, Table};
use verify::{fmt_complex, Relation, Suite, SuiteConfig};

/// Largest ε treated as perturbative without a warning.
const EPSILON_WARN: f64 = 0.5;

#[derive(Parser)]
#[command(
    name = "anharmonic",
    version,
    about = "Coherent, cat and intelligent states of the x^4-anharmonic oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Levels e_n, F(n) and F(n)^(1/n) for n = 0..=dim.
    Spectrum(Flags),
    /// Amplitudes, level distribution and uncertainty summary of a state.
    State {
        #[arg(value_enum)]
        kind: StateKind,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StateKind {
    Coherent,
    EvenCat,
    OddCat,
    RealCat,
    ImagCat,
    Gis,
    SqueezedVacuum,
}

#[derive(Args, Debug, Clone)]
struct Flags {
    /// Anharmonicity ε > 0.
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// Time-like label α.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Complex label as re,im.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Option<C64>,
    /// Intelligent-state parameter λ as re,im.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    lambda: Option<C64>,
    /// Truncation dimension (spectrum: largest n).
    #[arg(long)]
    dim: Option<usize>,
    /// Tolerance of a suite's primary check.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    output_format: Format,
    /// Seed for randomized suites.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected re,im, got `{s}`"));
    }
    let f = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("`{t}` is not a finite number"))
    };
    Ok(C64::new(f(parts[0])?, f(parts[1])?))
}

enum Failure {
    Usage(String),
    Domain(anharmonic::Error),
}

impl From<anharmonic::Error> for Failure {
    fn from(e: anharmonic::Error) -> Self {
        Failure::Domain(e)
    }
}

fn usage(flag: &str, reason: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("invalid value for --{flag}: {reason}"))
}

fn validate(flags: &Flags, need_epsilon: Option<&str>) -> Result<(), Failure> {
    match (flags.epsilon, need_epsilon) {
        (None, Some(cmd)) => {
            return Err(Failure::Usage(format!("--epsilon is required for `{cmd}`")))
        }
        (Some(e), _) if !(e > 0.0 && e.is_finite()) => {
            return Err(usage("epsilon", format!("must be positive and finite, got {e}")))
        }
        (Some(e), _) if e > EPSILON_WARN => eprintln!(
            "warning: epsilon = {e} exceeds {EPSILON_WARN}; the first-order spectrum is used outside its perturbative range"
        ),
        _ => {}
    }
    if !flags.alpha.is_finite() {
        return Err(usage("alpha", "must be finite"));
    }
    if flags.dim == Some(0) {
        return Err(usage("dim", "must be at least 1"));
    }
    if let Some(t) = flags.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(usage(
                "tol",
                format!("must be positive and finite, got {t}"),
            ));
        }
    }
    Ok(())
}

fn config_meta(flags: &Flags) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("epsilon".into(), flags.epsilon.map_or(Value::Null, num));
    m.insert("alpha".into(), num(flags.alpha));
    let cx = |z: Option<C64>| z.map_or(Value::Null, |z| Value::from(fmt_complex(z)));
    m.insert("z".into(), cx(flags.z));
    m.insert("lambda".into(), cx(flags.lambda));
    m.insert("dim".into(), flags.dim.map_or(Value::Null, Value::from));
    m.insert("seed".into(), Value::from(flags.seed));
    Value::Object(m)
}

fn cmd_spectrum(flags: &Flags) -> Result<Report, Failure> {
    validate(flags, Some("spectrum"))?;
    let p = ModelParams::new(flags.epsilon.unwrap_or_default(), flags.alpha)?;
    let top = flags.dim.unwrap_or(10);
    let mut rows = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let lf = ln_big_f(n, &p);
        let f = lf.exp();
        if !f.is_finite() {
            return Err(Failure::Domain(anharmonic::Error::Overflow {
                function: "F(n)",
            }));
        }
        let root = if n == 0 {
            Value::Null
        } else {
            num((lf / n as f64).exp())
        };
        rows.push(vec![Value::from(n), num(energy(n, &p)), num(f), root]);
    }
    Ok(Report {
        command: "spectrum",
        meta: vec![("config", config_meta(flags))],
        tables: vec![Table {
            name: "rows",
            columns: vec!["n", "e_n", "F_n", "F_n_root_n"],
            rows,
        }],
        summary: Vec::new(),
    })
}

fn build_state(
    kind: StateKind,
    flags: &Flags,
    p: &ModelParams,
) -> anharmonic::Result<(FockVector, Vec<(&'static str, Value)>)> {
    let z = flags.z.unwrap_or_default();
    let lambda = flags.lambda.unwrap_or(C64::new(1.0, 0.0));
    let label = CoherentLabel::new(z, flags.alpha);
    let dim = flags.dim.unwrap_or_else(|| default_dim(z.norm()));
    let mut extra = Vec::new();
    let state = match kind {
        StateKind::Coherent => coherent(label, p, dim)?,
        StateKind::EvenCat => even_cat(label, p, dim)?,
        StateKind::OddCat => odd_cat(label, p, dim)?,
        StateKind::RealCat => real_cat(label, p, dim)?,
        StateKind::ImagCat => imaginary_cat(label, p, dim)?,
        StateKind::Gis | StateKind::SqueezedVacuum => {
            let z = if kind == StateKind::Gis {
                z
            } else {
                C64::default()
            };
            let g = GisLabel::new(lambda, z);
            let dim = flags.dim.unwrap_or_else(|| default_gis_dim(g));
            let v = if kind == StateKind::Gis {
                let (v, route) = gis_solve(g, p, dim)?;
                let route = match route {
                    GisRoute::ContinuedFraction => "continued-fraction",
                    GisRoute::Recurrence => "recurrence",
                };
                extra.push(("route", Value::from(route)));
                v
            } else {
                squeezed_vacuum(lambda, p, dim)?
            };
            extra.push(("eigen_residual", num(gis_eigen_residual(&v, g)?)));
            v
        }
    };
    Ok((state, extra))
}

fn cmd_state(kind: StateKind, flags: &Flags) -> Result<Report, Failure> {
    validate(flags, Some("state"))?;
    let p = ModelParams::new(flags.epsilon.unwrap_or_default(), flags.alpha)?;
    let (state, extra) = build_state(kind, flags, &p)?;
    if state.tail_warning() {
        eprintln!(
            "warning: truncation tail {:.3e} at dim {}; consider a larger --dim",
            state.tail(),
            state.dim()
        );
    }
    let probs = state.distribution();
    let rows = state
        .amplitudes()
        .iter()
        .zip(&probs)
        .enumerate()
        .map(|(n, (a, q))| vec![Value::from(n), num(a.re), num(a.im), num(*q)])
        .collect();
    let r = uncertainty_report(&state, &p)?;
    let mut summary = vec![
        ("dim", Value::from(state.dim())),
        ("norm", num(state.norm())),
        ("mean_energy", num(state.mean_energy())),
        ("tail", num(state.tail())),
        ("mean_x", num(r.mean_x)),
        ("mean_p", num(r.mean_p)),
        ("var_x", num(r.var_x)),
        ("var_p", num(r.var_p)),
        ("var_ratio", num(r.var_x / r.var_p)),
        ("mean_g", num(r.mean_g)),
        ("mean_c", num(r.mean_c)),
        ("rs_left", num(r.rs_left)),
        ("rs_right", num(r.rs_right)),
        ("rs_residual", num(r.residual)),
    ];
    summary.extend(extra);
    Ok(Report {
        command: "state",
        meta: vec![
            (
                "kind",
                Value::from(kind.to_possible_value().map(|v| v.get_name().to_string())),
            ),
            ("config", config_meta(flags)),
        ],
        tables: vec![Table {
            name: "amplitudes",
            columns: vec!["n", "re", "im", "probability"],
            rows,
        }],
        summary,
    })
}

/// The report and the names of any failed checks.
fn cmd_verify(suite: Suite, flags: &Flags) -> Result<(Report, Vec<String>), Failure> {
    validate(flags, None)?;
    let cfg = SuiteConfig {
        epsilon: flags.epsilon,
        alpha: flags.alpha,
        z: flags.z,
        lambda: flags.lambda,
        dim: flags.dim,
        tol: flags.tol,
        seed: flags.seed,
    };
    let result = verify::run(suite, &cfg)?;
    let rows = result
        .checks
        .iter()
        .map(|c| {
            let rel = match c.relation {
                Relation::AtMost => "<=",
                Relation::AtLeast => ">=",
            };
            vec![
                Value::from(c.name.clone()),
                num(c.observed),
                Value::from(rel),
                num(c.limit),
                Value::from(if c.passed() { "PASS" } else { "FAIL" }),
            ]
        })
        .collect();
    let mut tables = vec![Table {
        name: "checks",
        columns: vec!["check", "observed", "relation", "limit", "result"],
        rows,
    }];
    if !result.sweep.is_empty() {
        tables.push(Table {
            name: "sweep",
            columns: vec!["epsilon", "fidelity", "vacuum_dx_dp"],
            rows: result
                .sweep
                .iter()
                .map(|r| r.iter().map(|&v| num(v)).collect())
                .collect(),
        });
    }
    let failed: Vec<String> = result
        .checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.name.clone())
        .collect();
    let suite_name = suite.to_possible_value().map(|v| v.get_name().to_string());
    let report = Report {
        command: "verify",
        meta: vec![
            ("suite", Value::from(suite_name)),
            ("config", config_meta(flags)),
        ],
        tables,
        summary: vec![
            ("checks", Value::from(result.checks.len())),
            ("failed", Value::from(failed.len())),
            ("passed", Value::from(failed.is_empty())),
        ],
    };
    Ok((report, failed))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (result, format) = match &cli.command {
        Command::Spectrum(f) => (cmd_spectrum(f).map(|r| (r, vec![])), f.output_format),
        Command::State { kind, flags } => (
            cmd_state(*kind, flags).map(|r| (r, vec![])),
            flags.output_format,
        ),
        Command::Verify { suite, flags } => (cmd_verify(*suite, flags), flags.output_format),
    };
    match result {
        Ok((report, failed)) => {
            print!("{}", report.render(format));
            for name in &failed {
                eprintln!("FAIL: {name}");
            }
            if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
