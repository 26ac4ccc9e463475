mod report;
mod render;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use davn_core::catalogue::Family;
use davn_core::factory::{build_psi4_qubit, build_psi_1234, commutation_phase_audit, embed_qubit_state};
use davn_core::fixtures::{diff_fixtures, load_allowlist, load_fixture_dir};
use davn_core::lhv::{verify_davn, verify_paradox, Verdict};
use davn_core::postselect::table_for_outcome;
use davn_core::sample::sample_outcomes;
use davn_core::{BasisKet, DavnError, PhaseExp, StateVector};
use num_rational::Rational64;
use serde_json::{json, Value};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "davn", version, about = "Exact verification of a four-ququart all-versus-nothing proof")]
struct Cli {
    /// Output format.
    #[arg(long, short = 'f', value_enum, default_value = "text", global = true)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalization, stabilizer, Observation and non-stabilizer checks.
    VerifyState {
        #[arg(long, value_enum)]
        state: StateName,
    },
    /// Regenerate one constraint table from the state.
    Tables {
        /// I..X, or a family label such as III-A.
        #[arg(long)]
        table: Family,
    },
    /// Build and refute the LHV instance for one outcome.
    Paradox {
        /// Z outcome exponents k1,k2,k3,k4 (0=1, 1=i, 2=-1, 3=-i).
        #[arg(long, value_parser = parse_outcome)]
        outcome: BasisKet,
    },
    /// Refute every supported outcome and combine the verdicts.
    Davn,
    /// Seeded draws from the joint Z distribution.
    Sample {
        #[arg(long)]
        runs: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Diff the transcribed tables against the derivation.
    FixturesDiff {
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    #[value(alias = "md")]
    Markdown,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum StateName {
    Psi1234,
    Psi4Qubit,
    Psi4Embedded,
}

fn parse_outcome(s: &str) -> Result<BasisKet, String> {
    let digits = s
        .split(',')
        .map(|p| match p.trim() {
            "0" => Ok(0u8),
            "1" => Ok(1),
            "2" => Ok(2),
            "3" => Ok(3),
            other => Err(format!("outcome exponent {other:?} is not one of 0,1,2,3")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if digits.len() != 4 {
        return Err(format!("expected four exponents k1,k2,k3,k4, got {}", digits.len()));
    }
    Ok(BasisKet::new(digits))
}

/// Rendered report plus whether every check passed.
struct Outcome {
    body: String,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = run(&cli).and_then(|out| {
        match &cli.output {
            Some(path) => std::fs::write(path, &out.body)
                .map_err(|source| DavnError::Io { path: path.display().to_string(), source })?,
            None => print!("{}", out.body),
        }
        Ok(out.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("davn: error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn workers() -> Result<Option<usize>, DavnError> {
    match std::env::var("DAVN_PARALLEL") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(DavnError::Parse { line: None, message: format!("DAVN_PARALLEL must be a positive integer, got {v:?}") }),
        },
    }
}

fn json_body(command: &str, result: Value) -> String {
    let mut s = serde_json::to_string_pretty(&report::envelope(command, result)).expect("json values serialize");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<Outcome, DavnError> {
    match &cli.command {
        Command::VerifyState { state } => verify_state(*state, cli.format),
        Command::Tables { table } => tables(*table, cli.format),
        Command::Paradox { outcome } => {
            let p = verify_paradox(&build_psi_1234(), outcome)?;
            let body = match cli.format {
                Format::Json => json_body("paradox", report::paradox(&p)),
                _ => render::paradox_text(&p),
            };
            Ok(Outcome { body, passed: p.is_paradox() })
        }
        Command::Davn => {
            let r = verify_davn(&build_psi_1234(), workers()?)?;
            let body = match cli.format {
                Format::Json => json_body("davn", report::davn(&r)),
                _ => render::davn_text(&r),
            };
            Ok(Outcome { body, passed: r.verdict == Verdict::Davn })
        }
        Command::Sample { runs, seed } => {
            let s = build_psi_1234();
            let summary = sample_outcomes(&s, *runs, *seed)?;
            let body = match cli.format {
                Format::Json => json_body("sample", report::sample(&summary)),
                _ => render::sample_text(&summary, &s.z_support()),
            };
            Ok(Outcome { body, passed: true })
        }
        Command::FixturesDiff { dir } => {
            let tables = load_fixture_dir(dir)?;
            let allow = load_allowlist(dir)?;
            let diff = diff_fixtures(&build_psi_1234(), &tables, &allow)?;
            let body = match cli.format {
                Format::Json => json_body("fixtures-diff", report::fixture_diff(&diff)),
                _ => render::fixture_diff_text(&diff),
            };
            Ok(Outcome { body, passed: diff.passed() })
        }
    }
}

fn tables(family: Family, format: Format) -> Result<Outcome, DavnError> {
    let s = build_psi_1234();
    let groups = family
        .table_outcomes()
        .into_iter()
        .map(|o| {
            let rows = table_for_outcome(&s, &o)?;
            Ok((o, rows))
        })
        .collect::<Result<Vec<_>, DavnError>>()?;
    let body = match format {
        Format::Text => render::table_text(family, &groups),
        Format::Markdown => render::table_markdown(family, &groups),
        Format::Json => {
            let groups: Vec<Value> = groups
                .iter()
                .map(|(o, rows)| json!({ "outcome": report::outcome(o), "rows": rows.iter().map(report::row).collect::<Vec<_>>() }))
                .collect();
            json_body(
                "tables",
                json!({ "table": family.table_numeral(), "family": family.label(), "groups": groups }),
            )
        }
    };
    Ok(Outcome { body, passed: true })
}

struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

fn verify_state(name: StateName, format: Format) -> Result<Outcome, DavnError> {
    let (label, state, mut checks, mut notes) = match name {
        StateName::Psi1234 => {
            let s = build_psi_1234();
            let mut checks = vec![
                check("components", s.len() == 56, format!("{} components", s.len())),
                check("norm_sq", s.norm_sq() == 56, format!("norm_sq = {}", s.norm_sq())),
            ];
            let total: Rational64 = s.z_support().iter().map(|o| s.joint_z_probability(o)).sum::<Result<_, _>>()?;
            let uniform = s.z_support().iter().all(|o| s.joint_z_probability(o).ok() == Some(Rational64::new(1, 56)));
            checks.push(check(
                "distribution",
                total == Rational64::from(1) && uniform && s.z_support().len() == 56,
                format!("{} outcomes, each 1/56, total {total}", s.z_support().len()),
            ));
            let zero: Vec<String> = BasisKet::all(4, 4)
                .filter(|o| o.digit_sum() % 4 == 0 && s.amplitude(o).is_zero())
                .map(|o| o.to_string())
                .collect();
            let notes = vec![format!(
                "{} tuples with Z1*Z2*Z3*Z4 = 1 have probability 0: {}",
                zero.len(),
                zero.join(", ")
            )];
            ("psi1234", s, checks, notes)
        }
        StateName::Psi4Qubit => {
            let s = build_psi4_qubit();
            let checks = vec![
                check("components", s.len() == 7, format!("{} components", s.len())),
                check("norm_sq", s.norm_sq() == 7, format!("norm_sq = {}", s.norm_sq())),
            ];
            ("psi4-qubit", s, checks, Vec::new())
        }
        StateName::Psi4Embedded => {
            let qubit = build_psi4_qubit();
            let s = embed_qubit_state(&qubit, 1)?;
            let preserved = qubit.iter().all(|(k, a)| s.amplitude(k) == *a) && s.len() == qubit.len();
            let checks = vec![
                check("norm_sq", s.norm_sq() == 7, format!("norm_sq = {}", s.norm_sq())),
                check("amplitudes preserved", preserved, "|up> -> |0>, |down> -> |1>"),
            ];
            let mut notes = Vec::new();
            for d in [2u32, 4, 6] {
                let c = commutation_phase_audit(d)?;
                let kind = if c == PhaseExp::ONE { "commute" } else { "anticommute" };
                notes.push(format!("d={d}: X^{h}Z^{h} = {c} * Z^{h}X^{h} ({kind})", h = d / 2));
            }
            ("psi4-embedded", s, checks, notes)
        }
    };

    let unit = state.iter().all(|(_, a)| a.as_phase().is_some());
    checks.push(check("unit amplitudes", unit, "every amplitude in {1, i, -1, -i}"));
    let audit = state.check_global_stabilizer()?;
    let stabilizer_expected = name != StateName::Psi4Embedded;
    checks.push(check(
        "observation",
        audit.observation_holds(),
        format!("{} support kets: fixed by Z1*Z2*Z3*Z4 iff digit sum = 0 mod d", audit.kets_checked),
    ));
    if stabilizer_expected {
        checks.push(check("stabilizer Z1*Z2*Z3*Z4", audit.stabilized, "applied word returns the state exactly"));
    } else {
        notes.push(format!("Z1*Z2*Z3*Z4 fixes the embedded state: {}", audit.stabilized));
    }
    let verdict = state.nonstabilizer_test()?;
    checks.push(check(
        "non-stabilizer",
        verdict.is_non_stabilizer(),
        format!("sites with rho != I/d: {:?}", verdict.deviating_sites().iter().map(|s| s + 1).collect::<Vec<_>>()),
    ));
    let passed = checks.iter().all(|c| c.passed);

    let body = match format {
        Format::Json => {
            let rho: Vec<Value> = verdict.sites.iter().map(|s| report::density(&s.rho)).collect();
            let checks: Vec<Value> =
                checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect();
            json_body(
                "verify-state",
                json!({
                    "state": label,
                    "levels": state.levels(),
                    "norm_sq": state.norm_sq(),
                    "checks": checks,
                    "reduced_density": rho,
                    "notes": notes,
                    "passed": passed,
                }),
            )
        }
        _ => render_state_text(label, &state, &checks, &verdict, &notes, passed),
    };
    Ok(Outcome { body, passed })
}

fn render_state_text(
    label: &str,
    state: &StateVector,
    checks: &[Check],
    verdict: &davn_core::state::NonStabilizerVerdict,
    notes: &[String],
    passed: bool,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "state {label}: {} levels, norm_sq {}", state.levels(), state.norm_sq());
    for c in checks {
        let _ = writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    for s in &verdict.sites {
        let _ = writeln!(out, "rho_{} = {}", s.site + 1, s.rho);
    }
    for n in notes {
        let _ = writeln!(out, "note: {n}");
    }
    let _ = writeln!(out, "{}", if passed { "PASS" } else { "FAIL" });
    out
}
