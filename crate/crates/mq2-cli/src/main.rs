//! `mq2` — experiment runner for the matrix-family laboratory.
//!
//! Four subcommands: `dj` (Deutsch-Jozsa), `shor` (period finding),
//! `classical` (probabilistic Turing machines under P/NP/PP/BPP), and
//! `verify` (unitarity/stochasticity checks). Reports are JSON on stdout;
//! identical invocations produce byte-identical output.
//!
//! Exit codes partition outcomes: 0 success (or verification passed),
//! 1 verification failed, 2 usage error, 3 resource refusal.

mod commands;
mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::exit;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use mq2::dj::{dj_family, BooleanOracle};
use mq2::model::{BitString, DecisionMode, MatrixFamily};
use mq2::ptm::{ptm_family, PTMDescription};
use mq2::shor::ShorInstance;
use mq2::verify::{
    verify_stochastic, verify_unitary, verify_unitary_exact, verify_unitary_sampled,
    VerificationReport, DEFAULT_EXACT_TOLERANCE, DEFAULT_SAMPLED_TOLERANCE,
};

use crate::commands::Rendered;
use crate::output::OutputFormat;

/// Stochastic column sums are exact for small rational weights, but weights
/// like 1/3 pick up one ulp per addition; this default absorbs that.
const DEFAULT_STOCHASTIC_TOLERANCE: f64 = 1e-12;

const DJ_BUILTINS: &str = "constant0, constant1, parity, lowbit, neither-demo";
const BROKEN_DEMOS: &str = "short-column, zero-row, overweight";

pub enum CliError {
    /// Bad flags, malformed files, impossible parameter combinations: exit 2.
    Usage(String),
    /// The request is well-formed but beyond the configured caps: exit 3.
    Refusal(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Refusal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Refusal(m) => m,
        }
    }
}

impl From<mq2::Error> for CliError {
    fn from(e: mq2::Error) -> Self {
        if e.is_refusal() {
            CliError::Refusal(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

#[derive(Parser)]
#[command(
    name = "mq2",
    version,
    about = "Numerical laboratory for matrix-family decision machines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Deutsch-Jozsa machine on a boolean oracle
    Dj(DjArgs),
    /// Run the period-finding machine deciding one bit of ord(x) mod N
    Shor(ShorArgs),
    /// Run a probabilistic Turing machine under a classical decision mode
    Classical(ClassicalArgs),
    /// Check that a machine family has its declared matrix kind
    Verify(VerifyArgs),
}

/// Flags shared by every subcommand.
#[derive(Args)]
struct CommonArgs {
    /// Output format (csv is reserved for histogram data)
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,

    /// Write the report to this file instead of stdout; relative paths are
    /// resolved against $MQ2_OUT_DIR when it is set
    #[arg(long)]
    out: Option<PathBuf>,

    /// JSON file holding the same fields as the flags; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct DjArgs {
    /// Oracle arity in bits (required with --builtin)
    #[arg(long)]
    n: Option<u32>,

    /// Built-in oracle: constant0, constant1, parity, lowbit, neither-demo
    #[arg(long, conflicts_with = "oracle_file")]
    builtin: Option<String>,

    /// Load the oracle truth table from a file
    #[arg(long)]
    oracle_file: Option<PathBuf>,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DjConfigFile {
    n: Option<u32>,
    builtin: Option<String>,
    oracle_file: Option<PathBuf>,
    format: Option<OutputFormat>,
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ShorArgs {
    /// The modulus whose factors are sought
    #[arg(long = "N")]
    modulus: Option<u64>,

    /// Base for modular exponentiation, must be coprime to N
    #[arg(long)]
    x: Option<u64>,

    /// Which bit of the period this machine decides
    #[arg(long)]
    bit: Option<u32>,

    /// Fourier dimension override (power of two, q ≥ N²)
    #[arg(long)]
    q: Option<u64>,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShorConfigFile {
    #[serde(rename = "N")]
    modulus: Option<u64>,
    x: Option<u64>,
    bit: Option<u32>,
    q: Option<u64>,
    format: Option<OutputFormat>,
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassicalArgs {
    /// PTM description file
    #[arg(long, conflicts_with = "builtin")]
    ptm: Option<PathBuf>,

    /// Bundled machine: scan-accept, always-reject, fair-coin, biased-majority
    #[arg(long)]
    builtin: Option<String>,

    /// Input bit string (may be empty)
    #[arg(long)]
    input: Option<String>,

    /// Decision mode: P, NP, PP or BPP
    #[arg(long)]
    mode: Option<String>,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassicalConfigFile {
    ptm: Option<PathBuf>,
    builtin: Option<String>,
    input: Option<String>,
    mode: Option<String>,
    format: Option<OutputFormat>,
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which machine family to verify: dj, shor, or classical
    #[arg(long)]
    machine: Option<String>,

    /// Size parameter: dj oracle arity, or classical input length
    #[arg(long)]
    n: Option<u32>,

    /// Modulus for --machine shor
    #[arg(long = "N")]
    modulus: Option<u64>,

    /// Base for --machine shor
    #[arg(long)]
    x: Option<u64>,

    /// Fourier dimension override for --machine shor
    #[arg(long)]
    q: Option<u64>,

    /// Built-in selector: a dj oracle (default parity) or a classical machine
    #[arg(long)]
    builtin: Option<String>,

    /// PTM description file for --machine classical
    #[arg(long)]
    ptm: Option<PathBuf>,

    /// Force the exact dense check
    #[arg(long, conflicts_with = "sampled")]
    exact: bool,

    /// Randomized check drawing this many samples
    #[arg(long)]
    sampled: Option<u64>,

    /// RNG seed for --sampled
    #[arg(long)]
    seed: Option<u64>,

    /// Override the method's default tolerance
    #[arg(long)]
    tolerance: Option<f64>,

    /// Run a bundled failing family: short-column, zero-row, overweight
    #[arg(long, conflicts_with = "machine")]
    broken_demo: Option<String>,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyConfigFile {
    machine: Option<String>,
    n: Option<u32>,
    #[serde(rename = "N")]
    modulus: Option<u64>,
    x: Option<u64>,
    q: Option<u64>,
    builtin: Option<String>,
    ptm: Option<PathBuf>,
    exact: Option<bool>,
    sampled: Option<u64>,
    seed: Option<u64>,
    tolerance: Option<f64>,
    broken_demo: Option<String>,
    format: Option<OutputFormat>,
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Dj(args) => dispatch_dj(args),
        Command::Shor(args) => dispatch_shor(args),
        Command::Classical(args) => dispatch_classical(args),
        Command::Verify(args) => dispatch_verify(args),
    };
    match outcome {
        Ok((rendered, out)) => {
            if let Err(e) = output::deliver(&rendered.body, out.as_deref()) {
                eprintln!("error: {}", e.message());
                exit(e.exit_code());
            }
            exit(if rendered.failed { 1 } else { 0 });
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            exit(e.exit_code());
        }
    }
}

type Delivery = (Rendered, Option<PathBuf>);

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

fn dispatch_dj(args: DjArgs) -> Result<Delivery, CliError> {
    let file: DjConfigFile = load_config(args.common.config.as_deref())?;
    let n = args.n.or(file.n);
    let builtin = args.builtin.or(file.builtin);
    let oracle_file = args.oracle_file.or(file.oracle_file);
    let format = args.common.format.or(file.format).unwrap_or(OutputFormat::Json);
    let out = args.common.out.or(file.out);

    let oracle = match (builtin, oracle_file) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--builtin and --oracle-file are mutually exclusive".into(),
            ))
        }
        (Some(name), None) => {
            let n = n.ok_or_else(|| {
                CliError::Usage("--builtin needs --n to fix the oracle arity".into())
            })?;
            dj_builtin_oracle(&name, n)?
        }
        (None, Some(path)) => load_oracle(&path)?,
        (None, None) => {
            return Err(CliError::Usage(format!(
                "pick an oracle: --builtin {{{DJ_BUILTINS}}} with --n, or --oracle-file PATH"
            )))
        }
    };
    Ok((commands::run_dj(&oracle, format)?, out))
}

fn dj_builtin_oracle(name: &str, n: u32) -> Result<BooleanOracle, CliError> {
    let oracle = match name {
        "constant0" => BooleanOracle::constant_zero(n),
        "constant1" => BooleanOracle::constant_one(n),
        "parity" => BooleanOracle::parity(n),
        "lowbit" => BooleanOracle::low_bit(n),
        "neither-demo" => BooleanOracle::promise_breaker(n),
        other => {
            return Err(CliError::Usage(format!(
                "unknown built-in oracle `{other}` (available: {DJ_BUILTINS})"
            )))
        }
    };
    Ok(oracle?)
}

fn load_oracle(path: &Path) -> Result<BooleanOracle, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read oracle {}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "oracle".into());
    Ok(BooleanOracle::parse(name, &text)?)
}

fn dispatch_shor(args: ShorArgs) -> Result<Delivery, CliError> {
    let file: ShorConfigFile = load_config(args.common.config.as_deref())?;
    let modulus = args
        .modulus
        .or(file.modulus)
        .ok_or_else(|| CliError::Usage("--N is required".into()))?;
    let x = args
        .x
        .or(file.x)
        .ok_or_else(|| CliError::Usage("--x is required".into()))?;
    let bit = args
        .bit
        .or(file.bit)
        .ok_or_else(|| CliError::Usage("--bit is required".into()))?;
    let q = args.q.or(file.q);
    let format = args.common.format.or(file.format).unwrap_or(OutputFormat::Json);
    let out = args.common.out.or(file.out);
    Ok((commands::run_shor(modulus, x, bit, q, format)?, out))
}

fn dispatch_classical(args: ClassicalArgs) -> Result<Delivery, CliError> {
    let file: ClassicalConfigFile = load_config(args.common.config.as_deref())?;
    let ptm = args.ptm.or(file.ptm);
    let builtin = args.builtin.or(file.builtin);
    let input = args.input.or(file.input).unwrap_or_default();
    let mode = args
        .mode
        .or(file.mode)
        .ok_or_else(|| CliError::Usage("--mode is required (P, NP, PP or BPP)".into()))?;
    let format = args.common.format.or(file.format).unwrap_or(OutputFormat::Json);
    let out = args.common.out.or(file.out);

    let description = match (ptm, builtin) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--ptm and --builtin are mutually exclusive".into(),
            ))
        }
        (Some(path), None) => load_ptm(&path)?,
        (None, Some(name)) => PTMDescription::builtin(&name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown built-in machine `{name}` (available: {})",
                PTMDescription::builtin_names().join(", ")
            ))
        })?,
        (None, None) => {
            return Err(CliError::Usage(
                "pick a machine: --ptm FILE or --builtin NAME".into(),
            ))
        }
    };
    let input = BitString::from_str(&input)?;
    let mode = DecisionMode::from_str(&mode)?;
    Ok((commands::run_classical(&description, &input, mode, format)?, out))
}

fn load_ptm(path: &Path) -> Result<PTMDescription, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read machine {}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "ptm".into());
    Ok(PTMDescription::parse(name, &text)?)
}

fn dispatch_verify(args: VerifyArgs) -> Result<Delivery, CliError> {
    let file: VerifyConfigFile = load_config(args.common.config.as_deref())?;
    let machine = args.machine.or(file.machine);
    let broken_demo = args.broken_demo.or(file.broken_demo);
    let n = args.n.or(file.n);
    let modulus = args.modulus.or(file.modulus);
    let x = args.x.or(file.x);
    let q = args.q.or(file.q);
    let builtin = args.builtin.or(file.builtin);
    let ptm = args.ptm.or(file.ptm);
    let exact = args.exact || file.exact.unwrap_or(false);
    let sampled = args.sampled.or(file.sampled);
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let tolerance = args.tolerance.or(file.tolerance);
    let format = args.common.format.or(file.format).unwrap_or(OutputFormat::Json);
    let out = args.common.out.or(file.out);

    if exact && sampled.is_some() {
        return Err(CliError::Usage(
            "--exact and --sampled are mutually exclusive".into(),
        ));
    }

    let report = match (broken_demo, machine) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--broken-demo and --machine are mutually exclusive".into(),
            ))
        }
        (Some(demo), None) => verify_demo(&demo, tolerance)?,
        (None, Some(machine)) => match machine.as_str() {
            "dj" => {
                let n = n.ok_or_else(|| {
                    CliError::Usage("--machine dj needs --n for the oracle arity".into())
                })?;
                let oracle = dj_builtin_oracle(builtin.as_deref().unwrap_or("parity"), n)?;
                verify_unitary_family(&dj_family(&oracle), n, exact, sampled, seed, tolerance)?
            }
            "shor" => {
                let modulus = modulus
                    .ok_or_else(|| CliError::Usage("--machine shor needs --N".into()))?;
                let x =
                    x.ok_or_else(|| CliError::Usage("--machine shor needs --x".into()))?;
                let instance = match q {
                    Some(q) => ShorInstance::with_q(modulus, x, 0, q),
                    None => ShorInstance::new(modulus, x, 0),
                }?;
                let family = mq2::shor::shor_family(&instance);
                verify_unitary_family(&family, 0, exact, sampled, seed, tolerance)?
            }
            "classical" => {
                let description = match (ptm, builtin) {
                    (Some(_), Some(_)) => {
                        return Err(CliError::Usage(
                            "--ptm and --builtin are mutually exclusive".into(),
                        ))
                    }
                    (Some(path), None) => load_ptm(&path)?,
                    (None, Some(name)) => PTMDescription::builtin(&name).ok_or_else(|| {
                        CliError::Usage(format!(
                            "unknown built-in machine `{name}` (available: {})",
                            PTMDescription::builtin_names().join(", ")
                        ))
                    })?,
                    (None, None) => {
                        return Err(CliError::Usage(
                            "--machine classical needs --ptm FILE or --builtin NAME".into(),
                        ))
                    }
                };
                let family = ptm_family(&description);
                verify_stochastic(
                    &family,
                    n.unwrap_or(0),
                    tolerance.unwrap_or(DEFAULT_STOCHASTIC_TOLERANCE),
                )?
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unknown machine selector `{other}` (available: dj, shor, classical)"
                )))
            }
        },
        (None, None) => {
            return Err(CliError::Usage(format!(
                "pick --machine {{dj|shor|classical}} or --broken-demo {{{BROKEN_DEMOS}}}"
            )))
        }
    };
    Ok((commands::run_verify(&report, format)?, out))
}

fn verify_unitary_family(
    family: &MatrixFamily,
    n: u32,
    exact: bool,
    sampled: Option<u64>,
    seed: u64,
    tolerance: Option<f64>,
) -> Result<VerificationReport, CliError> {
    if exact {
        Ok(verify_unitary_exact(
            family,
            n,
            tolerance.unwrap_or(DEFAULT_EXACT_TOLERANCE),
        )?)
    } else if let Some(samples) = sampled {
        Ok(verify_unitary_sampled(
            family,
            n,
            samples,
            tolerance.unwrap_or(DEFAULT_SAMPLED_TOLERANCE),
            seed,
        )?)
    } else if tolerance.is_some() {
        Err(CliError::Usage(
            "--tolerance needs an explicit method: add --exact or --sampled K".into(),
        ))
    } else {
        Ok(verify_unitary(family, n)?)
    }
}

/// Bundled negative fixtures so a failing verification can be demonstrated
/// without crafting a bad family by hand.
fn verify_demo(name: &str, tolerance: Option<f64>) -> Result<VerificationReport, CliError> {
    match name {
        "short-column" => Ok(verify_unitary_exact(
            &MatrixFamily::diagonal_decay(),
            8,
            tolerance.unwrap_or(DEFAULT_EXACT_TOLERANCE),
        )?),
        "zero-row" => Ok(verify_unitary_exact(
            &MatrixFamily::identity().with_zeroed_row(1),
            8,
            tolerance.unwrap_or(DEFAULT_EXACT_TOLERANCE),
        )?),
        "overweight" => Ok(verify_stochastic(
            &MatrixFamily::overweight_source(),
            0,
            tolerance.unwrap_or(DEFAULT_STOCHASTIC_TOLERANCE),
        )?),
        other => Err(CliError::Usage(format!(
            "unknown demo `{other}` (available: {BROKEN_DEMOS})"
        ))),
    }
}
