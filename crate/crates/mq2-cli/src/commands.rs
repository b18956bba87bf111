//! The four experiment runners. Each takes fully resolved parameters (flag
//! and config merging happens in `main`), runs the corresponding machine,
//! and renders one report.

use num_integer::gcd;
use serde::Serialize;

use mq2::dj::{build_dj_machine, dj_closed_form_probability, BooleanOracle};
use mq2::engine::{apply_power, decide};
use mq2::model::{BitString, DecisionMode, Semantics, StateVector};
use mq2::ptm::{decide_classical, PTMDescription};
use mq2::shor::{
    a_prime_marginal, build_shor_machine, factor_from_period, recovered_period, shor_family,
    ShorInstance,
};
use mq2::verify::VerificationReport;

use crate::output::{self, HistogramRow, OutputFormat};
use crate::CliError;

/// Outcomes below this mass are treated as numerical dust when recovering
/// the period from the measurement histogram.
const PEAK_MASS_FLOOR: f64 = 1e-6;

/// A rendered report plus whether it describes a failed verification.
pub struct Rendered {
    pub body: String,
    pub failed: bool,
}

fn json_only(format: OutputFormat) -> Result<(), CliError> {
    if format == OutputFormat::Csv {
        return Err(CliError::Usage(
            "csv output is available for histogram data only (shor --format csv)".into(),
        ));
    }
    Ok(())
}

#[derive(Serialize)]
struct DjReport<'a> {
    n: u32,
    oracle_class: &'a str,
    probability: f64,
    closed_form_probability: f64,
    verdict: &'a str,
}

pub fn run_dj(oracle: &BooleanOracle, format: OutputFormat) -> Result<Rendered, CliError> {
    json_only(format)?;
    let machine = build_dj_machine(oracle)?;
    let report = decide(&machine, &BitString::empty())?;
    let body = output::to_json_string(&DjReport {
        n: oracle.arity(),
        oracle_class: oracle.classify().as_str(),
        probability: report.probability,
        closed_form_probability: dj_closed_form_probability(oracle),
        verdict: report.verdict.as_str(),
    });
    Ok(Rendered { body, failed: false })
}

#[derive(Serialize)]
struct ShorReport {
    #[serde(rename = "N")]
    modulus: u64,
    x: u64,
    q: u64,
    acceptance_probability: f64,
    period_found: Option<u64>,
    factors: Option<(u64, u64)>,
    a_prime_histogram: Vec<HistogramRow>,
}

pub fn run_shor(
    modulus: u64,
    x: u64,
    bit: u32,
    q: Option<u64>,
    format: OutputFormat,
) -> Result<Rendered, CliError> {
    let shared = gcd(x, modulus);
    if shared != 1 {
        return Err(CliError::Usage(format!(
            "x = {x} and N = {modulus} share the factor {shared}; the base must be coprime \
             (in fact gcd already factors N, no quantum run needed)"
        )));
    }
    let instance = match q {
        Some(q) => ShorInstance::with_q(modulus, x, bit, q),
        None => ShorInstance::new(modulus, x, bit),
    }?;
    let machine = build_shor_machine(&instance)?;
    let report = decide(&machine, &BitString::empty())?;

    let initial = StateVector::basis(0, Semantics::AmplitudeVector, 0);
    let final_state = apply_power(&shor_family(&instance), &initial, 2)?;
    let marginal = a_prime_marginal(&instance, &final_state);
    let period = recovered_period(&instance, &marginal, PEAK_MASS_FLOOR);
    let histogram: Vec<HistogramRow> = marginal
        .iter()
        .map(|(&a_prime, &probability)| HistogramRow {
            a_prime,
            probability,
        })
        .collect();

    let body = match format {
        OutputFormat::Csv => output::histogram_csv(&histogram),
        OutputFormat::Json => output::to_json_string(&ShorReport {
            modulus,
            x,
            q: instance.q(),
            acceptance_probability: report.probability,
            period_found: period,
            factors: period.and_then(|r| factor_from_period(x, modulus, r)),
            a_prime_histogram: histogram,
        }),
    };
    Ok(Rendered { body, failed: false })
}

#[derive(Serialize)]
struct ClassicalReport<'a> {
    machine: &'a str,
    input: String,
    mode: &'a str,
    probability: f64,
    verdict: &'a str,
    applications: u32,
}

pub fn run_classical(
    description: &PTMDescription,
    input: &BitString,
    mode: DecisionMode,
    format: OutputFormat,
) -> Result<Rendered, CliError> {
    json_only(format)?;
    let report = decide_classical(description, mode, input)?;
    let body = output::to_json_string(&ClassicalReport {
        machine: description.name(),
        input: input.to_string(),
        mode: mode.as_str(),
        probability: report.probability,
        verdict: report.verdict.as_str(),
        applications: report.applications,
    });
    Ok(Rendered { body, failed: false })
}

pub fn run_verify(report: &VerificationReport, format: OutputFormat) -> Result<Rendered, CliError> {
    json_only(format)?;
    Ok(Rendered {
        body: output::to_json_string(&report.to_json()),
        failed: !report.passed,
    })
}
