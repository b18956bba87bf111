//! Structural verification of matrix families.
//!
//! A family is trusted nowhere in this crate: whether `T_n` is actually
//! unitary (or actually stochastic) is something you check, not something
//! you declare. Two routes are provided.
//!
//! * **Exact** — builds the full Gram matrix `T†T` (or all column sums) and
//!   compares against the identity (or all-ones). Available up to dimension
//!   4096. Cost is `O(Σ_rows nnz²)` plus a dense `dim²` accumulator, so it
//!   is cheap for families with sparse rows and `O(dim³)` for dense ones.
//! * **Sampled** — draws random columns and column pairs with a
//!   caller-supplied seed and checks norms and inner products. The same
//!   seed always checks the same columns, so reports are reproducible.
//!
//! Both routes return a [`VerificationReport`] carrying the worst deviation
//! and where it happened; neither ever repairs or re-normalizes anything.

use num_complex::ComplexFloat;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::model::{Amplitude, FamilyKind, MatrixFamily};

/// Deviation allowed by the exact route before a family is declared broken.
pub const DEFAULT_EXACT_TOLERANCE: f64 = 1e-10;

/// Deviation allowed by the sampled route.
pub const DEFAULT_SAMPLED_TOLERANCE: f64 = 1e-8;

/// Largest dimension the exact route will take on.
pub const EXACT_DIMENSION_CAP: u64 = 4096;

/// Column-sample budget used when a dispatch helper falls back to sampling.
pub const DEFAULT_SAMPLES: u64 = 256;

const INTERNAL_SEED: u64 = 0x6d71_3271; // fixed seed for the dispatch helpers

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ExactDense,
    SampledColumns,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ExactDense => "exact-dense",
            Method::SampledColumns => "sampled-columns",
        }
    }
}

/// What a verification run found.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub kind: FamilyKind,
    pub method: Method,
    /// Largest observed deviation from the ideal (0 means spotless).
    pub max_deviation: f64,
    /// Number of scalar checks performed (Gram entries, norms + inner
    /// products, or column sums, depending on the method).
    pub samples: u64,
    pub tolerance: f64,
    pub passed: bool,
    /// Coordinates of the worst deviation: `(i, j)` for a Gram entry or
    /// inner product, `(i, i)` for a column norm or column sum.
    pub worst_witness: Option<(u64, u64)>,
}

impl VerificationReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "kind": self.kind.to_string(),
            "method": self.method.as_str(),
            "max_deviation": self.max_deviation,
            "samples": self.samples,
            "passed": self.passed,
            "witness": self.worst_witness.map(|(i, j)| vec![i, j]),
        })
    }
}

struct DeviationTracker {
    max: f64,
    witness: Option<(u64, u64)>,
    count: u64,
}

impl DeviationTracker {
    fn new() -> Self {
        DeviationTracker {
            max: 0.0,
            witness: None,
            count: 0,
        }
    }

    fn record(&mut self, deviation: f64, at: (u64, u64)) {
        self.count += 1;
        // NaN (from a non-finite entry) counts as infinitely broken
        let deviation = if deviation.is_nan() {
            f64::INFINITY
        } else {
            deviation
        };
        if deviation > self.max || self.witness.is_none() {
            self.max = self.max.max(deviation);
            if deviation >= self.max {
                self.witness = Some(at);
            }
        }
    }

    fn into_report(self, kind: FamilyKind, method: Method, tolerance: f64) -> VerificationReport {
        VerificationReport {
            kind,
            method,
            max_deviation: self.max,
            samples: self.count,
            tolerance,
            passed: self.max <= tolerance,
            worst_witness: if self.max > 0.0 { self.witness } else { None },
        }
    }
}

fn checked_dimension(family: &MatrixFamily, n: u32, cap: u64) -> Result<u64> {
    let dimension = family.dimension(n);
    if dimension == 0 {
        return Err(Error::InvalidArgument(format!(
            "family `{}` has dimension 0 at size {n}",
            family.name()
        )));
    }
    if dimension > cap {
        return Err(Error::DimensionCap { dimension, cap });
    }
    Ok(dimension)
}

/// Exact unitarity check: forms `G = T†T` by accumulating, row by row, the
/// outer products of each row's nonzero entries, then compares `G` with the
/// identity entry by entry. The deviation reported for `(i, j)` is
/// `|G[i][j] − δ_ij|`.
pub fn verify_unitary_exact(
    family: &MatrixFamily,
    n: u32,
    tolerance: f64,
) -> Result<VerificationReport> {
    let dimension = checked_dimension(family, n, EXACT_DIMENSION_CAP)?;
    let dim = dimension as usize;
    let mut gram = vec![Amplitude::new(0.0, 0.0); dim * dim];
    let mut row = Vec::new();

    for to in 0..dimension {
        row.clear();
        for from in 0..dimension {
            let value = family.entry(from, to, n);
            if !value.re.is_finite() || !value.im.is_finite() {
                return Err(Error::NonFiniteAmplitude {
                    from,
                    to,
                    size_param: n,
                });
            }
            if value.re != 0.0 || value.im != 0.0 {
                row.push((from as usize, value));
            }
        }
        // G[i][j] += conj(T[to][i]) · T[to][j] over this row's support
        for &(i, left) in &row {
            let conjugated = left.conj();
            let base = i * dim;
            for &(j, right) in &row {
                gram[base + j] += conjugated * right;
            }
        }
    }

    let mut tracker = DeviationTracker::new();
    for i in 0..dim {
        for j in 0..dim {
            let expected = if i == j { 1.0 } else { 0.0 };
            let deviation = (gram[i * dim + j] - expected).abs();
            tracker.record(deviation, (i as u64, j as u64));
        }
    }
    Ok(tracker.into_report(FamilyKind::Unitary, Method::ExactDense, tolerance))
}

fn column(family: &MatrixFamily, n: u32, dimension: u64, from: u64) -> Result<Vec<Amplitude>> {
    (0..dimension)
        .map(|to| {
            let value = family.entry(from, to, n);
            if value.re.is_finite() && value.im.is_finite() {
                Ok(value)
            } else {
                Err(Error::NonFiniteAmplitude {
                    from,
                    to,
                    size_param: n,
                })
            }
        })
        .collect()
}

/// Sampled unitarity check. Norms of `samples` columns are compared with 1
/// (all columns, if `samples ≥ dim`), and `samples` random column pairs are
/// checked for orthogonality. The same seed always draws the same columns.
pub fn verify_unitary_sampled(
    family: &MatrixFamily,
    n: u32,
    samples: u64,
    tolerance: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let dimension = checked_dimension(family, n, crate::engine::DIMENSION_CAP)?;
    if samples == 0 {
        return Err(Error::InvalidArgument(
            "sampled verification needs at least one sample".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tracker = DeviationTracker::new();

    if samples >= dimension {
        for i in 0..dimension {
            let col = column(family, n, dimension, i)?;
            let norm_sqr: f64 = col.iter().map(|v| v.norm_sqr()).sum();
            tracker.record((norm_sqr - 1.0).abs(), (i, i));
        }
    } else {
        for _ in 0..samples {
            let i = rng.gen_range(0..dimension);
            let col = column(family, n, dimension, i)?;
            let norm_sqr: f64 = col.iter().map(|v| v.norm_sqr()).sum();
            tracker.record((norm_sqr - 1.0).abs(), (i, i));
        }
    }

    if dimension > 1 {
        for _ in 0..samples {
            let i = rng.gen_range(0..dimension);
            let j = {
                let mut j = rng.gen_range(0..dimension - 1);
                if j >= i {
                    j += 1;
                }
                j
            };
            let ci = column(family, n, dimension, i)?;
            let cj = column(family, n, dimension, j)?;
            let inner: Amplitude = ci.iter().zip(&cj).map(|(a, b)| a.conj() * b).sum();
            tracker.record(inner.abs(), (i, j));
        }
    }

    Ok(tracker.into_report(
        FamilyKind::Unitary,
        Method::SampledColumns,
        tolerance,
    ))
}

/// Unitarity with automatic route choice: exact up to dimension 4096,
/// otherwise sampled with the default budget and a fixed internal seed.
pub fn verify_unitary(family: &MatrixFamily, n: u32) -> Result<VerificationReport> {
    if family.dimension(n) <= EXACT_DIMENSION_CAP {
        verify_unitary_exact(family, n, DEFAULT_EXACT_TOLERANCE)
    } else {
        verify_unitary_sampled(
            family,
            n,
            DEFAULT_SAMPLES,
            DEFAULT_SAMPLED_TOLERANCE,
            INTERNAL_SEED,
        )
    }
}

fn stochastic_column_deviation(
    family: &MatrixFamily,
    n: u32,
    dimension: u64,
    from: u64,
) -> Result<f64> {
    let mut sum = 0.0;
    let mut worst_negative = 0.0f64;
    for to in 0..dimension {
        let value = family.entry(from, to, n);
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NonFiniteAmplitude {
                from,
                to,
                size_param: n,
            });
        }
        if value.im != 0.0 {
            return Err(Error::KindContract {
                family: family.name().to_string(),
                kind: "stochastic",
                detail: format!(
                    "entry ({from}, {to}) has imaginary part {}",
                    value.im
                ),
            });
        }
        if value.re < 0.0 {
            worst_negative = worst_negative.max(-value.re);
        }
        sum += value.re;
    }
    Ok((sum - 1.0).abs().max(worst_negative))
}

/// Stochasticity check: every column (outgoing distribution of one source
/// configuration) must be nonnegative, real, and sum to 1. Exact for
/// dimensions up to 4096; beyond that a fixed-seed sample of columns is
/// checked. A complex entry is a contract error, not a deviation.
pub fn verify_stochastic(
    family: &MatrixFamily,
    n: u32,
    tolerance: f64,
) -> Result<VerificationReport> {
    let dimension = checked_dimension(family, n, crate::engine::DIMENSION_CAP)?;
    let mut tracker = DeviationTracker::new();
    if dimension <= EXACT_DIMENSION_CAP {
        for from in 0..dimension {
            let deviation = stochastic_column_deviation(family, n, dimension, from)?;
            tracker.record(deviation, (from, from));
        }
        Ok(tracker.into_report(FamilyKind::Stochastic, Method::ExactDense, tolerance))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(INTERNAL_SEED);
        for _ in 0..DEFAULT_SAMPLES {
            let from = rng.gen_range(0..dimension);
            let deviation = stochastic_column_deviation(family, n, dimension, from)?;
            tracker.record(deviation, (from, from));
        }
        Ok(tracker.into_report(
            FamilyKind::Stochastic,
            Method::SampledColumns,
            tolerance,
        ))
    }
}

/// Runs the check matching the family's declared kind.
pub fn verify_declared(family: &MatrixFamily, n: u32) -> Result<VerificationReport> {
    match family.kind() {
        FamilyKind::Unitary => verify_unitary(family, n),
        FamilyKind::Stochastic => {
            verify_stochastic(family, n, DEFAULT_EXACT_TOLERANCE)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hadamard_pair() -> MatrixFamily {
        MatrixFamily::new("h", FamilyKind::Unitary, |_| 2, |from, to, _| {
            let sign = if from == 1 && to == 1 { -1.0 } else { 1.0 };
            Amplitude::new(sign / 2.0f64.sqrt(), 0.0)
        })
    }

    #[test]
    fn identity_is_spotlessly_unitary() {
        let report = verify_unitary_exact(&MatrixFamily::identity(), 32, 1e-12).unwrap();
        assert!(report.passed);
        assert_eq!(report.max_deviation, 0.0);
        assert_eq!(report.worst_witness, None);
        assert_eq!(report.samples, 32 * 32);
        assert_eq!(report.method, Method::ExactDense);
    }

    #[test]
    fn hadamard_is_unitary_both_ways() {
        let exact = verify_unitary_exact(&hadamard_pair(), 0, 1e-12).unwrap();
        assert!(exact.passed, "exact deviation {}", exact.max_deviation);
        let sampled = verify_unitary_sampled(&hadamard_pair(), 0, 16, 1e-12, 9).unwrap();
        assert!(sampled.passed, "sampled deviation {}", sampled.max_deviation);
    }

    #[test]
    fn decaying_diagonal_fails_exact_check() {
        let report = verify_unitary_exact(&MatrixFamily::diagonal_decay(), 8, 1e-10).unwrap();
        assert!(!report.passed);
        // worst column is the fastest-decaying one, on the diagonal
        assert_eq!(report.worst_witness, Some((7, 7)));
        assert!((report.max_deviation - (1.0 - 0.25f64.powi(7))).abs() < 1e-12);
    }

    #[test]
    fn decaying_diagonal_fails_sampled_check() {
        let report =
            verify_unitary_sampled(&MatrixFamily::diagonal_decay(), 64, 32, 1e-8, 3).unwrap();
        assert!(!report.passed);
        let (i, j) = report.worst_witness.unwrap();
        assert_eq!(i, j, "diagonal family can only fail on a norm check");
    }

    #[test]
    fn zeroed_row_breaks_unitarity() {
        let broken = hadamard_pair().with_zeroed_row(1);
        let report = verify_unitary_exact(&broken, 0, 1e-10).unwrap();
        assert!(!report.passed);
        // both columns lose half their norm
        assert!((report.max_deviation - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sampled_reports_are_reproducible() {
        let family = MatrixFamily::diagonal_decay();
        let a = verify_unitary_sampled(&family, 128, 20, 1e-8, 42).unwrap();
        let b = verify_unitary_sampled(&family, 128, 20, 1e-8, 42).unwrap();
        assert_eq!(a.max_deviation.to_bits(), b.max_deviation.to_bits());
        assert_eq!(a.worst_witness, b.worst_witness);
        assert_eq!(a.samples, b.samples);
    }

    #[test]
    fn sample_budget_at_dimension_covers_every_column() {
        // zero one row out: every column norm drops, so full coverage
        // must find the worst column exactly
        let broken = MatrixFamily::identity().with_zeroed_row(5);
        let report = verify_unitary_sampled(&broken, 8, 8, 1e-10, 1).unwrap();
        assert!(!report.passed);
        assert_eq!(report.worst_witness, Some((5, 5)));
        assert!((report.max_deviation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_pair_is_exactly_stochastic() {
        let report = verify_stochastic(&MatrixFamily::uniform_pair(), 0, 0.0).unwrap();
        assert!(report.passed);
        assert_eq!(report.max_deviation, 0.0);
    }

    #[test]
    fn overweight_source_is_caught() {
        let report = verify_stochastic(&MatrixFamily::overweight_source(), 0, 1e-10).unwrap();
        assert!(!report.passed);
        assert_eq!(report.worst_witness, Some((0, 0)));
        assert!((report.max_deviation - 0.5).abs() < 1e-12);
    }

    #[test]
    fn complex_entries_break_the_stochastic_contract() {
        let family = MatrixFamily::new(
            "rotating",
            FamilyKind::Stochastic,
            |_| 2,
            |_, _, _| Amplitude::new(0.0, 0.5),
        );
        match verify_stochastic(&family, 0, 1e-10) {
            Err(Error::KindContract { kind, .. }) => assert_eq!(kind, "stochastic"),
            other => panic!("expected a contract error, got {other:?}"),
        }
    }

    #[test]
    fn negative_entries_fail_stochastic_check() {
        // columns sum to 1 but carry a negative weight
        let family = MatrixFamily::new(
            "signed",
            FamilyKind::Stochastic,
            |_| 2,
            |from, to, _| {
                if from == to {
                    Amplitude::new(1.5, 0.0)
                } else {
                    Amplitude::new(-0.5, 0.0)
                }
            },
        );
        let report = verify_stochastic(&family, 0, 1e-10).unwrap();
        assert!(!report.passed);
        assert!((report.max_deviation - 0.5).abs() < 1e-12);
    }

    #[test]
    fn non_finite_entries_are_an_error_not_a_deviation() {
        let family = MatrixFamily::new("nan", FamilyKind::Unitary, |_| 2, |_, _, _| {
            Amplitude::new(f64::NAN, 0.0)
        });
        assert!(matches!(
            verify_unitary_exact(&family, 0, 1e-10),
            Err(Error::NonFiniteAmplitude { .. })
        ));
        assert!(matches!(
            verify_unitary_sampled(&family, 0, 4, 1e-10, 0),
            Err(Error::NonFiniteAmplitude { .. })
        ));
    }

    #[test]
    fn exact_route_refuses_oversized_dimensions() {
        let err = verify_unitary_exact(&MatrixFamily::identity(), 5000, 1e-10).unwrap_err();
        assert!(err.is_refusal());
    }

    #[test]
    fn dispatch_helper_matches_declared_kind() {
        let unitary = verify_declared(&MatrixFamily::identity(), 16).unwrap();
        assert_eq!(unitary.kind, FamilyKind::Unitary);
        assert!(unitary.passed);
        let stochastic = verify_declared(&MatrixFamily::uniform_pair(), 0).unwrap();
        assert_eq!(stochastic.kind, FamilyKind::Stochastic);
        assert!(stochastic.passed);
    }

    #[test]
    fn report_json_has_the_stable_keys() {
        let report = verify_unitary_exact(&MatrixFamily::identity(), 4, 1e-10).unwrap();
        let value = report.to_json();
        for key in ["kind", "method", "max_deviation", "samples", "passed", "witness"] {
            assert!(value.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(value["passed"], true);
        assert!(value["witness"].is_null());
    }
}
