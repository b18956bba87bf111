use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use super::{FamilyKind, MatrixFamily, Semantics, StateVector};
use crate::error::Error;

/// Binary input word fed to a machine.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn empty() -> Self {
        BitString(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!(
                    "bit string may only contain 0 and 1, found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// The decision rule applied to an acceptance probability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DecisionMode {
    #[serde(rename = "MQ2")]
    Mq2,
    #[serde(rename = "BQP")]
    Bqp,
    #[serde(rename = "P")]
    P,
    #[serde(rename = "NP")]
    Np,
    #[serde(rename = "PP")]
    Pp,
    #[serde(rename = "BPP")]
    Bpp,
}

impl DecisionMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecisionMode::Mq2 => "MQ2",
            DecisionMode::Bqp => "BQP",
            DecisionMode::P => "P",
            DecisionMode::Np => "NP",
            DecisionMode::Pp => "PP",
            DecisionMode::Bpp => "BPP",
        }
    }

    /// The family kind this mode is defined over.
    pub fn expected_kind(&self) -> FamilyKind {
        match self {
            DecisionMode::Mq2 | DecisionMode::Bqp => FamilyKind::Unitary,
            _ => FamilyKind::Stochastic,
        }
    }
}

impl fmt::Display for DecisionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DecisionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_uppercase().as_str() {
            "MQ2" => Ok(DecisionMode::Mq2),
            "BQP" => Ok(DecisionMode::Bqp),
            "P" => Ok(DecisionMode::P),
            "NP" => Ok(DecisionMode::Np),
            "PP" => Ok(DecisionMode::Pp),
            "BPP" => Ok(DecisionMode::Bpp),
            other => Err(Error::Parse(format!("unknown decision mode `{other}`"))),
        }
    }
}

/// One defect found by [`MachineSpec::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum SpecViolation {
    InitialIndexOutOfRange { index: u64, dimension: u64 },
    InitialNotCanonical,
    InitialEmpty,
    InitialSemanticsMismatch { semantics: Semantics, kind: FamilyKind },
    ModeKindMismatch { mode: DecisionMode, kind: FamilyKind },
    ApplicationCountZero,
    Mq2CountNotTwo { count: u32 },
}

impl fmt::Display for SpecViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecViolation::InitialIndexOutOfRange { index, dimension } => write!(
                f,
                "initial vector touches index {index}, outside dimension {dimension}"
            ),
            SpecViolation::InitialNotCanonical => {
                write!(f, "initial vector stores an exact zero")
            }
            SpecViolation::InitialEmpty => write!(f, "initial vector is empty"),
            SpecViolation::InitialSemanticsMismatch { semantics, kind } => write!(
                f,
                "initial vector semantics {semantics:?} do not fit a {kind} family"
            ),
            SpecViolation::ModeKindMismatch { mode, kind } => {
                write!(f, "mode {mode} is not defined over a {kind} family")
            }
            SpecViolation::ApplicationCountZero => {
                write!(f, "application count must be at least 1")
            }
            SpecViolation::Mq2CountNotTwo { count } => write!(
                f,
                "MQ2 machines apply their family exactly twice, this one says {count}"
            ),
        }
    }
}

type InitialFn = dyn Fn(&BitString) -> StateVector + Send + Sync;
type AcceptFn = dyn Fn(&BitString, u64) -> bool + Send + Sync;
type SizeFn = dyn Fn(&BitString) -> u32 + Send + Sync;
type CountFn = dyn Fn(u32) -> u32 + Send + Sync;

/// Everything needed to run a decision procedure: a matrix family, a builder
/// for the initial configuration, an acceptance predicate over final
/// configurations, and the bookkeeping that ties them together.
#[derive(Clone)]
pub struct MachineSpec {
    name: String,
    family: MatrixFamily,
    initial: Arc<InitialFn>,
    acceptance: Arc<AcceptFn>,
    size_map: Arc<SizeFn>,
    application_count: Arc<CountFn>,
    mode: DecisionMode,
}

impl fmt::Debug for MachineSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MachineSpec")
            .field("name", &self.name)
            .field("family", &self.family)
            .field("mode", &self.mode)
            .finish_non_exhaustive()
    }
}

impl MachineSpec {
    pub fn new<I, A, S, C>(
        name: impl Into<String>,
        family: MatrixFamily,
        initial: I,
        acceptance: A,
        size_map: S,
        application_count: C,
        mode: DecisionMode,
    ) -> Self
    where
        I: Fn(&BitString) -> StateVector + Send + Sync + 'static,
        A: Fn(&BitString, u64) -> bool + Send + Sync + 'static,
        S: Fn(&BitString) -> u32 + Send + Sync + 'static,
        C: Fn(u32) -> u32 + Send + Sync + 'static,
    {
        MachineSpec {
            name: name.into(),
            family,
            initial: Arc::new(initial),
            acceptance: Arc::new(acceptance),
            size_map: Arc::new(size_map),
            application_count: Arc::new(application_count),
            mode,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> &MatrixFamily {
        &self.family
    }

    pub fn mode(&self) -> DecisionMode {
        self.mode
    }

    pub fn initial_state(&self, x: &BitString) -> StateVector {
        (self.initial)(x)
    }

    pub fn accepts(&self, x: &BitString, configuration: u64) -> bool {
        (self.acceptance)(x, configuration)
    }

    pub fn size_for(&self, x: &BitString) -> u32 {
        (self.size_map)(x)
    }

    pub fn applications_for(&self, n: u32) -> u32 {
        (self.application_count)(n)
    }

    /// Checks the machine against a concrete input word.
    pub fn validate_for(&self, x: &BitString) -> Vec<SpecViolation> {
        let mut violations = Vec::new();
        let n = self.size_for(x);
        let dimension = self.family.dimension(n);
        let initial = self.initial_state(x);

        if initial.is_empty() {
            violations.push(SpecViolation::InitialEmpty);
        }
        if !initial.is_canonical() {
            violations.push(SpecViolation::InitialNotCanonical);
        }
        if let Some(max) = initial.max_index() {
            if max >= dimension {
                violations.push(SpecViolation::InitialIndexOutOfRange {
                    index: max,
                    dimension,
                });
            }
        }

        let expected_semantics = match self.family.kind() {
            FamilyKind::Unitary => Semantics::AmplitudeVector,
            FamilyKind::Stochastic => Semantics::ProbabilityVector,
        };
        if initial.semantics() != expected_semantics {
            violations.push(SpecViolation::InitialSemanticsMismatch {
                semantics: initial.semantics(),
                kind: self.family.kind(),
            });
        }

        if self.mode.expected_kind() != self.family.kind() {
            violations.push(SpecViolation::ModeKindMismatch {
                mode: self.mode,
                kind: self.family.kind(),
            });
        }

        let count = self.applications_for(n);
        if count == 0 {
            violations.push(SpecViolation::ApplicationCountZero);
        }
        if self.mode == DecisionMode::Mq2 && count != 2 {
            violations.push(SpecViolation::Mq2CountNotTwo { count });
        }

        violations
    }

    /// Checks the machine against the empty input word. Machines whose
    /// builders ignore the input (both quantum machines here do) are fully
    /// covered by this probe.
    pub fn validate(&self) -> Vec<SpecViolation> {
        self.validate_for(&BitString::empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_machine(mode: DecisionMode, count: u32, initial_index: u64) -> MachineSpec {
        MachineSpec::new(
            "toy",
            MatrixFamily::identity(),
            move |_x| StateVector::basis(4, Semantics::AmplitudeVector, initial_index),
            |_x, c| c == 0,
            |_x| 4,
            move |_n| count,
            mode,
        )
    }

    #[test]
    fn well_formed_machine_validates_clean() {
        let spec = toy_machine(DecisionMode::Mq2, 2, 0);
        assert!(spec.validate().is_empty());
    }

    #[test]
    fn mq2_with_three_applications_is_flagged() {
        let spec = toy_machine(DecisionMode::Mq2, 3, 0);
        let violations = spec.validate();
        assert_eq!(violations, vec![SpecViolation::Mq2CountNotTwo { count: 3 }]);
    }

    #[test]
    fn initial_index_outside_dimension_is_flagged() {
        let spec = toy_machine(DecisionMode::Mq2, 2, 9);
        let violations = spec.validate();
        assert!(violations.contains(&SpecViolation::InitialIndexOutOfRange {
            index: 9,
            dimension: 4
        }));
    }

    #[test]
    fn mode_and_kind_must_agree() {
        // BPP over a unitary family is not a thing; the amplitude-typed
        // initial vector is consistent with the family, so only the
        // mode/kind clash is reported.
        let spec = toy_machine(DecisionMode::Bpp, 1, 0);
        let violations = spec.validate();
        assert_eq!(
            violations,
            vec![SpecViolation::ModeKindMismatch {
                mode: DecisionMode::Bpp,
                kind: FamilyKind::Unitary
            }]
        );
    }

    #[test]
    fn bit_string_parses_and_prints() {
        let x: BitString = "0110".parse().unwrap();
        assert_eq!(x.len(), 4);
        assert_eq!(x.bits(), &[false, true, true, false]);
        assert_eq!(x.to_string(), "0110");
        assert!("01x".parse::<BitString>().is_err());
    }

    #[test]
    fn decision_mode_round_trips_through_strings() {
        for mode in [
            DecisionMode::Mq2,
            DecisionMode::Bqp,
            DecisionMode::P,
            DecisionMode::Np,
            DecisionMode::Pp,
            DecisionMode::Bpp,
        ] {
            let back: DecisionMode = mode.as_str().parse().unwrap();
            assert_eq!(back, mode);
        }
        assert!("QMA".parse::<DecisionMode>().is_err());
    }
}
