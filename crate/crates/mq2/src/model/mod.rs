//! Core data model: amplitudes, sparse state vectors, implicit matrix
//! families, configuration codecs and machine specifications.

mod codec;
mod family;
mod machine;
mod state;

/// Complex amplitude. Matrix entries and state-vector values are all of this
/// type; stochastic families simply keep the imaginary part at zero.
pub type Amplitude = num_complex::Complex64;

pub use codec::{ConfigCodec, RegisterSpec};
pub use family::{FamilyKind, MatrixFamily};
pub use machine::{BitString, DecisionMode, MachineSpec, SpecViolation};
pub use state::{Semantics, StateVector};
