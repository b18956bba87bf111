//! # mq2
//!
//! A numerical laboratory for *matrix-family machines*: decision procedures
//! described by nothing more than
//!
//! * an entry oracle `f(i, j, n) = ⟨j| T_n |i⟩` for a family of matrices,
//! * a builder for the initial configuration vector `I(x)`, and
//! * an acceptance predicate `a(x, c)` over final configurations.
//!
//! Applying `T_n` a fixed number of times to `I(x)` and summing the weight of
//! accepting configurations gives an acceptance probability; a decision mode
//! (`MQ2`, `BQP`, `P`, `NP`, `PP`, `BPP`) turns that probability into a
//! verdict. The same engine therefore runs two-application quantum machines,
//! polynomially many applications of a unitary, and windowed probabilistic
//! Turing machines compiled to stochastic families — the only thing that
//! changes is the oracle and the thresholds.
//!
//! Everything here is desk-scale on purpose: dimensions are capped, matrices
//! are only materialized on request, and the verifier can check the defining
//! unitarity/stochasticity conditions either exactly or by sampling.
//!
//! Module map:
//!
//! * [`model`] — amplitudes, sparse state vectors, matrix families,
//!   configuration codecs, machine specifications.
//! * [`engine`] — implicit matrix application, powers, acceptance
//!   probabilities, verdicts, dense materialization.
//! * [`verify`] — unitarity and stochasticity checks with reports.
//! * [`dj`] — the promise-problem machine that separates constant from
//!   balanced Boolean oracles in two applications.
//! * [`shor`] — the fixed-modulus period-finding block (DFT·MOD), with
//!   continued-fraction post-processing and factor extraction.
//! * [`ptm`] — probabilistic Turing machines: a text format, a compiler to
//!   stochastic families, and a Monte-Carlo cross-check.

pub mod dj;
pub mod engine;
pub mod error;
pub mod model;
pub mod ptm;
pub mod shor;
pub mod verify;

pub use error::{Error, Result};
pub use model::{
    Amplitude, BitString, ConfigCodec, DecisionMode, FamilyKind, MachineSpec, MatrixFamily,
    RegisterSpec, Semantics, SpecViolation, StateVector,
};
