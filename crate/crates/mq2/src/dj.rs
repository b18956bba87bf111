//! Two-application machines for the constant-vs-balanced promise problem.
//!
//! Given a Boolean function `f` on `n`-bit words, the family has entries
//!
//! ```text
//! ⟨y| T |x⟩ = 2^(−n/2) · (−1)^f(x) · (−1)^popcount(x & y)
//! ```
//!
//! i.e. a phase flip by `f` followed by the `n`-fold Hadamard transform.
//! Applied twice to the all-zero configuration, the machine concentrates
//! probability `(Σ_x (−1)^f(x) / 2^n)²` on configuration 0 — exactly 1 when
//! `f` is constant and exactly 0 when `f` is balanced. The closed form is
//! worth having separately from the engine: the two routes check each other.

use std::sync::Arc;

use crate::engine;
use crate::error::{Error, Result};
use crate::model::{
    Amplitude, BitString, DecisionMode, FamilyKind, MachineSpec, MatrixFamily, Semantics,
    StateVector,
};

/// Largest oracle arity a machine will be built for. The engine refuses the
/// resulting dimension anyway beyond 2^24; running the full machine is only
/// pleasant up to roughly `n = 12`.
pub const MAX_ARITY: u32 = 24;

/// Largest arity accepted by the line-oriented truth-table text format.
pub const MAX_PARSED_ARITY: u32 = 16;

/// How a Boolean function sits with respect to the constant/balanced promise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleClass {
    Constant,
    Balanced,
    /// Neither constant nor balanced; such functions break the promise and
    /// the machine may land anywhere in `(0, 1)`.
    Neither,
}

impl OracleClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            OracleClass::Constant => "constant",
            OracleClass::Balanced => "balanced",
            OracleClass::Neither => "neither",
        }
    }
}

impl std::fmt::Display for OracleClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A fully tabulated Boolean function on `arity`-bit words.
#[derive(Clone, Debug)]
pub struct BooleanOracle {
    name: String,
    arity: u32,
    table: Arc<Vec<bool>>,
}

impl BooleanOracle {
    /// Tabulates `f` over all `2^arity` inputs.
    pub fn from_fn<F>(name: impl Into<String>, arity: u32, f: F) -> Result<Self>
    where
        F: Fn(u64) -> bool,
    {
        if arity > MAX_ARITY {
            return Err(Error::InvalidArgument(format!(
                "oracle arity {arity} exceeds the maximum {MAX_ARITY}"
            )));
        }
        let size = 1usize << arity;
        let table = (0..size as u64).map(f).collect();
        Ok(BooleanOracle {
            name: name.into(),
            arity,
            table: Arc::new(table),
        })
    }

    /// Wraps an explicit table; the length must be a power of two.
    pub fn from_table(name: impl Into<String>, table: Vec<bool>) -> Result<Self> {
        if table.is_empty() || !table.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "truth table length {} is not a positive power of two",
                table.len()
            )));
        }
        let arity = table.len().trailing_zeros();
        if arity > MAX_ARITY {
            return Err(Error::InvalidArgument(format!(
                "oracle arity {arity} exceeds the maximum {MAX_ARITY}"
            )));
        }
        Ok(BooleanOracle {
            name: name.into(),
            arity,
            table: Arc::new(table),
        })
    }

    /// Parses the two-line text form: the arity on the first line, then a
    /// string of `2^arity` characters `0`/`1`. Blank lines and lines starting
    /// with `#` are ignored.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let arity: u32 = lines
            .next()
            .ok_or_else(|| Error::Parse("missing arity line".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad arity line: {e}")))?;
        if arity > MAX_PARSED_ARITY {
            return Err(Error::Parse(format!(
                "arity {arity} exceeds the text-format maximum {MAX_PARSED_ARITY}"
            )));
        }
        let bits = lines
            .next()
            .ok_or_else(|| Error::Parse("missing truth-table line".into()))?;
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after the truth table".into()));
        }
        let expected = 1usize << arity;
        if bits.len() != expected {
            return Err(Error::Parse(format!(
                "truth table has {} entries, arity {arity} needs {expected}",
                bits.len()
            )));
        }
        let table = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!(
                    "truth table may only contain 0 and 1, found {other:?}"
                ))),
            })
            .collect::<Result<Vec<bool>>>()?;
        BooleanOracle::from_table(name, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// Number of inputs, `2^arity`.
    pub fn domain_size(&self) -> u64 {
        1u64 << self.arity
    }

    pub fn evaluate(&self, x: u64) -> bool {
        self.table[x as usize]
    }

    /// Exhaustive classification against the promise.
    pub fn classify(&self) -> OracleClass {
        let ones = self.table.iter().filter(|&&b| b).count() as u64;
        let size = self.domain_size();
        if ones == 0 || ones == size {
            OracleClass::Constant
        } else if 2 * ones == size {
            OracleClass::Balanced
        } else {
            OracleClass::Neither
        }
    }

    /// `f ≡ 0`.
    pub fn constant_zero(arity: u32) -> Result<Self> {
        BooleanOracle::from_fn("constant-0", arity, |_| false)
    }

    /// `f ≡ 1`.
    pub fn constant_one(arity: u32) -> Result<Self> {
        BooleanOracle::from_fn("constant-1", arity, |_| true)
    }

    /// `f(x) = x₀ ⊕ x₁ ⊕ …`, balanced for every positive arity.
    pub fn parity(arity: u32) -> Result<Self> {
        BooleanOracle::from_fn("parity", arity, |x| x.count_ones() % 2 == 1)
    }

    /// `f(x) = x₀`, balanced for every positive arity.
    pub fn low_bit(arity: u32) -> Result<Self> {
        BooleanOracle::from_fn("low-bit", arity, |x| x & 1 == 1)
    }

    /// Accepts only the all-ones word: a deliberate promise breaker for
    /// arity ≥ 1 (a single 1 among `2^n` entries).
    pub fn promise_breaker(arity: u32) -> Result<Self> {
        let all_ones = (1u64 << arity) - 1;
        BooleanOracle::from_fn("promise-breaker", arity, move |x| x == all_ones)
    }
}

/// The phase-flip-then-Hadamard family for a fixed oracle. The size
/// parameter is ignored; the oracle pins the dimension to `2^arity`.
pub fn dj_family(oracle: &BooleanOracle) -> MatrixFamily {
    let dimension = oracle.domain_size();
    let scale = (1.0 / dimension as f64).sqrt();
    let table = Arc::clone(&oracle.table);
    MatrixFamily::new(
        format!("deutsch-jozsa[{}]", oracle.name()),
        FamilyKind::Unitary,
        move |_| dimension,
        move |from, to, _| {
            let flips = table[from as usize] as u32 + (from & to).count_ones();
            let sign = if flips % 2 == 0 { scale } else { -scale };
            Amplitude::new(sign, 0.0)
        },
    )
}

/// A two-application machine that accepts exactly on configuration 0. Runs
/// from the all-zero configuration; the input word is ignored (the oracle is
/// baked into the family).
pub fn build_dj_machine(oracle: &BooleanOracle) -> Result<MachineSpec> {
    let family = dj_family(oracle);
    let arity = oracle.arity();
    Ok(MachineSpec::new(
        format!("dj[{}]", oracle.name()),
        family,
        move |_x| StateVector::basis(arity, Semantics::AmplitudeVector, 0),
        |_x, configuration| configuration == 0,
        move |_x| arity,
        |_n| 2,
        DecisionMode::Mq2,
    ))
}

/// The acceptance probability of the machine, computed without the engine:
/// `(Σ_x (−1)^f(x))² / 4^n`. The sum is integer arithmetic throughout, so
/// the result is exact.
pub fn dj_closed_form_probability(oracle: &BooleanOracle) -> f64 {
    let signed: i64 = oracle
        .table
        .iter()
        .map(|&b| if b { -1i64 } else { 1i64 })
        .sum();
    let ratio = signed as f64 / oracle.domain_size() as f64;
    ratio * ratio
}

/// Convenience wrapper: build the machine, run it on the empty word, and
/// report the engine-computed acceptance probability.
pub fn dj_engine_probability(oracle: &BooleanOracle) -> Result<f64> {
    let machine = build_dj_machine(oracle)?;
    engine::acceptance_probability(&machine, &BitString::empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn entry_values_at_small_sizes() {
        // f ≡ 0, n = 2: every entry is ±1/2 by popcount parity alone
        let oracle = BooleanOracle::constant_zero(2).unwrap();
        let family = dj_family(&oracle);
        assert_eq!(family.entry(0, 0, 2), Amplitude::new(0.5, 0.0));
        assert_eq!(family.entry(2, 3, 2), Amplitude::new(-0.5, 0.0));
        assert_eq!(family.entry(3, 3, 2), Amplitude::new(0.5, 0.0));

        // flipping f(x) flips the whole column
        let flipped = BooleanOracle::constant_one(2).unwrap();
        let flipped_family = dj_family(&flipped);
        for from in 0..4 {
            for to in 0..4 {
                assert_eq!(
                    flipped_family.entry(from, to, 2),
                    -family.entry(from, to, 2)
                );
            }
        }
    }

    #[test]
    fn classification_is_exhaustive() {
        assert_eq!(
            BooleanOracle::constant_zero(3).unwrap().classify(),
            OracleClass::Constant
        );
        assert_eq!(
            BooleanOracle::constant_one(3).unwrap().classify(),
            OracleClass::Constant
        );
        assert_eq!(
            BooleanOracle::parity(3).unwrap().classify(),
            OracleClass::Balanced
        );
        assert_eq!(
            BooleanOracle::low_bit(5).unwrap().classify(),
            OracleClass::Balanced
        );
        assert_eq!(
            BooleanOracle::promise_breaker(3).unwrap().classify(),
            OracleClass::Neither
        );
    }

    #[test]
    fn closed_form_hits_the_promise_endpoints_exactly() {
        for arity in 1..=10 {
            let constant = BooleanOracle::constant_one(arity).unwrap();
            assert_eq!(dj_closed_form_probability(&constant), 1.0);
            let balanced = BooleanOracle::parity(arity).unwrap();
            assert_eq!(dj_closed_form_probability(&balanced), 0.0);
        }
    }

    #[test]
    fn closed_form_on_a_lopsided_table() {
        // one 1 among four entries: sum = 2, probability (2/4)² = 1/4
        let oracle = BooleanOracle::from_table("lopsided", vec![false, false, false, true]).unwrap();
        assert_eq!(oracle.classify(), OracleClass::Neither);
        assert_eq!(dj_closed_form_probability(&oracle), 0.25);
    }

    #[test]
    fn engine_route_matches_the_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for arity in 1..=6 {
            for _ in 0..4 {
                let table: Vec<bool> = (0..1u64 << arity).map(|_| rng.gen()).collect();
                let oracle = BooleanOracle::from_table("random", table).unwrap();
                let engine_p = dj_engine_probability(&oracle).unwrap();
                let closed = dj_closed_form_probability(&oracle);
                assert!(
                    (engine_p - closed).abs() < 1e-12,
                    "arity {arity}: engine {engine_p} vs closed form {closed}"
                );
            }
        }
    }

    #[test]
    fn complementing_the_oracle_preserves_the_probability() {
        let oracle = BooleanOracle::promise_breaker(4).unwrap();
        let complement =
            BooleanOracle::from_fn("complement", 4, |x| !oracle.evaluate(x)).unwrap();
        let a = dj_engine_probability(&oracle).unwrap();
        let b = dj_engine_probability(&complement).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn machine_is_well_formed() {
        let machine = build_dj_machine(&BooleanOracle::parity(4).unwrap()).unwrap();
        assert!(machine.validate().is_empty());
        assert_eq!(machine.mode(), DecisionMode::Mq2);
        assert_eq!(machine.applications_for(4), 2);
        assert!(machine.accepts(&BitString::empty(), 0));
        assert!(!machine.accepts(&BitString::empty(), 1));
    }

    #[test]
    fn parses_the_text_format() {
        let oracle = BooleanOracle::parse("t", "2\n0110\n").unwrap();
        assert_eq!(oracle.arity(), 2);
        assert_eq!(oracle.classify(), OracleClass::Balanced);
        assert!(!oracle.evaluate(0));
        assert!(oracle.evaluate(1));

        let commented = BooleanOracle::parse("t", "# balanced on 1 bit\n1\n01\n").unwrap();
        assert_eq!(commented.arity(), 1);
    }

    #[test]
    fn rejects_malformed_text() {
        assert!(BooleanOracle::parse("t", "").is_err());
        assert!(BooleanOracle::parse("t", "2\n011\n").is_err());
        assert!(BooleanOracle::parse("t", "2\n01x0\n").is_err());
        assert!(BooleanOracle::parse("t", "two\n0110\n").is_err());
        assert!(BooleanOracle::parse("t", "2\n0110\n0110\n").is_err());
        assert!(BooleanOracle::parse("t", "17\n01\n").is_err());
    }

    #[test]
    fn rejects_oversized_and_ragged_tables() {
        assert!(BooleanOracle::from_fn("big", 25, |_| false).is_err());
        assert!(BooleanOracle::from_table("ragged", vec![true; 3]).is_err());
        assert!(BooleanOracle::from_table("empty", vec![]).is_err());
    }

    #[test]
    fn family_is_unitary_for_non_promise_functions_too() {
        let oracle = BooleanOracle::promise_breaker(4).unwrap();
        let report = crate::verify::verify_unitary_exact(&dj_family(&oracle), 4, 1e-12).unwrap();
        assert!(report.passed, "deviation {}", report.max_deviation);
    }
}
