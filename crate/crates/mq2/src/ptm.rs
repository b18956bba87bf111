//! Probabilistic Turing machines compiled into stochastic matrix families.
//!
//! A machine description carries control states, a tape alphabet, a blank
//! symbol, an accepting set, rational transition weights, and a linear time
//! bound `T(n) = c₀ + c₁·n`. Within `T(n)` steps the head can only visit a
//! window of `W = 2·T(n) + 1` cells, so a configuration is a finite triple
//! (state, head cell, window contents) and the one-step behaviour is an
//! honest `K·W·M^W` column-stochastic matrix. Deciding then means: encode
//! the input on the tape, apply the matrix `T(n)` times, and sum the mass
//! sitting on accepting control states. The same description can also be
//! run directly as a sampling simulation ([`monte_carlo`]), which gives a
//! second route to the same probabilities that never touches the matrix.
//!
//! Transition weights are exact rationals and every (state, symbol) pair
//! must have its weights sum to exactly 1; pairs with no rules self-loop,
//! which makes halting states absorbing. A branch that would push the head
//! out of the window leaves the configuration unchanged instead, so the
//! matrix stays stochastic right up to the boundary.
//!
//! Input words are written one bit per cell starting under the head, with
//! bit `b` stored as symbol `1 + b`; machines that read their input need an
//! alphabet of at least 3 symbols.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_rational::Ratio;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{self, DecisionReport};
use crate::error::{Error, Result};
use crate::model::{
    Amplitude, BitString, DecisionMode, FamilyKind, MachineSpec, MatrixFamily, Semantics,
    StateVector,
};

/// Largest denominator a transition weight may carry. Together with
/// [`MAX_BRANCHES`] this keeps the exact rational sum of any rule far from
/// overflow.
pub const MAX_DENOMINATOR: u64 = 10_000;

/// Largest number of branches one (state, symbol) pair may fan out to.
pub const MAX_BRANCHES: usize = 8;

/// Head movement of a single branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    fn as_char(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Stay => 'S',
            Move::Right => 'R',
        }
    }

    fn from_token(token: &str) -> Result<Self> {
        match token {
            "L" => Ok(Move::Left),
            "S" => Ok(Move::Stay),
            "R" => Ok(Move::Right),
            other => Err(Error::Parse(format!(
                "movement must be L, S or R, found {other:?}"
            ))),
        }
    }

    fn offset(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Stay => 0,
            Move::Right => 1,
        }
    }
}

/// One weighted outcome of a (state, symbol) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RuleBranch {
    pub probability: Ratio<u64>,
    pub next_state: u64,
    pub write: u64,
    pub movement: Move,
}

impl RuleBranch {
    pub fn new(num: u64, den: u64, next_state: u64, write: u64, movement: Move) -> Self {
        RuleBranch {
            probability: Ratio::new(num, den),
            next_state,
            write,
            movement,
        }
    }

    fn weight(&self) -> f64 {
        *self.probability.numer() as f64 / *self.probability.denom() as f64
    }
}

/// A complete machine description. Construct with [`PTMDescription::new`]
/// plus [`add_rule`](PTMDescription::add_rule), or parse the text format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PTMDescription {
    name: String,
    states: u64,
    accepting: BTreeSet<u64>,
    alphabet: u64,
    blank: u64,
    /// `T(n) = time.0 + time.1 · n`.
    time: (u32, u32),
    rules: BTreeMap<(u64, u64), Vec<RuleBranch>>,
}

impl PTMDescription {
    pub fn new(
        name: impl Into<String>,
        states: u64,
        accepting: impl IntoIterator<Item = u64>,
        alphabet: u64,
        blank: u64,
        time: (u32, u32),
    ) -> Result<Self> {
        let name = name.into();
        if states == 0 {
            return Err(Error::InvalidArgument("a machine needs at least one state".into()));
        }
        if alphabet == 0 {
            return Err(Error::InvalidArgument(
                "a machine needs at least one tape symbol".into(),
            ));
        }
        if blank >= alphabet {
            return Err(Error::InvalidArgument(format!(
                "blank symbol {blank} is outside the alphabet 0..{alphabet}"
            )));
        }
        let accepting: BTreeSet<u64> = accepting.into_iter().collect();
        if let Some(&bad) = accepting.iter().find(|&&q| q >= states) {
            return Err(Error::InvalidArgument(format!(
                "accepting state {bad} is outside 0..{states}"
            )));
        }
        Ok(PTMDescription {
            name,
            states,
            accepting,
            alphabet,
            blank,
            time,
            rules: BTreeMap::new(),
        })
    }

    /// Installs all branches for one (state, symbol) pair. The weights must
    /// be positive and sum to exactly 1; the exactness check is rational,
    /// not floating point.
    pub fn add_rule(&mut self, state: u64, symbol: u64, branches: Vec<RuleBranch>) -> Result<()> {
        if state >= self.states {
            return Err(Error::InvalidArgument(format!(
                "rule source state {state} is outside 0..{}",
                self.states
            )));
        }
        if symbol >= self.alphabet {
            return Err(Error::InvalidArgument(format!(
                "rule symbol {symbol} is outside the alphabet 0..{}",
                self.alphabet
            )));
        }
        if self.rules.contains_key(&(state, symbol)) {
            return Err(Error::InvalidArgument(format!(
                "duplicate rule for state {state}, symbol {symbol}"
            )));
        }
        if branches.is_empty() || branches.len() > MAX_BRANCHES {
            return Err(Error::InvalidArgument(format!(
                "a rule needs between 1 and {MAX_BRANCHES} branches, got {}",
                branches.len()
            )));
        }
        let mut sum: Ratio<u128> = Ratio::new(0, 1);
        for branch in &branches {
            if branch.next_state >= self.states {
                return Err(Error::InvalidArgument(format!(
                    "branch target state {} is outside 0..{}",
                    branch.next_state, self.states
                )));
            }
            if branch.write >= self.alphabet {
                return Err(Error::InvalidArgument(format!(
                    "branch writes symbol {} outside the alphabet 0..{}",
                    branch.write, self.alphabet
                )));
            }
            let (num, den) = (*branch.probability.numer(), *branch.probability.denom());
            if num == 0 || num > den || den > MAX_DENOMINATOR {
                return Err(Error::InvalidArgument(format!(
                    "branch weight {num}/{den} must lie in (0, 1] with denominator ≤ {MAX_DENOMINATOR}"
                )));
            }
            sum += Ratio::new(num as u128, den as u128);
        }
        if sum != Ratio::new(1, 1) {
            return Err(Error::InvalidArgument(format!(
                "weights for state {state}, symbol {symbol} sum to {sum}, not 1"
            )));
        }
        self.rules.insert((state, symbol), branches);
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The same machine under a different name.
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn states(&self) -> u64 {
        self.states
    }

    pub fn alphabet(&self) -> u64 {
        self.alphabet
    }

    pub fn blank(&self) -> u64 {
        self.blank
    }

    pub fn accepting(&self) -> &BTreeSet<u64> {
        &self.accepting
    }

    pub fn time_bound(&self, n: u32) -> u32 {
        self.time.0.saturating_add(self.time.1.saturating_mul(n))
    }

    /// The same machine under a different time bound. Useful for checking
    /// that the window cutoff is conservative: enlarging the bound of a
    /// machine that already halts within its declared time must not change
    /// any acceptance probability.
    pub fn with_time(mut self, constant: u32, slope: u32) -> Self {
        self.time = (constant, slope);
        self
    }

    fn window(&self, n: u32) -> u64 {
        2 * self.time_bound(n) as u64 + 1
    }

    /// `states · window · alphabet^window`; saturates at `u64::MAX` when the
    /// window outgrows 64 bits, which the engine then refuses.
    pub fn dimension(&self, n: u32) -> u64 {
        let w = self.window(n);
        u32::try_from(w)
            .ok()
            .and_then(|w32| self.alphabet.checked_pow(w32))
            .and_then(|cells| cells.checked_mul(w))
            .and_then(|c| c.checked_mul(self.states))
            .unwrap_or(u64::MAX)
    }

    /// Packs (state, head, window cells) into a configuration index:
    /// state-major, then head, then the cells left to right.
    fn pack(&self, n: u32, state: u64, head: u64, cells: &[u64]) -> u64 {
        let w = self.window(n);
        debug_assert_eq!(cells.len() as u64, w);
        let mut value = state * w + head;
        for &cell in cells {
            value = value * self.alphabet + cell;
        }
        value
    }

    /// The index of the start configuration for input `x`: state 0, head on
    /// the window's center cell, input bits written rightwards from the head
    /// as symbols `1 + b`. `None` if the input does not fit in the window or
    /// uses symbols the alphabet lacks.
    pub fn initial_configuration(&self, x: &BitString, n: u32) -> Option<u64> {
        if self.dimension(n) == u64::MAX {
            return None;
        }
        let t = self.time_bound(n) as u64;
        let w = self.window(n);
        let mut cells = vec![self.blank; w as usize];
        for (i, bit) in x.bits().iter().enumerate() {
            let symbol = 1 + *bit as u64;
            if symbol >= self.alphabet {
                return None;
            }
            let cell = t as usize + i;
            if cell >= cells.len() {
                return None;
            }
            cells[cell] = symbol;
        }
        Some(self.pack(n, 0, t, &cells))
    }

    /// Whether configuration index `c` sits in an accepting control state.
    pub fn is_accepting_configuration(&self, c: u64, n: u32) -> bool {
        let w = self.window(n);
        if let Some(cells) = u32::try_from(w)
            .ok()
            .and_then(|w32| self.alphabet.checked_pow(w32))
        {
            let state = c / cells / w;
            self.accepting.contains(&state)
        } else {
            false
        }
    }

    /// The one-step transition probability from configuration `from` to
    /// configuration `to`: the entry oracle of the compiled family.
    pub fn transition_entry(&self, from: u64, to: u64, n: u32) -> f64 {
        let w = self.window(n);
        let cells_span = match u32::try_from(w)
            .ok()
            .and_then(|w32| self.alphabet.checked_pow(w32))
        {
            Some(span) => span,
            None => return 0.0, // beyond the representable regime; never reached
        };
        let cell_value = from % cells_span;
        let rest = from / cells_span;
        let head = rest % w;
        let state = rest / w;

        // symbol under the head; cell 0 is the most significant digit
        let mut place = 1u64;
        for _ in head + 1..w {
            place *= self.alphabet;
        }
        let symbol = (cell_value / place) % self.alphabet;

        let Some(branches) = self.rules.get(&(state, symbol)) else {
            // no rule: the configuration is absorbing
            return if from == to { 1.0 } else { 0.0 };
        };

        let mut total = 0.0;
        for branch in branches {
            let new_head = head as i64 + branch.movement.offset();
            let destination = if new_head < 0 || new_head as u64 >= w {
                // the window boundary reflects the whole branch back
                from
            } else {
                let written = cell_value - symbol * place + branch.write * place;
                (branch.next_state * w + new_head as u64) * cells_span + written
            };
            if destination == to {
                total += branch.weight();
            }
        }
        total
    }

    /// Runs the machine `trials` times by direct sampling and reports the
    /// observed acceptance frequency. Trial `i` is seeded with `seed + i`,
    /// so any prefix of a longer run is reproducible. This route shares no
    /// code with the matrix semantics beyond the description itself.
    pub fn monte_carlo(&self, x: &BitString, trials: u64, seed: u64) -> Result<f64> {
        if trials == 0 {
            return Err(Error::InvalidArgument("monte carlo needs at least one trial".into()));
        }
        let n = x.len() as u32;
        let t = self.time_bound(n);
        let w = self.window(n) as usize;
        let start = t as usize;
        let mut base_tape = vec![self.blank; w];
        for (i, bit) in x.bits().iter().enumerate() {
            let symbol = 1 + *bit as u64;
            if symbol >= self.alphabet || start + i >= w {
                return Err(Error::InvalidArgument(format!(
                    "input does not fit machine `{}` (alphabet {}, window {w})",
                    self.name, self.alphabet
                )));
            }
            base_tape[start + i] = symbol;
        }

        let mut accepted = 0u64;
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial));
            let mut tape = base_tape.clone();
            let mut state = 0u64;
            let mut head = start as i64;
            for _ in 0..t {
                let symbol = tape[head as usize];
                let Some(branches) = self.rules.get(&(state, symbol)) else {
                    continue; // absorbing; the remaining steps change nothing
                };
                let draw: f64 = rng.gen();
                let mut cumulative = 0.0;
                let mut chosen = branches.last().expect("rules are never empty");
                for branch in branches {
                    cumulative += branch.weight();
                    if draw < cumulative {
                        chosen = branch;
                        break;
                    }
                }
                let new_head = head + chosen.movement.offset();
                if new_head < 0 || new_head as usize >= w {
                    continue; // boundary branch leaves the configuration alone
                }
                tape[head as usize] = chosen.write;
                state = chosen.next_state;
                head = new_head;
            }
            if self.accepting.contains(&state) {
                accepted += 1;
            }
        }
        Ok(accepted as f64 / trials as f64)
    }

    /// Serializes to the text format understood by
    /// [`PTMDescription::parse`]. The name is not part of the file.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let accepting = if self.accepting.is_empty() {
            "-".to_string()
        } else {
            self.accepting
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = String::new();
        writeln!(
            out,
            "states {} accepting {accepting} alphabet {} blank {} time_bound {},{}",
            self.states, self.alphabet, self.blank, self.time.0, self.time.1
        )
        .unwrap();
        for (&(state, symbol), branches) in &self.rules {
            write!(out, "{state} {symbol}").unwrap();
            for b in branches {
                write!(
                    out,
                    " {}/{}:{},{},{}",
                    b.probability.numer(),
                    b.probability.denom(),
                    b.next_state,
                    b.write,
                    b.movement.as_char()
                )
                .unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Parses the machine text format. The first substantive line is the
    /// header
    ///
    /// ```text
    /// states K accepting a1,a2 alphabet M blank B time_bound c0,c1
    /// ```
    ///
    /// (`accepting -` for no accepting states; `time_bound c0,c1` means
    /// `T(n) = c0 + c1·n`), followed by one line per (state, symbol) pair
    /// listing its weighted outcomes:
    ///
    /// ```text
    /// STATE SYMBOL p:state,write,move [p:state,write,move ...]
    /// ```
    ///
    /// with each weight `p` an exact rational `num/den` and moves `L`, `S`
    /// or `R`. `#` starts a comment. Weights of a line must sum to exactly
    /// 1. The `name` is supplied by the caller, not the file.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        fn parse_u64(token: &str, what: &str) -> Result<u64> {
            token
                .parse()
                .map_err(|e| Error::Parse(format!("bad {what} {token:?}: {e}")))
        }

        let mut lines = text
            .lines()
            .map(|raw| raw.split('#').next().unwrap_or("").trim())
            .filter(|line| !line.is_empty());

        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        let expected = ["states", "accepting", "alphabet", "blank", "time_bound"];
        if tokens.len() != 10 || (0..5).any(|k| tokens[2 * k] != expected[k]) {
            return Err(Error::Parse(format!(
                "header must read `states K accepting LIST alphabet M blank B \
                 time_bound c0,c1`, found {header:?}"
            )));
        }
        let states = parse_u64(tokens[1], "state count")?;
        let accepting: Vec<u64> = if tokens[3] == "-" {
            vec![]
        } else {
            tokens[3]
                .split(',')
                .map(|t| parse_u64(t, "accepting state"))
                .collect::<Result<Vec<u64>>>()?
        };
        let alphabet = parse_u64(tokens[5], "alphabet size")?;
        let blank = parse_u64(tokens[7], "blank symbol")?;
        let (c0, c1) = tokens[9]
            .split_once(',')
            .ok_or_else(|| Error::Parse("time_bound must be `c0,c1`".into()))?;
        let time = (
            u32::try_from(parse_u64(c0, "time constant")?)
                .map_err(|_| Error::Parse("time constant does not fit in 32 bits".into()))?,
            u32::try_from(parse_u64(c1, "time slope")?)
                .map_err(|_| Error::Parse("time slope does not fit in 32 bits".into()))?,
        );

        let mut description =
            PTMDescription::new(name, states, accepting, alphabet, blank, time)?;
        for line in lines {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() < 3 {
                return Err(Error::Parse(format!(
                    "rule lines look like `STATE SYMBOL p:state,write,move ...`, found {line:?}"
                )));
            }
            let state = parse_u64(tokens[0], "rule state")?;
            let symbol = parse_u64(tokens[1], "rule symbol")?;
            let mut branches = Vec::new();
            for outcome in &tokens[2..] {
                let (weight, action) = outcome.split_once(':').ok_or_else(|| {
                    Error::Parse(format!("outcome {outcome:?} is missing the `:`"))
                })?;
                let (num, den) = match weight.split_once('/') {
                    Some((n, d)) => (
                        parse_u64(n, "weight numerator")?,
                        parse_u64(d, "weight denominator")?,
                    ),
                    None => (parse_u64(weight, "weight")?, 1),
                };
                if den == 0 {
                    return Err(Error::Parse(format!(
                        "outcome {outcome:?} has a zero denominator"
                    )));
                }
                let parts: Vec<&str> = action.split(',').collect();
                if parts.len() != 3 {
                    return Err(Error::Parse(format!(
                        "outcome {outcome:?} needs `state,write,move` after the `:`"
                    )));
                }
                let next_state = parse_u64(parts[0], "branch state")?;
                let write = parse_u64(parts[1], "branch symbol")?;
                let movement = Move::from_token(parts[2])?;
                branches.push(RuleBranch::new(num, den, next_state, write, movement));
            }
            description.add_rule(state, symbol, branches)?;
        }
        Ok(description)
    }

    /// Scans rightwards over its input and accepts on the first blank.
    /// Deterministic; accepts every input with probability exactly 1 within
    /// `T(n) = n + 1` steps. Run it in P mode.
    pub fn scan_accept() -> Self {
        let mut m = PTMDescription::new("scan-accept", 2, [1], 3, 0, (1, 1))
            .expect("builtin scan-accept header");
        m.add_rule(0, 1, vec![RuleBranch::new(1, 1, 0, 1, Move::Right)])
            .expect("builtin scan-accept rule");
        m.add_rule(0, 2, vec![RuleBranch::new(1, 1, 0, 2, Move::Right)])
            .expect("builtin scan-accept rule");
        m.add_rule(0, 0, vec![RuleBranch::new(1, 1, 1, 0, Move::Stay)])
            .expect("builtin scan-accept rule");
        m
    }

    /// Never leaves its rejecting start state. Rejects everything with
    /// probability exactly 0; the P and NP counterpart of [`scan_accept`].
    pub fn always_reject() -> Self {
        PTMDescription::new("always-reject", 1, [], 1, 0, (1, 0))
            .expect("builtin always-reject header")
    }

    /// Flips one fair coin and accepts on heads: acceptance probability
    /// exactly ½, the knife edge of the PP threshold.
    pub fn fair_coin() -> Self {
        let mut m = PTMDescription::new("fair-coin", 3, [1], 1, 0, (1, 0))
            .expect("builtin fair-coin header");
        m.add_rule(
            0,
            0,
            vec![
                RuleBranch::new(1, 2, 1, 0, Move::Stay),
                RuleBranch::new(1, 2, 2, 0, Move::Stay),
            ],
        )
        .expect("builtin fair-coin rule");
        m
    }

    /// Flips three coins with heads probability 4/5 and accepts on a
    /// majority of heads: acceptance probability exactly
    /// 3·(4/5)²·(1/5) + (4/5)³ = 112/125 = 0.896, comfortably above the
    /// BPP acceptance threshold. States are (flips, heads) pairs:
    /// 0=(0,0), 1=(1,0), 2=(1,1), 3=(2,0), 4=(2,1), 5=(2,2), 6=accept,
    /// 7=reject.
    pub fn biased_majority() -> Self {
        let mut m = PTMDescription::new("biased-majority", 8, [6], 1, 0, (3, 0))
            .expect("builtin biased-majority header");
        let flip = |heads: u64, tails: u64| {
            vec![
                RuleBranch::new(4, 5, heads, 0, Move::Stay),
                RuleBranch::new(1, 5, tails, 0, Move::Stay),
            ]
        };
        m.add_rule(0, 0, flip(2, 1)).expect("builtin rule");
        m.add_rule(1, 0, flip(4, 3)).expect("builtin rule");
        m.add_rule(2, 0, flip(5, 4)).expect("builtin rule");
        // two tails already: lost regardless of the last flip
        m.add_rule(3, 0, vec![RuleBranch::new(1, 1, 7, 0, Move::Stay)])
            .expect("builtin rule");
        m.add_rule(4, 0, flip(6, 7)).expect("builtin rule");
        // two heads already: won regardless of the last flip
        m.add_rule(5, 0, vec![RuleBranch::new(1, 1, 6, 0, Move::Stay)])
            .expect("builtin rule");
        m
    }

    /// The builtin machine with the given name, if any.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "scan-accept" => Some(Self::scan_accept()),
            "always-reject" => Some(Self::always_reject()),
            "fair-coin" => Some(Self::fair_coin()),
            "biased-majority" => Some(Self::biased_majority()),
            _ => None,
        }
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["scan-accept", "always-reject", "fair-coin", "biased-majority"]
    }
}

/// The compiled one-step family of a machine description.
pub fn ptm_family(description: &PTMDescription) -> MatrixFamily {
    let description = Arc::new(description.clone());
    let dim = Arc::clone(&description);
    let entry = Arc::clone(&description);
    MatrixFamily::new(
        format!("ptm[{}]", description.name()),
        FamilyKind::Stochastic,
        move |n| dim.dimension(n),
        move |from, to, n| Amplitude::new(entry.transition_entry(from, to, n), 0.0),
    )
}

/// Wraps a description into a runnable machine under the given decision
/// mode. The machine applies the one-step matrix `T(n)` times. An input
/// that does not fit the machine (symbols outside the alphabet, word longer
/// than the window) yields an empty initial state, which the engine rejects
/// before running.
pub fn build_ptm_machine(description: &PTMDescription, mode: DecisionMode) -> Result<MachineSpec> {
    match mode {
        DecisionMode::P | DecisionMode::Np | DecisionMode::Pp | DecisionMode::Bpp => {}
        other => {
            return Err(Error::InvalidArgument(format!(
                "mode {other} does not apply to a stochastic machine"
            )));
        }
    }
    let family = ptm_family(description);
    let description = Arc::new(description.clone());
    let initial_desc = Arc::clone(&description);
    let accept_desc = Arc::clone(&description);
    let time_desc = Arc::clone(&description);
    Ok(MachineSpec::new(
        format!("{}[{}]", mode.as_str(), description.name()),
        family,
        move |x| {
            let n = x.len() as u32;
            match initial_desc.initial_configuration(x, n) {
                Some(index) => StateVector::basis(n, Semantics::ProbabilityVector, index),
                None => StateVector::from_entries(n, Semantics::ProbabilityVector, vec![]),
            }
        },
        move |x, configuration| {
            accept_desc.is_accepting_configuration(configuration, x.len() as u32)
        },
        |x| x.len() as u32,
        move |n| time_desc.time_bound(n),
        mode,
    ))
}

/// Builds the machine and decides `x` in one call.
pub fn decide_classical(
    description: &PTMDescription,
    mode: DecisionMode,
    x: &BitString,
) -> Result<DecisionReport> {
    // refuse oversized windows up front: an input that merely fails to fit
    // the alphabet is a usage error, but a window beyond the dimension cap
    // is a resource refusal and must surface as one
    let n = x.len() as u32;
    let dimension = description.dimension(n);
    if dimension > engine::DIMENSION_CAP {
        return Err(Error::DimensionCap {
            dimension,
            cap: engine::DIMENSION_CAP,
        });
    }
    let machine = build_ptm_machine(description, mode)?;
    engine::decide(&machine, x)
}
