//! Period finding over a fixed modulus as a two-application machine.
//!
//! For a modulus `N`, a coprime base `x` and a power-of-two `q ≥ N²`, the
//! machine works on configurations `(a, i)` with `a ∈ [0, q)` and
//! `i ∈ [0, N)`, packed as `index = i·q + a`. Its family is the product
//! `T = DFT·MOD` of two blocks:
//!
//! * `MOD`: `⟨a', i' | MOD | a, i⟩ = δ_{a,a'} · [ (i + i') mod N = x^a mod N ]`,
//!   a permutation sending `i` to `(x^a − i) mod N`;
//! * `DFT`: `⟨a', i' | DFT | a, i⟩ = (1/√q) · δ_{i,i'} · e^{2πi·aa'/q}`,
//!   the Fourier transform on the `a` register.
//!
//! Started from `(a=0, i=0)` and applied twice, `T` puts essentially all
//! measurement weight on `a'` values close to multiples of `q/r`, where `r`
//! is the multiplicative order of `x` mod `N`. The acceptance predicate reads
//! only `a'`: it reconstructs a period candidate from the continued-fraction
//! expansion of `a'/q`, verifies it (trying small multiples), and accepts
//! exactly when the verified period has a 1 in the target bit position. The
//! first of the two applications contributes an extra `MOD`, which relabels
//! the `i` register and provably leaves the `a'` statistics alone.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use num_integer::gcd;

use crate::engine::DIMENSION_CAP;
use crate::error::{Error, Result};
use crate::model::{
    Amplitude, BitString, ConfigCodec, DecisionMode, FamilyKind, MachineSpec, MatrixFamily,
    RegisterSpec, Semantics, StateVector,
};

/// How many multiples of a continued-fraction denominator the acceptance
/// predicate tries before giving up on a measured `a'`.
pub const MAX_PERIOD_MULTIPLE: u64 = 4;

/// Largest modulus `brute_force_period` will grind through.
pub const MAX_BRUTE_FORCE_MODULUS: u64 = 1_000_000;

/// `base^exp mod modulus` with 128-bit intermediates.
pub fn mod_pow(base: u64, exp: u64, modulus: u64) -> u64 {
    assert!(modulus > 0, "modulus must be positive");
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut result: u128 = 1;
    let mut b = (base as u128) % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    result as u64
}

/// One configuration of the period-finding machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShorConfig {
    pub a: u64,
    pub i: u64,
}

/// A fixed `(N, x, bit, q)` problem instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShorInstance {
    modulus: u64,
    base: u64,
    target_bit: u32,
    q: u64,
}

/// `e^{2πi·k/q}`. Both block formulas and the combined family reduce their
/// phase argument mod `q` and come through here, so composing the blocks by
/// hand reproduces the family entries bit for bit.
fn phase(q: u64, k: u64) -> Amplitude {
    let angle = TAU * (k as f64) / (q as f64);
    Amplitude::new(angle.cos(), angle.sin())
}

impl ShorInstance {
    /// Builds an instance with the default `q = 2^(2·⌈log₂N⌉)`.
    pub fn new(modulus: u64, base: u64, target_bit: u32) -> Result<Self> {
        let q = Self::default_q(modulus)?;
        Self::with_q(modulus, base, target_bit, q)
    }

    /// Builds an instance with an explicit `q` (power of two, at least `N²`).
    pub fn with_q(modulus: u64, base: u64, target_bit: u32, q: u64) -> Result<Self> {
        if modulus < 3 {
            return Err(Error::InvalidArgument(format!(
                "modulus must be at least 3, got {modulus}"
            )));
        }
        if base < 2 || base >= modulus {
            return Err(Error::InvalidArgument(format!(
                "base must satisfy 2 <= x < N, got x={base}, N={modulus}"
            )));
        }
        if gcd(base, modulus) != 1 {
            return Err(Error::InvalidArgument(format!(
                "base {base} shares the factor {} with modulus {modulus}",
                gcd(base, modulus)
            )));
        }
        if !q.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "q must be a power of two, got {q}"
            )));
        }
        if (q as u128) < (modulus as u128) * (modulus as u128) {
            return Err(Error::InvalidArgument(format!(
                "q must be at least N² = {}, got {q}",
                (modulus as u128) * (modulus as u128)
            )));
        }
        Ok(ShorInstance {
            modulus,
            base,
            target_bit,
            q,
        })
    }

    /// `2^(2·⌈log₂N⌉)`, the smallest default that is a power of two and at
    /// least `N²`.
    pub fn default_q(modulus: u64) -> Result<u64> {
        if modulus < 3 {
            return Err(Error::InvalidArgument(format!(
                "modulus must be at least 3, got {modulus}"
            )));
        }
        let ceil_log2 = 64 - (modulus - 1).leading_zeros();
        2u64.checked_pow(2 * ceil_log2)
            .ok_or_else(|| Error::InvalidArgument(format!("q overflows for modulus {modulus}")))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn target_bit(&self) -> u32 {
        self.target_bit
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `q·N`, the dimension of the configuration space.
    pub fn dimension(&self) -> u64 {
        self.q * self.modulus
    }

    /// The `(i, a)` codec: `i` is the major register, `index = i·q + a`.
    pub fn codec(&self) -> ConfigCodec {
        ConfigCodec::new(vec![
            RegisterSpec::new("i", self.modulus),
            RegisterSpec::new("a", self.q),
        ])
        .expect("two positive radices always form a codec")
    }

    pub fn pack(&self, config: ShorConfig) -> u64 {
        debug_assert!(config.a < self.q && config.i < self.modulus);
        config.i * self.q + config.a
    }

    pub fn unpack(&self, index: u64) -> ShorConfig {
        ShorConfig {
            a: index % self.q,
            i: index / self.q,
        }
    }

    /// `x^a mod N`.
    pub fn power(&self, a: u64) -> u64 {
        mod_pow(self.base, a, self.modulus)
    }
}

/// `⟨to| DFT |from⟩` for the Fourier block on the `a` register.
pub fn dft_entry(inst: &ShorInstance, from: ShorConfig, to: ShorConfig) -> Amplitude {
    if from.i != to.i {
        return Amplitude::new(0.0, 0.0);
    }
    let q = inst.q();
    let k = ((from.a as u128 * to.a as u128) % q as u128) as u64;
    phase(q, k) / (q as f64).sqrt()
}

/// `⟨to| MOD |from⟩` for the modular block: nonzero exactly when the `a`
/// register is preserved and `(from.i + to.i) mod N = x^from.a mod N`.
pub fn mod_entry(inst: &ShorInstance, from: ShorConfig, to: ShorConfig) -> Amplitude {
    if from.a != to.a {
        return Amplitude::new(0.0, 0.0);
    }
    let n = inst.modulus();
    if (from.i + to.i) % n == inst.power(from.a) % n {
        Amplitude::new(1.0, 0.0)
    } else {
        Amplitude::new(0.0, 0.0)
    }
}

/// The combined family `T = DFT·MOD` as a matrix family over packed indices.
///
/// `⟨a', i' | T | a, i⟩ = (1/√q) · e^{2πi·aa'/q} · [ (i + i') mod N = x^a mod N ]`.
/// The size parameter is nominal; the dimension is always `q·N`.
pub fn shor_family(inst: &ShorInstance) -> MatrixFamily {
    let q = inst.q();
    let n = inst.modulus();
    let dim = inst.dimension();
    let scale = 1.0 / (q as f64).sqrt();
    // Pure lookup tables; entries stay bit-identical to phase()/power() calls.
    let powers: Arc<Vec<u64>> = Arc::new((0..q).map(|a| inst.power(a)).collect());
    let roots: Arc<Vec<Amplitude>> = Arc::new((0..q).map(|k| phase(q, k)).collect());

    MatrixFamily::new(
        format!("shor-block-N{}-x{}-q{}", n, inst.base(), q),
        FamilyKind::Unitary,
        move |_| dim,
        move |from, to, _| {
            let (fa, fi) = (from % q, from / q);
            let (ta, ti) = (to % q, to / q);
            if (fi + ti) % n != powers[fa as usize] {
                return Amplitude::new(0.0, 0.0);
            }
            let k = ((fa as u128 * ta as u128) % q as u128) as u64;
            roots[k as usize] * scale
        },
    )
}

/// Continued-fraction reconstruction: the smallest denominator `r ≤ N` among
/// the convergents of `a_measured/q` with `|a_measured/q − d/r| ≤ 1/(2q)`.
/// `a_measured = 0` carries no period information and yields `None`.
pub fn extract_period_candidate(a_measured: u64, q: u64, modulus: u64) -> Option<u64> {
    if a_measured == 0 || a_measured >= q {
        return None;
    }
    // Convergents p_k/r_k of a_measured/q via the standard recurrence
    // p_k = a_k·p_{k−1} + p_{k−2} (seeds 1, 0), r_k likewise (seeds 0, 1);
    // the denominators are nondecreasing, so the first hit is the smallest.
    let (mut num, mut den) = (a_measured, q);
    let (mut p_prev, mut p) = (0u64, 1u64);
    let (mut r_prev, mut r) = (1u64, 0u64);
    loop {
        let quotient = num / den;
        let next_p = quotient
            .checked_mul(p)
            .and_then(|v| v.checked_add(p_prev))?;
        let next_r = quotient
            .checked_mul(r)
            .and_then(|v| v.checked_add(r_prev))?;
        p_prev = p;
        p = next_p;
        r_prev = r;
        r = next_r;

        if r > modulus {
            return None;
        }
        // |a/q − p/r| ≤ 1/(2q)  ⇔  2·|a·r − p·q| ≤ r, checked exactly.
        // p = 0 would need a ≤ 1/2 and never qualifies.
        let lhs = (a_measured as u128 * r as u128).abs_diff(p as u128 * q as u128);
        if p > 0 && 2 * lhs <= r as u128 {
            return Some(r);
        }

        let rem = num % den;
        if rem == 0 {
            return None;
        }
        num = den;
        den = rem;
    }
}

/// The verified period the post-processing recovers from one measured `a'`:
/// the continued-fraction candidate `r`, or the first of its multiples
/// `m·r (m ≤ 4)` with `x^{m·r} ≡ 1 (mod N)`. `None` when nothing verifies.
pub fn verified_period_from(inst: &ShorInstance, a_measured: u64) -> Option<u64> {
    let candidate = extract_period_candidate(a_measured, inst.q(), inst.modulus())?;
    (1..=MAX_PERIOD_MULTIPLE)
        .map(|m| candidate * m)
        .find(|&s| inst.power(s) == 1)
}

/// Acceptance predicate over packed configurations. Only the `a'` register is
/// read; the machine accepts exactly when a verified period has a 1 in the
/// instance's target bit.
pub fn shor_accepts(inst: &ShorInstance, configuration: u64) -> bool {
    let ShorConfig { a, i: _ } = inst.unpack(configuration);
    match verified_period_from(inst, a) {
        Some(period) => {
            let bit = inst.target_bit();
            bit < 64 && (period >> bit) & 1 == 1
        }
        None => false,
    }
}

/// The full machine: family `DFT·MOD`, initial configuration `(a=0, i=0)`,
/// two applications, MQ2 thresholds.
pub fn build_shor_machine(inst: &ShorInstance) -> Result<MachineSpec> {
    let dim = inst.dimension();
    if dim > DIMENSION_CAP {
        return Err(Error::DimensionCap {
            dimension: dim,
            cap: DIMENSION_CAP,
        });
    }
    let family = shor_family(inst);
    let size = 64 - inst.modulus().leading_zeros();
    let accept_inst = inst.clone();
    Ok(MachineSpec::new(
        format!(
            "shor-N{}-x{}-bit{}",
            inst.modulus(),
            inst.base(),
            inst.target_bit()
        ),
        family,
        |_x| StateVector::basis(0, Semantics::AmplitudeVector, 0),
        move |_x: &BitString, c: u64| shor_accepts(&accept_inst, c),
        move |_x| size,
        |_n| 2,
        DecisionMode::Mq2,
    ))
}

/// Marginal measurement distribution over `a'`: weights of a state summed
/// over the `i` register, keyed by `a'`. Only the sparse support contributes.
pub fn a_prime_marginal(inst: &ShorInstance, state: &StateVector) -> BTreeMap<u64, f64> {
    let mut marginal = BTreeMap::new();
    for (index, amplitude) in state.iter() {
        let config = inst.unpack(index);
        let weight = match state.semantics() {
            Semantics::AmplitudeVector => amplitude.norm_sqr(),
            Semantics::ProbabilityVector => amplitude.re,
        };
        *marginal.entry(config.a).or_insert(0.0) += weight;
    }
    marginal
}

/// Smallest verified period recoverable from any outcome in a marginal whose
/// probability exceeds `mass_floor`.
pub fn recovered_period(
    inst: &ShorInstance,
    marginal: &BTreeMap<u64, f64>,
    mass_floor: f64,
) -> Option<u64> {
    marginal
        .iter()
        .filter(|(_, &mass)| mass > mass_floor)
        .filter_map(|(&a, _)| verified_period_from(inst, a))
        .min()
}

/// The multiplicative order of `x` mod `N` by direct search.
pub fn brute_force_period(base: u64, modulus: u64) -> Result<u64> {
    if modulus > MAX_BRUTE_FORCE_MODULUS {
        return Err(Error::DimensionCap {
            dimension: modulus,
            cap: MAX_BRUTE_FORCE_MODULUS,
        });
    }
    if modulus < 2 || base < 1 || base >= modulus || gcd(base, modulus) != 1 {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= x < N with gcd(x, N) = 1, got x={base}, N={modulus}"
        )));
    }
    let mut value = base % modulus;
    let mut period = 1u64;
    while value != 1 {
        value = value * base % modulus;
        period += 1;
    }
    Ok(period)
}

/// Splits `N` using an even period: when `x^{r/2} ≢ −1 (mod N)`, both
/// `gcd(x^{r/2} ± 1, N)` are proper factors. Returns `None` for odd periods
/// or the bad-luck `x^{r/2} ≡ −1` case.
pub fn factor_from_period(base: u64, modulus: u64, period: u64) -> Option<(u64, u64)> {
    if period == 0 || period % 2 != 0 {
        return None;
    }
    let half = mod_pow(base, period / 2, modulus);
    if half == modulus - 1 {
        return None;
    }
    let f1 = gcd((half + modulus - 1) % modulus, modulus);
    let f2 = gcd((half + 1) % modulus, modulus);
    if f1 > 1 && f1 < modulus && f2 > 1 && f2 < modulus {
        Some((f1, f2))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Amplitude, b: Amplitude) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn default_q_is_square_bound_power_of_two() {
        assert_eq!(ShorInstance::default_q(15).unwrap(), 256);
        assert_eq!(ShorInstance::default_q(21).unwrap(), 1024);
        assert_eq!(ShorInstance::default_q(33).unwrap(), 4096);
        assert_eq!(ShorInstance::default_q(3).unwrap(), 16);
    }

    #[test]
    fn instance_rejects_bad_parameters() {
        assert!(ShorInstance::new(15, 6, 0).is_err()); // gcd(6,15)=3
        assert!(ShorInstance::new(15, 1, 0).is_err());
        assert!(ShorInstance::with_q(15, 7, 0, 100).is_err()); // not a power of two
        assert!(ShorInstance::with_q(15, 7, 0, 128).is_err()); // below N²
        assert!(ShorInstance::with_q(15, 7, 0, 512).is_ok());
    }

    #[test]
    fn packing_is_i_major() {
        let inst = ShorInstance::new(15, 7, 2).unwrap();
        assert_eq!(inst.pack(ShorConfig { a: 0, i: 0 }), 0);
        assert_eq!(inst.pack(ShorConfig { a: 0, i: 1 }), 256);
        assert_eq!(inst.unpack(256), ShorConfig { a: 0, i: 1 });
        assert_eq!(inst.dimension(), 3840);
        assert_eq!(inst.codec().dimension(), 3840);
    }

    #[test]
    fn dft_entry_examples() {
        let inst = ShorInstance::new(15, 7, 2).unwrap();
        let e00 = dft_entry(
            &inst,
            ShorConfig { a: 0, i: 0 },
            ShorConfig { a: 0, i: 0 },
        );
        assert!(close(e00, Amplitude::new(1.0 / 16.0, 0.0)));

        // a·a' = 128 is half a turn: e^{iπ} = −1
        let e_half = dft_entry(
            &inst,
            ShorConfig { a: 1, i: 0 },
            ShorConfig { a: 128, i: 0 },
        );
        assert!(close(e_half, Amplitude::new(-1.0 / 16.0, 0.0)));

        // the block never moves the i register
        let off = dft_entry(
            &inst,
            ShorConfig { a: 3, i: 1 },
            ShorConfig { a: 5, i: 2 },
        );
        assert_eq!(off, Amplitude::new(0.0, 0.0));
    }

    #[test]
    fn mod_entry_is_the_expected_permutation() {
        let inst = ShorInstance::new(15, 7, 2).unwrap();
        // 7² mod 15 = 4, so from (a=2, i=0) the i register moves to 4
        let hit = mod_entry(
            &inst,
            ShorConfig { a: 2, i: 0 },
            ShorConfig { a: 2, i: 4 },
        );
        assert_eq!(hit, Amplitude::new(1.0, 0.0));
        let miss = mod_entry(
            &inst,
            ShorConfig { a: 2, i: 0 },
            ShorConfig { a: 2, i: 5 },
        );
        assert_eq!(miss, Amplitude::new(0.0, 0.0));
        let wrong_a = mod_entry(
            &inst,
            ShorConfig { a: 2, i: 0 },
            ShorConfig { a: 3, i: 4 },
        );
        assert_eq!(wrong_a, Amplitude::new(0.0, 0.0));
    }

    #[test]
    fn mod_block_is_an_involution_on_indices() {
        let inst = ShorInstance::new(21, 2, 1).unwrap();
        for a in [0u64, 1, 5, 100] {
            for i in [0u64, 1, 13, 20] {
                let image = (inst.power(a) + inst.modulus() - i % inst.modulus())
                    % inst.modulus();
                let back = (inst.power(a) + inst.modulus() - image) % inst.modulus();
                assert_eq!(back, i % inst.modulus());
            }
        }
    }

    #[test]
    fn combined_family_matches_block_composition_exactly() {
        let inst = ShorInstance::new(3, 2, 0).unwrap(); // q = 16, dim = 48
        let family = shor_family(&inst);
        let dim = inst.dimension();
        for from in 0..dim {
            for to in 0..dim {
                let mut composed = Amplitude::new(0.0, 0.0);
                for mid in 0..dim {
                    let m = mod_entry(&inst, inst.unpack(from), inst.unpack(mid));
                    if m.re == 0.0 && m.im == 0.0 {
                        continue;
                    }
                    composed += dft_entry(&inst, inst.unpack(mid), inst.unpack(to)) * m;
                }
                assert_eq!(family.entry(from, to, 0), composed, "at ({from}, {to})");
            }
        }
    }

    #[test]
    fn combined_entry_examples() {
        let inst = ShorInstance::new(15, 7, 2).unwrap();
        let family = shor_family(&inst);
        // from (0,0): x^0 = 1, so i' must be 1; phase a·a' = 0
        let hit = family.entry(0, inst.pack(ShorConfig { a: 0, i: 1 }), 0);
        assert!(close(hit, Amplitude::new(1.0 / 16.0, 0.0)));
        let miss = family.entry(0, inst.pack(ShorConfig { a: 5, i: 0 }), 0);
        assert_eq!(miss, Amplitude::new(0.0, 0.0));
    }

    #[test]
    fn continued_fraction_extraction() {
        assert_eq!(extract_period_candidate(64, 256, 15), Some(4));
        assert_eq!(extract_period_candidate(128, 256, 15), Some(2));
        assert_eq!(extract_period_candidate(192, 256, 15), Some(4));
        assert_eq!(extract_period_candidate(0, 256, 15), None);
        // 1/256 has no convergent with denominator ≤ 15 within 1/512
        assert_eq!(extract_period_candidate(1, 256, 15), None);
        // near-peak value for N=21, x=2 (true period 6, q=1024)
        assert_eq!(extract_period_candidate(171, 1024, 21), Some(6));
    }

    #[test]
    fn extraction_error_bound_holds_exactly() {
        for q in [256u64, 1024] {
            for modulus in [15u64, 21] {
                for a in 1..q {
                    if let Some(r) = extract_period_candidate(a, q, modulus) {
                        assert!(r >= 1 && r <= modulus);
                        // recover the numerator d = round(a·r/q) and recheck the bound
                        let d = (a * r + q / 2) / q;
                        let lhs = (a as i128 * r as i128 - d as i128 * q as i128).unsigned_abs();
                        assert!(2 * lhs <= r as u128, "bound broken at a={a}, q={q}, r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn acceptance_reads_only_the_a_register() {
        let inst = ShorInstance::new(15, 7, 2).unwrap();
        // period 4 = 0b100: bit 2 set, bit 0 clear
        for i in 0..15 {
            assert!(shor_accepts(&inst, inst.pack(ShorConfig { a: 64, i })));
        }
        let bit0 = ShorInstance::new(15, 7, 0).unwrap();
        assert!(!shor_accepts(&bit0, bit0.pack(ShorConfig { a: 64, i: 0 })));
        // a' = 128 gives candidate 2, which fails 7² ≡ 4; multiple m=2 gives 4
        assert_eq!(verified_period_from(&inst, 128), Some(4));
        assert!(shor_accepts(&inst, inst.pack(ShorConfig { a: 128, i: 3 })));
        // a' = 0 never accepts
        assert!(!shor_accepts(&inst, 0));
    }

    #[test]
    fn brute_force_periods() {
        assert_eq!(brute_force_period(7, 15).unwrap(), 4);
        assert_eq!(brute_force_period(2, 15).unwrap(), 4);
        assert_eq!(brute_force_period(4, 15).unwrap(), 2);
        assert_eq!(brute_force_period(2, 21).unwrap(), 6);
        assert!(brute_force_period(6, 15).is_err());
        assert!(brute_force_period(2, 2_000_000).is_err());
    }

    #[test]
    fn factor_extraction() {
        assert_eq!(factor_from_period(7, 15, 4), Some((3, 5)));
        // 14 ≡ −1 mod 15: the half power lands on −1, no factors
        assert_eq!(factor_from_period(14, 15, 2), None);
        assert_eq!(factor_from_period(7, 15, 3), None); // odd period
        assert_eq!(factor_from_period(2, 21, 6), Some((7, 3)));
    }

    #[test]
    fn machine_validates_clean() {
        let inst = ShorInstance::new(15, 7, 2).unwrap();
        let spec = build_shor_machine(&inst).unwrap();
        assert!(spec.validate().is_empty());
        assert_eq!(spec.family().dimension(0), 3840);
    }

    #[test]
    fn oversized_instances_are_refused() {
        // q·N = 2^20·1021 > 2^24
        let inst = ShorInstance::new(1021, 5, 0).unwrap();
        let err = build_shor_machine(&inst).unwrap_err();
        assert!(err.is_refusal());
    }

    #[test]
    fn mod_pow_small_cases() {
        assert_eq!(mod_pow(7, 0, 15), 1);
        assert_eq!(mod_pow(7, 2, 15), 4);
        assert_eq!(mod_pow(7, 4, 15), 1);
        assert_eq!(mod_pow(2, 10, 1), 0);
        assert_eq!(mod_pow(u64::MAX - 1, 2, u64::MAX), 1);
    }
}
