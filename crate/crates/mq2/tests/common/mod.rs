//! Reference oracles for the integration suites.
//!
//! Everything here recomputes expected values along routes the library does
//! not use: dense full-vector pipelines instead of sparse implicit
//! application, direct summation instead of Gram accumulation, local modular
//! arithmetic instead of the library helpers. When a test compares the
//! engine against these functions it is comparing two genuinely different
//! computations.

#![allow(dead_code)] // each integration test binary uses its own slice of this

use mq2::shor::ShorInstance;
use mq2::Amplitude;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `x^a mod N` by repeated multiplication, kept separate from the library's
/// square-and-multiply on purpose.
pub fn slow_mod_pow(x: u64, a: u64, n: u64) -> u64 {
    let mut value = 1u64 % n;
    for _ in 0..a {
        value = value * x % n;
    }
    value
}

/// Dense matrix · dense vector, rows indexed by destination.
pub fn dense_matvec(matrix: &[Vec<Amplitude>], v: &[Amplitude]) -> Vec<Amplitude> {
    matrix
        .iter()
        .map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum())
        .collect()
}

/// The dense basis vector at `(a = 0, i = 0)` for a period-finding instance.
pub fn shor_initial_dense(inst: &ShorInstance) -> Vec<Amplitude> {
    let mut v = vec![Amplitude::new(0.0, 0.0); inst.dimension() as usize];
    v[0] = Amplitude::new(1.0, 0.0);
    v
}

/// The uniform superposition over `a` with the `i` register pinned: the state
/// the textbook pipeline starts from.
pub fn uniform_a_with_i(inst: &ShorInstance, i: u64) -> Vec<Amplitude> {
    let q = inst.q();
    let mut v = vec![Amplitude::new(0.0, 0.0); inst.dimension() as usize];
    let amp = Amplitude::new(1.0 / (q as f64).sqrt(), 0.0);
    for a in 0..q {
        v[(i * q + a) as usize] = amp;
    }
    v
}

/// Applies the modular block densely: `(a, i) → (a, (x^a − i) mod N)` as a
/// straight permutation of the full vector.
pub fn apply_mod_dense(inst: &ShorInstance, v: &[Amplitude]) -> Vec<Amplitude> {
    let q = inst.q();
    let n = inst.modulus();
    let mut out = vec![Amplitude::new(0.0, 0.0); v.len()];
    for a in 0..q {
        let pow = slow_mod_pow(inst.base(), a, n);
        for i in 0..n {
            let target = (pow + n - i) % n;
            out[(target * q + a) as usize] += v[(i * q + a) as usize];
        }
    }
    out
}

/// Applies the Fourier block densely: for every fixed `i`, a full O(q²)
/// summation `out[a'] = (1/√q) Σ_a e^{2πi·aa'/q} in[a]`.
pub fn apply_dft_dense(inst: &ShorInstance, v: &[Amplitude]) -> Vec<Amplitude> {
    let q = inst.q();
    let n = inst.modulus();
    let scale = 1.0 / (q as f64).sqrt();
    let mut out = vec![Amplitude::new(0.0, 0.0); v.len()];
    for i in 0..n {
        for a_to in 0..q {
            let mut acc = Amplitude::new(0.0, 0.0);
            for a_from in 0..q {
                let input = v[(i * q + a_from) as usize];
                if input.re == 0.0 && input.im == 0.0 {
                    continue;
                }
                let angle =
                    std::f64::consts::TAU * ((a_from * a_to) % q) as f64 / (q as f64);
                acc += input * Amplitude::new(angle.cos(), angle.sin());
            }
            out[(i * q + a_to) as usize] = acc * scale;
        }
    }
    out
}

/// One application of the combined block, densely: `DFT · MOD`.
pub fn apply_t_dense(inst: &ShorInstance, v: &[Amplitude]) -> Vec<Amplitude> {
    apply_dft_dense(inst, &apply_mod_dense(inst, v))
}

/// Measurement distribution over `a'` of a dense state: squared norms summed
/// over the `i` register.
pub fn a_marginal_dense(inst: &ShorInstance, v: &[Amplitude]) -> Vec<f64> {
    let q = inst.q();
    let n = inst.modulus();
    let mut marginal = vec![0.0; q as usize];
    for i in 0..n {
        for a in 0..q {
            marginal[a as usize] += v[(i * q + a) as usize].norm_sqr();
        }
    }
    marginal
}

/// Total squared norm over the configurations a predicate accepts.
pub fn accepting_mass_dense<F>(v: &[Amplitude], accepts: F) -> f64
where
    F: Fn(u64) -> bool,
{
    v.iter()
        .enumerate()
        .filter(|(idx, _)| accepts(*idx as u64))
        .map(|(_, amp)| amp.norm_sqr())
        .sum()
}

/// A uniformly random truth table on `n` variables.
pub fn random_truth_table(n: u32, rng: &mut ChaCha8Rng) -> Vec<bool> {
    (0..1u64 << n).map(|_| rng.gen_bool(0.5)).collect()
}

/// A random balanced truth table: exactly half the entries are 1.
pub fn random_balanced_table(n: u32, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let size = 1usize << n;
    let mut table = vec![false; size];
    table[..size / 2].fill(true);
    table.shuffle(rng);
    table
}
