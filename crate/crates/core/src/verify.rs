//! Direct re-encryption checks of single differentials.
//!
//! These deliberately avoid the codebook used by [`crate::exhaustive`]: every
//! count is obtained by encrypting both members of each pair.

use rayon::prelude::*;
use serde::Serialize;

use crate::cipher::{CipherDescription, KeyAssignment};
use crate::error::{Error, Result};

/// The splitmix64 generator (Steele, Lea and Flood), bit-exact so keyed
/// results can be reproduced from `(seed, keys)` in any language.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// `keys` key assignments: one 64-bit draw per key word, low 16 bits kept.
pub fn draw_keys(slots: usize, keys: usize, seed: u64) -> Vec<KeyAssignment> {
    let mut rng = SplitMix64::new(seed);
    (0..keys)
        .map(|_| KeyAssignment((0..slots).map(|_| rng.next_u64() as u16).collect()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerificationMode {
    ExhaustiveFixedKey,
    KeyedAverage,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationResult {
    pub input_diff: u16,
    pub output_diff: u16,
    pub mode: VerificationMode,
    /// One exhaustive count per key, in key order.
    pub counts: Vec<u32>,
    pub mean: f64,
    /// Standard error of the mean; 0 for a single key.
    pub stderr: f64,
    pub keys_tested: usize,
    pub seed: u64,
}

impl VerificationResult {
    fn from_counts(a: u16, b: u16, mode: VerificationMode, counts: Vec<u32>, seed: u64) -> Self {
        let n = counts.len() as f64;
        let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / n;
        let stderr = if counts.len() > 1 {
            let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        VerificationResult {
            input_diff: a,
            output_diff: b,
            mode,
            keys_tested: counts.len(),
            counts,
            mean,
            stderr,
            seed,
        }
    }

    /// The count for exhaustive results (first key otherwise).
    pub fn count(&self) -> u32 {
        self.counts[0]
    }
}

fn count_pairs(desc: &CipherDescription, key: &KeyAssignment, a: u16, b: u16) -> Result<u32> {
    let mut n = 0;
    for x in 0..=u16::MAX {
        if desc.eval(key, x ^ a)? ^ desc.eval(key, x)? == b {
            n += 1;
        }
    }
    Ok(n)
}

/// Counts the plaintexts `x` with `E(x ^ a) ^ E(x) = b` under one key.
pub fn verify_exhaustive(
    desc: &CipherDescription,
    key: &KeyAssignment,
    a: u16,
    b: u16,
) -> Result<VerificationResult> {
    if a == 0 {
        return Err(Error::ZeroDifference);
    }
    let count = count_pairs(desc, key, a, b)?;
    Ok(VerificationResult::from_counts(
        a,
        b,
        VerificationMode::ExhaustiveFixedKey,
        vec![count],
        0,
    ))
}

/// Exhaustive counts averaged over `keys` keys drawn from splitmix64.
pub fn verify_keyed(
    desc: &CipherDescription,
    a: u16,
    b: u16,
    keys: usize,
    seed: u64,
) -> Result<VerificationResult> {
    if a == 0 {
        return Err(Error::ZeroDifference);
    }
    if keys == 0 {
        return Err(Error::Invalid("at least one key is required".into()));
    }
    let counts = draw_keys(desc.key_slots(), keys, seed)
        .par_iter()
        .map(|k| count_pairs(desc, k, a, b))
        .collect::<Result<Vec<u32>>>()?;
    Ok(VerificationResult::from_counts(
        a,
        b,
        VerificationMode::KeyedAverage,
        counts,
        seed,
    ))
}
