//! Exact block-level differential distributions over all 2^16 inputs.
//!
//! The input-difference axis is cut into fixed chunks that workers process
//! independently with their own histogram; chunk results are merged in chunk
//! order, so the output does not depend on the number of workers.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::cipher::{CipherDescription, KeyAssignment};
use crate::error::Result;
use crate::prob::Prob;

/// Input differences per work unit.
const CHUNK: u32 = 256;

/// Default lower bound for sparse table export (probability 2^-13).
pub const DEFAULT_FLOOR: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Characteristic {
    pub input_diff: u16,
    pub output_diff: u16,
    pub count: u32,
}

impl Characteristic {
    /// `count / 2^16`
    pub fn probability(&self) -> Prob {
        Prob::new(self.count as u128, 16)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffDistribution {
    pub max_count: u32,
    /// Every nonzero `a` and `b` reaching `max_count`, sorted by `(a, b)`.
    pub argmax: Vec<Characteristic>,
    /// Entries at or above the export floor, when requested.
    pub full_table: Option<BTreeMap<(u16, u16), u32>>,
}

/// Runs `f` on a dedicated pool of `jobs` workers; `0` uses the ambient pool.
pub fn with_workers<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    if jobs == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("failed to start worker pool")
        .install(f)
}

/// `#{x : E(x ^ a) ^ E(x) = b}` by direct enumeration.
pub fn diff_count(desc: &CipherDescription, key: &KeyAssignment, a: u16, b: u16) -> Result<u32> {
    let book = desc.codebook(key)?;
    Ok(count_in_codebook(&book, a, b))
}

pub(crate) fn count_in_codebook(book: &[u16], a: u16, b: u16) -> u32 {
    (0..=u16::MAX)
        .filter(|&x| book[(x ^ a) as usize] ^ book[x as usize] == b)
        .count() as u32
}

/// Pair counts per output difference; a row holds at most 2^15 pairs, so
/// `u16` suffices and keeps the table in half the cache.
struct Histogram {
    pairs: Box<[u16; 1 << 16]>,
}

impl Histogram {
    fn new() -> Self {
        Histogram {
            pairs: vec![0; 1 << 16].into_boxed_slice().try_into().unwrap(),
        }
    }

    /// Fills the output-difference histogram of row `a != 0`. Each unordered
    /// pair `{x, x ^ a}` is visited once.
    fn fill(&mut self, book: &[u16], a: u16) {
        debug_assert!(a != 0);
        // fixed-size views let every index below go unchecked
        let book: &[u16; 1 << 16] = book.try_into().expect("codebook has 2^16 entries");
        let pairs = &mut *self.pairs;
        let a = a as u32;
        let top = 31 - a.leading_zeros();
        let low = (1u32 << top) - 1;
        for i in 0..(1u32 << 15) {
            // insert a zero at bit `top` so that x < x ^ a
            let x = ((i & !low) << 1) | (i & low);
            let d = book[x as u16 as usize] ^ book[(x ^ a) as u16 as usize];
            pairs[d as usize] += 1;
        }
    }

    fn clear(&mut self) {
        self.pairs.fill(0);
    }

    /// Largest count (twice the pair count).
    fn max(&self) -> u32 {
        2 * self.pairs.iter().copied().max().unwrap_or(0) as u32
    }

    /// `(b, count)` for counts at least `threshold`, which must be nonzero.
    fn at_least(&self, threshold: u32) -> impl Iterator<Item = (u16, u32)> + '_ {
        debug_assert!(threshold > 0);
        // counts are even, so count >= t iff pairs >= ceil(t / 2)
        let min_pairs = threshold.div_ceil(2).min(1 << 15) as u16;
        let unreachable = threshold > 1 << 16;
        self.pairs
            .iter()
            .enumerate()
            .filter(move |&(_, &p)| !unreachable && p >= min_pairs)
            .map(|(b, &p)| (b as u16, 2 * p as u32))
    }
}

#[derive(Default)]
struct ChunkMax {
    max: u32,
    argmax: Vec<Characteristic>,
    sparse: Vec<Characteristic>,
}

fn chunk_ranges() -> Vec<(u32, u32)> {
    (0..(1u32 << 16) / CHUNK)
        .map(|c| ((c * CHUNK).max(1), (c + 1) * CHUNK))
        .collect()
}

/// Global maximum of `D(a, b)` over `a != 0` with its argmax list.
///
/// `rounds_override` replaces the description's round count; `floor`
/// additionally collects every entry with count at least `floor`.
pub fn scan_max(
    desc: &CipherDescription,
    key: &KeyAssignment,
    rounds_override: Option<usize>,
    floor: Option<u32>,
) -> Result<DiffDistribution> {
    let desc = match rounds_override {
        Some(r) => desc.with_rounds(r),
        None => desc.clone(),
    };
    let book = desc.codebook(key)?;

    let chunks: Vec<ChunkMax> = chunk_ranges()
        .into_par_iter()
        .map_init(Histogram::new, |hist, (lo, hi)| {
            let mut out = ChunkMax::default();
            for a in lo..hi {
                let a = a as u16;
                hist.fill(&book, a);
                let m = hist.max();
                if m > out.max {
                    out.max = m;
                    out.argmax.clear();
                }
                if m == out.max {
                    out.argmax.extend(hist.at_least(m).map(|(b, count)| Characteristic {
                        input_diff: a,
                        output_diff: b,
                        count,
                    }));
                }
                if let Some(f) = floor {
                    out.sparse.extend(hist.at_least(f.max(1)).map(|(b, count)| Characteristic {
                        input_diff: a,
                        output_diff: b,
                        count,
                    }));
                }
                hist.clear();
            }
            out
        })
        .collect();

    let max_count = chunks.iter().map(|c| c.max).max().unwrap_or(0);
    let argmax = chunks
        .iter()
        .filter(|c| c.max == max_count)
        .flat_map(|c| c.argmax.iter().copied())
        .collect();
    let full_table = floor.map(|_| {
        chunks
            .iter()
            .flat_map(|c| c.sparse.iter())
            .map(|c| ((c.input_diff, c.output_diff), c.count))
            .collect()
    });
    Ok(DiffDistribution {
        max_count,
        argmax,
        full_table,
    })
}

/// Every `(a, b)` with `a != 0` and count at least `threshold`, sorted by
/// `(a, b)`. Without a threshold, the argmax set of [`scan_max`].
pub fn top_characteristics(
    desc: &CipherDescription,
    key: &KeyAssignment,
    threshold: Option<u32>,
) -> Result<Vec<Characteristic>> {
    let Some(threshold) = threshold else {
        return Ok(scan_max(desc, key, None, None)?.argmax);
    };
    let threshold = threshold.max(1);
    let book = desc.codebook(key)?;
    let chunks: Vec<Vec<Characteristic>> = chunk_ranges()
        .into_par_iter()
        .map_init(Histogram::new, |hist, (lo, hi)| {
            let mut out = Vec::new();
            for a in lo..hi {
                let a = a as u16;
                hist.fill(&book, a);
                out.extend(hist.at_least(threshold).map(|(b, count)| Characteristic {
                    input_diff: a,
                    output_diff: b,
                    count,
                }));
                hist.clear();
            }
            out
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// `D(a, b)` for every `b` of one row, as `(b, count)` with nonzero count.
pub fn row(desc: &CipherDescription, key: &KeyAssignment, a: u16) -> Result<Vec<(u16, u32)>> {
    let book = desc.codebook(key)?;
    if a == 0 {
        return Ok(vec![(0, 1 << 16)]);
    }
    let mut hist = Histogram::new();
    hist.fill(&book, a);
    Ok(hist.at_least(1).collect())
}
