//! Independent reference implementations used as test oracles. Nothing here
//! goes through the codebook, the histogram scan, or the trail search.

#![allow(dead_code)]

use std::path::PathBuf;

use diffspn::{compute_ddt, parse_description, CipherDescription, LayerSpec};

pub const DESCRIPTIONS: [&str; 4] = [
    "separ-encblock-ref.cd",
    "separ-encblock-onesbox.cd",
    "toy-heys.cd",
    "identity.cd",
];

pub fn descriptions_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../descriptions")
}

pub fn load(name: &str) -> CipherDescription {
    let text = std::fs::read_to_string(descriptions_dir().join(name)).unwrap();
    parse_description(&text).unwrap()
}

// ---- hand-written Heys-style cipher ----

pub const HEYS_SBOX: [u16; 16] = [
    0xE, 0x4, 0xD, 0x1, 0x2, 0xF, 0xB, 0x8, 0x3, 0xA, 0x6, 0xC, 0x5, 0x9, 0x0, 0x7,
];

/// Bit `j` of nibble `i` to bit `i` of nibble `j`, nibbles and bits counted
/// from the most significant end.
pub fn heys_transpose(x: u16) -> u16 {
    let mut y = 0u16;
    for i in 0..4 {
        for j in 0..4 {
            let bit = (x >> (15 - (4 * i + j))) & 1;
            y |= bit << (15 - (4 * j + i));
        }
    }
    y
}

pub fn heys_round(x: u16, k: u16) -> u16 {
    let x = x ^ k;
    let mut s = 0u16;
    for n in 0..4 {
        let shift = 12 - 4 * n;
        s |= HEYS_SBOX[((x >> shift) & 0xF) as usize] << shift;
    }
    heys_transpose(s)
}

pub fn heys_encrypt(x: u16, k: u16, rounds: usize) -> u16 {
    (0..rounds).fold(x, |x, _| heys_round(x, k))
}

// ---- naive exhaustive distribution ----

/// `(max, argmax sorted by (a, b))` by the plain double loop over `a` and `x`.
pub fn naive_scan(f: impl Fn(u16) -> u16) -> (u32, Vec<(u16, u16)>) {
    let table: Vec<u16> = (0..=u16::MAX).map(f).collect();
    let mut hist = vec![0u32; 1 << 16];
    let mut best = 0;
    let mut arg = Vec::new();
    for a in 1..=u16::MAX {
        hist.iter_mut().for_each(|h| *h = 0);
        for x in 0..=u16::MAX {
            hist[(table[x as usize] ^ table[(x ^ a) as usize]) as usize] += 1;
        }
        for (b, &c) in hist.iter().enumerate() {
            if c > best {
                best = c;
                arg.clear();
            }
            if c == best {
                arg.push((a, b as u16));
            }
        }
    }
    (best, arg)
}

/// Every `(a, b, count)` with count at least `threshold`.
pub fn naive_threshold(f: impl Fn(u16) -> u16, threshold: u32) -> Vec<(u16, u16, u32)> {
    let table: Vec<u16> = (0..=u16::MAX).map(f).collect();
    let mut hist = vec![0u32; 1 << 16];
    let mut out = Vec::new();
    for a in 1..=u16::MAX {
        hist.iter_mut().for_each(|h| *h = 0);
        for x in 0..=u16::MAX {
            hist[(table[x as usize] ^ table[(x ^ a) as usize]) as usize] += 1;
        }
        for (b, &c) in hist.iter().enumerate() {
            if c >= threshold {
                out.push((a, b as u16, c));
            }
        }
    }
    out
}

// ---- unpruned trail enumeration ----

/// Per-round view for descriptions whose round holds exactly one
/// substitution layer: `pre` (layers before it), the S-box DDTs, and `post`.
pub struct RoundShape {
    pub pre: Vec<u16>,
    pub post: Vec<u16>,
    pub ddts: [diffspn::Ddt; 4],
}

/// Linear part of a layer list as a difference map, from the evaluation of
/// the layers alone: `L(d) = E(d) ^ E(0)`.
fn linear_table(desc: &CipherDescription, layers: &[LayerSpec]) -> Vec<u16> {
    // slot numbers only need to be contiguous; the zero key is used anyway
    let layers: Vec<LayerSpec> = layers
        .iter()
        .map(|l| match l {
            LayerSpec::KeyXor(_) => LayerSpec::KeyXor(0),
            l => l.clone(),
        })
        .collect();
    let part = CipherDescription::new("part", desc.sboxes().cloned(), layers, 1).unwrap();
    let k = part.zero_key();
    let zero = part.eval(&k, 0).unwrap();
    (0..=u16::MAX).map(|d| part.eval(&k, d).unwrap() ^ zero).collect()
}

pub fn round_shape(desc: &CipherDescription) -> RoundShape {
    let t = desc.template();
    let subs: Vec<usize> = (0..t.len()).filter(|&i| !t[i].is_linear()).collect();
    assert_eq!(subs.len(), 1, "oracle handles one substitution layer per round");
    let s = subs[0];
    let LayerSpec::Sub(ids) = &t[s] else { unreachable!() };
    RoundShape {
        pre: linear_table(desc, &t[..s]),
        post: linear_table(desc, &t[s + 1..]),
        ddts: [0, 1, 2, 3].map(|n| compute_ddt(desc.sbox(&ids[n]).unwrap())),
    }
}

impl RoundShape {
    /// `(output, product of the four nibble counts)` for every compatible
    /// S-layer output of input `d`.
    pub fn outputs(&self, d: u16) -> Vec<(u16, u64)> {
        let mut out = vec![(0u16, 1u64)];
        for n in 0..4 {
            let shift = 12 - 4 * n;
            let a = ((d >> shift) & 0xF) as u8;
            let mut next = Vec::new();
            for &(o, c) in &out {
                for b in 0..16u8 {
                    let k = self.ddts[n].get(a, b) as u64;
                    if k > 0 {
                        next.push((o | (b as u16) << shift, c * k));
                    }
                }
            }
            out = next;
        }
        out
    }
}

pub fn active(d: u16) -> u32 {
    (0..4).filter(|n| (d >> (4 * n)) & 0xF != 0).count() as u32
}

/// Layered dynamic program over round-boundary differences with full
/// branching at every S-box layer.
pub struct TrailOracle {
    pub rounds: usize,
    pub shape: RoundShape,
    /// `min_active[i][x]`: fewest active S-boxes for rounds `i..` from
    /// boundary difference `x`.
    pub min_active: Vec<Vec<u32>>,
    /// `best[i][x]`: largest product of S-layer counts for rounds `i..`
    /// (probability = value / 2^(16 (rounds - i))).
    pub best: Vec<Vec<u64>>,
}

impl TrailOracle {
    pub fn new(desc: &CipherDescription, rounds: usize) -> TrailOracle {
        assert!(rounds <= 3, "counts overflow u64 beyond three rounds");
        let shape = round_shape(desc);
        let mut min_active = vec![vec![0u32; 1 << 16]; rounds + 1];
        let mut best = vec![vec![0u64; 1 << 16]; rounds + 1];
        best[rounds] = vec![1; 1 << 16];
        for i in (0..rounds).rev() {
            for x in 0..=u16::MAX {
                let s = shape.pre[x as usize];
                let mut m = u32::MAX;
                let mut p = 0u64;
                for (o, c) in shape.outputs(s) {
                    let y = shape.post[o as usize] as usize;
                    m = m.min(min_active[i + 1][y]);
                    p = p.max(c * best[i + 1][y]);
                }
                min_active[i][x as usize] = active(s) + m;
                best[i][x as usize] = p;
            }
        }
        TrailOracle {
            rounds,
            shape,
            min_active,
            best,
        }
    }

    pub fn optimum_active(&self) -> u32 {
        (1..=u16::MAX).map(|x| self.min_active[0][x as usize]).min().unwrap()
    }

    pub fn optimum_best(&self) -> u64 {
        (1..=u16::MAX).map(|x| self.best[0][x as usize]).max().unwrap()
    }

    /// Round differences of the lexicographically smallest trail with the
    /// best probability.
    pub fn best_trail_diffs(&self) -> Vec<u16> {
        let target = self.optimum_best();
        let a = (1..=u16::MAX).find(|&x| self.best[0][x as usize] == target).unwrap();
        let mut diffs = vec![a];
        let mut x = a;
        for i in 0..self.rounds {
            let s = self.shape.pre[x as usize];
            let remaining = self.best[i][x as usize];
            x = self
                .shape
                .outputs(s)
                .into_iter()
                .filter(|&(o, c)| c * self.best[i + 1][self.shape.post[o as usize] as usize] == remaining)
                .map(|(o, _)| self.shape.post[o as usize])
                .min()
                .unwrap();
            diffs.push(x);
        }
        diffs
    }

    /// Sum over all trails from `a` to `b` of the count products, i.e. the
    /// trail-sum probability times 2^(16 rounds).
    pub fn trail_sum(&self, a: u16, b: u16) -> u128 {
        let mut w = vec![0u128; 1 << 16];
        w[a as usize] = 1;
        for _ in 0..self.rounds {
            let mut next = vec![0u128; 1 << 16];
            for x in 0..=u16::MAX {
                let v = w[x as usize];
                if v == 0 {
                    continue;
                }
                for (o, c) in self.shape.outputs(self.shape.pre[x as usize]) {
                    next[self.shape.post[o as usize] as usize] += v * c as u128;
                }
            }
            w = next;
        }
        w[b as usize]
    }
}

impl TrailOracle {
    /// Round differences of the lexicographically smallest trail with the
    /// fewest active S-boxes.
    pub fn min_active_trail_diffs(&self) -> Vec<u16> {
        let target = self.optimum_active();
        let a = (1..=u16::MAX).find(|&x| self.min_active[0][x as usize] == target).unwrap();
        let mut diffs = vec![a];
        let mut x = a;
        for i in 0..self.rounds {
            let s = self.shape.pre[x as usize];
            let remaining = self.min_active[i][x as usize] - active(s);
            x = self
                .shape
                .outputs(s)
                .into_iter()
                .map(|(o, _)| self.shape.post[o as usize])
                .filter(|&y| self.min_active[i + 1][y as usize] == remaining)
                .min()
                .unwrap();
            diffs.push(x);
        }
        diffs
    }
}

// ---- hand-written reference Enc-block round ----

const REF_SBOXES: [[u16; 16]; 4] = [
    [0x1, 0xF, 0xB, 0x2, 0x0, 0x3, 0x5, 0x8, 0x6, 0x9, 0xC, 0x7, 0xD, 0xA, 0xE, 0x4],
    [0x6, 0xA, 0xF, 0x4, 0xE, 0xD, 0x9, 0x2, 0x1, 0x7, 0xC, 0xB, 0x0, 0x3, 0x5, 0x8],
    [0xC, 0x2, 0x6, 0x1, 0x0, 0x3, 0x5, 0x8, 0x7, 0x9, 0xB, 0xE, 0xA, 0xD, 0xF, 0x4],
    [0xD, 0xB, 0x2, 0x7, 0x0, 0x3, 0x5, 0x8, 0x6, 0xC, 0xF, 0x1, 0xA, 0x4, 0x9, 0xE],
];

pub fn ref_encrypt(x: u16, k0: u16, k1: u16, rounds: usize) -> u16 {
    let mut x = x;
    for _ in 0..rounds {
        x ^= k0;
        let mut s = 0u16;
        for n in 0..4 {
            let shift = 12 - 4 * n;
            s |= REF_SBOXES[n][((x >> shift) & 0xF) as usize] << shift;
        }
        x = heys_transpose(s.rotate_left(7)) ^ k1;
    }
    x
}
