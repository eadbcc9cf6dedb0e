//! Declarative 16-bit SPN model.
//!
//! Bit 15 is the most significant bit; nibble 0 is bits 15..12. A round is an
//! ordered list of layers and the cipher applies it `rounds` times.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::sbox::SBox4;

pub const BLOCK_BITS: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LayerSpec {
    /// S-box ids per nibble, nibble 0 first.
    Sub([String; 4]),
    /// Output bit `i` takes input bit `p[i]`.
    Perm([u8; 16]),
    RotL(u32),
    XorConst(u16),
    KeyXor(usize),
}

impl LayerSpec {
    pub fn is_linear(&self) -> bool {
        !matches!(self, LayerSpec::Sub(_))
    }
}

/// One 16-bit word per key slot.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct KeyAssignment(pub Vec<u16>);

impl KeyAssignment {
    pub fn zero(slots: usize) -> KeyAssignment {
        KeyAssignment(vec![0; slots])
    }

    pub fn words(&self) -> &[u16] {
        &self.0
    }
}

#[derive(Debug, Clone)]
enum Op {
    Sub { fwd: [[u8; 16]; 4], inv: [[u8; 16]; 4] },
    Perm { fwd: [u8; 16], inv: [u8; 16] },
    RotL(u32),
    Xor(u16),
    Key(usize),
}

#[derive(Debug, Clone)]
pub struct CipherDescription {
    name: String,
    sboxes: BTreeMap<String, SBox4>,
    template: Vec<LayerSpec>,
    rounds: usize,
    key_slots: usize,
    ops: Vec<Op>,
}

impl PartialEq for CipherDescription {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.sboxes == other.sboxes
            && self.template == other.template
            && self.rounds == other.rounds
    }
}

impl Eq for CipherDescription {}

fn is_bit_permutation(p: &[u8; 16]) -> bool {
    let mut seen = 0u32;
    for &b in p {
        if b > 15 {
            return false;
        }
        seen |= 1 << b;
    }
    seen == 0xFFFF
}

impl CipherDescription {
    /// Validates and compiles a description. Errors carry line 0; the parser
    /// reports real line numbers itself.
    pub fn new(
        name: impl Into<String>,
        sboxes: impl IntoIterator<Item = SBox4>,
        template: Vec<LayerSpec>,
        rounds: usize,
    ) -> std::result::Result<CipherDescription, ParseError> {
        let sboxes: BTreeMap<String, SBox4> = sboxes
            .into_iter()
            .map(|s| (s.id().to_string(), s))
            .collect();
        let mut slots = BTreeSet::new();
        let mut ops = Vec::with_capacity(template.len());
        for layer in &template {
            ops.push(compile(layer, &sboxes).map_err(|k| ParseError::new(0, k))?);
            if let LayerSpec::KeyXor(slot) = layer {
                slots.insert(*slot);
            }
        }
        let key_slots = slots.len();
        if slots.iter().copied().ne(0..key_slots) {
            return Err(ParseError::syntax(0, "key slots must be numbered 0..n-1 without gaps"));
        }
        Ok(CipherDescription {
            name: name.into(),
            sboxes,
            template,
            rounds,
            key_slots,
            ops,
        })
    }

    /// Zero rounds of an empty template.
    pub fn identity() -> CipherDescription {
        CipherDescription::new("identity", [], vec![], 0).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sboxes(&self) -> impl Iterator<Item = &SBox4> {
        self.sboxes.values()
    }

    pub fn sbox(&self, id: &str) -> Option<&SBox4> {
        self.sboxes.get(id)
    }

    pub fn template(&self) -> &[LayerSpec] {
        &self.template
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn key_slots(&self) -> usize {
        self.key_slots
    }

    pub fn zero_key(&self) -> KeyAssignment {
        KeyAssignment::zero(self.key_slots)
    }

    /// Same cipher with a different round count.
    pub fn with_rounds(&self, rounds: usize) -> CipherDescription {
        CipherDescription {
            rounds,
            ..self.clone()
        }
    }

    /// Total number of layers once the template is replicated.
    pub fn layer_count(&self) -> usize {
        self.template.len() * self.rounds
    }

    /// Layer `index` of the replicated sequence.
    pub fn layer(&self, index: usize) -> &LayerSpec {
        &self.template[index % self.template.len()]
    }

    fn check_key(&self, key: &KeyAssignment) -> Result<()> {
        if key.0.len() != self.key_slots {
            return Err(Error::KeyLength {
                expected: self.key_slots,
                got: key.0.len(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, key: &KeyAssignment, x: u16) -> Result<u16> {
        self.check_key(key)?;
        Ok(self.eval_unchecked(key.words(), x))
    }

    pub fn eval_inverse(&self, key: &KeyAssignment, y: u16) -> Result<u16> {
        self.check_key(key)?;
        let mut y = y;
        for _ in 0..self.rounds {
            for op in self.ops.iter().rev() {
                y = op.backward(y, key.words());
            }
        }
        Ok(y)
    }

    pub(crate) fn eval_unchecked(&self, key: &[u16], x: u16) -> u16 {
        let mut x = x;
        for _ in 0..self.rounds {
            x = self.round_unchecked(key, x);
        }
        x
    }

    fn round_unchecked(&self, key: &[u16], x: u16) -> u16 {
        self.ops.iter().fold(x, |x, op| op.forward(x, key))
    }

    /// The whole cipher as a lookup table indexed by plaintext.
    pub fn codebook(&self, key: &KeyAssignment) -> Result<Vec<u16>> {
        self.check_key(key)?;
        let round: Vec<u16> = (0..=u16::MAX)
            .map(|x| self.round_unchecked(key.words(), x))
            .collect();
        Ok((0..=u16::MAX)
            .map(|x| (0..self.rounds).fold(x, |y, _| round[y as usize]))
            .collect())
    }

    /// Image of a difference under layers `range` of the replicated sequence.
    /// Key and constant additions leave differences unchanged.
    pub fn propagate_linear(&self, range: Range<usize>, delta: u16) -> Result<u16> {
        let len = self.layer_count();
        if range.start > range.end || range.end > len {
            return Err(Error::LayerRange {
                start: range.start,
                end: range.end,
                len,
            });
        }
        let mut d = delta;
        for i in range.clone() {
            let op = &self.ops[i % self.ops.len()];
            if matches!(op, Op::Sub { .. }) {
                return Err(Error::NonLinearRange {
                    start: range.start,
                    end: range.end,
                    index: i,
                });
            }
            d = op.forward_difference(d);
        }
        Ok(d)
    }

    /// Propagates a difference through one template layer; `None` for
    /// substitution layers.
    pub(crate) fn template_difference(&self, index: usize, delta: u16) -> Option<u16> {
        match &self.ops[index] {
            Op::Sub { .. } => None,
            op => Some(op.forward_difference(delta)),
        }
    }

    /// The inverse cipher as a description: reversed template with each layer
    /// inverted. S-box `s` becomes `s_inv`.
    pub fn inverse(&self) -> CipherDescription {
        let sboxes: Vec<SBox4> = self.sboxes.values().map(SBox4::inverse).collect();
        let template = self
            .template
            .iter()
            .rev()
            .map(|layer| match layer {
                LayerSpec::Sub(ids) => LayerSpec::Sub(ids.clone().map(|id| format!("{id}_inv"))),
                LayerSpec::Perm(p) => {
                    let mut inv = [0u8; 16];
                    for (i, &src) in p.iter().enumerate() {
                        inv[src as usize] = i as u8;
                    }
                    LayerSpec::Perm(inv)
                }
                LayerSpec::RotL(r) => LayerSpec::RotL((16 - r) % 16),
                other => other.clone(),
            })
            .collect();
        CipherDescription::new(format!("{}_inv", self.name), sboxes, template, self.rounds)
            .expect("inverse of a valid description is valid")
    }
}

fn compile(layer: &LayerSpec, sboxes: &BTreeMap<String, SBox4>) -> std::result::Result<Op, ParseErrorKind> {
    Ok(match layer {
        LayerSpec::Sub(ids) => {
            let mut fwd = [[0u8; 16]; 4];
            let mut inv = [[0u8; 16]; 4];
            for (n, id) in ids.iter().enumerate() {
                let s = sboxes
                    .get(id)
                    .ok_or_else(|| ParseErrorKind::UndeclaredSbox(id.clone()))?;
                fwd[n] = *s.table();
                inv[n] = *s.inverse().table();
            }
            Op::Sub { fwd, inv }
        }
        LayerSpec::Perm(p) => {
            if !is_bit_permutation(p) {
                return Err(ParseErrorKind::PermNotPermutation);
            }
            let mut inv = [0u8; 16];
            for (i, &src) in p.iter().enumerate() {
                inv[src as usize] = i as u8;
            }
            Op::Perm { fwd: *p, inv }
        }
        LayerSpec::RotL(r) => {
            if *r > 15 {
                return Err(ParseErrorKind::RotationOutOfRange(*r));
            }
            Op::RotL(*r)
        }
        LayerSpec::XorConst(c) => Op::Xor(*c),
        LayerSpec::KeyXor(slot) => Op::Key(*slot),
    })
}

#[inline]
fn permute_bits(x: u16, p: &[u8; 16]) -> u16 {
    let mut out = 0u16;
    for (i, &src) in p.iter().enumerate() {
        out |= ((x >> src) & 1) << i;
    }
    out
}

#[inline]
fn substitute(x: u16, tables: &[[u8; 16]; 4]) -> u16 {
    let mut out = 0u16;
    for (n, t) in tables.iter().enumerate() {
        let shift = 12 - 4 * n;
        out |= (t[((x >> shift) & 0xF) as usize] as u16) << shift;
    }
    out
}

impl Op {
    #[inline]
    fn forward(&self, x: u16, key: &[u16]) -> u16 {
        match self {
            Op::Sub { fwd, .. } => substitute(x, fwd),
            Op::Perm { fwd, .. } => permute_bits(x, fwd),
            Op::RotL(r) => x.rotate_left(*r),
            Op::Xor(c) => x ^ c,
            Op::Key(slot) => x ^ key[*slot],
        }
    }

    #[inline]
    fn backward(&self, y: u16, key: &[u16]) -> u16 {
        match self {
            Op::Sub { inv, .. } => substitute(y, inv),
            Op::Perm { inv, .. } => permute_bits(y, inv),
            Op::RotL(r) => y.rotate_right(*r),
            Op::Xor(c) => y ^ c,
            Op::Key(slot) => y ^ key[*slot],
        }
    }

    #[inline]
    fn forward_difference(&self, d: u16) -> u16 {
        match self {
            Op::Perm { fwd, .. } => permute_bits(d, fwd),
            Op::RotL(r) => d.rotate_left(*r),
            Op::Xor(_) | Op::Key(_) => d,
            Op::Sub { .. } => unreachable!("substitution has no fixed difference image"),
        }
    }
}
