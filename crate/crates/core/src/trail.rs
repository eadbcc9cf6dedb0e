//! Differential trail search over concrete 16-bit differences.
//!
//! Linear layers map a difference to a single difference, so only the S-box
//! layers branch. Searches are Matsui-style branch-and-bound: the optimum
//! for the last `k` substitution layers is computed first for `k = 1, 2, ...`
//! and used to prune longer prefixes.
//!
//! A search runs in two passes. The value pass finds the optimal active count
//! or probability, in parallel over the starting difference with a shared
//! incumbent that only moves on strict improvement. The witness pass then
//! walks outputs in lexicographic order of the recorded differences and stops
//! at the first trail reaching the optimum, which makes the reported trail
//! independent of scheduling.

use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::Mutex;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::cipher::{CipherDescription, LayerSpec};
use crate::error::{Error, Result};
use crate::prob::{ratio_pow, Prob};
use crate::sbox::{compute_ddt, Ddt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    MinActive,
    BestProb,
}

/// One substitution layer of a trail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SboxStep {
    pub round: usize,
    pub input: u16,
    pub output: u16,
    /// Per nibble, nibble 0 first; 1 for inactive nibbles.
    pub nibble_probs: [Prob; 4],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trail {
    /// Difference before round 1 and after each round.
    pub round_diffs: Vec<u16>,
    pub steps: Vec<SboxStep>,
    pub active_count: u32,
    pub probability: Prob,
}

impl Trail {
    pub fn input_diff(&self) -> u16 {
        self.round_diffs[0]
    }

    pub fn output_diff(&self) -> u16 {
        *self.round_diffs.last().unwrap()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub rounds: usize,
    pub min_active: u32,
    pub best_trail_prob: Prob,
    pub theorem_lower_bound: Option<u32>,
}

#[inline]
fn nibble(d: u16, n: usize) -> u8 {
    ((d >> (12 - 4 * n)) & 0xF) as u8
}

#[inline]
fn active_nibbles(d: u16) -> u32 {
    (0..4).filter(|&n| nibble(d, n) != 0).count() as u32
}

/// A GF(2)-linear map on 16-bit differences, tabulated per byte.
#[derive(Clone)]
struct LinearMap {
    lo: [u16; 256],
    hi: [u16; 256],
}

impl LinearMap {
    fn from_template(desc: &CipherDescription, indices: &[usize]) -> LinearMap {
        let image = |bit: u32| {
            indices.iter().fold(1u16 << bit, |d, &i| {
                desc.template_difference(i, d).expect("linear segment")
            })
        };
        let basis: Vec<u16> = (0..16).map(image).collect();
        let mut lo = [0u16; 256];
        let mut hi = [0u16; 256];
        for v in 0..256usize {
            for bit in 0..8 {
                if v >> bit & 1 == 1 {
                    lo[v] ^= basis[bit];
                    hi[v] ^= basis[bit + 8];
                }
            }
        }
        LinearMap { lo, hi }
    }

    #[inline]
    fn apply(&self, d: u16) -> u16 {
        self.lo[(d & 0xFF) as usize] ^ self.hi[(d >> 8) as usize]
    }
}

/// The cipher viewed as a chain of substitution stages.
struct Model {
    /// Cipher input to the first stage input.
    prefix: LinearMap,
    /// Per phase (substitution layer position within the round): stage
    /// output to next stage input.
    next: Vec<LinearMap>,
    /// Per phase: stage output to the recorded difference (next stage input
    /// within a round, round output for the last phase).
    record: Vec<LinearMap>,
    /// Per phase and nibble: index into `ddts`.
    sboxes: Vec<[usize; 4]>,
    ddts: Vec<Ddt>,
    /// Per S-box and input nibble: compatible outputs by decreasing count.
    transitions: Vec<Vec<Vec<(u8, u32)>>>,
    phases: usize,
    stages: usize,
}

impl Model {
    fn new(desc: &CipherDescription, rounds: usize) -> Model {
        let template = desc.template();
        let subs: Vec<usize> = (0..template.len())
            .filter(|&i| !template[i].is_linear())
            .collect();
        let phases = subs.len();
        let len = template.len();

        let mut ids: Vec<String> = Vec::new();
        let mut sboxes = Vec::new();
        for &i in &subs {
            let LayerSpec::Sub(names) = &template[i] else { unreachable!() };
            let mut slot = [0usize; 4];
            for (n, name) in names.iter().enumerate() {
                slot[n] = match ids.iter().position(|x| x == name) {
                    Some(p) => p,
                    None => {
                        ids.push(name.clone());
                        ids.len() - 1
                    }
                };
            }
            sboxes.push(slot);
        }
        let ddts: Vec<Ddt> = ids
            .iter()
            .map(|id| compute_ddt(desc.sbox(id).expect("validated")))
            .collect();
        let transitions = ddts
            .iter()
            .map(|ddt| (0..16u8).map(|a| ddt.transitions(a)).collect())
            .collect();

        let first = subs.first().copied().unwrap_or(len);
        let prefix = LinearMap::from_template(desc, &(0..first).collect::<Vec<_>>());
        let mut next = Vec::new();
        let mut record = Vec::new();
        for q in 0..phases {
            let after = subs[q] + 1;
            if q + 1 < phases {
                let m = LinearMap::from_template(desc, &(after..subs[q + 1]).collect::<Vec<_>>());
                next.push(m.clone());
                record.push(m);
            } else {
                let tail: Vec<usize> = (after..len).collect();
                let wrap: Vec<usize> = tail.iter().copied().chain(0..first).collect();
                next.push(LinearMap::from_template(desc, &wrap));
                record.push(LinearMap::from_template(desc, &tail));
            }
        }
        Model {
            prefix,
            next,
            record,
            sboxes,
            ddts,
            transitions,
            phases,
            stages: phases * rounds,
        }
    }

    #[inline]
    fn lists(&self, stage: usize, d: u16) -> [&[(u8, u32)]; 4] {
        let ids = &self.sboxes[stage % self.phases];
        [0, 1, 2, 3].map(|n| self.transitions[ids[n]][nibble(d, n) as usize].as_slice())
    }

    #[inline]
    fn next_input(&self, stage: usize, out: u16) -> u16 {
        self.next[stage % self.phases].apply(out)
    }

    #[inline]
    fn recorded(&self, stage: usize, out: u16) -> u16 {
        self.record[stage % self.phases].apply(out)
    }

    /// Highest-probability output of a stage (first listed transition).
    fn greedy_output(&self, stage: usize, d: u16) -> (u16, Prob) {
        let lists = self.lists(stage, d);
        let mut out = 0u16;
        let mut count = 1u128;
        for (n, l) in lists.iter().enumerate() {
            out |= (l[0].0 as u16) << (12 - 4 * n);
            count *= l[0].1 as u128;
        }
        (out, Prob::new(count, 16))
    }

    fn build_trail(&self, desc: &CipherDescription, rounds: usize, a: u16, outputs: &[u16]) -> Trail {
        let mut round_diffs = vec![a];
        let mut steps = Vec::with_capacity(outputs.len());
        let mut d = self.prefix.apply(a);
        let mut probability = Prob::ONE;
        let mut active = 0;
        for (k, &o) in outputs.iter().enumerate() {
            let ids = &self.sboxes[k % self.phases];
            let nibble_probs = [0, 1, 2, 3].map(|n| {
                Prob::from_nibble_count(self.ddts[ids[n]].get(nibble(d, n), nibble(o, n)))
            });
            probability = nibble_probs.iter().fold(probability, |p, &q| p.mul(q));
            active += active_nibbles(d);
            steps.push(SboxStep {
                round: k / self.phases,
                input: d,
                output: o,
                nibble_probs,
            });
            if k % self.phases == self.phases - 1 {
                round_diffs.push(self.recorded(k, o));
            }
            d = self.next_input(k, o);
        }
        if self.phases == 0 {
            // purely linear rounds
            let mut x = a;
            for r in 0..rounds {
                let start = r * desc.template().len();
                x = desc
                    .propagate_linear(start..start + desc.template().len(), x)
                    .expect("no substitution layers");
                round_diffs.push(x);
            }
        }
        Trail {
            round_diffs,
            steps,
            active_count: active,
            probability,
        }
    }
}

/// Calls `f(output, count_product)` for every compatible stage output.
#[inline]
fn for_each_output(lists: &[&[(u8, u32)]; 4], mut f: impl FnMut(u16, u32)) {
    for &(o0, c0) in lists[0] {
        for &(o1, c1) in lists[1] {
            for &(o2, c2) in lists[2] {
                for &(o3, c3) in lists[3] {
                    let o = (o0 as u16) << 12 | (o1 as u16) << 8 | (o2 as u16) << 4 | o3 as u16;
                    f(o, c0 * c1 * c2 * c3);
                }
            }
        }
    }
}

/// Like [`for_each_output`] but skips outputs whose probability times
/// `scale` cannot exceed (or, with `inclusive`, reach) `floor`. Lists are
/// sorted by decreasing count, so each nibble loop stops at the first
/// failing candidate.
fn for_each_output_above(
    lists: &[&[(u8, u32)]; 4],
    scale: Prob,
    floor: Prob,
    inclusive: bool,
    mut f: impl FnMut(u16, u32),
) {
    let mut tail_max = [1u32; 5];
    for n in (0..4).rev() {
        tail_max[n] = tail_max[n + 1] * lists[n][0].1;
    }
    let passes = |partial: u32, n: usize| {
        let p = scale.mul(Prob::new((partial * tail_max[n]) as u128, 16));
        if inclusive {
            p >= floor
        } else {
            p > floor
        }
    };
    for &(o0, c0) in lists[0] {
        if !passes(c0, 1) {
            break;
        }
        for &(o1, c1) in lists[1] {
            let p1 = c0 * c1;
            if !passes(p1, 2) {
                break;
            }
            for &(o2, c2) in lists[2] {
                let p2 = p1 * c2;
                if !passes(p2, 3) {
                    break;
                }
                for &(o3, c3) in lists[3] {
                    let p3 = p2 * c3;
                    if !passes(p3, 4) {
                        break;
                    }
                    let o = (o0 as u16) << 12 | (o1 as u16) << 8 | (o2 as u16) << 4 | o3 as u16;
                    f(o, p3);
                }
            }
        }
    }
}

/// Shared state of one search over a fixed number of stages.
struct Search<'a> {
    model: &'a Model,
    /// `active_bound[j]`: minimum active S-boxes over stages `j..`, any
    /// nonzero input. `active_bound[stages] = 0`.
    active_bound: Vec<u32>,
    /// `prob_bound[j]`: best probability over stages `j..`.
    prob_bound: Vec<Prob>,
}

impl<'a> Search<'a> {
    fn new(model: &'a Model, objective: Objective) -> Search<'a> {
        let m = model.stages;
        let mut s = Search {
            model,
            active_bound: vec![0; m + 1],
            prob_bound: vec![Prob::ONE; m + 1],
        };
        for j in (0..m).rev() {
            match objective {
                Objective::MinActive => s.active_bound[j] = s.min_active_from(j),
                Objective::BestProb => s.prob_bound[j] = s.best_prob_from(j),
            }
        }
        s
    }

    fn starts() -> impl IndexedParallelIterator<Item = u16> {
        (1..=u16::MAX).into_par_iter()
    }

    // ---- minimum active S-boxes ----

    fn min_active_from(&self, j: usize) -> u32 {
        let m = self.model.stages;
        // greedy incumbent
        let greedy = (1..=u16::MAX)
            .map(|d| {
                let mut d = d;
                let mut total = 0;
                for k in j..m {
                    total += active_nibbles(d);
                    let (o, _) = self.model.greedy_output(k, d);
                    d = self.model.next_input(k, o);
                }
                total
            })
            .min()
            .unwrap();
        let shared = AtomicU32::new(greedy);
        Self::starts().for_each(|d| {
            let mut best = shared.load(AtomicOrdering::Relaxed);
            self.active_dfs(j, d, 0, &mut best);
            shared.fetch_min(best, AtomicOrdering::Relaxed);
        });
        shared.into_inner()
    }

    fn active_dfs(&self, k: usize, d: u16, cur: u32, best: &mut u32) {
        let m = self.model.stages;
        let cost = cur + active_nibbles(d);
        if cost + self.active_bound[k + 1] >= *best {
            return;
        }
        if k + 1 == m {
            *best = cost;
            return;
        }
        let lists = self.model.lists(k, d);
        for_each_output(&lists, |o, _| {
            let nd = self.model.next_input(k, o);
            if cost + active_nibbles(nd) + self.active_bound[k + 2] < *best {
                self.active_dfs(k + 1, nd, cost, best);
            }
        });
    }

    /// Lexicographically first trail with exactly `target` active S-boxes;
    /// fills `outputs`. With `collect`, gathers every such trail instead.
    fn active_witness(
        &self,
        k: usize,
        d: u16,
        cur: u32,
        target: u32,
        outputs: &mut Vec<u16>,
        collect: &mut Option<Collector>,
    ) -> bool {
        let m = self.model.stages;
        let cost = cur + active_nibbles(d);
        if cost + self.active_bound[k + 1] > target {
            return false;
        }
        let lists = self.model.lists(k, d);
        let mut cands = Vec::new();
        for_each_output(&lists, |o, _| cands.push((self.model.recorded(k, o), o)));
        cands.sort_unstable();
        if k + 1 == m {
            if cost != target {
                return false;
            }
            for &(_, o) in &cands {
                outputs.push(o);
                match collect {
                    None => return true,
                    Some(c) => {
                        let full = c.push(outputs);
                        outputs.pop();
                        if full {
                            return true;
                        }
                    }
                }
            }
            return false;
        }
        for (_, o) in cands {
            outputs.push(o);
            let nd = self.model.next_input(k, o);
            if self.active_witness(k + 1, nd, cost, target, outputs, collect) {
                return true;
            }
            outputs.pop();
        }
        false
    }

    /// Witness walk from stage 0 input `d` towards the known optimum.
    fn witness(
        &self,
        k: usize,
        d: u16,
        objective: Objective,
        outputs: &mut Vec<u16>,
        collect: &mut Option<Collector>,
    ) -> bool {
        match objective {
            Objective::MinActive => self.active_witness(k, d, 0, self.active_bound[0], outputs, collect),
            Objective::BestProb => {
                self.prob_witness(k, d, Prob::ONE, self.prob_bound[0], outputs, collect)
            }
        }
    }

    // ---- best probability ----

    fn best_prob_from(&self, j: usize) -> Prob {
        let m = self.model.stages;
        let greedy = (1..=u16::MAX)
            .map(|d| {
                let mut d = d;
                let mut p = Prob::ONE;
                for k in j..m {
                    let (o, q) = self.model.greedy_output(k, d);
                    p = p.mul(q);
                    d = self.model.next_input(k, o);
                }
                p
            })
            .max()
            .unwrap();
        let shared = Mutex::new(greedy);
        Self::starts().for_each(|d| {
            let mut best = *shared.lock().unwrap();
            let before = best;
            self.prob_dfs(j, d, Prob::ONE, &mut best);
            if best > before {
                let mut s = shared.lock().unwrap();
                if best > *s {
                    *s = best;
                }
            }
        });
        shared.into_inner().unwrap()
    }

    fn prob_dfs(&self, k: usize, d: u16, cur: Prob, best: &mut Prob) {
        let m = self.model.stages;
        let rest = self.prob_bound[k + 1];
        let lists = self.model.lists(k, d);
        // `best` changes inside the loop, so the bound is re-checked per leaf
        let scale = cur.mul(rest);
        for_each_output_above(&lists, scale, *best, false, |o, c| {
            let p = cur.mul(Prob::new(c as u128, 16));
            if p.mul(rest) <= *best {
                return;
            }
            if k + 1 == m {
                *best = p;
            } else {
                self.prob_dfs(k + 1, self.model.next_input(k, o), p, best);
            }
        });
    }

    fn prob_witness(
        &self,
        k: usize,
        d: u16,
        cur: Prob,
        target: Prob,
        outputs: &mut Vec<u16>,
        collect: &mut Option<Collector>,
    ) -> bool {
        let m = self.model.stages;
        let rest = self.prob_bound[k + 1];
        let lists = self.model.lists(k, d);
        let mut cands = Vec::new();
        for_each_output_above(&lists, cur.mul(rest), target, true, |o, c| {
            cands.push((self.model.recorded(k, o), o, c));
        });
        cands.sort_unstable();
        for (_, o, c) in cands {
            let p = cur.mul(Prob::new(c as u128, 16));
            if p.mul(rest) < target {
                continue;
            }
            outputs.push(o);
            let hit = if k + 1 == m {
                p == target
                    && match collect {
                        Some(col) => col.push(outputs),
                        None => true,
                    }
            } else {
                self.prob_witness(k + 1, self.model.next_input(k, o), p, target, outputs, collect)
            };
            if hit {
                return true;
            }
            outputs.pop();
        }
        false
    }
}

/// Accumulates optimal trails (as output sequences) up to a limit; `push`
/// returns true once the limit is reached, which stops the walk.
struct Collector {
    limit: usize,
    found: Vec<Vec<u16>>,
}

impl Collector {
    fn push(&mut self, outputs: &[u16]) -> bool {
        self.found.push(outputs.to_vec());
        self.found.len() >= self.limit
    }
}

/// Result of a trail search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub rounds: usize,
    pub objective: Objective,
    pub min_active: Option<u32>,
    /// The optimal trail, lexicographically first on `round_diffs`.
    pub trail: Trail,
    /// All optimal trails in lexicographic order, when requested.
    pub all_optimal: Option<Vec<Trail>>,
    /// Whether `all_optimal` hit its limit.
    pub truncated: bool,
}

fn run(
    desc: &CipherDescription,
    rounds: usize,
    objective: Objective,
    enumerate_limit: Option<usize>,
) -> Result<SearchResult> {
    if rounds == 0 {
        return Err(Error::NoRounds);
    }
    let model = Model::new(desc, rounds);
    if model.stages == 0 {
        let trail = model.build_trail(desc, rounds, 1, &[]);
        return Ok(SearchResult {
            rounds,
            objective,
            min_active: Some(0),
            all_optimal: enumerate_limit.map(|_| vec![trail.clone()]),
            trail,
            truncated: false,
        });
    }
    let search = Search::new(&model, objective);

    let mut witness = None;
    let mut outputs = Vec::new();
    for a in 1..=u16::MAX {
        if search.witness(0, model.prefix.apply(a), objective, &mut outputs, &mut None) {
            witness = Some((a, outputs));
            break;
        }
        outputs.clear();
    }
    let (wa, wo) = witness.expect("value pass found an optimum, so a witness exists");
    let trail = model.build_trail(desc, rounds, wa, &wo);
    let (all_optimal, truncated) = match enumerate_limit {
        Some(limit) => {
            let (all, truncated) = enumerate_all(&model, &search, desc, rounds, objective, limit.max(1));
            (Some(all), truncated)
        }
        None => (None, false),
    };
    let min_active = match objective {
        Objective::MinActive => Some(search.active_bound[0]),
        Objective::BestProb => None,
    };
    Ok(SearchResult {
        rounds,
        objective,
        min_active,
        trail,
        all_optimal,
        truncated,
    })
}

fn enumerate_all(
    model: &Model,
    search: &Search,
    desc: &CipherDescription,
    rounds: usize,
    objective: Objective,
    limit: usize,
) -> (Vec<Trail>, bool) {
    let mut trails = Vec::new();
    for a in 1..=u16::MAX {
        let mut collect = Some(Collector {
            limit: limit - trails.len(),
            found: Vec::new(),
        });
        let full = search.witness(0, model.prefix.apply(a), objective, &mut Vec::new(), &mut collect);
        for o in collect.unwrap().found {
            trails.push(model.build_trail(desc, rounds, a, &o));
        }
        if full {
            return (trails, true);
        }
    }
    (trails, false)
}

/// Exact minimum number of active S-boxes over all trails of `rounds`
/// rounds with nonzero input difference.
pub fn min_active_sboxes(desc: &CipherDescription, rounds: usize) -> Result<u32> {
    if rounds == 0 {
        return Err(Error::NoRounds);
    }
    let model = Model::new(desc, rounds);
    if model.stages == 0 {
        return Ok(0);
    }
    Ok(Search::new(&model, Objective::MinActive).active_bound[0])
}

/// The most probable trail, ties broken by the smallest `round_diffs`.
pub fn best_trail(desc: &CipherDescription, rounds: usize) -> Result<Trail> {
    Ok(run(desc, rounds, Objective::BestProb, None)?.trail)
}

/// Full search for the trails subcommand. With `enumerate_limit`, also lists
/// up to that many optimal trails.
pub fn search_trails(
    desc: &CipherDescription,
    rounds: usize,
    objective: Objective,
    enumerate_limit: Option<usize>,
) -> Result<SearchResult> {
    run(desc, rounds, objective, enumerate_limit)
}

/// Sum of the probabilities of every trail from `a` to `b` over `rounds`
/// rounds, i.e. the differential probability of a Markov cipher with
/// independent uniform round keys. Exact; limited to 7 rounds.
pub fn trail_sum_probability(desc: &CipherDescription, rounds: usize, a: u16, b: u16) -> Result<Prob> {
    if rounds == 0 {
        return Err(Error::NoRounds);
    }
    let model = Model::new(desc, rounds);
    let m = model.stages;
    if m == 0 {
        let out = model.build_trail(desc, rounds, a, &[]).output_diff();
        return Ok(if out == b { Prob::ONE } else { Prob::ZERO });
    }
    if m > 7 {
        return Err(Error::Invalid(format!(
            "trail sums are limited to 7 substitution layers, got {m}"
        )));
    }
    // weights over stage inputs, scaled by 2^(16 k) after k stages
    let mut weights = vec![0u128; 1 << 16];
    weights[model.prefix.apply(a) as usize] = 1;
    for k in 0..m {
        let last = k + 1 == m;
        let mut next = vec![0u128; 1 << 16];
        for (d, &w) in weights.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let lists = model.lists(k, d as u16);
            for_each_output(&lists, |o, c| {
                let to = if last { model.recorded(k, o) } else { model.next_input(k, o) };
                next[to as usize] += w * c as u128;
            });
        }
        weights = next;
    }
    Ok(Prob::new(weights[b as usize], 16 * m as u32))
}

/// Case decompositions of the four-round active S-box bound `7 + i`: three
/// active S-boxes in the first round, four in the last, and the middle two
/// rounds sharing `i` with at least one each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremCase {
    pub i: u32,
    pub decompositions: Vec<[u32; 4]>,
    pub total: u32,
}

pub fn theorem_lower_bound(i: u32) -> Result<TheoremCase> {
    if !(3..=5).contains(&i) {
        return Err(Error::TheoremCase(i));
    }
    let decompositions: Vec<[u32; 4]> = (1..i)
        .rev()
        .map(|second| [3, second, i - second, 4])
        .filter(|d| d[1] <= 4 && d[2] <= 4)
        .collect();
    let total = 3 + i + 4;
    debug_assert!(decompositions.iter().all(|d| d.iter().sum::<u32>() == total));
    Ok(TheoremCase {
        i,
        decompositions,
        total,
    })
}

/// `max_sbox_prob ^ (min_active_per_unit * units)`.
pub fn cipher_bound(min_active_per_unit: u32, units: u32, max_sbox_prob: &BigRational) -> BigRational {
    ratio_pow(max_sbox_prob, min_active_per_unit as u64 * units as u64)
}

/// Minimum active count and best trail probability for one round count.
/// Four-round reports carry the theorem's smallest case total.
pub fn bound_report(desc: &CipherDescription, rounds: usize) -> Result<BoundReport> {
    let min_active = min_active_sboxes(desc, rounds)?;
    let best = best_trail(desc, rounds)?;
    Ok(BoundReport {
        rounds,
        min_active,
        best_trail_prob: best.probability,
        theorem_lower_bound: (rounds == 4).then(|| theorem_lower_bound(3).unwrap().total),
    })
}

/// Largest S-box transition probability among the S-boxes the description
/// uses; 1 when it has none.
pub fn max_sbox_prob(desc: &CipherDescription) -> Prob {
    desc.template()
        .iter()
        .filter_map(|l| match l {
            LayerSpec::Sub(ids) => Some(ids.clone()),
            _ => None,
        })
        .flatten()
        .map(|id| crate::sbox::max_diff_prob(&compute_ddt(desc.sbox(&id).unwrap())))
        .max()
        .unwrap_or(Prob::ONE)
}
