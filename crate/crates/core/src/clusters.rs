//! Minimal clusters, the overlap-profile automaton that enumerates them, the
//! generating-function identities built on top, and the exact strong Wilf
//! equivalence test.
//!
//! A minimal `m`-cluster of `u` is fixed by its mark offsets
//! `1 = i_1 < ... < i_m` with consecutive gaps in `1..|u|`: its letters are
//! `c_n = max_j u_{n - i_j + 1}`. The automaton state after the newest mark is
//! the column profile under that mark; appending a mark `d` columns later
//! finalizes `d` columns and refreshes the window.

use std::collections::{HashMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::polyring::TriPoly;
use crate::words::{eta, generate_by_sum, is_rearrangement, Word};

/// Largest `y_cap` accepted by [`brute_force_a`]; it visits `2^(y_cap)` words.
pub const BRUTE_FORCE_MAX_CAP: u32 = 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkedCluster {
    pub word: Word,
    /// 1-based start positions of the marked occurrences.
    pub offsets: Vec<usize>,
}

impl MarkedCluster {
    pub fn marks(&self) -> usize {
        self.offsets.len()
    }
}

fn check_offsets(u: &Word, offsets: &[usize]) -> Result<()> {
    if u.is_empty() {
        return Err(Error::InvalidOffsets("pattern is empty".into()));
    }
    match offsets.first() {
        None => return Err(Error::InvalidOffsets("no marks".into())),
        Some(&first) if first != 1 => {
            return Err(Error::InvalidOffsets(format!(
                "first offset is {first}, not 1"
            )))
        }
        _ => {}
    }
    for pair in offsets.windows(2) {
        let gap = pair[1] as i64 - pair[0] as i64;
        if gap < 1 || gap as usize >= u.len() {
            return Err(Error::InvalidOffsets(format!(
                "gap {gap} between marks {} and {} not in 1..{}",
                pair[0],
                pair[1],
                u.len()
            )));
        }
    }
    Ok(())
}

/// The unique minimal cluster of `u` with marks at `offsets`.
pub fn minimal_cluster(u: &Word, offsets: &[usize]) -> Result<MarkedCluster> {
    check_offsets(u, offsets)?;
    let len = offsets[offsets.len() - 1] + u.len() - 1;
    let mut letters = vec![0u32; len];
    for &start in offsets {
        for (t, &l) in u.letters().iter().enumerate() {
            let slot = &mut letters[start - 1 + t];
            *slot = (*slot).max(l);
        }
    }
    Ok(MarkedCluster {
        word: Word::from_vec_unchecked(letters),
        offsets: offsets.to_vec(),
    })
}

/// Coefficient of `z^m` in the minimal-cluster series, by visiting every one
/// of the `(|u|-1)^(m-1)` offset vectors.
pub fn m_level_enum(u: &Word, m: usize, y_cap: u32) -> TriPoly {
    assert!(m >= 1 && !u.is_empty());
    let mut out = TriPoly::zero(y_cap);
    let max_gap = u.len() - 1;
    if m > 1 && max_gap == 0 {
        return out;
    }
    let mut gaps = vec![1usize; m - 1];
    loop {
        let mut offsets = Vec::with_capacity(m);
        offsets.push(1);
        for g in &gaps {
            offsets.push(offsets[offsets.len() - 1] + g);
        }
        let c = minimal_cluster(u, &offsets).expect("offsets valid by construction");
        let sum = c.word.weight();
        if sum <= u64::from(y_cap) {
            out = &out + &TriPoly::monomial(1, c.word.len() as u32, sum as u32, m as u32, y_cap);
        }
        // odometer over {1..max_gap}^(m-1)
        let Some(i) = gaps.iter().rposition(|&g| g < max_gap) else {
            break;
        };
        gaps[i] += 1;
        for g in &mut gaps[i + 1..] {
            *g = 1;
        }
    }
    out
}

/// Column heights under the newest marked occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct OverlapProfile(pub Vec<u32>);

impl OverlapProfile {
    /// Profile after placing a new mark `d` columns to the right.
    fn advance(&self, u: &Word, d: usize) -> OverlapProfile {
        let p = &self.0;
        OverlapProfile(
            u.letters()
                .iter()
                .enumerate()
                .map(|(t, &ut)| p.get(t + d).copied().unwrap_or(0).max(ut))
                .collect(),
        )
    }

    fn window_sum(&self) -> u64 {
        self.0.iter().map(|&h| u64::from(h)).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub offset: usize,
    pub target: usize,
    pub dlength: u32,
    pub dsum: u32,
}

/// Deterministic transfer system over overlap profiles. State 0 is the
/// initial profile `u`; `transitions[s][d - 1]` is the move by offset `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterAutomaton {
    pub pattern: Word,
    pub states: Vec<OverlapProfile>,
    pub initial: usize,
    pub transitions: Vec<Vec<Transition>>,
}

/// Explores every profile reachable from `u`. A one-letter pattern has no
/// overlaps, so its automaton is a single state without transitions.
pub fn build_automaton(u: &Word) -> ClusterAutomaton {
    assert!(!u.is_empty(), "pattern must be nonempty");
    let n = u.len();
    let start = OverlapProfile(u.letters().to_vec());
    let mut index: HashMap<OverlapProfile, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut transitions: Vec<Vec<Transition>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let mut out = Vec::with_capacity(n - 1);
        for d in 1..n {
            let p = &states[s];
            let next = p.advance(u, d);
            let retained: u64 = p.0[d..].iter().map(|&h| u64::from(h)).sum();
            let dsum = (next.window_sum() - retained) as u32;
            let target = match index.get(&next) {
                Some(&t) => t,
                None => {
                    let t = states.len();
                    index.insert(next.clone(), t);
                    states.push(next);
                    queue.push_back(t);
                    t
                }
            };
            out.push(Transition {
                offset: d,
                target,
                dlength: d as u32,
                dsum,
            });
        }
        if transitions.len() <= s {
            transitions.resize(s + 1, Vec::new());
        }
        transitions[s] = out;
    }
    transitions.resize(states.len(), Vec::new());
    ClusterAutomaton {
        pattern: u.clone(),
        states,
        initial: 0,
        transitions,
    }
}

impl ClusterAutomaton {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn to_json(&self) -> Value {
        let transitions: Vec<Value> = self
            .transitions
            .iter()
            .enumerate()
            .flat_map(|(s, ts)| {
                ts.iter().map(move |t| {
                    json!({"from": s, "offset": t.offset, "to": t.target,
                           "dlength": t.dlength, "dsum": t.dsum})
                })
            })
            .collect();
        json!({
            "pattern": self.pattern,
            "initial": self.initial,
            "states": self.states,
            "transitions": transitions,
        })
    }

    /// Merges bisimilar states: same `dsum` for every offset and targets in the
    /// same block. Bisimilar states generate the same series, so the quotient
    /// yields the same cluster levels with (usually far) fewer states.
    pub fn reduce(&self) -> ReducedAutomaton {
        let n = self.pattern.len();
        let count = self.states.len();
        let mut block = vec![0usize; count];
        let mut blocks = 1;
        loop {
            let mut sig_index: HashMap<(usize, Vec<(u32, usize)>), usize> = HashMap::new();
            let mut next = vec![0usize; count];
            for s in 0..count {
                let sig: Vec<(u32, usize)> = self.transitions[s]
                    .iter()
                    .map(|t| (t.dsum, block[t.target]))
                    .collect();
                let len = sig_index.len();
                next[s] = *sig_index.entry((block[s], sig)).or_insert(len);
            }
            let new_blocks = sig_index.len();
            block = next;
            if new_blocks == blocks {
                break;
            }
            blocks = new_blocks;
        }
        let mut moves = vec![(0usize, 0u32); blocks * (n - 1)];
        for s in 0..count {
            for t in &self.transitions[s] {
                moves[block[s] * (n - 1) + t.offset - 1] = (block[t.target], t.dsum);
            }
        }
        ReducedAutomaton {
            pattern_len: n,
            initial_sum: self.pattern.weight() as u32,
            states: blocks,
            initial: block[self.initial],
            moves,
        }
    }
}

/// `coef` z^m levels by dynamic programming over automaton states, returning
/// levels `1..=max_m` (index `m - 1`), each already multiplied by `z^m`.
pub fn m_levels_dp(a: &ClusterAutomaton, max_m: usize, y_cap: u32) -> Vec<TriPoly> {
    let n = a.pattern.len() as u32;
    let s0 = a.pattern.weight();
    let mut frontier: Vec<HashMap<(u32, u32), BigInt>> = vec![HashMap::new(); a.state_count()];
    if s0 <= u64::from(y_cap) {
        frontier[a.initial].insert((n, s0 as u32), BigInt::from(1u8));
    }
    let mut out = Vec::with_capacity(max_m);
    for m in 1..=max_m {
        let mut level = TriPoly::zero(y_cap);
        for grid in &frontier {
            for (&(x, y), c) in grid {
                level.add_term(crate::polyring::Monomial::new(x, y, m as u32), c.clone());
            }
        }
        out.push(level);
        if m == max_m {
            break;
        }
        let mut next: Vec<HashMap<(u32, u32), BigInt>> = vec![HashMap::new(); a.state_count()];
        for (s, grid) in frontier.iter().enumerate() {
            for t in &a.transitions[s] {
                for (&(x, y), c) in grid {
                    let y2 = y + t.dsum;
                    if y2 <= y_cap {
                        *next[t.target].entry((x + t.dlength, y2)).or_default() += c;
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

/// Coefficient of `z^m` in the minimal-cluster series via the automaton.
pub fn m_level_dp(a: &ClusterAutomaton, m: usize, y_cap: u32) -> TriPoly {
    assert!(m >= 1);
    m_levels_dp(a, m, y_cap).pop().unwrap()
}

/// Quotient automaton used by the equivalence test: `moves[s * (n-1) + d - 1]`
/// is `(target, dsum)` for offset `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedAutomaton {
    pub pattern_len: usize,
    pub initial_sum: u32,
    pub states: usize,
    pub initial: usize,
    pub moves: Vec<(usize, u32)>,
}

/// One cluster level as sorted `(length, sum, count)` triples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Level(pub Vec<(u32, u32, BigUint)>);

impl Level {
    pub fn to_poly(&self, m: usize, y_cap: u32) -> TriPoly {
        TriPoly::from_terms(
            self.0
                .iter()
                .map(|(x, y, c)| (*x, *y, m as u32, BigInt::from(c.clone()))),
            y_cap,
        )
    }
}

/// Number of 64-bit limbs that can hold `(n-1)^(levels-1)`, the total number
/// of offset vectors at the deepest level and so a bound on every count.
fn limbs_needed(n: usize, levels: usize) -> usize {
    if n <= 2 || levels <= 1 {
        return 1;
    }
    let bits = ((levels - 1) as f64 * ((n - 1) as f64).log2()).ceil() as usize + 2;
    bits.div_ceil(64).max(1)
}

#[inline]
fn add_limbs(dst: &mut [u64], src: &[u64]) {
    let mut carry = false;
    for (d, s) in dst.iter_mut().zip(src) {
        let (v, c1) = d.overflowing_add(*s);
        let (v, c2) = v.overflowing_add(carry as u64);
        *d = v;
        carry = c1 || c2;
    }
    debug_assert!(!carry, "limb overflow");
}

fn limbs_to_biguint(limbs: &[u64]) -> BigUint {
    let digits: Vec<u32> = limbs
        .iter()
        .flat_map(|&l| [l as u32, (l >> 32) as u32])
        .collect();
    BigUint::new(digits)
}

/// Dense per-state grid over a `(length, sum)` box, `k` limbs per cell.
struct Grid {
    cells: Vec<u64>,
    live: bool,
}

impl ReducedAutomaton {
    /// Exact cluster levels `1..=count`, with no truncation.
    pub fn levels(&self, count: usize) -> Vec<Level> {
        let n = self.pattern_len;
        let dmax = n.saturating_sub(1);
        let k = limbs_needed(n, count);
        let (min_ds, max_ds) = self
            .moves
            .iter()
            .fold((u32::MAX, 0), |(lo, hi), &(_, ds)| (lo.min(ds), hi.max(ds)));
        let (mut len_lo, mut len_hi) = (n as u32, n as u32);
        let (mut sum_lo, mut sum_hi) = (self.initial_sum, self.initial_sum);
        let mut grids: Vec<Grid> = (0..self.states)
            .map(|_| Grid {
                cells: Vec::new(),
                live: false,
            })
            .collect();
        grids[self.initial] = Grid {
            cells: {
                let mut v = vec![0u64; k];
                v[0] = 1;
                v
            },
            live: true,
        };
        let mut out = Vec::with_capacity(count);
        for m in 1..=count {
            let width = (sum_hi - sum_lo + 1) as usize;
            let rows = (len_hi - len_lo + 1) as usize;
            // level m = sum over states
            let mut total = vec![0u64; rows * width * k];
            for g in grids.iter().filter(|g| g.live) {
                for (dst, src) in total.chunks_exact_mut(k).zip(g.cells.chunks_exact(k)) {
                    add_limbs(dst, src);
                }
            }
            let mut terms = Vec::new();
            for r in 0..rows {
                for c in 0..width {
                    let cell = &total[(r * width + c) * k..][..k];
                    if cell.iter().any(|&v| v != 0) {
                        terms.push((len_lo + r as u32, sum_lo + c as u32, limbs_to_biguint(cell)));
                    }
                }
            }
            terms.sort_by_key(|t| (t.1, t.0));
            out.push(Level(terms));
            if m == count || dmax == 0 {
                break;
            }
            let (nlen_lo, nlen_hi) = (len_lo + 1, len_hi + dmax as u32);
            let (nsum_lo, nsum_hi) = (sum_lo + min_ds, sum_hi + max_ds);
            let nwidth = (nsum_hi - nsum_lo + 1) as usize;
            let nrows = (nlen_hi - nlen_lo + 1) as usize;
            let mut next: Vec<Grid> = (0..self.states)
                .map(|_| Grid {
                    cells: Vec::new(),
                    live: false,
                })
                .collect();
            for (s, g) in grids.iter().enumerate().filter(|(_, g)| g.live) {
                for d in 1..=dmax {
                    let (t, ds) = self.moves[s * dmax + d - 1];
                    let tgt = &mut next[t];
                    if !tgt.live {
                        tgt.cells = vec![0u64; nrows * nwidth * k];
                        tgt.live = true;
                    }
                    let row_off = (len_lo + d as u32 - nlen_lo) as usize;
                    let col_off = (sum_lo + ds - nsum_lo) as usize;
                    for r in 0..rows {
                        let src = &g.cells[r * width * k..(r + 1) * width * k];
                        let base = ((r + row_off) * nwidth + col_off) * k;
                        let dst = &mut tgt.cells[base..base + width * k];
                        if k == 1 {
                            for (a, b) in dst.iter_mut().zip(src) {
                                *a += *b;
                            }
                        } else {
                            for (a, b) in dst.chunks_exact_mut(k).zip(src.chunks_exact(k)) {
                                add_limbs(a, b);
                            }
                        }
                    }
                }
            }
            grids = next;
            (len_lo, len_hi, sum_lo, sum_hi) = (nlen_lo, nlen_hi, nsum_lo, nsum_hi);
        }
        // one-letter patterns have no clusters beyond the first level
        while out.len() < count {
            out.push(Level(Vec::new()));
        }
        out
    }
}

/// First point at which two level sequences disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub m: usize,
    /// `[length, sum, marks]` exponents of the differing monomial.
    pub monomial: [u32; 3],
    pub coef_u: String,
    pub coef_v: String,
}

/// How a strong Wilf verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Cluster levels compared up to the recurrence bound, or until a witness.
    Levels,
    /// Identical marks give identical cluster sums (possibly after reversing one word).
    ClusterSums,
    /// Not rearrangements of each other.
    Rearrangement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweCertificate {
    pub equivalent: bool,
    pub levels_compared: usize,
    pub witness: Option<Witness>,
    pub method: Method,
}

/// Compares two level lists; `None` if they agree.
pub fn first_difference(a: &[Level], b: &[Level]) -> Option<Witness> {
    for (i, (la, lb)) in a.iter().zip(b).enumerate() {
        if la == lb {
            continue;
        }
        let m = i + 1;
        let lookup = |l: &Level, key: (u32, u32)| {
            l.0.iter()
                .find(|t| (t.0, t.1) == key)
                .map(|t| t.2.clone())
                .unwrap_or_default()
        };
        let mut keys: Vec<(u32, u32)> = la.0.iter().chain(&lb.0).map(|t| (t.0, t.1)).collect();
        keys.sort_by_key(|&(x, y)| (y, x));
        keys.dedup();
        for key in keys {
            let (ca, cb) = (lookup(la, key), lookup(lb, key));
            if ca != cb {
                return Some(Witness {
                    m,
                    monomial: [key.0, key.1, m as u32],
                    coef_u: ca.to_string(),
                    coef_v: cb.to_string(),
                });
            }
        }
    }
    None
}

/// Number of levels that decides equality of two cluster series whose
/// reduced automata have `su` and `sv` states.
///
/// Each level sequence is `init * T^(m-1) * 1` for a transfer matrix `T`, so it
/// satisfies the linear recurrence given by the characteristic polynomial of
/// `T`. The difference of the two satisfies one of order `su + sv`; if its
/// first `su + sv` terms vanish, it vanishes identically.
pub fn decision_bound(su: usize, sv: usize) -> usize {
    su + sv
}

/// Walks the product of two reduced automata and checks that every offset
/// sequence yields the same `dsum` in both, i.e. that the minimal clusters of
/// `u` and `v` with identical marks always have identical sums. This is a
/// sufficient condition for `M_u = M_v` (same length and marks, same sum).
pub fn same_cluster_sums(ru: &ReducedAutomaton, rv: &ReducedAutomaton) -> bool {
    if ru.pattern_len != rv.pattern_len || ru.initial_sum != rv.initial_sum {
        return false;
    }
    let dmax = ru.pattern_len - 1;
    let mut seen = std::collections::HashSet::from([(ru.initial, rv.initial)]);
    let mut stack = vec![(ru.initial, rv.initial)];
    while let Some((a, b)) = stack.pop() {
        for d in 0..dmax {
            let (ta, da) = ru.moves[a * dmax + d];
            let (tb, db) = rv.moves[b * dmax + d];
            if da != db {
                return false;
            }
            if seen.insert((ta, tb)) {
                stack.push((ta, tb));
            }
        }
    }
    true
}

/// Cheap candidate key for bulk classification: the exact first four levels.
pub fn signature(u: &Word) -> Vec<Level> {
    build_automaton(u).reduce().levels(4)
}

/// Levels compared before committing to the full recurrence bound; almost
/// every inequivalent pair differs this early.
const PROBE_LEVELS: usize = 8;

/// Exact decision of `M_u = M_v`.
///
/// Words that are not rearrangements of each other are never strongly Wilf
/// equivalent; a short level comparison still runs to look for a witness.
/// Equivalence is certified by [`same_cluster_sums`] when it applies (directly
/// or against the reverse of `v`), and otherwise by comparing cluster levels
/// up to [`decision_bound`].
pub fn strong_wilf_equivalent(u: &Word, v: &Word) -> SweCertificate {
    let ru = build_automaton(u).reduce();
    let rv = build_automaton(v).reduce();
    if u.len() != v.len() || u.weight() != v.weight() {
        return levels_verdict(&ru, &rv, 1);
    }
    if !is_rearrangement(u, v) {
        let mut c = levels_verdict(
            &ru,
            &rv,
            PROBE_LEVELS.min(decision_bound(ru.states, rv.states)),
        );
        c.equivalent = false;
        c.method = Method::Rearrangement;
        return c;
    }
    let probe = levels_verdict(
        &ru,
        &rv,
        PROBE_LEVELS.min(decision_bound(ru.states, rv.states)),
    );
    if !probe.equivalent {
        return probe;
    }
    if same_cluster_sums(&ru, &rv)
        || same_cluster_sums(&ru, &build_automaton(&v.reversed()).reduce())
    {
        return SweCertificate {
            equivalent: true,
            levels_compared: probe.levels_compared,
            witness: None,
            method: Method::ClusterSums,
        };
    }
    levels_verdict(&ru, &rv, decision_bound(ru.states, rv.states))
}

/// The level route alone: rearrangement test, then levels up to the bound.
pub fn strong_wilf_by_levels(u: &Word, v: &Word) -> SweCertificate {
    let ru = build_automaton(u).reduce();
    let rv = build_automaton(v).reduce();
    let mut c = levels_verdict(&ru, &rv, decision_bound(ru.states, rv.states));
    if !is_rearrangement(u, v) {
        c.equivalent = false;
        c.method = Method::Rearrangement;
    }
    c
}

fn levels_verdict(ru: &ReducedAutomaton, rv: &ReducedAutomaton, count: usize) -> SweCertificate {
    let witness = first_difference(&ru.levels(count), &rv.levels(count));
    SweCertificate {
        equivalent: witness.is_none(),
        levels_compared: witness.as_ref().map_or(count, |w| w.m),
        witness,
        method: Method::Levels,
    }
}

/// Minimal-cluster series `M_u` truncated at `y_cap`, marks up to `z_cap`.
pub fn series_m(u: &Word, y_cap: u32, z_cap: usize) -> TriPoly {
    let a = build_automaton(u);
    m_levels_dp(&a, z_cap.max(1), y_cap)
        .iter()
        .take(z_cap)
        .fold(TriPoly::zero(y_cap), |acc, l| &acc + l)
}

/// Cluster series `C_u(x, y, z) = M_u(x / (1 - y), y, z)`.
pub fn series_c(u: &Word, y_cap: u32, z_cap: usize) -> TriPoly {
    series_m(u, y_cap, z_cap).geom_substitute_x()
}

/// `A_u = 1 / (1 - xy/(1-y) - C_u(x, y, z - 1))`.
pub fn series_a(u: &Word, y_cap: u32, z_cap: usize) -> Result<TriPoly> {
    let c = series_c(u, y_cap, z_cap).substitute_z_shift(-1)?;
    // xy / (1 - y): one free letter
    let letter = TriPoly::from_terms((1..=y_cap).map(|b| (1, b, 0, 1)), y_cap);
    let denom = TriPoly::one(y_cap).try_sub(&letter)?.try_sub(&c)?;
    denom.reciprocal()
}

/// `A_u` truncated at `y_cap` by summing `x^|w| y^||w|| z^eta(u, w)` over every
/// word of sum at most `y_cap`, the empty word included.
pub fn brute_force_a(u: &Word, y_cap: u32) -> Result<TriPoly> {
    if y_cap > BRUTE_FORCE_MAX_CAP {
        return Err(Error::OutOfRange(format!(
            "brute force cap {y_cap} exceeds {BRUTE_FORCE_MAX_CAP}"
        )));
    }
    let mut counts: HashMap<(u32, u32, u32), u64> = HashMap::new();
    counts.insert((0, 0, 0), 1);
    for s in 1..=y_cap {
        for w in generate_by_sum(s)? {
            *counts
                .entry((w.len() as u32, s, eta(u, &w) as u32))
                .or_default() += 1;
        }
    }
    Ok(TriPoly::from_terms(
        counts
            .into_iter()
            .map(|((a, b, c), n)| (a, b, c, BigInt::from(n))),
        y_cap,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn minimal_cluster_examples() {
        let c = minimal_cluster(&w("3122"), &[1, 3, 6]).unwrap();
        assert_eq!(c.word, w("313223122"));
        assert_eq!((c.word.len(), c.word.weight()), (9, 19));
        assert_eq!(minimal_cluster(&w("3122"), &[1]).unwrap().word, w("3122"));
        let c = minimal_cluster(&w("252432122"), &[1, 3, 6, 10]).unwrap();
        assert_eq!(
            c.word.letters(),
            &[2, 5, 2, 5, 3, 4, 5, 2, 4, 3, 5, 2, 4, 3, 2, 1, 2, 2]
        );
        assert_eq!(c.word.weight(), 56);
    }

    #[test]
    fn offsets_rejected() {
        let u = w("3122");
        for bad in [&[][..], &[2, 3], &[1, 1], &[1, 5], &[1, 3, 2]] {
            assert!(
                matches!(minimal_cluster(&u, bad), Err(Error::InvalidOffsets(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            m_level_enum(&w("3122"), 1, 30),
            TriPoly::monomial(1, 4, 8, 1, 30)
        );
        assert_eq!(
            m_level_enum(&w("3122"), 2, 30),
            TriPoly::from_terms([(5, 12, 2, 1), (6, 13, 2, 1), (7, 14, 2, 1)], 30)
        );
        // offsets (1,2,3) cover four columns
        assert_eq!(
            m_level_enum(&w("11"), 3, 10),
            TriPoly::monomial(1, 4, 4, 3, 10)
        );
        assert!(m_level_enum(&w("5"), 2, 30).is_zero());
    }

    #[test]
    fn automaton_examples() {
        let a = build_automaton(&w("11"));
        assert_eq!(a.state_count(), 1);
        assert_eq!(
            a.transitions[0],
            vec![Transition {
                offset: 1,
                target: 0,
                dlength: 1,
                dsum: 1
            }]
        );

        let a = build_automaton(&w("21"));
        assert_eq!(a.states, vec![OverlapProfile(vec![2, 1])]);
        assert_eq!(a.transitions[0][0].dsum, 2);

        let a = build_automaton(&w("3122"));
        let t = a.transitions[a.initial][1];
        assert_eq!(a.states[t.target], OverlapProfile(vec![3, 2, 2, 2]));
        assert!(a.state_count() <= 1 << 3);

        let a = build_automaton(&w("7"));
        assert_eq!(a.state_count(), 1);
        assert!(a.transitions[0].is_empty());
    }

    #[test]
    fn dp_examples() {
        let a = build_automaton(&w("3122"));
        assert_eq!(m_level_dp(&a, 1, 30), TriPoly::monomial(1, 4, 8, 1, 30));
        assert_eq!(
            m_level_dp(&a, 2, 30),
            TriPoly::from_terms([(5, 12, 2, 1), (6, 13, 2, 1), (7, 14, 2, 1)], 30)
        );
        assert_eq!(
            m_level_dp(&build_automaton(&w("11")), 5, 10),
            TriPoly::monomial(1, 6, 6, 5, 10)
        );
    }

    #[test]
    fn reduced_levels_match_bigint_dp() {
        for s in ["3122", "252432122", "11", "7", "2213", "234156"] {
            let u = w(s);
            let a = build_automaton(&u);
            let r = a.reduce();
            assert!(r.states <= a.state_count());
            let cap = 6 * u.weight() as u32;
            let fast = r.levels(6);
            let slow = m_levels_dp(&a, 6, cap);
            for m in 1..=6 {
                assert_eq!(fast[m - 1].to_poly(m, cap), slow[m - 1], "{s} m={m}");
            }
        }
    }

    #[test]
    fn multi_limb_counts() {
        // 1^20 has 19 offset choices per level: level 17 needs more than 64 bits
        let u = Word::new(vec![1; 20]).unwrap();
        let r = build_automaton(&u).reduce();
        let levels = r.levels(17);
        let total: BigUint = levels[16].0.iter().map(|t| t.2.clone()).sum();
        assert_eq!(total, BigUint::from(19u32).pow(16));
        assert!(total > BigUint::from(u64::MAX));
    }

    #[test]
    fn swe_examples() {
        assert!(strong_wilf_equivalent(&w("3122"), &w("2213")).equivalent);
        let c = strong_wilf_equivalent(&w("132"), &w("312"));
        assert!(!c.equivalent);
        assert!(c.witness.is_some());
        // same length and sum, different letters
        let c = strong_wilf_equivalent(&w("13"), &w("22"));
        assert!(!c.equivalent);
        assert_eq!(c.method, Method::Rearrangement);
        let c = strong_wilf_equivalent(&w("1324"), &w("2314"));
        assert!(!c.equivalent);
        assert_eq!(c.method, Method::Levels);
        assert!(c.witness.is_some());
        let c = strong_wilf_equivalent(&w("12"), &w("111"));
        assert!(!c.equivalent);
        assert_eq!(c.witness.unwrap().m, 1);
    }

    #[test]
    fn both_routes_agree_on_small_pairs() {
        for (a, b) in [
            ("3122", "2213"),
            ("2132", "2312"),
            ("21", "12"),
            ("1324", "2314"),
            ("1324", "1423"),
            ("234156", "256143"),
        ] {
            let (u, v) = (w(a), w(b));
            let fast = strong_wilf_equivalent(&u, &v);
            let slow = strong_wilf_by_levels(&u, &v);
            assert_eq!(fast.equivalent, slow.equivalent, "{a} {b}");
            if slow.equivalent {
                assert_eq!(
                    slow.levels_compared,
                    decision_bound(
                        build_automaton(&u).reduce().states,
                        build_automaton(&v).reduce().states,
                    )
                );
            }
        }
    }

    #[test]
    fn cluster_sum_certificate() {
        let r = |s: &str| build_automaton(&w(s)).reduce();
        // a rigid shift keeps every cluster sum
        assert!(same_cluster_sums(&r("2233213452"), &r("2223312345")));
        assert!(!same_cluster_sums(&r("132"), &r("312")));
        assert!(!same_cluster_sums(&r("3122"), &r("2213")));
        assert!(same_cluster_sums(&r("3122"), &r("3122")));
    }

    #[test]
    fn certificate_json_schema() {
        let c = strong_wilf_equivalent(&w("12"), &w("3"));
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["equivalent"], false);
        assert_eq!(v["witness"]["monomial"], json!([1, 3, 1]));
        assert_eq!(v["witness"]["coef_u"], "0");
        assert_eq!(v["witness"]["coef_v"], "1");
        let v = serde_json::to_value(strong_wilf_equivalent(&w("12"), &w("21"))).unwrap();
        assert_eq!(v["witness"], Value::Null);
        assert!(v["levels_compared"].as_u64().unwrap() >= 2);
    }

    #[test]
    fn series_examples() {
        let a = series_a(&w("1"), 3, 3).unwrap();
        assert_eq!(a.at_z_zero(), TriPoly::one(3));
        let a = series_a(&w("2"), 4, 4).unwrap();
        assert_eq!(
            a.at_z_zero(),
            TriPoly::from_terms((0..=4).map(|i| (i, i, 0, 1)), 4)
        );
        let u = w("3122");
        assert_eq!(series_a(&u, 12, 3).unwrap(), brute_force_a(&u, 12).unwrap());
    }

    #[test]
    fn brute_force_examples() {
        let a = brute_force_a(&w("1"), 2).unwrap();
        let expect =
            TriPoly::from_terms([(0, 0, 0, 1), (1, 1, 1, 1), (1, 2, 1, 1), (2, 2, 2, 1)], 2);
        assert_eq!(a, expect);
        assert!(brute_force_a(&w("1"), BRUTE_FORCE_MAX_CAP + 1).is_err());
    }

    #[test]
    fn automaton_json_dump() {
        let v = build_automaton(&w("21")).to_json();
        assert_eq!(v["states"], json!([[2, 1]]));
        assert_eq!(v["transitions"][0]["dsum"], 2);
    }
}
