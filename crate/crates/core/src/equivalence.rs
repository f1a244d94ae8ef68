//! Bulk classification of word families under shift equivalence and strong
//! Wilf equivalence, and the search for classes where the two disagree.
//!
//! Both relations only ever relate rearrangements, so universes are first cut
//! into multiset groups which are processed independently (in parallel) and
//! merged in a fixed order; output never depends on scheduling.
//!
//! Strong Wilf classes are built in two phases. Words are bucketed by a cheap
//! signature (their first four cluster levels, which equivalent words share);
//! inside a bucket, words are merged only on an exact certificate: identical
//! cluster sums for identical marks (against the word or its reverse), or a
//! full level comparison up to the recurrence bound.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::clusters::{
    build_automaton, decision_bound, first_difference, same_cluster_sums, strong_wilf_equivalent,
    Level, ReducedAutomaton, SweCertificate,
};
use crate::error::{Error, Result};
use crate::skyline::shift_class;
use crate::words::{generate_by_sum, generate_permutations, Word};

/// Largest `n` for [`class_count_sequence`].
pub const MAX_SEQUENCE_N: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Shift,
    StrongWilf,
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shift" => Ok(Relation::Shift),
            "strong_wilf" | "strong-wilf" | "swe" => Ok(Relation::StrongWilf),
            _ => Err(Error::Parse(format!("unknown relation {s:?}"))),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Shift => "shift",
            Relation::StrongWilf => "strong_wilf",
        })
    }
}

/// A word family with a human-readable description.
#[derive(Clone, Debug)]
pub struct Universe {
    pub description: String,
    pub words: Vec<Word>,
}

impl Universe {
    pub fn permutations(n: usize) -> Result<Self> {
        Ok(Universe {
            description: format!("permutations of 1..{n}"),
            words: generate_permutations(n)?,
        })
    }

    pub fn by_sum(s: u32) -> Result<Self> {
        Ok(Universe {
            description: format!("sum = {s}"),
            words: generate_by_sum(s)?.collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub relation: Relation,
    pub universe: String,
    /// Each class sorted, least member first; classes sorted by that member.
    pub classes: Vec<Vec<Word>>,
    pub class_count: usize,
}

impl EquivalenceReport {
    fn new(relation: Relation, universe: &str, mut classes: Vec<Vec<Word>>) -> Self {
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort_unstable_by(|a, b| a[0].cmp(&b[0]));
        EquivalenceReport {
            relation,
            universe: universe.to_string(),
            class_count: classes.len(),
            classes,
        }
    }

    /// Class index of every word in the report.
    pub fn class_index(&self) -> HashMap<&Word, usize> {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |w| (w, i)))
            .collect()
    }

    /// One row per class: representative, size, space-separated members.
    pub fn to_csv(&self, compact: bool) -> String {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["representative", "size", "members"])
            .expect("in-memory write");
        for c in &self.classes {
            let members: Vec<String> = c.iter().map(|w| w.format(compact)).collect();
            wtr.write_record([c[0].format(compact), c.len().to_string(), members.join(" ")])
                .expect("in-memory write");
        }
        String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }
}

/// Groups word indices by letter multiset, in order of first appearance.
fn multiset_groups(words: &[Word]) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for (i, w) in words.iter().enumerate() {
        groups.entry(w.sorted_letters()).or_default().push(i);
    }
    groups.into_values().collect()
}

fn check_universe(words: &[Word]) -> Result<()> {
    if words.is_empty() {
        return Err(Error::OutOfRange("empty universe".into()));
    }
    if let Some(w) = words.iter().find(|w| w.is_empty()) {
        return Err(Error::OutOfRange(format!("empty word {w:?} in universe")));
    }
    let mut sorted: Vec<&Word> = words.iter().collect();
    sorted.sort_unstable();
    if let Some(p) = sorted.windows(2).find(|p| p[0] == p[1]) {
        return Err(Error::OutOfRange(format!(
            "duplicate word {} in universe",
            p[0]
        )));
    }
    Ok(())
}

fn shift_classes_in(words: &[Word], group: &[usize]) -> Vec<Vec<Word>> {
    let members: HashMap<&Word, usize> = group.iter().map(|&i| (&words[i], i)).collect();
    let mut assigned: HashSet<usize> = HashSet::new();
    let mut out = Vec::new();
    for &i in group {
        if assigned.contains(&i) {
            continue;
        }
        let class = shift_class(&words[i]);
        let mut inside = Vec::new();
        for m in &class.members {
            if let Some(&j) = members.get(m) {
                assigned.insert(j);
                inside.push(m.clone());
            }
        }
        out.push(inside);
    }
    out
}

struct Candidate {
    index: usize,
    reduced: ReducedAutomaton,
    reversed: ReducedAutomaton,
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let p = self.parent[x];
        if p == x {
            return x;
        }
        let root = self.find(p);
        self.parent[x] = root;
        root
    }

    /// Keeps the smaller root so roots stay at the least index.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Exact strong Wilf classes of one signature bucket.
fn confirm_bucket(words: &[Word], bucket: &[usize]) -> Vec<Vec<Word>> {
    if bucket.len() == 1 {
        return vec![vec![words[bucket[0]].clone()]];
    }
    let cands: Vec<Candidate> = bucket
        .iter()
        .map(|&i| Candidate {
            index: i,
            reduced: build_automaton(&words[i]).reduce(),
            reversed: build_automaton(&words[i].reversed()).reduce(),
        })
        .collect();
    let mut sets = DisjointSets::new(cands.len());
    for a in 0..cands.len() {
        for b in a + 1..cands.len() {
            if sets.find(a) == sets.find(b) {
                continue;
            }
            let (ca, cb) = (&cands[a], &cands[b]);
            if same_cluster_sums(&ca.reduced, &cb.reduced)
                || same_cluster_sums(&ca.reduced, &cb.reversed)
            {
                sets.union(a, b);
            }
        }
    }
    // components the cheap certificate could not join: compare levels exactly
    let mut roots: Vec<usize> = (0..cands.len()).filter(|&i| sets.find(i) == i).collect();
    roots.sort_unstable();
    for (x, &a) in roots.iter().enumerate() {
        for &b in &roots[x + 1..] {
            if sets.find(a) == sets.find(b) {
                continue;
            }
            let (ra, rb) = (&cands[a].reduced, &cands[b].reduced);
            let bound = decision_bound(ra.states, rb.states);
            if first_difference(&ra.levels(bound), &rb.levels(bound)).is_none() {
                sets.union(a, b);
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
    for i in 0..cands.len() {
        let r = sets.find(i);
        comps
            .entry(r)
            .or_default()
            .push(words[cands[i].index].clone());
    }
    comps.into_values().collect()
}

fn strong_wilf_classes_in(words: &[Word], group: &[usize]) -> Vec<Vec<Word>> {
    let mut buckets: HashMap<Vec<Level>, Vec<usize>> = HashMap::new();
    for &i in group {
        let sig = build_automaton(&words[i]).reduce().levels(4);
        buckets.entry(sig).or_default().push(i);
    }
    let mut buckets: Vec<Vec<usize>> = buckets.into_values().collect();
    buckets.sort_unstable();
    buckets
        .iter()
        .flat_map(|b| confirm_bucket(words, b))
        .collect()
}

/// Partitions `universe` under `relation` using the current rayon pool.
pub fn partition(universe: &Universe, relation: Relation) -> Result<EquivalenceReport> {
    let words = &universe.words;
    check_universe(words)?;
    let groups = multiset_groups(words);
    let classes: Vec<Vec<Word>> = groups
        .par_iter()
        .map(|g| match relation {
            Relation::Shift => shift_classes_in(words, g),
            Relation::StrongWilf => strong_wilf_classes_in(words, g),
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(EquivalenceReport::new(
        relation,
        &universe.description,
        classes,
    ))
}

/// Class counts of permutations of `1..n` for `n = 1..=n_max`.
pub fn class_count_sequence(relation: Relation, n_max: usize) -> Result<Vec<usize>> {
    if n_max == 0 || n_max > MAX_SEQUENCE_N {
        return Err(Error::OutOfRange(format!(
            "n_max {n_max} not in 1..={MAX_SEQUENCE_N}"
        )));
    }
    (1..=n_max)
        .map(|n| Ok(partition(&Universe::permutations(n)?, relation)?.class_count))
        .collect()
}

/// Why two words are not shift equivalent: their classes have different
/// least members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftSeparation {
    pub class_u: Word,
    pub class_v: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitPair {
    pub u: Word,
    pub v: Word,
    pub strong_wilf: SweCertificate,
    pub shift: ShiftSeparation,
}

/// A strong Wilf class made of more than one shift class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitClass {
    pub members: Vec<Word>,
    pub shift_classes: Vec<Vec<Word>>,
    /// The closest cross pair (fewest differing positions, then least).
    pub pair: (Word, Word),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub universe: String,
    pub split_classes: Vec<SplitClass>,
    /// Every unordered cross-shift-class pair inside a split class, sorted.
    pub pairs: Vec<SplitPair>,
}

fn hamming(a: &Word, b: &Word) -> usize {
    a.letters()
        .iter()
        .zip(b.letters())
        .filter(|(x, y)| x != y)
        .count()
}

/// Pairs of words that are strongly Wilf equivalent but not shift equivalent.
pub fn find_swe_not_shift(universe: &Universe) -> Result<SearchReport> {
    let swe = partition(universe, Relation::StrongWilf)?;
    let shift = partition(universe, Relation::Shift)?;
    let shift_of = shift.class_index();
    let mut split_classes = Vec::new();
    let mut raw_pairs = Vec::new();
    for class in &swe.classes {
        let mut parts: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
        for w in class {
            parts.entry(shift_of[w]).or_default().push(w.clone());
        }
        if parts.len() < 2 {
            continue;
        }
        let mut shift_classes: Vec<Vec<Word>> = parts.into_values().collect();
        shift_classes.sort_unstable_by(|a, b| a[0].cmp(&b[0]));
        let mut cross = Vec::new();
        for (i, a) in shift_classes.iter().enumerate() {
            for b in &shift_classes[i + 1..] {
                for x in a {
                    for y in b {
                        let (u, v) = if x < y { (x, y) } else { (y, x) };
                        cross.push((u.clone(), v.clone()));
                    }
                }
            }
        }
        cross.sort_unstable();
        let pair = cross
            .iter()
            .min_by(|p, q| hamming(&p.0, &p.1).cmp(&hamming(&q.0, &q.1)).then(p.cmp(q)))
            .cloned()
            .expect("split class has a cross pair");
        raw_pairs.extend(cross);
        split_classes.push(SplitClass {
            members: class.clone(),
            shift_classes,
            pair,
        });
    }
    raw_pairs.sort_unstable();
    let pairs = raw_pairs
        .into_par_iter()
        .map(|(u, v)| {
            let strong_wilf = strong_wilf_equivalent(&u, &v);
            let shift = ShiftSeparation {
                class_u: shift.classes[shift_of[&u]][0].clone(),
                class_v: shift.classes[shift_of[&v]][0].clone(),
            };
            SplitPair {
                u,
                v,
                strong_wilf,
                shift,
            }
        })
        .collect();
    Ok(SearchReport {
        universe: universe.description.clone(),
        split_classes,
        pairs,
    })
}
