//! Words over the positive integers, their text form, generalized-factor
//! embeddings, and the word families used by the classification code.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` accepted by [`generate_permutations`].
pub const MAX_PERMUTATION_LEN: usize = 10;

/// A finite word with letters in the positive integers.
///
/// The empty word is a valid value (it is a legitimate host word) but every
/// operation that treats its argument as a pattern requires it nonempty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Word(Vec<u32>);

impl Word {
    /// Builds a word, rejecting zero letters.
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        if let Some(pos) = letters.iter().position(|&l| l == 0) {
            return Err(Error::Parse(format!("letter 0 at position {}", pos + 1)));
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Caller guarantees every letter is at least 1.
    pub(crate) fn from_vec_unchecked(letters: Vec<u32>) -> Self {
        debug_assert!(letters.iter().all(|&l| l >= 1));
        Word(letters)
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the letters.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&l| u64::from(l)).sum()
    }

    pub fn max_letter(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// 1-based letter access with the zero-padding convention used by skyline
    /// arithmetic: positions outside `1..=len` read as 0.
    pub fn at(&self, n: i64) -> u32 {
        if n >= 1 && (n as usize) <= self.0.len() {
            self.0[n as usize - 1]
        } else {
            0
        }
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Letters sorted ascending; two words are rearrangements iff these agree.
    pub fn sorted_letters(&self) -> Vec<u32> {
        let mut v = self.0.clone();
        v.sort_unstable();
        v
    }

    /// Concatenation.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The digit-string form, available when every letter is at most 9.
    pub fn compact(&self) -> Option<String> {
        if self.0.iter().all(|&l| l <= 9) {
            Some(self.0.iter().map(|l| char::from(b'0' + *l as u8)).collect())
        } else {
            None
        }
    }

    /// Compact form when possible and requested, comma-separated otherwise.
    pub fn format(&self, compact: bool) -> String {
        if compact {
            if let Some(s) = self.compact() {
                return s;
            }
        }
        self.to_string()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl TryFrom<Vec<u32>> for Word {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        Word::new(v)
    }
}

impl From<Word> for Vec<u32> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_word(s)
    }
}

fn parse_int(token: &str) -> Result<u32> {
    let ok = token.bytes().all(|b| b.is_ascii_digit()) && !token.starts_with('0');
    if !ok || token.is_empty() {
        return Err(Error::Parse(format!("invalid letter {token:?}")));
    }
    token
        .parse::<u32>()
        .map_err(|_| Error::Parse(format!("letter {token:?} out of range")))
}

/// Parses either a delimited list of positive integers (`"10,2"`, `"2 5 2"`)
/// or a bare digit string where each character is one letter (`"3122"`).
///
/// A lone token that contains a `0` (such as `"10"`) cannot be a digit string
/// and is read as a single letter instead.
pub fn parse_word(text: &str) -> Result<Word> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty word".into()));
    }
    let delimited = text.contains(|c: char| c == ',' || c.is_whitespace());
    if !delimited {
        if text.bytes().all(|b| (b'1'..=b'9').contains(&b)) {
            return Ok(Word(text.bytes().map(|b| u32::from(b - b'0')).collect()));
        }
        return Ok(Word(vec![parse_int(text)?]));
    }
    let mut letters = Vec::new();
    for chunk in text.split(',') {
        let mut any = false;
        for token in chunk.split_whitespace() {
            letters.push(parse_int(token)?);
            any = true;
        }
        if !any {
            return Err(Error::Parse(format!("empty letter in {text:?}")));
        }
    }
    Ok(Word(letters))
}

/// A pattern, a host, and every 1-based start position of an embedding of the
/// pattern in the host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingSet {
    pub pattern: Word,
    pub host: Word,
    pub positions: Vec<usize>,
}

fn embeds_at(u: &[u32], w: &[u32], start: usize) -> bool {
    u.iter().zip(&w[start..]).all(|(a, b)| a <= b)
}

/// Number of embeddings of `u` in `w`.
///
/// # Panics
///
/// Panics if `u` is empty.
pub fn eta(u: &Word, w: &Word) -> usize {
    assert!(!u.is_empty(), "pattern must be nonempty");
    if w.len() < u.len() {
        return 0;
    }
    (0..=w.len() - u.len())
        .filter(|&i| embeds_at(&u.0, &w.0, i))
        .count()
}

/// All embeddings of `u` in `w`, as 1-based start positions.
pub fn embeddings(u: &Word, w: &Word) -> EmbeddingSet {
    assert!(!u.is_empty(), "pattern must be nonempty");
    let positions = if w.len() < u.len() {
        Vec::new()
    } else {
        (0..=w.len() - u.len())
            .filter(|&i| embeds_at(&u.0, &w.0, i))
            .map(|i| i + 1)
            .collect()
    };
    EmbeddingSet {
        pattern: u.clone(),
        host: w.clone(),
        positions,
    }
}

/// All permutations of `1..=n` in lexicographic order.
pub fn generate_permutations(n: usize) -> Result<Vec<Word>> {
    if n == 0 || n > MAX_PERMUTATION_LEN {
        return Err(Error::OutOfRange(format!(
            "permutation length {n} not in 1..={MAX_PERMUTATION_LEN}"
        )));
    }
    let mut cur: Vec<u32> = (1..=n as u32).collect();
    let mut out = Vec::new();
    loop {
        out.push(Word(cur.clone()));
        // next permutation
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    Ok(out)
}

/// Streams the compositions of a fixed sum in lexicographic order.
#[derive(Clone, Debug)]
pub struct Compositions {
    next: Option<Vec<u32>>,
}

impl Iterator for Compositions {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.next.take()?;
        if cur.len() > 1 {
            let mut succ = cur.clone();
            let last = succ.pop().unwrap();
            *succ.last_mut().unwrap() += 1;
            succ.extend(std::iter::repeat_n(1, last as usize - 1));
            self.next = Some(succ);
        }
        Some(Word(cur))
    }
}

/// Every word whose letters sum to `s` (all `2^(s-1)` compositions of `s`),
/// lexicographically: `111, 12, 21, 3` for `s = 3`.
pub fn generate_by_sum(s: u32) -> Result<Compositions> {
    if s < 1 {
        return Err(Error::OutOfRange("sum must be at least 1".into()));
    }
    Ok(Compositions {
        next: Some(vec![1; s as usize]),
    })
}

pub fn is_rearrangement(u: &Word, v: &Word) -> bool {
    u.len() == v.len() && u.sorted_letters() == v.sorted_letters()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn parse_forms() {
        assert_eq!(w("3122").letters(), &[3, 1, 2, 2]);
        assert_eq!(w("2,5,2,4,3,2,1,2,2"), w("252432122"));
        assert_eq!(w("10,2").letters(), &[10, 2]);
        assert_eq!(w("3 1 2 2"), w("3122"));
        assert_eq!(w("10").letters(), &[10]);
    }

    #[test]
    fn parse_errors_name_token() {
        for bad in ["", "  ", "3,0,1", "1,-2", "1,a", "1,,2", "0", "01"] {
            let err = parse_word(bad).unwrap_err();
            assert!(matches!(err, Error::Parse(_)), "{bad:?}");
        }
        let msg = parse_word("4,x7").unwrap_err().to_string();
        assert!(msg.contains("x7"), "{msg}");
    }

    #[test]
    fn display_and_compact() {
        let u = w("10,2");
        assert_eq!(u.to_string(), "10,2");
        assert_eq!(u.compact(), None);
        assert_eq!(u.format(true), "10,2");
        assert_eq!(w("3122").format(true), "3122");
        assert_eq!(w("3122").format(false), "3,1,2,2");
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta(&w("154"), &w("16563")), 2);
        assert_eq!(eta(&w("3122"), &w("3122")), 1);
        let host = w("52131");
        assert_eq!(eta(&w("1"), &host), host.len());
        assert_eq!(eta(&w("12"), &Word::empty()), 0);
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(embeddings(&w("154"), &w("16563")).positions, vec![1, 2]);
        assert!(embeddings(&w("2"), &w("111")).positions.is_empty());
        assert_eq!(embeddings(&w("11"), &w("212")).positions, vec![1, 2]);
    }

    #[test]
    fn embedding_json_schema() {
        let e = embeddings(&w("154"), &w("16563"));
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(
            json,
            r#"{"pattern":[1,5,4],"host":[1,6,5,6,3],"positions":[1,2]}"#
        );
    }

    #[test]
    fn permutations() {
        assert_eq!(generate_permutations(1).unwrap(), vec![w("1")]);
        let p3: Vec<String> = generate_permutations(3)
            .unwrap()
            .iter()
            .map(|p| p.format(true))
            .collect();
        assert_eq!(p3, ["123", "132", "213", "231", "312", "321"]);
        let p6 = generate_permutations(6).unwrap();
        assert_eq!(p6.len(), 720);
        assert!(p6.contains(&w("234156")) && p6.contains(&w("256143")));
        assert!(p6.windows(2).all(|p| p[0] < p[1]));
        assert!(generate_permutations(0).is_err());
        assert!(generate_permutations(MAX_PERMUTATION_LEN + 1).is_err());
    }

    #[test]
    fn compositions() {
        let c: Vec<String> = generate_by_sum(3)
            .unwrap()
            .map(|c| c.format(true))
            .collect();
        assert_eq!(c, ["111", "12", "21", "3"]);
        assert_eq!(
            generate_by_sum(1).unwrap().collect::<Vec<_>>(),
            vec![w("1")]
        );
        assert!(generate_by_sum(0).is_err());
        let c14: Vec<Word> = generate_by_sum(14).unwrap().collect();
        assert_eq!(c14.len(), 8192);
        assert!(c14.contains(&w("223133")) && c14.contains(&w("233132")));
    }

    #[test]
    fn compositions_are_complete_and_distinct() {
        for s in 1..=16u32 {
            let all: Vec<Word> = generate_by_sum(s).unwrap().collect();
            assert_eq!(all.len(), 1 << (s - 1));
            assert!(all.iter().all(|c| c.weight() == u64::from(s)));
            assert!(all.windows(2).all(|p| p[0] < p[1]), "s={s}");
        }
    }

    #[test]
    fn rearrangements() {
        assert!(is_rearrangement(&w("132"), &w("312")));
        assert!(!is_rearrangement(&w("12"), &w("111")));
        assert!(is_rearrangement(&w("223133"), &w("233132")));
    }
}
