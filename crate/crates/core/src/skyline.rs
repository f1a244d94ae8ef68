//! Skyline geometry: rigid shifts, reversal, shift-equivalence closure and
//! diagram rendering.
//!
//! A word is its own skyline diagram: column `i` holds `u_i` unit squares. A
//! rigid shift cuts the diagram at height `h` and slides every block above
//! the cut `k` columns sideways. The move is legal when each moved column
//! lands on a column of height at least `h` inside the word; after the move
//! that column has height exactly `h` beneath the moved blocks.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::Word;

/// Side length of one square in SVG output, in pixels.
pub const SVG_UNIT: u32 = 20;
/// Square fill colour in SVG output.
pub const SVG_FILL: &str = "#dde3ee";
/// Square outline colour in SVG output.
pub const SVG_STROKE: &str = "#5a6b8c";

/// Cut height `h >= 1` and nonzero horizontal offset `k` (negative = left).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RigidShift {
    pub h: u32,
    pub k: i64,
}

impl RigidShift {
    pub fn new(h: u32, k: i64) -> Result<Self> {
        if h == 0 || k == 0 {
            return Err(Error::OutOfRange(format!(
                "rigid shift needs h >= 1 and k != 0 (got h={h}, k={k})"
            )));
        }
        Ok(RigidShift { h, k })
    }

    pub fn inverse(self) -> Self {
        RigidShift {
            h: self.h,
            k: -self.k,
        }
    }
}

impl fmt::Display for RigidShift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(h={}, k={})", self.h, self.k)
    }
}

/// First column (1-based, possibly outside the word) on which some block
/// above the cut would land illegally.
fn first_violation(u: &Word, s: RigidShift) -> Option<i64> {
    let len = u.len() as i64;
    u.letters()
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > s.h)
        .map(|(i, _)| i as i64 + 1 + s.k)
        .find(|&n| n < 1 || n > len || u.at(n) < s.h)
}

pub fn is_valid_shift(u: &Word, s: RigidShift) -> bool {
    first_violation(u, s).is_none()
}

/// Applies `v_n = min(h, u_n) + max(0, u_{n-k} - h)`.
pub fn apply_shift(u: &Word, s: RigidShift) -> Result<Word> {
    if let Some(column) = first_violation(u, s) {
        return Err(Error::InvalidShift { column });
    }
    Ok(shifted(u, s))
}

fn shifted(u: &Word, s: RigidShift) -> Word {
    let letters = (1..=u.len() as i64)
        .map(|n| u.at(n).min(s.h) + u.at(n - s.k).saturating_sub(s.h))
        .collect();
    Word::from_vec_unchecked(letters)
}

/// Every valid non-identity rigid shift of `u` with `1 <= h < max(u)` and
/// `0 < |k| < |u|`, ordered by `(h, k)`.
pub fn enumerate_shifts(u: &Word) -> Vec<(RigidShift, Word)> {
    let len = u.len() as i64;
    let mut out = Vec::new();
    for h in 1..u.max_letter() {
        for k in (1 - len..len).filter(|&k| k != 0) {
            let s = RigidShift { h, k };
            if is_valid_shift(u, s) {
                let v = shifted(u, s);
                if v != *u {
                    out.push((s, v));
                }
            }
        }
    }
    out
}

pub fn reverse(u: &Word) -> Word {
    u.reversed()
}

/// A shift-equivalence class, members sorted, least member first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftClass {
    pub representative: Word,
    pub members: Vec<Word>,
}

impl ShiftClass {
    pub fn contains(&self, w: &Word) -> bool {
        self.members.binary_search(w).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Closure of `{u}` under reversal and rigid shifts, by breadth-first search.
pub fn shift_class(u: &Word) -> ShiftClass {
    let mut seen: HashSet<Word> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(u.clone());
    queue.push_back(u.clone());
    while let Some(w) = queue.pop_front() {
        let next =
            std::iter::once(w.reversed()).chain(enumerate_shifts(&w).into_iter().map(|(_, v)| v));
        for v in next {
            if !seen.contains(&v) {
                seen.insert(v.clone());
                queue.push_back(v);
            }
        }
    }
    let mut members: Vec<Word> = seen.into_iter().collect();
    members.sort_unstable();
    ShiftClass {
        representative: members[0].clone(),
        members,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

impl FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ascii" | "text" => Ok(RenderFormat::Ascii),
            "svg" => Ok(RenderFormat::Svg),
            _ => Err(Error::UnsupportedFormat(s.to_string())),
        }
    }
}

pub fn render(u: &Word, format: RenderFormat) -> String {
    match format {
        RenderFormat::Ascii => render_ascii(u),
        RenderFormat::Svg => render_svg(u),
    }
}

/// Rows from the top level down, then a label row. Columns are as wide as the
/// widest letter; labels are left-padded with `.`.
fn render_ascii(u: &Word) -> String {
    let width = u
        .letters()
        .iter()
        .map(|l| l.to_string().len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for level in (1..=u.max_letter()).rev() {
        for &l in u.letters() {
            let c = if l >= level { "#" } else { "." };
            out.push_str(&c.repeat(width));
        }
        out.push('\n');
    }
    for &l in u.letters() {
        let _ = write!(out, "{:.>width$}", l, width = width);
    }
    out
}

fn render_svg(u: &Word) -> String {
    let height = u.max_letter();
    let (w_px, h_px) = (u.len() as u32 * SVG_UNIT, height * SVG_UNIT);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w_px}\" height=\"{h_px}\" viewBox=\"0 0 {w_px} {h_px}\">\n"
    );
    for (col, &l) in u.letters().iter().enumerate() {
        for level in 1..=l {
            let _ = writeln!(
                out,
                "  <rect x=\"{}\" y=\"{}\" width=\"{SVG_UNIT}\" height=\"{SVG_UNIT}\" fill=\"{SVG_FILL}\" stroke=\"{SVG_STROKE}\" stroke-width=\"1\"/>",
                col as u32 * SVG_UNIT,
                (height - level) * SVG_UNIT,
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
