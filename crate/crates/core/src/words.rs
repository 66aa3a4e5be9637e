//! Words over the alphabet `{+, -}`.
//!
//! A word is read as a lattice path: `+` steps up, `-` steps down. Most of
//! the combinatorics below (semistability, significant letters, crystal
//! operators) is phrased in terms of that path. Positions are 1-based
//! wherever they are exposed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::{Error, Result};

/// Default bound on the length of enumerated words.
pub const DEFAULT_ENUMERATION_BOUND: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Minus,
    Plus,
}

impl Letter {
    /// Contribution to the weight: `+1` or `-1`.
    pub fn weight(self) -> i64 {
        match self {
            Letter::Plus => 1,
            Letter::Minus => -1,
        }
    }

    pub fn flipped(self) -> Letter {
        match self {
            Letter::Plus => Letter::Minus,
            Letter::Minus => Letter::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::Plus => '+',
            Letter::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Result<Letter> {
        match c {
            '+' => Ok(Letter::Plus),
            '-' => Ok(Letter::Minus),
            other => Err(Error::InvalidLetter(other)),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A finite sequence of letters.
///
/// Ordering is lexicographic with `-` < `+` (shorter prefixes first).
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: SmallVec<[Letter; 24]>,
}

impl Word {
    pub fn empty() -> Word {
        Word::default()
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        Word { letters: letters.into_iter().collect() }
    }

    /// `+^a -^b`.
    pub fn shape(plus: usize, minus: usize) -> Word {
        let mut w = Word::empty();
        w.letters.extend(std::iter::repeat_n(Letter::Plus, plus));
        w.letters.extend(std::iter::repeat_n(Letter::Minus, minus));
        w
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Letter at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> Letter {
        self.letters[pos - 1]
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn prepend(&self, letter: Letter) -> Word {
        let mut letters = SmallVec::with_capacity(self.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.letters);
        Word { letters }
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    /// Letters in the 0-based half-open range `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word { letters: SmallVec::from_slice(&self.letters[range]) }
    }

    /// The word without its first letter.
    pub fn tail(&self) -> Word {
        self.slice(1.min(self.len())..self.len())
    }

    /// Copy with the letter at 1-based position `pos` flipped.
    pub fn with_flip(&self, pos: usize) -> Word {
        let mut w = self.clone();
        w.letters[pos - 1] = w.letters[pos - 1].flipped();
        w
    }

    /// The word read backwards. Converts between the tensor-factor order
    /// used here and the reversed convention found elsewhere in the
    /// literature on dual canonical bases.
    pub fn reversed(&self) -> Word {
        Word::from_letters(self.letters.iter().rev().copied())
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.letters.iter().filter(|&&l| l == letter).count()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        s.chars().map(Letter::from_char).collect::<Result<_>>().map(|letters| Word { letters })
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of `+` minus number of `-`.
pub fn weight(w: &Word) -> i64 {
    w.letters.iter().map(|l| l.weight()).sum()
}

/// Weight zero with every prefix of nonpositive weight.
pub fn is_semistable(w: &Word) -> bool {
    let mut height = 0i64;
    for l in &w.letters {
        height += l.weight();
        if height > 0 {
            return false;
        }
    }
    height == 0
}

/// Classifies each position as significant or not. Returns the 1-based
/// positions of the significant `+` and `-` letters, in increasing order.
///
/// A `-` is matched with the first later unmatched `+`; matched pairs form
/// the semistable blocks and every unmatched letter is significant. All
/// significant `+` precede all significant `-`.
fn significant_positions(w: &Word) -> (Vec<usize>, Vec<usize>) {
    let mut open_minus: Vec<usize> = Vec::new();
    let mut plus = Vec::new();
    for (i, l) in w.letters.iter().enumerate() {
        match l {
            Letter::Minus => open_minus.push(i + 1),
            Letter::Plus => {
                if open_minus.pop().is_none() {
                    plus.push(i + 1);
                }
            }
        }
    }
    // Unmatched minus letters after the last significant plus are the
    // significant ones; any earlier unmatched minus would have been matched.
    (plus, open_minus)
}

/// The unique factorization `w₋ᵣ + … + w₀ − w₁ … − w_s` with semistable blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    /// Number of significant `+` letters.
    pub r: usize,
    /// Number of significant `-` letters.
    pub s: usize,
    /// The `2(r+s)+1` segments: semistable blocks at even indices, single
    /// significant letters at odd indices. Concatenating them gives the word.
    pub blocks: Vec<Word>,
    /// Sorted 1-based positions of the significant letters.
    pub sig_positions: Vec<usize>,
}

impl Factorization {
    /// The `r+s+1` semistable blocks.
    pub fn semistable_blocks(&self) -> impl Iterator<Item = &Word> {
        self.blocks.iter().step_by(2)
    }

    /// The significant letters, in order.
    pub fn significant_letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.blocks.iter().skip(1).step_by(2).map(|w| w.at(1))
    }

    pub fn reconcatenate(&self) -> Word {
        self.blocks.iter().fold(Word::empty(), |acc, b| acc.concat(b))
    }
}

pub fn factorize(w: &Word) -> Factorization {
    let (plus, minus) = significant_positions(w);
    let mut sig_positions = plus.clone();
    sig_positions.extend_from_slice(&minus);
    let mut blocks = Vec::with_capacity(2 * sig_positions.len() + 1);
    let mut start = 0;
    for &pos in &sig_positions {
        blocks.push(w.slice(start..pos - 1));
        blocks.push(w.slice(pos - 1..pos));
        start = pos;
    }
    blocks.push(w.slice(start..w.len()));
    Factorization { r: plus.len(), s: minus.len(), blocks, sig_positions }
}

/// 1-based positions of all significant letters.
pub fn significant_set(w: &Word) -> Vec<usize> {
    factorize(w).sig_positions
}

/// Words obtained by flipping one significant `+` to `-`, in order of the
/// flipped position.
pub fn flip_set(w: &Word) -> Vec<Word> {
    significant_positions(w).0.into_iter().map(|p| w.with_flip(p)).collect()
}

/// The crystal data of a word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrystalData {
    pub eps: usize,
    pub phi: usize,
    pub ell: usize,
    pub e_result: Option<Word>,
    pub f_result: Option<Word>,
}

/// `ẽ` flips the leftmost significant `-`, `f̃` the rightmost significant `+`.
///
/// The tensor factors compose in the opposite order from the more common
/// crystal convention; [`Word::reversed`] passes between the two.
pub fn crystal(w: &Word) -> CrystalData {
    let (plus, minus) = significant_positions(w);
    CrystalData {
        eps: minus.len(),
        phi: plus.len(),
        ell: minus.len() + plus.len(),
        e_result: minus.first().map(|&p| w.with_flip(p)),
        f_result: plus.last().map(|&p| w.with_flip(p)),
    }
}

/// `ε(w) + φ(w)`, the number of significant letters.
pub fn ell(w: &Word) -> usize {
    let (plus, minus) = significant_positions(w);
    plus.len() + minus.len()
}

/// Prefix weights and their running maxima.
///
/// Index 0 holds the empty prefix (`d[0] = D[0] = 0`); the running maximum
/// includes that starting height.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathProfile {
    pub d: Vec<i64>,
    #[serde(rename = "D")]
    pub running_max: Vec<i64>,
}

impl PathProfile {
    pub fn len(&self) -> usize {
        self.d.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Prefix weights `d[1..=n]`.
    pub fn heights(&self) -> &[i64] {
        &self.d[1..]
    }

    /// Running maxima `D[1..=n]`.
    pub fn maxima(&self) -> &[i64] {
        &self.running_max[1..]
    }

    /// Whether 1-based position `pos` carries a significant `+`.
    pub fn is_significant_plus(&self, pos: usize) -> bool {
        self.d[pos] > self.running_max[pos - 1]
    }
}

pub fn path_profile(w: &Word) -> PathProfile {
    let mut d = Vec::with_capacity(w.len() + 1);
    let mut running_max = Vec::with_capacity(w.len() + 1);
    d.push(0);
    running_max.push(0);
    let (mut h, mut m) = (0i64, 0i64);
    for l in &w.letters {
        h += l.weight();
        m = m.max(h);
        d.push(h);
        running_max.push(m);
    }
    PathProfile { d, running_max }
}

/// Filters accepted by [`enumerate_words`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordFilter {
    All,
    Semistable,
    Weight(i64),
    FirstLetter(Letter),
}

impl WordFilter {
    pub fn accepts(&self, w: &Word) -> bool {
        match *self {
            WordFilter::All => true,
            WordFilter::Semistable => is_semistable(w),
            WordFilter::Weight(k) => weight(w) == k,
            WordFilter::FirstLetter(l) => w.first() == Some(l),
        }
    }
}

/// All words of length `n` in lexicographic order, optionally filtered.
pub fn enumerate_words(n: usize, filter: WordFilter) -> Result<Vec<Word>> {
    enumerate_words_bounded(n, filter, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_words_bounded(n: usize, filter: WordFilter, bound: usize) -> Result<Vec<Word>> {
    if n > bound || n >= 64 {
        return Err(Error::SizeExceeded { len: n, bound });
    }
    let mut out = Vec::new();
    for code in 0u64..(1u64 << n) {
        let w =
            Word::from_letters((0..n).map(|i| if code >> (n - 1 - i) & 1 == 1 { Letter::Plus } else { Letter::Minus }));
        if filter.accepts(&w) {
            out.push(w);
        }
    }
    Ok(out)
}
