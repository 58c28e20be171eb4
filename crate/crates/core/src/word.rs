//! Braid words over the standard generators `σ_1, …, σ_{n-1}`.
//!
//! A word is stored as a strand count plus an ordered list of signed
//! letters. The text format is a list of nonzero signed decimal integers
//! separated by spaces or commas: `k` stands for `σ_k` and `-k` for
//! `σ_k^{-1}`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent of a single generator.
///
/// The derived order puts `Pos` before `Neg`, which is the letter order used
/// for canonical forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

/// `σ_index^{±1}`. Ordered by index first, then `+1 < -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub index: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn new(index: usize, sign: Sign) -> Self {
        Letter { index, sign }
    }

    pub fn pos(index: usize) -> Self {
        Letter::new(index, Sign::Pos)
    }

    pub fn neg(index: usize) -> Self {
        Letter::new(index, Sign::Neg)
    }

    pub fn inverse(self) -> Self {
        Letter::new(self.index, self.sign.flip())
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.sign != other.sign
    }

    pub fn as_i64(self) -> i64 {
        self.index as i64 * self.sign.as_i64()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i64())
    }
}

/// A braid word in `B_strands`. The empty word is the identity braid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WordRepr", into = "WordRepr")]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

#[derive(Serialize, Deserialize)]
struct WordRepr {
    strands: usize,
    word: String,
}

impl TryFrom<WordRepr> for BraidWord {
    type Error = Error;

    fn try_from(repr: WordRepr) -> Result<Self> {
        parse_braid(&repr.word, repr.strands)
    }
}

impl From<BraidWord> for WordRepr {
    fn from(w: BraidWord) -> Self {
        WordRepr { strands: w.strands, word: w.to_string() }
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<Self> {
        if strands < 2 {
            return Err(Error::InvalidPunctureCount(strands));
        }
        for l in &letters {
            if l.index == 0 || l.index >= strands {
                return Err(Error::IndexOutOfRange { index: l.index, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Result<Self> {
        BraidWord::new(strands, Vec::new())
    }

    /// Builds a word from signed integers (`k` ↦ `σ_|k|^{sign k}`).
    pub fn from_ints(strands: usize, ints: &[i64]) -> Result<Self> {
        let letters = ints
            .iter()
            .map(|&k| letter_from_int(k, strands))
            .collect::<Result<Vec<_>>>()?;
        BraidWord::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Same letters viewed in `B_strands` for a larger strand count.
    pub fn embed(&self, strands: usize) -> Result<Self> {
        BraidWord::new(strands, self.letters.clone())
    }

    /// Smallest and largest generator index used, `None` for the identity.
    pub fn support(&self) -> Option<(usize, usize)> {
        let lo = self.letters.iter().map(|l| l.index).min()?;
        let hi = self.letters.iter().map(|l| l.index).max()?;
        Some((lo, hi))
    }

    /// The word repeated `k` times.
    pub fn power(&self, k: usize) -> Self {
        let mut letters = Vec::with_capacity(self.letters.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.letters);
        }
        BraidWord { strands: self.strands, letters }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|p| !p[0].cancels(p[1]))
    }

    /// Deletes adjacent `σ_i^ε σ_i^{-ε}` pairs until none remain.
    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match out.last() {
                Some(&top) if top.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        BraidWord { strands: self.strands, letters: out }
    }

    pub fn inverse(&self) -> Self {
        let letters = self.letters.iter().rev().map(|l| l.inverse()).collect();
        BraidWord { strands: self.strands, letters }
    }

    /// Negates every exponent, keeping the letter order.
    pub fn mirror(&self) -> Self {
        let letters = self.letters.iter().map(|l| l.inverse()).collect();
        BraidWord { strands: self.strands, letters }
    }

    /// Maps every index `i` to `strands - i`.
    pub fn flip(&self) -> Self {
        let n = self.strands;
        let letters = self
            .letters
            .iter()
            .map(|l| Letter::new(n - l.index, l.sign))
            .collect();
        BraidWord { strands: n, letters }
    }

    /// Moves the first `k` letters to the end (conjugation by that prefix).
    /// `k` is taken modulo the word length.
    pub fn rotate(&self, k: usize) -> Self {
        if self.letters.is_empty() {
            return self.clone();
        }
        let mut letters = self.letters.clone();
        letters.rotate_left(k % self.letters.len());
        BraidWord { strands: self.strands, letters }
    }

    fn reverse(&self) -> Self {
        let letters = self.letters.iter().rev().copied().collect();
        BraidWord { strands: self.strands, letters }
    }

    /// Every word reachable from `self` by compositions of inverse, mirror,
    /// flip and rotations, with repetitions.
    ///
    /// The group generated by these is a product of the dihedral group on
    /// positions (rotations and reversal) with the two letter involutions
    /// (sign negation and index flip), so it has at most `8 * len` elements.
    pub fn symmetry_orbit(&self) -> Vec<BraidWord> {
        let len = self.letters.len().max(1);
        let mut out = Vec::with_capacity(8 * len);
        for flipped in [false, true] {
            let w1 = if flipped { self.flip() } else { self.clone() };
            for negated in [false, true] {
                let w2 = if negated { w1.mirror() } else { w1.clone() };
                for reversed in [false, true] {
                    let w3 = if reversed { w2.reverse() } else { w2.clone() };
                    for k in 0..len {
                        out.push(w3.rotate(k));
                    }
                }
            }
        }
        out
    }

    /// Lexicographically smallest word in the symmetry orbit.
    ///
    /// For a freely reduced input only freely reduced orbit members are
    /// candidates (rotation can create a cancelling pair), so the result is
    /// again freely reduced and two reduced words get the same canonical
    /// form exactly when one is reachable from the other.
    pub fn canonical_form(&self) -> Self {
        let reduced_only = self.is_freely_reduced();
        self.symmetry_orbit()
            .into_iter()
            .filter(|w| !reduced_only || w.is_freely_reduced())
            .min_by(|x, y| x.letters.cmp(&y.letters))
            .expect("orbit contains the word itself")
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical_form()
    }

    /// Consecutive letters have adjacent indices and opposite signs.
    pub fn is_alternating(&self) -> bool {
        self.letters.windows(2).all(|p| {
            p[0].index.abs_diff(p[1].index) == 1 && p[0].sign != p[1].sign
        })
    }
}

impl PartialOrd for BraidWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BraidWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .cmp(&other.letters)
            .then(self.strands.cmp(&other.strands))
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

fn letter_from_int(k: i64, strands: usize) -> Result<Letter> {
    if k == 0 {
        return Err(Error::MalformedWord("generator 0 does not exist".into()));
    }
    let index = k.unsigned_abs() as usize;
    if index >= strands {
        return Err(Error::IndexOutOfRange { index, strands });
    }
    let sign = if k > 0 { Sign::Pos } else { Sign::Neg };
    Ok(Letter::new(index, sign))
}

fn parse_token(tok: &str) -> Result<i64> {
    let digits = tok.strip_prefix('-').unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::MalformedWord(format!("bad token {tok:?}")));
    }
    tok.parse::<i64>()
        .map_err(|_| Error::MalformedWord(format!("bad token {tok:?}")))
}

/// Parses the text format, e.g. `"1 -2"` or `"1,-2"`.
pub fn parse_braid(text: &str, strands: usize) -> Result<BraidWord> {
    if strands < 2 {
        return Err(Error::InvalidPunctureCount(strands));
    }
    let letters = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_token(t).and_then(|k| letter_from_int(k, strands)))
        .collect::<Result<Vec<_>>>()?;
    BraidWord::new(strands, letters)
}
