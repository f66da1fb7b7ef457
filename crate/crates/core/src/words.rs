//! Letters, alphabets and words over a symmetrised generating set.
//!
//! Generator `i` is letter `2i`, its formal inverse is letter `2i + 1`, so
//! inversion is a bit flip and the letter order `a < A < b < B < ...` is the
//! order used for every shortlex comparison in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A letter of the symmetrised alphabet S ∪ S⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(pub u16);

impl Letter {
    pub fn generator(index: usize) -> Letter {
        Letter((index * 2) as u16)
    }

    pub fn inverse_of_generator(index: usize) -> Letter {
        Letter((index * 2 + 1) as u16)
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Index of the underlying generator.
    #[inline]
    pub fn generator_index(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown symbol {symbol:?} at column {column}")]
    UnknownSymbol { symbol: char, column: usize },
    #[error("letter index {0} outside alphabet")]
    LetterOutOfRange(usize),
}

/// Ordered list of distinct generator names.
///
/// The text format uses single lowercase letters; the uppercase letter is
/// the inverse. Alphabets built in memory with more than 26 generators use
/// `x<i>` / `X<i>` tokens when formatted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    names: Vec<char>,
    rank: usize,
}

impl Alphabet {
    /// Alphabet `a, b, c, ...` of the given rank.
    pub fn with_rank(rank: usize) -> Alphabet {
        let names = (0..rank.min(26)).map(|i| (b'a' + i as u8) as char).collect();
        Alphabet { names, rank }
    }

    /// Alphabet from explicit lowercase names. Returns `None` on duplicates
    /// or non-lowercase names.
    pub fn from_names(names: &[char]) -> Option<Alphabet> {
        let mut seen = [false; 26];
        for &c in names {
            if !c.is_ascii_lowercase() {
                return None;
            }
            let slot = (c as u8 - b'a') as usize;
            if seen[slot] {
                return None;
            }
            seen[slot] = true;
        }
        Some(Alphabet { names: names.to_vec(), rank: names.len() })
    }

    /// Number of generators |S|.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of letters |S̄| = 2|S|.
    pub fn size(&self) -> usize {
        2 * self.rank
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.size() as u16).map(Letter)
    }

    pub fn names(&self) -> &[char] {
        &self.names
    }

    pub fn contains(&self, l: Letter) -> bool {
        l.index() < self.size()
    }

    pub fn letter_from_char(&self, c: char) -> Option<Letter> {
        let lower = c.to_ascii_lowercase();
        let pos = self.names.iter().position(|&n| n == lower)?;
        Some(if c.is_ascii_uppercase() {
            Letter::inverse_of_generator(pos)
        } else {
            Letter::generator(pos)
        })
    }

    pub fn format_letter(&self, l: Letter) -> String {
        let g = l.generator_index();
        match self.names.get(g) {
            Some(&c) if l.is_inverse() => c.to_ascii_uppercase().to_string(),
            Some(&c) => c.to_string(),
            None if l.is_inverse() => format!("X{g}"),
            None => format!("x{g}"),
        }
    }

    pub fn format(&self, w: &[Letter]) -> String {
        w.iter().map(|&l| self.format_letter(l)).collect()
    }

    /// Parses a word in the compact syntax; whitespace is ignored.
    pub fn parse_word(&self, s: &str) -> Result<Word, WordError> {
        let mut letters = Vec::with_capacity(s.len());
        for (column, c) in s.chars().enumerate() {
            if c.is_whitespace() {
                continue;
            }
            let l = self
                .letter_from_char(c)
                .ok_or(WordError::UnknownSymbol { symbol: c, column: column + 1 })?;
            letters.push(l);
        }
        Ok(Word(letters))
    }
}

/// A finite sequence of letters. Not necessarily reduced.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        Word(letters.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Cyclic shift starting at position `k`.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut v = Vec::with_capacity(self.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&f), Some(&l)) => self.len() == 1 || f != l.inverse(),
                _ => true,
            }
    }

    /// Shortlex comparison: shorter words first, then lexicographic.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }

    /// Checks every letter lies in `alphabet`.
    pub fn check(&self, alphabet: &Alphabet) -> Result<(), WordError> {
        match self.0.iter().find(|l| !alphabet.contains(**l)) {
            Some(l) => Err(WordError::LetterOutOfRange(l.index())),
            None => Ok(()),
        }
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    /// Formats with the default `a..z` alphabet.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alphabet = Alphabet::with_rank(self.0.iter().map(|l| l.generator_index() + 1).max().unwrap_or(0));
        f.write_str(&alphabet.format(&self.0))
    }
}

/// The freely reduced form of `w`.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// Splits a freely reduced word as `conjugator · core · conjugator⁻¹` with a
/// cyclically reduced core.
pub fn cyclic_reduce(w: &Word) -> (Word, Word) {
    let letters = &w.0;
    let (mut i, mut j) = (0usize, letters.len());
    while j - i >= 2 && letters[i] == letters[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    (Word(letters[i..j].to_vec()), Word(letters[..i].to_vec()))
}
