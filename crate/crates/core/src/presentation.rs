//! Finite presentations and their line-oriented text format.
//!
//! ```text
//! # genus-2 surface group
//! gens: a b c d
//! rel: abABcdCD
//! ```

use std::fmt;

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{cyclic_reduce, free_reduce, Alphabet, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: unknown symbol {symbol:?}")]
    UnknownSymbol { line: usize, column: usize, symbol: char },
    #[error("line {line}: duplicate generator {name:?}")]
    DuplicateGenerator { line: usize, name: char },
    #[error("line {line}: relator reduces to the empty word")]
    EmptyRelator { line: usize },
    #[error("missing `gens:` line")]
    MissingGenerators,
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::UnknownSymbol { line, .. }
            | ParseError::DuplicateGenerator { line, .. }
            | ParseError::EmptyRelator { line } => Some(*line),
            ParseError::MissingGenerators => None,
        }
    }
}

/// Generators plus cyclically reduced, nonempty relators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

impl Presentation {
    /// Builds a presentation, normalising each relator to its cyclically
    /// reduced core. Returns `None` if some relator is trivial in the free
    /// group or uses letters outside the alphabet.
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Option<Presentation> {
        let mut out = Vec::with_capacity(relators.len());
        for r in relators {
            r.check(&alphabet).ok()?;
            let core = normalize_relator(&r);
            if core.is_empty() {
                return None;
            }
            out.push(core);
        }
        Some(Presentation { alphabet, relators: out })
    }

    /// The free group on `rank` generators.
    pub fn free(rank: usize) -> Presentation {
        Presentation { alphabet: Alphabet::with_rank(rank), relators: Vec::new() }
    }

    /// Convenience constructor from relator strings over `a, b, ...`.
    ///
    /// # Panics
    /// Panics on malformed input; intended for fixtures.
    pub fn from_strs(rank: usize, relators: &[&str]) -> Presentation {
        let alphabet = Alphabet::with_rank(rank);
        let words = relators
            .iter()
            .map(|s| alphabet.parse_word(s).expect("fixture relator"))
            .collect();
        Presentation::new(alphabet, words).expect("fixture relators nontrivial")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    pub fn max_relator_len(&self) -> usize {
        self.relators.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn format_word(&self, w: &Word) -> String {
        self.alphabet.format(w.letters())
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, crate::words::WordError> {
        self.alphabet.parse_word(s)
    }

    /// Serialises in the text format accepted by [`parse_presentation`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gens:")?;
        for c in self.alphabet.names() {
            write!(f, " {c}")?;
        }
        writeln!(f)?;
        for r in &self.relators {
            writeln!(f, "rel: {}", self.format_word(r))?;
        }
        Ok(())
    }
}

fn normalize_relator(r: &Word) -> Word {
    let reduced = free_reduce(r);
    let (core, _) = cyclic_reduce(&reduced);
    core
}

/// Parses the presentation text format.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut alphabet: Option<Alphabet> = None;
    let mut relators = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            let column = content.len() - content.trim_start().len() + 1;
            return Err(ParseError::Syntax {
                line: line_no,
                column,
                message: "expected `gens:` or `rel:`".into(),
            });
        };
        let key = content[..colon].trim();
        let body = &content[colon + 1..];
        let body_col = colon + 2;
        match key {
            "gens" => {
                if alphabet.is_some() {
                    return Err(ParseError::Syntax {
                        line: line_no,
                        column: 1,
                        message: "second `gens:` line".into(),
                    });
                }
                alphabet = Some(parse_generators(body, line_no, body_col)?);
            }
            "rel" => {
                let alpha = alphabet.as_ref().ok_or(ParseError::Syntax {
                    line: line_no,
                    column: 1,
                    message: "`rel:` before `gens:`".into(),
                })?;
                let mut letters = Vec::new();
                for (off, c) in body.chars().enumerate() {
                    if c.is_whitespace() {
                        continue;
                    }
                    let l = alpha.letter_from_char(c).ok_or(ParseError::UnknownSymbol {
                        line: line_no,
                        column: body_col + off,
                        symbol: c,
                    })?;
                    letters.push(l);
                }
                let w = Word(letters);
                let core = normalize_relator(&w);
                if core.is_empty() {
                    return Err(ParseError::EmptyRelator { line: line_no });
                }
                if core != w {
                    warn!(
                        "line {line_no}: relator {} normalised to {}",
                        alpha.format(w.letters()),
                        alpha.format(core.letters())
                    );
                }
                relators.push(core);
            }
            other => {
                let column = content.find(other).unwrap_or(0) + 1;
                return Err(ParseError::Syntax {
                    line: line_no,
                    column,
                    message: format!("unknown key {other:?}"),
                });
            }
        }
    }

    let alphabet = alphabet.ok_or(ParseError::MissingGenerators)?;
    Ok(Presentation { alphabet, relators })
}

fn parse_generators(body: &str, line: usize, body_col: usize) -> Result<Alphabet, ParseError> {
    let mut names: Vec<char> = Vec::new();
    let mut offset = 0usize;
    for token in body.split_whitespace() {
        let pos = body[offset..].find(token).map(|p| p + offset).unwrap_or(offset);
        offset = pos + token.len();
        let column = body_col + body[..pos].chars().count();
        let mut chars = token.chars();
        let c = chars.next().unwrap_or(' ');
        if chars.next().is_some() || !c.is_ascii_lowercase() {
            return Err(ParseError::Syntax {
                line,
                column,
                message: format!("generator {token:?} is not a single lowercase letter"),
            });
        }
        if names.contains(&c) {
            return Err(ParseError::DuplicateGenerator { line, name: c });
        }
        names.push(c);
    }
    Ok(Alphabet::from_names(&names).expect("validated above"))
}
