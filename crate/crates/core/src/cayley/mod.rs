//! Exact Cayley-graph geometry for verified C'(1/6) presentations.

mod ball;
mod query;
pub mod snapshot;

use serde::Serialize;
use thiserror::Error;

use crate::presentation::Presentation;
use crate::rational::Q;
use crate::smallcancel::{check_cprime_lambda, CancellationWitness, SymmetrizedClosure};
use crate::words::{free_reduce, Letter, Word};

pub use ball::{build_ball, BallOptions, CayleyBall, VertexId, NONE};
pub use query::{DistanceField, GeodesicPath};

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
pub enum CayleyError {
    #[error("presentation is not verified C'(1/6)")]
    NotVerified(Option<CancellationWitness>),
    #[error("ball exceeds the vertex budget ({cap} vertices) at layer {layer}")]
    Budget { cap: usize, layer: usize },
    #[error("distance between {from} and {to} is not certified inside the ball")]
    Uncertified { from: VertexId, to: VertexId },
    #[error("word leaves the ball")]
    OutsideBall,
    #[error("inconsistent edge at vertex {vertex}, letter {letter}")]
    Inconsistent { vertex: VertexId, letter: u16 },
    #[error("relator cycle {member} does not close at vertex {vertex}")]
    OpenCycle { vertex: VertexId, member: usize },
    #[error("edge ({vertex}, {letter}) disagrees with Dehn's algorithm")]
    DehnMismatch { vertex: VertexId, letter: u16 },
    #[error("empty target set")]
    EmptyTarget,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone)]
struct TrieNode {
    children: Vec<(Letter, u32)>,
    /// Shortest member through this node, ties to the smaller member index.
    shortest: Option<(usize, u32)>,
}

/// A presentation checked to satisfy C'(1/6), with the data Dehn's
/// algorithm needs.
#[derive(Debug, Clone)]
pub struct SmallCancellationGroup {
    presentation: Presentation,
    closure: SymmetrizedClosure,
    trie: Vec<TrieNode>,
}

impl SmallCancellationGroup {
    pub fn new(p: Presentation) -> Result<SmallCancellationGroup, CayleyError> {
        let report = check_cprime_lambda(&p, Q::new(1, 6));
        if !report.verdict.passed() {
            return Err(CayleyError::NotVerified(report.witness));
        }
        let closure = SymmetrizedClosure::new(&p);
        let mut trie = vec![TrieNode { children: Vec::new(), shortest: None }];
        for (mi, m) in closure.members().iter().enumerate() {
            let len = m.word.len();
            let mut node = 0usize;
            for &l in m.word.letters() {
                let next = match trie[node].children.iter().find(|(c, _)| *c == l) {
                    Some(&(_, t)) => t as usize,
                    None => {
                        trie.push(TrieNode { children: Vec::new(), shortest: None });
                        let t = trie.len() - 1;
                        trie[node].children.push((l, t as u32));
                        t
                    }
                };
                node = next;
                let cand = (len, mi as u32);
                if trie[node].shortest.is_none_or(|s| cand < s) {
                    trie[node].shortest = Some(cand);
                }
            }
        }
        Ok(SmallCancellationGroup { presentation: p, closure, trie })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn closure(&self) -> &SymmetrizedClosure {
        &self.closure
    }

    /// Leftmost-longest Dehn reduction. The input is freely reduced first.
    pub fn dehn_reduce(&self, w: &Word) -> Word {
        let mut cur = free_reduce(w);
        while let Some((start, len, member)) = self.find_replacement(&cur) {
            let r = &self.closure.members()[member].word;
            let mut next = Vec::with_capacity(cur.len());
            next.extend_from_slice(&cur.0[..start]);
            next.extend(r.0[len..].iter().rev().map(|l| l.inverse()));
            next.extend_from_slice(&cur.0[start + len..]);
            cur = free_reduce(&Word(next));
        }
        cur
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.dehn_reduce(w).is_empty()
    }

    fn find_replacement(&self, w: &Word) -> Option<(usize, usize, usize)> {
        let letters = w.letters();
        for start in 0..letters.len() {
            let mut node = 0usize;
            let mut best = None;
            for (depth, &l) in letters[start..].iter().enumerate() {
                match self.trie[node].children.iter().find(|(c, _)| *c == l) {
                    Some(&(_, t)) => node = t as usize,
                    None => break,
                }
                if let Some((rlen, member)) = self.trie[node].shortest {
                    if 2 * (depth + 1) > rlen {
                        best = Some((start, depth + 1, member as usize));
                    }
                }
            }
            if best.is_some() {
                return best;
            }
        }
        None
    }
}
