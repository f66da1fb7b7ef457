//! Symmetrised closure, pieces and small-cancellation predicates.

pub mod functions;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::presentation::Presentation;
use crate::rational::{serde_q, Q};
use crate::suffix::SuffixAutomaton;
use crate::words::Word;

pub use functions::{construct_g, derive_viable_from_sublinear, FunctionError, FunctionSample};

/// Where a closure member came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Origin {
    pub relator: usize,
    pub shift: usize,
    pub inverted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureMember {
    pub word: Word,
    /// Every (relator, shift, inversion) producing this word, sorted.
    pub origins: Vec<Origin>,
}

/// All cyclic shifts of `R ∪ R⁻¹`, as distinct words in lexicographic order.
#[derive(Debug, Clone)]
pub struct SymmetrizedClosure {
    members: Vec<ClosureMember>,
    index: BTreeMap<Word, usize>,
}

impl SymmetrizedClosure {
    pub fn new(p: &Presentation) -> SymmetrizedClosure {
        let mut map: BTreeMap<Word, Vec<Origin>> = BTreeMap::new();
        for (ri, r) in p.relators().iter().enumerate() {
            let inv = r.inverse();
            for shift in 0..r.len() {
                map.entry(r.rotate(shift))
                    .or_default()
                    .push(Origin { relator: ri, shift, inverted: false });
                map.entry(inv.rotate(shift))
                    .or_default()
                    .push(Origin { relator: ri, shift, inverted: true });
            }
        }
        let members: Vec<ClosureMember> = map
            .into_iter()
            .map(|(word, mut origins)| {
                origins.sort();
                ClosureMember { word, origins }
            })
            .collect();
        let index = members.iter().enumerate().map(|(i, m)| (m.word.clone(), i)).collect();
        SymmetrizedClosure { members, index }
    }

    pub fn members(&self) -> &[ClosureMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.index.contains_key(w)
    }
}

fn lcp(a: &Word, b: &Word) -> usize {
    a.0.iter().zip(&b.0).take_while(|(x, y)| x == y).count()
}

/// A longest piece of one relator, with the two members realising it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceWitness {
    pub len: usize,
    pub member: usize,
    pub other: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatorPieces {
    pub relator: usize,
    pub relator_len: usize,
    pub max_piece_len: usize,
    pub witness: Option<PieceWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceTable {
    pub rows: Vec<RelatorPieces>,
}

impl PieceTable {
    pub fn max_piece_len(&self, relator: usize) -> usize {
        self.rows[relator].max_piece_len
    }

    pub fn max_piece_lens(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.max_piece_len).collect()
    }
}

fn fold_into_rows(p: &Presentation, closure: &SymmetrizedClosure, best: Vec<(usize, usize)>) -> PieceTable {
    let mut rows: Vec<RelatorPieces> = p
        .relators()
        .iter()
        .enumerate()
        .map(|(i, r)| RelatorPieces { relator: i, relator_len: r.len(), max_piece_len: 0, witness: None })
        .collect();
    for (mi, (len, other)) in best.into_iter().enumerate() {
        if len == 0 {
            continue;
        }
        for o in &closure.members()[mi].origins {
            let row = &mut rows[o.relator];
            if len > row.max_piece_len {
                row.max_piece_len = len;
                row.witness = Some(PieceWitness { len, member: mi, other });
            }
        }
    }
    PieceTable { rows }
}

/// Longest pieces per relator: adjacent members in sorted order realise
/// every maximal common prefix.
pub fn pieces(p: &Presentation, closure: &SymmetrizedClosure) -> PieceTable {
    let ms = closure.members();
    let best: Vec<(usize, usize)> = (0..ms.len())
        .map(|i| {
            let mut b = (0usize, i);
            if i > 0 {
                let l = lcp(&ms[i].word, &ms[i - 1].word);
                if l > b.0 {
                    b = (l, i - 1);
                }
            }
            if i + 1 < ms.len() {
                let l = lcp(&ms[i].word, &ms[i + 1].word);
                if l > b.0 {
                    b = (l, i + 1);
                }
            }
            b
        })
        .collect();
    fold_into_rows(p, closure, best)
}

/// Same table by scanning every pair of members.
pub fn pieces_pairwise(p: &Presentation, closure: &SymmetrizedClosure, exec: Exec) -> PieceTable {
    let ms = closure.members();
    let best = exec.map_range(ms.len(), |i| {
        let mut b = (0usize, i);
        for j in 0..ms.len() {
            if j != i {
                let l = lcp(&ms[i].word, &ms[j].word);
                if l > b.0 {
                    b = (l, j);
                }
            }
        }
        b
    });
    fold_into_rows(p, closure, best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellationWitness {
    pub relator: usize,
    pub relator_word: Word,
    pub piece: Word,
    pub piece_len: usize,
    pub relator_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellationReport {
    pub verdict: Verdict,
    pub witness: Option<CancellationWitness>,
}

fn witness_for(p: &Presentation, closure: &SymmetrizedClosure, row: &RelatorPieces) -> CancellationWitness {
    let w = row.witness.as_ref().expect("positive piece has a witness");
    let member = &closure.members()[w.member].word;
    CancellationWitness {
        relator: row.relator,
        relator_word: p.relators()[row.relator].clone(),
        piece: Word(member.0[..w.len].to_vec()),
        piece_len: w.len,
        relator_len: row.relator_len,
    }
}

/// C'(λ): every piece `p` of every relator `r` has `|p| < λ|r|`.
pub fn check_cprime_lambda(p: &Presentation, lambda: Q) -> CancellationReport {
    let closure = SymmetrizedClosure::new(p);
    let table = pieces(p, &closure);
    check_table(p, &closure, &table, |len| lambda * Q::from_integer(len as i64))
}

fn check_table(
    p: &Presentation,
    closure: &SymmetrizedClosure,
    table: &PieceTable,
    threshold: impl Fn(usize) -> Q,
) -> CancellationReport {
    let worst = table
        .rows
        .iter()
        .filter(|row| Q::from_integer(row.max_piece_len as i64) >= threshold(row.relator_len))
        .max_by(|a, b| {
            let ra = Q::new(a.max_piece_len as i64, a.relator_len as i64);
            let rb = Q::new(b.max_piece_len as i64, b.relator_len as i64);
            ra.cmp(&rb).then(b.relator.cmp(&a.relator))
        });
    match worst {
        None => CancellationReport { verdict: Verdict::Pass, witness: None },
        Some(row) => CancellationReport { verdict: Verdict::Fail, witness: Some(witness_for(p, closure, row)) },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CprimeFReport {
    #[serde(flatten)]
    pub report: CancellationReport,
    /// `ρ(n) = n / f(n)`.
    pub induced_bound: FunctionSample,
}

/// C'(1/f): every piece `p` of `r` has `|p| < |r| / f(|r|)`.
pub fn check_cprime_f(p: &Presentation, f: &FunctionSample) -> Result<CprimeFReport, FunctionError> {
    f.require_domain(p.max_relator_len())?;
    f.check_viable()?;
    let closure = SymmetrizedClosure::new(p);
    let table = pieces(p, &closure);
    let report = check_table(p, &closure, &table, |len| Q::from_integer(len as i64) / f.at(len));
    Ok(CprimeFReport { report, induced_bound: f.induced_bound()? })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub subword: Word,
    pub member: Word,
    pub x_start: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub verdict: Verdict,
    pub witness: Option<PairWitness>,
}

/// The pair `(x, R)` condition: every common subword `p` of `x` and a member
/// `r` of the closure has `|p| < |r| / f(|r|)`.
pub fn check_pair_cprime_f(
    x: &Word,
    p: &Presentation,
    f: &FunctionSample,
) -> Result<PairReport, FunctionError> {
    let closure = SymmetrizedClosure::new(p);
    check_pair_with_closure(x, &closure, f)
}

pub fn check_pair_with_closure(
    x: &Word,
    closure: &SymmetrizedClosure,
    f: &FunctionSample,
) -> Result<PairReport, FunctionError> {
    let need = closure.members().iter().map(|m| m.word.len()).max().unwrap_or(0);
    f.require_domain(need)?;
    if x.is_empty() {
        return Ok(PairReport { verdict: Verdict::Pass, witness: None });
    }
    let sa = SuffixAutomaton::new(x.letters());
    let mut worst: Option<PairWitness> = None;
    for m in closure.members() {
        let c = sa.longest_common(m.word.letters());
        let rlen = m.word.len();
        if c.len == 0 || Q::from_integer(c.len as i64) < Q::from_integer(rlen as i64) / f.at(rlen) {
            continue;
        }
        if worst.as_ref().is_none_or(|w| c.len > w.subword.len()) {
            worst = Some(PairWitness {
                subword: Word(x.0[c.text_start..c.text_start + c.len].to_vec()),
                member: m.word.clone(),
                x_start: c.text_start,
            });
        }
    }
    Ok(PairReport { verdict: Verdict::from_bool(worst.is_none()), witness: worst })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IpscError {
    #[error("word is not a member of the symmetrised closure")]
    NotInClosure,
    #[error("index i must be at least 1")]
    BadIndex,
    #[error("split {split} outside (0, {len}]")]
    BadSplit { split: usize, len: usize },
    #[error(transparent)]
    Function(#[from] FunctionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IpscReport {
    pub verdict: Verdict,
    pub relator_long_enough: bool,
    pub prefix_long_enough: bool,
    pub pair: PairReport,
    #[serde(with = "serde_q")]
    pub n_i: Q,
}

/// Checks one finite IPSC witness: `|r| ≥ n(i)`, `|x| ≥ |r|/i` and the pair
/// condition for `x = r[..split]`.
pub fn ipsc_witness_check(
    p: &Presentation,
    i: usize,
    r: &Word,
    split: usize,
    n: &FunctionSample,
    f: &FunctionSample,
) -> Result<IpscReport, IpscError> {
    if i < 1 {
        return Err(IpscError::BadIndex);
    }
    let closure = SymmetrizedClosure::new(p);
    if !closure.contains(r) {
        return Err(IpscError::NotInClosure);
    }
    if split == 0 || split > r.len() {
        return Err(IpscError::BadSplit { split, len: r.len() });
    }
    n.require_domain(i)?;
    let n_i = n.at(i);
    let x = Word(r.0[..split].to_vec());
    let relator_long_enough = Q::from_integer(r.len() as i64) >= n_i;
    let prefix_long_enough = split * i >= r.len();
    let pair = check_pair_with_closure(&x, &closure, f)?;
    let verdict = Verdict::from_bool(relator_long_enough && prefix_long_enough && pair.verdict.passed());
    Ok(IpscReport { verdict, relator_long_enough, prefix_long_enough, pair, n_i })
}
