//! Intersection functions of paths against the relator closure.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::presentation::Presentation;
use crate::rational::Q;
use crate::smallcancel::{FunctionSample, SymmetrizedClosure, Verdict};
use crate::suffix::SuffixAutomaton;
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionWitness {
    pub subword: Word,
    pub member: Word,
    pub path_start: usize,
}

/// `ρ(t)` for `t ∈ [1, tmax]`: the longest word that is a subword of the
/// path and of some closure member of length at most `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionProfile {
    pub tmax: usize,
    pub rho: Vec<usize>,
    pub witnesses: Vec<Option<IntersectionWitness>>,
}

impl IntersectionProfile {
    pub fn at(&self, t: usize) -> usize {
        self.rho[t - 1]
    }

    pub fn max(&self) -> usize {
        self.rho.last().copied().unwrap_or(0)
    }

    /// First `t` with `ρ(t) > bound(t)`, if any.
    pub fn first_violation(&self, bound: &FunctionSample) -> Option<usize> {
        (1..=self.tmax.min(bound.domain_max)).find(|&t| Q::from_integer(self.at(t) as i64) > bound.at(t))
    }
}

fn assemble(
    tmax: usize,
    per_member: impl Iterator<Item = (usize, usize, Option<IntersectionWitness>)>,
) -> IntersectionProfile {
    let mut best: Vec<(usize, Option<IntersectionWitness>)> = vec![(0, None); tmax + 1];
    for (rlen, len, wit) in per_member {
        if rlen <= tmax && len > best[rlen].0 {
            best[rlen] = (len, wit);
        }
    }
    let mut rho = Vec::with_capacity(tmax);
    let mut witnesses = Vec::with_capacity(tmax);
    let mut cur: (usize, Option<IntersectionWitness>) = (0, None);
    for b in best.into_iter().skip(1) {
        if b.0 > cur.0 {
            cur = b;
        }
        rho.push(cur.0);
        witnesses.push(cur.1.clone());
    }
    IntersectionProfile { tmax, rho, witnesses }
}

pub fn intersection_function(p: &Presentation, path: &Word, tmax: usize) -> IntersectionProfile {
    intersection_with_closure(&SymmetrizedClosure::new(p), path, tmax)
}

pub fn intersection_with_closure(closure: &SymmetrizedClosure, path: &Word, tmax: usize) -> IntersectionProfile {
    let sa = SuffixAutomaton::new(path.letters());
    assemble(
        tmax,
        closure.members().iter().map(|m| {
            let c = sa.longest_common(m.word.letters());
            let wit = (c.len > 0).then(|| IntersectionWitness {
                subword: Word(path.0[c.text_start..c.text_start + c.len].to_vec()),
                member: m.word.clone(),
                path_start: c.text_start,
            });
            (m.word.len(), c.len, wit)
        }),
    )
}

/// Same profile by dynamic programming over every (path, member) pair.
pub fn intersection_function_quadratic(p: &Presentation, path: &Word, tmax: usize) -> IntersectionProfile {
    let closure = SymmetrizedClosure::new(p);
    let a = path.letters();
    assemble(
        tmax,
        closure.members().iter().map(|m| {
            let b = m.word.letters();
            let mut prev = vec![0usize; b.len() + 1];
            let (mut best, mut end) = (0usize, 0usize);
            for i in 1..=a.len() {
                let mut row = vec![0usize; b.len() + 1];
                for j in 1..=b.len() {
                    if a[i - 1] == b[j - 1] {
                        row[j] = prev[j - 1] + 1;
                        if row[j] > best {
                            best = row[j];
                            end = i;
                        }
                    }
                }
                prev = row;
            }
            let wit = (best > 0).then(|| IntersectionWitness {
                subword: Word(a[end - best..end].to_vec()),
                member: m.word.clone(),
                path_start: end - best,
            });
            (b.len(), best, wit)
        }),
    )
}

/// Shortest closure member containing each subword of any member.
#[derive(Debug, Clone)]
pub struct SubwordIndex {
    shortest: HashMap<Vec<Letter>, usize>,
    max_len: usize,
}

impl SubwordIndex {
    pub fn new(closure: &SymmetrizedClosure) -> SubwordIndex {
        let mut shortest: HashMap<Vec<Letter>, usize> = HashMap::new();
        let mut max_len = 0;
        for m in closure.members() {
            let w = m.word.letters();
            max_len = max_len.max(w.len());
            for i in 0..w.len() {
                for j in i + 1..=w.len() {
                    let e = shortest.entry(w[i..j].to_vec()).or_insert(w.len());
                    *e = (*e).min(w.len());
                }
            }
        }
        SubwordIndex { shortest, max_len }
    }

    /// Shortest member length containing `s`, if any.
    pub fn shortest_member(&self, s: &[Letter]) -> Option<usize> {
        self.shortest.get(s).copied()
    }

    pub fn max_member_len(&self) -> usize {
        self.max_len
    }
}

/// Tests `ρ_w ≤ bound` on `[1, bound.domain_max]` for short words `w`.
#[derive(Debug, Clone)]
pub struct WindowChecker {
    index: SubwordIndex,
    /// `allowed[m] = min_{m ≤ t ≤ tmax} bound(t)`, for `m ≤ tmax`.
    allowed: Vec<Q>,
}

impl WindowChecker {
    pub fn new(closure: &SymmetrizedClosure, bound: &FunctionSample) -> WindowChecker {
        let tmax = bound.domain_max;
        let mut allowed = vec![Q::from_integer(i64::MAX); tmax + 2];
        for t in (1..=tmax).rev() {
            allowed[t] = allowed[t + 1].min(bound.at(t));
        }
        WindowChecker { index: SubwordIndex::new(closure), allowed }
    }

    pub fn ok(&self, w: &[Letter]) -> bool {
        let tmax = self.allowed.len() - 2;
        for i in 0..w.len() {
            for j in (i + 1..=w.len().min(i + self.index.max_len)).rev() {
                if let Some(m) = self.index.shortest_member(&w[i..j]) {
                    if m <= tmax && Q::from_integer((j - i) as i64) > self.allowed[m] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalReport {
    pub verdict: Verdict,
    /// Start of the first failing window.
    pub window_start: Option<usize>,
    pub window_len: usize,
}

/// Every subpath of length at most `L` has profile below `bound`.
///
/// Profiles only grow under extension, so windows of length `min(L, |path|)`
/// suffice.
pub fn local_intersection_ok(p: &Presentation, path: &Word, l: usize, bound: &FunctionSample) -> LocalReport {
    let checker = WindowChecker::new(&SymmetrizedClosure::new(p), bound);
    local_with_checker(&checker, path, l)
}

pub fn local_with_checker(checker: &WindowChecker, path: &Word, l: usize) -> LocalReport {
    let win = l.min(path.len());
    let starts = if path.is_empty() { 1 } else { path.len() - win + 1 };
    for s in 0..starts {
        if !checker.ok(&path.0[s..s + win]) {
            return LocalReport { verdict: Verdict::Fail, window_start: Some(s), window_len: win };
        }
    }
    LocalReport { verdict: Verdict::Pass, window_start: None, window_len: win }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn genus3() -> Presentation {
        Presentation::from_strs(6, &["abABcdCDefEF"])
    }

    /// All substrings of the path against all substrings of all members.
    fn brute(p: &Presentation, path: &Word, tmax: usize) -> Vec<usize> {
        let c = SymmetrizedClosure::new(p);
        (1..=tmax)
            .map(|t| {
                let mut best = 0;
                for m in c.members().iter().filter(|m| m.word.len() <= t) {
                    for i in 0..path.len() {
                        for j in i + 1..=path.len() {
                            let s = &path.0[i..j];
                            if m.word.0.windows(s.len()).any(|w| w == s) {
                                best = best.max(s.len());
                            }
                        }
                    }
                }
                best
            })
            .collect()
    }

    #[test]
    fn free_group_is_zero() {
        let p = Presentation::free(2);
        let w = p.parse_word("abABab").unwrap();
        assert!(intersection_function(&p, &w, 10).rho.iter().all(|&r| r == 0));
    }

    #[test]
    fn relator_prefix() {
        let p = genus3();
        let x = Word(p.relators()[0].0[..7].to_vec());
        let prof = intersection_function(&p, &x, 20);
        for t in 1..=20 {
            assert_eq!(prof.at(t), if t < 12 { 0 } else { 7 });
        }
    }

    #[test]
    fn local_examples() {
        let p = genus3();
        let w = p.parse_word("abcd").unwrap();
        let zero = FunctionSample::constant(Q::from_integer(0), 12);
        assert_eq!(local_intersection_ok(&p, &w, 2, &zero).verdict, Verdict::Fail);
        let big = FunctionSample::constant(Q::from_integer(100), 12);
        assert_eq!(local_intersection_ok(&p, &w, 2, &big).verdict, Verdict::Pass);
        // L ≥ |path| is the global comparison
        let prof = intersection_function(&p, &w, 12);
        let one = FunctionSample::constant(Q::from_integer(1), 12);
        assert_eq!(local_intersection_ok(&p, &w, 10, &one).verdict.passed(), prof.first_violation(&one).is_none());
    }

    proptest! {
        #[test]
        fn profile_matches_oracles(raw in prop::collection::vec(0u16..12, 0..20)) {
            let p = genus3();
            let path = crate::words::free_reduce(&Word(raw.into_iter().map(Letter).collect()));
            let fast = intersection_function(&p, &path, 14);
            prop_assert_eq!(&fast.rho, &brute(&p, &path, 14));
            prop_assert_eq!(&fast.rho, &intersection_function_quadratic(&p, &path, 14).rho);
            prop_assert!(fast.rho.windows(2).all(|w| w[0] <= w[1]));
            for (t, r) in fast.rho.iter().enumerate() {
                prop_assert!(*r <= (t + 1).min(path.len()));
            }
            if !path.is_empty() {
                let prefix = Word(path.0[..path.len() - 1].to_vec());
                let pp = intersection_function(&p, &prefix, 14);
                prop_assert!(pp.rho.iter().zip(&fast.rho).all(|(a, b)| a <= b));
            }
        }

        #[test]
        fn windows_match_recomputation(raw in prop::collection::vec(0u16..4, 0..16), l in 1usize..8, b in 0i64..4) {
            let p = Presentation::from_strs(2, &["abaBBBabbaaBa"]);
            let path = crate::words::free_reduce(&Word(raw.into_iter().map(Letter).collect()));
            let bound = FunctionSample::constant(Q::from_integer(b), 13);
            let fast = local_intersection_ok(&p, &path, l, &bound).verdict.passed();
            let mut oracle = true;
            for i in 0..path.len() {
                for j in i + 1..=path.len().min(i + l) {
                    let sub = Word(path.0[i..j].to_vec());
                    if intersection_function(&p, &sub, 13).first_violation(&bound).is_some() {
                        oracle = false;
                    }
                }
            }
            prop_assert_eq!(fast, oracle);
        }
    }
}
