//! Finite state automata over a symmetrized alphabet.

pub mod geodesic;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{Alphabet, Letter, Word};

pub use geodesic::{geodesic_automaton, window_product, GeodesicAutomaton, WindowProduct};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum AutomatonError {
    #[error("label {0:?} is outside the alphabet")]
    Label(Letter),
    #[error("state {0} out of range")]
    State(usize),
    #[error("ball of radius {radius} is too small for horizon {horizon}")]
    BallTooSmall { radius: usize, horizon: usize },
    #[error("state budget of {0} exceeded")]
    Budget(usize),
}

/// Automaton with sorted, deduplicated edges `(src, label, dst)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automaton {
    pub letters: usize,
    pub states: usize,
    pub edges: Vec<(usize, Letter, usize)>,
    pub initial: usize,
    pub accepts: Vec<usize>,
    pub deterministic: bool,
}

impl Automaton {
    pub fn new(
        letters: usize,
        states: usize,
        mut edges: Vec<(usize, Letter, usize)>,
        initial: usize,
        accepts: impl IntoIterator<Item = usize>,
    ) -> Result<Automaton, AutomatonError> {
        edges.sort();
        edges.dedup();
        for &(s, l, t) in &edges {
            if l.index() >= letters {
                return Err(AutomatonError::Label(l));
            }
            if s >= states || t >= states {
                return Err(AutomatonError::State(s.max(t)));
            }
        }
        let accepts: BTreeSet<usize> = accepts.into_iter().collect();
        if initial >= states || accepts.iter().any(|&z| z >= states) {
            return Err(AutomatonError::State(initial));
        }
        let deterministic = edges.windows(2).all(|w| (w[0].0, w[0].1) != (w[1].0, w[1].1));
        Ok(Automaton { letters, states, edges, initial, accepts: accepts.into_iter().collect(), deterministic })
    }

    /// Automaton with no states accepting nothing.
    pub fn empty(letters: usize) -> Automaton {
        Automaton { letters, states: 1, edges: Vec::new(), initial: 0, accepts: Vec::new(), deterministic: true }
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepts.binary_search(&s).is_ok()
    }

    /// Out-edges of `s`, sorted by label.
    pub fn out(&self, s: usize) -> &[(usize, Letter, usize)] {
        let lo = self.edges.partition_point(|e| e.0 < s);
        let hi = self.edges.partition_point(|e| e.0 <= s);
        &self.edges[lo..hi]
    }

    pub fn step(&self, s: usize, l: Letter) -> impl Iterator<Item = usize> + '_ {
        self.out(s).iter().filter(move |e| e.1 == l).map(|e| e.2)
    }

    /// Subset construction over reachable subsets; the empty subset is dropped.
    pub fn determinize(&self) -> Automaton {
        if self.deterministic {
            return self.clone();
        }
        let start = BTreeSet::from([self.initial]);
        let mut ids: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::from([(start.clone(), 0)]);
        let mut queue = VecDeque::from([start]);
        let mut edges = Vec::new();
        let mut accepts = Vec::new();
        while let Some(set) = queue.pop_front() {
            let id = ids[&set];
            if set.iter().any(|&s| self.is_accepting(s)) {
                accepts.push(id);
            }
            let mut by_label: BTreeMap<Letter, BTreeSet<usize>> = BTreeMap::new();
            for &s in &set {
                for &(_, l, t) in self.out(s) {
                    by_label.entry(l).or_default().insert(t);
                }
            }
            for (l, next) in by_label {
                let n = ids.len();
                let tid = *ids.entry(next.clone()).or_insert_with(|| {
                    queue.push_back(next);
                    n
                });
                edges.push((id, l, tid));
            }
        }
        Automaton::new(self.letters, ids.len(), edges, 0, accepts).expect("well-formed subsets")
    }

    /// Graphviz rendering.
    pub fn to_dot(&self, alphabet: &Alphabet) -> String {
        let mut s = String::from("digraph fsa {\n  rankdir=LR;\n");
        for q in 0..self.states {
            let shape = if self.is_accepting(q) { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  q{q} [shape={shape}];");
        }
        let _ = writeln!(s, "  start [shape=point];\n  start -> q{};", self.initial);
        for &(a, l, b) in &self.edges {
            let _ = writeln!(s, "  q{a} -> q{b} [label=\"{}\"];", alphabet.format_letter(l));
        }
        s.push_str("}\n");
        s
    }
}

/// Nondeterministic acceptance.
pub fn accepts(a: &Automaton, w: &Word) -> Result<bool, AutomatonError> {
    let mut cur = BTreeSet::from([a.initial]);
    for &l in w.letters() {
        if l.index() >= a.letters {
            return Err(AutomatonError::Label(l));
        }
        cur = cur.iter().flat_map(|&s| a.step(s, l)).collect();
        if cur.is_empty() {
            return Ok(false);
        }
    }
    Ok(cur.iter().any(|&s| a.is_accepting(s)))
}

mod biguint_strings {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageReport {
    /// `counts[n]` accepted words of length `n`.
    #[serde(with = "biguint_strings")]
    pub counts: Vec<BigUint>,
    pub empty: bool,
    /// The limit set of the language is nonempty.
    pub live: bool,
}

/// Exact counts by transfer-matrix iteration on the determinized automaton.
pub fn count_accepted(a: &Automaton, n: usize) -> LanguageReport {
    let d = a.determinize();
    let mut vec = vec![BigUint::zero(); d.states];
    vec[d.initial] = BigUint::one();
    let mut counts = Vec::with_capacity(n + 1);
    for len in 0..=n {
        counts.push(d.accepts.iter().map(|&z| &vec[z]).sum());
        if len == n {
            break;
        }
        let mut next = vec![BigUint::zero(); d.states];
        for &(s, _, t) in &d.edges {
            if !vec[s].is_zero() {
                next[t] += &vec[s];
            }
        }
        vec = next;
    }
    let reach = reachable(&d, d.initial, |_| true);
    let empty = !d.accepts.iter().any(|&z| reach[z]);
    let live = limit_liveness(&d).contains(&d.initial);
    LanguageReport { counts, empty, live }
}

fn reachable(a: &Automaton, from: usize, allowed: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; a.states];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(s) = stack.pop() {
        for &(_, _, t) in a.out(s) {
            if !seen[t] && allowed(t) {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen
}

/// Accept states from which an infinite path through accept states leaves.
pub fn limit_liveness(a: &Automaton) -> BTreeSet<usize> {
    let mut live: BTreeSet<usize> = a.accepts.iter().copied().collect();
    loop {
        let next: BTreeSet<usize> = live.iter().copied().filter(|&s| a.out(s).iter().any(|e| live.contains(&e.2))).collect();
        if next.len() == live.len() {
            return live;
        }
        live = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn l(i: u16) -> Letter {
        Letter(i)
    }

    /// Depth-first search over all paths reading `w`.
    fn path_search(a: &Automaton, s: usize, w: &[Letter]) -> bool {
        match w.split_first() {
            None => a.is_accepting(s),
            Some((&x, rest)) => a.out(s).iter().any(|e| e.1 == x && path_search(a, e.2, rest)),
        }
    }

    fn all_words(letters: u16, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..n {
            layer = layer
                .iter()
                .flat_map(|w| (0..letters).map(move |x| Word(w.0.iter().copied().chain([l(x)]).collect())))
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    fn arb_nfa() -> impl Strategy<Value = Automaton> {
        (1usize..5).prop_flat_map(|n| {
            (
                prop::collection::vec((0..n, 0u16..2, 0..n), 0..12),
                prop::collection::vec(0..n, 0..n + 1),
            )
                .prop_map(move |(edges, acc)| Automaton::new(2, n, edges.into_iter().map(|(a, x, b)| (a, l(x), b)).collect(), 0, acc).unwrap())
        })
    }

    #[test]
    fn trivial_examples() {
        let all = Automaton::new(4, 1, (0..4).map(|x| (0, l(x), 0)).collect(), 0, [0]).unwrap();
        assert!(accepts(&all, &Word::empty()).unwrap());
        assert!(accepts(&all, &Word(vec![l(0), l(3), l(1)])).unwrap());
        assert_eq!(accepts(&all, &Word(vec![l(7)])), Err(AutomatonError::Label(l(7))));
        let rep = count_accepted(&Automaton::empty(4), 5);
        assert!(rep.counts.iter().all(|c| c.is_zero()) && rep.empty && !rep.live);
        let chain = Automaton::new(2, 3, vec![(0, l(0), 1), (1, l(0), 2)], 0, [0, 1, 2]).unwrap();
        assert!(limit_liveness(&chain).is_empty());
        let loop1 = Automaton::new(2, 1, vec![(0, l(0), 0)], 0, [0]).unwrap();
        assert_eq!(limit_liveness(&loop1), BTreeSet::from([0]));
    }

    #[test]
    fn json_is_canonical() {
        let a = Automaton::new(2, 2, vec![(1, l(1), 0), (0, l(0), 1), (0, l(0), 1)], 0, [1, 0]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"letters":2,"states":2,"edges":[[0,0,1],[1,1,0]],"initial":0,"accepts":[0,1],"deterministic":true}"#);
        assert_eq!(serde_json::from_str::<Automaton>(&s).unwrap(), a);
        assert!(a.to_dot(&Alphabet::with_rank(1)).contains("q0 -> q1 [label=\"a\"]"));
    }

    proptest! {
        #[test]
        fn accepts_matches_path_search(a in arb_nfa()) {
            for w in all_words(2, 6) {
                prop_assert_eq!(accepts(&a, &w).unwrap(), path_search(&a, a.initial, w.letters()));
            }
        }

        #[test]
        fn determinization_preserves_counts(a in arb_nfa()) {
            let d = a.determinize();
            prop_assert!(d.deterministic);
            let counts = count_accepted(&a, 6).counts;
            for n in 0..=6 {
                let direct = all_words(2, n).iter().filter(|w| w.len() == n && path_search(&a, a.initial, w.letters())).count();
                prop_assert_eq!(counts[n].clone(), BigUint::from(direct));
            }
            prop_assert_eq!(count_accepted(&d, 6).counts, counts);
        }

        #[test]
        fn liveness_matches_pumping(a in arb_nfa()) {
            let live = limit_liveness(&a);
            let len = a.states + 1;
            for s in 0..a.states {
                // an all-prefix-accepted word of length states+1 repeats a state
                let mut frontier = if a.is_accepting(s) { vec![s] } else { vec![] };
                for _ in 0..len {
                    frontier = frontier.iter().flat_map(|&q| a.out(q).iter().map(|e| e.2)).filter(|&t| a.is_accepting(t)).collect();
                    frontier.sort();
                    frontier.dedup();
                }
                prop_assert_eq!(live.contains(&s), !frontier.is_empty(), "state {}", s);
            }
        }
    }
}
