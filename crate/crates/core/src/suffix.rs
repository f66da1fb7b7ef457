//! Suffix automaton over letters, used for longest-common-subword queries.

use crate::words::Letter;

#[derive(Debug, Clone)]
struct State {
    len: usize,
    link: Option<usize>,
    /// First end position of any occurrence (exclusive).
    end: usize,
    next: Vec<(Letter, usize)>,
}

impl State {
    fn go(&self, l: Letter) -> Option<usize> {
        self.next.iter().find(|(c, _)| *c == l).map(|&(_, t)| t)
    }

    fn set(&mut self, l: Letter, t: usize) {
        match self.next.iter_mut().find(|(c, _)| *c == l) {
            Some(slot) => slot.1 = t,
            None => self.next.push((l, t)),
        }
    }
}

/// Minimal automaton recognising all subwords of a text.
#[derive(Debug, Clone)]
pub struct SuffixAutomaton {
    states: Vec<State>,
    last: usize,
}

/// Longest common subword, located in both inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommonSubword {
    pub len: usize,
    /// Start in the automaton's text.
    pub text_start: usize,
    /// Start in the query word.
    pub query_start: usize,
}

impl SuffixAutomaton {
    pub fn new(text: &[Letter]) -> SuffixAutomaton {
        let mut sa = SuffixAutomaton {
            states: vec![State { len: 0, link: None, end: 0, next: Vec::new() }],
            last: 0,
        };
        for &c in text {
            sa.extend(c);
        }
        sa
    }

    fn extend(&mut self, c: Letter) {
        let cur = self.states.len();
        let len = self.states[self.last].len + 1;
        self.states.push(State { len, link: None, end: len, next: Vec::new() });
        let mut p = Some(self.last);
        while let Some(pi) = p {
            if self.states[pi].go(c).is_some() {
                break;
            }
            self.states[pi].set(c, cur);
            p = self.states[pi].link;
        }
        match p {
            None => self.states[cur].link = Some(0),
            Some(pi) => {
                let q = self.states[pi].go(c).expect("checked");
                if self.states[pi].len + 1 == self.states[q].len {
                    self.states[cur].link = Some(q);
                } else {
                    let clone = self.states.len();
                    let mut st = self.states[q].clone();
                    st.len = self.states[pi].len + 1;
                    self.states.push(st);
                    let mut pp = Some(pi);
                    while let Some(px) = pp {
                        if self.states[px].go(c) != Some(q) {
                            break;
                        }
                        self.states[px].set(c, clone);
                        pp = self.states[px].link;
                    }
                    self.states[q].link = Some(clone);
                    self.states[cur].link = Some(clone);
                }
            }
        }
        self.last = cur;
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        let mut s = 0;
        for &c in w {
            match self.states[s].go(c) {
                Some(t) => s = t,
                None => return false,
            }
        }
        true
    }

    /// For each position `j` of `query`, the length of the longest suffix of
    /// `query[..=j]` that occurs in the text, with the text end position.
    pub fn matching_statistics(&self, query: &[Letter]) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(query.len());
        let (mut s, mut len) = (0usize, 0usize);
        for &c in query {
            loop {
                if let Some(t) = self.states[s].go(c) {
                    s = t;
                    len += 1;
                    break;
                }
                match self.states[s].link {
                    Some(l) => {
                        s = l;
                        len = self.states[s].len;
                    }
                    None => {
                        len = 0;
                        break;
                    }
                }
            }
            out.push((len, if len == 0 { 0 } else { self.states[s].end }));
        }
        out
    }

    /// Longest word occurring in both the text and `query`; earliest end in
    /// `query` wins ties.
    pub fn longest_common(&self, query: &[Letter]) -> CommonSubword {
        let mut best = CommonSubword { len: 0, text_start: 0, query_start: 0 };
        for (j, (len, end)) in self.matching_statistics(query).into_iter().enumerate() {
            if len > best.len {
                best = CommonSubword { len, text_start: end - len, query_start: j + 1 - len };
            }
        }
        best
    }
}
