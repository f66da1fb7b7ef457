//! Cone-type geodesic automata and sliding-window products.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Automaton, AutomatonError};
use crate::cayley::{CayleyBall, VertexId};
use crate::metrics::WindowChecker;
use crate::presentation::Presentation;
use crate::smallcancel::{FunctionSample, SymmetrizedClosure};
use crate::words::Letter;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicAutomaton {
    pub automaton: Automaton,
    pub horizon: usize,
    pub radius: usize,
    /// Words up to this length are accepted iff geodesic.
    pub exact_up_to: usize,
    /// No state is seen only in the last layer.
    pub stabilized: bool,
}

/// Cone types truncated at `horizon`, refined until successor classes agree
/// on every vertex whose successors are still classified.
pub fn geodesic_automaton(ball: &CayleyBall, horizon: usize) -> Result<GeodesicAutomaton, AutomatonError> {
    let radius = ball.radius();
    if horizon == 0 || 2 * horizon > radius {
        return Err(AutomatonError::BallTooSmall { radius, horizon });
    }
    let top = radius - horizon;
    let n = ball.sphere(top).end as usize;
    let letters: Vec<Letter> = ball.letters().collect();
    let forward = |v: VertexId| {
        let d = ball.dist0(v);
        letters.iter().filter_map(move |&l| ball.neighbor(v, l).filter(|&t| ball.dist0(t) == d + 1).map(|t| (l, t)))
    };
    // depth-k truncated type of every vertex with |v| + k ≤ R
    let mut ty = vec![0u32; ball.len()];
    for k in 1..=horizon {
        let reach = ball.sphere(radius - k).end as usize;
        let mut intern: HashMap<Vec<(Letter, u32)>, u32> = HashMap::new();
        let mut next = vec![0u32; ball.len()];
        for v in 0..reach {
            let key: Vec<(Letter, u32)> = forward(v as VertexId).map(|(l, t)| (l, ty[t as usize])).collect();
            let m = intern.len() as u32;
            next[v] = *intern.entry(key).or_insert(m);
        }
        ty = next;
    }
    let mut class: Vec<u32> = ty[..n].to_vec();
    let interior = ball.sphere(top).start as usize;
    loop {
        let mut intern: BTreeMap<(u32, Vec<(Letter, u32)>), u32> = BTreeMap::new();
        let mut next = vec![0u32; n];
        for v in 0..interior {
            let key = (class[v], forward(v as VertexId).map(|(l, t)| (l, class[t as usize])).collect());
            let m = intern.len() as u32;
            next[v] = *intern.entry(key).or_insert(m);
        }
        // last-layer vertices follow the first refinement of their class
        let mut first: HashMap<u32, u32> = HashMap::new();
        for v in 0..interior {
            first.entry(class[v]).or_insert(next[v]);
        }
        let mut fresh: HashMap<u32, u32> = HashMap::new();
        for v in interior..n {
            next[v] = match first.get(&class[v]) {
                Some(&c) => c,
                None => {
                    let m = intern.len() as u32 + fresh.len() as u32;
                    *fresh.entry(class[v]).or_insert(m)
                }
            };
        }
        let before = class.iter().collect::<std::collections::HashSet<_>>().len();
        let after = next.iter().collect::<std::collections::HashSet<_>>().len();
        class = next;
        if after == before {
            break;
        }
    }
    // number states by first appearance in vertex order
    let mut state = HashMap::new();
    for &c in &class {
        let m = state.len();
        state.entry(c).or_insert(m);
    }
    let mut has_interior = vec![false; state.len()];
    let mut edges = Vec::new();
    let mut done = vec![false; state.len()];
    for v in 0..interior {
        let s = state[&class[v]];
        has_interior[s] = true;
        if !std::mem::replace(&mut done[s], true) {
            edges.extend(forward(v as VertexId).map(|(l, t)| (s, l, state[&class[t as usize]])));
        }
    }
    let states = state.len();
    let automaton = Automaton::new(ball.letter_count(), states, edges, state[&class[0]], 0..states)?;
    Ok(GeodesicAutomaton { automaton, horizon, radius, exact_up_to: top, stabilized: has_interior.iter().all(|&b| b) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowProduct {
    pub automaton: Automaton,
    pub window: usize,
    pub states: usize,
}

/// Product of `a` with the automaton of admissible windows: every subword of
/// length at most `window` has intersection profile below `bound`.
pub fn window_product(
    a: &Automaton,
    p: &Presentation,
    window: usize,
    bound: &FunctionSample,
    max_states: usize,
) -> Result<WindowProduct, AutomatonError> {
    let checker = WindowChecker::new(&SymmetrizedClosure::new(p), bound);
    let keep = window.saturating_sub(1);
    let start = (a.initial, Vec::<Letter>::new());
    let mut ids: HashMap<(usize, Vec<Letter>), usize> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start]);
    let mut edges = Vec::new();
    let mut accepts = Vec::new();
    while let Some((s, suffix)) = queue.pop_front() {
        let id = ids[&(s, suffix.clone())];
        if a.is_accepting(s) {
            accepts.push(id);
        }
        for &(_, l, t) in a.out(s) {
            let mut win = suffix.clone();
            win.push(l);
            if window == 0 || !checker.ok(&win) {
                continue;
            }
            let cut = win.len().saturating_sub(keep);
            let key = (t, win[cut..].to_vec());
            let m = ids.len();
            let tid = match ids.get(&key) {
                Some(&i) => i,
                None => {
                    if m >= max_states {
                        return Err(AutomatonError::Budget(max_states));
                    }
                    ids.insert(key.clone(), m);
                    queue.push_back(key);
                    m
                }
            };
            edges.push((id, l, tid));
        }
    }
    let states = ids.len();
    Ok(WindowProduct { automaton: Automaton::new(a.letters, states, edges, 0, accepts)?, window, states })
}
