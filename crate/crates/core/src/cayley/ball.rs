//! Layer-synchronous construction of Cayley balls.
//!
//! Vertices of layer `n + 1` are discovered from layer `n` without solving
//! the word problem: an unknown edge `(u, s)` is resolved by reading the
//! rest of every relator `r = s·x` backwards from `u`. If the walk closes
//! through known edges, `u·s` is the vertex it ends at; if it stops just
//! before its last letter at another unknown edge `(u', s')` of the same
//! layer, then `u·s = u'·s'`. Remaining classes become new vertices.

use std::collections::HashMap;

use crate::exec::Exec;
use crate::presentation::Presentation;
use crate::words::{Letter, Word};

use super::{CayleyError, SmallCancellationGroup};

pub type VertexId = u32;
pub const NONE: VertexId = u32::MAX;

#[derive(Debug, Clone)]
pub struct BallOptions {
    pub max_vertices: usize,
    pub exec: Exec,
    /// Check that every relator read from every deep enough vertex closes.
    pub validate_cycles: bool,
    /// Check every edge against Dehn's algorithm.
    pub dehn_cross_check: bool,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions { max_vertices: 20_000_000, exec: Exec::default(), validate_cycles: false, dehn_cross_check: false }
    }
}

impl BallOptions {
    /// Vertex cap derived from a memory budget in MiB.
    pub fn with_budget_mb(mut self, mb: usize, letters: usize) -> Self {
        let per_vertex = 4 * letters + 10;
        self.max_vertices = (mb.saturating_mul(1 << 20) / per_vertex).max(1);
        self
    }
}

/// The ball of a given radius about the identity.
///
/// Vertex ids follow the shortlex order of normal forms, so the id of the
/// identity is 0 and layers are contiguous id ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyBall {
    pub(crate) presentation: Presentation,
    pub(crate) radius: usize,
    pub(crate) letters: usize,
    pub(crate) dist0: Vec<u32>,
    pub(crate) parent: Vec<VertexId>,
    pub(crate) via: Vec<Letter>,
    pub(crate) adj: Vec<VertexId>,
    pub(crate) layer_start: Vec<usize>,
}

impl CayleyBall {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn letter_count(&self) -> usize {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.dist0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist0.is_empty()
    }

    pub fn identity(&self) -> VertexId {
        0
    }

    pub fn dist0(&self, v: VertexId) -> usize {
        self.dist0[v as usize] as usize
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.layer_start.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Vertex ids of the sphere of radius `n`.
    pub fn sphere(&self, n: usize) -> std::ops::Range<VertexId> {
        if n > self.radius {
            return 0..0;
        }
        self.layer_start[n] as VertexId..self.layer_start[n + 1] as VertexId
    }

    #[inline]
    pub fn neighbor(&self, v: VertexId, l: Letter) -> Option<VertexId> {
        let t = self.adj[v as usize * self.letters + l.index()];
        (t != NONE).then_some(t)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.letters as u16).map(Letter)
    }

    /// Shortlex-least geodesic word from the identity.
    pub fn normal_form(&self, v: VertexId) -> Word {
        let mut out = Vec::with_capacity(self.dist0(v));
        let mut cur = v;
        while cur != 0 {
            out.push(self.via[cur as usize]);
            cur = self.parent[cur as usize];
        }
        out.reverse();
        Word(out)
    }

    /// Endpoint of the path labelled `w` from `from`, if it stays in the ball.
    pub fn walk(&self, from: VertexId, w: &Word) -> Option<VertexId> {
        w.letters().iter().try_fold(from, |v, &l| self.neighbor(v, l))
    }

    pub fn vertex_of(&self, w: &Word) -> Option<VertexId> {
        self.walk(0, w)
    }
}

struct Builder<'a> {
    letters: usize,
    adj: Vec<VertexId>,
    dist0: Vec<u32>,
    parent: Vec<VertexId>,
    via: Vec<Letter>,
    /// For each first letter `s`, the tails `x⁻¹` of members `s·x`.
    tails: &'a [Vec<Vec<Letter>>],
}

enum WalkEnd {
    Closed(VertexId),
    Merge(VertexId, Letter),
    Stuck,
}

impl Builder<'_> {
    #[inline]
    fn get(&self, v: VertexId, l: Letter) -> VertexId {
        self.adj[v as usize * self.letters + l.index()]
    }

    fn walk_tail(&self, u: VertexId, tail: &[Letter]) -> WalkEnd {
        let mut v = u;
        for (i, &l) in tail.iter().enumerate() {
            let t = self.get(v, l);
            if t == NONE {
                return if i + 1 == tail.len() { WalkEnd::Merge(v, l) } else { WalkEnd::Stuck };
            }
            v = t;
        }
        WalkEnd::Closed(v)
    }

    fn resolve(&self, u: VertexId, s: Letter) -> Option<VertexId> {
        self.tails[s.index()].iter().find_map(|tail| match self.walk_tail(u, tail) {
            WalkEnd::Closed(t) => Some(t),
            _ => None,
        })
    }

    fn merges(&self, u: VertexId, s: Letter) -> Vec<(VertexId, Letter)> {
        self.tails[s.index()]
            .iter()
            .filter_map(|tail| match self.walk_tail(u, tail) {
                WalkEnd::Merge(v, l) => Some((v, l)),
                _ => None,
            })
            .collect()
    }

    fn set_edge(&mut self, u: VertexId, s: Letter, t: VertexId) -> Result<(), CayleyError> {
        let k = self.letters;
        for (a, l, b) in [(u, s, t), (t, s.inverse(), u)] {
            let slot = &mut self.adj[a as usize * k + l.index()];
            if *slot != NONE && *slot != b {
                return Err(CayleyError::Inconsistent { vertex: a, letter: l.0 });
            }
            *slot = b;
        }
        Ok(())
    }

    fn push_vertex(&mut self, parent: VertexId, via: Letter, dist: u32) -> VertexId {
        let id = self.dist0.len() as VertexId;
        self.dist0.push(dist);
        self.parent.push(parent);
        self.via.push(via);
        self.adj.extend(std::iter::repeat_n(NONE, self.letters));
        id
    }
}

fn find(uf: &mut [usize], mut x: usize) -> usize {
    while uf[x] != x {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    x
}

/// Builds the ball of radius `radius` about the identity.
pub fn build_ball(group: &SmallCancellationGroup, radius: usize, opts: &BallOptions) -> Result<CayleyBall, CayleyError> {
    let p = group.presentation();
    let k = p.alphabet().size();
    let mut tails: Vec<Vec<Vec<Letter>>> = vec![Vec::new(); k];
    for m in group.closure().members() {
        let w = m.word.letters();
        tails[w[0].index()].push(w[1..].iter().rev().map(|l| l.inverse()).collect());
    }
    let mut b = Builder { letters: k, adj: Vec::new(), dist0: Vec::new(), parent: Vec::new(), via: Vec::new(), tails: &tails };
    b.push_vertex(NONE, Letter(0), 0);
    let mut layer_start = vec![0usize, 1];

    for n in 0..=radius {
        let (lo, hi) = (layer_start[n], layer_start[n + 1]);
        let mut pending: Vec<(VertexId, Letter)> = Vec::new();
        for u in lo..hi {
            for s in 0..k as u16 {
                if b.get(u as VertexId, Letter(s)) == NONE {
                    pending.push((u as VertexId, Letter(s)));
                }
            }
        }

        loop {
            let found = opts.exec.map_slice(&pending, |&(u, s)| b.resolve(u, s));
            let mut progress = false;
            for (&(u, s), t) in pending.iter().zip(&found) {
                if let Some(t) = *t {
                    b.set_edge(u, s, t)?;
                    progress = true;
                }
            }
            pending.retain(|&(u, s)| b.get(u, s) == NONE);
            if !progress {
                break;
            }
        }

        if n == radius {
            break;
        }

        let slot: HashMap<(VertexId, Letter), usize> = pending.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut uf: Vec<usize> = (0..pending.len()).collect();
        let links = opts.exec.map_slice(&pending, |&(u, s)| b.merges(u, s));
        for (i, ls) in links.iter().enumerate() {
            for e in ls {
                if let Some(&j) = slot.get(e) {
                    let (a, c) = (find(&mut uf, i), find(&mut uf, j));
                    if a != c {
                        uf[a.max(c)] = a.min(c);
                    }
                }
            }
        }
        // Pending pairs are already in (vertex, letter) order, so the first
        // member of each class carries the shortlex-least normal form.
        let mut class_of_root: HashMap<usize, VertexId> = HashMap::new();
        let new_count = (0..pending.len()).filter(|&i| find(&mut uf, i) == i).count();
        if b.dist0.len() + new_count > opts.max_vertices {
            return Err(CayleyError::Budget { cap: opts.max_vertices, layer: n + 1 });
        }
        for i in 0..pending.len() {
            let root = find(&mut uf, i);
            let (u, s) = pending[i];
            let v = match class_of_root.get(&root) {
                Some(&v) => v,
                None => {
                    let v = b.push_vertex(u, s, n as u32 + 1);
                    class_of_root.insert(root, v);
                    v
                }
            };
            b.set_edge(u, s, v)?;
        }
        layer_start.push(b.dist0.len());
    }

    let ball = CayleyBall {
        presentation: p.clone(),
        radius,
        letters: k,
        dist0: b.dist0,
        parent: b.parent,
        via: b.via,
        adj: b.adj,
        layer_start,
    };
    if opts.validate_cycles {
        validate_cycles(group, &ball, opts.exec)?;
    }
    if opts.dehn_cross_check {
        dehn_cross_check(group, &ball, opts.exec)?;
    }
    Ok(ball)
}

/// Every relator read from a vertex whose cycle fits in the ball closes.
pub fn validate_cycles(group: &SmallCancellationGroup, ball: &CayleyBall, exec: Exec) -> Result<(), CayleyError> {
    let members = group.closure().members();
    let failures = exec.map_range(ball.len(), |v| {
        let v = v as VertexId;
        for (mi, m) in members.iter().enumerate() {
            if ball.dist0(v) + m.word.len() / 2 > ball.radius {
                continue;
            }
            if ball.walk(v, &m.word) != Some(v) {
                return Some(CayleyError::OpenCycle { vertex: v, member: mi });
            }
        }
        None
    });
    match failures.into_iter().flatten().next() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Every edge `u -s-> t` satisfies `NF(u)·s·NF(t)⁻¹ = 1` by Dehn's algorithm.
pub fn dehn_cross_check(group: &SmallCancellationGroup, ball: &CayleyBall, exec: Exec) -> Result<(), CayleyError> {
    let failures = exec.map_range(ball.len(), |v| {
        let v = v as VertexId;
        let nf = ball.normal_form(v);
        if group.dehn_reduce(&nf) != nf {
            return Some(CayleyError::DehnMismatch { vertex: v, letter: u16::MAX });
        }
        for l in ball.letters() {
            if let Some(t) = ball.neighbor(v, l) {
                let mut w = nf.clone();
                w.0.push(l);
                let w = w.concat(&ball.normal_form(t).inverse());
                if !group.is_trivial(&w) {
                    return Some(CayleyError::DehnMismatch { vertex: v, letter: l.0 });
                }
            }
        }
        None
    });
    match failures.into_iter().flatten().next() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::free_reduce;
    use std::collections::{HashSet, VecDeque};

    fn group(rank: usize, rels: &[&str]) -> SmallCancellationGroup {
        SmallCancellationGroup::new(Presentation::from_strs(rank, rels)).unwrap()
    }

    fn opts() -> BallOptions {
        BallOptions { validate_cycles: true, dehn_cross_check: true, ..BallOptions::default() }
    }

    #[test]
    fn free_group_spheres() {
        let ball = build_ball(&group(2, &[]), 3, &opts()).unwrap();
        assert_eq!(ball.sphere_sizes(), vec![1, 4, 12, 36]);
        // independent hash-set BFS on reduced words
        let mut seen: HashSet<Word> = HashSet::new();
        let mut q = VecDeque::from([(Word::empty(), 0usize)]);
        let mut counts = vec![0usize; 4];
        seen.insert(Word::empty());
        while let Some((w, d)) = q.pop_front() {
            counts[d] += 1;
            if d == 3 {
                continue;
            }
            for l in 0..4u16 {
                let mut n = w.clone();
                n.0.push(Letter(l));
                let n = free_reduce(&n);
                if seen.insert(n.clone()) {
                    q.push_back((n, d + 1));
                }
            }
        }
        assert_eq!(counts, ball.sphere_sizes());
    }

    #[test]
    fn z_line() {
        let ball = build_ball(&group(1, &[]), 4, &opts()).unwrap();
        assert_eq!(ball.sphere_sizes(), vec![1, 2, 2, 2, 2]);
    }

    #[test]
    fn normal_forms_are_shortlex_sorted() {
        let ball = build_ball(&group(4, &["abABcdCD"]), 3, &opts()).unwrap();
        let nfs: Vec<Word> = (0..ball.len() as VertexId).map(|v| ball.normal_form(v)).collect();
        for w in nfs.windows(2) {
            assert_eq!(w[0].shortlex_cmp(&w[1]), std::cmp::Ordering::Less);
        }
        for (v, nf) in nfs.iter().enumerate() {
            assert_eq!(ball.vertex_of(nf), Some(v as VertexId));
            assert_eq!(nf.len(), ball.dist0(v as VertexId));
        }
    }

    #[test]
    fn genus2_sphere_sizes() {
        // 8·7^(n-1) reduced words up to length 3; at length 4 the 16 ways
        // to split a relator into two halves identify 8 pairs of words.
        let g = group(4, &["abABcdCD"]);
        let ball = build_ball(&g, 4, &opts()).unwrap();
        assert_eq!(ball.sphere_sizes(), vec![1, 8, 56, 392, 8 * 343 - 8]);
        let nfs: Vec<Word> = ball.sphere(4).map(|v| ball.normal_form(v)).collect();
        for (i, a) in nfs.iter().enumerate().step_by(3) {
            for b in &nfs[i + 1..] {
                assert!(!g.is_trivial(&a.concat(&b.inverse())));
            }
        }
    }

    #[test]
    fn genus3_strictly_increasing() {
        let ball = build_ball(&group(6, &["abABcdCDefEF"]), 4, &opts()).unwrap();
        let s = ball.sphere_sizes();
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn modes_agree() {
        let g = group(2, &["abaBBBabbaaBa"]);
        let seq = build_ball(&g, 6, &BallOptions { exec: Exec::Sequential, ..opts() }).unwrap();
        let par = build_ball(&g, 6, &BallOptions { exec: Exec::Parallel, ..opts() }).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn budget_is_enforced() {
        let g = group(2, &[]);
        let o = BallOptions { max_vertices: 10, ..BallOptions::default() };
        assert!(matches!(build_ball(&g, 3, &o), Err(CayleyError::Budget { .. })));
    }

    #[test]
    fn edges_are_symmetric_and_layered() {
        let ball = build_ball(&group(4, &["abABcdCD"]), 4, &BallOptions::default()).unwrap();
        for v in 0..ball.len() as VertexId {
            for l in ball.letters() {
                if let Some(t) = ball.neighbor(v, l) {
                    assert_eq!(ball.neighbor(t, l.inverse()), Some(v));
                    assert!(ball.dist0(v).abs_diff(ball.dist0(t)) <= 1);
                }
            }
        }
    }
}
