//! Certified distance, geodesic and projection queries on a ball.
//!
//! A ball-restricted distance `D` between `x` and `y` is exact whenever
//! `|x| + |y| + D ≤ 2R`: every geodesic between them then stays within
//! distance `R` of the identity.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::words::{Letter, Word};

use super::{CayleyBall, CayleyError, VertexId};

const UNREACHED: u32 = u32::MAX;

/// Ball-restricted BFS distances from one source.
#[derive(Debug, Clone)]
pub struct DistanceField {
    pub source: VertexId,
    dist: Vec<u32>,
}

impl DistanceField {
    /// Ball-restricted distance, `None` if unreachable inside the ball.
    pub fn raw(&self, v: VertexId) -> Option<usize> {
        let d = self.dist[v as usize];
        (d != UNREACHED).then_some(d as usize)
    }
}

/// A path in the ball with its word label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicPath {
    pub vertices: Vec<VertexId>,
    pub word: Word,
}

impl GeodesicPath {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("paths have a start vertex")
    }

    /// The path labelled `w` from `from`; `None` if it leaves the ball.
    pub fn from_word(ball: &CayleyBall, from: VertexId, w: &Word) -> Option<GeodesicPath> {
        let mut vertices = Vec::with_capacity(w.len() + 1);
        vertices.push(from);
        let mut v = from;
        for &l in w.letters() {
            v = ball.neighbor(v, l)?;
            vertices.push(v);
        }
        Some(GeodesicPath { vertices, word: w.clone() })
    }
}

impl CayleyBall {
    pub fn distance_field(&self, source: VertexId) -> DistanceField {
        self.bounded_field(source, usize::MAX)
    }

    fn bounded_field(&self, source: VertexId, max_depth: usize) -> DistanceField {
        let mut dist = vec![UNREACHED; self.len()];
        dist[source as usize] = 0;
        let mut q = VecDeque::from([source]);
        while let Some(v) = q.pop_front() {
            let d = dist[v as usize];
            if d as usize >= max_depth {
                continue;
            }
            for l in self.letters() {
                if let Some(t) = self.neighbor(v, l) {
                    if dist[t as usize] == UNREACHED {
                        dist[t as usize] = d + 1;
                        q.push_back(t);
                    }
                }
            }
        }
        DistanceField { source, dist }
    }

    /// True when a ball distance `d` between `x` and `y` is exact.
    pub fn certifies(&self, x: VertexId, y: VertexId, d: usize) -> bool {
        self.dist0(x) + self.dist0(y) + d <= 2 * self.radius
    }

    /// Certified distance from a precomputed field.
    pub fn field_distance(&self, field: &DistanceField, y: VertexId) -> Result<usize, CayleyError> {
        match field.raw(y) {
            Some(d) if self.certifies(field.source, y, d) => Ok(d),
            _ => Err(CayleyError::Uncertified { from: field.source, to: y }),
        }
    }

    /// Exact distance, or `Uncertified`.
    pub fn distance(&self, x: VertexId, y: VertexId) -> Result<usize, CayleyError> {
        let budget = (2 * self.radius).saturating_sub(self.dist0(x) + self.dist0(y));
        let field = self.bounded_field(x, budget);
        self.field_distance(&field, y)
    }

    /// Shortlex-least geodesic from `u` to `v`.
    pub fn geodesic(&self, u: VertexId, v: VertexId) -> Result<GeodesicPath, CayleyError> {
        let budget = (2 * self.radius).saturating_sub(self.dist0(u) + self.dist0(v));
        let to_v = self.bounded_field(v, budget);
        let d = self.field_distance(&to_v, u)?;
        Ok(self.descend(&to_v, u, d))
    }

    /// Greedy smallest-letter descent along a distance field.
    pub(crate) fn descend(&self, to_target: &DistanceField, from: VertexId, d: usize) -> GeodesicPath {
        let mut vertices = vec![from];
        let mut word = Vec::with_capacity(d);
        let mut cur = from;
        for left in (0..d).rev() {
            let (l, t) = self
                .letters()
                .find_map(|l| {
                    self.neighbor(cur, l).filter(|&t| to_target.raw(t) == Some(left)).map(|t| (l, t))
                })
                .expect("distance field admits a descent");
            word.push(l);
            vertices.push(t);
            cur = t;
        }
        GeodesicPath { vertices, word: Word(word) }
    }

    /// All points of `target` at minimal distance from `x`, with that distance.
    pub fn project(&self, target: &[VertexId], x: VertexId) -> Result<(Vec<VertexId>, usize), CayleyError> {
        let field = self.distance_field(x);
        self.project_with(&field, target)
    }

    pub fn project_with(&self, field: &DistanceField, target: &[VertexId]) -> Result<(Vec<VertexId>, usize), CayleyError> {
        if target.is_empty() {
            return Err(CayleyError::EmptyTarget);
        }
        let x = field.source;
        let mut m = usize::MAX;
        for &g in target {
            if let Some(d) = field.raw(g) {
                m = m.min(d);
            }
        }
        if m == usize::MAX {
            return Err(CayleyError::Uncertified { from: x, to: target[0] });
        }
        for &g in target {
            if !self.certifies(x, g, m) {
                return Err(CayleyError::Uncertified { from: x, to: g });
            }
        }
        let mut set: Vec<VertexId> = target.iter().copied().filter(|&g| field.raw(g) == Some(m)).collect();
        set.sort_unstable();
        set.dedup();
        Ok((set, m))
    }

    /// Certified `d(x, target)`, by a BFS that stops at the first layer
    /// meeting the target.
    pub fn distance_to_set(&self, x: VertexId, target: &[VertexId]) -> Result<usize, CayleyError> {
        let far = target.iter().map(|&g| self.dist0(g)).max().ok_or(CayleyError::EmptyTarget)?;
        let mut seen = std::collections::HashSet::from([x]);
        let mut layer = vec![x];
        let mut m = 0;
        while !layer.iter().any(|v| target.contains(v)) {
            if layer.is_empty() || self.dist0(x) + far + m >= 2 * self.radius {
                return Err(CayleyError::Uncertified { from: x, to: target[0] });
            }
            let mut next = Vec::new();
            for &v in &layer {
                for l in self.letters() {
                    if let Some(t) = self.neighbor(v, l) {
                        if seen.insert(t) {
                            next.push(t);
                        }
                    }
                }
            }
            layer = next;
            m += 1;
        }
        if self.dist0(x) + far + m > 2 * self.radius {
            return Err(CayleyError::Uncertified { from: x, to: target[0] });
        }
        Ok(m)
    }

    /// Diameter of a vertex set, certified pairwise.
    pub fn diameter(&self, set: &[VertexId]) -> Result<(usize, VertexId, VertexId), CayleyError> {
        let mut best = (0, set.first().copied().unwrap_or(0), set.first().copied().unwrap_or(0));
        for (i, &a) in set.iter().enumerate() {
            if i + 1 == set.len() {
                break;
            }
            let field = self.distance_field(a);
            for &b in &set[i + 1..] {
                let d = self.field_distance(&field, b)?;
                if d > best.0 {
                    best = (d, a, b);
                }
            }
        }
        Ok(best)
    }

    /// Labels of geodesic continuations: letters `s` with `|vs| = |v| + 1`.
    pub fn geodesic_letters(&self, v: VertexId) -> impl Iterator<Item = Letter> + '_ {
        let d = self.dist0(v);
        self.letters().filter(move |&l| self.neighbor(v, l).is_some_and(|t| self.dist0(t) == d + 1))
    }

    /// True if `w` read from the identity stays in the ball and every prefix
    /// is a geodesic.
    pub fn is_geodesic_word(&self, w: &Word) -> bool {
        let mut v = 0;
        for (i, &l) in w.letters().iter().enumerate() {
            match self.neighbor(v, l) {
                Some(t) if self.dist0(t) == i + 1 => v = t,
                _ => return false,
            }
        }
        true
    }
}
