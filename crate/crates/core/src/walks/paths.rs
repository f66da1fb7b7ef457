use serde::{Deserialize, Serialize};

use super::WalkError;
use crate::cayley::{CayleyBall, CayleyError, GeodesicPath, VertexId};
use crate::exec::Exec;
use crate::metrics::geometry::SegmentFields;
use crate::metrics::intersection_function;
use crate::words::Word;

/// A path given by the group element at its start and its label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledPath {
    pub start: Word,
    pub word: Word,
}

impl LabelledPath {
    pub fn from_identity(word: Word) -> LabelledPath {
        LabelledPath { start: Word::empty(), word }
    }

    pub fn sub(&self, s: usize, t: usize) -> LabelledPath {
        LabelledPath { start: self.start.concat(&Word(self.word.0[..s].to_vec())), word: Word(self.word.0[s..t].to_vec()) }
    }

    pub fn vertices(&self, ball: &CayleyBall) -> Result<Vec<VertexId>, WalkError> {
        let mut v = ball.vertex_of(&self.start).ok_or(WalkError::Exit { reachable: 0 })?;
        let mut out = vec![v];
        for (i, &l) in self.word.letters().iter().enumerate() {
            v = ball.neighbor(v, l).ok_or(WalkError::Exit { reachable: i })?;
            out.push(v);
        }
        Ok(out)
    }
}

/// `α ∗_T β`: β translated so that it starts where α ends.
pub fn translated_concat(ball: &CayleyBall, alpha: &LabelledPath, beta: &LabelledPath) -> Result<LabelledPath, WalkError> {
    let out = LabelledPath { start: alpha.start.clone(), word: alpha.word.concat(&beta.word) };
    out.vertices(ball)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Gamma,
    Beta,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub kind: SegmentKind,
    /// 1-based copy number.
    pub index: usize,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QabPath {
    pub path: LabelledPath,
    pub vertices: Vec<VertexId>,
    pub segments: Vec<Segment>,
}

impl QabPath {
    pub fn segment_vertices(&self, s: &Segment) -> &[VertexId] {
        &self.vertices[s.start..=s.end]
    }
}

/// `γ̂ ∗_T β̂ ∗_T γ̂ ∗_T … ∗_T γ̂` with `blocks` segments, from the identity.
pub fn build_qab(ball: &CayleyBall, gamma: &GeodesicPath, beta: &GeodesicPath, blocks: usize) -> Result<QabPath, WalkError> {
    if blocks < 3 || blocks.is_multiple_of(2) {
        return Err(WalkError::Blocks(blocks));
    }
    let mut path = LabelledPath::from_identity(Word::empty());
    let mut segments = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let (kind, w) = if b % 2 == 0 { (SegmentKind::Gamma, gamma) } else { (SegmentKind::Beta, beta) };
        let start = path.word.len();
        path = translated_concat(ball, &path, &LabelledPath::from_identity(w.word.clone()))?;
        segments.push(Segment { kind, index: b / 2 + 1, start, end: path.word.len() });
    }
    let vertices = path.vertices(ball)?;
    Ok(QabPath { path, vertices, segments })
}

/// Projection of everything before a γ-block onto that block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockProjection {
    pub block: usize,
    pub diameter: usize,
}

impl QabPath {
    fn segment_path(&self, ball: &CayleyBall, s: &Segment) -> Result<GeodesicPath, WalkError> {
        let word = Word(self.path.word.0[s.start..s.end].to_vec());
        GeodesicPath::from_word(ball, self.vertices[s.start], &word).ok_or(WalkError::Exit { reachable: s.start })
    }

    /// For each γ-block after the first, the diameter of the projection of
    /// the prefix path ending where that block starts.
    pub fn block_projections(&self, ball: &CayleyBall, exec: Exec) -> Result<Vec<BlockProjection>, WalkError> {
        let mut out = Vec::new();
        for s in self.segments.iter().filter(|s| s.kind == SegmentKind::Gamma && s.index > 1) {
            let target = self.segment_path(ball, s)?;
            let d = projection_diameter(ball, &target, &self.vertices[..=s.start], exec)?;
            out.push(BlockProjection { block: s.index, diameter: d.diameter });
        }
        Ok(out)
    }

    /// Set distance between two segments.
    pub fn segment_distance(&self, ball: &CayleyBall, a: &Segment, b: &Segment) -> Result<usize, WalkError> {
        let target = self.segment_vertices(b);
        let mut best = usize::MAX;
        for &x in self.segment_vertices(a) {
            best = best.min(ball.distance_to_set(x, target)?);
        }
        Ok(best)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionDiameter {
    pub diameter: usize,
    /// Probe vertices whose projections contain the two extreme points of
    /// the target, with those points' indices.
    pub low: (VertexId, usize),
    pub high: (VertexId, usize),
}

/// Diameter of the union of closest-point projections of `probe` onto a
/// geodesic `target`.
pub fn projection_diameter(
    ball: &CayleyBall,
    target: &GeodesicPath,
    probe: &[VertexId],
    exec: Exec,
) -> Result<ProjectionDiameter, WalkError> {
    let fields = SegmentFields::new(ball, target, exec);
    let mut low = (VertexId::MAX, usize::MAX);
    let mut high = (VertexId::MAX, 0);
    for &y in probe {
        let (lo, hi, _) = fields.project(y).ok_or(CayleyError::Uncertified { from: y, to: target.start() })?;
        if lo < low.1 {
            low = (y, lo);
        }
        if hi > high.1 || high.0 == VertexId::MAX {
            high = (y, hi);
        }
    }
    if probe.is_empty() {
        return Err(CayleyError::EmptyTarget.into());
    }
    Ok(ProjectionDiameter { diameter: high.1 - low.1, low, high })
}

/// A geodesic word of the given length maximizing `max ρ`, shortlex-first
/// among ties, together with that maximum.
pub fn worst_geodesic(ball: &CayleyBall, length: usize) -> Option<(Word, usize)> {
    let p = ball.presentation();
    let tmax = p.max_relator_len().max(1);
    let mut best: Option<(Word, usize)> = None;
    let mut stack = vec![(ball.identity(), Vec::new())];
    while let Some((v, w)) = stack.pop() {
        if w.len() == length {
            let w = Word(w);
            let rho = intersection_function(p, &w, tmax).max();
            let better = match &best {
                None => true,
                Some((bw, br)) => rho > *br || (rho == *br && w.shortlex_cmp(bw).is_lt()),
            };
            if better {
                best = Some((w, rho));
            }
            continue;
        }
        if ball.dist0(v) == ball.radius() {
            continue;
        }
        for l in ball.geodesic_letters(v) {
            let mut next = w.clone();
            next.push(l);
            stack.push((ball.neighbor(v, l).unwrap(), next));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_ball, BallOptions, SmallCancellationGroup};
    use crate::presentation::Presentation;

    fn f2(r: usize) -> CayleyBall {
        build_ball(&SmallCancellationGroup::new(Presentation::free(2)).unwrap(), r, &BallOptions::default()).unwrap()
    }

    #[test]
    fn concat_moves_beta_to_alpha_end() {
        let b = f2(5);
        let p = b.presentation();
        let alpha = LabelledPath { start: p.parse_word("b").unwrap(), word: p.parse_word("ab").unwrap() };
        let beta = LabelledPath { start: p.parse_word("AA").unwrap(), word: p.parse_word("a").unwrap() };
        let c = translated_concat(&b, &alpha, &beta).unwrap();
        let v = c.vertices(&b).unwrap();
        assert_eq!(v[3], b.vertex_of(&p.parse_word("baba").unwrap()).unwrap());
        let empty = LabelledPath { start: alpha.start.clone(), word: Word::empty() };
        assert_eq!(translated_concat(&b, &empty, &beta).unwrap().word, beta.word);
    }

    #[test]
    fn qab_blocks() {
        let b = f2(9);
        let p = b.presentation();
        let g = GeodesicPath::from_word(&b, 0, &p.parse_word("aa").unwrap()).unwrap();
        let e = GeodesicPath::from_word(&b, 0, &p.parse_word("b").unwrap()).unwrap();
        let q = build_qab(&b, &g, &e, 3).unwrap();
        assert_eq!(p.format_word(&q.path.word), "aabaa");
        assert_eq!(q.segments.iter().map(|s| (s.kind, s.index)).collect::<Vec<_>>(), [
            (SegmentKind::Gamma, 1),
            (SegmentKind::Beta, 1),
            (SegmentKind::Gamma, 2)
        ]);
        assert!(matches!(build_qab(&b, &g, &e, 4), Err(WalkError::Blocks(4))));
        assert!(matches!(build_qab(&b, &g, &e, 7), Err(WalkError::Exit { reachable: 9 })));
        let none = GeodesicPath::from_word(&b, 0, &Word::empty()).unwrap();
        assert_eq!(p.format_word(&build_qab(&b, &g, &none, 5).unwrap().path.word), "aaaaaa");
    }

    #[test]
    fn projection_of_target_onto_itself() {
        let b = f2(6);
        let p = b.presentation();
        let g = GeodesicPath::from_word(&b, 0, &p.parse_word("abb").unwrap()).unwrap();
        assert_eq!(projection_diameter(&b, &g, &g.vertices, Exec::Sequential).unwrap().diameter, 3);
        assert_eq!(projection_diameter(&b, &g, &g.vertices[1..2], Exec::Sequential).unwrap().diameter, 0);
        let branch: Vec<VertexId> = ["a", "aB", "aBB", "aBa"].iter().map(|w| b.vertex_of(&p.parse_word(w).unwrap()).unwrap()).collect();
        assert_eq!(projection_diameter(&b, &g, &branch, Exec::Parallel).unwrap().diameter, 0);
    }

    #[test]
    fn worst_geodesic_in_one_relator_group() {
        let b = build_ball(
            &SmallCancellationGroup::new(Presentation::from_strs(3, &["ACCaBcbCAB"])).unwrap(),
            5,
            &BallOptions::default(),
        )
        .unwrap();
        let (w, rho) = worst_geodesic(&b, 5).unwrap();
        assert_eq!((w.len(), rho), (5, 5));
        assert_eq!(worst_geodesic(&f2(3), 3).unwrap().1, 0);
    }
}
