//! Auxiliary paths: geodesics between anchors spaced `L` apart along γ,
//! short-cut at each junction through a relator image.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{hausdorff, trace, MltgError};
use crate::cayley::{CayleyBall, CayleyError, GeodesicPath, VertexId};
use crate::metrics::{intersection_function, IntersectionProfile};
use crate::presentation::Presentation;
use crate::smallcancel::{Origin, SymmetrizedClosure};
use crate::words::Word;

/// The short-cut at the junction `a_j` between `η_{j-1}` and `η_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bridge {
    pub junction: usize,
    /// Relator, cyclic shift and orientation read along the bridge; `None`
    /// when the bridge degenerates to the junction.
    pub relator: Option<Origin>,
    pub x: VertexId,
    pub y: VertexId,
    /// Index of `x` on `η_{j-1}`.
    pub x_index: usize,
    /// Index of `y` on `η_j`.
    pub y_index: usize,
    pub word: Word,
    /// `d(a_j, x) + d(a_j, y)`.
    pub score: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxPath {
    pub gamma: Word,
    pub scale: usize,
    pub anchors: Vec<VertexId>,
    pub etas: Vec<GeodesicPath>,
    pub bridges: Vec<Bridge>,
    pub path: GeodesicPath,
}

/// Scans every arc of length at most half its relator that starts on
/// `η_{j-1}` and ends on `η_j`. Arcs are cut where they leave the ball, which
/// is exact once the ball reaches a quarter relator beyond both geodesics.
fn bridge_at(ball: &CayleyBall, closure: &SymmetrizedClosure, j: usize, prev: &GeodesicPath, next: &GeodesicPath) -> Bridge {
    let plen = prev.len();
    let on_prev: HashMap<VertexId, usize> = prev.vertices.iter().enumerate().map(|(i, &v)| (v, plen - i)).collect();
    let on_next: HashMap<VertexId, usize> = next.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let junction = next.start();
    let mut best = Bridge { junction: j, relator: None, x: junction, y: junction, x_index: plen, y_index: 0, word: Word::empty(), score: 0 };
    let mut best_key = None;
    for m in closure.members() {
        let origin = m.origins[0];
        let half = m.word.len() / 2;
        for (xi, &x) in prev.vertices.iter().enumerate() {
            let dx = plen - xi;
            let mut v = x;
            let mut dy = usize::MAX;
            for t in 0..=half {
                if t > 0 {
                    match ball.neighbor(v, m.word.0[t - 1]) {
                        Some(u) => v = u,
                        None => break,
                    }
                }
                // an arc through a point nearer the junction is dominated
                if t > 0 && on_prev.get(&v).is_some_and(|&d| d < dx) {
                    break;
                }
                let Some(&d) = on_next.get(&v) else { continue };
                if d >= dy {
                    continue;
                }
                dy = d;
                let key = (origin, xi, t);
                if dx + dy > best.score || (dx + dy == best.score && dx + dy > 0 && Some(key) < best_key) {
                    best_key = Some(key);
                    best = Bridge {
                        junction: j,
                        relator: Some(origin),
                        x,
                        y: v,
                        x_index: xi,
                        y_index: dy,
                        word: Word(m.word.0[..t].to_vec()),
                        score: dx + dy,
                    };
                }
            }
        }
    }
    best
}

/// Builds the auxiliary path of a `2L`-locally geodesic word read from the
/// identity.
pub fn build_aux_path(ball: &CayleyBall, p: &Presentation, gamma: &Word, scale: usize) -> Result<AuxPath, MltgError> {
    if scale == 0 {
        return Err(MltgError::Spec("L must be at least 1".into()));
    }
    if gamma.len() > ball.radius() {
        return Err(MltgError::Scope { need: gamma.len(), radius: ball.radius() });
    }
    let win = (2 * scale).min(gamma.len());
    for s in 0..=gamma.len() - win {
        let w = Word(gamma.0[s..s + win].to_vec());
        if !ball.is_geodesic_word(&w) {
            return Err(MltgError::Spec(format!("γ is not {}-locally geodesic at {s}", 2 * scale)));
        }
    }
    let gv = trace(ball, gamma)?;
    let mut marks: Vec<usize> = (0..=gamma.len()).step_by(scale).collect();
    if *marks.last().unwrap() != gamma.len() {
        marks.push(gamma.len());
    }
    let anchors: Vec<VertexId> = marks.iter().map(|&i| gv[i]).collect();
    let etas = anchors
        .windows(2)
        .map(|w| ball.geodesic(w[0], w[1]))
        .collect::<Result<Vec<_>, _>>()?;
    let reach = etas.iter().flat_map(|e| &e.vertices).map(|&v| ball.dist0(v)).max().unwrap_or(0) + p.max_relator_len() / 4;
    if reach > ball.radius() {
        return Err(MltgError::Scope { need: reach, radius: ball.radius() });
    }
    let closure = SymmetrizedClosure::new(p);
    let bridges: Vec<Bridge> = (1..etas.len()).map(|j| bridge_at(ball, &closure, j, &etas[j - 1], &etas[j])).collect();
    for pair in bridges.windows(2) {
        if pair[0].y_index >= pair[1].x_index {
            return Err(MltgError::Overlap { junction: pair[1].junction });
        }
    }
    let mut word = Vec::new();
    let mut from = 0;
    for (j, eta) in etas.iter().enumerate() {
        let to = bridges.get(j).map_or(eta.len(), |b| b.x_index);
        word.extend_from_slice(&eta.word.0[from..to]);
        if let Some(b) = bridges.get(j) {
            word.extend_from_slice(b.word.letters());
            from = b.y_index;
        }
    }
    let word = Word(word);
    let path = GeodesicPath::from_word(ball, ball.identity(), &word).ok_or(CayleyError::OutsideBall)?;
    Ok(AuxPath { gamma: gamma.clone(), scale, anchors, etas, bridges, path })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxAudit {
    pub profile: IntersectionProfile,
    /// First `t` with `3ρ_p(t) > 2t`.
    pub rho_violation: Option<usize>,
    pub hausdorff_gamma: usize,
    pub subpath_hausdorff: usize,
    pub sampled_pairs: usize,
}

impl AuxAudit {
    pub fn rho_ok(&self) -> bool {
        self.rho_violation.is_none()
    }
}

pub fn audit_aux_path(ap: &AuxPath, p: &Presentation, ball: &CayleyBall) -> Result<AuxAudit, MltgError> {
    let tmax = p.max_relator_len().max(1);
    let profile = intersection_function(p, &ap.path.word, tmax);
    let rho_violation = (1..=tmax).find(|&t| 3 * profile.at(t) > 2 * t);
    let gv = trace(ball, &ap.gamma)?;
    let hausdorff_gamma = hausdorff(ball, &ap.path.vertices, &gv)?;
    let n = ap.path.len();
    let mut marks: Vec<usize> = (0..=n).step_by((n / 8).max(1)).collect();
    if *marks.last().unwrap() != n {
        marks.push(n);
    }
    let mut subpath_hausdorff = 0;
    let mut sampled_pairs = 0;
    for (i, &s) in marks.iter().enumerate() {
        for &t in &marks[i + 1..] {
            let sub = Word(ap.path.word.0[s..t].to_vec());
            if sub.len() > ball.radius() {
                return Err(MltgError::Scope { need: sub.len(), radius: ball.radius() });
            }
            let g = ball.vertex_of(&sub).ok_or(CayleyError::OutsideBall)?;
            let geo = GeodesicPath::from_word(ball, ap.path.vertices[s], &ball.normal_form(g)).ok_or(CayleyError::OutsideBall)?;
            let h = hausdorff(ball, &ap.path.vertices[s..=t], &geo.vertices)?;
            subpath_hausdorff = subpath_hausdorff.max(h);
            sampled_pairs += 1;
        }
    }
    Ok(AuxAudit { profile, rho_violation, hausdorff_gamma, subpath_hausdorff, sampled_pairs })
}
