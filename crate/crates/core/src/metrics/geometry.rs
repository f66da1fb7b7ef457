//! Contraction, bounded geodesic image and horofunctions on a ball.

use serde::{Deserialize, Serialize};

use crate::cayley::{CayleyBall, CayleyError, DistanceField, GeodesicPath, VertexId};
use crate::exec::Exec;

/// Distance fields from every vertex of a geodesic segment.
pub(crate) struct SegmentFields<'a> {
    ball: &'a CayleyBall,
    gamma: &'a GeodesicPath,
    fields: Vec<DistanceField>,
}

impl<'a> SegmentFields<'a> {
    pub(crate) fn new(ball: &'a CayleyBall, gamma: &'a GeodesicPath, exec: Exec) -> SegmentFields<'a> {
        let fields = exec.map_slice(&gamma.vertices, |&g| ball.distance_field(g));
        SegmentFields { ball, gamma, fields }
    }

    /// Indices along γ of the projection of `y`, and `d(y, γ)`; `None` when
    /// not certified.
    pub(crate) fn project(&self, y: VertexId) -> Option<(usize, usize, usize)> {
        let mut m = usize::MAX;
        for f in &self.fields {
            m = m.min(f.raw(y)?);
        }
        let (mut lo, mut hi) = (usize::MAX, 0);
        for (i, f) in self.fields.iter().enumerate() {
            if !self.ball.certifies(y, self.gamma.vertices[i], m) {
                return None;
            }
            if f.raw(y) == Some(m) {
                lo = lo.min(i);
                hi = hi.max(i);
            }
        }
        Some((lo, hi, m))
    }
}

fn check_geodesic(ball: &CayleyBall, gamma: &GeodesicPath) -> Result<(), CayleyError> {
    if gamma.vertices.is_empty() {
        return Err(CayleyError::Invalid("empty path".into()));
    }
    let d = ball.distance(gamma.start(), gamma.end())?;
    if d != gamma.len() {
        return Err(CayleyError::Invalid(format!("path of length {} spans distance {d}", gamma.len())));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub constant: usize,
    pub witness: Option<VertexId>,
    pub radius: usize,
    pub admissible: usize,
    pub skipped: usize,
}

/// Largest diameter of `π_γ(B_{d(x,γ)}(x))` over admissible `x`.
///
/// `x` is admissible when `|x| + d(x, γ) ≤ R` and every projection involved
/// is certified; other points are skipped and counted.
pub fn contraction_constant(ball: &CayleyBall, gamma: &GeodesicPath, exec: Exec) -> Result<ContractionReport, CayleyError> {
    check_geodesic(ball, gamma)?;
    let seg = SegmentFields::new(ball, gamma, exec);
    let per_x = exec.map_range(ball.len(), |x| {
        let x = x as VertexId;
        let (_, _, d) = seg.project(x)?;
        if ball.dist0(x) + d > ball.radius() {
            return None;
        }
        let local = ball.distance_field(x);
        let (mut lo, mut hi) = (usize::MAX, 0usize);
        for y in 0..ball.len() as VertexId {
            match local.raw(y) {
                Some(dy) if dy <= d => {
                    let (a, b, _) = seg.project(y)?;
                    lo = lo.min(a);
                    hi = hi.max(b);
                }
                _ => {}
            }
        }
        Some(hi - lo)
    });
    let mut report = ContractionReport { constant: 0, witness: None, radius: ball.radius(), admissible: 0, skipped: 0 };
    for (x, r) in per_x.into_iter().enumerate() {
        match r {
            Some(diam) => {
                report.admissible += 1;
                if report.witness.is_none() || diam > report.constant {
                    report.constant = diam;
                    report.witness = Some(x as VertexId);
                }
            }
            None => report.skipped += 1,
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BgiReport {
    Bounded { constant: usize, pairs: usize, radius: usize },
    UnboundedAtRadius { radius: usize, pairs: usize },
}

/// Least `D` such that every certified shortlex geodesic `λ` between ball
/// vertices with `d(γ, λ) ≥ D` has `diam π_γ(λ) ≤ D`.
pub fn bgi_constant(ball: &CayleyBall, gamma: &GeodesicPath, exec: Exec) -> Result<BgiReport, CayleyError> {
    match check_geodesic(ball, gamma) {
        Err(CayleyError::Uncertified { .. }) => return Ok(BgiReport::UnboundedAtRadius { radius: ball.radius(), pairs: 0 }),
        r => r?,
    }
    let seg = SegmentFields::new(ball, gamma, exec);
    let proj: Vec<Option<(usize, usize, usize)>> = exec.map_range(ball.len(), |y| seg.project(y as VertexId));
    // (d(γ, λ), diam π_γ(λ)) for every certified pair
    let samples: Vec<Vec<(usize, usize)>> = exec.map_range(ball.len(), |v| {
        let v = v as VertexId;
        let to_v = ball.distance_field(v);
        let mut out = Vec::new();
        for u in 0..ball.len() as VertexId {
            let Ok(d) = ball.field_distance(&to_v, u) else { continue };
            let path = ball.descend(&to_v, u, d);
            let (mut lo, mut hi, mut dist) = (usize::MAX, 0usize, usize::MAX);
            let mut certified = true;
            for &y in &path.vertices {
                match proj[y as usize] {
                    Some((a, b, m)) => {
                        lo = lo.min(a);
                        hi = hi.max(b);
                        dist = dist.min(m);
                    }
                    None => {
                        certified = false;
                        break;
                    }
                }
            }
            if certified {
                out.push((dist, hi - lo));
            }
        }
        out
    });
    let samples: Vec<(usize, usize)> = samples.into_iter().flatten().collect();
    let max_dist = samples.iter().map(|s| s.0).max().unwrap_or(0);
    for d in 0..=max_dist {
        if samples.iter().all(|&(dist, diam)| dist < d || diam <= d) {
            return Ok(BgiReport::Bounded { constant: d, pairs: samples.len(), radius: ball.radius() });
        }
    }
    Ok(BgiReport::UnboundedAtRadius { radius: ball.radius(), pairs: samples.len() })
}

/// `ρ_y(z) = d(z, y) − d(x₀, y)`.
pub fn horofunction_value(ball: &CayleyBall, y: VertexId, z: VertexId) -> Result<i64, CayleyError> {
    Ok(ball.distance(z, y)? as i64 - ball.distance(0, y)? as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub first: i64,
    pub second: i64,
    pub t1: usize,
    pub t2: usize,
}

fn diff_at(ball: &CayleyBall, gamma: &GeodesicPath, z: VertexId, zz: VertexId) -> Option<(i64, usize)> {
    (0..gamma.vertices.len()).rev().find_map(|t| {
        let y = gamma.vertices[t];
        let a = ball.distance(z, y).ok()? as i64;
        let b = ball.distance(zz, y).ok()? as i64;
        Some((a - b, t))
    })
}

/// `(ρ_{γ1(t)}(z) − ρ_{γ1(t)}(Z), ρ_{γ2(t')}(z) − ρ_{γ2(t')}(Z))` at the
/// largest certified `t`, `t'`, with `z = γ1(s)` and `Z = γ1(S)`.
pub fn horofunction_separation(
    ball: &CayleyBall,
    g1: &GeodesicPath,
    g2: &GeodesicPath,
    s: usize,
    big_s: usize,
) -> Result<Separation, CayleyError> {
    if s > big_s || big_s >= g1.vertices.len() {
        return Err(CayleyError::Invalid(format!("need s ≤ S < {}", g1.vertices.len())));
    }
    let (z, zz) = (g1.vertices[s], g1.vertices[big_s]);
    let unc = CayleyError::Uncertified { from: z, to: zz };
    let (first, t1) = diff_at(ball, g1, z, zz).ok_or(unc.clone())?;
    let (second, t2) = diff_at(ball, g2, z, zz).ok_or(unc)?;
    Ok(Separation { first, second, t1, t2 })
}

/// For every closure member `r` and every `m ≤ |r|`, the point reached by
/// reading `r[..m]` from the identity has distance `min(m, |r| − m)`.
///
/// By vertex transitivity this is the statement that every relator cycle is
/// isometrically embedded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub cycles: usize,
    pub pairs: usize,
    pub violations: Vec<(usize, usize, usize)>,
}

pub fn relator_isometry_check(ball: &CayleyBall, exec: Exec) -> IsometryReport {
    let closure = crate::smallcancel::SymmetrizedClosure::new(ball.presentation());
    let members = closure.members();
    let per = exec.map_slice(members, |m| {
        let n = m.word.len();
        let mut bad = Vec::new();
        let mut v = Some(0);
        for (i, &l) in m.word.letters().iter().enumerate() {
            v = v.and_then(|x| ball.neighbor(x, l));
            let expect = (i + 1).min(n - i - 1);
            match v {
                Some(x) if ball.dist0(x) == expect => {}
                _ => bad.push(i + 1),
            }
        }
        (n, bad)
    });
    let mut report = IsometryReport { cycles: members.len(), pairs: 0, violations: Vec::new() };
    for (mi, (n, bad)) in per.into_iter().enumerate() {
        report.pairs += n;
        for m in bad {
            report.violations.push((mi, m, n));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_ball, BallOptions, SmallCancellationGroup};
    use crate::presentation::Presentation;
    use crate::words::Word;

    fn ball(rank: usize, rels: &[&str], r: usize) -> CayleyBall {
        let g = SmallCancellationGroup::new(Presentation::from_strs(rank, rels)).unwrap();
        build_ball(&g, r, &BallOptions::default()).unwrap()
    }

    fn path(b: &CayleyBall, from: &str, w: &str) -> GeodesicPath {
        let s = b.vertex_of(&b.presentation().parse_word(from).unwrap()).unwrap();
        GeodesicPath::from_word(b, s, &b.presentation().parse_word(w).unwrap()).unwrap()
    }

    #[test]
    fn tree_contraction_is_zero() {
        let b = ball(2, &[], 5);
        let g = path(&b, "AA", "aaaa");
        let rep = contraction_constant(&b, &g, Exec::Parallel).unwrap();
        assert_eq!(rep.constant, 0);
        assert!(rep.admissible > 0);
        let single = GeodesicPath::from_word(&b, 0, &Word::empty()).unwrap();
        assert_eq!(contraction_constant(&b, &single, Exec::Sequential).unwrap().constant, 0);
    }

    #[test]
    fn tree_bgi_is_one() {
        let b = ball(2, &[], 3);
        let g = path(&b, "A", "aa");
        match bgi_constant(&b, &g, Exec::Parallel).unwrap() {
            BgiReport::Bounded { constant, .. } => assert_eq!(constant, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn horofunction_examples() {
        let b = ball(2, &[], 8);
        let y = b.vertex_of(&b.presentation().parse_word("abb").unwrap()).unwrap();
        assert_eq!(horofunction_value(&b, y, 0).unwrap(), 0);
        assert_eq!(horofunction_value(&b, y, y).unwrap(), -3);
        let g1 = path(&b, "", "aaaaa");
        let g2 = path(&b, "", "bbbbb");
        let s = horofunction_separation(&b, &g1, &g2, 1, 3).unwrap();
        assert_eq!((s.first, s.second, s.t1, s.t2), (2, -2, 5, 5));
        let same = horofunction_separation(&b, &g1, &g1, 1, 3).unwrap();
        assert_eq!((same.first, same.second), (2, 2));
        let zero = horofunction_separation(&b, &g1, &g2, 2, 2).unwrap();
        assert_eq!((zero.first, zero.second), (0, 0));
    }

    #[test]
    fn relator_cycles_are_isometric() {
        let b = ball(4, &["abABcdCD"], 6);
        let rep = relator_isometry_check(&b, Exec::Parallel);
        assert!(rep.violations.is_empty());
        assert_eq!(rep.cycles, 16);
    }
}
