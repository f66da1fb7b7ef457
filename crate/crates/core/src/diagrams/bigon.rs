//! Geodesic n-gon conditions and the bigon classification.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::{ArcDecomposition, DiagramError, DiskDiagram};
use crate::smallcancel::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgonViolation {
    pub face: usize,
    /// 1: boundary face with one exterior arc needs interior degree ≥ 4.
    /// 2: interior face needs at least 7 arcs.
    pub condition: u8,
    pub interior_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NgonReport {
    pub verdict: Verdict,
    pub violations: Vec<NgonViolation>,
    pub arcs: ArcDecomposition,
}

pub fn ngon_conditions(d: &DiskDiagram, n: usize) -> Result<NgonReport, DiagramError> {
    if !d.is_simple() {
        return Err(DiagramError::Precondition("diagram is not simple".into()));
    }
    if d.sides.len() != n {
        return Err(DiagramError::Precondition(format!("expected {n} sides, found {}", d.sides.len())));
    }
    let arcs = d.arcs()?;
    let mut violations = Vec::new();
    for (face, fa) in arcs.faces.iter().enumerate() {
        let interior_degree = fa.interior_degree;
        if fa.exterior_degree == 0 && interior_degree < 7 {
            violations.push(NgonViolation { face, condition: 2, interior_degree });
        }
        if fa.exterior_degree == 1 && interior_degree < 4 {
            violations.push(NgonViolation { face, condition: 1, interior_degree });
        }
    }
    Ok(NgonReport { verdict: Verdict::from_bool(violations.is_empty()), violations, arcs })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BigonShape {
    SingleFace,
    I1 { chain: Vec<usize> },
    NotClassified { face: usize },
}

/// Single face, or a chain of faces each touching both sides with
/// consecutive faces sharing exactly one interior arc.
pub fn classify_bigon(d: &DiskDiagram) -> Result<BigonShape, DiagramError> {
    let report = ngon_conditions(d, 2)?;
    if !report.verdict.passed() {
        return Err(DiagramError::Precondition(format!("not a combinatorial geodesic bigon: {:?}", report.violations)));
    }
    if d.faces.len() == 1 {
        return Ok(BigonShape::SingleFace);
    }
    let mut face_of = BTreeMap::new();
    for (f, darts) in d.faces.iter().enumerate() {
        for &x in darts {
            face_of.insert(x, f);
        }
    }
    let mut shared: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (f, fa) in report.arcs.faces.iter().enumerate() {
        let sides: Vec<usize> = fa.arcs.iter().filter_map(|a| a.side).collect();
        if !(sides.contains(&0) && sides.contains(&1)) {
            return Ok(BigonShape::NotClassified { face: f });
        }
        for a in fa.arcs.iter().filter(|a| !a.exterior) {
            let g = face_of[&-a.darts[0]];
            if g == f {
                return Ok(BigonShape::NotClassified { face: f });
            }
            *shared.entry((f.min(g), f.max(g))).or_default() += 1;
        }
    }
    let mut adj = vec![Vec::new(); d.faces.len()];
    for (&(f, g), &count) in &shared {
        // each shared arc is seen from both faces
        if count != 2 {
            return Ok(BigonShape::NotClassified { face: f });
        }
        adj[f].push(g);
        adj[g].push(f);
    }
    if let Some(f) = (0..adj.len()).find(|&f| adj[f].len() > 2 || adj[f].is_empty()) {
        return Ok(BigonShape::NotClassified { face: f });
    }
    let start = face_of[&d.boundary[d.sides[0]]];
    if adj[start].len() != 1 {
        return Ok(BigonShape::NotClassified { face: start });
    }
    let mut chain = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = adj[cur].iter().find(|&&g| g != prev) {
        if chain.contains(&next) {
            return Ok(BigonShape::NotClassified { face: next });
        }
        chain.push(next);
        prev = cur;
        cur = next;
    }
    if chain.len() != d.faces.len() {
        let missing = (0..d.faces.len()).find(|f| !chain.contains(f)).unwrap();
        return Ok(BigonShape::NotClassified { face: missing });
    }
    Ok(BigonShape::I1 { chain })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::words::Word;

    #[test]
    fn single_face_bigon_passes() {
        let d = single_face(&Word((0..6).map(|i| crate::words::Letter(i % 4)).collect()), vec![0, 3]);
        assert!(ngon_conditions(&d, 2).unwrap().verdict.passed());
        assert_eq!(classify_bigon(&d).unwrap(), BigonShape::SingleFace);
    }

    #[test]
    fn interior_hexagon_fails_condition_two() {
        let r = ngon_conditions(&flower(6), 2).unwrap();
        assert!(r.violations.iter().any(|v| v.face == 0 && v.condition == 2 && v.interior_degree == 6));
        let r = ngon_conditions(&flower(7), 2).unwrap();
        assert!(!r.violations.iter().any(|v| v.condition == 2));
    }

    #[test]
    fn degree_three_boundary_face_fails_condition_one() {
        let r = ngon_conditions(&fan(), 2).unwrap();
        assert!(r.violations.contains(&NgonViolation { face: 0, condition: 1, interior_degree: 3 }));
    }

    #[test]
    fn ladders_are_chains() {
        for k in 2..=5 {
            for seg in 1..=3 {
                let d = ladder(k, seg);
                assert!(ngon_conditions(&d, 2).unwrap().verdict.passed());
                assert_eq!(classify_bigon(&d).unwrap(), BigonShape::I1 { chain: (0..k).collect() });
            }
        }
        assert_eq!(classify_bigon(&ladder(1, 2)).unwrap(), BigonShape::SingleFace);
    }

    #[test]
    fn gate_rejects_bad_inputs() {
        for k in 3..=7 {
            assert!(matches!(classify_bigon(&wheel(k)), Err(DiagramError::Precondition(_))));
        }
        assert!(matches!(ngon_conditions(&wedge(), 2), Err(DiagramError::Precondition(_))));
        assert!(matches!(ngon_conditions(&ladder(2, 1), 3), Err(DiagramError::Precondition(_))));
    }
}
