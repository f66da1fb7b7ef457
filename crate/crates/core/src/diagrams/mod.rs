//! Disk diagrams: a planar 2-complex with labelled edges.
//!
//! A dart is a signed 1-based edge index: `+e` runs `src → dst` reading the
//! edge label, `-e` runs back reading its inverse. Faces and the boundary are
//! dart cycles with the region on their left, so the outer face is the
//! boundary reversed and inverted.

pub mod bigon;
pub mod fixtures;
pub mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::Presentation;
use crate::smallcancel::{SymmetrizedClosure, Verdict};
use crate::words::{Letter, Word};

pub use bigon::{classify_bigon, ngon_conditions, BigonShape, NgonReport, NgonViolation};
pub use search::{interior_arcs_are_pieces, minimal_area, search_small_diagrams, SearchOptions};

pub type Dart = i32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: Letter,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DiskDiagram {
    pub vertices: usize,
    pub edges: Vec<Edge>,
    pub faces: Vec<Vec<Dart>>,
    pub boundary: Vec<Dart>,
    /// Boundary positions where each marked side begins.
    #[serde(default)]
    pub sides: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum DiagramError {
    #[error("edge {edge} has an endpoint outside the vertex range")]
    BadEndpoint { edge: usize },
    #[error("dart {dart} does not name an edge")]
    BadDart { dart: Dart },
    #[error("face {face} is empty")]
    EmptyFace { face: usize },
    #[error("cycle {cycle} breaks after position {position}")]
    OpenCycle { cycle: String, position: usize },
    #[error("dart {dart} is used {count} times")]
    DartUse { dart: Dart, count: usize },
    #[error("vertex {vertex} is not a disk neighbourhood ({orbits} rotation orbits)")]
    NotPlanar { vertex: usize, orbits: usize },
    #[error("vertex {vertex} is isolated")]
    Isolated { vertex: usize },
    #[error("diagram is disconnected")]
    Disconnected,
    #[error("Euler characteristic {chi} instead of 2")]
    Euler { chi: i64 },
    #[error("side markers {0:?} are not increasing boundary positions")]
    BadSides(Vec<usize>),
    #[error("label {label:?} on edge {edge} is outside the alphabet")]
    BadLabel { edge: usize, label: Letter },
    #[error("{0}")]
    Precondition(String),
    #[error("search budget of {0} states exceeded")]
    Budget(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub darts: Vec<Dart>,
    pub exterior: bool,
    /// Side holding an exterior arc.
    pub side: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceArcs {
    pub arcs: Vec<Arc>,
    pub interior_degree: usize,
    pub exterior_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcDecomposition {
    pub faces: Vec<FaceArcs>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub verdict: Verdict,
    /// Faces whose label is outside the closure.
    pub bad_faces: Vec<usize>,
    pub arcs: ArcDecomposition,
}

fn slot(d: Dart) -> usize {
    2 * (d.unsigned_abs() as usize - 1) + (d < 0) as usize
}

fn dart_of(slot: usize) -> Dart {
    let e = (slot / 2 + 1) as Dart;
    if slot.is_multiple_of(2) {
        e
    } else {
        -e
    }
}

impl DiskDiagram {
    pub fn edge_of(&self, d: Dart) -> &Edge {
        &self.edges[d.unsigned_abs() as usize - 1]
    }

    pub fn src(&self, d: Dart) -> usize {
        let e = self.edge_of(d);
        if d > 0 {
            e.src
        } else {
            e.dst
        }
    }

    pub fn dst(&self, d: Dart) -> usize {
        self.src(-d)
    }

    pub fn label(&self, d: Dart) -> Letter {
        let l = self.edge_of(d).label;
        if d > 0 {
            l
        } else {
            l.inverse()
        }
    }

    pub fn word(&self, darts: &[Dart]) -> Word {
        Word(darts.iter().map(|&d| self.label(d)).collect())
    }

    pub fn face_word(&self, f: usize) -> Word {
        self.word(&self.faces[f])
    }

    pub fn boundary_word(&self) -> Word {
        self.word(&self.boundary)
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Boundary reads each vertex once and encloses at least one face.
    pub fn is_simple(&self) -> bool {
        let mut seen = vec![false; self.vertices];
        !self.faces.is_empty()
            && !self.boundary.is_empty()
            && self.boundary.iter().all(|&d| !std::mem::replace(&mut seen[self.src(d)], true))
    }

    /// Side containing boundary position `i`.
    pub fn side_of(&self, i: usize) -> Option<usize> {
        let first = *self.sides.first()?;
        Some(if i < first { self.sides.len() - 1 } else { self.sides.iter().rposition(|&s| s <= i).unwrap() })
    }

    fn check_cycle(&self, name: impl Fn() -> String, cycle: &[Dart]) -> Result<(), DiagramError> {
        for &d in cycle {
            if d == 0 || d.unsigned_abs() as usize > self.edges.len() {
                return Err(DiagramError::BadDart { dart: d });
            }
        }
        for i in 0..cycle.len() {
            if self.dst(cycle[i]) != self.src(cycle[(i + 1) % cycle.len()]) {
                return Err(DiagramError::OpenCycle { cycle: name(), position: i });
            }
        }
        Ok(())
    }

    /// Successor of each dart slot in its face, the outer face included.
    fn face_permutation(&self) -> Result<Vec<usize>, DiagramError> {
        let mut next = vec![usize::MAX; 2 * self.edges.len()];
        let mut uses = vec![0usize; next.len()];
        let mut link = |a: Dart, b: Dart| {
            uses[slot(a)] += 1;
            next[slot(a)] = slot(b);
        };
        for f in &self.faces {
            for i in 0..f.len() {
                link(f[i], f[(i + 1) % f.len()]);
            }
        }
        let n = self.boundary.len();
        for i in 0..n {
            link(-self.boundary[i], -self.boundary[(i + n - 1) % n]);
        }
        if let Some(s) = uses.iter().position(|&c| c != 1) {
            return Err(DiagramError::DartUse { dart: dart_of(s), count: uses[s] });
        }
        Ok(next)
    }

    /// Structural checks shared by validation and search.
    pub fn check_structure(&self) -> Result<Vec<usize>, DiagramError> {
        for (i, e) in self.edges.iter().enumerate() {
            if e.src >= self.vertices || e.dst >= self.vertices {
                return Err(DiagramError::BadEndpoint { edge: i });
            }
        }
        for (i, f) in self.faces.iter().enumerate() {
            if f.is_empty() {
                return Err(DiagramError::EmptyFace { face: i });
            }
            self.check_cycle(|| format!("face {i}"), f)?;
        }
        self.check_cycle(|| "boundary".into(), &self.boundary)?;
        if self.sides.windows(2).any(|w| w[0] >= w[1]) || self.sides.iter().any(|&s| s >= self.boundary.len()) {
            return Err(DiagramError::BadSides(self.sides.clone()));
        }
        let next = self.face_permutation()?;
        let mut orbits = vec![0usize; self.vertices];
        let mut degree = vec![0usize; self.vertices];
        let mut seen = vec![false; next.len()];
        for s in 0..next.len() {
            degree[self.src(dart_of(s))] += 1;
            if seen[s] {
                continue;
            }
            orbits[self.src(dart_of(s))] += 1;
            let mut t = s;
            while !seen[t] {
                seen[t] = true;
                t = next[t ^ 1];
            }
        }
        for v in 0..self.vertices {
            if degree[v] == 0 && (self.vertices > 1 || !self.edges.is_empty()) {
                return Err(DiagramError::Isolated { vertex: v });
            }
            if degree[v] > 0 && orbits[v] != 1 {
                return Err(DiagramError::NotPlanar { vertex: v, orbits: orbits[v] });
            }
        }
        let mut uf: Vec<usize> = (0..self.vertices).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            uf[x] = r;
            r
        }
        let mut comps = self.vertices;
        for e in &self.edges {
            let (a, b) = (find(&mut uf, e.src), find(&mut uf, e.dst));
            if a != b {
                uf[a] = b;
                comps -= 1;
            }
        }
        if comps != 1 {
            return Err(DiagramError::Disconnected);
        }
        let chi = self.vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64 + 1;
        if chi != 2 {
            return Err(DiagramError::Euler { chi });
        }
        Ok(degree)
    }

    /// Arcs of every face, split at vertices of degree other than 2 and at
    /// side corners.
    pub fn arcs_with_degree(&self, degree: &[usize]) -> ArcDecomposition {
        let mut on_boundary = vec![None; 2 * self.edges.len()];
        for (i, &d) in self.boundary.iter().enumerate() {
            on_boundary[slot(d)] = Some(i);
        }
        let mut corner = vec![false; self.vertices];
        for &s in &self.sides {
            corner[self.src(self.boundary[s])] = true;
        }
        let faces = self
            .faces
            .iter()
            .map(|f| {
                let n = f.len();
                let ext = |j: usize| on_boundary[slot(f[j % n])].is_some();
                let breaks: Vec<usize> = (0..n)
                    .filter(|&j| {
                        let v = self.src(f[j]);
                        degree[v] != 2 || corner[v] || ext(j) != ext(j + n - 1)
                    })
                    .collect();
                let spans: Vec<(usize, usize)> = if breaks.is_empty() {
                    vec![(0, n)]
                } else {
                    (0..breaks.len())
                        .map(|k| {
                            let a = breaks[k];
                            let b = breaks[(k + 1) % breaks.len()];
                            (a, if b > a { b - a } else { b + n - a })
                        })
                        .collect()
                };
                let arcs: Vec<Arc> = spans
                    .into_iter()
                    .map(|(a, len)| {
                        let darts: Vec<Dart> = (a..a + len).map(|j| f[j % n]).collect();
                        let exterior = ext(a);
                        let side = if exterior { on_boundary[slot(darts[0])].and_then(|i| self.side_of(i)) } else { None };
                        Arc { darts, exterior, side }
                    })
                    .collect();
                let exterior_degree = arcs.iter().filter(|a| a.exterior).count();
                FaceArcs { interior_degree: arcs.len() - exterior_degree, exterior_degree, arcs }
            })
            .collect();
        ArcDecomposition { faces }
    }

    pub fn arcs(&self) -> Result<ArcDecomposition, DiagramError> {
        Ok(self.arcs_with_degree(&self.check_structure()?))
    }

    /// Label- and orientation-preserving canonical code rooted at `root`.
    pub fn code_from(&self, root: Dart) -> Vec<u32> {
        let next = self.face_permutation().expect("checked diagram");
        let mut outer = vec![false; next.len()];
        for &d in &self.boundary {
            outer[slot(-d)] = true;
        }
        let mut num = vec![u32::MAX; next.len()];
        let mut order = vec![slot(root)];
        num[slot(root)] = 0;
        let mut code = Vec::with_capacity(4 * next.len());
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for t in [next[s], s ^ 1] {
                if num[t] == u32::MAX {
                    num[t] = order.len() as u32;
                    order.push(t);
                }
            }
            code.extend([num[next[s]], num[s ^ 1], self.label(dart_of(s)).0 as u32, outer[s] as u32]);
            i += 1;
        }
        code
    }

    /// Least code over roots at boundary positions where the boundary word
    /// reads the same.
    pub fn canonical_code(&self) -> Vec<u32> {
        let w = self.boundary_word();
        (0..self.boundary.len())
            .filter(|&j| w.rotate(j) == w)
            .map(|j| self.code_from(self.boundary[j]))
            .min()
            .unwrap_or_default()
    }
}

/// Incremental construction of a diagram.
#[derive(Debug, Clone, Default)]
pub struct DiagramBuilder {
    d: DiskDiagram,
}

impl DiagramBuilder {
    pub fn new(vertices: usize) -> DiagramBuilder {
        DiagramBuilder { d: DiskDiagram { vertices, ..Default::default() } }
    }

    pub fn vertex(&mut self) -> usize {
        self.d.vertices += 1;
        self.d.vertices - 1
    }

    pub fn edge(&mut self, src: usize, dst: usize, label: Letter) -> Dart {
        self.d.edges.push(Edge { src, dst, label });
        self.d.edges.len() as Dart
    }

    /// Path of fresh edges spelling `w` from `a` to `b`.
    pub fn path(&mut self, a: usize, b: usize, w: &[Letter]) -> Vec<Dart> {
        let mut out = Vec::with_capacity(w.len());
        let mut cur = a;
        for (i, &l) in w.iter().enumerate() {
            let t = if i + 1 == w.len() { b } else { self.vertex() };
            out.push(self.edge(cur, t, l));
            cur = t;
        }
        out
    }

    pub fn face(&mut self, darts: Vec<Dart>) -> usize {
        self.d.faces.push(darts);
        self.d.faces.len() - 1
    }

    pub fn boundary(&mut self, darts: Vec<Dart>, sides: Vec<usize>) {
        self.d.boundary = darts;
        self.d.sides = sides;
    }

    pub fn build(self) -> DiskDiagram {
        self.d
    }
}

/// Structure, face labels and arcs; structural faults are errors.
pub fn validate_diagram(d: &DiskDiagram, p: Option<&Presentation>) -> Result<Validation, DiagramError> {
    let degree = d.check_structure()?;
    let mut bad_faces = Vec::new();
    if let Some(p) = p {
        for (i, e) in d.edges.iter().enumerate() {
            if !p.alphabet().contains(e.label) {
                return Err(DiagramError::BadLabel { edge: i, label: e.label });
            }
        }
        let closure = SymmetrizedClosure::new(p);
        bad_faces = (0..d.faces.len()).filter(|&f| !closure.contains(&d.face_word(f))).collect();
    }
    Ok(Validation { verdict: Verdict::from_bool(bad_faces.is_empty()), bad_faces, arcs: d.arcs_with_degree(&degree) })
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn genus2() -> Presentation {
        Presentation::from_strs(4, &["abABcdCD"])
    }

    #[test]
    fn one_face_relator_is_valid() {
        let p = genus2();
        let d = single_face(&p.relators()[0], vec![0, 4]);
        let v = validate_diagram(&d, Some(&p)).unwrap();
        assert_eq!(v.verdict, Verdict::Pass);
        assert_eq!(v.arcs.faces[0].exterior_degree, 2);
        assert_eq!(d.boundary_word(), p.relators()[0]);
    }

    #[test]
    fn non_relator_face_is_flagged() {
        let p = genus2();
        let d = single_face(&p.parse_word("abAB").unwrap(), vec![]);
        let v = validate_diagram(&d, Some(&p)).unwrap();
        assert_eq!((v.verdict, v.bad_faces), (Verdict::Fail, vec![0]));
    }

    #[test]
    fn shared_arc_is_interior() {
        let p = genus2();
        let d = glued_pair(&p.relators()[0]);
        let v = validate_diagram(&d, Some(&p)).unwrap();
        assert_eq!(v.verdict, Verdict::Pass);
        for f in &v.arcs.faces {
            assert_eq!(f.interior_degree, 1);
            let inner = f.arcs.iter().find(|a| !a.exterior).unwrap();
            assert_eq!(inner.darts.len(), 1);
        }
    }

    #[test]
    fn structural_faults_have_locations() {
        let mut d = ladder(2, 1);
        d.faces[0].swap(0, 1);
        assert!(matches!(d.check_structure(), Err(DiagramError::OpenCycle { .. })));
        let mut d = ladder(2, 1);
        d.faces.pop();
        assert!(matches!(d.check_structure(), Err(DiagramError::DartUse { .. })));
        let mut d = ladder(2, 1);
        d.edges[0].src = 99;
        assert_eq!(d.check_structure(), Err(DiagramError::BadEndpoint { edge: 0 }));
    }

    #[test]
    fn fixtures_are_planar() {
        let mut all = vec![fan(), wedge(), flower(6), flower(7)];
        all.extend((1..=5).map(|k| ladder(k, 2)));
        all.extend((3..=7).map(wheel));
        for d in all {
            let arcs = d.arcs().unwrap();
            // interior arcs are seen from both sides
            let inner: usize = arcs.faces.iter().map(|f| f.interior_degree).sum();
            assert_eq!(inner % 2, 0);
            if d.is_simple() {
                let mut cover = vec![0; d.boundary.len()];
                for a in arcs.faces.iter().flat_map(|f| &f.arcs).filter(|a| a.exterior) {
                    for dart in &a.darts {
                        cover[d.boundary.iter().position(|b| b == dart).unwrap()] += 1;
                    }
                }
                assert!(cover.iter().all(|&c| c == 1));
            }
        }
    }

    #[test]
    fn canonical_code_ignores_numbering() {
        let d = ladder(3, 1);
        let mut e = d.clone();
        // reverse the edge list, renumbering darts
        let m = e.edges.len() as Dart;
        e.edges.reverse();
        let map = |x: Dart| x.signum() * (m + 1 - x.abs());
        for f in &mut e.faces {
            f.iter_mut().for_each(|x| *x = map(*x));
        }
        e.boundary.iter_mut().for_each(|x| *x = map(*x));
        e.faces.reverse();
        assert_eq!(d.canonical_code(), e.canonical_code());
        assert_ne!(d.canonical_code(), ladder(3, 2).canonical_code());
    }

    #[test]
    fn serde_round_trip() {
        let d = fan();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<DiskDiagram>(&s).unwrap(), d);
    }
}
