//! Exhaustive search for small diagrams with a given boundary word.
//!
//! The search runs backwards from the boundary: a step either removes a face
//! whose exterior part is a run of the current boundary, or deletes a spur
//! `x x⁻¹`. Each successful sequence is replayed forwards to build the
//! diagram, and results are deduplicated by canonical code.

use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::{validate_diagram, DiagramError, Dart, DiskDiagram, Edge};
use crate::exec::Exec;
use crate::presentation::Presentation;
use crate::smallcancel::SymmetrizedClosure;
use crate::words::{cyclic_reduce, Letter, Word};

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub max_faces: usize,
    /// Cap on visited search states.
    pub budget: usize,
    pub exec: Exec,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_faces: 6, budget: 2_000_000, exec: Exec::default() }
    }
}

#[derive(Debug, Clone, Copy)]
enum Step {
    /// Boundary rotated to start at `at`; a face whose word is
    /// `members[member]` has its first `glued` letters on the inner side.
    Face { at: usize, member: usize, glued: usize },
    Spur { at: usize, label: Letter },
}

struct Ctx<'a> {
    members: Vec<&'a Word>,
    closure: &'a SymmetrizedClosure,
    max_len: usize,
    budget: usize,
    visited: &'a AtomicUsize,
    dead: &'a Mutex<HashSet<(Vec<Letter>, usize, usize)>>,
}

fn rotate(w: &[Letter], p: usize) -> Vec<Letter> {
    let mut out = w[p..].to_vec();
    out.extend_from_slice(&w[..p]);
    out
}

fn least_rotation(w: &[Letter]) -> Vec<Letter> {
    (0..w.len().max(1)).map(|p| if w.is_empty() { Vec::new() } else { rotate(w, p) }).min().unwrap()
}

impl Ctx<'_> {
    fn moves(&self, w: &[Letter], faces_left: usize, spurs_left: usize) -> Vec<(Step, Vec<Letter>)> {
        let n = w.len();
        let mut out = Vec::new();
        if faces_left > 0 {
            for (mi, r) in self.members.iter().enumerate() {
                let r = r.letters();
                for glued in 0..r.len() {
                    let v = &r[glued..];
                    if v.len() > n {
                        continue;
                    }
                    for at in 0..n {
                        if (0..v.len()).all(|i| w[(at + i) % n] == v[i]) {
                            let rot = rotate(w, at);
                            let mut next: Vec<Letter> = r[..glued].iter().rev().map(|l| l.inverse()).collect();
                            next.extend_from_slice(&rot[v.len()..]);
                            out.push((Step::Face { at, member: mi, glued }, next));
                        }
                    }
                }
            }
        }
        if spurs_left > 0 && n >= 2 {
            for at in 0..n {
                if w[at] == w[(at + 1) % n].inverse() {
                    out.push((Step::Spur { at, label: w[at] }, rotate(w, at)[2..].to_vec()));
                }
            }
        }
        out
    }

    /// Spurs cancel freely, so only the cyclically reduced length has to be
    /// paid for with faces.
    fn viable(&self, w: &[Letter], faces_left: usize, spurs_left: usize) -> bool {
        let core = cyclic_reduce(&Word(w.to_vec())).0;
        let fits = match faces_left {
            0 => core.is_empty(),
            1 => core.is_empty() || self.closure.contains(&core),
            k => core.len() <= k * self.max_len,
        };
        fits && w.len() - core.len() <= 2 * spurs_left
    }

    fn dfs(
        &self,
        w: &[Letter],
        faces_left: usize,
        spurs_left: usize,
        steps: &mut Vec<Step>,
        found: &mut Vec<Vec<Step>>,
    ) -> Result<bool, DiagramError> {
        if self.visited.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(DiagramError::Budget(self.budget));
        }
        if w.is_empty() {
            found.push(steps.clone());
            return Ok(true);
        }
        let key = (least_rotation(w), faces_left, spurs_left);
        if self.dead.lock().unwrap().contains(&key) {
            return Ok(false);
        }
        let mut any = false;
        for (step, next) in self.moves(w, faces_left, spurs_left) {
            let (f, s) = match step {
                Step::Face { .. } => (faces_left - 1, spurs_left),
                Step::Spur { .. } => (faces_left, spurs_left - 1),
            };
            if !next.is_empty() && !self.viable(&next, f, s) {
                continue;
            }
            steps.push(step);
            any |= self.dfs(&next, f, s, steps, found)?;
            steps.pop();
        }
        if !any {
            self.dead.lock().unwrap().insert(key);
        }
        Ok(any)
    }
}

/// Replays reverse steps forwards from a single vertex.
fn replay(members: &[&Word], steps: &[Step]) -> DiskDiagram {
    let mut d = DiskDiagram { vertices: 1, ..Default::default() };
    let add_edge = |d: &mut DiskDiagram, src: usize, dst: usize, label: Letter| -> Dart {
        d.edges.push(Edge { src, dst, label });
        d.edges.len() as Dart
    };
    for step in steps.iter().rev() {
        let corner = d.boundary.first().map_or(0, |&b| d.src(b));
        let (prefix, at) = match *step {
            Step::Spur { at, label } => {
                let t = d.vertices;
                d.vertices += 1;
                let e = add_edge(&mut d, corner, t, label);
                (vec![e, -e], at)
            }
            Step::Face { at, member, glued } => {
                let r = members[member].letters();
                let end = if glued == 0 { corner } else { d.dst(d.boundary[glued - 1]) };
                let mut face: Vec<Dart> = d.boundary[..glued].iter().rev().map(|&x| -x).collect();
                let mut cur = corner;
                let mut fresh = Vec::new();
                for (i, &l) in r[glued..].iter().enumerate() {
                    let t = if i + 1 == r.len() - glued {
                        end
                    } else {
                        d.vertices += 1;
                        d.vertices - 1
                    };
                    fresh.push(add_edge(&mut d, cur, t, l));
                    cur = t;
                }
                face.extend(&fresh);
                d.faces.push(face);
                d.boundary.drain(..glued);
                (fresh, at)
            }
        };
        let mut rest = prefix;
        rest.extend_from_slice(&d.boundary);
        let n = rest.len();
        d.boundary = (0..n).map(|i| rest[(i + n - at) % n]).collect();
    }
    d
}

/// All diagrams over `p` with at most `opts.max_faces` faces whose boundary
/// reads `boundary`, up to label- and orientation-preserving isomorphism.
pub fn search_small_diagrams(p: &Presentation, boundary: &Word, opts: &SearchOptions) -> Result<Vec<DiskDiagram>, DiagramError> {
    let closure = SymmetrizedClosure::new(p);
    let members: Vec<&Word> = closure.members().iter().map(|m| &m.word).collect();
    let max_len = members.iter().map(|m| m.len()).max().unwrap_or(0);
    if boundary.is_empty() {
        return Ok(vec![DiskDiagram { vertices: 1, ..Default::default() }]);
    }
    let visited = AtomicUsize::new(0);
    let dead = Mutex::new(HashSet::new());
    let ctx = Ctx { members: members.clone(), closure: &closure, max_len, budget: opts.budget, visited: &visited, dead: &dead };
    // a spur that a later face glues over can be traded for attaching that
    // face first, so only free edges of the result need spurs
    let spurs = boundary.len() / 2;
    let roots = ctx.moves(boundary.letters(), opts.max_faces, spurs);
    let per_root = opts.exec.map_slice(&roots, |(step, next)| {
        let (f, s) = match step {
            Step::Face { .. } => (opts.max_faces - 1, spurs),
            Step::Spur { .. } => (opts.max_faces, spurs - 1),
        };
        let mut found = Vec::new();
        if !next.is_empty() && !ctx.viable(next, f, s) {
            return Ok(found);
        }
        let mut steps = vec![*step];
        ctx.dfs(next, f, s, &mut steps, &mut found).map(|_| found)
    });
    let mut out: BTreeMap<Vec<u32>, DiskDiagram> = BTreeMap::new();
    for found in per_root {
        for steps in found? {
            let d = replay(&members, &steps);
            debug_assert_eq!(&d.boundary_word(), boundary);
            validate_diagram(&d, Some(p))?;
            out.entry(d.canonical_code()).or_insert(d);
        }
    }
    Ok(out.into_values().collect())
}

/// Results of least face count.
pub fn minimal_area(diagrams: &[DiskDiagram]) -> Vec<&DiskDiagram> {
    let least = diagrams.iter().map(|d| d.faces.len()).min().unwrap_or(0);
    diagrams.iter().filter(|d| d.faces.len() == least).collect()
}

/// Every interior arc reads a common prefix of two distinct closure members.
pub fn interior_arcs_are_pieces(d: &DiskDiagram) -> Result<bool, DiagramError> {
    let arcs = d.arcs()?;
    let mut face_pos = BTreeMap::new();
    for (f, darts) in d.faces.iter().enumerate() {
        for (i, &x) in darts.iter().enumerate() {
            face_pos.insert(x, (f, i));
        }
    }
    for (f, fa) in arcs.faces.iter().enumerate() {
        for a in fa.arcs.iter().filter(|a| !a.exterior) {
            let (_, i) = face_pos[&a.darts[0]];
            let here = d.face_word(f).rotate(i);
            let (g, j) = face_pos[&-a.darts[0]];
            // the other face reads the arc backwards, ending at position j
            let there = d.face_word(g).rotate((j + 1) % d.faces[g].len()).inverse();
            if here == there {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
