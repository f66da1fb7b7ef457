//! Finite-scale local-to-global experiments.
//!
//! "Locally Morse" is read as: every window of length at most `L` is a
//! `Q`-quasi-geodesic whose intersection profile stays below a sampled bound.

mod aux;

pub use aux::{audit_aux_path, build_aux_path, AuxAudit, AuxPath, Bridge};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{CayleyBall, CayleyError, VertexId};
use crate::exec::Exec;
use crate::metrics::{intersection_with_closure, IntersectionProfile, WindowChecker};
use crate::rational::{serde_q_opt, Q};
use crate::smallcancel::{FunctionSample, SymmetrizedClosure};
use crate::words::{Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MltgError {
    #[error("invalid local spec: {0}")]
    Spec(String),
    #[error("length {need} exceeds the ball radius {radius}")]
    Scope { need: usize, radius: usize },
    #[error("bridges overlap at junction {junction}")]
    Overlap { junction: usize },
    #[error(transparent)]
    Cayley(#[from] CayleyError),
}

/// Least integer `L` with `L > Q(3C + Q + 2)`.
pub fn promotion_threshold(q: u64, c: u64) -> u64 {
    q * (3 * c + q + 2) + 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSpec {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    pub bound: FunctionSample,
}

impl LocalSpec {
    pub fn new(l: usize, q: usize, bound: FunctionSample) -> Result<LocalSpec, MltgError> {
        if l == 0 || q == 0 {
            return Err(MltgError::Spec(format!("need L ≥ 1 and Q ≥ 1, got L = {l}, Q = {q}")));
        }
        Ok(LocalSpec { l, q, bound })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalWords {
    pub words: Vec<Word>,
    pub truncated: bool,
}

struct Enumerator<'a> {
    ball: &'a CayleyBall,
    spec: &'a LocalSpec,
    checker: WindowChecker,
    length: usize,
    cap: usize,
}

impl Enumerator<'_> {
    /// The windows ending at the last letter are admissible.
    fn tail_ok(&self, w: &[Letter]) -> bool {
        let n = w.len();
        if n >= 2 && w[n - 1] == w[n - 2].inverse() {
            return false;
        }
        let win = self.spec.l.min(n);
        for k in 1..=win {
            let v = self.ball.vertex_of(&Word(w[n - k..].to_vec())).expect("windows fit in the ball");
            if k > self.spec.q * self.ball.dist0(v) {
                return false;
            }
        }
        self.checker.ok(&w[n - win..])
    }

    fn extend(&self, w: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if out.len() >= self.cap {
            return;
        }
        if w.len() == self.length {
            out.push(Word(w.clone()));
            return;
        }
        for l in self.ball.letters() {
            w.push(l);
            if self.tail_ok(w) {
                self.extend(w, out);
            }
            w.pop();
        }
    }
}

/// Words of the given length all of whose windows of length at most `L`
/// satisfy the local spec, in shortlex order, at most `budget` of them.
pub fn enumerate_local_words(
    ball: &CayleyBall,
    spec: &LocalSpec,
    length: usize,
    budget: usize,
    exec: Exec,
) -> Result<LocalWords, MltgError> {
    LocalSpec::new(spec.l, spec.q, spec.bound.clone())?;
    if spec.l > ball.radius() {
        return Err(MltgError::Scope { need: spec.l, radius: ball.radius() });
    }
    let closure = SymmetrizedClosure::new(ball.presentation());
    let e = Enumerator { ball, spec, checker: WindowChecker::new(&closure, &spec.bound), length, cap: budget + 1 };
    if length == 0 {
        return Ok(LocalWords { words: vec![Word::empty()].into_iter().take(budget).collect(), truncated: budget == 0 });
    }
    let firsts: Vec<Letter> = ball.letters().collect();
    let per_letter = exec.map_slice(&firsts, |&l| {
        let mut out = Vec::new();
        let mut w = vec![l];
        if e.tail_ok(&w) {
            e.extend(&mut w, &mut out);
        }
        out
    });
    let mut words: Vec<Word> = per_letter.into_iter().flatten().collect();
    let truncated = words.len() > budget;
    words.truncate(budget);
    Ok(LocalWords { words, truncated })
}

/// Vertices of the path labelled `w` from the identity.
pub(crate) fn trace(ball: &CayleyBall, w: &Word) -> Result<Vec<VertexId>, MltgError> {
    let mut out = vec![ball.identity()];
    for &l in w.letters() {
        let v = ball.neighbor(*out.last().unwrap(), l).ok_or(CayleyError::OutsideBall)?;
        out.push(v);
    }
    Ok(out)
}

/// Hausdorff distance between two vertex sets, from certified distances.
pub fn hausdorff(ball: &CayleyBall, a: &[VertexId], b: &[VertexId]) -> Result<usize, CayleyError> {
    let mut best = 0;
    for (from, to) in [(a, b), (b, a)] {
        for &x in from {
            best = best.max(ball.distance_to_set(x, to)?);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalReport {
    pub length: usize,
    /// `max (j − i) / d(w(i), w(j))`; `None` when the path revisits a vertex.
    #[serde(with = "serde_q_opt")]
    pub q_prime: Option<Q>,
    pub profile: IntersectionProfile,
    /// Hausdorff distance to the shortlex geodesic between the endpoints.
    pub hausdorff: usize,
}

pub fn global_audit(ball: &CayleyBall, w: &Word, spec: &LocalSpec) -> Result<GlobalReport, MltgError> {
    if w.len() > ball.radius() {
        return Err(MltgError::Scope { need: w.len(), radius: ball.radius() });
    }
    let path = trace(ball, w)?;
    let mut q_prime = Some(Q::from_integer(1));
    for i in 0..w.len() {
        for j in i + 1..=w.len() {
            let v = ball.vertex_of(&Word(w.0[i..j].to_vec())).ok_or(CayleyError::OutsideBall)?;
            let d = ball.dist0(v);
            q_prime = match (q_prime, d) {
                (_, 0) | (None, _) => None,
                (Some(q), d) => Some(q.max(Q::new((j - i) as i64, d as i64))),
            };
        }
    }
    let end = *path.last().unwrap();
    let geodesic = trace(ball, &ball.normal_form(end))?;
    let tmax = spec.bound.domain_max.max(ball.presentation().max_relator_len()).max(1);
    let profile = intersection_with_closure(&SymmetrizedClosure::new(ball.presentation()), w, tmax);
    Ok(GlobalReport { length: w.len(), q_prime, profile, hausdorff: hausdorff(ball, &path, &geodesic)? })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "L")]
    pub l: usize,
    pub words: usize,
    pub truncated: bool,
    /// Words returning to an earlier vertex.
    pub loops: usize,
    #[serde(with = "serde_q_opt")]
    pub max_q_prime: Option<Q>,
    pub max_rho: usize,
    pub max_hausdorff: usize,
}

/// One row per scale: enumerate the local words, audit each globally.
pub fn sweep(
    ball: &CayleyBall,
    q: usize,
    bound: &FunctionSample,
    scales: &[usize],
    length: usize,
    budget: usize,
    exec: Exec,
) -> Result<Vec<SweepRow>, MltgError> {
    let mut rows = Vec::new();
    for &l in scales {
        let spec = LocalSpec::new(l, q, bound.clone())?;
        let found = enumerate_local_words(ball, &spec, length, budget, exec)?;
        let reports = exec.map_slice(&found.words, |w| global_audit(ball, w, &spec));
        let mut row = SweepRow {
            l,
            words: found.words.len(),
            truncated: found.truncated,
            loops: 0,
            max_q_prime: None,
            max_rho: 0,
            max_hausdorff: 0,
        };
        for r in reports {
            let r = r?;
            match r.q_prime {
                Some(x) => row.max_q_prime = Some(row.max_q_prime.map_or(x, |y| y.max(x))),
                None => row.loops += 1,
            }
            row.max_rho = row.max_rho.max(r.profile.max());
            row.max_hausdorff = row.max_hausdorff.max(r.hausdorff);
        }
        rows.push(row);
    }
    Ok(rows)
}
