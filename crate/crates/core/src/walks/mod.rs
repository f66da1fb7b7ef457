//! Step measures, random walks to a sphere, translated concatenation and
//! alternating paths.

mod paths;

pub use paths::{
    build_qab, projection_diameter, translated_concat, worst_geodesic, BlockProjection, LabelledPath, ProjectionDiameter, QabPath,
    Segment, SegmentKind,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{CayleyBall, CayleyError, VertexId};
use crate::exec::Exec;
use crate::metrics::intersection_function;
use crate::rational::{serde_q, Q};
use crate::smallcancel::FunctionSample;
use crate::words::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("invalid step measure: {0}")]
    Measure(String),
    #[error("radius {need} needed, ball has {radius}")]
    Scope { need: usize, radius: usize },
    #[error("path leaves the ball after {reachable} letters")]
    Exit { reachable: usize },
    #[error("blocks must be odd and at least 3, got {0}")]
    Blocks(usize),
    #[error("no sphere vertex can be classified")]
    NoClassifiable,
    #[error("absorption system has {0} interior states, above the limit")]
    TooLarge(usize),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub word: Word,
    #[serde(with = "serde_q")]
    pub probability: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepMeasure {
    pub support: Vec<Step>,
    pub seed: u64,
    /// Caller's claim that the support generates the group as a semigroup.
    #[serde(default)]
    pub generating: bool,
}

impl StepMeasure {
    pub fn new(support: Vec<Step>, seed: u64, generating: bool) -> Result<StepMeasure, WalkError> {
        if support.is_empty() {
            return Err(WalkError::Measure("empty support".into()));
        }
        if let Some(s) = support.iter().find(|s| s.probability <= Q::zero()) {
            return Err(WalkError::Measure(format!("non-positive probability for {}", s.word)));
        }
        let total: Q = support.iter().map(|s| s.probability).sum();
        if total != Q::one() {
            return Err(WalkError::Measure(format!("probabilities sum to {total}")));
        }
        Ok(StepMeasure { support, seed, generating })
    }

    /// Equal weight on every word.
    pub fn uniform(words: Vec<Word>, seed: u64) -> Result<StepMeasure, WalkError> {
        let n = words.len().max(1) as i64;
        let support = words.into_iter().map(|word| Step { word, probability: Q::new(1, n) }).collect();
        StepMeasure::new(support, seed, true)
    }

    pub fn max_len(&self) -> usize {
        self.support.iter().map(|s| s.word.len()).max().unwrap_or(0)
    }

    /// Integer weights proportional to the probabilities.
    fn weights(&self) -> Vec<u64> {
        let lcm = self.support.iter().fold(1i64, |acc, s| num_integer::lcm(acc, *s.probability.denom()));
        self.support.iter().map(|s| (s.probability * lcm).to_integer() as u64).collect()
    }
}

fn big(q: &Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

/// Applies one step from `v`; `Some(exit)` at the first letter reaching the
/// sphere of radius `k`.
fn advance(ball: &CayleyBall, mut v: VertexId, w: &Word, k: usize) -> Result<(VertexId, bool), WalkError> {
    for &l in w.letters() {
        v = ball.neighbor(v, l).ok_or(WalkError::Scope { need: k + w.len(), radius: ball.radius() })?;
        if ball.dist0(v) >= k {
            return Ok((v, true));
        }
    }
    Ok((v, false))
}

/// Exit counts on the sphere of radius `radius`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalBoundaryMeasure {
    pub radius: usize,
    pub counts: BTreeMap<VertexId, u64>,
    pub total: u64,
    pub exited: u64,
}

impl EmpiricalBoundaryMeasure {
    pub fn to_measure(&self) -> SphereMeasure {
        let n = BigInt::from(self.exited.max(1));
        let mass = self.counts.iter().map(|(&v, &c)| (v, BigRational::new(BigInt::from(c), n.clone()))).collect();
        SphereMeasure { radius: self.radius, mass }
    }
}

/// A probability measure on a sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereMeasure {
    pub radius: usize,
    pub mass: BTreeMap<VertexId, BigRational>,
}

impl SphereMeasure {
    pub fn at(&self, v: VertexId) -> BigRational {
        self.mass.get(&v).cloned().unwrap_or_else(BigRational::zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkReport {
    pub measure: EmpiricalBoundaryMeasure,
    /// Walks still inside after `steps` steps.
    pub unexited: u64,
    /// Steps taken by walks that exited.
    pub exit_steps: u64,
}

/// `count` walks from the identity, each with its own ChaCha stream, stopped
/// at the first letter on the sphere of radius `k`.
pub fn sample_walks(
    ball: &CayleyBall,
    mu: &StepMeasure,
    k: usize,
    steps: usize,
    count: u64,
    exec: Exec,
) -> Result<WalkReport, WalkError> {
    if k > ball.radius() {
        return Err(WalkError::Scope { need: k, radius: ball.radius() });
    }
    let pick = WeightedIndex::new(mu.weights()).map_err(|e| WalkError::Measure(e.to_string()))?;
    type Acc = Result<(BTreeMap<VertexId, u64>, u64, u64), WalkError>;
    let init = || -> Acc { Ok((BTreeMap::new(), 0, 0)) };
    let fold = |acc: Acc, i: usize| -> Acc {
        let (mut counts, mut unexited, mut exit_steps) = acc?;
        let mut rng = ChaCha8Rng::seed_from_u64(mu.seed);
        rng.set_stream(i as u64);
        let mut v = ball.identity();
        let mut done = k == 0;
        let mut n = 0;
        while !done && n < steps {
            let (t, out) = advance(ball, v, &mu.support[pick.sample(&mut rng)].word, k)?;
            v = t;
            done = out;
            n += 1;
        }
        if done {
            *counts.entry(v).or_default() += 1;
            exit_steps += n as u64;
        } else {
            unexited += 1;
        }
        Ok((counts, unexited, exit_steps))
    };
    let merge = |a: Acc, b: Acc| -> Acc {
        let (mut ca, ua, sa) = a?;
        let (cb, ub, sb) = b?;
        for (v, c) in cb {
            *ca.entry(v).or_default() += c;
        }
        Ok((ca, ua + ub, sa + sb))
    };
    let (counts, unexited, exit_steps) = exec.fold_range(count as usize, init, fold, merge)?;
    let measure = EmpiricalBoundaryMeasure { radius: k, counts, total: count, exited: count - unexited };
    Ok(WalkReport { measure, unexited, exit_steps })
}

/// Exact first-exit distribution on the sphere of radius `k`, by solving the
/// absorption system over the interior.
pub fn exact_exit_measure(ball: &CayleyBall, mu: &StepMeasure, k: usize, max_states: usize) -> Result<SphereMeasure, WalkError> {
    if k > ball.radius() {
        return Err(WalkError::Scope { need: k, radius: ball.radius() });
    }
    let n = ball.sphere(k).start as usize;
    if n > max_states {
        return Err(WalkError::TooLarge(n));
    }
    if k == 0 {
        return Ok(SphereMeasure { radius: 0, mass: BTreeMap::from([(ball.identity(), BigRational::one())]) });
    }
    // z solves (I - P)^T z = e_0; the exit law is z^T B
    let mut a = vec![vec![BigRational::zero(); n + 1]; n];
    let mut exits: Vec<Vec<(VertexId, BigRational)>> = vec![Vec::new(); n];
    for x in 0..n {
        a[x][x] += BigRational::one();
        for s in &mu.support {
            let p = big(&s.probability);
            match advance(ball, x as VertexId, &s.word, k)? {
                (t, true) => exits[x].push((t, p)),
                (t, false) => a[t as usize][x] -= p,
            }
        }
    }
    a[0][n] = BigRational::one();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("absorption system is regular");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for c in col..=n {
            a[col][c] *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
            }
        }
    }
    let mut mass: BTreeMap<VertexId, BigRational> = BTreeMap::new();
    for (x, out) in exits.iter().enumerate() {
        for (t, p) in out {
            *mass.entry(*t).or_insert_with(BigRational::zero) += &a[x][n] * p;
        }
    }
    mass.retain(|_, m| !m.is_zero());
    Ok(SphereMeasure { radius: k, mass })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectReport {
    /// `Σ_v |ν(v) − Σ_g μ(g) ν̂(g⁻¹v)|` over classified sphere vertices.
    pub defect: BigRational,
    pub classified: usize,
    pub excluded: usize,
    pub excluded_mass: BigRational,
}

impl DefectReport {
    pub fn defect_f64(&self) -> f64 {
        to_f64(&self.defect)
    }
}

pub fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Ancestor of `v` at depth `j` along its shortlex normal form.
fn ancestor(ball: &CayleyBall, nf: &Word, j: usize) -> VertexId {
    ball.vertex_of(&Word(nf.0[..j].to_vec())).expect("prefixes of normal forms lie in the ball")
}

/// Compares ν on the sphere with its μ-average of translates. A translate
/// inside the sphere is charged the mass of its shortlex shadow on the
/// sphere; one outside gets an equal share of its sphere ancestor's mass
/// among that ancestor's descendants at the same depth. Vertices with a
/// translate outside the ball are excluded.
pub fn stationarity_defect(ball: &CayleyBall, nu: &SphereMeasure, mu: &StepMeasure) -> Result<DefectReport, WalkError> {
    let k = nu.radius;
    let outer = (k + mu.max_len()).min(ball.radius());
    let mut shadow: BTreeMap<VertexId, BigRational> = BTreeMap::new();
    for (&v, m) in &nu.mass {
        let nf = ball.normal_form(v);
        for j in 0..=k {
            *shadow.entry(ancestor(ball, &nf, j)).or_insert_with(BigRational::zero) += m;
        }
    }
    let mut below: BTreeMap<(usize, VertexId), u64> = BTreeMap::new();
    for j in k + 1..=outer {
        for y in ball.sphere(j) {
            *below.entry((j, ancestor(ball, &ball.normal_form(y), k))).or_default() += 1;
        }
    }
    let hat = |x: VertexId| -> BigRational {
        let j = ball.dist0(x);
        if j <= k {
            shadow.get(&x).cloned().unwrap_or_else(BigRational::zero)
        } else {
            let a = ancestor(ball, &ball.normal_form(x), k);
            nu.at(a) / BigRational::from_integer(BigInt::from(below[&(j, a)]))
        }
    };
    let mut report = DefectReport {
        defect: BigRational::zero(),
        classified: 0,
        excluded: 0,
        excluded_mass: BigRational::zero(),
    };
    for v in ball.sphere(k) {
        let nf = ball.normal_form(v);
        let mut avg = BigRational::zero();
        let mut ok = true;
        for s in &mu.support {
            match ball.vertex_of(&s.word.inverse().concat(&nf)) {
                Some(x) => avg += big(&s.probability) * hat(x),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            report.classified += 1;
            report.defect += (nu.at(v) - avg).abs();
        } else {
            report.excluded += 1;
            report.excluded_mass += nu.at(v);
        }
    }
    if report.classified == 0 {
        return Err(WalkError::NoClassifiable);
    }
    Ok(report)
}

/// ν-mass of sphere points whose normal form has intersection profile within
/// `bound`.
pub fn morse_direction_frequency(ball: &CayleyBall, nu: &SphereMeasure, bound: &FunctionSample) -> BigRational {
    let p = ball.presentation();
    let tmax = bound.domain_max.max(1);
    nu.mass
        .iter()
        .filter(|(&v, _)| intersection_function(p, &ball.normal_form(v), tmax).first_violation(bound).is_none())
        .fold(BigRational::zero(), |acc, (_, m)| acc + m)
}
