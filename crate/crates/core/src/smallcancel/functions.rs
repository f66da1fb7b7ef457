//! Sampled functions on `[1, domain_max]`: viable functions, sublinear
//! functions and the constructions relating them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{serde_q_vec, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctionError {
    #[error("function sampled up to {have}, needed up to {need}")]
    DomainTooSmall { have: usize, need: usize },
    #[error("sequence {name} is not strictly increasing at index {index}")]
    NotIncreasing { name: &'static str, index: usize },
    #[error("sequences m and l differ in length ({m} vs {l})")]
    LengthMismatch { m: usize, l: usize },
    #[error("m must be positive, found {0} at index {1}")]
    NonPositive(i64, usize),
    #[error("function vanishes at t = {0}")]
    ZeroValue(usize),
    #[error("function is not viable: {0}")]
    NotViable(String),
    #[error("empty domain")]
    EmptyDomain,
}

/// Values `t ↦ v(t)` for `t ∈ [1, domain_max]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionSample {
    pub domain_max: usize,
    #[serde(with = "serde_q_vec")]
    values: Vec<Q>,
    /// Set by constructors that guarantee monotonicity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_decreasing: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub caveats: Vec<String>,
}

impl FunctionSample {
    pub fn from_values(values: Vec<Q>) -> FunctionSample {
        FunctionSample { domain_max: values.len(), values, non_decreasing: None, caveats: Vec::new() }
    }

    pub fn from_fn(domain_max: usize, f: impl Fn(usize) -> Q) -> FunctionSample {
        FunctionSample::from_values((1..=domain_max).map(f).collect())
    }

    pub fn constant(c: Q, domain_max: usize) -> FunctionSample {
        let mut s = FunctionSample::from_values(vec![c; domain_max]);
        s.non_decreasing = Some(true);
        s
    }

    pub fn identity(domain_max: usize) -> FunctionSample {
        let mut s = FunctionSample::from_fn(domain_max, |t| Q::from_integer(t as i64));
        s.non_decreasing = Some(true);
        s
    }

    /// Value at `t`; `None` outside `[1, domain_max]`.
    pub fn get(&self, t: usize) -> Option<Q> {
        if t == 0 {
            None
        } else {
            self.values.get(t - 1).copied()
        }
    }

    pub fn at(&self, t: usize) -> Q {
        self.get(t).unwrap_or_else(|| panic!("t = {t} outside [1, {}]", self.domain_max))
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn require_domain(&self, need: usize) -> Result<(), FunctionError> {
        if self.domain_max < need {
            Err(FunctionError::DomainTooSmall { have: self.domain_max, need })
        } else {
            Ok(())
        }
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    /// Viability on the sampled domain: `f ≥ 6` and non-decreasing.
    pub fn check_viable(&self) -> Result<(), FunctionError> {
        if let Some((i, v)) = self.values.iter().enumerate().find(|(_, v)| **v < Q::from_integer(6)) {
            return Err(FunctionError::NotViable(format!("f({}) = {} < 6", i + 1, v)));
        }
        if let Some(i) = self.values.windows(2).position(|w| w[0] > w[1]) {
            return Err(FunctionError::NotViable(format!("f decreases between {} and {}", i + 1, i + 2)));
        }
        Ok(())
    }

    /// `ρ(n) = n / f(n)` on the same domain.
    pub fn induced_bound(&self) -> Result<FunctionSample, FunctionError> {
        let mut vals = Vec::with_capacity(self.domain_max);
        for (i, v) in self.values.iter().enumerate() {
            if *v == Q::from_integer(0) {
                return Err(FunctionError::ZeroValue(i + 1));
            }
            vals.push(Q::from_integer(i as i64 + 1) / v);
        }
        Ok(FunctionSample::from_values(vals))
    }

    /// For each `N` in `1..=n_max`, the least sampled `T` with `g(t) < t/N`
    /// for every sampled `t ≥ T`, if any.
    pub fn sublinearity_witnesses(&self, n_max: i64) -> Vec<Option<usize>> {
        (1..=n_max)
            .map(|n| {
                let mut first_ok = None;
                for t in (1..=self.domain_max).rev() {
                    if self.at(t) * n < Q::from_integer(t as i64) {
                        first_ok = Some(t);
                    } else {
                        break;
                    }
                }
                first_ok
            })
            .collect()
    }
}

/// `g(t) = min_i g_i(t)` with `g_i(t) = t` for `t ≤ l_i` and `t / m_i` beyond.
pub fn construct_g(m: &[i64], l: &[i64], domain_max: usize) -> Result<FunctionSample, FunctionError> {
    if m.len() != l.len() {
        return Err(FunctionError::LengthMismatch { m: m.len(), l: l.len() });
    }
    if domain_max == 0 {
        return Err(FunctionError::EmptyDomain);
    }
    for (i, &mi) in m.iter().enumerate() {
        if mi <= 0 {
            return Err(FunctionError::NonPositive(mi, i));
        }
    }
    if let Some(i) = m.windows(2).position(|w| w[0] >= w[1]) {
        return Err(FunctionError::NotIncreasing { name: "m", index: i + 1 });
    }
    if let Some(i) = l.windows(2).position(|w| w[0] >= w[1]) {
        return Err(FunctionError::NotIncreasing { name: "l", index: i + 1 });
    }
    let mut g = FunctionSample::from_fn(domain_max, |t| {
        let t = t as i64;
        m.iter()
            .zip(l)
            .map(|(&mi, &li)| if t <= li { Q::from_integer(t) } else { Q::new(t, mi) })
            .fold(Q::from_integer(t), |a, b| a.min(b))
    });
    g.non_decreasing = Some(g.is_non_decreasing());
    Ok(g)
}

/// `f'(n) = n/g(n)`, `f''(n) = min_{n ≤ k ≤ domain_max} f'(k)`,
/// `f(n) = max(6, f''(n))`.
pub fn derive_viable_from_sublinear(g: &FunctionSample) -> Result<FunctionSample, FunctionError> {
    if g.domain_max == 0 {
        return Err(FunctionError::EmptyDomain);
    }
    let f_prime = g.induced_bound()?;
    let mut vals = f_prime.values;
    for i in (0..vals.len().saturating_sub(1)).rev() {
        vals[i] = vals[i].min(vals[i + 1]);
    }
    let six = Q::from_integer(6);
    for v in &mut vals {
        *v = (*v).max(six);
    }
    let mut f = FunctionSample::from_values(vals);
    f.non_decreasing = Some(true);
    f.caveats.push(format!(
        "f'' takes the minimum over k in [n, {}] only; the infinite minimum may be smaller",
        g.domain_max
    ));
    Ok(f)
}
