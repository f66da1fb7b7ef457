//! Measurable geometry of small-cancellation Cayley graphs.

pub mod geometry;
pub mod intersection;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Q;

pub use geometry::{
    bgi_constant, contraction_constant, horofunction_separation, horofunction_value, relator_isometry_check, BgiReport,
    ContractionReport, IsometryReport, Separation,
};
pub use intersection::{
    intersection_function, intersection_function_quadratic, intersection_with_closure, local_intersection_ok,
    local_with_checker, IntersectionProfile, IntersectionWitness, LocalReport, SubwordIndex, WindowChecker,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaugeError {
    #[error("gauge must be non-decreasing (drops at Q = {0})")]
    Decreasing(usize),
    #[error("gauge values must be non-negative")]
    Negative,
    #[error("N must be at least 2, got {0}")]
    NTooSmall(usize),
    #[error("gauge undefined at {0}")]
    Undefined(usize),
}

/// Sampled Morse gauge `M(Q)` for `Q ∈ [1, Qmax]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseGaugeSample {
    #[serde(with = "crate::rational::serde_q_vec")]
    values: Vec<Q>,
}

impl MorseGaugeSample {
    pub fn new(values: Vec<Q>) -> Result<MorseGaugeSample, GaugeError> {
        if values.iter().any(|v| *v < Q::from_integer(0)) {
            return Err(GaugeError::Negative);
        }
        if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(GaugeError::Decreasing(i + 2));
        }
        Ok(MorseGaugeSample { values })
    }

    pub fn q_max(&self) -> usize {
        self.values.len()
    }

    pub fn at(&self, q: usize) -> Option<Q> {
        q.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }
}

/// `D = 2N / (N − 1) · M(N)`.
pub fn relator_length_bound(m: &MorseGaugeSample, n: usize) -> Result<Q, GaugeError> {
    if n < 2 {
        return Err(GaugeError::NTooSmall(n));
    }
    let mn = m.at(n).ok_or(GaugeError::Undefined(n))?;
    Ok(Q::new(2 * n as i64, n as i64 - 1) * mn)
}
