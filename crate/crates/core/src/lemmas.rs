//! Finite-data forms of two sequence lemmas used to analyse anchored
//! iterations: the recursive inequality
//! `a_{n+1} <= (1 - alpha_n) a_n + alpha_n sigma_n + gamma_n`
//! and the index sequence `m_k` (largest `n <= k` with `gamma_n < gamma_{n+1}`).
//!
//! Indices are 1-based throughout.

use crate::error::{invalid, Error, Result};
use crate::solvers::IterationTrace;

/// Relative tolerance for the recursion inequality.
pub const XU_TOLERANCE: f64 = 1e-12;

/// A named finite sequence of reals, indexed from 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSeq {
    pub name: String,
    values: Vec<f64>,
}

impl ScalarSeq {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("values", "sequence must not be empty"));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(ScalarSeq {
            name: name.into(),
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The n-th term, n >= 1.
    pub fn get(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Trace columns a [`ScalarSeq`] can be extracted from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceColumn {
    Alpha,
    Beta,
    ResidualT,
    ResidualS,
    DistToTarget,
    /// Squared distance to target, the usual `a_n` for the recursion.
    DistToTargetSquared,
}

impl ScalarSeq {
    /// Reads a column of the recorded rows. Errors if a row lacks it.
    pub fn from_trace(trace: &IterationTrace, column: TraceColumn) -> Result<Self> {
        let values = trace
            .rows
            .iter()
            .map(|r| match column {
                TraceColumn::Alpha => Some(r.alpha),
                TraceColumn::Beta => Some(r.beta),
                TraceColumn::ResidualT => Some(r.residual_t),
                TraceColumn::ResidualS => r.residual_s,
                TraceColumn::DistToTarget => r.dist_to_target,
                TraceColumn::DistToTargetSquared => r.dist_to_target.map(|d| d * d),
            })
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| invalid("column", format!("{column:?} is absent from the trace")))?;
        ScalarSeq::new(format!("{column:?}"), values)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct XuReport {
    pub recursion_holds: bool,
    /// Index n (1-based) where `a_{n+1} - rhs_n` is largest.
    pub worst_index: usize,
    pub worst_violation: f64,
    /// Max of `a` over its final 10% of indices.
    pub tail_max_of_a: f64,
}

/// Checks `a_{n+1} <= (1 - alpha_n) a_n + alpha_n sigma_n + gamma_n` at
/// every n, within [`XU_TOLERANCE`] relative to the magnitudes involved.
///
/// `a` must be one longer than the other three. The limit conclusion is
/// asymptotic; `tail_max_of_a` is a trend indicator only.
pub fn xu_check(
    a: &ScalarSeq,
    alpha: &ScalarSeq,
    sigma: &ScalarSeq,
    gamma: &ScalarSeq,
) -> Result<XuReport> {
    let n = alpha.len();
    if sigma.len() != n || gamma.len() != n {
        return Err(invalid(
            "sigma",
            "alpha, sigma and gamma must have equal lengths",
        ));
    }
    if a.len() != n + 1 {
        return Err(invalid("a", "must be one longer than alpha"));
    }
    if let Some(v) = a.values().iter().find(|v| **v < 0.0) {
        return Err(invalid("a", format!("negative entry {v}")));
    }
    if let Some(v) = gamma.values().iter().find(|v| **v < 0.0) {
        return Err(invalid("gamma", format!("negative entry {v}")));
    }
    if let Some(v) = alpha.values().iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(invalid("alpha", format!("entry {v} is outside [0, 1]")));
    }

    let mut holds = true;
    let mut worst_index = 1;
    let mut worst_violation = f64::NEG_INFINITY;
    for i in 1..=n {
        let (an, al, s, g) = (a.get(i), alpha.get(i), sigma.get(i), gamma.get(i));
        let rhs = (1.0 - al) * an + al * s + g;
        let lhs = a.get(i + 1);
        let violation = lhs - rhs;
        let scale = 1.0 + an + al * s.abs() + g + lhs;
        if violation > XU_TOLERANCE * scale {
            holds = false;
        }
        if violation > worst_violation {
            worst_violation = violation;
            worst_index = i;
        }
    }

    let tail_len = a.len().div_ceil(10).max(1);
    let tail_max_of_a = a.values()[a.len() - tail_len..]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(XuReport {
        recursion_holds: holds,
        worst_index,
        worst_violation,
        tail_max_of_a,
    })
}

/// `m_k` for `k = k_start ..= len - 1`: the largest `n` in `1..=k` with
/// `gamma_n < gamma_{n+1}`, or `None` before the first increase.
///
/// Entry `j` of the result is `m_{k_start + j}`.
pub fn mainge_indices(gamma: &ScalarSeq, k_start: usize) -> Vec<Option<usize>> {
    let len = gamma.len();
    let k_start = k_start.max(1);
    let mut out = Vec::with_capacity(len.saturating_sub(k_start));
    let mut last_increase = None;
    for k in 1..len {
        if gamma.get(k) < gamma.get(k + 1) {
            last_increase = Some(k);
        }
        if k >= k_start {
            out.push(last_increase);
        }
    }
    out
}
