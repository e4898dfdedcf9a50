//! Post hoc suboptimality bounds for Weighted A*.
//!
//! Every iteration of wA* satisfies `fW_min + (W-1)·g_min <= W·C*` when `h`
//! is admissible. Tracking the largest `fW_min` seen (`F`) and the `g_min`
//! at that iteration gives the bound `C·W / (F + (W-1)·g_min)`, which never
//! exceeds `W` and is usually much tighter. The unweighted alternative
//! `C / f_min` uses the smallest `g + h` on Open when the goal is popped.

use crate::scalar::Scalar;
use crate::search::{SearchResult, SearchStatus, Weight};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack allowed when validating bound relations in floating point.
pub const BOUND_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("F bound denominator F + (W-1)*g_min = {0} is not positive")]
    NonPositiveDenominator(f64),
    #[error("f bound needs f_min > 0 when C > 0 (C = {cost}, f_min = {f_min})")]
    NonPositiveFMin { cost: f64, f_min: f64 },
    #[error("suboptimality C/C* = {0} is below 1; the optimal cost is wrong")]
    SuboptBelowOne(f64),
    #[error("bound value {value} lies outside [C/C* = {subopt}, W = {weight}]")]
    BoundViolation { value: f64, subopt: f64, weight: f64 },
    #[error("search did not solve the instance; no bounds available")]
    Unsolved,
    #[error("trace is missing the final-iteration f_min")]
    IncompleteTrace,
}

/// Frozen view of a [`TraceCollector`] after a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary<C> {
    /// `F`: largest `fW_min` over all iterations.
    pub f_w_max: C,
    /// `g_min` at the first iteration that reached `F`.
    pub g_min_at_f: C,
    /// Smallest unweighted `f` on Open at the final iteration (goal included).
    pub f_min_final: Option<C>,
    /// Largest `fW_min + (W-1)·g_min` over all iterations.
    pub combined_max: C,
    pub iterations: u64,
}

/// Per-iteration instrumentation owned by a single search.
#[derive(Debug, Clone)]
pub struct TraceCollector<C> {
    weight: C,
    f_w_max: Option<C>,
    g_min_at_f: C,
    f_min_final: Option<C>,
    combined_max: Option<C>,
    iterations: u64,
}

impl<C: Scalar> TraceCollector<C> {
    pub fn new(weight: Weight<C>) -> Self {
        TraceCollector {
            weight: weight.get(),
            f_w_max: None,
            g_min_at_f: C::zero(),
            f_min_final: None,
            combined_max: None,
            iterations: 0,
        }
    }

    /// Records one iteration, called at pop time before expansion.
    ///
    /// `g_min` must include the node being popped. `f_min` is `Some` only on
    /// the final iteration.
    pub fn observe_iteration(&mut self, f_w_min: C, g_min: C, f_min: Option<C>) {
        self.iterations += 1;
        // Strictly greater: on a tie the earlier iteration's g_min stays.
        if self.f_w_max.is_none_or(|f| f_w_min > f) {
            self.f_w_max = Some(f_w_min);
            self.g_min_at_f = g_min;
        }
        let combined = f_w_min + (self.weight - C::one()) * g_min;
        self.combined_max = Some(self.combined_max.map_or(combined, |m| m.max_of(combined)));
        if f_min.is_some() {
            self.f_min_final = f_min;
        }
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn f_w_max(&self) -> Option<C> {
        self.f_w_max
    }

    pub fn summary(&self) -> TraceSummary<C> {
        TraceSummary {
            f_w_max: self.f_w_max.unwrap_or_else(C::zero),
            g_min_at_f: self.g_min_at_f,
            f_min_final: self.f_min_final,
            combined_max: self.combined_max.unwrap_or_else(C::zero),
            iterations: self.iterations,
        }
    }
}

/// The F bound, `C·W / (F + (W-1)·g_min)`.
pub fn f_upper_bound<C: Scalar>(cost: C, weight: Weight<C>, f_w_max: C, g_min: C) -> Result<C, BoundError> {
    let w = weight.get();
    let denom = f_w_max + (w - C::one()) * g_min;
    if denom <= C::zero() {
        // C = 0 can only come from a start that is already a goal.
        if cost == C::zero() && denom == C::zero() {
            return Ok(C::one());
        }
        return Err(BoundError::NonPositiveDenominator(denom.as_f64()));
    }
    Ok(cost * w / denom)
}

/// The F bound computed from the combined per-iteration maximum.
pub fn combined_upper_bound<C: Scalar>(cost: C, weight: Weight<C>, combined_max: C) -> Result<C, BoundError> {
    f_upper_bound(cost, weight, combined_max, C::zero())
}

/// The f bound, `C / f_min`.
pub fn f_lower_bound_ratio<C: Scalar>(cost: C, f_min: C) -> Result<C, BoundError> {
    if f_min <= C::zero() {
        if cost == C::zero() && f_min == C::zero() {
            return Ok(C::one());
        }
        return Err(BoundError::NonPositiveFMin {
            cost: cost.as_f64(),
            f_min: f_min.as_f64(),
        });
    }
    Ok(cost / f_min)
}

/// Log-space accuracy of a bound value `v` relative to `C/C*` (0) and `W` (1).
///
/// Values within [`BOUND_TOLERANCE`] outside `[subopt, W]` are snapped to
/// the nearest end; anything further out is a [`BoundError::BoundViolation`].
pub fn rho(value: f64, subopt: f64, weight: f64) -> Result<f64, BoundError> {
    if subopt < 1.0 - BOUND_TOLERANCE {
        return Err(BoundError::SuboptBelowOne(subopt));
    }
    if value < subopt - BOUND_TOLERANCE || value > weight + BOUND_TOLERANCE {
        return Err(BoundError::BoundViolation { value, subopt, weight });
    }
    if subopt >= weight {
        return Ok(0.0);
    }
    let value = value.clamp(subopt, weight);
    let r = (value / subopt).log2() / (weight / subopt).log2();
    Ok(r.clamp(0.0, 1.0))
}

/// `W·f_min - (F + (W-1)·g_min)`; nonnegative whenever `h` is consistent.
pub fn dominance_gap<C: Scalar>(weight: Weight<C>, f_min: C, f_w_max: C, g_min: C) -> C {
    let w = weight.get();
    w * f_min - (f_w_max + (w - C::one()) * g_min)
}

/// All bounds for one solved run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport<C> {
    pub weight: C,
    pub cost: C,
    pub optimal_cost: Option<C>,
    pub w_bound: C,
    /// `C·W / (F + (W-1)·g_min)`.
    pub f_max_bound: C,
    /// `C·W / combined_max`.
    pub f_max_bound_combined: C,
    /// `C / f_min`.
    pub f_min_bound: C,
    pub subopt: Option<C>,
    pub rho_f_max: Option<f64>,
    pub rho_f_min: Option<f64>,
}

pub fn make_report<S, C: Scalar>(
    result: &SearchResult<S, C>,
    weight: Weight<C>,
    optimal_cost: Option<C>,
) -> Result<BoundReport<C>, BoundError> {
    if result.status != SearchStatus::Solved {
        return Err(BoundError::Unsolved);
    }
    let cost = result.cost.ok_or(BoundError::Unsolved)?;
    let trace = &result.trace;
    let f_min = trace.f_min_final.ok_or(BoundError::IncompleteTrace)?;

    let f_max_bound = f_upper_bound(cost, weight, trace.f_w_max, trace.g_min_at_f)?;
    let f_max_bound_combined = combined_upper_bound(cost, weight, trace.combined_max)?;
    let f_min_bound = f_lower_bound_ratio(cost, f_min)?;

    let subopt = optimal_cost.filter(|c| *c > C::zero()).map(|c_star| cost / c_star);
    let (rho_f_max, rho_f_min) = match subopt {
        Some(s) => {
            let (s, w) = (s.as_f64(), weight.get().as_f64());
            (
                Some(rho(f_max_bound.as_f64(), s, w)?),
                Some(rho(f_min_bound.as_f64(), s, w)?),
            )
        }
        None => (None, None),
    };

    Ok(BoundReport {
        weight: weight.get(),
        cost,
        optimal_cost,
        w_bound: weight.get(),
        f_max_bound,
        f_max_bound_combined,
        f_min_bound,
        subopt,
        rho_f_max,
        rho_f_min,
    })
}
