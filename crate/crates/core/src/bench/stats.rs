//! Boxplot statistics and per-weight summaries.
//!
//! Quartiles interpolate linearly between order statistics at rank
//! `p·(n-1)` (the inclusive convention, so the median of an even-sized
//! sample is the mean of the middle pair). Whiskers reach the most extreme
//! data points within `1.5·IQR` of the box on each side; anything beyond is
//! an outlier.

use super::ExperimentRecord;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("cannot summarise an empty sample")]
    Empty,
    #[error("sample contains a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxplotStats {
    pub n: usize,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    /// Sorted ascending.
    pub outliers: Vec<f64>,
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

pub fn boxplot_stats(values: &[f64]) -> Result<BoxplotStats, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile(&sorted, 0.25);
    let median = quantile(&sorted, 0.5);
    let q3 = quantile(&sorted, 0.75);
    let iqr = q3 - q1;
    let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let inside = sorted.iter().copied().filter(|v| (lo_fence..=hi_fence).contains(v));
    let whisker_low = inside.clone().fold(f64::INFINITY, f64::min);
    let whisker_high = inside.fold(f64::NEG_INFINITY, f64::max);
    let outliers = sorted
        .iter()
        .copied()
        .filter(|v| !(lo_fence..=hi_fence).contains(v))
        .collect();
    Ok(BoxplotStats {
        n: sorted.len(),
        q1,
        median,
        q3,
        whisker_low,
        whisker_high,
        outliers,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    Weight,
    WeightAndHeuristic,
}

impl std::str::FromStr for GroupBy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.replace(' ', "").as_str() {
            "W" | "w" | "weight" => Ok(GroupBy::Weight),
            "W,heuristic" | "w,heuristic" | "weight,heuristic" | "heuristic,W" | "heuristic,w" => {
                Ok(GroupBy::WeightAndHeuristic)
            }
            other => Err(format!("unknown grouping `{other}` (W or W,heuristic)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    /// `None` when grouping by weight only.
    pub heuristic: Option<String>,
    pub weight: f64,
    /// Solved runs in the group.
    pub solved: usize,
    pub subopt: Option<BoxplotStats>,
    pub rho_f_max: Option<BoxplotStats>,
    pub rho_f_min: Option<BoxplotStats>,
    /// Runs with `C/C* > sqrt(W)`.
    pub above_sqrt_w: usize,
    /// Fraction of runs with oracle data that returned an optimal solution.
    pub fraction_optimal: Option<f64>,
}

/// Keeps only instances solved under every (heuristic, W) combination that
/// appears for their domain.
pub fn commonly_solved(records: &[ExperimentRecord]) -> Vec<ExperimentRecord> {
    let mut combos: HashMap<&str, HashSet<(String, u64)>> = HashMap::new();
    for r in records {
        combos
            .entry(r.domain.as_str())
            .or_default()
            .insert((r.heuristic.clone(), r.weight.to_bits()));
    }
    let mut solved: HashMap<(&str, &str), HashSet<(String, u64)>> = HashMap::new();
    for r in records.iter().filter(|r| r.solved) {
        solved
            .entry((r.domain.as_str(), r.instance_id.as_str()))
            .or_default()
            .insert((r.heuristic.clone(), r.weight.to_bits()));
    }
    records
        .iter()
        .filter(|r| {
            solved
                .get(&(r.domain.as_str(), r.instance_id.as_str()))
                .is_some_and(|s| s.len() == combos[r.domain.as_str()].len())
        })
        .cloned()
        .collect()
}

const OPTIMAL_TOLERANCE: f64 = 1e-9;

pub fn summarize(records: &[ExperimentRecord], group_by: GroupBy) -> Vec<GroupSummary> {
    // Keyed on (heuristic, W bits); BTreeMap keeps output order stable.
    let mut groups: BTreeMap<(Option<String>, u64), Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in records {
        let h = match group_by {
            GroupBy::Weight => None,
            GroupBy::WeightAndHeuristic => Some(r.heuristic.clone()),
        };
        groups.entry((h, r.weight.to_bits())).or_default().push(r);
    }
    let mut out: Vec<GroupSummary> = groups
        .into_iter()
        .map(|((heuristic, wbits), rs)| {
            let weight = f64::from_bits(wbits);
            let solved: Vec<_> = rs.into_iter().filter(|r| r.solved).collect();
            let subopts: Vec<f64> = solved.iter().filter_map(|r| r.subopt).collect();
            let rho_f: Vec<f64> = solved.iter().filter_map(|r| r.rho_f_max).collect();
            let rho_fm: Vec<f64> = solved.iter().filter_map(|r| r.rho_f_min).collect();
            let above_sqrt_w = subopts.iter().filter(|&&s| s > weight.sqrt()).count();
            let fraction_optimal = (!subopts.is_empty()).then(|| {
                subopts.iter().filter(|&&s| s <= 1.0 + OPTIMAL_TOLERANCE).count() as f64 / subopts.len() as f64
            });
            GroupSummary {
                heuristic,
                weight,
                solved: solved.len(),
                subopt: boxplot_stats(&subopts).ok(),
                rho_f_max: boxplot_stats(&rho_f).ok(),
                rho_f_min: boxplot_stats(&rho_fm).ok(),
                above_sqrt_w,
                fraction_optimal,
            }
        })
        .collect();
    out.sort_by(|a, b| a.heuristic.cmp(&b.heuristic).then(a.weight.total_cmp(&b.weight)));
    out
}
