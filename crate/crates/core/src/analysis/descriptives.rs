use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::ExperimentDataset;
use crate::condition::Condition;
use crate::error::AnalysisError;
use crate::math::{floor, sqrt};

/// Outliers lie outside `[Q1 - 3 IQR, Q3 + 3 IQR]`.
pub const OUTLIER_IQR_MULTIPLIER: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionSummary {
    pub condition: Condition,
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub iqr: f64,
    pub fence_low: f64,
    pub fence_high: f64,
    pub outliers: Vec<u32>,
}

/// Linear-interpolation quantile (`h = (n - 1) p`) of sorted data.
pub fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn summarize(condition: Condition, values: &[(u32, f64)]) -> ConditionSummary {
    let n = values.len();
    let mean = values.iter().map(|v| v.1).sum::<f64>() / n as f64;
    let sd = if n > 1 {
        sqrt(values.iter().map(|v| (v.1 - mean) * (v.1 - mean)).sum::<f64>() / (n - 1) as f64)
    } else {
        0.0
    };
    let mut sorted: Vec<f64> = values.iter().map(|v| v.1).collect();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_type7(&sorted, 0.25);
    let q3 = quantile_type7(&sorted, 0.75);
    let iqr = q3 - q1;
    let fence_low = q1 - OUTLIER_IQR_MULTIPLIER * iqr;
    let fence_high = q3 + OUTLIER_IQR_MULTIPLIER * iqr;
    let outliers = values.iter().filter(|v| v.1 < fence_low || v.1 > fence_high).map(|v| v.0).collect();
    ConditionSummary {
        condition,
        n,
        mean,
        sd,
        q1,
        median: quantile_type7(&sorted, 0.5),
        q3,
        iqr,
        fence_low,
        fence_high,
        outliers,
    }
}

/// Per-condition summaries over included rows, in column order.
pub fn descriptives(dataset: &ExperimentDataset) -> Result<Vec<ConditionSummary>, AnalysisError> {
    Condition::ALL
        .iter()
        .map(|&c| {
            let column = dataset.column(c);
            if column.is_empty() {
                Err(AnalysisError::Empty)
            } else {
                Ok(summarize(c, &column))
            }
        })
        .collect()
}
