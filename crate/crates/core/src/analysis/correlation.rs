use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::ExperimentDataset;
use crate::condition::Condition;
use crate::error::AnalysisError;
use crate::math::{sqrt, t_two_sided};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub r: f64,
    pub p: f64,
    pub n: usize,
}

/// Product-moment correlation with a two-sided t-test p-value.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation, AnalysisError> {
    if x.len() != y.len() {
        return Err(AnalysisError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(AnalysisError::InsufficientData { needed: 3, got: n });
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(AnalysisError::ZeroVariance);
    }
    let r = (sxy / sqrt(sxx * syy)).clamp(-1.0, 1.0);
    let df = nf - 2.0;
    let p = if r.abs() == 1.0 { 0.0 } else { t_two_sided(r * sqrt(df / (1.0 - r * r)), df) };
    Ok(Correlation { r, p, n })
}

/// Benjamini-Hochberg step-up adjusted p-values, in input order.
pub fn bh_fdr(p_values: &[f64]) -> Vec<f64> {
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));
    let mut adjusted = alloc::vec![0.0; m];
    let mut running = f64::INFINITY;
    for (rank, &i) in order.iter().enumerate().rev() {
        running = running.min(p_values[i] * m as f64 / (rank + 1) as f64);
        adjusted[i] = running.min(1.0);
    }
    adjusted
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trait {
    Sot,
    Sbsod,
    VrExperience,
}

impl Trait {
    pub const ALL: [Trait; 3] = [Trait::Sot, Trait::Sbsod, Trait::VrExperience];

    pub fn label(self) -> &'static str {
        match self {
            Trait::Sot => "SOT",
            Trait::Sbsod => "SBSOD",
            Trait::VrExperience => "VR Experience",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCell {
    pub trait_score: Trait,
    pub condition: Condition,
    /// `None` when the correlation is undefined (zero variance).
    pub r: Option<f64>,
    pub p: Option<f64>,
    pub p_adjusted: Option<f64>,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable {
    pub n: usize,
    pub alpha: f64,
    /// Row-major: traits in [`Trait::ALL`] order, conditions in column order.
    pub cells: Vec<CorrelationCell>,
}

impl CorrelationTable {
    pub fn cell(&self, trait_score: Trait, condition: Condition) -> &CorrelationCell {
        let row = Trait::ALL.iter().position(|t| *t == trait_score).unwrap();
        &self.cells[row * 4 + condition.index()]
    }
}

pub const SIGNIFICANCE_ALPHA: f64 = 0.05;

/// Trait × condition correlations, adjusted jointly across all defined cells.
pub fn correlation_table(dataset: &ExperimentDataset) -> Result<CorrelationTable, AnalysisError> {
    let rows: Vec<_> = dataset.included().filter_map(|r| r.complete().map(|c| (r, c))).collect();
    if rows.len() < 3 {
        return Err(AnalysisError::InsufficientData { needed: 3, got: rows.len() });
    }
    let mut cells = Vec::with_capacity(12);
    for t in Trait::ALL {
        let x: Vec<f64> = rows
            .iter()
            .map(|(r, _)| match t {
                Trait::Sot => r.sot_error,
                Trait::Sbsod => r.sbsod,
                Trait::VrExperience => r.vr_experience as f64,
            })
            .collect();
        for c in Condition::ALL {
            let y: Vec<f64> = rows.iter().map(|(_, th)| *th.get(c)).collect();
            let corr = pearson(&x, &y).ok();
            cells.push(CorrelationCell {
                trait_score: t,
                condition: c,
                r: corr.map(|k| k.r),
                p: corr.map(|k| k.p),
                p_adjusted: None,
                significant: false,
            });
        }
    }
    let defined: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].p.is_some()).collect();
    let raw: Vec<f64> = defined.iter().map(|&i| cells[i].p.unwrap()).collect();
    for (&i, q) in defined.iter().zip(bh_fdr(&raw)) {
        cells[i].p_adjusted = Some(q);
        cells[i].significant = q < SIGNIFICANCE_ALPHA;
    }
    Ok(CorrelationTable { n: rows.len(), alpha: SIGNIFICANCE_ALPHA, cells })
}
