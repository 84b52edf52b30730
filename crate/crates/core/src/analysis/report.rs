use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{art_anova, correlation_table, descriptives, AnovaResult, ConditionSummary, CorrelationTable, ExperimentDataset};
use crate::error::AnalysisError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AnovaSection {
    Computed { result: AnovaResult },
    Unavailable { reason: alloc::string::String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CorrelationSection {
    Computed { table: CorrelationTable },
    InsufficientN { n: usize, needed: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n_rows: usize,
    pub n_included: usize,
    pub descriptives: Vec<ConditionSummary>,
    /// ART repeated-measures ANOVA.
    pub anova: AnovaSection,
    pub correlations: CorrelationSection,
}

/// Full results pipeline over the included participants.
pub fn analyze(dataset: &ExperimentDataset) -> Result<AnalysisReport, AnalysisError> {
    let descriptives = descriptives(dataset)?;
    let anova = match dataset.within_table().and_then(|t| art_anova(&t)) {
        Ok(result) => AnovaSection::Computed { result },
        Err(e) => AnovaSection::Unavailable { reason: alloc::format!("{e}") },
    };
    let correlations = match correlation_table(dataset) {
        Ok(table) => CorrelationSection::Computed { table },
        Err(AnalysisError::InsufficientData { needed, got }) => CorrelationSection::InsufficientN { n: got, needed },
        Err(e) => return Err(e),
    };
    Ok(AnalysisReport {
        n_rows: dataset.rows.len(),
        n_included: dataset.included().count(),
        descriptives,
        anova,
        correlations,
    })
}
