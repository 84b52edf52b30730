//! Threshold statistics: descriptives, aligned-rank-transform repeated
//! measures ANOVA, Pearson correlations with Benjamini-Hochberg control,
//! and questionnaire scoring.

mod anova;
mod correlation;
mod descriptives;
mod report;
mod traits;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::condition::{Condition, ConditionMap};
use crate::error::AnalysisError;

pub use anova::{
    align_rank_transform, art_anova, midranks, rm_anova_2x2, AlignedTables, AnovaResult, Effect, EffectTest,
    Within2x2,
};
pub use correlation::{bh_fdr, correlation_table, pearson, Correlation, CorrelationCell, CorrelationTable, Trait};
pub use descriptives::{descriptives, quantile_type7, ConditionSummary};
pub use report::{analyze, AnalysisReport, AnovaSection, CorrelationSection};
pub use traits::{sbsod_score, sot_error, SBSOD_ITEMS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRow {
    pub participant_id: u32,
    pub included: bool,
    /// `None` where the block did not converge.
    pub thresholds: ConditionMap<Option<f64>>,
    pub sot_error: f64,
    pub sbsod: f64,
    pub vr_experience: u8,
}

impl DatasetRow {
    pub fn complete(&self) -> Option<ConditionMap<f64>> {
        let mut out = [0.0; 4];
        for (slot, v) in out.iter_mut().zip(self.thresholds.0.iter()) {
            *slot = (*v)?;
        }
        Some(ConditionMap(out))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ExperimentDataset {
    pub rows: Vec<DatasetRow>,
}

impl ExperimentDataset {
    pub fn included(&self) -> impl Iterator<Item = &DatasetRow> {
        self.rows.iter().filter(|r| r.included)
    }

    /// Included values of one condition as (participant, threshold).
    pub fn column(&self, condition: Condition) -> Vec<(u32, f64)> {
        self.included().filter_map(|r| r.thresholds.get(condition).map(|v| (r.participant_id, v))).collect()
    }

    /// Within-subject table over included participants.
    pub fn within_table(&self) -> Result<Within2x2, AnalysisError> {
        let mut cells = Vec::new();
        for row in self.included() {
            let c = row.complete().ok_or(AnalysisError::MissingCell(row.participant_id))?;
            cells.push(Within2x2::cell_from_conditions(&c));
        }
        if cells.is_empty() {
            return Err(AnalysisError::Empty);
        }
        Ok(Within2x2 { cells })
    }
}
