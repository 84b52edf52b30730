//! Two-way (direction × size) within-subject ANOVA and the aligned rank
//! transform.
//!
//! Each effect has one degree of freedom, so its F test reduces to a test on
//! a per-participant contrast: `SS_effect = n * mean(d)^2` and
//! `SS_error = sum (d - mean(d))^2`.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::condition::ConditionMap;
use crate::error::AnalysisError;
use crate::math::{abs, f_sf};

/// Per-participant cells indexed `[direction][size]` with forward = 0,
/// backward = 1, small = 0, large = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Within2x2 {
    pub cells: Vec<[[f64; 2]; 2]>,
}

impl Within2x2 {
    pub fn cell_from_conditions(c: &ConditionMap<f64>) -> [[f64; 2]; 2] {
        let [fs, fl, bs, bl] = c.0;
        [[fs, fl], [bs, bl]]
    }

    pub fn n(&self) -> usize {
        self.cells.len()
    }

    fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.cells.iter().flat_map(|c| c.iter().flat_map(|row| row.iter().copied()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Effect {
    Direction,
    Size,
    Interaction,
}

impl Effect {
    pub const ALL: [Effect; 3] = [Effect::Direction, Effect::Size, Effect::Interaction];

    fn index(self) -> usize {
        self as usize
    }

    fn contrast(self, c: &[[f64; 2]; 2]) -> f64 {
        match self {
            Effect::Direction => ((c[1][0] + c[1][1]) - (c[0][0] + c[0][1])) / 2.0,
            Effect::Size => ((c[0][1] + c[1][1]) - (c[0][0] + c[1][0])) / 2.0,
            Effect::Interaction => (c[1][1] - c[1][0] - c[0][1] + c[0][0]) / 2.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Effect::Direction => "direction",
            Effect::Size => "size",
            Effect::Interaction => "direction x size",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectTest {
    pub effect: Effect,
    pub ss_effect: f64,
    pub ss_error: f64,
    pub df_effect: f64,
    pub df_error: f64,
    pub f: f64,
    pub p: f64,
    pub partial_eta_sq: f64,
    /// Error variance vanished; F is reported as infinite (or 0 when the
    /// effect vanished as well).
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnovaResult {
    pub n: usize,
    pub effects: [EffectTest; 3],
}

impl AnovaResult {
    pub fn get(&self, effect: Effect) -> &EffectTest {
        &self.effects[effect.index()]
    }

    pub fn any_degenerate(&self) -> bool {
        self.effects.iter().any(|e| e.degenerate)
    }
}

// relative to the raw sum of squares of the data
const DEGENERATE_TOLERANCE: f64 = 1e-18;

fn effect_test(table: &Within2x2, effect: Effect) -> EffectTest {
    let n = table.n() as f64;
    let d: Vec<f64> = table.cells.iter().map(|c| effect.contrast(c)).collect();
    let mean = d.iter().sum::<f64>() / n;
    let ss_effect = n * mean * mean;
    let ss_error: f64 = d.iter().map(|v| (v - mean) * (v - mean)).sum();
    let df_error = n - 1.0;
    let scale = table.values().map(|v| v * v).sum::<f64>().max(f64::MIN_POSITIVE);
    let tol = DEGENERATE_TOLERANCE * scale;

    let (f, p, partial_eta_sq, degenerate) = if ss_error <= tol {
        if ss_effect <= tol {
            (0.0, 1.0, 0.0, true)
        } else {
            (f64::INFINITY, 0.0, 1.0, true)
        }
    } else {
        let f = ss_effect / (ss_error / df_error);
        (f, f_sf(f, 1.0, df_error), ss_effect / (ss_effect + ss_error), false)
    };
    EffectTest { effect, ss_effect, ss_error, df_effect: 1.0, df_error, f, p, partial_eta_sq, degenerate }
}

/// Classical repeated-measures ANOVA on a complete 2×2 within-subject table.
pub fn rm_anova_2x2(table: &Within2x2) -> Result<AnovaResult, AnalysisError> {
    if table.n() < 2 {
        return Err(AnalysisError::InsufficientData { needed: 2, got: table.n() });
    }
    if table.values().any(|v| !v.is_finite()) {
        return Err(AnalysisError::OutOfRange("non-finite cell value"));
    }
    Ok(AnovaResult { n: table.n(), effects: Effect::ALL.map(|e| effect_test(table, e)) })
}

/// Relative tolerance under which aligned values count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Average ranks (1-based); values within [`TIE_TOLERANCE`] of the first
/// member of a run share a rank.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let scale = values.iter().fold(1.0f64, |m, v| m.max(abs(*v)));
    let tol = TIE_TOLERANCE * scale;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = alloc::vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let anchor = values[order[start]];
        let mut end = start + 1;
        while end < order.len() && values[order[end]] - anchor <= tol {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Aligned and ranked tables, one per effect in [`Effect::ALL`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignedTables {
    pub aligned: [Within2x2; 3],
    pub ranked: [Within2x2; 3],
}

impl AlignedTables {
    pub fn aligned(&self, effect: Effect) -> &Within2x2 {
        &self.aligned[effect.index()]
    }

    pub fn ranked(&self, effect: Effect) -> &Within2x2 {
        &self.ranked[effect.index()]
    }
}

/// Strips every fixed effect except the one of interest, then midranks.
pub fn align_rank_transform(table: &Within2x2) -> Result<AlignedTables, AnalysisError> {
    let n = table.n();
    if n == 0 {
        return Err(AnalysisError::Empty);
    }
    if table.values().any(|v| !v.is_finite()) {
        return Err(AnalysisError::MissingCell(0));
    }
    let nf = n as f64;
    let mut cell_mean = [[0.0; 2]; 2];
    for c in &table.cells {
        for a in 0..2 {
            for b in 0..2 {
                cell_mean[a][b] += c[a][b] / nf;
            }
        }
    }
    let dir_mean = [(cell_mean[0][0] + cell_mean[0][1]) / 2.0, (cell_mean[1][0] + cell_mean[1][1]) / 2.0];
    let size_mean = [(cell_mean[0][0] + cell_mean[1][0]) / 2.0, (cell_mean[0][1] + cell_mean[1][1]) / 2.0];
    let grand = (dir_mean[0] + dir_mean[1]) / 2.0;

    let estimate = |effect: Effect, a: usize, b: usize| match effect {
        Effect::Direction => dir_mean[a] - grand,
        Effect::Size => size_mean[b] - grand,
        Effect::Interaction => cell_mean[a][b] - dir_mean[a] - size_mean[b] + grand,
    };
    let align = |effect: Effect| Within2x2 {
        cells: table
            .cells
            .iter()
            .map(|c| {
                let mut out = [[0.0; 2]; 2];
                for a in 0..2 {
                    for b in 0..2 {
                        out[a][b] = c[a][b] - cell_mean[a][b] + estimate(effect, a, b);
                    }
                }
                out
            })
            .collect(),
    };
    let rank = |t: &Within2x2| {
        let flat: Vec<f64> = t.values().collect();
        let r = midranks(&flat);
        Within2x2 { cells: r.chunks_exact(4).map(|q| [[q[0], q[1]], [q[2], q[3]]]).collect() }
    };
    let aligned = Effect::ALL.map(align);
    let ranked = [rank(&aligned[0]), rank(&aligned[1]), rank(&aligned[2])];
    Ok(AlignedTables { aligned, ranked })
}

/// ART ANOVA: each effect tested on its own aligned-ranked table.
pub fn art_anova(table: &Within2x2) -> Result<AnovaResult, AnalysisError> {
    if table.n() < 2 {
        return Err(AnalysisError::InsufficientData { needed: 2, got: table.n() });
    }
    let art = align_rank_transform(table)?;
    let mut effects = [effect_test(table, Effect::Direction); 3];
    for e in Effect::ALL {
        effects[e.index()] = rm_anova_2x2(art.ranked(e))?.effects[e.index()];
    }
    Ok(AnovaResult { n: table.n(), effects })
}
