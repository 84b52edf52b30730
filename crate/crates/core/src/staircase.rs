//! Interleaved 1-up-1-down staircase pair.
//!
//! Each pair holds an upper staircase that starts from an obvious adjustment
//! and a lower one that starts from a subtle adjustment. A detection lowers
//! the stimulus, a miss raises it, with the step doubled until the first
//! reversal. The pair converges once both staircases have logged the
//! configured number of reversals.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::StaircaseError;
use crate::geometry::RangeKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StaircaseId {
    Upper,
    Lower,
}

impl StaircaseId {
    pub fn as_str(self) -> &'static str {
        match self {
            StaircaseId::Upper => "upper",
            StaircaseId::Lower => "lower",
        }
    }
}

/// Which reversals feed the final threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdPooling {
    /// The last `reversals_to_average` of each inner staircase, pooled.
    #[default]
    PerStaircase,
    /// The last `reversals_to_average` reversals of the pair in time order.
    PairLatest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StaircaseConfig {
    pub start_upper: f64,
    pub start_lower: f64,
    pub base_step: f64,
    pub reversals_to_converge: usize,
    pub reversals_to_average: usize,
    pub quick_start: bool,
    pub stimulus_floor: f64,
    pub stimulus_ceiling: f64,
    pub pooling: ThresholdPooling,
}

impl Default for StaircaseConfig {
    fn default() -> Self {
        StaircaseConfig::for_range(RangeKind::Large)
    }
}

impl StaircaseConfig {
    pub fn for_range(range: RangeKind) -> Self {
        StaircaseConfig {
            start_upper: 2.0,
            start_lower: 0.8,
            base_step: 0.2,
            reversals_to_converge: 5,
            reversals_to_average: 3,
            quick_start: true,
            stimulus_floor: 0.0,
            stimulus_ceiling: range.max_adjustment(),
            pooling: ThresholdPooling::PerStaircase,
        }
    }

    pub fn validate(&self) -> Result<(), StaircaseError> {
        let finite = [self.start_upper, self.start_lower, self.base_step, self.stimulus_floor, self.stimulus_ceiling]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(StaircaseError::Config("values must be finite"));
        }
        if !(self.start_upper > self.start_lower) {
            return Err(StaircaseError::Config("start_upper must exceed start_lower"));
        }
        if self.start_lower < 0.0 {
            return Err(StaircaseError::Config("start_lower must be non-negative"));
        }
        if !(self.base_step > 0.0) {
            return Err(StaircaseError::Config("base_step must be positive"));
        }
        if self.reversals_to_average == 0 || self.reversals_to_average > self.reversals_to_converge {
            return Err(StaircaseError::Config(
                "reversals_to_average must be in 1..=reversals_to_converge",
            ));
        }
        if !(self.stimulus_floor <= self.start_lower && self.start_upper <= self.stimulus_ceiling) {
            return Err(StaircaseError::Config("start values must lie within [stimulus_floor, stimulus_ceiling]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reversal {
    pub stimulus: f64,
    /// Pair-level trial number at which the reversal happened.
    pub pair_trial: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerStaircase {
    pub id: StaircaseId,
    pub current_stimulus: f64,
    pub last_move: Option<Move>,
    pub reversals: Vec<Reversal>,
    pub in_quick_start: bool,
    pub trial_count: usize,
}

impl InnerStaircase {
    fn new(id: StaircaseId, start: f64, quick_start: bool) -> Self {
        InnerStaircase {
            id,
            current_stimulus: start,
            last_move: None,
            reversals: Vec::new(),
            in_quick_start: quick_start,
            trial_count: 0,
        }
    }

    pub fn reversal_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.reversals.iter().map(|r| r.stimulus)
    }
}

/// What a single response did to its staircase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseOutcome {
    pub reversal_logged: bool,
    pub converged: bool,
    pub next_stimulus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NextStimulus {
    Present { id: StaircaseId, magnitude: f64 },
    Converged,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub value: f64,
    /// Means of the upper and lower staircases' contributing reversals.
    pub per_staircase_means: [f64; 2],
    pub reversal_values_used: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaircasePair {
    pub config: StaircaseConfig,
    pub upper: InnerStaircase,
    pub lower: InnerStaircase,
    trials: usize,
}

impl StaircasePair {
    pub fn new(config: StaircaseConfig) -> Result<Self, StaircaseError> {
        config.validate()?;
        Ok(StaircasePair {
            upper: InnerStaircase::new(StaircaseId::Upper, config.start_upper, config.quick_start),
            lower: InnerStaircase::new(StaircaseId::Lower, config.start_lower, config.quick_start),
            config,
            trials: 0,
        })
    }

    pub fn staircase(&self, id: StaircaseId) -> &InnerStaircase {
        match id {
            StaircaseId::Upper => &self.upper,
            StaircaseId::Lower => &self.lower,
        }
    }

    fn staircase_mut(&mut self, id: StaircaseId) -> &mut InnerStaircase {
        match id {
            StaircaseId::Upper => &mut self.upper,
            StaircaseId::Lower => &mut self.lower,
        }
    }

    pub fn is_converged(&self, id: StaircaseId) -> bool {
        self.staircase(id).reversals.len() >= self.config.reversals_to_converge
    }

    pub fn both_converged(&self) -> bool {
        self.is_converged(StaircaseId::Upper) && self.is_converged(StaircaseId::Lower)
    }

    /// Trials presented so far across both staircases.
    pub fn trial_count(&self) -> usize {
        self.trials
    }

    /// Picks an unconverged staircase uniformly at random.
    pub fn next_stimulus<R: Rng + ?Sized>(&self, rng: &mut R) -> NextStimulus {
        let upper_open = !self.is_converged(StaircaseId::Upper);
        let lower_open = !self.is_converged(StaircaseId::Lower);
        let id = match (upper_open, lower_open) {
            (true, true) => {
                if rng.random_bool(0.5) {
                    StaircaseId::Upper
                } else {
                    StaircaseId::Lower
                }
            }
            (true, false) => StaircaseId::Upper,
            (false, true) => StaircaseId::Lower,
            (false, false) => return NextStimulus::Converged,
        };
        NextStimulus::Present { id, magnitude: self.staircase(id).current_stimulus }
    }

    /// Applies a yes/no detection response to the given staircase.
    pub fn record_response(&mut self, id: StaircaseId, detected: bool) -> Result<ResponseOutcome, StaircaseError> {
        if self.is_converged(id) {
            return Err(StaircaseError::AlreadyConverged(id));
        }
        let pair_trial = self.trials;
        self.trials += 1;
        let cfg = self.config.clone();
        let stair = self.staircase_mut(id);
        stair.trial_count += 1;

        let direction = if detected { Move::Down } else { Move::Up };
        let mut reversal_logged = false;
        if let Some(previous) = stair.last_move {
            if previous != direction {
                stair.reversals.push(Reversal { stimulus: stair.current_stimulus, pair_trial });
                stair.in_quick_start = false;
                reversal_logged = true;
            }
        }
        stair.last_move = Some(direction);

        let converged = stair.reversals.len() >= cfg.reversals_to_converge;
        if !converged {
            let step = if stair.in_quick_start { 2.0 * cfg.base_step } else { cfg.base_step };
            let moved = match direction {
                Move::Up => stair.current_stimulus + step,
                Move::Down => stair.current_stimulus - step,
            };
            stair.current_stimulus = moved.clamp(cfg.stimulus_floor, cfg.stimulus_ceiling);
        }
        Ok(ResponseOutcome { reversal_logged, converged, next_stimulus: stair.current_stimulus })
    }

    pub fn estimate_threshold(&self) -> Result<ThresholdEstimate, StaircaseError> {
        if !self.both_converged() {
            return Err(StaircaseError::NotConverged);
        }
        let k = self.config.reversals_to_average;
        let tail = |s: &InnerStaircase| -> Vec<Reversal> { s.reversals[s.reversals.len() - k..].to_vec() };
        let upper = tail(&self.upper);
        let lower = tail(&self.lower);
        let per_staircase_means = [mean(upper.iter().map(|r| r.stimulus)), mean(lower.iter().map(|r| r.stimulus))];

        let used: Vec<f64> = match self.config.pooling {
            ThresholdPooling::PerStaircase => upper.iter().chain(lower.iter()).map(|r| r.stimulus).collect(),
            ThresholdPooling::PairLatest => {
                let mut all: Vec<Reversal> =
                    self.upper.reversals.iter().chain(self.lower.reversals.iter()).copied().collect();
                all.sort_by_key(|r| r.pair_trial);
                all[all.len() - k..].iter().map(|r| r.stimulus).collect()
            }
        };
        Ok(ThresholdEstimate { value: mean(used.iter().copied()), per_staircase_means, reversal_values_used: used })
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

pub fn init_pair(config: StaircaseConfig) -> Result<StaircasePair, StaircaseError> {
    StaircasePair::new(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SimRng;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;

    fn pair() -> StaircasePair {
        StaircasePair::new(StaircaseConfig::default()).unwrap()
    }

    fn with_reversals(values_upper: &[f64], values_lower: &[f64]) -> StaircasePair {
        let mut p = pair();
        for (i, &v) in values_upper.iter().enumerate() {
            p.upper.reversals.push(Reversal { stimulus: v, pair_trial: 2 * i });
        }
        for (i, &v) in values_lower.iter().enumerate() {
            p.lower.reversals.push(Reversal { stimulus: v, pair_trial: 2 * i + 1 });
        }
        p
    }

    #[test]
    fn init_defaults() {
        let p = pair();
        assert_eq!(p.upper.current_stimulus, 2.0);
        assert_eq!(p.lower.current_stimulus, 0.8);
        assert!(p.upper.in_quick_start && p.lower.in_quick_start);
        assert!(p.upper.reversals.is_empty());

        let cfg = StaircaseConfig { quick_start: false, ..StaircaseConfig::default() };
        assert!(!StaircasePair::new(cfg).unwrap().upper.in_quick_start);
    }

    #[test]
    fn init_rejects_equal_starts() {
        let cfg = StaircaseConfig { start_lower: 2.0, ..StaircaseConfig::default() };
        assert!(matches!(init_pair(cfg), Err(StaircaseError::Config(_))));
        let cfg = StaircaseConfig { reversals_to_average: 6, ..StaircaseConfig::default() };
        assert!(init_pair(cfg).is_err());
        let cfg = StaircaseConfig { base_step: 0.0, ..StaircaseConfig::default() };
        assert!(init_pair(cfg).is_err());
    }

    #[test]
    fn quick_start_first_step() {
        let mut p = pair();
        let out = p.record_response(StaircaseId::Upper, true).unwrap();
        assert_abs_diff_eq!(out.next_stimulus, 1.6, epsilon = 1e-12);
        assert!(!out.reversal_logged);
    }

    #[test]
    fn reversal_logged_at_pre_move_value() {
        let mut p = pair();
        p.record_response(StaircaseId::Upper, true).unwrap();
        p.record_response(StaircaseId::Upper, true).unwrap();
        let before = p.upper.current_stimulus;
        let out = p.record_response(StaircaseId::Upper, false).unwrap();
        assert!(out.reversal_logged);
        assert_eq!(p.upper.reversals[0].stimulus, before);
        assert!(!p.upper.in_quick_start);
        // base step once quick start has ended
        assert_abs_diff_eq!(out.next_stimulus, before + 0.2, epsilon = 1e-12);
    }

    #[test]
    fn floor_clamp() {
        let mut p = pair();
        p.lower.current_stimulus = 0.1;
        p.lower.in_quick_start = false;
        let out = p.record_response(StaircaseId::Lower, true).unwrap();
        assert_eq!(out.next_stimulus, 0.0);
        // a clamped bounce is not a reversal by itself
        let out = p.record_response(StaircaseId::Lower, true).unwrap();
        assert!(!out.reversal_logged);
        assert_eq!(out.next_stimulus, 0.0);
    }

    #[test]
    fn next_stimulus_filtering() {
        let mut rng = SimRng::seed_from_u64(7);
        let mut p = with_reversals(&[1.0; 5], &[]);
        for _ in 0..100 {
            assert!(matches!(p.next_stimulus(&mut rng), NextStimulus::Present { id: StaircaseId::Lower, .. }));
        }
        p.lower.reversals = p.upper.reversals.clone();
        assert_eq!(p.next_stimulus(&mut rng), NextStimulus::Converged);
    }

    #[test]
    fn next_stimulus_is_uniform() {
        let mut rng = SimRng::seed_from_u64(11);
        let p = pair();
        let upper = (0..10_000)
            .filter(|_| matches!(p.next_stimulus(&mut rng), NextStimulus::Present { id: StaircaseId::Upper, .. }))
            .count();
        let freq = upper as f64 / 10_000.0;
        assert!((freq - 0.5).abs() <= 0.03, "{freq}");
    }

    #[test]
    fn recording_to_converged_staircase_fails() {
        let mut p = with_reversals(&[1.0; 5], &[]);
        assert_eq!(
            p.record_response(StaircaseId::Upper, true),
            Err(StaircaseError::AlreadyConverged(StaircaseId::Upper))
        );
    }

    #[test]
    fn estimate_examples() {
        let p = with_reversals(&[1.2, 0.9, 1.1, 0.95, 1.05], &[0.9, 1.1, 0.95, 1.05, 1.0]);
        let est = p.estimate_threshold().unwrap();
        assert_eq!(est.reversal_values_used.len(), 6);
        let expected = (1.1 + 0.95 + 1.05 + 0.95 + 1.05 + 1.0) / 6.0;
        assert_abs_diff_eq!(est.value, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(est.value, 1.0167, epsilon = 1e-4);

        let p = with_reversals(&[0.7; 5], &[0.7; 5]);
        assert_abs_diff_eq!(p.estimate_threshold().unwrap().value, 0.7, epsilon = 1e-15);

        assert_eq!(pair().estimate_threshold(), Err(StaircaseError::NotConverged));
    }

    #[test]
    fn pair_latest_pooling_uses_time_order() {
        let mut p = with_reversals(&[1.0, 1.0, 1.0, 1.0, 2.0], &[1.0, 1.0, 1.0, 3.0, 4.0]);
        p.config.pooling = ThresholdPooling::PairLatest;
        // time order: ..., upper#3 (t=6), lower#3 (t=7), upper#4 (t=8), lower#4 (t=9)
        let est = p.estimate_threshold().unwrap();
        assert_eq!(est.reversal_values_used, alloc::vec![3.0, 2.0, 4.0]);
        assert_abs_diff_eq!(est.value, 3.0);
    }
}
