//! Block and experiment orchestration.
//!
//! A block opens with training trials, then interleaves the forward pair,
//! the backward pair and the remaining catch trials by uniform choice among
//! whichever are still open. An experiment runs a small-range and a
//! large-range block per participant in alternating order.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{DatasetRow, ExperimentDataset};
use crate::condition::{Condition, ConditionMap};
use crate::error::SessionError;
use crate::geometry::{adjust_destination, build_layout, clamp_magnitude, AdjustmentDirection, Position2, RangeKind};
use crate::observer::{ObserverModel, ObserverPopulation, Responder, TrialStimulus};
use crate::rng::{cursor, stream_rng, SimRng, StreamKind};
use crate::staircase::{NextStimulus, StaircaseConfig, StaircaseId, StaircasePair, ThresholdEstimate};

pub const DEFAULT_CATCH_PASS_FRACTION: f64 = 0.70;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockConfig {
    pub range: RangeKind,
    pub zone_radius: f64,
    pub training_trials: usize,
    pub catch_trials: usize,
    pub catch_pass_fraction: f64,
    /// Hard cap on trials per block, training included.
    pub max_trials: usize,
    pub staircase: StaircaseConfig,
}

impl BlockConfig {
    pub fn for_range(range: RangeKind) -> Self {
        BlockConfig {
            range,
            zone_radius: crate::geometry::DEFAULT_ZONE_RADIUS,
            training_trials: 10,
            catch_trials: 10,
            catch_pass_fraction: DEFAULT_CATCH_PASS_FRACTION,
            max_trials: 400,
            staircase: StaircaseConfig::for_range(range),
        }
    }

    pub fn validate(&self) -> Result<(), SessionError> {
        if !(self.catch_pass_fraction > 0.0 && self.catch_pass_fraction <= 1.0) {
            return Err(SessionError::Config("catch_pass_fraction must be in (0, 1]"));
        }
        if !(self.zone_radius > 0.0 && self.zone_radius < self.range.center_distance()) {
            return Err(SessionError::Config("zone_radius must be in (0, center_distance)"));
        }
        if self.staircase.stimulus_ceiling > self.range.max_adjustment() {
            return Err(SessionError::Config("stimulus_ceiling exceeds the range's maximum adjustment"));
        }
        self.staircase.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialKind {
    Training,
    Catch,
    StaircaseForward,
    StaircaseBackward,
}

impl TrialKind {
    pub fn direction(self) -> Option<AdjustmentDirection> {
        match self {
            TrialKind::StaircaseForward => Some(AdjustmentDirection::Forward),
            TrialKind::StaircaseBackward => Some(AdjustmentDirection::Backward),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TrialKind::Training => "training",
            TrialKind::Catch => "catch",
            TrialKind::StaircaseForward => "forward",
            TrialKind::StaircaseBackward => "backward",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub participant_id: u32,
    pub block_index: u8,
    pub range: RangeKind,
    pub trial_index: u32,
    pub kind: TrialKind,
    pub staircase_id: Option<StaircaseId>,
    pub zone_index: u8,
    pub origin: Position2,
    pub selected: Position2,
    pub adjusted: Position2,
    pub commanded_magnitude: f64,
    pub effective_magnitude: f64,
    pub response_detected: bool,
    pub reversal_logged: bool,
    /// Generator word position at the start of the trial.
    pub rng_cursor: u128,
}

/// Identifies where a block sits in the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BlockContext {
    pub participant_id: u32,
    pub block_index: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockResult {
    pub range: RangeKind,
    pub block_index: u8,
    pub forward: Option<ThresholdEstimate>,
    pub backward: Option<ThresholdEstimate>,
    pub catch_correct: usize,
    pub catch_total: usize,
    pub excluded: bool,
    /// The trial cap stopped the block before both pairs converged.
    pub capped: bool,
    pub forward_pair: StaircasePair,
    pub backward_pair: StaircasePair,
    pub trials: Vec<TrialRecord>,
}

impl BlockResult {
    pub fn threshold(&self, direction: AdjustmentDirection) -> Option<&ThresholdEstimate> {
        match direction {
            AdjustmentDirection::Forward => self.forward.as_ref(),
            AdjustmentDirection::Backward => self.backward.as_ref(),
        }
    }

    pub fn converged(&self) -> bool {
        self.forward.is_some() && self.backward.is_some()
    }

    pub fn pair(&self, direction: AdjustmentDirection) -> &StaircasePair {
        match direction {
            AdjustmentDirection::Forward => &self.forward_pair,
            AdjustmentDirection::Backward => &self.backward_pair,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatchScore {
    pub correct: usize,
    pub total: usize,
    pub excluded: bool,
}

/// Scores catch trials: a trial is correct when no adjustment was reported.
pub fn evaluate_catch(records: &[TrialRecord]) -> Result<CatchScore, SessionError> {
    evaluate_catch_with(records, DEFAULT_CATCH_PASS_FRACTION)
}

pub fn evaluate_catch_with(records: &[TrialRecord], pass_fraction: f64) -> Result<CatchScore, SessionError> {
    if records.is_empty() {
        return Err(SessionError::NoCatchTrials);
    }
    if let Some(pos) = records.iter().position(|r| r.kind != TrialKind::Catch) {
        return Err(SessionError::NotACatchTrial(pos));
    }
    let correct = records.iter().filter(|r| !r.response_detected).count();
    Ok(score(correct, records.len(), pass_fraction))
}

fn score(correct: usize, total: usize, pass_fraction: f64) -> CatchScore {
    let rate = correct as f64 / total as f64;
    // tolerance keeps e.g. 7/10 against 0.70 on the passing side
    CatchScore { correct, total, excluded: rate < pass_fraction - 1e-12 }
}

#[derive(Clone, Copy)]
enum Slot {
    Forward,
    Backward,
    Catch,
}

/// Runs one block to completion (or to the trial cap).
pub fn run_block<R: Responder + ?Sized>(
    config: &BlockConfig,
    responder: &mut R,
    rng: &mut SimRng,
    ctx: BlockContext,
) -> Result<BlockResult, SessionError> {
    config.validate()?;
    let layout = build_layout(config.range, config.zone_radius);
    let origin = Position2::ORIGIN;
    let mut forward = StaircasePair::new(config.staircase.clone())?;
    let mut backward = StaircasePair::new(config.staircase.clone())?;
    let mut trials: Vec<TrialRecord> = Vec::new();

    let base_record = |kind: TrialKind, rng: &mut SimRng, responder: &mut R, index: usize, rng_cursor: u128|
     -> Result<TrialRecord, SessionError> {
        let zone_index = rng.random_range(0..4u8);
        let selected =
            responder.select_destination(layout.zone_centers[zone_index as usize], layout.zone_radius, rng)?;
        Ok(TrialRecord {
            participant_id: ctx.participant_id,
            block_index: ctx.block_index,
            range: config.range,
            trial_index: index as u32,
            kind,
            staircase_id: None,
            zone_index,
            origin,
            selected,
            adjusted: selected,
            commanded_magnitude: 0.0,
            effective_magnitude: 0.0,
            response_detected: false,
            reversal_logged: false,
            rng_cursor,
        })
    };

    for _ in 0..config.training_trials {
        let c = cursor(rng);
        let mut rec = base_record(TrialKind::Training, rng, responder, trials.len(), c)?;
        rec.response_detected = responder.respond(TrialStimulus::Training, rng)?;
        trials.push(rec);
    }

    let mut catch_left = config.catch_trials;
    let mut capped = false;
    loop {
        let mut open = [Slot::Catch; 3];
        let mut n_open = 0;
        if !forward.both_converged() {
            open[n_open] = Slot::Forward;
            n_open += 1;
        }
        if !backward.both_converged() {
            open[n_open] = Slot::Backward;
            n_open += 1;
        }
        if catch_left > 0 {
            open[n_open] = Slot::Catch;
            n_open += 1;
        }
        if n_open == 0 {
            break;
        }
        if trials.len() >= config.max_trials {
            capped = true;
            break;
        }
        let c = cursor(rng);
        let slot = open[rng.random_range(0..n_open)];
        let (pair, direction, kind) = match slot {
            Slot::Catch => {
                let mut rec = base_record(TrialKind::Catch, rng, responder, trials.len(), c)?;
                rec.response_detected = responder.respond(TrialStimulus::Catch, rng)?;
                trials.push(rec);
                catch_left -= 1;
                continue;
            }
            Slot::Forward => (&mut forward, AdjustmentDirection::Forward, TrialKind::StaircaseForward),
            Slot::Backward => (&mut backward, AdjustmentDirection::Backward, TrialKind::StaircaseBackward),
        };
        let (id, commanded) = match pair.next_stimulus(rng) {
            NextStimulus::Present { id, magnitude } => (id, magnitude),
            NextStimulus::Converged => unreachable!("only unconverged pairs are offered"),
        };
        let mut rec = base_record(kind, rng, responder, trials.len(), c)?;
        let effective = clamp_magnitude(origin, rec.selected, direction, commanded, config.range);
        let adjusted = adjust_destination(origin, rec.selected, direction, effective)?;
        let condition = Condition::new(direction, config.range);
        let detected = responder.respond(
            TrialStimulus::Adjusted { condition, magnitude: adjusted.effective_magnitude },
            rng,
        )?;
        let outcome = pair.record_response(id, detected)?;
        rec.staircase_id = Some(id);
        rec.adjusted = adjusted.position;
        rec.commanded_magnitude = commanded;
        rec.effective_magnitude = adjusted.effective_magnitude;
        rec.response_detected = detected;
        rec.reversal_logged = outcome.reversal_logged;
        trials.push(rec);
    }

    let catch_records: Vec<TrialRecord> = trials.iter().filter(|t| t.kind == TrialKind::Catch).cloned().collect();
    let catch = if catch_records.is_empty() {
        CatchScore { correct: 0, total: 0, excluded: false }
    } else {
        evaluate_catch_with(&catch_records, config.catch_pass_fraction)?
    };

    Ok(BlockResult {
        range: config.range,
        block_index: ctx.block_index,
        forward: forward.estimate_threshold().ok(),
        backward: backward.estimate_threshold().ok(),
        catch_correct: catch.correct,
        catch_total: catch.total,
        excluded: catch.excluded,
        capped,
        forward_pair: forward,
        backward_pair: backward,
        trials,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub small: BlockConfig,
    pub large: BlockConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig { small: BlockConfig::for_range(RangeKind::Small), large: BlockConfig::for_range(RangeKind::Large) }
    }
}

impl ExperimentConfig {
    /// Even participants run the small block first, odd ones the large block.
    pub fn block_order(&self, participant_id: u32) -> [&BlockConfig; 2] {
        if participant_id.is_multiple_of(2) {
            [&self.small, &self.large]
        } else {
            [&self.large, &self.small]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticipantResult {
    pub participant_id: u32,
    pub observer: ObserverModel,
    pub small_first: bool,
    /// Blocks in the order they were run.
    pub blocks: Vec<BlockResult>,
    pub catch_correct: usize,
    pub catch_total: usize,
    /// Pooled catch accuracy fell below the pass fraction.
    pub excluded: bool,
}

impl ParticipantResult {
    pub fn threshold(&self, condition: Condition) -> Option<f64> {
        self.blocks
            .iter()
            .find(|b| b.range == condition.range)
            .and_then(|b| b.threshold(condition.direction))
            .map(|t| t.value)
    }

    pub fn converged(&self) -> bool {
        self.blocks.iter().all(BlockResult::converged)
    }

    pub fn dataset_row(&self) -> DatasetRow {
        let thresholds = ConditionMap(Condition::ALL.map(|c| self.threshold(c)));
        DatasetRow {
            participant_id: self.participant_id,
            included: !self.excluded && self.converged(),
            thresholds,
            sot_error: self.observer.sot_error,
            sbsod: self.observer.sbsod,
            vr_experience: self.observer.vr_experience,
        }
    }
}

/// Simulates one participant from its own seed streams.
pub fn run_participant<P: ObserverPopulation + ?Sized>(
    participant_id: u32,
    population: &P,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<ParticipantResult, SessionError> {
    let mut observer_rng = stream_rng(seed, participant_id, StreamKind::Observer);
    let mut observer = population.sample(participant_id, &mut observer_rng)?;
    let mut blocks = Vec::with_capacity(2);
    for (i, block) in config.block_order(participant_id).into_iter().enumerate() {
        let mut rng = stream_rng(seed, participant_id, StreamKind::Block(i as u8));
        let ctx = BlockContext { participant_id, block_index: i as u8 };
        blocks.push(run_block(block, &mut observer, &mut rng, ctx)?);
    }
    let catch_correct = blocks.iter().map(|b| b.catch_correct).sum();
    let catch_total = blocks.iter().map(|b| b.catch_total).sum();
    let excluded = catch_total > 0 && score(catch_correct, catch_total, config.small.catch_pass_fraction).excluded;
    Ok(ParticipantResult {
        participant_id,
        observer,
        small_first: participant_id.is_multiple_of(2),
        blocks,
        catch_correct,
        catch_total,
        excluded,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub seed: u64,
    pub participants: Vec<ParticipantResult>,
}

impl ExperimentResult {
    pub fn dataset(&self) -> ExperimentDataset {
        ExperimentDataset { rows: self.participants.iter().map(ParticipantResult::dataset_row).collect() }
    }

    pub fn trials(&self) -> impl Iterator<Item = &TrialRecord> {
        self.participants.iter().flat_map(|p| p.blocks.iter()).flat_map(|b| b.trials.iter())
    }
}

pub fn run_experiment<P: ObserverPopulation + ?Sized>(
    n_participants: u32,
    population: &P,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<ExperimentResult, SessionError> {
    if n_participants == 0 {
        return Err(SessionError::Config("n_participants must be at least 1"));
    }
    config.small.validate()?;
    config.large.validate()?;
    let participants =
        (0..n_participants).map(|pid| run_participant(pid, population, config, seed)).collect::<Result<_, _>>()?;
    Ok(ExperimentResult { seed, participants })
}
