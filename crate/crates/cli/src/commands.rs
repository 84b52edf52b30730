//! The four subcommands as plain functions over paths and values.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use adjtele_core::analysis::{analyze, AnalysisReport, ExperimentDataset};
use adjtele_core::geometry::{proxemic_correction, Correction};
use adjtele_core::session::{run_experiment, ExperimentResult, ParticipantResult, TrialKind};
use adjtele_core::staircase::{StaircaseId, StaircasePair, ThresholdEstimate};
use adjtele_core::{AdjustmentDirection, ObserverModel, Position2, ProxemicZone, RangeKind};
use serde::Serialize;

use crate::config::{PopulationSpec, RunConfig, StaircaseSettings};
use crate::dataset_csv::{quantize_dataset, read_dataset, write_dataset};
use crate::report::render_text;
use crate::trial_log::{read_log, write_log, LogRow};
use crate::{fmt6, quantize6, CliError};

pub const TRIALS_FILE: &str = "trials.csv";
pub const DATASET_FILE: &str = "dataset.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const REPORT_FILE: &str = "report.txt";

#[derive(Debug, Serialize)]
struct BlockSummary<'a> {
    block_index: u8,
    range: RangeKind,
    trials: usize,
    capped: bool,
    catch_correct: usize,
    catch_total: usize,
    excluded: bool,
    forward: Option<&'a ThresholdEstimate>,
    backward: Option<&'a ThresholdEstimate>,
}

#[derive(Debug, Serialize)]
struct ParticipantSummary<'a> {
    participant_id: u32,
    small_first: bool,
    catch_correct: usize,
    catch_total: usize,
    excluded: bool,
    converged: bool,
    observer: &'a ObserverModel,
    blocks: Vec<BlockSummary<'a>>,
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    config: &'a RunConfig,
    n_participants: usize,
    n_included: usize,
    participants: Vec<ParticipantSummary<'a>>,
    report: &'a AnalysisReport,
}

fn participant_summary(p: &ParticipantResult) -> ParticipantSummary<'_> {
    ParticipantSummary {
        participant_id: p.participant_id,
        small_first: p.small_first,
        catch_correct: p.catch_correct,
        catch_total: p.catch_total,
        excluded: p.excluded,
        converged: p.converged(),
        observer: &p.observer,
        blocks: p
            .blocks
            .iter()
            .map(|b| BlockSummary {
                block_index: b.block_index,
                range: b.range,
                trials: b.trials.len(),
                capped: b.capped,
                catch_correct: b.catch_correct,
                catch_total: b.catch_total,
                excluded: b.excluded,
                forward: b.forward.as_ref(),
                backward: b.backward.as_ref(),
            })
            .collect(),
    }
}

/// Runs the configured experiment in memory.
pub fn run_config(config: &RunConfig) -> Result<ExperimentResult, CliError> {
    let exp = config.experiment();
    let n = config.n_participants;
    Ok(match &config.population {
        PopulationSpec::Sampled(p) => run_experiment(n, p, &exp, config.seed),
        PopulationSpec::Fixed(o) => run_experiment(n, o, &exp, config.seed),
        PopulationSpec::Roster(list) => run_experiment(n, list.as_slice(), &exp, config.seed),
    }?)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn csv_io(path: &Path, e: csv::Error) -> CliError {
    CliError::io(path, std::io::Error::other(e))
}

/// Files written by `simulate`.
#[derive(Debug, Clone)]
pub struct SimulateOutput {
    pub trials: PathBuf,
    pub dataset: PathBuf,
    pub summary: PathBuf,
    pub report: PathBuf,
    pub n_participants: usize,
    pub n_included: usize,
}

pub fn cmd_simulate(config_path: &Path, out: Option<&Path>) -> Result<SimulateOutput, CliError> {
    let config = RunConfig::load(config_path)?;
    let out_dir = match (out, &config.output_dir) {
        (Some(dir), _) => dir.to_path_buf(),
        (None, Some(dir)) => dir.clone(),
        (None, None) => {
            return Err(CliError::Argument("no output directory: pass --out or set output_dir".into()));
        }
    };
    fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;
    let result = run_config(&config)?;

    let trials = out_dir.join(TRIALS_FILE);
    let rows: Vec<LogRow> = result.trials().map(LogRow::from).collect();
    write_log(create(&trials)?, &rows).map_err(|e| csv_io(&trials, e))?;

    // analyse the dataset as it reads back so that `analyze` on the file agrees
    let data = quantize_dataset(&result.dataset());
    let dataset = out_dir.join(DATASET_FILE);
    write_dataset(create(&dataset)?, &data).map_err(|e| csv_io(&dataset, e))?;
    let report = analyze(&data)?;

    let summary = Summary {
        config: &config,
        n_participants: result.participants.len(),
        n_included: report.n_included,
        participants: result.participants.iter().map(participant_summary).collect(),
        report: &report,
    };
    let summary_path = out_dir.join(SUMMARY_FILE);
    let mut w = create(&summary_path)?;
    serde_json::to_writer_pretty(&mut w, &summary)?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| CliError::io(&summary_path, e))?;

    let report_path = out_dir.join(REPORT_FILE);
    fs::write(&report_path, render_text(&report)).map_err(|e| CliError::io(&report_path, e))?;

    Ok(SimulateOutput {
        trials,
        dataset,
        summary: summary_path,
        report: report_path,
        n_participants: result.participants.len(),
        n_included: report.n_included,
    })
}

pub fn load_dataset(path: &Path) -> Result<ExperimentDataset, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_dataset(BufReader::new(file), &path.display().to_string())
}

pub fn load_log(path: &Path) -> Result<Vec<LogRow>, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_log(BufReader::new(file), &path.display().to_string())
}

pub fn cmd_analyze(dataset_path: &Path, json: bool) -> Result<String, CliError> {
    let report = analyze(&load_dataset(dataset_path)?)?;
    if json {
        let mut s = serde_json::to_string_pretty(&report)?;
        s.push('\n');
        Ok(s)
    } else {
        Ok(render_text(&report))
    }
}

/// Which of the four staircases in a block to trace, e.g. `fwd:upper`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StaircaseSelector {
    pub direction: AdjustmentDirection,
    pub id: StaircaseId,
}

impl std::str::FromStr for StaircaseSelector {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Argument(format!("staircase `{s}`: expected <fwd|back>:<upper|lower>"));
        let (d, i) = s.split_once(':').ok_or_else(bad)?;
        let direction = match d {
            "fwd" | "forward" => AdjustmentDirection::Forward,
            "back" | "backward" => AdjustmentDirection::Backward,
            _ => return Err(bad()),
        };
        let id = match i {
            "upper" => StaircaseId::Upper,
            "lower" => StaircaseId::Lower,
            _ => return Err(bad()),
        };
        Ok(StaircaseSelector { direction, id })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    /// Stimulus per trial of the traced staircase, in presentation order.
    pub stimuli: Vec<f64>,
    pub estimate: Option<ThresholdEstimate>,
}

impl Trace {
    pub fn render(&self, selector: StaircaseSelector) -> String {
        let mut s = String::from("trial,stimulus\n");
        for (i, v) in self.stimuli.iter().enumerate() {
            s.push_str(&format!("{},{}\n", i + 1, fmt6(*v)));
        }
        match &self.estimate {
            Some(e) => s.push_str(&format!(
                "# estimate {} ({} pair, mean of {} reversals)\n",
                fmt6(e.value),
                selector.direction.as_str(),
                e.reversal_values_used.len()
            )),
            None => s.push_str("# not converged\n"),
        }
        s
    }
}

/// Replays a logged staircase pair and checks every presented stimulus
/// against the staircase rules before reporting the traced series.
pub fn trace_rows(
    rows: &[LogRow],
    participant: u32,
    block: u8,
    selector: StaircaseSelector,
    settings: &StaircaseSettings,
) -> Result<Trace, CliError> {
    let block_rows: Vec<&LogRow> =
        rows.iter().filter(|r| r.participant_id == participant && r.block_index == block).collect();
    let Some(first) = block_rows.first() else {
        return Err(CliError::Lookup(format!("no trials for participant {participant}, block {block}")));
    };
    let kind = match selector.direction {
        AdjustmentDirection::Forward => TrialKind::StaircaseForward,
        AdjustmentDirection::Backward => TrialKind::StaircaseBackward,
    };
    let mut pair = StaircasePair::new(settings.for_range(first.range))
        .map_err(|e| CliError::ConfigField { field: "staircase", message: e.to_string() })?;
    let mut stimuli = Vec::new();
    for r in block_rows.into_iter().filter(|r| r.kind == kind) {
        let id = r.staircase_id.ok_or_else(|| CliError::Lookup("staircase trial without staircase_id".into()))?;
        let expected = quantize6(pair.staircase(id).current_stimulus);
        if expected != r.commanded_magnitude {
            return Err(CliError::Lookup(format!(
                "trial {}: logged stimulus {} but the staircase was at {}; were other staircase settings used?",
                r.trial_index,
                fmt6(r.commanded_magnitude),
                fmt6(expected)
            )));
        }
        let outcome = pair
            .record_response(id, r.response_detected)
            .map_err(|e| CliError::Lookup(format!("trial {}: {e}", r.trial_index)))?;
        if outcome.reversal_logged != r.reversal_logged {
            return Err(CliError::Lookup(format!("trial {}: reversal flag disagrees with replay", r.trial_index)));
        }
        if id == selector.id {
            stimuli.push(r.commanded_magnitude);
        }
    }
    if stimuli.is_empty() {
        return Err(CliError::Lookup(format!(
            "no {}:{} trials for participant {participant}, block {block}",
            selector.direction.as_str(),
            selector.id.as_str()
        )));
    }
    Ok(Trace { stimuli, estimate: pair.estimate_threshold().ok() })
}

pub fn cmd_trace(
    log_path: &Path,
    participant: u32,
    block: u8,
    selector: StaircaseSelector,
    config: Option<&Path>,
) -> Result<String, CliError> {
    let settings = match config {
        Some(p) => RunConfig::load(p)?.staircase,
        None => StaircaseSettings::default(),
    };
    let rows = load_log(log_path)?;
    Ok(trace_rows(&rows, participant, block, selector, &settings)?.render(selector))
}

/// Backward budgets for the correction policy, chosen by teleport length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionProfile {
    pub small_threshold: f64,
    pub large_threshold: f64,
    /// Teleports up to this length use the small-range threshold.
    pub range_cutoff: f64,
}

impl Default for CorrectionProfile {
    fn default() -> Self {
        CorrectionProfile { small_threshold: 1.33, large_threshold: 1.64, range_cutoff: 5.0 }
    }
}

impl CorrectionProfile {
    pub fn threshold_for(&self, origin: Position2, selected: Position2) -> f64 {
        if origin.distance(selected) <= self.range_cutoff {
            self.small_threshold
        } else {
            self.large_threshold
        }
    }
}

pub fn parse_point(s: &str) -> Result<Position2, CliError> {
    let bad = || CliError::Argument(format!("`{s}` is not a point x,y"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    let x: f64 = x.trim().parse().map_err(|_| bad())?;
    let y: f64 = y.trim().parse().map_err(|_| bad())?;
    if !(x.is_finite() && y.is_finite()) {
        return Err(bad());
    }
    Ok(Position2::new(x, y))
}

pub fn parse_zone(s: &str) -> Result<ProxemicZone, CliError> {
    ProxemicZone::from_name(&s.to_ascii_lowercase())
        .ok_or_else(|| CliError::Argument(format!("zone `{s}`: expected intimate, personal or social")))
}

pub fn correct(
    origin: Position2,
    selected: Position2,
    partner: Position2,
    zone: ProxemicZone,
    profile: &CorrectionProfile,
) -> Result<(Correction, f64), CliError> {
    let threshold = profile.threshold_for(origin, selected);
    Ok((proxemic_correction(origin, selected, partner, threshold, zone)?, threshold))
}

pub fn render_correction(c: &Correction, threshold: f64) -> String {
    format!(
        "adjusted={},{}\nmagnitude={}\nattained={}\nthreshold={}\n",
        fmt6(c.position.x),
        fmt6(c.position.y),
        fmt6(c.magnitude),
        c.attained,
        fmt6(threshold)
    )
}
