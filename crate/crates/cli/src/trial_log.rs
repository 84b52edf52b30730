//! Trial log CSV.

use std::io::{Read, Write};

use adjtele_core::session::{TrialKind, TrialRecord};
use adjtele_core::staircase::StaircaseId;
use adjtele_core::{AdjustmentDirection, Position2, RangeKind};

use crate::{fmt6, quantize6, CliError};

pub const LOG_HEADER: [&str; 18] = [
    "participant_id",
    "block_index",
    "block_range",
    "trial_index",
    "kind",
    "staircase_id",
    "direction",
    "zone_index",
    "origin_x",
    "origin_y",
    "selected_x",
    "selected_y",
    "adjusted_x",
    "adjusted_y",
    "commanded_magnitude",
    "effective_magnitude",
    "response_detected",
    "reversal_logged",
];

/// One trial as stored on disk: coordinates and magnitudes at 6 decimals.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
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
}

fn q(p: Position2) -> Position2 {
    Position2::new(quantize6(p.x), quantize6(p.y))
}

impl From<&TrialRecord> for LogRow {
    fn from(r: &TrialRecord) -> Self {
        LogRow {
            participant_id: r.participant_id,
            block_index: r.block_index,
            range: r.range,
            trial_index: r.trial_index,
            kind: r.kind,
            staircase_id: r.staircase_id,
            zone_index: r.zone_index,
            origin: q(r.origin),
            selected: q(r.selected),
            adjusted: q(r.adjusted),
            commanded_magnitude: quantize6(r.commanded_magnitude),
            effective_magnitude: quantize6(r.effective_magnitude),
            response_detected: r.response_detected,
            reversal_logged: r.reversal_logged,
        }
    }
}

impl LogRow {
    pub fn direction(&self) -> Option<AdjustmentDirection> {
        self.kind.direction()
    }

    fn fields(&self) -> [String; 18] {
        let b = |v: bool| if v { "1" } else { "0" }.to_string();
        [
            self.participant_id.to_string(),
            self.block_index.to_string(),
            self.range.as_str().to_string(),
            self.trial_index.to_string(),
            self.kind.as_str().to_string(),
            self.staircase_id.map(|s| s.as_str().to_string()).unwrap_or_default(),
            self.direction().map(|d| d.as_str().to_string()).unwrap_or_default(),
            self.zone_index.to_string(),
            fmt6(self.origin.x),
            fmt6(self.origin.y),
            fmt6(self.selected.x),
            fmt6(self.selected.y),
            fmt6(self.adjusted.x),
            fmt6(self.adjusted.y),
            fmt6(self.commanded_magnitude),
            fmt6(self.effective_magnitude),
            b(self.response_detected),
            b(self.reversal_logged),
        ]
    }
}

pub fn write_log<'a, W: Write>(out: W, rows: impl IntoIterator<Item = &'a LogRow>) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(LOG_HEADER)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(format!("expected 0 or 1, got `{other}`")),
    }
}

pub(crate) fn parse_num<T: std::str::FromStr>(s: &str, name: &str) -> Result<T, String> {
    s.trim().parse().map_err(|_| format!("{name}: cannot parse `{s}`"))
}

fn parse_range(s: &str) -> Result<RangeKind, String> {
    RangeKind::ALL.into_iter().find(|r| r.as_str() == s).ok_or_else(|| format!("block_range: unknown `{s}`"))
}

fn parse_kind(s: &str) -> Result<TrialKind, String> {
    [TrialKind::Training, TrialKind::Catch, TrialKind::StaircaseForward, TrialKind::StaircaseBackward]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| format!("kind: unknown `{s}`"))
}

fn parse_staircase(s: &str) -> Result<Option<StaircaseId>, String> {
    match s {
        "" => Ok(None),
        "upper" => Ok(Some(StaircaseId::Upper)),
        "lower" => Ok(Some(StaircaseId::Lower)),
        other => Err(format!("staircase_id: unknown `{other}`")),
    }
}

fn parse_row(rec: &csv::StringRecord) -> Result<LogRow, String> {
    if rec.len() != LOG_HEADER.len() {
        return Err(format!("expected {} fields, found {}", LOG_HEADER.len(), rec.len()));
    }
    let f = |i: usize| -> Result<f64, String> { parse_num(&rec[i], LOG_HEADER[i]) };
    let kind = parse_kind(&rec[4])?;
    let staircase_id = parse_staircase(&rec[5])?;
    let direction = kind.direction().map(|d| d.as_str()).unwrap_or("");
    if &rec[6] != direction {
        return Err(format!("direction `{}` does not match kind `{}`", &rec[6], &rec[4]));
    }
    if staircase_id.is_some() != kind.direction().is_some() {
        return Err("staircase_id must be set exactly on staircase trials".into());
    }
    Ok(LogRow {
        participant_id: parse_num(&rec[0], LOG_HEADER[0])?,
        block_index: parse_num(&rec[1], LOG_HEADER[1])?,
        range: parse_range(&rec[2])?,
        trial_index: parse_num(&rec[3], LOG_HEADER[3])?,
        kind,
        staircase_id,
        zone_index: parse_num(&rec[7], LOG_HEADER[7])?,
        origin: Position2::new(f(8)?, f(9)?),
        selected: Position2::new(f(10)?, f(11)?),
        adjusted: Position2::new(f(12)?, f(13)?),
        commanded_magnitude: f(14)?,
        effective_magnitude: f(15)?,
        response_detected: parse_bool(&rec[16]).map_err(|e| format!("response_detected: {e}"))?,
        reversal_logged: parse_bool(&rec[17]).map_err(|e| format!("reversal_logged: {e}"))?,
    })
}

/// Reads a trial log. Row numbers in errors count the header as row 1.
pub fn read_log<R: Read>(input: R, source: &str) -> Result<Vec<LogRow>, CliError> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(input);
    let err = |row: usize, message: String| CliError::Parse { path: source.to_string(), row, message };
    let mut records = r.records();
    match records.next() {
        Some(Ok(h)) if h.iter().eq(LOG_HEADER.iter().copied()) => {}
        Some(Ok(_)) => return Err(err(1, format!("header must be `{}`", LOG_HEADER.join(",")))),
        Some(Err(e)) => return Err(err(1, e.to_string())),
        None => return Err(err(1, "empty file".into())),
    }
    let mut rows = Vec::new();
    for (i, rec) in records.enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| err(row, e.to_string()))?;
        rows.push(parse_row(&rec).map_err(|m| err(row, m))?);
    }
    Ok(rows)
}
