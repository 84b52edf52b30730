//! Dataset CSV: one row per participant, `NA` for thresholds that did not converge.

use std::io::{Read, Write};

use adjtele_core::analysis::{DatasetRow, ExperimentDataset};
use adjtele_core::{Condition, ConditionMap};

use crate::trial_log::{parse_bool, parse_num};
use crate::{fmt6, quantize6, CliError};

pub const DATASET_HEADER: [&str; 9] = [
    "participant_id",
    "included",
    "forward_small",
    "forward_large",
    "backward_small",
    "backward_large",
    "sot_error",
    "sbsod",
    "vr_experience",
];

const MISSING: &str = "NA";

/// The dataset as it reads back from disk.
pub fn quantize_dataset(ds: &ExperimentDataset) -> ExperimentDataset {
    let rows = ds
        .rows
        .iter()
        .map(|r| DatasetRow {
            thresholds: r.thresholds.map(|t| t.map(quantize6)),
            sot_error: quantize6(r.sot_error),
            sbsod: quantize6(r.sbsod),
            ..r.clone()
        })
        .collect();
    ExperimentDataset { rows }
}

pub fn write_dataset<W: Write>(out: W, ds: &ExperimentDataset) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(DATASET_HEADER)?;
    for r in &ds.rows {
        let mut fields = vec![r.participant_id.to_string(), if r.included { "1" } else { "0" }.to_string()];
        fields.extend(Condition::ALL.iter().map(|&c| r.thresholds.get(c).map(fmt6).unwrap_or_else(|| MISSING.into())));
        fields.push(fmt6(r.sot_error));
        fields.push(fmt6(r.sbsod));
        fields.push(r.vr_experience.to_string());
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

fn parse_row(rec: &csv::StringRecord) -> Result<DatasetRow, String> {
    if rec.len() != DATASET_HEADER.len() {
        return Err(format!("expected {} fields, found {}", DATASET_HEADER.len(), rec.len()));
    }
    let mut thresholds = [None; 4];
    for (i, slot) in thresholds.iter_mut().enumerate() {
        let s = rec[2 + i].trim();
        if s != MISSING {
            let v: f64 = parse_num(s, DATASET_HEADER[2 + i])?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(format!("{}: threshold must be finite and non-negative", DATASET_HEADER[2 + i]));
            }
            *slot = Some(v);
        }
    }
    let vr_experience: u8 = parse_num(&rec[8], "vr_experience")?;
    if !(1..=5).contains(&vr_experience) {
        return Err(format!("vr_experience: {vr_experience} outside 1-5"));
    }
    Ok(DatasetRow {
        participant_id: parse_num(&rec[0], "participant_id")?,
        included: parse_bool(rec[1].trim()).map_err(|e| format!("included: {e}"))?,
        thresholds: ConditionMap(thresholds),
        sot_error: parse_num(&rec[6], "sot_error")?,
        sbsod: parse_num(&rec[7], "sbsod")?,
        vr_experience,
    })
}

/// Reads a dataset. Row numbers in errors count the header as row 1.
pub fn read_dataset<R: Read>(input: R, source: &str) -> Result<ExperimentDataset, CliError> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(input);
    let err = |row: usize, message: String| CliError::Parse { path: source.to_string(), row, message };
    let mut records = r.records();
    match records.next() {
        Some(Ok(h)) if h.iter().map(str::trim).eq(DATASET_HEADER.iter().copied()) => {}
        Some(Ok(_)) => return Err(err(1, format!("header must be `{}`", DATASET_HEADER.join(",")))),
        Some(Err(e)) => return Err(err(1, e.to_string())),
        None => return Err(err(1, "empty file".into())),
    }
    let mut rows = Vec::new();
    for (i, rec) in records.enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| err(row, e.to_string()))?;
        rows.push(parse_row(&rec).map_err(|m| err(row, m))?);
    }
    Ok(ExperimentDataset { rows })
}
