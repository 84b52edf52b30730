//! File formats, configuration and commands around `adjtele-core`.

pub mod commands;
pub mod config;
pub mod dataset_csv;
pub mod error;
pub mod report;
pub mod trial_log;

pub use error::CliError;

/// Canonical fixed-point rendering used by every CSV output.
pub fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    // avoid "-0.000000" so equal values render identically
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Value as it survives a write/read cycle.
pub fn quantize6(v: f64) -> f64 {
    fmt6(v).parse().expect("formatted float parses")
}
