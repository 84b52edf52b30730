//! Plain-text rendering of an analysis report.

use std::fmt::Write;

use adjtele_core::analysis::{AnalysisReport, AnovaSection, CorrelationSection, EffectTest, Trait};
use adjtele_core::{AdjustmentDirection, Condition, RangeKind};

fn condition_label(c: Condition) -> &'static str {
    match (c.direction, c.range) {
        (AdjustmentDirection::Forward, RangeKind::Small) => "Forward (Small)",
        (AdjustmentDirection::Forward, RangeKind::Large) => "Forward (Large)",
        (AdjustmentDirection::Backward, RangeKind::Small) => "Backward (Small)",
        (AdjustmentDirection::Backward, RangeKind::Large) => "Backward (Large)",
    }
}

fn format_p(p: f64) -> String {
    if p < 0.001 {
        "p < 0.001".into()
    } else {
        format!("p = {p:.3}")
    }
}

fn effect_line(e: &EffectTest) -> String {
    let f = if e.f.is_infinite() { "inf".to_string() } else { format!("{:.2}", e.f) };
    let mut line = format!(
        "  {:<17} F({}, {}) = {}, {}, partial eta^2 = {:.3}",
        e.effect.as_str(),
        e.df_effect,
        e.df_error,
        f,
        format_p(e.p),
        e.partial_eta_sq
    );
    if e.degenerate {
        line.push_str("  [degenerate: zero error variance]");
    }
    line
}

pub fn render_text(report: &AnalysisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Participants: {} included of {}", report.n_included, report.n_rows);
    let _ = writeln!(s);
    let _ = writeln!(s, "Thresholds (m)");
    let _ = writeln!(
        s,
        "  {:<17}{:>4}{:>9}{:>9}{:>9}{:>9}{:>9}  outliers",
        "condition", "n", "mean", "sd", "q1", "median", "q3"
    );
    for d in &report.descriptives {
        let outliers = if d.outliers.is_empty() {
            "-".to_string()
        } else {
            d.outliers.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
        };
        let _ = writeln!(
            s,
            "  {:<17}{:>4}{:>9.3}{:>9.3}{:>9.3}{:>9.3}{:>9.3}  {}",
            condition_label(d.condition),
            d.n,
            d.mean,
            d.sd,
            d.q1,
            d.median,
            d.q3,
            outliers
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "Aligned rank transform repeated-measures ANOVA");
    match &report.anova {
        AnovaSection::Computed { result } => {
            for e in &result.effects {
                let _ = writeln!(s, "{}", effect_line(e));
            }
        }
        AnovaSection::Unavailable { reason } => {
            let _ = writeln!(s, "  unavailable: {reason}");
        }
    }
    let _ = writeln!(s);
    match &report.correlations {
        CorrelationSection::Computed { table } => {
            let _ = writeln!(
                s,
                "Correlation coefficients (n = {}), * marks BH-FDR adjusted p < {}",
                table.n, table.alpha
            );
            let _ = write!(s, "  {:<15}", "");
            for c in Condition::ALL {
                let _ = write!(s, "{:>18}", condition_label(c));
            }
            let _ = writeln!(s);
            for t in Trait::ALL {
                let _ = write!(s, "  {:<15}", t.label());
                for c in Condition::ALL {
                    let cell = table.cell(t, c);
                    let text = match cell.r {
                        Some(r) => format!("{r:.2}{}", if cell.significant { "*" } else { " " }),
                        None => "NA ".to_string(),
                    };
                    let _ = write!(s, "{text:>18}");
                }
                let _ = writeln!(s);
            }
        }
        CorrelationSection::InsufficientN { n, needed } => {
            let _ = writeln!(s, "Correlations not computed: {n} complete participants, at least {needed} required");
        }
    }
    s
}
