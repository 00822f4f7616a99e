//! Chart-ready CSV of indicator values.
//!
//! The first line is `# reference_value=1`, the line every chart draws for
//! comparison. One row follows per case study and indicator.

use crate::indicators::{Indicator, IndicatorReport};

pub const REFERENCE_LINE: &str = "# reference_value=1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExportError {
    #[error("no indicator reports to export")]
    NothingToExport,
}

/// Rows are ordered by case study name, then by indicator in the order
/// phi, phi_star, delta, lambda, lambda_star, epsilon. Unavailable values
/// have an empty `value` cell and `available=false`.
pub fn export_chart_data(reports: &[&IndicatorReport]) -> Result<String, ExportError> {
    if reports.is_empty() {
        return Err(ExportError::NothingToExport);
    }
    let mut sorted: Vec<&IndicatorReport> = reports.to_vec();
    sorted.sort_by(|a, b| a.case_study.cmp(&b.case_study));

    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    wtr.write_record(["case", "indicator", "value", "available"])
        .expect("writing to memory");
    for report in sorted {
        for indicator in Indicator::ALL {
            let (value, available) = match report.outcome(indicator).value() {
                Some(v) => (v.to_decimal_string(4), "true"),
                None => (String::new(), "false"),
            };
            wtr.write_record([report.case_study.as_str(), indicator.code(), &value, available])
                .expect("writing to memory");
        }
    }
    let body = String::from_utf8(wtr.into_inner().expect("flushing to memory")).expect("csv output is utf-8");
    Ok(format!("{REFERENCE_LINE}\n{body}"))
}
