//! CSV ingestion for heuristics and evaluation problems.
//!
//! Heuristics: `set_id,index,name,statement,isi`.
//! Problems: `id,description,classification,domain_heuristic,control_heuristic,severity,control_specificity`.
//!
//! Errors report the physical line of the offending record (the header is
//! line 1) and the column name.

use std::collections::HashSet;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::model::{
    Classification, ControlHeuristic, EvaluationDataset, Heuristic, HeuristicId, ProblemRecord,
    Severity, SpecificityScore,
};

pub const HEURISTIC_COLUMNS: [&str; 5] = ["set_id", "index", "name", "statement", "isi"];
pub const PROBLEM_COLUMNS: [&str; 7] = [
    "id",
    "description",
    "classification",
    "domain_heuristic",
    "control_heuristic",
    "severity",
    "control_specificity",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ImportError {
    #[error("line {line}, column {column}: {reason}")]
    MalformedRow {
        line: u64,
        column: String,
        reason: String,
    },
    #[error("line {line}: duplicate id {id}")]
    DuplicateId { line: u64, id: String },
    #[error("bad header: expected {expected}, found {found}")]
    BadHeader { expected: String, found: String },
    #[error("cannot read {0}")]
    Unreadable(String),
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(input)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str]) -> Result<(), ImportError> {
    let found: Vec<String> = rdr
        .headers()
        .map_err(|e| ImportError::Unreadable(e.to_string()))?
        .iter()
        .map(|h| h.trim_start_matches('\u{feff}').to_ascii_lowercase())
        .collect();
    if found != expected {
        return Err(ImportError::BadHeader {
            expected: expected.join(","),
            found: found.join(","),
        });
    }
    Ok(())
}

fn records<R: Read>(
    rdr: &mut csv::Reader<R>,
) -> impl Iterator<Item = Result<(u64, csv::StringRecord), ImportError>> + '_ {
    rdr.records().map(|r| match r {
        Ok(rec) => {
            let line = rec.position().map_or(0, |p| p.line());
            Ok((line, rec))
        }
        Err(e) => {
            let line = e.position().map_or(0, |p| p.line());
            Err(ImportError::MalformedRow {
                line,
                column: "*".into(),
                reason: e.to_string(),
            })
        }
    })
}

struct Row<'a> {
    line: u64,
    rec: &'a csv::StringRecord,
    columns: &'a [&'a str],
}

impl Row<'_> {
    fn cell(&self, column: &str) -> &str {
        let i = self.columns.iter().position(|c| *c == column).expect("known column");
        self.rec.get(i).unwrap_or("")
    }

    fn fail(&self, column: &str, reason: impl Into<String>) -> ImportError {
        ImportError::MalformedRow {
            line: self.line,
            column: column.to_string(),
            reason: reason.into(),
        }
    }

    fn required(&self, column: &str) -> Result<&str, ImportError> {
        let v = self.cell(column);
        if v.is_empty() {
            Err(self.fail(column, "value is required"))
        } else {
            Ok(v)
        }
    }

    fn number(&self, column: &str) -> Result<i64, ImportError> {
        self.required(column)?
            .parse()
            .map_err(|_| self.fail(column, format!("{:?} is not an integer", self.cell(column))))
    }

    fn score(&self, column: &str) -> Result<SpecificityScore, ImportError> {
        SpecificityScore::new(self.number(column)?).map_err(|e| self.fail(column, e.to_string()))
    }
}

pub fn read_heuristics<R: Read>(input: R) -> Result<Vec<Heuristic>, ImportError> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &HEURISTIC_COLUMNS)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for item in records(&mut rdr) {
        let (line, rec) = item?;
        let row = Row {
            line,
            rec: &rec,
            columns: &HEURISTIC_COLUMNS,
        };
        let set_id = row.required("set_id")?;
        let index = u32::try_from(row.number("index")?).map_err(|_| row.fail("index", "index must be positive"))?;
        let id = HeuristicId::new(set_id, index).map_err(|e| row.fail("set_id", e.to_string()))?;
        if !seen.insert(id.clone()) {
            return Err(ImportError::DuplicateId {
                line,
                id: id.to_string(),
            });
        }
        let name = row.required("name")?;
        let statement = row.required("statement")?;
        let isi = row.score("isi")?;
        out.push(Heuristic::found(id, name, statement, isi));
    }
    Ok(out)
}

/// Reads problems for one case study. Attributions are resolved against the
/// given heuristic lists; a cell naming more than one heuristic is rejected.
pub fn read_problems<R: Read>(
    input: R,
    case_study: &str,
    domain_heuristics: Vec<HeuristicId>,
    control_heuristics: Vec<ControlHeuristic>,
) -> Result<EvaluationDataset, ImportError> {
    let mut rdr = reader(input);
    check_header(&mut rdr, &PROBLEM_COLUMNS)?;
    let mut seen = HashSet::new();
    let mut problems = Vec::new();
    for item in records(&mut rdr) {
        let (line, rec) = item?;
        let row = Row {
            line,
            rec: &rec,
            columns: &PROBLEM_COLUMNS,
        };
        let id = row.required("id")?.to_string();
        if !seen.insert(id.clone()) {
            return Err(ImportError::DuplicateId { line, id });
        }
        let description = row.required("description")?.to_string();
        let classification: Classification = row
            .required("classification")?
            .parse()
            .map_err(|e: crate::model::ModelError| row.fail("classification", e.to_string()))?;

        let single = |column: &str| -> Result<Option<&str>, ImportError> {
            let v = row.cell(column);
            if v.is_empty() {
                return Ok(None);
            }
            if v.contains([';', ',', '|', '+']) || v.split_whitespace().count() > 1 {
                return Err(row.fail(column, "exactly one heuristic per side may be attributed"));
            }
            Ok(Some(v))
        };

        let domain_attribution = match (single("domain_heuristic")?, classification.on_domain_side()) {
            (Some(v), true) => {
                let h: HeuristicId = v.parse().map_err(|e: crate::model::ModelError| row.fail("domain_heuristic", e.to_string()))?;
                if !domain_heuristics.contains(&h) {
                    return Err(row.fail("domain_heuristic", format!("unknown domain heuristic {h}")));
                }
                Some(h)
            }
            (None, true) => {
                return Err(row.fail("domain_heuristic", format!("{} problem requires a domain heuristic", classification.code())))
            }
            (Some(_), false) => {
                return Err(row.fail("domain_heuristic", "control_only problem must not name a domain heuristic"))
            }
            (None, false) => None,
        };
        let control_attribution = match (single("control_heuristic")?, classification.on_control_side()) {
            (Some(v), true) => {
                if !control_heuristics.iter().any(|c| c.token == v) {
                    return Err(row.fail("control_heuristic", format!("unknown control heuristic {v}")));
                }
                Some(v.to_string())
            }
            (None, true) => {
                return Err(row.fail("control_heuristic", format!("{} problem requires a control heuristic", classification.code())))
            }
            (Some(_), false) => {
                return Err(row.fail("control_heuristic", "domain_only problem must not name a control heuristic"))
            }
            (None, false) => None,
        };
        let severity = Severity::new(row.number("severity")?).map_err(|e| row.fail("severity", e.to_string()))?;
        let control_specificity = if row.cell("control_specificity").is_empty() {
            None
        } else if !classification.on_control_side() {
            return Err(row.fail(
                "control_specificity",
                "control specificity is only recorded for common and control_only problems",
            ));
        } else {
            Some(row.score("control_specificity")?)
        };
        problems.push(ProblemRecord {
            id,
            description,
            classification,
            domain_attribution,
            control_attribution,
            severity,
            control_specificity,
        });
    }
    Ok(EvaluationDataset {
        case_study: case_study.to_string(),
        domain_heuristics,
        control_heuristics,
        problems,
    })
}

fn open(path: &Path) -> Result<File, ImportError> {
    File::open(path).map_err(|e| ImportError::Unreadable(format!("{}: {e}", path.display())))
}

pub fn import_heuristics(path: &Path) -> Result<Vec<Heuristic>, ImportError> {
    read_heuristics(open(path)?)
}

pub fn import_problems(
    path: &Path,
    case_study: &str,
    domain_heuristics: Vec<HeuristicId>,
    control_heuristics: Vec<ControlHeuristic>,
) -> Result<EvaluationDataset, ImportError> {
    read_problems(open(path)?, case_study, domain_heuristics, control_heuristics)
}
