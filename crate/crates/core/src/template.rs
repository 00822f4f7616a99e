//! The standard description template for a selected heuristic.
//!
//! Rendered documents list the nine fields in a fixed order, each introduced
//! by a header line `<Field>:` and separated by one blank line. The same
//! layout is accepted back by [`parse_template`].

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::model::{HeuristicCatalog, HeuristicId, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleKind {
    Compliance,
    NonCompliance,
}

impl ExampleKind {
    fn label(self) -> &'static str {
        match self {
            ExampleKind::Compliance => "Compliance",
            ExampleKind::NonCompliance => "Non-compliance",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateExample {
    pub kind: ExampleKind,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicTemplate {
    pub heuristic: HeuristicId,
    pub name: String,
    pub description: String,
    pub examples: Vec<TemplateExample>,
    pub benefits: String,
    pub problems: String,
    pub application_context: String,
    #[serde(default)]
    pub related_heuristics: Vec<HeuristicId>,
    pub checklist: Vec<String>,
}

/// Section headers in document order.
pub const SECTION_HEADERS: [&str; 9] = [
    "Identifier",
    "Name",
    "Description",
    "Examples",
    "Benefits",
    "Problems",
    "Application context",
    "Related heuristics",
    "Checklist",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TemplateError {
    #[error("invalid template:\n{0}")]
    InvalidTemplate(ValidationReport),
    #[error("cannot parse template document at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub fn validate_template(t: &HeuristicTemplate, catalog: &HeuristicCatalog) -> ValidationReport {
    let mut report = ValidationReport::default();
    match catalog.get(&t.heuristic) {
        None => report.push("identifier", format!("heuristic {} is not in the catalog", t.heuristic)),
        Some(h) if !h.is_live() => report.push(
            "identifier",
            format!("heuristic {} is discarded and cannot be described", t.heuristic),
        ),
        Some(_) => {}
    }
    for (field, value) in [
        ("name", &t.name),
        ("description", &t.description),
        ("benefits", &t.benefits),
        ("problems", &t.problems),
        ("application_context", &t.application_context),
    ] {
        if value.trim().is_empty() {
            report.push(field, format!("{field} must be nonempty"));
        }
    }
    if t.examples.is_empty() {
        report.push("examples", "examples requires ≥1 entry");
    }
    for (i, example) in t.examples.iter().enumerate() {
        if example.text.trim().is_empty() {
            report.push(format!("examples[{i}]"), "example text must be nonempty");
        }
    }
    if !t.examples.is_empty() {
        for kind in [ExampleKind::Compliance, ExampleKind::NonCompliance] {
            if !t.examples.iter().any(|e| e.kind == kind) {
                report.warn("examples", format!("no {} example", kind.label().to_lowercase()));
            }
        }
    }
    for id in &t.related_heuristics {
        if !catalog.contains(id) {
            report.push("related_heuristics", format!("unresolved related heuristic {id}"));
        }
    }
    if t.checklist.is_empty() {
        report.push("checklist", "checklist requires ≥1 step");
    }
    for (i, step) in t.checklist.iter().enumerate() {
        if step.trim().is_empty() {
            report.push(format!("checklist[{}]", i + 1), "checklist step must be nonempty");
        }
    }
    report
}

pub fn render_template(t: &HeuristicTemplate, catalog: &HeuristicCatalog) -> Result<String, TemplateError> {
    let report = validate_template(t, catalog);
    if !report.is_empty() {
        return Err(TemplateError::InvalidTemplate(report));
    }
    Ok(render_unchecked(t))
}

fn render_unchecked(t: &HeuristicTemplate) -> String {
    let related = if t.related_heuristics.is_empty() {
        "None".to_string()
    } else {
        t.related_heuristics
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    };
    let examples = t
        .examples
        .iter()
        .map(|e| format!("- {}: {}", e.kind.label(), e.text))
        .collect::<Vec<_>>()
        .join("\n");
    let checklist = t
        .checklist
        .iter()
        .enumerate()
        .map(|(i, step)| format!("{}. {}", i + 1, step))
        .collect::<Vec<_>>()
        .join("\n");
    let bodies = [
        t.heuristic.to_string(),
        t.name.clone(),
        t.description.clone(),
        examples,
        t.benefits.clone(),
        t.problems.clone(),
        t.application_context.clone(),
        related,
        checklist,
    ];
    let mut out = String::new();
    for (i, (header, body)) in SECTION_HEADERS.iter().zip(bodies).enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "{header}:");
        let _ = writeln!(out, "{body}");
    }
    out
}

/// Reads a rendered document back into a template.
pub fn parse_template(text: &str) -> Result<HeuristicTemplate, TemplateError> {
    let text = text.replace("\r\n", "\n");
    let lines: Vec<&str> = text.lines().collect();
    let mut bodies: Vec<String> = Vec::with_capacity(SECTION_HEADERS.len());
    let mut cursor = 0;
    for (i, header) in SECTION_HEADERS.iter().enumerate() {
        let expected = format!("{header}:");
        if lines.get(cursor) != Some(&expected.as_str()) {
            return Err(TemplateError::Parse {
                line: cursor + 1,
                reason: format!("expected header {expected:?}"),
            });
        }
        cursor += 1;
        let start = cursor;
        let end = match SECTION_HEADERS.get(i + 1) {
            Some(next) => {
                let next = format!("{next}:");
                (start..lines.len())
                    .find(|&j| lines[j] == next && j > start && lines[j - 1].is_empty())
                    .map(|j| j - 1)
                    .ok_or_else(|| TemplateError::Parse {
                        line: start + 1,
                        reason: format!("missing section {next:?}"),
                    })?
            }
            None => lines.len(),
        };
        bodies.push(lines[start..end].join("\n").trim_end_matches('\n').to_string());
        cursor = end + 1;
    }

    let parse_err = |section: usize, reason: String| TemplateError::Parse { line: 0, reason: format!("{}: {reason}", SECTION_HEADERS[section]) };
    let heuristic = bodies[0]
        .trim()
        .parse()
        .map_err(|e| parse_err(0, format!("{e}")))?;
    let examples = bodies[3]
        .lines()
        .map(|line| {
            let item = line.strip_prefix("- ").ok_or_else(|| parse_err(3, format!("bad entry {line:?}")))?;
            for kind in [ExampleKind::Compliance, ExampleKind::NonCompliance] {
                if let Some(rest) = item.strip_prefix(kind.label()).and_then(|r| r.strip_prefix(": ")) {
                    return Ok(TemplateExample { kind, text: rest.to_string() });
                }
            }
            Err(parse_err(3, format!("unknown example kind in {line:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let related_heuristics = match bodies[7].trim() {
        "None" | "" => Vec::new(),
        list => list
            .split(',')
            .map(|s| s.trim().parse().map_err(|e| parse_err(7, format!("{e}"))))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let checklist = bodies[8]
        .lines()
        .enumerate()
        .map(|(i, line)| {
            line.strip_prefix(&format!("{}. ", i + 1))
                .map(str::to_string)
                .ok_or_else(|| parse_err(8, format!("step {} is not numbered {}", i + 1, i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HeuristicTemplate {
        heuristic,
        name: bodies[1].clone(),
        description: bodies[2].clone(),
        examples,
        benefits: bodies[4].clone(),
        problems: bodies[5].clone(),
        application_context: bodies[6].clone(),
        related_heuristics,
        checklist,
    })
}
