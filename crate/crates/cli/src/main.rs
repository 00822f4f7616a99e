//! Command-line front end for the heurbench project workflow.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.

mod cli;

use std::fmt;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use heurbench::model::{default_control_heuristics, DimensionKind, HeuristicId, SpecificityScore, ValidationReport};
use heurbench::normalization::{check_normalized, is_resolved, ConflictKind, NormalizationAction};
use heurbench::specificity::GsiTable;
use heurbench::template::{parse_template, render_template, validate_template, HeuristicTemplate};
use heurbench::workbench::{
    export_chart_data, load_project, lock_project, read_heuristics, read_problems, save_project,
    EvaluationRecord, PersistError, ProjectState, Stage, StageArtifacts,
};
use heurbench::Rational;

use cli::*;

#[derive(Debug)]
enum Failure {
    Validation(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Io(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

fn invalid(message: impl fmt::Display) -> Failure {
    Failure::Validation(message.to_string())
}

impl From<PersistError> for Failure {
    fn from(e: PersistError) -> Self {
        match e {
            PersistError::IoFailure { .. } => Failure::Io(e.to_string()),
            other => invalid(other),
        }
    }
}

impl From<heurbench::workbench::WorkbenchError> for Failure {
    fn from(e: heurbench::workbench::WorkbenchError) -> Self {
        invalid(e)
    }
}

type Outcome = Result<String, Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn parse_id(text: &str) -> Result<HeuristicId, Failure> {
    text.parse().map_err(|e| invalid(format!("{text}: {e}")))
}

fn parse_score(value: i64) -> Result<SpecificityScore, Failure> {
    SpecificityScore::new(value).map_err(invalid)
}

fn kind_of(d: Dimension) -> DimensionKind {
    match d {
        Dimension::Uc => DimensionKind::UC,
        Dimension::Pd => DimensionKind::PD,
        Dimension::Ld => DimensionKind::LD,
        Dimension::Up => DimensionKind::UP,
    }
}

fn report_text(report: &ValidationReport) -> String {
    let mut out = String::new();
    for v in &report.violations {
        out.push_str(&format!("error: {v}\n"));
    }
    for w in &report.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}

/// Loads, applies `f` under the project lock, and saves the result.
fn mutate(path: &Path, f: impl FnOnce(&ProjectState) -> Result<(ProjectState, String), Failure>) -> Outcome {
    let _lock = lock_project(path)?;
    let state = load_project(path)?;
    let (next, message) = f(&state)?;
    save_project(&next, path)?;
    Ok(message)
}

/// Stored reports, or reports computed from the current datasets while
/// validation is still open.
fn current_reports(state: &ProjectState, case: Option<&str>) -> Result<(Vec<EvaluationRecord>, bool), Failure> {
    let (records, provisional) = if state.reports.is_empty() {
        (state.compute_reports(), true)
    } else {
        (state.reports.clone(), false)
    };
    let records: Vec<EvaluationRecord> = records
        .into_iter()
        .filter(|r| case.is_none_or(|c| r.case_study == c))
        .collect();
    if records.is_empty() {
        return Err(invalid(match case {
            Some(c) => format!("no evaluation for case study {c:?}"),
            None => "no evaluation data; import a dataset with `eval import`".to_string(),
        }));
    }
    Ok((records, provisional))
}

fn load_template(path: &Path) -> Result<HeuristicTemplate, Failure> {
    let text = read_text(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
    } else {
        parse_template(&text).map_err(invalid)
    }
}

fn run(cli: Cli) -> Outcome {
    let path = cli.project.as_path();
    match cli.command {
        Command::Init { domain, force } => {
            if domain.trim().is_empty() {
                return Err(invalid("domain name must be nonempty"));
            }
            let _lock = lock_project(path)?;
            if path.exists() && !force {
                return Err(invalid(format!("{} already exists; pass --force to replace it", path.display())));
            }
            let state = ProjectState::new(heurbench::model::DomainProfile::new(domain.trim()));
            save_project(&state, path)?;
            Ok(format!("created {} for domain {:?}", path.display(), domain.trim()))
        }
        Command::Keyword(KeywordCommand::Add { keyword }) => mutate(path, |s| {
            Ok((s.add_keyword(&keyword)?, format!("added keyword {keyword:?}")))
        }),
        Command::Dimension(DimensionCommand::Add {
            dimension,
            label,
            specificity,
        }) => mutate(path, |s| {
            let kind = kind_of(dimension);
            let next = s.add_dimension_item(kind, &label, parse_score(specificity)?)?;
            Ok((next, format!("added {kind} item {label:?}")))
        }),
        Command::Dimension(DimensionCommand::List) => {
            let state = load_project(path)?;
            let mut out = String::new();
            for kind in DimensionKind::ALL {
                out.push_str(&format!("{kind} ({})\n", kind.description()));
                for item in state.profile.items_of(kind) {
                    out.push_str(&format!("  {}\t{}\n", item.label, item.initial_specificity));
                }
            }
            Ok(out.trim_end().to_string())
        }
        Command::Heuristic(HeuristicCommand::Import { csv }) => mutate(path, |s| {
            let text = read_text(&csv)?;
            let found = read_heuristics(text.as_bytes()).map_err(|e| invalid(format!("{}: {e}", csv.display())))?;
            let n = found.len();
            Ok((s.import_heuristics(found)?, format!("imported {n} heuristics")))
        }),
        Command::Heuristic(HeuristicCommand::List) => {
            let state = load_project(path)?;
            let effective = state.effective_catalog();
            let mut out = String::from("id\tstatus\tISI\tname");
            for h in &effective.heuristics {
                out.push_str(&format!("\n{}\t{}\t{}\t{}", h.id, h.status, h.isi, h.name));
            }
            Ok(out)
        }
        Command::Isi(IsiCommand::Set { heuristic, score }) => mutate(path, |s| {
            let id = parse_id(&heuristic)?;
            let next = s.set_isi(&id, parse_score(score)?)?;
            Ok((next, format!("ISI of {id} set to {score}")))
        }),
        Command::Normalize(NormalizeCommand::Declare { kind, members, note }) => mutate(path, |s| {
            let kind = match kind {
                Kind::Duplication => ConflictKind::Duplication,
                Kind::Overlap => ConflictKind::Overlap,
            };
            let members = members.iter().map(|m| parse_id(m)).collect::<Result<Vec<_>, _>>()?;
            let (next, id) = s.declare_conflict(kind, members, &note)?;
            Ok((next, format!("declared {kind} conflict #{id}")))
        }),
        Command::Normalize(NormalizeCommand::Apply { action }) => mutate(path, |s| {
            let text = read_text(&action)?;
            let action: NormalizationAction =
                serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", action.display())))?;
            let next = s.apply_normalization(&action)?;
            Ok((next, format!("applied {} to conflict #{}", action.strategy.name(), action.resolves)))
        }),
        Command::Normalize(NormalizeCommand::Status) => {
            let state = load_project(path)?;
            let catalog = &state.catalog;
            let mut out = String::new();
            for c in &catalog.conflicts {
                let members: Vec<String> = c.members.iter().map(ToString::to_string).collect();
                let status = if is_resolved(catalog, c.id) { "resolved" } else { "open" };
                out.push_str(&format!("#{} {} [{}] {}: {}\n", c.id, c.kind, members.join(", "), status, c.note));
            }
            let status = check_normalized(catalog);
            out.push_str(&format!(
                "actions logged: {}\nnormalized: {}",
                catalog.actions.len(),
                if status.normalized { "yes" } else { "no" }
            ));
            Ok(out)
        }
        Command::Gsi(GsiCommand::Set {
            heuristic,
            dimension,
            scores,
        }) => mutate(path, |s| {
            let mut map = std::collections::BTreeMap::new();
            for pair in &scores {
                let (label, value) = pair
                    .rsplit_once('=')
                    .ok_or_else(|| invalid(format!("{pair:?}: expected label=score")))?;
                let value: i64 = value.trim().parse().map_err(|_| invalid(format!("{pair:?}: score is not an integer")))?;
                map.insert(label.trim().to_string(), parse_score(value)?);
            }
            let table = GsiTable {
                heuristic: parse_id(&heuristic)?,
                kind: kind_of(dimension),
                scores: map,
            };
            let gsi = heurbench::specificity::compute_gsi(&table, &s.profile).map_err(invalid)?;
            let message = format!("GSI_{} of {} = {}", table.kind, table.heuristic, gsi.to_decimal_string(4));
            Ok((s.set_gsi(table)?, message))
        }),
        Command::Matrix(MatrixCommand::Build { threshold }) => mutate(path, |s| {
            let threshold = threshold
                .map(|t| t.parse::<Rational>().map_err(|e| invalid(format!("threshold {t:?}: {e}"))))
                .transpose()?;
            let next = s.build_matrix(threshold)?;
            let matrix = next.matrix.as_ref().expect("matrix just built");
            let selected: Vec<String> = next.selected().iter().map(ToString::to_string).collect();
            let message = format!("{}selected: {}", matrix.render(), if selected.is_empty() { "none".into() } else { selected.join(", ") });
            Ok((next, message))
        }),
        Command::Matrix(MatrixCommand::Show) => {
            let state = load_project(path)?;
            let matrix = state.matrix.as_ref().ok_or_else(|| invalid("no matrix; run `matrix build`"))?;
            let mut out = matrix.render();
            if let Some(t) = state.threshold {
                out.push_str(&format!("threshold: {}\n", t.to_decimal_string(4)));
            }
            Ok(out.trim_end().to_string())
        }
        Command::Template(TemplateCommand::Set { file }) => mutate(path, |s| {
            let template = load_template(&file)?;
            let warnings = report_text(&validate_template(&template, &s.catalog));
            let id = template.heuristic.clone();
            Ok((s.set_template(template)?, format!("{warnings}stored template for {id}")))
        }),
        Command::Template(TemplateCommand::Validate { file }) => {
            let state = load_project(path)?;
            let template = load_template(&file)?;
            let report = validate_template(&template, &state.catalog);
            let text = report_text(&report);
            if report.is_empty() {
                Ok(format!("{text}template for {} is valid", template.heuristic))
            } else {
                Err(invalid(text.trim_end()))
            }
        }
        Command::Template(TemplateCommand::Render { heuristic }) => {
            let state = load_project(path)?;
            let id = parse_id(&heuristic)?;
            let template = state
                .templates
                .iter()
                .find(|t| t.heuristic == id)
                .ok_or_else(|| invalid(format!("no template for {id}")))?;
            Ok(render_template(template, &state.catalog).map_err(invalid)?.trim_end().to_string())
        }
        Command::Eval(EvalCommand::Import(EvalImport { csv, case })) => mutate(path, |s| {
            let text = read_text(&csv)?;
            let dataset = read_problems(text.as_bytes(), &case, s.selected(), default_control_heuristics())
                .map_err(|e| invalid(format!("{}: {e}", csv.display())))?;
            let counts = heurbench::model::partition_problems(&dataset).counts();
            let warnings = report_text(&dataset.validate());
            let next = s.add_dataset(dataset)?;
            Ok((
                next,
                format!(
                    "{warnings}imported {} problems for {case:?}: |P_D|={} |P_C|={} |P*|={}",
                    counts.total, counts.domain_only, counts.control_only, counts.common
                ),
            ))
        }),
        Command::Stage(StageCommand::Advance { stage, exit_early }) => mutate(path, |s| {
            let stage = Stage::new(stage)?;
            let next = s.advance_stage(stage, StageArtifacts { exit_early })?;
            let mut message = format!("stage {stage} ({}) complete", stage.title());
            if exit_early {
                message.push_str("; project ended with an existing validated set");
            }
            if stage == Stage::VALIDATION {
                for r in &next.reports {
                    message.push_str(&format!("\n\n{}", r.advice.render().trim_end()));
                }
            }
            Ok((next, message))
        }),
        Command::Indicators { case, json } => {
            let state = load_project(path)?;
            let (records, provisional) = current_reports(&state, case.as_deref())?;
            if json {
                let reports: Vec<_> = records.iter().map(|r| &r.report).collect();
                return Ok(serde_json::to_string_pretty(&reports).expect("reports serialize"));
            }
            let mut out = String::new();
            if provisional {
                out.push_str("(provisional: stage 7 is not complete)\n");
            }
            let texts: Vec<String> = records.iter().map(|r| r.report.render()).collect();
            out.push_str(&texts.join("\n"));
            Ok(out.trim_end().to_string())
        }
        Command::Advise { case, json } => {
            let state = load_project(path)?;
            let (records, provisional) = current_reports(&state, case.as_deref())?;
            if json {
                let advice: Vec<_> = records.iter().map(|r| &r.advice).collect();
                return Ok(serde_json::to_string_pretty(&advice).expect("advice serializes"));
            }
            let mut out = String::new();
            if provisional {
                out.push_str("(provisional: stage 7 is not complete)\n");
            }
            let texts: Vec<String> = records.iter().map(|r| r.advice.render()).collect();
            out.push_str(&texts.join("\n"));
            Ok(out.trim_end().to_string())
        }
        Command::Loopback {
            stage,
            reason,
            override_advice,
        } => mutate(path, |s| {
            let next = s.loop_back(stage, &reason, override_advice)?;
            let message = format!("iteration {} started at stage {stage}", next.iteration);
            Ok((next, message))
        }),
        Command::Export(ExportCommand::Chart { output }) => {
            let state = load_project(path)?;
            let (records, _) = current_reports(&state, None).map_err(|_| invalid("no indicator reports to export"))?;
            let reports: Vec<_> = records.iter().map(|r| &r.report).collect();
            let text = export_chart_data(&reports).map_err(invalid)?;
            match output {
                Some(file) => {
                    fs::write(&file, &text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", file.display())))?;
                    Ok(format!("wrote {} rows to {}", reports.len() * 6, file.display()))
                }
                None => Ok(text.trim_end().to_string()),
            }
        }
        Command::Status => {
            let state = load_project(path)?;
            Ok(state.render_status().trim_end().to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            if !text.is_empty() {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
