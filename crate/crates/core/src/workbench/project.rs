//! Project lifecycle: the eight stages, their artifacts, and the refinement
//! loop-back.
//!
//! Every operation takes the current state by reference and returns a new
//! state, leaving the input untouched on error.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::advisor::{advise, RefinementAdvice};
use crate::indicators::{build_report, IndicatorReport};
use crate::model::{
    validate_catalog, DimensionKind, DomainProfile, EvaluationDataset, Heuristic, HeuristicCatalog,
    HeuristicId, HeuristicStatus, SpecificityScore, ValidationReport,
};
use crate::normalization::{
    self, apply_action, check_normalized, declare_conflict, ConflictId, ConflictKind,
    NormalizationAction, NormalizationError,
};
use crate::specificity::{
    build_matrix, compute_gsi, select_heuristics, GsiTable, SpecificityError, SpecificityMatrix,
};
use crate::template::{validate_template, HeuristicTemplate};
use crate::Rational;

/// A stage number, 1 through 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Stage(u8);

impl Stage {
    pub const DIMENSIONS: Stage = Stage(1);
    pub const SEARCH: Stage = Stage(2);
    pub const SPECIFICITY: Stage = Stage(3);
    pub const NORMALIZATION: Stage = Stage(4);
    pub const PRIORITIZATION: Stage = Stage(5);
    pub const DESCRIPTION: Stage = Stage(6);
    pub const VALIDATION: Stage = Stage(7);
    pub const REFINEMENT: Stage = Stage(8);

    pub fn new(n: u8) -> Result<Stage, WorkbenchError> {
        if (1..=8).contains(&n) {
            Ok(Stage(n))
        } else {
            Err(WorkbenchError::UnknownStage(n))
        }
    }

    pub fn all() -> impl Iterator<Item = Stage> {
        (1..=8).map(Stage)
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn title(self) -> &'static str {
        match self.0 {
            1 => "domain and characteristic dimensions",
            2 => "search for usability heuristics",
            3 => "heuristic specificity",
            4 => "heuristic normalization",
            5 => "prioritization of heuristics",
            6 => "detailed description of heuristics",
            7 => "validation",
            _ => "refinement",
        }
    }

    fn predecessors(self) -> impl Iterator<Item = Stage> {
        (1..self.0).map(Stage)
    }
}

impl TryFrom<u8> for Stage {
    type Error = WorkbenchError;
    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Stage::new(value)
    }
}

impl From<Stage> for u8 {
    fn from(stage: Stage) -> u8 {
        stage.0
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    NotStarted,
    InProgress,
    Complete,
}

impl fmt::Display for StageStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StageStatus::NotStarted => "not started",
            StageStatus::InProgress => "in progress",
            StageStatus::Complete => "complete",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectOutcome {
    Ongoing,
    /// An already validated heuristic set was found during the search.
    ExitedAtStage2,
    Validated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub case_study: String,
    pub report: IndicatorReport,
    pub advice: RefinementAdvice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopBack {
    pub target: Stage,
    pub reason: String,
    /// Whether the target was outside the stages the advice suggested.
    pub overridden: bool,
}

/// A closed iteration, kept for provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: u32,
    pub stage_status: BTreeMap<Stage, StageStatus>,
    pub datasets: Vec<EvaluationDataset>,
    pub reports: Vec<EvaluationRecord>,
    pub loop_back: LoopBack,
}

/// Extra inputs some stages take when they are completed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StageArtifacts {
    /// Stage 2 only: the search found a validated set that suits the domain.
    pub exit_early: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WorkbenchError {
    #[error("stage {0} does not exist (stages are 1-8)")]
    UnknownStage(u8),
    #[error("stage {stage} cannot proceed: {what}")]
    PrerequisiteMissing { stage: Stage, what: String },
    #[error("stage {0} is already complete; loop back to reopen it")]
    StageClosed(Stage),
    #[error("the project has ended ({0:?})")]
    ProjectClosed(ProjectOutcome),
    #[error("no validation report with advice exists yet")]
    NoAdviceYet,
    #[error("cannot loop back to stage {target}: {why}")]
    InvalidTarget { target: u8, why: String },
    #[error("unknown heuristic {0}")]
    UnknownHeuristic(HeuristicId),
    #[error("heuristic {0} already exists")]
    DuplicateHeuristic(HeuristicId),
    #[error("a dataset for case study {0:?} already exists")]
    DuplicateCase(String),
    #[error("validation failed:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Normalization(#[from] NormalizationError),
    #[error(transparent)]
    Specificity(#[from] SpecificityError),
}

/// Everything a project has produced so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectState {
    pub profile: DomainProfile,
    pub stage_status: BTreeMap<Stage, StageStatus>,
    pub iteration: u32,
    pub catalog: HeuristicCatalog,
    /// Catalog as it stood when Stage 3 completed; the normalization log
    /// replays on top of it.
    pub snapshot: Option<HeuristicCatalog>,
    /// Whether Stage 4 certified the catalog since the snapshot was taken.
    #[serde(default)]
    pub normalization_certified: bool,
    /// ISI values reconsidered during normalization; they override the
    /// catalog value when the matrix is built.
    #[serde(default)]
    pub isi_revisions: BTreeMap<HeuristicId, SpecificityScore>,
    pub gsi_tables: Vec<GsiTable>,
    pub threshold: Option<Rational>,
    pub matrix: Option<SpecificityMatrix>,
    pub templates: Vec<HeuristicTemplate>,
    pub datasets: Vec<EvaluationDataset>,
    pub reports: Vec<EvaluationRecord>,
    #[serde(default)]
    pub history: Vec<IterationRecord>,
    pub outcome: ProjectOutcome,
}

impl ProjectState {
    pub fn new(profile: DomainProfile) -> ProjectState {
        ProjectState {
            profile,
            stage_status: Stage::all().map(|s| (s, StageStatus::NotStarted)).collect(),
            iteration: 1,
            catalog: HeuristicCatalog::default(),
            snapshot: None,
            normalization_certified: false,
            isi_revisions: BTreeMap::new(),
            gsi_tables: Vec::new(),
            threshold: None,
            matrix: None,
            templates: Vec::new(),
            datasets: Vec::new(),
            reports: Vec::new(),
            history: Vec::new(),
            outcome: ProjectOutcome::Ongoing,
        }
    }

    pub fn status(&self, stage: Stage) -> StageStatus {
        self.stage_status
            .get(&stage)
            .copied()
            .unwrap_or(StageStatus::NotStarted)
    }

    pub fn is_complete(&self, stage: Stage) -> bool {
        self.status(stage) == StageStatus::Complete
    }

    /// The first stage that is not complete, if any.
    pub fn current_stage(&self) -> Option<Stage> {
        Stage::all().find(|s| !self.is_complete(*s))
    }

    pub fn selected(&self) -> Vec<HeuristicId> {
        let selected: BTreeSet<&HeuristicId> = self
            .catalog
            .with_status(HeuristicStatus::Selected)
            .map(|h| &h.id)
            .collect();
        match &self.matrix {
            Some(m) => m
                .rows
                .iter()
                .filter(|r| selected.contains(&r.heuristic))
                .map(|r| r.heuristic.clone())
                .collect(),
            None => selected.into_iter().cloned().collect(),
        }
    }

    /// The catalog with revised ISI values applied.
    pub fn effective_catalog(&self) -> HeuristicCatalog {
        let mut catalog = self.catalog.clone();
        for h in &mut catalog.heuristics {
            if let Some(isi) = self.isi_revisions.get(&h.id) {
                h.isi = *isi;
            }
        }
        catalog
    }

    fn ensure_ongoing(&self) -> Result<(), WorkbenchError> {
        match self.outcome {
            ProjectOutcome::Ongoing => Ok(()),
            other => Err(WorkbenchError::ProjectClosed(other)),
        }
    }

    fn ensure_predecessors(&self, stage: Stage) -> Result<(), WorkbenchError> {
        if let Some(missing) = stage.predecessors().find(|s| !self.is_complete(*s)) {
            return Err(WorkbenchError::PrerequisiteMissing {
                stage,
                what: format!("stage {missing} ({}) is not complete", missing.title()),
            });
        }
        Ok(())
    }

    /// Opens `stage` for work, returning the state to mutate.
    fn begin(&self, stage: Stage) -> Result<ProjectState, WorkbenchError> {
        self.ensure_ongoing()?;
        self.ensure_predecessors(stage)?;
        if self.is_complete(stage) {
            return Err(WorkbenchError::StageClosed(stage));
        }
        let mut next = self.clone();
        next.stage_status.insert(stage, StageStatus::InProgress);
        Ok(next)
    }

    pub fn add_keyword(&self, keyword: &str) -> Result<ProjectState, WorkbenchError> {
        let mut next = self.begin(Stage::DIMENSIONS)?;
        if keyword.trim().is_empty() {
            let mut report = ValidationReport::default();
            report.push("keyword", "keyword must be nonempty");
            return Err(WorkbenchError::Invalid(report));
        }
        if !next.profile.keywords.iter().any(|k| k.eq_ignore_ascii_case(keyword)) {
            next.profile.keywords.push(keyword.trim().to_string());
        }
        Ok(next)
    }

    pub fn add_dimension_item(
        &self,
        kind: DimensionKind,
        label: &str,
        initial_specificity: SpecificityScore,
    ) -> Result<ProjectState, WorkbenchError> {
        let mut next = self.begin(Stage::DIMENSIONS)?;
        next.profile = next
            .profile
            .with_item(kind, label.trim(), initial_specificity)
            .map_err(|v| WorkbenchError::Invalid(ValidationReport { violations: vec![v], warnings: vec![] }))?;
        Ok(next)
    }

    pub fn import_heuristics(&self, heuristics: Vec<Heuristic>) -> Result<ProjectState, WorkbenchError> {
        let mut next = self.begin(Stage::SEARCH)?;
        let incoming: Vec<Heuristic> = heuristics
            .into_iter()
            .map(|h| Heuristic {
                status: HeuristicStatus::Denormalized,
                ..h
            })
            .collect();
        next.catalog
            .extend(incoming)
            .map_err(WorkbenchError::DuplicateHeuristic)?;
        let report = validate_catalog(&next.catalog);
        if !report.is_empty() {
            return Err(WorkbenchError::Invalid(report));
        }
        Ok(next)
    }

    /// Assigns an ISI. Before Stage 3 completes this edits the catalog;
    /// during normalization it is recorded as a revision.
    pub fn set_isi(&self, id: &HeuristicId, isi: SpecificityScore) -> Result<ProjectState, WorkbenchError> {
        let stage = if self.is_complete(Stage::SPECIFICITY) {
            Stage::NORMALIZATION
        } else {
            Stage::SPECIFICITY
        };
        let mut next = self.begin(stage)?;
        let h = next
            .catalog
            .get_mut(id)
            .ok_or_else(|| WorkbenchError::UnknownHeuristic(id.clone()))?;
        if !h.is_live() {
            return Err(NormalizationError::AlreadyDiscarded(id.clone()).into());
        }
        if stage == Stage::SPECIFICITY {
            h.isi = isi;
        } else {
            next.isi_revisions.insert(id.clone(), isi);
        }
        Ok(next)
    }

    pub fn declare_conflict(
        &self,
        kind: ConflictKind,
        members: Vec<HeuristicId>,
        note: &str,
    ) -> Result<(ProjectState, ConflictId), WorkbenchError> {
        let mut next = self.begin(Stage::NORMALIZATION)?;
        let (catalog, id) = declare_conflict(&next.catalog, kind, members, note)?;
        next.catalog = catalog;
        Ok((next, id))
    }

    pub fn apply_normalization(&self, action: &NormalizationAction) -> Result<ProjectState, WorkbenchError> {
        let mut next = self.begin(Stage::NORMALIZATION)?;
        next.catalog = apply_action(&next.catalog, action)?;
        Ok(next)
    }

    /// Stores (or replaces) one GSI row after checking it against the profile.
    pub fn set_gsi(&self, table: GsiTable) -> Result<ProjectState, WorkbenchError> {
        let mut next = self.begin(Stage::PRIORITIZATION)?;
        match next.catalog.get(&table.heuristic) {
            None => return Err(WorkbenchError::UnknownHeuristic(table.heuristic)),
            Some(h) if !h.is_live() => {
                return Err(NormalizationError::AlreadyDiscarded(table.heuristic).into())
            }
            Some(_) => {}
        }
        compute_gsi(&table, &next.profile)?;
        next.gsi_tables
            .retain(|t| !(t.heuristic == table.heuristic && t.kind == table.kind));
        next.gsi_tables.push(table);
        next.gsi_tables
            .sort_by(|a, b| a.heuristic.cmp(&b.heuristic).then(a.kind.cmp(&b.kind)));
        Ok(next)
    }

    pub fn rebuild_matrix(&self) -> Result<SpecificityMatrix, WorkbenchError> {
        Ok(build_matrix(&self.effective_catalog(), &self.gsi_tables, &self.profile)?)
    }

    /// Builds the specificity matrix and, with a threshold, selects the
    /// heuristics whose FSI reaches it.
    pub fn build_matrix(&self, threshold: Option<Rational>) -> Result<ProjectState, WorkbenchError> {
        let mut next = self.begin(Stage::PRIORITIZATION)?;
        let matrix = next.rebuild_matrix()?;
        if let Some(t) = threshold {
            if t.is_negative() || t > Rational::from_integer(4) {
                let mut report = ValidationReport::default();
                report.push("threshold", "threshold must lie in [0, 4]");
                return Err(WorkbenchError::Invalid(report));
            }
            next.threshold = Some(t);
        }
        let selected = match next.threshold {
            Some(t) => select_heuristics(&matrix, t),
            None => Vec::new(),
        };
        next.catalog = next.catalog.with_selection(&selected);
        next.matrix = Some(matrix);
        Ok(next)
    }

    pub fn set_template(&self, template: HeuristicTemplate) -> Result<ProjectState, WorkbenchError> {
        let mut next = self.begin(Stage::DESCRIPTION)?;
        if !next.selected().contains(&template.heuristic) {
            return Err(WorkbenchError::PrerequisiteMissing {
                stage: Stage::DESCRIPTION,
                what: format!("{} is not a selected heuristic", template.heuristic),
            });
        }
        let report = validate_template(&template, &next.catalog);
        if !report.is_empty() {
            return Err(WorkbenchError::Invalid(report));
        }
        next.templates.retain(|t| t.heuristic != template.heuristic);
        next.templates.push(template);
        next.templates.sort_by(|a, b| a.heuristic.cmp(&b.heuristic));
        Ok(next)
    }

    pub fn add_dataset(&self, dataset: EvaluationDataset) -> Result<ProjectState, WorkbenchError> {
        let mut next = self.begin(Stage::VALIDATION)?;
        if next.datasets.iter().any(|d| d.case_study == dataset.case_study) {
            return Err(WorkbenchError::DuplicateCase(dataset.case_study));
        }
        let report = dataset.validate();
        if !report.is_empty() {
            return Err(WorkbenchError::Invalid(report));
        }
        let selected = next.selected();
        if let Some(h) = dataset.domain_heuristics.iter().find(|h| !selected.contains(h)) {
            return Err(WorkbenchError::PrerequisiteMissing {
                stage: Stage::VALIDATION,
                what: format!("domain heuristic {h} was not selected at stage 5"),
            });
        }
        next.datasets.push(dataset);
        Ok(next)
    }

    /// Reports for the current datasets, computed from raw inputs.
    pub fn compute_reports(&self) -> Vec<EvaluationRecord> {
        let matrix = self.matrix.clone().unwrap_or_default();
        self.datasets
            .iter()
            .map(|d| {
                let report = build_report(d, &matrix);
                let advice = advise(&report);
                EvaluationRecord {
                    case_study: d.case_study.clone(),
                    report,
                    advice,
                }
            })
            .collect()
    }

    /// Marks `stage` complete once its inputs are in place.
    pub fn advance_stage(&self, stage: Stage, artifacts: StageArtifacts) -> Result<ProjectState, WorkbenchError> {
        self.ensure_ongoing()?;
        self.ensure_predecessors(stage)?;
        if self.is_complete(stage) {
            return Err(WorkbenchError::StageClosed(stage));
        }
        let missing = |what: String| WorkbenchError::PrerequisiteMissing { stage, what };
        if artifacts.exit_early && stage != Stage::SEARCH {
            return Err(missing("early exit is only possible at stage 2".into()));
        }
        let mut next = self.clone();
        match stage.number() {
            1 => {
                let report = next.profile.validate(true);
                if !report.is_empty() {
                    return Err(WorkbenchError::Invalid(report));
                }
            }
            2 => {
                if next.catalog.heuristics.is_empty() && !artifacts.exit_early {
                    return Err(missing("no heuristics have been recorded".into()));
                }
                let report = validate_catalog(&next.catalog);
                if !report.is_empty() {
                    return Err(WorkbenchError::Invalid(report));
                }
                if artifacts.exit_early {
                    next.outcome = ProjectOutcome::ExitedAtStage2;
                }
            }
            3 => {
                if next.catalog.with_status(HeuristicStatus::Discarded).count() == next.catalog.heuristics.len() {
                    return Err(missing("no live heuristics to normalize".into()));
                }
                next.snapshot = Some(next.catalog.clone());
                next.normalization_certified = false;
            }
            4 => {
                let status = check_normalized(&next.catalog);
                if !status.normalized {
                    let open: Vec<String> = status.open_conflicts.iter().map(|c| format!("#{c}")).collect();
                    return Err(missing(format!("open conflicts {}", open.join(", "))));
                }
                next.catalog = normalization::promote_normalized(&next.catalog)?;
                next.normalization_certified = true;
            }
            5 => {
                let fresh = next.rebuild_matrix()?;
                match &next.matrix {
                    None => return Err(missing("no specificity matrix; run matrix build".into())),
                    Some(m) if *m != fresh => {
                        return Err(missing("the specificity matrix is stale; rebuild it".into()))
                    }
                    Some(_) => {}
                }
                if next.threshold.is_none() {
                    return Err(missing("no selection threshold".into()));
                }
                if next.selected().is_empty() {
                    return Err(missing("no heuristic reaches the selection threshold".into()));
                }
            }
            6 => {
                for id in next.selected() {
                    let template = next
                        .templates
                        .iter()
                        .find(|t| t.heuristic == id)
                        .ok_or_else(|| missing(format!("no template for {id}")))?;
                    let report = validate_template(template, &next.catalog);
                    if !report.is_empty() {
                        return Err(WorkbenchError::Invalid(report));
                    }
                }
            }
            7 => {
                if next.datasets.is_empty() {
                    return Err(missing("at least one heuristic evaluation is required".into()));
                }
                next.reports = next.compute_reports();
            }
            _ => {
                if next.reports.is_empty() {
                    return Err(missing("no validation report exists".into()));
                }
                next.outcome = ProjectOutcome::Validated;
            }
        }
        next.stage_status.insert(stage, StageStatus::Complete);
        Ok(next)
    }

    /// Reopens `target` and every later stage, starting a new iteration.
    ///
    /// The target must be one of the stages suggested by the current advice
    /// unless `override_advice` is set.
    pub fn loop_back(&self, target: u8, reason: &str, override_advice: bool) -> Result<ProjectState, WorkbenchError> {
        if self.reports.is_empty() {
            return Err(WorkbenchError::NoAdviceYet);
        }
        let invalid = |why: &str| WorkbenchError::InvalidTarget {
            target,
            why: why.to_string(),
        };
        if !(1..=7).contains(&target) {
            return Err(invalid("only stages 1-7 can be revisited"));
        }
        if reason.trim().is_empty() {
            return Err(invalid("a reason is required"));
        }
        let suggested: BTreeSet<u8> = self
            .reports
            .iter()
            .flat_map(|r| r.advice.revisit_stages())
            .collect();
        if !override_advice && !suggested.contains(&target) {
            let list: Vec<String> = suggested.iter().map(u8::to_string).collect();
            return Err(invalid(&format!(
                "the advice suggests stages {{{}}}; pass an override to go elsewhere",
                list.join(",")
            )));
        }
        let stage = Stage(target);
        let mut next = self.clone();
        next.history.push(IterationRecord {
            iteration: self.iteration,
            stage_status: self.stage_status.clone(),
            datasets: self.datasets.clone(),
            reports: self.reports.clone(),
            loop_back: LoopBack {
                target: stage,
                reason: reason.trim().to_string(),
                overridden: !suggested.contains(&target),
            },
        });
        next.iteration += 1;
        next.outcome = ProjectOutcome::Ongoing;
        for s in Stage::all().filter(|s| *s >= stage) {
            let status = if s == stage {
                StageStatus::InProgress
            } else {
                StageStatus::NotStarted
            };
            next.stage_status.insert(s, status);
        }
        next.datasets.clear();
        next.reports.clear();
        if target <= Stage::PRIORITIZATION.number() {
            next.matrix = None;
            next.catalog = next.catalog.with_selection(&[]);
        }
        if target <= Stage::SPECIFICITY.number() {
            next.snapshot = None;
            next.normalization_certified = false;
        }
        Ok(next)
    }

    /// Rebuilds the catalog from the Stage-3 snapshot and the logged actions
    /// and checks it matches the stored catalog byte for byte.
    pub fn verify_catalog_replay(&self) -> Result<(), String> {
        let Some(snapshot) = &self.snapshot else {
            return Ok(());
        };
        let start = snapshot.actions.len();
        if self.catalog.actions.len() < start || self.catalog.actions[..start] != snapshot.actions[..] {
            return Err("action log does not extend the snapshot's log".into());
        }
        let mut rebuilt = normalization::replay(snapshot, &self.catalog.conflicts, &self.catalog.actions[start..])
            .map_err(|e| format!("replay failed: {e}"))?;
        rebuilt.actions = self.catalog.actions.clone();
        if self.normalization_certified {
            rebuilt = normalization::promote_untouched(&rebuilt);
        }
        let selected: Vec<HeuristicId> = self
            .catalog
            .with_status(HeuristicStatus::Selected)
            .map(|h| h.id.clone())
            .collect();
        rebuilt = rebuilt.with_selection(&selected);
        if rebuilt.canonical_json() != self.catalog.canonical_json() {
            return Err("replaying the normalization log does not reproduce the catalog".into());
        }
        Ok(())
    }

    /// Structural checks run after loading a project file. Subjects are
    /// paths into the persisted document.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let stage1_done = self.is_complete(Stage::DIMENSIONS);
        for v in self.profile.validate(stage1_done).violations {
            report.push(v.subject, v.message);
        }
        if self.iteration == 0 {
            report.push("iteration", "iteration must be positive");
        }
        for stage in Stage::all() {
            if !self.stage_status.contains_key(&stage) {
                report.push("stage_status", format!("stage {stage} is missing"));
            }
            if self.is_complete(stage) {
                if let Some(p) = stage.predecessors().find(|p| !self.is_complete(*p)) {
                    report.push(
                        format!("stage_status.{stage}"),
                        format!("stage {stage} is complete but stage {p} is not"),
                    );
                }
            }
        }
        match self.outcome {
            ProjectOutcome::ExitedAtStage2
                if !(self.is_complete(Stage::DIMENSIONS) && self.is_complete(Stage::SEARCH)) =>
            {
                report.push("outcome", "early exit requires stages 1 and 2 complete")
            }
            ProjectOutcome::Validated if self.reports.is_empty() => {
                report.push("outcome", "validated requires at least one evaluation report")
            }
            _ => {}
        }
        for v in validate_catalog(&self.catalog).violations {
            report.push(format!("catalog ({})", v.subject), v.message);
        }
        if let Err(e) = self.verify_catalog_replay() {
            report.push("catalog.actions", e);
        }
        for (i, d) in self.datasets.iter().enumerate() {
            for v in d.validate().violations {
                report.push(format!("datasets[{i}] ({})", v.subject), v.message);
            }
        }
        if self.is_complete(Stage::VALIDATION) && self.reports != self.compute_reports() {
            report.push("reports", "stored reports differ from reports recomputed from the datasets");
        }
        report
    }

    pub fn render_status(&self) -> String {
        let mut out = format!(
            "domain: {}\niteration: {}\noutcome: {:?}\n",
            self.profile.domain_name, self.iteration, self.outcome
        );
        for stage in Stage::all() {
            out.push_str(&format!(
                "  stage {stage} {:<40} {}\n",
                stage.title(),
                self.status(stage)
            ));
        }
        out.push_str(&format!(
            "heuristics: {} ({} selected, {} discarded)\n",
            self.catalog.heuristics.len(),
            self.catalog.with_status(HeuristicStatus::Selected).count(),
            self.catalog.with_status(HeuristicStatus::Discarded).count()
        ));
        out.push_str(&format!(
            "templates: {}  datasets: {}  reports: {}  past iterations: {}\n",
            self.templates.len(),
            self.datasets.len(),
            self.reports.len(),
            self.history.len()
        ));
        out
    }
}
