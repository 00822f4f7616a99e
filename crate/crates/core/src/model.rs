//! Domain types shared by every stage of a heuristic-development project.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::normalization::{ConflictNote, NormalizationAction};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("{what} must be an integer in 0..=4, got {value}")]
    OutOfLikertRange { what: &'static str, value: i64 },
    #[error("invalid heuristic id {0:?}: expected `<set>.H<index>` such as S1.H2 or NEW.H1")]
    InvalidHeuristicId(String),
    #[error("unknown dimension kind {0:?}: expected one of UC, LD, PD, UP")]
    UnknownDimensionKind(String),
    #[error("unknown classification {0:?}: expected common, domain_only or control_only")]
    UnknownClassification(String),
}

macro_rules! likert_newtype {
    ($(#[$meta:meta])* $name:ident, $what:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(try_from = "i64", into = "u8")]
        pub struct $name(u8);

        impl $name {
            pub const MIN: $name = $name(0);
            pub const MAX: $name = $name(4);

            pub fn new(value: i64) -> Result<Self, ModelError> {
                if (0..=4).contains(&value) {
                    Ok($name(value as u8))
                } else {
                    Err(ModelError::OutOfLikertRange { what: $what, value })
                }
            }

            pub fn value(self) -> u8 {
                self.0
            }

            pub fn as_rational(self) -> $crate::Rational {
                $crate::Rational::from_integer(i64::from(self.0))
            }
        }

        impl TryFrom<i64> for $name {
            type Error = ModelError;
            fn try_from(value: i64) -> Result<Self, Self::Error> {
                $name::new(value)
            }
        }

        impl From<$name> for u8 {
            fn from(value: $name) -> u8 {
                value.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl FromStr for $name {
            type Err = ModelError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let value: i64 = s.trim().parse().map_err(|_| ModelError::OutOfLikertRange {
                    what: $what,
                    value: i64::MIN,
                })?;
                $name::new(value)
            }
        }
    };
}

likert_newtype!(
    /// Likert specificity level: 0 is not specific, 4 is completely specific.
    SpecificityScore,
    "specificity"
);

likert_newtype!(
    /// Likert severity level of a usability problem.
    Severity,
    "severity"
);

/// The four characteristic dimensions describing a domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DimensionKind {
    /// Usage context.
    UC,
    /// Interactive logic device.
    LD,
    /// Interactive physical device.
    PD,
    /// User profile.
    UP,
}

impl DimensionKind {
    pub const ALL: [DimensionKind; 4] = [
        DimensionKind::UC,
        DimensionKind::LD,
        DimensionKind::PD,
        DimensionKind::UP,
    ];

    /// Column order used by specificity-matrix reports.
    pub const MATRIX_ORDER: [DimensionKind; 4] = [
        DimensionKind::UC,
        DimensionKind::PD,
        DimensionKind::LD,
        DimensionKind::UP,
    ];

    pub fn code(self) -> &'static str {
        match self {
            DimensionKind::UC => "UC",
            DimensionKind::LD => "LD",
            DimensionKind::PD => "PD",
            DimensionKind::UP => "UP",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            DimensionKind::UC => "usage context",
            DimensionKind::LD => "interactive logic device",
            DimensionKind::PD => "interactive physical device",
            DimensionKind::UP => "user profile",
        }
    }
}

impl fmt::Display for DimensionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for DimensionKind {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "UC" => Ok(DimensionKind::UC),
            "LD" => Ok(DimensionKind::LD),
            "PD" => Ok(DimensionKind::PD),
            "UP" => Ok(DimensionKind::UP),
            _ => Err(ModelError::UnknownDimensionKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionItem {
    pub kind: DimensionKind,
    pub label: String,
    pub initial_specificity: SpecificityScore,
}

/// The domain under study and its characteristic dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DomainProfile {
    pub domain_name: String,
    pub keywords: Vec<String>,
    pub items: Vec<DimensionItem>,
}

impl DomainProfile {
    pub fn new(domain_name: impl Into<String>) -> Self {
        DomainProfile {
            domain_name: domain_name.into(),
            keywords: Vec::new(),
            items: Vec::new(),
        }
    }

    pub fn items_of(&self, kind: DimensionKind) -> impl Iterator<Item = &DimensionItem> {
        self.items.iter().filter(move |item| item.kind == kind)
    }

    /// Adds an item, rejecting a case-insensitive duplicate label within its kind.
    pub fn with_item(
        mut self,
        kind: DimensionKind,
        label: impl Into<String>,
        initial_specificity: SpecificityScore,
    ) -> Result<Self, Violation> {
        let label = label.into();
        if label.trim().is_empty() {
            return Err(Violation::new(format!("dimension {kind}"), "label must be nonempty"));
        }
        if self
            .items_of(kind)
            .any(|item| item.label.eq_ignore_ascii_case(&label))
        {
            return Err(Violation::new(
                format!("dimension {kind}"),
                format!("duplicate label {label:?}"),
            ));
        }
        self.items.push(DimensionItem {
            kind,
            label,
            initial_specificity,
        });
        Ok(self)
    }

    /// Checks the profile. With `complete` set, also requires what a finished
    /// Stage 1 must provide: keywords and at least one item per dimension.
    pub fn validate(&self, complete: bool) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.domain_name.trim().is_empty() {
            report.push("profile.domain_name", "domain name must be nonempty");
        }
        for (i, keyword) in self.keywords.iter().enumerate() {
            if keyword.trim().is_empty() {
                report.push(format!("profile.keywords[{i}]"), "keyword must be nonempty");
            }
        }
        let mut seen = HashSet::new();
        for (i, item) in self.items.iter().enumerate() {
            if item.label.trim().is_empty() {
                report.push(format!("profile.items[{i}]"), "label must be nonempty");
            }
            if !seen.insert((item.kind, item.label.to_lowercase())) {
                report.push(
                    format!("profile.items[{i}]"),
                    format!("duplicate label {:?} in dimension {}", item.label, item.kind),
                );
            }
        }
        if complete {
            if self.keywords.is_empty() {
                report.push("profile.keywords", "at least one keyword is required");
            }
            for kind in DimensionKind::ALL {
                if self.items_of(kind).next().is_none() {
                    report.push(
                        "profile.items",
                        format!("dimension {kind} ({}) has no items", kind.description()),
                    );
                }
            }
        }
        report
    }
}

/// Identifier of a heuristic: `<set>.H<index>`, e.g. `S3.H2` or `NEW.H1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeuristicId {
    set_id: String,
    index: u32,
}

impl HeuristicId {
    /// Set id reserved for heuristics created during normalization.
    pub const NEW_SET: &'static str = "NEW";

    pub fn new(set_id: impl Into<String>, index: u32) -> Result<Self, ModelError> {
        let set_id = set_id.into();
        let valid_token = !set_id.is_empty()
            && set_id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        if !valid_token || index == 0 {
            return Err(ModelError::InvalidHeuristicId(format!("{set_id}.H{index}")));
        }
        Ok(HeuristicId { set_id, index })
    }

    pub fn new_heuristic(index: u32) -> Result<Self, ModelError> {
        HeuristicId::new(Self::NEW_SET, index)
    }

    pub fn set_id(&self) -> &str {
        &self.set_id
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn is_new(&self) -> bool {
        self.set_id == Self::NEW_SET
    }
}

impl fmt::Display for HeuristicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.H{}", self.set_id, self.index)
    }
}

impl FromStr for HeuristicId {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ModelError::InvalidHeuristicId(s.to_string());
        let (set_id, index) = s.trim().rsplit_once(".H").ok_or_else(err)?;
        let index: u32 = index.parse().map_err(|_| err())?;
        HeuristicId::new(set_id, index).map_err(|_| err())
    }
}

impl Serialize for HeuristicId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HeuristicId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Where a heuristic came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Found,
    KeptAfterDedup,
    MergedFrom(Vec<HeuristicId>),
    GeneralizedFrom(Vec<HeuristicId>),
    SplitFrom(HeuristicId),
}

impl Origin {
    pub fn sources(&self) -> Vec<&HeuristicId> {
        match self {
            Origin::Found | Origin::KeptAfterDedup => Vec::new(),
            Origin::MergedFrom(ids) | Origin::GeneralizedFrom(ids) => ids.iter().collect(),
            Origin::SplitFrom(id) => vec![id],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeuristicStatus {
    Denormalized,
    Normalized,
    Selected,
    Discarded,
}

impl fmt::Display for HeuristicStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeuristicStatus::Denormalized => "denormalized",
            HeuristicStatus::Normalized => "normalized",
            HeuristicStatus::Selected => "selected",
            HeuristicStatus::Discarded => "discarded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Heuristic {
    pub id: HeuristicId,
    pub name: String,
    pub statement: String,
    pub isi: SpecificityScore,
    pub origin: Origin,
    pub status: HeuristicStatus,
}

impl Heuristic {
    /// A heuristic as found during the literature search.
    pub fn found(
        id: HeuristicId,
        name: impl Into<String>,
        statement: impl Into<String>,
        isi: SpecificityScore,
    ) -> Self {
        Heuristic {
            id,
            name: name.into(),
            statement: statement.into(),
            isi,
            origin: Origin::Found,
            status: HeuristicStatus::Denormalized,
        }
    }

    pub fn is_live(&self) -> bool {
        self.status != HeuristicStatus::Discarded
    }
}

/// The heuristics of a project together with the declared conflicts among
/// them and the append-only log of normalization actions.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HeuristicCatalog {
    pub heuristics: Vec<Heuristic>,
    #[serde(default)]
    pub conflicts: Vec<ConflictNote>,
    #[serde(default)]
    pub actions: Vec<NormalizationAction>,
}

impl HeuristicCatalog {
    pub fn new(heuristics: Vec<Heuristic>) -> Self {
        HeuristicCatalog {
            heuristics,
            conflicts: Vec::new(),
            actions: Vec::new(),
        }
    }

    pub fn get(&self, id: &HeuristicId) -> Option<&Heuristic> {
        self.heuristics.iter().find(|h| &h.id == id)
    }

    pub(crate) fn get_mut(&mut self, id: &HeuristicId) -> Option<&mut Heuristic> {
        self.heuristics.iter_mut().find(|h| &h.id == id)
    }

    pub fn contains(&self, id: &HeuristicId) -> bool {
        self.get(id).is_some()
    }

    pub fn with_status(&self, status: HeuristicStatus) -> impl Iterator<Item = &Heuristic> {
        self.heuristics.iter().filter(move |h| h.status == status)
    }

    /// Appends heuristics, rejecting any id already present.
    pub fn extend(&mut self, heuristics: Vec<Heuristic>) -> Result<(), HeuristicId> {
        let mut ids: HashSet<HeuristicId> = self.heuristics.iter().map(|h| h.id.clone()).collect();
        for h in &heuristics {
            if !ids.insert(h.id.clone()) {
                return Err(h.id.clone());
            }
        }
        self.heuristics.extend(heuristics);
        Ok(())
    }

    /// Marks exactly `ids` as Selected; previously selected heuristics not in
    /// `ids` fall back to Normalized. Discarded heuristics are never selected.
    pub fn with_selection(&self, ids: &[HeuristicId]) -> HeuristicCatalog {
        let chosen: HashSet<&HeuristicId> = ids.iter().collect();
        let mut next = self.clone();
        for h in &mut next.heuristics {
            match h.status {
                HeuristicStatus::Discarded => {}
                _ if chosen.contains(&h.id) => h.status = HeuristicStatus::Selected,
                HeuristicStatus::Selected => h.status = HeuristicStatus::Normalized,
                _ => {}
            }
        }
        next
    }

    /// Serialized form used for equality checks across replay and reload.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("catalog serialization is infallible")
    }
}

/// A single rule breach found by one of the validators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// What the rule was checked against: an id, a field or a document path.
    pub subject: String,
    pub message: String,
}

impl Violation {
    pub fn new(subject: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            subject: subject.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

/// Violations are data, not failures. Warnings never make a report invalid.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, subject: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation::new(subject, message));
    }

    pub fn warn(&mut self, subject: impl Into<String>, message: impl Into<String>) {
        self.warnings.push(Violation::new(subject, message));
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
        self.warnings.extend(other.warnings);
    }

    pub fn messages(&self) -> Vec<String> {
        self.violations.iter().map(|v| v.message.clone()).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "error: {v}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

/// Checks every catalog invariant: unique ids, origin arities, and that
/// conflicts and logged actions only reference catalog members.
pub fn validate_catalog(catalog: &HeuristicCatalog) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut seen = HashSet::new();
    for h in &catalog.heuristics {
        let id = h.id.to_string();
        if !seen.insert(&h.id) {
            report.push(&id, format!("duplicate id {id}"));
        }
        if h.name.trim().is_empty() {
            report.push(&id, "name must be nonempty");
        }
        if h.statement.trim().is_empty() {
            report.push(&id, "statement must be nonempty");
        }
        match &h.origin {
            Origin::MergedFrom(ids) | Origin::GeneralizedFrom(ids) => {
                let distinct: BTreeSet<_> = ids.iter().collect();
                if distinct.len() < 2 {
                    let verb = if matches!(h.origin, Origin::MergedFrom(_)) {
                        "merge"
                    } else {
                        "generalization"
                    };
                    report.push(&id, format!("{verb} requires ≥2 inputs"));
                }
            }
            Origin::Found | Origin::KeptAfterDedup | Origin::SplitFrom(_) => {}
        }
        for source in h.origin.sources() {
            if !catalog.contains(source) {
                report.push(&id, format!("origin references unknown heuristic {source}"));
            }
        }
    }
    let mut conflict_ids = HashSet::new();
    for conflict in &catalog.conflicts {
        let subject = format!("conflict #{}", conflict.id);
        if !conflict_ids.insert(conflict.id) {
            report.push(&subject, "duplicate conflict id");
        }
        if let Some(rule) = conflict.arity_violation() {
            report.push(&subject, rule);
        }
        for member in &conflict.members {
            if !catalog.contains(member) {
                report.push(&subject, format!("unknown member {member}"));
            }
        }
    }
    for (i, action) in catalog.actions.iter().enumerate() {
        let subject = format!("action #{}", i + 1);
        for id in action.referenced_ids() {
            if !catalog.contains(id) {
                report.push(&subject, format!("references unknown heuristic {id}"));
            }
        }
        if !conflict_ids.contains(&action.resolves) {
            report.push(&subject, format!("resolves unknown conflict #{}", action.resolves));
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// Found by both evaluator groups.
    Common,
    /// Found only with the domain heuristics.
    DomainOnly,
    /// Found only with the control heuristics.
    ControlOnly,
}

impl Classification {
    pub fn code(self) -> &'static str {
        match self {
            Classification::Common => "common",
            Classification::DomainOnly => "domain_only",
            Classification::ControlOnly => "control_only",
        }
    }

    pub fn on_domain_side(self) -> bool {
        matches!(self, Classification::Common | Classification::DomainOnly)
    }

    pub fn on_control_side(self) -> bool {
        matches!(self, Classification::Common | Classification::ControlOnly)
    }

    pub fn swapped(self) -> Classification {
        match self {
            Classification::Common => Classification::Common,
            Classification::DomainOnly => Classification::ControlOnly,
            Classification::ControlOnly => Classification::DomainOnly,
        }
    }
}

impl FromStr for Classification {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "common" => Ok(Classification::Common),
            "domain_only" | "domain" => Ok(Classification::DomainOnly),
            "control_only" | "control" => Ok(Classification::ControlOnly),
            _ => Err(ModelError::UnknownClassification(s.to_string())),
        }
    }
}

/// A usability problem recorded during a heuristic evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemRecord {
    pub id: String,
    pub description: String,
    pub classification: Classification,
    pub domain_attribution: Option<HeuristicId>,
    pub control_attribution: Option<String>,
    pub severity: Severity,
    /// Evaluator-assigned specificity; only meaningful on the control side.
    pub control_specificity: Option<SpecificityScore>,
}

/// A control heuristic: an opaque token with a human-readable label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlHeuristic {
    pub token: String,
    pub label: String,
}

const NIELSEN_HEURISTICS: [&str; 10] = [
    "Visibility of system status",
    "Match between system and the real world",
    "User control and freedom",
    "Consistency and standards",
    "Error prevention",
    "Recognition rather than recall",
    "Flexibility and efficiency of use",
    "Aesthetic and minimalist design",
    "Help users recognize, diagnose, and recover from errors",
    "Help and documentation",
];

/// Nielsen's ten heuristics as tokens N1..N10.
pub fn default_control_heuristics() -> Vec<ControlHeuristic> {
    NIELSEN_HEURISTICS
        .iter()
        .enumerate()
        .map(|(i, label)| ControlHeuristic {
            token: format!("N{}", i + 1),
            label: (*label).to_string(),
        })
        .collect()
}

/// The recorded output of one heuristic evaluation (one case study).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationDataset {
    pub case_study: String,
    pub domain_heuristics: Vec<HeuristicId>,
    pub control_heuristics: Vec<ControlHeuristic>,
    pub problems: Vec<ProblemRecord>,
}

impl EvaluationDataset {
    /// Checks attribution coherence, references, and id uniqueness.
    ///
    /// A missing control-side specificity is reported as a warning only: the
    /// specificity rate becomes unavailable but the other indicators remain
    /// computable.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.case_study.trim().is_empty() {
            report.push("case_study", "case study name must be nonempty");
        }
        if self.domain_heuristics.is_empty() {
            report.push("domain_heuristics", "at least one domain heuristic is required");
        }
        if self.control_heuristics.is_empty() {
            report.push("control_heuristics", "at least one control heuristic is required");
        }
        let domain: HashSet<&HeuristicId> = self.domain_heuristics.iter().collect();
        if domain.len() != self.domain_heuristics.len() {
            report.push("domain_heuristics", "duplicate domain heuristic");
        }
        let control: HashSet<&str> = self
            .control_heuristics
            .iter()
            .map(|c| c.token.as_str())
            .collect();
        if control.len() != self.control_heuristics.len() {
            report.push("control_heuristics", "duplicate control heuristic token");
        }
        let mut ids = HashSet::new();
        for p in &self.problems {
            let subject = format!("problem {}", p.id);
            if p.id.trim().is_empty() {
                report.push("problem", "problem id must be nonempty");
            }
            if !ids.insert(p.id.as_str()) {
                report.push(&subject, format!("duplicate problem id {}", p.id));
            }
            if p.description.trim().is_empty() {
                report.push(&subject, "description must be nonempty");
            }
            let class = p.classification;
            match (&p.domain_attribution, class.on_domain_side()) {
                (None, true) => report.push(
                    &subject,
                    format!("{} problem requires a domain heuristic", class.code()),
                ),
                (Some(_), false) => report.push(
                    &subject,
                    format!("{} problem must not name a domain heuristic", class.code()),
                ),
                (Some(h), true) if !domain.contains(h) => {
                    report.push(&subject, format!("unknown domain heuristic {h}"))
                }
                _ => {}
            }
            match (&p.control_attribution, class.on_control_side()) {
                (None, true) => report.push(
                    &subject,
                    format!("{} problem requires a control heuristic", class.code()),
                ),
                (Some(_), false) => report.push(
                    &subject,
                    format!("{} problem must not name a control heuristic", class.code()),
                ),
                (Some(c), true) if !control.contains(c.as_str()) => {
                    report.push(&subject, format!("unknown control heuristic {c}"))
                }
                _ => {}
            }
            match (p.control_specificity, class.on_control_side()) {
                (Some(_), false) => report.push(
                    &subject,
                    "control specificity is only recorded for common and control_only problems",
                ),
                (None, true) => report.warn(
                    &subject,
                    "missing control specificity; the specificity rate will be unavailable",
                ),
                _ => {}
            }
        }
        report
    }

    /// The same evaluation with the roles of the two heuristic groups
    /// exchanged. Control tokens become heuristic ids in set `C`, and domain
    /// ids become control tokens. Specificities are dropped because they are
    /// only defined on the control side.
    pub fn swapped_roles(&self) -> EvaluationDataset {
        let token_to_id: BTreeMap<&str, HeuristicId> = self
            .control_heuristics
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let id = HeuristicId::new("C", i as u32 + 1).expect("valid id");
                (c.token.as_str(), id)
            })
            .collect();
        let problems = self
            .problems
            .iter()
            .map(|p| ProblemRecord {
                id: p.id.clone(),
                description: p.description.clone(),
                classification: p.classification.swapped(),
                domain_attribution: p
                    .control_attribution
                    .as_deref()
                    .and_then(|t| token_to_id.get(t).cloned()),
                control_attribution: p.domain_attribution.as_ref().map(ToString::to_string),
                severity: p.severity,
                control_specificity: None,
            })
            .collect();
        EvaluationDataset {
            case_study: self.case_study.clone(),
            domain_heuristics: self
                .control_heuristics
                .iter()
                .map(|c| token_to_id[c.token.as_str()].clone())
                .collect(),
            control_heuristics: self
                .domain_heuristics
                .iter()
                .map(|id| ControlHeuristic {
                    token: id.to_string(),
                    label: id.to_string(),
                })
                .collect(),
            problems,
        }
    }
}

/// The problem sets of an evaluation: the three disjoint base sets and the
/// two per-group unions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemPartition<'a> {
    /// `P*`: found by both groups.
    pub common: Vec<&'a ProblemRecord>,
    /// `P_D`: found only with the domain heuristics.
    pub domain_only: Vec<&'a ProblemRecord>,
    /// `P_C`: found only with the control heuristics.
    pub control_only: Vec<&'a ProblemRecord>,
}

impl<'a> ProblemPartition<'a> {
    /// `P*_D = P_D ∪ P*`.
    pub fn domain_side(&self) -> Vec<&'a ProblemRecord> {
        self.domain_only.iter().chain(&self.common).copied().collect()
    }

    /// `P*_C = P_C ∪ P*`.
    pub fn control_side(&self) -> Vec<&'a ProblemRecord> {
        self.control_only.iter().chain(&self.common).copied().collect()
    }

    pub fn counts(&self) -> PartitionCounts {
        let common = self.common.len() as u32;
        let domain_only = self.domain_only.len() as u32;
        let control_only = self.control_only.len() as u32;
        PartitionCounts {
            common,
            domain_only,
            control_only,
            domain_side: domain_only + common,
            control_side: control_only + common,
            total: common + domain_only + control_only,
        }
    }
}

/// Cardinalities of the problem sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PartitionCounts {
    /// `|P*|`
    pub common: u32,
    /// `|P_D|`
    pub domain_only: u32,
    /// `|P_C|`
    pub control_only: u32,
    /// `|P*_D|`
    pub domain_side: u32,
    /// `|P*_C|`
    pub control_side: u32,
    pub total: u32,
}

pub fn partition_problems(dataset: &EvaluationDataset) -> ProblemPartition<'_> {
    let mut partition = ProblemPartition {
        common: Vec::new(),
        domain_only: Vec::new(),
        control_only: Vec::new(),
    };
    for p in &dataset.problems {
        match p.classification {
            Classification::Common => partition.common.push(p),
            Classification::DomainOnly => partition.domain_only.push(p),
            Classification::ControlOnly => partition.control_only.push(p),
        }
    }
    partition
}
