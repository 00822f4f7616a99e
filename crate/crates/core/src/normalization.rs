//! Resolution of duplicated and overlapping heuristics.
//!
//! Conflicts are declared by the researcher; the engine only keeps the
//! bookkeeping honest. Each [`NormalizationAction`] resolves exactly one
//! conflict with one of four strategies and is appended to the catalog's
//! log, so the catalog can always be rebuilt from the snapshot taken when
//! initial specificity was fixed.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{Heuristic, HeuristicCatalog, HeuristicId, HeuristicStatus, Origin};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConflictId(pub u32);

impl fmt::Display for ConflictId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConflictKind {
    Duplication,
    Overlap,
}

impl fmt::Display for ConflictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConflictKind::Duplication => "duplication",
            ConflictKind::Overlap => "overlap",
        })
    }
}

/// A researcher-declared duplication or overlap among heuristics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictNote {
    pub id: ConflictId,
    pub kind: ConflictKind,
    pub members: Vec<HeuristicId>,
    pub note: String,
}

impl ConflictNote {
    pub(crate) fn arity_violation(&self) -> Option<String> {
        let distinct: BTreeSet<_> = self.members.iter().collect();
        if distinct.len() != self.members.len() {
            return Some("members must be distinct".into());
        }
        match self.kind {
            ConflictKind::Duplication if self.members.len() < 2 => {
                Some("duplication requires ≥2 members".into())
            }
            ConflictKind::Overlap if self.members.is_empty() => {
                Some("overlap requires ≥1 member".into())
            }
            _ => None,
        }
    }
}

/// How a conflict is resolved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum Strategy {
    /// Keep one of the similar heuristics and discard the rest.
    KeepOneDiscardRest {
        kept: HeuristicId,
        discarded: Vec<HeuristicId>,
    },
    /// Discard the similar heuristics and reformulate a new one combining them.
    MergeReformulate {
        inputs: Vec<HeuristicId>,
        new_heuristic: Heuristic,
    },
    /// Keep a general heuristic grouping the overlapping ones.
    GroupUnderGeneral {
        inputs: Vec<HeuristicId>,
        new_heuristic: Heuristic,
    },
    /// Separate an overlapping heuristic into several individual ones.
    SplitIntoSeveral {
        input: HeuristicId,
        new_heuristics: Vec<Heuristic>,
    },
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::KeepOneDiscardRest { .. } => "keep_one_discard_rest",
            Strategy::MergeReformulate { .. } => "merge_reformulate",
            Strategy::GroupUnderGeneral { .. } => "group_under_general",
            Strategy::SplitIntoSeveral { .. } => "split_into_several",
        }
    }

    fn resolves_kind(&self) -> ConflictKind {
        match self {
            Strategy::KeepOneDiscardRest { .. } | Strategy::MergeReformulate { .. } => {
                ConflictKind::Duplication
            }
            Strategy::GroupUnderGeneral { .. } | Strategy::SplitIntoSeveral { .. } => {
                ConflictKind::Overlap
            }
        }
    }

    /// Existing heuristics the strategy consumes or keeps.
    fn existing_ids(&self) -> Vec<&HeuristicId> {
        match self {
            Strategy::KeepOneDiscardRest { kept, discarded } => {
                std::iter::once(kept).chain(discarded).collect()
            }
            Strategy::MergeReformulate { inputs, .. } | Strategy::GroupUnderGeneral { inputs, .. } => {
                inputs.iter().collect()
            }
            Strategy::SplitIntoSeveral { input, .. } => vec![input],
        }
    }

    fn new_heuristics(&self) -> Vec<&Heuristic> {
        match self {
            Strategy::KeepOneDiscardRest { .. } => Vec::new(),
            Strategy::MergeReformulate { new_heuristic, .. }
            | Strategy::GroupUnderGeneral { new_heuristic, .. } => vec![new_heuristic],
            Strategy::SplitIntoSeveral { new_heuristics, .. } => new_heuristics.iter().collect(),
        }
    }
}

/// One logged normalization step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationAction {
    #[serde(flatten)]
    pub strategy: Strategy,
    pub rationale: String,
    pub resolves: ConflictId,
}

impl NormalizationAction {
    /// Every heuristic id the action mentions, including created ones.
    pub fn referenced_ids(&self) -> Vec<&HeuristicId> {
        let mut ids = self.strategy.existing_ids();
        ids.extend(self.strategy.new_heuristics().into_iter().map(|h| &h.id));
        ids
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalizationError {
    #[error("unknown heuristic {0}")]
    UnknownId(HeuristicId),
    #[error("heuristic {0} is already discarded")]
    AlreadyDiscarded(HeuristicId),
    #[error("conflict #{0} does not exist or is already resolved")]
    StaleConflict(ConflictId),
    #[error("heuristic id {0} is already in use")]
    IdCollision(HeuristicId),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid conflict: {0}")]
    InvalidConflict(String),
    #[error("open conflicts remain: {0:?}")]
    OpenConflicts(Vec<ConflictId>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationStatus {
    pub normalized: bool,
    pub open_conflicts: Vec<ConflictId>,
}

pub fn is_resolved(catalog: &HeuristicCatalog, conflict: ConflictId) -> bool {
    catalog.actions.iter().any(|a| a.resolves == conflict)
}

/// Records a new conflict among live heuristics and returns its id.
pub fn declare_conflict(
    catalog: &HeuristicCatalog,
    kind: ConflictKind,
    members: Vec<HeuristicId>,
    note: impl Into<String>,
) -> Result<(HeuristicCatalog, ConflictId), NormalizationError> {
    for member in &members {
        let h = catalog
            .get(member)
            .ok_or_else(|| NormalizationError::UnknownId(member.clone()))?;
        if !h.is_live() {
            return Err(NormalizationError::AlreadyDiscarded(member.clone()));
        }
    }
    let id = ConflictId(catalog.conflicts.iter().map(|c| c.id.0).max().unwrap_or(0) + 1);
    let conflict = ConflictNote {
        id,
        kind,
        members,
        note: note.into(),
    };
    if let Some(rule) = conflict.arity_violation() {
        return Err(NormalizationError::InvalidConflict(rule));
    }
    let mut next = catalog.clone();
    next.conflicts.push(conflict);
    Ok((next, id))
}

/// Applies one action, returning a new catalog. On error the input is
/// untouched, so callers can keep using it.
pub fn apply_action(
    catalog: &HeuristicCatalog,
    action: &NormalizationAction,
) -> Result<HeuristicCatalog, NormalizationError> {
    let conflict = catalog
        .conflicts
        .iter()
        .find(|c| c.id == action.resolves)
        .filter(|c| !is_resolved(catalog, c.id))
        .ok_or(NormalizationError::StaleConflict(action.resolves))?;

    if action.rationale.trim().is_empty() {
        return Err(NormalizationError::InvalidAction("rationale must be nonempty".into()));
    }
    let strategy = &action.strategy;
    if strategy.resolves_kind() != conflict.kind {
        return Err(NormalizationError::InvalidAction(format!(
            "{} does not resolve a {} conflict",
            strategy.name(),
            conflict.kind
        )));
    }

    let existing = strategy.existing_ids();
    for id in &existing {
        let h = catalog
            .get(id)
            .ok_or_else(|| NormalizationError::UnknownId((*id).clone()))?;
        if !h.is_live() {
            return Err(NormalizationError::AlreadyDiscarded((*id).clone()));
        }
        if !conflict.members.contains(id) {
            return Err(NormalizationError::InvalidAction(format!(
                "{id} is not a member of conflict #{}",
                conflict.id
            )));
        }
    }
    let distinct: HashSet<_> = existing.iter().collect();
    if distinct.len() != existing.len() {
        return Err(NormalizationError::InvalidAction("inputs must be distinct".into()));
    }

    let mut fresh = HashSet::new();
    for h in strategy.new_heuristics() {
        if !h.id.is_new() {
            return Err(NormalizationError::InvalidAction(format!(
                "created heuristic {} must use the {} set",
                h.id,
                HeuristicId::NEW_SET
            )));
        }
        if catalog.contains(&h.id) || !fresh.insert(&h.id) {
            return Err(NormalizationError::IdCollision(h.id.clone()));
        }
        if h.name.trim().is_empty() || h.statement.trim().is_empty() {
            return Err(NormalizationError::InvalidAction(format!(
                "created heuristic {} needs a name and a statement",
                h.id
            )));
        }
    }

    let mut next = catalog.clone();
    match strategy {
        Strategy::KeepOneDiscardRest { kept, discarded } => {
            if discarded.is_empty() {
                return Err(NormalizationError::InvalidAction(
                    "keep_one_discard_rest must discard at least one heuristic".into(),
                ));
            }
            let h = next.get_mut(kept).expect("checked above");
            h.status = HeuristicStatus::Normalized;
            h.origin = Origin::KeptAfterDedup;
            discard(&mut next, discarded);
        }
        Strategy::MergeReformulate {
            inputs,
            new_heuristic,
        }
        | Strategy::GroupUnderGeneral {
            inputs,
            new_heuristic,
        } => {
            if inputs.len() < 2 {
                return Err(NormalizationError::InvalidAction(format!(
                    "{} requires ≥2 inputs",
                    strategy.name()
                )));
            }
            let expected = if matches!(strategy, Strategy::MergeReformulate { .. }) {
                Origin::MergedFrom(inputs.clone())
            } else {
                Origin::GeneralizedFrom(inputs.clone())
            };
            check_origin(new_heuristic, &expected)?;
            discard(&mut next, inputs);
            next.heuristics.push(created(new_heuristic));
        }
        Strategy::SplitIntoSeveral {
            input,
            new_heuristics,
        } => {
            if new_heuristics.len() < 2 {
                return Err(NormalizationError::InvalidAction(
                    "split_into_several must create ≥2 heuristics".into(),
                ));
            }
            for h in new_heuristics {
                check_origin(h, &Origin::SplitFrom(input.clone()))?;
            }
            discard(&mut next, std::slice::from_ref(input));
            next.heuristics.extend(new_heuristics.iter().map(created));
        }
    }
    next.actions.push(action.clone());
    Ok(next)
}

fn check_origin(h: &Heuristic, expected: &Origin) -> Result<(), NormalizationError> {
    if &h.origin != expected {
        return Err(NormalizationError::InvalidAction(format!(
            "created heuristic {} must have origin {:?}",
            h.id, expected
        )));
    }
    Ok(())
}

fn created(h: &Heuristic) -> Heuristic {
    Heuristic {
        status: HeuristicStatus::Normalized,
        ..h.clone()
    }
}

fn discard(catalog: &mut HeuristicCatalog, ids: &[HeuristicId]) {
    for id in ids {
        if let Some(h) = catalog.get_mut(id) {
            h.status = HeuristicStatus::Discarded;
        }
    }
}

pub fn check_normalized(catalog: &HeuristicCatalog) -> NormalizationStatus {
    let open_conflicts: Vec<ConflictId> = catalog
        .conflicts
        .iter()
        .map(|c| c.id)
        .filter(|id| !is_resolved(catalog, *id))
        .collect();
    NormalizationStatus {
        normalized: open_conflicts.is_empty(),
        open_conflicts,
    }
}

/// Certifies a conflict-free catalog: every remaining denormalized
/// heuristic becomes normalized.
pub fn promote_normalized(catalog: &HeuristicCatalog) -> Result<HeuristicCatalog, NormalizationError> {
    let status = check_normalized(catalog);
    if !status.normalized {
        return Err(NormalizationError::OpenConflicts(status.open_conflicts));
    }
    Ok(promote_untouched(catalog))
}

/// Promotion without the conflict check, used when replaying a catalog
/// that was certified earlier.
pub(crate) fn promote_untouched(catalog: &HeuristicCatalog) -> HeuristicCatalog {
    let mut next = catalog.clone();
    for h in &mut next.heuristics {
        if h.status == HeuristicStatus::Denormalized {
            h.status = HeuristicStatus::Normalized;
        }
    }
    next
}

/// Folds `actions` over `snapshot`. The snapshot's conflicts are replaced
/// by `conflicts`, since declarations are not part of the action log.
pub fn replay(
    snapshot: &HeuristicCatalog,
    conflicts: &[ConflictNote],
    actions: &[NormalizationAction],
) -> Result<HeuristicCatalog, NormalizationError> {
    let mut catalog = snapshot.clone();
    catalog.conflicts = conflicts.to_vec();
    for action in actions {
        catalog = apply_action(&catalog, action)?;
    }
    Ok(catalog)
}
