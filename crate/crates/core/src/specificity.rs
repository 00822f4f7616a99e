//! Global and final specificity indices and the ranked specificity matrix.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::{
    DimensionKind, DomainProfile, HeuristicCatalog, HeuristicId, HeuristicStatus, SpecificityScore,
};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecificityError {
    #[error("{heuristic} has no {kind} score for {missing:?}")]
    IncompleteRow {
        heuristic: HeuristicId,
        kind: DimensionKind,
        missing: Vec<String>,
    },
    #[error("{heuristic} scores unknown {kind} items {unknown:?}")]
    UnknownItems {
        heuristic: HeuristicId,
        kind: DimensionKind,
        unknown: Vec<String>,
    },
    #[error("GSI {value} is outside [0, 4]")]
    OutOfRangeGsi { value: Rational },
    #[error("missing GSI rows: {}", format_gaps(.0))]
    MissingGsiRow(Vec<(HeuristicId, DimensionKind)>),
    #[error("duplicate GSI row for {0} / {1}")]
    DuplicateGsiRow(HeuristicId, DimensionKind),
    #[error("{0}")]
    Row(Box<SpecificityError>),
}

fn format_gaps(gaps: &[(HeuristicId, DimensionKind)]) -> String {
    gaps.iter()
        .map(|(h, k)| format!("{h}/{k}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// One heuristic's scores against every item of one dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GsiTable {
    pub heuristic: HeuristicId,
    pub kind: DimensionKind,
    pub scores: BTreeMap<String, SpecificityScore>,
}

impl GsiTable {
    fn score_for(&self, label: &str) -> Option<SpecificityScore> {
        self.scores
            .iter()
            .find(|(l, _)| l.eq_ignore_ascii_case(label))
            .map(|(_, s)| *s)
    }
}

/// Mean of the row, after checking that it covers exactly the profile's
/// items for the table's dimension (labels compared ignoring case).
pub fn compute_gsi(table: &GsiTable, profile: &DomainProfile) -> Result<Rational, SpecificityError> {
    let items: Vec<&str> = profile.items_of(table.kind).map(|i| i.label.as_str()).collect();
    let missing: Vec<String> = items
        .iter()
        .filter(|label| table.score_for(label).is_none())
        .map(|label| label.to_string())
        .collect();
    if !missing.is_empty() || items.is_empty() {
        return Err(SpecificityError::IncompleteRow {
            heuristic: table.heuristic.clone(),
            kind: table.kind,
            missing,
        });
    }
    let unknown: Vec<String> = table
        .scores
        .keys()
        .filter(|label| !items.iter().any(|i| i.eq_ignore_ascii_case(label)))
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(SpecificityError::UnknownItems {
            heuristic: table.heuristic.clone(),
            kind: table.kind,
            unknown,
        });
    }
    let mean = Rational::mean(items.iter().map(|label| {
        table
            .score_for(label)
            .expect("coverage checked above")
            .as_rational()
    }));
    Ok(mean.expect("at least one item"))
}

/// The four per-dimension GSI values of a heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GsiVector {
    pub uc: Rational,
    pub pd: Rational,
    pub ld: Rational,
    pub up: Rational,
}

impl GsiVector {
    pub fn new(uc: Rational, pd: Rational, ld: Rational, up: Rational) -> Self {
        GsiVector { uc, pd, ld, up }
    }

    pub fn get(&self, kind: DimensionKind) -> Rational {
        match kind {
            DimensionKind::UC => self.uc,
            DimensionKind::PD => self.pd,
            DimensionKind::LD => self.ld,
            DimensionKind::UP => self.up,
        }
    }

    pub fn sum(&self) -> Rational {
        self.uc + self.pd + self.ld + self.up
    }
}

/// `FSI = 4 · ISI · ΣGSI / 64`, which lies in `[0, 4]`.
pub fn compute_fsi(isi: SpecificityScore, gsi: &GsiVector) -> Result<Rational, SpecificityError> {
    let max = Rational::from_integer(4);
    for kind in DimensionKind::ALL {
        let value = gsi.get(kind);
        if value.is_negative() || value > max {
            return Err(SpecificityError::OutOfRangeGsi { value });
        }
    }
    Ok(Rational::from_integer(4) * isi.as_rational() * gsi.sum() / Rational::from_integer(64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub heuristic: HeuristicId,
    pub isi: SpecificityScore,
    pub gsi_uc: Rational,
    pub gsi_pd: Rational,
    pub gsi_ld: Rational,
    pub gsi_up: Rational,
    pub fsi: Rational,
}

impl MatrixRow {
    pub fn new(heuristic: HeuristicId, isi: SpecificityScore, gsi: GsiVector) -> Result<Self, SpecificityError> {
        let fsi = compute_fsi(isi, &gsi)?;
        Ok(MatrixRow {
            heuristic,
            isi,
            gsi_uc: gsi.uc,
            gsi_pd: gsi.pd,
            gsi_ld: gsi.ld,
            gsi_up: gsi.up,
            fsi,
        })
    }

    pub fn gsi(&self) -> GsiVector {
        GsiVector::new(self.gsi_uc, self.gsi_pd, self.gsi_ld, self.gsi_up)
    }
}

/// Ranking order: FSI descending, then ISI descending, then id ascending.
pub fn rank_order(a: &MatrixRow, b: &MatrixRow) -> Ordering {
    b.fsi
        .cmp(&a.fsi)
        .then_with(|| b.isi.cmp(&a.isi))
        .then_with(|| a.heuristic.cmp(&b.heuristic))
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SpecificityMatrix {
    pub rows: Vec<MatrixRow>,
}

impl SpecificityMatrix {
    /// Sorts `rows` into ranking order.
    pub fn from_rows(mut rows: Vec<MatrixRow>) -> Self {
        rows.sort_by(rank_order);
        SpecificityMatrix { rows }
    }

    pub fn fsi_of(&self, id: &HeuristicId) -> Option<Rational> {
        self.rows.iter().find(|r| &r.heuristic == id).map(|r| r.fsi)
    }

    /// Plain-text table with GSI columns in UC, PD, LD, UP order.
    pub fn render(&self) -> String {
        let mut out = String::from("heuristic\tISI\tGSI_UC\tGSI_PD\tGSI_LD\tGSI_UP\tFSI\n");
        for row in &self.rows {
            let cols: Vec<String> = DimensionKind::MATRIX_ORDER
                .iter()
                .map(|k| row.gsi().get(*k).to_decimal_string(4))
                .collect();
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                row.heuristic,
                row.isi,
                cols.join("\t"),
                row.fsi.to_decimal_string(4)
            ));
        }
        out
    }
}

/// Builds one row per normalized (or already selected) heuristic. Tables
/// for heuristics outside that set are ignored.
pub fn build_matrix(
    catalog: &HeuristicCatalog,
    tables: &[GsiTable],
    profile: &DomainProfile,
) -> Result<SpecificityMatrix, SpecificityError> {
    let candidates: Vec<_> = catalog
        .heuristics
        .iter()
        .filter(|h| matches!(h.status, HeuristicStatus::Normalized | HeuristicStatus::Selected))
        .collect();
    let wanted: BTreeSet<&HeuristicId> = candidates.iter().map(|h| &h.id).collect();

    let mut by_key: BTreeMap<(&HeuristicId, DimensionKind), &GsiTable> = BTreeMap::new();
    for table in tables.iter().filter(|t| wanted.contains(&t.heuristic)) {
        if by_key.insert((&table.heuristic, table.kind), table).is_some() {
            return Err(SpecificityError::DuplicateGsiRow(table.heuristic.clone(), table.kind));
        }
    }

    let gaps: Vec<(HeuristicId, DimensionKind)> = candidates
        .iter()
        .flat_map(|h| DimensionKind::MATRIX_ORDER.iter().map(move |k| (&h.id, *k)))
        .filter(|key| !by_key.contains_key(key))
        .map(|(id, k)| (id.clone(), k))
        .collect();
    if !gaps.is_empty() {
        return Err(SpecificityError::MissingGsiRow(gaps));
    }

    let mut rows = Vec::with_capacity(candidates.len());
    for h in candidates {
        let gsi = |kind| {
            compute_gsi(by_key[&(&h.id, kind)], profile)
                .map_err(|e| SpecificityError::Row(Box::new(e)))
        };
        let vector = GsiVector::new(
            gsi(DimensionKind::UC)?,
            gsi(DimensionKind::PD)?,
            gsi(DimensionKind::LD)?,
            gsi(DimensionKind::UP)?,
        );
        rows.push(MatrixRow::new(h.id.clone(), h.isi, vector)?);
    }
    Ok(SpecificityMatrix::from_rows(rows))
}

/// Ids of rows with `fsi >= threshold`, in matrix order.
pub fn select_heuristics(matrix: &SpecificityMatrix, threshold: Rational) -> Vec<HeuristicId> {
    matrix
        .rows
        .iter()
        .filter(|r| r.fsi >= threshold)
        .map(|r| r.heuristic.clone())
        .collect()
}
