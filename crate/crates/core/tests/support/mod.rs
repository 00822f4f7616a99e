//! Shared test helpers: an independent brute-force oracle, the F1 fixture
//! project, and random data generators.
//!
//! The oracle recomputes every indicator from raw records with plain
//! `Ratio<i64>` arithmetic and straight loops. It deliberately uses no
//! engine function, so agreement is evidence rather than tautology.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use heurbench::model::{
    default_control_heuristics, Classification, DimensionKind, DomainProfile, EvaluationDataset,
    Heuristic, HeuristicCatalog, HeuristicId, HeuristicStatus, Origin, ProblemRecord, Severity,
    SpecificityScore,
};
use heurbench::normalization::{
    apply_action, declare_conflict, replay, ConflictId, ConflictKind, NormalizationAction, Strategy,
};
use heurbench::specificity::{GsiTable, GsiVector, MatrixRow, SpecificityMatrix};
use heurbench::template::{ExampleKind, HeuristicTemplate, TemplateExample};
use heurbench::workbench::{read_heuristics, read_problems, ProjectState, Stage, StageArtifacts};
use heurbench::{RateValue, Rational};
use num_rational::Ratio;
use proptest::prelude::*;
use proptest::strategy::Strategy as PropStrategy;

pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn to_q(r: Rational) -> Q {
    Q::new(r.numerator(), r.denominator())
}

// ---------------------------------------------------------------- oracle

/// A problem as plain values.
#[derive(Debug, Clone)]
pub struct RawProblem {
    pub class: &'static str,
    pub domain: Option<String>,
    pub control: Option<String>,
    pub severity: i64,
    pub specificity: Option<i64>,
}

pub fn raw(p: &ProblemRecord) -> RawProblem {
    RawProblem {
        class: match p.classification {
            Classification::Common => "common",
            Classification::DomainOnly => "domain_only",
            Classification::ControlOnly => "control_only",
        },
        domain: p.domain_attribution.as_ref().map(|h| h.to_string()),
        control: p.control_attribution.clone(),
        severity: i64::from(p.severity.value()),
        specificity: p.control_specificity.map(|s| i64::from(s.value())),
    }
}

/// Oracle FSI: `4 * isi * sum(gsi) / 64`.
pub fn oracle_fsi(isi: i64, gsi: [Q; 4]) -> Q {
    let mut sum = q(0, 1);
    for g in gsi {
        sum += g;
    }
    q(4 * isi, 1) * sum / q(64, 1)
}

/// Oracle GSI: plain average of the scores.
pub fn oracle_gsi(scores: &[i64]) -> Q {
    let mut total = 0;
    for s in scores {
        total += s;
    }
    q(total, scores.len() as i64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    pub domain_only: i64,
    pub control_only: i64,
    pub common: i64,
    pub phi: Option<Q>,
    pub phi_star: Option<Q>,
    pub delta_domain_sq: Option<Q>,
    pub delta_control_sq: Option<Q>,
    /// `δ_P²`; the rate itself is its square root.
    pub delta_sq: Option<Q>,
    pub delta: Option<f64>,
    pub lambda: Option<Q>,
    pub lambda_star: Option<Q>,
    pub epsilon_domain: Option<Q>,
    pub epsilon_control: Option<Q>,
    pub epsilon: Option<Q>,
}

fn ratio_of(a: Option<Q>, b: Option<Q>) -> Option<Q> {
    match (a, b) {
        (Some(a), Some(b)) if b != q(0, 1) => Some(a / b),
        _ => None,
    }
}

fn mean_of(values: &[i64]) -> Option<Q> {
    if values.is_empty() {
        return None;
    }
    let mut total = 0;
    for v in values {
        total += v;
    }
    Some(q(total, values.len() as i64))
}

/// Population variance as `Σ (x - mean)² / n`.
fn variance_of(values: &[i64]) -> Option<Q> {
    let mean = mean_of(values)?;
    let mut total = q(0, 1);
    for &v in values {
        let d = q(v, 1) - mean;
        total += d * d;
    }
    Some(total / q(values.len() as i64, 1))
}

/// Brute-force recomputation of every indicator.
///
/// `fsi` maps domain heuristic ids (as text) to their FSI; a heuristic with
/// problems but no entry makes ε unavailable.
pub fn brute_force(
    problems: &[RawProblem],
    domain: &[String],
    control: &[String],
    fsi: &BTreeMap<String, Q>,
) -> Expected {
    let mut domain_only = Vec::new();
    let mut control_only = Vec::new();
    let mut common = Vec::new();
    for p in problems {
        match p.class {
            "domain_only" => domain_only.push(p),
            "control_only" => control_only.push(p),
            "common" => common.push(p),
            other => panic!("unknown class {other}"),
        }
    }
    let mut domain_side = domain_only.clone();
    domain_side.extend(common.iter().copied());
    let mut control_side = control_only.clone();
    control_side.extend(common.iter().copied());

    let count = |n: usize| q(n as i64, 1);
    let phi = (!control_only.is_empty()).then(|| count(domain_only.len()) / count(control_only.len()));
    let phi_star = (!control_side.is_empty()).then(|| count(domain_side.len()) / count(control_side.len()));

    let mut per_domain = Vec::new();
    for h in domain {
        let mut n = 0;
        for p in &domain_side {
            if p.domain.as_deref() == Some(h.as_str()) {
                n += 1;
            }
        }
        per_domain.push(n);
    }
    let mut per_control = Vec::new();
    for c in control {
        let mut n = 0;
        for p in &control_side {
            if p.control.as_deref() == Some(c.as_str()) {
                n += 1;
            }
        }
        per_control.push(n);
    }
    let var_d = variance_of(&per_domain);
    let var_c = variance_of(&per_control);
    let delta_sq = if domain_side.is_empty() || control_side.is_empty() {
        None
    } else {
        ratio_of(var_c, var_d)
    };

    let sev = |ps: &[&RawProblem]| mean_of(&ps.iter().map(|p| p.severity).collect::<Vec<_>>());
    let lambda = ratio_of(sev(&domain_only), sev(&control_only));
    let lambda_star = ratio_of(sev(&domain_side), sev(&control_side));

    let mut weighted = Some(q(0, 1));
    for (h, n) in domain.iter().zip(&per_domain) {
        if *n == 0 {
            continue;
        }
        weighted = match (weighted, fsi.get(h)) {
            (Some(w), Some(f)) => Some(w + q(*n, 1) * f),
            _ => None,
        };
    }
    let epsilon_domain = match weighted {
        Some(w) if !domain_side.is_empty() => Some(w / count(domain_side.len())),
        _ => None,
    };
    let specs: Option<Vec<i64>> = control_side.iter().map(|p| p.specificity).collect();
    let epsilon_control = specs.and_then(|s| mean_of(&s));
    let epsilon = if weighted.is_none() || control_side.iter().any(|p| p.specificity.is_none()) {
        None
    } else {
        ratio_of(epsilon_domain, epsilon_control)
    };

    Expected {
        domain_only: domain_only.len() as i64,
        control_only: control_only.len() as i64,
        common: common.len() as i64,
        phi,
        phi_star,
        delta_domain_sq: var_d,
        delta_control_sq: var_c,
        delta_sq,
        delta: delta_sq.map(|d| (*d.numer() as f64 / *d.denom() as f64).sqrt()),
        lambda,
        lambda_star,
        epsilon_domain,
        epsilon_control,
        epsilon,
    }
}

pub fn brute_force_dataset(dataset: &EvaluationDataset, fsi: &BTreeMap<String, Q>) -> Expected {
    let problems: Vec<RawProblem> = dataset.problems.iter().map(raw).collect();
    let domain: Vec<String> = dataset.domain_heuristics.iter().map(|h| h.to_string()).collect();
    let control: Vec<String> = dataset.control_heuristics.iter().map(|c| c.token.clone()).collect();
    brute_force(&problems, &domain, &control, fsi)
}

/// Exact value of an engine rate: `Exact(r)` as `r`, or the radicand of a
/// square root squared back, tagged so callers can tell them apart.
pub fn rate_squared(v: RateValue) -> Q {
    match v {
        RateValue::Exact(r) => to_q(r) * to_q(r),
        RateValue::SquareRoot(r) => to_q(r),
    }
}

pub fn rate_exact(v: RateValue) -> Option<Q> {
    v.as_exact().map(to_q)
}

// ---------------------------------------------------------------- F1 fixture

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn score(v: i64) -> SpecificityScore {
    SpecificityScore::new(v).unwrap()
}

pub fn hid(s: &str) -> HeuristicId {
    s.parse().unwrap()
}

pub const F1_ITEMS: [(DimensionKind, &str); 8] = [
    (DimensionKind::UC, "novice residents"),
    (DimensionKind::UC, "content creators"),
    (DimensionKind::PD, "head-mounted display"),
    (DimensionKind::PD, "desktop client"),
    (DimensionKind::LD, "persistent 3D space"),
    (DimensionKind::LD, "avatar embodiment"),
    (DimensionKind::UP, "social events"),
    (DimensionKind::UP, "virtual commerce"),
];

/// Per heuristic: ISI and the two item scores for UC, PD, LD, UP.
pub const F1_SCORES: [(&str, i64, [[i64; 2]; 4]); 5] = [
    ("S1.H1", 4, [[1, 3], [2, 2], [2, 2], [3, 1]]),
    ("S1.H2", 3, [[2, 2], [2, 2], [2, 2], [2, 2]]),
    ("S1.H3", 4, [[3, 3], [4, 2], [3, 3], [2, 4]]),
    ("S2.H1", 2, [[2, 2], [1, 3], [2, 2], [2, 2]]),
    ("S2.H2", 4, [[4, 2], [3, 3], [2, 2], [1, 3]]),
];

pub const F1_KINDS: [DimensionKind; 4] = [DimensionKind::UC, DimensionKind::PD, DimensionKind::LD, DimensionKind::UP];

pub fn f1_profile() -> DomainProfile {
    let mut p = DomainProfile::new("virtual worlds");
    p.keywords = vec!["virtual world".into(), "usability heuristics".into()];
    for (kind, label) in F1_ITEMS {
        p = p.with_item(kind, label, score(3)).unwrap();
    }
    p
}

pub fn f1_gsi_tables() -> Vec<GsiTable> {
    let mut tables = Vec::new();
    for (h, _, rows) in F1_SCORES {
        for (kind, pair) in F1_KINDS.iter().zip(rows) {
            let labels: Vec<&str> = F1_ITEMS.iter().filter(|(k, _)| k == kind).map(|(_, l)| *l).collect();
            tables.push(GsiTable {
                heuristic: hid(h),
                kind: *kind,
                scores: labels.iter().map(|l| l.to_string()).zip(pair.iter().map(|&s| score(s))).collect(),
            });
        }
    }
    tables
}

/// FSI per F1 heuristic, computed by the oracle from the raw scores.
pub fn f1_oracle_fsi() -> BTreeMap<String, Q> {
    F1_SCORES
        .iter()
        .map(|(h, isi, rows)| {
            let gsi = rows.map(|pair| oracle_gsi(&pair));
            (h.to_string(), oracle_fsi(*isi, gsi))
        })
        .collect()
}

pub fn f1_template(id: &HeuristicId) -> HeuristicTemplate {
    HeuristicTemplate {
        heuristic: id.clone(),
        name: format!("Heuristic {id}"),
        description: "What the heuristic asks of the virtual world.".into(),
        examples: vec![
            TemplateExample {
                kind: ExampleKind::Compliance,
                text: "The avatar shows a spinner while teleporting.".into(),
            },
            TemplateExample {
                kind: ExampleKind::NonCompliance,
                text: "The avatar freezes without feedback.".into(),
            },
        ],
        benefits: "Residents keep orientation.".into(),
        problems: "More visual clutter.".into(),
        application_context: "Any shared 3D environment.".into(),
        related_heuristics: vec![],
        checklist: vec!["Teleport and watch the avatar.".into(), "Note any silent wait.".into()],
    }
}

fn advance(state: ProjectState, stage: Stage) -> ProjectState {
    state.advance_stage(stage, StageArtifacts::default()).unwrap()
}

/// F1 project through Stage 5, from the fixture CSV.
pub fn f1_through_prioritization() -> ProjectState {
    let mut state = ProjectState::new(DomainProfile::new("virtual worlds"));
    for keyword in ["virtual world", "usability heuristics"] {
        state = state.add_keyword(keyword).unwrap();
    }
    for (kind, label) in F1_ITEMS {
        state = state.add_dimension_item(kind, label, score(3)).unwrap();
    }
    state = advance(state, Stage::DIMENSIONS);
    let text = std::fs::read_to_string(fixture("f1_heuristics.csv")).unwrap();
    state = state.import_heuristics(read_heuristics(text.as_bytes()).unwrap()).unwrap();
    state = advance(state, Stage::SEARCH);
    state = advance(state, Stage::SPECIFICITY);
    state = advance(state, Stage::NORMALIZATION);
    for table in f1_gsi_tables() {
        state = state.set_gsi(table).unwrap();
    }
    state = state.build_matrix(Some(Rational::ONE)).unwrap();
    advance(state, Stage::PRIORITIZATION)
}

pub fn f1_with_templates() -> ProjectState {
    let mut state = f1_through_prioritization();
    for id in state.selected() {
        state = state.set_template(f1_template(&id)).unwrap();
    }
    advance(state, Stage::DESCRIPTION)
}

pub fn f1_dataset(state: &ProjectState, file: &str) -> EvaluationDataset {
    let text = std::fs::read(fixture(file)).unwrap();
    read_problems(text.as_slice(), "F1", state.selected(), default_control_heuristics()).unwrap()
}

/// F1 project with Stage 7 complete.
pub fn f1_validated() -> ProjectState {
    let state = f1_with_templates();
    let dataset = f1_dataset(&state, "f1_problems.csv");
    advance(state.add_dataset(dataset).unwrap(), Stage::VALIDATION)
}

// ---------------------------------------------------------------- generators

#[derive(Debug, Clone)]
pub struct RandomCase {
    pub dataset: EvaluationDataset,
    pub matrix: SpecificityMatrix,
    /// Oracle FSI for heuristics present in the matrix.
    pub fsi: BTreeMap<String, Q>,
}

type ProblemSeed = (u8, usize, usize, i64, Option<i64>);
type FsiSeed = (bool, i64, [i64; 4]);

fn problem_seeds(max: usize) -> impl PropStrategy<Value = Vec<ProblemSeed>> {
    prop::collection::vec(
        (
            0u8..3,
            0usize..6,
            0usize..6,
            0i64..=4,
            prop::option::weighted(0.95, 0i64..=4),
        ),
        0..=max,
    )
}

pub fn problems_from_seeds(
    seeds: &[ProblemSeed],
    domain: &[HeuristicId],
    control: &[String],
) -> Vec<ProblemRecord> {
    seeds
        .iter()
        .enumerate()
        .map(|(i, &(class, d, c, sev, spec))| {
            let classification = match class {
                0 => Classification::Common,
                1 => Classification::DomainOnly,
                _ => Classification::ControlOnly,
            };
            ProblemRecord {
                id: format!("P{i}"),
                description: format!("problem {i}"),
                classification,
                domain_attribution: classification
                    .on_domain_side()
                    .then(|| domain[d % domain.len()].clone()),
                control_attribution: classification
                    .on_control_side()
                    .then(|| control[c % control.len()].clone()),
                severity: Severity::new(sev).unwrap(),
                control_specificity: if classification.on_control_side() {
                    spec.map(score)
                } else {
                    None
                },
            }
        })
        .collect()
}

/// Small random datasets: at most 20 problems and 6 heuristics per side.
pub fn arb_case() -> impl PropStrategy<Value = RandomCase> {
    (1usize..=6, 1usize..=6)
        .prop_flat_map(|(nd, nc)| {
            (
                Just(nd),
                Just(nc),
                problem_seeds(20),
                prop::collection::vec((prop::bool::weighted(0.95), 0i64..=4, [0i64..=16, 0i64..=16, 0i64..=16, 0i64..=16]), nd),
            )
        })
        .prop_map(|(nd, nc, seeds, fsi_seeds)| build_case(nd, nc, &seeds, &fsi_seeds))
}

fn build_case(nd: usize, nc: usize, seeds: &[ProblemSeed], fsi_seeds: &[FsiSeed]) -> RandomCase {
    let domain: Vec<HeuristicId> = (0..nd).map(|i| HeuristicId::new(format!("S{}", i % 2 + 1), i as u32 + 1).unwrap()).collect();
    let control: Vec<String> = (0..nc).map(|i| format!("N{}", i + 1)).collect();
    let problems = problems_from_seeds(seeds, &domain, &control);
    let mut rows = Vec::new();
    let mut fsi = BTreeMap::new();
    for (id, &(present, isi, quarters)) in domain.iter().zip(fsi_seeds) {
        if !present {
            continue;
        }
        let gsi_q = quarters.map(|n| q(n, 4));
        let gsi = GsiVector::new(
            Rational::new(quarters[0], 4),
            Rational::new(quarters[1], 4),
            Rational::new(quarters[2], 4),
            Rational::new(quarters[3], 4),
        );
        rows.push(MatrixRow::new(id.clone(), score(isi), gsi).unwrap());
        fsi.insert(id.to_string(), oracle_fsi(isi, gsi_q));
    }
    let labels = default_control_heuristics();
    RandomCase {
        dataset: EvaluationDataset {
            case_study: "random".into(),
            domain_heuristics: domain,
            control_heuristics: control
                .iter()
                .enumerate()
                .map(|(i, token)| heurbench::model::ControlHeuristic {
                    token: token.clone(),
                    label: labels[i].label.clone(),
                })
                .collect(),
            problems,
        },
        matrix: SpecificityMatrix::from_rows(rows),
        fsi,
    }
}

// ---------------------------------------------------------------- normalization sequences

/// A finite stream of choices drawn from random numbers.
pub struct Dice<'a> {
    values: &'a [u32],
    at: usize,
}

impl<'a> Dice<'a> {
    pub fn new(values: &'a [u32]) -> Self {
        Dice { values, at: 0 }
    }

    pub fn roll(&mut self, n: usize) -> usize {
        let v = self.values.get(self.at).copied().unwrap_or(0);
        self.at += 1;
        v as usize % n.max(1)
    }

    pub fn chance(&mut self, percent: usize) -> bool {
        self.roll(100) < percent
    }

    pub fn done(&self) -> bool {
        self.at >= self.values.len()
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SequenceStats {
    pub applied: usize,
    pub rejected: usize,
}

fn base_catalog(n: usize) -> HeuristicCatalog {
    HeuristicCatalog::new(
        (0..n)
            .map(|i| {
                let id = HeuristicId::new(format!("S{}", i % 3 + 1), (i / 3 + 1) as u32).unwrap();
                Heuristic::found(id, format!("heuristic {i}"), format!("statement {i}"), score((i % 5) as i64))
            })
            .collect(),
    )
}

fn new_heuristic(next: &mut u32, origin: Origin) -> Heuristic {
    *next += 1;
    Heuristic {
        origin,
        ..Heuristic::found(HeuristicId::new_heuristic(*next).unwrap(), "created", "created statement", score(2))
    }
}

/// Drives random declarations and actions, some deliberately invalid.
/// Checks that each rejected step leaves the catalog unchanged and that
/// replaying the final log from the snapshot reproduces the catalog.
pub fn run_normalization_sequence(values: &[u32]) -> Result<SequenceStats, String> {
    let mut dice = Dice::new(values);
    let snapshot = base_catalog(3 + dice.roll(6));
    let mut catalog = snapshot.clone();
    let mut next_new = 0u32;
    let mut stats = SequenceStats::default();
    while !dice.done() {
        let before = catalog.clone();
        let before_json = catalog.canonical_json();
        let ids: Vec<HeuristicId> = catalog.heuristics.iter().map(|h| h.id.clone()).collect();
        let outcome = if dice.roll(10) < 3 || catalog.conflicts.is_empty() {
            let kind = if dice.chance(50) { ConflictKind::Duplication } else { ConflictKind::Overlap };
            let size = 1 + dice.roll(3);
            let mut members: Vec<HeuristicId> = Vec::new();
            for _ in 0..size {
                let m = if dice.chance(5) { hid("S9.H9") } else { ids[dice.roll(ids.len())].clone() };
                if !members.contains(&m) || dice.chance(10) {
                    members.push(m);
                }
            }
            declare_conflict(&catalog, kind, members, "generated").map(|(c, _)| c)
        } else {
            let conflict = catalog.conflicts[dice.roll(catalog.conflicts.len())].clone();
            let resolves = if dice.chance(5) { ConflictId(999) } else { conflict.id };
            let mut members = conflict.members.clone();
            if dice.chance(8) {
                members.push(ids[dice.roll(ids.len())].clone());
            }
            let kind = if dice.chance(10) {
                match conflict.kind {
                    ConflictKind::Duplication => ConflictKind::Overlap,
                    ConflictKind::Overlap => ConflictKind::Duplication,
                }
            } else {
                conflict.kind
            };
            let strategy = match (kind, dice.chance(50)) {
                (ConflictKind::Duplication, true) => {
                    let kept = members[0].clone();
                    Strategy::KeepOneDiscardRest {
                        kept,
                        discarded: members[1..].to_vec(),
                    }
                }
                (ConflictKind::Duplication, false) => Strategy::MergeReformulate {
                    inputs: members.clone(),
                    new_heuristic: new_heuristic(&mut next_new, Origin::MergedFrom(members.clone())),
                },
                (ConflictKind::Overlap, true) if members.len() >= 2 => Strategy::GroupUnderGeneral {
                    inputs: members.clone(),
                    new_heuristic: new_heuristic(&mut next_new, Origin::GeneralizedFrom(members.clone())),
                },
                _ => {
                    let input = members[0].clone();
                    let count = 1 + dice.roll(3);
                    Strategy::SplitIntoSeveral {
                        input: input.clone(),
                        new_heuristics: (0..count)
                            .map(|_| new_heuristic(&mut next_new, Origin::SplitFrom(input.clone())))
                            .collect(),
                    }
                }
            };
            let mut action = NormalizationAction {
                strategy,
                rationale: if dice.chance(3) { " ".into() } else { "generated".into() },
                resolves,
            };
            if dice.chance(5) {
                if let Strategy::MergeReformulate { new_heuristic, .. } = &mut action.strategy {
                    new_heuristic.id = ids[0].clone();
                }
            }
            if dice.chance(5) {
                if let Strategy::SplitIntoSeveral { new_heuristics, .. } = &mut action.strategy {
                    if let Some(h) = new_heuristics.first_mut() {
                        h.origin = Origin::Found;
                    }
                }
            }
            apply_action(&catalog, &action)
        };
        match outcome {
            Ok(next) => {
                stats.applied += 1;
                catalog = next;
            }
            Err(_) => {
                stats.rejected += 1;
                if catalog != before || catalog.canonical_json() != before_json {
                    return Err("a rejected step changed the catalog".into());
                }
            }
        }
    }
    let rebuilt = replay(&snapshot, &catalog.conflicts, &catalog.actions).map_err(|e| format!("replay failed: {e}"))?;
    if rebuilt.canonical_json() != catalog.canonical_json() {
        return Err("replay does not reproduce the catalog".into());
    }
    if catalog.heuristics.iter().any(|h| h.status == HeuristicStatus::Selected) {
        return Err("normalization must never select".into());
    }
    Ok(stats)
}

// ---------------------------------------------------------------- project walks

#[derive(Debug, Clone)]
pub struct WalkPlan {
    pub exit_early: bool,
    pub threshold_quarters: i64,
    pub problems: Vec<ProblemSeed>,
    pub loop_target: Option<u8>,
    pub finish: bool,
}

pub fn arb_walk() -> impl PropStrategy<Value = WalkPlan> {
    (
        prop::bool::weighted(0.15),
        prop::sample::select(vec![0i64, 4, 6, 8]),
        problem_seeds(15),
        prop::option::of(1u8..=7),
        any::<bool>(),
    )
        .prop_map(|(exit_early, threshold_quarters, problems, loop_target, finish)| WalkPlan {
            exit_early,
            threshold_quarters,
            problems,
            loop_target,
            finish,
        })
}

/// Walks a project as far as the plan goes and returns every state seen.
pub fn walk(plan: &WalkPlan) -> Vec<ProjectState> {
    let mut states = vec![ProjectState::new(DomainProfile::new("virtual worlds"))];
    let push = |states: &mut Vec<ProjectState>, s: ProjectState| {
        states.push(s.clone());
        s
    };
    let mut s = states[0].add_keyword("virtual world").unwrap();
    for (kind, label) in F1_ITEMS {
        s = s.add_dimension_item(kind, label, score(3)).unwrap();
    }
    s = push(&mut states, s);
    s = push(&mut states, advance(s, Stage::DIMENSIONS));
    let text = std::fs::read_to_string(fixture("f1_heuristics.csv")).unwrap();
    let mut found = read_heuristics(text.as_bytes()).unwrap();
    found.push(Heuristic::found(hid("S3.H1"), "Avatar state", "Show the avatar's state.", score(3)));
    s = push(&mut states, s.import_heuristics(found).unwrap());
    if plan.exit_early {
        states.push(s.advance_stage(Stage::SEARCH, StageArtifacts { exit_early: true }).unwrap());
        return states;
    }
    s = push(&mut states, advance(s, Stage::SEARCH));
    s = push(&mut states, s.set_isi(&hid("S3.H1"), score(2)).unwrap());
    s = push(&mut states, advance(s, Stage::SPECIFICITY));
    let (next, c) = s
        .declare_conflict(ConflictKind::Duplication, vec![hid("S1.H1"), hid("S3.H1")], "same concern")
        .unwrap();
    s = push(&mut states, next);
    s = push(&mut states, s.set_isi(&hid("S1.H1"), score(4)).unwrap());
    let keep = NormalizationAction {
        strategy: Strategy::KeepOneDiscardRest {
            kept: hid("S1.H1"),
            discarded: vec![hid("S3.H1")],
        },
        rationale: "S1.H1 is better worded".into(),
        resolves: c,
    };
    s = push(&mut states, s.apply_normalization(&keep).unwrap());
    s = push(&mut states, advance(s, Stage::NORMALIZATION));
    for table in f1_gsi_tables() {
        s = s.set_gsi(table).unwrap();
    }
    s = push(&mut states, s);
    s = push(&mut states, s.build_matrix(Some(Rational::new(plan.threshold_quarters, 4))).unwrap());
    s = push(&mut states, advance(s, Stage::PRIORITIZATION));
    for id in s.selected() {
        s = s.set_template(f1_template(&id)).unwrap();
    }
    s = push(&mut states, advance(s, Stage::DESCRIPTION));
    let control: Vec<String> = default_control_heuristics().into_iter().map(|c| c.token).collect();
    let dataset = EvaluationDataset {
        case_study: "generated".into(),
        domain_heuristics: s.selected(),
        control_heuristics: default_control_heuristics(),
        problems: problems_from_seeds(&plan.problems, &s.selected(), &control),
    };
    s = push(&mut states, s.add_dataset(dataset).unwrap());
    if s.selected().len() == 5 {
        let f1 = f1_dataset(&s, "f1_problems.csv");
        s = push(&mut states, s.add_dataset(f1).unwrap());
    }
    s = push(&mut states, advance(s, Stage::VALIDATION));
    if let Some(target) = plan.loop_target {
        push(&mut states, s.loop_back(target, "generated loop-back", true).unwrap());
    } else if plan.finish {
        push(&mut states, advance(s, Stage::REFINEMENT));
    }
    states
}
