//! Quality indicators comparing domain heuristics against control heuristics.
//!
//! Every rate is oriented so that a value above 1 favours the domain
//! heuristics. A rate that cannot be computed from the available data is
//! reported as [`Outcome::Unavailable`] with a reason code rather than as an
//! error, so partial evaluations still yield whatever indicators they can.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{
    partition_problems, EvaluationDataset, HeuristicId, PartitionCounts, ProblemPartition,
    ProblemRecord,
};
use crate::specificity::SpecificityMatrix;
use crate::{RateValue, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "code", rename_all = "snake_case")]
pub enum Unavailability {
    NoControlOnlyProblems,
    NoDomainOnlyProblems,
    NoDomainSideProblems,
    NoControlSideProblems,
    ZeroDomainDispersion,
    ZeroControlSeverity,
    ZeroControlSpecificity,
    MissingFsi { heuristic: HeuristicId },
    MissingSpecificity { problem: String },
}

impl fmt::Display for Unavailability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unavailability::NoControlOnlyProblems => f.write_str("no control-only problems"),
            Unavailability::NoDomainOnlyProblems => f.write_str("no domain-only problems"),
            Unavailability::NoDomainSideProblems => f.write_str("no problems found with the domain heuristics"),
            Unavailability::NoControlSideProblems => f.write_str("no problems found with the control heuristics"),
            Unavailability::ZeroDomainDispersion => f.write_str("zero domain dispersion"),
            Unavailability::ZeroControlSeverity => f.write_str("control-side mean severity is zero"),
            Unavailability::ZeroControlSpecificity => f.write_str("control-side mean specificity is zero"),
            Unavailability::MissingFsi { heuristic } => write!(f, "no FSI for {heuristic}"),
            Unavailability::MissingSpecificity { problem } => {
                write!(f, "problem {problem} has no control specificity")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IndicatorError {
    #[error("domain heuristic {0} has no FSI in the specificity matrix")]
    MissingFsi(HeuristicId),
    #[error("problem {0} has no control specificity")]
    MissingSpecificity(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Available { value: RateValue },
    Unavailable { reason: Unavailability },
}

impl Outcome {
    pub fn value(&self) -> Option<RateValue> {
        match self {
            Outcome::Available { value } => Some(*value),
            Outcome::Unavailable { .. } => None,
        }
    }

    pub fn reason(&self) -> Option<&Unavailability> {
        match self {
            Outcome::Available { .. } => None,
            Outcome::Unavailable { reason } => Some(reason),
        }
    }

    pub fn is_available(&self) -> bool {
        matches!(self, Outcome::Available { .. })
    }

    fn exact(value: Rational) -> Outcome {
        Outcome::Available {
            value: RateValue::Exact(value),
        }
    }

    fn unavailable(reason: Unavailability) -> Outcome {
        Outcome::Unavailable { reason }
    }
}

/// A rate of problem counts: `domain / control`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRate {
    pub domain: u32,
    pub control: u32,
    pub outcome: Outcome,
}

/// `δ_P = δ_C / δ_D`, with both standard deviations as components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DispersionRate {
    pub delta_domain: Option<RateValue>,
    pub delta_control: Option<RateValue>,
    pub outcome: Outcome,
}

/// A rate of two averages, domain over control.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeanRate {
    pub domain: Option<Rational>,
    pub control: Option<Rational>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicCount {
    pub heuristic: String,
    pub problems: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Indicator {
    Phi,
    PhiStar,
    Delta,
    Lambda,
    LambdaStar,
    Epsilon,
}

impl Indicator {
    /// Export order.
    pub const ALL: [Indicator; 6] = [
        Indicator::Phi,
        Indicator::PhiStar,
        Indicator::Delta,
        Indicator::Lambda,
        Indicator::LambdaStar,
        Indicator::Epsilon,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Indicator::Phi => "phi",
            Indicator::PhiStar => "phi_star",
            Indicator::Delta => "delta",
            Indicator::Lambda => "lambda",
            Indicator::LambdaStar => "lambda_star",
            Indicator::Epsilon => "epsilon",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Indicator::Phi => "Φ_P",
            Indicator::PhiStar => "Φ*_P",
            Indicator::Delta => "δ_P",
            Indicator::Lambda => "λ_P",
            Indicator::LambdaStar => "λ*_P",
            Indicator::Epsilon => "ε_P",
        }
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicatorReport {
    pub case_study: String,
    pub counts: PartitionCounts,
    /// Problems in `P*_D` per domain heuristic, zeros included.
    pub domain_problem_counts: Vec<HeuristicCount>,
    /// Problems in `P*_C` per control heuristic, zeros included.
    pub control_problem_counts: Vec<HeuristicCount>,
    pub phi: CountRate,
    pub phi_star: CountRate,
    pub delta: DispersionRate,
    pub lambda: MeanRate,
    pub lambda_star: MeanRate,
    pub epsilon: MeanRate,
}

impl IndicatorReport {
    pub fn outcome(&self, indicator: Indicator) -> &Outcome {
        match indicator {
            Indicator::Phi => &self.phi.outcome,
            Indicator::PhiStar => &self.phi_star.outcome,
            Indicator::Delta => &self.delta.outcome,
            Indicator::Lambda => &self.lambda.outcome,
            Indicator::LambdaStar => &self.lambda_star.outcome,
            Indicator::Epsilon => &self.epsilon.outcome,
        }
    }

    /// Human-readable components behind an indicator.
    pub fn components(&self, indicator: Indicator) -> String {
        let opt = |v: Option<Rational>| v.map_or("n/a".to_string(), |r| r.to_decimal_string(4));
        let c = &self.counts;
        match indicator {
            Indicator::Phi => format!("|P_D|={} |P_C|={}", c.domain_only, c.control_only),
            Indicator::PhiStar => format!("|P*_D|={} |P*_C|={}", c.domain_side, c.control_side),
            Indicator::Delta => {
                let fmt = |v: Option<RateValue>| v.map_or("n/a".to_string(), |r| r.to_decimal_string(4));
                format!(
                    "δ_C={} δ_D={}",
                    fmt(self.delta.delta_control),
                    fmt(self.delta.delta_domain)
                )
            }
            Indicator::Lambda => format!("λ_D={} λ_C={}", opt(self.lambda.domain), opt(self.lambda.control)),
            Indicator::LambdaStar => format!(
                "λ*_D={} λ*_C={}",
                opt(self.lambda_star.domain),
                opt(self.lambda_star.control)
            ),
            Indicator::Epsilon => format!("ε_D={} ε_C={}", opt(self.epsilon.domain), opt(self.epsilon.control)),
        }
    }

    pub fn render(&self) -> String {
        let c = &self.counts;
        let mut out = format!(
            "case: {}\nproblems: total={} |P*|={} |P_D|={} |P_C|={} |P*_D|={} |P*_C|={}\n",
            self.case_study, c.total, c.common, c.domain_only, c.control_only, c.domain_side, c.control_side
        );
        for indicator in Indicator::ALL {
            let value = match self.outcome(indicator) {
                Outcome::Available { value } => format!("{} ({value})", value.to_decimal_string(4)),
                Outcome::Unavailable { reason } => format!("unavailable: {reason}"),
            };
            out.push_str(&format!(
                "{:<6} {value}  [{}]\n",
                indicator.symbol(),
                self.components(indicator)
            ));
        }
        out
    }
}

fn count_rate(domain: usize, control: usize, missing_divisor: Unavailability) -> CountRate {
    let outcome = if control == 0 {
        Outcome::unavailable(missing_divisor)
    } else {
        Outcome::exact(Rational::from(domain) / Rational::from(control))
    };
    CountRate {
        domain: domain as u32,
        control: control as u32,
        outcome,
    }
}

/// `Φ_P = |P_D| / |P_C|`.
pub fn rate_unique(partition: &ProblemPartition<'_>) -> CountRate {
    count_rate(
        partition.domain_only.len(),
        partition.control_only.len(),
        Unavailability::NoControlOnlyProblems,
    )
}

/// `Φ*_P = |P*_D| / |P*_C|`.
pub fn rate_unique_star(partition: &ProblemPartition<'_>) -> CountRate {
    count_rate(
        partition.domain_side().len(),
        partition.control_side().len(),
        Unavailability::NoControlSideProblems,
    )
}

fn population_variance(counts: &[u32]) -> Option<Rational> {
    let mean = Rational::mean(counts.iter().map(|&c| Rational::from(c)))?;
    let mean_sq = Rational::mean(counts.iter().map(|&c| Rational::from(c) * Rational::from(c)))?;
    Some(mean_sq - mean * mean)
}

pub(crate) fn domain_counts(dataset: &EvaluationDataset) -> Vec<(HeuristicId, u32)> {
    let mut counts: BTreeMap<&HeuristicId, u32> =
        dataset.domain_heuristics.iter().map(|h| (h, 0)).collect();
    for p in dataset.problems.iter().filter(|p| p.classification.on_domain_side()) {
        if let Some(c) = p.domain_attribution.as_ref().and_then(|h| counts.get_mut(h)) {
            *c += 1;
        }
    }
    dataset
        .domain_heuristics
        .iter()
        .map(|h| (h.clone(), counts[h]))
        .collect()
}

pub(crate) fn control_counts(dataset: &EvaluationDataset) -> Vec<(String, u32)> {
    let mut counts: BTreeMap<&str, u32> = dataset
        .control_heuristics
        .iter()
        .map(|c| (c.token.as_str(), 0))
        .collect();
    for p in dataset.problems.iter().filter(|p| p.classification.on_control_side()) {
        if let Some(c) = p.control_attribution.as_deref().and_then(|t| counts.get_mut(t)) {
            *c += 1;
        }
    }
    dataset
        .control_heuristics
        .iter()
        .map(|c| (c.token.clone(), counts[c.token.as_str()]))
        .collect()
}

/// `δ_P = δ_C / δ_D`, where each δ is the population standard deviation of
/// the per-heuristic problem counts of that side, zero-count heuristics
/// included.
pub fn rate_dispersion(dataset: &EvaluationDataset) -> DispersionRate {
    let partition = partition_problems(dataset);
    let domain: Vec<u32> = domain_counts(dataset).into_iter().map(|(_, c)| c).collect();
    let control: Vec<u32> = control_counts(dataset).into_iter().map(|(_, c)| c).collect();
    let var_d = population_variance(&domain);
    let var_c = population_variance(&control);
    let outcome = if partition.domain_side().is_empty() {
        Outcome::unavailable(Unavailability::NoDomainSideProblems)
    } else if partition.control_side().is_empty() {
        Outcome::unavailable(Unavailability::NoControlSideProblems)
    } else {
        match (var_d, var_c) {
            (Some(d), Some(c)) if !d.is_zero() => Outcome::Available {
                value: RateValue::sqrt(c / d),
            },
            (Some(_), Some(_)) => Outcome::unavailable(Unavailability::ZeroDomainDispersion),
            (None, _) => Outcome::unavailable(Unavailability::NoDomainSideProblems),
            (_, None) => Outcome::unavailable(Unavailability::NoControlSideProblems),
        }
    };
    DispersionRate {
        delta_domain: var_d.map(RateValue::sqrt),
        delta_control: var_c.map(RateValue::sqrt),
        outcome,
    }
}

fn mean_severity(problems: &[&ProblemRecord]) -> Option<Rational> {
    Rational::mean(problems.iter().map(|p| p.severity.as_rational()))
}

fn mean_rate(
    domain: Option<Rational>,
    control: Option<Rational>,
    no_domain: Unavailability,
    no_control: Unavailability,
    zero_divisor: Unavailability,
) -> MeanRate {
    let outcome = match (domain, control) {
        (None, _) => Outcome::unavailable(no_domain),
        (_, None) => Outcome::unavailable(no_control),
        (Some(d), Some(c)) => match d.checked_div(c) {
            Some(v) => Outcome::exact(v),
            None => Outcome::unavailable(zero_divisor),
        },
    };
    MeanRate {
        domain,
        control,
        outcome,
    }
}

/// `λ_P` over the unique sets `P_D` and `P_C`.
pub fn rate_severity(partition: &ProblemPartition<'_>) -> MeanRate {
    mean_rate(
        mean_severity(&partition.domain_only),
        mean_severity(&partition.control_only),
        Unavailability::NoDomainOnlyProblems,
        Unavailability::NoControlOnlyProblems,
        Unavailability::ZeroControlSeverity,
    )
}

/// `λ*_P` over `P*_D` and `P*_C`.
pub fn rate_severity_star(partition: &ProblemPartition<'_>) -> MeanRate {
    mean_rate(
        mean_severity(&partition.domain_side()),
        mean_severity(&partition.control_side()),
        Unavailability::NoDomainSideProblems,
        Unavailability::NoControlSideProblems,
        Unavailability::ZeroControlSeverity,
    )
}

/// `ε_P = ε_D / ε_C`.
///
/// `ε_D` weights each domain heuristic's problem count in `P*_D` by its FSI;
/// `ε_C` averages the evaluator-assigned specificity over `P*_C`.
pub fn rate_specificity(
    dataset: &EvaluationDataset,
    matrix: &SpecificityMatrix,
) -> Result<MeanRate, IndicatorError> {
    let partition = partition_problems(dataset);
    let control_side = partition.control_side();
    let mut control_total = Rational::ZERO;
    for p in &control_side {
        let s = p
            .control_specificity
            .ok_or_else(|| IndicatorError::MissingSpecificity(p.id.clone()))?;
        control_total = control_total + s.as_rational();
    }
    let mut weighted = Rational::ZERO;
    for (heuristic, count) in domain_counts(dataset) {
        if count == 0 {
            continue;
        }
        let fsi = matrix
            .fsi_of(&heuristic)
            .ok_or(IndicatorError::MissingFsi(heuristic))?;
        weighted = weighted + Rational::from(count) * fsi;
    }
    let domain_side = partition.domain_side().len();
    let epsilon_d = (domain_side > 0).then(|| weighted / Rational::from(domain_side));
    let epsilon_c = (!control_side.is_empty()).then(|| control_total / Rational::from(control_side.len()));
    Ok(mean_rate(
        epsilon_d,
        epsilon_c,
        Unavailability::NoDomainSideProblems,
        Unavailability::NoControlSideProblems,
        Unavailability::ZeroControlSpecificity,
    ))
}

/// Assembles every indicator. Never fails: data problems surface as
/// unavailable rates.
pub fn build_report(dataset: &EvaluationDataset, matrix: &SpecificityMatrix) -> IndicatorReport {
    let partition = partition_problems(dataset);
    let epsilon = rate_specificity(dataset, matrix).unwrap_or_else(|err| {
        let reason = match err {
            IndicatorError::MissingFsi(heuristic) => Unavailability::MissingFsi { heuristic },
            IndicatorError::MissingSpecificity(problem) => Unavailability::MissingSpecificity { problem },
        };
        MeanRate {
            domain: None,
            control: None,
            outcome: Outcome::unavailable(reason),
        }
    });
    IndicatorReport {
        case_study: dataset.case_study.clone(),
        counts: partition.counts(),
        domain_problem_counts: domain_counts(dataset)
            .into_iter()
            .map(|(h, problems)| HeuristicCount {
                heuristic: h.to_string(),
                problems,
            })
            .collect(),
        control_problem_counts: control_counts(dataset)
            .into_iter()
            .map(|(heuristic, problems)| HeuristicCount { heuristic, problems })
            .collect(),
        phi: rate_unique(&partition),
        phi_star: rate_unique_star(&partition),
        delta: rate_dispersion(dataset),
        lambda: rate_severity(&partition),
        lambda_star: rate_severity_star(&partition),
        epsilon,
    }
}
