//! Refinement rules: which indicators fall below 1, what that may mean, and
//! which stages of the process are worth revisiting.
//!
//! Only four scenarios exist (uniqueness, dispersion, specificity and
//! severity), each triggered strictly by a value below 1. The stage numbers
//! attached to each hypothesis are an interpretation of the named cause:
//!
//! | cause                                        | stages  |
//! |----------------------------------------------|---------|
//! | heuristics not well adjusted to the domain   | 3, 4, 5 |
//! | explanations not understood by evaluators    | 6       |
//! | overlapping heuristics                       | 4       |
//! | overly specific heuristics                   | 5       |
//! | heuristics difficult to apply for evaluators | 6       |
//! | prioritization of domain heuristics          | 5       |
//! | experiment design / evaluator-group choice   | 7       |
//!
//! Causes about the examined application itself (mainly general problems,
//! too many or too few problems) map to no stage.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::indicators::{Indicator, IndicatorReport, Outcome, Unavailability};
use crate::model::PartitionCounts;
use crate::RateValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Phi,
    Delta,
    Epsilon,
    Lambda,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [Scenario::Phi, Scenario::Delta, Scenario::Epsilon, Scenario::Lambda];

    fn exact(self) -> Indicator {
        match self {
            Scenario::Phi => Indicator::Phi,
            Scenario::Delta => Indicator::Delta,
            Scenario::Epsilon => Indicator::Epsilon,
            Scenario::Lambda => Indicator::Lambda,
        }
    }

    fn approximation(self) -> Option<Indicator> {
        match self {
            Scenario::Phi => Some(Indicator::PhiStar),
            Scenario::Lambda => Some(Indicator::LambdaStar),
            Scenario::Delta | Scenario::Epsilon => None,
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Scenario::Phi => "the domain heuristics found fewer unique problems",
            Scenario::Delta => "problems are worse distributed over the domain heuristics than over the control",
            Scenario::Epsilon => "problems found with the control heuristics are more specific to the domain",
            Scenario::Lambda => "problems found with the control heuristics are more severe",
        }
    }

    fn hypotheses(self) -> Vec<Hypothesis> {
        let h = |cause: &str, stages: &[u8]| Hypothesis {
            cause: cause.to_string(),
            stages: stages.to_vec(),
        };
        match self {
            Scenario::Phi => vec![
                h("heuristics not well adjusted to the domain", &[3, 4, 5]),
                h("the examined application has mainly general problems", &[]),
                h("detailed explanations of the domain heuristics not understood by evaluators", &[6]),
            ],
            Scenario::Delta => vec![
                h("overlapping heuristics", &[4]),
                h("too many problems", &[]),
                h("overly specific heuristics", &[5]),
                h("lack of problems", &[]),
                h("heuristics difficult to apply for evaluators", &[6]),
            ],
            Scenario::Epsilon => vec![
                h("prioritization of the domain heuristics", &[5]),
                h("experiment design, e.g. selection of evaluator groups", &[7]),
            ],
            Scenario::Lambda => vec![h(
                "experiment design, in particular selection of evaluator groups",
                &[7],
            )],
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.exact().symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub cause: String,
    pub stages: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriggeredScenario {
    pub indicator: Scenario,
    /// The rate actually compared; an approximation when the exact rate was
    /// unavailable.
    pub source: Indicator,
    pub approximate: bool,
    pub value: RateValue,
    pub hypotheses: Vec<Hypothesis>,
    pub revisit_stages: Vec<u8>,
}

/// What was looked at for one scenario, triggered or not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicatorCheck {
    pub indicator: Scenario,
    pub source: Indicator,
    pub approximate: bool,
    pub value: Option<RateValue>,
    pub unavailable: Option<Unavailability>,
    pub components: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NoRefinementSignaled,
    RefinementSuggested,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementAdvice {
    pub case_study: String,
    pub counts: PartitionCounts,
    pub checks: Vec<IndicatorCheck>,
    pub triggered: Vec<TriggeredScenario>,
    pub verdict: Verdict,
}

impl RefinementAdvice {
    /// Union of the stages suggested by every triggered scenario.
    pub fn revisit_stages(&self) -> BTreeSet<u8> {
        self.triggered
            .iter()
            .flat_map(|t| t.revisit_stages.iter().copied())
            .collect()
    }

    pub fn render(&self) -> String {
        let c = &self.counts;
        let mut out = format!(
            "case: {}\nverdict: {}\ncounts: total={} |P*|={} |P_D|={} |P_C|={} |P*_D|={} |P*_C|={}\n",
            self.case_study,
            match self.verdict {
                Verdict::NoRefinementSignaled => "no refinement signaled",
                Verdict::RefinementSuggested => "refinement suggested",
            },
            c.total,
            c.common,
            c.domain_only,
            c.control_only,
            c.domain_side,
            c.control_side,
        );
        out.push_str("indicator\tvalue\tcomponents\n");
        for check in &self.checks {
            let value = match (&check.value, &check.unavailable) {
                (Some(v), _) => {
                    let approx = if check.approximate { " (approximate)" } else { "" };
                    format!("{}{approx}", v.to_decimal_string(4))
                }
                (None, Some(reason)) => format!("unavailable: {reason}"),
                (None, None) => "unavailable".to_string(),
            };
            out.push_str(&format!("{}\t{value}\t{}\n", check.source.symbol(), check.components));
        }
        if !self.triggered.is_empty() {
            out.push_str("\ntriggered\tvalue\thypotheses\tstages\n");
            for t in &self.triggered {
                let causes: Vec<&str> = t.hypotheses.iter().map(|h| h.cause.as_str()).collect();
                let stages: Vec<String> = t.revisit_stages.iter().map(u8::to_string).collect();
                let approx = if t.approximate { " (approximate)" } else { "" };
                out.push_str(&format!(
                    "{}\t{}{approx}\t{}\t{}\n",
                    t.source.symbol(),
                    t.value.to_decimal_string(4),
                    causes.join("; "),
                    stages.join(",")
                ));
            }
        }
        out
    }
}

/// Applies the four refinement rules to a report.
pub fn advise(report: &IndicatorReport) -> RefinementAdvice {
    let mut checks = Vec::with_capacity(Scenario::ALL.len());
    let mut triggered = Vec::new();
    for scenario in Scenario::ALL {
        let exact = scenario.exact();
        let (source, outcome) = match (report.outcome(exact), scenario.approximation()) {
            (Outcome::Unavailable { .. }, Some(approx)) if report.outcome(approx).is_available() => {
                (approx, report.outcome(approx))
            }
            (outcome, _) => (exact, outcome),
        };
        let approximate = source != exact;
        checks.push(IndicatorCheck {
            indicator: scenario,
            source,
            approximate,
            value: outcome.value(),
            unavailable: outcome.reason().cloned(),
            components: report.components(source),
        });
        if let Some(value) = outcome.value() {
            if value.cmp_one() == Ordering::Less {
                let hypotheses = scenario.hypotheses();
                let revisit_stages: BTreeSet<u8> =
                    hypotheses.iter().flat_map(|h| h.stages.iter().copied()).collect();
                triggered.push(TriggeredScenario {
                    indicator: scenario,
                    source,
                    approximate,
                    value,
                    hypotheses,
                    revisit_stages: revisit_stages.into_iter().collect(),
                });
            }
        }
    }
    let verdict = if triggered.is_empty() {
        Verdict::NoRefinementSignaled
    } else {
        Verdict::RefinementSuggested
    };
    RefinementAdvice {
        case_study: report.case_study.clone(),
        counts: report.counts,
        checks,
        triggered,
        verdict,
    }
}
