//! Coherency: sufficient conditions via levelings, causal order and unitarity, a direct test
//! against conditional probabilities, and tableaux as an independent enumeration of worlds.

mod graph;
mod leveling;
mod ordered;
mod semantic;
mod tableau;
mod unitary;

use std::fmt;

use crate::error::Result;
use crate::rational::Rational;
use crate::syntax::ground::{GPr, GroundProgram};
use crate::worlds::Model;

pub use graph::DependencyGraph;
pub use leveling::{check_leveling, find_leveling, InducedStructure, Leveling, NoLeveling};
pub use ordered::{causal_order_failures, OrderFailure};
pub use semantic::{semantic_coherency, PrCheck, SemanticReport};
pub use tableau::{build_tableau, ready_to_branch, TNode, Tableau};
pub use unitary::{check_scenario, scenarios, unitary_report, RuleReport, Scenario, ScenarioCheck, UnitaryReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Inconsistent,
    /// `P` of the program is undefined.
    Undefined(String),
    /// The conditional probability induced by a pr-atom differs from its value.
    PrMismatch {
        pr: GPr,
        expected: Rational,
        actual: Rational,
    },
    /// The conditional probability induced by a pr-atom is undefined.
    PrUndefined {
        pr: GPr,
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    CoherentByTheorem,
    /// The sufficient conditions fail and the direct test finds nothing wrong.
    Unknown(String),
    Incoherent(Witness),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Inconsistent => write!(f, "the program has no possible worlds"),
            Witness::Undefined(why) => write!(f, "{}", why),
            Witness::PrMismatch { pr, expected, actual } => {
                write!(
                    f,
                    "P({} | condition) = {} but `{}` assigns {}",
                    pr.atom,
                    actual,
                    pr.to_string().trim_end_matches('.'),
                    expected
                )
            }
            Witness::PrUndefined { pr, reason } => write!(
                f,
                "conditional probability for `{}` is undefined: {}",
                pr.to_string().trim_end_matches('.'),
                reason
            ),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CoherentByTheorem => write!(f, "coherent (causally ordered and unitary)"),
            Verdict::Unknown(why) => write!(f, "unknown: {}", why),
            Verdict::Incoherent(w) => write!(f, "incoherent: {}", w),
        }
    }
}

/// Everything the analysis found along the way.
#[derive(Clone, Debug)]
pub struct CoherencyReport {
    pub leveling: Option<std::result::Result<Leveling, NoLeveling>>,
    /// Clause failures under the leveling found; empty when causally ordered.
    pub order: Option<Vec<OrderFailure>>,
    pub unitary: Option<UnitaryReport>,
    pub semantic: Option<SemanticReport>,
    pub verdict: Verdict,
}

/// Runs the sufficient conditions on the program without observations and actions, falling back
/// to the direct test when they do not settle the question.
pub fn coherency_report(g: &GroundProgram) -> Result<CoherencyReport> {
    let mut rep = CoherencyReport {
        leveling: None,
        order: None,
        unitary: None,
        semantic: None,
        verdict: Verdict::Unknown(String::new()),
    };
    let model = Model::from_ground(g.clone())?;
    if !model.is_consistent() {
        rep.verdict = Verdict::Incoherent(Witness::Inconsistent);
        return Ok(rep);
    }
    if let Err(e) = model.table() {
        match semantic::undefined_reason(&e) {
            Some(why) => {
                rep.verdict = Verdict::Incoherent(Witness::Undefined(why));
                return Ok(rep);
            }
            None => return Err(e),
        }
    }
    let core = g.without_actions();
    let d = DependencyGraph::new(&core);
    let lev = find_leveling(&core, &d);
    let mut reason = String::new();
    match &lev {
        Ok(l) => {
            let failures = causal_order_failures(&InducedStructure::new(&core, &d, l))?;
            match failures.first() {
                None => {
                    let worlds = Model::from_ground(core.clone())?.worlds;
                    let u = unitary_report(&core, &worlds);
                    if u.is_unitary() {
                        rep.verdict = Verdict::CoherentByTheorem;
                    } else {
                        reason = "not unitary".into();
                    }
                    rep.unitary = Some(u);
                }
                Some(f) => reason = format!("not causally ordered ({})", f),
            }
            rep.order = Some(failures);
        }
        Err(e) => reason = format!("no strict probabilistic leveling ({})", e),
    }
    rep.leveling = Some(lev);
    if rep.verdict == Verdict::CoherentByTheorem {
        return Ok(rep);
    }
    let sem = match semantic_coherency(g) {
        Ok(s) => s,
        Err(e) => match semantic::undefined_reason(&e) {
            Some(why) => {
                rep.verdict = Verdict::Unknown(format!("{}; without observations and actions: {}", reason, why));
                return Ok(rep);
            }
            None => return Err(e),
        },
    };
    rep.verdict = match sem.first_failure() {
        Some((_, pr, PrCheck::Differs { actual })) => Verdict::Incoherent(Witness::PrMismatch {
            pr: pr.clone(),
            expected: pr.value.clone(),
            actual: actual.clone(),
        }),
        Some((_, pr, PrCheck::Undefined(why))) => Verdict::Incoherent(Witness::PrUndefined {
            pr: pr.clone(),
            reason: why.clone(),
        }),
        _ => {
            let n = sem.uncheckable();
            if n == 0 {
                Verdict::Unknown(format!(
                    "{}; every pr-atom agrees with its conditional probability",
                    reason
                ))
            } else {
                Verdict::Unknown(format!("{}; {} pr-atoms could not be checked", reason, n))
            }
        }
    };
    rep.semantic = Some(sem);
    Ok(rep)
}

pub fn coherency_verdict(g: &GroundProgram) -> Result<Verdict> {
    Ok(coherency_report(g)?.verdict)
}
