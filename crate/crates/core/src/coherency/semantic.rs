//! Direct coherency test: every pr-atom must agree with the conditional probability it induces.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::syntax::ground::{ExtLit, GLit, GPr, GroundProgram};
use crate::worlds::{Formula, Model};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrCheck {
    Agrees,
    /// The condition has probability 0.
    Vacuous,
    /// The condition uses default negation and cannot be observed.
    Uncheckable,
    Differs {
        actual: Rational,
    },
    /// The conditional probability is undefined.
    Undefined(String),
}

#[derive(Clone, Debug)]
pub struct SemanticReport {
    /// One entry per selection rule and pr-atom indexing it.
    pub checks: Vec<(usize, GPr, PrCheck)>,
}

impl SemanticReport {
    pub fn first_failure(&self) -> Option<&(usize, GPr, PrCheck)> {
        self.checks
            .iter()
            .find(|(_, _, c)| matches!(c, PrCheck::Differs { .. } | PrCheck::Undefined(_)))
    }

    pub fn uncheckable(&self) -> usize {
        self.checks
            .iter()
            .filter(|(_, _, c)| *c == PrCheck::Uncheckable)
            .count()
    }
}

impl fmt::Display for PrCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrCheck::Agrees => write!(f, "agrees"),
            PrCheck::Vacuous => write!(f, "condition has probability 0"),
            PrCheck::Uncheckable => write!(f, "uncheckable (condition uses not)"),
            PrCheck::Differs { actual } => write!(f, "conditional probability is {}", actual),
            PrCheck::Undefined(why) => write!(f, "conditional probability undefined: {}", why),
        }
    }
}

/// Checks every pr-atom against the program with observations and actions removed.
/// Errors only when that program has no defined probability.
pub fn semantic_coherency(g: &GroundProgram) -> Result<SemanticReport> {
    let base = g.without_actions();
    let model = Model::from_ground(base.clone())?;
    let table = model.table()?;
    let mut cache: HashMap<BTreeSet<GLit>, std::result::Result<Model, String>> = HashMap::new();
    let mut checks = Vec::new();
    for (si, s) in base.selections.iter().enumerate() {
        for p in base.prs.iter().filter(|p| p.name == s.name && p.atom.term == s.term) {
            let cond: Vec<&ExtLit> = p.body.iter().chain(&s.body).collect();
            let check = if cond.iter().any(|e| e.naf) {
                PrCheck::Uncheckable
            } else {
                let lits: BTreeSet<GLit> = cond.iter().map(|e| e.lit.clone()).collect();
                let conj = Formula::conjunction(&cond.iter().map(|e| (*e).clone()).collect::<Vec<_>>());
                let pb = conj.map_or(Rational::one(), |f| table.prob(&f));
                if pb.is_zero() {
                    PrCheck::Vacuous
                } else {
                    let m = cache.entry(lits.clone()).or_insert_with(|| {
                        let obs: Vec<GLit> = lits.iter().cloned().collect();
                        Model::from_ground(base.with_obs(&obs)).map_err(|e| e.to_string())
                    });
                    match m {
                        Err(e) => PrCheck::Undefined(e.clone()),
                        Ok(m) => match m.prob(&Formula::Lit(ExtLit {
                            lit: p.atom.clone(),
                            naf: false,
                        })) {
                            Ok(v) if v == p.value => PrCheck::Agrees,
                            Ok(v) => PrCheck::Differs { actual: v },
                            Err(e) => PrCheck::Undefined(e.to_string()),
                        },
                    }
                }
            };
            checks.push((si, p.clone(), check));
        }
    }
    Ok(SemanticReport { checks })
}

/// Maps measure errors to a human-readable reason, keeping other errors.
pub(crate) fn undefined_reason(e: &Error) -> Option<String> {
    match e {
        Error::Inconsistent
        | Error::ProbabilityUndefined
        | Error::ConditionViolation(_)
        | Error::NegativeDefault { .. } => Some(e.to_string()),
        _ => None,
    }
}
