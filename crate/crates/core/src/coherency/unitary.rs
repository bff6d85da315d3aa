//! Scenarios of selection rules and the unitary check on pr-atoms.

use std::collections::BTreeMap;
use std::fmt;

use crate::rational::Rational;
use crate::syntax::ground::GroundProgram;
use crate::syntax::term::Term;
use crate::worlds::World;

/// Worlds that agree on the dynamic range of a selection rule and on which of its pr-atoms apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    /// Index of the ground selection rule.
    pub selection: usize,
    /// Indices into the world list.
    pub worlds: Vec<usize>,
    pub range: Vec<Term>,
    /// Indices of the active pr-atoms.
    pub active: Vec<usize>,
}

/// Pr-atoms indexing the selection rule: same rule name and attribute term.
fn indexing(g: &GroundProgram, sel: usize) -> Vec<usize> {
    let s = &g.selections[sel];
    (0..g.prs.len())
        .filter(|&i| g.prs[i].name == s.name && g.prs[i].atom.term == s.term)
        .collect()
}

/// Partition of the worlds satisfying the premise of selection `sel`.
pub fn scenarios(g: &GroundProgram, worlds: &[World], sel: usize) -> Vec<Scenario> {
    let s = &g.selections[sel];
    let prs = indexing(g, sel);
    let mut classes: BTreeMap<(Vec<bool>, Vec<bool>), Vec<usize>> = BTreeMap::new();
    let mut order = Vec::new();
    for (i, w) in worlds.iter().enumerate() {
        if !w.satisfies(&s.body) {
            continue;
        }
        let dyn_key: Vec<bool> = match &s.dynamic {
            None => Vec::new(),
            Some(p) => g
                .range(&s.term)
                .iter()
                .map(|y| g.dynamic_lit(p, y).map_or(false, |l| w.holds(&l)))
                .collect(),
        };
        let pr_key: Vec<bool> = prs.iter().map(|&q| w.satisfies(&g.prs[q].body)).collect();
        let key = (dyn_key, pr_key);
        if !classes.contains_key(&key) {
            order.push(key.clone());
        }
        classes.entry(key).or_default().push(i);
    }
    order
        .into_iter()
        .map(|key| {
            let range: Vec<Term> = if key.0.is_empty() {
                g.range(&s.term).to_vec()
            } else {
                g.range(&s.term)
                    .iter()
                    .zip(&key.0)
                    .filter(|(_, &on)| on)
                    .map(|(y, _)| y.clone())
                    .collect()
            };
            let active = prs.iter().zip(&key.1).filter(|(_, &on)| on).map(|(&q, _)| q).collect();
            Scenario {
                selection: sel,
                worlds: classes.remove(&key).unwrap_or_default(),
                range,
                active,
            }
        })
        .collect()
}

/// How a scenario fares under the unitary condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScenarioCheck {
    /// Every value has an active pr-atom and they sum to 1.
    Covered,
    /// Some value has none and the active ones sum to at most 1.
    Partial,
    /// Neither holds; `sum` is the total of the active pr-atoms.
    Fails { sum: Rational, covered: bool },
}

#[derive(Clone, Debug)]
pub struct RuleReport {
    pub selection: usize,
    pub scenarios: Vec<(Scenario, ScenarioCheck)>,
}

impl RuleReport {
    pub fn is_unitary(&self) -> bool {
        self.scenarios
            .iter()
            .all(|(_, c)| !matches!(c, ScenarioCheck::Fails { .. }))
    }
}

#[derive(Clone, Debug)]
pub struct UnitaryReport {
    pub rules: Vec<RuleReport>,
}

impl UnitaryReport {
    pub fn is_unitary(&self) -> bool {
        self.rules.iter().all(|r| r.is_unitary())
    }
}

pub fn check_scenario(g: &GroundProgram, sc: &Scenario) -> ScenarioCheck {
    let t = &g.selections[sc.selection].term;
    let sum: Rational = sc.active.iter().map(|&q| g.prs[q].value.clone()).sum();
    let covered = sc.range.iter().all(|y| {
        let atom = g.assign(t, y);
        sc.active.iter().any(|&q| g.prs[q].atom == atom)
    });
    if covered && sum.is_one() {
        ScenarioCheck::Covered
    } else if !covered && sum <= Rational::one() {
        ScenarioCheck::Partial
    } else {
        ScenarioCheck::Fails { sum, covered }
    }
}

pub fn unitary_report(g: &GroundProgram, worlds: &[World]) -> UnitaryReport {
    let rules = (0..g.selections.len())
        .map(|sel| RuleReport {
            selection: sel,
            scenarios: scenarios(g, worlds, sel)
                .into_iter()
                .map(|sc| {
                    let c = check_scenario(g, &sc);
                    (sc, c)
                })
                .collect(),
        })
        .collect();
    UnitaryReport { rules }
}

impl fmt::Display for ScenarioCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioCheck::Covered => write!(f, "unitary (every value assigned, sum 1)"),
            ScenarioCheck::Partial => write!(f, "unitary (some value by default, sum at most 1)"),
            ScenarioCheck::Fails { sum, covered: true } => write!(f, "not unitary (every value assigned, sum {})", sum),
            ScenarioCheck::Fails { sum, covered: false } => write!(f, "not unitary (sum {} exceeds 1)", sum),
        }
    }
}
