//! The three well-formedness conditions on selection rules and pr-atoms.

use std::fmt;

use crate::syntax::ground::{AttrTerm, GLit, GroundProgram};
use crate::syntax::term::Term;
use crate::worlds::measure::possible_values;
use crate::worlds::World;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Two selection rules for the same term fire in one world.
    UniqueSelection {
        term: AttrTerm,
        rules: (Term, Term),
        world: usize,
    },
    /// Two pr-atoms of one rule give the same atom a probability in one world.
    UniqueAssignment { rule: Term, atom: GLit, world: usize },
    /// A pr-atom applies to a value outside the dynamic range.
    OutsideRange { rule: Term, atom: GLit, world: usize },
}

impl Violation {
    /// 1, 2 or 3.
    pub fn condition(&self) -> u8 {
        match self {
            Violation::UniqueSelection { .. } => 1,
            Violation::UniqueAssignment { .. } => 2,
            Violation::OutsideRange { .. } => 3,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UniqueSelection { term, rules, world } => write!(
                f,
                "condition 1: {} is selected by both [{}] and [{}] in world {}",
                term, rules.0, rules.1, world
            ),
            Violation::UniqueAssignment { rule, atom, world } => {
                write!(
                    f,
                    "condition 2: several pr-atoms of [{}] assign {} in world {}",
                    rule, atom, world
                )
            }
            Violation::OutsideRange { rule, atom, world } => {
                write!(
                    f,
                    "condition 3: [{}] assigns {} outside its dynamic range in world {}",
                    rule, atom, world
                )
            }
        }
    }
}

/// Violations over the given worlds, at most one per condition and offending rule or pair. World numbers start at 1.
pub fn check_conditions(g: &GroundProgram, worlds: &[World]) -> Vec<Violation> {
    let mut out: Vec<Violation> = Vec::new();
    let push = |out: &mut Vec<Violation>, v: Violation| {
        let dup = out.iter().any(|o| match (o, &v) {
            (
                Violation::UniqueSelection { term: a, rules: ra, .. },
                Violation::UniqueSelection { term: b, rules: rb, .. },
            ) => a == b && ra == rb,
            (
                Violation::UniqueAssignment { rule: a, atom: x, .. },
                Violation::UniqueAssignment { rule: b, atom: y, .. },
            )
            | (Violation::OutsideRange { rule: a, atom: x, .. }, Violation::OutsideRange { rule: b, atom: y, .. }) => {
                a == b && x == y
            }
            _ => false,
        });
        if !dup {
            out.push(v);
        }
    };
    let by_term = g.selections_by_term();
    for (n, w) in worlds.iter().enumerate() {
        let world = n + 1;
        for (term, sels) in &by_term {
            let firing: Vec<_> = sels
                .iter()
                .map(|&i| &g.selections[i])
                .filter(|s| w.satisfies(&s.body))
                .collect();
            for (i, a) in firing.iter().enumerate() {
                for b in &firing[i + 1..] {
                    if a.name != b.name {
                        let v = Violation::UniqueSelection {
                            term: (*term).clone(),
                            rules: (a.name.clone(), b.name.clone()),
                            world,
                        };
                        push(&mut out, v);
                    }
                }
            }
            for s in firing {
                let prs: Vec<_> = g
                    .prs
                    .iter()
                    .filter(|p| p.name == s.name && p.atom.term == s.term)
                    .collect();
                for (i, p) in prs.iter().enumerate() {
                    if !w.satisfies(&p.body) {
                        continue;
                    }
                    if prs[i + 1..].iter().any(|q| q.atom == p.atom && w.satisfies(&q.body)) {
                        let v = Violation::UniqueAssignment {
                            rule: s.name.clone(),
                            atom: p.atom.clone(),
                            world,
                        };
                        push(&mut out, v);
                    }
                }
                if s.dynamic.is_some() && !w.intervened.contains(&s.term) {
                    let allowed = possible_values(g, w, s.dynamic.as_deref(), &s.term);
                    for p in &prs {
                        let y = p.atom.assigned_value();
                        let inside = y.as_ref().map_or(false, |y| allowed.contains(&y));
                        if !inside && w.satisfies(&p.body) {
                            let v = Violation::OutsideRange {
                                rule: s.name.clone(),
                                atom: p.atom.clone(),
                                world,
                            };
                            push(&mut out, v);
                        }
                    }
                }
            }
        }
    }
    out
}
