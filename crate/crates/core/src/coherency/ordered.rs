//! Causal ordering: every random choice, once made, fixes the rest of the next layer.

use std::fmt;

use crate::coherency::leveling::InducedStructure;
use crate::error::Result;
use crate::syntax::ground::{AttrTerm, GLit, GroundProgram};
use crate::worlds::{count_worlds, Model, World};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderFailure {
    /// The bottom layer does not have exactly one world.
    Base { worlds: usize },
    /// Fixing `atom` on top of `world` leaves zero or several worlds.
    Outcome {
        level: usize,
        world: Vec<GLit>,
        atom: GLit,
        worlds: usize,
    },
    /// The term is inactive in `world`, yet the next layer does not have exactly one world above it.
    Inactive {
        level: usize,
        world: Vec<GLit>,
        term: AttrTerm,
        worlds: usize,
    },
}

impl OrderFailure {
    /// Which clause of the definition failed: 1, 2 or 3.
    pub fn clause(&self) -> u8 {
        match self {
            OrderFailure::Base { .. } => 1,
            OrderFailure::Outcome { .. } => 2,
            OrderFailure::Inactive { .. } => 3,
        }
    }
}

fn show(w: &[GLit]) -> String {
    let parts: Vec<String> = w.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn count(n: usize) -> String {
    if n > 1 {
        "several worlds".into()
    } else {
        format!("{} worlds", n)
    }
}

impl fmt::Display for OrderFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderFailure::Base { worlds } => write!(f, "clause 1: the bottom layer has {}", count(*worlds)),
            OrderFailure::Outcome {
                level,
                world,
                atom,
                worlds,
            } => write!(
                f,
                "clause 2: at level {} with W = {}, observing {} leaves {}",
                level,
                show(world),
                atom,
                count(*worlds)
            ),
            OrderFailure::Inactive {
                level,
                world,
                term,
                worlds,
            } => write!(
                f,
                "clause 3: at level {} with W = {}, {} is inactive and the next layer has {}",
                level,
                show(world),
                term,
                count(*worlds)
            ),
        }
    }
}

/// Atoms of `t` possible in `w` with respect to `g`, ignoring interventions.
pub(crate) fn possible_atoms(g: &GroundProgram, w: &World, t: &AttrTerm) -> Vec<GLit> {
    let Some(s) = g.selections.iter().find(|s| &s.term == t && w.satisfies(&s.body)) else {
        return Vec::new();
    };
    g.range(t)
        .iter()
        .filter(|y| match &s.dynamic {
            None => true,
            Some(p) => g.dynamic_lit(p, y).map_or(false, |l| w.holds(&l)),
        })
        .map(|y| g.assign(t, y))
        .collect()
}

/// Every failure of the three clauses, level by level; empty when the program is causally ordered
/// under the structure.
pub fn causal_order_failures(ind: &InducedStructure) -> Result<Vec<OrderFailure>> {
    let mut out = Vec::new();
    let base = count_worlds(&ind.programs[0], 2)?;
    if base != 1 {
        out.push(OrderFailure::Base { worlds: base });
    }
    for (i, t) in ind.order.iter().enumerate() {
        let (cur, next) = (&ind.programs[i], &ind.programs[i + 1]);
        let worlds = Model::from_ground(cur.clone())?.worlds;
        for w in &worlds {
            let lits: Vec<GLit> = w.lits.iter().cloned().collect();
            let above = next.with_facts(&lits);
            let atoms = possible_atoms(next, w, t);
            if atoms.is_empty() {
                let n = count_worlds(&above, 2)?;
                if n != 1 {
                    out.push(OrderFailure::Inactive {
                        level: i + 1,
                        world: lits.clone(),
                        term: t.clone(),
                        worlds: n,
                    });
                }
            }
            for a in atoms {
                let n = count_worlds(&above.with_obs(std::slice::from_ref(&a)), 2)?;
                if n != 1 {
                    out.push(OrderFailure::Outcome {
                        level: i + 1,
                        world: lits.clone(),
                        atom: a,
                        worlds: n,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherency::graph::DependencyGraph;
    use crate::coherency::leveling::find_leveling;
    use crate::syntax::ground::ground;
    use crate::syntax::program::Program;

    fn failures(src: &str) -> Vec<OrderFailure> {
        let g = ground(&Program::parse(src).unwrap()).unwrap();
        let d = DependencyGraph::new(&g);
        let lev = find_leveling(&g, &d).unwrap();
        causal_order_failures(&InducedStructure::new(&g, &d, &lev)).unwrap()
    }

    #[test]
    fn monty_is_ordered() {
        assert!(failures(crate::coherency::leveling::tests::MONTY).is_empty());
    }

    #[test]
    fn fact_on_random_attribute() {
        let f = failures("a : boolean. random(a). a.");
        assert_eq!(f.len(), 1);
        assert!(matches!(&f[0], OrderFailure::Outcome { atom, worlds: 0, .. } if atom.to_string() == "~a"));
    }

    #[test]
    fn unconstrained_consequence() {
        let f = failures("a, b : boolean. random(a). b :- not ~b, a. ~b :- not b, a.");
        assert_eq!(f.len(), 1);
        assert!(matches!(&f[0], OrderFailure::Outcome { atom, worlds: 2, .. } if atom.to_string() == "a"));
    }

    #[test]
    fn inactive_term_without_world() {
        let f = failures("a, b, c : boolean. random(a). random(b) :- a. ~b :- ~a. c :- ~b. ~c.");
        let inactive: Vec<Vec<String>> = f
            .iter()
            .filter_map(|x| match x {
                OrderFailure::Inactive { world, worlds: 0, .. } => Some(world.iter().map(|l| l.to_string()).collect()),
                _ => None,
            })
            .collect();
        assert_eq!(inactive, [["~a", "~c"]]);
    }
}
