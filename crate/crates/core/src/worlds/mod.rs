//! Possible worlds, causal probabilities, measures and probabilities of formulas.

mod conditions;
mod formula;
mod measure;

use std::collections::BTreeSet;
use std::fmt;

use crate::asp::{AnswerSet, Solver};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::syntax::ground::{ground, AttrTerm, ExtLit, GLit, GroundProgram};
use crate::syntax::program::Program;
use crate::syntax::term::Term;
use crate::translate::{translate, Meaning, Translation};

pub use conditions::{check_conditions, Violation};
pub use formula::{Formula, Truth};
pub use measure::{causal_probabilities, Outcome, WorldInfo, WorldTable};

/// A possible world: an answer set of the translation, split into Σ-literals and bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct World {
    pub lits: BTreeSet<GLit>,
    pub intervened: BTreeSet<AttrTerm>,
    pub obs: BTreeSet<GLit>,
    pub dos: BTreeSet<GLit>,
}

impl World {
    pub fn from_answer_set(tau: &Translation, s: &AnswerSet) -> World {
        let mut w = World {
            lits: BTreeSet::new(),
            intervened: BTreeSet::new(),
            obs: BTreeSet::new(),
            dos: BTreeSet::new(),
        };
        for &id in &s.0 {
            match tau.meaning(id) {
                Meaning::Sigma(l) => {
                    w.lits.insert(l.clone());
                }
                Meaning::Intervene(t) => {
                    w.intervened.insert(t.clone());
                }
                Meaning::Obs(l) => {
                    w.obs.insert(l.clone());
                }
                Meaning::Do(l) => {
                    w.dos.insert(l.clone());
                }
                Meaning::Sort => {}
            }
        }
        w
    }

    pub fn holds(&self, l: &GLit) -> bool {
        self.lits.contains(l)
    }

    /// Satisfaction of a set of extended literals.
    pub fn satisfies(&self, body: &[ExtLit]) -> bool {
        body.iter().all(|b| self.holds(&b.lit) != b.naf)
    }

    /// The value the world assigns to an attribute term, if any.
    pub fn value_of(&self, t: &AttrTerm) -> Option<Term> {
        self.lits
            .iter()
            .filter(|l| &l.term == t && l.is_atom())
            .find_map(|l| l.assigned_value())
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lits.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Answer sets of the translation as worlds, in canonical order. Errors with `Inconsistent` when there are none.
pub fn possible_worlds(g: &GroundProgram) -> Result<Vec<World>> {
    let tau = translate(g);
    let worlds = worlds_of(&tau, None)?;
    if worlds.is_empty() {
        return Err(Error::Inconsistent);
    }
    Ok(worlds)
}

fn worlds_of(tau: &Translation, limit: Option<usize>) -> Result<Vec<World>> {
    let mut solver = Solver::new(&tau.asp);
    if let Some(k) = limit {
        solver = solver.with_limit(k);
    }
    Ok(solver.solve()?.iter().map(|s| World::from_answer_set(tau, s)).collect())
}

/// Number of possible worlds, stopping once `limit` are found.
pub fn count_worlds(g: &GroundProgram, limit: usize) -> Result<usize> {
    Ok(worlds_of(&translate(g), Some(limit))?.len())
}

/// A ground program together with its possible worlds.
#[derive(Clone, Debug)]
pub struct Model {
    pub ground: GroundProgram,
    pub worlds: Vec<World>,
}

impl Model {
    /// Grounds and solves. A program without possible worlds yields a model with no worlds.
    pub fn new(p: &Program) -> Result<Model> {
        Model::from_ground(ground(p)?)
    }

    pub fn parse(src: &str) -> Result<Model> {
        Model::new(&Program::parse(src)?)
    }

    pub fn from_ground(g: GroundProgram) -> Result<Model> {
        let worlds = worlds_of(&translate(&g), None)?;
        Ok(Model { ground: g, worlds })
    }

    pub fn is_consistent(&self) -> bool {
        !self.worlds.is_empty()
    }

    pub fn violations(&self) -> Vec<Violation> {
        check_conditions(&self.ground, &self.worlds)
    }

    pub fn table(&self) -> Result<WorldTable> {
        measure::measures(&self.ground, &self.worlds)
    }

    pub fn formula(&self, src: &str) -> Result<Formula> {
        Formula::parse(src, &self.ground.signature)
    }

    /// Probability of a formula.
    pub fn prob(&self, f: &Formula) -> Result<Rational> {
        Ok(self.table()?.prob(f))
    }

    pub fn prob_of(&self, src: &str) -> Result<Rational> {
        self.prob(&self.formula(src)?)
    }
}
