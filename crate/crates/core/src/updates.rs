//! Updates by observations, actions and new statements, all as program union.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::syntax::ast::{Atomic, Statement, Stmt};
use crate::syntax::parser;
use crate::syntax::program::Program;
use crate::worlds::{Formula, Model};

#[derive(Clone, Debug, PartialEq)]
pub enum Update {
    Obs(Vec<Atomic>),
    Do(Vec<Atomic>),
    Statements(Vec<Statement>),
}

impl Update {
    /// Observations from literal texts such as `even(d2)` or `~found(p1,1)`.
    pub fn obs<S: AsRef<str>>(lits: &[S]) -> Result<Update> {
        Ok(Update::Obs(
            lits.iter()
                .map(|s| parser::parse_atomic(s.as_ref()))
                .collect::<Result<_>>()?,
        ))
    }

    pub fn act<S: AsRef<str>>(atoms: &[S]) -> Result<Update> {
        Ok(Update::Do(
            atoms
                .iter()
                .map(|s| parser::parse_atomic(s.as_ref()))
                .collect::<Result<_>>()?,
        ))
    }

    /// Arbitrary statements in program syntax.
    pub fn statements(src: &str) -> Result<Update> {
        Ok(Update::Statements(parser::parse(src)?))
    }

    /// Literals added as facts.
    pub fn facts(lits: &[Atomic]) -> Update {
        Update::Statements(
            lits.iter()
                .map(|l| {
                    Statement::new(Stmt::Rule {
                        head: Some(l.clone()),
                        body: Vec::new(),
                    })
                })
                .collect(),
        )
    }

    fn into_statements(self) -> Vec<Statement> {
        match self {
            Update::Obs(ls) => ls.into_iter().map(|l| Statement::new(Stmt::Obs(l))).collect(),
            Update::Do(ls) => ls.into_iter().map(|l| Statement::new(Stmt::Do(l))).collect(),
            Update::Statements(s) => s,
        }
    }
}

/// The union of `t` and `u`. The original program is left unchanged.
pub fn apply_update(t: &Program, u: &Update) -> Result<Program> {
    t.extend(u.clone().into_statements())
}

pub fn do_update(t: &Program, atoms: &[Atomic]) -> Result<Program> {
    apply_update(t, &Update::Do(atoms.to_vec()))
}

/// `P_t(f | b)`, computed as the probability of `f` after observing `b`.
pub fn conditional_prob(t: &Program, f: &Formula, b: &[Atomic]) -> Result<Rational> {
    let m = Model::new(&apply_update(t, &Update::Obs(b.to_vec()))?)?;
    match m.prob(f) {
        Err(Error::Inconsistent) => Err(Error::ProbabilityUndefined),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parser::parse_atomic;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn lits(xs: &[&str]) -> Vec<Atomic> {
        xs.iter().map(|x| parse_atomic(x).unwrap()).collect()
    }

    fn prob(p: &Program, q: &str) -> Result<Rational> {
        Model::new(p)?.prob_of(q)
    }

    #[test]
    fn facts_versus_observations() {
        let t = Program::parse("p : {y1, y2}. q : boolean. random(p). ~q :- not q, p = y1. ~q :- p = y2.").unwrap();
        let b = lits(&["q", "p = y1"]);
        let obs = apply_update(&t, &Update::Obs(b.clone())).unwrap();
        assert!(!Model::new(&obs).unwrap().is_consistent());
        let facts = apply_update(&t, &Update::facts(&b)).unwrap();
        let m = Model::new(&facts).unwrap();
        assert_eq!(m.worlds.len(), 1);
        assert_eq!(m.prob_of("q").unwrap(), r("1"));
        assert_eq!(t.statements.len(), 5);
    }

    #[test]
    fn observed_fact_is_not_a_fact() {
        let t = Program::parse("p : {y1, y2}. q : boolean. random(p). q :- p = y1. ~q :- not q.").unwrap();
        let obs = apply_update(&t, &Update::obs(&["q"]).unwrap()).unwrap();
        assert_eq!(prob(&obs, "p = y1").unwrap(), r("1"));
        let fact = apply_update(&t, &Update::statements("q.").unwrap()).unwrap();
        assert_eq!(prob(&fact, "p = y1").unwrap(), r("1/2"));
    }

    #[test]
    fn adding_randomness() {
        let t = Program::parse("a1, a2, a3 : boolean. a1 :- a2. a2 :- not ~a2.").unwrap();
        assert_eq!(prob(&t, "a1").unwrap(), r("1"));
        let u = apply_update(&t, &Update::statements("~a2. random(a1) :- ~a2.").unwrap()).unwrap();
        assert_eq!(prob(&u, "a1").unwrap(), r("1/2"));
    }

    #[test]
    fn adding_a_pr_atom() {
        let u = Update::statements("pr(a) = 1/3.").unwrap();
        let t1 = Program::parse("a : boolean. random(a).").unwrap();
        assert_eq!(prob(&apply_update(&t1, &u).unwrap(), "a").unwrap(), r("1/3"));
        let t2 = Program::parse("a : boolean. random(a). pr(a) = 1/2.").unwrap();
        let m = Model::new(&apply_update(&t2, &u).unwrap()).unwrap();
        match m.table() {
            Err(Error::ConditionViolation(v)) => assert_eq!(v[0].condition(), 2),
            other => panic!("expected a violation, got {:?}", other.map(|t| t.total)),
        }
    }

    #[test]
    fn seeing_versus_doing() {
        let t = Program::parse(
            "arsenic, death : boolean. [1] random(arsenic). [2] random(death).
             pr(arsenic) = 0.4. pr(death |c arsenic) = 0.8. pr(death |c ~arsenic) = 0.1.",
        )
        .unwrap();
        let f = Model::new(&t).unwrap().formula("arsenic").unwrap();
        assert_eq!(conditional_prob(&t, &f, &lits(&["death"])).unwrap(), r("16/19"));
        assert_eq!(
            prob(&do_update(&t, &lits(&["death"])).unwrap(), "arsenic").unwrap(),
            r("2/5")
        );
        assert_eq!(
            prob(&do_update(&t, &lits(&["arsenic"])).unwrap(), "death").unwrap(),
            r("4/5")
        );
        assert_eq!(conditional_prob(&t, &f, &[]).unwrap(), r("2/5"));
    }

    #[test]
    fn impossible_condition_is_undefined() {
        let t = Program::parse("a : boolean. a.").unwrap();
        let f = Model::new(&t).unwrap().formula("a").unwrap();
        assert!(matches!(
            conditional_prob(&t, &f, &lits(&["~a"])),
            Err(Error::ProbabilityUndefined)
        ));
    }
}
