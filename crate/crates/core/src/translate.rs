//! Translation of the logical part of a ground P-log program into a ground ASP program.
//!
//! `a(t)=y` becomes `a(t,y)`; boolean `a(t)` and `~a(t)` become `a(t)` and `-a(t)`.
//! Bookkeeping atoms are `intervene(a(t))`, `obs(l)` and `do(l)`.

use std::collections::{BTreeSet, HashMap};

use crate::asp::{AspLit, AspProgram, LitId};
use crate::syntax::ground::{AttrTerm, ExtLit, GLit, GroundProgram};
use crate::syntax::program::BOOLEAN;
use crate::syntax::term::Term;

/// What an ASP literal of the translation stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Meaning {
    Sort,
    Sigma(GLit),
    Intervene(AttrTerm),
    Obs(GLit),
    Do(GLit),
}

#[derive(Clone, Debug)]
pub struct Translation {
    pub asp: AspProgram,
    /// Indexed by literal id.
    pub meanings: Vec<Meaning>,
    sigma: HashMap<GLit, LitId>,
    intervene: HashMap<AttrTerm, LitId>,
}

impl Translation {
    pub fn sigma_id(&self, l: &GLit) -> Option<LitId> {
        self.sigma.get(l).copied()
    }

    pub fn intervene_id(&self, t: &AttrTerm) -> Option<LitId> {
        self.intervene.get(t).copied()
    }

    pub fn meaning(&self, id: LitId) -> &Meaning {
        &self.meanings[id as usize]
    }
}

/// ASP literal for a Σ-literal.
pub fn sigma_lit(l: &GLit) -> AspLit {
    let mut args = l.term.args.clone();
    if !l.boolean {
        args.push(l.value.clone());
    }
    AspLit {
        pred: l.term.attr.clone(),
        args,
        neg: !l.positive,
    }
}

/// A Σ-literal reified as a term, for `obs(...)` and `do(...)`.
fn lit_term(l: &GLit) -> Term {
    let a = sigma_lit(l);
    let name = if a.neg { format!("-{}", a.pred) } else { a.pred };
    Term::app(&name, a.args)
}

struct Builder<'g> {
    g: &'g GroundProgram,
    asp: AspProgram,
    meanings: HashMap<LitId, Meaning>,
    sigma: HashMap<GLit, LitId>,
    intervene: HashMap<AttrTerm, LitId>,
}

impl Builder<'_> {
    fn sigma(&mut self, l: &GLit) -> LitId {
        if let Some(&id) = self.sigma.get(l) {
            return id;
        }
        let id = self.asp.intern(sigma_lit(l));
        self.sigma.insert(l.clone(), id);
        self.meanings.insert(id, Meaning::Sigma(l.clone()));
        id
    }

    fn intervene(&mut self, t: &AttrTerm) -> LitId {
        if let Some(&id) = self.intervene.get(t) {
            return id;
        }
        let id = self.asp.intern(AspLit::pos("intervene", vec![t.to_term()]));
        self.intervene.insert(t.clone(), id);
        self.meanings.insert(id, Meaning::Intervene(t.clone()));
        id
    }

    fn obs(&mut self, l: &GLit) -> LitId {
        let id = self.asp.intern(AspLit::pos("obs", vec![lit_term(l)]));
        self.meanings.insert(id, Meaning::Obs(l.clone()));
        id
    }

    fn act(&mut self, l: &GLit) -> LitId {
        let id = self.asp.intern(AspLit::pos("do", vec![lit_term(l)]));
        self.meanings.insert(id, Meaning::Do(l.clone()));
        id
    }

    fn body(&mut self, body: &[ExtLit]) -> (Vec<LitId>, Vec<LitId>) {
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for b in body {
            let id = self.sigma(&b.lit);
            if b.naf {
                neg.push(id);
            } else {
                pos.push(id);
            }
        }
        (pos, neg)
    }

    /// Atoms `a(t)=y` for every value in the range.
    fn atoms(&self, t: &AttrTerm) -> Vec<GLit> {
        self.g.range(t).iter().map(|y| self.g.assign(t, y)).collect()
    }
}

pub fn translate(g: &GroundProgram) -> Translation {
    let mut b = Builder {
        g,
        asp: AspProgram::new(),
        meanings: HashMap::new(),
        sigma: HashMap::new(),
        intervene: HashMap::new(),
    };
    let sig = &g.signature;
    for s in sig.sorts.values() {
        if s.anonymous || s.name == BOOLEAN {
            continue;
        }
        for m in &s.members {
            let id = b.asp.add_fact(AspLit::pos(&s.name, vec![m.clone()]));
            b.meanings.insert(id, Meaning::Sort);
        }
    }
    for r in &g.rules {
        let head = r.head.iter().map(|h| b.sigma(h)).collect();
        let (pos, neg) = b.body(&r.body);
        b.asp.add_rule(head, pos, neg);
    }
    let terms: BTreeSet<AttrTerm> = g.relevant_terms();
    for t in &terms {
        if g.is_boolean(&t.attr) {
            continue;
        }
        let atoms = b.atoms(t);
        for a1 in &atoms {
            for a2 in &atoms {
                if a1 != a2 {
                    let h = b.sigma(&a2.complement());
                    let p = b.sigma(a1);
                    b.asp.add_rule(vec![h], vec![p], vec![]);
                }
            }
        }
    }
    for t in &terms {
        for a in b.atoms(t) {
            let i = b.intervene(t);
            let d = b.act(&a);
            b.asp.add_rule(vec![i], vec![d], vec![]);
        }
    }
    for s in &g.selections {
        let atoms = b.atoms(&s.term);
        let head: Vec<LitId> = atoms.iter().map(|a| b.sigma(a)).collect();
        let (pos, mut neg) = b.body(&s.body);
        let i = b.intervene(&s.term);
        neg.push(i);
        b.asp.add_rule(head, pos.clone(), neg.clone());
        if let Some(p) = &s.dynamic {
            for (a, y) in atoms.iter().zip(g.range(&s.term)) {
                let mut cpos = vec![b.sigma(a)];
                cpos.extend(&pos);
                let mut cneg = Vec::new();
                if let Some(pl) = g.dynamic_lit(p, y) {
                    cneg.push(b.sigma(&pl));
                }
                cneg.extend(&neg);
                b.asp.add_rule(vec![], cpos, cneg);
            }
        }
    }
    for l in &g.obs {
        let id = b.obs(l);
        b.asp.add_rule(vec![id], vec![], vec![]);
    }
    for l in &g.dos {
        let id = b.act(l);
        b.asp.add_rule(vec![id], vec![], vec![]);
    }
    for t in &terms {
        for a in b.atoms(t) {
            let lits = if a.boolean {
                vec![a.clone()]
            } else {
                vec![a.clone(), a.complement()]
            };
            for l in lits {
                let o = b.obs(&l);
                let s = b.sigma(&l);
                b.asp.add_rule(vec![], vec![o], vec![s]);
            }
        }
    }
    for t in &terms {
        for a in b.atoms(t) {
            let s = b.sigma(&a);
            let d = b.act(&a);
            b.asp.add_rule(vec![s], vec![d], vec![]);
        }
    }
    let n = b.asp.num_literals() as LitId;
    let meanings = (0..n)
        .map(|i| b.meanings.remove(&i).expect("every literal has a meaning"))
        .collect();
    Translation {
        asp: b.asp,
        meanings,
        sigma: b.sigma,
        intervene: b.intervene,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ground::ground;
    use crate::syntax::program::Program;

    fn tau(src: &str) -> Translation {
        translate(&ground(&Program::parse(src).unwrap()).unwrap())
    }

    #[test]
    fn causal_probability_one_program() {
        let t = tau("a : boolean. random(a). pr(a) = 1.");
        let dump = t.asp.dump();
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(
            lines,
            [
                "intervene(a) :- do(a).",
                "intervene(a) :- do(-a).",
                "a | -a :- not intervene(a).",
                ":- obs(a), not a.",
                ":- obs(-a), not -a.",
                "a :- do(a).",
                "-a :- do(-a).",
            ]
        );
    }

    #[test]
    fn dynamic_range_constraint() {
        let t = tau("door = {1,2,3}. open : door. can_open : door -> boolean. [r] random(open : {X : can_open(X)}).");
        let dump = t.asp.dump();
        assert!(dump.contains("open(1) | open(2) | open(3) :- not intervene(open).\n"));
        assert!(dump.contains(":- open(2), not can_open(2), not intervene(open).\n"));
        assert!(dump.contains("-open(1) :- open(2).\n"));
        assert!(dump.starts_with("door(1).\ndoor(2).\ndoor(3).\n"));
    }

    #[test]
    fn obs_and_do_facts() {
        let t = tau("a : {1,2}. random(a). obs(a<>1). do(a=2).");
        let dump = t.asp.dump();
        assert!(dump.contains("obs(-a(1)).\n"));
        assert!(dump.contains("do(a(2)).\n"));
        assert!(dump.contains(":- obs(-a(1)), not -a(1).\n"));
        assert!(dump.contains("a(2) :- do(a(2)).\n"));
        assert!(t.meanings.iter().any(|m| matches!(m, Meaning::Intervene(_))));
    }
}
