//! Ground disjunctive logic programs with classical negation and default negation,
//! their answer sets, and a textual dump.

mod oracle;
mod solver;

use std::collections::HashMap;
use std::fmt;

use crate::syntax::term::{write_list, Term};

pub use oracle::oracle_answer_sets;
pub use solver::{answer_sets, Solver, DEFAULT_NODE_BUDGET};

/// Index of an interned literal in an [`AspProgram`].
pub type LitId = u32;

/// A classical literal `p(t1..tn)` or `-p(t1..tn)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AspLit {
    pub pred: String,
    pub args: Vec<Term>,
    pub neg: bool,
}

impl AspLit {
    pub fn pos(pred: &str, args: Vec<Term>) -> AspLit {
        AspLit {
            pred: pred.to_string(),
            args,
            neg: false,
        }
    }

    pub fn negated(&self) -> AspLit {
        AspLit {
            neg: !self.neg,
            ..self.clone()
        }
    }
}

impl fmt::Display for AspLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.neg {
            write!(f, "-")?;
        }
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            write_list(f, &self.args)?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// `h1 | ... | hk :- p1, ..., pm, not n1, ..., not nj.` An empty head is a constraint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AspRule {
    pub head: Vec<LitId>,
    pub pos: Vec<LitId>,
    pub neg: Vec<LitId>,
}

#[derive(Clone, Debug, Default)]
pub struct AspProgram {
    lits: Vec<AspLit>,
    index: HashMap<AspLit, LitId>,
    pub rules: Vec<AspRule>,
}

impl AspProgram {
    pub fn new() -> AspProgram {
        AspProgram::default()
    }

    pub fn intern(&mut self, l: AspLit) -> LitId {
        if let Some(&id) = self.index.get(&l) {
            return id;
        }
        let id = self.lits.len() as LitId;
        self.index.insert(l.clone(), id);
        self.lits.push(l);
        id
    }

    pub fn lookup(&self, l: &AspLit) -> Option<LitId> {
        self.index.get(l).copied()
    }

    pub fn literal(&self, id: LitId) -> &AspLit {
        &self.lits[id as usize]
    }

    pub fn literals(&self) -> &[AspLit] {
        &self.lits
    }

    pub fn num_literals(&self) -> usize {
        self.lits.len()
    }

    /// The complementary literal, if it occurs in the program.
    pub fn complement(&self, id: LitId) -> Option<LitId> {
        self.lookup(&self.literal(id).negated())
    }

    pub fn add_rule(&mut self, head: Vec<LitId>, pos: Vec<LitId>, neg: Vec<LitId>) {
        self.rules.push(AspRule { head, pos, neg });
    }

    pub fn add_fact(&mut self, l: AspLit) -> LitId {
        let id = self.intern(l);
        self.add_rule(vec![id], vec![], vec![]);
        id
    }

    pub fn rule_to_string(&self, r: &AspRule) -> String {
        let mut s = r
            .head
            .iter()
            .map(|&h| self.literal(h).to_string())
            .collect::<Vec<_>>()
            .join(" | ");
        let body: Vec<String> = r
            .pos
            .iter()
            .map(|&p| self.literal(p).to_string())
            .chain(r.neg.iter().map(|&n| format!("not {}", self.literal(n))))
            .collect();
        if !body.is_empty() {
            if !s.is_empty() {
                s.push(' ');
            }
            s.push_str(":- ");
            s.push_str(&body.join(", "));
        }
        s.push('.');
        s
    }

    /// One rule per line.
    pub fn dump(&self) -> String {
        self.rules.iter().map(|r| self.rule_to_string(r) + "\n").collect()
    }

    /// Canonical rendering of a set of literals: `{a, -b, c(1)}`.
    pub fn render_set(&self, ids: &[LitId]) -> String {
        let mut v: Vec<&AspLit> = ids.iter().map(|&i| self.literal(i)).collect();
        v.sort();
        let parts: Vec<String> = v.iter().map(|l| l.to_string()).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Whether `set` (sorted ids) is an answer set: consistent, a model of the reduct, and minimal.
    pub fn is_answer_set(&self, set: &[LitId]) -> bool {
        let n = self.lits.len();
        let mut mark = vec![false; n];
        for &l in set {
            mark[l as usize] = true;
        }
        for &l in set {
            if let Some(c) = self.complement(l) {
                if mark[c as usize] {
                    return false;
                }
            }
        }
        // Reduct rules whose body is contained in the set, with heads restricted to the set.
        let mut reduct: Vec<(Vec<LitId>, &[LitId])> = Vec::new();
        for r in &self.rules {
            if r.neg.iter().any(|&x| mark[x as usize]) {
                continue;
            }
            if !r.pos.iter().all(|&x| mark[x as usize]) {
                continue;
            }
            let head: Vec<LitId> = r.head.iter().copied().filter(|&h| mark[h as usize]).collect();
            if head.is_empty() {
                return false;
            }
            reduct.push((head, &r.pos));
        }
        if reduct.iter().all(|(h, _)| h.len() == 1) {
            return least_model_size(n, &reduct) == set.len();
        }
        !has_smaller_model(set, &reduct, n)
    }
}

impl fmt::Display for AspProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dump())
    }
}

fn least_model_size(n: usize, rules: &[(Vec<LitId>, &[LitId])]) -> usize {
    let mut inm = vec![false; n];
    let mut count = 0;
    let mut changed = true;
    while changed {
        changed = false;
        for (h, body) in rules {
            let h = h[0] as usize;
            if !inm[h] && body.iter().all(|&b| inm[b as usize]) {
                inm[h] = true;
                count += 1;
                changed = true;
            }
        }
    }
    count
}

/// Searches for a model of the restricted reduct that is a proper subset of `set`.
fn has_smaller_model(set: &[LitId], rules: &[(Vec<LitId>, &[LitId])], n: usize) -> bool {
    // Clauses over set members: (not body) or head. Plus "some member is absent".
    let mut clauses: Vec<Vec<(LitId, bool)>> = rules
        .iter()
        .map(|(h, b)| {
            b.iter()
                .map(|&x| (x, false))
                .chain(h.iter().map(|&x| (x, true)))
                .collect()
        })
        .collect();
    clauses.push(set.iter().map(|&x| (x, false)).collect());
    let mut assign: Vec<Option<bool>> = vec![None; n];
    dpll(&clauses, &mut assign, set)
}

fn dpll(clauses: &[Vec<(LitId, bool)>], assign: &mut Vec<Option<bool>>, vars: &[LitId]) -> bool {
    let mut trail = Vec::new();
    loop {
        let mut unit = None;
        let mut conflict = false;
        for c in clauses {
            let mut open = None;
            let mut nopen = 0;
            let mut sat = false;
            for &(v, pol) in c {
                match assign[v as usize] {
                    Some(b) if b == pol => {
                        sat = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        nopen += 1;
                        open = Some((v, pol));
                    }
                }
            }
            if sat {
                continue;
            }
            if nopen == 0 {
                conflict = true;
                break;
            }
            if nopen == 1 {
                unit = open;
                break;
            }
        }
        if conflict {
            for v in trail {
                assign[v as usize] = None;
            }
            return false;
        }
        match unit {
            Some((v, pol)) => {
                assign[v as usize] = Some(pol);
                trail.push(v);
            }
            None => break,
        }
    }
    let found = match vars.iter().find(|&&v| assign[v as usize].is_none()) {
        None => true,
        Some(&v) => {
            let mut ok = false;
            for pol in [false, true] {
                assign[v as usize] = Some(pol);
                if dpll(clauses, assign, vars) {
                    ok = true;
                    break;
                }
            }
            assign[v as usize] = None;
            ok
        }
    };
    if !found {
        for v in trail {
            assign[v as usize] = None;
        }
    }
    found
}

/// An answer set as sorted literal ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AnswerSet(pub Vec<LitId>);

impl AnswerSet {
    pub fn contains(&self, id: LitId) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Sorts answer sets by their canonical literal lists.
pub(crate) fn canonical_order(prog: &AspProgram, sets: &mut [AnswerSet]) {
    sets.sort_by_cached_key(|s| {
        let mut v: Vec<&AspLit> = s.0.iter().map(|&i| prog.literal(i)).collect();
        v.sort();
        v.into_iter().cloned().collect::<Vec<_>>()
    });
}
