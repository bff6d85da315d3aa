//! Strict probabilistic levelings and the sub-programs they induce.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::coherency::graph::DependencyGraph;
use crate::syntax::ast::Stmt;
use crate::syntax::ground::{ground_lit, AttrTerm, GLit, GroundProgram, ADDED};
use crate::syntax::program::{resolve_literal, Program};
use crate::syntax::term::Subst;

/// Ranks of attribute terms. Random terms have pairwise distinct ranks; a random term's rank exceeds
/// the rank of its selection premise and dynamic range and of every pr-atom condition; a non-random
/// term ranks at least as high as every random term it depends on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leveling {
    pub ranks: BTreeMap<AttrTerm, usize>,
    /// Random terms by increasing rank.
    pub order: Vec<AttrTerm>,
}

/// Why no leveling exists, or why a proposed one fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoLeveling {
    pub clause: u8,
    pub message: String,
}

impl fmt::Display for NoLeveling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause {}: {}", self.clause, self.message)
    }
}

impl fmt::Display for Leveling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ranks.iter().map(|(t, r)| format!("|{}| = {}", t, r)).collect();
        write!(f, "{}", parts.join(", "))
    }
}

impl Leveling {
    pub fn rank(&self, t: &AttrTerm) -> usize {
        self.ranks.get(t).copied().unwrap_or(0)
    }
}

/// Terms in a selection premise and dynamic range, or in a pr-atom condition, paired with the clause they fall under.
fn lower_bounds(g: &GroundProgram) -> Vec<(AttrTerm, u8, BTreeSet<AttrTerm>)> {
    let mut out = Vec::new();
    for s in &g.selections {
        let mut b: BTreeSet<AttrTerm> = s.body.iter().map(|e| e.lit.term.clone()).collect();
        if let Some(p) = &s.dynamic {
            b.extend(
                g.range(&s.term)
                    .iter()
                    .filter_map(|y| g.dynamic_lit(p, y))
                    .map(|l| l.term),
            );
        }
        out.push((s.term.clone(), 2, b));
    }
    for p in &g.prs {
        out.push((
            p.atom.term.clone(),
            3,
            p.body.iter().map(|e| e.lit.term.clone()).collect(),
        ));
    }
    out
}

fn random_terms(g: &GroundProgram) -> Vec<AttrTerm> {
    let mut seen = BTreeSet::new();
    g.selections
        .iter()
        .filter(|s| seen.insert(&s.term))
        .map(|s| s.term.clone())
        .collect()
}

/// Verifies the four clauses for the given ranks; missing terms rank 0.
pub fn check_leveling(
    g: &GroundProgram,
    d: &DependencyGraph,
    ranks: &BTreeMap<AttrTerm, usize>,
) -> Result<Leveling, NoLeveling> {
    let rank = |t: &AttrTerm| ranks.get(t).copied().unwrap_or(0);
    let random = random_terms(g);
    let mut by_rank: BTreeMap<usize, &AttrTerm> = BTreeMap::new();
    for t in &random {
        if let Some(other) = by_rank.insert(rank(t), t) {
            return Err(NoLeveling {
                clause: 1,
                message: format!("random terms {} and {} share level {}", other, t, rank(t)),
            });
        }
    }
    for (t, clause, body) in lower_bounds(g) {
        if let Some(b) = body.iter().max_by_key(|b| rank(b)) {
            if rank(&t) <= rank(b) {
                return Err(NoLeveling {
                    clause,
                    message: format!("|{}| = {} is not above |{}| = {}", t, rank(&t), b, rank(b)),
                });
            }
        }
    }
    let rset: BTreeSet<&AttrTerm> = random.iter().collect();
    for t in d.terms() {
        if rset.contains(t) {
            continue;
        }
        for r in &random {
            if d.depends(t, r) && rank(t) < rank(r) {
                return Err(NoLeveling {
                    clause: 4,
                    message: format!("{} depends on random {} but |{}| = {} < {}", t, r, t, rank(t), rank(r)),
                });
            }
        }
    }
    let mut order = random.clone();
    order.sort_by_key(|t| rank(t));
    let mut all = ranks.clone();
    for t in d.terms() {
        all.entry(t.clone()).or_insert(0);
    }
    Ok(Leveling { ranks: all, order })
}

/// Searches for a strict probabilistic leveling.
///
/// Random terms are ordered so that each comes after every random term its premises and pr-atom
/// conditions depend on; ties keep program order. Each random term then takes the least rank above
/// its predecessor and its premises, and each non-random term the largest rank among the random
/// terms it depends on.
pub fn find_leveling(g: &GroundProgram, d: &DependencyGraph) -> Result<Leveling, NoLeveling> {
    let random = random_terms(g);
    let pos: HashMap<&AttrTerm, usize> = random.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let random_deps = |b: &AttrTerm| -> Vec<usize> {
        match pos.get(b) {
            Some(&i) => vec![i],
            None => random
                .iter()
                .enumerate()
                .filter(|(_, r)| d.depends(b, r))
                .map(|(i, _)| i)
                .collect(),
        }
    };
    let n = random.len();
    let mut before: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let bounds = lower_bounds(g);
    for (t, clause, body) in &bounds {
        let Some(&i) = pos.get(t) else {
            return Err(NoLeveling {
                clause: *clause,
                message: format!("{} has a pr-atom but no selection rule", t),
            });
        };
        for b in body {
            for j in random_deps(b) {
                if j == i {
                    return Err(NoLeveling {
                        clause: *clause,
                        message: format!("{} would need a level above {}, which depends on it", t, b),
                    });
                }
                before[i].insert(j);
            }
        }
    }
    let mut placed = vec![false; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    while order.len() < n {
        let Some(i) = (0..n).find(|&i| !placed[i] && before[i].iter().all(|&j| placed[j])) else {
            let stuck: Vec<String> = (0..n).filter(|&i| !placed[i]).map(|i| random[i].to_string()).collect();
            return Err(NoLeveling {
                clause: 2,
                message: format!("random terms {} depend on one another cyclically", stuck.join(", ")),
            });
        };
        placed[i] = true;
        order.push(i);
    }
    let mut ranks: BTreeMap<AttrTerm, usize> = BTreeMap::new();
    let nonrandom_rank = |ranks: &BTreeMap<AttrTerm, usize>, b: &AttrTerm| -> usize {
        random_deps(b)
            .iter()
            .filter_map(|&j| ranks.get(&random[j]).copied())
            .max()
            .unwrap_or(0)
    };
    let mut prev: Option<usize> = None;
    for &i in &order {
        let t = &random[i];
        let mut r = prev.map_or(0, |p| p + 1);
        for (bt, _, body) in &bounds {
            if bt == t {
                for b in body {
                    r = r.max(nonrandom_rank(&ranks, b) + 1);
                }
            }
        }
        ranks.insert(t.clone(), r);
        prev = Some(r);
    }
    for t in d.terms() {
        if !pos.contains_key(t) {
            let r = nonrandom_rank(&ranks, t);
            ranks.insert(t.clone(), r);
        }
    }
    check_leveling(g, d, &ranks)
}

/// Sub-programs `Π_1 … Π_{n+1}` induced by a leveling, as ground programs without pr-atoms.
#[derive(Clone, Debug)]
pub struct InducedStructure {
    pub order: Vec<AttrTerm>,
    /// `programs[i]` is `Π_{i+1}`.
    pub programs: Vec<GroundProgram>,
    /// For each literal of the program, the least `i` with the literal in `L_i`.
    levels: HashMap<GLit, usize>,
}

impl InducedStructure {
    pub fn new(g: &GroundProgram, d: &DependencyGraph, lev: &Leveling) -> InducedStructure {
        let index: HashMap<AttrTerm, usize> = lev.order.iter().enumerate().map(|(i, t)| (t.clone(), i + 1)).collect();
        let levels: HashMap<GLit, usize> = d.max_reached(&index).into_iter().map(|(l, m)| (l, m + 1)).collect();
        let s = InducedStructure {
            order: lev.order.clone(),
            programs: Vec::new(),
            levels,
        };
        let n = lev.order.len();
        let programs = (1..=n + 1)
            .map(|i| GroundProgram {
                signature: g.signature.clone(),
                rules: g.rules.iter().filter(|r| s.rule_level(g, r) <= i).cloned().collect(),
                selections: g
                    .selections
                    .iter()
                    .filter(|x| s.selection_level(g, x) <= i)
                    .cloned()
                    .collect(),
                prs: Vec::new(),
                obs: g.obs.iter().filter(|l| s.level(l) <= i).cloned().collect(),
                dos: g.dos.iter().filter(|l| s.level(l) <= i).cloned().collect(),
                stats: BTreeMap::new(),
            })
            .collect();
        InducedStructure { programs, ..s }
    }

    /// Least `i` with `l` in `L_i`.
    pub fn level(&self, l: &GLit) -> usize {
        if let Some(&v) = self.levels.get(l) {
            return v;
        }
        self.order.iter().position(|t| *t == l.term).map_or(1, |i| i + 2)
    }

    fn rule_level(&self, _g: &GroundProgram, r: &crate::syntax::ground::GRule) -> usize {
        r.head
            .iter()
            .chain(r.body.iter().map(|b| &b.lit))
            .map(|l| self.level(l))
            .max()
            .unwrap_or(1)
    }

    fn selection_level(&self, g: &GroundProgram, s: &crate::syntax::ground::GSelection) -> usize {
        let mut lits: Vec<GLit> = g.range(&s.term).iter().map(|y| g.assign(&s.term, y)).collect();
        lits.extend(s.body.iter().map(|b| b.lit.clone()));
        if let Some(p) = &s.dynamic {
            lits.extend(g.range(&s.term).iter().filter_map(|y| g.dynamic_lit(p, y)));
        }
        lits.iter().map(|l| self.level(l)).max().unwrap_or(1)
    }

    /// Source statements (numbered from 1) of each `Π_i`. Declarations belong to every `Π_i`;
    /// pr-atoms to none.
    pub fn statement_sets(&self, p: &Program, g: &GroundProgram) -> Vec<BTreeSet<usize>> {
        let mut stmt_level: BTreeMap<usize, usize> = BTreeMap::new();
        let mut bump = |origin: usize, lv: usize| {
            if origin != ADDED {
                let e = stmt_level.entry(origin).or_insert(1);
                *e = (*e).max(lv);
            }
        };
        for r in &g.rules {
            bump(r.origin, self.rule_level(g, r));
        }
        for s in &g.selections {
            bump(s.origin, self.selection_level(g, s));
        }
        for (i, st) in p.statements.iter().enumerate() {
            if let Stmt::Obs(a) | Stmt::Do(a) = &st.kind {
                let lit = resolve_literal(&p.signature, a)
                    .ok()
                    .and_then(|pat| ground_lit(&p.signature, &pat, &Subst::new()).ok().flatten());
                if let Some(l) = lit {
                    bump(i, self.level(&l));
                }
            }
        }
        (1..=self.programs.len())
            .map(|k| {
                p.statements
                    .iter()
                    .enumerate()
                    .filter(|(i, st)| match st.kind {
                        Stmt::Pr { .. } => false,
                        _ => stmt_level.get(i).map_or(true, |&lv| lv <= k),
                    })
                    .map(|(i, _)| i + 1)
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::syntax::ground::ground;

    pub(crate) const MONTY: &str = "
        doors = {1,2,3}.
        open, selected, prize : doors.
        can_open : doors -> boolean.
        ~can_open(D) :- selected = D.
        ~can_open(D) :- prize = D.
        can_open(D) :- not ~can_open(D).
        random(prize).
        random(selected).
        random(open : {X : can_open(X)}).
        pr(open = 2 |c can_open(2), can_open(3)) = 4/5.
    ";

    fn setup(src: &str) -> (Program, GroundProgram, DependencyGraph) {
        let p = Program::parse(src).unwrap();
        let g = ground(&p).unwrap();
        let d = DependencyGraph::new(&g);
        (p, g, d)
    }

    fn term(s: &str, args: Vec<crate::Term>) -> AttrTerm {
        AttrTerm::new(s, args)
    }

    #[test]
    fn monty_leveling_and_structure() {
        let (p, g, d) = setup(MONTY);
        let mut given = BTreeMap::new();
        given.insert(term("prize", vec![]), 0);
        given.insert(term("selected", vec![]), 1);
        given.insert(term("open", vec![]), 2);
        for i in 1..=3 {
            given.insert(term("can_open", vec![crate::Term::Int(i)]), 1);
        }
        let lev = check_leveling(&g, &d, &given).unwrap();
        let found = find_leveling(&g, &d).unwrap();
        assert_eq!(found.ranks, lev.ranks);
        let names: Vec<String> = lev.order.iter().map(|t| t.to_string()).collect();
        assert_eq!(names, ["prize", "selected", "open"]);
        let ind = InducedStructure::new(&g, &d, &lev);
        let sets = ind.statement_sets(&p, &g);
        let expect: Vec<BTreeSet<usize>> = vec![
            [1, 2, 3].into(),
            [1, 2, 3, 7].into(),
            (1..=8).collect(),
            (1..=9).collect(),
        ];
        assert_eq!(sets, expect);
        assert_eq!(ind.programs[0].rules.len(), 0);
        assert_eq!(ind.programs[3].selections.len(), 3);
    }

    #[test]
    fn shared_level_is_rejected() {
        let (_, g, d) = setup("a, b : boolean. random(a). random(b).");
        let ranks: BTreeMap<AttrTerm, usize> = [(term("a", vec![]), 0), (term("b", vec![]), 0)].into();
        assert_eq!(check_leveling(&g, &d, &ranks).unwrap_err().clause, 1);
        let found = find_leveling(&g, &d).unwrap();
        assert_eq!(found.rank(&term("b", vec![])), 1);
    }

    #[test]
    fn single_random_attribute() {
        let (_, g, d) = setup("a : boolean. random(a).");
        let lev = find_leveling(&g, &d).unwrap();
        assert_eq!(lev.rank(&term("a", vec![])), 0);
    }

    #[test]
    fn premise_on_itself_has_no_leveling() {
        let (_, g, d) = setup("a, b : boolean. random(a) :- b. b :- a.");
        let e = find_leveling(&g, &d).unwrap_err();
        assert_eq!(e.clause, 2);
        let (_, g, d) = setup("a, b : boolean. random(a) :- b. random(b) :- a.");
        assert!(find_leveling(&g, &d).is_err());
    }

    #[test]
    fn clause_four_is_checked() {
        let (_, g, d) = setup("a, b : boolean. random(a). b :- a.");
        let ranks: BTreeMap<AttrTerm, usize> = [(term("a", vec![]), 1), (term("b", vec![]), 0)].into();
        assert_eq!(check_leveling(&g, &d, &ranks).unwrap_err().clause, 4);
    }
}
