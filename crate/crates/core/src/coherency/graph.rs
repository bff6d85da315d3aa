//! Dependency between literals and between attribute terms.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::syntax::ground::{AttrTerm, GLit, GroundProgram};

/// Immediate dependency of head literals on body literals, over rules, selection rules and pr-atoms.
///
/// A selection rule for `a(t)` makes every `a(t)=y` depend on its body and on every `p(y')` of its
/// dynamic range; a pr-atom makes its atom depend on its condition.
#[derive(Clone, Debug)]
pub struct DependencyGraph {
    lits: Vec<GLit>,
    index: HashMap<GLit, usize>,
    edges: Vec<BTreeSet<usize>>,
    term_deps: BTreeMap<AttrTerm, BTreeSet<AttrTerm>>,
}

impl DependencyGraph {
    pub fn new(g: &GroundProgram) -> DependencyGraph {
        let mut d = DependencyGraph {
            lits: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            term_deps: BTreeMap::new(),
        };
        for r in &g.rules {
            let body: Vec<GLit> = r.body.iter().map(|b| b.lit.clone()).collect();
            match &r.head {
                Some(h) => d.add(h, &body),
                None => body.iter().for_each(|l| {
                    d.id(l);
                }),
            }
        }
        for s in &g.selections {
            let mut body: Vec<GLit> = s.body.iter().map(|b| b.lit.clone()).collect();
            if let Some(p) = &s.dynamic {
                body.extend(g.range(&s.term).iter().filter_map(|y| g.dynamic_lit(p, y)));
            }
            for y in g.range(&s.term) {
                d.add(&g.assign(&s.term, y), &body);
            }
        }
        for p in &g.prs {
            let body: Vec<GLit> = p.body.iter().map(|b| b.lit.clone()).collect();
            d.add(&p.atom, &body);
        }
        for l in g.obs.iter().chain(&g.dos) {
            d.id(l);
        }
        d.close_terms();
        d
    }

    fn id(&mut self, l: &GLit) -> usize {
        if let Some(&i) = self.index.get(l) {
            return i;
        }
        let i = self.lits.len();
        self.lits.push(l.clone());
        self.index.insert(l.clone(), i);
        self.edges.push(BTreeSet::new());
        i
    }

    fn add(&mut self, head: &GLit, body: &[GLit]) {
        let h = self.id(head);
        for b in body {
            let j = self.id(b);
            self.edges[h].insert(j);
        }
    }

    fn close_terms(&mut self) {
        let mut by_term: BTreeMap<AttrTerm, Vec<usize>> = BTreeMap::new();
        for (i, l) in self.lits.iter().enumerate() {
            by_term.entry(l.term.clone()).or_default().push(i);
        }
        for (t, starts) in by_term {
            let mut seen = vec![false; self.lits.len()];
            let mut stack = starts;
            let mut deps = BTreeSet::new();
            while let Some(i) = stack.pop() {
                if std::mem::replace(&mut seen[i], true) {
                    continue;
                }
                deps.insert(self.lits[i].term.clone());
                stack.extend(self.edges[i].iter().copied().filter(|&j| !seen[j]));
            }
            self.term_deps.insert(t, deps);
        }
    }

    /// Literals mentioned by the program.
    pub fn literals(&self) -> &[GLit] {
        &self.lits
    }

    /// Attribute terms mentioned by the program.
    pub fn terms(&self) -> impl Iterator<Item = &AttrTerm> {
        self.term_deps.keys()
    }

    /// Immediate dependency lifted to attribute terms.
    pub fn term_edges(&self) -> BTreeSet<(AttrTerm, AttrTerm)> {
        let mut out = BTreeSet::new();
        for (i, es) in self.edges.iter().enumerate() {
            for &j in es {
                out.insert((self.lits[i].term.clone(), self.lits[j].term.clone()));
            }
        }
        out
    }

    pub fn immediately_depends(&self, l1: &GLit, l2: &GLit) -> bool {
        match (self.index.get(l1), self.index.get(l2)) {
            (Some(&i), Some(&j)) => self.edges[i].contains(&j),
            _ => false,
        }
    }

    /// Reflexive-transitive dependency between literals.
    pub fn literal_depends(&self, l1: &GLit, l2: &GLit) -> bool {
        if l1 == l2 {
            return true;
        }
        let (Some(&i), Some(&j)) = (self.index.get(l1), self.index.get(l2)) else {
            return false;
        };
        let mut seen = vec![false; self.lits.len()];
        let mut stack = vec![i];
        while let Some(k) = stack.pop() {
            if k == j {
                return true;
            }
            if !std::mem::replace(&mut seen[k], true) {
                stack.extend(self.edges[k].iter().copied());
            }
        }
        false
    }

    /// Whether some literal of `t1` depends on some literal of `t2`. Every term depends on itself.
    pub fn depends(&self, t1: &AttrTerm, t2: &AttrTerm) -> bool {
        t1 == t2 || self.term_deps.get(t1).map_or(false, |d| d.contains(t2))
    }

    /// Terms `t` depends on, including itself.
    pub fn dependencies(&self, t: &AttrTerm) -> BTreeSet<AttrTerm> {
        let mut d = self.term_deps.get(t).cloned().unwrap_or_default();
        d.insert(t.clone());
        d
    }

    /// For every known literal, the largest `rank(t)` over terms `t` it depends on, where `rank` is
    /// given for some terms only. Literals depending on none of them get 0.
    pub(crate) fn max_reached(&self, rank: &HashMap<AttrTerm, usize>) -> HashMap<GLit, usize> {
        let mut val: Vec<usize> = self
            .lits
            .iter()
            .map(|l| rank.get(&l.term).copied().unwrap_or(0))
            .collect();
        loop {
            let mut changed = false;
            for i in 0..self.lits.len() {
                let m = self.edges[i].iter().map(|&j| val[j]).max().unwrap_or(0);
                if m > val[i] {
                    val[i] = m;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.lits.iter().cloned().zip(val).collect()
    }
}
