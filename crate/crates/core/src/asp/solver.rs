//! Branch-and-propagate answer-set search.

use crate::asp::{canonical_order, AnswerSet, AspProgram, LitId};
use crate::error::{Error, Result};

pub const DEFAULT_NODE_BUDGET: usize = 5_000_000;

const UNK: u8 = 0;
const TRUE: u8 = 1;
const FALSE: u8 = 2;

/// Enumerates answer sets of an [`AspProgram`].
pub struct Solver<'a> {
    prog: &'a AspProgram,
    comp: Vec<Option<LitId>>,
    /// Rules mentioning each literal anywhere.
    occurs: Vec<Vec<usize>>,
    /// Rules with the literal in the head.
    heads: Vec<Vec<usize>>,
    budget: usize,
    nodes: usize,
    limit: Option<usize>,
    found: Vec<AnswerSet>,
}

/// All answer sets, canonically ordered.
pub fn answer_sets(prog: &AspProgram) -> Result<Vec<AnswerSet>> {
    Solver::new(prog).solve()
}

impl<'a> Solver<'a> {
    pub fn new(prog: &'a AspProgram) -> Solver<'a> {
        let n = prog.num_literals();
        let mut occurs = vec![Vec::new(); n];
        let mut heads = vec![Vec::new(); n];
        for (ri, r) in prog.rules.iter().enumerate() {
            for &h in &r.head {
                heads[h as usize].push(ri);
            }
            for &l in r.head.iter().chain(&r.pos).chain(&r.neg) {
                if occurs[l as usize].last() != Some(&ri) {
                    occurs[l as usize].push(ri);
                }
            }
        }
        let comp = (0..n as LitId).map(|i| prog.complement(i)).collect();
        Solver {
            prog,
            comp,
            occurs,
            heads,
            budget: DEFAULT_NODE_BUDGET,
            nodes: 0,
            limit: None,
            found: Vec::new(),
        }
    }

    /// Maximum number of search nodes before giving up with `BudgetExceeded`.
    pub fn with_budget(mut self, nodes: usize) -> Self {
        self.budget = nodes;
        self
    }

    /// Stop after this many answer sets.
    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn solve(mut self) -> Result<Vec<AnswerSet>> {
        let n = self.prog.num_literals();
        let mut a = vec![UNK; n];
        for l in 0..n {
            if self.heads[l].is_empty() {
                a[l] = FALSE;
            }
        }
        let all: Vec<usize> = (0..n).collect();
        if self.propagate(&mut a, all) {
            self.search(a)?;
        }
        let mut out = self.found;
        canonical_order(self.prog, &mut out);
        Ok(out)
    }

    fn done(&self) -> bool {
        self.limit.map_or(false, |k| self.found.len() >= k)
    }

    fn search(&mut self, a: Vec<u8>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(format!(
                "answer-set search exceeded {} nodes",
                self.budget
            )));
        }
        let pick = self.choose(&a);
        match pick {
            None => {
                let set: Vec<LitId> = (0..a.len()).filter(|&i| a[i] == TRUE).map(|i| i as LitId).collect();
                if self.prog.is_answer_set(&set) {
                    self.found.push(AnswerSet(set));
                }
            }
            Some(l) => {
                for v in [TRUE, FALSE] {
                    if self.done() {
                        break;
                    }
                    let mut b = a.clone();
                    b[l] = v;
                    if self.propagate(&mut b, vec![l]) {
                        self.search(b)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn choose(&self, a: &[u8]) -> Option<usize> {
        // Prefer a head literal of a rule whose body already holds.
        for r in &self.prog.rules {
            if r.head.len() > 1 && self.body_state(r, a) == TRUE && !r.head.iter().any(|&h| a[h as usize] == TRUE) {
                if let Some(&h) = r.head.iter().find(|&&h| a[h as usize] == UNK) {
                    return Some(h as usize);
                }
            }
        }
        a.iter().position(|&v| v == UNK)
    }

    fn body_state(&self, r: &crate::asp::AspRule, a: &[u8]) -> u8 {
        let mut unknown = false;
        for &p in &r.pos {
            match a[p as usize] {
                FALSE => return FALSE,
                UNK => unknown = true,
                _ => {}
            }
        }
        for &q in &r.neg {
            match a[q as usize] {
                TRUE => return FALSE,
                UNK => unknown = true,
                _ => {}
            }
        }
        if unknown {
            UNK
        } else {
            TRUE
        }
    }

    fn set(a: &mut [u8], l: LitId, v: u8, queue: &mut Vec<usize>) -> bool {
        let cur = a[l as usize];
        if cur == v {
            return true;
        }
        if cur != UNK {
            return false;
        }
        a[l as usize] = v;
        queue.push(l as usize);
        true
    }

    /// Unit propagation over rules, consistency and support. Returns false on conflict.
    fn propagate(&self, a: &mut [u8], mut queue: Vec<usize>) -> bool {
        let prog = self.prog;
        let mut rule_seen = vec![false; prog.rules.len()];
        while let Some(l) = queue.pop() {
            if a[l] == TRUE {
                if let Some(c) = self.comp[l] {
                    if !Self::set(a, c, FALSE, &mut queue) {
                        return false;
                    }
                }
            }
            let mut touched: Vec<usize> = Vec::new();
            for &ri in &self.occurs[l] {
                if !rule_seen[ri] {
                    rule_seen[ri] = true;
                    touched.push(ri);
                }
            }
            for &ri in &touched {
                rule_seen[ri] = false;
            }
            for ri in touched {
                let r = &prog.rules[ri];
                let body = self.body_state(r, a);
                let mut head_true = false;
                let mut open = Vec::new();
                for &h in &r.head {
                    match a[h as usize] {
                        TRUE => head_true = true,
                        UNK => open.push(h),
                        _ => {}
                    }
                }
                if body == TRUE && !head_true {
                    match open.len() {
                        0 => return false,
                        1 => {
                            if !Self::set(a, open[0], TRUE, &mut queue) {
                                return false;
                            }
                        }
                        _ => {}
                    }
                }
                if !head_true && open.is_empty() && body != FALSE {
                    // Body must be falsified; force the last open body literal.
                    let mut pending = Vec::new();
                    for &p in &r.pos {
                        if a[p as usize] == UNK {
                            pending.push((p, FALSE));
                        }
                    }
                    for &q in &r.neg {
                        if a[q as usize] == UNK {
                            pending.push((q, TRUE));
                        }
                    }
                    match pending.len() {
                        0 => return false,
                        1 => {
                            if !Self::set(a, pending[0].0, pending[0].1, &mut queue) {
                                return false;
                            }
                        }
                        _ => {}
                    }
                }
                for &h in &r.head {
                    if !self.support(a, h, &mut queue) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// A literal needs a rule with a possibly true body and no other true head literal.
    fn support(&self, a: &mut [u8], l: LitId, queue: &mut Vec<usize>) -> bool {
        let li = l as usize;
        if a[li] == FALSE {
            return true;
        }
        let mut cand = None;
        let mut count = 0;
        for &ri in &self.heads[li] {
            let r = &self.prog.rules[ri];
            if self.body_state(r, a) == FALSE {
                continue;
            }
            if r.head.iter().any(|&h| h != l && a[h as usize] == TRUE) {
                continue;
            }
            count += 1;
            cand = Some(ri);
            if count > 1 {
                break;
            }
        }
        match count {
            0 => Self::set(a, l, FALSE, queue),
            1 if a[li] == TRUE => {
                let r = &self.prog.rules[cand.unwrap()];
                r.pos.iter().all(|&p| Self::set(a, p, TRUE, queue))
                    && r.neg.iter().all(|&q| Self::set(a, q, FALSE, queue))
                    && r.head
                        .iter()
                        .filter(|&&h| h != l)
                        .all(|&h| Self::set(a, h, FALSE, queue))
            }
            _ => true,
        }
    }
}
