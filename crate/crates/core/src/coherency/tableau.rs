//! Unitary trees built by level-order expansion, and the worlds their leaves represent.
//!
//! Compatibility and guarantee are decided against the possible worlds of each layer program,
//! enumerated once per layer. Arc labels are computed from what the path guarantees, without
//! looking at the measure of any world.

use std::fmt::Write as _;

use crate::coherency::graph::DependencyGraph;
use crate::coherency::leveling::{InducedStructure, Leveling};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::syntax::ground::{AttrTerm, ExtLit, GLit, GroundProgram};
use crate::worlds::{Model, World};

#[derive(Clone, Debug)]
pub struct TNode {
    /// `None` for the root, which stands for `true`.
    pub label: Option<GLit>,
    pub parent: Option<usize>,
    /// Label of the arc from the parent; 1 for the root.
    pub arc: Rational,
    /// Product of the arc labels from the root.
    pub pv: Rational,
    pub children: Vec<usize>,
    /// The term this node branches on, if it is internal.
    pub branch: Option<AttrTerm>,
}

#[derive(Clone, Debug)]
pub struct Tableau {
    pub nodes: Vec<TNode>,
    /// Random terms in the order they were expanded.
    pub order: Vec<AttrTerm>,
    /// Possible worlds of the whole program, actions removed.
    pub worlds: Vec<World>,
}

/// Worlds among `worlds` containing every literal of `path`.
fn compatible<'w>(worlds: &'w [World], path: &[GLit]) -> Vec<&'w World> {
    worlds.iter().filter(|w| path.iter().all(|l| w.holds(l))).collect()
}

fn guarantees(comp: &[&World], body: &[ExtLit]) -> bool {
    !comp.is_empty() && comp.iter().all(|w| w.satisfies(body))
}

fn incompatible(comp: &[&World], body: &[ExtLit]) -> bool {
    !comp.iter().any(|w| w.satisfies(body))
}

fn positive(l: GLit) -> ExtLit {
    ExtLit { lit: l, naf: false }
}

/// Whether a node with the given path is ready to branch on the term of selection `sel`.
/// `worlds` are the possible worlds of the program relative to which the question is asked.
pub fn ready_to_branch(g: &GroundProgram, worlds: &[World], path: &[GLit], sel: usize) -> bool {
    let s = &g.selections[sel];
    if path.iter().any(|l| l.term == s.term && l.is_atom()) {
        return false;
    }
    let comp = compatible(worlds, path);
    if !guarantees(&comp, &s.body) {
        return false;
    }
    let prs_decided = g
        .prs
        .iter()
        .filter(|p| p.name == s.name && p.atom.term == s.term)
        .all(|p| guarantees(&comp, &p.body) || incompatible(&comp, &p.body));
    if !prs_decided {
        return false;
    }
    match &s.dynamic {
        None => true,
        Some(pred) => {
            let mut any = false;
            for y in g.range(&s.term) {
                let body = g.dynamic_lit(pred, y).map(|l| vec![positive(l)]);
                match body {
                    Some(b) if guarantees(&comp, &b) => any = true,
                    Some(b) if incompatible(&comp, &b) => {}
                    None => {}
                    Some(_) => return false,
                }
            }
            any
        }
    }
}

/// Labels of the arcs leaving a node ready to branch via `sel`, one per compatible value.
fn arc_labels(g: &GroundProgram, comp: &[&World], sel: usize) -> Result<Vec<(GLit, Rational)>> {
    let s = &g.selections[sel];
    let t = &s.term;
    let possible: Vec<GLit> = g
        .range(t)
        .iter()
        .filter(|y| match &s.dynamic {
            None => true,
            Some(pred) => g
                .dynamic_lit(pred, y)
                .map_or(false, |l| guarantees(comp, &[positive(l)])),
        })
        .map(|y| g.assign(t, y))
        .collect();
    let assigned = |atom: &GLit| {
        g.prs
            .iter()
            .find(|p| p.name == s.name && &p.atom == atom && guarantees(comp, &p.body))
            .map(|p| p.value.clone())
    };
    let alpha: Rational = possible.iter().filter_map(assigned).sum();
    let beta = possible.iter().filter(|a| assigned(a).is_none()).count() as i64;
    let mut out = Vec::new();
    for y in g.range(t) {
        let atom = g.assign(t, y);
        if !comp.iter().any(|w| w.holds(&atom)) {
            continue;
        }
        if !possible.contains(&atom) {
            return Err(Error::NotCausallyOrdered(format!(
                "{} is compatible with a path but not possible",
                atom
            )));
        }
        let v = match assigned(&atom) {
            Some(v) => v,
            None => {
                if alpha > Rational::one() {
                    return Err(Error::NegativeDefault {
                        term: t.to_string(),
                        sum: alpha.to_string(),
                    });
                }
                (Rational::one() - &alpha) * Rational::new(1, beta)
            }
        };
        out.push((atom, v));
    }
    Ok(out)
}

/// Tableau of the program with its observations and actions removed, expanding the random terms
/// in leveling order. Each layer decides readiness relative to the next program of the induced
/// structure together with all pr-atoms.
pub fn build_tableau(g: &GroundProgram, lev: &Leveling) -> Result<Tableau> {
    let g = g.without_actions();
    let d = DependencyGraph::new(&g);
    let ind = InducedStructure::new(&g, &d, lev);
    let mut nodes = vec![TNode {
        label: None,
        parent: None,
        arc: Rational::one(),
        pv: Rational::one(),
        children: Vec::new(),
        branch: None,
    }];
    let mut tab = Tableau {
        nodes: Vec::new(),
        order: ind.order.clone(),
        worlds: Vec::new(),
    };
    for (k, t) in ind.order.iter().enumerate() {
        let mut layer = ind.programs[k + 1].clone();
        layer.prs = g.prs.clone();
        let worlds = Model::from_ground(layer.clone())?.worlds;
        let sels: Vec<usize> = (0..layer.selections.len())
            .filter(|&i| &layer.selections[i].term == t)
            .collect();
        let leaves: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].children.is_empty()).collect();
        for n in leaves {
            let path = path_of(&nodes, n);
            let Some(&sel) = sels.iter().find(|&&i| ready_to_branch(&layer, &worlds, &path, i)) else {
                continue;
            };
            let comp = compatible(&worlds, &path);
            for (atom, v) in arc_labels(&layer, &comp, sel)? {
                let id = nodes.len();
                let pv = &nodes[n].pv * &v;
                nodes.push(TNode {
                    label: Some(atom),
                    parent: Some(n),
                    arc: v,
                    pv,
                    children: Vec::new(),
                    branch: None,
                });
                nodes[n].children.push(id);
            }
            nodes[n].branch = Some(t.clone());
        }
    }
    tab.nodes = nodes;
    tab.worlds = Model::from_ground(g)?.worlds;
    Ok(tab)
}

fn path_of(nodes: &[TNode], mut n: usize) -> Vec<GLit> {
    let mut out = Vec::new();
    loop {
        if let Some(l) = &nodes[n].label {
            out.push(l.clone());
        }
        match nodes[n].parent {
            Some(p) => n = p,
            None => break,
        }
    }
    out.reverse();
    out
}

impl Tableau {
    /// Labels on the way from the root to `n`, root excluded.
    pub fn path(&self, n: usize) -> Vec<GLit> {
        path_of(&self.nodes, n)
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].children.is_empty())
            .collect()
    }

    /// Arc labels leaving every internal node sum to 1.
    pub fn is_unitary(&self) -> bool {
        self.nodes.iter().filter(|n| !n.children.is_empty()).all(|n| {
            n.children
                .iter()
                .map(|&c| self.nodes[c].arc.clone())
                .sum::<Rational>()
                .is_one()
        })
    }

    /// Sum of the path values of the leaves below `n`.
    pub fn leaf_sum(&self, n: usize) -> Rational {
        let node = &self.nodes[n];
        if node.children.is_empty() {
            node.pv.clone()
        } else {
            node.children.iter().map(|&c| self.leaf_sum(c)).sum()
        }
    }

    /// The world a leaf represents: the only possible world compatible with its path.
    pub fn represented(&self, leaf: usize) -> Option<&World> {
        let path = self.path(leaf);
        let comp = compatible(&self.worlds, &path);
        match comp.as_slice() {
            [w] => Some(w),
            _ => None,
        }
    }

    /// Whether every possible world is represented by exactly one leaf and every leaf by one world.
    pub fn represents(&self) -> bool {
        let mut hits = vec![0usize; self.worlds.len()];
        for leaf in self.leaves() {
            match self.represented(leaf) {
                Some(w) => hits[self.worlds.iter().position(|x| x == w).expect("world of the program")] += 1,
                None => return false,
            }
        }
        hits.iter().all(|&h| h == 1)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.text_at(0, 0, &mut out);
        out
    }

    fn text_at(&self, n: usize, depth: usize, out: &mut String) {
        let node = &self.nodes[n];
        let indent = "  ".repeat(depth);
        match &node.label {
            None => {
                let _ = writeln!(out, "true");
            }
            Some(l) => {
                let _ = writeln!(out, "{}{} [{}] pv={}", indent, l, node.arc, node.pv);
            }
        }
        for &c in &node.children {
            self.text_at(c, depth + 1, out);
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tableau {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let label = n.label.as_ref().map_or("true".to_string(), |l| l.to_string());
            let _ = writeln!(out, "  n{} [label=\"{}\"];", i, label.replace('"', "\\\""));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", i, c, self.nodes[c].arc);
            }
        }
        out.push_str("}\n");
        out
    }
}
