//! Finite Bayesian networks: import into P-log, interventional probabilities, and the check that
//! `P_r` agrees with the imported program under `do(r)`.

mod cbn;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::syntax::ast::Atomic;
use crate::syntax::ground::{AttrTerm, ExtLit};
use crate::syntax::parser::parse_atomic;
use crate::syntax::program::Program;
use crate::syntax::term::Term;
use crate::updates::do_update;
use crate::worlds::{Formula, Model};

pub use cbn::{cbn_failures, CbnFailure, InterventionalDistribution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub domain: Vec<Term>,
    pub parents: Vec<usize>,
    /// Distribution over the domain for each assignment to the parents, by value index.
    pub cpt: BTreeMap<Vec<usize>, Vec<Rational>>,
}

impl Variable {
    fn is_boolean(&self) -> bool {
        self.domain.len() == 2
            && self
                .domain
                .iter()
                .all(|t| matches!(t, Term::Sym(s) if s == "true" || s == "false"))
    }
}

/// A network whose variables are listed in topological order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BayesNet {
    pub vars: Vec<Variable>,
}

/// Partial assignment of value indices to variable indices.
pub type Intervention = BTreeMap<usize, usize>;

#[derive(Deserialize)]
struct NetFile {
    variables: Vec<VarSpec>,
}

#[derive(Deserialize)]
struct VarSpec {
    name: String,
    domain: Vec<Value>,
    #[serde(default)]
    parents: Vec<String>,
    cpt: Vec<RowSpec>,
}

#[derive(Deserialize)]
struct RowSpec {
    #[serde(default)]
    given: Vec<Value>,
    probs: Vec<Value>,
}

fn invalid(msg: String) -> Error {
    Error::InvalidNet(msg)
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().map_or(false, |c| c.is_ascii_lowercase()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn value_term(v: &Value) -> Result<Term> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Term::Int)
            .ok_or_else(|| invalid(format!("domain value {} is not an integer", n))),
        Value::Bool(b) => Ok(Term::sym(if *b { "true" } else { "false" })),
        Value::String(s) => match s.parse::<i64>() {
            Ok(n) => Ok(Term::Int(n)),
            Err(_) if is_ident(s) => Ok(Term::sym(s)),
            Err(_) => Err(invalid(format!(
                "domain value `{}` is neither an identifier nor an integer",
                s
            ))),
        },
        other => Err(invalid(format!("bad domain value {}", other))),
    }
}

fn prob_value(v: &Value) -> Result<Rational> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(invalid(format!("bad probability {}", other))),
    };
    s.parse().map_err(|_| invalid(format!("bad probability `{}`", s)))
}

/// All total assignments over the given domain sizes, first variable varying slowest.
pub fn assignments(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|a| (0..n).map(move |i| [a.clone(), vec![i]].concat()))
            .collect();
    }
    out
}

impl BayesNet {
    pub fn from_json(src: &str) -> Result<BayesNet> {
        let file: NetFile = serde_json::from_str(src).map_err(|e| invalid(e.to_string()))?;
        let names: Vec<&str> = file.variables.iter().map(|v| v.name.as_str()).collect();
        let mut vars = Vec::new();
        for spec in &file.variables {
            if !is_ident(&spec.name) {
                return Err(invalid(format!("variable name `{}` is not an identifier", spec.name)));
            }
            let domain: Vec<Term> = spec.domain.iter().map(value_term).collect::<Result<_>>()?;
            let parents: Vec<usize> = spec
                .parents
                .iter()
                .map(|p| {
                    names
                        .iter()
                        .position(|n| n == p)
                        .ok_or_else(|| invalid(format!("unknown parent `{}`", p)))
                })
                .collect::<Result<_>>()?;
            vars.push((
                spec,
                Variable {
                    name: spec.name.clone(),
                    domain,
                    parents,
                    cpt: BTreeMap::new(),
                },
            ));
        }
        let mut cpts = Vec::new();
        for (spec, var) in &vars {
            let mut cpt = BTreeMap::new();
            for row in &spec.cpt {
                if row.given.len() != var.parents.len() {
                    return Err(invalid(format!(
                        "row of `{}` gives {} parent values",
                        var.name,
                        row.given.len()
                    )));
                }
                let key: Vec<usize> = row
                    .given
                    .iter()
                    .zip(&var.parents)
                    .map(|(g, &p)| {
                        let t = value_term(g)?;
                        vars[p]
                            .1
                            .domain
                            .iter()
                            .position(|d| *d == t)
                            .ok_or_else(|| invalid(format!("`{}` is not a value of `{}`", t, vars[p].1.name)))
                    })
                    .collect::<Result<_>>()?;
                let probs: Vec<Rational> = row.probs.iter().map(prob_value).collect::<Result<_>>()?;
                if cpt.insert(key, probs).is_some() {
                    return Err(invalid(format!("duplicate row in the table of `{}`", var.name)));
                }
            }
            cpts.push(cpt);
        }
        let vars: Vec<Variable> = vars
            .into_iter()
            .zip(cpts)
            .map(|((_, v), cpt)| Variable { cpt, ..v })
            .collect();
        BayesNet::new(vars)
    }

    /// Validates the network and reorders its variables topologically, keeping the given order among
    /// unrelated variables.
    pub fn new(vars: Vec<Variable>) -> Result<BayesNet> {
        let n = vars.len();
        let mut seen = std::collections::BTreeSet::new();
        for v in &vars {
            if !seen.insert(&v.name) {
                return Err(invalid(format!("variable `{}` declared twice", v.name)));
            }
            if v.domain.is_empty() {
                return Err(invalid(format!("variable `{}` has an empty domain", v.name)));
            }
        }
        let mut order = Vec::new();
        let mut placed = vec![false; n];
        while order.len() < n {
            let next = (0..n).find(|&i| !placed[i] && vars[i].parents.iter().all(|&p| placed[p]));
            match next {
                Some(i) => {
                    placed[i] = true;
                    order.push(i);
                }
                None => return Err(invalid("the parent graph has a cycle".into())),
            }
        }
        let pos: Vec<usize> = {
            let mut p = vec![0; n];
            for (k, &i) in order.iter().enumerate() {
                p[i] = k;
            }
            p
        };
        let vars: Vec<Variable> = order
            .iter()
            .map(|&i| {
                let v = &vars[i];
                Variable {
                    parents: v.parents.iter().map(|&p| pos[p]).collect(),
                    ..v.clone()
                }
            })
            .collect();
        for v in &vars {
            let sizes: Vec<usize> = v.parents.iter().map(|&p| vars[p].domain.len()).collect();
            for key in assignments(&sizes) {
                let row = v
                    .cpt
                    .get(&key)
                    .ok_or_else(|| invalid(format!("table of `{}` misses a parent assignment", v.name)))?;
                if row.len() != v.domain.len() {
                    return Err(invalid(format!(
                        "row of `{}` has {} entries for {} values",
                        v.name,
                        row.len(),
                        v.domain.len()
                    )));
                }
                if row.iter().any(|p| p.is_negative() || *p > Rational::one()) {
                    return Err(invalid(format!("table of `{}` has an entry outside [0,1]", v.name)));
                }
                if !row.iter().cloned().sum::<Rational>().is_one() {
                    return Err(invalid(format!("a row of `{}` does not sum to 1", v.name)));
                }
            }
            if v.cpt.len() != assignments(&sizes).len() {
                return Err(invalid(format!(
                    "table of `{}` has rows for impossible parent values",
                    v.name
                )));
            }
        }
        Ok(BayesNet { vars })
    }

    /// Chain-rule network of a joint distribution: each variable has all earlier ones as parents and
    /// its table holds the conditional given that prefix. Prefixes of probability 0 get a uniform row.
    /// `joint` is indexed like [`assignments`] over the domain sizes.
    pub fn from_joint(names: &[&str], domains: Vec<Vec<Term>>, joint: &[Rational]) -> Result<BayesNet> {
        let sizes: Vec<usize> = domains.iter().map(|d| d.len()).collect();
        let all = assignments(&sizes);
        if names.len() != domains.len() || all.len() != joint.len() {
            return Err(invalid("joint table does not match the domains".into()));
        }
        if joint.iter().any(|p| p.is_negative()) || !joint.iter().cloned().sum::<Rational>().is_one() {
            return Err(invalid("joint table is not a distribution".into()));
        }
        let marginal = |prefix: &[usize]| -> Rational {
            all.iter()
                .zip(joint)
                .filter(|(x, _)| x.starts_with(prefix))
                .map(|(_, p)| p.clone())
                .sum()
        };
        let vars = (0..names.len())
            .map(|i| {
                let cpt = assignments(&sizes[..i])
                    .into_iter()
                    .map(|key| {
                        let base = marginal(&key);
                        let row = (0..sizes[i])
                            .map(|j| {
                                if base.is_zero() {
                                    Rational::new(1, sizes[i] as i64)
                                } else {
                                    &marginal(&[key.clone(), vec![j]].concat()) / &base
                                }
                            })
                            .collect();
                        (key, row)
                    })
                    .collect();
                Variable {
                    name: names[i].to_string(),
                    domain: domains[i].clone(),
                    parents: (0..i).collect(),
                    cpt,
                }
            })
            .collect();
        BayesNet::new(vars)
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.vars.iter().map(|v| v.domain.len()).collect()
    }

    /// Intervention from `name=value` pairs; boolean variables also accept `name` and `~name`.
    pub fn intervention<S: AsRef<str>>(&self, items: &[S]) -> Result<Intervention> {
        let mut r = Intervention::new();
        for item in items {
            let s = item.as_ref().trim();
            let (name, val) = match s.split_once('=') {
                Some((n, v)) => (n.trim(), v.trim().to_string()),
                None => match s.strip_prefix('~') {
                    Some(n) => (n.trim(), "false".to_string()),
                    None => (s, "true".to_string()),
                },
            };
            let i = self
                .index(name)
                .ok_or_else(|| invalid(format!("unknown variable `{}`", name)))?;
            let t = value_term(&Value::String(val.clone()))?;
            let j = self.vars[i]
                .domain
                .iter()
                .position(|d| *d == t)
                .ok_or_else(|| invalid(format!("`{}` is not a value of `{}`", val, name)))?;
            if r.insert(i, j).map_or(false, |old| old != j) {
                return Err(invalid(format!("`{}` is assigned twice", name)));
            }
        }
        Ok(r)
    }

    /// Literal text for `var = value`.
    fn literal(&self, i: usize, j: usize) -> String {
        let v = &self.vars[i];
        if v.is_boolean() {
            match &v.domain[j] {
                Term::Sym(s) if s == "true" => v.name.clone(),
                _ => format!("~{}", v.name),
            }
        } else {
            format!("{} = {}", v.name, v.domain[j])
        }
    }

    pub fn describe(&self, x: &[usize]) -> String {
        x.iter()
            .enumerate()
            .map(|(i, &j)| self.literal(i, j))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// The P-log program of a network: one attribute and random selection per variable, one pr-atom
/// per table entry conditioned on the parent assignment.
pub fn net_to_plog_source(b: &BayesNet) -> String {
    let mut out = String::new();
    for (i, v) in b.vars.iter().enumerate() {
        if v.is_boolean() {
            let _ = writeln!(out, "{} : boolean.", v.name);
        } else {
            let vals: Vec<String> = v.domain.iter().map(|t| t.to_string()).collect();
            let _ = writeln!(out, "dom_{} = {{{}}}.", v.name, vals.join(", "));
            let _ = writeln!(out, "{} : dom_{}.", v.name, v.name);
        }
        let _ = writeln!(out, "random({}).", v.name);
        for (key, row) in &v.cpt {
            let cond: Vec<String> = key.iter().zip(&v.parents).map(|(&j, &p)| b.literal(p, j)).collect();
            for (j, p) in row.iter().enumerate() {
                let head = b.literal(i, j);
                if cond.is_empty() {
                    let _ = writeln!(out, "pr({}) = {}.", head, p);
                } else {
                    let _ = writeln!(out, "pr({} |c {}) = {}.", head, cond.join(", "), p);
                }
            }
        }
    }
    out
}

pub fn net_to_plog(b: &BayesNet) -> Result<Program> {
    Program::parse(&net_to_plog_source(b))
}

/// `P_r` of a total assignment: the product of table entries over the variables `r` leaves alone,
/// and 0 when the assignment disagrees with `r`.
pub fn interventional_prob(b: &BayesNet, r: &Intervention, x: &[usize]) -> Rational {
    if r.iter().any(|(&i, &j)| x[i] != j) {
        return Rational::zero();
    }
    b.vars
        .iter()
        .enumerate()
        .filter(|(i, _)| !r.contains_key(i))
        .map(|(i, v)| {
            let key: Vec<usize> = v.parents.iter().map(|&p| x[p]).collect();
            v.cpt[&key][x[i]].clone()
        })
        .product()
}

/// One line of the comparison between the network and the program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremRow {
    pub assignment: Vec<usize>,
    pub net: Rational,
    pub program: Rational,
}

/// Both sides of the equation for every total assignment.
pub fn theorem_rows(b: &BayesNet, r: &Intervention) -> Result<Vec<TheoremRow>> {
    let prog = net_to_plog(b)?;
    let atoms: Vec<Atomic> = r
        .iter()
        .map(|(&i, &j)| parse_atomic(&b.literal(i, j)))
        .collect::<Result<_>>()?;
    let prog = if atoms.is_empty() {
        prog
    } else {
        do_update(&prog, &atoms)?
    };
    let model = Model::new(&prog)?;
    let table = model.table()?;
    let g = &model.ground;
    let mut rows = Vec::new();
    for x in assignments(&b.sizes()) {
        let lits: Vec<ExtLit> = x
            .iter()
            .enumerate()
            .map(|(i, &j)| ExtLit {
                lit: g.assign(&AttrTerm::new(&b.vars[i].name, vec![]), &b.vars[i].domain[j]),
                naf: false,
            })
            .collect();
        let program = Formula::conjunction(&lits).map_or(Rational::one(), |f| table.prob(&f));
        rows.push(TheoremRow {
            net: interventional_prob(b, r, &x),
            program,
            assignment: x,
        });
    }
    Ok(rows)
}

/// Whether `P_r` equals the probability under the imported program with `do(r)` on every total assignment.
pub fn check_cbn_theorem(b: &BayesNet, r: &Intervention) -> Result<bool> {
    Ok(theorem_rows(b, r)?.iter().all(|row| row.net == row.program))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const RAT: &str = r#"{"variables": [
        {"name": "a", "domain": ["true", "false"], "cpt": [{"probs": ["0.4", "0.6"]}]},
        {"name": "d", "domain": ["true", "false"], "parents": ["a"],
         "cpt": [{"given": ["true"], "probs": ["0.8", "0.2"]}, {"given": ["false"], "probs": ["0.1", "0.9"]}]}
    ]}"#;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rat_program() {
        let b = BayesNet::from_json(RAT).unwrap();
        let src = net_to_plog_source(&b);
        assert!(src.contains("pr(d |c a) = 4/5."));
        assert!(src.contains("pr(~d |c ~a) = 9/10."));
        let m = Model::new(&net_to_plog(&b).unwrap()).unwrap();
        assert_eq!(m.prob_of("d").unwrap(), r("0.38"));
    }

    #[test]
    fn rat_interventions() {
        let b = BayesNet::from_json(RAT).unwrap();
        let joint = |r: &Intervention| {
            assignments(&b.sizes())
                .iter()
                .map(|x| interventional_prob(&b, r, x))
                .collect::<Vec<_>>()
        };
        assert_eq!(
            joint(&Intervention::new()),
            [r("0.32"), r("0.08"), r("0.06"), r("0.54")]
        );
        assert_eq!(
            joint(&b.intervention(&["a"]).unwrap()),
            [r("0.8"), r("0.2"), r("0"), r("0")]
        );
        assert_eq!(
            joint(&b.intervention(&["d"]).unwrap()),
            [r("0.4"), r("0"), r("0.6"), r("0")]
        );
        assert_eq!(
            joint(&b.intervention(&["~a", "d"]).unwrap()),
            [r("0"), r("0"), r("1"), r("0")]
        );
        for items in [
            vec![],
            vec!["a"],
            vec!["~a"],
            vec!["d"],
            vec!["~d"],
            vec!["a", "d"],
            vec!["~a", "~d"],
        ] {
            assert!(
                check_cbn_theorem(&b, &b.intervention(&items).unwrap()).unwrap(),
                "{:?}",
                items
            );
        }
    }

    #[test]
    fn degenerate_variable() {
        let b = BayesNet::from_json(r#"{"variables": [{"name": "x", "domain": [0, 1], "cpt": [{"probs": [0, 1]}]}]}"#)
            .unwrap();
        let m = Model::new(&net_to_plog(&b).unwrap()).unwrap();
        assert_eq!(m.prob_of("x = 1").unwrap(), Rational::one());
    }

    #[test]
    fn rejects_bad_nets() {
        let cyc = r#"{"variables": [
            {"name": "a", "domain": [0, 1], "parents": ["b"], "cpt": [{"given": [0], "probs": [1, 0]}, {"given": [1], "probs": [1, 0]}]},
            {"name": "b", "domain": [0, 1], "parents": ["a"], "cpt": [{"given": [0], "probs": [1, 0]}, {"given": [1], "probs": [1, 0]}]}]}"#;
        assert!(matches!(BayesNet::from_json(cyc), Err(Error::InvalidNet(_))));
        let sum = r#"{"variables": [{"name": "a", "domain": [0, 1], "cpt": [{"probs": ["1/2", "1/3"]}]}]}"#;
        assert!(matches!(BayesNet::from_json(sum), Err(Error::InvalidNet(_))));
        let missing = r#"{"variables": [
            {"name": "a", "domain": [0, 1], "cpt": [{"probs": [1, 0]}]},
            {"name": "b", "domain": [0, 1], "parents": ["a"], "cpt": [{"given": [0], "probs": [1, 0]}]}]}"#;
        assert!(matches!(BayesNet::from_json(missing), Err(Error::InvalidNet(_))));
    }

    #[test]
    fn reorders_topologically() {
        let src = r#"{"variables": [
            {"name": "d", "domain": [0, 1], "parents": ["a"], "cpt": [{"given": [0], "probs": [1, 0]}, {"given": [1], "probs": ["1/2", "1/2"]}]},
            {"name": "a", "domain": [0, 1], "cpt": [{"probs": ["1/4", "3/4"]}]}]}"#;
        let b = BayesNet::from_json(src).unwrap();
        assert_eq!(b.vars[0].name, "a");
        assert_eq!(b.vars[1].parents, [0]);
        assert!(check_cbn_theorem(&b, &Intervention::new()).unwrap());
    }

    #[test]
    fn chain_rule_from_joint() {
        let bools = || vec![Term::sym("true"), Term::sym("false")];
        let joint = [r("0.32"), r("0.08"), r("0.06"), r("0.54")];
        let b = BayesNet::from_joint(&["a", "d"], vec![bools(), bools()], &joint).unwrap();
        assert_eq!(b.vars[0].cpt[&vec![]], [r("0.4"), r("0.6")]);
        assert_eq!(b.vars[1].cpt[&vec![1]], [r("0.1"), r("0.9")]);
        let zero = [r("1/2"), r("1/2"), r("0"), r("0")];
        let b = BayesNet::from_joint(&["a", "d"], vec![bools(), bools()], &zero).unwrap();
        assert_eq!(b.vars[1].cpt[&vec![1]], [r("1/2"), r("1/2")]);
        assert!(BayesNet::from_joint(&["a"], vec![bools()], &[r("1/2"), r("1/3")]).is_err());
    }
}
