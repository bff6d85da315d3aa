//! Sorts defined by a normal logic program: `c = #program { ... }.`
//! The program is grounded bottom-up and must have exactly one answer set;
//! the sort is the set of `t` with `c(t)` in it.

use std::collections::{HashMap, HashSet};

use crate::asp::{answer_sets, AspLit, AspProgram};
use crate::error::{Error, Result};
use crate::syntax::ast::{Atomic, ProgRule};
use crate::syntax::term::{builtin_compare, Expr, Subst, Term};

const MAX_INSTANCES: usize = 100_000;
const MAX_ROUNDS: usize = 1_000;

enum Elem<'a> {
    Atom {
        naf: bool,
        neg: bool,
        pred: &'a str,
        args: &'a [Expr],
    },
    Cmp(&'a Atomic),
}

fn split(a: &Atomic) -> Result<(bool, &str, &[Expr])> {
    match &a.lhs {
        Expr::Sym(p) => Ok((a.neg, p.as_str(), &[])),
        Expr::App(p, args) => Ok((a.neg, p.as_str(), args.as_slice())),
        other => Err(Error::Sort(format!("`{}` is not an atom", other))),
    }
}

fn elems(r: &ProgRule) -> Result<Vec<Elem<'_>>> {
    r.body
        .iter()
        .map(|b| {
            if b.atom.rel.is_some() {
                if b.naf {
                    return Err(Error::Sort(format!(
                        "`not {}` is not supported in sort programs",
                        b.atom
                    )));
                }
                Ok(Elem::Cmp(&b.atom))
            } else {
                let (neg, pred, args) = split(&b.atom)?;
                Ok(Elem::Atom {
                    naf: b.naf,
                    neg,
                    pred,
                    args,
                })
            }
        })
        .collect()
}

fn unify(pat: &Expr, t: &Term, s: &mut Subst) -> bool {
    match (pat, t) {
        (Expr::Var(v), _) => match s.get(v) {
            Some(bound) => bound == t,
            None => {
                s.insert(v.clone(), t.clone());
                true
            }
        },
        (Expr::Int(a), Term::Int(b)) => a == b,
        (Expr::Sym(a), Term::Sym(b)) => a == b,
        (Expr::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify(x, y, s))
        }
        (Expr::Bin(..), _) => pat.eval(s).map_or(false, |v| &v == t),
        _ => false,
    }
}

type GroundRule = (Option<AspLit>, Vec<AspLit>, Vec<AspLit>);

pub(crate) fn evaluate(name: &str, rules: &[ProgRule]) -> Result<Vec<Term>> {
    let unsafe_rule = |r: &ProgRule| Error::Sort(format!("unsafe rule in definition of sort `{}`: {:?}", name, r));
    let mut known: HashMap<(String, bool), Vec<Vec<Term>>> = HashMap::new();
    let mut known_set: HashSet<AspLit> = HashSet::new();
    let mut instances: Vec<GroundRule> = Vec::new();
    let mut seen: HashSet<GroundRule> = HashSet::new();
    let parsed: Vec<Vec<Elem>> = rules.iter().map(elems).collect::<Result<_>>()?;
    for round in 0.. {
        if round == MAX_ROUNDS {
            return Err(Error::UnboundedSort(name.to_string()));
        }
        let before = instances.len();
        for (r, body) in rules.iter().zip(&parsed) {
            let mut substs = vec![Subst::new()];
            for e in body {
                if let Elem::Atom {
                    naf: false,
                    neg,
                    pred,
                    args,
                } = e
                {
                    let empty = Vec::new();
                    let facts = known.get(&(pred.to_string(), *neg)).unwrap_or(&empty);
                    let mut next = Vec::new();
                    for s in &substs {
                        for f in facts {
                            if f.len() != args.len() {
                                continue;
                            }
                            let mut s2 = s.clone();
                            if args.iter().zip(f).all(|(a, t)| unify(a, t, &mut s2)) {
                                next.push(s2);
                            }
                        }
                    }
                    substs = next;
                }
            }
            'subst: for s in substs {
                let mut pos = Vec::new();
                let mut neg = Vec::new();
                for e in body {
                    match e {
                        Elem::Cmp(a) => {
                            let (rel, rhs) = a.rel.as_ref().unwrap();
                            let l = a.lhs.eval(&s).map_err(|_| unsafe_rule(r))?;
                            let rv = rhs.eval(&s).map_err(|_| unsafe_rule(r))?;
                            if builtin_compare(*rel, &l, &rv)? == a.neg {
                                continue 'subst;
                            }
                        }
                        Elem::Atom {
                            naf,
                            neg: n,
                            pred,
                            args,
                        } => {
                            let args = args.iter().map(|x| x.eval(&s)).collect::<Result<Vec<_>>>();
                            let lit = AspLit {
                                pred: pred.to_string(),
                                args: args.map_err(|_| unsafe_rule(r))?,
                                neg: *n,
                            };
                            if *naf {
                                neg.push(lit);
                            } else {
                                pos.push(lit);
                            }
                        }
                    }
                }
                let head = match &r.head {
                    Some(h) => {
                        if h.rel.is_some() {
                            return Err(Error::Sort(format!("`{}` cannot head a sort-program rule", h)));
                        }
                        let (n, pred, args) = split(h)?;
                        let args = args.iter().map(|x| x.eval(&s)).collect::<Result<Vec<_>>>();
                        Some(AspLit {
                            pred: pred.to_string(),
                            args: args.map_err(|_| unsafe_rule(r))?,
                            neg: n,
                        })
                    }
                    None => None,
                };
                let g = (head, pos, neg);
                if seen.insert(g.clone()) {
                    if let Some(h) = &g.0 {
                        if known_set.insert(h.clone()) {
                            known.entry((h.pred.clone(), h.neg)).or_default().push(h.args.clone());
                        }
                    }
                    instances.push(g);
                    if instances.len() > MAX_INSTANCES {
                        return Err(Error::UnboundedSort(name.to_string()));
                    }
                }
            }
        }
        if instances.len() == before {
            break;
        }
    }
    let mut prog = AspProgram::new();
    for (h, pos, neg) in instances {
        let head = h.into_iter().map(|l| prog.intern(l)).collect();
        let pos = pos.into_iter().map(|l| prog.intern(l)).collect();
        let neg = neg.into_iter().map(|l| prog.intern(l)).collect();
        prog.add_rule(head, pos, neg);
    }
    let sets = answer_sets(&prog)?;
    if sets.len() != 1 {
        return Err(Error::UnboundedSort(name.to_string()));
    }
    let mut members: Vec<Term> = sets[0]
        .0
        .iter()
        .map(|&i| prog.literal(i))
        .filter(|l| l.pred == name && !l.neg && l.args.len() == 1)
        .map(|l| l.args[0].clone())
        .collect();
    members.sort();
    Ok(members)
}
