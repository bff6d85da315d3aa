//! Resolution of parsed statements against the sorted signature.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::syntax::ast::{Atomic, BodyElem, SortItem, SortRef, SortSpec, Statement, Stmt};
use crate::syntax::parser;
use crate::syntax::sortprog;
use crate::syntax::term::{Expr, Rel, Term};

pub const BOOLEAN: &str = "boolean";
const RESERVED: &[&str] = &["intervene", "obs", "do", "random", "pr", "not", "mod", "or"];

/// A finite sort with its members in declaration order.
#[derive(Clone, Debug)]
pub struct Sort {
    pub name: String,
    pub members: Vec<Term>,
    /// Introduced by an inline `{...}` in an attribute declaration.
    pub anonymous: bool,
    set: HashSet<Term>,
}

impl Sort {
    fn new(name: &str, members: Vec<Term>, anonymous: bool) -> Sort {
        let mut seen = HashSet::new();
        let members: Vec<Term> = members.into_iter().filter(|m| seen.insert(m.clone())).collect();
        Sort {
            name: name.to_string(),
            set: seen,
            members,
            anonymous,
        }
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.set.contains(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttributeDecl {
    pub name: String,
    pub params: Vec<String>,
    pub range: String,
    pub boolean: bool,
}

/// Sorts and attribute declarations of a program.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    pub sorts: BTreeMap<String, Sort>,
    pub attributes: BTreeMap<String, AttributeDecl>,
}

impl Signature {
    pub fn sort(&self, name: &str) -> &Sort {
        &self.sorts[name]
    }

    pub fn attribute(&self, name: &str) -> Option<&AttributeDecl> {
        self.attributes.get(name)
    }

    pub fn range(&self, attr: &str) -> &[Term] {
        &self.sorts[&self.attributes[attr].range].members
    }

    pub fn is_boolean(&self, attr: &str) -> bool {
        self.attributes.get(attr).map_or(false, |a| a.boolean)
    }

    /// All constants occurring in some sort.
    pub fn objects(&self) -> Vec<Term> {
        let mut out: Vec<Term> = self.sorts.values().flat_map(|s| s.members.iter().cloned()).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// An attribute literal pattern `a(args)=value` or its negation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LitPat {
    pub attr: String,
    pub args: Vec<Expr>,
    pub value: Expr,
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BodyPat {
    Lit {
        naf: bool,
        lit: LitPat,
    },
    /// Builtin comparison; `naf` negates it.
    Cmp {
        naf: bool,
        rel: Rel,
        lhs: Expr,
        rhs: Expr,
    },
    /// Sort membership test `c(t)`.
    Member {
        naf: bool,
        sort: String,
        term: Expr,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Rule {
        head: Option<LitPat>,
        body: Vec<BodyPat>,
    },
    Random {
        name: Option<Expr>,
        attr: String,
        args: Vec<Expr>,
        dynamic: Option<String>,
        body: Vec<BodyPat>,
    },
    Pr {
        name: Option<Expr>,
        lit: LitPat,
        body: Vec<BodyPat>,
        value: Rational,
    },
    Obs(LitPat),
    Do(LitPat),
}

/// A resolved, not yet grounded program. Keeps the source statements for printing and merging.
#[derive(Clone, Debug)]
pub struct Program {
    pub statements: Vec<Statement>,
    pub signature: Signature,
    /// Resolved items tagged with the index of their source statement.
    pub items: Vec<(usize, Item)>,
    pub domains: HashMap<String, String>,
}

impl Program {
    pub fn parse(src: &str) -> Result<Program> {
        Program::from_statements(parser::parse(src)?)
    }

    pub fn from_statements(statements: Vec<Statement>) -> Result<Program> {
        let signature = build_signature(&statements)?;
        let mut domains = HashMap::new();
        for s in &statements {
            if let Stmt::Domain(pairs) = &s.kind {
                for (sort, var) in pairs {
                    if !signature.sorts.contains_key(sort) {
                        return Err(Error::Sort(format!("#domain refers to undeclared sort `{}`", sort)));
                    }
                    if let Some(prev) = domains.insert(var.clone(), sort.clone()) {
                        if prev != *sort {
                            return Err(Error::DuplicateDeclaration(format!(
                                "variable {} declared over `{}` and `{}`",
                                var, prev, sort
                            )));
                        }
                    }
                }
            }
        }
        let r = Resolver { sig: &signature };
        let mut items = Vec::new();
        for (i, s) in statements.iter().enumerate() {
            let at = |e: Error| match e {
                Error::Sort(m) => Error::Sort(format!("line {}: {}", s.line, m)),
                other => other,
            };
            let item = match &s.kind {
                Stmt::Rule { head, body } => {
                    let head = match head {
                        Some(h) => Some(r.literal(h).map_err(at)?),
                        None => None,
                    };
                    Item::Rule {
                        head,
                        body: r.body(body).map_err(at)?,
                    }
                }
                Stmt::Random {
                    name,
                    target,
                    dynamic,
                    body,
                } => {
                    let (attr, args) = r.attr_term(target).map_err(at)?;
                    let dynamic = match dynamic {
                        Some(d) => {
                            match signature.attribute(&d.pred) {
                                Some(a) if a.boolean && a.params.len() == 1 => {}
                                _ => {
                                    return Err(at(Error::Sort(format!(
                                        "dynamic range `{}` must be a unary boolean attribute",
                                        d.pred
                                    ))))
                                }
                            }
                            Some(d.pred.clone())
                        }
                        None => None,
                    };
                    Item::Random {
                        name: name.clone(),
                        attr,
                        args,
                        dynamic,
                        body: r.body(body).map_err(at)?,
                    }
                }
                Stmt::Pr {
                    name,
                    head,
                    body,
                    value,
                } => {
                    let lit = r.literal(head).map_err(at)?;
                    if !lit.positive && !signature.is_boolean(&lit.attr) {
                        return Err(at(Error::Sort(format!("pr-atom head `{}` must be an atom", head))));
                    }
                    Item::Pr {
                        name: name.clone(),
                        lit,
                        body: r.body(body).map_err(at)?,
                        value: value.clone(),
                    }
                }
                Stmt::Obs(a) => Item::Obs(r.literal(a).map_err(at)?),
                Stmt::Do(a) => {
                    let lit = r.literal(a).map_err(at)?;
                    if !lit.positive && !signature.is_boolean(&lit.attr) {
                        return Err(at(Error::Sort(format!("do expects an atom, got `{}`", a))));
                    }
                    Item::Do(lit)
                }
                Stmt::Sort { .. } | Stmt::Attribute { .. } | Stmt::Domain(_) => continue,
            };
            items.push((i, item));
        }
        Ok(Program {
            statements,
            signature,
            items,
            domains,
        })
    }

    /// Statement-level union, re-resolved against the merged signature.
    pub fn extend(&self, extra: Vec<Statement>) -> Result<Program> {
        let mut all = self.statements.clone();
        all.extend(extra);
        Program::from_statements(all)
    }

    /// The program without observations and actions.
    pub fn without_actions(&self) -> Result<Program> {
        let kept = self
            .statements
            .iter()
            .filter(|s| !matches!(s.kind, Stmt::Obs(_) | Stmt::Do(_)))
            .cloned()
            .collect();
        Program::from_statements(kept)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::syntax::printer::print_program(&self.statements))
    }
}

fn expand_items(items: &[SortItem]) -> Vec<Term> {
    let mut out = Vec::new();
    for it in items {
        match it {
            SortItem::Term(t) => out.push(t.clone()),
            SortItem::Range(lo, hi) => out.extend((*lo..=*hi).map(Term::Int)),
        }
    }
    out
}

fn build_signature(statements: &[Statement]) -> Result<Signature> {
    let mut sig = Signature::default();
    sig.sorts.insert(
        BOOLEAN.into(),
        Sort::new(BOOLEAN, vec![Term::sym("true"), Term::sym("false")], false),
    );
    let mut defs: HashMap<String, SortSpec> = HashMap::new();
    for s in statements {
        if let Stmt::Sort { name, def } = &s.kind {
            if name == BOOLEAN || RESERVED.contains(&name.as_str()) {
                return Err(Error::Sort(format!("line {}: `{}` is reserved", s.line, name)));
            }
            if let Some(prev) = defs.get(name) {
                if prev != def {
                    return Err(Error::DuplicateDeclaration(format!("sort `{}` redefined", name)));
                }
                continue;
            }
            let members = match def {
                SortSpec::Items(items) => expand_items(items),
                SortSpec::Range(lo, hi) => {
                    if lo > hi {
                        return Err(Error::Sort(format!("line {}: empty range {}..{}", s.line, lo, hi)));
                    }
                    (*lo..=*hi).map(Term::Int).collect()
                }
                SortSpec::Program(rules) => sortprog::evaluate(name, rules)?,
            };
            if members.is_empty() {
                return Err(Error::Sort(format!("line {}: sort `{}` is empty", s.line, name)));
            }
            defs.insert(name.clone(), def.clone());
            sig.sorts.insert(name.clone(), Sort::new(name, members, false));
        }
    }
    for s in statements {
        if let Stmt::Attribute { names, params, range } = &s.kind {
            let first = &names[0];
            let mut resolve = |r: &SortRef, tag: String| -> Result<String> {
                match r {
                    SortRef::Named(n) if sig.sorts.contains_key(n) => Ok(n.clone()),
                    SortRef::Named(n) => Err(Error::Sort(format!("line {}: undeclared sort `{}`", s.line, n))),
                    SortRef::Inline(items) => {
                        let members = expand_items(items);
                        if members.is_empty() {
                            return Err(Error::Sort(format!("line {}: empty inline sort", s.line)));
                        }
                        let name = format!("{}__{}", first, tag);
                        sig.sorts.insert(name.clone(), Sort::new(&name, members, true));
                        Ok(name)
                    }
                }
            };
            let mut ps = Vec::new();
            for (i, p) in params.iter().enumerate() {
                ps.push(resolve(p, format!("arg{}", i + 1))?);
            }
            let range = resolve(range, "range".into())?;
            for n in names {
                if RESERVED.contains(&n.as_str()) {
                    return Err(Error::Sort(format!("line {}: `{}` is reserved", s.line, n)));
                }
                if sig.sorts.contains_key(n) {
                    return Err(Error::Sort(format!(
                        "line {}: `{}` is both a sort and an attribute",
                        s.line, n
                    )));
                }
                let decl = AttributeDecl {
                    name: n.clone(),
                    params: ps.clone(),
                    boolean: range == BOOLEAN,
                    range: range.clone(),
                };
                if let Some(prev) = sig.attributes.get(n) {
                    if !same_decl(&sig, prev, &decl) {
                        return Err(Error::DuplicateDeclaration(format!("attribute `{}` redeclared", n)));
                    }
                    continue;
                }
                sig.attributes.insert(n.clone(), decl);
            }
        }
    }
    Ok(sig)
}

fn same_decl(sig: &Signature, a: &AttributeDecl, b: &AttributeDecl) -> bool {
    let members = |s: &String| &sig.sorts[s].members;
    a.params.len() == b.params.len()
        && a.params.iter().zip(&b.params).all(|(x, y)| members(x) == members(y))
        && members(&a.range) == members(&b.range)
}

struct Resolver<'a> {
    sig: &'a Signature,
}

impl Resolver<'_> {
    fn attr_term(&self, e: &Expr) -> Result<(String, Vec<Expr>)> {
        let (name, args) = match e {
            Expr::Sym(n) => (n.clone(), Vec::new()),
            Expr::App(n, args) => (n.clone(), args.clone()),
            _ => return Err(Error::Sort(format!("`{}` is not an attribute term", e))),
        };
        match self.sig.attribute(&name) {
            Some(a) if a.params.len() == args.len() => Ok((name, args)),
            Some(a) => Err(Error::Sort(format!(
                "attribute `{}` takes {} arguments, got {}",
                name,
                a.params.len(),
                args.len()
            ))),
            None => Err(Error::Sort(format!("undeclared attribute `{}/{}`", name, args.len()))),
        }
    }

    fn is_attr_term(&self, e: &Expr) -> bool {
        match e {
            Expr::Sym(n) => self.sig.attribute(n).map_or(false, |a| a.params.is_empty()),
            Expr::App(n, args) => self.sig.attribute(n).map_or(false, |a| a.params.len() == args.len()),
            _ => false,
        }
    }

    fn literal(&self, a: &Atomic) -> Result<LitPat> {
        let (attr, args) = self.attr_term(&a.lhs)?;
        let boolean = self.sig.is_boolean(&attr);
        let (value, positive) = match &a.rel {
            None if boolean => (Expr::sym("true"), !a.neg),
            None => {
                return Err(Error::Sort(format!(
                    "attribute `{}` is not boolean; give it a value",
                    attr
                )))
            }
            Some((Rel::Eq, v)) => (v.clone(), !a.neg),
            Some((Rel::Ne, v)) => (v.clone(), a.neg),
            Some((rel, _)) => {
                return Err(Error::Sort(format!(
                    "`{}` cannot relate attribute `{}` to a value",
                    rel.symbol(),
                    attr
                )))
            }
        };
        Ok(LitPat {
            attr,
            args,
            value,
            positive,
        })
    }

    fn body(&self, body: &[BodyElem]) -> Result<Vec<BodyPat>> {
        body.iter().map(|b| self.body_elem(b)).collect()
    }

    fn body_elem(&self, b: &BodyElem) -> Result<BodyPat> {
        let a = &b.atom;
        if self.is_attr_term(&a.lhs) {
            return Ok(BodyPat::Lit {
                naf: b.naf,
                lit: self.literal(a)?,
            });
        }
        match (&a.lhs, &a.rel) {
            (Expr::App(s, args), None) if !a.neg && args.len() == 1 && self.sig.sorts.contains_key(s) => {
                Ok(BodyPat::Member {
                    naf: b.naf,
                    sort: s.clone(),
                    term: args[0].clone(),
                })
            }
            (_, Some((rel, rhs)))
                if !a.neg && !matches!(&a.lhs, Expr::App(n, _) if self.sig.attribute(n).is_some()) =>
            {
                Ok(BodyPat::Cmp {
                    naf: b.naf,
                    rel: *rel,
                    lhs: a.lhs.clone(),
                    rhs: rhs.clone(),
                })
            }
            _ => {
                self.attr_term(&a.lhs)?;
                Err(Error::Sort(format!("cannot interpret `{}`", a)))
            }
        }
    }
}

/// Resolves a single literal (for `--obs`/`--do` and queries) against a signature.
pub fn resolve_literal(sig: &Signature, a: &Atomic) -> Result<LitPat> {
    Resolver { sig }.literal(a)
}

/// Resolves an extended literal or comparison against a signature.
pub fn resolve_body_elem(sig: &Signature, b: &BodyElem) -> Result<BodyPat> {
    Resolver { sig }.body_elem(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_from_declarations() {
        let p = Program::parse("dice = {d1,d2}. roll : dice -> score.").unwrap_err();
        assert!(matches!(p, Error::Sort(_)));
        let p = Program::parse("dice = {d1,d2}. score = {1..6}. roll : dice -> score.").unwrap();
        assert_eq!(p.signature.sorts.len(), 3);
        assert_eq!(p.signature.range("roll").len(), 6);
        assert!(p.items.is_empty());
    }

    #[test]
    fn empty_program() {
        let p = Program::parse("").unwrap();
        assert!(p.items.is_empty());
        assert!(p.signature.attributes.is_empty());
    }

    #[test]
    fn roulette_slots() {
        let p = Program::parse("slot = {zero,double_zero,1..36}.").unwrap();
        assert_eq!(p.signature.sort("slot").members.len(), 38);
    }

    #[test]
    fn literal_sugar() {
        let p =
            Program::parse("a, b : boolean. c : {1,2}. a :- not b. ~a :- b. c<>1 :- ~a. c=2 :- c<>1, 1 < 2.").unwrap();
        match &p.items[2].1 {
            Item::Rule { head: Some(h), body } => {
                assert!(!h.positive);
                assert!(matches!(&body[0], BodyPat::Lit { naf: false, lit } if !lit.positive));
            }
            other => panic!("{:?}", other),
        }
        match &p.items[3].1 {
            Item::Rule { body, .. } => assert!(matches!(&body[1], BodyPat::Cmp { rel: Rel::Lt, .. })),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(Program::parse("a : boolean. b :- a."), Err(Error::Sort(_))));
        assert!(matches!(Program::parse("c : {1,2}. c :- c=1."), Err(Error::Sort(_))));
        assert!(matches!(
            Program::parse("s = {a}. s = {b}."),
            Err(Error::DuplicateDeclaration(_))
        ));
        assert!(matches!(
            Program::parse("a : boolean. a : {1,2}."),
            Err(Error::DuplicateDeclaration(_))
        ));
        assert!(Program::parse("a : boolean. a : boolean.").is_ok());
        assert!(matches!(Program::parse("intervene : boolean."), Err(Error::Sort(_))));
        assert!(matches!(
            Program::parse("a : {1,2}. p : boolean. random(a : {X : p(X)})."),
            Err(Error::Sort(_))
        ));
    }
}
