//! Grounding: replaces sorted variables by sort members, evaluates builtins and
//! resolves selection names.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::syntax::program::{BodyPat, Item, LitPat, Program, Signature};
use crate::syntax::term::{builtin_compare, write_list, Expr, Subst, Term};

pub const DEFAULT_MAX_STATEMENTS: usize = 1_000_000;

/// A ground attribute term `a(t1,...,tn)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttrTerm {
    pub attr: String,
    pub args: Vec<Term>,
}

impl AttrTerm {
    pub fn new(attr: &str, args: Vec<Term>) -> AttrTerm {
        AttrTerm {
            attr: attr.to_string(),
            args,
        }
    }

    pub fn to_term(&self) -> Term {
        Term::app(&self.attr, self.args.clone())
    }
}

impl fmt::Display for AttrTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.attr)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            write_list(f, &self.args)?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A ground Σ-literal. Boolean literals always carry value `true`; `a=false` is the
/// negative literal `~a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GLit {
    pub term: AttrTerm,
    pub value: Term,
    pub positive: bool,
    pub boolean: bool,
}

impl GLit {
    /// The literal expressing `term = value`.
    pub fn assign(term: AttrTerm, value: Term, boolean: bool) -> GLit {
        if boolean {
            let positive = value != Term::sym("false");
            GLit {
                term,
                value: Term::sym("true"),
                positive,
                boolean,
            }
        } else {
            GLit {
                term,
                value,
                positive: true,
                boolean,
            }
        }
    }

    /// `term = value` when `positive`, otherwise `term != value`; normalized for booleans.
    pub fn new(term: AttrTerm, value: Term, positive: bool, boolean: bool) -> GLit {
        let l = GLit::assign(term, value, boolean);
        if positive {
            l
        } else {
            l.complement()
        }
    }

    pub fn complement(&self) -> GLit {
        GLit {
            positive: !self.positive,
            ..self.clone()
        }
    }

    /// Whether this literal is an atom `a(t)=y` (always for booleans).
    pub fn is_atom(&self) -> bool {
        self.boolean || self.positive
    }

    /// The `y` of the atom `a(t)=y`.
    pub fn assigned_value(&self) -> Option<Term> {
        if self.boolean {
            Some(Term::sym(if self.positive { "true" } else { "false" }))
        } else if self.positive {
            Some(self.value.clone())
        } else {
            None
        }
    }
}

impl fmt::Display for GLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.boolean {
            write!(f, "{}{}", if self.positive { "" } else { "~" }, self.term)
        } else {
            write!(
                f,
                "{}{}{}",
                self.term,
                if self.positive { "=" } else { "<>" },
                self.value
            )
        }
    }
}

/// A literal possibly under default negation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtLit {
    pub lit: GLit,
    pub naf: bool,
}

impl fmt::Display for ExtLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.naf { "not " } else { "" }, self.lit)
    }
}

fn write_body(f: &mut fmt::Formatter<'_>, body: &[ExtLit]) -> fmt::Result {
    for (i, b) in body.iter().enumerate() {
        write!(f, "{}{}", if i == 0 { "" } else { ", " }, b)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GRule {
    pub head: Option<GLit>,
    pub body: Vec<ExtLit>,
    pub origin: usize,
}

impl fmt::Display for GRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(h) = &self.head {
            write!(f, "{}", h)?;
            if !self.body.is_empty() {
                write!(f, " ")?;
            }
        }
        if !self.body.is_empty() {
            write!(f, ":- ")?;
            write_body(f, &self.body)?;
        }
        write!(f, ".")
    }
}

/// A ground random selection rule `[name] random(term : {X : dynamic(X)}) :- body.`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GSelection {
    pub name: Term,
    pub term: AttrTerm,
    pub dynamic: Option<String>,
    pub body: Vec<ExtLit>,
    pub origin: usize,
}

impl fmt::Display for GSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] random({}", self.name, self.term)?;
        if let Some(p) = &self.dynamic {
            write!(f, " : {{X : {}(X)}}", p)?;
        }
        write!(f, ")")?;
        if !self.body.is_empty() {
            write!(f, " :- ")?;
            write_body(f, &self.body)?;
        }
        write!(f, ".")
    }
}

/// A ground probability atom `pr[name](atom |c body) = value.`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GPr {
    pub name: Term,
    pub atom: GLit,
    pub body: Vec<ExtLit>,
    pub value: Rational,
    pub origin: usize,
}

impl fmt::Display for GPr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pr[{}]({}", self.name, self.atom)?;
        if !self.body.is_empty() {
            write!(f, " |c ")?;
            write_body(f, &self.body)?;
        }
        write!(f, ") = {}.", self.value)
    }
}

/// Per source statement: substitutions tried and ground instances kept.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundStat {
    pub substitutions: usize,
    pub instances: usize,
}

#[derive(Clone, Debug)]
pub struct GroundProgram {
    pub signature: Signature,
    pub rules: Vec<GRule>,
    pub selections: Vec<GSelection>,
    pub prs: Vec<GPr>,
    pub obs: Vec<GLit>,
    pub dos: Vec<GLit>,
    /// Keyed by source statement index.
    pub stats: BTreeMap<usize, GroundStat>,
}

/// Origin used for statements added after grounding.
pub const ADDED: usize = usize::MAX;

impl GroundProgram {
    pub fn range(&self, t: &AttrTerm) -> &[Term] {
        self.signature.range(&t.attr)
    }

    pub fn is_boolean(&self, attr: &str) -> bool {
        self.signature.is_boolean(attr)
    }

    /// `term = value` as a literal of this program.
    pub fn assign(&self, term: &AttrTerm, value: &Term) -> GLit {
        GLit::assign(term.clone(), value.clone(), self.is_boolean(&term.attr))
    }

    /// The literal `p(y)` for a dynamic range, or `None` if `y` is outside the domain of `p`.
    pub fn dynamic_lit(&self, pred: &str, y: &Term) -> Option<GLit> {
        let decl = self.signature.attribute(pred)?;
        if !self.signature.sort(&decl.params[0]).contains(y) {
            return None;
        }
        Some(GLit::assign(
            AttrTerm::new(pred, vec![y.clone()]),
            Term::sym("true"),
            true,
        ))
    }

    pub fn well_sorted(&self, l: &GLit) -> bool {
        well_sorted(&self.signature, l)
    }

    pub fn with_obs(&self, lits: &[GLit]) -> GroundProgram {
        let mut g = self.clone();
        g.obs.extend(lits.iter().cloned());
        g
    }

    pub fn with_dos(&self, lits: &[GLit]) -> GroundProgram {
        let mut g = self.clone();
        g.dos.extend(lits.iter().cloned());
        g
    }

    pub fn with_facts(&self, lits: &[GLit]) -> GroundProgram {
        let mut g = self.clone();
        g.rules.extend(lits.iter().map(|l| GRule {
            head: Some(l.clone()),
            body: vec![],
            origin: ADDED,
        }));
        g
    }

    pub fn without_actions(&self) -> GroundProgram {
        GroundProgram {
            obs: vec![],
            dos: vec![],
            ..self.clone()
        }
    }

    /// Selections for each attribute term, by index.
    pub fn selections_by_term(&self) -> BTreeMap<&AttrTerm, Vec<usize>> {
        let mut m: BTreeMap<&AttrTerm, Vec<usize>> = BTreeMap::new();
        for (i, s) in self.selections.iter().enumerate() {
            m.entry(&s.term).or_default().push(i);
        }
        m
    }

    /// Attribute terms occurring in rules, selections, obs and do.
    pub fn relevant_terms(&self) -> BTreeSet<AttrTerm> {
        let mut out = BTreeSet::new();
        let add_body = |out: &mut BTreeSet<AttrTerm>, body: &[ExtLit]| {
            for b in body {
                out.insert(b.lit.term.clone());
            }
        };
        for r in &self.rules {
            if let Some(h) = &r.head {
                out.insert(h.term.clone());
            }
            add_body(&mut out, &r.body);
        }
        for s in &self.selections {
            out.insert(s.term.clone());
            add_body(&mut out, &s.body);
            if let Some(p) = &s.dynamic {
                for y in self.range(&s.term) {
                    if let Some(l) = self.dynamic_lit(p, y) {
                        out.insert(l.term);
                    }
                }
            }
        }
        for l in self.obs.iter().chain(&self.dos) {
            out.insert(l.term.clone());
        }
        out
    }
}

fn well_sorted(sig: &Signature, l: &GLit) -> bool {
    let Some(decl) = sig.attribute(&l.term.attr) else {
        return false;
    };
    decl.params.len() == l.term.args.len()
        && decl
            .params
            .iter()
            .zip(&l.term.args)
            .all(|(s, t)| sig.sort(s).contains(t))
        && sig.sort(&decl.range).contains(&l.value)
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = &self.signature;
        for s in sig.sorts.values() {
            if s.anonymous || s.name == crate::syntax::program::BOOLEAN {
                continue;
            }
            write!(f, "{} = {{", s.name)?;
            write_list(f, &s.members)?;
            writeln!(f, "}}.")?;
        }
        let sort_ref = |name: &str| -> String {
            let s = sig.sort(name);
            if s.anonymous {
                let items: Vec<String> = s.members.iter().map(|m| m.to_string()).collect();
                format!("{{{}}}", items.join(","))
            } else {
                name.to_string()
            }
        };
        for a in sig.attributes.values() {
            write!(f, "{} : ", a.name)?;
            if !a.params.is_empty() {
                let ps: Vec<String> = a.params.iter().map(|p| sort_ref(p)).collect();
                write!(f, "{} -> ", ps.join(" * "))?;
            }
            writeln!(f, "{}.", sort_ref(&a.range))?;
        }
        for r in &self.rules {
            writeln!(f, "{}", r)?;
        }
        for s in &self.selections {
            writeln!(f, "{}", s)?;
        }
        for p in &self.prs {
            writeln!(f, "{}", p)?;
        }
        for o in &self.obs {
            writeln!(f, "obs({}).", o)?;
        }
        for d in &self.dos {
            writeln!(f, "do({}).", d)?;
        }
        Ok(())
    }
}

/// Grounding options.
#[derive(Clone, Copy, Debug)]
pub struct GroundConfig {
    pub max_statements: usize,
}

impl Default for GroundConfig {
    fn default() -> GroundConfig {
        GroundConfig {
            max_statements: DEFAULT_MAX_STATEMENTS,
        }
    }
}

pub fn ground(p: &Program) -> Result<GroundProgram> {
    ground_with(p, GroundConfig::default())
}

/// Outcome of instantiating one pattern under one substitution.
enum Inst<T> {
    Ok(T),
    /// A builtin is false: the instance does not exist.
    Skip,
    /// An element is ill-sorted.
    IllSorted(String),
}

/// Grounds a literal pattern; `None` if the result is ill-sorted.
pub fn ground_lit(sig: &Signature, l: &LitPat, s: &Subst) -> Result<Option<GLit>> {
    let args = l.args.iter().map(|a| a.eval(s)).collect::<Result<Vec<_>>>()?;
    let value = l.value.eval(s)?;
    let boolean = sig.is_boolean(&l.attr);
    let raw = GLit {
        term: AttrTerm::new(&l.attr, args),
        value,
        positive: l.positive,
        boolean,
    };
    if !well_sorted(sig, &raw) {
        return Ok(None);
    }
    Ok(Some(GLit::new(raw.term, raw.value, raw.positive, boolean)))
}

fn ground_body(sig: &Signature, body: &[BodyPat], s: &Subst) -> Result<Inst<Vec<ExtLit>>> {
    let mut out = Vec::new();
    for b in body {
        match b {
            BodyPat::Lit { naf, lit } => match ground_lit(sig, lit, s)? {
                Some(g) => {
                    let e = ExtLit { lit: g, naf: *naf };
                    if !out.contains(&e) {
                        out.push(e);
                    }
                }
                None if *naf => {}
                None => return Ok(Inst::IllSorted(format!("{:?}", lit))),
            },
            BodyPat::Cmp { naf, rel, lhs, rhs } => {
                if builtin_compare(*rel, &lhs.eval(s)?, &rhs.eval(s)?)? == *naf {
                    return Ok(Inst::Skip);
                }
            }
            BodyPat::Member { naf, sort, term } => {
                if sig.sort(sort).contains(&term.eval(s)?) == *naf {
                    return Ok(Inst::Skip);
                }
            }
        }
    }
    Ok(Inst::Ok(out))
}

fn lit_vars(l: &LitPat, out: &mut Vec<String>) {
    l.args.iter().for_each(|a| a.vars(out));
    l.value.vars(out);
}

fn body_vars(body: &[BodyPat], out: &mut Vec<String>) {
    for b in body {
        match b {
            BodyPat::Lit { lit, .. } => lit_vars(lit, out),
            BodyPat::Cmp { lhs, rhs, .. } => {
                lhs.vars(out);
                rhs.vars(out);
            }
            BodyPat::Member { term, .. } => term.vars(out),
        }
    }
}

/// Sort of each variable: `#domain` first, then the first attribute position it fills.
fn infer_sorts(p: &Program, item: &Item) -> Result<Vec<(String, String)>> {
    let sig = &p.signature;
    let mut vars = Vec::new();
    let mut hints: Vec<(String, String)> = Vec::new();
    let hint_lit = |hints: &mut Vec<(String, String)>, attr: &str, args: &[Expr], value: Option<&Expr>| {
        let decl = &sig.attributes[attr];
        for (e, s) in args.iter().zip(&decl.params) {
            if let Expr::Var(v) = e {
                hints.push((v.clone(), s.clone()));
            }
        }
        if let Some(Expr::Var(v)) = value {
            hints.push((v.clone(), decl.range.clone()));
        }
    };
    let hint_body = |hints: &mut Vec<(String, String)>, body: &[BodyPat]| {
        for b in body {
            match b {
                BodyPat::Lit { lit, .. } => hint_lit(hints, &lit.attr, &lit.args, Some(&lit.value)),
                BodyPat::Member {
                    sort,
                    term: Expr::Var(v),
                    ..
                } => hints.push((v.clone(), sort.clone())),
                _ => {}
            }
        }
    };
    match item {
        Item::Rule { head, body } => {
            if let Some(h) = head {
                lit_vars(h, &mut vars);
                hint_lit(&mut hints, &h.attr, &h.args, Some(&h.value));
            }
            body_vars(body, &mut vars);
            hint_body(&mut hints, body);
        }
        Item::Random {
            name, attr, args, body, ..
        } => {
            args.iter().for_each(|a| a.vars(&mut vars));
            hint_lit(&mut hints, attr, args, None);
            body_vars(body, &mut vars);
            hint_body(&mut hints, body);
            if let Some(n) = name {
                n.vars(&mut vars);
            }
        }
        Item::Pr { name, lit, body, .. } => {
            lit_vars(lit, &mut vars);
            hint_lit(&mut hints, &lit.attr, &lit.args, Some(&lit.value));
            body_vars(body, &mut vars);
            hint_body(&mut hints, body);
            if let Some(n) = name {
                n.vars(&mut vars);
            }
        }
        Item::Obs(l) | Item::Do(l) => {
            lit_vars(l, &mut vars);
            hint_lit(&mut hints, &l.attr, &l.args, Some(&l.value));
        }
    }
    vars.iter()
        .map(|v| {
            let sort = p
                .domains
                .get(v)
                .cloned()
                .or_else(|| hints.iter().find(|(hv, _)| hv == v).map(|(_, s)| s.clone()))
                .ok_or_else(|| Error::Sort(format!("variable {} has no sort", v)))?;
            Ok((v.clone(), sort))
        })
        .collect()
}

struct Substitutions<'a> {
    vars: Vec<(&'a str, &'a [Term])>,
    idx: Vec<usize>,
    started: bool,
    done: bool,
}

impl<'a> Substitutions<'a> {
    fn new(vars: Vec<(&'a str, &'a [Term])>) -> Self {
        let n = vars.len();
        Substitutions {
            vars,
            idx: vec![0; n],
            started: false,
            done: false,
        }
    }
}

impl Iterator for Substitutions<'_> {
    type Item = Subst;

    fn next(&mut self) -> Option<Subst> {
        if self.done {
            return None;
        }
        if self.started {
            let mut k = self.vars.len();
            loop {
                if k == 0 {
                    self.done = true;
                    return None;
                }
                k -= 1;
                self.idx[k] += 1;
                if self.idx[k] < self.vars[k].1.len() {
                    break;
                }
                self.idx[k] = 0;
            }
        }
        self.started = true;
        Some(
            self.vars
                .iter()
                .zip(&self.idx)
                .map(|((v, d), &i)| (v.to_string(), d[i].clone()))
                .collect(),
        )
    }
}

pub fn ground_with(p: &Program, cfg: GroundConfig) -> Result<GroundProgram> {
    let sig = &p.signature;
    let mut g = GroundProgram {
        signature: sig.clone(),
        rules: vec![],
        selections: vec![],
        prs: vec![],
        obs: vec![],
        dos: vec![],
        stats: BTreeMap::new(),
    };
    // Pr-atoms wait for selection names.
    let mut pending: Vec<(Option<Term>, GLit, Vec<ExtLit>, Rational, usize)> = Vec::new();
    let mut unnamed_terms: HashSet<AttrTerm> = HashSet::new();
    let mut total = 0usize;
    for (origin, item) in &p.items {
        let origin = *origin;
        let line = p.statements[origin].line;
        let vars = infer_sorts(p, item)?;
        let space = vars
            .iter()
            .try_fold(1usize, |acc, (_, s)| acc.checked_mul(sig.sort(s).members.len()));
        if space.map_or(true, |n| n > cfg.max_statements.saturating_mul(16)) {
            return Err(Error::BudgetExceeded(format!(
                "statement on line {} has too many ground instances",
                line
            )));
        }
        let source_ground = vars.is_empty();
        let domains: Vec<(&str, &[Term])> = vars
            .iter()
            .map(|(v, s)| (v.as_str(), sig.sort(s).members.as_slice()))
            .collect();
        let mut stat = GroundStat::default();
        let ill = |what: String| -> Error { Error::Sort(format!("line {}: ill-sorted {}", line, what)) };
        for s in Substitutions::new(domains) {
            stat.substitutions += 1;
            let produced = match item {
                Item::Rule { head, body } => {
                    let head = match head {
                        Some(h) => match ground_lit(sig, h, &s)? {
                            Some(l) => Some(Some(l)),
                            None => None,
                        },
                        None => Some(None),
                    };
                    match (head, ground_body(sig, body, &s)?) {
                        (_, Inst::Skip) => false,
                        (None, _) => {
                            if source_ground {
                                return Err(ill("rule head".into()));
                            }
                            false
                        }
                        (_, Inst::IllSorted(w)) => {
                            if source_ground {
                                return Err(ill(w));
                            }
                            false
                        }
                        (Some(head), Inst::Ok(body)) => {
                            g.rules.push(GRule { head, body, origin });
                            true
                        }
                    }
                }
                Item::Random {
                    name,
                    attr,
                    args,
                    dynamic,
                    body,
                } => {
                    let targs = args.iter().map(|a| a.eval(&s)).collect::<Result<Vec<_>>>()?;
                    let decl = &sig.attributes[attr];
                    let sorted = decl.params.iter().zip(&targs).all(|(so, t)| sig.sort(so).contains(t));
                    match ground_body(sig, body, &s)? {
                        Inst::Skip => false,
                        Inst::IllSorted(_) | Inst::Ok(_) if !sorted => {
                            if source_ground {
                                return Err(ill(format!("random selection of {}", attr)));
                            }
                            false
                        }
                        Inst::IllSorted(w) => {
                            if source_ground {
                                return Err(ill(w));
                            }
                            false
                        }
                        Inst::Ok(body) => {
                            let term = AttrTerm::new(attr, targs);
                            let name = match name {
                                Some(n) => n.eval(&s)?,
                                None => {
                                    unnamed_terms.insert(term.clone());
                                    Term::App("random".into(), vec![term.to_term()])
                                }
                            };
                            g.selections.push(GSelection {
                                name,
                                term,
                                dynamic: dynamic.clone(),
                                body,
                                origin,
                            });
                            true
                        }
                    }
                }
                Item::Pr { name, lit, body, value } => match (ground_lit(sig, lit, &s)?, ground_body(sig, body, &s)?) {
                    (_, Inst::Skip) => false,
                    (None, _) | (_, Inst::IllSorted(_)) => {
                        if source_ground {
                            return Err(ill(format!("pr-atom for {}", lit.attr)));
                        }
                        false
                    }
                    (Some(atom), Inst::Ok(body)) => {
                        let name = match name {
                            Some(n) => Some(n.eval(&s)?),
                            None => None,
                        };
                        pending.push((name, atom, body, value.clone(), origin));
                        true
                    }
                },
                Item::Obs(l) | Item::Do(l) => match ground_lit(sig, l, &s)? {
                    None => {
                        if source_ground {
                            return Err(ill(format!("literal in obs/do on line {}", line)));
                        }
                        false
                    }
                    Some(gl) => {
                        if matches!(item, Item::Obs(_)) {
                            g.obs.push(gl);
                        } else {
                            g.dos.push(gl);
                        }
                        true
                    }
                },
            };
            if produced {
                stat.instances += 1;
                total += 1;
                if total > cfg.max_statements {
                    return Err(Error::BudgetExceeded(format!(
                        "more than {} ground statements",
                        cfg.max_statements
                    )));
                }
            }
        }
        g.stats.insert(origin, stat);
    }
    dedup_by_key(&mut g.rules, |r| (r.head.clone(), sorted(&r.body)));
    dedup_by_key(&mut g.selections, |s| {
        (s.name.clone(), s.term.clone(), s.dynamic.clone(), sorted(&s.body))
    });
    dedup_by_key(&mut g.obs, |l| l.clone());
    dedup_by_key(&mut g.dos, |l| l.clone());

    let by_term = g.selections_by_term();
    let mut names: BTreeMap<AttrTerm, BTreeSet<Term>> = BTreeMap::new();
    for (t, idxs) in &by_term {
        let origins: BTreeSet<usize> = idxs.iter().map(|&i| g.selections[i].origin).collect();
        if origins.len() > 1 && unnamed_terms.contains(*t) {
            return Err(Error::Sort(format!(
                "{} is selected by several random statements; give each a name",
                t
            )));
        }
        names.insert(
            (*t).clone(),
            idxs.iter().map(|&i| g.selections[i].name.clone()).collect(),
        );
    }
    for (name, atom, body, value, origin) in pending {
        let line = p.statements[origin].line;
        let avail = names.get(&atom.term).ok_or_else(|| {
            Error::Sort(format!(
                "line {}: pr-atom for {} which has no random selection",
                line, atom.term
            ))
        })?;
        let name = match name {
            Some(n) if avail.contains(&n) => n,
            Some(n) => {
                return Err(Error::Sort(format!(
                    "line {}: no random selection named {} for {}",
                    line, n, atom.term
                )))
            }
            None if avail.len() == 1 => avail.iter().next().unwrap().clone(),
            None => {
                return Err(Error::Sort(format!(
                    "line {}: pr-atom for {} is ambiguous; name the selection",
                    line, atom.term
                )))
            }
        };
        g.prs.push(GPr {
            name,
            atom,
            body,
            value,
            origin,
        });
    }
    dedup_by_key(&mut g.prs, |p| {
        (p.name.clone(), p.atom.clone(), sorted(&p.body), p.value.clone())
    });
    Ok(g)
}

fn sorted(body: &[ExtLit]) -> Vec<ExtLit> {
    let mut b = body.to_vec();
    b.sort();
    b
}

fn dedup_by_key<T, K: std::hash::Hash + Eq>(v: &mut Vec<T>, key: impl Fn(&T) -> K) {
    let mut seen = HashSet::new();
    v.retain(|x| seen.insert(key(x)));
}
