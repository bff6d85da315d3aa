//! Surface syntax tree produced by the parser, before resolution against the signature.

use crate::rational::Rational;
use crate::syntax::term::{Expr, Rel, Term};

/// A parsed statement with the line it started on.
#[derive(Clone, Debug)]
pub struct Statement {
    pub kind: Stmt,
    pub line: usize,
}

impl Statement {
    pub fn new(kind: Stmt) -> Statement {
        Statement { kind, line: 0 }
    }
}

impl PartialEq for Statement {
    fn eq(&self, other: &Statement) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Sort {
        name: String,
        def: SortSpec,
    },
    Attribute {
        names: Vec<String>,
        params: Vec<SortRef>,
        range: SortRef,
    },
    /// `#domain dice(D), score(Y).` pairs of (sort, variable).
    Domain(Vec<(String, String)>),
    Rule {
        head: Option<Atomic>,
        body: Vec<BodyElem>,
    },
    Random {
        name: Option<Expr>,
        target: Expr,
        dynamic: Option<Dynamic>,
        body: Vec<BodyElem>,
    },
    Pr {
        name: Option<Expr>,
        head: Atomic,
        body: Vec<BodyElem>,
        value: Rational,
    },
    Obs(Atomic),
    Do(Atomic),
}

/// The `{X : p(X)}` part of a random selection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dynamic {
    pub var: String,
    pub pred: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SortSpec {
    Items(Vec<SortItem>),
    Range(i64, i64),
    Program(Vec<ProgRule>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SortItem {
    Term(Term),
    Range(i64, i64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SortRef {
    Named(String),
    Inline(Vec<SortItem>),
}

/// `~`? lhs (rel rhs)?: either an attribute literal or a builtin comparison.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atomic {
    pub neg: bool,
    pub lhs: Expr,
    pub rel: Option<(Rel, Expr)>,
}

impl Atomic {
    pub fn bare(lhs: Expr) -> Atomic {
        Atomic {
            neg: false,
            lhs,
            rel: None,
        }
    }

    pub fn eq(lhs: Expr, rhs: Expr) -> Atomic {
        Atomic {
            neg: false,
            lhs,
            rel: Some((Rel::Eq, rhs)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BodyElem {
    pub naf: bool,
    pub atom: Atomic,
}

/// A rule of a sort-defining normal program.
#[derive(Clone, Debug, PartialEq)]
pub struct ProgRule {
    pub head: Option<Atomic>,
    pub body: Vec<BodyElem>,
}
