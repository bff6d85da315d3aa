//! Ground terms, term expressions with variables, and builtin arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A variable-free term: an integer, a symbolic constant or a constructor application.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Int(i64),
    Sym(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn sym(s: &str) -> Term {
        Term::Sym(s.to_string())
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Term::Int(n) => Some(*n),
            _ => None,
        }
    }

    /// `f` for no arguments, `f(args)` otherwise.
    pub fn app(name: &str, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::Sym(name.to_string())
        } else {
            Term::App(name.to_string(), args)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(n) => write!(f, "{}", n),
            Term::Sym(s) => write!(f, "{}", s),
            Term::App(name, args) => {
                write!(f, "{}(", name)?;
                write_list(f, args)?;
                write!(f, ")")
            }
        }
    }
}

pub(crate) fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, t) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{}", t)?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "mod",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            _ => 2,
        }
    }
}

/// Comparison relation between two terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }
}

/// A term that may contain variables and arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(i64),
    Sym(String),
    Var(String),
    App(String, Vec<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

pub type Subst = BTreeMap<String, Term>;

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn sym(name: &str) -> Expr {
        Expr::Sym(name.to_string())
    }

    pub fn from_term(t: &Term) -> Expr {
        match t {
            Term::Int(n) => Expr::Int(*n),
            Term::Sym(s) => Expr::Sym(s.clone()),
            Term::App(f, args) => Expr::App(f.clone(), args.iter().map(Expr::from_term).collect()),
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::App(_, args) => args.iter().for_each(|a| a.vars(out)),
            Expr::Bin(_, a, b) => {
                a.vars(out);
                b.vars(out);
            }
            _ => {}
        }
    }

    pub fn is_ground(&self) -> bool {
        let mut v = Vec::new();
        self.vars(&mut v);
        v.is_empty()
    }

    /// Substitutes variables and evaluates arithmetic.
    pub fn eval(&self, s: &Subst) -> Result<Term> {
        match self {
            Expr::Int(n) => Ok(Term::Int(*n)),
            Expr::Sym(x) => Ok(Term::Sym(x.clone())),
            Expr::Var(v) => s
                .get(v)
                .cloned()
                .ok_or_else(|| Error::Sort(format!("variable {} has no sort", v))),
            Expr::App(f, args) => {
                let args = args.iter().map(|a| a.eval(s)).collect::<Result<Vec<_>>>()?;
                Ok(Term::App(f.clone(), args))
            }
            Expr::Bin(op, a, b) => builtin_eval(*op, &a.eval(s)?, &b.eval(s)?),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{}", n),
            Expr::Sym(s) | Expr::Var(s) => write!(f, "{}", s),
            Expr::App(name, args) => {
                write!(f, "{}(", name)?;
                write_list(f, args)?;
                write!(f, ")")
            }
            Expr::Bin(op, a, b) => {
                write_operand(f, a, op.precedence(), false)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, b, op.precedence(), true)
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, outer: u8, right: bool) -> fmt::Result {
    let wrap = match e {
        Expr::Bin(op, _, _) => op.precedence() < outer || (right && op.precedence() == outer),
        Expr::Int(n) => *n < 0,
        _ => false,
    };
    if wrap {
        write!(f, "({})", e)
    } else {
        write!(f, "{}", e)
    }
}

fn int_args(op: &str, a: &Term, b: &Term) -> Result<(i64, i64)> {
    match (a, b) {
        (Term::Int(x), Term::Int(y)) => Ok((*x, *y)),
        _ => Err(Error::TypeMismatch(format!("`{}` applied to {} and {}", op, a, b))),
    }
}

/// Integer arithmetic used during grounding.
pub fn builtin_eval(op: BinOp, a: &Term, b: &Term) -> Result<Term> {
    let (x, y) = int_args(op.symbol(), a, b)?;
    let overflow = || Error::TypeMismatch(format!("integer overflow in {} {} {}", x, op.symbol(), y));
    let v = match op {
        BinOp::Add => x.checked_add(y).ok_or_else(overflow)?,
        BinOp::Sub => x.checked_sub(y).ok_or_else(overflow)?,
        BinOp::Mul => x.checked_mul(y).ok_or_else(overflow)?,
        BinOp::Div | BinOp::Mod if y == 0 => {
            return Err(Error::TypeMismatch(format!(
                "division by zero in {} {} {}",
                x,
                op.symbol(),
                y
            )))
        }
        BinOp::Div => x.div_euclid(y),
        BinOp::Mod => x.rem_euclid(y),
    };
    Ok(Term::Int(v))
}

/// Evaluates a comparison. `=` and `!=` are structural on any terms, the orderings need integers.
pub fn builtin_compare(rel: Rel, a: &Term, b: &Term) -> Result<bool> {
    Ok(match rel {
        Rel::Eq => a == b,
        Rel::Ne => a != b,
        _ => {
            let (x, y) = int_args(rel.symbol(), a, b)?;
            match rel {
                Rel::Lt => x < y,
                Rel::Le => x <= y,
                Rel::Gt => x > y,
                _ => x >= y,
            }
        }
    })
}
