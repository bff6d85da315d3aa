//! Canonical printer: one statement per line, re-parseable to the same tree.

use std::fmt::{self, Write};

use crate::syntax::ast::*;
use crate::syntax::term::write_list;

impl fmt::Display for Atomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.neg {
            write!(f, "~")?;
        }
        write!(f, "{}", self.lhs)?;
        if let Some((rel, rhs)) = &self.rel {
            write!(f, "{}{}", rel.symbol(), rhs)?;
        }
        Ok(())
    }
}

impl fmt::Display for BodyElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.naf {
            write!(f, "not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Display for SortItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SortItem::Term(t) => write!(f, "{}", t),
            SortItem::Range(lo, hi) => write!(f, "{}..{}", lo, hi),
        }
    }
}

impl fmt::Display for SortRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SortRef::Named(n) => write!(f, "{}", n),
            SortRef::Inline(items) => {
                write!(f, "{{")?;
                write_list(f, items)?;
                write!(f, "}}")
            }
        }
    }
}

fn write_body(f: &mut fmt::Formatter<'_>, body: &[BodyElem]) -> fmt::Result {
    for (i, b) in body.iter().enumerate() {
        write!(f, "{}{}", if i == 0 { "" } else { ", " }, b)?;
    }
    Ok(())
}

fn write_rule(f: &mut fmt::Formatter<'_>, head: &Option<Atomic>, body: &[BodyElem]) -> fmt::Result {
    if let Some(h) = head {
        write!(f, "{}", h)?;
        if !body.is_empty() {
            write!(f, " ")?;
        }
    }
    if !body.is_empty() {
        write!(f, ":- ")?;
        write_body(f, body)?;
    }
    write!(f, ".")
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Sort { name, def } => {
                write!(f, "{} = ", name)?;
                match def {
                    SortSpec::Items(items) => {
                        write!(f, "{{")?;
                        write_list(f, items)?;
                        write!(f, "}}")?;
                    }
                    SortSpec::Range(lo, hi) => write!(f, "{}..{}", lo, hi)?,
                    SortSpec::Program(rules) => {
                        write!(f, "#program {{ ")?;
                        for r in rules {
                            write_rule(f, &r.head, &r.body)?;
                            write!(f, " ")?;
                        }
                        write!(f, "}}")?;
                    }
                }
                write!(f, ".")
            }
            Stmt::Attribute { names, params, range } => {
                write!(f, "{} : ", names.join(", "))?;
                for (i, p) in params.iter().enumerate() {
                    write!(f, "{}{}", if i == 0 { "" } else { " * " }, p)?;
                }
                if !params.is_empty() {
                    write!(f, " -> ")?;
                }
                write!(f, "{}.", range)
            }
            Stmt::Domain(pairs) => {
                write!(f, "#domain ")?;
                for (i, (s, v)) in pairs.iter().enumerate() {
                    write!(f, "{}{}({})", if i == 0 { "" } else { ", " }, s, v)?;
                }
                write!(f, ".")
            }
            Stmt::Rule { head, body } => write_rule(f, head, body),
            Stmt::Random {
                name,
                target,
                dynamic,
                body,
            } => {
                if let Some(n) = name {
                    write!(f, "[{}] ", n)?;
                }
                write!(f, "random({}", target)?;
                if let Some(d) = dynamic {
                    write!(f, " : {{{} : {}({})}}", d.var, d.pred, d.var)?;
                }
                write!(f, ")")?;
                if !body.is_empty() {
                    write!(f, " :- ")?;
                    write_body(f, body)?;
                }
                write!(f, ".")
            }
            Stmt::Pr {
                name,
                head,
                body,
                value,
            } => {
                write!(f, "pr")?;
                if let Some(n) = name {
                    write!(f, "[{}]", n)?;
                }
                write!(f, "({}", head)?;
                if !body.is_empty() {
                    write!(f, " |c ")?;
                    write_body(f, body)?;
                }
                write!(f, ") = {}.", value)
            }
            Stmt::Obs(a) => write!(f, "obs({}).", a),
            Stmt::Do(a) => write!(f, "do({}).", a),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

/// Renders statements in canonical form, one per line.
pub fn print_program(stmts: &[Statement]) -> String {
    let mut out = String::new();
    for s in stmts {
        let _ = writeln!(out, "{}", s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parser::parse;

    fn round_trip(src: &str) {
        let a = parse(src).unwrap();
        let printed = print_program(&a);
        let b = parse(&printed).unwrap_or_else(|e| panic!("{}\n{}", e, printed));
        assert_eq!(a, b, "{}", printed);
        assert_eq!(print_program(&b), printed);
    }

    #[test]
    fn round_trips() {
        round_trip("dice = {d1,d2}. score = {1..6}. roll : dice -> score. a : {1,2,3}.");
        round_trip("even(D) :- roll(D)=Y, Y mod 2 = 0. ~even(D) :- not even(D).");
        round_trip("[r(D)] random(roll(D)). pr(roll(D)=Y |c Y != 6, owner(D)=mike) = 3/20.");
        round_trip("random(open : {X : can_open(X)}). pr(open=2 |c can_open(2), can_open(3)) = 0.8.");
        round_trip("obs(~found(p1,1)). do(look(2)=p1). :- a, not b. c = #program { c(X) :- d(X). d(1). }.");
        round_trip("#domain dice(D). f : a * b -> boolean. n = -2..3. in(1)<>R :- in(0)<>R, not in(1)=R.");
        round_trip("p(X + 1) :- q(X), (X - 1) * 2 > -3.");
    }

    #[test]
    fn one_statement_per_line() {
        let p = parse("a : boolean. random(a). pr(a) = 1/2.").unwrap();
        let s = print_program(&p);
        assert_eq!(s, "a : boolean.\nrandom(a).\npr(a) = 1/2.\n");
    }
}
