//! ASP formulas: extended literals under conjunction and disjunction, with three-valued truth.

use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::ground::{ground_lit, ExtLit};
use crate::syntax::parser::{parse_formula, FormulaSrc};
use crate::syntax::program::{resolve_body_elem, BodyPat, Signature};
use crate::syntax::term::Subst;
use crate::worlds::World;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Lit(ExtLit),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Undefined,
}

impl Formula {
    /// Parses and resolves a ground query such as `roll(d1)=6 & even(d2)`.
    pub fn parse(src: &str, sig: &Signature) -> Result<Formula> {
        Formula::resolve(&parse_formula(src)?, sig)
    }

    fn resolve(f: &FormulaSrc, sig: &Signature) -> Result<Formula> {
        Ok(match f {
            FormulaSrc::Lit(b) => match resolve_body_elem(sig, b)? {
                BodyPat::Lit { naf, lit } => {
                    let g = ground_lit(sig, &lit, &Subst::new())?
                        .ok_or_else(|| Error::Sort(format!("`{}` is ill-sorted", b)))?;
                    Formula::Lit(ExtLit { lit: g, naf })
                }
                _ => return Err(Error::Sort(format!("`{}` is not a literal", b))),
            },
            FormulaSrc::And(a, b) => {
                Formula::And(Box::new(Formula::resolve(a, sig)?), Box::new(Formula::resolve(b, sig)?))
            }
            FormulaSrc::Or(a, b) => {
                Formula::Or(Box::new(Formula::resolve(a, sig)?), Box::new(Formula::resolve(b, sig)?))
            }
        })
    }

    /// Conjunction of extended literals; `None` for the empty set.
    pub fn conjunction(lits: &[ExtLit]) -> Option<Formula> {
        let mut it = lits.iter().cloned().map(Formula::Lit);
        let first = it.next()?;
        Some(it.fold(first, |acc, l| Formula::And(Box::new(acc), Box::new(l))))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn truth(&self, w: &World) -> Truth {
        match self {
            Formula::Lit(e) if e.naf => {
                if w.holds(&e.lit) {
                    Truth::False
                } else {
                    Truth::True
                }
            }
            Formula::Lit(e) => {
                if w.holds(&e.lit) {
                    Truth::True
                } else if w.holds(&e.lit.complement()) {
                    Truth::False
                } else {
                    Truth::Undefined
                }
            }
            Formula::And(a, b) => match (a.truth(w), b.truth(w)) {
                (Truth::True, Truth::True) => Truth::True,
                (Truth::False, _) | (_, Truth::False) => Truth::False,
                _ => Truth::Undefined,
            },
            Formula::Or(a, b) => match (a.truth(w), b.truth(w)) {
                (Truth::True, _) | (_, Truth::True) => Truth::True,
                (Truth::False, Truth::False) => Truth::False,
                _ => Truth::Undefined,
            },
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Lit(e) => write!(f, "{}", e),
            Formula::And(a, b) => write!(f, "({} & {})", a, b),
            Formula::Or(a, b) => write!(f, "({} | {})", a, b),
        }
    }
}
