//! Lexer and recursive-descent parser for the `.plog` text format.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::syntax::ast::*;
use crate::syntax::term::{BinOp, Expr, Rel, Term};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    Decimal(String),
    Directive(String),
    Dot,
    DotDot,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    If,
    Bar,
    CondBar,
    Amp,
    Tilde,
    Rel(Rel),
    Plus,
    Minus,
    Star,
    Slash,
    Arrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) => format!("`{}`", s),
            Tok::Int(n) => format!("`{}`", n),
            Tok::Decimal(s) => format!("`{}`", s),
            Tok::Directive(s) => format!("`#{}`", s),
            Tok::Dot => "`.`".into(),
            Tok::DotDot => "`..`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Colon => "`:`".into(),
            Tok::If => "`:-`".into(),
            Tok::Bar => "`|`".into(),
            Tok::CondBar => "`|c`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Rel(r) => format!("`{}`", r.symbol()),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn advance(chars: &[char], i: &mut usize, line: &mut usize, col: &mut usize, n: usize) {
    for _ in 0..n {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    }
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out: Vec<Token> = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let (cs, here) = (&chars, i);
        let peek = move |k: usize| cs.get(here + k).copied().unwrap_or('\0');
        if c.is_whitespace() {
            advance(&chars, &mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&chars, &mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let after_eq = matches!(
            out.last(),
            Some(Token {
                tok: Tok::Rel(Rel::Eq),
                ..
            })
        );
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = if c.is_ascii_uppercase() || c == '_' {
                Tok::Var(word)
            } else {
                Tok::Ident(word)
            };
            (tok, j - i)
        } else if c.is_ascii_digit() || (c == '.' && after_eq && peek(1).is_ascii_digit()) {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j < chars.len() && chars[j] == '.' && chars.get(j + 1).map_or(false, |d| d.is_ascii_digit()) {
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                (Tok::Decimal(text), j - i)
            } else {
                let text: String = chars[i..j].iter().collect();
                let n = text.parse::<i64>().map_err(|_| Error::Syntax {
                    line,
                    col,
                    message: format!("integer `{}` out of range", text),
                })?;
                (Tok::Int(n), j - i)
            }
        } else if c == '#' {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i + 1..j].iter().collect();
            (Tok::Directive(word), j - i)
        } else {
            match (c, peek(1)) {
                ('.', '.') => (Tok::DotDot, 2),
                ('.', _) => (Tok::Dot, 1),
                (',', _) => (Tok::Comma, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (':', '-') => (Tok::If, 2),
                (':', _) => (Tok::Colon, 1),
                ('|', 'c') if !(peek(2).is_ascii_alphanumeric() || peek(2) == '_') => (Tok::CondBar, 2),
                ('|', _) => (Tok::Bar, 1),
                ('&', _) => (Tok::Amp, 1),
                ('~', _) | ('¬', _) => (Tok::Tilde, 1),
                ('!', '=') => (Tok::Rel(Rel::Ne), 2),
                ('<', '>') => (Tok::Rel(Rel::Ne), 2),
                ('<', '=') => (Tok::Rel(Rel::Le), 2),
                ('<', '-') => (Tok::If, 2),
                ('<', _) => (Tok::Rel(Rel::Lt), 1),
                ('>', '=') => (Tok::Rel(Rel::Ge), 2),
                ('>', _) => (Tok::Rel(Rel::Gt), 1),
                ('=', _) => (Tok::Rel(Rel::Eq), 1),
                ('≠', _) => (Tok::Rel(Rel::Ne), 1),
                ('≤', _) => (Tok::Rel(Rel::Le), 1),
                ('≥', _) => (Tok::Rel(Rel::Ge), 1),
                ('←', _) => (Tok::If, 1),
                ('→', _) => (Tok::Arrow, 1),
                ('×', _) => (Tok::Star, 1),
                ('-', '>') => (Tok::Arrow, 2),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                ('/', _) => (Tok::Slash, 1),
                _ => {
                    return Err(Error::Syntax {
                        line,
                        col,
                        message: format!("unexpected character `{}`", c),
                    })
                }
            }
        };
        advance(&chars, &mut i, &mut line, &mut col, len);
        out.push(Token {
            tok,
            line: start.0,
            col: start.1,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Syntax {
            line: t.line,
            col: t.col,
            message: format!("expected {}, found {}", expected, t.tok.describe()),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.error(&t.describe())
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => self.error("an identifier"),
        }
    }

    fn var(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Var(s) => {
                self.next();
                Ok(s)
            }
            _ => self.error("a variable"),
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn program(&mut self) -> Result<Vec<Statement>> {
        let mut out = Vec::new();
        while *self.peek() != Tok::Eof {
            out.push(self.statement()?);
        }
        Ok(out)
    }

    fn statement(&mut self) -> Result<Statement> {
        let line = self.toks[self.pos].line;
        let kind = self.statement_kind()?;
        Ok(Statement { kind, line })
    }

    fn statement_kind(&mut self) -> Result<Stmt> {
        match self.peek().clone() {
            Tok::Directive(d) if d == "domain" => {
                self.next();
                let mut pairs = Vec::new();
                loop {
                    let sort = self.ident()?;
                    self.expect(Tok::LParen)?;
                    let var = self.var()?;
                    self.expect(Tok::RParen)?;
                    pairs.push((sort, var));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::Dot)?;
                Ok(Stmt::Domain(pairs))
            }
            Tok::LBracket => {
                let name = self.rule_name()?;
                self.eat(&Tok::Colon);
                if !self.is_keyword("random") {
                    return self.error("`random`");
                }
                self.random(Some(name))
            }
            Tok::Ident(w) if w == "random" && !matches!(self.peek_at(1), Tok::Colon | Tok::Comma) => self.random(None),
            Tok::Ident(w) if w == "pr" && matches!(self.peek_at(1), Tok::LParen | Tok::LBracket) => self.pr(),
            Tok::Ident(w) if (w == "obs" || w == "do") && *self.peek_at(1) == Tok::LParen => {
                self.next();
                self.expect(Tok::LParen)?;
                let a = self.atomic()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                Ok(if w == "obs" { Stmt::Obs(a) } else { Stmt::Do(a) })
            }
            Tok::Ident(_) if matches!(self.peek_at(1), Tok::Colon | Tok::Comma) => self.attribute(),
            Tok::Ident(_)
                if *self.peek_at(1) == Tok::Rel(Rel::Eq)
                    && (matches!(self.peek_at(2), Tok::LBrace)
                        || matches!(self.peek_at(2), Tok::Directive(d) if d == "program")
                        || (matches!(self.peek_at(2), Tok::Int(_) | Tok::Minus) && self.range_ahead(2))) =>
            {
                self.sort_def()
            }
            _ => self.rule(),
        }
    }

    fn range_ahead(&self, k: usize) -> bool {
        let k = if *self.peek_at(k) == Tok::Minus { k + 1 } else { k };
        *self.peek_at(k + 1) == Tok::DotDot
    }

    fn rule_name(&mut self) -> Result<Expr> {
        self.expect(Tok::LBracket)?;
        let e = self.expr()?;
        self.expect(Tok::RBracket)?;
        Ok(e)
    }

    fn random(&mut self, name: Option<Expr>) -> Result<Stmt> {
        self.ident()?;
        let (target, dynamic) = if self.eat(&Tok::LParen) {
            let target = self.expr()?;
            let dynamic = if self.eat(&Tok::Colon) {
                self.expect(Tok::LBrace)?;
                let var = self.var()?;
                self.expect(Tok::Colon)?;
                let pred = self.ident()?;
                self.expect(Tok::LParen)?;
                let inner = self.var()?;
                if inner != var {
                    return self.error(&format!("`{}`", var));
                }
                self.expect(Tok::RParen)?;
                self.expect(Tok::RBrace)?;
                Some(Dynamic { var, pred })
            } else {
                None
            };
            self.expect(Tok::RParen)?;
            (target, dynamic)
        } else {
            (self.expr()?, None)
        };
        let body = self.opt_body()?;
        Ok(Stmt::Random {
            name,
            target,
            dynamic,
            body,
        })
    }

    fn pr(&mut self) -> Result<Stmt> {
        self.ident()?;
        let name = if *self.peek() == Tok::LBracket {
            Some(self.rule_name()?)
        } else {
            None
        };
        self.expect(Tok::LParen)?;
        let head = self.atomic()?;
        let body = if self.eat(&Tok::CondBar) {
            self.body()?
        } else {
            Vec::new()
        };
        self.expect(Tok::RParen)?;
        self.expect(Tok::Rel(Rel::Eq))?;
        let tok = &self.toks[self.pos];
        let (line, col) = (tok.line, tok.col);
        let value = self.number()?;
        if value.is_negative() || value > Rational::one() {
            return Err(Error::Range(format!(
                "probability {} at {}:{} is outside [0,1]",
                value, line, col
            )));
        }
        self.expect(Tok::Dot)?;
        Ok(Stmt::Pr {
            name,
            head,
            body,
            value,
        })
    }

    fn number(&mut self) -> Result<Rational> {
        let neg = self.eat(&Tok::Minus);
        let r = match self.next() {
            Tok::Int(n) => {
                if self.eat(&Tok::Slash) {
                    match self.next() {
                        Tok::Int(0) => return self.error("a nonzero denominator"),
                        Tok::Int(d) => Rational::new(n, d),
                        _ => return self.error("an integer denominator"),
                    }
                } else {
                    Rational::from_integer(n)
                }
            }
            Tok::Decimal(s) => s.parse().map_err(|_| Error::Syntax {
                line: self.toks[self.pos].line,
                col: self.toks[self.pos].col,
                message: format!("bad decimal `{}`", s),
            })?,
            _ => {
                self.pos -= 1;
                return self.error("a probability value");
            }
        };
        Ok(if neg { -r } else { r })
    }

    fn attribute(&mut self) -> Result<Stmt> {
        let mut names = vec![self.ident()?];
        while self.eat(&Tok::Comma) {
            names.push(self.ident()?);
        }
        self.expect(Tok::Colon)?;
        let mut sorts = vec![self.sort_ref()?];
        while self.eat(&Tok::Star) {
            sorts.push(self.sort_ref()?);
        }
        let (params, range) = if self.eat(&Tok::Arrow) {
            (sorts, self.sort_ref()?)
        } else if sorts.len() == 1 {
            (Vec::new(), sorts.pop().unwrap())
        } else {
            return self.error("`->`");
        };
        self.expect(Tok::Dot)?;
        Ok(Stmt::Attribute { names, params, range })
    }

    fn sort_ref(&mut self) -> Result<SortRef> {
        if *self.peek() == Tok::LBrace {
            Ok(SortRef::Inline(self.sort_items()?))
        } else {
            Ok(SortRef::Named(self.ident()?))
        }
    }

    fn sort_def(&mut self) -> Result<Stmt> {
        let name = self.ident()?;
        self.expect(Tok::Rel(Rel::Eq))?;
        let def = if matches!(self.peek(), Tok::Directive(d) if d == "program") {
            self.next();
            self.expect(Tok::LBrace)?;
            let mut rules = Vec::new();
            while *self.peek() != Tok::RBrace {
                let head = if *self.peek() == Tok::If {
                    None
                } else {
                    Some(self.atomic()?)
                };
                let body = self.opt_body()?;
                if head.is_none() && body.is_empty() {
                    return self.error("a rule");
                }
                rules.push(ProgRule { head, body });
            }
            self.expect(Tok::RBrace)?;
            SortSpec::Program(rules)
        } else if *self.peek() == Tok::LBrace {
            SortSpec::Items(self.sort_items()?)
        } else {
            let lo = self.int()?;
            self.expect(Tok::DotDot)?;
            let hi = self.int()?;
            SortSpec::Range(lo, hi)
        };
        self.expect(Tok::Dot)?;
        Ok(Stmt::Sort { name, def })
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(if neg { -n } else { n })
            }
            _ => self.error("an integer"),
        }
    }

    fn sort_items(&mut self) -> Result<Vec<SortItem>> {
        self.expect(Tok::LBrace)?;
        let mut items = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(items);
        }
        loop {
            if matches!(self.peek(), Tok::Int(_) | Tok::Minus) && self.range_ahead(0) {
                let lo = self.int()?;
                self.expect(Tok::DotDot)?;
                let hi = self.int()?;
                items.push(SortItem::Range(lo, hi));
            } else {
                items.push(SortItem::Term(self.ground_term()?));
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(items)
    }

    fn ground_term(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Int(_) | Tok::Minus => Ok(Term::Int(self.int()?)),
            Tok::Ident(name) => {
                self.next();
                if self.eat(&Tok::LParen) {
                    let mut args = vec![self.ground_term()?];
                    while self.eat(&Tok::Comma) {
                        args.push(self.ground_term()?);
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Term::App(name, args))
                } else {
                    Ok(Term::Sym(name))
                }
            }
            _ => self.error("a ground term"),
        }
    }

    fn rule(&mut self) -> Result<Stmt> {
        let head = if *self.peek() == Tok::If {
            None
        } else {
            Some(self.atomic()?)
        };
        let body = self.opt_body()?;
        if head.is_none() && body.is_empty() {
            return self.error("a rule body");
        }
        Ok(Stmt::Rule { head, body })
    }

    fn opt_body(&mut self) -> Result<Vec<BodyElem>> {
        let body = if self.eat(&Tok::If) { self.body()? } else { Vec::new() };
        self.expect(Tok::Dot)?;
        Ok(body)
    }

    fn body(&mut self) -> Result<Vec<BodyElem>> {
        let mut out = vec![self.body_elem()?];
        while self.eat(&Tok::Comma) {
            out.push(self.body_elem()?);
        }
        Ok(out)
    }

    fn body_elem(&mut self) -> Result<BodyElem> {
        let naf = if self.is_keyword("not") && !matches!(self.peek_at(1), Tok::LParen | Tok::Rel(_)) {
            self.next();
            true
        } else {
            false
        };
        Ok(BodyElem {
            naf,
            atom: self.atomic()?,
        })
    }

    fn atomic(&mut self) -> Result<Atomic> {
        let neg = self.eat(&Tok::Tilde);
        let lhs = self.expr()?;
        let rel = match self.peek().clone() {
            Tok::Rel(r) => {
                self.next();
                Some((r, self.expr()?))
            }
            _ => None,
        };
        Ok(Atomic { neg, lhs, rel })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.next();
            let rhs = self.product()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.primary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                Tok::Ident(w) if w == "mod" => BinOp::Mod,
                _ => break,
            };
            self.next();
            let rhs = self.primary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(Expr::Int(n))
            }
            Tok::Minus => {
                self.next();
                match self.peek().clone() {
                    Tok::Int(n) => {
                        self.next();
                        Ok(Expr::Int(-n))
                    }
                    _ => self.error("an integer"),
                }
            }
            Tok::Var(v) => {
                self.next();
                Ok(Expr::Var(v))
            }
            Tok::Ident(name) => {
                self.next();
                if self.eat(&Tok::LParen) {
                    let mut args = vec![self.expr()?];
                    while self.eat(&Tok::Comma) {
                        args.push(self.expr()?);
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Expr::App(name, args))
                } else {
                    Ok(Expr::Sym(name))
                }
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => self.error("a term"),
        }
    }
}

/// Parses a whole `.plog` source text into statements, in order.
pub fn parse(src: &str) -> Result<Vec<Statement>> {
    Parser::new(src)?.program()
}

/// Parses a single literal such as `even(d2)`, `~found(p1,1)` or `prize<>2`.
pub fn parse_atomic(src: &str) -> Result<Atomic> {
    let mut p = Parser::new(src)?;
    let a = p.atomic()?;
    p.eat(&Tok::Dot);
    if *p.peek() != Tok::Eof {
        return p.error("end of input");
    }
    Ok(a)
}

/// Surface form of a query: extended literals joined by `&`/`,` and `|`.
#[derive(Clone, Debug, PartialEq)]
pub enum FormulaSrc {
    Lit(BodyElem),
    And(Box<FormulaSrc>, Box<FormulaSrc>),
    Or(Box<FormulaSrc>, Box<FormulaSrc>),
}

/// Parses query text; `|` binds looser than `&`.
pub fn parse_formula(src: &str) -> Result<FormulaSrc> {
    let mut p = Parser::new(src)?;
    let f = formula_or(&mut p)?;
    if *p.peek() != Tok::Eof {
        return p.error("`&`, `|` or end of input");
    }
    Ok(f)
}

fn formula_or(p: &mut Parser) -> Result<FormulaSrc> {
    let mut lhs = formula_and(p)?;
    loop {
        match p.peek().clone() {
            Tok::Bar => {
                p.next();
            }
            Tok::CondBar => {
                // `a |c` in a query is `a | c`: reinterpret the token.
                let t = p.toks[p.pos].clone();
                p.toks[p.pos] = Token {
                    tok: Tok::Ident("c".into()),
                    line: t.line,
                    col: t.col + 1,
                };
            }
            Tok::Ident(w) if w == "or" => {
                p.next();
            }
            _ => break,
        }
        let rhs = formula_and(p)?;
        lhs = FormulaSrc::Or(Box::new(lhs), Box::new(rhs));
    }
    Ok(lhs)
}

fn formula_and(p: &mut Parser) -> Result<FormulaSrc> {
    let mut lhs = formula_atom(p)?;
    while p.eat(&Tok::Amp) || p.eat(&Tok::Comma) {
        let rhs = formula_atom(p)?;
        lhs = FormulaSrc::And(Box::new(lhs), Box::new(rhs));
    }
    Ok(lhs)
}

fn formula_atom(p: &mut Parser) -> Result<FormulaSrc> {
    if *p.peek() == Tok::LParen {
        p.next();
        let f = formula_or(p)?;
        p.expect(Tok::RParen)?;
        return Ok(f);
    }
    Ok(FormulaSrc::Lit(p.body_elem()?))
}
