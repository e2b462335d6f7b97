//! Recursive-descent parser. `->` is right associative and binds weakest,
//! then `|`, then `&`; quantifier bodies extend as far as possible.

use super::{typing, Formula, Sort, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    Sym(&'static str),
    End,
}

const SYMBOLS: [&str; 12] = ["->", "(", ")", ",", ":", ".", "^", "*", "~", "&", "|", "="];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut rest = text.char_indices().peekable();
    while let Some(&(pos, c)) = rest.peek() {
        if c.is_whitespace() {
            rest.next();
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut end = pos;
            while let Some(&(k, d)) = rest.peek() {
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                    end = k + d.len_utf8();
                    rest.next();
                } else {
                    break;
                }
            }
            out.push((pos, Tok::Ident(text[pos..end].to_string())));
        } else if c.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(k, d)) = rest.peek() {
                if d.is_ascii_digit() {
                    end = k + 1;
                    rest.next();
                } else {
                    break;
                }
            }
            let n = text[pos..end]
                .parse()
                .map_err(|_| Error::Parse { pos, msg: "numeral too large".into() })?;
            out.push((pos, Tok::Num(n)));
        } else if let Some(sym) = SYMBOLS.iter().find(|s| text[pos..].starts_with(**s)) {
            for _ in 0..sym.len() {
                rest.next();
            }
            out.push((pos, Tok::Sym(sym)));
        } else {
            return Err(Error::Parse { pos, msg: format!("unexpected character {c:?}") });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    /// Variables bound at the current point, innermost last.
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(s) if *s == sym) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.error(format!("expected `{sym}`"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.at += 1;
                Ok(s)
            }
            _ => self.error("expected an identifier"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Ident(k) if k == "forall" || k == "exists" => self.quant(),
            _ => self.imp(),
        }
    }

    fn quant(&mut self) -> Result<Formula> {
        let universal = matches!(self.bump(), Tok::Ident(k) if k == "forall");
        let x = self.ident()?;
        self.expect(":")?;
        let s = self.sort()?;
        self.expect(".")?;
        self.scope.push(x.clone());
        let body = self.formula();
        self.scope.pop();
        let body = body?;
        Ok(if universal { Formula::forall(&x, s, body) } else { Formula::exists(&x, s, body) })
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.eat("->") {
            Ok(Formula::imp(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut acc = self.and()?;
        while self.eat("|") {
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while self.eat("&") {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat("~") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat("(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        match self.peek().clone() {
            Tok::Ident(k) if k == "true" => {
                self.at += 1;
                Ok(Formula::Top)
            }
            Tok::Ident(k) if k == "false" => {
                self.at += 1;
                Ok(Formula::Bot)
            }
            Tok::Ident(k) if k == "forall" || k == "exists" => self.quant(),
            Tok::Ident(_) | Tok::Num(_) => {
                let start = self.pos();
                let lhs = self.term()?;
                if self.eat("=") {
                    return Ok(Formula::Eq(lhs, self.term()?));
                }
                match lhs {
                    Term::Fn(r, args) => Ok(Formula::Atom(r, args)),
                    _ => Err(Error::Parse { pos: start, msg: "expected an atom or an equation".into() }),
                }
            }
            _ => self.error("expected a formula"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        if let Tok::Num(n) = *self.peek() {
            self.at += 1;
            return Ok(Term::Num(n));
        }
        let name = self.ident()?;
        let mut t = if self.scope.contains(&name) {
            Term::Var(name)
        } else if matches!(self.peek(), Tok::Sym("(")) {
            Term::Fn(name, self.args()?)
        } else {
            Term::Var(name)
        };
        while matches!(self.peek(), Tok::Sym("(")) {
            t = Term::Ev(Box::new(t), self.args()?);
        }
        Ok(t)
    }

    fn args(&mut self) -> Result<Vec<Term>> {
        self.expect("(")?;
        let mut out = Vec::new();
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            out.push(self.term()?);
            if self.eat(")") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    /// `sort := base ["^" exponent]`, `exponent := base | "(" [sort {"*" sort}] ")"`.
    fn sort(&mut self) -> Result<Sort> {
        let cod = self.sort_base()?;
        if !self.eat("^") {
            return Ok(cod);
        }
        let dom = if self.eat("(") {
            let mut dom = Vec::new();
            if !self.eat(")") {
                loop {
                    dom.push(self.sort()?);
                    if self.eat(")") {
                        break;
                    }
                    self.expect("*")?;
                }
            }
            dom
        } else {
            vec![self.sort_base()?]
        };
        Ok(Sort::Fun(dom, Box::new(cod)))
    }

    fn sort_base(&mut self) -> Result<Sort> {
        match self.peek().clone() {
            Tok::Num(2) => {
                self.at += 1;
                Ok(Sort::Bool)
            }
            Tok::Sym("(") => {
                self.at += 1;
                let s = self.sort()?;
                self.expect(")")?;
                Ok(s)
            }
            _ => Ok(Sort::Named(self.ident()?)),
        }
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.error("unexpected trailing input")
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "forall" | "exists" | "true" | "false")
}

/// Parses, alpha-normalises and sort-checks a formula.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, at: 0, scope: Vec::new() };
    let f = p.formula()?;
    p.finish()?;
    let f = f.alpha_normalise();
    typing::infer(&f, &Default::default())?;
    Ok(f)
}

pub fn parse_sort(text: &str) -> Result<Sort> {
    let mut p = Parser { toks: lex(text)?, at: 0, scope: Vec::new() };
    let s = p.sort()?;
    p.finish()?;
    Ok(s)
}
