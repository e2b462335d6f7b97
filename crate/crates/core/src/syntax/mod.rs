//! Many-sorted first-order formulas, the Dialectica translation into
//! `∃u.∀x.matrix` form, evaluation in finite models and witness checking.

use std::collections::BTreeSet;
use std::fmt;

mod model;
mod parse;
mod translate;
mod typing;
mod verify;

pub use model::{evaluate, Model, ModelSpec};
pub use parse::{parse_formula, parse_sort};
pub use translate::{dialectica_translate, translate_with, DialForm, Options};
pub use typing::{infer, Signature, Typing};
pub use verify::{agreement_sweep, all_models, verify_witness, EnvVerdict, Verification};

/// A sort expression. Function sorts take a tuple of argument sorts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Named(String),
    /// The two-element decision sort, written `2`.
    Bool,
    Fun(Vec<Sort>, Box<Sort>),
}

impl Sort {
    pub fn named(name: &str) -> Sort {
        Sort::Named(name.to_string())
    }

    /// `cod^dom`, or `cod` itself when `dom` is empty and `simplify` is set.
    pub fn power(cod: Sort, dom: Vec<Sort>, simplify: bool) -> Sort {
        if dom.is_empty() && simplify {
            cod
        } else {
            Sort::Fun(dom, Box::new(cod))
        }
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Sort::Named(n) => {
                out.insert(n.clone());
            }
            Sort::Bool => {}
            Sort::Fun(dom, cod) => {
                dom.iter().for_each(|s| s.collect_names(out));
                cod.collect_names(out);
            }
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Named(n) => f.write_str(n),
            Sort::Bool => f.write_str("2"),
            Sort::Fun(dom, cod) => {
                if matches!(**cod, Sort::Fun(..)) {
                    write!(f, "({cod})^")?;
                } else {
                    write!(f, "{cod}^")?;
                }
                match dom.as_slice() {
                    [s @ (Sort::Named(_) | Sort::Bool)] => write!(f, "{s}"),
                    _ => {
                        f.write_str("(")?;
                        for (k, s) in dom.iter().enumerate() {
                            if k > 0 {
                                f.write_str(" * ")?;
                            }
                            write!(f, "{s}")?;
                        }
                        f.write_str(")")
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    /// Constant of the decision sort.
    Num(usize),
    /// Function symbol applied to arguments.
    Fn(String, Vec<Term>),
    /// Evaluation of a function-sorted term.
    Ev(Box<Term>, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// `head(args)`, or `head` when `args` is empty and `simplify` is set.
    pub fn apply(head: Term, args: Vec<Term>, simplify: bool) -> Term {
        if args.is_empty() && simplify {
            head
        } else {
            Term::Ev(Box::new(head), args)
        }
    }

    fn map_vars(&self, f: &dyn Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(x) => f(x).unwrap_or_else(|| self.clone()),
            Term::Num(_) => self.clone(),
            Term::Fn(g, args) => Term::Fn(g.clone(), args.iter().map(|t| t.map_vars(f)).collect()),
            Term::Ev(h, args) => {
                Term::Ev(Box::new(h.map_vars(f)), args.iter().map(|t| t.map_vars(f)).collect())
            }
        }
    }

    fn collect(&self, vars: &mut BTreeSet<String>, symbols: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                vars.insert(x.clone());
            }
            Term::Num(_) => {}
            Term::Fn(g, args) => {
                symbols.insert(g.clone());
                args.iter().for_each(|t| t.collect(vars, symbols));
            }
            Term::Ev(h, args) => {
                h.collect(vars, symbols);
                args.iter().for_each(|t| t.collect(vars, symbols));
            }
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    f.write_str("(")?;
    for (k, t) in args.iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{t}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Num(n) => write!(f, "{n}"),
            Term::Fn(g, args) => {
                f.write_str(g)?;
                write_args(f, args)
            }
            Term::Ev(h, args) => {
                write!(f, "{h}")?;
                write_args(f, args)
            }
        }
    }
}

/// First-order formulas. Negation `~φ` is `φ -> false`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bot,
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Exists(String, Sort, Box<Formula>),
    Forall(String, Sort, Box<Formula>),
}

impl Formula {
    pub fn atom(rel: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(rel.to_string(), args)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    pub fn exists(x: &str, s: Sort, body: Formula) -> Formula {
        Formula::Exists(x.to_string(), s, Box::new(body))
    }

    pub fn forall(x: &str, s: Sort, body: Formula) -> Formula {
        Formula::Forall(x.to_string(), s, Box::new(body))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(..) | Formula::Eq(..) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Simultaneous substitution for free variables. Binders are not renamed,
    /// so substituted terms must not mention bound names.
    pub fn substitute(&self, f: &dyn Fn(&str) -> Option<Term>) -> Formula {
        let bx = |a: &Formula| Box::new(a.substitute(f));
        match self {
            Formula::Top | Formula::Bot => self.clone(),
            Formula::Atom(r, args) => Formula::Atom(r.clone(), args.iter().map(|t| t.map_vars(f)).collect()),
            Formula::Eq(s, t) => Formula::Eq(s.map_vars(f), t.map_vars(f)),
            Formula::And(a, b) => Formula::And(bx(a), bx(b)),
            Formula::Or(a, b) => Formula::Or(bx(a), bx(b)),
            Formula::Imp(a, b) => Formula::Imp(bx(a), bx(b)),
            Formula::Exists(x, s, a) | Formula::Forall(x, s, a) => {
                let body = a.substitute(&|y: &str| if y == x { None } else { f(y) });
                match self {
                    Formula::Exists(..) => Formula::Exists(x.clone(), s.clone(), Box::new(body)),
                    _ => Formula::Forall(x.clone(), s.clone(), Box::new(body)),
                }
            }
        }
    }

    /// Free variables, in name order.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term, bound: &Vec<String>| {
            let (mut vs, mut ss) = (BTreeSet::new(), BTreeSet::new());
            t.collect(&mut vs, &mut ss);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::Top | Formula::Bot => {}
            Formula::Atom(_, args) => args.iter().for_each(|t| term(t, bound)),
            Formula::Eq(s, t) => {
                term(s, bound);
                term(t, bound);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.free_into(bound, out);
                b.free_into(bound, out);
            }
            Formula::Exists(x, _, a) | Formula::Forall(x, _, a) => {
                bound.push(x.clone());
                a.free_into(bound, out);
                bound.pop();
            }
        }
    }

    /// Named sorts of the binders.
    pub fn sort_names(&self) -> BTreeSet<String> {
        let (mut vars, mut symbols) = (BTreeSet::new(), BTreeSet::new());
        self.names_into(&mut vars, &mut symbols, true);
        symbols
    }

    /// Every identifier occurring anywhere: variables, binders, symbols
    /// and sort names.
    pub fn names(&self) -> BTreeSet<String> {
        let (mut vars, mut symbols) = (BTreeSet::new(), BTreeSet::new());
        self.names_into(&mut vars, &mut symbols, false);
        vars.append(&mut symbols);
        vars
    }

    fn names_into(&self, vars: &mut BTreeSet<String>, symbols: &mut BTreeSet<String>, sorts_only: bool) {
        match self {
            Formula::Top | Formula::Bot => {}
            _ if sorts_only && self.is_quantifier_free() => {}
            Formula::Atom(r, args) => {
                symbols.insert(r.clone());
                args.iter().for_each(|t| t.collect(vars, symbols));
            }
            Formula::Eq(s, t) => {
                s.collect(vars, symbols);
                t.collect(vars, symbols);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.names_into(vars, symbols, sorts_only);
                b.names_into(vars, symbols, sorts_only);
            }
            Formula::Exists(x, s, a) | Formula::Forall(x, s, a) => {
                vars.insert(x.clone());
                s.collect_names(symbols);
                a.names_into(vars, symbols, sorts_only);
            }
        }
    }

    /// Renames binders so that they are pairwise distinct and distinct from
    /// every free variable and symbol. Already normal formulas are returned
    /// unchanged.
    pub fn alpha_normalise(&self) -> Formula {
        let (mut vars, mut taken) = (BTreeSet::new(), BTreeSet::new());
        self.names_into(&mut vars, &mut taken, false);
        taken.extend(self.free_vars());
        let mut fresh = Fresh::avoiding(taken);
        self.rename(&mut fresh, &mut Vec::new())
    }

    fn rename(&self, fresh: &mut Fresh, scope: &mut Vec<(String, String)>) -> Formula {
        let lookup = |scope: &Vec<(String, String)>| {
            let scope = scope.clone();
            move |x: &str| scope.iter().rev().find(|(from, _)| from == x).map(|(_, to)| Term::Var(to.clone()))
        };
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(..) | Formula::Eq(..) => self.substitute(&lookup(scope)),
            Formula::And(a, b) => Formula::and(a.rename(fresh, scope), b.rename(fresh, scope)),
            Formula::Or(a, b) => Formula::or(a.rename(fresh, scope), b.rename(fresh, scope)),
            Formula::Imp(a, b) => Formula::imp(a.rename(fresh, scope), b.rename(fresh, scope)),
            Formula::Exists(x, s, a) | Formula::Forall(x, s, a) => {
                let to = fresh.take(x);
                scope.push((x.clone(), to.clone()));
                let body = a.rename(fresh, scope);
                scope.pop();
                match self {
                    Formula::Exists(..) => Formula::exists(&to, s.clone(), body),
                    _ => Formula::forall(&to, s.clone(), body),
                }
            }
        }
    }
}

/// Fresh-name supply.
#[derive(Debug, Clone, Default)]
pub(crate) struct Fresh {
    taken: BTreeSet<String>,
}

impl Fresh {
    pub(crate) fn avoiding(taken: BTreeSet<String>) -> Fresh {
        Fresh { taken }
    }

    /// `base` if unused, else the first unused `baseK`.
    pub(crate) fn take(&mut self, base: &str) -> String {
        let name = (0..)
            .map(|k| if k == 0 { base.to_string() } else { format!("{base}{k}") })
            .find(|n| !self.taken.contains(n))
            .expect("names are unbounded");
        self.taken.insert(name.clone());
        name
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Imp,
    Or,
    And,
    Unary,
}

impl Formula {
    fn write_at(&self, f: &mut fmt::Formatter<'_>, level: Level) -> fmt::Result {
        let own = match self {
            Formula::Imp(_, b) if **b != Formula::Bot => Level::Imp,
            Formula::Or(..) => Level::Or,
            Formula::And(..) => Level::And,
            Formula::Exists(..) | Formula::Forall(..) => Level::Imp,
            _ => Level::Unary,
        };
        let tail = level == Level::Imp;
        let quant = matches!(self, Formula::Exists(..) | Formula::Forall(..));
        let paren = own < level || (quant && !tail);
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::Top => f.write_str("true")?,
            Formula::Bot => f.write_str("false")?,
            Formula::Atom(r, args) => {
                f.write_str(r)?;
                write_args(f, args)?;
            }
            Formula::Eq(s, t) => write!(f, "{s} = {t}")?,
            Formula::Imp(a, b) if **b == Formula::Bot => {
                f.write_str("~")?;
                a.write_at(f, Level::Unary)?;
            }
            Formula::Imp(a, b) => {
                a.write_at(f, Level::Or)?;
                f.write_str(" -> ")?;
                b.write_at(f, Level::Imp)?;
            }
            Formula::Or(a, b) => {
                a.write_at(f, Level::Or)?;
                f.write_str(" | ")?;
                b.write_at(f, Level::And)?;
            }
            Formula::And(a, b) => {
                a.write_at(f, Level::And)?;
                f.write_str(" & ")?;
                b.write_at(f, Level::Unary)?;
            }
            Formula::Exists(x, s, a) | Formula::Forall(x, s, a) => {
                let q = if matches!(self, Formula::Exists(..)) { "exists" } else { "forall" };
                write!(f, "{q} {x}:{s}. ")?;
                a.write_at(f, Level::Imp)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, Level::Imp)
    }
}

#[cfg(test)]
mod tests;
