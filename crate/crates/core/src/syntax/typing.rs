//! Sort inference by unification over symbol argument slots.

use std::collections::BTreeMap;

use super::{Formula, Sort, Term};
use crate::error::{Error, Result};

/// Declared sorts of relation and function symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub relations: BTreeMap<String, Vec<Sort>>,
    pub functions: BTreeMap<String, (Vec<Sort>, Sort)>,
}

/// Inferred sorts. `None` marks a slot no occurrence pins down.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Typing {
    pub relations: BTreeMap<String, Vec<Option<Sort>>>,
    pub functions: BTreeMap<String, (Vec<Option<Sort>>, Option<Sort>)>,
    pub free: BTreeMap<String, Option<Sort>>,
}

impl Typing {
    /// The signature and free-variable sorts, failing on unresolved slots.
    pub fn complete(&self) -> Result<(Signature, BTreeMap<String, Sort>)> {
        let unresolved = |what: String| Error::Sort(format!("cannot infer the sort of {what}"));
        let mut sig = Signature::default();
        for (r, args) in &self.relations {
            let args = args
                .iter()
                .enumerate()
                .map(|(k, s)| s.clone().ok_or_else(|| unresolved(format!("argument {k} of {r}"))))
                .collect::<Result<_>>()?;
            sig.relations.insert(r.clone(), args);
        }
        for (g, (args, res)) in &self.functions {
            let args = args
                .iter()
                .enumerate()
                .map(|(k, s)| s.clone().ok_or_else(|| unresolved(format!("argument {k} of {g}"))))
                .collect::<Result<_>>()?;
            let res = res.clone().ok_or_else(|| unresolved(format!("the result of {g}")))?;
            sig.functions.insert(g.clone(), (args, res));
        }
        let free = self
            .free
            .iter()
            .map(|(x, s)| Ok((x.clone(), s.clone().ok_or_else(|| unresolved(format!("variable {x}")))?)))
            .collect::<Result<_>>()?;
        Ok((sig, free))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    Free(String),
    RelArg(String, usize),
    FunArg(String, usize),
    FunRes(String),
}

#[derive(Debug, Clone)]
enum Ty {
    Known(Sort),
    Slot(usize),
}

#[derive(Default)]
struct Unifier {
    slots: BTreeMap<Slot, usize>,
    parent: Vec<usize>,
    sort: Vec<Option<Sort>>,
    arity: BTreeMap<String, (bool, usize)>,
}

impl Unifier {
    fn slot(&mut self, s: Slot) -> usize {
        let next = self.parent.len();
        let id = *self.slots.entry(s).or_insert(next);
        if id == next {
            self.parent.push(id);
            self.sort.push(None);
        }
        id
    }

    fn root(&self, mut k: usize) -> usize {
        while self.parent[k] != k {
            k = self.parent[k];
        }
        k
    }

    fn unify(&mut self, a: Ty, b: Ty, at: &dyn Fn() -> String) -> Result<()> {
        let clash = |x: &Sort, y: &Sort| Err(Error::Sort(format!("{} has sorts {x} and {y}", at())));
        match (a, b) {
            (Ty::Known(x), Ty::Known(y)) => {
                if x == y {
                    Ok(())
                } else {
                    clash(&x, &y)
                }
            }
            (Ty::Slot(k), Ty::Known(s)) | (Ty::Known(s), Ty::Slot(k)) => {
                let r = self.root(k);
                match &self.sort[r] {
                    Some(t) if *t != s => clash(t, &s),
                    _ => {
                        self.sort[r] = Some(s);
                        Ok(())
                    }
                }
            }
            (Ty::Slot(k), Ty::Slot(l)) => {
                let (r, q) = (self.root(k), self.root(l));
                if r == q {
                    return Ok(());
                }
                match (self.sort[r].clone(), self.sort[q].clone()) {
                    (Some(x), Some(y)) if x != y => clash(&x, &y),
                    (x, y) => {
                        self.parent[q] = r;
                        self.sort[r] = x.or(y);
                        Ok(())
                    }
                }
            }
        }
    }

    fn resolve(&self, k: usize) -> Option<Sort> {
        self.sort[self.root(k)].clone()
    }

    fn symbol(&mut self, name: &str, is_fn: bool, arity: usize) -> Result<()> {
        match self.arity.get(name) {
            None => {
                self.arity.insert(name.to_string(), (is_fn, arity));
                Ok(())
            }
            Some(&(f, n)) if f == is_fn && n == arity => Ok(()),
            Some(&(f, n)) => {
                let kind = |f: bool| if f { "function" } else { "relation" };
                Err(Error::Sort(format!(
                    "{name} used as a {} of arity {arity} and as a {} of arity {n}",
                    kind(is_fn),
                    kind(f)
                )))
            }
        }
    }

    fn term(&mut self, t: &Term, scope: &[(String, Sort)]) -> Result<Ty> {
        match t {
            Term::Var(x) => Ok(match scope.iter().rev().find(|(y, _)| y == x) {
                Some((_, s)) => Ty::Known(s.clone()),
                None => Ty::Slot(self.slot(Slot::Free(x.clone()))),
            }),
            Term::Num(n) if *n < 2 => Ok(Ty::Known(Sort::Bool)),
            Term::Num(n) => Err(Error::Sort(format!("numeral {n} is not in the decision sort"))),
            Term::Fn(g, args) => {
                self.symbol(g, true, args.len())?;
                for (k, a) in args.iter().enumerate() {
                    let ty = self.term(a, scope)?;
                    let slot = self.slot(Slot::FunArg(g.clone(), k));
                    self.unify(Ty::Slot(slot), ty, &|| format!("argument {k} of {g}"))?;
                }
                Ok(Ty::Slot(self.slot(Slot::FunRes(g.clone()))))
            }
            Term::Ev(h, args) => {
                let head = match self.term(h, scope)? {
                    Ty::Known(s) => s,
                    Ty::Slot(k) => self
                        .resolve(k)
                        .ok_or_else(|| Error::Sort(format!("{h} is applied but its sort is unknown")))?,
                };
                let Sort::Fun(dom, cod) = head else {
                    return Err(Error::Sort(format!("{h} of sort {head} is applied to arguments")));
                };
                if dom.len() != args.len() {
                    return Err(Error::Sort(format!(
                        "{h} takes {} argument(s), given {}",
                        dom.len(),
                        args.len()
                    )));
                }
                for (k, (a, s)) in args.iter().zip(dom).enumerate() {
                    let ty = self.term(a, scope)?;
                    self.unify(Ty::Known(s), ty, &|| format!("argument {k} of {h}"))?;
                }
                Ok(Ty::Known(*cod))
            }
        }
    }

    fn formula(&mut self, f: &Formula, scope: &mut Vec<(String, Sort)>) -> Result<()> {
        match f {
            Formula::Top | Formula::Bot => Ok(()),
            Formula::Atom(r, args) => {
                self.symbol(r, false, args.len())?;
                for (k, a) in args.iter().enumerate() {
                    let ty = self.term(a, scope)?;
                    let slot = self.slot(Slot::RelArg(r.clone(), k));
                    self.unify(Ty::Slot(slot), ty, &|| format!("argument {k} of {r}"))?;
                }
                Ok(())
            }
            Formula::Eq(s, t) => {
                let (a, b) = (self.term(s, scope)?, self.term(t, scope)?);
                self.unify(a, b, &|| format!("the equation {s} = {t}"))
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                self.formula(a, scope)?;
                self.formula(b, scope)
            }
            Formula::Exists(x, s, a) | Formula::Forall(x, s, a) => {
                scope.push((x.clone(), s.clone()));
                let r = self.formula(a, scope);
                scope.pop();
                r
            }
        }
    }
}

/// Infers symbol and free-variable sorts, starting from `seed`.
pub fn infer(f: &Formula, seed: &Signature) -> Result<Typing> {
    let mut u = Unifier::default();
    for (r, args) in &seed.relations {
        u.symbol(r, false, args.len())?;
        for (k, s) in args.iter().enumerate() {
            let slot = u.slot(Slot::RelArg(r.clone(), k));
            u.unify(Ty::Slot(slot), Ty::Known(s.clone()), &|| format!("argument {k} of {r}"))?;
        }
    }
    for (g, (args, res)) in &seed.functions {
        u.symbol(g, true, args.len())?;
        for (k, s) in args.iter().enumerate() {
            let slot = u.slot(Slot::FunArg(g.clone(), k));
            u.unify(Ty::Slot(slot), Ty::Known(s.clone()), &|| format!("argument {k} of {g}"))?;
        }
        let slot = u.slot(Slot::FunRes(g.clone()));
        u.unify(Ty::Slot(slot), Ty::Known(res.clone()), &|| format!("the result of {g}"))?;
    }
    u.formula(f, &mut Vec::new())?;
    let mut out = Typing::default();
    for (name, &(is_fn, n)) in &u.arity {
        if is_fn {
            let args = (0..n).map(|k| u.slots.get(&Slot::FunArg(name.clone(), k)).and_then(|&s| u.resolve(s)));
            let res = u.slots.get(&Slot::FunRes(name.clone())).and_then(|&s| u.resolve(s));
            out.functions.insert(name.clone(), (args.collect(), res));
        } else {
            let args = (0..n).map(|k| u.slots.get(&Slot::RelArg(name.clone(), k)).and_then(|&s| u.resolve(s)));
            out.relations.insert(name.clone(), args.collect());
        }
    }
    for x in f.free_vars() {
        let s = u.slots.get(&Slot::Free(x.clone())).and_then(|&k| u.resolve(k));
        out.free.insert(x, s);
    }
    Ok(out)
}
