//! Finite categories built from a doctrine: the comprehension completion,
//! extensional reflection, the category of predicates and the
//! tripos-to-topos category of partial equivalence relations.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use crate::error::Result;
use crate::report::{Report, Sweep, Window};

mod comprehension;
mod reflection;
mod topos;

pub use comprehension::{comprehension_completion, BaseCategory, CompObj, Comprehension};
pub use reflection::{extensional_reflection, predicates_category, Elementary, Extensional};
pub use topos::{relational_composite, tripos_to_topos, Condition, Per, TriposToTopos};

/// A category with finitely many objects and arrows in the window.
pub trait FiniteCategory {
    type Obj: Clone + Eq + Hash + fmt::Display;
    type Arr: Clone + fmt::Display;

    fn name(&self) -> String;
    fn objects(&self) -> Result<Vec<Self::Obj>>;
    /// One representative per arrow `a → b`.
    fn arrows(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Vec<Self::Arr>>;
    fn identity(&self, a: &Self::Obj) -> Result<Self::Arr>;
    /// `f : a → b` followed by `g : b → c`.
    fn compose(&self, a: &Self::Obj, b: &Self::Obj, c: &Self::Obj, f: &Self::Arr, g: &Self::Arr) -> Result<Self::Arr>;
    /// Equality of parallel arrows `a → b`.
    fn same(&self, a: &Self::Obj, b: &Self::Obj, f: &Self::Arr, g: &Self::Arr) -> Result<bool>;

    /// Whether `f` is a legal arrow `a → b`.
    fn is_arrow(&self, _a: &Self::Obj, _b: &Self::Obj, _f: &Self::Arr) -> Result<bool> {
        Ok(true)
    }
}

/// Memoised hom sets keyed by object pair.
pub(crate) struct HomCache<O, A>(Mutex<HashMap<(O, O), Arc<Vec<A>>>>);

impl<O, A> Default for HomCache<O, A> {
    fn default() -> Self {
        HomCache(Mutex::new(HashMap::new()))
    }
}

impl<O, A> fmt::Debug for HomCache<O, A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("HomCache")
    }
}

impl<O: Clone + Eq + Hash, A> HomCache<O, A> {
    pub(crate) fn get_or(&self, a: &O, b: &O, compute: impl FnOnce() -> Result<Vec<A>>) -> Result<Arc<Vec<A>>> {
        let key = (a.clone(), b.clone());
        if let Some(h) = self.0.lock().expect("hom cache").get(&key) {
            return Ok(h.clone());
        }
        let h = Arc::new(compute()?);
        self.0.lock().expect("hom cache").insert(key, h.clone());
        Ok(h)
    }
}

/// Associativity, identity and closure of composition over every
/// composable pair and triple.
pub fn check_category_laws<C: FiniteCategory>(c: &C, window: &Window) -> Result<Report> {
    let objs = c.objects()?;
    let n = objs.len();
    let mut homs = Vec::with_capacity(n * n);
    for a in &objs {
        for b in &objs {
            homs.push(c.arrows(a, b)?);
        }
    }
    let hom = |i: usize, j: usize| &homs[i * n + j];
    let mut sweep = Sweep::new(format!("category-laws({})", c.name()), window);
    let (mut pairs, mut triples) = (0u64, 0u64);

    for (i, a) in objs.iter().enumerate() {
        let id_a = c.identity(a)?;
        sweep.case("identity", || format!("id {a}"), || {
            Ok((!c.is_arrow(a, a, &id_a)?).then(|| "identity is not an arrow".to_string()))
        });
        for (j, b) in objs.iter().enumerate() {
            let id_b = c.identity(b)?;
            for f in hom(i, j) {
                sweep.case("left-identity", || format!("a={a} b={b} f={f}"), || {
                    let g = c.compose(a, a, b, &id_a, f)?;
                    Ok((!c.same(a, b, &g, f)?).then(|| format!("id;f = {g}")))
                });
                sweep.case("right-identity", || format!("a={a} b={b} f={f}"), || {
                    let g = c.compose(a, b, b, f, &id_b)?;
                    Ok((!c.same(a, b, &g, f)?).then(|| format!("f;id = {g}")))
                });
            }
        }
    }
    for (i, a) in objs.iter().enumerate() {
        for (j, b) in objs.iter().enumerate() {
            for (k, cc) in objs.iter().enumerate() {
                for f in hom(i, j) {
                    for g in hom(j, k) {
                        pairs += 1;
                        sweep.case("closure", || format!("a={a} b={b} c={cc} f={f} g={g}"), || {
                            let fg = c.compose(a, b, cc, f, g)?;
                            Ok((!c.is_arrow(a, cc, &fg)?).then(|| format!("f;g = {fg} is not an arrow")))
                        });
                        let fg = c.compose(a, b, cc, f, g)?;
                        for (l, d) in objs.iter().enumerate() {
                            for h in hom(k, l) {
                                triples += 1;
                                sweep.case(
                                    "associativity",
                                    || format!("a={a} b={b} c={cc} d={d} f={f} g={g} h={h}"),
                                    || {
                                        let left = c.compose(a, cc, d, &fg, h)?;
                                        let gh = c.compose(b, cc, d, g, h)?;
                                        let right = c.compose(a, b, d, f, &gh)?;
                                        Ok((!c.same(a, d, &left, &right)?).then(|| format!("(f;g);h = {left}, f;(g;h) = {right}")))
                                    },
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    let r = sweep.report_mut();
    r.datum("objects", n);
    r.datum("arrows", homs.iter().map(Vec::len).sum::<usize>());
    r.datum("composable pairs", pairs);
    r.datum("composable triples", triples);
    Ok(sweep.finish())
}

/// Objects with exactly one arrow from every object.
pub fn terminal_objects<C: FiniteCategory>(c: &C) -> Result<Vec<C::Obj>> {
    let objs = c.objects()?;
    let mut out = Vec::new();
    for t in &objs {
        let mut ok = true;
        for x in &objs {
            if c.arrows(x, t)?.len() != 1 {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(t.clone());
        }
    }
    Ok(out)
}

/// A product cone `(p, π1, π2)` over `a` and `b`, found by search.
pub fn find_product<C: FiniteCategory>(c: &C, a: &C::Obj, b: &C::Obj) -> Result<Option<(C::Obj, C::Arr, C::Arr)>> {
    let objs = c.objects()?;
    for p in &objs {
        for p1 in c.arrows(p, a)? {
            'cone: for p2 in c.arrows(p, b)? {
                for x in &objs {
                    let hs = c.arrows(x, p)?;
                    for f in c.arrows(x, a)? {
                        for g in c.arrows(x, b)? {
                            let mut hits = 0;
                            for h in hs.iter() {
                                let fa = c.compose(x, p, a, h, &p1)?;
                                let gb = c.compose(x, p, b, h, &p2)?;
                                if c.same(x, a, &fa, &f)? && c.same(x, b, &gb, &g)? {
                                    hits += 1;
                                }
                            }
                            if hits != 1 {
                                continue 'cone;
                            }
                        }
                    }
                }
                return Ok(Some((p.clone(), p1, p2.clone())));
            }
        }
    }
    Ok(None)
}

/// Terminal objects and binary products found in the window.
pub fn limits_report<C: FiniteCategory>(c: &C, window: &Window) -> Result<Report> {
    let mut r = Report::new(format!("limits({})", c.name()), window.describe());
    let terminal = terminal_objects(c)?;
    r.datum("terminal objects", terminal.len());
    if let Some(t) = terminal.first() {
        r.datum("terminal", t);
    }
    let objs = c.objects()?;
    let (mut found, mut total) = (0, 0);
    for (i, a) in objs.iter().enumerate() {
        for b in &objs[i..] {
            total += 1;
            r.checked += 1;
            if find_product(c, a, b)?.is_some() {
                found += 1;
            }
        }
    }
    r.datum("binary products found", format!("{found}/{total}"));
    Ok(r)
}
