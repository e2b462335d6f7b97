use serde::Serialize;

use super::{
    equivalent, exists_along, forall_along, heyting, is_pullback, Doctrine, HeytingOp,
};
use crate::error::{Error, Result};
use crate::finbase::{proj1, pullback, FinMap, FinSet};
use crate::report::{Report, Sweep, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantifier {
    Exists,
    Forall,
}

/// A commuting square
///
/// ```text
///   X' --h--> X
///   |         |
///   k         f
///   v         v
///   A' --g--> A
/// ```
///
/// for which Beck–Chevalley asks `∃_k P_h = P_g ∃_f` (dually for `∀`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Square {
    pub f: FinMap,
    pub g: FinMap,
    pub h: FinMap,
    pub k: FinMap,
}

impl Square {
    /// The chosen pullback of the cospan `f`, `g`.
    pub fn pullback_of(f: &FinMap, g: &FinMap) -> Result<Square> {
        let (_, h, k) = pullback(f, g)?;
        Ok(Square { f: f.clone(), g: g.clone(), h, k })
    }

    /// The square of `g × 1_B` over `g : A' → A` against first projections.
    pub fn projection(g: &FinMap, b: FinSet) -> Square {
        Square {
            f: proj1(g.cod(), b),
            g: g.clone(),
            h: g.cross(&FinMap::identity(b)),
            k: proj1(g.dom(), b),
        }
    }

    fn describe(&self) -> String {
        format!("f={} g={} h={} k={}", self.f, self.g, self.h, self.k)
    }
}

/// Compares both sides of Beck–Chevalley on every element over `X`.
///
/// The always-valid one-sided inequality is checked too and reported under
/// its own law name when it fails.
pub fn beck_chevalley_check<P: Doctrine + ?Sized>(p: &P, sq: &Square, q: Quantifier) -> Result<Report> {
    if !is_pullback(sq)? {
        return Err(Error::NotAPullback(sq.describe()));
    }
    let window = Window::new(sq.f.dom().size());
    let mut sweep = Sweep::new(format!("beck-chevalley/{q:?}").to_lowercase(), &window);
    for alpha in p.fiber(sq.f.dom())? {
        bc_instance(p, &mut sweep, sq, q, &alpha);
    }
    Ok(sweep.finish())
}

fn bc_instance<P: Doctrine + ?Sized>(p: &P, sweep: &mut Sweep, sq: &Square, q: Quantifier, alpha: &P::Elem) {
    let a_prime = sq.k.cod();
    let sides = || -> Result<(P::Elem, P::Elem)> {
        Ok(match q {
            Quantifier::Exists => (
                exists_along(p, &sq.k, &p.reindex(&sq.h, alpha)?)?,
                p.reindex(&sq.g, &exists_along(p, &sq.f, alpha)?)?,
            ),
            Quantifier::Forall => (
                forall_along(p, &sq.k, &p.reindex(&sq.h, alpha)?)?,
                p.reindex(&sq.g, &forall_along(p, &sq.f, alpha)?)?,
            ),
        })
    };
    let id = || format!("{} alpha={alpha}", sq.describe());
    let (law, strict) = match q {
        Quantifier::Exists => ("bc-inequality: exists_k P_h <= P_g exists_f", "beck-chevalley"),
        Quantifier::Forall => ("bc-inequality: P_g forall_f <= forall_k P_h", "beck-chevalley"),
    };
    let mut computed = None;
    sweep.case(law, id, || {
        let (lhs, rhs) = sides()?;
        let ok = match q {
            Quantifier::Exists => p.leq(a_prime, &lhs, &rhs)?,
            Quantifier::Forall => p.leq(a_prime, &rhs, &lhs)?,
        };
        let detail = (!ok).then(|| format!("quantify-after-reindex {lhs}, reindex-after-quantify {rhs}"));
        computed = Some((lhs, rhs));
        Ok(detail)
    });
    if let Some((lhs, rhs)) = computed {
        sweep.case(strict, id, || {
            Ok((!equivalent(p, a_prime, &lhs, &rhs)?)
                .then(|| format!("quantify-after-reindex {lhs} differs from reindex-after-quantify {rhs}")))
        });
    }
}

/// Objects of the window that carry fibers.
fn objects<P: Doctrine + ?Sized>(p: &P, window: &Window) -> Vec<FinSet> {
    let top = p.max_object().map_or(window.bound, |m| m.min(window.bound));
    (0..=top).map(FinSet).collect()
}

fn maps<P: Doctrine + ?Sized>(p: &P, sweep: &mut Sweep, a: FinSet, b: FinSet) -> Vec<FinMap> {
    match p.base().maps(a, b) {
        Ok(it) => it.collect(),
        Err(e) => {
            sweep.skip(format!("maps {a} -> {b}: {e}"));
            Vec::new()
        }
    }
}

fn fiber<P: Doctrine + ?Sized>(p: &P, sweep: &mut Sweep, a: FinSet) -> Vec<P::Elem> {
    match p.fiber(a) {
        Ok(f) => f,
        Err(e @ (Error::BudgetExceeded { .. } | Error::CapExceeded { .. })) => {
            sweep.skip(format!("fiber over {a}: {e}"));
            Vec::new()
        }
        Err(e) => {
            sweep.case("fiber", || format!("fiber over {a}"), || Err(e));
            Vec::new()
        }
    }
}

/// Runs the first-order hyperdoctrine laws over every object, arrow and
/// element of the window.
pub fn check_hyperdoctrine<P: Doctrine + ?Sized>(p: &P, window: &Window) -> Report {
    let mut root = Report::new(format!("hyperdoctrine({})", p.name()), window.describe());
    let caps = p.capabilities();
    root.push(check_preorder(p, window));
    root.push(check_functoriality(p, window));
    root.push(check_monotonicity(p, window));
    if caps.has_exists {
        root.push(check_adjunction(p, window, Quantifier::Exists));
    }
    if caps.has_forall {
        root.push(check_adjunction(p, window, Quantifier::Forall));
    }
    if caps.has_heyting {
        root.push(check_heyting(p, window));
    }
    for (flag, q) in [(caps.has_exists, Quantifier::Exists), (caps.has_forall, Quantifier::Forall)] {
        if flag {
            root.push(check_bc(p, window, q));
        }
    }
    if caps.has_equality || caps.has_exists {
        root.push(check_equality(p, window));
    }
    for (flag, what) in [
        (caps.has_exists, "existential quantifier"),
        (caps.has_forall, "universal quantifier"),
        (caps.has_heyting, "Heyting structure"),
    ] {
        if !flag {
            root.fail("capabilities", p.name(), format!("no {what}"));
        }
    }
    root
}

/// Preorder, functoriality and monotonicity of reindexing.
pub fn check_indexed_preorder<P: Doctrine + ?Sized>(p: &P, window: &Window) -> Report {
    let mut root = Report::new(format!("indexed-preorder({})", p.name()), window.describe());
    root.push(check_preorder(p, window));
    root.push(check_functoriality(p, window));
    root.push(check_monotonicity(p, window));
    root
}

fn check_preorder<P: Doctrine + ?Sized>(p: &P, window: &Window) -> Report {
    let mut sweep = Sweep::new("preorder", window);
    for a in objects(p, window) {
        let elems = fiber(p, &mut sweep, a);
        for x in &elems {
            sweep.case("reflexivity", || format!("A={a} x={x}"), || {
                Ok((!p.leq(a, x, x)?).then(|| "x not <= x".to_string()))
            });
        }
        for x in &elems {
            for y in &elems {
                if !p.leq(a, x, y).unwrap_or(false) {
                    continue;
                }
                for z in &elems {
                    sweep.case("transitivity", || format!("A={a} x={x} y={y} z={z}"), || {
                        Ok((p.leq(a, y, z)? && !p.leq(a, x, z)?).then(|| "x <= y <= z but not x <= z".to_string()))
                    });
                }
            }
        }
    }
    sweep.finish()
}

fn check_functoriality<P: Doctrine + ?Sized>(p: &P, window: &Window) -> Report {
    let mut sweep = Sweep::new("functoriality", window);
    let objs = objects(p, window);
    for &c in &objs {
        let elems = fiber(p, &mut sweep, c);
        let id = FinMap::identity(c);
        for e in &elems {
            sweep.case("identity", || format!("A={c} e={e}"), || {
                let r = p.reindex(&id, e)?;
                Ok((!equivalent(p, c, &r, e)?).then(|| format!("reindexing along the identity gives {r}")))
            });
        }
        for &b in &objs {
            for g in maps(p, &mut sweep, b, c) {
                let pulled: Vec<Result<P::Elem>> = elems.iter().map(|e| p.reindex(&g, e)).collect();
                for &a in &objs {
                    for f in maps(p, &mut sweep, a, b) {
                        for (e, pg) in elems.iter().zip(&pulled) {
                            sweep.case("composition", || format!("f={f} g={g} e={e}"), || {
                                let gf = f.then(&g)?;
                                let direct = p.reindex(&gf, e)?;
                                let stepwise = p.reindex(&f, pg.as_ref().map_err(Clone::clone)?)?;
                                Ok((!equivalent(p, a, &direct, &stepwise)?)
                                    .then(|| format!("P_(g.f) e = {direct} but P_f P_g e = {stepwise}")))
                            });
                        }
                    }
                }
            }
        }
    }
    sweep.finish()
}

fn check_monotonicity<P: Doctrine + ?Sized>(p: &P, window: &Window) -> Report {
    let mut sweep = Sweep::new("monotonicity", window);
    let objs = objects(p, window);
    for &b in &objs {
        let elems = fiber(p, &mut sweep, b);
        for &a in &objs {
            for f in maps(p, &mut sweep, a, b) {
                for x in &elems {
                    for y in &elems {
                        if !p.leq(b, x, y).unwrap_or(false) {
                            continue;
                        }
                        sweep.case("monotone reindexing", || format!("f={f} x={x} y={y}"), || {
                            let (fx, fy) = (p.reindex(&f, x)?, p.reindex(&f, y)?);
                            Ok((!p.leq(a, &fx, &fy)?).then(|| format!("x <= y but P_f x = {fx} is not below P_f y = {fy}")))
                        });
                    }
                }
            }
        }
    }
    sweep.finish()
}

fn check_adjunction<P: Doctrine + ?Sized>(p: &P, window: &Window, q: Quantifier) -> Report {
    let name = match q {
        Quantifier::Exists => "exists-adjunction",
        Quantifier::Forall => "forall-adjunction",
    };
    let mut sweep = Sweep::new(name, window);
    let objs = objects(p, window);
    for &a in &objs {
        let over_a = fiber(p, &mut sweep, a);
        for &b in &objs {
            let over_b = fiber(p, &mut sweep, b);
            for f in maps(p, &mut sweep, a, b) {
                for alpha in &over_a {
                    let quantified = match q {
                        Quantifier::Exists => exists_along(p, &f, alpha),
                        Quantifier::Forall => forall_along(p, &f, alpha),
                    };
                    let quantified = match quantified {
                        Ok(x) => x,
                        Err(e) => {
                            sweep.case(name, || format!("f={f} alpha={alpha}"), || Err(e));
                            continue;
                        }
                    };
                    for beta in &over_b {
                        sweep.case(name, || format!("f={f} alpha={alpha} beta={beta}"), || {
                            let pulled = p.reindex(&f, beta)?;
                            let (left, right) = match q {
                                Quantifier::Exists => (p.leq(b, &quantified, beta)?, p.leq(a, alpha, &pulled)?),
                                Quantifier::Forall => (p.leq(a, &pulled, alpha)?, p.leq(b, beta, &quantified)?),
                            };
                            Ok((left != right).then(|| {
                                format!("adjoint {quantified}: the two sides of the adjunction disagree ({left} vs {right})")
                            }))
                        });
                    }
                }
            }
        }
    }
    sweep.finish()
}

fn check_heyting<P: Doctrine + ?Sized>(p: &P, window: &Window) -> Report {
    let mut sweep = Sweep::new("heyting", window);
    let objs = objects(p, window);
    for &a in &objs {
        let elems = fiber(p, &mut sweep, a);
        let op = |o: HeytingOp, args: &[P::Elem]| heyting(p, a, o, args);
        for x in &elems {
            sweep.case("top and bottom", || format!("A={a} x={x}"), || {
                let ok = p.leq(a, x, &op(HeytingOp::Top, &[])?)? && p.leq(a, &op(HeytingOp::Bot, &[])?, x)?;
                Ok((!ok).then(|| "x is not between bottom and top".to_string()))
            });
        }
        for x in &elems {
            for y in &elems {
                let pair = [x.clone(), y.clone()];
                let (m, j, i) = match (op(HeytingOp::Meet, &pair), op(HeytingOp::Join, &pair), op(HeytingOp::Impl, &pair)) {
                    (Ok(m), Ok(j), Ok(i)) => (m, j, i),
                    (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                        sweep.case("operations exist", || format!("A={a} x={x} y={y}"), || Err(e));
                        continue;
                    }
                };
                for z in &elems {
                    sweep.case("meet, join and implication", || format!("A={a} x={x} y={y} z={z}"), || {
                        let below_both = p.leq(a, z, x)? && p.leq(a, z, y)?;
                        if p.leq(a, z, &m)? != below_both {
                            return Ok(Some(format!("meet {m} is not the greatest lower bound")));
                        }
                        let above_both = p.leq(a, x, z)? && p.leq(a, y, z)?;
                        if p.leq(a, &j, z)? != above_both {
                            return Ok(Some(format!("join {j} is not the least upper bound")));
                        }
                        let zx = op(HeytingOp::Meet, &[z.clone(), x.clone()])?;
                        if p.leq(a, z, &i)? != p.leq(a, &zx, y)? {
                            return Ok(Some(format!("implication {i} is not the relative pseudo-complement")));
                        }
                        Ok(None)
                    });
                }
            }
        }
    }
    // reindexing preserves the structure
    for &c in &objs {
        let elems = fiber(p, &mut sweep, c);
        for &a in &objs {
            for f in maps(p, &mut sweep, a, c) {
                for x in &elems {
                    for y in &elems {
                        sweep.case("preserved by reindexing", || format!("f={f} x={x} y={y}"), || {
                            let (fx, fy) = (p.reindex(&f, x)?, p.reindex(&f, y)?);
                            for o in [HeytingOp::Meet, HeytingOp::Join, HeytingOp::Impl] {
                                let before = p.reindex(&f, &heyting(p, c, o, &[x.clone(), y.clone()])?)?;
                                let after = heyting(p, a, o, &[fx.clone(), fy.clone()])?;
                                if !equivalent(p, a, &before, &after)? {
                                    return Ok(Some(format!("{o:?}: {before} vs {after}")));
                                }
                            }
                            for o in [HeytingOp::Top, HeytingOp::Bot] {
                                let before = p.reindex(&f, &heyting(p, c, o, &[])?)?;
                                if !equivalent(p, a, &before, &heyting(p, a, o, &[])?)? {
                                    return Ok(Some(format!("{o:?} not preserved")));
                                }
                            }
                            Ok(None)
                        });
                    }
                }
            }
        }
    }
    sweep.finish()
}

/// Beck–Chevalley over projection squares and over chosen pullbacks of
/// every cospan whose pullback stays in the window.
fn check_bc<P: Doctrine + ?Sized>(p: &P, window: &Window, q: Quantifier) -> Report {
    let name = match q {
        Quantifier::Exists => "beck-chevalley-exists",
        Quantifier::Forall => "beck-chevalley-forall",
    };
    let mut sweep = Sweep::new(name, window);
    let objs = objects(p, window);
    let top = objs.last().map_or(0, |o| o.size());
    let mut squares = Vec::new();
    for &a in &objs {
        for &a_prime in &objs {
            for g in maps(p, &mut sweep, a_prime, a) {
                for &b in &objs {
                    if a.size() * b.size() <= top && a_prime.size() * b.size() <= top {
                        squares.push(Square::projection(&g, b));
                    }
                }
                for &x in &objs {
                    for f in maps(p, &mut sweep, x, a) {
                        match Square::pullback_of(&f, &g) {
                            Ok(sq) if sq.h.dom().size() <= top => squares.push(sq),
                            _ => {}
                        }
                    }
                }
            }
        }
    }
    squares.sort_by(|s, t| (&s.f, &s.g).cmp(&(&t.f, &t.g)));
    squares.dedup();
    for sq in &squares {
        for alpha in fiber(p, &mut sweep, sq.f.dom()) {
            bc_instance(p, &mut sweep, sq, q, &alpha);
        }
    }
    sweep.report_mut().datum("squares", squares.len());
    sweep.finish()
}

fn check_equality<P: Doctrine + ?Sized>(p: &P, window: &Window) -> Report {
    let mut sweep = Sweep::new("equality", window);
    for a in objects(p, window) {
        if a.size() * a.size() > objects(p, window).last().map_or(0, |o| o.size()) {
            continue;
        }
        sweep.case("reflexive equality", || format!("A={a}"), || {
            let delta = super::equality_predicate(p, a)?;
            let on_diagonal = p.reindex(&crate::finbase::diagonal(a), &delta)?;
            let t = heyting(p, a, HeytingOp::Top, &[])?;
            Ok((!p.leq(a, &t, &on_diagonal)?).then(|| format!("delta = {delta} does not contain the diagonal")))
        });
    }
    sweep.finish()
}
