//! Existential and universal splittings, free elements, and the Skolem and
//! Gödel doctrine verifiers.
//!
//! Every verdict is relative to a size bound: reindexing maps come from
//! objects of size at most `bound`, and quantified sorts range over the same
//! sizes. Searches run over class representatives.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::doctrine::{equivalent, exists_proj, forall_proj, Doctrine};
use crate::error::{Error, Result};
use crate::finbase::{encode_function, eval_code, graph, FinMap, FinSet};
use crate::report::{Report, Sweep, Window};

/// The data refuting a splitting: after reindexing along `f`, the element
/// `beta` over `_ × aux` admits no term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample<E> {
    pub f: FinMap,
    pub aux: FinSet,
    pub beta: E,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreenessVerdict<E> {
    pub free: bool,
    pub counterexample: Option<Counterexample<E>>,
    pub bound: usize,
}

impl<E> FreenessVerdict<E> {
    fn free(bound: usize) -> Self {
        FreenessVerdict { free: true, counterexample: None, bound }
    }

    fn refuted(bound: usize, cx: Counterexample<E>) -> Self {
        FreenessVerdict { free: false, counterexample: Some(cx), bound }
    }
}

impl<E: fmt::Display> fmt::Display for FreenessVerdict<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "free (bound {})", self.bound),
            Some(c) => write!(f, "not free: along {} no term into sort {} for {}", c.f, c.aux, c.beta),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Existential,
    Universal,
    /// Universal, with the quantified elements restricted to existential-free ones.
    UniversalRelative,
}

type Cache<E> = Mutex<HashMap<(Kind, usize, E), FreenessVerdict<E>>>;

/// Freeness detector with verdict caching.
pub struct Freeness<'p, P: Doctrine + ?Sized> {
    p: &'p P,
    bound: usize,
    cache: Cache<P::Elem>,
}

impl<'p, P: Doctrine + ?Sized> Freeness<'p, P> {
    pub fn new(p: &'p P, bound: usize) -> Self {
        Freeness { p, bound, cache: Mutex::new(HashMap::new()) }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    fn fits(&self, n: usize) -> bool {
        self.p.max_object().map_or(true, |m| n <= m)
    }

    fn sorts(&self, ctx: FinSet) -> impl Iterator<Item = FinSet> + '_ {
        (0..=self.bound).map(FinSet).filter(move |b| self.fits(ctx.times(*b).0))
    }

    /// For each sort `B` and `β` over `A × B` with `α ≤ ∃_π β`, a term
    /// `g : A → B` with `α ≤ P_⟨1,g⟩ β`.
    pub fn existential_splitting(&self, a: FinSet, alpha: &P::Elem) -> Result<FreenessVerdict<P::Elem>> {
        self.splitting(Kind::Existential, a, alpha)
    }

    /// For each sort `B` and `β` over `A × B` with `∀_π β ≤ α`, a term
    /// `g : A → B` with `P_⟨1,g⟩ β ≤ α`.
    pub fn universal_splitting(&self, a: FinSet, alpha: &P::Elem) -> Result<FreenessVerdict<P::Elem>> {
        self.splitting(Kind::Universal, a, alpha)
    }

    fn splitting(&self, kind: Kind, a: FinSet, alpha: &P::Elem) -> Result<FreenessVerdict<P::Elem>> {
        let p = self.p;
        for b in self.sorts(a) {
            let ab = a.times(b);
            for beta in p.classes(ab)?.iter() {
                if kind == Kind::UniversalRelative && !self.existential_free(ab, beta)?.free {
                    continue;
                }
                let premise = match kind {
                    Kind::Existential => p.leq(a, alpha, &exists_proj(p, a, b, beta)?)?,
                    _ => p.leq(a, &forall_proj(p, a, b, beta)?, alpha)?,
                };
                if !premise {
                    continue;
                }
                let mut found = false;
                for g in p.base().maps(a, b)? {
                    let moved = p.reindex(&graph(&g), beta)?;
                    let ok = match kind {
                        Kind::Existential => p.leq(a, alpha, &moved)?,
                        _ => p.leq(a, &moved, alpha)?,
                    };
                    if ok {
                        found = true;
                        break;
                    }
                }
                if !found {
                    let cx = Counterexample { f: FinMap::identity(a), aux: b, beta: beta.clone() };
                    return Ok(FreenessVerdict::refuted(self.bound, cx));
                }
            }
        }
        Ok(FreenessVerdict::free(self.bound))
    }

    /// Splitting of every reindexing `P_f α` along `f : A' → A`, `A' ≤ bound`.
    fn free_along_all(&self, kind: Kind, a: FinSet, alpha: &P::Elem) -> Result<FreenessVerdict<P::Elem>> {
        let key = (kind, a.0, alpha.clone());
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let mut verdict = FreenessVerdict::free(self.bound);
        'search: for src in (0..=self.bound).map(FinSet) {
            for f in self.p.base().maps(src, a)? {
                let moved = self.p.reindex(&f, alpha)?;
                let v = self.splitting(kind, src, &moved)?;
                if let Some(mut cx) = v.counterexample {
                    cx.f = f;
                    verdict = FreenessVerdict::refuted(self.bound, cx);
                    break 'search;
                }
            }
        }
        self.cache.lock().expect("cache lock").insert(key, verdict.clone());
        Ok(verdict)
    }

    pub fn existential_free(&self, a: FinSet, alpha: &P::Elem) -> Result<FreenessVerdict<P::Elem>> {
        self.free_along_all(Kind::Existential, a, alpha)
    }

    pub fn universal_free(&self, a: FinSet, alpha: &P::Elem) -> Result<FreenessVerdict<P::Elem>> {
        self.free_along_all(Kind::Universal, a, alpha)
    }

    /// Universal-free inside the sub-doctrine of existential-free elements.
    pub fn universal_free_relative(&self, a: FinSet, alpha: &P::Elem) -> Result<FreenessVerdict<P::Elem>> {
        self.free_along_all(Kind::UniversalRelative, a, alpha)
    }

    /// Existential-free, and universal-free relative to existential-free elements.
    pub fn quantifier_free(&self, a: FinSet, alpha: &P::Elem) -> Result<FreenessVerdict<P::Elem>> {
        let ex = self.existential_free(a, alpha)?;
        if !ex.free {
            return Ok(ex);
        }
        self.universal_free_relative(a, alpha)
    }

    /// A sort `A` and an existential-free `β` over `I × A` with
    /// `α ⊣⊢ ∃_π β`, trying sorts in increasing size and then the doctrine's
    /// own hint.
    pub fn existential_cover(&self, i: FinSet, alpha: &P::Elem) -> Result<Option<(FinSet, P::Elem)>> {
        let p = self.p;
        let covers = |a: FinSet, beta: &P::Elem| -> Result<bool> {
            Ok(equivalent(p, i, alpha, &exists_proj(p, i, a, beta)?)? && self.existential_free(i.times(a), beta)?.free)
        };
        for a in self.sorts(i) {
            let classes = match p.classes(i.times(a)) {
                Ok(c) => c,
                Err(Error::BudgetExceeded { .. }) => continue,
                Err(e) => return Err(e),
            };
            for beta in classes.iter() {
                if covers(a, beta)? {
                    return Ok(Some((a, beta.clone())));
                }
            }
        }
        if let Some((a, beta)) = p.existential_cover_hint(i, alpha) {
            if covers(a, &beta)? {
                return Ok(Some((a, beta)));
            }
        }
        Ok(None)
    }

    /// A sort `A` and a quantifier-free `β` over `I × A` with
    /// `α ⊣⊢ ∀_π β`; the doctrine's hint is tried first.
    pub fn universal_cover(&self, i: FinSet, alpha: &P::Elem) -> Result<Option<(FinSet, P::Elem)>> {
        let p = self.p;
        let covers = |a: FinSet, beta: &P::Elem| -> Result<bool> {
            Ok(equivalent(p, i, alpha, &forall_proj(p, i, a, beta)?)? && self.quantifier_free(i.times(a), beta)?.free)
        };
        if let Some((a, beta)) = p.universal_cover_hint(i, alpha) {
            if covers(a, &beta)? {
                return Ok(Some((a, beta)));
            }
        }
        for a in self.sorts(i) {
            let classes = match p.classes(i.times(a)) {
                Ok(c) => c,
                Err(Error::BudgetExceeded { .. }) => continue,
                Err(e) => return Err(e),
            };
            for beta in classes.iter() {
                if covers(a, beta)? {
                    return Ok(Some((a, beta.clone())));
                }
            }
        }
        Ok(None)
    }
}

pub fn is_existential_splitting<P: Doctrine + ?Sized>(p: &P, a: FinSet, alpha: &P::Elem, bound: usize) -> Result<FreenessVerdict<P::Elem>> {
    require(p.capabilities().has_exists, p, "existential quantifier")?;
    Freeness::new(p, bound).existential_splitting(a, alpha)
}

pub fn is_existential_free<P: Doctrine + ?Sized>(p: &P, a: FinSet, alpha: &P::Elem, bound: usize) -> Result<FreenessVerdict<P::Elem>> {
    require(p.capabilities().has_exists, p, "existential quantifier")?;
    Freeness::new(p, bound).existential_free(a, alpha)
}

pub fn is_universal_free<P: Doctrine + ?Sized>(p: &P, a: FinSet, alpha: &P::Elem, bound: usize) -> Result<FreenessVerdict<P::Elem>> {
    require(p.capabilities().has_forall, p, "universal quantifier")?;
    Freeness::new(p, bound).universal_free(a, alpha)
}

pub fn is_quantifier_free<P: Doctrine + ?Sized>(p: &P, a: FinSet, alpha: &P::Elem, bound: usize) -> Result<FreenessVerdict<P::Elem>> {
    require(p.capabilities().has_exists && p.capabilities().has_forall, p, "quantifier")?;
    Freeness::new(p, bound).quantifier_free(a, alpha)
}

fn require<P: Doctrine + ?Sized>(flag: bool, p: &P, what: &str) -> Result<()> {
    if flag {
        Ok(())
    } else {
        Err(Error::NoAdjoint(format!("{} has no {what}", p.name())))
    }
}

fn objects<P: Doctrine + ?Sized>(p: &P, window: &Window) -> Vec<FinSet> {
    let top = p.max_object().map_or(window.bound, |m| m.min(window.bound));
    (0..=top).map(FinSet).collect()
}

/// Every element of the window is `∃_π` of an existential-free element.
pub fn has_enough_existential_free<P: Doctrine + ?Sized>(p: &P, window: &Window) -> Report {
    enough_existential_free(&Freeness::new(p, window.bound), window)
}

fn enough_existential_free<P: Doctrine + ?Sized>(fr: &Freeness<P>, window: &Window) -> Report {
    let p = fr.p;
    let mut sweep = Sweep::new("enough-existential-free", window);
    if !p.capabilities().has_exists {
        sweep.report_mut().fail("capabilities", p.name(), "no existential quantifier");
        return sweep.finish();
    }
    for i in objects(p, window) {
        let classes = match p.classes(i) {
            Ok(c) => c,
            Err(e) => {
                sweep.case("cover", || format!("I={}", i.0), || Err(e));
                continue;
            }
        };
        for alpha in classes.iter() {
            let mut found = None;
            let ok = sweep.case("cover", || format!("I={} alpha={alpha}", i.0), || {
                found = fr.existential_cover(i, alpha)?;
                Ok(found.is_none().then(|| "no existential-free cover in the window".to_string()))
            });
            if let (true, Some((a, beta))) = (ok, found) {
                sweep.report_mut().datum(format!("I={} alpha={alpha}", i.0), format!("A={} beta={beta}", a.0));
            }
        }
    }
    sweep.finish()
}

/// Skolem doctrine clauses in the window.
pub fn check_skolem_doctrine<P: Doctrine + ?Sized>(p: &P, window: &Window) -> Report {
    let fr = Freeness::new(p, window.bound);
    skolem_report(&fr, window)
}

fn skolem_report<P: Doctrine + ?Sized>(fr: &Freeness<P>, window: &Window) -> Report {
    let p = fr.p;
    let mut root = Report::new(format!("skolem({})", p.name()), window.describe());
    root.push(cartesian_closed(p, window));
    let caps = p.capabilities();
    let mut quant = Sweep::new("quantifiers", window);
    if !(caps.has_exists && caps.has_forall) {
        let missing = if caps.has_exists { "universal" } else { "existential" };
        quant.report_mut().fail("capabilities", p.name(), format!("no {missing} quantifier"));
        root.push(quant.finish());
        return root;
    }
    projection_adjunctions(p, &mut quant, window);
    root.push(quant.finish());
    root.push(enough_existential_free(fr, window));
    root.push(forall_stability(fr, window));
    root
}

fn cartesian_closed<P: Doctrine + ?Sized>(p: &P, window: &Window) -> Report {
    let mut sweep = Sweep::new("cartesian-closed", window);
    for b in (0..=window.bound).map(FinSet) {
        for c in (0..=window.bound).map(FinSet) {
            let id = || format!("B={} C={}", b.0, c.0);
            let exp = match p.base().exponential(b, c) {
                Ok(e) => e,
                Err(e) => {
                    sweep.skip(format!("{}: {e}", id()));
                    continue;
                }
            };
            sweep.case("evaluation decodes every function", id, || {
                let (_, ev) = &exp;
                for f in p.base().maps(b, c)? {
                    let code = encode_function(f.table(), c.0);
                    if b.elements().any(|x| ev.apply(code * b.0 + x) != f.apply(x) || eval_code(code, c.0, x) != f.apply(x)) {
                        return Ok(Some(format!("{f} is not recovered from its code {code}")));
                    }
                }
                Ok(None)
            });
        }
    }
    sweep.finish()
}

fn projection_adjunctions<P: Doctrine + ?Sized>(p: &P, sweep: &mut Sweep, window: &Window) {
    let objs = objects(p, window);
    for &a in &objs {
        for &b in &objs {
            let ab = a.times(b);
            if p.max_object().is_some_and(|m| ab.0 > m) {
                continue;
            }
            let (Ok(over_ab), Ok(over_a)) = (p.classes(ab), p.classes(a)) else {
                sweep.skip(format!("classes over {a} x {b}"));
                continue;
            };
            let pi = crate::finbase::proj1(a, b);
            for alpha in over_ab.iter() {
                for beta in over_a.iter() {
                    sweep.case("projection adjunctions", || format!("A={} B={} alpha={alpha} beta={beta}", a.0, b.0), || {
                        let pulled = p.reindex(&pi, beta)?;
                        let ex = exists_proj(p, a, b, alpha)?;
                        if p.leq(a, &ex, beta)? != p.leq(ab, alpha, &pulled)? {
                            return Ok(Some(format!("exists gives {ex}")));
                        }
                        let un = forall_proj(p, a, b, alpha)?;
                        if p.leq(ab, &pulled, alpha)? != p.leq(a, beta, &un)? {
                            return Ok(Some(format!("forall gives {un}")));
                        }
                        Ok(None)
                    });
                }
            }
        }
    }
}

fn forall_stability<P: Doctrine + ?Sized>(fr: &Freeness<P>, window: &Window) -> Report {
    let p = fr.p;
    let mut sweep = Sweep::new("forall-preserves-existential-free", window);
    let objs = objects(p, window);
    for &a in &objs {
        for &b in &objs {
            let ab = a.times(b);
            if p.max_object().is_some_and(|m| ab.0 > m) {
                continue;
            }
            let Ok(over_ab) = p.classes(ab) else {
                sweep.skip(format!("classes over {a} x {b}"));
                continue;
            };
            for alpha in over_ab.iter() {
                sweep.case("stability", || format!("A={} B={} alpha={alpha}", a.0, b.0), || {
                    if !fr.existential_free(ab, alpha)?.free {
                        return Ok(None);
                    }
                    let q = forall_proj(p, a, b, alpha)?;
                    let v = fr.existential_free(a, &q)?;
                    Ok((!v.free).then(|| format!("forall gives {q}, which is {v}")))
                });
            }
        }
    }
    sweep.finish()
}

/// Skolem clauses, enough universal-free elements among the
/// existential-free ones, and a prenex cover `∃u ∀x α_D` of every element.
pub fn check_godel_doctrine<P: Doctrine + ?Sized>(p: &P, window: &Window) -> Report {
    let fr = Freeness::new(p, window.bound);
    let mut root = skolem_report(&fr, window);
    root.name = format!("godel({})", p.name());
    if !root.passed() {
        return root;
    }
    root.push(enough_universal_free(&fr, window));
    root.push(prenex_covers(&fr, window));
    root
}

fn enough_universal_free<P: Doctrine + ?Sized>(fr: &Freeness<P>, window: &Window) -> Report {
    let p = fr.p;
    let mut sweep = Sweep::new("enough-universal-free", window);
    for i in objects(p, window) {
        let Ok(classes) = p.classes(i) else {
            sweep.skip(format!("classes over {i}"));
            continue;
        };
        for alpha in classes.iter() {
            let mut found = None;
            let ok = sweep.case("cover", || format!("I={} alpha={alpha}", i.0), || {
                if !fr.existential_free(i, alpha)?.free {
                    return Ok(None);
                }
                found = fr.universal_cover(i, alpha)?;
                Ok(found.is_none().then(|| "no quantifier-free universal cover".to_string()))
            });
            if let (true, Some((a, beta))) = (ok, found) {
                sweep.report_mut().datum(format!("I={} alpha={alpha}", i.0), format!("X={} beta={beta}", a.0));
            }
        }
    }
    sweep.finish()
}

/// A prenex cover: sorts `U`, `X` and quantifier-free `α_D` over `I × U × X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrenexCover<E> {
    pub witness: FinSet,
    pub counter: FinSet,
    pub matrix: E,
}

/// Finds and re-checks the prenex cover of `alpha`.
pub fn prenex_cover<P: Doctrine + ?Sized>(fr: &Freeness<P>, i: FinSet, alpha: &P::Elem) -> Result<Option<PrenexCover<P::Elem>>> {
    let p = fr.p;
    let Some((u, beta)) = fr.existential_cover(i, alpha)? else { return Ok(None) };
    let iu = i.times(u);
    let Some((x, gamma)) = fr.universal_cover(iu, &beta)? else { return Ok(None) };
    let rebuilt = exists_proj(p, i, u, &forall_proj(p, iu, x, &gamma)?)?;
    if p.leq(i, alpha, &rebuilt)? && p.leq(i, &rebuilt, alpha)? {
        Ok(Some(PrenexCover { witness: u, counter: x, matrix: gamma }))
    } else {
        Ok(None)
    }
}

fn prenex_covers<P: Doctrine + ?Sized>(fr: &Freeness<P>, window: &Window) -> Report {
    let p = fr.p;
    let mut sweep = Sweep::new("prenex-cover", window);
    for i in objects(p, window) {
        let elems = match p.fiber(i) {
            Ok(e) => e,
            Err(e) => {
                sweep.skip(format!("fiber over {i}: {e}"));
                continue;
            }
        };
        for alpha in &elems {
            let mut found = None;
            let ok = sweep.case("prenex cover", || format!("I={} alpha={alpha}", i.0), || {
                found = prenex_cover(fr, i, alpha)?;
                Ok(found.is_none().then(|| "no prenex cover re-checks".to_string()))
            });
            if let (true, Some(c)) = (ok, found) {
                sweep.report_mut().datum(
                    format!("I={} alpha={alpha}", i.0),
                    format!("U={} X={} matrix={}", c.witness.0, c.counter.0, c.matrix),
                );
            }
        }
    }
    sweep.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::{DialCompletion, DialObj, ExCompletion, ExObj, UnCompletion};
    use crate::doctrine::{Bits, Capabilities, SubsetDoctrine, TrivialDoctrine};
    use crate::finbase::BaseCat;
    use crate::report::Status;

    fn subsets() -> SubsetDoctrine {
        SubsetDoctrine::new(BaseCat::new(2))
    }

    fn set(n: usize, xs: &[usize]) -> Bits {
        Bits::from_indices(n, xs.iter().copied())
    }

    #[test]
    fn subset_freeness_over_empty_sorts() {
        let p = subsets();
        for n in 0..=2 {
            for alpha in p.fiber(FinSet(n)).unwrap() {
                let ex = is_existential_free(&p, FinSet(n), &alpha, 2).unwrap();
                let un = is_universal_free(&p, FinSet(n), &alpha, 2).unwrap();
                assert_eq!(ex.free, n == 0 || alpha.is_full(), "{alpha}");
                assert_eq!(un.free, n == 0 || alpha.is_empty(), "{alpha}");
                let split = is_existential_splitting(&p, FinSet(n), &alpha, 2).unwrap();
                assert_eq!(split.free, n == 0 || !alpha.is_empty());
            }
        }
        let v = is_existential_free(&p, FinSet(2), &set(2, &[0]), 2).unwrap();
        let cx = v.counterexample.unwrap();
        assert_eq!(cx.f.table(), &[1]);
        assert_eq!(cx.aux, FinSet(0));
    }

    #[test]
    fn strict_bottom_of_the_existential_completion_is_not_free() {
        let ex = ExCompletion::new(subsets());
        let one = FinSet::ONE;
        let sb = ExObj { ctx: one, aux: FinSet(0), body: set(0, &[]) };
        let v = is_existential_free(&ex, one, &sb, 2).unwrap();
        let cx = v.counterexample.expect("refuted");
        assert_eq!(cx.aux, FinSet(0));
        assert!(ex.leq(one, &sb, &ex.embed(one, set(1, &[]))).unwrap());
        // a two-witness existential is equivalent to its embedded image and free
        let two = ExObj { ctx: one, aux: FinSet(2), body: set(2, &[0, 1]) };
        assert!(is_existential_free(&ex, one, &two, 2).unwrap().free);
        let bottom = ex.embed(one, set(1, &[]));
        assert!(is_existential_free(&ex, one, &bottom, 2).unwrap().free);
    }

    #[test]
    fn dial_quantifier_free_examples() {
        let dial = DialCompletion::new(subsets());
        let i = FinSet(2);
        let fr = Freeness::new(&dial, 2);
        let embedded = dial.embed(i, set(2, &[1]));
        assert!(fr.quantifier_free(i, &embedded).unwrap().free);
        let witness_sort = DialObj { ctx: i, witness: FinSet(0), counter: FinSet(1), body: set(0, &[]) };
        assert!(!fr.existential_free(i, &witness_sort).unwrap().free);
        let counter_sort = DialObj { ctx: i, witness: FinSet(1), counter: FinSet(0), body: set(0, &[]) };
        assert!(fr.existential_free(i, &counter_sort).unwrap().free);
        assert!(!fr.quantifier_free(i, &counter_sort).unwrap().free);
    }

    #[test]
    fn verdicts_are_stable_under_reindexing() {
        let dial = DialCompletion::new(subsets());
        let fr = Freeness::new(&dial, 1);
        let i = FinSet(2);
        for alpha in dial.classes(i).unwrap().iter() {
            if !fr.existential_free(i, alpha).unwrap().free {
                continue;
            }
            for f in dial.base().maps(FinSet(1), i).unwrap() {
                let moved = dial.reindex(&f, alpha).unwrap();
                assert!(fr.existential_free(FinSet(1), &moved).unwrap().free);
            }
        }
    }

    #[test]
    fn universal_completion_characterisation() {
        let un = UnCompletion::new(subsets());
        let fr = Freeness::new(&un, 2);
        let one = FinSet::ONE;
        for alpha in un.fiber(one).unwrap() {
            let embedded = un.fiber(one).unwrap().into_iter().filter(|e| e.aux == FinSet::ONE).any(|e| {
                equivalent(&un, one, &alpha, &e).unwrap()
            });
            assert_eq!(fr.universal_free(one, &alpha).unwrap().free, embedded, "{alpha}");
        }
    }

    #[test]
    fn enough_free_elements() {
        let r = has_enough_existential_free(&ExCompletion::new(subsets()), &Window::new(2));
        assert!(r.passed(), "{}", r.render());
        assert!(r.data.iter().all(|(k, v)| k[k.find(" alpha=ex").unwrap() + 9..].starts_with(&v[2..3])));
        let r = has_enough_existential_free(&subsets(), &Window::new(2));
        let failure = r.failure.expect("middle subsets are uncovered");
        assert_eq!(failure.instance, "I=2 alpha={0}");
    }

    /// Subsets whose existential along projections is constantly full.
    struct LoudExists(SubsetDoctrine);

    impl Doctrine for LoudExists {
        type Elem = Bits;
        fn name(&self) -> String {
            "loud-exists".into()
        }
        fn base(&self) -> &BaseCat {
            self.0.base()
        }
        fn capabilities(&self) -> Capabilities {
            Capabilities::ALL
        }
        fn fiber(&self, obj: FinSet) -> Result<Vec<Bits>> {
            self.0.fiber(obj)
        }
        fn leq(&self, obj: FinSet, l: &Bits, r: &Bits) -> Result<bool> {
            self.0.leq(obj, l, r)
        }
        fn reindex(&self, f: &FinMap, e: &Bits) -> Result<Bits> {
            self.0.reindex(f, e)
        }
        fn exists_projection(&self, a: FinSet, _b: FinSet, _e: &Bits) -> Option<Result<Bits>> {
            Some(Ok(Bits::full(a.0)))
        }
    }

    #[test]
    fn uncovered_elements_fail() {
        let r = has_enough_existential_free(&LoudExists(subsets()), &Window::new(1));
        assert_eq!(r.status, Status::Fail);
        assert!(r.failure.unwrap().instance.contains("alpha={}"));
    }

    #[test]
    fn skolem_and_godel_verdicts() {
        let w = Window::new(2);
        let ex = ExCompletion::new(subsets());
        let r = check_skolem_doctrine(&ex, &w);
        assert_eq!(r.failure.as_ref().unwrap().law, "quantifiers/capabilities");
        assert!(!check_godel_doctrine(&ex, &w).passed());
        let trivial = check_godel_doctrine(&TrivialDoctrine::new(BaseCat::new(2)), &w);
        assert_eq!(trivial.failure.unwrap().law, "forall-preserves-existential-free/stability");
        let limited = check_skolem_doctrine(&subsets(), &Window::new(3));
        assert_eq!(limited.children[0].status, Status::WindowLimited);
        assert_eq!(limited.failure.unwrap().law, "enough-existential-free/cover");
    }

    #[test]
    fn dial_of_subsets_is_godel() {
        let dial = DialCompletion::new(subsets());
        let r = check_godel_doctrine(&dial, &Window::new(2));
        assert!(r.passed(), "{}", r.render());
    }
}
