//! Skolemisation, witness extraction for implications, and the rule- and
//! principle-level checks for independence of premise, Markov, choice and
//! the counterexample property.
//!
//! Every check sweeps class representatives of the window and re-validates
//! each extracted term by substitution. Negation is `α → ⊥`. Heyting
//! operations are computed by fiber enumeration, so they are only attempted
//! over objects of size at most `bound²`; larger instances are reported as
//! outside the window.

use std::fmt;
use std::str::FromStr;

use crate::doctrine::{exists_proj, forall_proj, heyting, Doctrine, HeytingOp};
use crate::error::{Error, Result};
use crate::finbase::{eval_code, graph, proj1, FinMap, FinSet, Shape};
use crate::freeness::Freeness;
use crate::report::{Report, Sweep, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    IpRule,
    MmpRule,
    MpRule,
    Choice,
    Counterexample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Principle {
    Ip,
    IpStar,
    Mmp,
    Mp,
}

impl Rule {
    pub const ALL: [Rule; 5] = [Rule::IpRule, Rule::MmpRule, Rule::MpRule, Rule::Choice, Rule::Counterexample];

    pub fn name(self) -> &'static str {
        match self {
            Rule::IpRule => "ip-rule",
            Rule::MmpRule => "mmp-rule",
            Rule::MpRule => "mp-rule",
            Rule::Choice => "choice",
            Rule::Counterexample => "counterexample",
        }
    }
}

impl Principle {
    pub const ALL: [Principle; 4] = [Principle::Ip, Principle::IpStar, Principle::Mmp, Principle::Mp];

    pub fn name(self) -> &'static str {
        match self {
            Principle::Ip => "ip",
            Principle::IpStar => "ipstar",
            Principle::Mmp => "mmp",
            Principle::Mp => "mp",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| Error::Invalid(format!("unknown rule `{s}`")))
    }
}

impl FromStr for Principle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Principle> {
        Principle::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown principle `{s}`")))
    }
}

/// What to do when a hypothesis of a rule or principle fails in the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HypothesisPolicy {
    /// Return `SideConditionFailed` / `ClosureHypothesisFailed`.
    #[default]
    Enforce,
    /// Note the failed hypothesis and check the instances anyway.
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Hypothesis {
    TopExistentialFree,
    BottomQuantifierFree,
    ClosedUnderMeet,
    ClosedUnderImplication,
}

/// Outcome of deciding one implication between prenex forms both ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    /// `∃u∀x ψ ≤ ∃v∀y φ` in the fiber order.
    pub sequent: bool,
    /// The lexicographically least `(f0, f1)`, if any pair works.
    pub pair: Option<(FinMap, FinMap)>,
    /// The fiber order's own certificate of the sequent.
    pub certificate: Option<String>,
}

impl Extraction {
    pub fn agrees(&self) -> bool {
        self.sequent == self.pair.is_some()
    }
}

pub struct Principles<'p, P: Doctrine + ?Sized> {
    p: &'p P,
    window: Window,
    policy: HypothesisPolicy,
    free: Freeness<'p, P>,
}

impl<'p, P: Doctrine + ?Sized> Principles<'p, P> {
    pub fn new(p: &'p P, window: Window) -> Self {
        let free = Freeness::new(p, window.bound);
        Principles { p, window, policy: HypothesisPolicy::Enforce, free }
    }

    pub fn with_policy(self, policy: HypothesisPolicy) -> Self {
        Principles { policy, ..self }
    }

    pub fn freeness(&self) -> &Freeness<'p, P> {
        &self.free
    }

    fn objects(&self) -> Vec<FinSet> {
        let top = self.p.max_object().map_or(self.window.bound, |m| m.min(self.window.bound));
        (0..=top).map(FinSet).collect()
    }

    fn fits(&self, obj: FinSet) -> bool {
        self.p.max_object().map_or(true, |m| obj.0 <= m)
    }

    fn heyting_limit(&self) -> usize {
        self.window.bound * self.window.bound
    }

    fn op(&self, obj: FinSet, op: HeytingOp, args: &[P::Elem]) -> Result<P::Elem> {
        if obj.0 > self.heyting_limit() {
            return Err(Error::CapExceeded { size: obj.0 as u128, cap: self.heyting_limit() });
        }
        heyting(self.p, obj, op, args)
    }

    fn top(&self, obj: FinSet) -> Result<P::Elem> {
        self.op(obj, HeytingOp::Top, &[])
    }

    fn bot(&self, obj: FinSet) -> Result<P::Elem> {
        self.op(obj, HeytingOp::Bot, &[])
    }

    fn imp(&self, obj: FinSet, a: &P::Elem, b: &P::Elem) -> Result<P::Elem> {
        self.op(obj, HeytingOp::Impl, &[a.clone(), b.clone()])
    }

    fn neg(&self, obj: FinSet, a: &P::Elem) -> Result<P::Elem> {
        let bot = self.bot(obj)?;
        self.imp(obj, a, &bot)
    }

    fn valid(&self, obj: FinSet, a: &P::Elem) -> Result<bool> {
        let top = self.top(obj)?;
        self.p.leq(obj, &top, a)
    }

    fn ex_free(&self, obj: FinSet, a: &P::Elem) -> Result<bool> {
        Ok(self.free.existential_free(obj, a)?.free)
    }

    fn qf(&self, obj: FinSet, a: &P::Elem) -> Result<bool> {
        Ok(self.free.quantifier_free(obj, a)?.free)
    }

    fn reps(&self, obj: FinSet, keep: impl Fn(&P::Elem) -> Result<bool>) -> Result<Vec<P::Elem>> {
        let mut out = Vec::new();
        for e in self.p.classes(obj)?.iter() {
            if keep(e)? {
                out.push(e.clone());
            }
        }
        Ok(out)
    }

    fn hypothesis(&self, h: Hypothesis) -> Result<Option<String>> {
        for obj in self.objects() {
            match h {
                Hypothesis::TopExistentialFree => {
                    let top = self.top(obj)?;
                    if !self.ex_free(obj, &top)? {
                        return Ok(Some(format!("top over {} is not existential-free", obj.0)));
                    }
                }
                Hypothesis::BottomQuantifierFree => {
                    let bot = self.bot(obj)?;
                    let v = self.free.quantifier_free(obj, &bot)?;
                    if !v.free {
                        return Ok(Some(format!("bottom {bot} over {} is {v}", obj.0)));
                    }
                }
                Hypothesis::ClosedUnderMeet | Hypothesis::ClosedUnderImplication => {
                    let free = self.reps(obj, |e| self.ex_free(obj, e))?;
                    for a in &free {
                        for b in &free {
                            let (c, what) = if h == Hypothesis::ClosedUnderMeet {
                                (self.op(obj, HeytingOp::Meet, &[a.clone(), b.clone()])?, "meet")
                            } else {
                                (self.imp(obj, a, b)?, "implication")
                            };
                            if !self.ex_free(obj, &c)? {
                                return Ok(Some(format!("{what} of {a} and {b} over {} is {c}, not existential-free", obj.0)));
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    fn require(&self, report: &mut Report, hyps: &[Hypothesis]) -> Result<()> {
        for &h in hyps {
            let Some(what) = self.hypothesis(h)? else { continue };
            let closure = matches!(h, Hypothesis::ClosedUnderMeet | Hypothesis::ClosedUnderImplication);
            match (self.policy, closure) {
                (HypothesisPolicy::Enforce, true) => return Err(Error::ClosureHypothesisFailed(what)),
                (HypothesisPolicy::Enforce, false) => return Err(Error::SideConditionFailed(what)),
                (HypothesisPolicy::Report, _) => report.note(format!("hypothesis not verified: {what}")),
            }
        }
        Ok(())
    }

    /// The first `t : A → B` with `ok(P_⟨1,t⟩ e)`.
    fn term(&self, a: FinSet, b: FinSet, e: &P::Elem, ok: impl Fn(&P::Elem) -> Result<bool>) -> Result<Option<FinMap>> {
        for t in self.p.base().maps(a, b)? {
            if ok(&self.p.reindex(&graph(&t), e)?)? {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }

    fn pairs(&self) -> Vec<(FinSet, FinSet)> {
        let objs = self.objects();
        let mut out = Vec::new();
        for &a in &objs {
            for &b in &objs {
                if self.fits(a.times(b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Sweeps every in-window instance of `rule`.
    pub fn check_rule(&self, rule: Rule) -> Result<Report> {
        let mut sweep = Sweep::new(rule.name(), &self.window);
        let hyps: &[Hypothesis] = match rule {
            Rule::MpRule | Rule::Counterexample => &[Hypothesis::BottomQuantifierFree],
            Rule::Choice => &[Hypothesis::TopExistentialFree],
            Rule::IpRule | Rule::MmpRule => &[],
        };
        self.require(sweep.report_mut(), hyps)?;
        for (a, b) in self.pairs() {
            let ab = a.times(b);
            let pi = proj1(a, b);
            let (lefts, rights) = match self.instances(rule, a, b) {
                Ok(x) => x,
                Err(e) => {
                    sweep.skip(format!("A={} B={}: {e}", a.0, b.0));
                    continue;
                }
            };
            for l in &lefts {
                for r in &rights {
                    let id = || match rule {
                        Rule::IpRule | Rule::MmpRule => format!("A={} B={} alpha={l} beta={r}", a.0, b.0),
                        _ => format!("A={} B={} alpha={l}", a.0, b.0),
                    };
                    let mut found = None;
                    let ok = sweep.case(rule.name(), id, || {
                        let (premise, t) = match rule {
                            Rule::IpRule => {
                                let (alpha, beta) = (l, r);
                                let prem = self.valid(a, &self.imp(a, alpha, &exists_proj(self.p, a, b, beta)?)?)?;
                                let t = if prem { self.term(a, b, beta, |bt| self.valid(a, &self.imp(a, alpha, bt)?))? } else { None };
                                if let Some(t) = &t {
                                    let moved = self.p.reindex(&pi, alpha)?;
                                    let concl = exists_proj(self.p, a, b, &self.imp(ab, &moved, beta)?)?;
                                    if !self.valid(a, &concl)? {
                                        return Ok(Some(format!("term {t} found but the existential conclusion fails")));
                                    }
                                }
                                (prem, t)
                            }
                            Rule::MmpRule => {
                                let (beta_d, alpha) = (l, r);
                                let prem = self.valid(a, &self.imp(a, &forall_proj(self.p, a, b, alpha)?, beta_d)?)?;
                                let t = if prem { self.term(a, b, alpha, |at| self.valid(a, &self.imp(a, at, beta_d)?))? } else { None };
                                if let Some(t) = &t {
                                    let moved = self.p.reindex(&pi, beta_d)?;
                                    let concl = exists_proj(self.p, a, b, &self.imp(ab, alpha, &moved)?)?;
                                    if !self.valid(a, &concl)? {
                                        return Ok(Some(format!("term {t} found but the existential conclusion fails")));
                                    }
                                }
                                (prem, t)
                            }
                            Rule::MpRule => {
                                let prem = self.valid(a, &self.neg(a, &forall_proj(self.p, a, b, l)?)?)?;
                                let t = if prem { self.term(a, b, l, |at| self.valid(a, &self.neg(a, at)?))? } else { None };
                                if let Some(t) = &t {
                                    let concl = exists_proj(self.p, a, b, &self.neg(ab, l)?)?;
                                    if !self.valid(a, &concl)? {
                                        return Ok(Some(format!("term {t} found but the existential conclusion fails")));
                                    }
                                }
                                (prem, t)
                            }
                            Rule::Choice => {
                                let prem = self.valid(a, &exists_proj(self.p, a, b, l)?)?;
                                let t = if prem { self.term(a, b, l, |at| self.valid(a, at))? } else { None };
                                (prem, t)
                            }
                            Rule::Counterexample => {
                                let bot = self.bot(a)?;
                                let prem = self.p.leq(a, &forall_proj(self.p, a, b, l)?, &bot)?;
                                let t = if prem { self.term(a, b, l, |at| self.p.leq(a, at, &bot))? } else { None };
                                (prem, t)
                            }
                        };
                        if premise && t.is_none() {
                            return Ok(Some("premise holds but no term exists".to_string()));
                        }
                        found = t;
                        Ok(None)
                    });
                    if let (true, Some(t)) = (ok, found) {
                        sweep.report_mut().datum(id(), format!("t={t}"));
                    }
                }
            }
        }
        Ok(sweep.finish())
    }

    /// Left and right instance lists of a rule over `A` and `B`.
    fn instances(&self, rule: Rule, a: FinSet, b: FinSet) -> Result<(Vec<P::Elem>, Vec<P::Elem>)> {
        let ab = a.times(b);
        let all = |obj: FinSet| -> Result<Vec<P::Elem>> { Ok(self.p.classes(obj)?.to_vec()) };
        let unit = vec![self.top(FinSet(0))?];
        Ok(match rule {
            Rule::IpRule => (self.reps(a, |e| self.ex_free(a, e))?, all(ab)?),
            Rule::MmpRule => (self.reps(a, |e| self.qf(a, e))?, self.reps(ab, |e| self.ex_free(ab, e))?),
            Rule::MpRule => (self.reps(ab, |e| self.qf(ab, e))?, unit),
            Rule::Choice => (self.reps(ab, |e| self.ex_free(ab, e))?, unit),
            Rule::Counterexample => (all(ab)?, unit),
        })
    }

    /// Sweeps every in-window instance of `principle` as `⊤ ≤ φ`.
    pub fn check_principle(&self, principle: Principle) -> Result<Report> {
        let mut sweep = Sweep::new(principle.name(), &self.window);
        let hyps: &[Hypothesis] = match principle {
            Principle::Ip | Principle::IpStar => &[Hypothesis::ClosedUnderMeet],
            Principle::Mmp => &[Hypothesis::ClosedUnderImplication],
            Principle::Mp => &[Hypothesis::ClosedUnderImplication, Hypothesis::BottomQuantifierFree],
        };
        self.require(sweep.report_mut(), hyps)?;
        if principle == Principle::IpStar {
            self.ip_star(&mut sweep);
            return Ok(sweep.finish());
        }
        for (a, b) in self.pairs() {
            let ab = a.times(b);
            let pi = proj1(a, b);
            let lists = || -> Result<(Vec<P::Elem>, Vec<P::Elem>)> {
                Ok(match principle {
                    Principle::Ip => (self.reps(a, |e| self.ex_free(a, e))?, self.p.classes(ab)?.to_vec()),
                    Principle::Mmp => (self.reps(a, |e| self.qf(a, e))?, self.reps(ab, |e| self.ex_free(ab, e))?),
                    _ => (self.reps(ab, |e| self.qf(ab, e))?, vec![self.top(FinSet(0))?]),
                })
            };
            let (lefts, rights) = match lists() {
                Ok(x) => x,
                Err(e) => {
                    sweep.skip(format!("A={} B={}: {e}", a.0, b.0));
                    continue;
                }
            };
            for l in &lefts {
                for r in &rights {
                    let id = || match principle {
                        Principle::Mp => format!("A={} B={} alpha={l}", a.0, b.0),
                        _ => format!("A={} B={} alpha={l} beta={r}", a.0, b.0),
                    };
                    let mut shown = None;
                    let ok = sweep.case(principle.name(), id, || {
                        let (premise, conclusion) = match principle {
                            Principle::Ip => {
                                let (alpha, beta) = (l, r);
                                let prem = self.imp(a, alpha, &exists_proj(self.p, a, b, beta)?)?;
                                let moved = self.p.reindex(&pi, alpha)?;
                                (prem, exists_proj(self.p, a, b, &self.imp(ab, &moved, beta)?)?)
                            }
                            Principle::Mmp => {
                                let (beta_d, alpha) = (l, r);
                                let prem = self.imp(a, &forall_proj(self.p, a, b, alpha)?, beta_d)?;
                                let moved = self.p.reindex(&pi, beta_d)?;
                                (prem, exists_proj(self.p, a, b, &self.imp(ab, alpha, &moved)?)?)
                            }
                            _ => {
                                let prem = self.neg(a, &forall_proj(self.p, a, b, l)?)?;
                                (prem, exists_proj(self.p, a, b, &self.neg(ab, l)?)?)
                            }
                        };
                        let whole = self.imp(a, &premise, &conclusion)?;
                        shown = Some(format!("{premise} -> {conclusion} = {whole}"));
                        Ok((!self.valid(a, &whole)?).then(|| format!("top is not below {whole}")))
                    });
                    if let (true, Some(s)) = (ok, shown) {
                        sweep.report_mut().datum(id(), s);
                    }
                }
            }
        }
        Ok(sweep.finish())
    }

    /// `⊤ ≤ (∀a.α_D → ∃b.∀c.β) → ∃b.(∀a.α_D → ∀c.β)` in the empty context,
    /// with `β` over `B × C`.
    fn ip_star(&self, sweep: &mut Sweep) {
        let one = FinSet::ONE;
        let objs = self.objects();
        for &a in &objs {
            let alphas = match self.reps(a, |e| self.qf(a, e)) {
                Ok(x) => x,
                Err(e) => {
                    sweep.skip(format!("A={}: {e}", a.0));
                    continue;
                }
            };
            for &b in &objs {
                for &c in &objs {
                    let bc = b.times(c);
                    if !self.fits(bc) {
                        continue;
                    }
                    let betas = match self.p.classes(bc) {
                        Ok(x) => x,
                        Err(e) => {
                            sweep.skip(format!("B={} C={}: {e}", b.0, c.0));
                            continue;
                        }
                    };
                    for alpha in &alphas {
                        for beta in betas.iter() {
                            let id = || format!("A={} B={} C={} alpha={alpha} beta={beta}", a.0, b.0, c.0);
                            sweep.case("ipstar", id, || {
                                let all_a = forall_proj(self.p, one, a, alpha)?;
                                let all_c = forall_proj(self.p, b, c, beta)?;
                                let prem = self.imp(one, &all_a, &exists_proj(self.p, one, b, &all_c)?)?;
                                let weak = self.p.reindex(&FinMap::constant(b, one, 0), &all_a)?;
                                let concl = exists_proj(self.p, one, b, &self.imp(b, &weak, &all_c)?)?;
                                let whole = self.imp(one, &prem, &concl)?;
                                Ok((!self.valid(one, &whole)?).then(|| format!("top is not below {whole}")))
                            });
                        }
                    }
                }
            }
        }
    }

    /// `∀b∃c.α ⊣⊢ ∃f:C^B.∀b.α(a,b,ev(f,b))` for one `α` over `A × B × C`,
    /// with the order certificates of both directions.
    pub fn skolemise(&self, a: FinSet, b: FinSet, c: FinSet, alpha: &P::Elem) -> Result<Report> {
        let p = self.p;
        let (exp, _) = p.base().exponential(b, c)?;
        let ab = a.times(b);
        let lhs = forall_proj(p, a, b, &exists_proj(p, ab, c, alpha)?)?;
        let src = Shape::new([a.0, exp.0, b.0]);
        let dst = Shape::new([a.0, b.0, c.0]);
        let ev = src.map_to(&dst, |s, d| d.copy_from_slice(&[s[0], s[2], eval_code(s[1], c.0, s[2])]));
        let moved = p.reindex(&ev, alpha)?;
        let rhs = exists_proj(p, a, exp, &forall_proj(p, a.times(exp), b, &moved)?)?;
        let mut report = Report::new("skolemisation", self.window.describe());
        let id = format!("A={} B={} C={} alpha={alpha}", a.0, b.0, c.0);
        report.checked = 1;
        match (p.leq_certificate(a, &lhs, &rhs)?, p.leq_certificate(a, &rhs, &lhs)?) {
            (Some(fwd), Some(bwd)) => {
                report.datum("forward", fwd);
                report.datum("backward", bwd);
            }
            (fwd, _) => {
                let dir = if fwd.is_none() { "left-to-right" } else { "right-to-left" };
                report.fail("skolemisation", id, format!("{dir} fails: {lhs} vs {rhs}"));
            }
        }
        Ok(report)
    }

    /// `skolemise` over every `A, B, C` in the window with `C^B` within the
    /// exponential cap.
    pub fn check_skolemisation(&self) -> Report {
        let mut sweep = Sweep::new("skolemisation", &self.window);
        let objs = self.objects();
        for &a in &objs {
            for &b in &objs {
                for &c in &objs {
                    let abc = a.times(b).times(c);
                    if !self.fits(abc) {
                        continue;
                    }
                    if let Err(e) = self.p.base().exponential(b, c) {
                        sweep.skip(format!("B={} C={}: {e}", b.0, c.0));
                        continue;
                    }
                    let alphas = match self.p.classes(abc) {
                        Ok(x) => x,
                        Err(e) => {
                            sweep.skip(format!("A={} B={} C={}: {e}", a.0, b.0, c.0));
                            continue;
                        }
                    };
                    for alpha in alphas.iter() {
                        let mut certs = None;
                        let id = || format!("A={} B={} C={} alpha={alpha}", a.0, b.0, c.0);
                        let ok = sweep.case("equivalence", id, || {
                            let r = self.skolemise(a, b, c, alpha)?;
                            if let Some(f) = r.failure {
                                return Ok(Some(f.detail));
                            }
                            certs = Some(r.data);
                            Ok(None)
                        });
                        if let (true, Some(data)) = (ok, certs) {
                            let joined: Vec<String> = data.into_iter().map(|(k, v)| format!("{k}: {v}")).collect();
                            sweep.report_mut().datum(id(), joined.join("; "));
                        }
                    }
                }
            }
        }
        sweep.finish()
    }

    /// Decides `∃u∀x.ψ_D ⊢ ∃v∀y.φ_D` over `I` in the fiber order and,
    /// independently, searches `f0 : I×U → V`, `f1 : I×U×Y → X` with
    /// `ψ_D(i,u,f1(i,u,y)) ≤ φ_D(i,f0(i,u),y)`.
    pub fn extract_dialectica_witnesses(
        &self,
        i: FinSet,
        (u, x, psi): (FinSet, FinSet, &P::Elem),
        (v, y, phi): (FinSet, FinSet, &P::Elem),
    ) -> Result<Extraction> {
        let p = self.p;
        for (sort, e) in [(i.times(u).times(x), psi), (i.times(v).times(y), phi)] {
            let verdict = self.free.quantifier_free(sort, e)?;
            if !verdict.free {
                return Err(Error::SideConditionFailed(format!("{e} is {verdict}")));
            }
        }
        let iu = i.times(u);
        let lhs = exists_proj(p, i, u, &forall_proj(p, iu, x, psi)?)?;
        let rhs = exists_proj(p, i, v, &forall_proj(p, i.times(v), y, phi)?)?;
        let certificate = p.leq_certificate(i, &lhs, &rhs)?;
        let iuy = iu.times(y);
        let mut pair = None;
        'search: for f0 in p.base().maps(iu, v)? {
            let right = FinMap::from_fn(iuy, i.times(v).times(y), |k| {
                let (iu_k, t) = (k / y.0, k % y.0);
                ((iu_k / u.0) * v.0 + f0.apply(iu_k)) * y.0 + t
            });
            let phi_moved = p.reindex(&right, phi)?;
            for f1 in p.base().maps(iuy, x)? {
                let left = FinMap::from_fn(iuy, iu.times(x), |k| (k / y.0) * x.0 + f1.apply(k));
                if p.leq(iuy, &p.reindex(&left, psi)?, &phi_moved)? {
                    pair = Some((f0, f1));
                    break 'search;
                }
            }
        }
        Ok(Extraction { sequent: certificate.is_some(), pair, certificate })
    }

    fn qf_over(&self, sizes: &[usize]) -> Result<Vec<P::Elem>> {
        let obj = FinSet(sizes.iter().product());
        if !self.fits(obj) {
            return Ok(Vec::new());
        }
        self.reps(obj, |e| self.qf(obj, e))
    }

    /// Every `I, U, X, V, Y` in the window, every pair of quantifier-free
    /// representatives: the sequent holds iff a pair exists.
    pub fn check_witness_extraction(&self) -> Report {
        let mut sweep = Sweep::new("witness-extraction", &self.window);
        let objs = self.objects();
        let (mut holds, mut total) = (0u64, 0u64);
        for &i in &objs {
            for &u in &objs {
                for &x in &objs {
                    let psis = match self.qf_over(&[i.0, u.0, x.0]) {
                        Ok(v) => v,
                        Err(e) => {
                            sweep.skip(format!("I={} U={} X={}: {e}", i.0, u.0, x.0));
                            continue;
                        }
                    };
                    for &v in &objs {
                        for &y in &objs {
                            let phis = match self.qf_over(&[i.0, v.0, y.0]) {
                                Ok(p) => p,
                                Err(e) => {
                                    sweep.skip(format!("I={} V={} Y={}: {e}", i.0, v.0, y.0));
                                    continue;
                                }
                            };
                            for psi in &psis {
                                for phi in &phis {
                                    let id = || format!("I={} U={} X={} V={} Y={} psi={psi} phi={phi}", i.0, u.0, x.0, v.0, y.0);
                                    let mut seen = None;
                                    sweep.case("two-sided", id, || {
                                        let ex = self.extract_dialectica_witnesses(i, (u, x, psi), (v, y, phi))?;
                                        seen = Some(ex.sequent);
                                        Ok((!ex.agrees()).then(|| {
                                            format!("sequent {} but pair {:?}", ex.sequent, ex.pair)
                                        }))
                                    });
                                    if let Some(s) = seen {
                                        total += 1;
                                        holds += u64::from(s);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        sweep.report_mut().datum("instances", total);
        sweep.report_mut().datum("sequent holds", holds);
        sweep.finish()
    }

    /// `(∃u∀x.ψ_D → ∃v∀y.φ_D) ⊣⊢ ∃f0,f1.∀u,y.(ψ_D(i,u,f1(u,y)) → φ_D(i,f0(u),y))`
    /// over `I`, with `f0 : V^U` and `f1 : X^(U×Y)`.
    pub fn implication_equivalence(
        &self,
        i: FinSet,
        (u, x, psi): (FinSet, FinSet, &P::Elem),
        (v, y, phi): (FinSet, FinSet, &P::Elem),
    ) -> Result<Report> {
        let p = self.p;
        let mut report = Report::new("impl-equiv", self.window.describe());
        report.checked = 1;
        let id = format!("I={} U={} X={} V={} Y={} psi={psi} phi={phi}", i.0, u.0, x.0, v.0, y.0);
        let uy = u.times(y);
        let (f0s, _) = p.base().exponential(u, v)?;
        let (f1s, _) = p.base().exponential(uy, x)?;
        let ctx = Shape::new([i.0, f0s.0, f1s.0, u.0, y.0]);
        let k = ctx.object();
        if k.0 > self.heyting_limit() {
            return Err(Error::CapExceeded { size: k.0 as u128, cap: self.heyting_limit() });
        }
        let lhs = self.imp(
            i,
            &exists_proj(p, i, u, &forall_proj(p, i.times(u), x, psi)?)?,
            &exists_proj(p, i, v, &forall_proj(p, i.times(v), y, phi)?)?,
        )?;
        let to_psi = ctx.map_to(&Shape::new([i.0, u.0, x.0]), |s, d| {
            d.copy_from_slice(&[s[0], s[3], eval_code(s[2], x.0, s[3] * y.0 + s[4])])
        });
        let to_phi = ctx.map_to(&Shape::new([i.0, v.0, y.0]), |s, d| {
            d.copy_from_slice(&[s[0], eval_code(s[1], v.0, s[3]), s[4]])
        });
        let body = self.imp(k, &p.reindex(&to_psi, psi)?, &p.reindex(&to_phi, phi)?)?;
        let fs = f0s.times(f1s);
        let rhs = exists_proj(p, i, fs, &forall_proj(p, i.times(fs), uy, &body)?)?;
        match (p.leq_certificate(i, &lhs, &rhs)?, p.leq_certificate(i, &rhs, &lhs)?) {
            (Some(fwd), Some(bwd)) => {
                report.datum("forward", fwd);
                report.datum("backward", bwd);
            }
            (fwd, _) => {
                let dir = if fwd.is_none() { "left-to-right" } else { "right-to-left" };
                report.fail("impl-equiv", id, format!("{dir} fails: {lhs} vs {rhs}"));
                return Ok(report);
            }
        }
        let valid = self.valid(i, &rhs)?;
        let extracted = self.extract_dialectica_witnesses(i, (u, x, psi), (v, y, phi))?;
        if valid != extracted.pair.is_some() {
            report.fail("agrees-with-extraction", id, format!("valid {valid}, pair {:?}", extracted.pair));
        }
        Ok(report)
    }

    /// `implication_equivalence` over the window, plus the step from
    /// `∀u∃v∀y.(∀x.ψ_D → φ_D)` to `∀u∃v∀y∃x.(ψ_D → φ_D)` read once as a
    /// modified Markov instance and once as a Markov instance.
    pub fn check_implication_equivalence(&self) -> Result<Report> {
        let mut sweep = Sweep::new("impl-equiv", &self.window);
        self.require(
            sweep.report_mut(),
            &[Hypothesis::ClosedUnderMeet, Hypothesis::ClosedUnderImplication, Hypothesis::BottomQuantifierFree],
        )?;
        let objs = self.objects();
        let mut readings = [(0u64, 0u64), (0u64, 0u64)];
        for &i in &objs {
            for &u in &objs {
                for &x in &objs {
                    let Ok(psis) = self.qf_over(&[i.0, u.0, x.0]) else { continue };
                    for &v in &objs {
                        for &y in &objs {
                            let Ok(phis) = self.qf_over(&[i.0, v.0, y.0]) else { continue };
                            for psi in &psis {
                                for phi in &phis {
                                    let id = || format!("I={} U={} X={} V={} Y={} psi={psi} phi={phi}", i.0, u.0, x.0, v.0, y.0);
                                    sweep.case("equivalence", id, || {
                                        let r = self.implication_equivalence(i, (u, x, psi), (v, y, phi))?;
                                        Ok(r.failure.map(|f| format!("{}: {}", f.law, f.detail)))
                                    });
                                    for (slot, reading) in readings.iter_mut().zip([Self::step_mmp, Self::step_mp]) {
                                        if let Ok(held) = reading(self, i, (u, x, psi), (v, y, phi)) {
                                            slot.0 += u64::from(held);
                                            slot.1 += 1;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let r = sweep.report_mut();
        for (name, (held, tried)) in ["modified-markov reading", "markov reading"].iter().zip(readings) {
            r.datum(*name, format!("{held}/{tried} instances"));
        }
        Ok(sweep.finish())
    }

    /// `(∀x.ψ → φ) ⊣⊢ ∃x.(ψ → φ)` over `J = I×U×V×Y`.
    fn step_mmp(&self, i: FinSet, (u, x, psi): (FinSet, FinSet, &P::Elem), (v, y, phi): (FinSet, FinSet, &P::Elem)) -> Result<bool> {
        let p = self.p;
        let j = Shape::new([i.0, u.0, v.0, y.0]);
        let jx = Shape::new([i.0, u.0, v.0, y.0, x.0]);
        let alpha = p.reindex(&jx.map_to(&Shape::new([i.0, u.0, x.0]), |s, d| d.copy_from_slice(&[s[0], s[1], s[4]])), psi)?;
        let beta = p.reindex(&j.map_to(&Shape::new([i.0, v.0, y.0]), |s, d| d.copy_from_slice(&[s[0], s[2], s[3]])), phi)?;
        let (jo, jxo) = (j.object(), jx.object());
        let left = self.imp(jo, &forall_proj(p, jo, x, &alpha)?, &beta)?;
        let right = exists_proj(p, jo, x, &self.imp(jxo, &alpha, &p.reindex(&proj1(jo, x), &beta)?)?)?;
        crate::doctrine::equivalent(p, jo, &left, &right)
    }

    /// `¬∀x.ψ ⊣⊢ ∃x.¬ψ` over `I×U`.
    fn step_mp(&self, i: FinSet, (u, x, psi): (FinSet, FinSet, &P::Elem), _: (FinSet, FinSet, &P::Elem)) -> Result<bool> {
        let p = self.p;
        let iu = i.times(u);
        let left = self.neg(iu, &forall_proj(p, iu, x, psi)?)?;
        let right = exists_proj(p, iu, x, &self.neg(iu.times(x), psi)?)?;
        crate::doctrine::equivalent(p, iu, &left, &right)
    }
}

#[cfg(test)]
mod tests;
