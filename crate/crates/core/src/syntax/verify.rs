use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use serde::Serialize;

use super::model::Model;
use super::{dialectica_translate, infer, Formula, Signature, Sort};
use crate::doctrine::Bits;
use crate::error::{Error, Result};
use crate::finbase::{eval_code, power, BaseCat, Shape};
use crate::report::{Report, Sweep, Window};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnvVerdict {
    pub env: BTreeMap<String, usize>,
    /// Truth of the formula.
    pub direct: bool,
    /// Truth of its translation, i.e. whether a witness exists.
    pub translated: bool,
    /// The least witness tuple, rendered per witness variable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub formula: String,
    pub translation: String,
    pub envs: Vec<EnvVerdict>,
}

impl Verification {
    pub fn agrees(&self) -> bool {
        self.envs.iter().all(|v| v.direct == v.translated)
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new("verify-witness", format!("{} environment(s)", self.envs.len()));
        r.datum("formula", &self.formula);
        r.datum("translation", &self.translation);
        for v in &self.envs {
            r.checked += 1;
            let env: Vec<String> = v.env.iter().map(|(x, a)| format!("{x}={a}")).collect();
            let env = env.join(" ");
            if v.direct != v.translated {
                r.fail("agreement", env.clone(), format!("formula is {}, translation is {}", v.direct, v.translated));
            }
            let witness = v.witness.as_ref().map_or("none".to_string(), |w| {
                w.iter().map(|(u, a)| format!("{u}={a}")).collect::<Vec<_>>().join(" ")
            });
            r.datum(format!("[{env}] formula/translation/witness"), format!("{}/{}/{witness}", v.direct, v.translated));
        }
        r
    }
}

/// Renders element `v` of `s`: functions as their value tables.
fn render(m: &Model, s: &Sort, v: usize) -> Result<String> {
    match s {
        Sort::Fun(dom, cod) => {
            let c = m.size(cod)?;
            let n: usize = dom.iter().map(|d| m.size(d)).product::<Result<usize>>()?;
            let vals = (0..n).map(|k| render(m, cod, eval_code(v, c, k))).collect::<Result<Vec<_>>>()?;
            Ok(format!("[{}]", vals.join(",")))
        }
        _ => Ok(v.to_string()),
    }
}

/// Evaluates `phi` and its translation in `m` for every environment of its
/// free variables, searching the least witness tuple for the translation.
pub fn verify_witness(phi: &Formula, m: &Model) -> Result<Verification> {
    let free = m.check(phi)?;
    let d = dialectica_translate(phi);
    let ctx: Vec<(String, Sort)> = free.into_iter().collect();
    let env_shape = Shape::new(ctx.iter().map(|(_, s)| m.size(s)).collect::<Result<Vec<_>>>()?);
    let wit_shape = Shape::new(d.witnesses.iter().map(|(_, s)| m.size(s)).collect::<Result<Vec<_>>>()?);
    d.counters.iter().try_for_each(|(_, s)| m.size(s).map(drop))?;

    let direct = m.interpret(phi, &ctx)?;
    let universal = d.counters.iter().rev().fold(d.matrix.clone(), |acc, (x, s)| Formula::forall(x, s.clone(), acc));
    let full: Vec<(String, Sort)> = ctx.iter().chain(&d.witnesses).cloned().collect();
    let good: Bits = m.interpret(&universal, &full)?;

    let width = wit_shape.object().size();
    let mut envs = Vec::with_capacity(env_shape.object().size());
    let mut point = vec![0; ctx.len()];
    let mut tuple = vec![0; d.witnesses.len()];
    for g in env_shape.object().elements() {
        env_shape.decode(g, &mut point);
        let found = (0..width).find(|&u| good.contains(g * width + u));
        let witness = match found {
            Some(u) => {
                wit_shape.decode(u, &mut tuple);
                let w = d
                    .witnesses
                    .iter()
                    .zip(&tuple)
                    .map(|((x, s), &v)| Ok((x.clone(), render(m, s, v)?)))
                    .collect::<Result<Vec<_>>>()?;
                Some(w)
            }
            None => None,
        };
        envs.push(EnvVerdict {
            env: ctx.iter().zip(&point).map(|((x, _), &v)| (x.clone(), v)).collect(),
            direct: direct.contains(g),
            translated: found.is_some(),
            witness,
        });
    }
    Ok(Verification { formula: phi.to_string(), translation: d.to_string(), envs })
}

/// Every model of `sig` assigning each sort in `sorts` a carrier size in
/// `sizes`: carriers vary slowest, then function tables, then relations,
/// each in lexicographic order.
pub fn all_models(sig: &Signature, sorts: &BTreeSet<String>, sizes: RangeInclusive<usize>, base: BaseCat) -> Result<Vec<Model>> {
    let names: Vec<&String> = sorts.iter().collect();
    let choices: Vec<usize> = sizes.clone().collect();
    let mut out = Vec::new();
    let mut total: u128 = 0;
    for k in 0..choices.len().pow(names.len() as u32) {
        let carrier = Shape::new(vec![choices.len(); names.len()]);
        let mut idx = vec![0; names.len()];
        carrier.decode(k, &mut idx);
        let assignment: BTreeMap<String, usize> =
            names.iter().zip(&idx).map(|(n, &i)| ((*n).clone(), choices[i])).collect();
        let skeleton = Model::new(assignment, base);
        let size = |ss: &[Sort]| -> Result<usize> { ss.iter().map(|s| skeleton.size(s)).product() };

        let mut dims = Vec::new();
        for (args, res) in sig.functions.values() {
            let (n, c) = (size(args)?, skeleton.size(res)?);
            dims.push(power(c, n).unwrap_or(u128::MAX));
        }
        for args in sig.relations.values() {
            dims.push(power(2, size(args)?).unwrap_or(u128::MAX));
        }
        let count = dims.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d)).unwrap_or(u128::MAX);
        total = total.saturating_add(count);
        base.charge(total)?;

        for code in 0..count {
            let mut m = skeleton.clone();
            let mut rest = code;
            let mut digits = Vec::with_capacity(dims.len());
            for &d in dims.iter().rev() {
                digits.push(rest % d);
                rest /= d;
            }
            digits.reverse();
            let mut digits = digits.into_iter();
            for (g, (args, res)) in &sig.functions {
                let (n, c) = (size(args)?, skeleton.size(res)?);
                let f = digits.next().expect("one digit per symbol") as usize;
                let table = (0..n).map(|b| eval_code(f, c, b)).collect();
                m.add_function(g, args.clone(), res.clone(), table)?;
            }
            for (r, args) in &sig.relations {
                let mask = digits.next().expect("one digit per symbol");
                let holds = Bits::from_fn(size(args)?, |k| (mask >> k) & 1 == 1);
                m.add_relation(r, args.clone(), holds)?;
            }
            out.push(m);
        }
    }
    Ok(out)
}

/// Checks `eval(φ) = eval(φ^D)` for every formula and every model with
/// carriers in `sizes`. Models whose function sorts exceed the exponential
/// cap are skipped.
pub fn agreement_sweep(formulas: &[Formula], sizes: RangeInclusive<usize>, base: BaseCat) -> Result<Report> {
    let window = Window::new(*sizes.end());
    let mut top = Report::new("translation-agreement", format!("carriers {}..={}", sizes.start(), sizes.end()));
    for (k, phi) in formulas.iter().enumerate() {
        let (sig, free) = infer(phi, &Signature::default())?.complete()?;
        if !free.is_empty() {
            return Err(Error::Invalid(format!("formula {k} is not closed")));
        }
        let mut sorts = phi.sort_names();
        for s in sig.relations.values().flatten().chain(sig.functions.values().flat_map(|(a, r)| a.iter().chain([r]))) {
            sorts.extend(match s {
                Sort::Named(n) => Some(n.clone()),
                _ => None,
            });
        }
        let mut sweep = Sweep::new(format!("formula {k}"), &window);
        sweep.report_mut().datum("formula", phi);
        sweep.report_mut().datum("translation", dialectica_translate(phi));
        let models = all_models(&sig, &sorts, sizes.clone(), base)?;
        let mut true_in = 0;
        for m in &models {
            sweep.case(
                "eval(phi) = eval(phi^D)",
                || serde_json::to_string(&m.to_spec()).expect("specs serialise"),
                || {
                    let v = verify_witness(phi, m)?;
                    true_in += usize::from(v.envs[0].direct);
                    Ok((!v.agrees()).then(|| format!("formula {}, translation {}", v.envs[0].direct, v.envs[0].translated)))
                },
            );
        }
        sweep.report_mut().datum("models", models.len());
        sweep.report_mut().datum("true in", true_in);
        top.push(sweep.finish());
    }
    Ok(top)
}
