//! Finite structures and evaluation through the subset doctrine.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{infer, parse_sort, Formula, Signature, Sort, Term};
use crate::doctrine::{self, Bits, SubsetDoctrine};
use crate::error::{Error, Result};
use crate::finbase::{eval_code, power, BaseCat, FinMap, FinSet, Shape};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionInterp {
    pub args: Vec<Sort>,
    pub result: Sort,
    /// Table over the row-major product of the argument carriers.
    pub map: FinMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationInterp {
    pub args: Vec<Sort>,
    pub holds: Bits,
}

/// An interpretation of named sorts, function symbols and relation symbols.
/// The decision sort `2` is always present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub sorts: BTreeMap<String, usize>,
    pub functions: BTreeMap<String, FunctionInterp>,
    pub relations: BTreeMap<String, RelationInterp>,
    pub base: BaseCat,
}

/// File form of a model.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub sorts: BTreeMap<String, usize>,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionSpec>,
    #[serde(default)]
    pub relations: BTreeMap<String, RelationSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub args: Vec<String>,
    pub result: String,
    pub table: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    pub args: Vec<String>,
    pub tuples: Vec<Vec<usize>>,
}

impl Model {
    pub fn new(sorts: BTreeMap<String, usize>, base: BaseCat) -> Model {
        Model { sorts, functions: BTreeMap::new(), relations: BTreeMap::new(), base }
    }

    /// Carrier size, with function sorts bounded by the exponential cap.
    pub fn size(&self, s: &Sort) -> Result<usize> {
        match s {
            Sort::Named(n) => self.sorts.get(n).copied().ok_or_else(|| Error::UnboundSymbol(n.clone())),
            Sort::Bool => Ok(2),
            Sort::Fun(dom, cod) => {
                let c = self.size(cod)?;
                let b = self.shape(dom)?.object().size();
                let n = power(c, b).unwrap_or(u128::MAX);
                if n > self.base.exp_cap as u128 {
                    Err(Error::CapExceeded { size: n, cap: self.base.exp_cap })
                } else {
                    Ok(n as usize)
                }
            }
        }
    }

    fn shape(&self, sorts: &[Sort]) -> Result<Shape> {
        Ok(Shape::new(sorts.iter().map(|s| self.size(s)).collect::<Result<Vec<_>>>()?))
    }

    pub fn add_relation(&mut self, name: &str, args: Vec<Sort>, holds: Bits) -> Result<()> {
        let n = self.shape(&args)?.object().size();
        if holds.len() != n {
            return Err(Error::Invalid(format!("relation {name} needs {n} entries, given {}", holds.len())));
        }
        self.relations.insert(name.to_string(), RelationInterp { args, holds });
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, args: Vec<Sort>, result: Sort, table: Vec<usize>) -> Result<()> {
        let dom = self.shape(&args)?.object();
        let cod = FinSet(self.size(&result)?);
        let map = FinMap::new(dom, cod, table).map_err(|e| Error::Invalid(format!("function {name}: {e}")))?;
        self.functions.insert(name.to_string(), FunctionInterp { args, result, map });
        Ok(())
    }

    pub fn signature(&self) -> Signature {
        Signature {
            relations: self.relations.iter().map(|(r, i)| (r.clone(), i.args.clone())).collect(),
            functions: self
                .functions
                .iter()
                .map(|(g, i)| (g.clone(), (i.args.clone(), i.result.clone())))
                .collect(),
        }
    }

    pub fn from_spec(spec: &ModelSpec, base: BaseCat) -> Result<Model> {
        let mut m = Model::new(spec.sorts.clone(), base);
        let sorts = |names: &[String]| names.iter().map(|s| parse_sort(s)).collect::<Result<Vec<_>>>();
        for (g, f) in &spec.functions {
            m.add_function(g, sorts(&f.args)?, parse_sort(&f.result)?, f.table.clone())?;
        }
        for (r, rel) in &spec.relations {
            let args = sorts(&rel.args)?;
            let shape = m.shape(&args)?;
            let mut holds = Bits::empty(shape.object().size());
            for t in &rel.tuples {
                if t.len() != args.len() || t.iter().zip(shape.sizes()).any(|(&v, &n)| v >= n) {
                    return Err(Error::Invalid(format!("relation {r}: tuple {t:?} is outside its carriers")));
                }
                holds.insert(shape.encode(t));
            }
            m.add_relation(r, args, holds)?;
        }
        Ok(m)
    }

    pub fn from_json(text: &str, base: BaseCat) -> Result<Model> {
        let spec: ModelSpec = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("model file: {e}")))?;
        Model::from_spec(&spec, base)
    }

    pub fn to_spec(&self) -> ModelSpec {
        let names = |v: &[Sort]| v.iter().map(Sort::to_string).collect();
        ModelSpec {
            sorts: self.sorts.clone(),
            functions: self
                .functions
                .iter()
                .map(|(g, f)| {
                    let spec = FunctionSpec { args: names(&f.args), result: f.result.to_string(), table: f.map.table().to_vec() };
                    (g.clone(), spec)
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|(r, rel)| {
                    let shape = self.shape(&rel.args).expect("validated on construction");
                    let tuples = rel
                        .holds
                        .ones()
                        .map(|k| {
                            let mut t = vec![0; rel.args.len()];
                            shape.decode(k, &mut t);
                            t
                        })
                        .collect();
                    (r.clone(), RelationSpec { args: names(&rel.args), tuples })
                })
                .collect(),
        }
    }

    /// Checks the formula's symbols against the model and returns the
    /// sorts of its free variables.
    pub(crate) fn check(&self, phi: &Formula) -> Result<BTreeMap<String, Sort>> {
        let typing = infer(phi, &self.signature())?;
        for r in typing.relations.keys() {
            if !self.relations.contains_key(r) {
                return Err(Error::UnboundSymbol(r.clone()));
            }
        }
        for g in typing.functions.keys() {
            if !self.functions.contains_key(g) {
                return Err(Error::UnboundSymbol(g.clone()));
            }
        }
        let (_, free) = typing.complete()?;
        Ok(free)
    }

    /// The truth set of `phi` over the product of the carriers of `ctx`.
    pub(crate) fn interpret(&self, phi: &Formula, ctx: &[(String, Sort)]) -> Result<Bits> {
        let mut scope = ctx
            .iter()
            .map(|(x, s)| Ok((x.clone(), s.clone(), self.size(s)?)))
            .collect::<Result<Vec<_>>>()?;
        Interp { m: self, d: SubsetDoctrine::new(self.base) }.formula(phi, &mut scope)
    }
}

struct Interp<'m> {
    m: &'m Model,
    d: SubsetDoctrine,
}

type Scope = Vec<(String, Sort, usize)>;

impl Interp<'_> {
    fn object(&self, scope: &Scope) -> Result<Shape> {
        let shape = Shape::new(scope.iter().map(|(_, _, n)| *n));
        let size = scope.iter().try_fold(1u128, |acc, (_, _, n)| acc.checked_mul(*n as u128));
        self.m.base.charge(size.unwrap_or(u128::MAX))?;
        Ok(shape)
    }

    fn formula(&self, phi: &Formula, scope: &mut Scope) -> Result<Bits> {
        let shape = self.object(scope)?;
        let obj = shape.object();
        match phi {
            Formula::Top => doctrine::top(&self.d, obj),
            Formula::Bot => doctrine::bot(&self.d, obj),
            Formula::Atom(r, args) => {
                let rel = self.m.relations.get(r).ok_or_else(|| Error::UnboundSymbol(r.clone()))?;
                let target = self.m.shape(&rel.args)?;
                let f = self.tuple_map(&shape, scope, args, &target)?;
                doctrine::Doctrine::reindex(&self.d, &f, &rel.holds)
            }
            Formula::Eq(s, t) => {
                let n = self.sort_size(s, scope)?;
                let f = self.tuple_map(&shape, scope, &[s.clone(), t.clone()], &Shape::new([n, n]))?;
                let eq = doctrine::equality_predicate(&self.d, FinSet(n))?;
                doctrine::Doctrine::reindex(&self.d, &f, &eq)
            }
            Formula::And(a, b) => doctrine::meet(&self.d, obj, &self.formula(a, scope)?, &self.formula(b, scope)?),
            Formula::Or(a, b) => doctrine::join(&self.d, obj, &self.formula(a, scope)?, &self.formula(b, scope)?),
            Formula::Imp(a, b) => {
                doctrine::implies(&self.d, obj, &self.formula(a, scope)?, &self.formula(b, scope)?)
            }
            Formula::Exists(x, s, a) | Formula::Forall(x, s, a) => {
                let n = self.m.size(s)?;
                scope.push((x.clone(), s.clone(), n));
                let body = self.formula(a, scope);
                scope.pop();
                let body = body?;
                if matches!(phi, Formula::Exists(..)) {
                    doctrine::exists_proj(&self.d, obj, FinSet(n), &body)
                } else {
                    doctrine::forall_proj(&self.d, obj, FinSet(n), &body)
                }
            }
        }
    }

    fn sort_size(&self, t: &Term, scope: &Scope) -> Result<usize> {
        self.m.size(&self.sort_of(t, scope)?)
    }

    fn sort_of(&self, t: &Term, scope: &Scope) -> Result<Sort> {
        match t {
            Term::Var(x) => scope
                .iter()
                .rev()
                .find(|(y, _, _)| y == x)
                .map(|(_, s, _)| s.clone())
                .ok_or_else(|| Error::UnboundSymbol(x.clone())),
            Term::Num(_) => Ok(Sort::Bool),
            Term::Fn(g, _) => {
                Ok(self.m.functions.get(g).ok_or_else(|| Error::UnboundSymbol(g.clone()))?.result.clone())
            }
            Term::Ev(h, _) => match self.sort_of(h, scope)? {
                Sort::Fun(_, cod) => Ok(*cod),
                s => Err(Error::Sort(format!("{h} of sort {s} is applied to arguments"))),
            },
        }
    }

    /// The map from the scope's product to `target` given by a term tuple.
    fn tuple_map(&self, shape: &Shape, scope: &Scope, args: &[Term], target: &Shape) -> Result<FinMap> {
        let mut out = Vec::with_capacity(shape.object().size());
        let mut point = vec![0; scope.len()];
        let mut values = vec![0; args.len()];
        for k in shape.object().elements() {
            shape.decode(k, &mut point);
            for (v, t) in values.iter_mut().zip(args) {
                *v = self.term(t, scope, &point)?;
            }
            out.push(target.encode(&values));
        }
        FinMap::new(shape.object(), target.object(), out)
    }

    fn term(&self, t: &Term, scope: &Scope, point: &[usize]) -> Result<usize> {
        match t {
            Term::Var(x) => scope
                .iter()
                .rposition(|(y, _, _)| y == x)
                .map(|k| point[k])
                .ok_or_else(|| Error::UnboundSymbol(x.clone())),
            Term::Num(n) => Ok(*n),
            Term::Fn(g, args) => {
                let f = self.m.functions.get(g).ok_or_else(|| Error::UnboundSymbol(g.clone()))?;
                let shape = self.m.shape(&f.args)?;
                let vals = args.iter().map(|a| self.term(a, scope, point)).collect::<Result<Vec<_>>>()?;
                Ok(f.map.apply(shape.encode(&vals)))
            }
            Term::Ev(h, args) => {
                let Sort::Fun(dom, cod) = self.sort_of(h, scope)? else {
                    return Err(Error::Sort(format!("{h} is applied to arguments")));
                };
                let code = self.term(h, scope, point)?;
                let vals = args.iter().map(|a| self.term(a, scope, point)).collect::<Result<Vec<_>>>()?;
                Ok(eval_code(code, self.m.size(&cod)?, self.m.shape(&dom)?.encode(&vals)))
            }
        }
    }
}

/// Truth of `phi` in `m` under `env`, computed as the truth set of `phi`
/// over the context of its free variables.
pub fn evaluate(phi: &Formula, m: &Model, env: &BTreeMap<String, usize>) -> Result<bool> {
    let free = m.check(phi)?;
    let ctx: Vec<(String, Sort)> = free.into_iter().collect();
    let mut point = Vec::with_capacity(ctx.len());
    for (x, s) in &ctx {
        let v = *env.get(x).ok_or_else(|| Error::UnboundSymbol(x.clone()))?;
        if v >= m.size(s)? {
            return Err(Error::Invalid(format!("{x} = {v} is outside the carrier of {s}")));
        }
        point.push(v);
    }
    let shape = Shape::new(ctx.iter().map(|(_, s)| m.size(s)).collect::<Result<Vec<_>>>()?);
    Ok(m.interpret(phi, &ctx)?.contains(shape.encode(&point)))
}
