//! Skeletal finite sets and functions between them.
//!
//! An object is just a size. Pairs `(i, j)` of `A × B` are encoded as
//! `i * |B| + j`, so iterated products are row-major and associativity
//! holds on the nose. A function `B → C` is encoded in `C^B` as the
//! base-`|C|` numeral whose digit `b` (least significant first) is its
//! value at `b`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of candidates a brute-force search may visit.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FinSet(pub usize);

impl FinSet {
    pub const EMPTY: FinSet = FinSet(0);
    pub const ONE: FinSet = FinSet(1);

    pub fn size(self) -> usize {
        self.0
    }

    pub fn elements(self) -> std::ops::Range<usize> {
        0..self.0
    }

    pub fn times(self, other: FinSet) -> FinSet {
        FinSet(self.0 * other.0)
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FinMap {
    dom: FinSet,
    cod: FinSet,
    table: Vec<usize>,
}

impl FinMap {
    pub fn new(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<FinMap> {
        if table.len() != dom.0 {
            return Err(Error::Invalid(format!(
                "table of length {} for domain {}",
                table.len(),
                dom
            )));
        }
        if let Some(bad) = table.iter().find(|&&t| t >= cod.0) {
            return Err(Error::Invalid(format!("entry {bad} outside codomain {cod}")));
        }
        Ok(FinMap { dom, cod, table })
    }

    /// Builds a map from a function on indices. The caller guarantees the range.
    pub fn from_fn(dom: FinSet, cod: FinSet, f: impl Fn(usize) -> usize) -> FinMap {
        let table: Vec<usize> = dom.elements().map(f).collect();
        debug_assert!(table.iter().all(|&t| t < cod.0));
        FinMap { dom, cod, table }
    }

    pub fn identity(a: FinSet) -> FinMap {
        FinMap::from_fn(a, a, |i| i)
    }

    pub fn constant(dom: FinSet, cod: FinSet, value: usize) -> FinMap {
        FinMap::from_fn(dom, cod, |_| value)
    }

    pub fn dom(&self) -> FinSet {
        self.dom
    }

    pub fn cod(&self) -> FinSet {
        self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FinMap) -> Result<FinMap> {
        if self.cod != other.dom {
            return Err(Error::Invalid(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.dom, self.cod, other.dom, other.cod
            )));
        }
        Ok(FinMap::from_fn(self.dom, other.cod, |i| other.table[self.table[i]]))
    }

    /// `⟨self, other⟩ : A → B × C`.
    pub fn pair(&self, other: &FinMap) -> FinMap {
        assert_eq!(self.dom, other.dom, "pairing needs a common domain");
        let c = other.cod.0;
        FinMap::from_fn(self.dom, self.cod.times(other.cod), |i| {
            self.table[i] * c + other.table[i]
        })
    }

    /// `self × other : A × C → B × D`.
    pub fn cross(&self, other: &FinMap) -> FinMap {
        let (c, d) = (other.dom.0, other.cod.0);
        FinMap::from_fn(self.dom.times(other.dom), self.cod.times(other.cod), |k| {
            self.table[k / c] * d + other.table[k % c]
        })
    }

    /// Recognises the first projection `A × B → A`, returning `B`.
    pub fn as_first_projection(&self) -> Option<FinSet> {
        if self.cod.0 == 0 || self.dom.0 % self.cod.0 != 0 {
            return None;
        }
        let b = self.dom.0 / self.cod.0;
        self.table
            .iter()
            .enumerate()
            .all(|(k, &t)| t == k / b)
            .then_some(FinSet(b))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.0];
        self.table.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
    }
}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}:[", self.dom.0, self.cod.0)?;
        for (k, t) in self.table.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]")
    }
}

/// Chosen product with its projections.
pub fn product(a: FinSet, b: FinSet) -> (FinSet, FinMap, FinMap) {
    let p = a.times(b);
    let bs = b.0;
    let p1 = FinMap::from_fn(p, a, |k| k / bs);
    let p2 = FinMap::from_fn(p, b, |k| k % bs);
    (p, p1, p2)
}

/// First projection `A × B → A`.
pub fn proj1(a: FinSet, b: FinSet) -> FinMap {
    FinMap::from_fn(a.times(b), a, |k| k / b.0)
}

/// Second projection `A × B → B`.
pub fn proj2(a: FinSet, b: FinSet) -> FinMap {
    FinMap::from_fn(a.times(b), b, |k| k % b.0)
}

/// Section `⟨1, g⟩ : A → A × B`.
pub fn graph(g: &FinMap) -> FinMap {
    FinMap::identity(g.dom).pair(g)
}

/// Diagonal `A → A × A`.
pub fn diagonal(a: FinSet) -> FinMap {
    FinMap::from_fn(a, a.times(a), |i| i * a.0 + i)
}

/// Pullback `{(a, c) | f(a) = g(c)}` with its two legs, in row-major order.
pub fn pullback(f: &FinMap, g: &FinMap) -> Result<(FinSet, FinMap, FinMap)> {
    if f.cod != g.cod {
        return Err(Error::NotAPullback(format!(
            "codomains {} and {} differ",
            f.cod, g.cod
        )));
    }
    let pairs: Vec<(usize, usize)> = f
        .dom
        .elements()
        .flat_map(|a| g.dom.elements().map(move |c| (a, c)))
        .filter(|&(a, c)| f.table[a] == g.table[c])
        .collect();
    let p = FinSet(pairs.len());
    let l = FinMap::from_fn(p, f.dom, |k| pairs[k].0);
    let r = FinMap::from_fn(p, g.dom, |k| pairs[k].1);
    Ok((p, l, r))
}

/// Mixed-radix encoding of tuples in an iterated product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(sizes: impl IntoIterator<Item = usize>) -> Shape {
        Shape(sizes.into_iter().collect())
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn object(&self) -> FinSet {
        FinSet(self.0.iter().product())
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.0.len());
        coords.iter().zip(&self.0).fold(0, |acc, (&c, &s)| acc * s + c)
    }

    pub fn decode(&self, mut index: usize, out: &mut [usize]) {
        for (slot, &s) in out.iter_mut().zip(&self.0).rev() {
            *slot = index % s;
            index /= s;
        }
    }

    /// The map from this product to another sending a tuple `t` to `f(t)`.
    pub fn map_to(&self, target: &Shape, f: impl Fn(&[usize], &mut [usize])) -> FinMap {
        let mut src = vec![0; self.0.len()];
        let mut dst = vec![0; target.0.len()];
        let table = self
            .object()
            .elements()
            .map(|k| {
                self.decode(k, &mut src);
                f(&src, &mut dst);
                target.encode(&dst)
            })
            .collect();
        FinMap { dom: self.object(), cod: target.object(), table }
    }
}

/// Size of `C^B`, or `None` on overflow.
pub fn power(c: usize, b: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..b {
        acc = acc.checked_mul(c as u128)?;
    }
    Some(acc)
}

/// Value of the encoded function `f ∈ C^B` at `b`.
pub fn eval_code(f: usize, c: usize, b: usize) -> usize {
    (f / c.pow(b as u32)) % c
}

/// Code of the function given by `values` (value at `b` is `values[b]`).
pub fn encode_function(values: &[usize], c: usize) -> usize {
    values.iter().rev().fold(0, |acc, &v| acc * c + v)
}

/// The base category window: object sizes for enumeration and the
/// exponential cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCat {
    pub size_cap: usize,
    pub exp_cap: usize,
    pub budget: u128,
}

impl BaseCat {
    /// Window `size_cap`; exponentials allowed up to `size_cap^size_cap`.
    pub fn new(size_cap: usize) -> BaseCat {
        let exp_cap = power(size_cap, size_cap)
            .map_or(usize::MAX, |p| p.min(usize::MAX as u128) as usize)
            .max(size_cap);
        BaseCat { size_cap, exp_cap, budget: DEFAULT_BUDGET }
    }

    pub fn with_exp_cap(self, exp_cap: usize) -> BaseCat {
        BaseCat { exp_cap, ..self }
    }

    pub fn with_budget(self, budget: u128) -> BaseCat {
        BaseCat { budget, ..self }
    }

    pub fn objects(&self) -> impl Iterator<Item = FinSet> {
        (0..=self.size_cap).map(FinSet)
    }

    /// `C^B` with evaluation `C^B × B → C`.
    pub fn exponential(&self, b: FinSet, c: FinSet) -> Result<(FinSet, FinMap)> {
        let n = power(c.0, b.0).unwrap_or(u128::MAX);
        if n > self.exp_cap as u128 {
            return Err(Error::CapExceeded { size: n, cap: self.exp_cap });
        }
        let e = FinSet(n as usize);
        let ev = FinMap::from_fn(e.times(b), c, |k| eval_code(k / b.0, c.0, k % b.0));
        Ok((e, ev))
    }

    /// Checks that a search over `count` candidates fits the budget.
    pub fn charge(&self, count: u128) -> Result<()> {
        if count > self.budget {
            Err(Error::BudgetExceeded { count, budget: self.budget })
        } else {
            Ok(())
        }
    }

    /// All maps `A → B` in lexicographic table order.
    pub fn maps(&self, a: FinSet, b: FinSet) -> Result<MapIter> {
        enumerate_maps(a, b, self.budget)
    }
}

/// All `|B|^|A|` maps `A → B` in lexicographic table order.
pub fn enumerate_maps(a: FinSet, b: FinSet, budget: u128) -> Result<MapIter> {
    let count = power(b.0, a.0).unwrap_or(u128::MAX);
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    Ok(MapIter { dom: a, cod: b, next: (count > 0).then(|| vec![0; a.0]) })
}

#[derive(Debug, Clone)]
pub struct MapIter {
    dom: FinSet,
    cod: FinSet,
    next: Option<Vec<usize>>,
}

impl Iterator for MapIter {
    type Item = FinMap;

    fn next(&mut self) -> Option<FinMap> {
        let table = self.next.take()?;
        let mut succ = table.clone();
        let mut pos = succ.len();
        let mut advanced = false;
        while pos > 0 {
            pos -= 1;
            if succ[pos] + 1 < self.cod.0 {
                succ[pos] += 1;
                advanced = true;
                break;
            }
            succ[pos] = 0;
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(FinMap { dom: self.dom, cod: self.cod, table })
    }
}
