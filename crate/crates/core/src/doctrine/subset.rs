use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use smallvec::{smallvec, SmallVec};

use super::{Capabilities, Doctrine, HeytingOp};
use crate::error::{Error, Result};
use crate::finbase::{power, BaseCat, FinMap, FinSet};

/// A subset of `{0, .., len-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    words: SmallVec<[u64; 2]>,
}

impl Bits {
    pub fn empty(len: usize) -> Bits {
        Bits { len, words: smallvec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Bits {
        let mut b = Bits::empty(len);
        for w in b.words.iter_mut() {
            *w = u64::MAX;
        }
        b.trim();
        b
    }

    /// The subset whose characteristic numeral is `mask` (`len ≤ 64`).
    pub fn from_mask(len: usize, mask: u64) -> Bits {
        assert!(len <= 64);
        let mut b = Bits::empty(len);
        if len > 0 {
            b.words[0] = mask;
            b.trim();
        }
        b
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Bits {
        let mut b = Bits::empty(len);
        for i in idx {
            b.insert(i);
        }
        b
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> bool) -> Bits {
        Bits::from_indices(len, (0..len).filter(|&i| f(i)))
    }

    fn trim(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == Bits::full(self.len)
    }

    pub fn contains(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "index {i} outside {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.contains(i))
    }

    pub fn subset_of(&self, other: &Bits) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn zip(&self, other: &Bits, f: impl Fn(u64, u64) -> u64) -> Bits {
        let mut b = Bits {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(&x, &y)| f(x, y)).collect(),
        };
        b.trim();
        b
    }

    pub fn and(&self, other: &Bits) -> Bits {
        self.zip(other, |x, y| x & y)
    }

    pub fn or(&self, other: &Bits) -> Bits {
        self.zip(other, |x, y| x | y)
    }

    /// `¬self ∪ other`.
    pub fn implies(&self, other: &Bits) -> Bits {
        self.zip(other, |x, y| !x | y)
    }

    pub fn preimage(&self, f: &FinMap) -> Bits {
        Bits::from_fn(f.dom().size(), |i| self.contains(f.apply(i)))
    }

    pub fn image(&self, f: &FinMap) -> Bits {
        Bits::from_indices(f.cod().size(), self.ones().map(|i| f.apply(i)))
    }

    /// `{b | every a with f(a) = b lies in self}`.
    pub fn dual_image(&self, f: &FinMap) -> Bits {
        let mut out = Bits::full(f.cod().size());
        for i in 0..self.len {
            if !self.contains(i) {
                let t = f.apply(i);
                out.words[t / 64] &= !(1 << (t % 64));
            }
        }
        out
    }
}

impl Ord for Bits {
    /// Length first, then the characteristic numeral.
    fn cmp(&self, other: &Bits) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Bits) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.ones().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self, self.len)
    }
}

/// Subsets of finite sets ordered by inclusion.
#[derive(Debug, Clone)]
pub struct SubsetDoctrine {
    base: BaseCat,
}

impl SubsetDoctrine {
    pub fn new(base: BaseCat) -> SubsetDoctrine {
        SubsetDoctrine { base }
    }

    fn check_len(obj: FinSet, e: &Bits) -> Result<()> {
        if e.len() == obj.size() {
            Ok(())
        } else {
            Err(Error::Invalid(format!("subset of {} used over {obj}", e.len())))
        }
    }
}

impl Doctrine for SubsetDoctrine {
    type Elem = Bits;

    fn name(&self) -> String {
        "subsets".into()
    }

    fn base(&self) -> &BaseCat {
        &self.base
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ALL
    }

    fn fiber(&self, obj: FinSet) -> Result<Vec<Bits>> {
        let n = obj.size();
        self.base.charge(power(2, n).unwrap_or(u128::MAX))?;
        Ok((0..1u64 << n).map(|m| Bits::from_mask(n, m)).collect())
    }

    fn classes(&self, obj: FinSet) -> Result<Arc<Vec<Bits>>> {
        self.fiber(obj).map(Arc::new)
    }

    fn leq(&self, obj: FinSet, lhs: &Bits, rhs: &Bits) -> Result<bool> {
        Self::check_len(obj, lhs)?;
        Self::check_len(obj, rhs)?;
        Ok(lhs.subset_of(rhs))
    }

    fn reindex(&self, f: &FinMap, e: &Bits) -> Result<Bits> {
        Self::check_len(f.cod(), e)?;
        Ok(e.preimage(f))
    }

    fn exists_fast(&self, f: &FinMap, e: &Bits) -> Option<Result<Bits>> {
        Some(Self::check_len(f.dom(), e).map(|_| e.image(f)))
    }

    fn forall_fast(&self, f: &FinMap, e: &Bits) -> Option<Result<Bits>> {
        Some(Self::check_len(f.dom(), e).map(|_| e.dual_image(f)))
    }

    fn heyting_fast(&self, obj: FinSet, op: HeytingOp, args: &[Bits]) -> Option<Result<Bits>> {
        if let Err(e) = args.iter().try_for_each(|a| Self::check_len(obj, a)) {
            return Some(Err(e));
        }
        let n = obj.size();
        Some(Ok(match op {
            HeytingOp::Top => Bits::full(n),
            HeytingOp::Bot => Bits::empty(n),
            HeytingOp::Meet => args[0].and(&args[1]),
            HeytingOp::Join => args[0].or(&args[1]),
            HeytingOp::Impl => args[0].implies(&args[1]),
        }))
    }

    fn equality_fast(&self, a: FinSet) -> Option<Result<Bits>> {
        let n = a.size();
        Some(Ok(Bits::from_indices(n * n, (0..n).map(|i| i * n + i))))
    }

    fn is_pointwise(&self) -> bool {
        true
    }

    fn holds_at(&self, e: &Bits, point: usize) -> bool {
        e.contains(point)
    }

    fn existential_cover_hint(&self, obj: FinSet, e: &Bits) -> Option<(FinSet, Bits)> {
        let _ = obj;
        Some((FinSet::ONE, e.clone()))
    }

    fn universal_cover_hint(&self, obj: FinSet, e: &Bits) -> Option<(FinSet, Bits)> {
        self.existential_cover_hint(obj, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fiber_order_is_numeric() {
        let p = SubsetDoctrine::new(BaseCat::new(2));
        let f = p.fiber(FinSet(2)).unwrap();
        let shown: Vec<String> = f.iter().map(|b| b.to_string()).collect();
        assert_eq!(shown, ["{}", "{0}", "{1}", "{0,1}"]);
        assert!(f.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn wide_sets_work_past_one_word() {
        let a = Bits::from_indices(130, [0, 64, 129]);
        let b = Bits::full(130);
        assert!(a.subset_of(&b));
        assert_eq!(a.implies(&Bits::empty(130)).ones().count(), 127);
        assert!(a < b);
    }

    #[test]
    fn image_and_dual_image() {
        let f = FinMap::new(FinSet(3), FinSet(2), vec![0, 0, 1]).unwrap();
        let s = Bits::from_indices(3, [0, 2]);
        assert_eq!(s.image(&f), Bits::full(2));
        assert_eq!(s.dual_image(&f), Bits::from_indices(2, [1]));
        assert_eq!(s.preimage(&FinMap::identity(FinSet(3))), s);
    }
}
