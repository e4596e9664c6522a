use std::fmt;

use crate::error::{Error, Result};

/// Upper end of a time or count interval: a natural number or `inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    Finite(u64),
    Infinite,
}

impl Bound {
    pub fn finite(self) -> Option<u64> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Bound::Infinite)
    }

    pub fn saturating_add(self, other: Bound) -> Bound {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a.saturating_add(b)),
            _ => Bound::Infinite,
        }
    }

    /// Whether `n <= self`.
    pub fn admits(self, n: u64) -> bool {
        match self {
            Bound::Finite(v) => n <= v,
            Bound::Infinite => true,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::Infinite => f.write_str("inf"),
        }
    }
}

/// Closed time interval `[lo, hi]` over the naturals, `hi` possibly `inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TimeInterval {
    lo: u64,
    hi: Bound,
}

impl TimeInterval {
    pub fn new(lo: u64, hi: Bound) -> Result<Self> {
        if !hi.admits(lo) {
            return Err(Error::InvalidFormula(format!("time interval [{lo}, {hi}] is empty")));
        }
        Ok(Self { lo, hi })
    }

    pub fn bounded(lo: u64, hi: u64) -> Result<Self> {
        Self::new(lo, Bound::Finite(hi))
    }

    pub fn unbounded(lo: u64) -> Self {
        Self { lo, hi: Bound::Infinite }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> Bound {
        self.hi
    }

    /// Samples `t'` in `(t + I) ∩ {0..=length}`.
    ///
    /// Unbounded intervals are clamped to the end of the trace: the window is
    /// `[min(t + lo, length), length]`, so `G[0,inf]` ranges over every
    /// remaining sample and `F[a,inf]` is never vacuous.
    pub fn window(&self, t: usize, length: usize) -> Option<(usize, usize)> {
        let start = t.saturating_add(self.lo as usize);
        match self.hi {
            Bound::Infinite => Some((start.min(length), length)),
            Bound::Finite(hi) => {
                let end = t.saturating_add(hi as usize).min(length);
                (start <= end).then_some((start, end))
            }
        }
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Closed weight interval `[lo, hi]` over the extended reals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightInterval {
    lo: f64,
    hi: f64,
}

impl WeightInterval {
    /// `[-inf, inf]`, the default when a graph operator has no weight constraint.
    pub const ALL: WeightInterval = WeightInterval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidFormula(format!("weight interval [{lo}, {hi}] is empty")));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, w: f64) -> bool {
        self.lo <= w && w <= self.hi
    }

    pub fn is_all(&self) -> bool {
        *self == Self::ALL
    }

    pub fn is_subset_of(&self, other: &WeightInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

/// A finite union of closed count intervals over the naturals.
///
/// Intervals are kept sorted, disjoint and non-adjacent. An upper bound of
/// `inf` means "at least `lo`": counts are always finite, so the set of
/// admissible counts is closed under complement.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CountSet {
    intervals: Vec<(u64, Bound)>,
}

impl CountSet {
    pub fn single(lo: u64, hi: Bound) -> Result<Self> {
        if !hi.admits(lo) {
            return Err(Error::InvalidFormula(format!("count interval [{lo}, {hi}] is empty")));
        }
        Ok(Self { intervals: vec![(lo, hi)] })
    }

    pub fn at_least(lo: u64) -> Self {
        Self { intervals: vec![(lo, Bound::Infinite)] }
    }

    pub fn exactly(n: u64) -> Self {
        Self { intervals: vec![(n, Bound::Finite(n))] }
    }

    pub fn empty() -> Self {
        Self { intervals: Vec::new() }
    }

    /// Union of the given intervals, merged into canonical form.
    pub fn from_intervals(intervals: impl IntoIterator<Item = (u64, Bound)>) -> Result<Self> {
        let mut v: Vec<(u64, Bound)> = Vec::new();
        for (lo, hi) in intervals {
            if !hi.admits(lo) {
                return Err(Error::InvalidFormula(format!("count interval [{lo}, {hi}] is empty")));
            }
            v.push((lo, hi));
        }
        v.sort();
        let mut merged: Vec<(u64, Bound)> = Vec::with_capacity(v.len());
        for (lo, hi) in v {
            match merged.last_mut() {
                Some((_, last_hi)) if last_hi.admits(lo.saturating_sub(1)) => {
                    *last_hi = (*last_hi).max(hi);
                }
                _ => merged.push((lo, hi)),
            }
        }
        Ok(Self { intervals: merged })
    }

    pub fn intervals(&self) -> &[(u64, Bound)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= n && hi.admits(n))
    }

    /// Smallest admissible count, `None` for the empty set.
    pub fn min(&self) -> Option<u64> {
        self.intervals.first().map(|&(lo, _)| lo)
    }

    /// Complement within the naturals.
    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut next = Some(0u64);
        for &(lo, hi) in &self.intervals {
            let Some(cur) = next else { break };
            if lo > cur {
                out.push((cur, Bound::Finite(lo - 1)));
            }
            next = hi.finite().map(|h| h + 1);
        }
        if let Some(cur) = next {
            out.push((cur, Bound::Infinite));
        }
        Self { intervals: out }
    }

    /// Whether every count admitted by `self` is admitted by `other`.
    pub fn is_subset_of(&self, other: &CountSet) -> bool {
        self.intervals.iter().all(|&(lo, hi)| {
            other
                .intervals
                .iter()
                .any(|&(olo, ohi)| olo <= lo && hi <= ohi)
        })
    }
}

impl fmt::Display for CountSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("[]");
        }
        for (k, (lo, hi)) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(" u ")?;
            }
            write!(f, "[{lo},{hi}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cs(v: &[(u64, Option<u64>)]) -> CountSet {
        CountSet::from_intervals(v.iter().map(|&(lo, hi)| (lo, hi.map_or(Bound::Infinite, Bound::Finite)))).unwrap()
    }

    #[test]
    fn complement_examples() {
        assert_eq!(cs(&[(2, None)]).complement(), cs(&[(0, Some(1))]));
        assert_eq!(cs(&[(1, Some(3))]).complement(), cs(&[(0, Some(0)), (4, None)]));
        assert_eq!(cs(&[(0, None)]).complement(), CountSet::empty());
        assert_eq!(CountSet::empty().complement(), cs(&[(0, None)]));
        assert_eq!(cs(&[(0, Some(5))]).complement(), cs(&[(6, None)]));
    }

    #[test]
    fn merging_is_canonical() {
        assert_eq!(cs(&[(0, Some(1)), (2, Some(5))]), cs(&[(0, Some(5))]));
        assert_eq!(cs(&[(4, None), (0, Some(2))]).intervals(), &[(0, Bound::Finite(2)), (4, Bound::Infinite)]);
        assert_eq!(cs(&[(0, Some(3)), (1, Some(2))]), cs(&[(0, Some(3))]));
        assert!(CountSet::single(3, Bound::Finite(2)).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(cs(&[(0, Some(0)), (4, None)]).to_string(), "[0,0] u [4,inf]");
        assert_eq!(CountSet::empty().to_string(), "[]");
    }

    #[test]
    fn windows() {
        let i = TimeInterval::bounded(2, 5).unwrap();
        assert_eq!(i.window(0, 10), Some((2, 5)));
        assert_eq!(i.window(7, 10), Some((9, 10)));
        assert_eq!(i.window(9, 10), None);
        let u = TimeInterval::unbounded(3);
        assert_eq!(u.window(2, 10), Some((5, 10)));
        assert_eq!(u.window(9, 10), Some((10, 10)));
    }

    fn arb_set() -> impl Strategy<Value = CountSet> {
        prop::collection::vec((0u64..12, prop::option::of(0u64..6)), 0..4).prop_map(|v| {
            CountSet::from_intervals(v.into_iter().map(|(lo, len)| (lo, len.map_or(Bound::Infinite, |l| Bound::Finite(lo + l)))))
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn complement_is_pointwise_negation(s in arb_set()) {
            let c = s.complement();
            for n in 0..30 {
                prop_assert_ne!(s.contains(n), c.contains(n));
            }
            prop_assert_eq!(c.complement(), s);
        }

        #[test]
        fn subset_matches_membership(a in arb_set(), b in arb_set()) {
            let pointwise = (0..40).all(|n| !a.contains(n) || b.contains(n));
            prop_assert_eq!(a.is_subset_of(&b), pointwise);
        }
    }
}
