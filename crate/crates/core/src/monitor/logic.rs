use std::fmt::Debug;

use super::Verdict;
use crate::formula::CountSet;

/// The truth domain the evaluation kernel is generic over: Boolean for the
/// centralized monitor, Kleene's three values for the distributed one.
pub trait Logic: Copy + PartialEq + Send + Sync + Debug + 'static {
    const TRUE: Self;
    const FALSE: Self;

    fn not(self) -> Self;
    fn and(self, other: Self) -> Self;
    fn or(self, other: Self) -> Self;

    /// Verdict of a graph operator given one child value per counted edge.
    fn count(values: impl Iterator<Item = Self>, set: &CountSet) -> Self;
}

impl Logic for bool {
    const TRUE: bool = true;
    const FALSE: bool = false;

    fn not(self) -> bool {
        !self
    }

    fn and(self, other: bool) -> bool {
        self && other
    }

    fn or(self, other: bool) -> bool {
        self || other
    }

    fn count(values: impl Iterator<Item = bool>, set: &CountSet) -> bool {
        set.contains(values.filter(|v| *v).count() as u64)
    }
}

impl Logic for Verdict {
    const TRUE: Verdict = Verdict::True;
    const FALSE: Verdict = Verdict::False;

    fn not(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Unknown => Verdict::Unknown,
        }
    }

    fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Unknown,
        }
    }

    fn or(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::True, _) | (_, Verdict::True) => Verdict::True,
            (Verdict::False, Verdict::False) => Verdict::False,
            _ => Verdict::Unknown,
        }
    }

    fn count(values: impl Iterator<Item = Verdict>, set: &CountSet) -> Verdict {
        let (mut sat, mut nviol) = (0u64, 0u64);
        for v in values {
            match v {
                Verdict::True => {
                    sat += 1;
                    nviol += 1;
                }
                Verdict::Unknown => nviol += 1,
                Verdict::False => {}
            }
        }
        count_verdict(sat, nviol, set)
    }
}

/// Three-valued membership test from the number of satisfied children
/// (`sat`) and of children not known to be violated (`nviol`).
///
/// Per interval `[e1, e2]`: true when `sat >= e1` and `nviol <= e2`, false
/// when `nviol < e1` or `sat > e2`, unknown otherwise. A union of intervals
/// takes the three-valued disjunction of the per-interval verdicts; the
/// empty set is false.
///
/// The per-interval rule is exact when every child stands for a single
/// edge: the achievable counts are exactly `sat..=nviol`. Children counted
/// with multiplicity (parallel edges to one agent) move in steps, so the
/// rule may then report unknown where every completion agrees.
pub fn count_verdict(sat: u64, nviol: u64, set: &CountSet) -> Verdict {
    set.intervals().iter().fold(Verdict::False, |acc, &(e1, e2)| {
        let v = if sat >= e1 && e2.admits(nviol) {
            Verdict::True
        } else if nviol < e1 || !e2.admits(sat) {
            Verdict::False
        } else {
            Verdict::Unknown
        };
        acc.or(v)
    })
}

/// Three-valued graph-operator verdict over one child verdict per counted edge.
pub fn graph_verdict(children: &[Verdict], set: &CountSet) -> Verdict {
    Verdict::count(children.iter().copied(), set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Bound;
    use Verdict::{False as F, True as T, Unknown as U};

    fn set(lo: u64, hi: Option<u64>) -> CountSet {
        CountSet::single(lo, hi.map_or(Bound::Infinite, Bound::Finite)).unwrap()
    }

    #[test]
    fn kleene_tables() {
        assert_eq!(U.not(), U);
        assert_eq!(F.and(U), F);
        assert_eq!(T.and(U), U);
        assert_eq!(F.or(U), U);
        assert_eq!(T.or(U), T);
    }

    #[test]
    fn graph_rule_examples() {
        assert_eq!(graph_verdict(&[U, F, F], &set(1, Some(2))), U);
        assert_eq!(graph_verdict(&[T, U, U], &set(0, Some(3))), T);
        assert_eq!(graph_verdict(&[F, U, U], &set(0, Some(1))), U);
        assert_eq!(graph_verdict(&[], &CountSet::empty()), F);
        assert_eq!(graph_verdict(&[T, T], &set(2, None)), T);
    }
}
