use super::{Bound, GlobalFormula, LocalFormula, TimeInterval};

/// `[S, T]`: the earliest and latest time offsets a formula's verdict at `t`
/// can depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Horizon {
    pub start: u64,
    pub end: Bound,
}

impl Horizon {
    pub const ZERO: Horizon = Horizon { start: 0, end: Bound::Finite(0) };

    pub fn new(start: u64, end: Bound) -> Self {
        Self { start, end }
    }

    fn join(self, other: Horizon) -> Horizon {
        Horizon { start: self.start.min(other.start), end: self.end.max(other.end) }
    }

    fn until(i: &TimeInterval, a: Horizon, b: Horizon) -> Horizon {
        let j = a.join(b);
        Horizon {
            start: i.lo().saturating_add(j.start),
            end: i.hi().saturating_add(j.end),
        }
    }
}

impl LocalFormula {
    /// Horizon by the usual recursion: `U_[a,b]` adds `a` to the smaller
    /// start and `b` to the larger end of its operands; `F`/`G` behave as
    /// `true U`; Boolean and graph operators are transparent.
    pub fn horizon(&self) -> Horizon {
        use LocalFormula::*;
        match self {
            True | Atom(_) => Horizon::ZERO,
            Not(a) => a.horizon(),
            Graph(op) => op.child.horizon(),
            And(a, b) | Or(a, b) | Implies(a, b) => a.horizon().join(b.horizon()),
            Until(i, a, b) => Horizon::until(i, a.horizon(), b.horizon()),
            Eventually(i, a) | Always(i, a) => Horizon::until(i, Horizon::ZERO, a.horizon()),
        }
    }
}

impl GlobalFormula {
    pub fn horizon(&self) -> Horizon {
        use GlobalFormula::*;
        match self {
            True | Atom(_) => Horizon::ZERO,
            Bind(_, f) | ForAll(_, f) | Exists(_, f) => f.horizon(),
            Not(a) => a.horizon(),
            And(a, b) | Or(a, b) | Implies(a, b) => a.horizon().join(b.horizon()),
            Until(i, a, b) => Horizon::until(i, a.horizon(), b.horizon()),
            Eventually(i, a) | Always(i, a) => Horizon::until(i, Horizon::ZERO, a.horizon()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{CountSet, Direction, LocalExpr, WeightInterval};

    fn atom() -> LocalFormula {
        LocalFormula::atom(LocalExpr::x(0))
    }

    #[test]
    fn basic_rules() {
        let g = LocalFormula::always(TimeInterval::bounded(0, 24).unwrap(), atom());
        assert_eq!(g.horizon(), Horizon::new(0, Bound::Finite(24)));

        let inner = LocalFormula::graph(Direction::In, "c", CountSet::at_least(1), WeightInterval::ALL, atom());
        let u = LocalFormula::until(TimeInterval::bounded(2, 5).unwrap(), atom(), inner);
        assert_eq!(u.horizon(), Horizon::new(2, Bound::Finite(5)));

        let g = LocalFormula::always(TimeInterval::unbounded(0), atom());
        assert_eq!(g.horizon(), Horizon::new(0, Bound::Infinite));
    }

    #[test]
    fn until_takes_min_start_and_max_end() {
        let f1 = LocalFormula::eventually(TimeInterval::bounded(3, 4).unwrap(), atom());
        let f2 = LocalFormula::always(TimeInterval::bounded(1, 9).unwrap(), atom());
        let u = LocalFormula::until(TimeInterval::bounded(2, 5).unwrap(), f1, f2);
        assert_eq!(u.horizon(), Horizon::new(3, Bound::Finite(14)));
    }
}
