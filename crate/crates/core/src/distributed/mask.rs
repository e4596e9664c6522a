use crate::error::{Error, Result};
use crate::model::MasRun;

/// Which agents' states an observer knows at which times.
///
/// The observer always knows its own state. Graphs are not masked: every
/// observer sees the full graph trajectory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnowledgeMask {
    observer: usize,
    num_agents: usize,
    length: usize,
    /// `known[(j - 1) * (length + 1) + t]`
    known: Vec<bool>,
}

/// One change to a mask: mark `subject`'s states on `from..=to` as known
/// (or, with `known = false`, assert they stay unknown).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaskChange {
    pub subject: usize,
    pub from: usize,
    pub to: usize,
    pub known: bool,
}

impl KnowledgeMask {
    /// Only the observer's own states are known.
    pub fn empty(observer: usize, num_agents: usize, length: usize) -> Result<Self> {
        Self::from_fn(observer, num_agents, length, |_, _| false)
    }

    /// Every state is known.
    pub fn full(observer: usize, num_agents: usize, length: usize) -> Result<Self> {
        Self::from_fn(observer, num_agents, length, |_, _| true)
    }

    /// `known(j, t)` decides each entry; the observer's row is forced to known.
    pub fn from_fn(
        observer: usize,
        num_agents: usize,
        length: usize,
        mut known: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        if observer == 0 || observer > num_agents {
            return Err(Error::AgentOutOfRange { agent: observer, num_agents });
        }
        let mut bits = Vec::with_capacity(num_agents * (length + 1));
        for j in 1..=num_agents {
            for t in 0..=length {
                bits.push(j == observer || known(j, t));
            }
        }
        Ok(Self { observer, num_agents, length, known: bits })
    }

    /// Known states given as inclusive time ranges per subject.
    pub fn from_intervals(
        observer: usize,
        num_agents: usize,
        length: usize,
        intervals: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let changes: Vec<MaskChange> =
            intervals.iter().map(|&(subject, from, to)| MaskChange { subject, from, to, known: true }).collect();
        Self::empty(observer, num_agents, length)?.refine(&changes)
    }

    pub fn observer(&self) -> usize {
        self.observer
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Whether the observer knows agent `j`'s state at `t`; false out of range.
    pub fn known(&self, j: usize, t: usize) -> bool {
        if j == self.observer {
            return true;
        }
        if j == 0 || j > self.num_agents || t > self.length {
            return false;
        }
        self.known[(j - 1) * (self.length + 1) + t]
    }

    /// Maximal known ranges of `subject`, in time order.
    pub fn known_intervals(&self, subject: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start = None;
        for t in 0..=self.length {
            match (self.known(subject, t), start) {
                (true, None) => start = Some(t),
                (false, Some(s)) => {
                    out.push((s, t - 1));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s, self.length));
        }
        out
    }

    /// Number of known (agent, time) entries, the observer's own included.
    pub fn known_count(&self) -> usize {
        self.known.iter().filter(|b| **b).count()
    }

    /// Whether every entry known here is also known in `other`.
    pub fn is_refined_by(&self, other: &KnowledgeMask) -> bool {
        self.observer == other.observer
            && self.num_agents == other.num_agents
            && self.length == other.length
            && self.known.iter().zip(&other.known).all(|(a, b)| !a || *b)
    }

    /// A pointwise larger mask. Changes with `known = false` are accepted
    /// only where the state is still unknown.
    pub fn refine(&self, changes: &[MaskChange]) -> Result<Self> {
        let mut out = self.clone();
        for c in changes {
            if c.subject == 0 || c.subject > self.num_agents {
                return Err(Error::AgentOutOfRange { agent: c.subject, num_agents: self.num_agents });
            }
            if c.from > c.to || c.to > self.length {
                return Err(Error::TimeOutOfRange { t: c.to.max(c.from), length: self.length });
            }
            for t in c.from..=c.to {
                let k = (c.subject - 1) * (self.length + 1) + t;
                if c.known {
                    out.known[k] = true;
                } else if self.known(c.subject, t) {
                    return Err(Error::HidesKnownState { subject: c.subject, t });
                }
            }
        }
        Ok(out)
    }

    pub(crate) fn check_observer(&self, expected: usize) -> Result<()> {
        if self.observer != expected {
            return Err(Error::ObserverMismatch { mask: self.observer, expected });
        }
        Ok(())
    }

    pub(crate) fn check_run(&self, run: &MasRun) -> Result<()> {
        if self.num_agents != run.num_agents() || self.length != run.length() {
            return Err(Error::model(format!(
                "mask covers {} agents over 0..={}, run has {} agents over 0..={}",
                self.num_agents,
                self.length,
                run.num_agents(),
                run.length()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observer_always_known() {
        let m = KnowledgeMask::empty(2, 3, 4).unwrap();
        assert!(m.known(2, 3));
        assert!(!m.known(1, 0));
        assert_eq!(m.known_intervals(2), vec![(0, 4)]);
    }

    #[test]
    fn refine_only_adds() {
        let m = KnowledgeMask::empty(1, 3, 4).unwrap();
        assert_eq!(m.refine(&[]).unwrap(), m);
        let r = m.refine(&[MaskChange { subject: 3, from: 1, to: 2, known: true }]).unwrap();
        assert_eq!(r.known_intervals(3), vec![(1, 2)]);
        assert!(m.is_refined_by(&r));
        let err = r.refine(&[MaskChange { subject: 3, from: 2, to: 3, known: false }]).unwrap_err();
        assert_eq!(err, Error::HidesKnownState { subject: 3, t: 2 });
        let all: Vec<MaskChange> = (1..=3).map(|j| MaskChange { subject: j, from: 0, to: 4, known: true }).collect();
        assert_eq!(m.refine(&all).unwrap(), KnowledgeMask::full(1, 3, 4).unwrap());
    }
}
