use std::fmt;

/// A three-valued verdict: satisfied, violated, or undetermined from the
/// available knowledge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    False,
    True,
    Unknown,
}

impl Verdict {
    pub fn is_known(self) -> bool {
        self != Verdict::Unknown
    }

    pub fn to_bool(self) -> Option<bool> {
        match self {
            Verdict::False => Some(false),
            Verdict::True => Some(true),
            Verdict::Unknown => None,
        }
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::False => "0",
            Verdict::True => "1",
            Verdict::Unknown => "?",
        })
    }
}

/// Values over the contiguous time range `t0..t0 + len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signal<V> {
    t0: usize,
    values: Vec<V>,
}

pub type BoolSignal = Signal<bool>;
pub type TernarySignal = Signal<Verdict>;

impl<V: Copy> Signal<V> {
    /// Panics on an empty value list: signals always cover at least one sample.
    pub fn new(t0: usize, values: Vec<V>) -> Self {
        assert!(!values.is_empty(), "a signal covers at least one sample");
        Self { t0, values }
    }

    pub fn t0(&self) -> usize {
        self.t0
    }

    /// Last covered time.
    pub fn t1(&self) -> usize {
        self.t0 + self.values.len() - 1
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, t: usize) -> Option<V> {
        t.checked_sub(self.t0).and_then(|k| self.values.get(k)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, V)> + '_ {
        self.values.iter().enumerate().map(move |(k, v)| (self.t0 + k, *v))
    }

    pub fn map<W: Copy>(&self, f: impl Fn(V) -> W) -> Signal<W> {
        Signal { t0: self.t0, values: self.values.iter().map(|v| f(*v)).collect() }
    }
}

impl BoolSignal {
    pub fn to_ternary(&self) -> TernarySignal {
        self.map(Verdict::from)
    }
}

impl TernarySignal {
    pub fn unknown_count(&self) -> usize {
        self.values.iter().filter(|v| **v == Verdict::Unknown).count()
    }
}
