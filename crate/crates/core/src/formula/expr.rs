/// Arithmetic over constants and state accessors.
///
/// `V` is the accessor: [`Component`] reads the current agent's state in
/// agent-local formulas, [`AgentComponent`] reads any agent's state in
/// system-level formulas.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr<V> {
    Const(f64),
    Var(V),
    Add(Box<Expr<V>>, Box<Expr<V>>),
    Sub(Box<Expr<V>>, Box<Expr<V>>),
    Mul(Box<Expr<V>>, Box<Expr<V>>),
    Div(Box<Expr<V>>, Box<Expr<V>>),
    Abs(Box<Expr<V>>),
    Sqrt(Box<Expr<V>>),
    Min(Box<Expr<V>>, Box<Expr<V>>),
    Max(Box<Expr<V>>, Box<Expr<V>>),
}

/// `x[k]`: component `k` (0-based) of the current agent's state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component(pub usize);

/// `s[i][k]`: component `k` (0-based) of agent `i`'s (1-based) state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentComponent {
    pub agent: usize,
    pub component: usize,
}

pub type LocalExpr = Expr<Component>;
pub type GlobalExpr = Expr<AgentComponent>;

impl<V> Expr<V> {
    pub fn eval(&self, lookup: &impl Fn(&V) -> f64) -> f64 {
        use Expr::*;
        match self {
            Const(c) => *c,
            Var(v) => lookup(v),
            Add(a, b) => a.eval(lookup) + b.eval(lookup),
            Sub(a, b) => a.eval(lookup) - b.eval(lookup),
            Mul(a, b) => a.eval(lookup) * b.eval(lookup),
            Div(a, b) => a.eval(lookup) / b.eval(lookup),
            Abs(a) => a.eval(lookup).abs(),
            Sqrt(a) => a.eval(lookup).sqrt(),
            Min(a, b) => a.eval(lookup).min(b.eval(lookup)),
            Max(a, b) => a.eval(lookup).max(b.eval(lookup)),
        }
    }

    /// Every accessor appearing in the expression, left to right.
    pub fn vars(&self) -> Vec<&V> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a V>) {
        use Expr::*;
        match self {
            Const(_) => {}
            Var(v) => out.push(v),
            Abs(a) | Sqrt(a) => a.collect_vars(out),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Min(a, b) | Max(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn sub(self, other: Self) -> Self {
        Expr::Sub(Box::new(self), Box::new(other))
    }
}

impl LocalExpr {
    pub fn x(k: usize) -> Self {
        Expr::Var(Component(k))
    }

    pub fn eval_state(&self, state: &[f64]) -> f64 {
        self.eval(&|c: &Component| state[c.0])
    }
}

impl GlobalExpr {
    pub fn s(agent: usize, component: usize) -> Self {
        Expr::Var(AgentComponent { agent, component })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates() {
        let e = Expr::Sqrt(Box::new(Expr::Mul(Box::new(LocalExpr::x(0)), Box::new(LocalExpr::x(1)))));
        assert_eq!(e.eval_state(&[2.0, 8.0]), 4.0);
        let m = Expr::Max(Box::new(Expr::Const(-1.0)), Box::new(Expr::Abs(Box::new(Expr::Const(-3.0)))));
        assert_eq!(m.eval(&|_: &Component| 0.0), 3.0);
        assert_eq!(e.vars(), vec![&Component(0), &Component(1)]);
    }
}
