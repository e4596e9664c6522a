//! Formula syntax trees for the agent-local layer ([`LocalFormula`]) and the
//! system-level layer ([`GlobalFormula`]), plus horizon computation and the
//! normalizations the monitors rely on.
//!
//! Sugar (`Or`, `Implies`, `F`, `G`, `FA`, `EX`) is kept as explicit nodes so
//! formulas print back the way they were written; [`LocalFormula::desugar`]
//! lowers to the core `{true, atom, !, &, U, In/Out}`.
//!
//! Until is inclusive on both ends: `a U[lo,hi] b` holds at `t` when some
//! `t'` in the window satisfies `b` and `a` holds on all of `[t, t']`,
//! including `t'` itself.

mod expr;
mod horizon;
mod interval;
mod normalize;
mod tree;

pub use expr::{AgentComponent, Component, Expr, GlobalExpr, LocalExpr};
pub use horizon::Horizon;
pub use interval::{Bound, CountSet, TimeInterval, WeightInterval};
pub use normalize::{expand_graph_quantifier, push_negations};
pub use tree::{build_operator_tree, GraphOpNode, GraphOpTree, LeafNode, Segment, Shape};

pub use crate::model::Direction;

/// Whether a graph operator must hold in some or in every listed graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

/// `In`/`Out` graph operator: counts edges in direction `dir` with weight in
/// `weight` whose far endpoint satisfies `child`, and tests the count
/// against `count` in some (`Exists`) or every (`Forall`) listed graph.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphOp {
    pub dir: Direction,
    pub quant: Quantifier,
    pub graphs: Vec<String>,
    pub count: CountSet,
    pub weight: WeightInterval,
    pub child: Box<LocalFormula>,
}

/// A formula evaluated at one agent.
#[derive(Clone, Debug, PartialEq)]
pub enum LocalFormula {
    True,
    /// `mu(x) >= 0` over the current agent's state.
    Atom(LocalExpr),
    Not(Box<LocalFormula>),
    And(Box<LocalFormula>, Box<LocalFormula>),
    Or(Box<LocalFormula>, Box<LocalFormula>),
    Implies(Box<LocalFormula>, Box<LocalFormula>),
    Until(TimeInterval, Box<LocalFormula>, Box<LocalFormula>),
    Eventually(TimeInterval, Box<LocalFormula>),
    Always(TimeInterval, Box<LocalFormula>),
    Graph(GraphOp),
}

/// A formula over the whole system.
#[derive(Clone, Debug, PartialEq)]
pub enum GlobalFormula {
    True,
    /// `mu(x_t) >= 0` over the joint state of all agents.
    Atom(GlobalExpr),
    /// `i.phi`: the local formula evaluated at agent `i`.
    Bind(usize, LocalFormula),
    Not(Box<GlobalFormula>),
    And(Box<GlobalFormula>, Box<GlobalFormula>),
    Or(Box<GlobalFormula>, Box<GlobalFormula>),
    Implies(Box<GlobalFormula>, Box<GlobalFormula>),
    Until(TimeInterval, Box<GlobalFormula>, Box<GlobalFormula>),
    Eventually(TimeInterval, Box<GlobalFormula>),
    Always(TimeInterval, Box<GlobalFormula>),
    /// `FA_V phi`, the conjunction of `i.phi` over `V`.
    ForAll(Vec<usize>, LocalFormula),
    /// `EX_V phi`, the disjunction of `i.phi` over `V`.
    Exists(Vec<usize>, LocalFormula),
}

impl LocalFormula {
    pub fn atom(e: LocalExpr) -> Self {
        LocalFormula::Atom(e)
    }

    pub fn falsum() -> Self {
        LocalFormula::Not(Box::new(LocalFormula::True))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Self) -> Self {
        LocalFormula::Not(Box::new(f))
    }

    pub fn and(a: Self, b: Self) -> Self {
        LocalFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        LocalFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        LocalFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn until(i: TimeInterval, a: Self, b: Self) -> Self {
        LocalFormula::Until(i, Box::new(a), Box::new(b))
    }

    pub fn eventually(i: TimeInterval, f: Self) -> Self {
        LocalFormula::Eventually(i, Box::new(f))
    }

    pub fn always(i: TimeInterval, f: Self) -> Self {
        LocalFormula::Always(i, Box::new(f))
    }

    /// Single-graph, existential graph operator.
    pub fn graph(dir: Direction, graph: &str, count: CountSet, weight: WeightInterval, child: Self) -> Self {
        LocalFormula::Graph(GraphOp {
            dir,
            quant: Quantifier::Exists,
            graphs: vec![graph.to_string()],
            count,
            weight,
            child: Box::new(child),
        })
    }

    /// Direct subformulas, left to right.
    pub fn children(&self) -> Vec<&LocalFormula> {
        use LocalFormula::*;
        match self {
            True | Atom(_) => vec![],
            Not(a) | Eventually(_, a) | Always(_, a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Until(_, a, b) => vec![a, b],
            Graph(op) => vec![&op.child],
        }
    }

    pub fn graph_ops(&self) -> Vec<&GraphOp> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let LocalFormula::Graph(op) = f {
                out.push(op);
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a LocalFormula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn has_graph_ops(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, LocalFormula::Graph(_)));
        found
    }

    pub fn has_atoms(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, LocalFormula::Atom(_)));
        found
    }

    /// Every graph tag referenced, in order of first appearance.
    pub fn graph_tags(&self) -> Vec<&str> {
        let mut tags: Vec<&str> = Vec::new();
        for op in self.graph_ops() {
            for g in &op.graphs {
                if !tags.contains(&g.as_str()) {
                    tags.push(g);
                }
            }
        }
        tags
    }

    pub fn max_component(&self) -> Option<usize> {
        let mut max = None;
        self.visit(&mut |f| {
            if let LocalFormula::Atom(e) = f {
                for c in e.vars() {
                    max = max.max(Some(c.0));
                }
            }
        });
        max
    }

    /// Lowers sugar to the core operators `{true, atom, !, &, U, In/Out}`.
    ///
    /// `a | b = !(!a & !b)`, `a -> b = !a | b`, `F_I a = true U_I a`,
    /// `G_I a = !F_I !a`. Graph operators keep their graph set and quantifier.
    pub fn desugar(&self) -> LocalFormula {
        use LocalFormula::*;
        match self {
            True => True,
            Atom(e) => Atom(e.clone()),
            Not(a) => Self::not(a.desugar()),
            And(a, b) => Self::and(a.desugar(), b.desugar()),
            Or(a, b) => core_or(a.desugar(), b.desugar()),
            Implies(a, b) => core_or(Self::not(a.desugar()), b.desugar()),
            Until(i, a, b) => Self::until(*i, a.desugar(), b.desugar()),
            Eventually(i, a) => Self::until(*i, True, a.desugar()),
            Always(i, a) => Self::not(Self::until(*i, True, Self::not(a.desugar()))),
            Graph(op) => Graph(GraphOp { child: Box::new(op.child.desugar()), ..op.clone() }),
        }
    }
}

fn core_or(a: LocalFormula, b: LocalFormula) -> LocalFormula {
    LocalFormula::not(LocalFormula::and(LocalFormula::not(a), LocalFormula::not(b)))
}

impl GlobalFormula {
    pub fn bind(agent: usize, f: LocalFormula) -> Self {
        GlobalFormula::Bind(agent, f)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Self) -> Self {
        GlobalFormula::Not(Box::new(f))
    }

    pub fn and(a: Self, b: Self) -> Self {
        GlobalFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        GlobalFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        GlobalFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn until(i: TimeInterval, a: Self, b: Self) -> Self {
        GlobalFormula::Until(i, Box::new(a), Box::new(b))
    }

    pub fn eventually(i: TimeInterval, f: Self) -> Self {
        GlobalFormula::Eventually(i, Box::new(f))
    }

    pub fn always(i: TimeInterval, f: Self) -> Self {
        GlobalFormula::Always(i, Box::new(f))
    }

    /// Left-nested conjunction; `true` for an empty iterator.
    pub fn conjunction(items: impl IntoIterator<Item = Self>) -> Self {
        items.into_iter().reduce(Self::and).unwrap_or(GlobalFormula::True)
    }

    /// Left-nested disjunction; `!true` for an empty iterator.
    pub fn disjunction(items: impl IntoIterator<Item = Self>) -> Self {
        items
            .into_iter()
            .reduce(Self::or)
            .unwrap_or_else(|| Self::not(GlobalFormula::True))
    }

    pub fn children(&self) -> Vec<&GlobalFormula> {
        use GlobalFormula::*;
        match self {
            True | Atom(_) | Bind(..) | ForAll(..) | Exists(..) => vec![],
            Not(a) | Eventually(_, a) | Always(_, a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Until(_, a, b) => vec![a, b],
        }
    }

    /// Every embedded local formula with the agents it is bound to.
    pub fn local_parts(&self) -> Vec<(&[usize], &LocalFormula)> {
        let mut out = Vec::new();
        self.collect_local(&mut out);
        out
    }

    fn collect_local<'a>(&'a self, out: &mut Vec<(&'a [usize], &'a LocalFormula)>) {
        match self {
            GlobalFormula::Bind(i, f) => out.push((std::slice::from_ref(i), f)),
            GlobalFormula::ForAll(v, f) | GlobalFormula::Exists(v, f) => out.push((v, f)),
            other => {
                for c in other.children() {
                    c.collect_local(out);
                }
            }
        }
    }

    pub fn global_atoms(&self) -> Vec<&GlobalExpr> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a GlobalFormula, out: &mut Vec<&'a GlobalExpr>) {
            if let GlobalFormula::Atom(e) = f {
                out.push(e);
            }
            for c in f.children() {
                go(c, out);
            }
        }
        go(self, &mut out);
        out
    }

    /// Applies `f` to every embedded local formula.
    pub fn map_local(&self, f: &impl Fn(&LocalFormula) -> LocalFormula) -> GlobalFormula {
        use GlobalFormula::*;
        match self {
            True => True,
            Atom(e) => Atom(e.clone()),
            Bind(i, l) => Bind(*i, f(l)),
            ForAll(v, l) => ForAll(v.clone(), f(l)),
            Exists(v, l) => Exists(v.clone(), f(l)),
            Not(a) => Self::not(a.map_local(f)),
            And(a, b) => Self::and(a.map_local(f), b.map_local(f)),
            Or(a, b) => Self::or(a.map_local(f), b.map_local(f)),
            Implies(a, b) => Self::implies(a.map_local(f), b.map_local(f)),
            Until(i, a, b) => Self::until(*i, a.map_local(f), b.map_local(f)),
            Eventually(i, a) => Self::eventually(*i, a.map_local(f)),
            Always(i, a) => Self::always(*i, a.map_local(f)),
        }
    }

    /// Lowers sugar (including `FA`/`EX`) to `{true, atom, i.phi, !, &, U}`
    /// with desugared local parts.
    pub fn desugar(&self) -> GlobalFormula {
        use GlobalFormula::*;
        let or = |a, b| Self::not(Self::and(Self::not(a), Self::not(b)));
        match self {
            True => True,
            Atom(e) => Atom(e.clone()),
            Bind(i, l) => Bind(*i, l.desugar()),
            ForAll(v, l) => {
                let l = l.desugar();
                v.iter().map(|&i| Bind(i, l.clone())).reduce(Self::and).unwrap_or(True)
            }
            Exists(v, l) => {
                let l = l.desugar();
                v.iter()
                    .map(|&i| Bind(i, l.clone()))
                    .reduce(or)
                    .unwrap_or_else(|| Self::not(True))
            }
            Not(a) => Self::not(a.desugar()),
            And(a, b) => Self::and(a.desugar(), b.desugar()),
            Or(a, b) => or(a.desugar(), b.desugar()),
            Implies(a, b) => or(Self::not(a.desugar()), b.desugar()),
            Until(i, a, b) => Self::until(*i, a.desugar(), b.desugar()),
            Eventually(i, a) => Self::until(*i, True, a.desugar()),
            Always(i, a) => Self::not(Self::until(*i, True, Self::not(a.desugar()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desugar_uses_core_only() {
        let i = TimeInterval::bounded(0, 3).unwrap();
        let f = LocalFormula::always(
            i,
            LocalFormula::implies(
                LocalFormula::atom(LocalExpr::x(0)),
                LocalFormula::or(LocalFormula::True, LocalFormula::eventually(i, LocalFormula::True)),
            ),
        );
        let mut ok = true;
        f.desugar().visit(&mut |n| {
            ok &= matches!(
                n,
                LocalFormula::True | LocalFormula::Atom(_) | LocalFormula::Not(_) | LocalFormula::And(..) | LocalFormula::Until(..) | LocalFormula::Graph(_)
            )
        });
        assert!(ok);
    }

    #[test]
    fn empty_fa_is_true() {
        assert_eq!(GlobalFormula::ForAll(vec![], LocalFormula::falsum()).desugar(), GlobalFormula::True);
    }
}
