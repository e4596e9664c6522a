use super::{Bound, CountSet, Direction, GraphOp, LocalFormula, Quantifier, TimeInterval, WeightInterval};
use crate::error::{Error, Result};

/// The Boolean/temporal path between two consecutive items of the tree
/// (root, graph operator, leaf).
///
/// `lo..=hi` is the range of time offsets the path can shift evaluation by;
/// `conjunctive` is set when the path consists of `&` nodes only, so a false
/// lower item forces the upper item's operand false at the same time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub lo: u64,
    pub hi: Bound,
    pub conjunctive: bool,
}

impl Segment {
    const START: Segment = Segment { lo: 0, hi: Bound::Finite(0), conjunctive: true };

    fn shift(self, lo: u64, hi: Bound) -> Segment {
        Segment { lo: self.lo + lo, hi: self.hi.saturating_add(hi), conjunctive: false }
    }

    fn broken(self) -> Segment {
        Segment { conjunctive: false, ..self }
    }

    /// Times `t + lo ..= t + hi` clipped to `0..=length`. Unbounded paths
    /// always reach the last sample, as unbounded windows do.
    pub fn times(&self, t: usize, length: usize) -> Option<(usize, usize)> {
        let lo = t.saturating_add(self.lo as usize);
        let (lo, hi) = match self.hi {
            Bound::Finite(h) => (lo, t.saturating_add(h as usize).min(length)),
            Bound::Infinite => (lo.min(length), length),
        };
        (lo <= hi).then_some((lo, hi))
    }
}

/// An intermediate node: one single-graph operator.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphOpNode {
    /// 1-based, depth-first pre-order.
    pub index: usize,
    /// Distance from the root; top-level operators have level 1.
    pub level: usize,
    pub parent: Option<usize>,
    pub dir: Direction,
    pub quant: Quantifier,
    pub graph: String,
    pub count: CountSet,
    pub weight: WeightInterval,
    /// Path from the parent operator's operand (or the root) to this node.
    pub segment: Segment,
}

/// A maximal graph-operator-free subformula.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafNode {
    /// 1-based, depth-first pre-order.
    pub index: usize,
    pub level: usize,
    pub formula: LocalFormula,
    /// Indices of the enclosing graph operators, outermost first.
    pub ancestors: Vec<usize>,
    /// Path from the innermost ancestor's operand (or the root) to the leaf.
    pub segment: Segment,
}

/// The formula with leaves and graph operators replaced by references into
/// the tree; everything in between is the elided Boolean/temporal structure.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Leaf(usize),
    Graph(usize, Box<Shape>),
    Not(Box<Shape>),
    And(Box<Shape>, Box<Shape>),
    Or(Box<Shape>, Box<Shape>),
    Implies(Box<Shape>, Box<Shape>),
    Until(TimeInterval, Box<Shape>, Box<Shape>),
    Eventually(TimeInterval, Box<Shape>),
    Always(TimeInterval, Box<Shape>),
}

/// The graph operator tree of an agent-local formula.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphOpTree {
    root: LocalFormula,
    nodes: Vec<GraphOpNode>,
    leaves: Vec<LeafNode>,
    shape: Shape,
}

impl GraphOpTree {
    /// Builds the tree of a formula whose graph operators each range over a
    /// single graph. Negations directly above graph operators should already
    /// have been pushed into the count sets.
    pub fn build(f: &LocalFormula) -> Result<Self> {
        let mut b = Builder { nodes: Vec::new(), leaves: Vec::new() };
        let shape = b.walk(f, &[], Segment::START)?;
        Ok(Self { root: f.clone(), nodes: b.nodes, leaves: b.leaves, shape })
    }

    pub fn root(&self) -> &LocalFormula {
        &self.root
    }

    /// Intermediate nodes; `nodes()[p - 1]` has index `p`.
    pub fn nodes(&self) -> &[GraphOpNode] {
        &self.nodes
    }

    pub fn node(&self, p: usize) -> &GraphOpNode {
        &self.nodes[p - 1]
    }

    /// Leaves; `leaves()[q - 1]` has index `q`.
    pub fn leaves(&self) -> &[LeafNode] {
        &self.leaves
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Number of graph operators.
    pub fn alpha(&self) -> usize {
        self.nodes.len()
    }

    /// Number of leaves.
    pub fn beta(&self) -> usize {
        self.leaves.len()
    }

    /// Rebuilds the formula from the shape, nodes and leaves.
    pub fn reassemble(&self) -> LocalFormula {
        self.rebuild(&self.shape)
    }

    fn rebuild(&self, s: &Shape) -> LocalFormula {
        match s {
            Shape::Leaf(q) => self.leaves[q - 1].formula.clone(),
            Shape::Graph(p, child) => {
                let n = &self.nodes[p - 1];
                LocalFormula::Graph(GraphOp {
                    dir: n.dir,
                    quant: n.quant,
                    graphs: vec![n.graph.clone()],
                    count: n.count.clone(),
                    weight: n.weight,
                    child: Box::new(self.rebuild(child)),
                })
            }
            Shape::Not(a) => LocalFormula::not(self.rebuild(a)),
            Shape::And(a, b) => LocalFormula::and(self.rebuild(a), self.rebuild(b)),
            Shape::Or(a, b) => LocalFormula::or(self.rebuild(a), self.rebuild(b)),
            Shape::Implies(a, b) => LocalFormula::implies(self.rebuild(a), self.rebuild(b)),
            Shape::Until(i, a, b) => LocalFormula::until(*i, self.rebuild(a), self.rebuild(b)),
            Shape::Eventually(i, a) => LocalFormula::eventually(*i, self.rebuild(a)),
            Shape::Always(i, a) => LocalFormula::always(*i, self.rebuild(a)),
        }
    }
}

/// Shorthand for [`GraphOpTree::build`].
pub fn build_operator_tree(f: &LocalFormula) -> Result<GraphOpTree> {
    GraphOpTree::build(f)
}

struct Builder {
    nodes: Vec<GraphOpNode>,
    leaves: Vec<LeafNode>,
}

impl Builder {
    fn walk(&mut self, f: &LocalFormula, ancestors: &[usize], seg: Segment) -> Result<Shape> {
        use LocalFormula::*;
        if !f.has_graph_ops() {
            let index = self.leaves.len() + 1;
            self.leaves.push(LeafNode {
                index,
                level: ancestors.len() + 1,
                formula: f.clone(),
                ancestors: ancestors.to_vec(),
                segment: seg,
            });
            return Ok(Shape::Leaf(index));
        }
        let b = Box::new;
        Ok(match f {
            True | Atom(_) => unreachable!("graph-free formulas are leaves"),
            Graph(op) => {
                if op.graphs.len() != 1 {
                    return Err(Error::ExpandGraphsFirst(op.graphs.len()));
                }
                let index = self.nodes.len() + 1;
                self.nodes.push(GraphOpNode {
                    index,
                    level: ancestors.len() + 1,
                    parent: ancestors.last().copied(),
                    dir: op.dir,
                    quant: op.quant,
                    graph: op.graphs[0].clone(),
                    count: op.count.clone(),
                    weight: op.weight,
                    segment: seg,
                });
                let mut chain = ancestors.to_vec();
                chain.push(index);
                Shape::Graph(index, b(self.walk(&op.child, &chain, Segment::START)?))
            }
            Not(a) => Shape::Not(b(self.walk(a, ancestors, seg.broken())?)),
            And(x, y) => Shape::And(b(self.walk(x, ancestors, seg)?), b(self.walk(y, ancestors, seg)?)),
            Or(x, y) => Shape::Or(b(self.walk(x, ancestors, seg.broken())?), b(self.walk(y, ancestors, seg.broken())?)),
            Implies(x, y) => {
                Shape::Implies(b(self.walk(x, ancestors, seg.broken())?), b(self.walk(y, ancestors, seg.broken())?))
            }
            Until(i, x, y) => Shape::Until(
                *i,
                b(self.walk(x, ancestors, seg.shift(0, i.hi()))?),
                b(self.walk(y, ancestors, seg.shift(i.lo(), i.hi()))?),
            ),
            Eventually(i, x) => Shape::Eventually(*i, b(self.walk(x, ancestors, seg.shift(i.lo(), i.hi()))?)),
            Always(i, x) => Shape::Always(*i, b(self.walk(x, ancestors, seg.shift(i.lo(), i.hi()))?)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::LocalExpr;

    fn pi(k: usize) -> LocalFormula {
        LocalFormula::atom(LocalExpr::x(k))
    }

    fn g(dir: Direction, tag: &str, child: LocalFormula) -> LocalFormula {
        LocalFormula::graph(dir, tag, CountSet::at_least(1), WeightInterval::ALL, child)
    }

    #[test]
    fn ancestor_lists_follow_preorder() {
        let i = TimeInterval::bounded(1, 4).unwrap();
        let f = LocalFormula::until(
            i,
            g(Direction::In, "g1", pi(0)),
            g(Direction::Out, "g2", LocalFormula::and(pi(1), g(Direction::In, "g3", LocalFormula::True))),
        );
        let t = GraphOpTree::build(&f).unwrap();
        assert_eq!(t.alpha(), 3);
        assert_eq!(t.beta(), 3);
        let anc: Vec<_> = t.leaves().iter().map(|l| l.ancestors.clone()).collect();
        assert_eq!(anc, vec![vec![1], vec![2], vec![2, 3]]);
        assert_eq!(t.leaves()[0].formula, pi(0));
        assert_eq!(t.leaves()[2].formula, LocalFormula::True);
        assert_eq!(t.node(3).parent, Some(2));
        assert_eq!(t.node(3).level, 2);
        assert_eq!(t.leaves()[2].level, 3);
        assert_eq!(t.reassemble(), f);

        // left operand of until: offsets 0..=4; right: 1..=4
        assert_eq!(t.node(1).segment, Segment { lo: 0, hi: Bound::Finite(4), conjunctive: false });
        assert_eq!(t.node(2).segment, Segment { lo: 1, hi: Bound::Finite(4), conjunctive: false });
        assert!(t.node(3).segment.conjunctive);
    }

    #[test]
    fn graph_free_formula_is_one_leaf() {
        let t = GraphOpTree::build(&pi(0)).unwrap();
        assert_eq!(t.alpha(), 0);
        assert_eq!(t.beta(), 1);
        assert!(t.leaves()[0].ancestors.is_empty());
    }

    #[test]
    fn nested_operators_share_one_leaf() {
        let f = g(Direction::In, "a", g(Direction::Out, "b", LocalFormula::True));
        let t = GraphOpTree::build(&f).unwrap();
        assert_eq!(t.leaves()[0].ancestors, vec![1, 2]);
    }

    #[test]
    fn multi_graph_operator_rejected() {
        let f = LocalFormula::Graph(GraphOp {
            dir: Direction::In,
            quant: Quantifier::Exists,
            graphs: vec!["s".into(), "c".into()],
            count: CountSet::at_least(1),
            weight: WeightInterval::ALL,
            child: Box::new(LocalFormula::True),
        });
        assert_eq!(GraphOpTree::build(&f), Err(Error::ExpandGraphsFirst(2)));
    }
}
