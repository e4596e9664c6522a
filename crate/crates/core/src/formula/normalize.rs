use super::{GraphOp, LocalFormula, Quantifier};

/// Removes every negation sitting directly above a graph operator by
/// complementing the operator's count set.
///
/// `!In{g} E phi` becomes `In{g} E' phi` with `E'` the complement of `E`. For
/// operators over several graphs the quantifier is dualized as well, since
/// `!(exists g. c_g in E)` is `forall g. c_g in E'`. All other structure,
/// including double negations of non-graph formulas, is preserved.
pub fn push_negations(f: &LocalFormula) -> LocalFormula {
    use LocalFormula::*;
    match f {
        True => True,
        Atom(e) => Atom(e.clone()),
        Not(a) => match push_negations(a) {
            Graph(op) => Graph(negate(op)),
            other => LocalFormula::not(other),
        },
        And(a, b) => LocalFormula::and(push_negations(a), push_negations(b)),
        Or(a, b) => LocalFormula::or(push_negations(a), push_negations(b)),
        Implies(a, b) => LocalFormula::implies(push_negations(a), push_negations(b)),
        Until(i, a, b) => LocalFormula::until(*i, push_negations(a), push_negations(b)),
        Eventually(i, a) => LocalFormula::eventually(*i, push_negations(a)),
        Always(i, a) => LocalFormula::always(*i, push_negations(a)),
        Graph(op) => Graph(GraphOp { child: Box::new(push_negations(&op.child)), ..op.clone() }),
    }
}

fn negate(op: GraphOp) -> GraphOp {
    let quant = if op.graphs.len() > 1 { op.quant.dual() } else { op.quant };
    GraphOp { count: op.count.complement(), quant, ..op }
}

/// Rewrites every graph operator over `m > 1` graphs into `m` single-graph
/// operators joined by `|` (exists) or `&` (forall), folded to the left.
pub fn expand_graph_quantifier(f: &LocalFormula) -> LocalFormula {
    use LocalFormula::*;
    match f {
        True => True,
        Atom(e) => Atom(e.clone()),
        Not(a) => LocalFormula::not(expand_graph_quantifier(a)),
        And(a, b) => LocalFormula::and(expand_graph_quantifier(a), expand_graph_quantifier(b)),
        Or(a, b) => LocalFormula::or(expand_graph_quantifier(a), expand_graph_quantifier(b)),
        Implies(a, b) => LocalFormula::implies(expand_graph_quantifier(a), expand_graph_quantifier(b)),
        Until(i, a, b) => LocalFormula::until(*i, expand_graph_quantifier(a), expand_graph_quantifier(b)),
        Eventually(i, a) => LocalFormula::eventually(*i, expand_graph_quantifier(a)),
        Always(i, a) => LocalFormula::always(*i, expand_graph_quantifier(a)),
        Graph(op) => {
            let child = expand_graph_quantifier(&op.child);
            let single = |g: &String| {
                Graph(GraphOp {
                    dir: op.dir,
                    quant: Quantifier::Exists,
                    graphs: vec![g.clone()],
                    count: op.count.clone(),
                    weight: op.weight,
                    child: Box::new(child.clone()),
                })
            };
            if op.graphs.len() == 1 {
                return Graph(GraphOp { child: Box::new(child.clone()), ..op.clone() });
            }
            let join = match op.quant {
                Quantifier::Exists => LocalFormula::or,
                Quantifier::Forall => LocalFormula::and,
            };
            op.graphs.iter().map(single).reduce(join).expect("graph set is non-empty")
        }
    }
}
