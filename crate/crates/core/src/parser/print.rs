use std::fmt::{self, Display, Formatter};

use crate::formula::{
    AgentComponent, Component, Direction, Expr, GlobalFormula, GraphOp, LocalFormula, Quantifier, WeightInterval,
};

impl Display for Component {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "x[{}]", self.0)
    }
}

impl Display for AgentComponent {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "s[{}][{}]", self.agent, self.component)
    }
}

fn precedence<V>(e: &Expr<V>) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        _ => 3,
    }
}

fn operand<V: Display>(f: &mut Formatter<'_>, e: &Expr<V>, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl<V: Display> Display for Expr<V> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let p = precedence(self);
        let bin = |f: &mut Formatter<'_>, a: &Expr<V>, op: &str, b: &Expr<V>| {
            operand(f, a, precedence(a) < p)?;
            write!(f, " {op} ")?;
            operand(f, b, precedence(b) <= p)
        };
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Add(a, b) => bin(f, a, "+", b),
            Expr::Sub(a, b) => bin(f, a, "-", b),
            Expr::Mul(a, b) => bin(f, a, "*", b),
            Expr::Div(a, b) => bin(f, a, "/", b),
            Expr::Abs(a) => write!(f, "abs({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Min(a, b) => write!(f, "min({a}, {b})"),
            Expr::Max(a, b) => write!(f, "max({a}, {b})"),
        }
    }
}

fn is_zero<V>(e: &Expr<V>) -> bool {
    matches!(e, Expr::Const(c) if *c == 0.0)
}

/// `[a >= b]` for `a - b`, `[e >= 0]` otherwise; both parse back to the same atom.
fn atom<V: Display>(f: &mut Formatter<'_>, e: &Expr<V>) -> fmt::Result {
    match e {
        Expr::Sub(a, b) if !is_zero(b) => write!(f, "[{a} >= {b}]"),
        _ => write!(f, "[{e} >= 0]"),
    }
}

/// `![a - b >= 0]` prints as `[a < b]`.
fn negated_atom<V: Display>(f: &mut Formatter<'_>, e: &Expr<V>) -> Option<fmt::Result> {
    match e {
        Expr::Sub(a, b) => Some(write!(f, "[{a} < {b}]")),
        _ => None,
    }
}

fn weight(f: &mut Formatter<'_>, w: &WeightInterval) -> fmt::Result {
    let b = |v: f64| {
        if v == f64::INFINITY {
            "inf".to_string()
        } else if v == f64::NEG_INFINITY {
            "-inf".to_string()
        } else {
            v.to_string()
        }
    };
    write!(f, " W[{},{}]", b(w.lo()), b(w.hi()))
}

fn graph_head(f: &mut Formatter<'_>, op: &GraphOp) -> fmt::Result {
    f.write_str(match op.dir {
        Direction::In => "In",
        Direction::Out => "Out",
    })?;
    if op.quant == Quantifier::Forall {
        f.write_str("<forall>")?;
    }
    write!(f, "{{{}}} E{}", op.graphs.join(","), op.count)?;
    if !op.weight.is_all() {
        weight(f, &op.weight)?;
    }
    Ok(())
}

impl LocalFormula {
    fn is_binary(&self) -> bool {
        matches!(self, LocalFormula::And(..) | LocalFormula::Or(..) | LocalFormula::Implies(..) | LocalFormula::Until(..))
    }
}

/// Temporal operators sit flush against a parenthesized operand.
fn gap(parenthesized: bool) -> &'static str {
    if parenthesized {
        ""
    } else {
        " "
    }
}

struct Sub<'a>(&'a LocalFormula);

impl Display for Sub<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.0.is_binary() {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Display for LocalFormula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        use LocalFormula::*;
        match self {
            True => f.write_str("true"),
            Atom(e) => atom(f, e),
            Not(a) => match a.as_ref() {
                True => f.write_str("false"),
                Atom(e) => match negated_atom(f, e) {
                    Some(r) => r,
                    None => write!(f, "!{}", Sub(a)),
                },
                _ => write!(f, "!{}", Sub(a)),
            },
            And(a, b) => write!(f, "{} & {}", Sub(a), Sub(b)),
            Or(a, b) => write!(f, "{} | {}", Sub(a), Sub(b)),
            Implies(a, b) => write!(f, "{} -> {}", Sub(a), Sub(b)),
            Until(i, a, b) => write!(f, "{} U{i} {}", Sub(a), Sub(b)),
            Eventually(i, a) => write!(f, "F{i}{}{}", gap(a.is_binary()), Sub(a)),
            Always(i, a) => write!(f, "G{i}{}{}", gap(a.is_binary()), Sub(a)),
            Graph(op) => {
                graph_head(f, op)?;
                write!(f, " {}", Sub(&op.child))
            }
        }
    }
}

fn agents(f: &mut Formatter<'_>, v: &[usize]) -> fmt::Result {
    let contiguous = v.len() >= 2 && v.windows(2).all(|w| w[1] == w[0] + 1);
    if contiguous {
        write!(f, "{{{}..{}}}", v[0], v[v.len() - 1])
    } else {
        let s: Vec<String> = v.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

impl GlobalFormula {
    fn is_binary(&self) -> bool {
        use GlobalFormula::*;
        matches!(self, And(..) | Or(..) | Implies(..) | Until(..))
    }
}

struct GSub<'a>(&'a GlobalFormula);

impl Display for GSub<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.0.is_binary() {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Display for GlobalFormula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        use GlobalFormula::*;
        match self {
            True => f.write_str("true"),
            Atom(e) => atom(f, e),
            Bind(i, phi) => write!(f, "@{i}.({phi})"),
            ForAll(v, phi) | Exists(v, phi) => {
                f.write_str(if matches!(self, ForAll(..)) { "FA" } else { "EX" })?;
                agents(f, v)?;
                write!(f, "({phi})")
            }
            Not(a) => match a.as_ref() {
                True => f.write_str("false"),
                Atom(e) => match negated_atom(f, e) {
                    Some(r) => r,
                    None => write!(f, "!{}", GSub(a)),
                },
                _ => write!(f, "!{}", GSub(a)),
            },
            And(a, b) => write!(f, "{} & {}", GSub(a), GSub(b)),
            Or(a, b) => write!(f, "{} | {}", GSub(a), GSub(b)),
            Implies(a, b) => write!(f, "{} -> {}", GSub(a), GSub(b)),
            Until(i, a, b) => write!(f, "{} U{i} {}", GSub(a), GSub(b)),
            Eventually(i, a) => write!(f, "F{i}{}{}", gap(a.is_binary()), GSub(a)),
            Always(i, a) => write!(f, "G{i}{}{}", gap(a.is_binary()), GSub(a)),
        }
    }
}
