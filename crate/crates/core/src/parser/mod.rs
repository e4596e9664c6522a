//! Text syntax for formulas.
//!
//! ```text
//! phi  := true | false | [expr cmp expr] | !phi | phi & phi | phi | phi | phi -> phi
//!       | phi U[a,b] phi | F[a,b] phi | G[a,b] phi
//!       | (In|Out) (<exists>|<forall>)? {tags} E cset (W [w1,w2])? phi
//! Phi  := true | false | [gexpr cmp gexpr] | @i.(phi) | FA{agents}(phi) | EX{agents}(phi)
//!       | Boolean and temporal combinations as above
//! ```
//!
//! Precedence from tightest: unary operators, `&` and `U` (left-associative),
//! `|`, `->` (right-associative). Comparisons are rewritten to the `mu >= 0`
//! predicate form at parse time, e.g. `[a < b]` becomes `![a - b >= 0]`.
//! `#` starts a line comment.

mod lexer;
mod print;

use std::fmt;

use lexer::{span_at, tokenize, Tok, Token};

use crate::formula::{
    AgentComponent, Bound, Component, CountSet, Direction, Expr, GlobalFormula, GraphOp, LocalFormula, Quantifier,
    TimeInterval, WeightInterval,
};

/// Byte range plus 1-based line and column of its start.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
    pub expected: Vec<String>,
}

impl ParseError {
    fn new(message: String, span: SourceSpan, expected: Vec<String>) -> Self {
        Self { message, span, expected }
    }

    /// Multi-line rendering with the offending line and a caret marker.
    pub fn render(&self, src: &str) -> String {
        let line_text = src.lines().nth(self.span.line - 1).unwrap_or("");
        let width = src[self.span.start..self.span.end.min(src.len())].chars().count().max(1);
        let mut out = format!("error: {self}\n");
        out += &format!("{:>4} | {line_text}\n", self.span.line);
        out += &format!("     | {}{}", " ".repeat(self.span.column - 1), "^".repeat(width));
        out
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.span.line, self.span.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

pub fn parse_local(src: &str) -> Result<LocalFormula, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.formula::<Local>()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_global(src: &str) -> Result<GlobalFormula, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.formula::<Global>()?;
    p.finish()?;
    Ok(f)
}

pub fn print_local(f: &LocalFormula) -> String {
    f.to_string()
}

pub fn print_global(f: &GlobalFormula) -> String {
    f.to_string()
}

/// The two formula layers share connectives; they differ in accessors and
/// in the primaries they accept.
trait Layer {
    type F;
    type V: Clone;
    fn top() -> Self::F;
    fn atom(e: Expr<Self::V>) -> Self::F;
    fn not(a: Self::F) -> Self::F;
    fn and(a: Self::F, b: Self::F) -> Self::F;
    fn or(a: Self::F, b: Self::F) -> Self::F;
    fn implies(a: Self::F, b: Self::F) -> Self::F;
    fn until(i: TimeInterval, a: Self::F, b: Self::F) -> Self::F;
    fn eventually(i: TimeInterval, a: Self::F) -> Self::F;
    fn always(i: TimeInterval, a: Self::F) -> Self::F;
    /// Parses a state accessor after its identifier has been consumed.
    fn accessor(p: &mut Parser<'_>, name: &str, at: SourceSpan) -> Result<Expr<Self::V>, ParseError>;
    /// Layer-specific unary forms; `None` when `tok` starts none of them.
    fn prefix(p: &mut Parser<'_>, tok: &Tok) -> Option<Result<Self::F, ParseError>>;
    const ACCESSOR: &'static str;
}

struct Local;
struct Global;

impl Layer for Local {
    type F = LocalFormula;
    type V = Component;
    const ACCESSOR: &'static str = "x[k]";

    fn top() -> LocalFormula {
        LocalFormula::True
    }
    fn atom(e: Expr<Component>) -> LocalFormula {
        LocalFormula::Atom(e)
    }
    fn not(a: LocalFormula) -> LocalFormula {
        LocalFormula::not(a)
    }
    fn and(a: LocalFormula, b: LocalFormula) -> LocalFormula {
        LocalFormula::and(a, b)
    }
    fn or(a: LocalFormula, b: LocalFormula) -> LocalFormula {
        LocalFormula::or(a, b)
    }
    fn implies(a: LocalFormula, b: LocalFormula) -> LocalFormula {
        LocalFormula::implies(a, b)
    }
    fn until(i: TimeInterval, a: LocalFormula, b: LocalFormula) -> LocalFormula {
        LocalFormula::until(i, a, b)
    }
    fn eventually(i: TimeInterval, a: LocalFormula) -> LocalFormula {
        LocalFormula::eventually(i, a)
    }
    fn always(i: TimeInterval, a: LocalFormula) -> LocalFormula {
        LocalFormula::always(i, a)
    }

    fn accessor(p: &mut Parser<'_>, name: &str, at: SourceSpan) -> Result<Expr<Component>, ParseError> {
        if name != "x" {
            return Err(p.error_at(format!("unknown identifier `{name}` in expression"), at, &["x[k]"]));
        }
        p.expect(Tok::LBracket)?;
        let k = p.nat()? as usize;
        p.expect(Tok::RBracket)?;
        Ok(Expr::Var(Component(k)))
    }

    fn prefix(p: &mut Parser<'_>, tok: &Tok) -> Option<Result<LocalFormula, ParseError>> {
        let dir = match tok {
            Tok::Ident(s) if s == "In" => Direction::In,
            Tok::Ident(s) if s == "Out" => Direction::Out,
            _ => return None,
        };
        Some(p.graph_op(dir))
    }
}

impl Layer for Global {
    type F = GlobalFormula;
    type V = AgentComponent;
    const ACCESSOR: &'static str = "s[i][k]";

    fn top() -> GlobalFormula {
        GlobalFormula::True
    }
    fn atom(e: Expr<AgentComponent>) -> GlobalFormula {
        GlobalFormula::Atom(e)
    }
    fn not(a: GlobalFormula) -> GlobalFormula {
        GlobalFormula::not(a)
    }
    fn and(a: GlobalFormula, b: GlobalFormula) -> GlobalFormula {
        GlobalFormula::and(a, b)
    }
    fn or(a: GlobalFormula, b: GlobalFormula) -> GlobalFormula {
        GlobalFormula::or(a, b)
    }
    fn implies(a: GlobalFormula, b: GlobalFormula) -> GlobalFormula {
        GlobalFormula::implies(a, b)
    }
    fn until(i: TimeInterval, a: GlobalFormula, b: GlobalFormula) -> GlobalFormula {
        GlobalFormula::until(i, a, b)
    }
    fn eventually(i: TimeInterval, a: GlobalFormula) -> GlobalFormula {
        GlobalFormula::eventually(i, a)
    }
    fn always(i: TimeInterval, a: GlobalFormula) -> GlobalFormula {
        GlobalFormula::always(i, a)
    }

    fn accessor(p: &mut Parser<'_>, name: &str, at: SourceSpan) -> Result<Expr<AgentComponent>, ParseError> {
        if name != "s" {
            return Err(p.error_at(format!("unknown identifier `{name}` in expression"), at, &["s[i][k]"]));
        }
        p.expect(Tok::LBracket)?;
        let agent = p.nat()? as usize;
        p.expect(Tok::RBracket)?;
        p.expect(Tok::LBracket)?;
        let component = p.nat()? as usize;
        p.expect(Tok::RBracket)?;
        Ok(Expr::Var(AgentComponent { agent, component }))
    }

    fn prefix(p: &mut Parser<'_>, tok: &Tok) -> Option<Result<GlobalFormula, ParseError>> {
        match tok {
            Tok::At => Some(p.bind()),
            Tok::Ident(s) if s == "FA" || s == "EX" => Some(p.agent_quantifier(s == "FA")),
            _ => None,
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

enum Cmp {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
    Ne,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        Ok(Self { src, toks: tokenize(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn error_at(&self, message: String, span: SourceSpan, expected: &[&str]) -> ParseError {
        ParseError::new(message, span, expected.iter().map(|s| s.to_string()).collect())
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let what = self.peek().describe();
        self.error_at(format!("unexpected {what}"), self.span(), expected)
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            let want = tok.describe();
            Err(self.unexpected(&[want.as_str()]))
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<(), ParseError> {
        if self.is_ident(name) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{name}`")]))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input", "`&`", "`|`", "`->`", "`U`"]))
        }
    }

    fn formula<L: Layer>(&mut self) -> Result<L::F, ParseError> {
        let lhs = self.disjunction::<L>()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula::<L>()?;
            return Ok(L::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction<L: Layer>(&mut self) -> Result<L::F, ParseError> {
        let mut f = self.conjunction::<L>()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            f = L::or(f, self.conjunction::<L>()?);
        }
        Ok(f)
    }

    fn conjunction<L: Layer>(&mut self) -> Result<L::F, ParseError> {
        let mut f = self.unary::<L>()?;
        loop {
            if *self.peek() == Tok::Amp {
                self.bump();
                f = L::and(f, self.unary::<L>()?);
            } else if self.is_ident("U") {
                self.bump();
                let i = self.time_interval()?;
                f = L::until(i, f, self.unary::<L>()?);
            } else {
                return Ok(f);
            }
        }
    }

    fn unary<L: Layer>(&mut self) -> Result<L::F, ParseError> {
        let tok = self.peek().clone();
        if let Some(r) = L::prefix(self, &tok) {
            return r;
        }
        match tok {
            Tok::Bang => {
                self.bump();
                Ok(L::not(self.unary::<L>()?))
            }
            Tok::Ident(s) if s == "F" || s == "G" => {
                self.bump();
                let i = self.time_interval()?;
                let a = self.unary::<L>()?;
                Ok(if s == "F" { L::eventually(i, a) } else { L::always(i, a) })
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(L::top())
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(L::not(L::top()))
            }
            Tok::LBracket => self.atom::<L>(),
            Tok::LParen => {
                self.bump();
                let f = self.formula::<L>()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => Err(self.unexpected(&["formula"])),
        }
    }

    fn atom<L: Layer>(&mut self) -> Result<L::F, ParseError> {
        self.expect(Tok::LBracket)?;
        let a = self.expr::<L>()?;
        let cmp = match self.peek() {
            Tok::Le => Cmp::Le,
            Tok::Lt => Cmp::Lt,
            Tok::Ge => Cmp::Ge,
            Tok::Gt => Cmp::Gt,
            Tok::EqEq => Cmp::Eq,
            Tok::Ne => Cmp::Ne,
            _ => return Err(self.unexpected(&["`<=`", "`<`", "`>=`", "`>`", "`==`", "`!=`"])),
        };
        self.bump();
        let b = self.expr::<L>()?;
        self.expect(Tok::RBracket)?;
        Ok(match cmp {
            Cmp::Ge if matches!(b, Expr::Const(c) if c == 0.0) => L::atom(a),
            Cmp::Ge => L::atom(sub(&a, &b)),
            Cmp::Le => L::atom(sub(&b, &a)),
            Cmp::Gt => L::not(L::atom(sub(&b, &a))),
            Cmp::Lt => L::not(L::atom(sub(&a, &b))),
            Cmp::Eq => L::and(L::atom(sub(&a, &b)), L::atom(sub(&b, &a))),
            Cmp::Ne => L::not(L::and(L::atom(sub(&a, &b)), L::atom(sub(&b, &a)))),
        })
    }

    fn expr<L: Layer>(&mut self) -> Result<Expr<L::V>, ParseError> {
        let mut e = self.term::<L>()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => Expr::Add,
                Tok::Minus => Expr::Sub,
                _ => return Ok(e),
            };
            self.bump();
            e = op(Box::new(e), Box::new(self.term::<L>()?));
        }
    }

    fn term<L: Layer>(&mut self) -> Result<Expr<L::V>, ParseError> {
        let mut e = self.factor::<L>()?;
        loop {
            let op = match self.peek() {
                Tok::Star => Expr::Mul,
                Tok::Slash => Expr::Div,
                _ => return Ok(e),
            };
            self.bump();
            e = op(Box::new(e), Box::new(self.factor::<L>()?));
        }
    }

    fn factor<L: Layer>(&mut self) -> Result<Expr<L::V>, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Num(s) => Ok(Expr::Const(self.real(&s, t.span)?)),
            Tok::Minus => match self.peek().clone() {
                Tok::Num(s) => {
                    let span = self.bump().span;
                    Ok(Expr::Const(-self.real(&s, span)?))
                }
                _ => {
                    let e = self.factor::<L>()?;
                    Ok(Expr::Mul(Box::new(Expr::Const(-1.0)), Box::new(e)))
                }
            },
            Tok::LParen => {
                let e = self.expr::<L>()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "abs" | "sqrt" => {
                    self.expect(Tok::LParen)?;
                    let e = Box::new(self.expr::<L>()?);
                    self.expect(Tok::RParen)?;
                    Ok(if name == "abs" { Expr::Abs(e) } else { Expr::Sqrt(e) })
                }
                "min" | "max" => {
                    self.expect(Tok::LParen)?;
                    let a = Box::new(self.expr::<L>()?);
                    self.expect(Tok::Comma)?;
                    let b = Box::new(self.expr::<L>()?);
                    self.expect(Tok::RParen)?;
                    Ok(if name == "min" { Expr::Min(a, b) } else { Expr::Max(a, b) })
                }
                _ => L::accessor(self, &name, t.span),
            },
            other => {
                self.pos -= 1;
                let what = other.describe();
                Err(self.error_at(format!("unexpected {what} in expression"), t.span, &["number", L::ACCESSOR, "`(`"]))
            }
        }
    }

    fn real(&self, text: &str, span: SourceSpan) -> Result<f64, ParseError> {
        text.parse::<f64>()
            .map_err(|_| self.error_at(format!("malformed number `{text}`"), span, &["number"]))
    }

    fn nat(&mut self) -> Result<u64, ParseError> {
        match self.peek().clone() {
            Tok::Num(s) if s.bytes().all(|b| b.is_ascii_digit()) => {
                let span = self.bump().span;
                s.parse::<u64>()
                    .map_err(|_| self.error_at(format!("integer `{s}` too large"), span, &[]))
            }
            _ => Err(self.unexpected(&["natural number"])),
        }
    }

    fn nat_or_inf(&mut self) -> Result<Bound, ParseError> {
        if self.is_ident("inf") {
            self.bump();
            Ok(Bound::Infinite)
        } else {
            Ok(Bound::Finite(self.nat()?))
        }
    }

    /// `[lo, hi]` with natural `lo` and natural or `inf` `hi`; returns the span too.
    fn nat_interval(&mut self) -> Result<(u64, Bound, SourceSpan), ParseError> {
        let open = self.expect(Tok::LBracket)?.span;
        let lo = self.nat()?;
        self.expect(Tok::Comma)?;
        let hi = self.nat_or_inf()?;
        let close = self.expect(Tok::RBracket)?.span;
        let span = span_at(self.src, open.start, close.end);
        if !hi.admits(lo) {
            return Err(self.error_at(format!("reversed interval [{lo},{hi}]"), span, &[]));
        }
        Ok((lo, hi, span))
    }

    fn time_interval(&mut self) -> Result<TimeInterval, ParseError> {
        let (lo, hi, _) = self.nat_interval()?;
        Ok(TimeInterval::new(lo, hi).expect("checked non-empty"))
    }

    fn count_set(&mut self) -> Result<CountSet, ParseError> {
        if *self.peek() == Tok::LBracket && *self.peek_at(1) == Tok::RBracket {
            self.bump();
            self.bump();
            return Ok(CountSet::empty());
        }
        let mut parts = vec![];
        loop {
            let (lo, hi, _) = self.nat_interval()?;
            parts.push((lo, hi));
            if self.is_ident("u") {
                self.bump();
            } else {
                break;
            }
        }
        Ok(CountSet::from_intervals(parts).expect("checked non-empty"))
    }

    fn weight_bound(&mut self) -> Result<f64, ParseError> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let v = match self.peek().clone() {
            Tok::Ident(s) if s == "inf" => {
                self.bump();
                f64::INFINITY
            }
            Tok::Num(s) => {
                let span = self.bump().span;
                self.real(&s, span)?
            }
            _ => return Err(self.unexpected(&["number", "`inf`", "`-inf`"])),
        };
        Ok(if neg { -v } else { v })
    }

    fn weight_interval(&mut self) -> Result<WeightInterval, ParseError> {
        let open = self.expect(Tok::LBracket)?.span;
        let lo = self.weight_bound()?;
        self.expect(Tok::Comma)?;
        let hi = self.weight_bound()?;
        let close = self.expect(Tok::RBracket)?.span;
        WeightInterval::new(lo, hi).map_err(|_| {
            self.error_at(format!("reversed interval [{lo},{hi}]"), span_at(self.src, open.start, close.end), &[])
        })
    }

    fn graph_op(&mut self, dir: Direction) -> Result<LocalFormula, ParseError> {
        self.bump();
        let mut quant = Quantifier::Exists;
        if *self.peek() == Tok::Lt {
            self.bump();
            quant = if self.is_ident("exists") {
                Quantifier::Exists
            } else if self.is_ident("forall") {
                Quantifier::Forall
            } else {
                return Err(self.unexpected(&["`exists`", "`forall`"]));
            };
            self.bump();
            self.expect(Tok::Gt)?;
        }
        self.expect(Tok::LBrace)?;
        let mut graphs = vec![];
        loop {
            match self.peek().clone() {
                Tok::Ident(s) => {
                    self.bump();
                    graphs.push(s);
                }
                _ => return Err(self.unexpected(&["graph tag"])),
            }
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::RBrace)?;
        self.expect_ident("E")?;
        let count = self.count_set()?;
        let weight = if self.is_ident("W") {
            self.bump();
            self.weight_interval()?
        } else {
            WeightInterval::ALL
        };
        let child = self.unary::<Local>()?;
        Ok(LocalFormula::Graph(GraphOp { dir, quant, graphs, count, weight, child: Box::new(child) }))
    }

    fn bind(&mut self) -> Result<GlobalFormula, ParseError> {
        self.expect(Tok::At)?;
        let agent = self.nat()? as usize;
        self.expect(Tok::Dot)?;
        self.expect(Tok::LParen)?;
        let f = self.formula::<Local>()?;
        self.expect(Tok::RParen)?;
        Ok(GlobalFormula::Bind(agent, f))
    }

    fn agent_quantifier(&mut self, forall: bool) -> Result<GlobalFormula, ParseError> {
        self.bump();
        self.expect(Tok::LBrace)?;
        let first_span = self.span();
        let first = self.nat()? as usize;
        let mut agents = vec![first];
        if *self.peek() == Tok::DotDot {
            self.bump();
            let last = self.nat()? as usize;
            if last < first {
                return Err(self.error_at(format!("reversed agent range {first}..{last}"), first_span, &[]));
            }
            agents = (first..=last).collect();
        } else {
            while *self.peek() == Tok::Comma {
                self.bump();
                agents.push(self.nat()? as usize);
            }
        }
        self.expect(Tok::RBrace)?;
        agents.sort_unstable();
        agents.dedup();
        self.expect(Tok::LParen)?;
        let f = self.formula::<Local>()?;
        self.expect(Tok::RParen)?;
        Ok(if forall { GlobalFormula::ForAll(agents, f) } else { GlobalFormula::Exists(agents, f) })
    }
}

fn sub<V: Clone>(x: &Expr<V>, y: &Expr<V>) -> Expr<V> {
    Expr::Sub(Box::new(x.clone()), Box::new(y.clone()))
}

#[cfg(test)]
mod tests;
