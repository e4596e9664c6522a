use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::formula::{LocalExpr, GlobalExpr};
use crate::random::{random_global, random_local, FormulaConfig};

fn x(k: usize) -> LocalExpr {
    LocalExpr::x(k)
}

fn c(v: f64) -> LocalExpr {
    Expr::Const(v)
}

fn ge(a: LocalExpr, b: LocalExpr) -> LocalFormula {
    LocalFormula::atom(a.sub(b))
}

#[test]
fn parses_bike_property() {
    let f = parse_local("G[0,24]([x[0] < 5] -> Out{mt} E[5,inf] W[0,8] [x[0] >= 8])").unwrap();
    let want = LocalFormula::always(
        TimeInterval::bounded(0, 24).unwrap(),
        LocalFormula::implies(
            LocalFormula::not(ge(x(0), c(5.0))),
            LocalFormula::graph(Direction::Out, "mt", CountSet::at_least(5), WeightInterval::new(0.0, 8.0).unwrap(), ge(x(0), c(8.0))),
        ),
    );
    assert_eq!(f, want);
}

#[test]
fn simple_forms() {
    assert_eq!(parse_local("true").unwrap(), LocalFormula::True);
    assert_eq!(parse_local("false").unwrap(), LocalFormula::falsum());
    let f = parse_local("In<forall>{s,c} E[1,3] true").unwrap();
    assert_eq!(
        f,
        LocalFormula::Graph(GraphOp {
            dir: Direction::In,
            quant: Quantifier::Forall,
            graphs: vec!["s".into(), "c".into()],
            count: CountSet::single(1, Bound::Finite(3)).unwrap(),
            weight: WeightInterval::ALL,
            child: Box::new(LocalFormula::True),
        })
    );
}

#[test]
fn comparisons_desugar_to_predicates() {
    assert_eq!(parse_local("[x[0] >= 0]").unwrap(), LocalFormula::atom(x(0)));
    assert_eq!(parse_local("[x[0] <= 3]").unwrap(), ge(c(3.0), x(0)));
    assert_eq!(parse_local("[x[0] > 3]").unwrap(), LocalFormula::not(ge(c(3.0), x(0))));
    assert_eq!(
        parse_local("[x[0] == x[1]]").unwrap(),
        LocalFormula::and(ge(x(0), x(1)), ge(x(1), x(0)))
    );
    assert_eq!(
        parse_local("[x[0] != 1]").unwrap(),
        LocalFormula::not(LocalFormula::and(ge(x(0), c(1.0)), ge(c(1.0), x(0))))
    );
    assert_eq!(parse_local("[x[0] >= -2.5]").unwrap(), ge(x(0), c(-2.5)));
}

#[test]
fn precedence() {
    let a = || ge(x(0), c(1.0));
    let b = || ge(x(1), c(1.0));
    let cc = || ge(x(2), c(1.0));
    let src = "[x[0] >= 1] & [x[1] >= 1] | [x[2] >= 1]";
    assert_eq!(parse_local(src).unwrap(), LocalFormula::or(LocalFormula::and(a(), b()), cc()));
    let src = "![x[0] >= 1] & [x[1] >= 1]";
    assert_eq!(parse_local(src).unwrap(), LocalFormula::and(LocalFormula::not(a()), b()));
    let src = "[x[0] >= 1] -> [x[1] >= 1] -> [x[2] >= 1]";
    assert_eq!(parse_local(src).unwrap(), LocalFormula::implies(a(), LocalFormula::implies(b(), cc())));
    let i = TimeInterval::bounded(1, 2).unwrap();
    let src = "[x[0] >= 1] & [x[1] >= 1] U[1,2] [x[2] >= 1]";
    assert_eq!(parse_local(src).unwrap(), LocalFormula::until(i, LocalFormula::and(a(), b()), cc()));
    let src = "[x[0] >= 1 + 2 * x[1]]";
    let rhs = Expr::Add(Box::new(c(1.0)), Box::new(Expr::Mul(Box::new(c(2.0)), Box::new(x(1)))));
    assert_eq!(parse_local(src).unwrap(), ge(x(0), rhs));
}

#[test]
fn global_forms() {
    assert_eq!(parse_global("@3.(true)").unwrap(), GlobalFormula::Bind(3, LocalFormula::True));
    let f = parse_global("FA{1..30}(G[0,24](Out{d} E[3,inf] W[0,1] [x[0] >= 8]))").unwrap();
    match f {
        GlobalFormula::ForAll(v, _) => assert_eq!(v, (1..=30).collect::<Vec<_>>()),
        other => panic!("{other:?}"),
    }
    let src = "G[0,2]([1 - sqrt((s[1][0]-s[2][0])*(s[1][0]-s[2][0]) + (s[1][1]-s[2][1])*(s[1][1]-s[2][1])) >= 0] -> @2.(In{si,ci} E[1,1] true))";
    match parse_global(src).unwrap() {
        GlobalFormula::Always(_, body) => match *body {
            GlobalFormula::Implies(lhs, rhs) => {
                assert!(matches!(*lhs, GlobalFormula::Atom(_)));
                assert!(matches!(*rhs, GlobalFormula::Bind(2, _)));
            }
            other => panic!("{other:?}"),
        },
        other => panic!("{other:?}"),
    }
    assert_eq!(
        parse_global("EX{4,2,2}(true)").unwrap(),
        GlobalFormula::Exists(vec![2, 4], LocalFormula::True)
    );
    let atom = parse_global("[s[1][0] >= s[2][0]]").unwrap();
    assert_eq!(atom, GlobalFormula::Atom(GlobalExpr::s(1, 0).sub(GlobalExpr::s(2, 0))));
}

#[test]
fn layers_do_not_mix() {
    assert!(parse_local("[s[1][0] >= 0]").is_err());
    assert!(parse_global("[x[0] >= 0]").is_err());
    assert!(parse_global("In{c} E[1,inf] true").is_err());
    assert!(parse_local("@1.(true)").is_err());
}

#[test]
fn comments_are_skipped() {
    let src = "# bike property\nG[0,24] # every hour\n  [x[0] >= 1]\n";
    assert!(parse_local(src).is_ok());
}

#[test]
fn count_set_unions_and_empty() {
    let f = parse_local("In{g} E[0,0] u [4,inf] true").unwrap();
    let want = CountSet::from_intervals([(0, Bound::Finite(0)), (4, Bound::Infinite)]).unwrap();
    assert!(matches!(f, LocalFormula::Graph(ref op) if op.count == want));
    let f = parse_local("In{g} E[] true").unwrap();
    assert!(matches!(f, LocalFormula::Graph(ref op) if op.count.is_empty()));
}

#[test]
fn errors_carry_spans() {
    let src = "G[0,24";
    let e = parse_local(src).unwrap_err();
    assert!(e.span.end <= src.len());
    assert_eq!(e.span.column, 7);
    assert!(e.expected.iter().any(|s| s.contains(',') || s.contains(']')));

    let e = parse_local("").unwrap_err();
    assert_eq!(e.span.start, 0);

    let e = parse_local("F[5,2] true").unwrap_err();
    assert!(e.message.contains("reversed"));
    assert_eq!((e.span.start, e.span.end), (1, 6));

    let e = parse_local("In{g} E[1,inf] W[3,1] true").unwrap_err();
    assert!(e.message.contains("reversed"));

    let e = parse_local("true\n  & [x[0] >= ]").unwrap_err();
    assert_eq!(e.span.line, 2);
    let rendered = e.render("true\n  & [x[0] >= ]");
    assert!(rendered.contains("^"), "{rendered}");

    assert!(parse_local("true true").is_err());
}

#[test]
fn defaults_are_elided_when_printing() {
    let f = parse_local("In<exists>{c} E[1,inf] W[-inf,inf] true").unwrap();
    assert_eq!(f.to_string(), "In{c} E[1,inf] true");
    let f = parse_local("Out<forall>{a,b} E[2,2] W[0.5,inf] false").unwrap();
    assert_eq!(f.to_string(), "Out<forall>{a,b} E[2,2] W[0.5,inf] false");
}

#[test]
fn printing_reads_naturally() {
    let src = "G[0,24]([x[0] < 5] -> Out{mt} E[5,inf] W[0,8] [x[0] >= 8])";
    assert_eq!(parse_local(src).unwrap().to_string(), src);
    let src = "FA{1..30}(G[0,24] Out{d} E[3,inf] W[0,1] [x[0] >= 8])";
    assert_eq!(parse_global(src).unwrap().to_string(), src);
}

fn check_round_trip(seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = FormulaConfig::default();
    let f = random_local(&mut rng, &cfg, 4);
    let text = f.to_string();
    assert_eq!(parse_local(&text).unwrap_or_else(|e| panic!("{}", e.render(&text))), f, "{text}");
    let g = random_global(&mut rng, &cfg, 6, 3);
    let text = g.to_string();
    assert_eq!(parse_global(&text).unwrap_or_else(|e| panic!("{}", e.render(&text))), g, "{text}");
}

#[test]
fn round_trip_thousand_formulas() {
    for seed in 0..1000 {
        check_round_trip(seed);
    }
}

fn unbalanced(s: &str) -> bool {
    let mut depth = [0i32; 3];
    for ch in s.chars() {
        match ch {
            '(' => depth[0] += 1,
            ')' => depth[0] -= 1,
            '[' => depth[1] += 1,
            ']' => depth[1] -= 1,
            '{' => depth[2] += 1,
            '}' => depth[2] -= 1,
            _ => {}
        }
    }
    depth.iter().any(|&d| d != 0)
}

proptest! {
    #[test]
    fn round_trip(seed in any::<u64>()) {
        check_round_trip(seed);
    }

    #[test]
    fn truncation_never_parses_silently(seed in any::<u64>(), frac in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let text = random_local(&mut rng, &FormulaConfig::default(), 3).to_string();
        let mut cut = ((text.len() as f64) * frac) as usize;
        while !text.is_char_boundary(cut) {
            cut -= 1;
        }
        let prefix = &text[..cut];
        match parse_local(prefix) {
            Err(e) => prop_assert!(e.span.start <= e.span.end && e.span.end <= prefix.len()),
            Ok(f) => {
                // a prefix that parses must be a complete formula on its own
                prop_assert!(!unbalanced(prefix));
                prop_assert_eq!(parse_local(&f.to_string()).unwrap(), f);
            }
        }
        if unbalanced(prefix) {
            prop_assert!(parse_local(prefix).is_err());
        }
    }
}
