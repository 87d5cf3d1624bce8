use banach_reduce_cli::expr::{parse_expr, Point};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        (0u32..1000).prop_map(|n| n.to_string()),
        (0u32..1000, 1u32..100).prop_map(|(a, b)| format!("{a}.{b}")),
        (1u32..10, -5i32..5).prop_map(|(a, e)| format!("{a}e{e}")),
        prop::sample::select(vec!["i", "pi", "e", "x", "y", "z", "|z|", "theta"])
            .prop_map(str::to_string),
    ]
}

fn source() -> impl Strategy<Value = String> {
    leaf().prop_recursive(5, 48, 2, |inner| {
        let func = prop::sample::select(vec!["abs", "conj", "exp", "log", "re", "im"]);
        let op = prop::sample::select(vec!["+", "-", "*", "/", " + ", " - ", " * "]);
        prop_oneof![
            (inner.clone(), op, inner.clone()).prop_map(|(a, o, b)| format!("{a}{o}{b}")),
            inner.clone().prop_map(|a| format!("-{a}")),
            inner.clone().prop_map(|a| format!("({a})")),
            (func, inner.clone()).prop_map(|(f, a)| format!("{f}({a})")),
            (inner, 0u32..6, any::<bool>()).prop_map(|(a, k, paren)| if paren || a.contains('^') {
                format!("({a})^{k}")
            } else {
                format!("{a}^{k}")
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn printed_expressions_reparse_to_the_same_tree(src in source()) {
        let ast = parse_expr(&src).unwrap();
        let printed = ast.to_string();
        let again = parse_expr(&printed).unwrap();
        prop_assert_eq!(&again, &ast, "{} printed as {}", src, printed);
    }

    #[test]
    fn evaluation_is_finite_or_a_domain_error(src in source(), x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let ast = parse_expr(&src).unwrap();
        if let Ok(v) = ast.eval(&Point::planar(x, y)) {
            prop_assert!(v.re.is_finite() && v.im.is_finite());
        }
    }
}

#[test]
fn abs_minus_constant_parses_to_a_subtraction() {
    assert_eq!(
        parse_expr("abs(z)-1.5").unwrap().to_string(),
        "(abs(z) - 1.5)"
    );
}

#[test]
fn dangling_operator_reports_its_offset() {
    assert_eq!(parse_expr("1/+(").unwrap_err().offset, 2);
}
