use num_bigint::BigInt;
use preperiodic::Rat;
use preperiodic_cli::expr::{parse_map, MapExpr, Poly};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=9).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rat(), 0..=max_len).prop_map(Poly::new)
}

/// Expression text drawn from the grammar, together with its value.
fn expr_text() -> impl Strategy<Value = (String, Poly)> {
    let leaf = prop_oneof![
        Just(("x".to_string(), Poly::x())),
        (0u32..50).prop_map(|n| (n.to_string(), Poly::constant(Rat::from_integer(n.into())))),
        (0u32..50, 1u32..9).prop_map(|(n, d)| (
            format!("{n}/{d}"),
            Poly::constant(Rat::new(n.into(), d.into()))
        )),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|((a, p), (b, q))| (format!("{a} + {b}"), &p + &q)),
            (inner.clone(), inner.clone())
                .prop_map(|((a, p), (b, q))| (format!("({a}) - ({b})"), &p - &q)),
            (inner.clone(), inner.clone())
                .prop_map(|((a, p), (b, q))| (format!("({a})*({b})"), &p * &q)),
            (inner.clone(), 0u32..4).prop_map(|((a, p), e)| (format!("({a})^{e}"), p.pow(e))),
            inner.prop_map(|(a, p)| (format!("(−({a}))"), -&p)),
        ]
    })
}

proptest! {
    #[test]
    fn printed_pairs_reparse_to_themselves(num in poly(5), den in poly(5)) {
        prop_assume!(!den.is_zero());
        let e = MapExpr { source: String::new(), num, den };
        let again = parse_map(&e.to_string()).unwrap();
        prop_assert_eq!(&again.num, &e.num);
        prop_assert_eq!(&again.den, &e.den);
    }

    #[test]
    fn parse_print_parse_is_a_fixed_point((num, nv) in expr_text(), (den, dv) in expr_text()) {
        prop_assume!(!dv.is_zero());
        let text = format!("({num})/({den})");
        let first = parse_map(&text).unwrap();
        prop_assert_eq!(&first.num, &nv);
        prop_assert_eq!(&first.den, &dv);
        let second = parse_map(&first.to_string()).unwrap();
        prop_assert_eq!(&second.num, &first.num);
        prop_assert_eq!(&second.den, &first.den);
        prop_assert_eq!(second.to_string(), first.to_string());
    }

    #[test]
    fn sums_after_the_slash_are_rejected((a, _) in expr_text(), (b, _) in expr_text()) {
        let text = format!("({a})/x + {b}");
        let err = parse_map(&text).unwrap_err();
        prop_assert_eq!(err.pos, a.chars().count() + 5);
    }

    #[test]
    fn garbage_never_panics(s in "[-x0-9+*^/() −a.]{0,24}") {
        let _ = parse_map(&s);
    }
}

#[test]
fn worked_examples() {
    let e = parse_map("(x−1)*(x−2)/x^2").unwrap();
    assert_eq!((e.num.degree(), e.den.degree()), (Some(2), Some(2)));
    let e = parse_map("x^2+1").unwrap();
    assert!(e.den_is_one());
    assert!(parse_map("1/x + x^2").is_err());
    assert!(parse_map("(x^3+1)/x").is_ok());
    assert!(parse_map("1/0").is_err());
}

#[test]
fn error_messages_name_the_column() {
    let e = parse_map("x^2 ? 1").unwrap_err();
    assert_eq!(e.to_string(), "syntax error at column 5: unexpected character '?'");
}
