use num_bigint::BigInt;
use proptest::prelude::*;
use steadykernel_core::symexpr::Bindings;
use steadykernel_core::{Rational, RationalExpr, Symbol};

const NAMES: [&str; 3] = ["a", "b", "c"];

fn leaf() -> impl Strategy<Value = RationalExpr> {
    prop_oneof![
        (-3i64..=3).prop_map(RationalExpr::from_int),
        proptest::sample::select(&NAMES[..]).prop_map(RationalExpr::symbol),
    ]
}

/// Random expression trees; division only by nonzero divisors.
fn expr() -> impl Strategy<Value = RationalExpr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        (inner.clone(), inner, 0..4u8).prop_map(|(x, y, op)| match op {
            0 => x + y,
            1 => x - y,
            2 => x * y,
            _ if y.is_zero() => x,
            _ => x / y,
        })
    })
}

fn bindings() -> impl Strategy<Value = Bindings> {
    proptest::collection::vec((-7i64..=7, 1i64..=5), NAMES.len()).prop_map(|vals| {
        NAMES
            .iter()
            .zip(vals)
            .map(|(n, (p, q))| (Symbol::named(n), Rational::new(BigInt::from(p), BigInt::from(q))))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws(x in expr(), y in expr(), z in expr()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x - &x, RationalExpr::zero());
        prop_assert_eq!(&x + &RationalExpr::zero(), x.clone());
        prop_assert_eq!(&x * &RationalExpr::one(), x.clone());
        if !x.is_zero() {
            prop_assert!((&x / &x).is_one());
            prop_assert_eq!(x.recip().unwrap().recip().unwrap(), x);
        }
    }

    #[test]
    fn canonical_form_is_stable(x in expr()) {
        let rebuilt = RationalExpr::new(x.numerator().clone(), x.denominator().clone()).unwrap();
        prop_assert_eq!(&rebuilt, &x);
        prop_assert_eq!(rebuilt.to_string(), x.to_string());
        prop_assert_eq!(x.clone().to_string(), x.to_string());
    }

    #[test]
    fn evaluation_is_a_homomorphism(x in expr(), y in expr(), b in bindings()) {
        if let (Ok(vx), Ok(vy)) = (x.eval(&b), y.eval(&b)) {
            prop_assert_eq!((&x + &y).eval(&b).unwrap(), &vx + &vy);
            prop_assert_eq!((&x - &y).eval(&b).unwrap(), &vx - &vy);
            prop_assert_eq!((&x * &y).eval(&b).unwrap(), &vx * &vy);
            if vy != Rational::from_integer(BigInt::from(0)) {
                prop_assert_eq!((&x / &y).eval(&b).unwrap(), &vx / &vy);
            }
        }
    }

    #[test]
    fn substitution_commutes_with_evaluation(x in expr(), b in bindings()) {
        let map = b.iter().map(|(k, v)| (k.clone(), RationalExpr::from_rational(v.clone()))).collect();
        match (x.substitute(&map), x.eval(&b)) {
            (Ok(sub), Ok(v)) => prop_assert_eq!(sub.as_constant(), Some(v)),
            (Err(_), Err(_)) => {}
            (sub, v) => prop_assert!(false, "substitute {:?} vs eval {:?}", sub, v),
        }
    }
}
