use num_bigint::BigInt;
use proptest::prelude::*;
use theta_core::qdsl::{eval, parse, Factor, Term, ThetaExpr};
use theta_core::seq::{phi, psi, ThetaFunc};
use theta_core::Series;

fn factor() -> impl Strategy<Value = Factor> {
    (prop_oneof![Just(ThetaFunc::Phi), Just(ThetaFunc::Psi)], 1u64..7, 1u32..4)
        .prop_map(|(func, arg, power)| Factor { func, arg, power })
}

fn term() -> impl Strategy<Value = Term> {
    (1i64..30, any::<bool>(), 0u64..6, prop::collection::vec(factor(), 0..4)).prop_map(|(m, neg, qexponent, factors)| Term {
        coefficient: if neg { -m } else { m },
        qexponent,
        factors,
    })
}

fn expr() -> impl Strategy<Value = ThetaExpr> {
    prop::collection::vec(term(), 1..4).prop_map(|terms| ThetaExpr { terms })
}

// Reference evaluation from the theta leaves and plain series arithmetic.
fn reference(e: &ThetaExpr, p: usize) -> Series {
    let mut total = Series::zero(p);
    for t in &e.terms {
        let mut prod = Series::one(p);
        for f in &t.factors {
            let leaf = match f.func {
                ThetaFunc::Phi => phi(p),
                ThetaFunc::Psi => psi(p),
            }
            .substitute_power(f.arg as usize)
            .unwrap()
            .truncate(p)
            .unwrap();
            for _ in 0..f.power {
                prod = prod.mul(&leaf);
            }
        }
        let shifted = prod.monomial_scale(&BigInt::from(t.coefficient), t.qexponent as usize);
        total = total.add(&shifted.truncate(p).unwrap());
    }
    total
}

fn co(s: Series) -> Vec<BigInt> {
    s.into_coeffs()
}

proptest! {
    #[test]
    fn print_then_parse(e in expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse(&text).unwrap(), e, "{}", text);
    }

    #[test]
    fn evaluation_matches_reference(e in expr(), p in 1usize..80) {
        let got = eval(&e, p).unwrap();
        prop_assert_eq!(got.precision(), p);
        prop_assert_eq!(co(got), co(reference(&e, p)));
    }

    #[test]
    fn evaluation_is_additive(a in expr(), b in expr(), p in 1usize..60) {
        let joined = ThetaExpr { terms: a.terms.iter().chain(&b.terms).cloned().collect() };
        let sum = eval(&a, p).unwrap().add(&eval(&b, p).unwrap());
        prop_assert_eq!(co(eval(&joined, p).unwrap()), co(sum));
    }

    #[test]
    fn evaluation_is_multiplicative(a in term(), b in term(), p in 1usize..60) {
        let product = Term {
            coefficient: a.coefficient * b.coefficient,
            qexponent: a.qexponent + b.qexponent,
            factors: a.factors.iter().chain(&b.factors).cloned().collect(),
        };
        let one = |t: &Term| eval(&ThetaExpr { terms: vec![t.clone()] }, p).unwrap();
        prop_assert_eq!(co(one(&product)), co(one(&a).mul(&one(&b))));
    }

    #[test]
    fn longer_orders_extend_shorter_ones(e in expr(), p in 1usize..50, extra in 0usize..50) {
        let short = eval(&e, p).unwrap();
        let long = eval(&e, p + extra).unwrap();
        prop_assert_eq!(co(long.truncate(p).unwrap()), co(short));
    }
}

#[test]
fn grammar_edge_cases() {
    assert_eq!(parse("2q^4*psi(q^2)").unwrap().to_string(), "2q^4*psi(q^2)");
    assert_eq!(parse("q * phi(q)").unwrap().to_string(), "q*phi(q)");
    assert_eq!(parse("-1").unwrap().to_string(), "-1");
    for bad in ["", "phi", "phi(q", "phi(q)^", "2 +", "(phi(q) + 1)", "phi(x)", "phi(q^0)", "eta(q)"] {
        assert!(parse(bad).is_err(), "{bad:?} should not parse");
    }
}
