use num_bigint::BigInt;
use proptest::prelude::*;
use theta_core::seq::{phi, psi};
use theta_core::Series;

fn series() -> impl Strategy<Value = Series> {
    (prop::collection::vec(-50i64..50, 1..24), 1usize..30).prop_map(|(c, p)| {
        let p = p.min(c.len());
        Series::from_ints(c).unwrap().truncate(p).unwrap()
    })
}

// schoolbook product on plain integers, the reference for `mul`
fn naive_mul(a: &[i64], b: &[i64], p: usize) -> Vec<i64> {
    let mut out = vec![0i64; p];
    for (i, x) in a.iter().enumerate().take(p) {
        for (j, y) in b.iter().enumerate().take(p - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn ints(s: &Series) -> Vec<i64> {
    s.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect()
}

fn same(a: &Series, b: &Series) -> bool {
    a.precision() == b.precision() && a.coeffs() == b.coeffs()
}

proptest! {
    #[test]
    fn addition_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        prop_assert!(same(&a.add(&b), &b.add(&a)));
        prop_assert!(same(&a.add(&b).add(&c), &a.add(&b.add(&c))));
        prop_assert_eq!(a.add(&b).precision(), a.precision().min(b.precision()));
    }

    #[test]
    fn multiplication_is_a_ring_product(a in series(), b in series(), c in series()) {
        prop_assert!(same(&a.mul(&b), &b.mul(&a)));
        prop_assert!(same(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
        prop_assert!(same(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c))));
        let one = Series::one(a.precision());
        prop_assert!(same(&a.mul(&one), &a));
        prop_assert!(a.sub(&a).coeffs().iter().all(|x| *x == BigInt::from(0)));
    }

    #[test]
    fn product_matches_schoolbook(a in series(), b in series()) {
        let p = a.precision().min(b.precision());
        prop_assert_eq!(ints(&a.mul(&b)), naive_mul(&ints(&a), &ints(&b), p));
    }

    #[test]
    fn large_coefficients_stay_exact(a in series(), k in 1u32..4) {
        // push entries past i64 and check against the unscaled product
        let big = BigInt::from(10).pow(20 * k);
        let scaled = a.scale(&big).mul(&a.scale(&big));
        let expected = a.mul(&a).scale(&(&big * &big));
        prop_assert!(same(&scaled, &expected));
    }

    #[test]
    fn dissection_round_trip(a in series(), m in 1usize..5) {
        // sum over r of q^r * (part r)(q^m) rebuilds the series
        let p = a.precision();
        let mut rebuilt = Series::zero(p);
        for r in 0..m.min(p) {
            let part = a.extract_progression(m, r).unwrap();
            rebuilt = rebuilt.add(&part.substitute_power(m).unwrap().monomial_scale(&BigInt::from(1), r));
        }
        let common = rebuilt.precision();
        prop_assert!(common >= p.saturating_sub(m - 1));
        prop_assert!(a.equal_to_order(&rebuilt, common).unwrap().is_equal());
    }

    #[test]
    fn substitution_composes(a in series(), j in 1usize..4, k in 1usize..4) {
        let lhs = a.substitute_power(j).unwrap().substitute_power(k).unwrap();
        let rhs = a.substitute_power(j * k).unwrap();
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn substitution_is_multiplicative(a in series(), b in series(), k in 1usize..4) {
        let lhs = a.mul(&b).substitute_power(k).unwrap();
        let rhs = a.substitute_power(k).unwrap().mul(&b.substitute_power(k).unwrap());
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn shift_then_extract(a in series(), s in 0usize..6) {
        let shifted = a.monomial_scale(&BigInt::from(1), s);
        prop_assert_eq!(shifted.precision(), a.precision() + s);
        prop_assert!(same(&shifted.shift_down(s).unwrap(), &a));
    }
}

#[test]
fn theta_squares_against_counting() {
    // coefficient of q^n in phi^2 counts x^2 + y^2 = n over Z^2
    let p = 400;
    let sq = phi(p).mul(&phi(p));
    for n in 0..p as i64 {
        let mut count = 0;
        for x in -20i64..=20 {
            for y in -20i64..=20 {
                if x * x + y * y == n {
                    count += 1;
                }
            }
        }
        assert_eq!(sq.coeffs()[n as usize], BigInt::from(count), "n={n}");
    }
    // psi^2 counts ordered pairs of triangular numbers
    let tri: Vec<i64> = (0..30).map(|k| k * (k + 1) / 2).collect();
    let ps = psi(p).mul(&psi(p));
    for n in 0..p as i64 {
        let count = tri.iter().flat_map(|x| tri.iter().map(move |y| x + y)).filter(|&s| s == n).count();
        assert_eq!(ps.coeffs()[n as usize], BigInt::from(count), "n={n}");
    }
}
