use flexkin_core::ratpoly::{format_rational, parse_rational, rat, upoly_real_roots, Rational, UPoly};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn poly(max_deg: usize) -> impl Strategy<Value = UPoly> {
    prop::collection::vec(rational(), 0..=max_deg + 1).prop_map(UPoly::new)
}

proptest! {
    #[test]
    fn rationals_round_trip_through_text(r in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn division_identity(a in poly(6), b in poly(3)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn gcd_divides_both(a in poly(4), b in poly(4), c in poly(2)) {
        prop_assume!(!c.is_zero() && !(a.is_zero() && b.is_zero()));
        let (ac, bc) = (&a * &c, &b * &c);
        let g = UPoly::gcd(&ac, &bc).unwrap();
        prop_assert!(g.divides(&ac) && g.divides(&bc));
        prop_assert!(c.divides(&g));
    }

    #[test]
    fn product_evaluates_pointwise(a in poly(5), b in poly(5), x in rational()) {
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
    }

    #[test]
    fn planted_roots_are_found(roots in prop::collection::btree_set(-20i64..=20, 1..5)) {
        let p = roots.iter().fold(UPoly::one(), |acc, &r| &acc * &UPoly::from_ints(&[-r, 1]));
        let found = upoly_real_roots(&p).unwrap();
        prop_assert_eq!(found.len(), roots.len());
        for (z, r) in found.iter().zip(&roots) {
            prop_assert_eq!(z.as_rational().cloned(), Some(rat(*r, 1)));
        }
    }
}
