use std::sync::Arc;

use proptest::prelude::*;
use trinomial::mpoly::{Monomial, MultiPoly};
use trinomial::{ExtElem, FieldTower};

fn field() -> Arc<FieldTower> {
    Arc::new(FieldTower::new(3).unwrap())
}

fn poly(f: &Arc<FieldTower>, terms: Vec<([u8; 6], u64)>) -> MultiPoly {
    MultiPoly::from_terms(f, terms.into_iter().map(|(e, c)| (Monomial::new(e), f.unpack(c % f.order()))))
}

fn terms() -> impl Strategy<Value = Vec<([u8; 6], u64)>> {
    prop::collection::vec((prop::array::uniform6(0u8..3), any::<u64>()), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn characteristic_two(t in terms()) {
        let f = field();
        let p = poly(&f, t);
        prop_assert!((&p + &p).is_zero());
    }

    #[test]
    fn product_divides_back(a in terms(), b in terms()) {
        let f = field();
        let (a, b) = (poly(&f, a), poly(&f, b));
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(prod.exact_div(&b).unwrap(), a.clone());
        if !a.is_zero() {
            prop_assert_eq!(prod.degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
        }
    }

    #[test]
    fn twist_has_order_three(t in terms()) {
        let f = field();
        let p = poly(&f, t);
        prop_assert_eq!(p.psi_twist().psi_twist().psi_twist(), p);
    }

    #[test]
    fn evaluation_is_a_ring_map(a in terms(), b in terms(), pt in prop::array::uniform6(any::<u64>())) {
        let f = field();
        let (a, b) = (poly(&f, a), poly(&f, b));
        let pt: [ExtElem; 6] = pt.map(|x| f.unpack(x % f.order()));
        prop_assert_eq!((&a * &b).eval_at(&pt), f.mul(a.eval_at(&pt), b.eval_at(&pt)));
        prop_assert_eq!((&a + &b).eval_at(&pt), a.eval_at(&pt) + b.eval_at(&pt));
    }

    #[test]
    fn norm_is_multiplicative_and_in_base(x in any::<u64>(), y in any::<u64>()) {
        let f = field();
        let (x, y) = (f.unpack(x % f.order()), f.unpack(y % f.order()));
        prop_assert_eq!(f.norm(f.mul(x, y)), f.mul(f.norm(x), f.norm(y)));
        prop_assert!(f.in_base_field(f.norm(x)));
        prop_assert_eq!(f.frobenius(x, 3), x);
    }
}
