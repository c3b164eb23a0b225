use proptest::prelude::*;
use ssd_core::constructions::h_count;
use ssd_core::design::Design;
use ssd_core::gf::{is_irreducible, prime_power, Field};
use ssd_core::poly_labels::{
    h_set, parse_label, q1, q1_star, qh, qh_star, ColumnLabel, LinearForm,
};

const ORDERS: [u32; 11] = [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27];

fn field_and_elems() -> impl Strategy<Value = (u32, u16, u16, u16)> {
    prop::sample::select(ORDERS.to_vec())
        .prop_flat_map(|s| (Just(s), 0..s as u16, 0..s as u16, 0..s as u16))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn field_axioms((s, x, y, z) in field_and_elems()) {
        let f = Field::new(s).unwrap();
        prop_assert_eq!(f.add(x, y), f.add(y, x));
        prop_assert_eq!(f.mul(x, y), f.mul(y, x));
        prop_assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.add(x, f.neg(x)), 0);
        prop_assert_eq!(f.sub(f.add(x, y), y), x);
        if x != 0 {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
            prop_assert_eq!(f.pow(x, u64::from(s) - 1), 1);
        }
    }

    #[test]
    fn trace_is_additive_and_frobenius_invariant((s, x, y, _z) in field_and_elems()) {
        let f = Field::new(s).unwrap();
        let p = f.characteristic();
        prop_assert_eq!(f.trace(f.add(x, y)), (f.trace(x) + f.trace(y)) % p as u16);
        prop_assert_eq!(f.trace(f.pow(x, u64::from(p))), f.trace(x));
        prop_assert!(f.trace(x) < p as u16);
    }
}

#[test]
fn orders_and_moduli() {
    assert_eq!(prime_power(27), Some((3, 3)));
    assert_eq!(prime_power(12), None);
    assert!(Field::new(6).is_err());
    assert_eq!(Field::new(9).unwrap().modulus(), &[2, 2, 1]);
    assert!(is_irreducible(&[1, 0, 1], 3));
    assert!(!is_irreducible(&[1, 0, 1], 2));
    assert!(Field::with_modulus(9, &[2, 0, 1]).is_err());
    for s in ORDERS {
        let f = Field::new(s).unwrap();
        assert_eq!(f.elements().count(), s as usize);
        let mult_group: Vec<u16> = f.nonzero().collect();
        assert!(mult_group.iter().all(|&x| f.inv(x).is_ok()));
    }
}

#[test]
fn h_set_is_canonical_and_sized() {
    for (s, n) in [(2u32, 3usize), (3, 2), (3, 3), (4, 2), (5, 2), (8, 2)] {
        let f = Field::new(s).unwrap();
        let h = h_set(&f, n);
        assert_eq!(h.len(), h_count(s, n));
        assert!(h.iter().all(LinearForm::is_canonical));
        for (i, a) in h.iter().enumerate() {
            for b in &h[i + 1..] {
                assert!(!a.is_dependent(&f, b), "{a} ~ {b}");
            }
        }
        let labels: Vec<ColumnLabel> = h.into_iter().map(ColumnLabel::Linear).collect();
        assert!(Design::realize(&f, n, &labels).unwrap().is_oa(2));
    }
}

#[test]
fn quadratic_families_are_strength_two() {
    for (s, n) in [
        (3u32, 2usize),
        (3, 3),
        (4, 2),
        (5, 2),
        (7, 2),
        (8, 2),
        (9, 2),
    ] {
        let f = Field::new(s).unwrap();
        let q = q1(&f, n).unwrap();
        assert_eq!(q.len(), h_count(s, n));
        assert!(
            Design::realize(&f, n, &q).unwrap().is_oa(2),
            "Q1 s={s} n={n}"
        );
        assert_eq!(q1_star(&f, n).unwrap().len(), h_count(s, n) - 1);
        for h in h_set(&f, n) {
            let qh_all = qh(&f, &h, n).unwrap();
            assert!(
                Design::realize(&f, n, &qh_all).unwrap().is_oa(2),
                "Q_h s={s} h={h}"
            );
            let star = qh_star(&f, &h, n).unwrap();
            assert_eq!(star.len(), qh_all.len() - 1);
        }
    }
}

#[test]
fn labels_round_trip_through_text() {
    let f = Field::new(5).unwrap();
    for label in q1(&f, 3).unwrap() {
        let text = label.to_string();
        assert_eq!(parse_label(&text, 5, 3).unwrap(), label, "{text}");
    }
    assert!(parse_label("X1^3", 5, 3).is_err());
}
