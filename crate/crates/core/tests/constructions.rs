use ssd_core::bounds::certify;
use ssd_core::constructions::{
    construct_thm4, construct_thm6, construct_thm8, construct_thm9, corollary2_check, h_count,
    Recipe, Theorem,
};
use ssd_core::criteria::{a2_overall, projected_a2, projected_a2_histogram};
use ssd_core::design::Design;
use ssd_core::gf::Field;
use ssd_core::poly_labels::{h_set, ColumnLabel, LinearForm};
use ssd_core::rational::{int, rat};

fn field(s: u32) -> Field {
    Field::new(s).unwrap()
}

fn count_value(d: &Design, v: &ssd_core::rational::Rational) -> usize {
    projected_a2_histogram(d).get(v).copied().unwrap_or(0)
}

#[test]
fn saturated_array_has_constant_coincidences() {
    for (s, n) in [(2u32, 3usize), (3, 2), (3, 3), (4, 2), (5, 2), (7, 2)] {
        let f = field(s);
        let labels: Vec<ColumnLabel> = h_set(&f, n).into_iter().map(ColumnLabel::Linear).collect();
        let d = Design::realize(&f, n, &labels).unwrap();
        let c = d.coincidences();
        let want = (d.runs() as u32 - s) / (s * (s - 1));
        assert!(c.off_diagonal().all(|x| x == want), "s={s} n={n}");
    }
}

#[test]
fn linear_plus_quadratic_counts() {
    for (s, n) in [
        (3u32, 2usize),
        (3, 3),
        (5, 2),
        (7, 2),
        (4, 2),
        (8, 2),
        (4, 3),
    ] {
        let d = construct_thm4(&field(s), n).unwrap();
        let (si, big_n) = (i64::from(s), si_pow(s, n));
        assert_eq!(d.num_columns(), 2 * h_count(s, n) - 1);
        assert_eq!(a2_overall(&d).unwrap(), int(big_n - si));
        if s % 2 == 1 {
            let pairs = (si * (big_n - si) / (si - 1)) as usize;
            assert_eq!(count_value(&d, &rat(si - 1, si)), pairs, "s={s} n={n}");
        } else {
            assert_eq!(
                count_value(&d, &int(1)),
                (big_n - si) as usize,
                "s={s} n={n}"
            );
        }
        assert!(certify(&d).unwrap().achieved_theorem1);
    }
}

fn si_pow(s: u32, n: usize) -> i64 {
    i64::from(s).pow(n as u32)
}

#[test]
fn juxtaposition_histogram_is_choice_independent() {
    let f = field(3);
    let x = |i| LinearForm::var(3, i);
    let a = construct_thm6(&f, 3, &[x(0), x(1)]).unwrap();
    let b = construct_thm6(&f, 3, &[x(0), x(2)]).unwrap();
    let c = construct_thm6(&f, 3, &[x(1), x(2)]).unwrap();
    assert_eq!(projected_a2_histogram(&a), projected_a2_histogram(&b));
    assert_eq!(projected_a2_histogram(&a), projected_a2_histogram(&c));
    assert_eq!(a2_overall(&a).unwrap(), int(26));
}

#[test]
fn four_level_pair_has_a_single_full_alias() {
    for n in [2usize, 3] {
        let f = field(4);
        let x = |i| LinearForm::var(n, i);
        let d = construct_thm6(&f, n, &[x(0), x(1)]).unwrap();
        let big_n = si_pow(4, n);
        assert_eq!(a2_overall(&d).unwrap(), int(big_n - 1));
        assert_eq!(count_value(&d, &int(3)), 1);
        assert_eq!(count_value(&d, &int(1)), (big_n - 4) as usize);
    }
}

#[test]
fn fractions_share_overall_a2() {
    for (s, n) in [(3u32, 3usize), (3, 4), (5, 2), (5, 3), (4, 3)] {
        let f = field(s);
        let si = i64::from(s);
        for k in 1..s as usize {
            let g: Vec<u16> = (0..k as u16).collect();
            let k = k as i64;
            let want = rat((si_pow(s, n) - si) * (si - k), 2 * k);
            let d8 = construct_thm8(&f, n, &LinearForm::var(n, 0), &g).unwrap();
            assert_eq!(a2_overall(&d8).unwrap(), want, "s={s} n={n} k={k}");
            let d9 = construct_thm9(&f, n, &g).unwrap();
            assert_eq!(a2_overall(&d9).unwrap(), want, "s={s} n={n} k={k}");
            assert!(certify(&d8).unwrap().coincidence_spread <= 1);
            assert!(certify(&d9).unwrap().coincidence_spread <= 1);
        }
    }
}

#[test]
fn all_h_two_variable_design() {
    for s in [3u32, 5, 7] {
        let r = corollary2_check(&field(s)).unwrap();
        assert_eq!(r.a2, r.closed_form);
        assert_eq!(r.a2, r.pair_sum_form);
        let m = r.design.num_columns();
        assert!(r.orthogonal_degrees.iter().all(|&o| o == s as usize - 1));
        assert!(r
            .partial_degrees
            .iter()
            .all(|&p| p == s as usize * s as usize));
        assert!(r
            .orthogonal_degrees
            .iter()
            .zip(&r.partial_degrees)
            .all(|(o, p)| o + p == m - 1));
    }
    assert_eq!(corollary2_check(&field(5)).unwrap().a2, int(240));
    assert!(corollary2_check(&field(4)).is_err());
}

#[test]
fn recipes_reject_bad_input() {
    let f = field(3);
    let x = |i| LinearForm::var(2, i);
    assert!(construct_thm6(&f, 2, &[x(0), x(0)]).is_err());
    assert!("11".parse::<Theorem>().is_err());
    assert!(Recipe::new(Theorem::T6, 6, 2).build().is_err());
    assert!(Recipe::new(Theorem::T8, 3, 2)
        .with_levels(vec![0, 1, 2])
        .build()
        .is_err());
    let d = Recipe::new(Theorem::T6, 3, 2).with_k(2).build().unwrap();
    assert_eq!(d.num_columns(), 8);
    assert_eq!(projected_a2(&d, 0, 4), int(0));
}
