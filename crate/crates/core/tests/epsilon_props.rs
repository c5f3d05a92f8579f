mod common;

use common::*;
use mahler_hahn::rational::{int, rat};
use mahler_hahn::epsilon::Call;
use mahler_hahn::{build_polygon, iota_bound, lb_eps, lb_tau, EpsilonContext, Error, Rational};
use proptest::prelude::*;

const MAX_DEPTH: usize = 40;

/// `min (V_m)_(>v) - v` when it is at most 4.
fn gap_above(l: &mahler_hahn::MahlerOperator, m: usize, v: &Rational) -> Option<Rational> {
    naive_capped(l, m, &(v + int(4))).into_iter().find(|x| x > v).map(|x| x - v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn eps_bounds_are_sound(l in operator_strategy(&[2, 3], 2, 3), pick in 0usize..64) {
        let nd = build_polygon(&l);
        let tau = lb_tau(&nd).unwrap();
        prop_assert!(tau > int(0));
        let bottom = nd.neg_mu(nd.kappa());
        let depth = iota_bound(&nd, &(&bottom + int(2)), &tau).unwrap() as usize;
        prop_assume!(depth <= MAX_DEPTH);
        let members: Vec<Rational> = naive_capped(&l, depth, &(&bottom + int(2))).into_iter().collect();
        let v = &members[pick % members.len()];
        let lb = lb_eps(&nd, v).unwrap();
        prop_assert!(lb > int(0));
        if let Some(gap) = gap_above(&l, depth + 4, v) {
            prop_assert!(lb <= gap, "lb {} > gap {} at {}", lb, gap, v);
        }
        for k in 1..=nd.kappa() {
            if let Some(gap) = gap_above(&l, depth + 4, &nd.neg_mu(k)) {
                prop_assert!(tau <= gap);
            }
        }
    }

    #[test]
    fn elements_are_born_by_iota(l in operator_strategy(&[2, 3], 2, 3)) {
        let nd = build_polygon(&l);
        let tau = lb_tau(&nd).unwrap();
        let cap = nd.neg_mu(nd.kappa()) + int(1);
        let levels = naive_levels(&l, MAX_DEPTH.min(24), Some(&cap));
        for (i, level) in levels.iter().enumerate().skip(1) {
            for x in level.difference(&levels[i - 1]) {
                prop_assert!(i as u64 <= iota_bound(&nd, x, &tau).unwrap(), "{} born at {}", x, i);
            }
        }
    }

    #[test]
    fn rejects_points_off_the_lattice(l in operator_strategy(&[2, 3], 2, 3)) {
        let nd = build_polygon(&l);
        let off = nd.neg_mu(nd.kappa()) + rat(1, 7 * 11 * 13 * nd.d as i64);
        let rejected = matches!(lb_eps(&nd, &off), Err(Error::NotInZdl { .. }));
        prop_assert!(rejected);
    }
}

#[test]
fn rudin_shapiro_bounds() {
    let nd = build_polygon(&rudin_shapiro());
    assert_eq!(lb_tau(&nd).unwrap(), q(1, 8));
    let mut ctx = EpsilonContext::new(&nd).with_trace();
    ctx.seed_thetas().unwrap();
    assert_eq!(ctx.theta(2), Some(&q(1, 4)));
    assert_eq!(ctx.theta(1), Some(&q(1, 2)));
    let seen = |call: Call, kappa0: usize, w: Rational, bound: Rational| {
        ctx.trace().iter().any(|e| e.call == call && e.kappa0 == kappa0 && e.w == w && e.bound == bound)
    };
    assert!(seen(Call::Interval, 1, q(-3, 4), q(1, 4)));
    assert!(seen(Call::Interval, 1, q(-1, 2), q(1, 4)));
    assert!(seen(Call::Interval, 1, q(-3, 8), q(1, 8)));
    assert!(seen(Call::Interval, 1, q(-1, 4), q(1, 8)));
    assert!(seen(Call::Param, 1, q(-1, 4), q(1, 8)));
    assert!(seen(Call::Param, 1, q(-1, 2), q(1, 4)));
    let members = naive_capped(&rudin_shapiro(), 40, &int(3));
    for v in members.iter().filter(|v| **v <= int(2)) {
        let gap = members.iter().find(|x| *x > v).unwrap() - v;
        assert!(lb_eps(&nd, v).unwrap() <= gap, "at {v}");
    }
}

#[test]
fn tau_is_attained_on_intro_operator() {
    let l = intro();
    let nd = build_polygon(&l);
    let tau = lb_tau(&nd).unwrap();
    let depth = iota_bound(&nd, &int(1), &tau).unwrap() as usize;
    let truth = (1..=nd.kappa())
        .filter_map(|k| gap_above(&l, depth, &nd.neg_mu(k)))
        .chain([rat(1, (nd.d * nd.ell.pow(nd.n as u32)) as i64)])
        .min()
        .unwrap();
    assert!(tau <= truth);
}
