#![allow(dead_code)]

use mahler_hahn::rational::{int, rat};
use mahler_hahn::{MahlerOperator, Polynomial, Rational, SortedRationalSet};

pub fn op(ell: u64, coeffs: &[&[(u64, i64)]]) -> MahlerOperator {
    MahlerOperator::new(
        ell,
        coeffs.iter().map(|t| Polynomial::from_terms(t.iter().map(|&(e, c)| (e, int(c))))).collect(),
    )
    .unwrap()
}

/// `z M^2 + (z - 1) M - 2`, ell = 2.
pub fn rudin_shapiro() -> MahlerOperator {
    op(2, &[&[(0, -2)], &[(0, -1), (1, 1)], &[(1, 1)]])
}

/// `z^2 M^2 - (z^2 + z) M + z`, ell = 2.
pub fn intro() -> MahlerOperator {
    op(2, &[&[(1, 1)], &[(1, -1), (2, -1)], &[(2, 1)]])
}

pub fn q(a: i64, b: i64) -> Rational {
    rat(a, b)
}

pub fn set(xs: &[(i64, i64)]) -> SortedRationalSet {
    xs.iter().map(|&(a, b)| rat(a, b)).collect()
}

pub const RS_R0: [(i64, i64); 19] = [
    (-1, 2), (-1, 4), (-1, 8), (0, 1), (1, 2), (3, 4), (7, 8), (1, 1), (3, 2), (7, 4),
    (2, 1), (5, 2), (3, 1), (7, 2), (4, 1), (5, 1), (6, 1), (7, 1), (8, 1),
];

/// Truncation to `E_8` of the solution, as (exponent, coefficient).
pub const RS_SERIES: [((i64, i64), (i64, i64)); 19] = [
    ((-1, 2), (1, 1)),
    ((-1, 4), (-2, 1)),
    ((-1, 8), (4, 1)),
    ((0, 1), (-1, 3)),
    ((1, 2), (1, 1)),
    ((3, 4), (-2, 1)),
    ((7, 8), (4, 1)),
    ((1, 1), (-5, 6)),
    ((3, 2), (1, 1)),
    ((7, 4), (-2, 1)),
    ((2, 1), (11, 12)),
    ((5, 2), (-1, 1)),
    ((3, 1), (-5, 12)),
    ((7, 2), (1, 1)),
    ((4, 1), (-23, 24)),
    ((5, 1), (13, 24)),
    ((6, 1), (-7, 24)),
    ((7, 1), (-5, 24)),
    ((8, 1), (-1, 48)),
];

pub fn rs_series() -> mahler_hahn::FiniteHahn {
    mahler_hahn::FiniteHahn::from_terms(RS_SERIES.iter().map(|&((a, b), (c, d))| (rat(a, b), rat(c, d))))
}

use std::collections::BTreeSet;

use mahler_hahn::rational::pow;
use rand::Rng;

/// `P(L)` as `(ell^i, j)`, read off the coefficients.
pub fn raw_points(l: &MahlerOperator) -> Vec<(Rational, Rational)> {
    l.coeffs()
        .iter()
        .enumerate()
        .flat_map(|(i, a)| a.terms().map(move |(j, _)| (pow(l.ell(), i), int(j as i64))).collect::<Vec<_>>())
        .collect()
}

pub fn naive_psi(pts: &[(Rational, Rational)], v: &Rational) -> Rational {
    pts.iter().map(|(a, j)| v * a + j).min().unwrap()
}

pub fn naive_pi(pts: &[(Rational, Rational)], x: &Rational) -> Rational {
    pts.iter().map(|(a, j)| (x - j) / a).max().unwrap()
}

/// Receptacle levels by plain set iteration, every level recomputed from the whole previous one.
pub fn naive_levels(l: &MahlerOperator, m: usize, cap: Option<&Rational>) -> Vec<BTreeSet<Rational>> {
    let pts = raw_points(l);
    let nd = mahler_hahn::build_polygon(l);
    let keep = |x: &Rational| cap.is_none_or(|b| x <= b);
    let mut levels = vec![nd.neg_slopes().into_iter().filter(keep).collect::<BTreeSet<_>>()];
    for _ in 0..m {
        let prev = levels.last().unwrap();
        let next: BTreeSet<Rational> = prev
            .iter()
            .flat_map(|v| pts.iter().map(move |(a, j)| v * a + j))
            .map(|x| naive_pi(&pts, &x))
            .filter(keep)
            .chain(prev.iter().cloned())
            .collect();
        levels.push(next);
    }
    levels
}

/// Capped receptacle at depth `m` by frontier iteration with ordered sets.
pub fn naive_capped(l: &MahlerOperator, m: usize, cap: &Rational) -> BTreeSet<Rational> {
    let pts = raw_points(l);
    let nd = mahler_hahn::build_polygon(l);
    let mut all: BTreeSet<Rational> = nd.neg_slopes().into_iter().filter(|x| x <= cap).collect();
    let mut fresh = all.clone();
    for _ in 0..m {
        if fresh.is_empty() {
            break;
        }
        let next: BTreeSet<Rational> = fresh
            .iter()
            .flat_map(|v| pts.iter().map(move |(a, j)| v * a + j))
            .map(|x| naive_pi(&pts, &x))
            .filter(|x| x <= cap && !all.contains(x))
            .collect();
        all.extend(next.iter().cloned());
        fresh = next;
    }
    all
}

/// `min (V_m)_(>v) - v`, searching caps `v + 1, v + 2, v + 4, ...` up to `v + 2^10`.
pub fn brute_epsilon(l: &MahlerOperator, m: usize, v: &Rational) -> Option<Rational> {
    let mut width = int(1);
    while width <= int(1024) {
        let above = naive_capped(l, m, &(v + &width)).into_iter().find(|x| x > v);
        if let Some(x) = above {
            return Some(x - v);
        }
        width *= int(2);
    }
    None
}

/// Operator with `ell` in `ells`, order `1..=max_n`, coefficient degrees `<= max_deg` and small
/// integer coefficients.
pub fn random_operator<R: Rng>(rng: &mut R, ells: &[u64], max_n: usize, max_deg: u64) -> MahlerOperator {
    loop {
        let ell = ells[rng.random_range(0..ells.len())];
        let n = rng.random_range(1..=max_n);
        let coeffs = (0..=n)
            .map(|_| {
                let terms = rng.random_range(1..=3);
                Polynomial::from_terms(
                    (0..terms).map(|_| (rng.random_range(0..=max_deg), int(rng.random_range(-3i64..=3)))),
                )
            })
            .collect::<Vec<_>>();
        if let Ok(l) = MahlerOperator::new(ell, coeffs) {
            return l;
        }
    }
}

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn operator_strategy(ells: &'static [u64], max_n: usize, max_deg: u64) -> impl Strategy<Value = MahlerOperator> {
    any::<u64>().prop_map(move |seed| random_operator(&mut ChaCha8Rng::seed_from_u64(seed), ells, max_n, max_deg))
}

pub fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-96i64..=96, 1i64..=48).prop_map(|(a, b)| rat(a, b))
}

pub fn series_strategy() -> impl Strategy<Value = mahler_hahn::FiniteHahn> {
    prop::collection::vec((rational_strategy(), -5i64..=5), 0..6)
        .prop_map(|terms| mahler_hahn::FiniteHahn::from_terms(terms.into_iter().map(|(e, c)| (e, int(c)))))
}
