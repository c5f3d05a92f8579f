mod common;

use common::*;
use mahler_hahn::rational::{int, pow};
use mahler_hahn::{apply_operator, build_polygon, ExtRational, FiniteHahn, SortedRationalSet};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn image_support_lies_in_psi_sets(l in operator_strategy(&[2, 3], 3, 4), f in series_strategy()) {
        let nd = build_polygon(&l);
        let reach: SortedRationalSet = f.support().iter().flat_map(|g| nd.psi_set(g).into_vec()).collect();
        prop_assert!(apply_operator(&l, &f).support().is_subset(&reach));
    }

    #[test]
    fn valuation_law(l in operator_strategy(&[2, 3], 3, 4), f in series_strategy()) {
        let nd = build_polygon(&l);
        let image = apply_operator(&l, &f);
        let bound = nd.psi_ext(&f.val());
        prop_assert!(image.val() >= bound);
        if let ExtRational::Finite(v) = f.val() {
            if !nd.neg_slopes().contains(&v) {
                prop_assert_eq!(image.val(), bound);
            }
        } else {
            prop_assert!(image.is_zero());
        }
    }

    #[test]
    fn operator_is_linear(l in operator_strategy(&[2, 3], 2, 3), f in series_strategy(), g in series_strategy(), c in -4i64..5) {
        let lhs = apply_operator(&l, &f.scale(&int(c)).add(&g));
        let rhs = apply_operator(&l, &f).scale(&int(c)).add(&apply_operator(&l, &g));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn restriction_composes(f in series_strategy(),
                            a in prop::collection::vec(rational_strategy(), 0..8),
                            b in prop::collection::vec(rational_strategy(), 0..8)) {
        let (a, b): (SortedRationalSet, SortedRationalSet) = (a.into_iter().collect(), b.into_iter().collect());
        prop_assert_eq!(f.restrict(&a).restrict(&b), f.restrict(&a.intersection(&b)));
        prop_assert!(f.restrict(&a).support().is_subset(&a));
    }

    #[test]
    fn substitution_scales_exponents(f in series_strategy(), ell in 2u64..4, i in 0usize..3) {
        let g = f.mahler_substitute(ell, i);
        let scale = pow(ell, i);
        prop_assert_eq!(g.len(), f.len());
        for (x, c) in f.terms() {
            prop_assert_eq!(g.coeff(&(x * &scale)), Some(c));
        }
    }

    #[test]
    fn json_round_trip(f in series_strategy()) {
        let text = serde_json::to_string(&f.to_json_terms()).unwrap();
        let back: Vec<mahler_hahn::SeriesTerm> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(FiniteHahn::from_json_terms(&back).unwrap(), f);
    }
}

#[test]
fn rudin_shapiro_display() {
    let f = rs_series();
    assert_eq!(f.val(), ExtRational::Finite(q(-1, 2)));
    assert!(f.to_string().starts_with("z^(-1/2) - 2*z^(-1/4) + 4*z^(-1/8) - 1/3"));
    assert!(f.to_string().ends_with("- 1/48*z^8"));
}
