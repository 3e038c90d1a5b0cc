use std::collections::{BTreeMap, HashMap};

use lazy_tournament::kapranov::{
    chart_coords, check_hyperplanes, check_lemmas, embed_interior_all, forget_above, max_normalized,
};
use lazy_tournament::trees::enumerate_trees;
use lazy_tournament::{
    boundary_factor_coords, classify, embed_boundary, embed_interior, ExtendedRational,
    InteriorConfiguration, Label, LabeledTree,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn hyperplanes_hold_through_n6() {
    for n in 1..=6 {
        for t in enumerate_trees(n, true).unwrap() {
            let k = classify(&t).unwrap();
            assert_eq!(check_hyperplanes(&t, &k).unwrap(), None);
        }
    }
}

#[test]
fn structural_lemmas_through_n6() {
    for n in 0..=6 {
        for t in enumerate_trees(n, true).unwrap() {
            assert_eq!(check_lemmas(&t).unwrap(), None);
        }
    }
}

#[test]
fn boundary_embedding_is_injective_through_n5() {
    for n in 1..=5 {
        let mut seen: HashMap<_, LabeledTree> = HashMap::new();
        for t in enumerate_trees(n, false).unwrap() {
            let e = embed_boundary(&t).unwrap();
            assert_eq!(e.factors.len(), n);
            for f in &e.factors {
                assert_eq!(f.coords.len(), f.r + 1);
                assert!(f.is_zero_one());
            }
            if let Some(other) = seen.insert(e, t.clone()) {
                panic!("{t} and {other} share coordinates");
            }
        }
    }
}

#[test]
fn coordinates_commute_with_forgetting() {
    for n in 2..=6 {
        for t in enumerate_trees(n, true).unwrap() {
            let smaller = t.forget(Label::Num(n)).unwrap();
            for r in 1..n {
                assert_eq!(
                    boundary_factor_coords(&t, r).unwrap(),
                    boundary_factor_coords(&smaller, r).unwrap()
                );
            }
        }
    }
}

/// Places the points of `a`'s branch near 0 and the rest near 1, with `r`
/// at infinity, and compares the interior coordinates to the boundary ones.
fn limit_matches(t: &LabeledTree, r: usize) -> bool {
    let eps = rat(1, 1000);
    let reduced = forget_above(t, r).unwrap();
    let view = reduced.branches_at(Label::Num(r)).unwrap();
    let mut points = BTreeMap::new();
    for (rank, l) in Label::standard_set(t.n()).into_iter().enumerate() {
        let value = if l == Label::Num(r) {
            ExtendedRational::Infinity
        } else if l == Label::A {
            BigRational::zero().into()
        } else if l.num().is_some_and(|x| x > r) {
            // Forgotten points: anywhere distinct.
            rat(-(rank as i64) - 1, 1).into()
        } else if view.same_branch(l, Label::A) {
            (&eps * rat(rank as i64, 1)).into()
        } else {
            (BigRational::one() + &eps * rat(rank as i64, 1)).into()
        };
        points.insert(l, value);
    }
    let cfg = InteriorConfiguration::new(points).unwrap();
    let interior = embed_interior(&cfg, r).unwrap();
    assert_eq!(interior, chart_coords(&cfg, r).unwrap());
    let boundary = boundary_factor_coords(t, r).unwrap();
    let tol = rat(1, 100);
    max_normalized(&interior)
        .iter()
        .zip(&boundary.coords)
        .all(|(x, z)| (x - z).abs() < tol)
}

#[test]
fn interior_limits_approach_boundary_points() {
    for n in 1..=4 {
        for t in enumerate_trees(n, false).unwrap() {
            for r in 1..=n {
                assert!(limit_matches(&t, r), "{t}, factor {r}");
            }
        }
    }
}

fn config_strategy() -> impl Strategy<Value = (Vec<i64>, usize)> {
    (1usize..5).prop_flat_map(|n| {
        (
            prop::collection::hash_set(-50i64..50, n + 3).prop_map(|s| s.into_iter().collect()),
            0..n + 3,
        )
    })
}

proptest! {
    #[test]
    fn interior_matches_direct_formula((values, inf_at) in config_strategy()) {
        let finite: Vec<ExtendedRational> = values.iter().map(|&v| v.into()).collect();
        let cfg = InteriorConfiguration::from_values(finite).unwrap();
        for r in 1..=cfg.n() {
            let get = |l: Label| cfg.get(l).unwrap().finite().unwrap().clone();
            let pa = get(Label::A);
            let pr = get(Label::Num(r));
            let direct: Vec<BigRational> = lazy_tournament::kapranov::coordinate_labels(r)
                .into_iter()
                .map(|x| (&pa - get(x)) / (&pr - get(x)))
                .collect();
            let expected = lazy_tournament::FactorCoordinates::normalized(r, direct).unwrap();
            prop_assert_eq!(embed_interior(&cfg, r).unwrap(), expected);
        }
        // Sending one point to infinity via z -> 1/(z - s) preserves every factor.
        let s = values[inf_at];
        let moved: Vec<ExtendedRational> = values
            .iter()
            .map(|&v| if v == s { ExtendedRational::Infinity } else { rat(1, v - s).into() })
            .collect();
        let moved = InteriorConfiguration::from_values(moved).unwrap();
        prop_assert_eq!(embed_interior_all(&cfg).unwrap(), embed_interior_all(&moved).unwrap());
    }

    #[test]
    fn chart_is_homogeneous(values in prop::collection::hash_set(1i64..60, 2), lambda in 1i64..9) {
        let values: Vec<i64> = values.into_iter().collect();
        let build = |scale: i64| {
            let mut pts: Vec<ExtendedRational> = vec![BigRational::zero().into()];
            pts.extend(values.iter().map(|&v| ExtendedRational::from(v * scale)));
            pts.push(ExtendedRational::Infinity);
            InteriorConfiguration::from_values(pts).unwrap()
        };
        let (base, scaled) = (build(1), build(-lambda));
        prop_assert_eq!(chart_coords(&base, 1).unwrap(), chart_coords(&scaled, 1).unwrap());
        prop_assert_eq!(embed_interior(&base, 1).unwrap(), chart_coords(&base, 1).unwrap());
    }
}
