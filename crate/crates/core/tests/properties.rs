use ehrlift::algebra::{int, LaurentPoly, Rat, RationalSeries, VarSet};
use ehrlift::lift::{Weight, WeightSystem};
use ehrlift::linalg::{det, to_rat};
use ehrlift::polytope::{PointConfig, Polytope};
use ehrlift::series::{
    half_open_decompose, interior_q_series, q_weighted_series, reciprocity_check_q, HalfOpenCone,
    SimplicialCone,
};
use ehrlift::verify::{
    battery, count_q, count_q_interior, count_weighted, interpolate, series_from_poly, UniPoly,
};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

fn polygon() -> impl Strategy<Value = Polytope> {
    prop::collection::vec((0i64..4, 0i64..4), 3..6).prop_filter_map("full-dimensional", |pts| {
        let pts: Vec<Vec<i64>> = pts.into_iter().map(|(a, b)| vec![a, b]).collect();
        Polytope::from_integer(&pts)
            .ok()
            .filter(|p| p.is_full_dimensional())
    })
}

fn linear_form() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..3, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn q_series_matches_enumeration(p in polygon(), c in linear_form()) {
        let ws = WeightSystem::linear(&[&c]);
        let f = q_weighted_series(&p, &ws).unwrap();
        for (n, coeff) in f.expand(4).unwrap().iter().enumerate() {
            prop_assert_eq!(coeff, &count_q(&p, &ws, n as u64).unwrap());
        }
    }

    #[test]
    fn interior_series_matches_enumeration(p in polygon(), c in linear_form()) {
        let ws = WeightSystem::linear(&[&c]);
        let f = interior_q_series(&p, &ws).unwrap();
        for (n, coeff) in f.expand(4).unwrap().iter().enumerate() {
            prop_assert_eq!(coeff, &count_q_interior(&p, &ws, n as u64).unwrap());
        }
        prop_assert!(reciprocity_check_q(&p, &ws).unwrap());
    }

    #[test]
    fn half_open_pieces_partition_the_cone(p in polygon()) {
        let t = p.triangulate(PointConfig::Vertices).unwrap();
        let cones = half_open_decompose(&t).unwrap();
        for k in 0..=3u64 {
            for a in p.lattice_points(k) {
                let mut x = a.clone();
                x.push(k as i64);
                prop_assert_eq!(cones.iter().filter(|h| h.contains(&x)).count(), 1);
            }
        }
    }

    #[test]
    fn parallelepiped_size_is_the_determinant(
        gens in prop::collection::vec(prop::collection::vec(-3i64..4, 2), 3),
        lifts in prop::collection::vec(1i64..4, 3),
        open in prop::collection::vec(any::<bool>(), 3),
    ) {
        let g: Vec<Vec<i64>> = gens.iter().zip(&lifts).map(|(v, &l)| vec![v[0], v[1], l]).collect();
        let m: Vec<Vec<Rat>> = g.iter().map(|v| to_rat(v)).collect();
        let d = det(&m);
        prop_assume!(d != int(0));
        let cone = HalfOpenCone::new(SimplicialCone::new(g.clone()).unwrap(), open).unwrap();
        let pts = cone.parallelepiped_points();
        prop_assert_eq!(int(pts.len() as i64), if d < int(0) { -d } else { d });
        for x in &pts {
            prop_assert!(cone.contains(x));
        }
    }

    #[test]
    fn double_inversion_is_identity(p in polygon(), c in linear_form()) {
        let f = q_weighted_series(&p, &WeightSystem::linear(&[&c])).unwrap();
        let back = f.invert_all().unwrap().invert_all().unwrap();
        prop_assert!(back.series_equal(&f).unwrap());
    }

    #[test]
    fn hstar_round_trip(coeffs in prop::collection::vec(-5i64..6, 1..6)) {
        let e = UniPoly::from_integers(&coeffs);
        let h = series_from_poly(&e).unwrap();
        let expanded = h.to_series().expand(8).unwrap();
        for (n, c) in expanded.iter().enumerate() {
            prop_assert_eq!(c.constant_term(), e.eval_int(n as i64));
        }
    }

    #[test]
    fn interpolation_reproduces_values(coeffs in prop::collection::vec(-5i64..6, 1..7)) {
        let e = UniPoly::from_integers(&coeffs);
        let values: Vec<Rat> = (0..coeffs.len() as i64 + 2).map(|n| e.eval_int(n)).collect();
        prop_assert_eq!(UniPoly::interpolate(&values), e);
    }

    #[test]
    fn laurent_product_commutes(
        a in prop::collection::vec((prop::collection::vec(-2i64..3, 2), -3i64..4), 0..5),
        b in prop::collection::vec((prop::collection::vec(-2i64..3, 2), -3i64..4), 0..5),
    ) {
        let pa = LaurentPoly::from_terms(2, a.into_iter().map(|(e, c)| (e, int(c))));
        let pb = LaurentPoly::from_terms(2, b.into_iter().map(|(e, c)| (e, int(c))));
        prop_assert_eq!(&pa * &pb, &pb * &pa);
        prop_assert_eq!(&(&pa + &pb) - &pb, pa);
    }
}

/// A polynomial weight counts as the same combination of its monomial counts.
#[test]
fn weighted_counts_are_linear_in_the_weight() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for case in battery().into_iter().filter(|c| c.weights.is_empty()) {
        let p = &case.polytope;
        let s = p.ambient_dim();
        let strategy = prop::collection::vec((prop::collection::vec(0u32..3, s), -3i64..4), 1..4);
        for _ in 0..3 {
            let terms = strategy.new_tree(&mut runner).unwrap().current();
            let f = Weight::Polynomial(terms.iter().map(|(e, c)| (int(*c), e.clone())).collect());
            let direct = interpolate(p, &f).unwrap();
            let mut combined = vec![Rat::from_integer(0.into()); direct.coeffs().len().max(1) + 3];
            for (e, c) in &terms {
                let g = interpolate(p, &Weight::Monomial(e.clone())).unwrap();
                for (k, gk) in g.coeffs().iter().enumerate() {
                    if k >= combined.len() {
                        combined.resize(k + 1, int(0));
                    }
                    combined[k] += int(*c) * gk;
                }
            }
            assert_eq!(UniPoly::new(combined), direct, "{} {f}", case.polytope_id);
            for n in 0..4 {
                assert_eq!(direct.eval_int(n as i64), count_weighted(p, &f, n).unwrap());
            }
        }
    }
}

#[test]
fn series_identity_on_x_only() {
    let v = VarSet::new(["x"]).unwrap();
    let a = RationalSeries::with_binomials(v.clone(), LaurentPoly::one(1), vec![vec![1]]).unwrap();
    let b = RationalSeries::with_binomials(
        v,
        LaurentPoly::from_terms(1, [(vec![0], int(1)), (vec![1], int(1))]),
        vec![vec![2]],
    )
    .unwrap();
    assert!(a.series_equal(&b).unwrap());
}
