use super::*;
use crate::algebra::{rat, rat_pow, Factor, LaurentPoly, Rat};
use crate::lift::ExpTerm;

fn poly(v: &[Vec<i64>]) -> Polytope {
    Polytope::from_integer(v).unwrap()
}

fn segment(k: i64) -> Polytope {
    poly(&[vec![0], vec![k]])
}

fn square() -> Polytope {
    poly(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
}

fn penta3() -> Polytope {
    poly(&[
        vec![0, 0, 0],
        vec![1, 0, 0],
        vec![1, 1, 0],
        vec![1, 1, 1],
        vec![2, 1, 1],
    ])
}

fn series(vars: &VarSet, num: &[(Vec<i64>, i64)], den: &[Vec<i64>]) -> RationalSeries {
    let n = vars.len();
    RationalSeries::with_binomials(
        vars.clone(),
        LaurentPoly::from_terms(n, num.iter().map(|(e, c)| (e.clone(), int(*c)))),
        den.to_vec(),
    )
    .unwrap()
}

/// `sum_{a in nP} q^{w(a)} t^a` with a zero `x` exponent.
fn brute_q(p: &Polytope, forms: &[Vec<i64>], n: u64) -> LaurentPoly {
    let s = p.ambient_dim();
    let np = forms.len();
    LaurentPoly::from_terms(
        np + s + 1,
        p.lattice_points(n).into_iter().map(|a| {
            let mut e: Vec<i64> = forms
                .iter()
                .map(|c| c.iter().zip(&a).map(|(x, y)| x * y).sum())
                .collect();
            e.extend(&a);
            e.push(0);
            (e, int(1))
        }),
    )
}

fn brute_weighted(p: &Polytope, h: &Weight, n: u64, interior: bool) -> LaurentPoly {
    let s = p.ambient_dim();
    let pts = if interior {
        p.interior_lattice_points(n)
    } else {
        p.lattice_points(n)
    };
    LaurentPoly::from_terms(
        s + 1,
        pts.into_iter().map(|a| {
            let v = if interior {
                let neg: Vec<i64> = a.iter().map(|x| -x).collect();
                h.eval(&neg).unwrap()
            } else {
                h.eval(&a).unwrap()
            };
            let mut e = a.clone();
            e.push(0);
            (e, v)
        }),
    )
}

#[test]
fn segment_q_series() {
    let f = q_weighted_series(&segment(1), &WeightSystem::linear(&[&[1]])).unwrap();
    let v = VarSet::ehrhart(1, 1);
    assert!(f
        .series_equal(&series(
            &v,
            &[(vec![0, 0, 0], 1)],
            &[vec![0, 0, 1], vec![1, 1, 1]]
        ))
        .unwrap());
    let f = q_weighted_series(&segment(2), &WeightSystem::linear(&[&[1]])).unwrap();
    let expected = series(
        &v,
        &[(vec![0, 0, 0], 1), (vec![1, 1, 1], 1)],
        &[vec![0, 0, 1], vec![2, 2, 1]],
    );
    assert!(f.series_equal(&expected).unwrap());
}

#[test]
fn substitution_examples() {
    let v = VarSet::ehrhart(1, 1);
    let a = series(&v, &[(vec![0, 0, 0], 1)], &[vec![0, 0, 1], vec![0, 1, 1]]);
    let b = a.substitute_monomial(1, &[1, 1, 0]).unwrap();
    assert_eq!(
        b,
        series(&v, &[(vec![0, 0, 0], 1)], &[vec![0, 0, 1], vec![1, 1, 1]])
    );
    assert_eq!(a.substitute_monomial(1, &[0, 1, 0]).unwrap(), a);
    let c = series(
        &v,
        &[(vec![0, 0, 0], 1), (vec![0, 1, 1], 1)],
        &[vec![0, 0, 1], vec![0, 2, 1]],
    );
    let d = c.substitute_monomial(1, &[1, 1, 0]).unwrap();
    assert_eq!(
        d,
        series(
            &v,
            &[(vec![0, 0, 0], 1), (vec![1, 1, 1], 1)],
            &[vec![0, 0, 1], vec![2, 2, 1]]
        )
    );
}

#[test]
fn penta3_series() {
    let p = penta3();
    let f = q_weighted_series(&p, &WeightSystem::linear(&[&[1, 1, 1]])).unwrap();
    let g = drop_t_variables(&specialize_t(&f, 1, 3).unwrap(), 1, 3).unwrap();
    let v = VarSet::ehrhart(1, 0);
    let expected = series(
        &v,
        &[(vec![0, 0], 1), (vec![2, 1], 1)],
        &[vec![0, 1], vec![1, 1], vec![3, 1], vec![4, 1]],
    );
    assert!(g.series_equal(&expected).unwrap());
    let c = expected.expand(1).unwrap();
    assert_eq!(c[0], LaurentPoly::one(2));
    assert_eq!(
        c[1],
        LaurentPoly::from_terms(2, (0..5).map(|k| (vec![k, 0], int(1))))
    );
}

#[test]
fn plain_ehrhart_series() {
    let f = ehrhart_series(&square()).unwrap();
    let v = VarSet::new(["x"]).unwrap();
    assert!(f
        .series_equal(&series(
            &v,
            &[(vec![0], 1), (vec![1], 1)],
            &[vec![1], vec![1], vec![1]]
        ))
        .unwrap());
    assert_eq!(f.to_string(), "(1+x)/(1-x)^3");
    let seg = ehrhart_series(&segment(2)).unwrap();
    let coeffs: Vec<Rat> = seg
        .expand(4)
        .unwrap()
        .iter()
        .map(|c| c.constant_term())
        .collect();
    assert_eq!(coeffs, (0..5).map(|n| int(2 * n + 1)).collect::<Vec<_>>());
}

#[test]
fn engine_matches_enumeration() {
    let cases: Vec<(Polytope, Vec<Vec<i64>>)> = vec![
        (segment(1), vec![vec![1]]),
        (segment(2), vec![vec![1], vec![2]]),
        (square(), vec![vec![1, 1], vec![2, 3]]),
        (
            poly(&[vec![0, 0], vec![1, 0], vec![1, 1]]),
            vec![vec![1, 1]],
        ),
        (penta3(), vec![vec![1, 1, 1]]),
        (
            poly(&[vec![0, 0], vec![2, 1], vec![1, 3]]),
            vec![vec![1, -1]],
        ),
    ];
    for (p, forms) in cases {
        let refs: Vec<&[i64]> = forms.iter().map(|c| c.as_slice()).collect();
        let f = q_weighted_series(&p, &WeightSystem::linear(&refs)).unwrap();
        let coeffs = f.expand(6).unwrap();
        for (n, c) in coeffs.iter().enumerate() {
            assert_eq!(c, &brute_q(&p, &forms, n as u64), "n = {n}");
        }
    }
}

#[test]
fn lower_dimensional_polytope_series() {
    let p = poly(&[vec![0, 0, 1], vec![2, 1, 1], vec![1, 2, 1]]);
    let f = q_weighted_series(&p, &WeightSystem::linear(&[&[1, 0, 2]])).unwrap();
    for (n, c) in f.expand(5).unwrap().iter().enumerate() {
        assert_eq!(c, &brute_q(&p, &[vec![1, 0, 2]], n as u64));
    }
}

#[test]
fn r_series() {
    let f = r_weighted_series(&segment(1), &WeightSystem::linear(&[&[1]])).unwrap();
    let c = f.expand(1).unwrap();
    // 1 + (1 + q) t
    let expected = LaurentPoly::from_terms(
        3,
        [
            (vec![0, 0, 0], int(1)),
            (vec![0, 1, 0], int(1)),
            (vec![1, 1, 0], int(1)),
        ],
    );
    assert_eq!(c[1], expected);
    let f = r_weighted_series(&square(), &WeightSystem::linear(&[&[1, 1]])).unwrap();
    assert_eq!(f.expand(1).unwrap()[1].coefficient_sum(), int(8));
    let plain = r_weighted_series(&square(), &WeightSystem::empty()).unwrap();
    assert!(plain
        .series_equal(&q_weighted_series(&square(), &WeightSystem::empty()).unwrap())
        .unwrap());
}

#[test]
fn s_series_by_derivative() {
    let f = s_weighted_series(&segment(1), &Weight::Linear(vec![1])).unwrap();
    let g = drop_t_variables(&specialize_t(&f, 0, 1).unwrap(), 0, 1).unwrap();
    let v = VarSet::new(["x"]).unwrap();
    assert!(g
        .series_equal(&series(&v, &[(vec![1], 1)], &[vec![1], vec![1], vec![1]]))
        .unwrap());
    let zero = s_weighted_series(&segment(1), &Weight::Linear(vec![0])).unwrap();
    assert!(zero.is_zero());
    let sq = s_weighted_series(&square(), &Weight::Linear(vec![1, 1])).unwrap();
    let g = specialize_t(&sq, 0, 2).unwrap();
    for (n, c) in g.expand(6).unwrap().iter().enumerate() {
        let n = n as i64;
        assert_eq!(c.constant_term(), int(n * (n + 1) * (n + 1)));
    }
    // The derivative route agrees with the cone expansion.
    let w = Weight::Linear(vec![2, 3]);
    let a = s_weighted_series(&square(), &w).unwrap();
    let b = s_series(&square(), &w).unwrap();
    assert!(a.series_equal(&b).unwrap());
}

#[test]
fn interior_series() {
    let f = interior_q_series(&segment(1), &WeightSystem::empty()).unwrap();
    let v = VarSet::ehrhart(0, 1);
    assert!(f
        .series_equal(&series(&v, &[(vec![1, 2], 1)], &[vec![0, 1], vec![1, 1]]))
        .unwrap());
    let g = specialize_t(
        &interior_q_series(&square(), &WeightSystem::empty()).unwrap(),
        0,
        2,
    )
    .unwrap();
    for (n, c) in g.expand(6).unwrap().iter().enumerate() {
        let m = (n as i64 - 1).max(0);
        assert_eq!(c.constant_term(), int(m * m));
    }
    assert!(matches!(
        interior_q_series(&poly(&[vec![0, 0], vec![1, 1]]), &WeightSystem::empty()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn q_reciprocity() {
    assert!(reciprocity_check_q(&segment(1), &WeightSystem::linear(&[&[1]])).unwrap());
    assert!(reciprocity_check_q(&square(), &WeightSystem::empty()).unwrap());
    assert!(reciprocity_check_q(&square(), &WeightSystem::linear(&[&[1, 1], &[2, 3]])).unwrap());
    assert!(reciprocity_check_q(&penta3(), &WeightSystem::linear(&[&[1, 1, 1]])).unwrap());
}

#[test]
fn r_series_inversion_identity() {
    for (p, forms) in [
        (segment(1), WeightSystem::linear(&[&[1]])),
        (square(), WeightSystem::linear(&[&[1, 1], &[1, 0]])),
    ] {
        let r = r_weighted_series(&p, &forms).unwrap();
        let other = r_inversion_from_interior(&p, &forms).unwrap();
        assert!(r.invert_all().unwrap().series_equal(&other).unwrap());
    }
}

#[test]
fn exponential_weights() {
    let tri = poly(&[vec![0, 0], vec![1, 0], vec![0, 1]]);
    let weights = vec![
        Weight::ExpPoly(vec![vec![ExpTerm::new(vec![int(1)], int(2))]]),
        Weight::ExpPoly(vec![vec![ExpTerm::new(vec![int(0), int(1)], int(2))]]),
        Weight::ExpPoly(vec![vec![ExpTerm::new(
            vec![int(0), int(0), int(1)],
            int(1),
        )]]),
        Weight::ExpPoly(vec![
            vec![ExpTerm::new(vec![int(1), int(1)], rat(1, 3))],
            vec![ExpTerm::new(vec![int(2)], int(-1))],
        ]),
        Weight::Monomial(vec![1, 1]),
    ];
    for p in [tri, square()] {
        for h in &weights {
            assert!(s_reciprocity_check(&p, h).unwrap(), "{h}");
            let f = s_series(&p, h).unwrap();
            for (n, c) in f.expand(5).unwrap().iter().enumerate() {
                assert_eq!(c, &brute_weighted(&p, h, n as u64, false));
            }
            let g = interior_s_series(&p, h).unwrap();
            for (n, c) in g.expand(5).unwrap().iter().enumerate() {
                assert_eq!(c, &brute_weighted(&p, h, n as u64, true));
            }
        }
    }
}

#[test]
fn rational_simplex_reciprocity() {
    let p = Polytope::new(vec![vec![int(0)], vec![rat(3, 2)]]).unwrap();
    let h = Weight::ExpPoly(vec![vec![ExpTerm::new(vec![int(0), int(1)], int(2))]]);
    assert!(s_reciprocity_check(&p, &h).unwrap());
    let f = s_series(&p, &h).unwrap();
    for (n, c) in f.expand(6).unwrap().iter().enumerate() {
        assert_eq!(c, &brute_weighted(&p, &h, n as u64, false));
    }
}

#[test]
fn power_sums_with_coefficients() {
    let v = VarSet::new(["x"]).unwrap();
    let f = power_sum_series(2, &int(3), &[1], &v).unwrap();
    for (n, c) in f.expand(5).unwrap().iter().enumerate() {
        let n = n as i64;
        assert_eq!(c.constant_term(), int(n * n) * rat_pow(&int(3), n));
    }
    assert!(f
        .den()
        .factors()
        .iter()
        .all(|fa: &Factor| fa.coeff == int(3)));
}
