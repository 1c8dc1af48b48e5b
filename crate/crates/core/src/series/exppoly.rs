use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::cone::{half_open_decompose, interior_decompose, HalfOpenCone};
use crate::algebra::{int, rat_pow, Factor, LaurentPoly, Rat, RationalSeries, VarSet};
use crate::error::{Error, Result};
use crate::lift::{ExpTerm, Weight};
use crate::polytope::{PointConfig, Polytope};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `sum_{n >= 0} P(n + shift) gamma^n u^n`
    Forward,
    /// `sum_{n >= 1} P(-n + shift) gamma^{-n} u^n`
    Backward,
}

/// `N_b` with `sum_{n >= 0} n^b u^n = N_b(u) / (1 - u)^{b + 1}`, ascending coefficients.
pub fn eulerian_numerator(b: u32) -> Vec<Rat> {
    let mut n = vec![Rat::one()];
    for k in 0..b {
        // N_{k+1} = u (1 - u) N_k' + (k + 1) u N_k
        let mut next = vec![Rat::zero(); n.len() + 1];
        for (i, c) in n.iter().enumerate() {
            let ii = int(i as i64);
            next[i] += c * &ii;
            next[i + 1] -= c * &ii;
            next[i + 1] += c * int(k as i64 + 1);
        }
        while next.last().is_some_and(|c| c.is_zero()) {
            next.pop();
        }
        n = next;
    }
    n
}

/// `sum_{n >= 0} n^b (delta z^g)^n`.
pub fn power_sum_series(b: u32, delta: &Rat, g: &[i64], vars: &VarSet) -> Result<RationalSeries> {
    let nv = vars.len();
    let num = LaurentPoly::from_terms(
        nv,
        eulerian_numerator(b).into_iter().enumerate().map(|(i, c)| {
            let e: Vec<i64> = g.iter().map(|&x| x * i as i64).collect();
            (e, c * rat_pow(delta, i as i64))
        }),
    );
    let factors = vec![Factor::new(delta.clone(), g.to_vec()); b as usize + 1];
    RationalSeries::new(vars.clone(), num, factors)
}

/// Coefficients of `P(a n + s)` as a polynomial in `n`.
fn compose_affine(poly: &[Rat], a: &Rat, s: &Rat) -> Vec<Rat> {
    let mut out: Vec<Rat> = Vec::new();
    for c in poly.iter().rev() {
        // out = out * (a n + s) + c
        let mut next = vec![Rat::zero(); out.len() + 1];
        for (i, x) in out.iter().enumerate() {
            next[i] += x * s;
            next[i + 1] += x * a;
        }
        next[0] += c;
        out = next;
    }
    out
}

/// One-dimensional exponential-polynomial series in `u = z^y`; the
/// exponential part is taken as `gamma^n`, so a shifted base `gamma^{n + shift}`
/// differs by the constant `gamma^shift`, left to the caller.
pub fn expo_poly_1d_series(
    terms: &[ExpTerm],
    shift: &Rat,
    y: &[i64],
    direction: Direction,
    vars: &VarSet,
) -> Result<RationalSeries> {
    let mut acc = RationalSeries::zero(vars.clone());
    for t in terms {
        if t.base.is_zero() {
            return Err(Error::InvalidWeight(
                "exponential base must be nonzero".into(),
            ));
        }
        let (coeffs, delta) = match direction {
            Direction::Forward => (compose_affine(&t.poly, &Rat::one(), shift), t.base.clone()),
            Direction::Backward => (compose_affine(&t.poly, &-Rat::one(), shift), t.base.recip()),
        };
        for (b, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut part = power_sum_series(b as u32, &delta, y, vars)?.scale(c);
            if direction == Direction::Backward && b == 0 {
                // drop the n = 0 term
                part = part.sub(&RationalSeries::from_poly(
                    vars.clone(),
                    LaurentPoly::constant(vars.len(), c.clone()),
                )?)?;
            }
            acc = acc.add(&part)?;
        }
    }
    Ok(acc)
}

/// `coeff * prod_i a_i^{exps_i} bases_i^{a_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparableTerm {
    pub coeff: Rat,
    pub exps: Vec<u32>,
    pub bases: Vec<Rat>,
}

/// Writes a weight on `Z^s` as a sum of separable terms.
pub fn separable_terms(w: &Weight, s: usize) -> Result<Vec<SeparableTerm>> {
    w.validate(s)?;
    let mut acc: BTreeMap<(Vec<u32>, Vec<Rat>), Rat> = BTreeMap::new();
    match w {
        Weight::ExpPoly(factors) => {
            let mut partial: Vec<(Rat, Vec<u32>, Vec<Rat>)> =
                vec![(Rat::one(), vec![0; s], vec![Rat::one(); s])];
            for (i, f) in factors.iter().enumerate() {
                let mut next = Vec::new();
                for (c0, e0, b0) in &partial {
                    for t in f {
                        for (k, c) in t.poly.iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let mut e = e0.clone();
                            let mut b = b0.clone();
                            e[i] = k as u32;
                            b[i] = t.base.clone();
                            next.push((c0 * c, e, b));
                        }
                    }
                }
                partial = next;
            }
            for (c, e, b) in partial {
                *acc.entry((e, b)).or_insert_with(Rat::zero) += c;
            }
        }
        other => {
            let p = other.as_poly(s).expect("polynomial weight");
            for (e, c) in p.terms() {
                let e: Vec<u32> = e.iter().map(|&x| x as u32).collect();
                *acc.entry((e, vec![Rat::one(); s]))
                    .or_insert_with(Rat::zero) += c;
            }
        }
    }
    Ok(acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((exps, bases), coeff)| SeparableTerm { coeff, exps, bases })
        .collect())
}

/// `sum_{m in C} h(a) z^m` over the lattice points `m = (a, level)` of a
/// half-open cone, `h` given by separable terms on the first `s` coordinates.
///
/// Points are `r + sum n_l g_l` with `r` in the parallelepiped; each term
/// becomes a polynomial in `n` times `prod delta_l^{n_l}`, summed with
/// [`power_sum_series`].
pub fn weighted_cone_series(
    c: &HalfOpenCone,
    terms: &[SeparableTerm],
    vars: &VarSet,
) -> Result<RationalSeries> {
    let gens = c.cone.generators();
    let k = gens.len();
    let nv = vars.len();
    let s = nv - 1;
    let residues = c.parallelepiped_points();
    let mut acc: BTreeMap<(Vec<Rat>, Vec<i64>), LaurentPoly> = BTreeMap::new();
    for term in terms {
        let deltas: Vec<Rat> = gens
            .iter()
            .map(|g| (0..s).map(|i| rat_pow(&term.bases[i], g[i])).product())
            .collect();
        for r in &residues {
            let gr: Rat = (0..s).map(|i| rat_pow(&term.bases[i], r[i])).product();
            let mut poly = LaurentPoly::constant(k, &term.coeff * gr);
            for i in 0..s {
                if term.exps[i] == 0 {
                    continue;
                }
                let mut linear = LaurentPoly::constant(k, int(r[i]));
                for (l, g) in gens.iter().enumerate() {
                    let mut e = vec![0; k];
                    e[l] = 1;
                    linear.add_term(e, int(g[i]));
                }
                for _ in 0..term.exps[i] {
                    poly = &poly * &linear;
                }
            }
            for (beta, coef) in poly.terms() {
                let entry = acc
                    .entry((deltas.clone(), beta.clone()))
                    .or_insert_with(|| LaurentPoly::zero(nv));
                entry.add_term(r.clone(), coef.clone());
            }
        }
    }
    let mut total = RationalSeries::zero(vars.clone());
    for ((deltas, beta), zpoly) in acc {
        if zpoly.is_zero() {
            continue;
        }
        let mut part = RationalSeries::from_poly(vars.clone(), zpoly)?;
        for (l, g) in gens.iter().enumerate() {
            part = part.mul(&power_sum_series(beta[l] as u32, &deltas[l], g, vars)?)?;
        }
        total = total.add(&part)?;
    }
    Ok(total)
}

fn cone_sum(
    cones: &[HalfOpenCone],
    terms: &[SeparableTerm],
    vars: &VarSet,
) -> Result<RationalSeries> {
    let parts: Vec<RationalSeries> = cones
        .par_iter()
        .map(|c| weighted_cone_series(c, terms, vars))
        .collect::<Result<_>>()?;
    RationalSeries::sum(vars, &parts)
}

/// `sum_n sum_{a in nP} h(a) t^a x^n` over `t1..ts, x`.
pub fn s_series(p: &Polytope, h: &Weight) -> Result<RationalSeries> {
    let s = p.ambient_dim();
    let vars = VarSet::ehrhart(0, s);
    let terms = separable_terms(h, s)?;
    let cones = half_open_decompose(&p.triangulate(PointConfig::Vertices)?)?;
    cone_sum(&cones, &terms, &vars)
}

/// `sum_{n >= 1} sum_{a in relint(nP)} h(-a) t^a x^n`.
pub fn interior_s_series(p: &Polytope, h: &Weight) -> Result<RationalSeries> {
    let s = p.ambient_dim();
    let vars = VarSet::ehrhart(0, s);
    let terms = separable_terms(&h.reflected(), s)?;
    let cones = interior_decompose(&p.triangulate(PointConfig::Vertices)?)?;
    cone_sum(&cones, &terms, &vars)
}

/// Whether `F(1/t, 1/x) = (-1)^{dim P + 1} F°(t, x)` for the weighted series
/// of an exponential-polynomial weight.
pub fn s_reciprocity_check(p: &Polytope, h: &Weight) -> Result<bool> {
    let f = s_series(p, h)?;
    let inner = interior_s_series(p, h)?;
    let sign = if (p.dim() + 1).is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    };
    f.invert_all()?.series_equal(&inner.scale(&sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn u() -> VarSet {
        VarSet::new(["x"]).unwrap()
    }

    #[test]
    fn eulerian() {
        assert_eq!(eulerian_numerator(0), vec![int(1)]);
        assert_eq!(eulerian_numerator(1), vec![int(0), int(1)]);
        assert_eq!(eulerian_numerator(2), vec![int(0), int(1), int(1)]);
        assert_eq!(eulerian_numerator(3), vec![int(0), int(1), int(4), int(1)]);
    }

    #[test]
    fn one_dimensional_forms() {
        let v = u();
        let one = expo_poly_1d_series(
            &[ExpTerm::new(vec![int(1)], int(1))],
            &int(0),
            &[1],
            Direction::Forward,
            &v,
        )
        .unwrap();
        let geo =
            RationalSeries::with_binomials(v.clone(), LaurentPoly::one(1), vec![vec![1]]).unwrap();
        assert!(one.series_equal(&geo).unwrap());
        let lin = expo_poly_1d_series(
            &[ExpTerm::new(vec![int(0), int(1)], int(1))],
            &int(0),
            &[1],
            Direction::Forward,
            &v,
        )
        .unwrap();
        let expected = RationalSeries::with_binomials(
            v.clone(),
            LaurentPoly::monomial(vec![1], int(1)),
            vec![vec![1], vec![1]],
        )
        .unwrap();
        assert!(lin.series_equal(&expected).unwrap());
        let pow = expo_poly_1d_series(
            &[ExpTerm::new(vec![int(1)], int(2))],
            &int(0),
            &[1],
            Direction::Forward,
            &v,
        )
        .unwrap();
        let expected = RationalSeries::new(
            v.clone(),
            LaurentPoly::one(1),
            vec![Factor::new(int(2), vec![1])],
        )
        .unwrap();
        assert!(pow.series_equal(&expected).unwrap());
    }

    #[test]
    fn one_dimensional_reciprocity() {
        let v = u();
        let cases = vec![
            vec![ExpTerm::new(vec![int(1)], int(1))],
            vec![ExpTerm::new(vec![int(0), int(1)], int(1))],
            vec![ExpTerm::new(vec![int(1), int(0), int(3)], rat(1, 2))],
            vec![
                ExpTerm::new(vec![int(2)], int(3)),
                ExpTerm::new(vec![int(0), int(1)], int(1)),
            ],
        ];
        for shift in [int(0), rat(1, 3)] {
            for terms in &cases {
                let g = expo_poly_1d_series(terms, &shift, &[1], Direction::Forward, &v).unwrap();
                let gbar =
                    expo_poly_1d_series(terms, &shift, &[1], Direction::Backward, &v).unwrap();
                assert!(g.invert_all().unwrap().series_equal(&gbar.neg()).unwrap());
                // Backward coefficients are P(shift - n) gamma^{-n}.
                let coeffs = gbar.expand(4).unwrap();
                for (n, c) in coeffs.iter().enumerate().skip(1) {
                    let x = &shift - int(n as i64);
                    let expected: Rat = terms
                        .iter()
                        .map(|t| {
                            let pv = t.poly.iter().rev().fold(Rat::zero(), |acc, c| acc * &x + c);
                            pv * rat_pow(&t.base, -(n as i64))
                        })
                        .sum();
                    assert_eq!(c.constant_term(), expected);
                }
            }
        }
    }

    #[test]
    fn separable_expansion() {
        let h = Weight::ExpPoly(vec![
            vec![ExpTerm::new(vec![int(1), int(1)], int(2))],
            vec![
                ExpTerm::new(vec![int(3)], int(1)),
                ExpTerm::new(vec![int(0), int(2)], int(1)),
            ],
        ]);
        let terms = separable_terms(&h, 2).unwrap();
        for a in [[0i64, 0], [1, 2], [3, -1]] {
            let v: Rat = terms
                .iter()
                .map(|t| {
                    &t.coeff
                        * (0..2)
                            .map(|i| {
                                rat_pow(&int(a[i]), t.exps[i] as i64) * rat_pow(&t.bases[i], a[i])
                            })
                            .product::<Rat>()
                })
                .sum();
            assert_eq!(v, h.eval(&a).unwrap());
        }
    }
}
