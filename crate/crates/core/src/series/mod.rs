//! Generating functions of cones over polytopes and the q-, r- and
//! s-weighted multivariate Ehrhart series.

mod cone;
mod exppoly;

pub use cone::{
    cone_over, half_open_decompose, homogenize, interior_decompose, transform, HalfOpenCone,
    SimplicialCone,
};
pub use exppoly::{
    eulerian_numerator, expo_poly_1d_series, interior_s_series, power_sum_series,
    s_reciprocity_check, s_series, separable_terms, weighted_cone_series, Direction, SeparableTerm,
};

use crate::algebra::{int, RationalSeries, VarSet};
use crate::error::{Error, Result};
use crate::lift::{Weight, WeightSystem};
use crate::polytope::{PointConfig, Polytope, Triangulation};

/// Moves a series over `t1..ts, x` into `q1..qp, t1..ts, x`, replacing each
/// `t_i` by `q^{exps[i]} t_i`.
fn weight_substitution(f: &RationalSeries, exps: &[Vec<i64>], p: usize) -> Result<RationalSeries> {
    let s = exps.len();
    let vars = VarSet::ehrhart(p, s);
    let map: Vec<usize> = (0..=s).map(|i| p + i).collect();
    let mut g = f.reembed(vars.clone(), &map)?;
    for (i, e) in exps.iter().enumerate() {
        let mut m = vec![0; vars.len()];
        m[..p].copy_from_slice(e);
        m[p + i] = 1;
        g = g.substitute_monomial(p + i, &m)?;
    }
    Ok(g)
}

/// `exps[i][j] = w_j(e_i)`.
fn unit_values(forms: &[Vec<i64>], s: usize) -> Vec<Vec<i64>> {
    (0..s)
        .map(|i| forms.iter().map(|c| c[i]).collect())
        .collect()
}

/// Sets every `t_i` to one.
pub fn specialize_t(f: &RationalSeries, p: usize, s: usize) -> Result<RationalSeries> {
    (0..s).try_fold(f.clone(), |acc, i| acc.specialize_one(p + i))
}

/// Sets every `q_j` to one.
pub fn specialize_q(f: &RationalSeries, p: usize) -> Result<RationalSeries> {
    (0..p).try_fold(f.clone(), |acc, j| acc.specialize_one(j))
}

/// `F^{q,w}(q, t, x) = sum_n sum_{a in nP} q^{w(a)} t^a x^n`.
pub fn q_weighted_series(p: &Polytope, ws: &WeightSystem) -> Result<RationalSeries> {
    let t = p.triangulate(PointConfig::Vertices)?;
    q_series_from_triangulation(p, ws, &t, false)
}

/// The q-series assembled cone by cone over a given triangulation, with the
/// `t` variables optionally set to one on each cone before summing.
pub fn q_series_from_triangulation(
    p: &Polytope,
    ws: &WeightSystem,
    t: &Triangulation,
    set_t_one: bool,
) -> Result<RationalSeries> {
    let s = p.ambient_dim();
    let forms = ws.linear_forms(s)?;
    let np = forms.len();
    let exps = unit_values(&forms, s);
    let base_vars = VarSet::ehrhart(0, s);
    let cones = half_open_decompose(t)?;
    let mut total = RationalSeries::zero(VarSet::ehrhart(np, s));
    for c in &cones {
        let mut part = weight_substitution(&c.transform(&base_vars)?, &exps, np)?;
        if set_t_one {
            part = specialize_t(&part, np, s)?;
        }
        total = total.add(&part)?;
    }
    Ok(total)
}

/// `F^{r,w} = sum_{I} (prod_{j in I} -q_j) / prod_i (1 - q_i) * F^{q,w}|_{q_k = 1, k not in I}`.
pub fn r_weighted_series(p: &Polytope, ws: &WeightSystem) -> Result<RationalSeries> {
    let s = p.ambient_dim();
    ws.liftable_forms(s)?;
    let np = ws.len();
    let f = q_weighted_series(p, ws)?;
    let vars = f.vars().clone();
    let nv = vars.len();
    let mut total = RationalSeries::zero(vars.clone());
    for mask in 0u32..(1 << np) {
        let mut g = f.clone();
        let mut sign_mono = vec![0i64; nv];
        for (j, m) in sign_mono.iter_mut().enumerate().take(np) {
            if mask >> j & 1 == 1 {
                *m = 1;
            } else {
                g = g.specialize_one(j)?;
            }
        }
        let sign = if mask.count_ones() % 2 == 0 {
            int(1)
        } else {
            int(-1)
        };
        let mut factors: Vec<crate::algebra::Factor> = g.den().factors().to_vec();
        factors.extend((0..np).map(|j| crate::algebra::Factor::binomial(vars.unit(j))));
        let num = g.num().mul_monomial(&sign_mono, &sign);
        total = total.add(&RationalSeries::new(vars.clone(), num, factors)?)?;
    }
    Ok(total)
}

/// `F^{s,w}(t, x) = sum_n sum_{a in nP} w(a) t^a x^n`.
///
/// Linear weights go through `(q d/dq F^{q,w})|_{q=1}`; other weights through
/// the exponential-polynomial cone expansion.
pub fn s_weighted_series(p: &Polytope, w: &Weight) -> Result<RationalSeries> {
    let s = p.ambient_dim();
    match w {
        Weight::Linear(_) => {
            let f = q_weighted_series(p, &WeightSystem::new(vec![w.clone()]))?;
            f.q_derivative_at_one(0)?
                .drop_variable(0, VarSet::ehrhart(0, s))
        }
        _ => s_series(p, w),
    }
}

/// `sum_{n >= 1} sum_{a in int(nP)} q^{-w(-a)} t^a x^n` for full-dimensional `P`.
pub fn interior_q_series(p: &Polytope, ws: &WeightSystem) -> Result<RationalSeries> {
    if !p.is_full_dimensional() {
        return Err(Error::Precondition(
            "the cone over P must be full-dimensional".into(),
        ));
    }
    let s = p.ambient_dim();
    let forms = ws.linear_forms(s)?;
    let reflected: Vec<Vec<i64>> = forms
        .iter()
        .map(|c| c.iter().map(|x| -x).collect())
        .collect();
    // -w(-e_i)
    let exps: Vec<Vec<i64>> = unit_values(&reflected, s)
        .into_iter()
        .map(|row| row.into_iter().map(|x| -x).collect())
        .collect();
    let t = p.triangulate(PointConfig::Vertices)?;
    let cones = interior_decompose(&t)?;
    let base = transform(&cones, &VarSet::ehrhart(0, s))?;
    weight_substitution(&base, &exps, forms.len())
}

/// Whether `F^{q,w}(1/q, 1/t, 1/x) = (-1)^{s+1} F°^{q,w}(q, t, x)`.
pub fn reciprocity_check_q(p: &Polytope, ws: &WeightSystem) -> Result<bool> {
    let f = q_weighted_series(p, ws)?;
    let inner = interior_q_series(p, ws)?;
    let sign = if (p.ambient_dim() + 1).is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    };
    f.invert_all()?.series_equal(&inner.scale(&sign))
}

/// `F°^{r,w}`-side of the inversion identity for the r-series:
/// `sum_I (prod_{j in I} -q_j^{-1}) / prod_i (1 - q_i^{-1}) * F°^{q,w}|_{q_k = 1, k not in I}`,
/// scaled by `(-1)^{s+1}`; equal to `F^{r,w}` with every variable inverted.
pub fn r_inversion_from_interior(p: &Polytope, ws: &WeightSystem) -> Result<RationalSeries> {
    let s = p.ambient_dim();
    ws.liftable_forms(s)?;
    let np = ws.len();
    let inner = interior_q_series(p, ws)?;
    let vars = inner.vars().clone();
    let nv = vars.len();
    let mut total = RationalSeries::zero(vars.clone());
    for mask in 0u32..(1 << np) {
        let mut g = inner.clone();
        let mut mono = vec![0i64; nv];
        for (j, m) in mono.iter_mut().enumerate().take(np) {
            if mask >> j & 1 == 1 {
                *m = -1;
            } else {
                g = g.specialize_one(j)?;
            }
        }
        let sign = if mask.count_ones() % 2 == 0 {
            int(1)
        } else {
            int(-1)
        };
        let mut factors: Vec<crate::algebra::Factor> = g.den().factors().to_vec();
        let mut num = g.num().mul_monomial(&mono, &sign);
        for j in 0..np {
            // 1 / (1 - q_j^{-1}) = -q_j / (1 - q_j)
            let mut e = vec![0i64; nv];
            e[j] = 1;
            num = num.mul_monomial(&e, &int(-1));
            factors.push(crate::algebra::Factor::binomial(vars.unit(j)));
        }
        total = total.add(&RationalSeries::new(vars.clone(), num, factors)?)?;
    }
    let sign = if (s + 1).is_multiple_of(2) { int(1) } else { int(-1) };
    Ok(total.scale(&sign))
}

/// The plain Ehrhart series `sum_n |nP ∩ Z^s| x^n` in the single variable `x`.
pub fn ehrhart_series(p: &Polytope) -> Result<RationalSeries> {
    let s = p.ambient_dim();
    let t = p.triangulate(PointConfig::Vertices)?;
    // Setting t = 1 cone by cone keeps every sum univariate in x.
    let f = q_series_from_triangulation(p, &WeightSystem::empty(), &t, true)?;
    Ok(drop_t_variables(&f, 0, s)?.reduced())
}

/// Drops the `t` variables of a series over `q1..qp, t1..ts, x` in which they no longer occur.
pub fn drop_t_variables(f: &RationalSeries, p: usize, s: usize) -> Result<RationalSeries> {
    let mut g = f.clone();
    for i in (0..s).rev() {
        let names: Vec<String> = g
            .vars()
            .names()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != p + i)
            .map(|(_, n)| n.clone())
            .collect();
        g = g.drop_variable(p + i, VarSet::new(names)?)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests;
