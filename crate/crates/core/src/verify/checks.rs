use std::fmt::Display;

use itertools::Itertools;
use num_traits::Zero;

use super::{
    count_q, count_q_interior, count_r, count_s, count_weighted, ehrhart_polynomial, hstar,
    interpolate, series_from_poly, Case, CheckLine,
};
use crate::algebra::{int, LaurentPoly, Rat, RationalSeries};
use crate::error::{Error, Result};
use crate::lift::{
    construct_h_pw, hilbert_basis, is_irreducible, lift_q, lift_r, SquareSumSemigroup, Weight,
    WeightSystem,
};
use crate::polytope::{all_triangulations, PointConfig, Polytope, Triangulation};
use crate::series::{
    cone_over, interior_q_series, interior_s_series, q_series_from_triangulation,
    q_weighted_series, r_weighted_series, reciprocity_check_q, s_reciprocity_check, s_series,
    s_weighted_series,
};

/// Largest `K` accepted by [`verify_non_noetherian_witness`].
pub const NON_NOETHERIAN_GUARD: u64 = 60;

/// Dilations checked by the counting identities.
const COUNT_RANGE: u64 = 5;
/// Dilations checked by the bounds.
const BOUND_RANGE: u64 = 8;
/// Truncation order of the series oracles.
const ORACLE_ORDER: usize = 6;

fn list<T: Display>(xs: &[T]) -> String {
    xs.iter().join(",")
}

/// Compares the first coefficients of `f` with `oracle(n)`; returns the first
/// mismatching `n`.
fn first_mismatch(
    f: &RationalSeries,
    oracle: impl Fn(u64) -> Result<LaurentPoly>,
) -> Result<Option<usize>> {
    for (n, c) in f.expand(ORACLE_ORDER)?.iter().enumerate() {
        if *c != oracle(n as u64)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// `|nP ∩ Z^s| = |n P^w ∩ Z^{s+p}|` for small `n`, and `dim P^w = dim P`.
pub fn verify_q_lift(case: &Case) -> Result<CheckLine> {
    let p = &case.polytope;
    let lifted = lift_q(p, &case.weights)?;
    let mut counts = Vec::new();
    for n in 0..=COUNT_RANGE {
        let a = p.count_lattice_points(n);
        let b = lifted.count_lattice_points(n);
        if a != b {
            return Ok(case.line("q-lift", false, format!("n={n} P:{a} lift:{b}")));
        }
        counts.push(a);
    }
    let dims_ok = lifted.dim() == p.dim();
    Ok(case.line(
        "q-lift",
        dims_ok,
        format!("counts={} dim={}/{}", list(&counts), p.dim(), lifted.dim()),
    ))
}

/// `E_{P_w}(n) = sum_J E^{s, prod_{j in J} w_j}(n) = E^{s, prod (w_i + 1)}(n)`.
pub fn verify_r_lift(case: &Case) -> Result<CheckLine> {
    let p = &case.polytope;
    let ws = &case.weights;
    let s = p.ambient_dim();
    ws.liftable_forms(s)?;
    let pw = lift_r(p, ws)?;
    let shifted: Vec<Weight> = ws
        .weights()
        .iter()
        .map(|w| w.plus_constant(s, int(1)))
        .collect::<Result<_>>()?;
    let prod = Weight::product(&shifted, s)?;
    let subsets: Vec<Weight> = (0..ws.len())
        .powerset()
        .map(|j| {
            Weight::product(
                &j.iter()
                    .map(|&i| ws.weights()[i].clone())
                    .collect::<Vec<_>>(),
                s,
            )
        })
        .collect::<Result<_>>()?;
    let mut counts = Vec::new();
    for n in 0..=COUNT_RANGE {
        let a = int(pw.count_lattice_points(n) as i64);
        let b: Rat = subsets
            .iter()
            .map(|w| count_weighted(p, w, n))
            .sum::<Result<Rat>>()?;
        let c = count_weighted(p, &prod, n)?;
        if a != b || a != c {
            return Ok(case.line(
                "r-lift",
                false,
                format!("n={n} lift:{a} subsets:{b} product:{c}"),
            ));
        }
        counts.push(a);
    }
    Ok(case.line("r-lift", true, format!("counts={}", list(&counts))))
}

/// Hilbert basis of the cone over `P_w` against the one built from `H_P`.
pub fn verify_hilbert_lift(case: &Case, bound: u64) -> Result<CheckLine> {
    let p = &case.polytope;
    let hp = hilbert_basis(&cone_over(p)?, bound)?;
    let expected = construct_h_pw(&hp, &case.weights)?;
    let hpw = hilbert_basis(&cone_over(&lift_r(p, &case.weights)?)?, bound)?;
    let equal = hpw.elements == expected.elements;
    Ok(case.line(
        "hilbert-lift",
        equal && hp.certified && hpw.certified,
        format!(
            "|H_P|={} |H_Pw|={} constructed={} certified={}/{} bound={bound}",
            hp.elements.len(),
            hpw.elements.len(),
            expected.elements.len(),
            hp.certified,
            hpw.certified
        ),
    ))
}

/// `dim P_w = dim P + r` with `r` the number of weights not vanishing on `P`,
/// `deg E_{P_w} = dim P_w`, and `deg E^{s, prod w_i} = dim P + p` when `r = p`.
pub fn verify_dim_formula(case: &Case) -> Result<CheckLine> {
    let p = &case.polytope;
    let ws = &case.weights;
    let s = p.ambient_dim();
    let forms = ws.liftable_forms(s)?;
    let verts = p.lattice_vertices()?;
    let r = forms
        .iter()
        .filter(|c| {
            verts
                .iter()
                .any(|v| c.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() != 0)
        })
        .count();
    let pw = lift_r(p, ws)?;
    let e = ehrhart_polynomial(&pw)?;
    let mut passed = pw.dim() == p.dim() + r && e.degree() == Some(pw.dim());
    let mut detail = format!(
        "dim(P)={} r={r} dim(Pw)={} deg(E_Pw)={}",
        p.dim(),
        pw.dim(),
        e.degree().unwrap_or(0)
    );
    if r == ws.len() {
        let es = interpolate(p, &Weight::product(ws.weights(), s)?)?;
        passed &= es.degree() == Some(p.dim() + ws.len());
        detail.push_str(&format!(" deg(E^s)={}", es.degree().unwrap_or(0)));
    }
    Ok(case.line("dim-formula", passed, detail))
}

/// For one nonzero linear weight with nonnegative coefficients on `P ⊂ N^s`:
/// `deg E^{s,w} = d + 1`, the numerator over `(1-x)^{d+2}` lies in `N[x]`, and
/// `h*(P_w) >= h*(P)` coefficientwise.
pub fn verify_positivity(case: &Case) -> Result<CheckLine> {
    let p = &case.polytope;
    let ws = &case.weights;
    let s = p.ambient_dim();
    if ws.len() != 1 {
        return Err(Error::Precondition(
            "positivity takes exactly one weight".into(),
        ));
    }
    let c = ws.liftable_forms(s)?.remove(0);
    let verts = p.lattice_vertices()?;
    if c.iter().all(|&x| x == 0) {
        return Err(Error::Precondition("weight is zero".into()));
    }
    if verts.iter().flatten().any(|&x| x < 0) {
        return Err(Error::Precondition(
            "P must lie in the nonnegative orthant".into(),
        ));
    }
    if (0..s).any(|i| c[i] > 0 && verts.iter().all(|v| v[i] == 0)) {
        return Err(Error::Precondition(
            "a weighted coordinate vanishes on P".into(),
        ));
    }
    let w = &ws.weights()[0];
    let d = p.dim();
    let e = interpolate(p, w)?;
    let h = series_from_poly(&e)?;
    let hp = hstar(p)?;
    let hpw = hstar(&lift_r(p, ws)?)?;
    let len = hp.numerator.len().max(hpw.numerator.len());
    let monotone = (0..len).all(|k| hpw.coeff(k) >= hp.coeff(k));
    let passed =
        e.degree() == Some(d + 1) && h.den_exp == d + 2 && h.is_nonnegative_integral() && monotone;
    Ok(case.line(
        "positivity",
        passed,
        format!(
            "E={e} F={h} h*(P)={} h*(Pw)={}",
            list(&hp.numerator),
            list(&hpw.numerator)
        ),
    ))
}

/// For linear `f` and `w`: `c1 n E_P(n) <= E^{s,f}(n) <= c2 n E_P(n)` with the
/// extreme vertex values of `f`; `E^{s,w}(n) / (n E_P(n))` between the extreme
/// vertex values of `w`; `vol(P_w) / vol(P)` likewise; and exact equalities
/// when `w` is constant on the vertices.
pub fn verify_bounds(case: &Case, f: &Weight, w: &Weight) -> Result<CheckLine> {
    let p = &case.polytope;
    let s = p.ambient_dim();
    let verts = p.lattice_vertices()?;
    let extremes = |g: &Weight| -> Result<(i64, i64)> {
        g.linear_coeffs()?;
        let vals: Vec<i64> = verts
            .iter()
            .map(|v| g.eval_linear(v))
            .collect::<Result<_>>()?;
        Ok((*vals.iter().min().unwrap(), *vals.iter().max().unwrap()))
    };
    let (c1, c2) = extremes(f)?;
    let (m1, m2) = extremes(w)?;
    for n in 0..=BOUND_RANGE {
        let e = int(p.count_lattice_points(n) as i64);
        let nn = int(n as i64);
        let ef = count_weighted(p, f, n)?;
        if ef < int(c1) * &nn * &e || ef > int(c2) * &nn * &e {
            return Ok(case.line(
                "bounds",
                false,
                format!("n={n} E^s,f={ef} outside [{c1},{c2}]*n*{e}"),
            ));
        }
        let ew = count_weighted(p, w, n)?;
        if n > 0 {
            let lambda = &ew / (&nn * &e);
            if lambda < int(m1) || lambda > int(m2) {
                return Ok(case.line(
                    "bounds",
                    false,
                    format!("n={n} lambda={lambda} outside [{m1},{m2}]"),
                ));
            }
        }
        if m1 == m2 && ew != int(m1) * &nn * &e {
            return Ok(case.line("bounds", false, format!("n={n} E^s,w={ew} != {m1}*n*{e}")));
        }
    }
    let mut detail = format!("f in [{c1},{c2}] w in [{m1},{m2}]");
    let liftable = WeightSystem::new(vec![w.clone()]);
    if m1 >= 0 && m2 > 0 && liftable.liftable_forms(s).is_ok() {
        let vp = p.volume()?;
        let vw = lift_r(p, &liftable)?.volume()?;
        let ok = if m1 == m2 {
            vw == &vp * int(m1)
        } else {
            vw >= &vp * int(m1) && vw <= &vp * int(m2)
        };
        detail.push_str(&format!(" vol(P)={vp} vol(Pw)={vw}"));
        if !ok {
            return Ok(case.line("bounds", false, detail));
        }
    }
    Ok(case.line("bounds", true, detail))
}

/// The top coefficient of `E^{s,f}` equals `int_P f` for homogeneous `f` on a
/// full-dimensional `P`.
pub fn verify_leading_coefficient(case: &Case, f: &Weight, label: &str) -> Result<CheckLine> {
    let p = &case.polytope;
    let s = p.ambient_dim();
    if !p.is_full_dimensional() {
        return Err(Error::Precondition("P must be full-dimensional".into()));
    }
    if !f.is_homogeneous(s) {
        return Err(Error::Precondition(
            "f must be a homogeneous polynomial".into(),
        ));
    }
    let poly = f.as_poly(s).expect("homogeneous weights are polynomial");
    let deg = f.degree(s).unwrap_or(0) as usize;
    let mut integral = Rat::zero();
    for (e, mu) in poly.terms() {
        let b: Vec<u32> = e.iter().map(|&k| k as u32).collect();
        integral += mu * p.integrate_monomial(&b)?;
    }
    let e = interpolate(p, f)?;
    let lead = e.coeff(s + deg);
    let passed = lead == integral && e.degree().is_none_or(|k| k <= s + deg);
    Ok(CheckLine::new(
        "leading-coefficient",
        &case.polytope_id,
        label,
        passed,
        format!("E={e} top={lead} integral={integral}"),
    ))
}

/// Result of the search for a weight-compatible triangulation.
#[derive(Clone, Debug)]
pub struct CompatibleSearch {
    pub found: Option<Triangulation>,
    /// Triangulations inspected before stopping.
    pub examined: usize,
    /// All triangulations of the configuration.
    pub total: usize,
    /// Whether the assembled q-series numerator (with `t = 1`) has
    /// nonnegative coefficients; set only when a triangulation is found.
    pub numerator_nonnegative: Option<bool>,
}

/// First triangulation, in enumeration order, whose simplices all carry the
/// same multiset of vertex weight vectors.
pub fn compatible_triangulation_search(
    p: &Polytope,
    ws: &WeightSystem,
    config: PointConfig,
) -> Result<CompatibleSearch> {
    let s = p.ambient_dim();
    let forms = ws.linear_forms(s)?;
    let points = p.configuration(config);
    let weight_vector = |x: &[Rat]| -> Vec<Rat> {
        forms
            .iter()
            .map(|c| c.iter().zip(x).map(|(&a, b)| int(a) * b).sum())
            .collect()
    };
    let all = all_triangulations(&points)?;
    let total = all.len();
    for (i, t) in all.into_iter().enumerate() {
        let multisets: Vec<Vec<Vec<Rat>>> = t
            .simplices()
            .iter()
            .map(|sx| {
                sx.iter()
                    .map(|&k| weight_vector(&t.points()[k]))
                    .sorted()
                    .collect()
            })
            .collect();
        if multisets.iter().all_equal() {
            let f = q_series_from_triangulation(p, ws, &t, true)?;
            let nonneg = f.num().all_coefficients_nonnegative();
            return Ok(CompatibleSearch {
                found: Some(t),
                examined: i + 1,
                total,
                numerator_nonnegative: Some(nonneg),
            });
        }
    }
    Ok(CompatibleSearch {
        found: None,
        examined: total,
        total,
        numerator_nonnegative: None,
    })
}

/// `(k^2, k)` is irreducible in `{(sum l_i^2, sum l_i)}` for every `k <= k_max`.
pub fn verify_non_noetherian_witness(k_max: u64) -> Result<CheckLine> {
    if k_max == 0 {
        return Err(Error::Precondition("K must be positive".into()));
    }
    if k_max > NON_NOETHERIAN_GUARD {
        return Err(Error::GuardExceeded(format!(
            "K = {k_max} exceeds {NON_NOETHERIAN_GUARD}"
        )));
    }
    let sg = SquareSumSemigroup::new(k_max as usize);
    let member = |e: &[i64]| sg.contains(e);
    let bad: Vec<u64> = (1..=k_max)
        .filter(|&k| {
            let k = k as i64;
            !is_irreducible(&[k * k, k], member)
        })
        .collect();
    Ok(CheckLine::new(
        "non-noetherian",
        "point1",
        "a^2",
        bad.is_empty(),
        if bad.is_empty() {
            format!("(k^2,k) irreducible for k=1..{k_max}")
        } else {
            format!("reducible at k={}", list(&bad))
        },
    ))
}

/// q-, r- and s-series against brute-force enumeration up to `x^6`.
pub fn verify_oracles(case: &Case) -> Result<CheckLine> {
    let p = &case.polytope;
    let ws = &case.weights;
    let s = p.ambient_dim();
    let mut checked = vec!["q"];
    let f = q_weighted_series(p, ws)?;
    if let Some(n) = first_mismatch(&f, |n| count_q(p, ws, n))? {
        return Ok(case.line("oracle", false, format!("q-series differs at x^{n}")));
    }
    if ws.liftable_forms(s).is_ok() {
        let r = r_weighted_series(p, ws)?;
        if let Some(n) = first_mismatch(&r, |n| count_r(p, ws, n))? {
            return Ok(case.line("oracle", false, format!("r-series differs at x^{n}")));
        }
        checked.push("r");
    }
    for (i, w) in ws.weights().iter().enumerate() {
        let g = s_weighted_series(p, w)?;
        if let Some(n) = first_mismatch(&g, |n| count_s(p, w, n, false))? {
            return Ok(case.line(
                "oracle",
                false,
                format!("s-series of w{} differs at x^{n}", i + 1),
            ));
        }
        checked.push("s");
    }
    Ok(case.line(
        "oracle",
        true,
        format!("series={} order={ORACLE_ORDER}", checked.join(",")),
    ))
}

/// q-reciprocity, with the interior series checked against enumeration.
pub fn verify_q_reciprocity(case: &Case) -> Result<CheckLine> {
    let p = &case.polytope;
    let ws = &case.weights;
    let ok = reciprocity_check_q(p, ws)?;
    let inner = interior_q_series(p, ws)?;
    let mismatch = first_mismatch(&inner, |n| count_q_interior(p, ws, n))?;
    let detail = match mismatch {
        Some(n) => format!("identity={ok} interior differs at x^{n}"),
        None => format!("identity={ok} interior order={ORACLE_ORDER}"),
    };
    Ok(case.line("q-reciprocity", ok && mismatch.is_none(), detail))
}

/// s-reciprocity for an exponential-polynomial weight, with both sides
/// checked against enumeration.
pub fn verify_s_reciprocity(
    polytope_id: &str,
    p: &Polytope,
    h: &Weight,
    label: &str,
) -> Result<CheckLine> {
    let ok = s_reciprocity_check(p, h)?;
    let outer = first_mismatch(&s_series(p, h)?, |n| count_s(p, h, n, false))?;
    let inner = first_mismatch(&interior_s_series(p, h)?, |n| count_s(p, h, n, true))?;
    let detail = match (outer, inner) {
        (None, None) => format!("identity={ok} order={ORACLE_ORDER}"),
        (Some(n), _) => format!("identity={ok} series differs at x^{n}"),
        (_, Some(n)) => format!("identity={ok} interior differs at x^{n}"),
    };
    Ok(CheckLine::new(
        "s-reciprocity",
        polytope_id,
        label,
        ok && outer.is_none() && inner.is_none(),
        detail,
    ))
}
