//! Brute-force weighted counting, interpolation of Ehrhart-type polynomials,
//! h*-data, and the check battery relating lifting polytopes to weighted counts.

mod battery;
mod checks;
mod report;

pub use battery::{battery, run_battery, Case};
pub use checks::{
    compatible_triangulation_search, verify_bounds, verify_dim_formula, verify_hilbert_lift,
    verify_leading_coefficient, verify_non_noetherian_witness, verify_oracles, verify_positivity,
    verify_q_lift, verify_q_reciprocity, verify_r_lift, verify_s_reciprocity, CompatibleSearch,
    NON_NOETHERIAN_GUARD,
};
pub use report::{CheckLine, Report};

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::algebra::{int, rat_to_string, LaurentPoly, Rat, RationalSeries, VarSet};
use crate::error::{Error, Result};
use crate::lift::{Weight, WeightSystem};
use crate::polytope::Polytope;

/// `sum_{a in nP} f(a)`.
pub fn count_weighted(p: &Polytope, f: &Weight, n: u64) -> Result<Rat> {
    f.validate(p.ambient_dim())?;
    p.lattice_points(n).iter().map(|a| f.eval(a)).sum()
}

/// `sum_{a in nP} q^{w(a)} t^a` over `q1..qp, t1..ts, x`, free of `x` so it
/// compares directly with a truncation coefficient.
pub fn count_q(p: &Polytope, ws: &WeightSystem, n: u64) -> Result<LaurentPoly> {
    let pts = p.lattice_points(n);
    q_monomials(p, ws, &pts, false)
}

/// `sum_{a in int(nP)} q^{-w(-a)} t^a`, the interior counterpart of [`count_q`].
pub fn count_q_interior(p: &Polytope, ws: &WeightSystem, n: u64) -> Result<LaurentPoly> {
    let pts = p.interior_lattice_points(n);
    q_monomials(p, ws, &pts, true)
}

fn q_monomials(
    p: &Polytope,
    ws: &WeightSystem,
    pts: &[Vec<i64>],
    reflect: bool,
) -> Result<LaurentPoly> {
    let s = p.ambient_dim();
    ws.linear_forms(s)?;
    let np = ws.len();
    let mut out = LaurentPoly::zero(np + s + 1);
    for a in pts {
        let mut e = if reflect {
            let neg: Vec<i64> = a.iter().map(|x| -x).collect();
            ws.linear_values(&neg)?.into_iter().map(|v| -v).collect()
        } else {
            ws.linear_values(a)?
        };
        e.extend(a);
        e.push(0);
        out.add_term(e, Rat::one());
    }
    Ok(out)
}

/// `sum_{a in nP} t^a prod_i (1 + q_i + .. + q_i^{w_i(a)})`.
pub fn count_r(p: &Polytope, ws: &WeightSystem, n: u64) -> Result<LaurentPoly> {
    let s = p.ambient_dim();
    ws.linear_forms(s)?;
    let np = ws.len();
    let nv = np + s + 1;
    let mut out = LaurentPoly::zero(nv);
    for a in p.lattice_points(n) {
        let vals = ws.linear_values(&a)?;
        if let Some(v) = vals.iter().find(|&&v| v < 0) {
            return Err(Error::NegativeWeight(format!("w(a) = {v} at {a:?}")));
        }
        let mut e = vec![0i64; nv];
        e[np..np + s].copy_from_slice(&a);
        let mut term = LaurentPoly::monomial(e, Rat::one());
        for (i, &v) in vals.iter().enumerate() {
            let geo = LaurentPoly::from_terms(
                nv,
                (0..=v).map(|j| {
                    let mut e = vec![0i64; nv];
                    e[i] = j;
                    (e, Rat::one())
                }),
            );
            term = &term * &geo;
        }
        out = &out + &term;
    }
    Ok(out)
}

/// `sum_{a in nP} f(a) t^a` over `t1..ts, x` (free of `x`); with `interior`
/// set, sums `f(-a)` over the interior points instead.
pub fn count_s(p: &Polytope, f: &Weight, n: u64, interior: bool) -> Result<LaurentPoly> {
    let s = p.ambient_dim();
    f.validate(s)?;
    let pts = if interior {
        p.interior_lattice_points(n)
    } else {
        p.lattice_points(n)
    };
    let mut out = LaurentPoly::zero(s + 1);
    for a in pts {
        let v = if interior {
            f.eval(&a.iter().map(|x| -x).collect::<Vec<_>>())?
        } else {
            f.eval(&a)?
        };
        let mut e = a;
        e.push(0);
        out.add_term(e, v);
    }
    Ok(out)
}

/// A polynomial in one variable `n` with coefficients listed from degree 0.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, n: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * n + c)
    }

    pub fn eval_int(&self, n: i64) -> Rat {
        self.eval(&int(n))
    }

    /// The polynomial of degree below `values.len()` taking `values[k]` at `n = k`,
    /// via Newton forward differences.
    pub fn interpolate(values: &[Rat]) -> Self {
        let mut diffs = values.to_vec();
        let mut leading = Vec::with_capacity(values.len());
        for _ in 0..values.len() {
            leading.push(diffs[0].clone());
            diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        // sum_k leading[k] * binom(n, k)
        let mut out = vec![Rat::zero(); values.len().max(1)];
        let mut basis = vec![Rat::one()];
        for (k, d) in leading.iter().enumerate() {
            for (i, b) in basis.iter().enumerate() {
                out[i] += d * b;
            }
            // basis <- basis * (n - k) / (k + 1)
            let kk = int(k as i64);
            let denom = int(k as i64 + 1);
            let mut next = vec![Rat::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b / &denom;
                next[i] -= b * &kk / &denom;
            }
            basis = next;
        }
        UniPoly::new(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let a = c.abs();
            let body = match (k, a.is_integer(), a.is_one()) {
                (0, _, _) => rat_to_string(&a),
                (_, _, true) => String::new(),
                (_, true, _) => rat_to_string(&a),
                _ => format!("({})", rat_to_string(&a)),
            };
            let power = match k {
                0 => String::new(),
                1 => "n".to_string(),
                _ => format!("n^{k}"),
            };
            write!(f, "{sign}{body}{power}")?;
            first = false;
        }
        Ok(())
    }
}

/// The polynomial `E(n) = sum_{a in nP} f(a)` of degree at most `dim P + deg f`,
/// interpolated from `n = 0..dim P + deg f` and checked on three more nodes.
pub fn interpolate(p: &Polytope, f: &Weight) -> Result<UniPoly> {
    if !p.is_lattice() {
        return Err(Error::NonLattice(
            "interpolation needs a lattice polytope".into(),
        ));
    }
    let s = p.ambient_dim();
    let deg = f
        .degree(s)
        .ok_or_else(|| Error::InvalidWeight("interpolation needs a polynomial weight".into()))?;
    let top = p.dim() + deg as usize;
    let values: Vec<Rat> = (0..=top as u64)
        .map(|n| count_weighted(p, f, n))
        .collect::<Result<_>>()?;
    let e = UniPoly::interpolate(&values);
    for n in top + 1..=top + 3 {
        let got = count_weighted(p, f, n as u64)?;
        if e.eval_int(n as i64) != got {
            return Err(Error::Precondition(format!(
                "interpolated polynomial {e} disagrees with the count {got} at n = {n}"
            )));
        }
    }
    Ok(e)
}

/// The plain Ehrhart polynomial.
pub fn ehrhart_polynomial(p: &Polytope) -> Result<UniPoly> {
    interpolate(p, &Weight::constant(p.ambient_dim(), Rat::one()))
}

/// `h(x) / (1 - x)^{den_exp}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HStarData {
    /// Coefficients of `h`, from degree 0.
    pub numerator: Vec<Rat>,
    pub den_exp: usize,
}

impl HStarData {
    pub fn to_series(&self) -> RationalSeries {
        let vars = VarSet::new(["x"]).expect("single variable");
        let num = LaurentPoly::from_terms(
            1,
            self.numerator
                .iter()
                .enumerate()
                .map(|(k, c)| (vec![k as i64], c.clone())),
        );
        RationalSeries::with_binomials(vars, num, vec![vec![1]; self.den_exp])
            .expect("binomial factors in x")
    }

    pub fn is_nonnegative_integral(&self) -> bool {
        self.numerator
            .iter()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    /// Coefficient of `x^k` of `h`.
    pub fn coeff(&self, k: usize) -> Rat {
        self.numerator.get(k).cloned().unwrap_or_else(Rat::zero)
    }
}

impl fmt::Display for HStarData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = VarSet::new(["x"]).expect("single variable");
        let num = LaurentPoly::from_terms(
            1,
            self.numerator
                .iter()
                .enumerate()
                .map(|(k, c)| (vec![k as i64], c.clone())),
        );
        let den = match self.den_exp {
            0 => String::new(),
            1 => "/(1-x)".to_string(),
            k => format!("/(1-x)^{k}"),
        };
        write!(f, "({}){den}", num.render(&vars))
    }
}

/// `h(x) = (1 - x)^{deg E + 1} sum_n E(n) x^n`, exact since `h` has degree at
/// most `deg E`; the expansion is checked against `E` up to `deg E + 3`.
pub fn series_from_poly(e: &UniPoly) -> Result<HStarData> {
    let d = match e.degree() {
        Some(d) => d,
        None => {
            return Ok(HStarData {
                numerator: Vec::new(),
                den_exp: 1,
            })
        }
    };
    let values: Vec<Rat> = (0..=d as i64 + 3).map(|n| e.eval_int(n)).collect();
    let k = d + 1;
    // Binomial coefficients of (1 - x)^k with signs.
    let mut binom = vec![int(1)];
    for _ in 0..k {
        let mut next = vec![Rat::zero(); binom.len() + 1];
        for (i, b) in binom.iter().enumerate() {
            next[i] += b;
            next[i + 1] -= b;
        }
        binom = next;
    }
    let mut h: Vec<Rat> = (0..=d)
        .map(|m| (0..=m.min(k)).map(|j| &binom[j] * &values[m - j]).sum())
        .collect();
    while h.last().is_some_and(|c| c.is_zero()) {
        h.pop();
    }
    let data = HStarData {
        numerator: h,
        den_exp: k,
    };
    let expanded = data.to_series().expand(d + 3)?;
    for (n, c) in expanded.iter().enumerate() {
        if c.constant_term() != values[n] {
            return Err(Error::Precondition(format!(
                "h*-data fails to reproduce E({n})"
            )));
        }
    }
    Ok(data)
}

/// `h*`-data of a lattice polytope.
pub fn hstar(p: &Polytope) -> Result<HStarData> {
    series_from_poly(&ehrhart_polynomial(p)?)
}
