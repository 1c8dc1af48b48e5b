use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::laurent::{render_monomial, substitute_exp, Exponent, LaurentPoly};
use super::rat::{rat_to_string, Rat};
use super::VarSet;
use crate::error::{Error, Result};

/// The factor `1 - coeff * z^exponent`.
///
/// Binomials proper have `coeff = 1`; other coefficients arise from
/// exponential weights, where `sum_n (gamma z^g)^n = 1/(1 - gamma z^g)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub exponent: Exponent,
    pub coeff: Rat,
}

impl Factor {
    pub fn binomial(exponent: Exponent) -> Self {
        Factor {
            exponent,
            coeff: Rat::one(),
        }
    }

    pub fn new(coeff: Rat, exponent: Exponent) -> Self {
        Factor { exponent, coeff }
    }

    pub fn as_poly(&self) -> LaurentPoly {
        let n = self.exponent.len();
        let mut p = LaurentPoly::one(n);
        p.add_term(self.exponent.clone(), -&self.coeff);
        p
    }

    fn is_trivial_exponent(&self) -> bool {
        self.exponent.iter().all(|&e| e == 0)
    }
}

/// Multiset of factors `1 - c z^g`, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BinomialDenominator {
    factors: Vec<Factor>,
}

impl BinomialDenominator {
    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Distinct factors with multiplicities.
    pub fn grouped(&self) -> BTreeMap<Factor, usize> {
        let mut m = BTreeMap::new();
        for f in &self.factors {
            *m.entry(f.clone()).or_insert(0) += 1;
        }
        m
    }

    pub fn product(&self, nvars: usize) -> LaurentPoly {
        self.factors
            .iter()
            .fold(LaurentPoly::one(nvars), |acc, f| &acc * &f.as_poly())
    }
}

/// A rational function `num / prod (1 - c_i z^{g_i})`, read as a power
/// series in the last variable of its [`VarSet`].
///
/// Every stored factor is oriented so that its exponent has positive degree
/// in the expansion variable, or, when that degree is zero, a positive first
/// nonzero entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    vars: VarSet,
    num: LaurentPoly,
    den: BinomialDenominator,
}

impl RationalSeries {
    pub fn new(vars: VarSet, num: LaurentPoly, factors: Vec<Factor>) -> Result<Self> {
        let n = vars.len();
        if num.nvars() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: num.nvars(),
            });
        }
        if let Some(f) = factors.iter().find(|f| f.exponent.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: f.exponent.len(),
            });
        }
        let mut num = num;
        let mut kept = Vec::with_capacity(factors.len());
        for f in factors {
            if f.coeff.is_zero() {
                continue;
            }
            if f.is_trivial_exponent() {
                let k = Rat::one() - &f.coeff;
                if k.is_zero() {
                    return Err(Error::VanishingFactor("1 - 1".into()));
                }
                num = num.scale(&k.recip());
                continue;
            }
            if leading_sign(&f.exponent) < 0 {
                // 1 - c z^g = -c z^g (1 - c^{-1} z^{-g})
                let neg: Exponent = f.exponent.iter().map(|e| -e).collect();
                num = num.mul_monomial(&neg, &(-f.coeff.recip()));
                kept.push(Factor::new(f.coeff.recip(), neg));
            } else {
                kept.push(f);
            }
        }
        if num.is_zero() {
            kept.clear();
        }
        kept.sort();
        Ok(RationalSeries {
            vars,
            num,
            den: BinomialDenominator { factors: kept },
        })
    }

    pub fn zero(vars: VarSet) -> Self {
        let n = vars.len();
        RationalSeries {
            vars,
            num: LaurentPoly::zero(n),
            den: BinomialDenominator::default(),
        }
    }

    pub fn from_poly(vars: VarSet, num: LaurentPoly) -> Result<Self> {
        Self::new(vars, num, Vec::new())
    }

    /// `num / prod (1 - z^g)`.
    pub fn with_binomials(vars: VarSet, num: LaurentPoly, exps: Vec<Exponent>) -> Result<Self> {
        Self::new(vars, num, exps.into_iter().map(Factor::binomial).collect())
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &BinomialDenominator {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn neg(&self) -> Self {
        RationalSeries {
            vars: self.vars.clone(),
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let num = self.num.scale(c);
        let den = if num.is_zero() {
            BinomialDenominator::default()
        } else {
            self.den.clone()
        };
        RationalSeries {
            vars: self.vars.clone(),
            num,
            den,
        }
    }

    /// Multiplies the numerator by a Laurent polynomial.
    pub fn mul_poly(&self, p: &LaurentPoly) -> Result<Self> {
        Self::new(self.vars.clone(), &self.num * p, self.den.factors.clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.vars.check_same(&other.vars)?;
        let mut factors = self.den.factors.clone();
        factors.extend(other.den.factors.iter().cloned());
        Self::new(self.vars.clone(), &self.num * &other.num, factors)
    }

    /// Sum over the least common multiple of the two factor multisets.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.vars.check_same(&other.vars)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let n = self.vars.len();
        let ga = self.den.grouped();
        let gb = other.den.grouped();
        let mut lcm = ga.clone();
        for (f, &k) in &gb {
            let e = lcm.entry(f.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let missing = |own: &BTreeMap<Factor, usize>| -> LaurentPoly {
            let mut p = LaurentPoly::one(n);
            for (f, &k) in &lcm {
                let have = own.get(f).copied().unwrap_or(0);
                for _ in have..k {
                    p = &p * &f.as_poly();
                }
            }
            p
        };
        let num = &(&self.num * &missing(&ga)) + &(&other.num * &missing(&gb));
        let factors = lcm
            .into_iter()
            .flat_map(|(f, k)| std::iter::repeat_n(f, k))
            .collect();
        Self::new(self.vars.clone(), num, factors)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn sum<'a>(
        vars: &VarSet,
        items: impl IntoIterator<Item = &'a RationalSeries>,
    ) -> Result<Self> {
        items
            .into_iter()
            .try_fold(RationalSeries::zero(vars.clone()), |acc, s| acc.add(s))
    }

    /// Cancels denominator factors that divide the numerator exactly.
    pub fn reduced(&self) -> Self {
        let mut num = self.num.clone();
        let mut kept = Vec::new();
        for f in self.den.factors() {
            match num.div_binomial(&f.coeff, &f.exponent) {
                Some(q) if !num.is_zero() => num = q,
                _ => kept.push(f.clone()),
            }
        }
        RationalSeries::new(self.vars.clone(), num, kept)
            .expect("cancelling factors keeps a valid series")
    }

    /// Equality of rational functions by cross-multiplication.
    pub fn series_equal(&self, other: &Self) -> Result<bool> {
        self.vars.check_same(&other.vars)?;
        // Cancel the common part of the two denominators first.
        let ga = self.den.grouped();
        let gb = other.den.grouped();
        let n = self.vars.len();
        let mut left = self.num.clone();
        let mut right = other.num.clone();
        for (f, &kb) in &gb {
            let ka = ga.get(f).copied().unwrap_or(0);
            for _ in ka.min(kb)..kb {
                left = &left * &f.as_poly();
            }
        }
        for (f, &ka) in &ga {
            let kb = gb.get(f).copied().unwrap_or(0);
            for _ in kb.min(ka)..ka {
                right = &right * &f.as_poly();
            }
        }
        debug_assert_eq!(left.nvars(), n);
        Ok(left == right)
    }

    /// Substitutes `z -> z^{-1}` for each listed variable and restores the
    /// factor orientation via `1 - c z^{-g} = -c z^{-g} (1 - c^{-1} z^g)`.
    pub fn invert_variables(&self, vars: &[usize]) -> Result<Self> {
        let flip = |e: &[i64]| -> Exponent {
            let mut out = e.to_vec();
            for &v in vars {
                out[v] = -out[v];
            }
            out
        };
        let num = self.num.map_exponents(self.vars.len(), flip);
        let factors = self
            .den
            .factors
            .iter()
            .map(|f| Factor::new(f.coeff.clone(), flip(&f.exponent)))
            .collect();
        Self::new(self.vars.clone(), num, factors)
    }

    pub fn invert_all(&self) -> Result<Self> {
        let all: Vec<usize> = (0..self.vars.len()).collect();
        self.invert_variables(&all)
    }

    /// Replaces `var^k` by `z^{k m}` in numerator and denominator.
    ///
    /// `m` is the full exponent of the replacement monomial, so `m = e_var`
    /// is the identity and `m = 0` specializes `var` to one. A factor that
    /// would become `1 - 1` is first cancelled against the numerator; if the
    /// cancellation is not exact the specialization is ill-posed.
    pub fn substitute_monomial(&self, var: usize, m: &[i64]) -> Result<Self> {
        let n = self.vars.len();
        if m.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.len(),
            });
        }
        if var >= n {
            return Err(Error::UnknownVariable(format!("#{var}")));
        }
        let mut num = self.num.clone();
        let mut factors = Vec::with_capacity(self.den.len());
        for f in &self.den.factors {
            let img = substitute_exp(&f.exponent, var, m);
            if img.iter().all(|&e| e == 0) && f.coeff.is_one() {
                num = num.div_binomial(&f.coeff, &f.exponent).ok_or_else(|| {
                    Error::IllPosedSpecialization(format!(
                        "factor (1-{}) vanishes and does not cancel",
                        render_monomial(&f.exponent, &self.vars)
                    ))
                })?;
                continue;
            }
            factors.push(Factor::new(f.coeff.clone(), img));
        }
        let num = num.substitute(var, m);
        Self::new(self.vars.clone(), num, factors)
    }

    /// Sets `var = 1`.
    pub fn specialize_one(&self, var: usize) -> Result<Self> {
        self.substitute_monomial(var, &vec![0; self.vars.len()])
    }

    /// `(var * d/dvar A)` evaluated at `var = 1`, by the quotient rule on the
    /// factored denominator.
    pub fn q_derivative_at_one(&self, var: usize) -> Result<Self> {
        let n = self.vars.len();
        if var >= n {
            return Err(Error::UnknownVariable(format!("#{var}")));
        }
        // theta(z^e) = e[var] z^e
        let theta = |p: &LaurentPoly| -> LaurentPoly {
            LaurentPoly::from_terms(
                n,
                p.terms()
                    .map(|(e, c)| (e.clone(), c * Rat::from_integer(e[var].into()))),
            )
        };
        let grouped = self.den.grouped();
        let involved: Vec<(&Factor, usize)> = grouped
            .iter()
            .filter(|(f, _)| f.exponent[var] != 0)
            .map(|(f, &k)| (f, k))
            .collect();
        // A = N / D; theta A = (theta N * S + N * sum_i k_i c_i g_i z^{g_i} S/f_i) / (D * S),
        // S the product of the distinct factors involving var.
        let s_prod = involved
            .iter()
            .fold(LaurentPoly::one(n), |acc, (f, _)| &acc * &f.as_poly());
        let mut num = &theta(&self.num) * &s_prod;
        for (i, (f, k)) in involved.iter().enumerate() {
            let mut term = LaurentPoly::monomial(
                f.exponent.clone(),
                &f.coeff * Rat::from_integer((f.exponent[var] * *k as i64).into()),
            );
            for (j, (g, _)) in involved.iter().enumerate() {
                if i != j {
                    term = &term * &g.as_poly();
                }
            }
            num = &num + &(&self.num * &term);
        }
        let mut factors = self.den.factors.clone();
        factors.extend(involved.iter().map(|(f, _)| (*f).clone()));
        let derived = Self::new(self.vars.clone(), num, factors)?;
        derived.specialize_one(var)
    }

    /// Coefficients of `x^0 .. x^N` where `x = vars[var]`, each a Laurent
    /// polynomial with exponent zero in `x`.
    pub fn truncate(&self, var: usize, order: usize) -> Result<Vec<LaurentPoly>> {
        let n = self.vars.len();
        let order = order as i64;
        let mut xfree = Vec::new();
        let mut xfactors = Vec::new();
        for f in &self.den.factors {
            match f.exponent[var].signum() {
                0 => xfree.push(f),
                1 => xfactors.push(f),
                _ => {
                    return Err(Error::NotExpandable(format!(
                        "factor with negative degree in {}",
                        self.vars.name(var)
                    )))
                }
            }
        }
        let low = self.num.min_degree(var).unwrap_or(0).min(0);
        let top = order - low;
        // Drop every term beyond degree `order` in var.
        let clip = |p: LaurentPoly| -> LaurentPoly {
            LaurentPoly::from_terms(
                n,
                p.terms()
                    .filter(|(e, _)| e[var] <= order)
                    .map(|(e, c)| (e.clone(), c.clone())),
            )
        };
        let mut acc = clip(self.num.clone());
        for f in xfactors {
            let step = f.exponent[var];
            let mut geo = LaurentPoly::one(n);
            let mut power = LaurentPoly::one(n);
            let mut k = 1;
            while k * step <= top {
                power = power.mul_monomial(&f.exponent, &f.coeff);
                geo = &geo + &power;
                k += 1;
            }
            acc = clip(&acc * &geo);
        }
        let by_deg = acc.split_by_degree(var);
        if by_deg.range(..0).next().is_some() {
            return Err(Error::NotExpandable(format!(
                "negative powers of {} survive",
                self.vars.name(var)
            )));
        }
        let mut out = Vec::with_capacity(order as usize + 1);
        for d in 0..=order {
            let mut c = by_deg
                .get(&d)
                .cloned()
                .unwrap_or_else(|| LaurentPoly::zero(n));
            for f in &xfree {
                c = c.div_binomial(&f.coeff, &f.exponent).ok_or_else(|| {
                    Error::NotExpandable(format!(
                        "coefficient of {}^{d} is not divisible by (1-{})",
                        self.vars.name(var),
                        render_monomial(&f.exponent, &self.vars)
                    ))
                })?;
            }
            out.push(c);
        }
        Ok(out)
    }

    /// Truncation in the expansion variable.
    pub fn expand(&self, order: usize) -> Result<Vec<LaurentPoly>> {
        self.truncate(self.vars.expansion_index(), order)
    }

    /// Re-embeds into a wider variable set; `map[i]` is the new index of variable `i`.
    pub fn reembed(&self, vars: VarSet, map: &[usize]) -> Result<Self> {
        if map.len() != self.vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vars.len(),
                got: map.len(),
            });
        }
        let n = vars.len();
        let f = |e: &[i64]| -> Exponent {
            let mut out = vec![0; n];
            for (i, &k) in e.iter().enumerate() {
                out[map[i]] += k;
            }
            out
        };
        let num = self.num.map_exponents(n, f);
        let factors = self
            .den
            .factors
            .iter()
            .map(|fa| Factor::new(fa.coeff.clone(), f(&fa.exponent)))
            .collect();
        Self::new(vars, num, factors)
    }
}

impl RationalSeries {
    /// Removes a variable that does not occur, moving to `vars`, which must
    /// list the remaining variables in order.
    pub fn drop_variable(&self, var: usize, vars: VarSet) -> Result<Self> {
        let n = self.vars.len();
        if vars.len() + 1 != n {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                got: vars.len(),
            });
        }
        let occurs = self.num.terms().any(|(e, _)| e[var] != 0)
            || self.den.factors.iter().any(|f| f.exponent[var] != 0);
        if occurs {
            return Err(Error::Precondition(format!(
                "variable {} still occurs",
                self.vars.name(var)
            )));
        }
        let drop = |e: &[i64]| -> Exponent {
            e.iter()
                .enumerate()
                .filter(|&(i, _)| i != var)
                .map(|(_, &x)| x)
                .collect()
        };
        let num = self.num.map_exponents(n - 1, drop);
        let factors = self
            .den
            .factors
            .iter()
            .map(|f| Factor::new(f.coeff.clone(), drop(&f.exponent)))
            .collect();
        Self::new(vars, num, factors)
    }
}

/// Sign of the first nonzero entry, reading the expansion variable (last
/// index) first.
fn leading_sign(e: &[i64]) -> i64 {
    let last = e.len() - 1;
    if e[last] != 0 {
        return e[last].signum();
    }
    e[..last]
        .iter()
        .find(|&&x| x != 0)
        .map(|x| x.signum())
        .unwrap_or(0)
}

fn render_factor(f: &Factor, vars: &VarSet) -> String {
    let mono = render_monomial(&f.exponent, vars);
    if f.coeff.is_one() {
        format!("1-{mono}")
    } else if f.coeff.is_negative() {
        format!("1+{}*{mono}", rat_to_string(&-&f.coeff))
    } else {
        format!("1-{}*{mono}", rat_to_string(&f.coeff))
    }
}

impl fmt::Display for RationalSeries {
    /// `(num)/((1-m1)(1-m2)^2...)`, or `(num)/(1-m)^k` for a single distinct factor.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.num.render(&self.vars))?;
        let grouped = self.den.grouped();
        if grouped.is_empty() {
            return Ok(());
        }
        let parts: Vec<String> = grouped
            .iter()
            .map(|(fa, &k)| {
                if k == 1 {
                    format!("({})", render_factor(fa, &self.vars))
                } else {
                    format!("({})^{k}", render_factor(fa, &self.vars))
                }
            })
            .collect();
        if parts.len() == 1 {
            write!(f, "/{}", parts[0])
        } else {
            write!(f, "/({})", parts.concat())
        }
    }
}
