use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{rat_to_string, Rat};
use super::VarSet;

/// Integer exponent vector; its length equals the width of the owning [`VarSet`].
pub type Exponent = Vec<i64>;

/// Multivariate Laurent polynomial with exact rational coefficients.
///
/// Terms are kept in a map keyed by exponent vector; zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rat>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exp: Exponent, c: Rat) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Rat)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponent vector.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[i64]) -> Rat {
        self.terms.get(exp).cloned().unwrap_or_else(Rat::zero)
    }

    /// The constant term, i.e. the coefficient of the zero exponent.
    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn add_term(&mut self, exp: Exponent, c: Rat) {
        assert_eq!(exp.len(), self.nvars, "exponent width mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, exp: &[i64], c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (add_exp(e, exp), a * c))
                .collect(),
        }
    }

    /// Applies `f` to every exponent vector, merging colliding terms.
    /// `f` must produce vectors of width `nvars`.
    pub fn map_exponents(&self, nvars: usize, f: impl Fn(&[i64]) -> Exponent) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            out.add_term(f(e), c.clone());
        }
        out
    }

    /// Replaces `var^k` by `z^(k*m)`.
    pub fn substitute(&self, var: usize, m: &[i64]) -> Self {
        self.map_exponents(self.nvars, |e| substitute_exp(e, var, m))
    }

    pub fn min_degree(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[var]).min()
    }

    pub fn max_degree(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Sum of coefficients, i.e. the value at the all-ones point.
    pub fn coefficient_sum(&self) -> Rat {
        self.terms.values().fold(Rat::zero(), |acc, c| acc + c)
    }

    /// Collects the terms by degree in `var`; the returned polynomials have
    /// exponent `0` in `var`.
    pub fn split_by_degree(&self, var: usize) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[var] = 0;
            out.entry(e[var])
                .or_insert_with(|| LaurentPoly::zero(self.nvars))
                .add_term(e2, c.clone());
        }
        out
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Exact quotient by `1 - c*z^g`, or `None` when the division leaves a remainder.
    ///
    /// Runs a division in the monomial order keyed by `g·e` (ties broken
    /// lexicographically), in which `z^g > 1`, so the lowest term of the
    /// dividend always determines the next quotient term.
    pub fn div_binomial(&self, c: &Rat, g: &[i64]) -> Option<Self> {
        assert_eq!(g.len(), self.nvars);
        if self.is_zero() {
            return Some(self.clone());
        }
        let gg: i128 = g.iter().map(|&x| (x as i128) * (x as i128)).sum();
        if gg == 0 || c.is_zero() {
            // Dividing by the constant 1 - c.
            let k = Rat::one() - c;
            if k.is_zero() {
                return None;
            }
            return Some(self.scale(&k.recip()));
        }
        let key =
            |e: &[i64]| -> i128 { e.iter().zip(g).map(|(&a, &b)| a as i128 * b as i128).sum() };
        let mut rem: BTreeMap<(i128, Exponent), Rat> = self
            .terms
            .iter()
            .map(|(e, a)| ((key(e), e.clone()), a.clone()))
            .collect();
        let max_key = rem.keys().next_back().map(|k| k.0).unwrap();
        let mut quot = Self::zero(self.nvars);
        while let Some(((k, e), a)) = rem.pop_first() {
            if k + gg > max_key {
                return None;
            }
            let up = (k + gg, add_exp(&e, g));
            let entry = rem.entry(up.clone()).or_insert_with(Rat::zero);
            *entry += &a * c;
            if entry.is_zero() {
                rem.remove(&up);
            }
            quot.add_term(e, a);
        }
        Some(quot)
    }

    /// Text form using the names of `vars`; terms in ascending exponent order.
    pub fn render(&self, vars: &VarSet) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let t = render_term(c, e, vars);
            if i > 0 && !t.starts_with('-') {
                out.push('+');
            }
            out.push_str(&t);
        }
        out
    }
}

pub(crate) fn add_exp(a: &[i64], b: &[i64]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn substitute_exp(e: &[i64], var: usize, m: &[i64]) -> Exponent {
    let k = e[var];
    let mut out = e.to_vec();
    out[var] = 0;
    if k != 0 {
        for (o, mi) in out.iter_mut().zip(m) {
            *o += k * mi;
        }
    }
    out
}

pub(crate) fn render_monomial(e: &[i64], vars: &VarSet) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| {
            if k == 1 {
                vars.name(i).to_string()
            } else {
                format!("{}^{}", vars.name(i), k)
            }
        })
        .collect();
    parts.join("*")
}

pub(crate) fn render_term(c: &Rat, e: &[i64], vars: &VarSet) -> String {
    let mono = render_monomial(e, vars);
    if mono.is_empty() {
        return rat_to_string(c);
    }
    if c.is_one() {
        mono
    } else if (-c).is_one() {
        format!("-{mono}")
    } else {
        format!("{}*{}", rat_to_string(c), mono)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = LaurentPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(add_exp(e1, e2), c1 * c2);
            }
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}
