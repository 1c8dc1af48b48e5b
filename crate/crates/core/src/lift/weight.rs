use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{rat_pow, LaurentPoly, Rat};
use crate::error::{Error, Result};

/// One summand `P(a_i) * base^{a_i}` of an exponential-polynomial factor.
/// `poly` lists coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpTerm {
    pub poly: Vec<Rat>,
    pub base: Rat,
}

impl ExpTerm {
    pub fn new(poly: Vec<Rat>, base: Rat) -> Self {
        ExpTerm { poly, base }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.poly.iter().rev() {
            acc = acc * x + c;
        }
        acc * rat_pow_rat(&self.base, x)
    }
}

fn rat_pow_rat(base: &Rat, x: &Rat) -> Rat {
    assert!(
        x.is_integer(),
        "exponential weights are evaluated at integer points"
    );
    let e: i64 = x.to_integer().try_into().expect("exponent fits in i64");
    rat_pow(base, e)
}

/// A weight function on `Z^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    /// `w(a) = sum c_j a_j`.
    Linear(Vec<i64>),
    /// `w(a) = prod a_j^{e_j}`.
    Monomial(Vec<u32>),
    /// `w(a) = sum c prod a_j^{e_j}`.
    Polynomial(Vec<(Rat, Vec<u32>)>),
    /// `h(a) = prod_i sum_j P_ij(a_i) base_ij^{a_i}`; coordinates beyond the
    /// listed factors contribute 1.
    ExpPoly(Vec<Vec<ExpTerm>>),
}

impl Weight {
    pub fn coordinate(s: usize, i: usize) -> Self {
        let mut c = vec![0; s];
        c[i] = 1;
        Weight::Linear(c)
    }

    pub fn constant(s: usize, c: Rat) -> Self {
        Weight::Polynomial(vec![(c, vec![0; s])])
    }

    pub fn validate(&self, s: usize) -> Result<()> {
        let check = |len: usize| {
            if len == s {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    expected: s,
                    got: len,
                })
            }
        };
        match self {
            Weight::Linear(c) => check(c.len()),
            Weight::Monomial(e) => check(e.len()),
            Weight::Polynomial(t) => t.iter().try_for_each(|(_, e)| check(e.len())),
            Weight::ExpPoly(f) => {
                if f.len() > s {
                    return Err(Error::DimensionMismatch {
                        expected: s,
                        got: f.len(),
                    });
                }
                if f.iter().flatten().any(|t| t.base.is_zero()) {
                    return Err(Error::InvalidWeight(
                        "exponential base must be nonzero".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, a: &[i64]) -> Result<Rat> {
        self.validate(a.len())?;
        Ok(match self {
            Weight::Linear(c) => {
                Rat::from_integer(c.iter().zip(a).map(|(x, y)| x * y).sum::<i64>().into())
            }
            Weight::Monomial(e) => monomial_value(e, a),
            Weight::Polynomial(t) => t.iter().map(|(c, e)| c * monomial_value(e, a)).sum(),
            Weight::ExpPoly(f) => f
                .iter()
                .zip(a)
                .map(|(terms, &x)| {
                    let x = Rat::from_integer(x.into());
                    terms.iter().map(|t| t.eval(&x)).sum::<Rat>()
                })
                .product(),
        })
    }

    /// Value of a linear form; errors on any other kind.
    pub fn eval_linear(&self, a: &[i64]) -> Result<i64> {
        let c = self.linear_coeffs()?;
        if c.len() != a.len() {
            return Err(Error::DimensionMismatch {
                expected: c.len(),
                got: a.len(),
            });
        }
        Ok(c.iter().zip(a).map(|(x, y)| x * y).sum())
    }

    pub fn linear_coeffs(&self) -> Result<&[i64]> {
        match self {
            Weight::Linear(c) => Ok(c),
            other => Err(Error::NonLinearWeight(other.to_string())),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Weight::Linear(c) => c.iter().all(|&x| x == 0),
            Weight::Polynomial(t) => t.iter().all(|(c, _)| c.is_zero()),
            _ => false,
        }
    }

    /// The weight as a polynomial in `s` variables, if it is one.
    pub fn as_poly(&self, s: usize) -> Option<LaurentPoly> {
        match self {
            Weight::Linear(c) => Some(LaurentPoly::from_terms(
                s,
                c.iter().enumerate().map(|(j, &x)| {
                    let mut e = vec![0; s];
                    e[j] = 1;
                    (e, Rat::from_integer(x.into()))
                }),
            )),
            Weight::Monomial(e) => Some(LaurentPoly::monomial(
                e.iter().map(|&x| x as i64).collect(),
                Rat::one(),
            )),
            Weight::Polynomial(t) => Some(LaurentPoly::from_terms(
                s,
                t.iter()
                    .map(|(c, e)| (e.iter().map(|&x| x as i64).collect(), c.clone())),
            )),
            Weight::ExpPoly(_) => None,
        }
    }

    pub fn from_poly(p: &LaurentPoly) -> Self {
        Weight::Polynomial(
            p.terms()
                .map(|(e, c)| (c.clone(), e.iter().map(|&x| x as u32).collect()))
                .collect(),
        )
    }

    /// Product of polynomial weights; the empty product is the constant 1.
    pub fn product(ws: &[Weight], s: usize) -> Result<Weight> {
        let mut acc = LaurentPoly::one(s);
        for w in ws {
            w.validate(s)?;
            let p = w.as_poly(s).ok_or_else(|| {
                Error::InvalidWeight("exponential weights have no polynomial product".into())
            })?;
            acc = &acc * &p;
        }
        Ok(Weight::from_poly(&acc))
    }

    /// `w + c` for a polynomial weight.
    pub fn plus_constant(&self, s: usize, c: Rat) -> Result<Weight> {
        let mut p = self
            .as_poly(s)
            .ok_or_else(|| Error::InvalidWeight("exponential weights cannot be shifted".into()))?;
        p.add_term(vec![0; s], c);
        Ok(Weight::from_poly(&p))
    }

    /// Total degree of a polynomial weight.
    pub fn degree(&self, s: usize) -> Option<u32> {
        let p = self.as_poly(s)?;
        Some(
            p.terms()
                .map(|(e, _)| e.iter().sum::<i64>() as u32)
                .max()
                .unwrap_or(0),
        )
    }

    pub fn is_homogeneous(&self, s: usize) -> bool {
        match self.as_poly(s) {
            Some(p) => {
                p.terms()
                    .map(|(e, _)| e.iter().sum::<i64>())
                    .collect::<std::collections::BTreeSet<_>>()
                    .len()
                    <= 1
            }
            None => false,
        }
    }

    /// The weight `a -> w(-a)`.
    pub fn reflected(&self) -> Weight {
        match self {
            Weight::Linear(c) => Weight::Linear(c.iter().map(|x| -x).collect()),
            Weight::Monomial(e) => {
                let sign = if e.iter().sum::<u32>() % 2 == 0 {
                    1
                } else {
                    -1
                };
                Weight::Polynomial(vec![(Rat::from_integer(sign.into()), e.clone())])
            }
            Weight::Polynomial(t) => Weight::Polynomial(
                t.iter()
                    .map(|(c, e)| {
                        let odd = e.iter().sum::<u32>() % 2 == 1;
                        (if odd { -c } else { c.clone() }, e.clone())
                    })
                    .collect(),
            ),
            Weight::ExpPoly(f) => Weight::ExpPoly(
                f.iter()
                    .map(|terms| {
                        terms
                            .iter()
                            .map(|t| ExpTerm {
                                poly: t
                                    .poly
                                    .iter()
                                    .enumerate()
                                    .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                                    .collect(),
                                base: t.base.recip(),
                            })
                            .collect()
                    })
                    .collect(),
            ),
        }
    }
}

fn monomial_value(e: &[u32], a: &[i64]) -> Rat {
    e.iter()
        .zip(a)
        .map(|(&k, &x)| rat_pow(&Rat::from_integer(x.into()), k as i64))
        .product()
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Linear(c) => write!(f, "linear{c:?}"),
            Weight::Monomial(e) => write!(f, "monomial{e:?}"),
            Weight::Polynomial(t) => {
                let parts: Vec<String> = t.iter().map(|(c, e)| format!("{c}*{e:?}")).collect();
                write!(f, "polynomial[{}]", parts.join(" + "))
            }
            Weight::ExpPoly(fs) => write!(f, "exppoly[{} factors]", fs.len()),
        }
    }
}

/// An ordered list of weights `w_1..w_p` on a common `Z^s`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightSystem {
    weights: Vec<Weight>,
}

impl WeightSystem {
    pub fn new(weights: Vec<Weight>) -> Self {
        WeightSystem { weights }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn linear(forms: &[&[i64]]) -> Self {
        WeightSystem::new(forms.iter().map(|c| Weight::Linear(c.to_vec())).collect())
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn validate(&self, s: usize) -> Result<()> {
        self.weights.iter().try_for_each(|w| w.validate(s))
    }

    /// Coefficient rows of an all-linear system.
    pub fn linear_forms(&self, s: usize) -> Result<Vec<Vec<i64>>> {
        self.validate(s)?;
        self.weights
            .iter()
            .map(|w| w.linear_coeffs().map(<[i64]>::to_vec))
            .collect()
    }

    /// As [`Self::linear_forms`], also requiring `w_i(e_j) >= 0`.
    pub fn liftable_forms(&self, s: usize) -> Result<Vec<Vec<i64>>> {
        let forms = self.linear_forms(s)?;
        if let Some(c) = forms.iter().find(|c| c.iter().any(|&x| x < 0)) {
            return Err(Error::NegativeWeight(format!("{c:?}")));
        }
        Ok(forms)
    }

    /// `(w_1(a), .., w_p(a))` for an all-linear system.
    pub fn linear_values(&self, a: &[i64]) -> Result<Vec<i64>> {
        self.weights.iter().map(|w| w.eval_linear(a)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    #[test]
    fn evaluation() {
        assert_eq!(
            Weight::Linear(vec![1, 1, 1]).eval(&[2, 1, 1]).unwrap(),
            int(4)
        );
        assert_eq!(Weight::Linear(vec![2, 3]).eval(&[1, 1]).unwrap(), int(5));
        assert_eq!(Weight::Linear(vec![2, 3]).eval(&[0, 0]).unwrap(), int(0));
        assert_eq!(Weight::Monomial(vec![1, 2]).eval(&[3, 2]).unwrap(), int(12));
        let p = Weight::Polynomial(vec![(rat(1, 2), vec![2, 0]), (int(1), vec![0, 0])]);
        assert_eq!(p.eval(&[3, 7]).unwrap(), rat(11, 2));
        let h = Weight::ExpPoly(vec![vec![ExpTerm::new(vec![int(0), int(1)], int(2))]]);
        assert_eq!(h.eval(&[3, 5]).unwrap(), int(24));
        assert_eq!(h.eval(&[-1, 5]).unwrap(), rat(-1, 2));
        assert!(Weight::Linear(vec![1]).eval(&[1, 2]).is_err());
    }

    #[test]
    fn reflection() {
        let h = Weight::ExpPoly(vec![vec![ExpTerm::new(vec![int(1), int(1)], int(2))]]);
        let r = h.reflected();
        for a in -3..4i64 {
            assert_eq!(r.eval(&[a]).unwrap(), h.eval(&[-a]).unwrap());
        }
        let p = Weight::Polynomial(vec![(int(3), vec![1, 2]), (int(1), vec![1, 0])]);
        assert_eq!(
            p.reflected().eval(&[2, 3]).unwrap(),
            p.eval(&[-2, -3]).unwrap()
        );
    }

    #[test]
    fn products() {
        let w =
            Weight::product(&[Weight::Linear(vec![1, 1]), Weight::Linear(vec![2, 3])], 2).unwrap();
        assert_eq!(w.eval(&[1, 1]).unwrap(), int(10));
        assert_eq!(w.degree(2), Some(2));
        assert!(w.is_homogeneous(2));
        let w1 = w.plus_constant(2, int(1)).unwrap();
        assert!(!w1.is_homogeneous(2));
        assert_eq!(
            Weight::product(&[], 2).unwrap().eval(&[4, 4]).unwrap(),
            int(1)
        );
    }

    #[test]
    fn liftability() {
        let ws = WeightSystem::linear(&[&[1, -1]]);
        assert!(matches!(
            ws.liftable_forms(2),
            Err(Error::NegativeWeight(_))
        ));
        let ws = WeightSystem::new(vec![Weight::Monomial(vec![1, 1])]);
        assert!(matches!(ws.linear_forms(2), Err(Error::NonLinearWeight(_))));
    }
}
