//! Exact arithmetic: big rationals, multivariate Laurent polynomials and
//! rational series whose denominators are products of binomials.

mod laurent;
mod rat;
mod series;
mod vars;

pub use laurent::{Exponent, LaurentPoly};
pub(crate) use rat::rat_to_string;
pub use rat::{factorial, int, rat, rat_pow, Rat};
pub use series::{BinomialDenominator, Factor, RationalSeries};
pub use vars::VarSet;
