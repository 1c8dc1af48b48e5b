//! JSON problem files: vertices plus a list of weight descriptors.

use std::fmt;
use std::str::FromStr;

use ehrlift::algebra::{int, Rat};
use ehrlift::lift::{ExpTerm, Weight, WeightSystem};
use ehrlift::polytope::Polytope;
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

/// An exact rational read from a JSON integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq)]
pub struct JsonRat(pub Rat);

impl<'de> Deserialize<'de> for JsonRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonRat;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonRat, E> {
                Ok(JsonRat(int(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonRat, E> {
                i64::try_from(v)
                    .map(|v| JsonRat(int(v)))
                    .map_err(|_| E::custom(format!("integer {v} out of range")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonRat, E> {
                parse_rat(v).map(JsonRat).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    let bad = || format!("`{s}` is not a rational of the form p/q");
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n = num_bigint::BigInt::from_str(n).map_err(|_| bad())?;
    let d = num_bigint::BigInt::from_str(d).map_err(|_| bad())?;
    if d == 0.into() {
        return Err(format!("`{s}` has zero denominator"));
    }
    Ok(Rat::new(n, d))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    coeff: JsonRat,
    exponents: Vec<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpPiece {
    /// Polynomial coefficients from degree 0.
    poly: Vec<JsonRat>,
    base: JsonRat,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum WeightSpec {
    Linear { coeffs: Vec<i64> },
    Monomial { exponents: Vec<u32> },
    Polynomial { terms: Vec<Term> },
    Exppoly { factors: Vec<Vec<ExpPiece>> },
}

impl WeightSpec {
    fn into_weight(self) -> Weight {
        let r = |v: Vec<JsonRat>| v.into_iter().map(|x| x.0).collect::<Vec<_>>();
        match self {
            WeightSpec::Linear { coeffs } => Weight::Linear(coeffs),
            WeightSpec::Monomial { exponents } => Weight::Monomial(exponents),
            WeightSpec::Polynomial { terms } => Weight::Polynomial(
                terms
                    .into_iter()
                    .map(|t| (t.coeff.0, t.exponents))
                    .collect(),
            ),
            WeightSpec::Exppoly { factors } => Weight::ExpPoly(
                factors
                    .into_iter()
                    .map(|f| {
                        f.into_iter()
                            .map(|e| ExpTerm::new(r(e.poly), e.base.0))
                            .collect()
                    })
                    .collect(),
            ),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    vertices: Vec<Vec<JsonRat>>,
    #[serde(default)]
    weights: Vec<WeightSpec>,
}

/// A parsed problem: the polytope and its weights.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub polytope: Polytope,
    pub weights: WeightSystem,
}

impl ProblemSpec {
    /// Parses and validates; errors carry line and column for JSON faults.
    pub fn parse(text: &str) -> Result<Self, String> {
        // serde_json reports the line and column itself.
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let s = raw.vertices.first().map(|v| v.len()).unwrap_or(0);
        if let Some(v) = raw.vertices.iter().find(|v| v.len() != s) {
            return Err(format!(
                "vertices have mixed dimensions {s} and {}",
                v.len()
            ));
        }
        let pts = raw
            .vertices
            .into_iter()
            .map(|v| v.into_iter().map(|x| x.0).collect())
            .collect();
        let polytope = Polytope::new(pts).map_err(|e| e.to_string())?;
        let weights = WeightSystem::new(
            raw.weights
                .into_iter()
                .map(WeightSpec::into_weight)
                .collect(),
        );
        weights.validate(s).map_err(|e| e.to_string())?;
        Ok(ProblemSpec { polytope, weights })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ehrlift::algebra::rat;

    #[test]
    fn reads_all_weight_kinds() {
        let p = ProblemSpec::parse(
            r#"{"vertices": [[0, 0], ["1/2", 0], [0, 1]],
                "weights": [
                  {"kind": "linear", "coeffs": [1, 2]},
                  {"kind": "monomial", "exponents": [1, 1]},
                  {"kind": "polynomial", "terms": [{"coeff": "-3/4", "exponents": [2, 0]}]},
                  {"kind": "exppoly", "factors": [[{"poly": [0, 1], "base": 2}]]}
                ]}"#,
        )
        .unwrap();
        assert!(p.polytope.vertices().contains(&vec![rat(1, 2), int(0)]));
        assert_eq!(p.weights.len(), 4);
        assert_eq!(
            p.weights.weights()[2],
            Weight::Polynomial(vec![(rat(-3, 4), vec![2, 0])])
        );
    }

    #[test]
    fn parse_errors_carry_a_position() {
        let e = ProblemSpec::parse("{\"vertices\": [[0],\n [\"1/0\"]]}").unwrap_err();
        assert!(e.contains("line 2 column"), "{e}");
        let e = ProblemSpec::parse("{\"vertices\": [[0]], \"weights\": [{\"kind\": \"cubic\"}]}")
            .unwrap_err();
        assert!(e.contains("line 1"), "{e}");
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        assert!(ProblemSpec::parse(r#"{"vertices": [[0, 0], [1]]}"#).is_err());
        assert!(ProblemSpec::parse(
            r#"{"vertices": [[0], [1]], "weights": [{"kind": "linear", "coeffs": [1, 1]}]}"#
        )
        .is_err());
    }
}
