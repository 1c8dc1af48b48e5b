use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered set of variable names; fixes the width of every exponent vector.
///
/// The last variable is the expansion variable of a [`RationalSeries`]
/// (the dilation variable `x` in the Ehrhart variable sets).
///
/// [`RationalSeries`]: super::RationalSeries
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Arc<[String]>,
}

impl VarSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::VarSetMismatch(format!("duplicate variable `{n}`")));
            }
        }
        Ok(VarSet {
            names: names.into(),
        })
    }

    /// `q1..qp, t1..ts, x`.
    pub fn ehrhart(p: usize, s: usize) -> Self {
        let names: Vec<String> = (1..=p)
            .map(|i| format!("q{i}"))
            .chain((1..=s).map(|j| format!("t{j}")))
            .chain(std::iter::once("x".to_string()))
            .collect();
        VarSet {
            names: names.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Index of the expansion variable.
    pub fn expansion_index(&self) -> usize {
        self.names.len() - 1
    }

    /// Indices of the variables whose names start with `prefix` followed by digits.
    pub fn family(&self, prefix: &str) -> Vec<usize> {
        self.names
            .iter()
            .enumerate()
            .filter(|(_, n)| {
                n.strip_prefix(prefix).is_some_and(|rest| {
                    !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit())
                })
            })
            .map(|(i, _)| i)
            .collect()
    }

    pub fn unit(&self, i: usize) -> Vec<i64> {
        let mut e = vec![0; self.len()];
        e[i] = 1;
        e
    }

    pub(crate) fn check_same(&self, other: &VarSet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::VarSetMismatch(format!("{self} vs {other}")))
        }
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(","))
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ehrhart_names() {
        let v = VarSet::ehrhart(2, 3);
        assert_eq!(v.names(), ["q1", "q2", "t1", "t2", "t3", "x"]);
        assert_eq!(v.family("q"), vec![0, 1]);
        assert_eq!(v.family("t"), vec![2, 3, 4]);
        assert_eq!(v.index("x").unwrap(), 5);
        assert!(v.index("y").is_err());
    }

    #[test]
    fn duplicates_rejected() {
        assert!(VarSet::new(["a", "b", "a"]).is_err());
    }
}
