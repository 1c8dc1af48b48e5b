use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use crate::algebra::Rat;
use crate::error::{Error, Result};
use crate::polytope::Polytope;

/// Irreducible elements of a graded affine semigroup, the grading being the
/// last coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasis {
    /// Sorted lexicographically.
    pub elements: Vec<Vec<i64>>,
    /// Largest grading degree searched.
    pub bound: u64,
    /// Set when every cone lattice point up to degree `2 * bound` is generated.
    pub certified: bool,
}

/// Irreducible lattice points of `cone(generators)` of degree at most `bound`.
pub fn hilbert_basis(generators: &[Vec<i64>], bound: u64) -> Result<HilbertBasis> {
    let first = generators.first().ok_or(Error::Empty)?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::Degenerate(
            "generators have no grading coordinate".into(),
        ));
    }
    if let Some(g) = generators.iter().find(|g| g.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: g.len(),
        });
    }
    if let Some(g) = generators.iter().find(|g| g[dim - 1] == 0) {
        return Err(Error::ZeroGrading(format!("{g:?}")));
    }
    if let Some(g) = generators.iter().find(|g| g[dim - 1] < 0) {
        return Err(Error::NonPointed(format!("grading is negative on {g:?}")));
    }
    // The degree-k slice of the cone is k * conv(g / g_last).
    let base: Vec<Vec<Rat>> = generators
        .iter()
        .map(|g| {
            let l = Rat::from_integer(g[dim - 1].into());
            g[..dim - 1]
                .iter()
                .map(|&x| Rat::from_integer(x.into()) / &l)
                .collect()
        })
        .collect();
    let q = Polytope::new(base)?;
    let level = |k: u64| -> Vec<Vec<i64>> {
        q.lattice_points(k)
            .into_iter()
            .map(|mut x| {
                x.push(k as i64);
                x
            })
            .collect()
    };
    let in_cone = |x: &[i64]| -> bool {
        let k = x[dim - 1];
        if k == 0 {
            return x.iter().all(|&c| c == 0);
        }
        let kk = Rat::from_integer(k.into());
        let y: Vec<Rat> = x[..dim - 1]
            .iter()
            .map(|&c| Rat::from_integer(c.into()) / &kk)
            .collect();
        k > 0 && q.contains(&y)
    };
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for k in 1..=bound {
        let pts = level(k);
        let found: Vec<Vec<i64>> = pts
            .into_par_iter()
            .filter(|x| {
                !basis.iter().any(|h| {
                    let diff: Vec<i64> = x.iter().zip(h).map(|(a, b)| a - b).collect();
                    in_cone(&diff)
                })
            })
            .collect();
        basis.extend(found);
    }
    basis.sort();
    // Regenerate the cone points up to 2 * bound from the basis.
    let mut by_degree: BTreeMap<i64, Vec<&Vec<i64>>> = BTreeMap::new();
    for h in &basis {
        by_degree.entry(h[dim - 1]).or_default().push(h);
    }
    let mut generated: Vec<HashSet<Vec<i64>>> = vec![[vec![0; dim]].into_iter().collect()];
    let mut certified = true;
    for k in 1..=2 * bound {
        let pts = level(k);
        let ok: Vec<(Vec<i64>, bool)> = pts
            .into_par_iter()
            .map(|x| {
                let hit = by_degree.range(..=k as i64).any(|(&l, hs)| {
                    hs.iter().any(|h| {
                        let diff: Vec<i64> = x.iter().zip(h.iter()).map(|(a, b)| a - b).collect();
                        generated[(k as i64 - l) as usize].contains(&diff)
                    })
                });
                (x, hit)
            })
            .collect();
        certified &= ok.iter().all(|(_, hit)| *hit);
        generated.push(
            ok.into_iter()
                .filter(|(_, hit)| *hit)
                .map(|(x, _)| x)
                .collect(),
        );
    }
    Ok(HilbertBasis {
        elements: basis,
        bound,
        certified,
    })
}

/// Whether `e` is a nonzero element admitting no decomposition `f + g` into
/// nonzero members, searching `f` in the box between 0 and `e` (sufficient
/// for semigroups in `N^k`).
pub fn is_irreducible(e: &[i64], member: impl Fn(&[i64]) -> bool) -> bool {
    if e.iter().all(|&x| x == 0) || !member(e) {
        return false;
    }
    let lo: Vec<i64> = e.iter().map(|&x| x.min(0)).collect();
    let hi: Vec<i64> = e.iter().map(|&x| x.max(0)).collect();
    let mut f = lo.clone();
    loop {
        let nonzero_f = f.iter().any(|&x| x != 0);
        let g: Vec<i64> = e.iter().zip(&f).map(|(a, b)| a - b).collect();
        if nonzero_f && g.iter().any(|&x| x != 0) && member(&f) && member(&g) {
            return false;
        }
        let mut k = 0;
        while k < f.len() && f[k] == hi[k] {
            f[k] = lo[k];
            k += 1;
        }
        if k == f.len() {
            return true;
        }
        f[k] += 1;
    }
}

/// The semigroup `{(sum l_i^2, sum l_i)}` over finite multisets of positive
/// integers, with membership decided up to a maximal second coordinate.
#[derive(Clone, Debug)]
pub struct SquareSumSemigroup {
    /// `sums[k]` holds every square sum of a partition of `k`.
    sums: Vec<HashSet<i64>>,
}

impl SquareSumSemigroup {
    pub fn new(max_parts_sum: usize) -> Self {
        let mut sums: Vec<HashSet<i64>> = vec![[0].into_iter().collect()];
        for k in 1..=max_parts_sum {
            let mut s = HashSet::new();
            for j in 1..=k {
                for &u in &sums[k - j] {
                    s.insert(u + (j * j) as i64);
                }
            }
            sums.push(s);
        }
        SquareSumSemigroup { sums }
    }

    pub fn contains(&self, e: &[i64]) -> bool {
        match e {
            [u, k] if *k >= 0 && (*k as usize) < self.sums.len() => {
                self.sums[*k as usize].contains(u)
            }
            _ => false,
        }
    }
}
