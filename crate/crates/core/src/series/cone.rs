use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{LaurentPoly, Rat, RationalSeries, VarSet};
use crate::error::{Error, Result};
use crate::linalg::{
    hnf_diagonal, integer_kernel, inverse, null_space, primitive, rank, rref, to_rat,
};
use crate::polytope::{Polytope, Triangulation};

/// Cone generated by linearly independent integer vectors whose last
/// coordinate (the grading) is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCone {
    generators: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    inv: Vec<Vec<Rat>>,
}

impl SimplicialCone {
    pub fn new(generators: Vec<Vec<i64>>) -> Result<Self> {
        let first = generators.first().ok_or(Error::Empty)?;
        let dim = first.len();
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: g.len(),
            });
        }
        if let Some(g) = generators.iter().find(|g| g[dim - 1] <= 0) {
            return Err(Error::ZeroGrading(format!("{g:?}")));
        }
        let rows: Vec<Vec<Rat>> = generators.iter().map(|g| to_rat(g)).collect();
        if rank(&rows) != rows.len() {
            return Err(Error::Degenerate(
                "cone generators are linearly dependent".into(),
            ));
        }
        let (_, pivots) = rref(&rows);
        // m[r][i] = g_i[pivot_r]
        let m: Vec<Vec<Rat>> = pivots
            .iter()
            .map(|&p| rows.iter().map(|g| g[p].clone()).collect())
            .collect();
        let inv = inverse(&m).expect("pivot minor is invertible");
        Ok(SimplicialCone {
            generators,
            pivots,
            inv,
        })
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn ambient(&self) -> usize {
        self.generators[0].len()
    }

    /// Coefficients `c` with `x = sum c_i g_i`, or `None` outside the span.
    pub fn coordinates(&self, x: &[Rat]) -> Option<Vec<Rat>> {
        let y: Vec<Rat> = self.pivots.iter().map(|&p| x[p].clone()).collect();
        let c: Vec<Rat> = self
            .inv
            .iter()
            .map(|row| crate::linalg::dot(row, &y))
            .collect();
        let back = self.combine(&c);
        (back.as_slice() == x).then_some(c)
    }

    fn combine(&self, c: &[Rat]) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.ambient()];
        for (ci, g) in c.iter().zip(&self.generators) {
            if ci.is_zero() {
                continue;
            }
            for (xi, &gi) in x.iter_mut().zip(g) {
                *xi += ci * Rat::from_integer(gi.into());
            }
        }
        x
    }

    /// Index of the generated sublattice in the lattice of the span.
    pub fn index(&self) -> usize {
        HalfOpenCone::closed(self.clone())
            .parallelepiped_points()
            .len()
    }
}

/// A simplicial cone with the facets opposite to the flagged generators removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfOpenCone {
    pub cone: SimplicialCone,
    pub open: Vec<bool>,
}

impl HalfOpenCone {
    pub fn closed(cone: SimplicialCone) -> Self {
        let k = cone.rank();
        HalfOpenCone {
            cone,
            open: vec![false; k],
        }
    }

    pub fn new(cone: SimplicialCone, open: Vec<bool>) -> Result<Self> {
        if open.len() != cone.rank() {
            return Err(Error::DimensionMismatch {
                expected: cone.rank(),
                got: open.len(),
            });
        }
        Ok(HalfOpenCone { cone, open })
    }

    /// Membership of a point: closed facets need `c_i >= 0`, open ones `c_i > 0`.
    pub fn contains(&self, x: &[i64]) -> bool {
        match self.cone.coordinates(&to_rat(x)) {
            Some(c) => c.iter().zip(&self.open).all(|(ci, &o)| {
                if o {
                    ci.is_positive()
                } else {
                    !ci.is_negative()
                }
            }),
            None => false,
        }
    }

    /// Lattice points `sum c_i g_i` with `c_i` in `[0, 1)`, or `(0, 1]` on open facets.
    ///
    /// Runs over a transversal of the lattice of the span modulo the
    /// generator lattice and reduces each representative into the box.
    pub fn parallelepiped_points(&self) -> Vec<Vec<i64>> {
        let cone = &self.cone;
        let d = cone.ambient();
        let rows: Vec<Vec<Rat>> = cone.generators.iter().map(|g| to_rat(g)).collect();
        let equations: Vec<Vec<i64>> = null_space(&rows, d)
            .iter()
            .map(|v| primitive(v).expect("span equations are small"))
            .collect();
        let basis = integer_kernel(&equations, d);
        // Generators in lattice coordinates: m[r][j] = coordinate r of g_j.
        let brows: Vec<Vec<Rat>> = basis.iter().map(|b| to_rat(b)).collect();
        let (_, bpiv) = rref(&brows);
        let minor: Vec<Vec<Rat>> = bpiv
            .iter()
            .map(|&p| brows.iter().map(|b| b[p].clone()).collect())
            .collect();
        let binv = inverse(&minor).expect("lattice basis is independent");
        let m: Vec<Vec<i64>> = {
            let cols: Vec<Vec<i64>> = cone
                .generators
                .iter()
                .map(|g| {
                    let y: Vec<Rat> = bpiv
                        .iter()
                        .map(|&p| Rat::from_integer(g[p].into()))
                        .collect();
                    binv.iter()
                        .map(|row| {
                            let c = crate::linalg::dot(row, &y);
                            c.to_integer()
                                .to_i64()
                                .expect("generator coordinates are integral")
                        })
                        .collect()
                })
                .collect();
            (0..cols.len())
                .map(|r| cols.iter().map(|c| c[r]).collect())
                .collect()
        };
        let diag: Vec<i64> = hnf_diagonal(&m)
            .iter()
            .map(|h| h.to_i64().expect("index fits"))
            .collect();
        let mut out = Vec::new();
        let mut r = vec![0i64; diag.len()];
        loop {
            let mut x = vec![0i64; d];
            for (ri, b) in r.iter().zip(&basis) {
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi += ri * bi;
                }
            }
            let c = cone
                .coordinates(&to_rat(&x))
                .expect("lattice points of the span");
            for ((ci, g), &o) in c.iter().zip(&cone.generators).zip(&self.open) {
                let mut f = ci.floor().to_integer().to_i64().expect("coordinate fits");
                if o && ci.is_integer() {
                    f -= 1;
                }
                for (xi, gi) in x.iter_mut().zip(g) {
                    *xi -= f * gi;
                }
            }
            out.push(x);
            let mut k = 0;
            loop {
                if k == r.len() {
                    out.sort();
                    return out;
                }
                r[k] += 1;
                if r[k] < diag[k] {
                    break;
                }
                r[k] = 0;
                k += 1;
            }
        }
    }

    /// `sum_{p in parallelepiped} z^p / prod (1 - z^{g_i})` over `vars`, whose
    /// length must equal the ambient dimension.
    pub fn transform(&self, vars: &VarSet) -> Result<RationalSeries> {
        let n = vars.len();
        if n != self.cone.ambient() {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.cone.ambient(),
            });
        }
        let num = LaurentPoly::from_terms(
            n,
            self.parallelepiped_points()
                .into_iter()
                .map(|p| (p, Rat::one())),
        );
        RationalSeries::with_binomials(vars.clone(), num, self.cone.generators.clone())
    }
}

/// `{(v, 1)}` over the vertices of a lattice polytope.
pub fn cone_over(p: &Polytope) -> Result<Vec<Vec<i64>>> {
    Ok(p.lattice_vertices()?
        .into_iter()
        .map(|mut v| {
            v.push(1);
            v
        })
        .collect())
}

/// The primitive integer vector on the ray through `(v, 1)`.
pub fn homogenize(v: &[Rat]) -> Vec<i64> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let lr = Rat::from_integer(l.clone());
    let mut out: Vec<i64> = v
        .iter()
        .map(|x| (x * &lr).to_integer().to_i64().expect("coordinate fits"))
        .collect();
    out.push(l.to_i64().expect("denominator fits"));
    out
}

fn simplicial_cones(t: &Triangulation) -> Result<Vec<SimplicialCone>> {
    t.simplices()
        .iter()
        .map(|s| SimplicialCone::new(s.iter().map(|&i| homogenize(&t.points()[i])).collect()))
        .collect()
}

/// Coordinates of a reference point, generic for every cone: it lies on no
/// facet hyperplane of any of them.
fn reference_coordinates(cones: &[SimplicialCone]) -> Result<Vec<Vec<Rat>>> {
    let first = &cones[0];
    for k in 0..200i64 {
        let eps = Rat::new(1.into(), (100 + k).into());
        let mut coeff = Rat::one();
        let weights: Vec<Rat> = (0..first.rank())
            .map(|_| {
                coeff *= &eps;
                Rat::one() + &coeff
            })
            .collect();
        let rho = first.combine(&weights);
        let coords: Vec<Vec<Rat>> = cones
            .iter()
            .map(|c| {
                c.coordinates(&rho)
                    .expect("cones of a triangulation share a span")
            })
            .collect();
        if coords.iter().flatten().all(|c| !c.is_zero()) {
            return Ok(coords);
        }
    }
    Err(Error::Degenerate("no generic reference point found".into()))
}

/// Half-open cones over the simplices of `t` partitioning the lattice points
/// of the cone over `conv(t)`: facet `i` of a piece is removed when the
/// reference point has a negative `i`-th coordinate there.
pub fn half_open_decompose(t: &Triangulation) -> Result<Vec<HalfOpenCone>> {
    decompose(t, false)
}

/// Half-open cones partitioning the relative interior of the cone over
/// `conv(t)`: the removal flags of [`half_open_decompose`] complemented.
pub fn interior_decompose(t: &Triangulation) -> Result<Vec<HalfOpenCone>> {
    decompose(t, true)
}

fn decompose(t: &Triangulation, interior: bool) -> Result<Vec<HalfOpenCone>> {
    let cones = simplicial_cones(t)?;
    let coords = reference_coordinates(&cones)?;
    Ok(cones
        .into_iter()
        .zip(coords)
        .map(|(cone, c)| {
            let open = c.iter().map(|ci| ci.is_negative() != interior).collect();
            HalfOpenCone { cone, open }
        })
        .collect())
}

/// Sum of the transforms of the given cones.
pub fn transform(cones: &[HalfOpenCone], vars: &VarSet) -> Result<RationalSeries> {
    let parts: Vec<RationalSeries> = cones
        .par_iter()
        .map(|c| c.transform(vars))
        .collect::<Result<_>>()?;
    RationalSeries::sum(vars, &parts)
}
