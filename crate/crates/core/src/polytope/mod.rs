//! Vertex-described polytopes with exact facet systems and lattice-point
//! enumeration.

mod triangulation;

pub use triangulation::{
    all_triangulations, PointConfig, Simplex, Triangulation, TRIANGULATION_GUARD,
};

use std::collections::BTreeSet;

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::Rat;
use crate::error::{Error, Result};
use crate::linalg::{dot, rank, to_rat, AffineFrame};

/// `normal . x <= rhs` (or `= rhs` for equations).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub rhs: Rat,
}

impl Halfspace {
    pub fn value(&self, x: &[Rat]) -> Rat {
        dot(&to_rat(&self.normal), x)
    }

    pub fn value_int(&self, x: &[i64]) -> i64 {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// H-description: `x` lies in the polytope iff every inequality and every
/// equation holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FacetSystem {
    pub inequalities: Vec<Halfspace>,
    pub equations: Vec<Halfspace>,
}

impl FacetSystem {
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|h| h.value(x) == h.rhs)
            && self.inequalities.iter().all(|h| h.value(x) <= h.rhs)
    }

    /// Membership in the relative interior.
    pub fn contains_relint(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|h| h.value(x) == h.rhs)
            && self.inequalities.iter().all(|h| h.value(x) < h.rhs)
    }
}

#[derive(Clone, Debug)]
pub struct Polytope {
    vertices: Vec<Vec<Rat>>,
    frame: AffineFrame,
    facets: FacetSystem,
    /// Inequalities in chart coordinates, `a . y <= b`.
    chart_facets: Vec<(Vec<Rat>, Rat)>,
}

impl Polytope {
    /// Convex hull of the given points; repeated and non-vertex points are allowed.
    pub fn new(points: Vec<Vec<Rat>>) -> Result<Self> {
        let first = points.first().ok_or(Error::Empty)?;
        let ambient = first.len();
        if let Some(p) = points.iter().find(|p| p.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                got: p.len(),
            });
        }
        let pts: Vec<Vec<Rat>> = points
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let frame = AffineFrame::new(&pts)?;
        let d = frame.dim();
        let ys: Vec<Vec<Rat>> = pts.iter().map(|p| frame.project(p)).collect();
        let chart_facets = chart_facets(&ys, d);
        let is_vertex = |y: &Vec<Rat>| -> bool {
            let tight: Vec<Vec<Rat>> = chart_facets
                .iter()
                .filter(|(a, b)| dot(a, y) == *b)
                .map(|(a, _)| a.clone())
                .collect();
            rank(&tight) == d
        };
        let vertices: Vec<Vec<Rat>> = pts
            .iter()
            .zip(&ys)
            .filter(|(_, y)| is_vertex(y))
            .map(|(p, _)| p.clone())
            .collect();
        let inequalities = chart_facets
            .iter()
            .map(|(a, b)| {
                let mut normal = vec![0i64; ambient];
                for (j, &p) in frame.pivots.iter().enumerate() {
                    normal[p] = a[j]
                        .to_integer()
                        .to_i64()
                        .ok_or(Error::Overflow("facet normal"))?;
                }
                Ok(Halfspace {
                    normal,
                    rhs: b.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let equations = frame
            .equations
            .iter()
            .map(|e| Halfspace {
                normal: e.clone(),
                rhs: dot(&to_rat(e), &frame.origin),
            })
            .collect();
        Ok(Polytope {
            vertices,
            frame,
            facets: FacetSystem {
                inequalities,
                equations,
            },
            chart_facets,
        })
    }

    pub fn from_integer(points: &[Vec<i64>]) -> Result<Self> {
        Self::new(points.iter().map(|p| to_rat(p)).collect())
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    /// Vertices as integer vectors; fails on a rational vertex.
    pub fn lattice_vertices(&self) -> Result<Vec<Vec<i64>>> {
        self.vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|x| {
                        if x.is_integer() {
                            x.to_integer().to_i64().ok_or(Error::Overflow("vertex"))
                        } else {
                            Err(Error::NonLattice(format!("coordinate {x}")))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| v.iter().all(|x| x.is_integer()))
    }

    pub fn facets(&self) -> &FacetSystem {
        &self.facets
    }

    pub fn frame(&self) -> &AffineFrame {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.ambient()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub(crate) fn chart_facets(&self) -> &[(Vec<Rat>, Rat)] {
        &self.chart_facets
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.facets.contains(x)
    }

    pub fn contains_relint(&self, x: &[Rat]) -> bool {
        self.facets.contains_relint(x)
    }

    /// Integer points of `nP` in lexicographic order.
    pub fn lattice_points(&self, n: u64) -> Vec<Vec<i64>> {
        self.scan(n, false)
    }

    /// Integer points of the relative interior of `nP`.
    pub fn interior_lattice_points(&self, n: u64) -> Vec<Vec<i64>> {
        if n == 0 {
            return Vec::new();
        }
        self.scan(n, true)
    }

    pub fn count_lattice_points(&self, n: u64) -> usize {
        self.lattice_points(n).len()
    }

    fn scan(&self, n: u64, strict: bool) -> Vec<Vec<i64>> {
        let nn = Rat::from_integer((n as i64).into());
        if n == 0 {
            // nP = {0}; its relative interior is {0} as well for a point.
            return if strict && self.dim() > 0 {
                Vec::new()
            } else {
                vec![vec![0; self.ambient_dim()]]
            };
        }
        // Bounds on chart coordinates.
        let pivots = &self.frame.pivots;
        let bounds: Vec<(i64, i64)> = pivots
            .iter()
            .map(|&p| {
                let lo = self.vertices.iter().map(|v| &v[p] * &nn).min().unwrap();
                let hi = self.vertices.iter().map(|v| &v[p] * &nn).max().unwrap();
                (
                    lo.ceil().to_integer().to_i64().unwrap(),
                    hi.floor().to_integer().to_i64().unwrap(),
                )
            })
            .collect();
        let limits: Vec<(Vec<i64>, i64)> = self
            .facets
            .inequalities
            .iter()
            .map(|h| {
                let b = &h.rhs * &nn;
                let lim = if strict {
                    b.ceil().to_integer().to_i64().unwrap() - 1
                } else {
                    b.floor().to_integer().to_i64().unwrap()
                };
                (h.normal.clone(), lim)
            })
            .collect();
        let mut out = Vec::new();
        if bounds.iter().any(|(lo, hi)| lo > hi) {
            return out;
        }
        let full = self.is_full_dimensional();
        let mut y: Vec<i64> = bounds.iter().map(|b| b.0).collect();
        loop {
            let point = if full {
                Some(y.clone())
            } else {
                let yr = to_rat(&y);
                let x = self.frame.lift_dilated(&yr, &nn);
                if x.iter().all(|c| c.is_integer()) {
                    Some(
                        x.iter()
                            .map(|c| c.to_integer().to_i64().unwrap())
                            .collect::<Vec<i64>>(),
                    )
                } else {
                    None
                }
            };
            if let Some(x) = point {
                let ok = limits
                    .iter()
                    .all(|(a, lim)| a.iter().zip(&x).map(|(p, q)| p * q).sum::<i64>() <= *lim);
                if ok {
                    out.push(x);
                }
            }
            // odometer
            let mut k = 0;
            loop {
                if k == y.len() {
                    out.sort();
                    return out;
                }
                if y[k] < bounds[k].1 {
                    y[k] += 1;
                    break;
                }
                y[k] = bounds[k].0;
                k += 1;
            }
        }
    }

    /// The polytope scaled by a positive rational.
    pub fn dilate(&self, n: &Rat) -> Result<Self> {
        Self::new(
            self.vertices
                .iter()
                .map(|v| v.iter().map(|x| x * n).collect())
                .collect(),
        )
    }

    /// Relative volume: Euclidean volume measured in the lattice of the
    /// affine hull, so a unimodular simplex of dimension `d` has volume `1/d!`.
    pub fn volume(&self) -> Result<Rat> {
        Ok(self.triangulate(PointConfig::Vertices)?.volume())
    }

    /// `int_P x^b` with respect to the relative volume.
    pub fn integrate_monomial(&self, b: &[u32]) -> Result<Rat> {
        if b.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: b.len(),
            });
        }
        let t = self.triangulate(PointConfig::Vertices)?;
        let mut total = Rat::zero();
        for s in t.simplices() {
            let pts: Vec<&Vec<Rat>> = s.iter().map(|&i| &t.points()[i]).collect();
            total += triangulation::integrate_over_simplex(&pts, b, &t.simplex_volume(s));
        }
        Ok(total)
    }
}

/// Facet inequalities of the hull of `ys` in `Q^d`, found among hyperplanes
/// through `d`-subsets of the points.
fn chart_facets(ys: &[Vec<Rat>], d: usize) -> Vec<(Vec<Rat>, Rat)> {
    if d == 0 {
        return Vec::new();
    }
    // Clear denominators so hyperplanes can be computed over the integers.
    let l = ys
        .iter()
        .flatten()
        .fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<Vec<i128>> = ys
        .iter()
        .map(|y| {
            y.iter()
                .map(|x| {
                    (x * Rat::from_integer(l.clone()))
                        .to_integer()
                        .to_i128()
                        .expect("coordinate fits")
                })
                .collect()
        })
        .collect();
    let mut found: BTreeSet<(Vec<i128>, i128)> = BTreeSet::new();
    for subset in (0..scaled.len()).combinations(d) {
        let base = &scaled[subset[0]];
        let rows: Vec<Vec<i128>> = subset[1..]
            .iter()
            .map(|&i| scaled[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let a = crate::linalg::int_normal(&rows, d);
        if a.iter().all(|&x| x == 0) {
            continue;
        }
        let b: i128 = a.iter().zip(base).map(|(x, y)| x * y).sum();
        let (mut le, mut ge) = (true, true);
        for p in &scaled {
            let v: i128 = a.iter().zip(p).map(|(x, y)| x * y).sum();
            le &= v <= b;
            ge &= v >= b;
            if !le && !ge {
                break;
            }
        }
        if le {
            found.insert((a, b));
        } else if ge {
            found.insert((a.iter().map(|x| -x).collect(), -b));
        }
    }
    let lr = Rat::from_integer(l);
    found
        .into_iter()
        .map(|(a, b)| {
            (
                a.iter().map(|&x| Rat::from_integer(x.into())).collect(),
                Rat::from_integer(b.into()) / &lr,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn half() -> Rat {
        rat(1, 2)
    }

    pub(crate) fn square() -> Polytope {
        Polytope::from_integer(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    fn penta3() -> Polytope {
        Polytope::from_integer(&[
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![1, 1, 0],
            vec![1, 1, 1],
            vec![2, 1, 1],
        ])
        .unwrap()
    }

    #[test]
    fn square_facets() {
        let f = square().facets().clone();
        assert_eq!(f.inequalities.len(), 4);
        assert!(f.equations.is_empty());
        let normals: BTreeSet<(Vec<i64>, Rat)> = f
            .inequalities
            .iter()
            .map(|h| (h.normal.clone(), h.rhs.clone()))
            .collect();
        let expected: BTreeSet<(Vec<i64>, Rat)> = [
            (vec![-1, 0], int(0)),
            (vec![0, -1], int(0)),
            (vec![1, 0], int(1)),
            (vec![0, 1], int(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(normals, expected);
    }

    #[test]
    fn segment_facets() {
        let s = Polytope::from_integer(&[vec![0], vec![1]]).unwrap();
        assert_eq!(s.facets().inequalities.len(), 2);
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn penta3_facets_are_supporting() {
        let p = penta3();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.vertices().len(), 5);
        for h in &p.facets().inequalities {
            let tight: Vec<&Vec<Rat>> = p
                .vertices()
                .iter()
                .filter(|v| h.value(v) == h.rhs)
                .collect();
            assert!(tight.len() >= 3);
            assert!(p.vertices().iter().all(|v| h.value(v) <= h.rhs));
        }
        // pyramid over a quadrilateral: 5 facets
        assert_eq!(p.facets().inequalities.len(), 5);
        assert_eq!(p.lattice_points(1).len(), 5);
    }

    #[test]
    fn non_vertices_are_dropped() {
        let p = Polytope::from_integer(&[vec![0], vec![1], vec![2], vec![1]]).unwrap();
        assert_eq!(p.vertices(), &[to_rat(&[0]), to_rat(&[2])]);
    }

    #[test]
    fn square_lattice_points() {
        let s = square();
        assert_eq!(s.lattice_points(2).len(), 9);
        assert_eq!(s.lattice_points(0), vec![vec![0, 0]]);
        assert_eq!(s.interior_lattice_points(2), vec![vec![1, 1]]);
        assert!(s.interior_lattice_points(1).is_empty());
        for n in 1..6u64 {
            assert_eq!(s.interior_lattice_points(n).len() as u64, (n - 1) * (n - 1));
        }
        let seg = Polytope::from_integer(&[vec![0], vec![1]]).unwrap();
        assert_eq!(seg.interior_lattice_points(3), vec![vec![1], vec![2]]);
    }

    #[test]
    fn lower_dimensional_enumeration() {
        // diagonal segment in the plane
        let d = Polytope::from_integer(&[vec![0, 0], vec![2, 1]]).unwrap();
        assert_eq!(d.dim(), 1);
        assert_eq!(d.facets().equations.len(), 1);
        assert_eq!(d.lattice_points(1), vec![vec![0, 0], vec![2, 1]]);
        assert_eq!(d.lattice_points(2).len(), 3);
        assert_eq!(d.interior_lattice_points(2), vec![vec![2, 1]]);
        // triangle in a plane of R^3
        let t = Polytope::from_integer(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.lattice_points(2).len(), 6);
        assert_eq!(t.interior_lattice_points(3), vec![vec![1, 1, 1]]);
        assert_eq!(t.volume().unwrap(), half());
    }

    #[test]
    fn rational_polytope_points() {
        let p = Polytope::new(vec![vec![int(0)], vec![rat(1, 2)]]).unwrap();
        assert!(!p.is_lattice());
        assert_eq!(p.lattice_points(1), vec![vec![0]]);
        assert_eq!(p.lattice_points(3).len(), 2);
        assert_eq!(p.interior_lattice_points(2), Vec::<Vec<i64>>::new());
        assert_eq!(p.interior_lattice_points(3), vec![vec![1]]);
    }

    #[test]
    fn volumes_and_integrals() {
        assert_eq!(square().volume().unwrap(), int(1));
        let tri = Polytope::from_integer(&[vec![0, 0], vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(tri.volume().unwrap(), half());
        assert_eq!(square().integrate_monomial(&[1, 0]).unwrap(), half());
        assert_eq!(square().integrate_monomial(&[0, 0]).unwrap(), int(1));
        assert_eq!(square().integrate_monomial(&[1, 1]).unwrap(), rat(1, 4));
        let std = Polytope::from_integer(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(std.integrate_monomial(&[1, 1]).unwrap(), rat(1, 24));
        let seg = Polytope::from_integer(&[vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(seg.volume().unwrap(), int(1));
        let long = Polytope::from_integer(&[vec![0, 0], vec![2, 2]]).unwrap();
        assert_eq!(long.volume().unwrap(), int(2));
        assert_eq!(penta3().volume().unwrap(), rat(1, 3));
    }
}
