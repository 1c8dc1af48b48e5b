use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use super::Polytope;
use crate::algebra::{factorial, LaurentPoly, Rat};
use crate::error::{Error, Result};
use crate::linalg::{det, dot, null_space, rank, sub, AffineFrame};

/// Largest point configuration accepted by [`all_triangulations`].
pub const TRIANGULATION_GUARD: usize = 12;

/// Sorted indices into a point configuration.
pub type Simplex = Vec<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointConfig {
    Vertices,
    AllLatticePoints,
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    points: Vec<Vec<Rat>>,
    simplices: Vec<Simplex>,
    frame: AffineFrame,
}

impl Triangulation {
    pub fn points(&self) -> &[Vec<Rat>] {
        &self.points
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// Relative volume of one simplex.
    pub fn simplex_volume(&self, s: &[usize]) -> Rat {
        let ys: Vec<Vec<Rat>> = s
            .iter()
            .map(|&i| self.frame.project(&self.points[i]))
            .collect();
        let rows: Vec<Vec<Rat>> = ys[1..].iter().map(|y| sub(y, &ys[0])).collect();
        let d = self.dim() as u64;
        let v = if rows.is_empty() {
            Rat::one()
        } else {
            det(&rows).abs()
        };
        v / Rat::from_integer(factorial(d)) / &self.frame.lattice_index
    }

    pub fn volume(&self) -> Rat {
        self.simplices.iter().map(|s| self.simplex_volume(s)).sum()
    }

    /// Vertex coordinates of every simplex.
    pub fn simplex_points(&self) -> Vec<Vec<Vec<Rat>>> {
        self.simplices
            .iter()
            .map(|s| s.iter().map(|&i| self.points[i].clone()).collect())
            .collect()
    }

    /// Placing triangulation: points are inserted in lexicographic order and
    /// coned over the boundary facets they see; points already covered are skipped.
    pub fn placing(points: Vec<Vec<Rat>>) -> Result<Self> {
        let points: Vec<Vec<Rat>> = points
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let frame = AffineFrame::new(&points)?;
        let d = frame.dim();
        let ys: Vec<Vec<Rat>> = points.iter().map(|p| frame.project(p)).collect();
        if d == 0 {
            return Ok(Triangulation {
                points,
                simplices: vec![vec![0]],
                frame,
            });
        }
        let mut initial = vec![0usize];
        for i in 1..ys.len() {
            if initial.len() == d + 1 {
                break;
            }
            let mut trial: Vec<Vec<Rat>> =
                initial[1..].iter().map(|&j| sub(&ys[j], &ys[0])).collect();
            trial.push(sub(&ys[i], &ys[0]));
            if rank(&trial) == trial.len() {
                initial.push(i);
            }
        }
        if initial.len() != d + 1 {
            return Err(Error::Degenerate(
                "points do not span their affine hull".into(),
            ));
        }
        let mut simplices = vec![initial.clone()];
        for (i, y) in ys.iter().enumerate() {
            if initial.contains(&i) {
                continue;
            }
            let visible: Vec<Vec<usize>> = boundary_facets(&simplices, &ys)
                .into_iter()
                .filter(|(_, a, b)| dot(a, y) > *b)
                .map(|(f, _, _)| f)
                .collect();
            for f in visible {
                let mut s = f;
                s.push(i);
                s.sort_unstable();
                simplices.push(s);
            }
        }
        simplices.sort();
        Ok(Triangulation {
            points,
            simplices,
            frame,
        })
    }
}

impl Polytope {
    /// The point configuration used for triangulations.
    pub fn configuration(&self, config: PointConfig) -> Vec<Vec<Rat>> {
        match config {
            PointConfig::Vertices => self.vertices().to_vec(),
            PointConfig::AllLatticePoints => self
                .lattice_points(1)
                .iter()
                .map(|p| crate::linalg::to_rat(p))
                .collect(),
        }
    }

    pub fn triangulate(&self, config: PointConfig) -> Result<Triangulation> {
        let pts = self.configuration(config);
        if pts.is_empty() {
            return Err(Error::Degenerate("no lattice points".into()));
        }
        let t = Triangulation::placing(pts)?;
        if t.dim() != self.dim() {
            return Err(Error::Degenerate(
                "configuration does not span the polytope".into(),
            ));
        }
        Ok(t)
    }
}

/// Hyperplane `a . y = b` through the given chart points.
fn hyperplane(ys: &[Vec<Rat>], idx: &[usize]) -> Option<(Vec<Rat>, Rat)> {
    let d = ys[idx[0]].len();
    let rows: Vec<Vec<Rat>> = idx[1..].iter().map(|&i| sub(&ys[i], &ys[idx[0]])).collect();
    let ns = null_space(&rows, d);
    if ns.len() != 1 {
        return None;
    }
    let a = ns.into_iter().next().unwrap();
    let b = dot(&a, &ys[idx[0]]);
    Some((a, b))
}

/// Facets lying in exactly one simplex, oriented so the simplex is on the `<=` side.
fn boundary_facets(simplices: &[Simplex], ys: &[Vec<Rat>]) -> Vec<(Vec<usize>, Vec<Rat>, Rat)> {
    let mut seen: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
    for s in simplices {
        for k in 0..s.len() {
            let f: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &x)| x)
                .collect();
            let e = seen.entry(f).or_insert((0, s[k]));
            e.0 += 1;
        }
    }
    seen.into_iter()
        .filter(|(_, (c, _))| *c == 1)
        .map(|(f, (_, opp))| {
            let (a, b) = hyperplane(ys, &f).expect("facet of a simplex spans a hyperplane");
            oriented(f, a, b, &ys[opp])
        })
        .collect()
}

fn oriented(f: Vec<usize>, a: Vec<Rat>, b: Rat, inside: &[Rat]) -> (Vec<usize>, Vec<Rat>, Rat) {
    if dot(&a, inside) > b {
        (f, a.iter().map(|x| -x).collect(), -b)
    } else {
        (f, a, b)
    }
}

/// `int_S x^b` over a simplex with the given relative volume: expand
/// `x_j = sum_i lambda_i v_ij` and use `int lambda^alpha = d! vol alpha! / (|alpha| + d)!`.
pub(crate) fn integrate_over_simplex(pts: &[&Vec<Rat>], b: &[u32], volume: &Rat) -> Rat {
    let nv = pts.len();
    let d = nv as u64 - 1;
    let mut poly = LaurentPoly::one(nv);
    for (j, &e) in b.iter().enumerate() {
        let linear = LaurentPoly::from_terms(
            nv,
            (0..nv).map(|i| {
                let mut ex = vec![0; nv];
                ex[i] = 1;
                (ex, pts[i][j].clone())
            }),
        );
        for _ in 0..e {
            poly = &poly * &linear;
        }
    }
    let mut acc = Rat::zero();
    for (alpha, c) in poly.terms() {
        let num: num_bigint::BigInt = alpha.iter().map(|&a| factorial(a as u64)).product();
        let total: i64 = alpha.iter().sum();
        acc += c * Rat::new(num, factorial(total as u64 + d));
    }
    acc * Rat::from_integer(factorial(d)) * volume
}

/// Every triangulation of `conv(points)` whose simplices are spanned by the
/// given points, each listed once.
pub fn all_triangulations(points: &[Vec<Rat>]) -> Result<Vec<Triangulation>> {
    let points: Vec<Vec<Rat>> = points
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if points.len() > TRIANGULATION_GUARD {
        return Err(Error::GuardExceeded(format!(
            "{} points, at most {TRIANGULATION_GUARD} supported",
            points.len()
        )));
    }
    let hull = Polytope::new(points.clone())?;
    let frame = hull.frame().clone();
    let d = frame.dim();
    if d == 0 {
        return Ok(vec![Triangulation {
            points,
            simplices: vec![vec![0]],
            frame,
        }]);
    }
    let ys: Vec<Vec<Rat>> = points.iter().map(|p| frame.project(p)).collect();
    let mut search = Search::new(&ys, d, hull.chart_facets().to_vec());
    let total = hull.volume()?;
    let g = search.generic_point()?;
    let starts: Vec<usize> = (0..search.simplices.len())
        .filter(|&i| search.contains_strictly(i, &g))
        .collect();
    let mut found: Vec<Vec<Simplex>> = Vec::new();
    for s in starts {
        let mut chosen = vec![s];
        let mut unmatched = BTreeMap::new();
        let simplex = search.simplices[s].clone();
        for (f, a, b) in search.facets_of(&simplex) {
            if !search.on_boundary(&f) {
                unmatched.insert(f, (a, b));
            }
        }
        search.dfs(&mut chosen, &mut unmatched, &mut found);
    }
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for set in found {
        let mut simplices: Vec<Simplex> = set;
        simplices.sort();
        if !seen.insert(simplices.clone()) {
            continue;
        }
        let t = Triangulation {
            points: points.clone(),
            simplices,
            frame: frame.clone(),
        };
        if t.volume() == total {
            out.push(t);
        }
    }
    Ok(out)
}

struct Search<'a> {
    ys: &'a [Vec<Rat>],
    d: usize,
    hull: Vec<(Vec<Rat>, Rat)>,
    simplices: Vec<Simplex>,
    ids: HashMap<Simplex, usize>,
    proper: HashMap<(usize, usize), bool>,
}

impl<'a> Search<'a> {
    fn new(ys: &'a [Vec<Rat>], d: usize, hull: Vec<(Vec<Rat>, Rat)>) -> Self {
        let simplices: Vec<Simplex> = (0..ys.len())
            .combinations(d + 1)
            .filter(|s| {
                let rows: Vec<Vec<Rat>> = s[1..].iter().map(|&i| sub(&ys[i], &ys[s[0]])).collect();
                rank(&rows) == d
            })
            .collect();
        let ids = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Search {
            ys,
            d,
            hull,
            simplices,
            ids,
            proper: HashMap::new(),
        }
    }

    fn facets_of(&self, s: &[usize]) -> Vec<(Vec<usize>, Vec<Rat>, Rat)> {
        (0..s.len())
            .map(|k| {
                let f: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, &x)| x)
                    .collect();
                let (a, b) = hyperplane(self.ys, &f).expect("simplex facet");
                oriented(f, a, b, &self.ys[s[k]])
            })
            .collect()
    }

    fn on_boundary(&self, f: &[usize]) -> bool {
        self.hull
            .iter()
            .any(|(a, b)| f.iter().all(|&i| dot(a, &self.ys[i]) == *b))
    }

    fn contains_strictly(&self, s: usize, g: &[Rat]) -> bool {
        self.facets_of(&self.simplices[s])
            .iter()
            .all(|(_, a, b)| dot(a, g) < *b)
    }

    /// An interior point off every hyperplane spanned by the configuration.
    fn generic_point(&self) -> Result<Vec<Rat>> {
        let n = Rat::from_integer((self.ys.len() as i64).into());
        let centroid: Vec<Rat> = (0..self.d)
            .map(|j| self.ys.iter().map(|y| y[j].clone()).sum::<Rat>() / &n)
            .collect();
        let planes: Vec<(Vec<Rat>, Rat)> = (0..self.ys.len())
            .combinations(self.d)
            .filter_map(|f| hyperplane(self.ys, &f))
            .collect();
        for k in 1..=1000i64 {
            let g: Vec<Rat> = centroid
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    c + Rat::new(1.into(), (10 * k).into())
                        / Rat::from_integer(7i64.pow(j as u32 + 1).into())
                })
                .collect();
            let inside = self.hull.iter().all(|(a, b)| dot(a, &g) < *b);
            let generic = planes.iter().all(|(a, b)| dot(a, &g) != *b);
            if inside && generic {
                return Ok(g);
            }
        }
        Err(Error::Degenerate("no generic interior point found".into()))
    }

    fn compatible(&mut self, s: usize, t: usize) -> bool {
        let key = (s.min(t), s.max(t));
        if let Some(&v) = self.proper.get(&key) {
            return v;
        }
        let v = properly_intersect(&self.simplices[s], &self.simplices[t], self.ys, self.d);
        self.proper.insert(key, v);
        v
    }

    fn dfs(
        &mut self,
        chosen: &mut Vec<usize>,
        unmatched: &mut BTreeMap<Vec<usize>, (Vec<Rat>, Rat)>,
        out: &mut Vec<Vec<Simplex>>,
    ) {
        let Some((f, (a, b))) = unmatched.iter().next().map(|(f, v)| (f.clone(), v.clone())) else {
            out.push(chosen.iter().map(|&i| self.simplices[i].clone()).collect());
            return;
        };
        for p in 0..self.ys.len() {
            if dot(&a, &self.ys[p]) <= b {
                continue;
            }
            let mut s = f.clone();
            s.push(p);
            s.sort_unstable();
            let id = self.ids[&s];
            if !chosen.clone().into_iter().all(|c| self.compatible(c, id)) {
                continue;
            }
            let mut removed = Vec::new();
            let mut inserted = Vec::new();
            for (g, ga, gb) in self.facets_of(&s) {
                if let Some(v) = unmatched.remove(&g) {
                    removed.push((g, v));
                } else if !self.on_boundary(&g) {
                    unmatched.insert(g.clone(), (ga, gb));
                    inserted.push(g);
                }
            }
            chosen.push(id);
            self.dfs(chosen, unmatched, out);
            chosen.pop();
            for g in inserted {
                unmatched.remove(&g);
            }
            for (g, v) in removed {
                unmatched.insert(g, v);
            }
        }
    }
}

/// Two simplices meet in a common face iff no circuit has its positive part
/// in one and its negative part in the other.
fn properly_intersect(s: &[usize], t: &[usize], ys: &[Vec<Rat>], d: usize) -> bool {
    let union: Vec<usize> = s
        .iter()
        .chain(t)
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    for size in 2..=(d + 2).min(union.len()) {
        for z in union.iter().copied().combinations(size) {
            if z.iter().all(|i| s.contains(i)) || z.iter().all(|i| t.contains(i)) {
                continue;
            }
            let mut rows: Vec<Vec<Rat>> = (0..d)
                .map(|r| z.iter().map(|&i| ys[i][r].clone()).collect())
                .collect();
            rows.push(vec![Rat::one(); size]);
            let ns = null_space(&rows, size);
            if ns.len() != 1 || ns[0].iter().any(|x| x.is_zero()) {
                continue;
            }
            let lambda = &ns[0];
            let pos: Vec<usize> = z
                .iter()
                .zip(lambda)
                .filter(|(_, l)| l.is_positive())
                .map(|(&i, _)| i)
                .collect();
            let neg: Vec<usize> = z
                .iter()
                .zip(lambda)
                .filter(|(_, l)| l.is_negative())
                .map(|(&i, _)| i)
                .collect();
            let within = |part: &[usize], set: &[usize]| part.iter().all(|i| set.contains(i));
            if (within(&pos, s) && within(&neg, t)) || (within(&pos, t) && within(&neg, s)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;
    use crate::linalg::to_rat;

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rat>> {
        v.iter().map(|p| to_rat(p)).collect()
    }

    #[test]
    fn placing_square_and_segment() {
        let sq = Polytope::from_integer(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let t = sq.triangulate(PointConfig::Vertices).unwrap();
        assert_eq!(t.simplices().len(), 2);
        assert_eq!(t.volume(), int(1));
        let seg = Polytope::from_integer(&[vec![0], vec![2]]).unwrap();
        let t = seg.triangulate(PointConfig::AllLatticePoints).unwrap();
        assert_eq!(t.simplices(), &[vec![0, 1], vec![1, 2]]);
        let t = seg.triangulate(PointConfig::Vertices).unwrap();
        assert_eq!(t.simplices().len(), 1);
    }

    #[test]
    fn placing_with_interior_points() {
        let big =
            Polytope::from_integer(&[vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2]]).unwrap();
        let t = big.triangulate(PointConfig::AllLatticePoints).unwrap();
        assert_eq!(t.volume(), int(4));
        for s in t.simplices() {
            assert_eq!(t.simplex_volume(s), Rat::new(1.into(), 2.into()));
        }
    }

    #[test]
    fn enumerate_small_configurations() {
        assert_eq!(
            all_triangulations(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]))
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            all_triangulations(&pts(&[&[0, 0], &[1, 0], &[1, 1]]))
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            all_triangulations(&pts(&[&[0], &[1], &[2]])).unwrap().len(),
            2
        );
        // Pentagon: Catalan(3) = 5.
        let pent = pts(&[&[0, 0], &[2, 0], &[3, 2], &[1, 3], &[-1, 2]]);
        assert_eq!(all_triangulations(&pent).unwrap().len(), 5);
        // Hexagon: Catalan(4) = 14.
        let hex = pts(&[&[0, 0], &[2, 0], &[4, 1], &[4, 3], &[2, 4], &[0, 3]]);
        assert_eq!(all_triangulations(&hex).unwrap().len(), 14);
        // Triangle with one interior point: the single fine triangulation and the coarse one.
        let tri = pts(&[&[0, 0], &[3, 0], &[0, 3], &[1, 1]]);
        assert_eq!(all_triangulations(&tri).unwrap().len(), 2);
        // Unit cube vertices: 74 triangulations.
        let cube: Vec<Vec<Rat>> = (0..8)
            .map(|m| to_rat(&[m & 1, (m >> 1) & 1, (m >> 2) & 1]))
            .collect();
        assert_eq!(all_triangulations(&cube).unwrap().len(), 74);
    }

    #[test]
    fn guard() {
        let many: Vec<Vec<Rat>> = (0..13).map(|i| to_rat(&[i])).collect();
        assert!(matches!(
            all_triangulations(&many),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn simplex_integral() {
        let a = to_rat(&[0, 0]);
        let b = to_rat(&[1, 0]);
        let c = to_rat(&[0, 1]);
        let half = Rat::new(1.into(), 2.into());
        assert_eq!(
            integrate_over_simplex(&[&a, &b, &c], &[1, 1], &half),
            Rat::new(1.into(), 24.into())
        );
        assert_eq!(
            integrate_over_simplex(&[&a, &b, &c], &[2, 0], &half),
            Rat::new(1.into(), 12.into())
        );
    }
}
