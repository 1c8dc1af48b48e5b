//! Small exact linear algebra over the rationals and the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::Rat;
use crate::error::{Error, Result};

pub fn to_rat(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from_integer(x.into())).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    rref(rows).1.len()
}

/// Basis of `{x : rows x = 0}` in `Q^ncols`.
pub fn null_space(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let (r, pivots) = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Determinant of a square matrix by elimination.
pub fn det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            let pivot_row = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
    }
    d
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let aug: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_vec(m: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Scales a nonzero rational vector to the primitive integer vector with the
/// same direction.
pub fn primitive(v: &[Rat]) -> Result<Vec<i64>> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(Error::Degenerate(
            "zero vector has no primitive form".into(),
        ));
    }
    ints.iter()
        .map(|x| (x / &g).to_i64().ok_or(Error::Overflow("primitive vector")))
        .collect()
}

/// Basis of the integer kernel `{x in Z^n : rows x = 0}` via unimodular
/// column operations.
pub fn integer_kernel(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    // columns are stored as u[col][row] and m[row][col]
    let col_op =
        |m: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
            for row in m.iter_mut() {
                let s = row[src].clone();
                row[dst] -= q * s;
            }
            let s = u[src].clone();
            for (x, y) in u[dst].iter_mut().zip(&s) {
                *x -= q * y;
            }
        };
    let swap = |m: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, a: usize, b: usize| {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
        u.swap(a, b);
    };
    let mut c = 0;
    for r in 0..m.len() {
        if c == n {
            break;
        }
        loop {
            let best = (c..n)
                .filter(|&j| !m[r][j].is_zero())
                .min_by(|&a, &b| m[r][a].abs().cmp(&m[r][b].abs()));
            let Some(b) = best else { break };
            swap(&mut m, &mut u, c, b);
            let mut done = true;
            for j in c + 1..n {
                if !m[r][j].is_zero() {
                    let q = m[r][j].div_floor(&m[r][c]);
                    col_op(&mut m, &mut u, j, c, &q);
                    if !m[r][j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !m[r][c].is_zero() {
            c += 1;
        }
    }
    u[c..]
        .iter()
        .map(|col| {
            col.iter()
                .map(|x| x.to_i64().expect("kernel entry fits"))
                .collect()
        })
        .collect()
}

/// Diagonal of a lower triangular basis of the lattice spanned by the columns
/// of a nonsingular square integer matrix; its product is `|det m|` and the box
/// `0 <= r_i < h_i` is a transversal of `Z^k` modulo that lattice.
pub fn hnf_diagonal(m: &[Vec<i64>]) -> Vec<BigInt> {
    let k = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut diag = Vec::with_capacity(k);
    for r in 0..k {
        loop {
            let best = (r..k)
                .filter(|&j| !a[r][j].is_zero())
                .min_by(|&x, &y| a[r][x].abs().cmp(&a[r][y].abs()));
            let Some(b) = best else { break };
            for row in a.iter_mut() {
                row.swap(r, b);
            }
            let mut done = true;
            for j in r + 1..k {
                if !a[r][j].is_zero() {
                    let q = a[r][j].div_floor(&a[r][r]);
                    for row in a.iter_mut() {
                        let s = row[r].clone();
                        row[j] -= &q * s;
                    }
                    if !a[r][j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        diag.push(a[r][r].abs());
    }
    diag
}

/// Determinant of an integer matrix by fraction-free elimination.
pub fn int_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// A normal vector of the hyperplane spanned by `d - 1` integer vectors in
/// `Z^d`, by cofactors, reduced to primitive form. Zero if they are dependent.
pub fn int_normal(rows: &[Vec<i128>], d: usize) -> Vec<i128> {
    let mut out: Vec<i128> = (0..d)
        .map(|k| {
            let minor: Vec<Vec<i128>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let s = if k % 2 == 0 { 1 } else { -1 };
            s * int_det(&minor)
        })
        .collect();
    let g = out.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    if g > 1 {
        for x in out.iter_mut() {
            *x /= g;
        }
    }
    out
}

/// Affine hull of a point set with a coordinate chart.
///
/// Points of the hull are determined by their coordinates at `pivots`; the
/// chart `x -> x[pivots]` is injective on the hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFrame {
    pub origin: Vec<Rat>,
    /// Row-reduced basis of the direction space; row `j` has a one at `pivots[j]`.
    pub basis: Vec<Vec<Rat>>,
    pub pivots: Vec<usize>,
    /// Primitive integer normals `a` with `a . x = a . origin` on the hull.
    pub equations: Vec<Vec<i64>>,
    /// Index of the projected direction lattice in `Z^d`.
    pub lattice_index: Rat,
}

impl AffineFrame {
    pub fn new(points: &[Vec<Rat>]) -> Result<Self> {
        let origin = points.first().ok_or(Error::Empty)?.clone();
        let ambient = origin.len();
        let dirs: Vec<Vec<Rat>> = points[1..].iter().map(|p| sub(p, &origin)).collect();
        let (basis, pivots) = if dirs.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            rref(&dirs)
        };
        let normals = if basis.is_empty() {
            (0..ambient)
                .map(|i| {
                    let mut e = vec![Rat::zero(); ambient];
                    e[i] = Rat::one();
                    e
                })
                .collect()
        } else {
            null_space(&basis, ambient)
        };
        let equations: Vec<Vec<i64>> = normals
            .iter()
            .map(|n| primitive(n))
            .collect::<Result<_>>()?;
        let lattice_index = if equations.is_empty() || pivots.is_empty() {
            Rat::one()
        } else {
            let kernel = integer_kernel(&equations, ambient);
            let m: Vec<Vec<Rat>> = kernel
                .iter()
                .map(|k| {
                    pivots
                        .iter()
                        .map(|&p| Rat::from_integer(k[p].into()))
                        .collect()
                })
                .collect();
            det(&m).abs()
        };
        Ok(AffineFrame {
            origin,
            basis,
            pivots,
            equations,
            lattice_index,
        })
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.origin.len()
    }

    pub fn project(&self, x: &[Rat]) -> Vec<Rat> {
        self.pivots.iter().map(|&p| x[p].clone()).collect()
    }

    /// The point of the hull dilated by `n` with chart coordinates `y`.
    pub fn lift_dilated(&self, y: &[Rat], n: &Rat) -> Vec<Rat> {
        let mut x: Vec<Rat> = self.origin.iter().map(|o| o * n).collect();
        for (j, row) in self.basis.iter().enumerate() {
            let c = &y[j] - &self.origin[self.pivots[j]] * n;
            if c.is_zero() {
                continue;
            }
            for (xi, ri) in x.iter_mut().zip(row) {
                *xi += &c * ri;
            }
        }
        x
    }

    pub fn lift(&self, y: &[Rat]) -> Vec<Rat> {
        self.lift_dilated(y, &Rat::one())
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|a| {
            let a = to_rat(a);
            dot(&a, x) == dot(&a, &self.origin)
        })
    }
}
