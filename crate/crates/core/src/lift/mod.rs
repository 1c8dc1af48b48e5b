//! Weight functions, weight lifting polytopes and Hilbert bases.

mod hilbert;
mod weight;

pub use hilbert::{hilbert_basis, is_irreducible, HilbertBasis, SquareSumSemigroup};
pub use weight::{ExpTerm, Weight, WeightSystem};

use std::collections::BTreeSet;

use crate::error::Result;
use crate::polytope::Polytope;

/// `conv{(v, w_1(v), .., w_p(v))}` over the vertices `v` of `P`.
pub fn lift_q(p: &Polytope, ws: &WeightSystem) -> Result<Polytope> {
    let s = p.ambient_dim();
    ws.liftable_forms(s)?;
    let pts: Vec<Vec<i64>> = p
        .lattice_vertices()?
        .into_iter()
        .map(|v| {
            let mut x = v.clone();
            x.extend(ws.linear_values(&v)?);
            Ok(x)
        })
        .collect::<Result<_>>()?;
    Polytope::from_integer(&pts)
}

/// The point set `G`: for every vertex `v` and every subset `J` of `[p]`,
/// the point `(v, b)` with `b_j = w_j(v)` for `j` in `J` and 0 otherwise.
pub fn lift_r_points(p: &Polytope, ws: &WeightSystem) -> Result<Vec<Vec<i64>>> {
    let s = p.ambient_dim();
    ws.liftable_forms(s)?;
    let np = ws.len();
    let mut g = BTreeSet::new();
    for v in p.lattice_vertices()? {
        let vals = ws.linear_values(&v)?;
        for mask in 0u32..(1 << np) {
            let mut x = v.clone();
            x.extend((0..np).map(|j| if mask >> j & 1 == 1 { vals[j] } else { 0 }));
            g.insert(x);
        }
    }
    Ok(g.into_iter().collect())
}

/// `P_w = conv(G)`.
pub fn lift_r(p: &Polytope, ws: &WeightSystem) -> Result<Polytope> {
    Polytope::from_integer(&lift_r_points(p, ws)?)
}

/// `{(c, b, d) : (c, d) in H_P, 0 <= b_j <= w_j(c)}`.
pub fn construct_h_pw(hp: &HilbertBasis, ws: &WeightSystem) -> Result<HilbertBasis> {
    let mut out = BTreeSet::new();
    for e in &hp.elements {
        let (c, d) = e.split_at(e.len() - 1);
        let vals = ws.linear_values(c)?;
        let mut b = vec![0i64; vals.len()];
        loop {
            let mut x = c.to_vec();
            x.extend_from_slice(&b);
            x.push(d[0]);
            out.insert(x);
            let mut k = 0;
            while k < b.len() && b[k] == vals[k] {
                b[k] = 0;
                k += 1;
            }
            if k == b.len() {
                break;
            }
            b[k] += 1;
        }
    }
    Ok(HilbertBasis {
        elements: out.into_iter().collect(),
        bound: hp.bound,
        certified: hp.certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::to_rat;

    fn square() -> Polytope {
        Polytope::from_integer(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    fn verts(p: &Polytope) -> Vec<Vec<crate::algebra::Rat>> {
        p.vertices().to_vec()
    }

    #[test]
    fn q_lift_of_square() {
        let l = lift_q(&square(), &WeightSystem::linear(&[&[1, 1]])).unwrap();
        let expected: Vec<_> = [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 2]]
            .iter()
            .map(|v| to_rat(v))
            .collect();
        assert_eq!(verts(&l), expected);
        assert_eq!(l.dim(), 2);
        let same = lift_q(&square(), &WeightSystem::empty()).unwrap();
        assert_eq!(verts(&same), verts(&square()));
        let seg = Polytope::from_integer(&[vec![0], vec![1]]).unwrap();
        let l = lift_q(&seg, &WeightSystem::linear(&[&[1]])).unwrap();
        assert_eq!(verts(&l), vec![to_rat(&[0, 0]), to_rat(&[1, 1])]);
    }

    #[test]
    fn r_lift_of_square() {
        let l = lift_r(&square(), &WeightSystem::linear(&[&[1, 1]])).unwrap();
        let expected: Vec<_> = [
            [0, 0, 0],
            [0, 1, 0],
            [0, 1, 1],
            [1, 0, 0],
            [1, 0, 1],
            [1, 1, 0],
            [1, 1, 2],
        ]
        .iter()
        .map(|v| to_rat(v))
        .collect();
        assert_eq!(verts(&l), expected);
        let seg = Polytope::from_integer(&[vec![0], vec![1]]).unwrap();
        let l = lift_r(&seg, &WeightSystem::linear(&[&[1]])).unwrap();
        assert_eq!(
            verts(&l),
            vec![to_rat(&[0, 0]), to_rat(&[1, 0]), to_rat(&[1, 1])]
        );
    }

    #[test]
    fn r_lift_point_set_of_three_weights() {
        let ws = WeightSystem::linear(&[&[1, 1], &[2, 3], &[1, 0]]);
        let g = lift_r_points(&square(), &ws).unwrap();
        // (0,0): 1 point, (1,0): weights (1,2,1) -> 8, (0,1): (1,3,0) -> 4, (1,1): (2,5,1) -> 8
        assert_eq!(g.len(), 21);
        assert!(g.contains(&vec![1, 1, 2, 5, 0]));
    }

    #[test]
    fn lifting_rejects_bad_weights() {
        assert!(lift_q(
            &square(),
            &WeightSystem::new(vec![Weight::Monomial(vec![1, 1])])
        )
        .is_err());
        assert!(lift_r(&square(), &WeightSystem::linear(&[&[-1, 0]])).is_err());
    }

    #[test]
    fn explicit_h_pw() {
        let hp = HilbertBasis {
            elements: vec![vec![0, 1], vec![1, 1]],
            bound: 2,
            certified: true,
        };
        let h = construct_h_pw(&hp, &WeightSystem::linear(&[&[1]])).unwrap();
        assert_eq!(
            h.elements,
            vec![vec![0, 0, 1], vec![1, 0, 1], vec![1, 1, 1]]
        );
        let same = construct_h_pw(&hp, &WeightSystem::empty()).unwrap();
        assert_eq!(same.elements, hp.elements);
        let sq = HilbertBasis {
            elements: vec![vec![1, 1, 1]],
            bound: 3,
            certified: true,
        };
        let h = construct_h_pw(&sq, &WeightSystem::linear(&[&[1, 1]])).unwrap();
        assert_eq!(
            h.elements,
            vec![vec![1, 1, 0, 1], vec![1, 1, 1, 1], vec![1, 1, 2, 1]]
        );
    }
}
