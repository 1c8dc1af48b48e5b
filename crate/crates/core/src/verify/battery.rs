use rayon::prelude::*;

use super::checks::*;
use super::{CheckLine, Report};
use crate::algebra::{int, Rat, VarSet};
use crate::error::Result;
use crate::lift::{ExpTerm, Weight, WeightSystem};
use crate::polytope::{PointConfig, Polytope};

/// A polytope with a weight system, labelled for reports.
#[derive(Clone, Debug)]
pub struct Case {
    pub polytope_id: String,
    pub polytope: Polytope,
    pub weights: WeightSystem,
}

impl Case {
    pub fn new(polytope_id: &str, polytope: Polytope, weights: WeightSystem) -> Self {
        Case {
            polytope_id: polytope_id.to_string(),
            polytope,
            weights,
        }
    }

    /// The weights rendered in `t1..ts`, comma separated; `1` when there are none.
    pub fn weight_id(&self) -> String {
        if self.weights.is_empty() {
            return "1".to_string();
        }
        let s = self.polytope.ambient_dim();
        self.weights
            .weights()
            .iter()
            .map(|w| weight_label(w, s))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub(crate) fn line(&self, name: &str, passed: bool, detail: impl Into<String>) -> CheckLine {
        CheckLine::new(name, &self.polytope_id, &self.weight_id(), passed, detail)
    }
}

/// A polynomial weight rendered as a polynomial in `t1..ts`.
pub fn weight_label(w: &Weight, s: usize) -> String {
    let vars = VarSet::new((1..=s).map(|i| format!("t{i}"))).expect("distinct names");
    match w.as_poly(s) {
        Some(p) => p.render(&vars).replace(' ', ""),
        None => w.to_string().replace(' ', ""),
    }
}

fn lattice(v: &[&[i64]]) -> Polytope {
    Polytope::from_integer(&v.iter().map(|x| x.to_vec()).collect::<Vec<_>>())
        .expect("battery polytopes are valid")
}

pub(crate) fn segment01() -> Polytope {
    lattice(&[&[0], &[1]])
}

pub(crate) fn segment02() -> Polytope {
    lattice(&[&[0], &[2]])
}

pub(crate) fn unit_square() -> Polytope {
    lattice(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
}

pub(crate) fn triangle() -> Polytope {
    lattice(&[&[0, 0], &[1, 0], &[1, 1]])
}

pub(crate) fn unit_cube() -> Polytope {
    let pts: Vec<Vec<i64>> = (0..8)
        .map(|m| (0..3).map(|i| (m >> i) & 1).collect())
        .collect();
    Polytope::from_integer(&pts).expect("cube")
}

/// `conv((0,0,0), (1,0,0), (1,1,0), (1,1,1), (2,1,1))`: two unimodular
/// tetrahedra glued along a triangle.
pub(crate) fn penta3() -> Polytope {
    lattice(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0], &[1, 1, 1], &[2, 1, 1]])
}

/// The square weights `t1+t2`, `2t1+3t2`, `t1`.
pub(crate) fn square_weights(k: usize) -> WeightSystem {
    let all: [&[i64]; 3] = [&[1, 1], &[2, 3], &[1, 0]];
    WeightSystem::linear(&all[..k])
}

/// The battery: segments `[0,1]` and `[0,2]`, the unit square, a unimodular
/// triangle, the unit cube and `penta3`, each with weight systems of sizes
/// `0..=3`.
pub fn battery() -> Vec<Case> {
    let mut out = Vec::new();
    for (id, p, systems) in [
        (
            "seg01",
            segment01(),
            vec![WeightSystem::empty(), WeightSystem::linear(&[&[1]])],
        ),
        (
            "seg02",
            segment02(),
            vec![
                WeightSystem::empty(),
                WeightSystem::linear(&[&[1]]),
                WeightSystem::linear(&[&[1], &[2]]),
            ],
        ),
        (
            "square",
            unit_square(),
            (0..=3).map(square_weights).collect(),
        ),
        (
            "triangle",
            triangle(),
            vec![
                WeightSystem::empty(),
                WeightSystem::linear(&[&[1, 1]]),
                WeightSystem::linear(&[&[1, 0], &[0, 1]]),
            ],
        ),
        (
            "cube",
            unit_cube(),
            vec![WeightSystem::empty(), WeightSystem::linear(&[&[1, 1, 1]])],
        ),
        (
            "penta3",
            penta3(),
            vec![WeightSystem::empty(), WeightSystem::linear(&[&[1, 1, 1]])],
        ),
    ] {
        for ws in systems {
            out.push(Case::new(id, p.clone(), ws));
        }
    }
    out
}

/// The exponential-polynomial weights `1, a1, a1^2, 2^a1, a1 2^a1`.
pub(crate) fn reciprocity_weights() -> Vec<(Weight, &'static str)> {
    let one = int(1);
    let two = int(2);
    let term =
        |poly: Vec<Rat>, base: &Rat| Weight::ExpPoly(vec![vec![ExpTerm::new(poly, base.clone())]]);
    vec![
        (term(vec![int(1)], &one), "1"),
        (term(vec![int(0), int(1)], &one), "a1"),
        (term(vec![int(0), int(0), int(1)], &one), "a1^2"),
        (term(vec![int(1)], &two), "2^a1"),
        (term(vec![int(0), int(1)], &two), "a1*2^a1"),
    ]
}

type Job = Box<dyn Fn() -> CheckLine + Send + Sync>;

fn job(
    name: &'static str,
    polytope: String,
    weight: String,
    f: impl Fn() -> Result<CheckLine> + Send + Sync + 'static,
) -> Job {
    Box::new(move || {
        f().unwrap_or_else(|e| {
            CheckLine::new(name, &polytope, &weight, false, format!("error: {e}"))
        })
    })
}

fn case_job(
    name: &'static str,
    c: &Case,
    f: impl Fn(&Case) -> Result<CheckLine> + Send + Sync + 'static,
) -> Job {
    let c = c.clone();
    let (pid, wid) = (c.polytope_id.clone(), c.weight_id());
    job(name, pid, wid, move || f(&c))
}

/// Every check of the battery, in report order.
fn jobs() -> Vec<Job> {
    let cases = battery();
    let mut jobs: Vec<Job> = Vec::new();
    for c in &cases {
        jobs.push(case_job("q-lift", c, verify_q_lift));
        jobs.push(case_job("r-lift", c, verify_r_lift));
        if c.weights.len() <= 2 {
            jobs.push(case_job("oracle", c, verify_oracles));
            jobs.push(case_job("q-reciprocity", c, verify_q_reciprocity));
            jobs.push(case_job("hilbert-lift", c, |c| verify_hilbert_lift(c, 2)));
        }
        if c.weights.len() == 1 {
            jobs.push(case_job("positivity", c, verify_positivity));
            let w = c.weights.weights()[0].clone();
            jobs.push(case_job("bounds", c, move |c| verify_bounds(c, &w, &w)));
        }
    }
    let coord = |s: usize, idx: &[usize]| {
        WeightSystem::new(idx.iter().map(|&i| Weight::coordinate(s, i)).collect())
    };
    for c in [
        Case::new("seg01", segment01(), coord(1, &[0])),
        Case::new("square", unit_square(), coord(2, &[0])),
        Case::new("square", unit_square(), coord(2, &[0, 1])),
        Case::new("cube", unit_cube(), coord(3, &[0, 1])),
        Case::new("flatseg", lattice(&[&[0, 0], &[0, 1]]), coord(2, &[0])),
    ] {
        jobs.push(case_job("dim-formula", &c, verify_dim_formula));
    }
    let vertical = Case::new(
        "vseg",
        lattice(&[&[1, 0], &[1, 1]]),
        WeightSystem::linear(&[&[1, 0]]),
    );
    jobs.push(case_job("bounds", &vertical, |c| {
        let w = Weight::Linear(vec![1, 0]);
        verify_bounds(c, &w, &w)
    }));
    let sq = Case::new("square", unit_square(), WeightSystem::empty());
    for (f, label) in [
        (Weight::Linear(vec![1, 1]), "t1+t2"),
        (Weight::Linear(vec![2, 3]), "2*t1+3*t2"),
        (Weight::Monomial(vec![1, 1]), "t1*t2"),
    ] {
        let c = sq.clone();
        jobs.push(job(
            "leading-coefficient",
            "square".into(),
            label.into(),
            move || verify_leading_coefficient(&c, &f, label),
        ));
    }
    for (id, p) in [
        ("seg02", segment02()),
        ("triangle", triangle()),
        ("cube", unit_cube()),
        ("penta3", penta3()),
    ] {
        let c = Case::new(id, p, WeightSystem::empty());
        let s = c.polytope.ambient_dim();
        jobs.push(job(
            "leading-coefficient",
            id.into(),
            "1".into(),
            move || verify_leading_coefficient(&c, &Weight::constant(s, int(1)), "1"),
        ));
    }
    for (id, p) in [
        ("seg01", segment01()),
        ("triangle", triangle()),
        ("square", unit_square()),
    ] {
        for (h, label) in reciprocity_weights() {
            let p = p.clone();
            jobs.push(job("s-reciprocity", id.into(), label.into(), move || {
                verify_s_reciprocity(id, &p, &h, label)
            }));
        }
    }
    for (c, config, tag) in [
        (
            Case::new("square", unit_square(), square_weights(1)),
            PointConfig::Vertices,
            "vertices",
        ),
        (
            Case::new("triangle", triangle(), WeightSystem::linear(&[&[1, 1]])),
            PointConfig::Vertices,
            "vertices",
        ),
        (
            Case::new("penta3", penta3(), WeightSystem::linear(&[&[1, 1, 1]])),
            PointConfig::Vertices,
            "vertices",
        ),
        (
            Case::new("penta3", penta3(), WeightSystem::linear(&[&[1, 1, 1]])),
            PointConfig::AllLatticePoints,
            "lattice-points",
        ),
    ] {
        jobs.push(case_job("compatible", &c, move |c| {
            compatible_line(c, config, tag)
        }));
    }
    jobs.push(job("non-noetherian", "point1".into(), "a^2".into(), || {
        verify_non_noetherian_witness(30)
    }));
    jobs
}

/// A compatible triangulation, when one exists, must give a q-series
/// numerator with nonnegative coefficients.
fn compatible_line(c: &Case, config: PointConfig, tag: &str) -> Result<CheckLine> {
    let r = compatible_triangulation_search(&c.polytope, &c.weights, config)?;
    Ok(match (&r.found, r.numerator_nonnegative) {
        (Some(t), Some(nonneg)) => c.line(
            "compatible",
            nonneg,
            format!(
                "{tag} found={:?} at {}/{} numerator-nonnegative={nonneg}",
                t.simplices(),
                r.examined,
                r.total
            ),
        ),
        _ => c.line(
            "compatible",
            true,
            format!("{tag} none among {} triangulations", r.total),
        ),
    })
}

/// Runs the battery in parallel; lines keep their fixed order.
pub fn run_battery() -> Report {
    let lines = jobs().par_iter().map(|j| j()).collect();
    Report { lines }
}
