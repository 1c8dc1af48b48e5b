mod spec;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ehrlift::algebra::{int, Rat, RationalSeries, VarSet};
use ehrlift::lift::{hilbert_basis, lift_q, lift_r, Weight};
use ehrlift::polytope::{PointConfig, Polytope};
use ehrlift::series::{
    cone_over, drop_t_variables, ehrhart_series, q_weighted_series, r_weighted_series,
    reciprocity_check_q, s_reciprocity_check, s_weighted_series, specialize_q, specialize_t,
};
use ehrlift::verify::{
    compatible_triangulation_search, count_q, count_r, count_weighted, ehrhart_polynomial, hstar,
    interpolate, run_battery, verify_bounds, verify_dim_formula, verify_oracles, verify_positivity,
    verify_q_lift, verify_q_reciprocity, verify_r_lift, Case, CheckLine, Report,
};
use spec::ProblemSpec;

#[derive(Parser)]
#[command(
    name = "ehrlift",
    version,
    about = "Weighted Ehrhart counts, series and lifting polytopes, computed exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Plain,
    Q,
    R,
    S,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Config {
    Vertices,
    LatticePoints,
}

#[derive(Subcommand)]
enum Command {
    /// Count the lattice points of nP, plain or weighted
    Count {
        spec: PathBuf,
        /// plain, q, r or s
        #[arg(long, value_enum, default_value = "plain")]
        kind: Kind,
        /// Dilation factor
        #[arg(long)]
        n: u64,
        /// 1-based weight indices, comma separated; their product is used (kind s)
        #[arg(long, value_delimiter = ',')]
        weight: Vec<usize>,
    },
    /// Interpolate the (weighted) Ehrhart polynomial in n
    Poly {
        spec: PathBuf,
        /// plain or s
        #[arg(long, value_enum, default_value = "plain")]
        kind: Kind,
        /// 1-based weight indices, comma separated; their product is used (kind s)
        #[arg(long, value_delimiter = ',')]
        weight: Vec<usize>,
    },
    /// Print the generating series as a rational function
    Series {
        spec: PathBuf,
        /// plain, q, r or s
        #[arg(long, value_enum, default_value = "q")]
        kind: Kind,
        /// Set every t variable to the given value (only 1)
        #[arg(long, value_parser = ["1"])]
        set_t: Option<String>,
        /// Set every q variable to the given value (only 1)
        #[arg(long, value_parser = ["1"])]
        set_q: Option<String>,
        /// Also print the coefficients of x^0 .. x^N
        #[arg(long, value_name = "N")]
        order: Option<usize>,
        /// 1-based weight indices, comma separated; their product is used (kind s)
        #[arg(long, value_delimiter = ',')]
        weight: Vec<usize>,
    },
    /// Print the vertices of the q-lift or r-lift
    Lift {
        spec: PathBuf,
        /// q or r
        #[arg(long, value_enum, default_value = "r")]
        kind: Kind,
    },
    /// Hilbert basis of the cone over P or over one of its lifts
    Hilbert {
        spec: PathBuf,
        /// plain (cone over P), q or r (cone over the lift)
        #[arg(long, value_enum, default_value = "plain")]
        kind: Kind,
        /// Largest degree searched
        #[arg(long, default_value_t = 2)]
        bound: u64,
    },
    /// Placing triangulation, or a search for a weight-compatible one
    Triangulate {
        spec: PathBuf,
        /// Point configuration: vertices or lattice-points
        #[arg(long, value_enum, default_value = "vertices")]
        config: Config,
        /// Search all triangulations for one compatible with the weights
        #[arg(long)]
        compatible: bool,
    },
    /// Check the reciprocity law of the q-series or an s-series
    Reciprocity {
        spec: PathBuf,
        /// q or s
        #[arg(long, value_enum, default_value = "q")]
        kind: Kind,
        /// 1-based weight indices, comma separated; their product is used (kind s)
        #[arg(long, value_delimiter = ',')]
        weight: Vec<usize>,
    },
    /// h*-data of the Ehrhart series
    Hstar { spec: PathBuf },
    /// Run the built-in battery, or the checks for one spec file
    Verify { spec: Option<PathBuf> },
    /// Exact integral of a monomial or a polynomial weight over P
    Integrate {
        spec: PathBuf,
        /// Exponent vector of the monomial, comma separated
        #[arg(long, value_delimiter = ',')]
        exponents: Option<Vec<u32>>,
        /// 1-based weight indices, comma separated; their product is used
        #[arg(long, value_delimiter = ',')]
        weight: Vec<usize>,
    },
}

/// Exit status 1 carries a failed check, 2 bad input.
enum Failure {
    Check(String),
    Input(String),
}

impl From<ehrlift::Error> for Failure {
    fn from(e: ehrlift::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Out = Result<String, Failure>;

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn load(path: &Path) -> Result<ProblemSpec, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    ProblemSpec::parse(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

/// The product of the chosen weights; with no choice, the first weight, or 1.
fn chosen_weight(spec: &ProblemSpec, idx: &[usize]) -> Result<Weight, Failure> {
    let s = spec.polytope.ambient_dim();
    let all = spec.weights.weights();
    if idx.is_empty() {
        return Ok(all
            .first()
            .cloned()
            .unwrap_or_else(|| Weight::constant(s, int(1))));
    }
    let picked = idx
        .iter()
        .map(|&i| {
            all.get(i.wrapping_sub(1))
                .cloned()
                .ok_or_else(|| input(format!("weight index {i} out of range 1..={}", all.len())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if picked.len() == 1 {
        return Ok(picked[0].clone());
    }
    Weight::product(&picked, s).map_err(Failure::from)
}

fn point(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn int_point(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn kind_error(cmd: &str, allowed: &str) -> Failure {
    input(format!("{cmd} accepts --kind {allowed}"))
}

fn count(spec: &ProblemSpec, kind: Kind, n: u64, weight: &[usize]) -> Out {
    let p = &spec.polytope;
    let vars = VarSet::ehrhart(spec.weights.len(), p.ambient_dim());
    Ok(match kind {
        Kind::Plain => p.count_lattice_points(n).to_string(),
        Kind::Q => count_q(p, &spec.weights, n)?.render(&vars),
        Kind::R => count_r(p, &spec.weights, n)?.render(&vars),
        Kind::S => count_weighted(p, &chosen_weight(spec, weight)?, n)?.to_string(),
    })
}

fn poly(spec: &ProblemSpec, kind: Kind, weight: &[usize]) -> Out {
    let p = &spec.polytope;
    Ok(match kind {
        Kind::Plain => ehrhart_polynomial(p)?.to_string(),
        Kind::S => interpolate(p, &chosen_weight(spec, weight)?)?.to_string(),
        _ => return Err(kind_error("poly", "plain|s")),
    })
}

/// Removes the leading `p` q-variables once they no longer occur.
fn drop_q_variables(f: &RationalSeries, p: usize) -> Result<RationalSeries, Failure> {
    let mut g = f.clone();
    for _ in 0..p {
        let names: Vec<String> = g.vars().names()[1..].to_vec();
        g = g.drop_variable(0, VarSet::new(names)?)?;
    }
    Ok(g)
}

fn series(
    spec: &ProblemSpec,
    kind: Kind,
    set_t: bool,
    set_q: bool,
    order: Option<usize>,
    weight: &[usize],
) -> Out {
    let p = &spec.polytope;
    let s = p.ambient_dim();
    let (mut f, np) = match kind {
        Kind::Plain => (ehrhart_series(p)?, 0),
        Kind::Q => (q_weighted_series(p, &spec.weights)?, spec.weights.len()),
        Kind::R => (r_weighted_series(p, &spec.weights)?, spec.weights.len()),
        Kind::S => (s_weighted_series(p, &chosen_weight(spec, weight)?)?, 0),
    };
    let has_t = kind != Kind::Plain;
    if set_t && has_t {
        f = drop_t_variables(&specialize_t(&f, np, s)?, np, s)?;
    }
    if set_q && np > 0 {
        f = drop_q_variables(&specialize_q(&f, np)?, np)?;
    }
    let f = f.reduced();
    let mut out = f.to_string();
    if let Some(order) = order {
        for (k, c) in f.expand(order)?.iter().enumerate() {
            write!(out, "\nx^{k}: {}", c.render(f.vars())).unwrap();
        }
    }
    Ok(out)
}

fn lift(spec: &ProblemSpec, kind: Kind) -> Out {
    let l = match kind {
        Kind::Q => lift_q(&spec.polytope, &spec.weights)?,
        Kind::R => lift_r(&spec.polytope, &spec.weights)?,
        _ => return Err(kind_error("lift", "q|r")),
    };
    Ok(l.vertices()
        .iter()
        .map(|v| point(v))
        .collect::<Vec<_>>()
        .join("\n"))
}

fn hilbert(spec: &ProblemSpec, kind: Kind, bound: u64) -> Out {
    let target: Polytope = match kind {
        Kind::Plain => spec.polytope.clone(),
        Kind::Q => lift_q(&spec.polytope, &spec.weights)?,
        Kind::R => lift_r(&spec.polytope, &spec.weights)?,
        Kind::S => return Err(kind_error("hilbert", "plain|q|r")),
    };
    let hb = hilbert_basis(&cone_over(&target)?, bound)?;
    let mut out: Vec<String> = hb.elements.iter().map(|e| int_point(e)).collect();
    out.push(format!("certified: {} (bound {})", hb.certified, hb.bound));
    Ok(out.join("\n"))
}

fn triangulate(spec: &ProblemSpec, config: Config, compatible: bool) -> Out {
    let p = &spec.polytope;
    let config = match config {
        Config::Vertices => PointConfig::Vertices,
        Config::LatticePoints => PointConfig::AllLatticePoints,
    };
    if compatible {
        let r = compatible_triangulation_search(p, &spec.weights, config)?;
        return Ok(match (&r.found, r.numerator_nonnegative) {
            (Some(t), nonneg) => format!(
                "compatible {:?} at {}/{} numerator-nonnegative={}",
                t.simplices(),
                r.examined,
                r.total,
                nonneg.unwrap_or(false)
            ),
            (None, _) => format!("no compatible triangulation among {}", r.total),
        });
    }
    let t = p.triangulate(config)?;
    let mut out = Vec::new();
    for (i, v) in t.points().iter().enumerate() {
        out.push(format!("point {i} {}", point(v)));
    }
    for s in t.simplices() {
        out.push(format!("simplex {s:?} volume {}", t.simplex_volume(s)));
    }
    Ok(out.join("\n"))
}

fn reciprocity(spec: &ProblemSpec, kind: Kind, weight: &[usize]) -> Out {
    let (label, ok) = match kind {
        Kind::Q => ("q", reciprocity_check_q(&spec.polytope, &spec.weights)?),
        Kind::S => (
            "s",
            s_reciprocity_check(&spec.polytope, &chosen_weight(spec, weight)?)?,
        ),
        _ => return Err(kind_error("reciprocity", "q|s")),
    };
    let line = format!("{label}-reciprocity {}", if ok { "PASS" } else { "FAIL" });
    if ok {
        Ok(line)
    } else {
        Err(Failure::Check(line))
    }
}

fn report_out(r: Report) -> Out {
    let text = r.to_string().trim_end().to_string();
    if r.passed() {
        Ok(text)
    } else {
        Err(Failure::Check(text))
    }
}

/// The checks that make sense for an arbitrary input; those whose
/// preconditions fail are reported on stderr and left out.
fn verify_spec(spec: &ProblemSpec) -> Out {
    let case = Case::new("input", spec.polytope.clone(), spec.weights.clone());
    type Check = fn(&Case) -> ehrlift::Result<CheckLine>;
    let mut checks: Vec<(&str, Check)> = vec![
        ("q-lift", verify_q_lift),
        ("r-lift", verify_r_lift),
        ("dim-formula", verify_dim_formula),
        ("oracle", verify_oracles),
        ("q-reciprocity", verify_q_reciprocity),
    ];
    if spec.weights.len() == 1 {
        checks.push(("positivity", verify_positivity));
        checks.push(("bounds", |c| {
            let w = &c.weights.weights()[0];
            verify_bounds(c, w, w)
        }));
    }
    let mut lines = Vec::new();
    for (name, check) in checks {
        match check(&case) {
            Ok(l) => lines.push(l),
            Err(e) => eprintln!("skipped {name}: {e}"),
        }
    }
    report_out(Report { lines })
}

fn integrate(spec: &ProblemSpec, exponents: Option<&[u32]>, weight: &[usize]) -> Out {
    let p = &spec.polytope;
    if let Some(b) = exponents {
        return Ok(p.integrate_monomial(b)?.to_string());
    }
    let s = p.ambient_dim();
    let w = if weight.is_empty() && spec.weights.is_empty() {
        Weight::constant(s, int(1))
    } else {
        chosen_weight(spec, weight)?
    };
    let poly = w
        .as_poly(s)
        .ok_or_else(|| input("only polynomial weights can be integrated"))?;
    let mut total = int(0);
    for (e, c) in poly.terms() {
        let b: Vec<u32> = e.iter().map(|&k| k as u32).collect();
        total += c * p.integrate_monomial(&b)?;
    }
    Ok(total.to_string())
}

fn run(cmd: Command) -> Out {
    match cmd {
        Command::Count {
            spec,
            kind,
            n,
            weight,
        } => count(&load(&spec)?, kind, n, &weight),
        Command::Poly { spec, kind, weight } => poly(&load(&spec)?, kind, &weight),
        Command::Series {
            spec,
            kind,
            set_t,
            set_q,
            order,
            weight,
        } => series(
            &load(&spec)?,
            kind,
            set_t.is_some(),
            set_q.is_some(),
            order,
            &weight,
        ),
        Command::Lift { spec, kind } => lift(&load(&spec)?, kind),
        Command::Hilbert { spec, kind, bound } => hilbert(&load(&spec)?, kind, bound),
        Command::Triangulate {
            spec,
            config,
            compatible,
        } => triangulate(&load(&spec)?, config, compatible),
        Command::Reciprocity { spec, kind, weight } => reciprocity(&load(&spec)?, kind, &weight),
        Command::Hstar { spec } => Ok(hstar(&load(&spec)?.polytope)?.to_string()),
        Command::Verify { spec: None } => report_out(run_battery()),
        Command::Verify { spec: Some(spec) } => verify_spec(&load(&spec)?),
        Command::Integrate {
            spec,
            exponents,
            weight,
        } => integrate(&load(&spec)?, exponents.as_deref(), &weight),
    }
}

/// `EHRLIFT_THREADS` sizes the worker pool; it never changes results.
fn configure_threads() {
    if let Some(n) = std::env::var("EHRLIFT_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli.command) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(text)) => {
            println!("{text}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
