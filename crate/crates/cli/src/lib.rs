//! JSON driver for the `qo-toric` command line tool.
//!
//! One job per invocation: a command, the input files it reads and a few
//! options. The result is a JSON object that always carries an `errors` array;
//! the exit status is 0 on success, 2 on a domain error and 3 on malformed
//! input (unreadable files, bad JSON, missing or invalid flags).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use qo_toric::grading::{self, GradedReport};
use qo_toric::json::{
    branch_series_from_json, fan_to_json, isomorphism_to_json, object, polynomial_from_json, polynomial_to_json,
    semigroup_from_json, semigroup_to_json, series_from_json, series_to_json, vector_from_json,
    vector_to_json,
};
use qo_toric::lattice::parse_rational;
use qo_toric::newton::{dual_newton_diagram, exceptional_edges, face_of, polyhedron_from_support};
use qo_toric::qo::{self, QuasiOrdinaryBranch};
use qo_toric::semigroup::{self, AffineSemigroup};
use qo_toric::series::{newton_polyhedron, symbolic_restriction};
use qo_toric::{Cone, Error, FractionalSeries, RationalVector, Q};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

const DEFAULT_MAX_GRADE: u32 = 10;
const DEFAULT_SAMPLES: u64 = 50;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Divisorial valuation of a series for a weight.
    Valuation,
    /// Symbolic restriction (leading form) of a series for a weight.
    Restrict,
    /// Newton polyhedron, dual Newton diagram and exceptional edges.
    Newton,
    /// Fan and exceptional weights of the normalized blow-up of a toric germ.
    BlowupFan,
    /// Discriminant test for a Weierstrass polynomial.
    QoCheck,
    /// Characteristic exponents, lattice tower and semigroup of a branch.
    QoInvariants,
    /// Values of the semiroots on a branch.
    Semiroot,
    /// Minimal generating set of a semigroup.
    SemigroupMingens,
    /// Saturation in the generated group.
    SemigroupSaturate,
    /// Graded dimensions up to K for a weight.
    SemigroupDims,
    /// Isomorphism test for two semigroups.
    SemigroupIso,
    /// Graded-ring check for a toric germ.
    VerifyToric,
    /// Graded-ring check for a quasi-ordinary branch.
    VerifyQo,
    /// Isomorphism of the semigroups of two branches.
    Invariance,
}

/// A single invocation.
#[derive(Clone, Debug, Parser)]
#[command(name = "qo-toric", version, about = "Exact invariants of toric and quasi-ordinary singularities")]
pub struct JobSpec {
    #[arg(value_enum)]
    pub command: Command,
    /// Series file.
    #[arg(long)]
    pub series: Option<PathBuf>,
    /// Weierstrass polynomial file.
    #[arg(long)]
    pub poly: Option<PathBuf>,
    /// Branch file (a series, or {"series": ...}).
    #[arg(long)]
    pub branch: Option<PathBuf>,
    /// Semigroup file.
    #[arg(long)]
    pub semigroup: Option<PathBuf>,
    /// Support file: an array of exponent vectors, or {"points": [...]}.
    #[arg(long)]
    pub support: Option<PathBuf>,
    /// First operand of a comparison.
    #[arg(long)]
    pub a: Option<PathBuf>,
    /// Second operand of a comparison.
    #[arg(long)]
    pub b: Option<PathBuf>,
    /// Weight as a comma separated list, e.g. `1,1/2`.
    #[arg(long)]
    pub weight: Option<String>,
    /// Maximal grade K.
    #[arg(long)]
    pub upto: Option<u32>,
    /// Number of random samples for multiplicativity checks.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Truncation bound declared for input series (`inf` for exact).
    #[arg(long)]
    pub trunc: Option<String>,
    /// Seed for the sampling RNG.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Index of a single semiroot.
    #[arg(long)]
    pub j: Option<usize>,
}

/// Exit status and the JSON document to print.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: i32,
    pub output: Value,
}

impl Outcome {
    /// Pretty JSON followed by a newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.output).expect("JSON values always serialize");
        s.push('\n');
        s
    }
}

fn error_kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

fn failure(e: &Error) -> Outcome {
    let status = if e.is_parse() { EXIT_PARSE } else { EXIT_DOMAIN };
    Outcome { status, output: json!({"errors": [{"kind": error_kind(e), "message": e.to_string()}]}) }
}

pub fn run(job: &JobSpec) -> Outcome {
    match dispatch(job) {
        Ok(Value::Object(mut map)) => {
            map.insert("errors".into(), json!([]));
            Outcome { status: EXIT_OK, output: Value::Object(map) }
        }
        Ok(other) => Outcome { status: EXIT_OK, output: json!({"result": other, "errors": []}) },
        Err(e) => failure(&e),
    }
}

type Res<T> = qo_toric::Result<T>;

fn missing(flag: &str) -> Error {
    Error::Parse(format!("this command requires --{flag}"))
}

fn read_json(path: &Path) -> Res<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn required<'a>(opt: &'a Option<PathBuf>, flag: &str) -> Res<&'a Path> {
    opt.as_deref().ok_or_else(|| missing(flag))
}

impl JobSpec {
    fn declared_trunc(&self) -> Res<Option<Option<Q>>> {
        match self.trunc.as_deref() {
            None => Ok(None),
            Some("inf") => Ok(Some(None)),
            Some(t) => {
                let t = parse_rational(t)?;
                if t <= Q::from_integer(0) {
                    return Err(Error::Parse("--trunc must be positive".into()));
                }
                Ok(Some(Some(t)))
            }
        }
    }

    fn apply_trunc(&self, s: FractionalSeries) -> Res<FractionalSeries> {
        Ok(match self.declared_trunc()? {
            None => s,
            Some(t) => s.with_truncation(t),
        })
    }

    fn series_at(&self, path: &Path) -> Res<FractionalSeries> {
        self.apply_trunc(series_from_json(&read_json(path)?)?)
    }

    fn branch_at(&self, path: &Path) -> Res<QuasiOrdinaryBranch> {
        QuasiOrdinaryBranch::new(self.apply_trunc(branch_series_from_json(&read_json(path)?)?)?)
    }

    fn series(&self) -> Res<FractionalSeries> {
        self.series_at(required(&self.series, "series")?)
    }

    fn branch(&self) -> Res<QuasiOrdinaryBranch> {
        self.branch_at(required(&self.branch, "branch")?)
    }

    fn semigroup(&self) -> Res<AffineSemigroup> {
        semigroup_from_json(&read_json(required(&self.semigroup, "semigroup")?)?)
    }

    fn weight(&self) -> Res<Option<RationalVector>> {
        self.weight.as_deref().map(RationalVector::parse_list).transpose()
    }

    fn required_weight(&self) -> Res<RationalVector> {
        self.weight()?.ok_or_else(|| missing("weight"))
    }

    fn max_grade(&self) -> u32 {
        self.upto.unwrap_or(DEFAULT_MAX_GRADE)
    }

    fn samples(&self) -> u64 {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(grading::DEFAULT_SEED)
    }
}

fn check_rank(expected: usize, v: &RationalVector) -> Res<()> {
    if v.rank() != expected {
        return Err(Error::Parse(format!("weight has {} coordinates, expected {expected}", v.rank())));
    }
    Ok(())
}

fn vectors(vs: &[RationalVector]) -> Value {
    Value::Array(vs.iter().map(vector_to_json).collect())
}

fn points_from_json(v: &Value) -> Res<Vec<RationalVector>> {
    let list = v.get("points").unwrap_or(v);
    let items = list.as_array().ok_or_else(|| Error::Parse("support must be an array of vectors".into()))?;
    let points = items.iter().map(vector_from_json).collect::<Res<Vec<_>>>()?;
    if let Some(first) = points.first() {
        if points.iter().any(|p| p.rank() != first.rank()) {
            return Err(Error::Parse("support vectors have different lengths".into()));
        }
    }
    Ok(points)
}

fn reports_json(reports: &[GradedReport]) -> Value {
    let pass = reports.iter().all(|r| r.verdict.pass);
    json!({"pass": pass, "reports": serde_json::to_value(reports).expect("reports serialize")})
}

fn dispatch(job: &JobSpec) -> Res<Value> {
    match job.command {
        Command::Valuation => {
            let phi = job.series()?;
            let n = job.required_weight()?;
            check_rank(phi.nvars(), &n)?;
            Ok(json!({"valuation": grading::divisorial_valuation(&phi, &n)?}))
        }
        Command::Restrict => {
            let phi = job.series()?;
            let eta = job.required_weight()?;
            check_rank(phi.nvars(), &eta)?;
            Ok(json!({"restriction": series_to_json(&symbolic_restriction(&phi, &eta)?)}))
        }
        Command::Newton => newton(job),
        Command::BlowupFan => {
            let s = match (&job.semigroup, &job.branch) {
                (Some(_), _) => job.semigroup()?,
                (None, Some(_)) => job.branch()?.characteristic().gamma_semigroup.clone(),
                (None, None) => return Err(missing("semigroup")),
            };
            let fan = grading::blowup_fan(&s)?;
            let weights = grading::blowup_weights(&s)?;
            Ok(json!({"fan": fan_to_json(&fan), "weights": vectors(&weights)}))
        }
        Command::QoCheck => {
            let f = polynomial_from_json(&read_json(required(&job.poly, "poly")?)?)?;
            let disc = qo::discriminant(&f)?;
            let delta = qo::is_quasi_ordinary(&f)?;
            Ok(json!({
                "quasi_ordinary": delta.is_some(),
                "delta": delta.as_ref().map_or(Value::Null, vector_to_json),
                "discriminant": series_to_json(&disc),
            }))
        }
        Command::QoInvariants => qo_invariants(job),
        Command::Semiroot => semiroots(job),
        Command::SemigroupMingens => {
            let s = job.semigroup()?;
            Ok(json!({"minimal_generators": vectors(&s.minimal_generators()?), "has_vertex": s.has_vertex()}))
        }
        Command::SemigroupSaturate => {
            let s = job.semigroup()?;
            let sat = s.saturation()?;
            let before = s.minimal_generators()?;
            let added: Vec<RationalVector> = sat.generators().iter().filter(|g| !before.contains(g)).cloned().collect();
            Ok(json!({"saturation": semigroup_to_json(&sat), "added": vectors(&added), "saturated": added.is_empty()}))
        }
        Command::SemigroupDims => {
            let s = job.semigroup()?;
            let n = job.required_weight()?;
            check_rank(s.rank(), &n)?;
            Ok(json!({"weight": vector_to_json(&n), "dims": semigroup::graded_dims(&s, &n, job.max_grade())?}))
        }
        Command::SemigroupIso => {
            let a = semigroup_from_json(&read_json(required(&job.a, "a")?)?)?;
            let b = semigroup_from_json(&read_json(required(&job.b, "b")?)?)?;
            Ok(isomorphism_result(semigroup::are_isomorphic(&a, &b)?))
        }
        Command::VerifyToric => {
            let s = job.semigroup()?;
            let weights = match job.weight()? {
                Some(n) => {
                    check_rank(s.rank(), &n)?;
                    vec![n]
                }
                None => grading::blowup_weights(&s)?,
            };
            let reports = weights
                .iter()
                .map(|n| grading::verify_toric_graded_iso(&s, n, job.max_grade(), job.samples(), job.seed()))
                .collect::<Res<Vec<_>>>()?;
            Ok(reports_json(&reports))
        }
        Command::VerifyQo => {
            let zeta = job.branch()?;
            let weights = match job.weight()? {
                Some(n) => {
                    check_rank(zeta.nvars(), &n)?;
                    vec![n]
                }
                None => grading::blowup_weights(&zeta.characteristic().gamma_semigroup)?,
            };
            let reports = weights
                .iter()
                .map(|n| grading::verify_qo_graded_iso(&zeta, n, job.max_grade(), job.samples(), job.seed()))
                .collect::<Res<Vec<_>>>()?;
            Ok(reports_json(&reports))
        }
        Command::Invariance => {
            let a = job.branch_at(required(&job.a, "a")?)?;
            let b = job.branch_at(required(&job.b, "b")?)?;
            Ok(isomorphism_result(grading::invariance_check(&a, &b)?))
        }
    }
}

fn isomorphism_result(w: Option<semigroup::SemigroupIsomorphism>) -> Value {
    match w {
        Some(w) => json!({"isomorphic": true, "witness": isomorphism_to_json(&w)}),
        None => json!({"isomorphic": false}),
    }
}

fn newton(job: &JobSpec) -> Res<Value> {
    let p = match (&job.series, &job.support) {
        (Some(_), _) => newton_polyhedron(&job.series()?)?,
        (None, Some(path)) => {
            let points = points_from_json(&read_json(path)?)?;
            let d = points.first().ok_or(Error::EmptySupport)?.rank();
            polyhedron_from_support(&points, &Cone::orthant(d))?
        }
        (None, None) => return Err(missing("series")),
    };
    let sigma = Cone::orthant(p.rank());
    let fan = dual_newton_diagram(&p, &sigma)?;
    let mut out = object(vec![
        ("vertices", vectors(p.vertices())),
        ("fan", fan_to_json(&fan)),
        ("exceptional_edges", vectors(&exceptional_edges(&fan, &sigma))),
    ]);
    if let Some(eta) = job.weight()? {
        check_rank(p.rank(), &eta)?;
        out["face"] = vectors(&face_of(&p, &eta)?);
        out["min_value"] = qo_toric::json::rational_to_json(&p.min_value(&eta));
    }
    Ok(out)
}

fn qo_invariants(job: &JobSpec) -> Res<Value> {
    let zeta = job.branch()?;
    let data = zeta.characteristic();
    let gamma = &data.gamma_semigroup;
    let polynomial = match qo::branch_polynomial(&zeta) {
        Ok(f) => polynomial_to_json(&f),
        Err(Error::DimensionTooLarge { .. }) => Value::Null,
        Err(e) => return Err(e),
    };
    let lattices: Vec<Value> = data.lattices.iter().map(|l| vectors(l.basis())).collect();
    Ok(json!({
        "genus": data.genus(),
        "exponents": vectors(&data.exponents),
        "indices": data.indices,
        "index_product": data.index_product(),
        "lattices": lattices,
        "gammas": vectors(&data.gammas),
        "gamma_semigroup": semigroup_to_json(gamma),
        "gamma_minimal_generators": vectors(&gamma.minimal_generators()?),
        "branch_polynomial": polynomial,
    }))
}

fn semiroots(job: &JobSpec) -> Res<Value> {
    let zeta = job.branch()?;
    let g = zeta.genus();
    let indices: Vec<usize> = match job.j {
        Some(j) if j == 0 || j > g => {
            return Err(Error::InvalidArgument(format!("semiroot index {j} outside 1..={g}")));
        }
        Some(j) => vec![j],
        None => (1..=g).collect(),
    };
    let eta = job.weight()?;
    if let Some(eta) = &eta {
        check_rank(zeta.nvars(), eta)?;
    }
    let mut out = Vec::new();
    for j in indices {
        let value = qo::semiroot_value(&zeta, j)?;
        let mut entry = json!({
            "j": j,
            "truncated_branch": series_to_json(&qo::truncated_branch(&zeta, j)?),
            "value": series_to_json(&value),
            "gamma": vector_to_json(&zeta.characteristic().gammas[j - 1]),
        });
        if let Some(eta) = &eta {
            entry["leading_form"] = series_to_json(&symbolic_restriction(&value, eta)?);
        }
        out.push(entry);
    }
    Ok(json!({"semiroots": out}))
}
