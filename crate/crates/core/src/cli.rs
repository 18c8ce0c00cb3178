//! Command-line front end and JSON job runner.
//!
//! Exit status: 0 on success, 1 when a certificate or verification fails,
//! 2 on usage, parse, precondition or capacity errors.

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::counterexamples::{
    generate_spaced_pair, generate_two_group_pair, taxicab_fs2_obstruction, verify_invariants, verify_spaced_pair,
    SpacedPairInstance, SpacedPairLayout, DEFAULT_OBSTRUCTION_DELTA,
};
use crate::error::{Error, Result};
use crate::hyperspace::{hausdorff_distance, FiniteSubset, RawSubset};
use crate::io::{self, Format};
use crate::metric::{GroundPoint, GroundSpace, SpaceConfig};
use crate::paths::{
    canonical_interpolation_path, extract_component_path, lipschitz_certificate, sample_path, synthesize_bundle,
    two_leg_quasiconvex_path, HausdorffPath, Leg, SampledHausdorffPath, DEFAULT_DEPTH,
};
use crate::relations::{
    bounded_proximal_complete, brute_force_min_relation, build_proximal_complete, classify, reduce_relation,
    MinRelation, Relation,
};

/// Job file schema version understood by [`run_job`].
pub const JOB_SCHEMA: u32 = 1;

/// Side length of the box `[-R, R]^d` random instances are drawn from.
const RANDOM_EXTENT: f64 = 10.0;

#[derive(Parser, Debug)]
#[command(
    name = "hyperpath",
    version,
    about = "Lipschitz paths between finite sets under the Hausdorff metric"
)]
pub struct Cli {
    /// Ground space: r1, r2, ..., rN, taxicab, a JSON space config, or @file.
    #[arg(long, global = true)]
    pub space: Option<String>,

    /// JSON job file to run instead of a subcommand.
    #[arg(long, global = true)]
    pub job: Option<PathBuf>,

    #[command(flatten)]
    pub output: OutputArgs,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputArgs {
    /// File receiving path samples.
    #[arg(long, global = true)]
    #[serde(default)]
    pub out: Option<PathBuf>,

    /// Format of the samples file, and of stdout for `hausdorff`.
    #[arg(long, global = true, value_enum)]
    #[serde(default)]
    pub format: Option<Format>,

    /// File receiving per-leg polylines as CSV.
    #[arg(long, global = true)]
    #[serde(default)]
    pub plot: Option<PathBuf>,
}

/// A JSON value given inline on the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JsonArg(pub Value);

impl FromStr for JsonArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(s)
            .map(JsonArg)
            .map_err(|e| format!("invalid JSON: {e}"))
    }
}

#[derive(Subcommand, Clone, Debug, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Hausdorff distance between two sets.
    Hausdorff(HausdorffArgs),
    /// A proximal complete relation between two sets, with its classification.
    Relation(RelationArgs),
    /// Geodesic bundle along a complete relation.
    Synth(SynthArgs),
    /// Two-leg path through an intermediate set of at most n points.
    TwoLeg(TwoLegArgs),
    /// Lattice approximation of the canonical interpolation between two sets.
    Interpolate(InterpolateArgs),
    /// Grid Lipschitz certificate for a construction or a sampled path file.
    Certify(CertifyArgs),
    /// Greedy ground path inside a Hausdorff path.
    Extract(ExtractArgs),
    /// Instances where no geodesic midpoint exists.
    #[command(subcommand)]
    Counterexample(CounterexampleKind),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Hausdorff(_) => "hausdorff",
            Command::Relation(_) => "relation",
            Command::Synth(_) => "synth",
            Command::TwoLeg(_) => "two-leg",
            Command::Interpolate(_) => "interpolate",
            Command::Certify(_) => "certify",
            Command::Extract(_) => "extract",
            Command::Counterexample(_) => "counterexample",
        }
    }
}

fn default_depth() -> u32 {
    DEFAULT_DEPTH
}

fn one() -> f64 {
    1.0
}

fn default_samples() -> usize {
    16
}

fn default_obstruction_delta() -> f64 {
    DEFAULT_OBSTRUCTION_DELTA
}

fn default_s() -> usize {
    2
}

#[derive(Args, Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HausdorffArgs {
    /// First set, as JSON.
    #[arg(long)]
    pub a: JsonArg,
    /// Second set, as JSON.
    #[arg(long)]
    pub b: JsonArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationMode {
    /// Nearest-neighbour relation.
    Nearest,
    /// Nearest-neighbour relation trimmed to at most |x| + |y| - 2 pairs.
    #[default]
    Trimmed,
    /// Nearest-neighbour relation made reduced.
    Reduced,
    /// Smallest complete relation within the proximality bound (exhaustive).
    Minimal,
}

#[derive(Args, Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationArgs {
    /// Initial set, e.g. `[0,2,11]` or `[[0,1],[2,3]]`.
    #[arg(long)]
    pub x: JsonArg,
    /// Final set.
    #[arg(long)]
    pub y: JsonArg,
    /// How the relation is built.
    #[arg(long, value_enum, default_value_t = RelationMode::Trimmed)]
    #[serde(default)]
    pub mode: RelationMode,
    /// Proximality bound for `--mode minimal`, in units of d_H(x, y).
    #[arg(long, default_value_t = 1.0)]
    #[serde(default = "one")]
    pub bound: f64,
}

#[derive(Args, Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthArgs {
    /// Initial set, e.g. `[0,2,11]` or `[[0,1],[2,3]]`.
    #[arg(long)]
    pub x: JsonArg,
    /// Final set.
    #[arg(long)]
    pub y: JsonArg,
    /// Explicit relation as `[[i, j], ...]` into the sorted sets.
    #[arg(long)]
    #[serde(default)]
    pub relation: Option<JsonArg>,
    /// How the relation is built.
    #[arg(long, value_enum, default_value_t = RelationMode::Trimmed)]
    #[serde(default)]
    pub mode: RelationMode,
    /// Cardinality cap; defaults to the relation size.
    #[arg(long)]
    #[serde(default)]
    pub cap: Option<usize>,
    /// Dyadic grid depth (2^depth intervals).
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    #[serde(default = "default_depth")]
    pub depth: u32,
}

/// Endpoints given explicitly or drawn at random from a seed.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Endpoints {
    /// Initial set, e.g. `[0,2,11]` or `[[0,1],[2,3]]`.
    #[arg(long)]
    #[serde(default)]
    pub x: Option<JsonArg>,
    /// Final set.
    #[arg(long)]
    #[serde(default)]
    pub y: Option<JsonArg>,
    /// Seed for random endpoints of n points each when --x/--y are absent.
    #[arg(long)]
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Args, Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoLegArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ends: Endpoints,
    /// Cardinality bound for every set along the path.
    #[arg(long)]
    pub n: usize,
    /// Dyadic grid depth (2^depth intervals).
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    #[serde(default = "default_depth")]
    pub depth: u32,
}

#[derive(Args, Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpolateArgs {
    /// First set, as JSON.
    #[arg(long)]
    pub a: JsonArg,
    /// Second set, as JSON.
    #[arg(long)]
    pub b: JsonArg,
    /// Quasiconvexity constant, greater than 1.
    #[arg(long)]
    pub lambda: f64,
    /// Lattice spacing.
    #[arg(long)]
    pub eps: f64,
    /// Number of parameter intervals.
    #[arg(long, default_value_t = 16)]
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Geodesic bundle on the trimmed relation.
    Bundle,
    /// Two-leg path.
    #[default]
    TwoLeg,
}

#[derive(Args, Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyArgs {
    /// Sampled path file (.csv or .json) to certify instead of a construction.
    #[arg(long)]
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub ends: Endpoints,
    /// Cardinality bound; defaults to max(|x|, |y|).
    #[arg(long)]
    #[serde(default)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::TwoLeg)]
    #[serde(default)]
    pub method: Method,
    /// Lipschitz constant to check; defaults to the construction's own.
    #[arg(long)]
    #[serde(default)]
    pub lipschitz: Option<f64>,
    /// Dyadic grid depth (2^depth intervals).
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    #[serde(default = "default_depth")]
    pub depth: u32,
}

#[derive(Args, Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtractArgs {
    /// Sampled path file (.csv or .json) to extract from instead of a construction.
    #[arg(long)]
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub ends: Endpoints,
    /// Cardinality bound; defaults to max(|x|, |y|).
    #[arg(long)]
    #[serde(default)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::TwoLeg)]
    #[serde(default)]
    pub method: Method,
    /// Starting point, a member of the initial set.
    #[arg(long)]
    pub start: JsonArg,
    /// Dyadic grid depth (2^depth intervals).
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    #[serde(default = "default_depth")]
    pub depth: u32,
}

#[derive(Subcommand, Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CounterexampleKind {
    /// Two-point sets on the taxicab cross with no geodesic midpoint.
    TaxicabFs2 {
        /// Lattice spacing of the feasibility scan.
        #[arg(long, default_value_t = DEFAULT_OBSTRUCTION_DELTA)]
        #[serde(default = "default_obstruction_delta")]
        delta: f64,
        /// Radius of the neighbourhoods intersected.
        #[arg(long, default_value_t = 1.0)]
        #[serde(default = "one")]
        radius: f64,
    },
    /// Spaced pair along a line.
    SpacedPair {
        /// Cardinality of each set.
        #[arg(long)]
        n: usize,
        /// Number of three-point groups.
        #[arg(long, default_value_t = 2)]
        #[serde(default = "default_s")]
        s: usize,
        /// Spacing unit of the construction.
        #[arg(long, default_value_t = 1.0)]
        #[serde(default = "one")]
        eps: f64,
        /// Lattice spacing; defaults to eps / 20.
        #[arg(long)]
        #[serde(default)]
        delta: Option<f64>,
    },
    /// Two star-shaped groups in the plane.
    TwoGroup {
        /// Cardinality of each set.
        #[arg(long)]
        n: usize,
        /// Spacing unit of the construction.
        #[arg(long, default_value_t = 1.0)]
        #[serde(default = "one")]
        eps: f64,
        /// Lattice spacing; defaults to eps / 20.
        #[arg(long)]
        #[serde(default)]
        delta: Option<f64>,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpaceSpec {
    Name(String),
    Config(SpaceConfig),
}

/// Contents of a `--job` file.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    schema: u32,
    #[serde(default)]
    space: Option<SpaceSpec>,
    command: Command,
    #[serde(default)]
    output: OutputArgs,
}

/// Result of running a command: the stdout report and whether every
/// certificate in it passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Parses a space given as `r<d>`, `taxicab`, JSON, or `@file` holding JSON.
pub fn parse_space(arg: &str) -> Result<GroundSpace> {
    let arg = arg.trim();
    if let Some(file) = arg.strip_prefix('@') {
        return parse_space(&std::fs::read_to_string(file)?);
    }
    if arg.starts_with('{') {
        let cfg: SpaceConfig = serde_json::from_str(arg)?;
        return GroundSpace::from_config(&cfg);
    }
    let lower = arg.to_ascii_lowercase();
    if lower == "taxicab" || lower == "taxicab-cross" {
        return Ok(GroundSpace::TaxicabCross);
    }
    if let Some(d) = lower.strip_prefix('r') {
        if let Ok(dim) = d.parse::<usize>() {
            return GroundSpace::euclidean(dim);
        }
    }
    Err(Error::Parse(format!("unknown space {arg:?}")))
}

fn parse_point(space: &GroundSpace, v: &Value) -> Result<GroundPoint> {
    match v {
        Value::Number(_) => space.point_from_raw(&[json_f64(v)?]),
        Value::Array(items) => {
            let raw = items.iter().map(json_f64).collect::<Result<Vec<_>>>()?;
            space.point_from_raw(&raw)
        }
        _ => Err(Error::Parse(format!("expected a point, found {v}"))),
    }
}

fn json_f64(v: &Value) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::Parse(format!("expected a number, found {v}")))
}

/// Reads a set from `[p, ...]` (numbers for one-dimensional spaces) or
/// `{"points": [...]}`.
pub fn parse_set(space: &GroundSpace, v: &Value) -> Result<FiniteSubset> {
    match v {
        Value::Array(items) => {
            let pts = items
                .iter()
                .map(|p| parse_point(space, p))
                .collect::<Result<Vec<_>>>()?;
            FiniteSubset::new(space, pts)
        }
        Value::Object(_) => {
            let raw: RawSubset = serde_json::from_value(v.clone())?;
            FiniteSubset::from_raw(space, &raw.points)
        }
        _ => Err(Error::Parse(format!("expected a set, found {v}"))),
    }
}

fn random_set(space: &GroundSpace, rng: &mut ChaCha8Rng, n: usize) -> Result<FiniteSubset> {
    let dim = match space.base() {
        GroundSpace::Euclidean { dim } => *dim,
        _ => return Err(Error::Unsupported("random endpoints need a Euclidean space".into())),
    };
    let pts = (0..n).map(|_| {
        GroundPoint::Coords(
            (0..dim)
                .map(|_| rng.gen_range(-RANDOM_EXTENT..=RANDOM_EXTENT))
                .collect(),
        )
    });
    FiniteSubset::new(space, pts)
}

fn endpoints(space: &GroundSpace, ends: &Endpoints, n: Option<usize>) -> Result<(FiniteSubset, FiniteSubset)> {
    match (&ends.x, &ends.y, ends.seed) {
        (Some(x), Some(y), _) => Ok((parse_set(space, &x.0)?, parse_set(space, &y.0)?)),
        (None, None, Some(seed)) => {
            let n = n.ok_or_else(|| Error::Parameter("random endpoints need --n".into()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((random_set(space, &mut rng, n)?, random_set(space, &mut rng, n)?))
        }
        _ => Err(Error::Parameter("give both --x and --y, or --seed".into())),
    }
}

fn relation_for(
    space: &GroundSpace,
    x: &FiniteSubset,
    y: &FiniteSubset,
    mode: RelationMode,
    bound: f64,
) -> Result<Relation> {
    Ok(match mode {
        RelationMode::Nearest => build_proximal_complete(space, x, y),
        RelationMode::Trimmed => bounded_proximal_complete(space, x, y),
        RelationMode::Reduced => reduce_relation(&build_proximal_complete(space, x, y))?,
        RelationMode::Minimal => match brute_force_min_relation(space, x, y, bound)? {
            MinRelation::Found { relation, .. } => relation,
            MinRelation::Infeasible => {
                return Err(Error::Precondition(format!(
                    "no complete relation within proximality bound {bound}"
                )))
            }
        },
    })
}

fn set_json(s: &FiniteSubset) -> Value {
    json!(s.to_raw().points)
}

/// A construction evaluated by `certify` and `extract`.
enum Built {
    Bundle(crate::paths::PathBundle),
    TwoLeg(Box<crate::paths::TwoLegPath>),
    Sampled(SampledHausdorffPath),
}

impl Built {
    fn path(&self) -> &dyn HausdorffPath {
        match self {
            Built::Bundle(b) => b,
            Built::TwoLeg(p) => p.as_ref(),
            Built::Sampled(p) => p,
        }
    }

    fn declared(&self) -> Option<f64> {
        match self {
            Built::Bundle(b) => Some(b.declared_lipschitz()),
            Built::TwoLeg(p) => Some(p.declared_lipschitz()),
            Built::Sampled(_) => None,
        }
    }

    /// Ground legs on the unit interval, the second leg of a two-leg path
    /// shifted to `[1/2, 1]`.
    fn legs(&self) -> Vec<Leg> {
        match self {
            Built::Bundle(b) => b.legs().to_vec(),
            Built::TwoLeg(p) => p.first.legs().iter().chain(p.second.legs()).cloned().collect(),
            Built::Sampled(_) => Vec::new(),
        }
    }
}

fn build(
    space: &GroundSpace,
    path: &Option<PathBuf>,
    ends: &Endpoints,
    n: Option<usize>,
    method: Method,
) -> Result<Built> {
    if let Some(file) = path {
        return Ok(Built::Sampled(io::read_sampled_path(space, file)?));
    }
    let (x, y) = endpoints(space, ends, n)?;
    let n = n.unwrap_or(x.len().max(y.len()));
    Ok(match method {
        Method::Bundle => {
            let r = bounded_proximal_complete(space, &x, &y);
            let cap = r.len().max(n);
            Built::Bundle(synthesize_bundle(space, &r, cap)?)
        }
        Method::TwoLeg => Built::TwoLeg(Box::new(two_leg_quasiconvex_path(space, &x, &y, n)?)),
    })
}

fn write_outputs(
    space: &GroundSpace,
    out: &OutputArgs,
    samples: Option<&SampledHausdorffPath>,
    legs: &[Leg],
) -> Result<()> {
    if let (Some(file), Some(samples)) = (&out.out, samples) {
        let format = out.format.unwrap_or_else(|| Format::from_path(file));
        io::write_atomic(file, &io::sampled_path_to_string(space, samples, format)?)?;
    }
    if let Some(file) = &out.plot {
        io::write_atomic(file, &io::plot_csv(space, legs, io::PLOT_SEGMENTS)?)?;
    }
    Ok(())
}

fn need_space(space: Option<&GroundSpace>) -> Result<&GroundSpace> {
    space.ok_or_else(|| Error::Parameter("this command needs --space".into()))
}

/// Runs one command against an optional space.
pub fn execute(space: Option<&GroundSpace>, command: &Command, out: &OutputArgs) -> Result<Outcome> {
    let name = command.name();
    let report = |v: Value, passed: bool| -> Result<Outcome> {
        Ok(Outcome {
            report: io::versioned_json(name, &v)?,
            passed,
        })
    };
    match command {
        Command::Hausdorff(a) => {
            let space = need_space(space)?;
            let d = hausdorff_distance(space, &parse_set(space, &a.a.0)?, &parse_set(space, &a.b.0)?);
            if out.format == Some(Format::Json) {
                report(json!({ "distance": d }), true)
            } else {
                Ok(Outcome {
                    report: format!("{d}\n"),
                    passed: true,
                })
            }
        }
        Command::Relation(a) => {
            let space = need_space(space)?;
            let (x, y) = (parse_set(space, &a.x.0)?, parse_set(space, &a.y.0)?);
            let r = relation_for(space, &x, &y, a.mode, a.bound)?;
            report(
                json!({
                    "x": set_json(&x),
                    "y": set_json(&y),
                    "hausdorff": hausdorff_distance(space, &x, &y),
                    "pairs": r.pairs(),
                    "cardinality": r.len(),
                    "classification": classify(space, &r),
                }),
                true,
            )
        }
        Command::Synth(a) => {
            let space = need_space(space)?;
            let (x, y) = (parse_set(space, &a.x.0)?, parse_set(space, &a.y.0)?);
            let r = match &a.relation {
                Some(pairs) => {
                    let pairs: Vec<(usize, usize)> = serde_json::from_value(pairs.0.clone())?;
                    Relation::new(x.clone(), y.clone(), pairs)?
                }
                None => relation_for(space, &x, &y, a.mode, 1.0)?,
            };
            let bundle = synthesize_bundle(space, &r, a.cap.unwrap_or(r.len()))?;
            let cert = lipschitz_certificate(space, &bundle, bundle.declared_lipschitz(), a.depth)?;
            write_outputs(space, out, Some(&sample_path(space, &bundle, a.depth)?), bundle.legs())?;
            report(
                json!({
                    "x": set_json(&x),
                    "y": set_json(&y),
                    "hausdorff": hausdorff_distance(space, &x, &y),
                    "pairs": bundle.relation().pairs(),
                    "cap": bundle.cap(),
                    "declared_lipschitz": bundle.declared_lipschitz(),
                    "certificate": cert,
                }),
                cert.passed,
            )
        }
        Command::TwoLeg(a) => {
            let space = need_space(space)?;
            let (x, y) = endpoints(space, &a.ends, Some(a.n))?;
            let p = two_leg_quasiconvex_path(space, &x, &y, a.n)?;
            let cert = lipschitz_certificate(space, &p, p.declared_lipschitz(), a.depth)?;
            let legs = Built::TwoLeg(Box::new(p.clone())).legs();
            write_outputs(space, out, Some(&sample_path(space, &p, a.depth)?), &legs)?;
            report(
                json!({
                    "x": set_json(&x),
                    "y": set_json(&y),
                    "n": a.n,
                    "hausdorff": cert.endpoint_distance,
                    "midpoint": set_json(&p.midpoint),
                    "split": p.split,
                    "pairs": p.relation.pairs(),
                    "length": cert.length_lower_bound,
                    "ratio": cert.quasiconvexity_ratio,
                    "declared_lipschitz": p.declared_lipschitz(),
                    "certificate": cert,
                }),
                cert.passed,
            )
        }
        Command::Interpolate(a) => {
            let space = need_space(space)?;
            let (sa, sb) = (parse_set(space, &a.a.0)?, parse_set(space, &a.b.0)?);
            let path = canonical_interpolation_path(space, &sa, &sb, a.lambda, a.eps, a.samples)?;
            let h = hausdorff_distance(space, &sa, &sb);
            let chords = path.chords(space);
            let dt = 1.0 / a.samples as f64;
            let max_increment = chords.iter().cloned().fold(0.0, f64::max);
            write_outputs(space, out, Some(&path), &[])?;
            report(
                json!({
                    "hausdorff": h,
                    "lambda": a.lambda,
                    "eps": a.eps,
                    "samples": a.samples,
                    "cardinalities": path.samples().iter().map(|(_, s)| s.len()).collect::<Vec<_>>(),
                    "max_increment": max_increment,
                    "increment_budget": a.lambda * h * dt,
                    "start_error": hausdorff_distance(space, path.source(), &sa),
                    "end_error": hausdorff_distance(space, path.target(), &sb),
                }),
                true,
            )
        }
        Command::Certify(a) => {
            let space = need_space(space)?;
            let built = build(space, &a.path, &a.ends, a.n, a.method)?;
            let declared = a
                .lipschitz
                .or(built.declared())
                .ok_or_else(|| Error::Parameter("a sampled path needs --lipschitz".into()))?;
            let cert = lipschitz_certificate(space, built.path(), declared, a.depth)?;
            write_outputs(space, out, None, &built.legs())?;
            let passed = cert.passed;
            report(serde_json::to_value(cert)?, passed)
        }
        Command::Extract(a) => {
            let space = need_space(space)?;
            let built = build(space, &a.path, &a.ends, a.n, a.method)?;
            let start = parse_point(space, &a.start.0)?;
            let c = extract_component_path(space, built.path(), &start, a.depth)?;
            let within = built.declared().map(|l| c.lipschitz <= l + 1e-6);
            report(
                json!({
                    "start": start,
                    "end": c.selection.last().map(|(_, p)| p.clone()),
                    "lipschitz": c.lipschitz,
                    "declared_lipschitz": built.declared(),
                    "within_declared": within,
                    "selection": c.selection,
                }),
                within.unwrap_or(true),
            )
        }
        Command::Counterexample(kind) => counterexample(kind, out, report),
    }
}

fn counterexample(
    kind: &CounterexampleKind,
    out: &OutputArgs,
    report: impl Fn(Value, bool) -> Result<Outcome>,
) -> Result<Outcome> {
    match kind {
        CounterexampleKind::TaxicabFs2 { delta, radius } => {
            let rep = taxicab_fs2_obstruction(*delta, *radius)?;
            let passed = rep.hausdorff == 2.0 && (rep.region_is_origin || *radius != 1.0);
            report(json!({ "kind": "taxicab-fs2", "report": rep }), passed)
        }
        CounterexampleKind::SpacedPair { n, s, eps, delta } => {
            let inst = generate_spaced_pair(*n, *s, *eps)?;
            spaced_report("spaced-pair", &inst, delta.unwrap_or(eps / 20.0), out, report)
        }
        CounterexampleKind::TwoGroup { n, eps, delta } => {
            let inst = generate_two_group_pair(*n, *eps)?;
            spaced_report("two-group", &inst, delta.unwrap_or(eps / 20.0), out, report)
        }
    }
}

fn spaced_report(
    kind: &str,
    inst: &SpacedPairInstance,
    delta: f64,
    out: &OutputArgs,
    report: impl Fn(Value, bool) -> Result<Outcome>,
) -> Result<Outcome> {
    let space = &inst.space;
    verify_invariants(inst)?;
    let verification = verify_spaced_pair(inst, delta)?;
    let min_relation = match brute_force_min_relation(space, &inst.x, &inst.y, 1.0) {
        Ok(MinRelation::Found { cardinality, .. }) => Some(cardinality),
        Ok(MinRelation::Infeasible) | Err(Error::Capacity { .. }) => None,
        Err(e) => return Err(e),
    };
    let two_leg = two_leg_quasiconvex_path(space, &inst.x, &inst.y, inst.n)?;
    let cert = lipschitz_certificate(space, &two_leg, two_leg.declared_lipschitz(), DEFAULT_DEPTH)?;
    write_outputs(space, out, Some(&sample_path(space, &two_leg, DEFAULT_DEPTH)?), &[])?;
    // Line layouts must block every midpoint; the two-star layout only has
    // to force the largest relation size.
    let passed = match inst.layout {
        SpacedPairLayout::Line => verification.passed && min_relation.is_none_or(|c| c > inst.n),
        SpacedPairLayout::TwoGroup => min_relation == Some(2 * inst.n - 2),
    };
    report(
        json!({
            "kind": kind,
            "instance": inst,
            "verification": verification,
            "min_relation_at_bound_one": min_relation,
            "two_leg_midpoint": set_json(&two_leg.midpoint),
            "two_leg_ratio": cert.quasiconvexity_ratio,
        }),
        passed,
    )
}

/// Runs a JSON job description.
pub fn run_job(text: &str) -> Result<Outcome> {
    let job: JobSpec = serde_json::from_str(text)?;
    if job.schema != JOB_SCHEMA {
        return Err(Error::Parse(format!(
            "unsupported job schema {}, expected {JOB_SCHEMA}",
            job.schema
        )));
    }
    let space = match job.space {
        None => None,
        Some(SpaceSpec::Name(s)) => Some(parse_space(&s)?),
        Some(SpaceSpec::Config(c)) => Some(GroundSpace::from_config(&c)?),
    };
    execute(space.as_ref(), &job.command, &job.output)
}

/// Runs parsed arguments.
pub fn run(cli: &Cli) -> Result<Outcome> {
    match (&cli.job, &cli.command) {
        (Some(file), None) => {
            if cli.space.is_some() {
                return Err(Error::Parameter("--space goes inside the job file".into()));
            }
            run_job(&std::fs::read_to_string(file)?)
        }
        (None, Some(cmd)) => {
            let space = cli.space.as_deref().map(parse_space).transpose()?;
            execute(space.as_ref(), cmd, &cli.output)
        }
        (Some(_), Some(_)) => Err(Error::Parameter("give either --job or a subcommand, not both".into())),
        (None, None) => Err(Error::Parameter("no subcommand given; see --help".into())),
    }
}

/// Process entry point: parses `args`, prints the report or error, and
/// returns the exit status.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
