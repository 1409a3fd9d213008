//! Subcommand definitions and dispatch.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use weylhull_core::coxeter::{WeylGroup, DEFAULT_ENUMERATION_CAP};
use weylhull_core::datum::{make_kac_datum, RootDatum};
use weylhull_core::hull::render::{render, RenderMode};
use weylhull_core::hull::{FaceHandle, HullContext, Membership};
use weylhull_core::iwasawa::{attain, horosphere_witness, Projection};
use weylhull_core::tits::{reduce_to_chamber, ChamberReduction, DEFAULT_REDUCTION_BUDGET};

use crate::format::{self, load_gcm, load_source};
use crate::parallel;

/// Slack below which a sampled projection counts as outside the hull.
pub const SLACK_TOLERANCE: f64 = -1e-9;

#[derive(Debug, Parser)]
#[command(name = "weylhull", version, about = "Weyl group orbit hulls and Kostant convexity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a generalized Cartan matrix by components.
    Classify {
        #[arg(long)]
        gcm: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Build or check root data.
    #[command(subcommand)]
    Datum(DatumCommand),
    /// Weyl group enumeration.
    #[command(subcommand)]
    Weyl(WeylCommand),
    /// Tits cone reduction.
    #[command(subcommand)]
    Cone(ConeCommand),
    /// Orbit hull queries.
    #[command(subcommand)]
    Hull(HullCommand),
    /// Sampled convexity checks in the special linear matrix models.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Find an orthogonal matrix projecting onto a target point.
    Attain {
        #[command(flatten)]
        model: Model,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[command(flatten)]
        out: Output,
    },
    /// Point `h` in the chamber whose orbit hull misses the origin.
    Witness {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum DatumCommand {
    /// The Kac datum of a GCM.
    MakeKac {
        #[arg(long)]
        gcm: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Check a datum file.
    Validate {
        #[arg(long)]
        datum: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum WeylCommand {
    /// Elements in (length, lex) order.
    Enumerate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        max_length: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConeCommand {
    /// Reduce a point into the fundamental chamber.
    Reduce {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = DEFAULT_REDUCTION_BUDGET)]
        budget: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum HullCommand {
    /// Membership of a point in the orbit hull.
    Member {
        #[command(flatten)]
        hull: HullArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = DEFAULT_REDUCTION_BUDGET)]
        budget: usize,
        #[command(flatten)]
        out: Output,
    },
    /// The minimal face through a point, or every coset face up to a length.
    Faces {
        #[command(flatten)]
        hull: HullArgs,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "all")]
        point: Option<String>,
        /// List all cosets `wW_J` with `l(w) <= max-length`.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 6)]
        max_length: usize,
        #[arg(long, default_value_t = DEFAULT_REDUCTION_BUDGET)]
        budget: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Slice of the hull at level `t` of the i-th fundamental weight.
    Slice {
        #[command(flatten)]
        hull: HullArgs,
        #[command(flatten)]
        level: Level,
        #[arg(long, default_value_t = 8)]
        max_length: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Essential vertices of a slice, or a cover certificate for a point.
    Essential {
        #[command(flatten)]
        hull: HullArgs,
        #[command(flatten)]
        level: Level,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_REDUCTION_BUDGET)]
        budget: usize,
        #[command(flatten)]
        out: Output,
    },
    /// SVG of a rank-2 hull, or of a rank-3 slice when `--i` is given.
    Render {
        #[command(flatten)]
        hull: HullArgs,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long, default_value_t = 6)]
        max_length: usize,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Nonlinear projection of `exp(h) K` (use `--linear` for the adjoint orbit).
    Kostant {
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        linear: bool,
    },
    /// Diagonals of the adjoint orbit of `h`, plus a pinching pass.
    Linear {
        #[command(flatten)]
        sampling: Sampling,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// GCM file; its Kac datum is used.
    #[arg(long)]
    pub gcm: Option<PathBuf>,
    /// Root datum file.
    #[arg(long)]
    pub datum: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HullArgs {
    #[command(flatten)]
    pub source: Source,
    /// Regular dominant point, comma-separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    pub h: String,
}

#[derive(Debug, Args)]
pub struct Level {
    /// 1-based index of the fundamental weight.
    #[arg(long)]
    pub i: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
}

#[derive(Debug, Args)]
pub struct Model {
    /// A1, A2 or A3.
    #[arg(long = "type", value_name = "TYPE")]
    pub type_name: String,
    /// Decreasing diagonal with zero sum; defaults to the type's standard choice.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
}

#[derive(Debug, Args)]
pub struct Sampling {
    #[command(flatten)]
    pub model: Model,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write every sample to this CSV file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Result of a successful run: the document and whether a check rejected.
pub struct Outcome {
    pub body: Option<Value>,
    pub rejected: bool,
    out: Option<PathBuf>,
}

impl Outcome {
    fn accept(body: Value, out: &Output) -> Self {
        Outcome { body: Some(body), rejected: false, out: out.out.clone() }
    }

    fn verdict(body: Value, rejected: bool, out: &Output) -> Self {
        Outcome { body: Some(body), rejected, out: out.out.clone() }
    }

    /// Writes the JSON document and returns the exit code.
    pub fn emit(self) -> Result<u8> {
        if let Some(body) = self.body {
            let mut text = serde_json::to_string_pretty(&body)?;
            text.push('\n');
            match &self.out {
                Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
        }
        Ok(if self.rejected { 2 } else { 0 })
    }
}

fn source(s: &Source) -> Result<RootDatum> {
    load_source(s.gcm.as_deref(), s.datum.as_deref())
}

fn hull_context(args: &HullArgs) -> Result<HullContext> {
    let datum = source(&args.source)?;
    let h = format::parse_point(&args.h, datum.d())?;
    Ok(HullContext::new(&datum, h)?)
}

/// Matrix size and default `h` for a type name.
pub fn model(m: &Model) -> Result<(String, Vec<f64>)> {
    let name = m.type_name.to_ascii_uppercase();
    let default = match name.as_str() {
        "A1" => vec![1.0, -1.0],
        "A2" => vec![1.0, 0.0, -1.0],
        "A3" => vec![1.5, 0.5, -0.5, -1.5],
        _ => bail!("unsupported type {:?}; the matrix models cover A1, A2, A3", m.type_name),
    };
    let h = match &m.h {
        Some(s) => format::parse_floats(s)?,
        None => default.clone(),
    };
    if h.len() != default.len() {
        bail!("type {name} needs {} diagonal entries, got {}", default.len(), h.len());
    }
    Ok((name, h))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Classify { gcm, out } => Ok(Outcome::accept(format::classification(&load_gcm(gcm)?), out)),
        Command::Datum(DatumCommand::MakeKac { gcm, out }) => {
            let datum = make_kac_datum(&load_gcm(gcm)?);
            Ok(Outcome::accept(serde_json::to_value(format::datum_file(&datum))?, out))
        }
        Command::Datum(DatumCommand::Validate { datum, out }) => validate(datum, out),
        Command::Weyl(WeylCommand::Enumerate { source: s, max_length, cap, out }) => {
            let group = WeylGroup::new(&source(s)?);
            let elems = group.enumerate_by_length(*max_length, *cap)?;
            let body = json!({
                "max_length": max_length,
                "count": elems.len(),
                "elements": elems.iter().map(format::element).collect::<Vec<_>>(),
            });
            Ok(Outcome::accept(body, out))
        }
        Command::Cone(ConeCommand::Reduce { source: s, point, budget, out }) => {
            let datum = source(s)?;
            let x = format::parse_point(point, datum.d())?;
            let group = WeylGroup::new(&datum);
            let r = reduce_to_chamber(&group, &x, *budget)?;
            let rejected = matches!(r, ChamberReduction::Inconclusive { .. });
            Ok(Outcome::verdict(format::reduction(&r), rejected, out))
        }
        Command::Hull(cmd) => run_hull(cmd),
        Command::Verify(VerifyCommand::Kostant { sampling, linear }) => verify(sampling, *linear),
        Command::Verify(VerifyCommand::Linear { sampling }) => verify(sampling, true),
        Command::Attain { model: m, target, out } => {
            let (name, h) = model(m)?;
            let target = format::parse_floats(target)?;
            let r = attain(&h, &target)?;
            let body = json!({
                "type": name,
                "h": h,
                "target": target,
                "k": format::matrix(&r.k),
                "achieved": r.achieved,
                "error": r.error,
                "fallback_used": r.fallback_used,
            });
            Ok(Outcome::accept(body, out))
        }
        Command::Witness { source: s, out } => {
            let w = horosphere_witness(&source(s)?)?;
            Ok(Outcome::accept(format::witness(&w), out))
        }
    }
}

fn validate(path: &Path, out: &Output) -> Result<Outcome> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let body = match format::parse_datum(value) {
        Ok(datum) => json!({
            "valid": true,
            "n": datum.n(),
            "d": datum.d(),
            "extension": datum.extension(),
        }),
        Err(e) => return Ok(Outcome::verdict(json!({"valid": false, "error": format!("{e:#}")}), true, out)),
    };
    Ok(Outcome::accept(body, out))
}

fn run_hull(cmd: &HullCommand) -> Result<Outcome> {
    match cmd {
        HullCommand::Member { hull, point, budget, out } => {
            let ctx = hull_context(hull)?;
            let x = format::parse_point(point, ctx.d())?;
            let m = ctx.hull_membership(&x, *budget)?;
            let rejected = !matches!(m, Membership::In { .. });
            Ok(Outcome::verdict(format::membership(&m), rejected, out))
        }
        HullCommand::Faces { hull, point, all, max_length, budget, out } => {
            let ctx = hull_context(hull)?;
            let faces = if *all {
                all_faces(&ctx, *max_length)?
            } else {
                let Some(point) = point else { bail!("give --point or --all") };
                let x = format::parse_point(point, ctx.d())?;
                vec![ctx.locate_face(&x, *budget)?]
            };
            let records = faces
                .iter()
                .map(|f| {
                    let fv = ctx.face_vertices(f, *max_length)?;
                    Ok(json!({
                        "word": format::indices(f.coset.rep.word()),
                        "j": format::indices(&f.coset.j_set),
                        "dim": f.dim(),
                        "vertices": fv.vertices.iter().map(format::point).collect::<Vec<_>>(),
                        "truncated": fv.truncated,
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Outcome::accept(json!({"count": records.len(), "faces": records}), out))
        }
        HullCommand::Slice { hull, level, max_length, out } => {
            let ctx = hull_context(hull)?;
            let i = format::index_arg(level.i, ctx.n())?;
            let t = format::parse_rational(&level.t)?;
            let interval = ctx.slice_interval(i)?;
            let body = if interval.contains_interior(&t) {
                format::slice_report(&ctx.slice_report(i, &t, *max_length)?)
            } else {
                // Boundary levels have no essential part to report.
                let (vertices, truncated) = ctx.slice_vertices(i, &t, *max_length)?;
                json!({
                    "i": level.i,
                    "t": format::rat(&t),
                    "interval": format::interval(&interval),
                    "vertices": vertices.iter().map(format::slice_vertex).collect::<Vec<_>>(),
                    "truncated": truncated,
                    "essential": [],
                    "m": 0,
                })
            };
            Ok(Outcome::accept(body, out))
        }
        HullCommand::Essential { hull, level, point, depth, budget, out } => {
            let ctx = hull_context(hull)?;
            let i = format::index_arg(level.i, ctx.n())?;
            let t = format::parse_rational(&level.t)?;
            let body = match point {
                Some(p) => {
                    let x = format::parse_point(p, ctx.d())?;
                    format::cover(&ctx.essential_cover(i, &t, &x, *depth, *budget)?)
                }
                None => {
                    let r = ctx.essential_vertices(i, &t)?;
                    let points: Vec<_> = r.vertices.iter().map(|v| v.point.clone()).collect();
                    let symmetry = ctx.slice_face_symmetry(i, &points, *budget).ok();
                    json!({
                        "i": level.i,
                        "t": format::rat(&t),
                        "m": r.m,
                        "vertices": r.vertices.iter().map(format::slice_vertex).collect::<Vec<_>>(),
                        "symmetry": symmetry.as_ref().map(format::face_symmetry),
                    })
                }
            };
            Ok(Outcome::accept(body, out))
        }
        HullCommand::Render { hull, i, t, max_length, svg } => {
            let ctx = hull_context(hull)?;
            let mode = match (i, t) {
                (Some(i), Some(t)) => RenderMode::Slice2D {
                    i: format::index_arg(*i, ctx.n())?,
                    t: format::parse_rational(t)?,
                    max_len: *max_length,
                },
                (None, None) => RenderMode::Hull2D { max_len: *max_length },
                _ => bail!("--i and --t go together"),
            };
            let doc = render(&ctx, &mode)?;
            fs::write(svg, doc).with_context(|| format!("writing {}", svg.display()))?;
            Ok(Outcome { body: None, rejected: false, out: None })
        }
    }
}

fn all_faces(ctx: &HullContext, max_length: usize) -> Result<Vec<FaceHandle>> {
    let group = ctx.group();
    let n = ctx.n();
    let elems = group.enumerate_by_length(max_length, DEFAULT_ENUMERATION_CAP)?;
    let mut out = Vec::new();
    for size in 0..=n {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let j: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let mut seen = BTreeSet::new();
            for w in &elems {
                let coset = group.min_coset_rep(w, &j)?;
                if seen.insert(coset.rep.act_b().clone()) {
                    out.push(FaceHandle { coset });
                }
            }
        }
    }
    Ok(out)
}

fn verify(s: &Sampling, linear: bool) -> Result<Outcome> {
    let (name, h) = model(&s.model)?;
    let projection = if linear { Projection::Linear } else { Projection::Nonlinear };
    let sampled = parallel::sample(&h, s.samples, s.seed, projection, parallel::worker_cap()?)?;
    if let Some(path) = &s.csv {
        fs::write(path, parallel::to_csv(&h, &sampled.projections))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let r = &sampled.report;
    let pinch_ok = r.pinching.as_ref().is_none_or(|p| p.max_error <= 1e-8);
    let passed = r.worst_slack >= SLACK_TOLERANCE && pinch_ok;
    Ok(Outcome::verdict(format::verification(&name, &h, linear, r, passed), !passed, &s.out))
}
