//! JSON input files and report encoders.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use weylhull_core::coxeter::WeylElement;
use weylhull_core::datum::{make_kac_datum, validate_datum, RootDatum};
use weylhull_core::gcm::{validate_gcm, Gcm, GcmKind};
use weylhull_core::hull::{
    Constraint, CoverCertificate, FaceSymmetry, Membership, SliceInterval, SliceReport, SliceVertex, SliceVertexKind,
};
use weylhull_core::iwasawa::{HorosphereWitness, Mat, VerificationReport, WitnessCase};
use weylhull_core::tits::{CartanPoint, ChamberReduction};
use weylhull_core::Rational;

pub const GCM_SCHEMA: &str = r#"GCM file: {"gcm": [[2,-1],[-1,2]]} (a bare matrix is also accepted)"#;
pub const DATUM_SCHEMA: &str =
    r#"datum file: {"gcm": [[..]], "d": 3, "c": [[..], ..], "h": [[..], ..]} with c_j and h_i rows of length d"#;
pub const POINT_SCHEMA: &str = r#"points: comma-separated rationals such as "1/2,-1,0"; indices are 1-based"#;

pub fn schema_excerpt() -> String {
    format!("input formats:\n  {GCM_SCHEMA}\n  {DATUM_SCHEMA}\n  {POINT_SCHEMA}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcmFile {
    pub gcm: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumFile {
    pub gcm: Vec<Vec<i64>>,
    pub d: usize,
    pub c: Vec<Vec<i64>>,
    pub h: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GcmInput {
    File(GcmFile),
    Bare(Vec<Vec<i64>>),
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {} as JSON", path.display()))
}

pub fn parse_gcm(value: Value) -> Result<Gcm> {
    let input: GcmInput = serde_json::from_value(value).with_context(|| GCM_SCHEMA.to_string())?;
    let rows = match input {
        GcmInput::File(f) => f.gcm,
        GcmInput::Bare(m) => m,
    };
    Ok(validate_gcm(&rows)?)
}

pub fn load_gcm(path: &Path) -> Result<Gcm> {
    parse_gcm(read_json(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn parse_datum(value: Value) -> Result<RootDatum> {
    let file: DatumFile = serde_json::from_value(value).with_context(|| DATUM_SCHEMA.to_string())?;
    let gcm = validate_gcm(&file.gcm)?;
    Ok(validate_datum(gcm, file.d, file.c, file.h)?)
}

pub fn load_datum(path: &Path) -> Result<RootDatum> {
    parse_datum(read_json(path)?).with_context(|| format!("in {}", path.display()))
}

/// A datum from `--datum`, or the Kac datum of `--gcm`.
pub fn load_source(gcm: Option<&Path>, datum: Option<&Path>) -> Result<RootDatum> {
    match (gcm, datum) {
        (_, Some(p)) => load_datum(p),
        (Some(p), None) => Ok(make_kac_datum(&load_gcm(p)?)),
        (None, None) => bail!("one of --gcm or --datum is required"),
    }
}

pub fn datum_file(datum: &RootDatum) -> DatumFile {
    DatumFile {
        gcm: datum.gcm().entries().to_vec(),
        d: datum.d(),
        c: datum.c().to_vec(),
        h: datum.h().to_vec(),
    }
}

pub fn parse_point(s: &str, d: usize) -> Result<CartanPoint> {
    let p: CartanPoint = s.parse().with_context(|| format!("bad point {s:?}; {POINT_SCHEMA}"))?;
    if p.dim() != d {
        bail!("point {s:?} has {} coordinates, the datum has d = {d}", p.dim());
    }
    Ok(p)
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim().parse().map_err(|_| anyhow::anyhow!("bad rational {s:?}; expected p/q"))
}

pub fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad number {v:?}")))
        .collect()
}

/// Converts a 1-based index from the command line.
pub fn index_arg(i: usize, n: usize) -> Result<usize> {
    if i == 0 || i > n {
        bail!("index {i} out of range 1..={n}");
    }
    Ok(i - 1)
}

pub fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn point(p: &CartanPoint) -> Value {
    rats(p.coords())
}

pub fn indices(v: &[usize]) -> Value {
    json!(v.iter().map(|i| i + 1).collect::<Vec<_>>())
}

pub fn element(w: &WeylElement) -> Value {
    json!({
        "word": indices(w.word()),
        "length": w.length(),
        "actB": w.act_b().rows(),
    })
}

fn kind_name(k: GcmKind) -> &'static str {
    match k {
        GcmKind::Finite => "Finite",
        GcmKind::Affine => "Affine",
        GcmKind::Indefinite => "Indefinite",
    }
}

pub fn classification(gcm: &Gcm) -> Value {
    let components: Vec<Value> = gcm
        .classify()
        .into_iter()
        .map(|c| json!({"indices": indices(&c.indices), "tag": kind_name(c.kind), "witness": rats(&c.witness)}))
        .collect();
    let symmetrizer = match gcm.symmetrizer() {
        Ok(s) => json!({"d": rats(&s.d), "b": s.b.iter().map(|r| rats(r)).collect::<Vec<_>>()}),
        Err(weylhull_core::gcm::GcmError::NotSymmetrizable(cycle)) => json!({"cycle": indices(&cycle)}),
        Err(e) => json!({"error": e.to_string()}),
    };
    let tag = match gcm.classify().as_slice() {
        [one] => Value::from(kind_name(one.kind)),
        _ => Value::from("Decomposable"),
    };
    json!({
        "n": gcm.n(),
        "tag": tag,
        "components": components,
        "finite_index_core": indices(&weylhull_core::coxeter::finite_index_core(gcm)),
        "symmetrizer": symmetrizer,
    })
}

pub fn reduction(r: &ChamberReduction) -> Value {
    match r {
        ChamberReduction::InCone { word, dominant, cell } => json!({
            "verdict": "InCone",
            "word": indices(word),
            "dominant": point(dominant),
            "cell": indices(cell),
        }),
        ChamberReduction::Inconclusive { budget, last } => json!({
            "verdict": "Inconclusive",
            "budget": budget,
            "last": point(last),
        }),
    }
}

pub fn constraint(c: &Constraint) -> Value {
    match c {
        Constraint::Phi { k, value, level } => json!({
            "kind": "phi",
            "index": k + 1,
            "value": rat(value),
            "level": rat(level),
        }),
        Constraint::Omega { i, word, value, bound } => json!({
            "kind": "omega",
            "index": i + 1,
            "word": indices(word),
            "value": rat(value),
            "bound": rat(bound),
        }),
    }
}

pub fn membership(m: &Membership) -> Value {
    match m {
        Membership::In { tight, word, dominant } => json!({
            "verdict": "In",
            "tight": indices(tight),
            "word": indices(word),
            "dominant": point(dominant),
        }),
        Membership::Out(c) => json!({"verdict": "Out", "constraint": constraint(c)}),
        Membership::Inconclusive { budget, last } => json!({
            "verdict": "Inconclusive",
            "budget": budget,
            "last": point(last),
        }),
    }
}

pub fn interval(iv: &SliceInterval) -> Value {
    json!({
        "lower": iv.lower.as_ref().map(rat),
        "upper": rat(&iv.upper),
        "opposite": iv.opposite.map(|j| j + 1),
    })
}

pub fn slice_vertex(v: &SliceVertex) -> Value {
    match &v.kind {
        SliceVertexKind::OrbitPoint { w } => json!({
            "kind": "OrbitPoint",
            "word": indices(w.word()),
            "point": point(&v.point),
        }),
        SliceVertexKind::EdgeCrossing { w, k, s } => json!({
            "kind": "EdgeCrossing",
            "word": indices(w.word()),
            "k": k + 1,
            "s": rat(s),
            "point": point(&v.point),
        }),
    }
}

pub fn slice_report(r: &SliceReport) -> Value {
    json!({
        "i": r.i + 1,
        "t": rat(&r.t),
        "interval": interval(&r.interval),
        "vertices": r.vertices.iter().map(slice_vertex).collect::<Vec<_>>(),
        "truncated": r.truncated,
        "essential": r.essential.iter().map(slice_vertex).collect::<Vec<_>>(),
        "m": r.m,
    })
}

pub fn cover(c: &CoverCertificate) -> Value {
    json!({
        "y": point(&c.y),
        "terms": c.terms.iter().map(|(w, a)| json!({"word": indices(w.word()), "weight": rat(a)})).collect::<Vec<_>>(),
    })
}

pub fn face_symmetry(f: &FaceSymmetry) -> Value {
    json!({
        "translate": indices(f.translate.word()),
        "j": indices(&f.j_set),
        "representatives": f.representatives.iter().map(point).collect::<Vec<_>>(),
    })
}

pub fn matrix(m: &Mat<f64>) -> Value {
    json!(m.rows())
}

pub fn verification(type_name: &str, h: &[f64], linear: bool, r: &VerificationReport, passed: bool) -> Value {
    json!({
        "type": type_name,
        "projection": if linear { "linear" } else { "nonlinear" },
        "h": h,
        "samples": r.samples,
        "seed": r.seed,
        "worst_slack": r.worst_slack,
        "coverage_gaps": r.coverage_gaps,
        "max_gap": r.max_gap,
        "pinching": r.pinching.as_ref().map(|p| json!({"targets": p.targets, "max_error": p.max_error})),
        "passed": passed,
    })
}

pub fn witness(w: &HorosphereWitness) -> Value {
    json!({
        "case": match w.case {
            WitnessCase::ExtraRank => "ExtraRank",
            WitnessCase::SquareIndefinite => "SquareIndefinite",
        },
        "h": point(&w.h),
        "violated": w.violated.iter().map(constraint).collect::<Vec<_>>(),
        "membership": membership(&w.membership),
    })
}
