//! JSON jobs: input parsing, canonical form, dispatch and reports.
//!
//! Every number travels as a decimal string (`"-3"`) or a reduced fraction
//! (`"1/2"`); plain JSON integers are accepted on input. Reports use the
//! canonical ray order, so permuting the input rays changes nothing.

use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::cone::{validate_fan, Fan};
use crate::constructions::{
    delta_lstar_vertices_wps, quotient_toric, reflexive_simplex_check, triangulate_refinement, weighted_projective,
    DiagonalGroup, WeightSystem,
};
use crate::divisor::{
    convexity, delta_l, local_chart, picard_basis_toric, section_basis, section_polytope, Convexity, RhoClass, Section,
};
use crate::error::{Error, Hypothesis};
use crate::lattice::{BigInt, BigRational, IntVector, RationalVector};
use crate::picard::{
    check_conditions, maximal_ray_set, picard_anticanonical, picard_hypersurface, prop6_certificate, PicardReport,
    Verdict,
};
use crate::polytope::{dual_polytope, hull_of_ints, Polytope};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    FanValidate,
    PicToric,
    SectionsBasis,
    PicHyp,
    PolytopeDual,
    PolytopeReflexive,
    PolytopePoints,
    WpsBuild,
    QuotientBuild,
    SimplexCheck,
    Triangulate,
    Chart,
}

impl Command {
    pub const ALL: [Command; 12] = [
        Command::FanValidate,
        Command::PicToric,
        Command::SectionsBasis,
        Command::PicHyp,
        Command::PolytopeDual,
        Command::PolytopeReflexive,
        Command::PolytopePoints,
        Command::WpsBuild,
        Command::QuotientBuild,
        Command::SimplexCheck,
        Command::Triangulate,
        Command::Chart,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::FanValidate => "fan validate",
            Command::PicToric => "pic toric",
            Command::SectionsBasis => "sections basis",
            Command::PicHyp => "pic hyp",
            Command::PolytopeDual => "polytope dual",
            Command::PolytopeReflexive => "polytope reflexive",
            Command::PolytopePoints => "polytope points",
            Command::WpsBuild => "wps build",
            Command::QuotientBuild => "quotient build",
            Command::SimplexCheck => "simplex check",
            Command::Triangulate => "triangulate",
            Command::Chart => "chart",
        }
    }
}

impl FromStr for Command {
    type Err = JobError;

    fn from_str(s: &str) -> Result<Self, JobError> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let joined = words.join(" ");
        Command::ALL
            .into_iter()
            .find(|c| c.name() == joined)
            .ok_or_else(|| JobError::Input(format!("unknown command `{joined}`")))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Anticanonical,
    General,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Anticanonical => "anticanonical",
            Mode::General => "general",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionInput {
    /// A generic section on every section basis element.
    Generic,
    /// A generic section on the listed points.
    GenericOn(Vec<IntVector>),
    Explicit(Vec<(IntVector, BigRational)>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JobInput {
    pub lattice_rank: Option<usize>,
    pub rays: Vec<IntVector>,
    pub max_cones: Vec<Vec<usize>>,
    pub rho: Option<Vec<BigInt>>,
    pub section: Option<SectionInput>,
    pub weights: Option<Vec<BigInt>>,
    pub group: Option<Vec<RationalVector>>,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JobError {
    /// Malformed or inconsistent input.
    Input(String),
    Core(Error),
    Io(String),
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        JobError::Core(e)
    }
}

impl JobError {
    /// The hypothesis whose failure blocks a result, if that is the cause.
    pub fn hypothesis(&self) -> Option<Hypothesis> {
        match self {
            JobError::Core(Error::PreconditionFailed(h)) => Some(*h),
            JobError::Core(Error::NotConvexRho) => Some(Hypothesis::ConvexRho),
            JobError::Core(Error::NotReflexive) => Some(Hypothesis::Reflexive),
            _ => None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Io(_) => 3,
            _ if self.hypothesis().is_some() => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, message) = match self {
            JobError::Input(m) => ("schema".to_string(), m.clone()),
            JobError::Io(m) => ("io".to_string(), m.clone()),
            JobError::Core(e) => (snake_kind(e), e.to_string()),
        };
        let mut err = Map::new();
        err.insert("kind".into(), json!(kind));
        err.insert("message".into(), json!(message));
        if let Some(h) = self.hypothesis() {
            err.insert("hypothesis".into(), serde_json::to_value(h).expect("plain enum"));
        }
        json!({ "error": err, "exit_code": self.exit_code() })
    }
}

/// `NonPrimitiveRay(3)` becomes `non_primitive_ray`.
fn snake_kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    let name: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
    let mut out = String::new();
    for (i, c) in name.chars().enumerate() {
        if c.is_uppercase() {
            if i > 0 {
                out.push('_');
            }
            out.extend(c.to_lowercase());
        } else {
            out.push(c);
        }
    }
    out
}

fn input_err<T>(msg: impl Into<String>) -> Result<T, JobError> {
    Err(JobError::Input(msg.into()))
}

fn parse_int(v: &Value, at: &str) -> Result<BigInt, JobError> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integer literal")),
        Value::String(s) => s.trim().parse().map_err(|_| JobError::Input(format!("{at}: `{s}` is not an integer"))),
        _ => input_err(format!("{at}: expected an integer")),
    }
}

fn parse_rational(v: &Value, at: &str) -> Result<BigRational, JobError> {
    let bad = || JobError::Input(format!("{at}: expected an integer or a fraction a/b"));
    match v {
        Value::String(s) => match s.split_once('/') {
            Some((a, b)) => {
                let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                if b.is_zero() {
                    return input_err(format!("{at}: zero denominator"));
                }
                Ok(BigRational::new(a, b))
            }
            None => Ok(BigRational::from_integer(parse_int(v, at)?)),
        },
        Value::Number(_) => Ok(BigRational::from_integer(parse_int(v, at)?)),
        _ => Err(bad()),
    }
}

fn parse_usize(v: &Value, at: &str) -> Result<usize, JobError> {
    v.as_u64().map(|x| x as usize).or_else(|| v.as_str().and_then(|s| s.trim().parse().ok())).ok_or_else(|| {
        JobError::Input(format!("{at}: expected a non-negative index"))
    })
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>, JobError> {
    v.as_array().ok_or_else(|| JobError::Input(format!("{at}: expected an array")))
}

fn parse_int_vector(v: &Value, at: &str) -> Result<IntVector, JobError> {
    let xs = array(v, at)?;
    Ok(IntVector::new(xs.iter().enumerate().map(|(i, x)| parse_int(x, &format!("{at}[{i}]"))).collect::<Result<_, _>>()?))
}

fn parse_points(v: &Value, at: &str) -> Result<Vec<IntVector>, JobError> {
    array(v, at)?.iter().enumerate().map(|(i, p)| parse_int_vector(p, &format!("{at}[{i}]"))).collect()
}

fn is_generic_tag(v: &Value) -> bool {
    v.as_str().is_some_and(|s| s.eq_ignore_ascii_case("generic"))
}

fn parse_section(v: &Value) -> Result<SectionInput, JobError> {
    if is_generic_tag(v) {
        return Ok(SectionInput::Generic);
    }
    let obj = v.as_object().ok_or_else(|| JobError::Input("section: expected an object or \"GENERIC\"".into()))?;
    for k in obj.keys() {
        if k != "points" && k != "coeffs" {
            return input_err(format!("section: unknown field `{k}`"));
        }
    }
    let points = match obj.get("points") {
        Some(p) => Some(parse_points(p, "section.points")?),
        None => None,
    };
    match (obj.get("coeffs"), points) {
        (None, None) => Ok(SectionInput::Generic),
        (Some(c), None) if is_generic_tag(c) => Ok(SectionInput::Generic),
        (Some(c), Some(points)) if is_generic_tag(c) => Ok(SectionInput::GenericOn(points)),
        (None, Some(points)) => Ok(SectionInput::GenericOn(points)),
        (Some(c), Some(points)) => {
            let cs = array(c, "section.coeffs")?;
            if cs.len() != points.len() {
                return input_err("section: points and coeffs differ in length");
            }
            let coeffs = cs
                .iter()
                .enumerate()
                .map(|(i, x)| parse_rational(x, &format!("section.coeffs[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SectionInput::Explicit(points.into_iter().zip(coeffs).collect()))
        }
        (Some(_), None) => input_err("section: coeffs given without points"),
    }
}

const FIELDS: [&str; 8] = ["group", "lattice_rank", "max_cones", "mode", "rays", "rho", "section", "weights"];

/// Parse and schema-check a job. Unknown fields are rejected.
pub fn parse_input(bytes: &[u8]) -> Result<JobInput, JobError> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| JobError::Input(format!("invalid JSON: {e}")))?;
    let obj = v.as_object().ok_or_else(|| JobError::Input("top level must be an object".into()))?;
    for k in obj.keys() {
        if !FIELDS.contains(&k.as_str()) {
            return input_err(format!("unknown field `{k}`"));
        }
    }
    let mut job = JobInput::default();
    if let Some(r) = obj.get("lattice_rank") {
        job.lattice_rank = Some(parse_usize(r, "lattice_rank")?);
    }
    if let Some(r) = obj.get("rays") {
        job.rays = parse_points(r, "rays")?;
    }
    if let Some(c) = obj.get("max_cones") {
        job.max_cones = array(c, "max_cones")?
            .iter()
            .enumerate()
            .map(|(i, cone)| {
                array(cone, &format!("max_cones[{i}]"))?
                    .iter()
                    .map(|x| parse_usize(x, &format!("max_cones[{i}]")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
    }
    if let Some(r) = obj.get("rho") {
        job.rho = Some(parse_int_vector(r, "rho")?.into_entries());
    }
    if let Some(s) = obj.get("section") {
        job.section = Some(parse_section(s)?);
    }
    if let Some(w) = obj.get("weights") {
        job.weights = Some(parse_int_vector(w, "weights")?.into_entries());
    }
    if let Some(g) = obj.get("group") {
        job.group = Some(
            array(g, "group")?
                .iter()
                .enumerate()
                .map(|(i, gen)| {
                    array(gen, &format!("group[{i}]"))?
                        .iter()
                        .map(|x| parse_rational(x, &format!("group[{i}]")))
                        .collect::<Result<Vec<_>, _>>()
                        .map(RationalVector::new)
                })
                .collect::<Result<_, _>>()?,
        );
    }
    if let Some(m) = obj.get("mode") {
        job.mode = match m.as_str() {
            Some("anticanonical") => Mode::Anticanonical,
            Some("general") => Mode::General,
            _ => return input_err("mode: expected \"anticanonical\" or \"general\""),
        };
    }
    check_shape(&job)?;
    Ok(job)
}

fn check_shape(job: &JobInput) -> Result<(), JobError> {
    if let Some(n) = job.lattice_rank {
        if let Some(i) = job.rays.iter().position(|r| r.dim() != n) {
            return input_err(format!("rays[{i}] has length {}, lattice_rank is {n}", job.rays[i].dim()));
        }
    }
    if let Some(rho) = &job.rho {
        if rho.len() != job.rays.len() {
            return input_err(format!("rho has {} entries for {} rays", rho.len(), job.rays.len()));
        }
    }
    if let Some(i) = job.max_cones.iter().flatten().position(|&i| i >= job.rays.len()) {
        return input_err(format!("max_cones refers to ray {i}, out of range"));
    }
    Ok(())
}

/// A job in canonical form with its serialization.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub input: JobInput,
    /// `remap[k]` is the original index of canonical ray `k`.
    pub remap: Vec<usize>,
    pub bytes: Vec<u8>,
}

impl Canonical {
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }
}

/// Lex-sort rays (carrying rho), rewrite and sort cones, sort section terms,
/// and serialize with sorted keys and reduced fractions.
pub fn canonicalize(job: &JobInput) -> Canonical {
    let mut remap: Vec<usize> = (0..job.rays.len()).collect();
    remap.sort_by(|&a, &b| job.rays[a].cmp(&job.rays[b]).then(a.cmp(&b)));
    let mut inverse = vec![0; remap.len()];
    for (k, &i) in remap.iter().enumerate() {
        inverse[i] = k;
    }
    let rays: Vec<IntVector> = remap.iter().map(|&i| job.rays[i].clone()).collect();
    let mut max_cones: Vec<Vec<usize>> = job
        .max_cones
        .iter()
        .map(|c| {
            let mut c: Vec<usize> = c.iter().map(|&i| inverse[i]).collect();
            c.sort();
            c
        })
        .collect();
    max_cones.sort();
    let rho = job.rho.as_ref().map(|r| remap.iter().map(|&i| r[i].clone()).collect());
    let section = job.section.clone().map(|s| match s {
        SectionInput::GenericOn(mut pts) => {
            pts.sort();
            pts.dedup();
            SectionInput::GenericOn(pts)
        }
        SectionInput::Explicit(mut terms) => {
            terms.sort();
            SectionInput::Explicit(terms)
        }
        g => g,
    });
    let input = JobInput {
        lattice_rank: job.lattice_rank,
        rays,
        max_cones,
        rho,
        section,
        weights: job.weights.clone(),
        group: job.group.clone(),
        mode: job.mode,
    };
    let bytes = serde_json::to_vec(&input_json(&input)).expect("serializable");
    Canonical { input, remap, bytes }
}

fn ints(v: &IntVector) -> Value {
    json!(v.to_strings())
}

fn int_list(v: &[IntVector]) -> Value {
    Value::Array(v.iter().map(ints).collect())
}

fn big(x: &BigInt) -> Value {
    json!(x.to_string())
}

fn frac(x: &BigRational) -> Value {
    json!(x.to_string())
}

fn rats(v: &RationalVector) -> Value {
    json!(v.to_strings())
}

fn input_json(job: &JobInput) -> Value {
    let mut m = Map::new();
    m.insert("mode".into(), json!(job.mode.name()));
    if let Some(n) = job.lattice_rank {
        m.insert("lattice_rank".into(), json!(n.to_string()));
    }
    if !job.rays.is_empty() {
        m.insert("rays".into(), int_list(&job.rays));
    }
    if !job.max_cones.is_empty() {
        m.insert("max_cones".into(), json!(job.max_cones));
    }
    if let Some(rho) = &job.rho {
        m.insert("rho".into(), Value::Array(rho.iter().map(big).collect()));
    }
    if let Some(s) = &job.section {
        let v = match s {
            SectionInput::Generic => json!("GENERIC"),
            SectionInput::GenericOn(pts) => json!({ "points": int_list(pts), "coeffs": "GENERIC" }),
            SectionInput::Explicit(terms) => json!({
                "points": Value::Array(terms.iter().map(|(p, _)| ints(p)).collect()),
                "coeffs": Value::Array(terms.iter().map(|(_, c)| frac(c)).collect()),
            }),
        };
        m.insert("section".into(), v);
    }
    if let Some(w) = &job.weights {
        m.insert("weights".into(), Value::Array(w.iter().map(big).collect()));
    }
    if let Some(g) = &job.group {
        m.insert("group".into(), Value::Array(g.iter().map(rats).collect()));
    }
    Value::Object(m)
}

fn fan_of(job: &JobInput) -> Result<Fan, JobError> {
    let n = match job.lattice_rank {
        Some(n) => n,
        None => return input_err("lattice_rank is required"),
    };
    if job.rays.is_empty() || job.max_cones.is_empty() {
        return input_err("rays and max_cones are required");
    }
    Ok(validate_fan(n, job.rays.clone(), job.max_cones.clone())?)
}

fn rho_of(job: &JobInput, fan: &Fan) -> Result<RhoClass, JobError> {
    let d = fan.rays().len();
    match (job.mode, &job.rho) {
        (Mode::Anticanonical, None) => Ok(RhoClass::anticanonical(d)),
        (Mode::Anticanonical, Some(r)) if r.iter().all(One::is_one) => Ok(RhoClass::anticanonical(d)),
        (Mode::Anticanonical, Some(_)) => input_err("rho must be all ones in anticanonical mode"),
        (Mode::General, Some(r)) => Ok(RhoClass::new(r.clone())?),
        (Mode::General, None) => input_err("rho is required in general mode"),
    }
}

fn section_of(job: &JobInput, fan: &Fan, rho: &RhoClass) -> Result<Section, JobError> {
    let basis = section_basis(fan, rho)?;
    let s = match &job.section {
        None => return input_err("section is required; pass --assume-generic for a generic section"),
        Some(SectionInput::Generic) => Section::generic(basis.points().to_vec()),
        Some(SectionInput::GenericOn(pts)) => Section::generic(pts.clone()),
        Some(SectionInput::Explicit(terms)) => Section::explicit(terms.clone()),
    };
    s.bind(&basis)?;
    Ok(s)
}

fn weights_of(job: &JobInput) -> Result<WeightSystem, JobError> {
    match &job.weights {
        Some(w) => Ok(WeightSystem::from_bigints(w.clone())?),
        None => input_err("weights are required"),
    }
}

fn group_of(job: &JobInput, w: &WeightSystem) -> DiagonalGroup {
    match &job.group {
        Some(g) => DiagonalGroup::new(g.clone()),
        None => DiagonalGroup::scalars(w),
    }
}

fn convexity_name(c: Convexity) -> &'static str {
    match c {
        Convexity::NotConvex => "not_convex",
        Convexity::Convex => "convex",
        Convexity::StrictlyConvex => "strictly_convex",
    }
}

fn picard_json(r: &PicardReport) -> Value {
    json!({
        "toric_rank": r.toric_rank.to_string(),
        "total_rank": r.total_rank.to_string(),
        "corrections": r.corrections.iter().filter(|c| c.count() > 0).map(|c| json!({
            "face_rays": c.face_rays,
            "face_points": int_list(&c.face_points),
            "dual_points": int_list(&c.dual_points),
            "count": c.count().to_string(),
        })).collect::<Vec<_>>(),
        "codim2_faces": r.corrections.len().to_string(),
        "assumptions": r.assumptions,
    })
}

fn polytope_json(p: &Polytope) -> Value {
    json!({
        "dim": p.dim(),
        "vertices": p.vertices().iter().map(rats).collect::<Vec<_>>(),
        "facets": p.facets().iter().map(|f| json!({ "normal": ints(&f.normal), "offset": frac(&f.offset) })).collect::<Vec<_>>(),
    })
}

/// The polytope a `polytope` command works on: the hull of the rays in
/// anticanonical mode, the section polytope in general mode.
fn job_polytope(job: &JobInput) -> Result<(Polytope, Value), JobError> {
    let fan = fan_of(job)?;
    match job.mode {
        Mode::Anticanonical => {
            let convex = delta_l(&fan)?.is_convex();
            Ok((hull_of_ints(fan.rays())?, json!({ "source": "ray_hull", "delta_l_convex": convex })))
        }
        Mode::General => {
            let rho = rho_of(job, &fan)?;
            Ok((section_polytope(&fan, &rho)?, json!({ "source": "section_polytope" })))
        }
    }
}

/// Run one command on a canonical job.
pub fn execute(command: Command, job: &JobInput) -> Result<Value, JobError> {
    match command {
        Command::FanValidate => {
            let fan = fan_of(job)?;
            Ok(json!({
                "lattice_rank": fan.lattice_rank().to_string(),
                "rays": fan.rays().len().to_string(),
                "max_cones": fan.max_cones().len().to_string(),
                "simplicial": true,
                "complete": fan.is_complete(),
            }))
        }
        Command::PicToric => {
            let b = picard_basis_toric(&fan_of(job)?)?;
            Ok(json!({
                "toric_rank": b.rank.to_string(),
                "basis": int_list(&b.basis),
                "ray_classes": int_list(&b.ray_classes),
            }))
        }
        Command::SectionsBasis => {
            let fan = fan_of(job)?;
            let rho = rho_of(job, &fan)?;
            let conv = convexity(&fan, &rho)?;
            let pts = section_basis(&fan, &rho)?;
            Ok(json!({
                "convexity": convexity_name(conv),
                "count": pts.len().to_string(),
                "points": int_list(pts.points()),
            }))
        }
        Command::PicHyp => pic_hyp(job),
        Command::PolytopeDual => {
            let (p, meta) = job_polytope(job)?;
            let d = dual_polytope(&p)?;
            Ok(json!({ "polytope": meta, "dual": polytope_json(&d), "dual_integral": d.is_integral() }))
        }
        Command::PolytopeReflexive => {
            let (p, meta) = job_polytope(job)?;
            Ok(json!({
                "polytope": meta,
                "integral": p.is_integral(),
                "origin_interior": p.has_interior_origin(),
                "reflexive": p.has_interior_origin() && p.is_reflexive()?,
            }))
        }
        Command::PolytopePoints => {
            let (p, meta) = job_polytope(job)?;
            let pts = p.lattice_points();
            let interior = p.relative_interior_lattice_points();
            Ok(json!({
                "polytope": meta,
                "count": pts.len().to_string(),
                "interior_count": interior.len().to_string(),
                "points": int_list(pts.points()),
            }))
        }
        Command::WpsBuild => {
            let w = weights_of(job)?;
            let wps = weighted_projective(&w)?;
            let rho: Vec<BigInt> = match &job.rho {
                Some(r) => r.clone(),
                None => vec![BigInt::one(); w.len()],
            };
            let v = delta_lstar_vertices_wps(&w, &rho)?;
            Ok(json!({
                "degree": big(&w.degree()),
                "fermat": w.is_fermat_type(),
                "lattice_rank": wps.fan.lattice_rank().to_string(),
                "rays": int_list(wps.fan.rays()),
                "max_cones": wps.fan.max_cones(),
                "kernel": ints(&wps.kernel),
                "section_vertices": v.vertices.iter().map(rats).collect::<Vec<_>>(),
                "section_vertex_pairings": v.presentation.iter().map(|row| row.iter().map(frac).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }))
        }
        Command::QuotientBuild => {
            let w = weights_of(job)?;
            let qt = quotient_toric(&w, &group_of(job, &w), &job.rays)?;
            Ok(json!({
                "q": rats(&qt.q),
                "deltas": int_list(&qt.deltas),
                "index": big(&qt.index),
                "contains_scalars": qt.contains_scalars,
                "lattice_rank": qt.fan.lattice_rank().to_string(),
                "rays": int_list(qt.fan.rays()),
                "max_cones": qt.fan.max_cones(),
                "nbasis": qt.nbasis.iter().map(|b| json!({
                    "ray": b.ray,
                    "coefficients": rats(&b.coefficients),
                })).collect::<Vec<_>>(),
            }))
        }
        Command::SimplexCheck => {
            let w = weights_of(job)?;
            let c = reflexive_simplex_check(&w, &group_of(job, &w), false)?;
            Ok(json!({
                "fermat": c.fermat,
                "contains_scalars": c.contains_scalars,
                "in_sd": c.in_sd,
                "pass": c.pass,
                "failing": c.failing,
                "reflexive": c.reflexive,
            }))
        }
        Command::Triangulate => {
            let fan = fan_of(job)?;
            let p = hull_of_ints(fan.rays())?;
            let rays = maximal_ray_set(&p)?;
            let fine = triangulate_refinement(&fan.to_collection(), &rays)?;
            let mut out = json!({
                "lattice_rank": fine.lattice_rank().to_string(),
                "rays": int_list(fine.rays()),
                "max_cones": fine.max_cones(),
            });
            if fine.lattice_rank() == 4 {
                out["smoothness"] = certificate_json(&fine)?;
            }
            Ok(out)
        }
        Command::Chart => {
            let fan = fan_of(job)?;
            let rho = rho_of(job, &fan)?;
            let s = section_of(job, &fan, &rho)?;
            let charts = (0..fan.max_cones().len())
                .map(|sigma| {
                    let c = local_chart(&fan, sigma, &rho, &s)?;
                    Ok(json!({
                        "cone": c.cone,
                        "isotropy": c.isotropy.iter().map(big).collect::<Vec<_>>(),
                        "z_sigma": rats(&c.z_sigma),
                        "z_sigma_integral": c.z_sigma_integral,
                        "monomials": c.monomials.iter().map(|m| json!({
                            "point": ints(&m.point),
                            "exponents": m.exponents.iter().map(big).collect::<Vec<_>>(),
                        })).collect::<Vec<_>>(),
                    }))
                })
                .collect::<Result<Vec<_>, JobError>>()?;
            Ok(json!({ "charts": charts }))
        }
    }
}

fn certificate_json(fan: &Fan) -> Result<Value, JobError> {
    let c = prop6_certificate(fan)?;
    Ok(json!({
        "verdict": match c.verdict { Verdict::SmoothCy => "SMOOTH_CY", Verdict::NotCertified => "NOT_CERTIFIED" },
        "maximal": c.maximal,
        "missing_rays": int_list(&c.missing_rays),
        "extra_rays": int_list(&c.extra_rays),
        "failed": c.failed,
    }))
}

fn pic_hyp(job: &JobInput) -> Result<Value, JobError> {
    let fan = fan_of(job)?;
    let rho = rho_of(job, &fan)?;
    let generic_anticanonical = job.mode == Mode::Anticanonical && job.section == Some(SectionInput::Generic);
    let report = if generic_anticanonical {
        picard_anticanonical(&fan)?
    } else {
        let s = section_of(job, &fan, &rho)?;
        picard_hypersurface(&fan, &rho, &s)?
    };
    let mut out = picard_json(&report);
    let cond = check_conditions(&fan, &rho)?;
    out["conditions"] = json!({
        "cond_i": cond.cond_i,
        "offending_rays": cond.offending_rays,
        "cond_ii": cond.cond_ii,
        "offending_cones": cond.offending_cones,
        "newton_full": cond.newton_full,
    });
    if generic_anticanonical && fan.lattice_rank() == 4 {
        out["smoothness"] = certificate_json(&fan)?;
    }
    Ok(out)
}

/// The assumptions a command makes beyond its input.
fn assumptions(command: Command, job: &JobInput) -> Vec<&'static str> {
    let mut a = vec!["exact arithmetic over Z and Q"];
    if matches!(command, Command::PicHyp | Command::Chart) && job.section == Some(SectionInput::Generic) {
        a.push("section is generic");
    }
    if matches!(command, Command::QuotientBuild | Command::SimplexCheck) && job.group.is_none() {
        a.push("group defaults to the weighted scalars");
    }
    a
}

/// Options of one CLI invocation.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub command: Option<Command>,
    /// `-` reads standard input; `None` also does.
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub no_cache: bool,
    pub assume_generic: bool,
    pub timing: bool,
}

/// What the process should print and return.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
    pub cache_hit: bool,
}

fn fail(e: JobError) -> Outcome {
    let mut stderr = serde_json::to_vec_pretty(&e.to_json()).expect("serializable");
    stderr.push(b'\n');
    Outcome { code: e.exit_code(), stderr, ..Default::default() }
}

fn cache_key(command: Command, canonical: &Canonical) -> String {
    let mut h = Sha256::new();
    h.update(command.name().as_bytes());
    h.update([0]);
    h.update(VERSION.as_bytes());
    h.update([0]);
    h.update(&canonical.bytes);
    hex::encode(h.finalize())
}

/// Build the report for a command without touching the filesystem.
pub fn report(command: Command, job: &JobInput) -> Result<(Vec<u8>, Canonical), JobError> {
    let canonical = canonicalize(job);
    let result = execute(command, &canonical.input)?;
    let report = json!({
        "command": command.name(),
        "input_hash": canonical.hash(),
        "version": VERSION,
        "result": result,
        "assumptions": assumptions(command, &canonical.input),
    });
    let mut bytes = serde_json::to_vec_pretty(&report).expect("serializable");
    bytes.push(b'\n');
    Ok((bytes, canonical))
}

fn read_input(path: Option<&Path>, stdin: &mut dyn Read) -> Result<Vec<u8>, JobError> {
    let mut buf = Vec::new();
    match path {
        Some(p) if p != Path::new("-") => {
            buf = std::fs::read(p).map_err(|e| JobError::Io(format!("{}: {e}", p.display())))?;
        }
        _ => {
            stdin.read_to_end(&mut buf).map_err(|e| JobError::Io(format!("stdin: {e}")))?;
        }
    }
    Ok(buf)
}

fn add_timing(bytes: Vec<u8>, start: Instant) -> Vec<u8> {
    let mut v: Value = serde_json::from_slice(&bytes).expect("own report");
    v["timing"] = json!({ "elapsed_ms": start.elapsed().as_millis().to_string() });
    let mut out = serde_json::to_vec_pretty(&v).expect("serializable");
    out.push(b'\n');
    out
}

/// One full invocation: read, canonicalize, consult the cache, compute,
/// write. Errors become structured JSON on stderr.
pub fn run(opts: &RunOptions, stdin: &mut dyn Read) -> Outcome {
    let start = Instant::now();
    let command = match opts.command {
        Some(c) => c,
        None => return fail(JobError::Input("no command given".into())),
    };
    let bytes = match read_input(opts.input.as_deref(), stdin) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    let mut job = match parse_input(&bytes) {
        Ok(j) => j,
        Err(e) => return fail(e),
    };
    if opts.assume_generic {
        job.section = Some(SectionInput::Generic);
    }
    let canonical = canonicalize(&job);
    let cache_file = match (&opts.cache, opts.no_cache) {
        (Some(dir), false) => Some(dir.join(format!("{}.json", cache_key(command, &canonical)))),
        _ => None,
    };
    let mut cache_hit = false;
    let cached = cache_file.as_ref().and_then(|f| std::fs::read(f).ok());
    let report_bytes = match cached {
        Some(b) => {
            cache_hit = true;
            b
        }
        None => match report(command, &canonical.input) {
            Ok((b, _)) => {
                if let Some(f) = &cache_file {
                    let stored = std::fs::create_dir_all(f.parent().expect("cache dir")).and_then(|_| std::fs::write(f, &b));
                    if let Err(e) = stored {
                        return fail(JobError::Io(format!("cache {}: {e}", f.display())));
                    }
                }
                b
            }
            Err(e) => return fail(e),
        },
    };
    let report_bytes = if opts.timing { add_timing(report_bytes, start) } else { report_bytes };
    match &opts.output {
        Some(p) if p != Path::new("-") => match std::fs::write(p, &report_bytes) {
            Ok(()) => Outcome { code: 0, cache_hit, ..Default::default() },
            Err(e) => fail(JobError::Io(format!("{}: {e}", p.display()))),
        },
        _ => Outcome { code: 0, stdout: report_bytes, cache_hit, ..Default::default() },
    }
}
