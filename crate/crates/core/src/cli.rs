//! Request and response types behind the `coincalc` binary.
//!
//! Every answer carries the rules it used. Machine output is a single JSON
//! document; exit codes are 0 (ok), 2 (unknown: a data gap blocked the
//! computation) and 1 (error).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::abelian::{FgAbGroup, GroupElement, Subgroup};
use crate::coincidence::{
    check_invariants, classify_sphere_pair, full_filtration_shortcut, grassmann_all_loose, grassmann_pi,
    loose_pair, pi_c, pi_q, space_group, FiltrationLevel, InvariantChecks, MinCount, ProjectiveContext,
    SpaceDescriptor, SpaceFamily, Verdict,
};
use crate::error::{Error, Result};
use crate::fibration::{check_fibrations, pi_projective, ProjectiveSpace};
use crate::homotopy_db::{check_database, sphere_key, Database, Field};
use crate::report::Report;
use crate::trace::{rules, Trace};

/// Exact coincidence invariants of maps from spheres.
#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "coincalc", version)]
pub struct QueryRequest {
    /// Homotopy database file; defaults to the built-in table.
    #[arg(long, global = true, env = "COINCALC_DB")]
    pub db: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

impl QueryRequest {
    /// Parses a full argument vector, program name first.
    pub fn from_args<I, T>(args: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        Self::try_parse_from(args)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Human,
    Machine,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// π_m(S^n).
    PiSphere {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
    /// π_m of a sphere, projective space or Grassmannian.
    PiSpace {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        m: u32,
    },
    /// The filtration subgroup π^(q)_m(N) together with π^c_m(N).
    Filtration {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        m: u32,
        /// A positive integer or `inf`.
        #[arg(long, default_value = "2", value_parser = parse_level)]
        #[serde(serialize_with = "serialize_level")]
        q: FiltrationLevel,
    },
    /// Nielsen and minimum coincidence numbers of a pair of classes.
    Classify {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Whether a pair of classes is loose.
    Loose {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Looseness of all pairs into G(r,2), and π_m(G(r,2)) when --m is given.
    Grassmann {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Run every consistency check on the database.
    ValidateDb {
        /// Also enumerate every finite instance and check the classifiers.
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Sphere,
    Rp,
    Cp,
    Hp,
    Grassmann,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpaceArgs {
    #[arg(long, value_enum)]
    pub space: SpaceKind,
    /// Sphere dimension.
    #[arg(long)]
    pub n: Option<u32>,
    /// Projective space KP(n').
    #[arg(long)]
    pub nprime: Option<u32>,
    /// Grassmannian G(r,2).
    #[arg(long)]
    pub r: Option<u32>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PairArgs {
    #[arg(long)]
    pub m: u32,
    /// Comma-separated coordinates of [f1] in the generators of π_m(N).
    #[arg(long, allow_hyphen_values = true)]
    pub f1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub f2: String,
}

fn parse_level(s: &str) -> std::result::Result<FiltrationLevel, String> {
    match s {
        "inf" | "infinity" => Ok(FiltrationLevel::Infinite),
        _ => match s.parse::<u32>() {
            Ok(q) if q >= 1 => Ok(FiltrationLevel::Finite(q)),
            _ => Err(format!("expected a positive integer or `inf`, got `{s}`")),
        },
    }
}

fn serialize_level<S: serde::Serializer>(q: &FiltrationLevel, s: S) -> std::result::Result<S::Ok, S::Error> {
    q.serialize(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Unknown,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Error => 1,
            Status::Unknown => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResponse {
    pub status: Status,
    pub command: String,
    pub payload: Value,
    pub rule_trace: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// One-line rendering for human output.
    #[serde(skip)]
    pub summary: String,
}

impl QueryResponse {
    fn ok(command: &str, payload: Value, trace: &Trace, summary: String) -> Self {
        QueryResponse {
            status: Status::Ok,
            command: command.to_string(),
            payload,
            rule_trace: trace.to_strings(),
            message: None,
            summary,
        }
    }

    fn from_error(command: &str, e: &Error, trace: &Trace) -> Self {
        let status = if e.is_gap() { Status::Unknown } else { Status::Error };
        QueryResponse {
            status,
            command: command.to_string(),
            payload: Value::Null,
            rule_trace: trace.to_strings(),
            message: Some(e.to_string()),
            summary: String::new(),
        }
    }

    /// The machine rendering. Keys are emitted in sorted order so that
    /// re-serializing a parsed document reproduces it byte for byte.
    pub fn to_machine(&self) -> String {
        let value = serde_json::to_value(self).expect("responses serialize");
        serde_json::to_string_pretty(&value).expect("values serialize")
    }

    pub fn to_human(&self) -> String {
        let mut out = match self.status {
            Status::Ok => self.summary.clone(),
            Status::Unknown => format!("unknown: {}", self.message.as_deref().unwrap_or("")),
            Status::Error => format!("error: {}", self.message.as_deref().unwrap_or("")),
        };
        if self.status == Status::Error && self.payload.is_object() {
            if let Some(findings) = self.payload.get("failures").and_then(Value::as_array) {
                for f in findings {
                    out.push_str(&format!(
                        "\n  FAIL {} {}: {}",
                        f["check"].as_str().unwrap_or(""),
                        f["key"].as_str().unwrap_or(""),
                        f["detail"].as_str().unwrap_or("")
                    ));
                }
            }
        }
        if !self.rule_trace.is_empty() {
            out.push_str(&format!("\nrules: {}", self.rule_trace.join(", ")));
        }
        out
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::PiSphere { .. } => "pi-sphere",
            Command::PiSpace { .. } => "pi-space",
            Command::Filtration { .. } => "filtration",
            Command::Classify { .. } => "classify",
            Command::Loose { .. } => "loose",
            Command::Grassmann { .. } => "grassmann",
            Command::ValidateDb { .. } => "validate-db",
        }
    }
}

fn group_json(g: &FgAbGroup) -> Value {
    json!({
        "free_rank": g.free_rank(),
        "torsion": g.torsion(),
        "labels": g.labels(),
        "display": g.to_string(),
    })
}

/// `3·nu6 + eta6^2`-style rendering with the group's generator labels.
pub fn format_element(x: &GroupElement) -> String {
    let labels = x.group().labels();
    let terms: Vec<String> = x
        .coords()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let name = labels.map_or_else(|| format!("g{i}"), |l| l[i].clone());
            if c == 1 {
                name
            } else {
                format!("{c}*{name}")
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn element_json(x: &GroupElement) -> Value {
    json!({ "coords": x.coords(), "display": format_element(x) })
}

fn subgroup_json(s: &Subgroup) -> Value {
    json!({
        "group": group_json(s.canonical_form()),
        "generators": s.canonical_generators().iter().map(element_json).collect::<Vec<_>>(),
    })
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "loose": v.loose,
        "nielsen": v.nielsen,
        "mcc": v.mcc,
        "mc": v.mc,
        "rule": v.rule,
        "row": v.row,
    })
}

fn verdict_summary(v: &Verdict) -> String {
    let row = v.row.map(|r| format!(" (table row {r})")).unwrap_or_default();
    format!(
        "N# = {}, MCC = {}, MC = {}; {}{row}",
        v.nielsen,
        v.mcc,
        v.mc,
        if v.loose { "loose" } else { "not loose" }
    )
}

fn parse_coords(text: &str, flag: &str) -> Result<Vec<i64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidInput(format!("--{flag}: `{s}` is not an integer coordinate")))
        })
        .collect()
}

fn element_of(g: &FgAbGroup, text: &str, flag: &str) -> Result<GroupElement> {
    let coords = parse_coords(text, flag)?;
    if coords.len() != g.generator_count() {
        return Err(Error::InvalidInput(format!(
            "--{flag} has {} coordinates but {g} has {} generators",
            coords.len(),
            g.generator_count()
        )));
    }
    Ok(g.element(coords)?)
}

fn need(value: Option<u32>, flag: &str, kind: &str) -> Result<u32> {
    value.ok_or_else(|| Error::InvalidInput(format!("--space {kind} needs --{flag}")))
}

impl SpaceArgs {
    pub fn descriptor(&self) -> Result<SpaceDescriptor> {
        let projective = |field| -> Result<SpaceDescriptor> {
            let kind = format!("{field}P").to_lowercase();
            let n_prime = need(self.nprime, "nprime", &kind)?;
            Ok(SpaceDescriptor::projective(ProjectiveSpace::new(field, n_prime)?))
        };
        match self.space {
            SpaceKind::Sphere => SpaceDescriptor::sphere(need(self.n, "n", "sphere")?),
            SpaceKind::Rp => projective(Field::R),
            SpaceKind::Cp => projective(Field::C),
            SpaceKind::Hp => projective(Field::H),
            SpaceKind::Grassmann => SpaceDescriptor::grassmann(need(self.r, "r", "grassmann")?),
        }
    }
}

fn space_json(s: &SpaceDescriptor) -> Value {
    json!({
        "name": s.to_string(),
        "dimension": s.dimension,
        "compact": s.compact,
        "euler_characteristic_zero": s.euler_characteristic_zero,
    })
}

/// Runs one command against `db`.
pub fn run(command: &Command, db: &Database) -> QueryResponse {
    let mut trace = Trace::new();
    let name = command.name();
    if let Command::ValidateDb { exhaustive } = command {
        return validate_response(db, *exhaustive);
    }
    match dispatch(command, db, &mut trace) {
        Ok((payload, summary)) => QueryResponse::ok(name, payload, &trace, summary),
        Err(e) => QueryResponse::from_error(name, &e, &trace),
    }
}

fn dispatch(command: &Command, db: &Database, trace: &mut Trace) -> Result<(Value, String)> {
    match command {
        Command::PiSphere { m, n } => {
            let g = db.pi_sphere_traced(*m, *n, trace)?;
            let provenance = db.sphere_record(*m, *n).map(|r| r.provenance.clone());
            let payload = json!({ "m": m, "n": n, "group": group_json(&g), "provenance": provenance });
            Ok((payload, format!("pi_{m}(S^{n}) = {g}")))
        }
        Command::PiSpace { space, m } => {
            let s = space.descriptor()?;
            let mut payload = json!({ "space": space_json(&s), "m": m });
            let g = match s.family {
                SpaceFamily::Projective { space } => {
                    let p = pi_projective(db, &space, *m, trace)?;
                    payload["lift_summand"] = group_json(&p.lift);
                    payload["c_summand"] = group_json(&p.c_group);
                    p.total
                }
                SpaceFamily::Grassmann2 { r } => {
                    let g = grassmann_pi(db, *m, r, trace)?;
                    payload["real_summand"] = group_json(&g.real_summand);
                    payload["complex_summand"] = group_json(&g.complex_summand);
                    g.group
                }
                _ => space_group(db, &s, *m, trace)?,
            };
            payload["group"] = group_json(&g);
            Ok((payload, format!("pi_{m}({s}) = {g}")))
        }
        Command::Filtration { space, m, q } => {
            let s = space.descriptor()?;
            let level = pi_q(db, &s, *m, *q, trace)?;
            let c = pi_c(db, &s, *m, trace)?;
            let shortcut = full_filtration_shortcut(*m, true, &s);
            let payload = json!({
                "space": space_json(&s),
                "m": m,
                "q": q,
                "ambient": group_json(level.subgroup.ambient()),
                "subgroup": subgroup_json(&level.subgroup),
                "stabilized_at": level.stabilized_at,
                "pi_c": subgroup_json(&c),
                "full_filtration_shortcut": shortcut,
            });
            let summary = format!(
                "pi^({q})_{m}({s}) = {} inside {}; pi^c = {}; constant from q = {}",
                level.subgroup.canonical_form(),
                level.subgroup.ambient(),
                c.canonical_form(),
                level.stabilized_at
            );
            Ok((payload, summary))
        }
        Command::Classify { space, pair } => {
            let s = space.descriptor()?;
            let v = classify(db, &s, pair, trace)?;
            trace.extend(&v.trace);
            let payload = json!({ "space": space_json(&s), "m": pair.m, "verdict": verdict_json(&v) });
            Ok((payload, verdict_summary(&v)))
        }
        Command::Loose { space, pair } => {
            let s = space.descriptor()?;
            let g = space_group_for_pair(db, &s, pair.m, trace)?;
            let (x1, x2) = match &g {
                Some(g) => (element_of(g, &pair.f1, "f1")?, element_of(g, &pair.f2, "f2")?),
                None => {
                    let z = FgAbGroup::trivial().zero();
                    (z.clone(), z)
                }
            };
            let w = loose_pair(db, &s, pair.m, &x1, &x2)?;
            trace.extend(&w.trace);
            let payload = json!({ "space": space_json(&s), "m": pair.m, "loose": w.loose, "rule": w.rule });
            Ok((payload, format!("{}loose ({})", if w.loose { "" } else { "not " }, w.rule)))
        }
        Command::Grassmann { r, m } => {
            let all = grassmann_all_loose(*r);
            if all.is_some() {
                trace.push(rules::GRASSMANN_EVEN_RANK);
            }
            let mut payload = json!({
                "r": r,
                "all_loose": all.map_or(json!("unknown"), Value::Bool),
            });
            let mut summary = format!(
                "all pairs into G({r},2) loose: {}",
                all.map_or("unknown".to_string(), |b| b.to_string())
            );
            if let Some(m) = m {
                let g = grassmann_pi(db, *m, *r, trace)?;
                payload["m"] = json!(m);
                payload["group"] = group_json(&g.group);
                summary.push_str(&format!("; pi_{m}(G({r},2)) = {}", g.group));
            }
            if all.is_none() && m.is_none() {
                return Err(Error::NotDetermined(format!(
                    "looseness into G({r},2) is known only for even r >= 4"
                )));
            }
            Ok((payload, summary))
        }
        Command::ValidateDb { .. } => unreachable!("handled by run"),
    }
}

fn validate_response(db: &Database, exhaustive: bool) -> QueryResponse {
    let report = validate(db, exhaustive);
    let payload = serde_json::to_value(&report).expect("reports serialize");
    if report.is_ok() {
        let total: u64 = report.passed.values().sum();
        let summary = format!("database ok: {total} checks passed, {} unverifiable", report.unverifiable.len());
        return QueryResponse::ok("validate-db", payload, &Trace::new(), summary);
    }
    let keys: Vec<&str> = report.failures.iter().map(|f| f.key.as_str()).collect();
    let e = Error::Invariant {
        key: keys.join(", "),
        message: format!("{} failed checks", report.failures.len()),
    };
    let mut r = QueryResponse::from_error("validate-db", &e, &Trace::new());
    r.status = Status::Error;
    r.payload = payload;
    r
}

/// π_m(N) where classes need coordinates; `None` when they are irrelevant.
fn space_group_for_pair(db: &Database, s: &SpaceDescriptor, m: u32, trace: &mut Trace) -> Result<Option<FgAbGroup>> {
    match s.family {
        SpaceFamily::Grassmann2 { .. } => Ok(None),
        _ => Ok(Some(space_group(db, s, m, trace)?)),
    }
}

fn classify(db: &Database, s: &SpaceDescriptor, pair: &PairArgs, trace: &mut Trace) -> Result<Verdict> {
    match s.family {
        SpaceFamily::Sphere { n } => {
            let g = db.pi_sphere_traced(pair.m, n, trace)?;
            let (z1, z2) = (element_of(&g, &pair.f1, "f1")?, element_of(&g, &pair.f2, "f2")?);
            classify_sphere_pair(db, pair.m, n, &z1, &z2)
        }
        SpaceFamily::Projective { space } => {
            let ctx = ProjectiveContext::new(db, space, pair.m)?;
            let g = &ctx.group().total;
            let (x1, x2) = (element_of(g, &pair.f1, "f1")?, element_of(g, &pair.f2, "f2")?);
            let c1 = ctx.group().class_from_total(&x1)?;
            let c2 = ctx.group().class_from_total(&x2)?;
            ctx.classify(&c1, &c2)
        }
        SpaceFamily::Grassmann2 { r } => {
            // every pair is loose, so all three numbers vanish
            let w = loose_pair(db, s, pair.m, &FgAbGroup::trivial().zero(), &FgAbGroup::trivial().zero())
                .map_err(|e| match e {
                    Error::NotDetermined(_) => {
                        Error::NotDetermined(format!("no classification for G({r},2) with r odd or r < 4"))
                    }
                    e => e,
                })?;
            Ok(Verdict {
                loose: w.loose,
                nielsen: 0,
                mcc: 0,
                mc: MinCount::Finite(0),
                rule: w.rule,
                row: None,
                trace: w.trace,
            })
        }
        SpaceFamily::Other => Err(Error::Unsupported(format!("no classification for {s}"))),
    }
}

/// Every validator over `db`.
pub fn validate(db: &Database, exhaustive: bool) -> Report {
    let mut report = check_database(db);
    report.merge(check_fibrations(db));
    if exhaustive {
        report.merge(check_invariants(db, InvariantChecks::default()));
    }
    report
}

/// The instance key a load failure refers to.
fn load_failure_key(e: &Error) -> String {
    match e {
        Error::RangeHole { m, n } | Error::NotInDatabase { m, n } => sphere_key(*m, *n),
        Error::Freudenthal { m, n, .. } => format!("suspension(m={m}, n={n})"),
        Error::Invariant { key, .. } => key.clone(),
        Error::Parse { location, .. } => location.clone(),
        Error::Io { path, .. } => path.clone(),
        other => other.to_string(),
    }
}

fn load(request: &QueryRequest) -> Result<Database> {
    match &request.db {
        Some(path) => Database::load(path),
        None => Ok(Database::shipped().clone()),
    }
}

/// Loads the database and runs the request.
pub fn execute(request: &QueryRequest) -> QueryResponse {
    let name = request.command.name();
    match load(request) {
        Ok(db) => run(&request.command, &db),
        Err(e) => {
            let mut r = QueryResponse::from_error(name, &e, &Trace::new());
            // a broken database is an error even when the fault is a hole
            r.status = Status::Error;
            let mut report = Report::new();
            report.fail("load", load_failure_key(&e), e.to_string());
            r.payload = serde_json::to_value(&report).expect("reports serialize");
            r
        }
    }
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let request = match QueryRequest::from_args(args) {
        Ok(r) => r,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    let response = execute(&request);
    let _ = match request.format {
        OutputFormat::Machine => writeln!(out, "{}", response.to_machine()),
        OutputFormat::Human if response.status == Status::Ok => writeln!(out, "{}", response.to_human()),
        OutputFormat::Human => writeln!(err, "{}", response.to_human()),
    };
    response.status.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["coincalc"];
        full.extend_from_slice(args);
        let code = main_with_args(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn coordinates_parse() {
        assert_eq!(parse_coords("1, -2,3", "f1").unwrap(), vec![1, -2, 3]);
        assert_eq!(parse_coords("", "f1").unwrap(), Vec::<i64>::new());
        assert!(parse_coords("1,x", "f1").is_err());
    }

    #[test]
    fn levels_parse() {
        assert_eq!(parse_level("inf").unwrap(), FiltrationLevel::Infinite);
        assert_eq!(parse_level("3").unwrap(), FiltrationLevel::Finite(3));
        assert!(parse_level("0").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["pi-sphere", "--m", "9", "--n", "6"]).0, 0);
        assert_eq!(call(&["pi-sphere", "--m", "40", "--n", "6"]).0, 2);
        assert_eq!(call(&["pi-sphere", "--m", "nine", "--n", "6"]).0, 1);
        assert_eq!(call(&["classify", "--space", "rp", "--nprime", "6", "--m", "9", "--f1", "1,2", "--f2", "0"]).0, 1);
    }

    #[test]
    fn human_output_shows_rules() {
        let (code, out, _) = call(&["filtration", "--space", "rp", "--nprime", "6", "--m", "9", "--q", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("Z2 inside Z24"), "{out}");
        assert!(out.contains(rules::STABLE_RANGE_BOUNDARY));
    }

    #[test]
    fn element_rendering_uses_labels() {
        let g = FgAbGroup::new(0, vec![2, 24]).unwrap().with_labels(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(format_element(&g.element(vec![1, 3]).unwrap()), "a + 3*b");
        assert_eq!(format_element(&g.zero()), "0");
    }
}
