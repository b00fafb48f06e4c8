#![recursion_limit = "256"]

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jsonschema::{Draft, JSONSchema};
use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use statikit::groebner::{groebner_stratification, ModuleVector, Poly, Submodule};
use statikit::json::{
    certificate_from_str, default_vars, poly_from_json, vector_from_json, CertificateJson, ConeJson, Dec, FanJson, PolyJson, PresentationJson,
    StratificationJson, SubmoduleJson, TorReportJson, VectorJson,
};
use statikit::polyhedral::{stratification_to_smooth_fan, RationalCone};
use statikit::staticity::{is_log_flat, log_tor_dim_at_most, ModulePresentation};
use statikit::statify::{compute_statification, replay, verify_theorem_instance, StatifyOptions};
use statikit::tropical_pic::{firing_script, is_chip_firing_equivalent, jacobian_group, reduced_divisor, Graph};
use statikit::Error;

mod schema;

/// Exact computations with Gröbner stratifications, statifications and chip firing.
///
/// Exit status: 0 on success, 1 when the computation answers in the negative
/// (not static, not equivalent, ...), 2 when the input is rejected.
#[derive(Parser)]
#[command(name = "statikit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Print the input and output JSON schemas of the subcommand and exit.
    #[arg(long, global = true)]
    schema: bool,
    /// Report progress on standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
pub enum Command {
    /// Gröbner stratification of a submodule and a smooth fan refining it.
    Stratify(Input),
    /// Statify a presentation and emit a certificate.
    Statify(StatifyArgs),
    /// Decide staticity and log flatness of a presentation.
    CheckStatic(Input),
    /// Decide whether the log Tor dimension is at most a bound.
    TorDim(Input),
    /// Check both sides of the statification criterion for a given fan.
    VerifyTheorem(Input),
    /// Invariant factors of the Jacobian group of a graph.
    Jacobian(Input),
    /// Decide chip-firing equivalence of two divisors.
    ChipEquiv(Input),
    /// A firing script taking the first divisor to the second.
    FiringScript(Input),
    /// Recompute every verdict stored in a certificate.
    Replay(Input),
}

#[derive(Args)]
pub struct Input {
    /// A file path, `-` for standard input, or inline JSON.
    input: Option<String>,
}

#[derive(Args)]
pub struct StatifyArgs {
    #[command(flatten)]
    input: Input,
    /// Recompute the stratification from a second presentation and compare.
    #[arg(long)]
    audit: bool,
    /// Stop at the first chart that is not static.
    #[arg(long)]
    fail_fast: bool,
}

struct Failure {
    code: String,
    path: String,
    message: String,
}

impl Failure {
    fn new(code: &str, path: impl Into<String>, message: impl Into<String>) -> Self {
        Failure { code: code.into(), path: path.into(), message: message.into() }
    }

    fn at(path: impl Into<String>, e: Error) -> Self {
        Failure::new(e.code(), path, e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::at("", e)
    }
}

/// A result document and whether it is a negative answer.
struct Answer {
    body: Value,
    negative: bool,
}

impl Answer {
    fn yes(body: Value) -> Self {
        Answer { body, negative: false }
    }

    fn verdict(body: Value, positive: bool) -> Self {
        Answer { body, negative: !positive }
    }
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    path.iter()
        .filter_map(|s| match s {
            Segment::Seq { index } => Some(format!("/{index}")),
            Segment::Map { key } => Some(format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { .. } | Segment::Unknown => None,
        })
        .collect()
}

fn read_input(arg: Option<&str>) -> Result<String, Failure> {
    let arg = arg.ok_or_else(|| Failure::new("MISSING_INPUT", "", "no input given; pass a file, `-` or inline JSON"))?;
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::new("IO_ERROR", "", format!("reading standard input: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(arg).map_err(|e| Failure::new("IO_ERROR", "", format!("reading {arg}: {e}")))
}

fn parse_json(text: &str) -> Result<Value, Failure> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: Value = serde_path_to_error::deserialize(&mut de).map_err(|e| Failure::new("MALFORMED_JSON", pointer(e.path()), e.inner().to_string()))?;
    de.end().map_err(|e| Failure::new("MALFORMED_JSON", "", e.to_string()))?;
    Ok(value)
}

fn validate(command: &Command, value: &Value) -> Result<(), Failure> {
    let schema = schema::input_schema(command);
    let compiled = JSONSchema::options().with_draft(Draft::Draft202012).compile(&schema).expect("embedded schemas compile");
    let result = compiled.validate(value);
    if let Err(mut errors) = result {
        let e = errors.next().expect("a failed validation reports an error");
        return Err(Failure::new("SCHEMA_VIOLATION", e.instance_path.to_string(), e.to_string()));
    }
    Ok(())
}

fn typed<T: DeserializeOwned>(value: Value) -> Result<T, Failure> {
    serde_path_to_error::deserialize(value).map_err(|e| Failure::new("INVALID_INPUT", pointer(e.path()), e.inner().to_string()))
}

/// Converts a presentation, pointing at the offending matrix entry when a
/// polynomial does not parse.
fn presentation(p: &PresentationJson, prefix: &str) -> Result<ModulePresentation, Failure> {
    p.to_presentation().map_err(|e| {
        let n = p
            .vars
            .as_ref()
            .map(Vec::len)
            .or_else(|| p.chart.as_ref().and_then(|c| c.rays.first().map(Vec::len)))
            .or_else(|| p.matrix.iter().flatten().find_map(|q| if let PolyJson::Terms(ts) = q { ts.first().map(|t| t.exp.len()) } else { None }));
        let vars = p.vars.clone().or_else(|| n.map(default_vars));
        if let Some(vars) = vars {
            for (i, row) in p.matrix.iter().enumerate() {
                for (j, entry) in row.iter().enumerate() {
                    if let Err(inner) = poly_from_json(entry, &vars) {
                        return Failure::at(format!("{prefix}/matrix/{i}/{j}"), inner);
                    }
                }
            }
        }
        Failure::at(prefix, e)
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GeneratorJson {
    Components(Vec<PolyJson>),
    Terms(VectorJson),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StratifyInput {
    vars: Option<Vec<String>>,
    nvars: Option<Dec<usize>>,
    rank: Option<Dec<usize>>,
    support: Option<ConeJson>,
    generators: Vec<GeneratorJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TorDimInput {
    presentation: PresentationJson,
    bound: Dec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyTheoremInput {
    presentation: PresentationJson,
    fan: FanJson,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    vertices: Dec<usize>,
    edges: Vec<[Dec<usize>; 2]>,
}

impl GraphJson {
    fn to_graph(&self, prefix: &str) -> Result<Graph, Failure> {
        let n = self.vertices.0;
        if let Some(i) = self.edges.iter().position(|[u, v]| u.0 >= n || v.0 >= n || u.0 == v.0) {
            let [u, v] = &self.edges[i];
            let why = if u.0 == v.0 { "loops are not allowed".to_string() } else { format!("endpoint outside 0..{n}") };
            return Err(Failure::new("INVALID_INPUT", format!("{prefix}/edges/{i}"), format!("edge ({},{}): {why}", u.0, v.0)));
        }
        Graph::new(n, self.edges.iter().map(|[u, v]| (u.0, v.0)).collect()).map_err(|e| Failure::at(prefix, e))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DivisorPair {
    graph: GraphJson,
    d1: Vec<Dec<i64>>,
    d2: Vec<Dec<i64>>,
}

impl DivisorPair {
    fn parts(&self) -> Result<(Graph, Vec<i64>, Vec<i64>), Failure> {
        let g = self.graph.to_graph("/graph")?;
        let undec = |d: &[Dec<i64>], name: &str| {
            if d.len() != g.vertices() {
                return Err(Failure::at(format!("/{name}"), Error::DimensionMismatch { expected: g.vertices(), found: d.len() }));
            }
            Ok(d.iter().map(|x| x.0).collect::<Vec<i64>>())
        };
        Ok((g.clone(), undec(&self.d1, "d1")?, undec(&self.d2, "d2")?))
    }
}

fn dec_vec<T: Clone>(v: &[T]) -> Vec<Dec<T>> {
    v.iter().cloned().map(Dec).collect()
}

fn stratify(input: StratifyInput) -> Result<Answer, Failure> {
    let mut generators = Vec::new();
    let explicit_rank = input.rank.as_ref().map(|r| r.0);
    let rank = explicit_rank
        .or_else(|| input.generators.iter().find_map(|g| if let GeneratorJson::Components(c) = g { Some(c.len()) } else { None }))
        .ok_or_else(|| Failure::new("INVALID_INPUT", "/rank", "give the rank of the free module"))?;
    let nvars = input
        .nvars
        .as_ref()
        .map(|n| n.0)
        .or_else(|| input.vars.as_ref().map(Vec::len))
        .or_else(|| input.support.as_ref().and_then(|c| c.ambient_dim.as_ref().map(|d| d.0).or_else(|| c.rays.first().map(Vec::len))))
        .ok_or_else(|| Failure::new("INVALID_INPUT", "/nvars", "give the number of variables"))?;
    let vars = input.vars.clone().unwrap_or_else(|| default_vars(nvars));
    if vars.len() != nvars {
        return Err(Failure::at("/vars", Error::DimensionMismatch { expected: nvars, found: vars.len() }));
    }
    for (i, g) in input.generators.iter().enumerate() {
        let v = match g {
            GeneratorJson::Components(c) => {
                if c.len() != rank {
                    return Err(Failure::at(format!("/generators/{i}"), Error::DimensionMismatch { expected: rank, found: c.len() }));
                }
                let polys = c
                    .iter()
                    .enumerate()
                    .map(|(j, p)| poly_from_json(p, &vars).map_err(|e| Failure::at(format!("/generators/{i}/{j}"), e)))
                    .collect::<Result<Vec<Poly>, Failure>>()?;
                ModuleVector::from_polys(&polys)
            }
            GeneratorJson::Terms(t) => vector_from_json(t, nvars, rank).map_err(|e| Failure::at(format!("/generators/{i}"), e))?,
        };
        generators.push(v);
    }
    let support = match &input.support {
        Some(c) => c.to_cone(Some(nvars)).map_err(|e| Failure::at("/support", e))?,
        None => RationalCone::orthant(nvars),
    };
    let submodule = Submodule::new(nvars, rank, generators)?;
    let s = groebner_stratification(&submodule, &support).map_err(|e| Failure::at("/support", e))?;
    let fan = stratification_to_smooth_fan(&s.stratification)?;
    Ok(Answer::yes(json!({
        "submodule": SubmoduleJson::from_submodule(&s.submodule),
        "stratification": StratificationJson::from_stratification(&s.stratification, nvars, rank),
        "smooth_fan": FanJson::from_fan(&fan),
    })))
}

fn reports_json(reports: &[statikit::staticity::TorReport]) -> Vec<TorReportJson> {
    reports.iter().map(TorReportJson::from_report).collect()
}

fn run(cli: &Cli) -> Result<Answer, Failure> {
    let arg = match &cli.command {
        Command::Statify(a) => &a.input,
        Command::Stratify(i)
        | Command::CheckStatic(i)
        | Command::TorDim(i)
        | Command::VerifyTheorem(i)
        | Command::Jacobian(i)
        | Command::ChipEquiv(i)
        | Command::FiringScript(i)
        | Command::Replay(i) => i,
    };
    let text = read_input(arg.input.as_deref())?;
    let value = parse_json(&text)?;
    validate(&cli.command, &value)?;
    let log = |msg: &str| {
        if cli.verbose {
            eprintln!("statikit: {msg}");
        }
    };
    log("input validated");
    match &cli.command {
        Command::Stratify(_) => stratify(typed(value)?),
        Command::Statify(a) => {
            let m = presentation(&typed(value)?, "")?;
            let cert = compute_statification(&m, StatifyOptions { audit: a.audit, fail_fast: a.fail_fast })?;
            log(&format!("{} charts certified", cert.charts.len()));
            let valid = cert.is_valid();
            Ok(Answer::verdict(serde_json::to_value(CertificateJson::from_certificate(&cert)).expect("certificates serialize"), valid))
        }
        Command::CheckStatic(_) => {
            let m = presentation(&typed(value)?, "")?;
            let r = log_tor_dim_at_most(&m, 1)?;
            let flat = is_log_flat(&m)?;
            Ok(Answer::verdict(json!({"static": r.holds, "log_flat": flat, "reports": reports_json(&r.reports)}), r.holds))
        }
        Command::TorDim(_) => {
            let input: TorDimInput = typed(value)?;
            let m = presentation(&input.presentation, "/presentation")?;
            let bound = input.bound.0;
            let mut dimension = 0;
            while !log_tor_dim_at_most(&m, dimension)?.holds {
                dimension += 1;
            }
            let r = log_tor_dim_at_most(&m, bound)?;
            Ok(Answer::verdict(
                json!({"bound": Dec(bound), "holds": r.holds, "log_tor_dimension": Dec(dimension), "reports": reports_json(&r.reports)}),
                r.holds,
            ))
        }
        Command::VerifyTheorem(_) => {
            let input: VerifyTheoremInput = typed(value)?;
            let m = presentation(&input.presentation, "/presentation")?;
            let fan = input.fan.to_fan().map_err(|e| Failure::at("/fan", e))?;
            let t = verify_theorem_instance(&m, &fan).map_err(|e| Failure::at("/fan", e))?;
            let charts: Vec<Value> = t.charts.iter().map(|(c, s)| json!({"cone": ConeJson::from_cone(c), "static": s})).collect();
            Ok(Answer::verdict(json!({"refines": t.refines, "all_static": t.all_static(), "agree": t.agree(), "charts": charts}), t.agree()))
        }
        Command::Jacobian(_) => {
            let g = typed::<GraphJson>(value)?.to_graph("")?;
            let factors = jacobian_group(&g);
            let order = factors.iter().product::<BigInt>();
            Ok(Answer::yes(json!({"invariant_factors": dec_vec(&factors), "order": Dec(order)})))
        }
        Command::ChipEquiv(_) => {
            let (g, d1, d2) = typed::<DivisorPair>(value)?.parts()?;
            let equivalent = is_chip_firing_equivalent(&g, &d1, &d2)?;
            let reduced = [dec_vec(&reduced_divisor(&g, &d1, 0)?), dec_vec(&reduced_divisor(&g, &d2, 0)?)];
            Ok(Answer::verdict(json!({"equivalent": equivalent, "reduced": reduced}), equivalent))
        }
        Command::FiringScript(_) => {
            let (g, d1, d2) = typed::<DivisorPair>(value)?.parts()?;
            let script = firing_script(&g, &d1, &d2)?;
            let found = script.is_some();
            Ok(Answer::verdict(json!({"script": script.map(|s| dec_vec(&s))}), found))
        }
        Command::Replay(_) => {
            let cert = certificate_from_str(&text)?;
            let r = replay(&cert)?;
            Ok(Answer::verdict(
                json!({
                    "reproduced": r.reproduced(),
                    "hash_matches": r.hash_matches,
                    "kernel_matches": r.kernel_matches,
                    "stratification_matches": r.stratification_matches,
                    "refines": r.refines,
                    "charts_match": r.charts_match,
                    "audit_matches": r.audit_matches,
                }),
                r.reproduced(),
            ))
        }
    }
}

fn emit(cli: &Cli, body: &Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(body).expect("values serialize");
    text.push('\n');
    match &cli.output {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.schema {
        return match emit(&cli, &schema::schemas(&cli.command)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(&Failure::new("IO_ERROR", "", e.to_string())),
        };
    }
    match run(&cli) {
        Ok(answer) => match emit(&cli, &answer.body) {
            Ok(()) => ExitCode::from(answer.negative as u8),
            Err(e) => fail(&Failure::new("IO_ERROR", "", e.to_string())),
        },
        Err(f) => fail(&f),
    }
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("{}", json!({"error": {"code": f.code, "path": f.path, "message": f.message}}));
    ExitCode::from(2)
}
