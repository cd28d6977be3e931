//! Command-line front end: argument parsing, JSON encoding and dispatch.
//!
//! Every command prints exactly one JSON document on stdout. Failures print
//! `{"error": {"kind": ..., "message": ...}}` and exit with 1 for usage or
//! parse problems and 2 for mathematical ones.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use supergv::connection::{
    connection_from_superfoliation, gauge_transform, superfoliation_from_connection, ConnectionData,
    FlatFoliatedConnection, Matrix,
};
use supergv::expr::{parse_field, parse_form, parse_function, print_field, print_form, print_function, print_scalar};
use supergv::foliation::{
    find_transversal, godbillon_vey_form, gv_class, h1_class, solve_b, BaseClassH1, FoliationPresentation,
};
use supergv::gelfand_fuks::{betti_report, AlgebraSpec};
use supergv::{Error, Signature, SpaceSignature};

#[derive(Parser, Debug)]
#[command(name = "supergv", version, about = "Exact calculus on split supermanifolds")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FormArgs {
    /// Space signature, e.g. "x1:circle;theta1".
    #[arg(long)]
    space: String,
    /// Even 1-form defining the foliation.
    #[arg(long)]
    form: String,
    /// Formal parameters, comma separated.
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AlgebraKind {
    Vect,
    Abelian,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Godbillon-Vey form A and its class.
    Gv(FormArgs),
    /// Checks da = b ^ a and reports b.
    CheckFoliation(FormArgs),
    /// Betti numbers of a truncated Chevalley-Eilenberg complex.
    CeBetti {
        #[arg(long, value_enum)]
        algebra: AlgebraKind,
        /// Even coordinates (or dimension of the abelian algebra).
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Odd coordinates.
        #[arg(long, default_value_t = 0)]
        m: usize,
        /// Use the even part of Vect(n, m); required when m > 0.
        #[arg(long)]
        even_part: bool,
        /// Truncation weight W; defaults to max-degree plus any positive weight.
        #[arg(long)]
        max_weight: Option<u32>,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        weight: i64,
    },
    /// Foliated connections.
    #[command(subcommand)]
    Connection(ConnectionCommand),
}

#[derive(Subcommand, Debug)]
enum ConnectionCommand {
    /// Lift a flat connection to a super-foliation.
    ToSuperfoliation {
        #[arg(long)]
        input: PathBuf,
    },
    /// Read a connection off adapted super-foliation generators.
    FromSuperfoliation {
        #[arg(long)]
        input: PathBuf,
    },
    /// Curvature on every generator pair.
    Curvature {
        #[arg(long)]
        input: PathBuf,
    },
    /// Frame change by a gauge matrix, given inline or as "gauge" in the input.
    Gauge {
        #[arg(long)]
        input: PathBuf,
        /// JSON matrix of expressions, e.g. '[["1","x"],["0","1"]]'.
        #[arg(long)]
        gauge: Option<String>,
    },
}

/// Failure of a command, with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub kind: String,
    pub message: String,
    pub code: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            kind: e.kind().to_string(),
            message: e.to_string(),
            code: if e.is_input_error() { 1 } else { 2 },
        }
    }
}

fn input_failure(kind: &str, message: impl Into<String>) -> Failure {
    Failure {
        kind: kind.into(),
        message: message.into(),
        code: 1,
    }
}

type CmdResult = Result<Value, Failure>;

/// Runs the command line and returns the JSON document and exit code.
pub fn run<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (e.to_string(), 0);
            }
            return render(Err(input_failure("UsageError", e.to_string().trim_end())));
        }
    };
    render(dispatch(cli.command))
}

fn render(result: CmdResult) -> (String, i32) {
    match result {
        Ok(v) => (serde_json::to_string_pretty(&v).expect("serializable"), 0),
        Err(f) => {
            let v = json!({"error": {"kind": f.kind, "message": f.message}});
            (serde_json::to_string_pretty(&v).expect("serializable"), f.code)
        }
    }
}

fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::Gv(args) => gv(&args),
        Command::CheckFoliation(args) => check_foliation(&args),
        Command::CeBetti {
            algebra,
            n,
            m,
            even_part,
            max_weight,
            max_degree,
            weight,
        } => {
            let spec = match algebra {
                AlgebraKind::Abelian => AlgebraSpec::Abelian { dim: n },
                AlgebraKind::Vect if m > 0 && !even_part => {
                    return Err(input_failure(
                        "UsageError",
                        "only the even part of Vect(n, m) is supported; pass --even-part",
                    ))
                }
                AlgebraKind::Vect => AlgebraSpec::Vect { n, m },
            };
            let report = betti_report(spec, max_degree, weight, max_weight)?;
            Ok(serde_json::to_value(report).expect("serializable"))
        }
        Command::Connection(c) => connection(c),
    }
}

fn signature(space: &str, params: &[String]) -> Result<Signature, Failure> {
    Ok(SpaceSignature::parse(space, params)?)
}

pub fn class_json(class: &BaseClassH1, sig: &Signature) -> Value {
    let mut map = Map::new();
    for (name, value) in &class.classes {
        map.insert(name.clone(), Value::String(print_scalar(value, sig)));
    }
    Value::Object(map)
}

fn gv(args: &FormArgs) -> CmdResult {
    let sig = signature(&args.space, &args.params)?;
    let a = parse_form(&args.form, &sig)?;
    let big_a = godbillon_vey_form(&a)?;
    let closed = big_a.d()?.is_zero();
    let class = h1_class(&big_a)?;
    Ok(json!({
        "A": print_form(&big_a),
        "closed": closed,
        "class": class_json(&class, &sig),
    }))
}

fn check_foliation(args: &FormArgs) -> CmdResult {
    let sig = signature(&args.space, &args.params)?;
    let a = parse_form(&args.form, &sig)?;
    let theta = find_transversal(&a)?;
    match solve_b(&a, &theta) {
        Ok(b) => Ok(json!({"integrable": true, "b": print_form(&b)})),
        Err(Error::NotIntegrable) => Ok(json!({"integrable": false, "b": null})),
        Err(e) => Err(e.into()),
    }
}

// ---------------------------------------------------------------------------
// connection data

#[derive(Deserialize, Debug)]
struct ConnectionJson {
    space: String,
    #[serde(default)]
    params: Vec<String>,
    generators: Vec<String>,
    rank: Option<usize>,
    #[serde(default)]
    matrices: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    gauge: Option<Vec<Vec<String>>>,
}

fn read_input(path: &PathBuf) -> Result<ConnectionJson, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input_failure("IoError", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_failure("InputError", e.to_string()))
}

fn parse_matrix(rows: &[Vec<String>], sig: &Signature) -> Result<Matrix, Failure> {
    rows.iter()
        .map(|r| r.iter().map(|s| parse_function(s, sig).map_err(Failure::from)).collect())
        .collect()
}

pub fn connection_data(src: &str) -> Result<ConnectionData, Failure> {
    let data: ConnectionJson = serde_json::from_str(src).map_err(|e| input_failure("InputError", e.to_string()))?;
    build_connection(&data)
}

fn build_connection(data: &ConnectionJson) -> Result<ConnectionData, Failure> {
    let sig = signature(&data.space, &data.params)?;
    let gens = data
        .generators
        .iter()
        .map(|g| parse_field(g, &sig))
        .collect::<Result<Vec<_>, _>>()?;
    let rank = data
        .rank
        .or_else(|| data.matrices.first().map(Vec::len))
        .ok_or_else(|| input_failure("InputError", "connection data needs \"rank\""))?;
    let matrices = data
        .matrices
        .iter()
        .map(|m| parse_matrix(m, &sig))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConnectionData::new(&sig, gens, rank, matrices)?)
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        m.iter()
            .map(|r| Value::Array(r.iter().map(|f| Value::String(print_function(f))).collect()))
            .collect(),
    )
}

pub fn connection_json(c: &ConnectionData) -> Value {
    json!({
        "space": c.base().to_spec_string(),
        "params": c.base().params(),
        "generators": c.generators().iter().map(print_field).collect::<Vec<_>>(),
        "rank": c.rank(),
        "matrices": c.matrices().iter().map(matrix_json).collect::<Vec<_>>(),
    })
}

fn foliation_json(f: &FoliationPresentation) -> Value {
    let sig = f.signature();
    let class = match f.defining_form() {
        Ok(a) => match gv_class(a) {
            Ok(c) => class_json(&c, sig),
            Err(_) => Value::Null,
        },
        Err(_) => Value::Null,
    };
    json!({
        "space": sig.to_spec_string(),
        "params": sig.params(),
        "generators": f.generators().iter().map(print_field).collect::<Vec<_>>(),
        "odd_annihilators": f.odd_forms().iter().map(print_form).collect::<Vec<_>>(),
        "even_annihilators": f.even_forms().iter().map(print_form).collect::<Vec<_>>(),
        "class": class,
    })
}

fn connection(cmd: ConnectionCommand) -> CmdResult {
    match cmd {
        ConnectionCommand::ToSuperfoliation { input } => {
            let c = build_connection(&read_input(&input)?)?;
            Ok(foliation_json(&superfoliation_from_connection(&c)?))
        }
        ConnectionCommand::FromSuperfoliation { input } => {
            let data = read_input(&input)?;
            let sig = signature(&data.space, &data.params)?;
            let gens = data
                .generators
                .iter()
                .map(|g| parse_field(g, &sig))
                .collect::<Result<Vec<_>, _>>()?;
            let f = FoliationPresentation::new(&sig, Vec::new(), Vec::new())?.with_generators(gens)?;
            Ok(connection_json(connection_from_superfoliation(&f)?.data()))
        }
        ConnectionCommand::Curvature { input } => {
            let c = build_connection(&read_input(&input)?)?;
            let n = c.generators().len();
            let mut pairs = Vec::new();
            let mut flat = true;
            for a in 0..n {
                for b in a + 1..n {
                    let r = c.curvature(a, b)?;
                    flat &= supergv::connection::is_zero_matrix(&r);
                    pairs.push(json!({"pair": [a, b], "matrix": matrix_json(&r)}));
                }
            }
            Ok(json!({"flat": flat, "curvature": pairs}))
        }
        ConnectionCommand::Gauge { input, gauge } => {
            let data = read_input(&input)?;
            let c = FlatFoliatedConnection::new(build_connection(&data)?)?;
            let rows: Vec<Vec<String>> = match gauge {
                Some(text) => serde_json::from_str(&text).map_err(|e| input_failure("InputError", e.to_string()))?,
                None => data
                    .gauge
                    .clone()
                    .ok_or_else(|| input_failure("InputError", "no gauge matrix given"))?,
            };
            let g = parse_matrix(&rows, c.base())?;
            Ok(connection_json(gauge_transform(&c, &g)?.data()))
        }
    }
}
