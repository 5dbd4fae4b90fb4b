//! `lambdatree`: JSON in, JSON or DOT out.
//!
//! Exit codes: 0 on success, 1 when the answer is a negative result (ping-pong
//! violations, no stabilization, a failed round trip), 2 on malformed input.

use std::fs;
use std::io::Read as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lambdatree::finite_tree::{build_tree, PointSet};
use lambdatree::graph::WeightedGraph;
use lambdatree::graph_synthesis::{round_trip, synthesize, SynthesisError};
use lambdatree::io::{val_from_str, val_to_json};
use lambdatree::schottky::{verify_ping_pong, Schottky, SchottkyData, SchottkyError};
use lambdatree::{classify, Field, FieldSpec, Moebius, Val};

#[derive(Parser)]
#[command(
    name = "lambdatree",
    version,
    about = "Λ-trees of balls, Moebius actions and Schottky groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Field description: a JSON file or inline JSON such as
    /// '{"kind":"rational-padic","p":3}'.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Word length of the limit-set sample.
    #[arg(long, global = true, default_value_t = 4)]
    depth: u32,
    /// Target precision of approximate fixed points, e.g. "[20]" or "[20,0]".
    #[arg(long, global = true)]
    precision: Option<String>,
    /// Largest sample depth tried before a quotient is declared unstable.
    #[arg(long, global = true, default_value_t = 10)]
    max_depth: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a matrix `{"a":..,"b":..,"c":..,"d":..}` or `[[a,b],[c,d]]`.
    Classify { input: String },
    /// The finite tree `T(L)` of a point set `{"points":[..]}`.
    Tree { input: String },
    /// Check ping-pong data `{"field":..,"generators":[..],"balls":[..]}`.
    SchottkyVerify { input: String },
    /// Attracting fixed points of reduced words up to `--depth`.
    LimitSet { input: String },
    /// The quotient graph of verified ping-pong data.
    Quotient { input: String },
    /// Ping-pong data realizing a weighted graph.
    Synthesize { input: String },
    /// Synthesize, take the quotient and compare with the input graph.
    RoundTrip { input: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

enum Output {
    Json(Value),
    Dot(String),
}

enum Failure {
    /// A well-formed negative answer, printed on stdout.
    Negative(Value),
    /// Malformed input or an unusable request.
    Input(String),
}

impl From<lambdatree::FieldError> for Failure {
    fn from(e: lambdatree::FieldError) -> Failure {
        Failure::Input(e.to_string())
    }
}

impl From<lambdatree::MoebiusError> for Failure {
    fn from(e: lambdatree::MoebiusError) -> Failure {
        Failure::Input(e.to_string())
    }
}

/// A file path, `-` for stdin, or inline JSON.
fn read_json(arg: &str) -> Result<Value, Failure> {
    let text = match arg.trim_start().chars().next() {
        Some('{') | Some('[') => arg.to_string(),
        _ if arg == "-" => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            s
        }
        _ => fs::read_to_string(arg).map_err(|e| Failure::Input(format!("{arg}: {e}")))?,
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("invalid JSON: {e}")))
}

fn field_from(v: &Value) -> Result<Field, Failure> {
    let spec: FieldSpec =
        serde_json::from_value(v.clone()).map_err(|e| Failure::Input(format!("field: {e}")))?;
    Ok(Field::new(spec)?)
}

impl Cli {
    fn field(&self) -> Result<Option<Field>, Failure> {
        self.field
            .as_deref()
            .map(|f| field_from(&read_json(f)?))
            .transpose()
    }

    fn require_field(&self) -> Result<Field, Failure> {
        self.field()?
            .ok_or_else(|| Failure::Input("this command needs --field".into()))
    }

    fn precision(&self, k: &Field) -> Result<Val, Failure> {
        match &self.precision {
            Some(p) => Ok(val_from_str(p, k.rank())?),
            None => {
                let mut coords = vec![0; k.rank()];
                coords[0] = 20;
                Ok(Val::from_ints(&coords))
            }
        }
    }

    fn schottky(&self, input: &str) -> Result<Schottky, Failure> {
        let v = read_json(input)?;
        let data = SchottkyData::from_json(&v, self.field()?.as_ref())
            .map_err(|e| Failure::Input(e.to_string()))?;
        verify_ping_pong(data).map_err(|violations| {
            Failure::Negative(json!({
                "valid": false,
                "violations": violations.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            }))
        })
    }

    fn graph(&self, input: &str, k: &Field) -> Result<WeightedGraph, Failure> {
        Ok(WeightedGraph::from_json(&read_json(input)?, k.rank())?)
    }

    fn run(&self) -> Result<Output, Failure> {
        match &self.command {
            Command::Classify { input } => {
                let k = self.require_field()?;
                let g = matrix_from_json(&k, &read_json(input)?)?;
                let c = classify(&k, &g, &self.precision(&k)?)?;
                self.json_only(c.to_json(&k))
            }
            Command::Tree { input } => {
                let k = self.require_field()?;
                let l = PointSet::from_json(&k, &read_json(input)?)?;
                let t = build_tree(&k, &l).map_err(|e| Failure::Input(e.to_string()))?;
                Ok(match self.format {
                    Format::Json => Output::Json(t.to_json(&k)),
                    Format::Dot => Output::Dot(t.to_dot(&k)),
                })
            }
            Command::SchottkyVerify { input } => {
                let s = self.schottky(input)?;
                self.json_only(
                    json!({"valid": true, "genus": s.genus(), "rho": val_to_json(s.rho())}),
                )
            }
            Command::LimitSet { input } => {
                let s = self.schottky(input)?;
                if self.depth == 0 {
                    return Err(Failure::Input("--depth must be at least 1".into()));
                }
                let l = s.limit_set_sample(self.depth).map_err(schottky_failure)?;
                let prec = s.sample_precision(self.depth);
                let mut out = l.to_json(s.field());
                out["depth"] = json!(self.depth);
                out["precision"] = val_to_json(&prec);
                self.json_only(out)
            }
            Command::Quotient { input } => {
                let s = self.schottky(input)?;
                let q = s
                    .quotient_graph(None, self.depth, self.max_depth)
                    .map_err(schottky_failure)?;
                Ok(match self.format {
                    Format::Json => Output::Json(q.to_json()),
                    Format::Dot => Output::Dot(q.to_dot()),
                })
            }
            Command::Synthesize { input } => {
                let k = self.require_field()?;
                let g = self.graph(input, &k)?;
                let s = synthesize(&g, &k).map_err(synthesis_failure)?;
                self.json_only(s.to_json())
            }
            Command::RoundTrip { input } => {
                let k = self.require_field()?;
                let g = self.graph(input, &k)?;
                let r =
                    round_trip(&g, &k, self.depth, self.max_depth).map_err(synthesis_failure)?;
                if r.isomorphic() {
                    match self.format {
                        Format::Json => Ok(Output::Json(r.to_json())),
                        Format::Dot => Ok(Output::Dot(r.quotient.to_dot())),
                    }
                } else {
                    Err(Failure::Negative(r.to_json()))
                }
            }
        }
    }

    fn json_only(&self, v: Value) -> Result<Output, Failure> {
        match self.format {
            Format::Json => Ok(Output::Json(v)),
            Format::Dot => Err(Failure::Input(
                "UnsupportedFormat: this command only writes JSON".into(),
            )),
        }
    }
}

fn matrix_from_json(k: &Field, v: &Value) -> Result<Moebius, Failure> {
    if let Some(rows) = v.as_array() {
        let entries: Option<Vec<&Value>> = match rows.as_slice() {
            [r0, r1] => match (
                r0.as_array().map(Vec::as_slice),
                r1.as_array().map(Vec::as_slice),
            ) {
                (Some([a, b]), Some([c, d])) => Some(vec![a, b, c, d]),
                _ => None,
            },
            _ => None,
        };
        let e = entries.ok_or_else(|| Failure::Input("a matrix is [[a,b],[c,d]]".into()))?;
        let x = e
            .iter()
            .map(|x| k.from_json(x))
            .collect::<Result<Vec<_>, _>>()?;
        let [a, b, c, d]: [_; 4] = x.try_into().unwrap();
        return Ok(Moebius::new(k, a, b, c, d)?);
    }
    Ok(Moebius::from_json(k, v)?)
}

fn schottky_failure(e: SchottkyError) -> Failure {
    match e {
        SchottkyError::NotStabilized(n) => {
            Failure::Negative(json!({"stable": false, "error": e.to_string(), "max_depth": n}))
        }
        e => Failure::Input(e.to_string()),
    }
}

fn synthesis_failure(e: SynthesisError) -> Failure {
    match e {
        SynthesisError::Schottky(s) => schottky_failure(s),
        SynthesisError::Verification(_) => Failure::Negative(json!({"error": e.to_string()})),
        e => Failure::Input(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.run() {
        Ok(Output::Json(v)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("JSON values serialize")
            );
            ExitCode::SUCCESS
        }
        Ok(Output::Dot(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(Failure::Negative(v)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("JSON values serialize")
            );
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("{}", json!({"error": msg}));
            ExitCode::from(2)
        }
    }
}
