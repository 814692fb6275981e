//! `gradings`: construct, verify, compare, recognize, key and enumerate
//! group gradings from JSON.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use gradings::classify::{canonical_key, iso_tuples, recognize_with_seed, InvariantTuple, InvariantWire, Witness, DEFAULT_RECOGNITION_SEED};
use gradings::enumerate::{EnumerationRequest, MAX_GROUP, MAX_N};
use gradings::graded_matrix::{construct_matrix_grading, verify, GradedAlgebra, VerificationReport};
use gradings::involution::{build_involution, verify_involution, GradedAlgebraWithAntiAut};
use gradings::lie_grading::construct_lie;
use gradings::GradingError;

const SCHEMA_VERSION: &str = "v1";

#[derive(Parser)]
#[command(name = "gradings", version, about = "Group gradings on matrix algebras and classical Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand)]
enum Command {
    /// Build the graded algebra of an invariant tuple.
    Construct,
    /// Check the grading (and involution) axioms of an algebra file.
    Verify,
    /// Decide isomorphism of two invariant tuples.
    Iso,
    /// Recover the canonical invariants of a graded M_n.
    Recognize,
    /// Print the canonical key of an invariant tuple.
    Key,
    /// Tabulate isomorphism classes for an enumeration request.
    Enum {
        /// Print per-family counts instead of the JSON table.
        #[arg(long)]
        summary: bool,
    },
}

#[derive(Args)]
struct Options {
    /// Input JSON file; repeat for iso; `-` reads stdin.
    #[arg(long = "in", global = true)]
    inputs: Vec<PathBuf>,
    /// Inline JSON input, used after the --in files.
    #[arg(long = "json", global = true)]
    inline: Vec<String>,
    /// Output file (default stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Numeric tolerance for recognition.
    #[arg(long, default_value_t = 1e-8, global = true)]
    tol: f64,
    /// Seed for randomized steps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest matrix size accepted.
    #[arg(long, default_value_t = MAX_N, global = true)]
    max_n: usize,
    /// Largest group order accepted by enum.
    #[arg(long, default_value_t = MAX_GROUP, global = true)]
    max_group: u64,
}

enum Failure {
    Usage(String),
    Grading(GradingError),
    Io(String),
}

impl From<GradingError> for Failure {
    fn from(e: GradingError) -> Self {
        Failure::Grading(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Grading(GradingError::Refused(_)) => 3,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "schema",
            Failure::Io(_) => "io",
            Failure::Grading(e) => match e {
                GradingError::DivisionByZero => "division_by_zero",
                GradingError::ConductorMismatch(..) => "conductor_mismatch",
                GradingError::NotInGroup(..) => "not_in_group",
                GradingError::InfiniteOrder(_) => "infinite_order",
                GradingError::NotOrderTwo(_) => "not_order_two",
                GradingError::NotElementaryTwo => "not_elementary_two",
                GradingError::NotInSubgroup(_) => "not_in_subgroup",
                GradingError::Degenerate => "degenerate",
                GradingError::InvalidBicharacter(_) => "invalid_bicharacter",
                GradingError::InvalidParams(_) => "invalid_params",
                GradingError::Inconsistent(_) => "inconsistent",
                GradingError::Refused(_) => "refused",
                GradingError::Recognition(_) => "recognition",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Grading(e) => e.to_string(),
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
    exit_code: u8,
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    schema: &'a str,
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct IsoResult {
    isomorphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
}

/// Output text and exit code of a successful run.
struct Outcome {
    text: String,
    code: u8,
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("outputs serialize");
    s.push('\n');
    s
}

fn read_inputs(opts: &Options) -> Result<Vec<String>, Failure> {
    let mut out = vec![];
    for p in &opts.inputs {
        if p.as_os_str() == "-" {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
            out.push(s);
        } else {
            out.push(fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?);
        }
    }
    out.extend(opts.inline.iter().cloned());
    Ok(out)
}

fn exactly<const K: usize>(inputs: Vec<String>) -> Result<[String; K], Failure> {
    let n = inputs.len();
    inputs.try_into().map_err(|_| Failure::Usage(format!("expected {K} input(s), got {n}")))
}

fn parse<T: serde::de::DeserializeOwned>(s: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::Usage(format!("invalid {what}: {e}")))
}

fn parse_tuple(s: &str, opts: &Options) -> Result<InvariantTuple, Failure> {
    let t = InvariantTuple::from_wire(&parse::<InvariantWire>(s, "invariant tuple")?)?;
    if t.n() > opts.max_n {
        return Err(Failure::Usage(format!("n = {} exceeds --max-n {}", t.n(), opts.max_n)));
    }
    Ok(t)
}

fn construct(t: &InvariantTuple) -> Result<String, Failure> {
    Ok(match t {
        InvariantTuple::Matrix(p) => json(&construct_matrix_grading(p)?),
        InvariantTuple::MatrixWithInvolution(p) => json(&build_involution(p)?),
        InvariantTuple::Lie(p) => json(&construct_lie(p)?),
    })
}

fn verify_text(s: &str) -> Result<Outcome, Failure> {
    let v: Value = parse(s, "algebra")?;
    let report: VerificationReport = if v.get("phi").is_some() {
        let pair: GradedAlgebraWithAntiAut = parse(s, "algebra with anti-automorphism")?;
        let mut r = verify(&pair.algebra);
        if r.passed {
            r = verify_involution(&pair);
        }
        r
    } else {
        verify(&parse::<GradedAlgebra>(s, "algebra")?)
    };
    Ok(Outcome { code: if report.passed { 0 } else { 2 }, text: json(&report) })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let opts = &cli.opts;
    let inputs = read_inputs(opts)?;
    let ok = |text| Ok(Outcome { text, code: 0 });
    match &cli.command {
        Command::Construct => {
            let [s] = exactly::<1>(inputs)?;
            ok(construct(&parse_tuple(&s, opts)?)?)
        }
        Command::Verify => {
            let [s] = exactly::<1>(inputs)?;
            verify_text(&s)
        }
        Command::Iso => {
            let [a, b] = exactly::<2>(inputs)?;
            let w = iso_tuples(&parse_tuple(&a, opts)?, &parse_tuple(&b, opts)?)?;
            ok(json(&IsoResult { isomorphic: w.is_some(), witness: w }))
        }
        Command::Recognize => {
            let [s] = exactly::<1>(inputs)?;
            let a: GradedAlgebra = parse(&s, "algebra")?;
            if a.n > opts.max_n {
                return Err(Failure::Usage(format!("n = {} exceeds --max-n {}", a.n, opts.max_n)));
            }
            let r = recognize_with_seed(&a, opts.tol, opts.seed.unwrap_or(DEFAULT_RECOGNITION_SEED))?;
            ok(json(&InvariantTuple::Matrix(r.params).to_wire()))
        }
        Command::Key => {
            let [s] = exactly::<1>(inputs)?;
            ok(format!("{}\n", canonical_key(&parse_tuple(&s, opts)?)?))
        }
        Command::Enum { summary } => {
            let [s] = exactly::<1>(inputs)?;
            let req: EnumerationRequest = parse(&s, "enumeration request")?;
            if req.n > opts.max_n {
                return Err(Failure::Usage(format!("n = {} exceeds --max-n {}", req.n, opts.max_n)));
            }
            match req.group.order() {
                Some(o) if o <= opts.max_group => {}
                Some(o) => return Err(Failure::Usage(format!("|G| = {o} exceeds --max-group {}", opts.max_group))),
                None => return Err(Failure::Grading(GradingError::InvalidParams("enumeration needs a finite group".into()))),
            }
            let table = req.run()?;
            ok(if *summary { table.summary() } else { json(&table) })
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let f = Failure::Usage(e.to_string());
            print!("{}", json(&ErrorObject { schema: SCHEMA_VERSION, error: ErrorBody { kind: f.kind(), message: f.message(), exit_code: 1 } }));
            return ExitCode::from(1);
        }
    };
    let result = run(&cli).and_then(|o| emit(&o.text, cli.opts.out.as_ref()).map(|_| o.code));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let code = f.code();
            print!("{}", json(&ErrorObject { schema: SCHEMA_VERSION, error: ErrorBody { kind: f.kind(), message: f.message(), exit_code: code } }));
            ExitCode::from(code)
        }
    }
}
