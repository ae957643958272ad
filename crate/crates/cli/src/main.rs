//! `hyperlat`: command-line front end for the lattice library.
//!
//! Every command prints one JSON document `{schema, command, result}` unless
//! another format is asked for. Errors go to stderr as `{schema, error}`.
//! Exit codes: 0 success, 1 failed check, 2 usage error, 3 resource exhausted.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hyperlat::cohomring::{chern_inverse, restriction_check, secant_table, Ring};
use hyperlat::cubic4::{self, PlaneType};
use hyperlat::dynkin::build_diagram;
use hyperlat::lattice::spec::parse_spec;
use hyperlat::linalg::{Int, Rat};
use hyperlat::reproduce::{self, Options};
use hyperlat::roots::{roots_of, vectors_json};
use hyperlat::rootsys::{simple_system, type_of_roots};
use hyperlat::strata::{build_strata, dim_formula_check};
use hyperlat::vinberg::{self, parse_vector, Status};
use hyperlat::{Error, GramLattice};

const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "hyperlat",
    version,
    about = "Exact lattice, root system and Vinberg computations"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Node budget for each lattice point enumeration.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank, signature, determinant and discriminant group of a lattice.
    LatInfo {
        /// Lattice spec such as `2E8+2U+3I`, or a Gram matrix as JSON rows.
        lattice: String,
    },
    /// All roots of a positive definite lattice and their type.
    Roots { lattice: String },
    /// Vinberg's algorithm on a hyperbolic lattice.
    Vinberg {
        lattice: String,
        /// Controlling vector, comma separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        v0: String,
        /// Largest weight to examine, e.g. `200` or `301/2`.
        #[arg(long, default_value_t = vinberg::DEFAULT_MAX_WEIGHT.to_string())]
        max_weight: String,
    },
    /// Root system of `K⊥/K` for the isotropic planes of `Λ_o`.
    ClassifyIsotropic {
        /// One of 2E8, D16, A17, E7+D10, 3E6, D7+A11 (all six when omitted).
        #[arg(long = "type")]
        plane: Option<String>,
    },
    /// The cubic-fourfold lattices.
    Cubic4 {
        #[command(subcommand)]
        command: Cubic4Command,
    },
    /// The boundary strata and their incidence scheme.
    Strata,
    /// Intersection numbers on the blown-up secant variety.
    Cohom {
        #[command(subcommand)]
        command: CohomCommand,
    },
    /// Runs the acceptance suite.
    Reproduce {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Only these criteria (repeatable).
        #[arg(long)]
        criterion: Vec<u8>,
        #[arg(long, default_value_t = vinberg::DEFAULT_MAX_WEIGHT.to_string())]
        max_weight: String,
    },
}

#[derive(Debug, Subcommand)]
enum Cubic4Command {
    /// The lattices `Λ`, `Λ_o`, `Λ₁` and the vectors `η`, `hᵢ`.
    Setup,
    /// Checks whether a vector of `Λ_o` is special.
    Special {
        #[arg(long, allow_hyphen_values = true)]
        check: String,
    },
    /// The six isotropic planes.
    Planes {
        /// Also compute the root system of each `K⊥/K`.
        #[arg(long)]
        classify: bool,
    },
    /// Which type II strata meet the arrangement.
    Arrangement,
}

#[derive(Debug, Subcommand)]
enum CohomCommand {
    SecantTable,
}

/// A failure with its exit code.
struct Failure {
    exit: u8,
    code: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::ResourceExhausted(_) | Error::Unbounded(_) | Error::Overflow(_) => 3,
            Error::Verification(_) => 1,
            _ => 2,
        };
        Failure {
            exit,
            code: e.code(),
            message: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        exit: 2,
        code: "usage",
        message: msg.into(),
    }
}

/// What a command produced: a JSON result, optional renderings, and an exit code.
struct Output {
    result: Value,
    dot: Option<String>,
    text: Option<String>,
    exit: u8,
}

impl Output {
    fn json(result: Value) -> Self {
        Output {
            result,
            dot: None,
            text: None,
            exit: 0,
        }
    }
}

fn parse_lattice(s: &str) -> Result<GramLattice, Failure> {
    if s.trim_start().starts_with('[') {
        let rows: Vec<Vec<i64>> =
            serde_json::from_str(s).map_err(|e| usage(format!("gram matrix: {e}")))?;
        return Ok(GramLattice::from_integer_gram(&rows)?);
    }
    Ok(parse_spec(s)?)
}

fn parse_rat(s: &str) -> Result<Rat, Failure> {
    s.trim()
        .parse::<Rat>()
        .map_err(|_| usage(format!("not a rational number: {s:?}")))
}

fn signature_json(l: &GramLattice) -> Value {
    let (p, n, z) = l.signature();
    json!({ "positive": p, "negative": n, "null": z })
}

fn lat_info(l: &GramLattice) -> Result<Output, Failure> {
    let mut v = json!({
        "gram": l.to_json(),
        "rank": l.rank(),
        "signature": signature_json(l),
        "det": l.det().to_string(),
        "integral": l.is_integral(),
    });
    if l.is_integral() {
        v["even"] = json!(l.is_even()?);
    }
    if l.is_nondegenerate() {
        let d = l.discriminant_group()?;
        v["discriminant"] = json!({
            "invariant_factors": d.invariant_factors.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "order": d.order().to_string(),
            "qform": d.qform.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        });
    }
    let text = format!(
        "rank {}\nsignature {:?}\ndet {}\n",
        l.rank(),
        l.signature(),
        l.det()
    );
    Ok(Output {
        text: Some(text),
        ..Output::json(v)
    })
}

fn roots_cmd(l: &GramLattice) -> Result<Output, Failure> {
    let roots = roots_of(l, None)?;
    let t = type_of_roots(l, &roots)?;
    let vs: Vec<Vec<Rat>> = roots.iter().map(|r| r.vector.clone()).collect();
    let simple = simple_system(l, &vs)?;
    let d = build_diagram(l, &simple)?;
    let v = json!({
        "type": t.to_string(),
        "components": t.to_json(),
        "count": roots.len(),
        "norms": t.counts.iter().map(|(n, c)| json!({ "norm": n.to_string(), "count": c })).collect::<Vec<_>>(),
        "roots": vectors_json(&vs),
        "simple": vectors_json(&simple),
    });
    let text = format!("{} ({} roots)\n", t, roots.len());
    Ok(Output {
        result: v,
        dot: Some(d.to_dot("simple roots")),
        text: Some(text),
        exit: 0,
    })
}

fn vinberg_cmd(
    l: &GramLattice,
    v0: &str,
    max_weight: &str,
    budget: Option<u64>,
) -> Result<Output, Failure> {
    let v0: Vec<Int> = parse_vector(v0)?;
    let w = parse_rat(max_weight)?;
    let run = match budget {
        Some(b) => vinberg::run_vinberg_budget(l, &v0, &w, b)?,
        None => vinberg::run_vinberg(l, &v0, &w)?,
    };
    let mut v = run.to_json();
    v["diagram"] = run.diagram()?.to_json();
    let counts: Vec<String> = run
        .count_by_norm()
        .iter()
        .map(|(n, c)| format!("{c} of norm {n}"))
        .collect();
    let text = format!("{}: {}\n", run.status, counts.join(", "));
    let exit = if run.status == Status::BudgetExhausted {
        3
    } else {
        0
    };
    Ok(Output {
        result: v,
        dot: Some(run.to_dot()?),
        text: Some(text),
        exit,
    })
}

fn plane_types(filter: Option<&str>) -> Result<Vec<PlaneType>, Failure> {
    match filter {
        Some(t) => Ok(vec![PlaneType::parse(t)?]),
        None => Ok(PlaneType::ALL.to_vec()),
    }
}

fn planes(types: &[PlaneType], classify: bool) -> Result<Output, Failure> {
    let s = cubic4::build_setup()?;
    let mut out = Vec::new();
    let mut text = String::new();
    for &t in types {
        let k = cubic4::isotropic_plane_from_affine(&s, t)?;
        let mut v = json!({
            "type": t.label(),
            "basis": k.basis.iter().map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
        if classify {
            let c = cubic4::classify_isotropic_plane(&s, &k)?;
            text.push_str(&format!("{}: {}\n", t.label(), c.system));
            v["classification"] = c.to_json();
        }
        out.push(v);
    }
    Ok(Output {
        text: Some(text),
        ..Output::json(Value::Array(out))
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::LatInfo { lattice } => lat_info(&parse_lattice(lattice)?),
        Command::Roots { lattice } => roots_cmd(&parse_lattice(lattice)?),
        Command::Vinberg {
            lattice,
            v0,
            max_weight,
        } => vinberg_cmd(&parse_lattice(lattice)?, v0, max_weight, cli.budget),
        Command::ClassifyIsotropic { plane } => planes(&plane_types(plane.as_deref())?, true),
        Command::Cubic4 { command } => match command {
            Cubic4Command::Setup => Ok(Output::json(cubic4::setup_json(&cubic4::build_setup()?))),
            Cubic4Command::Special { check } => {
                let v = parse_vector(check)?;
                let s = cubic4::build_setup()?;
                let special = cubic4::is_special(&s, &v)?;
                let mut r = json!({ "vector": check, "special": special, "norm": s.lambda_o.norm_z(&v).to_string() });
                if special {
                    r["divisor"] = json!(s.lambda_o.divisor(&v)?.to_string());
                    r["short_root"] = cubic4::short_root(&s, &v)?.to_json();
                }
                Ok(Output {
                    exit: if special { 0 } else { 1 },
                    ..Output::json(r)
                })
            }
            Cubic4Command::Planes { classify } => planes(&PlaneType::ALL, *classify),
            Cubic4Command::Arrangement => {
                let s = cubic4::build_setup()?;
                let mut out = Vec::new();
                let mut text = String::new();
                for t in PlaneType::ALL {
                    let inc = cubic4::stratum_meets_arrangement(&s, t)?;
                    text.push_str(&format!("{}: {}\n", t.label(), inc.meets));
                    out.push(inc.to_json());
                }
                Ok(Output {
                    text: Some(text),
                    ..Output::json(Value::Array(out))
                })
            }
        },
        Command::Strata => {
            let s = build_strata();
            let mut v = s.to_json();
            v["dim_formula"] = json!(dim_formula_check(&s)
                .iter()
                .map(|r| json!({ "label": r.label, "root_rank": r.root_rank, "expected": r.expected, "listed": r.listed }))
                .collect::<Vec<_>>());
            let text: String = s
                .nodes
                .iter()
                .map(|n| format!("{} dim {}\n", n.label, n.dim))
                .collect();
            Ok(Output {
                result: v,
                dot: Some(s.to_dot()),
                text: Some(text),
                exit: 0,
            })
        }
        Command::Cohom {
            command: CohomCommand::SecantTable,
        } => {
            let mut v = secant_table()?.to_json();
            v["chern_inverse"] = json!({
                "1": chern_inverse(Ring::YTilde, 1).to_string(),
                "3": chern_inverse(Ring::YTilde, 3).to_string(),
            });
            let restriction = restriction_check();
            v["restriction"] = json!(restriction);
            Ok(Output {
                exit: if restriction { 0 } else { 1 },
                ..Output::json(v)
            })
        }
        Command::Reproduce {
            seed,
            criterion,
            max_weight,
        } => {
            if let Some(c) = criterion
                .iter()
                .find(|&&c| c == 0 || c > reproduce::CRITERIA)
            {
                return Err(usage(format!("no criterion {c}")));
            }
            let opts = Options {
                seed: *seed,
                max_weight: parse_rat(max_weight)?,
                ..Options::default()
            };
            let report = reproduce::reproduce(opts, criterion);
            let text: String = report
                .claims
                .iter()
                .map(|c| {
                    format!(
                        "{} {:<4} {}\n",
                        c.id,
                        if c.passed { "ok" } else { "FAIL" },
                        c.statement
                    )
                })
                .collect();
            let exit = if report.passed() { 0 } else { 1 };
            Ok(Output {
                result: report.to_json(),
                dot: None,
                text: Some(text),
                exit,
            })
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::LatInfo { .. } => "lat-info",
        Command::Roots { .. } => "roots",
        Command::Vinberg { .. } => "vinberg",
        Command::ClassifyIsotropic { .. } => "classify-isotropic",
        Command::Cubic4 { .. } => "cubic4",
        Command::Strata => "strata",
        Command::Cohom { .. } => "cohom",
        Command::Reproduce { .. } => "reproduce",
    }
}

fn fail(f: &Failure) -> ExitCode {
    let v = json!({ "schema": SCHEMA, "error": { "code": f.code, "message": f.message } });
    eprintln!("{v}");
    ExitCode::from(f.exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            return fail(&usage(e.to_string().trim().to_string()));
        }
    };
    let out = match run(&cli) {
        Ok(o) => o,
        Err(f) => return fail(&f),
    };
    let rendered = match cli.format {
        Format::Json => {
            let v = json!({ "schema": SCHEMA, "command": command_name(&cli.command), "result": out.result });
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Format::Dot => match out.dot {
            Some(d) => d,
            None => {
                return fail(&usage(format!(
                    "{} has no dot output",
                    command_name(&cli.command)
                )))
            }
        },
        Format::Text => match out.text {
            Some(t) => t,
            None => serde_json::to_string_pretty(&out.result).expect("serializable") + "\n",
        },
    };
    // A closed pipe downstream is not our failure.
    let _ = std::io::stdout().write_all(rendered.as_bytes());
    ExitCode::from(out.exit)
}
