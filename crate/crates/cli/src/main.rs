use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use zariski_core::arith::{int, parse_rational, QMatrix};
use zariski_core::bounds::{chain_bounds, theorem1_bound, BoundConfig, LogBase};
use zariski_core::closure::{
    auto_closure_with, closure_unipotent_product, invariants_up_to_degree_with,
    matrix_to_strings, schreier_generators, AutoConfig, ClosureConfig, GeneratorSet,
};
use zariski_core::frontend::{
    matrices_from_json, matrix_from_json, matrix_text, strongest_invariant_with, AffineProgram,
    DecompositionJson, InvariantReport,
};
use zariski_core::polynomials::{gl_variable_names, poly_to_text, IdealJson};
use zariski_core::relations::{rational_relation_lattice, EigenSpec, RelationReport};
use zariski_core::structure::jordan_chevalley;
use zariski_core::Error;

#[derive(Parser)]
#[command(name = "zariski", version, about = "Zariski closures of rational matrix groups")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Base {
    Two,
    E,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Member {
    /// Every element.
    All,
    /// Only the identity.
    Identity,
    /// Determinant one.
    DetOne,
}

#[derive(Subcommand)]
enum Command {
    /// Degree-bounded vanishing ideal of the group generated by a set.
    #[command(group(ArgGroup::new("mode").required(true).args(["degree", "auto"])))]
    Closure {
        /// Generator set JSON.
        generators: PathBuf,
        #[arg(long)]
        degree: Option<u32>,
        /// Raise the degree until the ideal stabilizes.
        #[arg(long)]
        auto: bool,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        /// Assert that the degree bounds the closure degree.
        #[arg(long)]
        degree_complete: bool,
        /// Refuse runs with more monomials than this.
        #[arg(long, default_value_t = 1000)]
        max_monomials: usize,
    },
    /// Polynomial invariants of an affine program.
    Invariant {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        degree: u32,
    },
    /// Jordan–Chevalley decomposition of a matrix.
    Decompose {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Multiplicative relations among eigenvalues.
    #[command(group(ArgGroup::new("input").required(true).args(["eigenvalues", "matrix"])))]
    Relations {
        /// Comma-separated rationals, e.g. `2,1/2`.
        #[arg(long)]
        eigenvalues: Option<String>,
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Closure of a product of one-parameter unipotent subgroups.
    UnipotentClosure {
        #[arg(long)]
        matrices: PathBuf,
    },
    /// Degree bound for the closure of a generated group.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        height: u64,
        #[arg(long)]
        gens: u64,
        #[arg(long, default_value = "1")]
        constant: String,
        #[arg(long, value_enum, default_value_t = Base::Two)]
        log_base: Base,
    },
    /// Bounds on chains of closures of generated subgroups.
    ChainBounds {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        field_degree: u64,
    },
    /// Short products of generators lying in a subgroup.
    Schreier {
        #[arg(long)]
        generators: PathBuf,
        #[arg(long)]
        index_bound: usize,
        #[arg(long)]
        length_cap: Option<usize>,
        #[arg(long, value_enum, default_value_t = Member::DetOne)]
        member: Member,
        /// Subgroup given as a vanishing ideal (overrides --member).
        #[arg(long)]
        member_ideal: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        max_products: usize,
    },
}

/// What a command produced: a JSON payload and its text rendering.
struct Output {
    json: Value,
    text: String,
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn ideal_text(js: &IdealJson) -> Result<String, Error> {
    let i = js.to_ideal()?;
    let mut out = String::new();
    for g in i.generators() {
        out.push_str(&format!("  {}\n", poly_to_text(g, &js.variables)));
    }
    Ok(out)
}

fn run(cmd: Command) -> Result<Output, Error> {
    match cmd {
        Command::Closure {
            generators,
            degree,
            auto,
            max_degree,
            degree_complete,
            max_monomials,
        } => {
            let s = GeneratorSet::from_json(&read(&generators)?)?;
            let cfg = ClosureConfig {
                degree_complete,
                max_monomials,
                ..ClosureConfig::default()
            };
            let r = if auto {
                let acfg = AutoConfig {
                    closure: cfg,
                    ..AutoConfig::default()
                };
                auto_closure_with(&s, max_degree, &acfg)?
            } else {
                invariants_up_to_degree_with(&s, degree.unwrap_or(1), &cfg)?
            };
            let rep = r.report(&cfg.gb)?;
            Ok(Output {
                text: rep.to_text()?,
                json: to_value(&rep),
            })
        }
        Command::Invariant { program, degree } => {
            let p = AffineProgram::from_json(&read(&program)?)?;
            let r = strongest_invariant_with(&p, degree, &ClosureConfig::default())?;
            let rep = InvariantReport::new(&r);
            Ok(Output {
                text: rep.to_text(),
                json: to_value(&rep),
            })
        }
        Command::Decompose { matrix } => {
            let g = matrix_from_json(&read(&matrix)?)?;
            let rep = DecompositionJson::new(&jordan_chevalley(&g)?);
            Ok(Output {
                text: rep.to_text(),
                json: to_value(&rep),
            })
        }
        Command::Relations { eigenvalues, matrix } => {
            let spec = match (eigenvalues, matrix) {
                (Some(e), _) => EigenSpec::new(
                    e.split(',')
                        .map(|s| parse_rational(s.trim()))
                        .collect::<Result<_, _>>()?,
                )?,
                (None, Some(path)) => EigenSpec::of_matrix(&matrix_from_json(&read(&path)?)?)?,
                (None, None) => unreachable!("clap requires one input"),
            };
            let lattice = rational_relation_lattice(&spec)?;
            let rep = RelationReport::new(&spec, &lattice);
            let mut text = format!("eigenvalues = {}\nrank = {}\nbasis:\n", rep.eigenvalues.join(", "), rep.basis.len());
            for (row, b) in rep.basis.iter().zip(&rep.binomials) {
                text.push_str(&format!("  ({})  {b}\n", row.join(", ")));
            }
            Ok(Output {
                text,
                json: to_value(&rep),
            })
        }
        Command::UnipotentClosure { matrices } => {
            let hs = matrices_from_json(&read(&matrices)?)?;
            let n = hs
                .first()
                .map(QMatrix::rows)
                .ok_or_else(|| Error::InvalidArgument("need at least one matrix".into()))?;
            let ideal = closure_unipotent_product(n, &hs)?;
            let js = IdealJson::from_ideal(&ideal, &gl_variable_names(n));
            Ok(Output {
                text: ideal_text(&js)?,
                json: to_value(&js),
            })
        }
        Command::Bounds {
            n,
            height,
            gens,
            constant,
            log_base,
        } => {
            let cfg = BoundConfig {
                constant: parse_rational(&constant)?,
                log_base: match log_base {
                    Base::Two => LogBase::Two,
                    Base::E => LogBase::E,
                },
                ..BoundConfig::default()
            };
            let rep = theorem1_bound(n, height, gens, &cfg)?;
            Ok(Output {
                text: rep.to_text(),
                json: to_value(&rep),
            })
        }
        Command::ChainBounds { n, field_degree } => {
            let rep = chain_bounds(n, field_degree, &BoundConfig::default())?;
            Ok(Output {
                text: rep.to_text(),
                json: to_value(&rep),
            })
        }
        Command::Schreier {
            generators,
            index_bound,
            length_cap,
            member,
            member_ideal,
            max_products,
        } => {
            let s = GeneratorSet::from_json(&read(&generators)?)?;
            let subgroup = match member_ideal {
                Some(path) => {
                    let js: IdealJson = serde_json::from_str(&read(&path)?)
                        .map_err(|e| Error::Parse(e.to_string()))?;
                    Some(js.to_ideal()?)
                }
                None => None,
            };
            let pred = |g: &QMatrix| match &subgroup {
                Some(i) => zariski_core::closure::gl_embed(g)
                    .map(|p| i.vanishes_at(p.coords()))
                    .unwrap_or(false),
                None => match member {
                    Member::All => true,
                    Member::Identity => g.is_identity(),
                    Member::DetOne => g.det().map(|d| d == int(1)).unwrap_or(false),
                },
            };
            if let Some(i) = &subgroup {
                if i.arity() != s.arity() {
                    return Err(Error::DimensionMismatch("subgroup ideal has the wrong arity".into()));
                }
            }
            let out = schreier_generators(&s, pred, index_bound, length_cap, max_products)?;
            let mats: Vec<Vec<Vec<String>>> = out.iter().map(matrix_to_strings).collect();
            let mut text = format!("{} elements\n", mats.len());
            for m in &mats {
                text.push_str(&format!("  {}\n", matrix_text(m)));
            }
            Ok(Output {
                text,
                json: json!({ "n": s.n(), "generators": mats }),
            })
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit(_) | Error::NoStabilization { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json") + "\n",
                Format::Text => out.text,
            };
            // a closed pipe downstream is not our failure
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
