//! chevkit: exceptional Chevalley Lie algebras over prime fields.
//!
//! Subcommands expose each pipeline stage: root systems, integer structure
//! constants and their reductions, weight-block decompositions, Killing-form
//! singularities, and the derivation-algebra results table.

use std::collections::HashMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chevkit::cartan_decomp::decompose;
use chevkit::chevalley::{structure_constants, ChevalleyBasisZ, LieAlgebraFp};
use chevkit::derivations::{analyze, DerivationReport, Method};
use chevkit::genbasis::{
    abstract_from_matrix_basis, basis_builder, generator_source, load_generators, GeneratorFile,
};
use chevkit::gfp_linalg::is_prime;
use chevkit::liecore::killing_singular_primes;
use chevkit::rootsys::{LieType, RootSystem};

mod selftest;

#[derive(Parser)]
#[command(
    name = "chevkit",
    version,
    about = "Exceptional Chevalley Lie algebras over F_p: dimensions, Killing forms, derivation algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the derivation-algebra results table.
    Table(TableArgs),
    /// List the primes at which the Killing form becomes singular.
    Killing(KillingArgs),
    /// Run the built-in invariant suites.
    Selftest,
    /// Dump a root system, one root per line in simple-root coordinates.
    Roots {
        #[arg(long)]
        algebra: String,
    },
    /// Dump structure constants as `i j k c` lines (integer table, or
    /// residues mod p when --char is given).
    Constants {
        #[arg(long)]
        algebra: String,
        #[arg(long = "char")]
        characteristic: Option<u64>,
    },
    /// Print the weight-block decomposition relative to the Cartan part.
    Decomp {
        #[arg(long)]
        algebra: String,
        #[arg(long = "char")]
        characteristic: u64,
    },
}

#[derive(Args)]
struct TableArgs {
    /// g2, f4, e6, e7, e8 or all.
    #[arg(long, default_value = "all")]
    algebra: String,
    /// A prime, or all-relevant (2,3 — plus 5 for e8).
    #[arg(long = "char", default_value = "all-relevant")]
    characteristic: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = PipelineArg::Chevalley)]
    pipeline: PipelineArg,
    #[arg(long, value_enum, default_value_t = OutputArg::Table)]
    output: OutputArg,
    /// Allow the naive full derivation system above its dimension cap.
    #[arg(long = "allow-large-naive")]
    allow_large_naive: bool,
}

#[derive(Args)]
struct KillingArgs {
    #[arg(long, default_value = "all")]
    algebra: String,
    #[arg(long = "primes-up-to", default_value_t = 50)]
    primes_up_to: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Full,
    Vspace,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PipelineArg {
    Chevalley,
    Generators,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Table,
    Json,
    Csv,
}

enum CliError {
    /// Bad configuration: exit code 2.
    Config(String),
    /// Internal cross-check or computation failure: exit code 1.
    Failure(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Table(args) => run_table(&args),
        Command::Killing(args) => run_killing(&args),
        Command::Selftest => selftest::run(),
        Command::Roots { algebra } => {
            let ty = parse_one_algebra(&algebra)?;
            print!("{}", RootSystem::new(ty).dump());
            Ok(())
        }
        Command::Constants {
            algebra,
            characteristic,
        } => {
            let ty = parse_one_algebra(&algebra)?;
            let cb = constants_for(ty)?;
            match characteristic {
                None => print!("{}", cb.dump()),
                Some(p) => {
                    let l = cb
                        .reduce_mod_p(p)
                        .map_err(|e| CliError::Config(e.to_string()))?;
                    print!("{}", l.dump());
                }
            }
            Ok(())
        }
        Command::Decomp {
            algebra,
            characteristic,
        } => {
            let ty = parse_one_algebra(&algebra)?;
            let cb = constants_for(ty)?;
            let l = cb
                .reduce_mod_p(characteristic)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let d = decompose(&l).map_err(|e| CliError::Failure(e.to_string()))?;
            print!("{}", d.report());
            Ok(())
        }
    }
}

fn parse_one_algebra(s: &str) -> Result<LieType, CliError> {
    s.parse().map_err(CliError::Config)
}

fn parse_algebras(s: &str) -> Result<Vec<LieType>, CliError> {
    if s.eq_ignore_ascii_case("all") {
        Ok(LieType::ALL.to_vec())
    } else {
        Ok(vec![parse_one_algebra(s)?])
    }
}

fn parse_chars(s: &str, ty: LieType) -> Result<Vec<u64>, CliError> {
    if s.eq_ignore_ascii_case("all-relevant") {
        Ok(ty.relevant_primes().to_vec())
    } else {
        let p: u64 = s.parse().map_err(|_| {
            CliError::Config(format!(
                "--char must be a prime or 'all-relevant', got '{s}'"
            ))
        })?;
        if !is_prime(p) {
            return Err(CliError::Config(format!("{p} is not prime")));
        }
        Ok(vec![p])
    }
}

fn constants_for(ty: LieType) -> Result<ChevalleyBasisZ, CliError> {
    structure_constants(&RootSystem::new(ty)).map_err(|e| CliError::Failure(e.to_string()))
}

fn generator_algebra(ty: LieType, p: u64) -> Result<LieAlgebraFp, CliError> {
    let which = match ty {
        LieType::E6 => GeneratorFile::E6,
        LieType::E7 => GeneratorFile::E7Alt,
        other => {
            return Err(CliError::Config(format!(
                "the generators pipeline covers e6 and e7 only, not {other}"
            )))
        }
    };
    let text = generator_source(which).map_err(|e| CliError::Failure(e.to_string()))?;
    let gens = load_generators(&text, p).map_err(|e| CliError::Failure(e.to_string()))?;
    let basis =
        basis_builder(&gens, Some(2 * ty.dim())).map_err(|e| CliError::Failure(e.to_string()))?;
    if basis.len() != ty.dim() {
        return Err(CliError::Failure(format!(
            "generator basis for {ty} has {} elements, expected {}",
            basis.len(),
            ty.dim()
        )));
    }
    abstract_from_matrix_basis(&basis).map_err(|e| CliError::Failure(e.to_string()))
}

fn run_table(args: &TableArgs) -> Result<(), CliError> {
    let algebras = parse_algebras(&args.algebra)?;
    if args.pipeline == PipelineArg::Generators {
        if let Some(bad) = algebras
            .iter()
            .find(|t| !matches!(t, LieType::E6 | LieType::E7))
        {
            return Err(CliError::Config(format!(
                "the generators pipeline covers e6 and e7 only, not {bad}"
            )));
        }
        if matches!(args.method, MethodArg::Vspace | MethodArg::Both) {
            return Err(CliError::Config(
                "generator bases carry no designated Cartan part; use --method full or auto".into(),
            ));
        }
    }
    let mut cache: HashMap<LieType, ChevalleyBasisZ> = HashMap::new();
    let mut reports: Vec<DerivationReport> = Vec::new();
    for ty in algebras {
        for p in parse_chars(&args.characteristic, ty)? {
            let l = match args.pipeline {
                PipelineArg::Chevalley => {
                    if let std::collections::hash_map::Entry::Vacant(slot) = cache.entry(ty) {
                        slot.insert(constants_for(ty)?);
                    }
                    cache[&ty]
                        .reduce_mod_p(p)
                        .map_err(|e| CliError::Config(e.to_string()))?
                }
                PipelineArg::Generators => generator_algebra(ty, p)?,
            };
            let method = match (args.method, args.pipeline) {
                (MethodArg::Full, _) | (MethodArg::Auto, PipelineArg::Generators) => Method::Full,
                (MethodArg::Vspace, _) => Method::Vspace,
                (MethodArg::Both, _) => Method::Both,
                (MethodArg::Auto, PipelineArg::Chevalley) => Method::auto_for_dim(l.dim()),
            };
            let report = analyze(ty, &l, method, args.allow_large_naive)
                .map_err(|e| CliError::Failure(e.to_string()))?;
            reports.push(report);
        }
    }
    match args.output {
        OutputArg::Table => {
            for r in &reports {
                println!("{}", r.table_row());
            }
        }
        OutputArg::Csv => {
            println!("algebra,char,dim,dim_Z,dim_ad,dim_Der,inner");
            for r in &reports {
                println!("{}", r.csv_row());
            }
        }
        OutputArg::Json => {
            let text = serde_json::to_string_pretty(&reports)
                .map_err(|e| CliError::Failure(e.to_string()))?;
            println!("{text}");
        }
    }
    Ok(())
}

fn run_killing(args: &KillingArgs) -> Result<(), CliError> {
    let algebras = parse_algebras(&args.algebra)?;
    let primes: Vec<u64> = (2..=args.primes_up_to).filter(|&x| is_prime(x)).collect();
    for ty in algebras {
        let cb = constants_for(ty)?;
        let singular =
            killing_singular_primes(&cb, &primes).map_err(|e| CliError::Failure(e.to_string()))?;
        let list: Vec<String> = singular.iter().map(u64::to_string).collect();
        println!("{}: {}", ty, list.join(" "));
    }
    Ok(())
}
