//! Command-line front end for the hypercube coloring verifier.
//!
//! Subcommands cover the whole pipeline: closed-form instance statistics,
//! DIMACS encoding (with per-family ablation flags), solving with the
//! embedded CDCL engine, one-shot conjecture proofs, exhaustive
//! brute-force checks, counterexample verification of external models,
//! n=8 orbit enumeration, and per-orbit subproblem emission.
//!
//! Exit codes follow solver-competition convention: 10 satisfiable, 20
//! unsatisfiable, 0 other success, 1 usage or malformed input, 2 internal
//! failure or timeout.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use norine_core::oracle::model_literals;
use norine_core::{
    brute_force_geodesic_conjecture, build_instance, check_counterexample, decode_model,
    instance_stats, parse_external_result, read_dimacs, solve_with_stats, stream_dimacs,
    subproblem_file_name, write_orbit_table, write_subproblem, Budget, CnfInstance, Color,
    CounterexampleCheck, CubeDim, EncodeOptions, Model, OrbitSpace, SolveResult, SolverStats,
};

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;

#[derive(Parser)]
#[command(
    name = "norine",
    version,
    about = "Verifies the geodesic Norine conjecture on small hypercubes",
    after_help = "Exit codes: 10 satisfiable, 20 unsatisfiable, 0 other success,\n\
                  1 usage or malformed input, 2 internal failure or timeout."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the closed-form instance size table for one dimension
    Stats(StatsArgs),
    /// Write the SAT instance for one dimension as DIMACS
    Encode(EncodeArgs),
    /// Run the embedded solver on a DIMACS file
    Solve(SolveArgs),
    /// Encode and solve one dimension, checking any model found
    Prove(ProveArgs),
    /// Check the conjecture by exhaustive enumeration (n <= 4)
    Bruteforce(BruteforceArgs),
    /// Decode a solver model and judge it as a counterexample
    Verify(VerifyArgs),
    /// Enumerate the n=8 boundary-coloring orbits
    Orbits(OrbitsArgs),
    /// Write one n=8 orbit subproblem as DIMACS
    Subproblem(SubproblemArgs),
}

#[derive(Args)]
struct StatsArgs {
    /// Hypercube dimension
    #[arg(short = 'n', long = "dimension", value_name = "N")]
    n: u32,
}

#[derive(Args)]
struct EncodeArgs {
    /// Hypercube dimension
    #[arg(short = 'n', long = "dimension", value_name = "N")]
    n: u32,
    /// Output DIMACS file
    #[arg(short, long, value_name = "FILE")]
    output: PathBuf,
    /// Omit the antipodal clause family
    #[arg(long)]
    no_antipodal: bool,
    /// Omit the geodesic clause family
    #[arg(long)]
    no_geodesic: bool,
    /// Omit the symmetry-breaking unit clauses
    #[arg(long)]
    no_symmetry: bool,
}

#[derive(Args)]
struct SolveArgs {
    /// DIMACS input file
    file: PathBuf,
    /// Wall-clock budget in seconds
    #[arg(long, value_name = "S")]
    timeout: Option<f64>,
    /// Branching tie-break seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ProveArgs {
    /// Hypercube dimension
    #[arg(short = 'n', long = "dimension", value_name = "N")]
    n: u32,
    /// Wall-clock budget in seconds
    #[arg(long, value_name = "S")]
    timeout: Option<f64>,
    /// Branching tie-break seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BruteforceArgs {
    /// Hypercube dimension (at most 4)
    #[arg(short = 'n', long = "dimension", value_name = "N")]
    n: u32,
}

#[derive(Args)]
struct VerifyArgs {
    /// Hypercube dimension the model refers to
    #[arg(short = 'n', long = "dimension", value_name = "N")]
    n: u32,
    /// Solver output file with s/v lines
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
}

#[derive(Args)]
struct OrbitsArgs {
    /// Also count orbits with Burnside's lemma and compare
    #[arg(long)]
    burnside: bool,
    /// Write the orbit table to this file
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SubproblemArgs {
    /// Orbit index (0-based, by representative order)
    #[arg(long, value_name = "I")]
    index: u32,
    /// Output file (default: norine8_orbit<I>.cnf)
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

/// A command failure with its exit code: 1 for bad input, 2 for
/// internal trouble.
enum Failure {
    Usage(String),
    Internal(String),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code.into());
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Stats(args) => stats(args),
        Command::Encode(args) => encode(args),
        Command::Solve(args) => solve_file(args),
        Command::Prove(args) => prove(args),
        Command::Bruteforce(args) => bruteforce(args),
        Command::Verify(args) => verify(args),
        Command::Orbits(args) => orbits(args),
        Command::Subproblem(args) => subproblem(args),
    }
}

fn dimension(n: u32) -> Result<CubeDim, Failure> {
    CubeDim::new(n).map_err(usage)
}

fn stats(args: StatsArgs) -> Result<u8, Failure> {
    let dim = dimension(args.n)?;
    let s = instance_stats(dim);
    println!("dimension          {}", dim.n());
    println!("variables          {}", s.num_vars);
    println!("antipodal clauses  {}", s.antipodal_clauses);
    println!("geodesic clauses   {}", s.geodesic_clauses);
    println!("symmetry units     {}", s.symmetry_units);
    println!("total clauses      {}", s.total_clauses());
    Ok(0)
}

fn encode_options(args: &EncodeArgs) -> EncodeOptions {
    EncodeOptions {
        antipodal: !args.no_antipodal,
        geodesic: !args.no_geodesic,
        symmetry: !args.no_symmetry,
    }
}

fn encode(args: EncodeArgs) -> Result<u8, Failure> {
    let dim = dimension(args.n)?;
    let opts = encode_options(&args);
    let file = File::create(&args.output)
        .map_err(|e| usage(format_args!("cannot create {}: {e}", args.output.display())))?;
    let mut sink = BufWriter::new(file);
    stream_dimacs(dim, opts, &mut sink).map_err(internal)?;
    sink.flush().map_err(internal)?;
    let s = instance_stats(dim);
    println!(
        "wrote {}: {} variables, {} clauses",
        args.output.display(),
        s.num_vars,
        s.clauses_for(opts)
    );
    Ok(0)
}

fn read_instance(path: &PathBuf) -> Result<CnfInstance, Failure> {
    let file =
        File::open(path).map_err(|e| usage(format_args!("cannot open {}: {e}", path.display())))?;
    read_dimacs(BufReader::new(file)).map_err(|e| usage(format_args!("{}: {e}", path.display())))
}

fn budget_from(timeout: Option<f64>) -> Budget {
    match timeout {
        Some(s) => Budget::seconds(s),
        None => Budget::unlimited(),
    }
}

fn print_stats_comment(stats: &SolverStats, elapsed: f64) {
    println!(
        "c solved in {elapsed:.3}s: {} conflicts, {} decisions, {} propagations, {} restarts",
        stats.conflicts, stats.decisions, stats.propagations, stats.restarts
    );
}

fn print_model(model: &Model) {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let lits = model_literals(model);
    if lits.is_empty() {
        let _ = writeln!(out, "v 0");
        return;
    }
    let last = lits.chunks(25).count() - 1;
    for (i, chunk) in lits.chunks(25).enumerate() {
        let _ = write!(out, "v");
        for l in chunk {
            let _ = write!(out, " {l}");
        }
        if i == last {
            let _ = write!(out, " 0");
        }
        let _ = writeln!(out);
    }
}

fn solve_file(args: SolveArgs) -> Result<u8, Failure> {
    let inst = read_instance(&args.file)?;
    let start = Instant::now();
    let (result, stats) = solve_with_stats(&inst, args.seed, budget_from(args.timeout));
    print_stats_comment(&stats, start.elapsed().as_secs_f64());
    match result {
        SolveResult::Sat(model) => {
            println!("s SATISFIABLE");
            print_model(&model);
            Ok(EXIT_SAT)
        }
        SolveResult::Unsat => {
            println!("s UNSATISFIABLE");
            Ok(EXIT_UNSAT)
        }
        SolveResult::Timeout(_) => {
            println!("s UNKNOWN");
            Err(internal("budget exhausted before a verdict"))
        }
    }
}

fn prove(args: ProveArgs) -> Result<u8, Failure> {
    let dim = dimension(args.n)?;
    let inst = build_instance(dim, EncodeOptions::full());
    println!(
        "c n={}: {} variables, {} clauses",
        dim.n(),
        inst.num_vars(),
        inst.num_clauses()
    );
    let start = Instant::now();
    let (result, stats) = solve_with_stats(&inst, args.seed, budget_from(args.timeout));
    print_stats_comment(&stats, start.elapsed().as_secs_f64());
    match result {
        SolveResult::Unsat => {
            println!("s UNSATISFIABLE");
            println!(
                "c every antipodal coloring of Q_{} has a monochromatic geodesic",
                dim.n()
            );
            Ok(EXIT_UNSAT)
        }
        SolveResult::Sat(model) => {
            let coloring = decode_model(dim, &model).map_err(internal)?;
            match check_counterexample(&coloring) {
                CounterexampleCheck::Valid => {
                    println!("s SATISFIABLE");
                    let reds: Vec<String> = (1..=dim.num_edges())
                        .filter(|&id| coloring.color_by_id(id) == Color::Red)
                        .map(|id| id.to_string())
                        .collect();
                    println!("c counterexample found; red edge ids: {}", reds.join(" "));
                    print_model(&model);
                    Ok(EXIT_SAT)
                }
                verdict => Err(internal(format_args!(
                    "model satisfies the instance but is not a counterexample: {verdict:?}"
                ))),
            }
        }
        SolveResult::Timeout(_) => {
            println!("s UNKNOWN");
            Err(internal("budget exhausted before a verdict"))
        }
    }
}

fn bruteforce(args: BruteforceArgs) -> Result<u8, Failure> {
    let dim = dimension(args.n)?;
    let start = Instant::now();
    let counterexamples = brute_force_geodesic_conjecture(dim).map_err(usage)?;
    let checked = 1u64 << (dim.num_edges() / 2);
    println!(
        "checked {checked} antipodal colorings of Q_{} in {:.3}s: {} counterexamples",
        dim.n(),
        start.elapsed().as_secs_f64(),
        counterexamples.len()
    );
    match counterexamples.first() {
        None => println!("the conjecture holds at n={}", dim.n()),
        Some(c) => {
            let reds: Vec<String> = (1..=dim.num_edges())
                .filter(|&id| c.color_by_id(id) == Color::Red)
                .map(|id| id.to_string())
                .collect();
            println!("first counterexample red edge ids: {}", reds.join(" "));
        }
    }
    Ok(0)
}

fn verify(args: VerifyArgs) -> Result<u8, Failure> {
    let dim = dimension(args.n)?;
    let text = std::fs::read_to_string(&args.model)
        .map_err(|e| usage(format_args!("cannot open {}: {e}", args.model.display())))?;
    let result = parse_external_result(&text)
        .map_err(|e| usage(format_args!("{}: {e}", args.model.display())))?;
    let model = match result {
        SolveResult::Sat(model) => model,
        SolveResult::Unsat => {
            return Err(usage("model file reports UNSATISFIABLE; nothing to verify"))
        }
        SolveResult::Timeout(_) => {
            return Err(usage("model file reports UNKNOWN; nothing to verify"))
        }
    };
    let coloring = decode_model(dim, &model).map_err(usage)?;
    match check_counterexample(&coloring) {
        CounterexampleCheck::Valid => {
            println!("valid counterexample: antipodal, no monochromatic geodesic");
        }
        CounterexampleCheck::NotAntipodal { edge, partner } => {
            println!("not a counterexample: antipodal edges {edge} and {partner} share a color");
        }
        CounterexampleCheck::MonoGeodesic { geodesic, color } => {
            let path: Vec<String> = geodesic.vertices().map(|v| v.label().to_string()).collect();
            println!(
                "not a counterexample: monochromatic {color:?} geodesic {}",
                path.join(" -> ")
            );
        }
    }
    Ok(0)
}

fn orbits(args: OrbitsArgs) -> Result<u8, Failure> {
    let space = OrbitSpace::for_q8();
    let start = Instant::now();
    let orbits = space.enumerate_orbits();
    let total: u64 = orbits.iter().map(|o| o.size as u64).sum();
    println!("orbits {}", orbits.len());
    println!("colorings {total}");
    println!("c enumerated in {:.3}s", start.elapsed().as_secs_f64());
    if args.burnside {
        let count = space.burnside_count().map_err(internal)?;
        println!("burnside {count}");
        if count != orbits.len() as u64 {
            return Err(internal(format_args!(
                "Burnside count {count} disagrees with enumeration {}",
                orbits.len()
            )));
        }
    }
    if let Some(path) = args.output {
        let file = File::create(&path)
            .map_err(|e| usage(format_args!("cannot create {}: {e}", path.display())))?;
        let mut sink = BufWriter::new(file);
        write_orbit_table(&orbits, &mut sink).map_err(internal)?;
        sink.flush().map_err(internal)?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn subproblem(args: SubproblemArgs) -> Result<u8, Failure> {
    let space = OrbitSpace::for_q8();
    let orbits = space.enumerate_orbits();
    let Some(orbit) = orbits.get(args.index as usize) else {
        return Err(usage(format_args!(
            "orbit index {} out of range 0..{}",
            args.index,
            orbits.len()
        )));
    };
    let path = args
        .output
        .unwrap_or_else(|| PathBuf::from(subproblem_file_name(args.index)));
    let file = File::create(&path)
        .map_err(|e| usage(format_args!("cannot create {}: {e}", path.display())))?;
    let mut sink = BufWriter::new(file);
    write_subproblem(orbit, &mut sink).map_err(internal)?;
    sink.flush().map_err(internal)?;
    println!(
        "wrote {}: orbit {} representative {:08x} size {}",
        path.display(),
        orbit.index,
        orbit.representative.0,
        orbit.size
    );
    Ok(0)
}
