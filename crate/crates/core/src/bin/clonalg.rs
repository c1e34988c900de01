use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use clonalg::benchmarks;
use clonalg::engines::{AlgorithmKind, DEFAULT_MAX_GENERATIONS};
use clonalg::harness::{
    self, emit_table2, run_experiment_traced, sweep, write_results, write_traces, CellParams,
    ExperimentConfig, SweepTarget, DEFAULT_RUNS,
};
use clonalg::Error;

#[derive(Parser)]
#[command(
    name = "clonalg",
    version,
    about = "Clonal selection vs. genetic algorithm on binary-encoded benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Clonalg,
    Ga,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepAlgorithm {
    Clonalg,
    Ga,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Repeated runs of one parameter setting.
    Run {
        #[arg(long)]
        function: String,
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        clone_set: u8,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3), conflicts_with = "ga_mutation_rate")]
        mutation_group: Option<u8>,
        #[arg(long)]
        ga_mutation_rate: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_MAX_GENERATIONS)]
        max_generations: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RUNS)]
        runs: usize,
        /// Summary document path; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for per-run convergence-trace CSV files.
        #[arg(long)]
        trace_dir: Option<PathBuf>,
    },
    /// Full 3 x 3 clone-set by mutation grid, ten runs per cell.
    Sweep {
        #[arg(long)]
        function: String,
        #[arg(long, value_enum)]
        algorithm: SweepAlgorithm,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Both algorithms at the tabled best parameters for all six functions.
    Table2 {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Registry identifiers with bounds and type.
    ListFunctions,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 3 } else { 2 })
        }
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Run {
            function,
            algorithm,
            clone_set,
            mutation_group,
            ga_mutation_rate,
            epsilon,
            max_generations,
            seed,
            runs,
            out,
            trace_dir,
        } => {
            let cell = match (algorithm, mutation_group, ga_mutation_rate) {
                (Algorithm::Clonalg, Some(g), None) => CellParams::clonalg(clone_set, g),
                (Algorithm::Ga, None, Some(r)) => CellParams::ga(clone_set, r),
                (Algorithm::Clonalg, _, _) => {
                    return Err(Error::InvalidParameter(
                        "clonalg requires --mutation-group and no --ga-mutation-rate".into(),
                    ))
                }
                (Algorithm::Ga, _, _) => {
                    return Err(Error::InvalidParameter(
                        "ga requires --ga-mutation-rate and no --mutation-group".into(),
                    ))
                }
            };
            let mut cfg = ExperimentConfig::new(&function, vec![cell], seed);
            cfg.runs_per_cell = runs;
            cfg.epsilon = epsilon;
            cfg.max_generations = max_generations;
            cfg.keep_traces = trace_dir.is_some();
            let (result, traces) = run_experiment_traced(&cfg)?;
            match &out {
                Some(path) => {
                    write_results(&result, path, trace_dir.as_deref().zip(traces.as_ref()))?;
                }
                None => {
                    if let (Some(dir), Some(traces)) = (&trace_dir, &traces) {
                        write_traces(&result.function, dir, traces)?;
                    }
                    emit(None, &harness::to_json(&result))?;
                }
            }
            Ok(())
        }
        Command::Sweep {
            function,
            algorithm,
            seed,
            out,
        } => {
            let target = match algorithm {
                SweepAlgorithm::Clonalg => SweepTarget::One(AlgorithmKind::Clonalg),
                SweepAlgorithm::Ga => SweepTarget::One(AlgorithmKind::Ga),
                SweepAlgorithm::Both => SweepTarget::Both,
            };
            let result = sweep(&function, target, seed)?;
            match out {
                Some(path) => write_results(&result, &path, None).map(|_| ()),
                None => emit(None, &harness::to_json(&result)),
            }
        }
        Command::Table2 { seed, out, format } => {
            let rows = emit_table2(seed, DEFAULT_RUNS, DEFAULT_MAX_GENERATIONS)?;
            let text = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    harness::write_table2_csv(&rows, &mut buf)?;
                    String::from_utf8(buf).expect("csv output is utf-8")
                }
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&rows).expect("rows serialise");
                    s.push('\n');
                    s
                }
            };
            emit(out.as_deref(), &text)
        }
        Command::ListFunctions => {
            let mut text = String::new();
            for s in benchmarks::all() {
                text.push_str(&format!(
                    "{}\t[{}, {}]\tn={}\t{}\n",
                    s.name,
                    s.bounds.lo(),
                    s.bounds.hi(),
                    s.dimension,
                    s.modality
                ));
            }
            emit(None, &text)
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}
