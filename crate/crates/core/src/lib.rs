//! Clonal selection (CLONALG) and a genetic algorithm over a shared
//! 40 x 200-bit population, six benchmark objectives, and an experiment
//! harness that sweeps clone sets and mutation settings over seeded runs.

pub mod benchmarks;
pub mod encoding;
pub mod engines;
pub mod error;
pub mod harness;
pub mod operators;

pub use benchmarks::{lookup, BenchmarkSpec, Modality};
pub use encoding::{decode_genome, decode_variable, random_genome, Bounds, Genome};
pub use engines::{run, run_clonalg, run_ga, AlgorithmConfig, AlgorithmKind, RunResult};
pub use error::{Error, Result};
pub use harness::{run_experiment, sweep, ExperimentConfig, ExperimentResult};
