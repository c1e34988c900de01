//! Multi-run experiments, parameter sweeps, the best-parameter comparison
//! table and result persistence.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::benchmarks::{self, BenchmarkSpec, Modality};
use crate::engines::{
    self, AlgorithmConfig, AlgorithmKind, ConvergenceTrace, Mutation, DEFAULT_MAX_GENERATIONS,
};
use crate::error::{Error, Result};
use crate::operators::GA_MUTATION_RATES;

pub const DEFAULT_RUNS: usize = 10;

/// One point of the parameter grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellParams {
    pub algorithm: AlgorithmKind,
    pub clone_set: u8,
    pub mutation: Mutation,
}

impl CellParams {
    pub fn clonalg(clone_set: u8, group: u8) -> Self {
        CellParams {
            algorithm: AlgorithmKind::Clonalg,
            clone_set,
            mutation: Mutation::Group(group),
        }
    }

    pub fn ga(clone_set: u8, rate: f64) -> Self {
        CellParams {
            algorithm: AlgorithmKind::Ga,
            clone_set,
            mutation: Mutation::Rate(rate),
        }
    }
}

/// The full 3 x 3 grid for one algorithm, clone set major.
pub fn full_grid(algorithm: AlgorithmKind) -> Vec<CellParams> {
    let mut cells = Vec::with_capacity(9);
    for set in 1..=3 {
        for k in 0..3 {
            cells.push(match algorithm {
                AlgorithmKind::Clonalg => CellParams::clonalg(set, k + 1),
                AlgorithmKind::Ga => CellParams::ga(set, GA_MUTATION_RATES[k as usize]),
            });
        }
    }
    cells
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub function: String,
    pub grid: Vec<CellParams>,
    pub runs_per_cell: usize,
    pub epsilon: Option<f64>,
    pub max_generations: u64,
    pub seed: u64,
    /// Keep every run's convergence trace in memory for writing out.
    pub keep_traces: bool,
}

impl ExperimentConfig {
    pub fn new(function: &str, grid: Vec<CellParams>, seed: u64) -> Self {
        ExperimentConfig {
            function: function.to_string(),
            grid,
            runs_per_cell: DEFAULT_RUNS,
            epsilon: None,
            max_generations: DEFAULT_MAX_GENERATIONS,
            seed,
            keep_traces: false,
        }
    }

    fn validate(&self) -> Result<BenchmarkSpec> {
        let spec = benchmarks::lookup(&self.function)?;
        if self.runs_per_cell == 0 {
            return Err(Error::InvalidParameter(
                "runs per cell must be at least 1".into(),
            ));
        }
        if self.grid.is_empty() {
            return Err(Error::InvalidParameter("parameter grid is empty".into()));
        }
        let eps = self.epsilon.unwrap_or(spec.default_epsilon);
        for cell in &self.grid {
            self.algorithm_config(cell, eps, 0).validate()?;
        }
        Ok(spec)
    }

    fn algorithm_config(&self, cell: &CellParams, epsilon: f64, seed: u64) -> AlgorithmConfig {
        AlgorithmConfig {
            algorithm: cell.algorithm,
            clone_set: cell.clone_set,
            mutation: cell.mutation,
            epsilon,
            max_generations: self.max_generations,
            seed,
        }
    }
}

/// Seed of run `run` in cell `cell`: the splitmix64 finaliser applied to
/// `seed + (cell << 32 | run) * 0x9E3779B97F4A7C15`. Injective in
/// `(cell, run)` for a fixed experiment seed.
pub fn derive_seed(seed: u64, cell: u32, run: u32) -> u64 {
    let key = ((cell as u64) << 32) | run as u64;
    splitmix64(seed.wrapping_add(key.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run: usize,
    pub seed: u64,
    pub iterations: u64,
    pub best_affinity: f64,
    pub best_vector: Vec<f64>,
    pub best_genome: crate::encoding::Genome,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub mean_iterations: f64,
    pub mean_proximity: f64,
    pub convergence_rate: f64,
    pub min_iterations: u64,
    pub max_iterations: u64,
}

impl AggregateStats {
    pub fn from_runs(runs: &[RunSummary]) -> Self {
        assert!(!runs.is_empty(), "aggregate over zero runs");
        let n = runs.len() as f64;
        let total: u64 = runs.iter().map(|r| r.iterations).sum();
        AggregateStats {
            mean_iterations: total as f64 / n,
            mean_proximity: runs.iter().map(|r| r.best_affinity).sum::<f64>() / n,
            convergence_rate: runs.iter().filter(|r| r.converged).count() as f64 / n,
            min_iterations: runs.iter().map(|r| r.iterations).min().unwrap(),
            max_iterations: runs.iter().map(|r| r.iterations).max().unwrap(),
        }
    }

    pub fn fully_converged(&self) -> bool {
        self.convergence_rate == 1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub index: usize,
    pub params: CellParams,
    pub epsilon: f64,
    pub runs: Vec<RunSummary>,
    pub stats: AggregateStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub function: String,
    pub seed: u64,
    pub runs_per_cell: usize,
    pub max_generations: u64,
    pub cells: Vec<CellResult>,
    /// Index of the best fully-converged CLONALG cell, if any.
    pub best_clonalg: Option<usize>,
    /// Index of the best fully-converged GA cell, if any.
    pub best_ga: Option<usize>,
}

impl ExperimentResult {
    pub fn best_cell(&self, algorithm: AlgorithmKind) -> Option<&CellResult> {
        let idx = match algorithm {
            AlgorithmKind::Clonalg => self.best_clonalg,
            AlgorithmKind::Ga => self.best_ga,
        }?;
        self.cells.get(idx)
    }
}

/// Fewest mean iterations among fully converged cells, then lower mean
/// proximity, then lower index.
pub fn select_best(cells: &[CellResult], algorithm: AlgorithmKind) -> Option<usize> {
    cells
        .iter()
        .filter(|c| c.params.algorithm == algorithm && c.stats.fully_converged())
        .min_by(|a, b| {
            a.stats
                .mean_iterations
                .total_cmp(&b.stats.mean_iterations)
                .then(a.stats.mean_proximity.total_cmp(&b.stats.mean_proximity))
                .then(a.index.cmp(&b.index))
        })
        .map(|c| c.index)
}

/// Convergence traces indexed `[cell][run]`.
pub type Traces = Vec<Vec<ConvergenceTrace>>;

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_traced(cfg).map(|(r, _)| r)
}

/// Like [`run_experiment`], also returning traces when `keep_traces` is set.
pub fn run_experiment_traced(cfg: &ExperimentConfig) -> Result<(ExperimentResult, Option<Traces>)> {
    let spec = cfg.validate()?;
    let epsilon = cfg.epsilon.unwrap_or(spec.default_epsilon);

    let jobs: Vec<(usize, usize)> = (0..cfg.grid.len())
        .flat_map(|c| (0..cfg.runs_per_cell).map(move |r| (c, r)))
        .collect();

    // Parallel map; `collect` keeps (cell, run) order.
    let outcomes: Vec<(RunSummary, Option<ConvergenceTrace>)> = jobs
        .par_iter()
        .map(|&(c, r)| {
            let seed = derive_seed(cfg.seed, c as u32, r as u32);
            let acfg = cfg.algorithm_config(&cfg.grid[c], epsilon, seed);
            let result = engines::run(&acfg, &spec).expect("config validated");
            let summary = RunSummary {
                run: r,
                seed,
                iterations: result.iterations,
                best_affinity: result.best_affinity,
                best_vector: result.best_vector,
                best_genome: result.best_genome,
                converged: result.converged,
            };
            (summary, cfg.keep_traces.then_some(result.trace))
        })
        .collect();

    let mut cells = Vec::with_capacity(cfg.grid.len());
    let mut traces: Traces = Vec::new();
    let mut iter = outcomes.into_iter();
    for (index, params) in cfg.grid.iter().enumerate() {
        let (runs, cell_traces): (Vec<_>, Vec<_>) = iter.by_ref().take(cfg.runs_per_cell).unzip();
        if cfg.keep_traces {
            traces.push(cell_traces.into_iter().flatten().collect());
        }
        cells.push(CellResult {
            index,
            params: *params,
            epsilon,
            stats: AggregateStats::from_runs(&runs),
            runs,
        });
    }

    let result = ExperimentResult {
        function: cfg.function.clone(),
        seed: cfg.seed,
        runs_per_cell: cfg.runs_per_cell,
        max_generations: cfg.max_generations,
        best_clonalg: select_best(&cells, AlgorithmKind::Clonalg),
        best_ga: select_best(&cells, AlgorithmKind::Ga),
        cells,
    };
    Ok((result, cfg.keep_traces.then_some(traces)))
}

/// Which algorithms a sweep covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepTarget {
    One(AlgorithmKind),
    Both,
}

impl std::str::FromStr for SweepTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "both" => Ok(SweepTarget::Both),
            other => other.parse().map(SweepTarget::One),
        }
    }
}

/// The 3 x 3 grid (twice, for `Both`) at 10 runs per cell and the
/// function's default epsilon.
pub fn sweep(function: &str, target: SweepTarget, seed: u64) -> Result<ExperimentResult> {
    let grid = match target {
        SweepTarget::One(a) => full_grid(a),
        SweepTarget::Both => {
            let mut g = full_grid(AlgorithmKind::Clonalg);
            g.extend(full_grid(AlgorithmKind::Ga));
            g
        }
    };
    run_experiment(&ExperimentConfig::new(function, grid, seed))
}

/// The best parameters per function as listed in the comparison table,
/// in row order: (function, CLONALG set, CLONALG group, GA set, GA rate).
pub const TABLE2_PARAMS: [(&str, u8, u8, u8, f64); 6] = [
    ("sphere", 2, 1, 2, 0.005),
    ("rastrigin", 3, 3, 1, 0.001),
    ("ackley", 2, 1, 1, 0.001),
    ("modified-sinusoidal", 3, 2, 1, 0.001),
    ("sum-of-powers", 3, 1, 1, 0.005),
    ("schwefel-2-22", 1, 1, 1, 0.001),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub function: String,
    #[serde(rename = "type")]
    pub modality: Modality,
    pub algorithm: AlgorithmKind,
    pub clone_set: u8,
    pub mutation: String,
    pub mean_proximity: f64,
    pub mean_iterations: f64,
    pub convergence_rate: f64,
}

/// Runs both algorithms at the tabled best parameters for every function,
/// `runs` times each.
pub fn emit_table2(seed: u64, runs: usize, max_generations: u64) -> Result<Vec<Table2Row>> {
    let mut rows = Vec::with_capacity(12);
    for (function, c_set, c_group, g_set, g_rate) in TABLE2_PARAMS {
        let spec = benchmarks::lookup(function)?;
        let mut cfg = ExperimentConfig::new(
            function,
            vec![
                CellParams::clonalg(c_set, c_group),
                CellParams::ga(g_set, g_rate),
            ],
            seed,
        );
        cfg.runs_per_cell = runs;
        cfg.max_generations = max_generations;
        let result = run_experiment(&cfg)?;
        for cell in &result.cells {
            rows.push(Table2Row {
                function: function.to_string(),
                modality: spec.modality,
                algorithm: cell.params.algorithm,
                clone_set: cell.params.clone_set,
                mutation: cell.params.mutation.to_string(),
                mean_proximity: cell.stats.mean_proximity,
                mean_iterations: cell.stats.mean_iterations,
                convergence_rate: cell.stats.convergence_rate,
            });
        }
    }
    Ok(rows)
}

pub const TABLE2_HEADER: [&str; 8] = [
    "function",
    "type",
    "algorithm",
    "clone_set",
    "mutation",
    "mean_proximity",
    "mean_iterations",
    "convergence_rate",
];

pub fn write_table2_csv<W: Write>(rows: &[Table2Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TABLE2_HEADER)?;
    for r in rows {
        w.write_record([
            r.function.clone(),
            r.modality.to_string(),
            r.algorithm.to_string(),
            r.clone_set.to_string(),
            r.mutation.clone(),
            format!("{:e}", r.mean_proximity),
            r.mean_iterations.to_string(),
            r.convergence_rate.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn to_json(result: &ExperimentResult) -> String {
    let mut s = serde_json::to_string_pretty(result).expect("result is serialisable");
    s.push('\n');
    s
}

/// Writes the summary document to `summary` and, when given, one CSV per
/// run into `trace_dir` named `<function>_cell<c>_run<r>.csv`.
pub fn write_results(
    result: &ExperimentResult,
    summary: &Path,
    traces: Option<(&Path, &Traces)>,
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    if let Some(parent) = summary.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    fs::write(summary, to_json(result)).map_err(io_err(summary))?;
    written.push(summary.to_path_buf());

    if let Some((dir, traces)) = traces {
        written.extend(write_traces(&result.function, dir, traces)?);
    }
    Ok(written)
}

/// Writes one `generation,best_affinity,mean_affinity` CSV per run.
pub fn write_traces(function: &str, dir: &Path, traces: &Traces) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::new();
    for (c, cell) in traces.iter().enumerate() {
        for (r, trace) in cell.iter().enumerate() {
            let path = dir.join(format!("{function}_cell{c}_run{r}.csv"));
            let file = fs::File::create(&path).map_err(io_err(&path))?;
            trace.write_csv(std::io::BufWriter::new(file))?;
            written.push(path);
        }
    }
    Ok(written)
}

pub fn read_results(path: &Path) -> Result<ExperimentResult> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| Error::Format {
        path: path.to_path_buf(),
        source,
    })
}
