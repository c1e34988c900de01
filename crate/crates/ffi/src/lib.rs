//! C ABI over the `clonalg` crate.
//!
//! Every fallible function returns a [`ClgStatus`]. On failure a message is
//! stored per thread and can be read with [`clg_last_error`]. Experiments
//! are returned as opaque [`ClgExperiment`] handles owned by the caller and
//! released with [`clg_experiment_free`]. Strings returned by this library
//! are released with [`clg_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use clonalg::benchmarks;
use clonalg::encoding::{decode_genome, Genome, VARIABLES};
use clonalg::engines::{self, AlgorithmConfig, AlgorithmKind, Mutation};
use clonalg::harness::{self, CellParams, ExperimentConfig, ExperimentResult, SweepTarget};
use clonalg::{Bounds, Error};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClgStatus {
    Ok = 0,
    InvalidArgument = 1,
    UnknownFunction = 2,
    Io = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClgAlgorithm {
    Clonalg = 0,
    Ga = 1,
    /// Sweeps only: both grids in one experiment.
    Both = 2,
}

/// One grid point. `mutation_group` applies to CLONALG, `ga_mutation_rate` to GA.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ClgCellParams {
    pub algorithm: ClgAlgorithm,
    pub clone_set: u8,
    pub mutation_group: u8,
    pub ga_mutation_rate: f64,
}

/// Outcome of a single engine run.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ClgRunSummary {
    pub iterations: u64,
    pub best_affinity: f64,
    pub best_vector: [f64; 10],
    pub converged: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ClgCellStats {
    pub params: ClgCellParams,
    pub epsilon: f64,
    pub mean_iterations: f64,
    pub mean_proximity: f64,
    pub convergence_rate: f64,
    pub min_iterations: u64,
    pub max_iterations: u64,
}

/// Opaque experiment result.
pub struct ClgExperiment {
    result: ExperimentResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: ClgStatus, msg: impl Into<String>) -> ClgStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> ClgStatus {
    let status = match &e {
        Error::UnknownFunction { .. } => ClgStatus::UnknownFunction,
        Error::InvalidParameter(_) => ClgStatus::InvalidArgument,
        _ => ClgStatus::Io,
    };
    fail(status, e.to_string())
}

fn guard<F: FnOnce() -> ClgStatus>(f: F) -> ClgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(ClgStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, ClgStatus> {
    if p.is_null() {
        return Err(fail(ClgStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(ClgStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn cell_params(c: &ClgCellParams) -> Result<CellParams, ClgStatus> {
    match c.algorithm {
        ClgAlgorithm::Clonalg => Ok(CellParams::clonalg(c.clone_set, c.mutation_group)),
        ClgAlgorithm::Ga => Ok(CellParams::ga(c.clone_set, c.ga_mutation_rate)),
        ClgAlgorithm::Both => Err(fail(
            ClgStatus::InvalidArgument,
            "a grid cell needs a single algorithm",
        )),
    }
}

fn to_c_params(p: &CellParams) -> ClgCellParams {
    let (algorithm, mutation_group, ga_mutation_rate) = match (p.algorithm, p.mutation) {
        (AlgorithmKind::Clonalg, Mutation::Group(g)) => (ClgAlgorithm::Clonalg, g, 0.0),
        (_, Mutation::Rate(r)) => (ClgAlgorithm::Ga, 0, r),
        (AlgorithmKind::Ga, Mutation::Group(g)) => (ClgAlgorithm::Ga, g, 0.0),
    };
    ClgCellParams {
        algorithm,
        clone_set: p.clone_set,
        mutation_group,
        ga_mutation_rate,
    }
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Most recent error message on this thread, or NULL. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn clg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn clg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Number of registered benchmark functions.
#[no_mangle]
pub extern "C" fn clg_function_count() -> usize {
    benchmarks::NAMES.len()
}

/// Registry identifier at `index` as a static string, or NULL when out of range.
#[no_mangle]
pub extern "C" fn clg_function_name(index: usize) -> *const c_char {
    const NAMES: [&str; 6] = [
        "sphere\0",
        "rastrigin\0",
        "ackley\0",
        "modified-sinusoidal\0",
        "sum-of-powers\0",
        "schwefel-2-22\0",
    ];
    NAMES
        .get(index)
        .map_or(ptr::null(), |s| s.as_ptr() as *const c_char)
}

/// Bounds and default termination threshold of a benchmark.
#[no_mangle]
pub unsafe extern "C" fn clg_function_info(
    name: *const c_char,
    lo: *mut f64,
    hi: *mut f64,
    default_epsilon: *mut f64,
) -> ClgStatus {
    guard(|| {
        let name = match read_str(name, "name") {
            Ok(s) => s,
            Err(s) => return s,
        };
        if lo.is_null() || hi.is_null() || default_epsilon.is_null() {
            return fail(ClgStatus::NullPointer, "output pointer is null");
        }
        match benchmarks::lookup(name) {
            Ok(spec) => {
                *lo = spec.bounds.lo();
                *hi = spec.bounds.hi();
                *default_epsilon = spec.default_epsilon;
                ClgStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Evaluates a benchmark at `x[0..len]`.
#[no_mangle]
pub unsafe extern "C" fn clg_evaluate(
    name: *const c_char,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> ClgStatus {
    guard(|| {
        let name = match read_str(name, "name") {
            Ok(s) => s,
            Err(s) => return s,
        };
        if x.is_null() || out.is_null() {
            return fail(ClgStatus::NullPointer, "input or output pointer is null");
        }
        match benchmarks::lookup(name) {
            Ok(spec) => {
                *out = spec.evaluate(std::slice::from_raw_parts(x, len));
                ClgStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Decodes a 200-character '0'/'1' genome onto `[lo, hi]`, writing ten values to `out`.
#[no_mangle]
pub unsafe extern "C" fn clg_decode_genome(
    bits: *const c_char,
    lo: f64,
    hi: f64,
    out: *mut f64,
) -> ClgStatus {
    guard(|| {
        let text = match read_str(bits, "genome") {
            Ok(s) => s,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(ClgStatus::NullPointer, "output pointer is null");
        }
        let bounds = match Bounds::new(lo, hi) {
            Ok(b) => b,
            Err(e) => return from_error(e),
        };
        let genome: Genome = match text.parse() {
            Ok(g) => g,
            Err(e) => return from_error(e),
        };
        let values = decode_genome(&genome, bounds);
        std::slice::from_raw_parts_mut(out, VARIABLES).copy_from_slice(&values);
        ClgStatus::Ok
    })
}

/// Runs one engine. A non-positive `epsilon` selects the function's default.
#[no_mangle]
pub unsafe extern "C" fn clg_run(
    name: *const c_char,
    params: *const ClgCellParams,
    epsilon: f64,
    max_generations: u64,
    seed: u64,
    out: *mut ClgRunSummary,
) -> ClgStatus {
    guard(|| {
        let name = match read_str(name, "name") {
            Ok(s) => s,
            Err(s) => return s,
        };
        if params.is_null() || out.is_null() {
            return fail(ClgStatus::NullPointer, "params or output pointer is null");
        }
        let spec = match benchmarks::lookup(name) {
            Ok(s) => s,
            Err(e) => return from_error(e),
        };
        let cell = match cell_params(&*params) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let cfg = AlgorithmConfig {
            algorithm: cell.algorithm,
            clone_set: cell.clone_set,
            mutation: cell.mutation,
            epsilon: if epsilon > 0.0 {
                epsilon
            } else {
                spec.default_epsilon
            },
            max_generations,
            seed,
        };
        match engines::run(&cfg, &spec) {
            Ok(r) => {
                let mut best_vector = [0.0; 10];
                best_vector.copy_from_slice(&r.best_vector);
                *out = ClgRunSummary {
                    iterations: r.iterations,
                    best_affinity: r.best_affinity,
                    best_vector,
                    converged: r.converged,
                };
                ClgStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

unsafe fn finish(
    result: Result<ExperimentResult, Error>,
    out: *mut *mut ClgExperiment,
) -> ClgStatus {
    match result {
        Ok(result) => {
            *out = Box::into_raw(Box::new(ClgExperiment { result }));
            ClgStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Runs `runs_per_cell` seeded runs of every cell in `cells[0..n_cells]`.
/// A non-positive `epsilon` selects the function's default.
#[no_mangle]
pub unsafe extern "C" fn clg_experiment_run(
    name: *const c_char,
    cells: *const ClgCellParams,
    n_cells: usize,
    runs_per_cell: usize,
    epsilon: f64,
    max_generations: u64,
    seed: u64,
    out: *mut *mut ClgExperiment,
) -> ClgStatus {
    guard(|| {
        let name = match read_str(name, "name") {
            Ok(s) => s,
            Err(s) => return s,
        };
        if out.is_null() || (cells.is_null() && n_cells > 0) {
            return fail(ClgStatus::NullPointer, "cells or output pointer is null");
        }
        let raw = if n_cells == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(cells, n_cells)
        };
        let grid = match raw.iter().map(cell_params).collect::<Result<Vec<_>, _>>() {
            Ok(g) => g,
            Err(s) => return s,
        };
        let mut cfg = ExperimentConfig::new(name, grid, seed);
        cfg.runs_per_cell = runs_per_cell;
        cfg.epsilon = (epsilon > 0.0).then_some(epsilon);
        cfg.max_generations = max_generations;
        finish(harness::run_experiment(&cfg), out)
    })
}

/// The full 3 x 3 sweep (or both grids) with ten runs per cell.
#[no_mangle]
pub unsafe extern "C" fn clg_sweep(
    name: *const c_char,
    algorithm: ClgAlgorithm,
    seed: u64,
    out: *mut *mut ClgExperiment,
) -> ClgStatus {
    guard(|| {
        let name = match read_str(name, "name") {
            Ok(s) => s,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(ClgStatus::NullPointer, "output pointer is null");
        }
        let target = match algorithm {
            ClgAlgorithm::Clonalg => SweepTarget::One(AlgorithmKind::Clonalg),
            ClgAlgorithm::Ga => SweepTarget::One(AlgorithmKind::Ga),
            ClgAlgorithm::Both => SweepTarget::Both,
        };
        finish(harness::sweep(name, target, seed), out)
    })
}

#[no_mangle]
pub unsafe extern "C" fn clg_experiment_cell_count(exp: *const ClgExperiment) -> usize {
    exp.as_ref().map_or(0, |e| e.result.cells.len())
}

#[no_mangle]
pub unsafe extern "C" fn clg_experiment_cell_stats(
    exp: *const ClgExperiment,
    index: usize,
    out: *mut ClgCellStats,
) -> ClgStatus {
    let (Some(exp), false) = (exp.as_ref(), out.is_null()) else {
        return fail(ClgStatus::NullPointer, "handle or output pointer is null");
    };
    let Some(cell) = exp.result.cells.get(index) else {
        return fail(
            ClgStatus::InvalidArgument,
            format!("cell index {index} out of range"),
        );
    };
    *out = ClgCellStats {
        params: to_c_params(&cell.params),
        epsilon: cell.epsilon,
        mean_iterations: cell.stats.mean_iterations,
        mean_proximity: cell.stats.mean_proximity,
        convergence_rate: cell.stats.convergence_rate,
        min_iterations: cell.stats.min_iterations,
        max_iterations: cell.stats.max_iterations,
    };
    ClgStatus::Ok
}

/// Writes the best fully converged cell index for `algorithm` into `out`,
/// or -1 when no cell of that algorithm fully converged.
#[no_mangle]
pub unsafe extern "C" fn clg_experiment_best_cell(
    exp: *const ClgExperiment,
    algorithm: ClgAlgorithm,
    out: *mut i64,
) -> ClgStatus {
    let (Some(exp), false) = (exp.as_ref(), out.is_null()) else {
        return fail(ClgStatus::NullPointer, "handle or output pointer is null");
    };
    let kind = match algorithm {
        ClgAlgorithm::Clonalg => AlgorithmKind::Clonalg,
        ClgAlgorithm::Ga => AlgorithmKind::Ga,
        ClgAlgorithm::Both => {
            return fail(
                ClgStatus::InvalidArgument,
                "best cell needs a single algorithm",
            )
        }
    };
    *out = exp.result.best_cell(kind).map_or(-1, |c| c.index as i64);
    ClgStatus::Ok
}

/// The summary document as JSON. Free with [`clg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn clg_experiment_to_json(exp: *const ClgExperiment) -> *mut c_char {
    match exp.as_ref() {
        Some(e) => string_out(harness::to_json(&e.result)),
        None => {
            set_error("handle is null");
            ptr::null_mut()
        }
    }
}

/// Writes the summary document to `path`.
#[no_mangle]
pub unsafe extern "C" fn clg_experiment_write(
    exp: *const ClgExperiment,
    path: *const c_char,
) -> ClgStatus {
    guard(|| {
        let Some(exp) = exp.as_ref() else {
            return fail(ClgStatus::NullPointer, "handle is null");
        };
        let path = match read_str(path, "path") {
            Ok(s) => s,
            Err(s) => return s,
        };
        match harness::write_results(&exp.result, Path::new(path), None) {
            Ok(_) => ClgStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn clg_experiment_free(exp: *mut ClgExperiment) {
    if !exp.is_null() {
        drop(Box::from_raw(exp));
    }
}

#[no_mangle]
pub unsafe extern "C" fn clg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
