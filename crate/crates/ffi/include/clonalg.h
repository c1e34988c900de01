#ifndef CLONALG_H
#define CLONALG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ClgAlgorithm {
  CLG_ALGORITHM_CLONALG = 0,
  CLG_ALGORITHM_GA = 1,
  /**
   * Sweeps only: both grids in one experiment.
   */
  CLG_ALGORITHM_BOTH = 2,
} ClgAlgorithm;

/**
 * Status codes returned by every fallible call.
 */
typedef enum ClgStatus {
  CLG_STATUS_OK = 0,
  CLG_STATUS_INVALID_ARGUMENT = 1,
  CLG_STATUS_UNKNOWN_FUNCTION = 2,
  CLG_STATUS_IO = 3,
  CLG_STATUS_NULL_POINTER = 4,
  CLG_STATUS_PANIC = 5,
} ClgStatus;

/**
 * Opaque experiment result.
 */
typedef struct ClgExperiment ClgExperiment;

/**
 * One grid point. `mutation_group` applies to CLONALG, `ga_mutation_rate` to GA.
 */
typedef struct ClgCellParams {
  enum ClgAlgorithm algorithm;
  uint8_t clone_set;
  uint8_t mutation_group;
  double ga_mutation_rate;
} ClgCellParams;

/**
 * Outcome of a single engine run.
 */
typedef struct ClgRunSummary {
  uint64_t iterations;
  double best_affinity;
  double best_vector[10];
  bool converged;
} ClgRunSummary;

typedef struct ClgCellStats {
  struct ClgCellParams params;
  double epsilon;
  double mean_iterations;
  double mean_proximity;
  double convergence_rate;
  uint64_t min_iterations;
  uint64_t max_iterations;
} ClgCellStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Most recent error message on this thread, or NULL. Valid until the next
 * failing call on the same thread.
 */
const char *clg_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *clg_version(void);

/**
 * Number of registered benchmark functions.
 */
size_t clg_function_count(void);

/**
 * Registry identifier at `index` as a static string, or NULL when out of range.
 */
const char *clg_function_name(size_t index);

/**
 * Bounds and default termination threshold of a benchmark.
 */
enum ClgStatus clg_function_info(const char *name, double *lo, double *hi, double *default_epsilon);

/**
 * Evaluates a benchmark at `x[0..len]`.
 */
enum ClgStatus clg_evaluate(const char *name, const double *x, size_t len, double *out);

/**
 * Decodes a 200-character '0'/'1' genome onto `[lo, hi]`, writing ten values to `out`.
 */
enum ClgStatus clg_decode_genome(const char *bits, double lo, double hi, double *out);

/**
 * Runs one engine. A non-positive `epsilon` selects the function's default.
 */
enum ClgStatus clg_run(const char *name,
                       const struct ClgCellParams *params,
                       double epsilon,
                       uint64_t max_generations,
                       uint64_t seed,
                       struct ClgRunSummary *out);

/**
 * Runs `runs_per_cell` seeded runs of every cell in `cells[0..n_cells]`.
 * A non-positive `epsilon` selects the function's default.
 */
enum ClgStatus clg_experiment_run(const char *name,
                                  const struct ClgCellParams *cells,
                                  size_t n_cells,
                                  size_t runs_per_cell,
                                  double epsilon,
                                  uint64_t max_generations,
                                  uint64_t seed,
                                  struct ClgExperiment **out);

/**
 * The full 3 x 3 sweep (or both grids) with ten runs per cell.
 */
enum ClgStatus clg_sweep(const char *name,
                         enum ClgAlgorithm algorithm,
                         uint64_t seed,
                         struct ClgExperiment **out);

size_t clg_experiment_cell_count(const struct ClgExperiment *exp);

enum ClgStatus clg_experiment_cell_stats(const struct ClgExperiment *exp,
                                         size_t index,
                                         struct ClgCellStats *out);

/**
 * Writes the best fully converged cell index for `algorithm` into `out`,
 * or -1 when no cell of that algorithm fully converged.
 */
enum ClgStatus clg_experiment_best_cell(const struct ClgExperiment *exp,
                                        enum ClgAlgorithm algorithm,
                                        int64_t *out);

/**
 * The summary document as JSON. Free with [`clg_string_free`].
 */
char *clg_experiment_to_json(const struct ClgExperiment *exp);

/**
 * Writes the summary document to `path`.
 */
enum ClgStatus clg_experiment_write(const struct ClgExperiment *exp, const char *path);

void clg_experiment_free(struct ClgExperiment *exp);

void clg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLONALG_H */
