#include <math.h>
#include <stdio.h>
#include <string.h>

#include "clonalg.h"

#define CHECK(cond)                                                    \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, \
              #cond);                                                  \
      return 1;                                                        \
    }                                                                  \
  } while (0)

int main(void) {
  double x[10] = {1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  double y = -1.0;
  CHECK(clg_evaluate("schwefel-2-22", x, 10, &y) == CLG_STATUS_OK);
  CHECK(y == 11.0);
  CHECK(clg_evaluate("ackleys", x, 10, &y) == CLG_STATUS_UNKNOWN_FUNCTION);
  CHECK(strstr(clg_last_error(), "ackleys") != NULL);

  char bits[201];
  memset(bits, '1', 200);
  bits[200] = '\0';
  double decoded[10];
  CHECK(clg_decode_genome(bits, -5.12, 5.12, decoded) == CLG_STATUS_OK);
  CHECK(decoded[9] == 5.12);

  ClgCellParams cell = {CLG_ALGORITHM_CLONALG, 2, 1, 0.0};
  ClgRunSummary run;
  CHECK(clg_run("sphere", &cell, 0.0, 100000, 7, &run) == CLG_STATUS_OK);
  CHECK(run.converged && run.best_affinity <= 1e-6);

  ClgExperiment *exp = NULL;
  ClgCellParams cells[2] = {{CLG_ALGORITHM_CLONALG, 3, 1, 0.0},
                            {CLG_ALGORITHM_GA, 1, 0, 0.005}};
  CHECK(clg_experiment_run("sum-of-powers", cells, 2, 3, 0.0, 10000, 1, &exp) ==
        CLG_STATUS_OK);
  CHECK(clg_experiment_cell_count(exp) == 2);
  ClgCellStats stats;
  CHECK(clg_experiment_cell_stats(exp, 1, &stats) == CLG_STATUS_OK);
  CHECK(stats.params.algorithm == CLG_ALGORITHM_GA);
  CHECK(stats.convergence_rate == 1.0);
  char *json = clg_experiment_to_json(exp);
  CHECK(json != NULL && strstr(json, "\"sum-of-powers\"") != NULL);
  clg_string_free(json);
  clg_experiment_free(exp);

  printf("ok %s\n", clg_version());
  return 0;
}
