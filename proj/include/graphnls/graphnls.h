#ifndef GRAPHNLS_GRAPHNLS_H
#define GRAPHNLS_GRAPHNLS_H

/* C interface of libgraphnls. Every function returns a graphnls_status;
 * on failure graphnls_last_error() describes the problem (per thread).
 * Strings returned through char** are owned by the caller and released
 * with graphnls_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GRAPHNLS_BUILDING_DLL)
#    define GRAPHNLS_API __declspec(dllexport)
#  else
#    define GRAPHNLS_API __declspec(dllimport)
#  endif
#else
#  define GRAPHNLS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum graphnls_status {
  GRAPHNLS_OK = 0,
  GRAPHNLS_E_INVALID_ARGUMENT = 1,
  GRAPHNLS_E_PARSE = 2,
  GRAPHNLS_E_INVALID_GRAPH = 3,
  GRAPHNLS_E_IO = 4,
  GRAPHNLS_E_INTERNAL = 5
} graphnls_status;

typedef enum graphnls_verdict {
  GRAPHNLS_NEGATIVE_MINIMUM = 0,
  GRAPHNLS_ZERO_INFIMUM_SUSPECTED = 1,
  GRAPHNLS_INCONCLUSIVE = 2
} graphnls_verdict;

typedef enum graphnls_initializer {
  GRAPHNLS_INIT_COMPETITOR = 0,
  GRAPHNLS_INIT_SOLITON = 1,
  GRAPHNLS_INIT_RANDOM = 2
} graphnls_initializer;

typedef struct graphnls_graph graphnls_graph;
typedef struct graphnls_result graphnls_result;

typedef struct graphnls_solver_config {
  size_t max_iters;
  double step0;
  double max_step;
  double backtrack;
  double armijo_c1;
  double grad_tol;
  double energy_tol;
  double h_max;
  const double* r_cut_schedule; /* NULL or r_cut_count == 0: default schedule */
  size_t r_cut_count;
  graphnls_initializer init;
  const char* soliton_edge;     /* NULL: longest core edge */
  double soliton_offset;        /* negative: midpoint */
  uint64_t seed;
  int nonlinear_everywhere;     /* diagnostic: nonlinearity on every edge */
} graphnls_solver_config;

GRAPHNLS_API const char* graphnls_version(void);
GRAPHNLS_API const char* graphnls_last_error(void);
GRAPHNLS_API const char* graphnls_verdict_name(graphnls_verdict verdict);
GRAPHNLS_API void graphnls_string_free(char* s);

/* Graphs */
GRAPHNLS_API graphnls_status graphnls_graph_load(const char* path, graphnls_graph** out);
GRAPHNLS_API graphnls_status graphnls_graph_parse(const char* text, graphnls_graph** out);
GRAPHNLS_API graphnls_status graphnls_graph_line(double core_length, graphnls_graph** out);
GRAPHNLS_API graphnls_status graphnls_graph_double_bridge(double l1, double l2, graphnls_graph** out);
GRAPHNLS_API void graphnls_graph_free(graphnls_graph* graph);
/* Writes the validation report as JSON; *valid is 1 iff admissible. */
GRAPHNLS_API graphnls_status graphnls_graph_validate(const graphnls_graph* graph, char** report_json, int* valid);
GRAPHNLS_API graphnls_status graphnls_graph_core_measure(const graphnls_graph* graph, double* out);
GRAPHNLS_API graphnls_status graphnls_graph_half_line_count(const graphnls_graph* graph, size_t* out);

/* Minimisation */
GRAPHNLS_API void graphnls_solver_config_default(graphnls_solver_config* config);
GRAPHNLS_API graphnls_status graphnls_minimize(const graphnls_graph* graph, double mu, double p,
                                               const graphnls_solver_config* config,
                                               graphnls_result** out);
GRAPHNLS_API graphnls_status graphnls_result_energy(const graphnls_result* result, double* out);
GRAPHNLS_API graphnls_status graphnls_result_verdict(const graphnls_result* result, graphnls_verdict* out);
GRAPHNLS_API graphnls_status graphnls_result_json(const graphnls_result* result, char** out);
GRAPHNLS_API graphnls_status graphnls_result_write(const graphnls_result* result, const char* dir);
GRAPHNLS_API void graphnls_result_free(graphnls_result* result);

/* Seven-run existence diagnostic; threads == 0 uses GRAPHNLS_THREADS. */
GRAPHNLS_API graphnls_status graphnls_dichotomy(const graphnls_graph* graph, double mu, double p,
                                                const graphnls_solver_config* config, size_t threads,
                                                char** json, graphnls_verdict* verdict);

/* Analysis. c and C may be NULL for the default constants. */
GRAPHNLS_API graphnls_status graphnls_thresholds(double p, double mu, size_t half_lines,
                                                 const double* c, const double* C, char** json);
GRAPHNLS_API graphnls_status graphnls_certify(const graphnls_graph* graph, double p, double mu,
                                              const char* partition_path, const double* c,
                                              const double* C, char** json, int* valid);

/* Runs the sweep described by a JSON file and writes phase.csv into its
 * output directory; *sound is 0 when an EXIST_BAND row lacks a
 * NEGATIVE_MINIMUM verdict. */
GRAPHNLS_API graphnls_status graphnls_sweep(const char* spec_path, char** summary_json, int* sound);

/* Property suite. inject_c <= 0 keeps the default GN constants. */
GRAPHNLS_API graphnls_status graphnls_check(uint64_t seed, double inject_c, char** json, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* GRAPHNLS_GRAPHNLS_H */
