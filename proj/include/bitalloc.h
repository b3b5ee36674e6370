/* C ABI for the bitalloc library.
 *
 * Every function that can fail returns a ba_status; BA_OK means success.
 * On failure, ba_last_error() returns a thread-local message describing
 * what went wrong. Strings returned through ba_string/char** out-params
 * are heap-allocated and must be released with ba_string_free.
 *
 * Handles (ba_config, ba_dag, ba_model, ba_cloud, ba_front) are opaque;
 * free each with its matching *_free function. Freeing NULL is a no-op.
 */

#ifndef BITALLOC_H
#define BITALLOC_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ba_status {
  BA_OK = 0,
  BA_INVALID_ARGUMENT,
  BA_DIMENSION_MISMATCH,
  BA_EMPTY_INPUT,
  BA_CYCLE,
  BA_UNREACHABLE,
  BA_SOURCE,
  BA_INDEX,
  BA_INFEASIBLE_ALLOCATION,
  BA_OFF_GRID,
  BA_EMPTY_SLICE,
  BA_OUT_OF_RANGE,
  BA_NOT_MONOTONE,
  BA_GRID_TOO_LARGE,
  BA_NOT_CONVEX_MODEL,
  BA_NO_CONVERGENCE,
  BA_TOO_FEW_SAMPLES,
  BA_EMPTY_FRONT,
  BA_PARSE,
  BA_SCHEMA,
  BA_IO,
  BA_UNKNOWN
} ba_status;

typedef struct ba_config ba_config;
typedef struct ba_dag ba_dag;
typedef struct ba_model ba_model;
typedef struct ba_cloud ba_cloud;
typedef struct ba_front ba_front;

/* Static symbolic name for a status, e.g. "schema". Never NULL. */
const char* ba_status_name(ba_status status);

/* Process exit code conventions for a failed status: 3 for parse/schema
 * problems, 1 for everything else. BA_OK maps to 0. */
int ba_exit_code(ba_status status);

/* Thread-local message from the most recent failing call. Empty string if
 * the last call on this thread succeeded. Owned by the library. */
const char* ba_last_error(void);

/* Release a string returned through a char** out-parameter. */
void ba_string_free(char* s);

const char* ba_version(void);

/* --- configuration ----------------------------------------------------- */

ba_status ba_config_load(const char* path, ba_config** out);

/* Parse configuration from a JSON string; relative table paths resolve
 * against base_dir (may be NULL for the current directory). */
ba_status ba_config_load_text(const char* text, const char* base_dir, ba_config** out);

/* Built-in example configuration by name (see ba_fixture_names). */
ba_status ba_config_fixture(const char* name, ba_config** out);

/* Newline-separated list of built-in fixture names. Free with ba_string_free. */
ba_status ba_fixture_names(char** out);

ba_status ba_config_name(const ba_config* config, char** out);
void ba_config_free(ba_config* config);

/* --- dependency graph --------------------------------------------------- */

ba_status ba_dag_build(const ba_config* config, ba_dag** out);
void ba_dag_free(ba_dag* dag);

int ba_dag_node_count(const ba_dag* dag);

/* Validation report (topological order, per-node subgraphs) as JSON.
 * Free with ba_string_free. */
ba_status ba_dag_validate_json(const ba_dag* dag, char** out);

/* --- distortion model ---------------------------------------------------- */

ba_status ba_model_build(const ba_config* config, const ba_dag* dag, ba_model** out);
void ba_model_free(ba_model* model);

/* Evaluate the model at an allocation of `count` per-node bit rates.
 * `count` must equal the node count; `out` receives `count` distortions. */
ba_status ba_model_evaluate(const ba_model* model, const ba_dag* dag, const double* bits,
                            int count, double* out);

/* --- enumeration and Pareto filtering ------------------------------------ */

ba_status ba_enumerate(const ba_model* model, const ba_dag* dag, double budget,
                       double grid_step, ba_cloud** out);
void ba_cloud_free(ba_cloud* cloud);

int ba_cloud_size(const ba_cloud* cloud);

/* Copy point `index` out of the cloud: `bits` and `distortion` each receive
 * node_count values (either may be NULL to skip). */
ba_status ba_cloud_point(const ba_cloud* cloud, int index, double* bits, double* distortion);

/* Label the cloud with eps-slack dominance. */
ba_status ba_filter_front(const ba_cloud* cloud, double eps, ba_front** out);
void ba_front_free(ba_front* front);

/* Point counts by label. Any out-pointer may be NULL. */
ba_status ba_front_counts(const ba_front* front, int* pareto_count, int* weak_count,
                          int* total_count);

/* Label of point `index`: 0 pareto, 1 weak_only, 2 dominated. */
ba_status ba_front_label(const ba_front* front, int index, int* out);

/* Minimize the weighted sum of distortions over the cloud. `weights` holds
 * node_count nonnegative entries, not all zero. Result JSON lists the
 * objective and all tied minimizers. Free with ba_string_free. */
ba_status ba_scalarize_discrete(const ba_cloud* cloud, const double* weights, int count,
                                char** out);

/* --- experiment runner ---------------------------------------------------- */

/* Run one subcommand (validate, enumerate, front, scalarize, sweep, check,
 * compare, demo) against a configuration.
 *
 * options_json may be NULL or a JSON object with optional keys:
 *   "weights"          array of numbers (scalarize only)
 *   "output_directory" string, overrides the configured directory
 *   "psnr"             bool, report log-scale quality instead of distortion
 *   "eps"              number, dominance slack for front filtering
 *
 * On BA_OK, *exit_code is the suggested process exit code (0, or 2 when a
 * requested check found violations) and *report_json carries the run report.
 * Free *report_json with ba_string_free. */
ba_status ba_run(const ba_config* config, const char* subcommand, const char* options_json,
                 int* exit_code, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* BITALLOC_H */
