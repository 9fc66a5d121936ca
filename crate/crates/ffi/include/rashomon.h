#ifndef RASHOMON_H
#define RASHOMON_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum GrsStatus {
  GRS_STATUS_OK = 0,
  GRS_STATUS_NULL_POINTER = 1,
  GRS_STATUS_INVALID_ARGUMENT = 2,
  GRS_STATUS_CONFIG = 3,
  GRS_STATUS_IO = 4,
  GRS_STATUS_DATA = 5,
  GRS_STATUS_MODEL = 6,
  GRS_STATUS_RUNTIME = 7,
  GRS_STATUS_PANIC = 8,
} GrsStatus;

/*
 Loss used by evaluation helpers.
 */
typedef enum GrsLoss {
  GRS_LOSS_MEAN_SQUARED_ERROR = 0,
  GRS_LOSS_MEAN_ABSOLUTE_ERROR = 1,
  GRS_LOSS_LOGISTIC_LOSS = 2,
  GRS_LOSS_ZERO_ONE = 3,
} GrsLoss;

/*
 Opaque run configuration handle.
 */
typedef struct GrsConfig GrsConfig;

/*
 Opaque dataset handle.
 */
typedef struct GrsDataset GrsDataset;

/*
 Opaque model handle.
 */
typedef struct GrsModel GrsModel;

/*
 Opaque report handle.
 */
typedef struct GrsReport GrsReport;

/*
 One metrics row of a report.
 */
typedef struct GrsMetrics {
  double epsilon;
  double ser;
  double fer_first_order;
  double fer_second_order;
  size_t n_members;
  size_t n_searched;
} GrsMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null after a
 success. Valid until the next call on this thread.
 */
const char *grs_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *grs_version(void);

/*
 Frees a string returned by this library.

 # Safety
 `s` must come from this library or be null.
 */
void grs_string_free(char *s);

/*
 Synthetic quadratic-roots dataset with `n` rows.

 # Safety
 `out` must be a valid pointer.
 */
enum GrsStatus grs_dataset_quadratic(size_t n, uint64_t seed, struct GrsDataset **out);

/*
 Dataset from row-major `x` (`rows * n_features`) and `y`
 (`rows * n_targets`). Columns are named `x0..` and `y0..`.

 # Safety
 `x` and `y` must point to arrays of the stated sizes; `out` must be valid.
 */
enum GrsStatus grs_dataset_new(const double *x,
                               const double *y,
                               size_t rows,
                               size_t n_features,
                               size_t n_targets,
                               struct GrsDataset **out);

/*
 # Safety
 `d` must be a live handle or null.
 */
size_t grs_dataset_rows(const struct GrsDataset *d);

/*
 # Safety
 `d` must be a live handle or null.
 */
size_t grs_dataset_features(const struct GrsDataset *d);

/*
 # Safety
 `d` must be a live handle or null.
 */
size_t grs_dataset_targets(const struct GrsDataset *d);

/*
 # Safety
 `d` must come from this library or be null; it is invalid afterwards.
 */
void grs_dataset_free(struct GrsDataset *d);

/*
 Linear model `y = x W + b` with row-major `weights` (`n_in * n_out`).

 # Safety
 `weights` and `bias` must point to arrays of the stated sizes.
 */
enum GrsStatus grs_model_linear(const double *weights,
                                const double *bias,
                                size_t n_in,
                                size_t n_out,
                                struct GrsModel **out);

/*
 Closed-form root oracle for the quadratic dataset.

 # Safety
 `out` must be a valid pointer.
 */
enum GrsStatus grs_model_quadratic(struct GrsModel **out);

/*
 Loads a model bundle written by the `rashomon train` command.

 # Safety
 `path` must be a NUL-terminated string; `out` must be valid.
 */
enum GrsStatus grs_model_load(const char *path, struct GrsModel **out);

/*
 # Safety
 `m` must be a live handle or null.
 */
size_t grs_model_input_dim(const struct GrsModel *m);

/*
 # Safety
 `m` must be a live handle or null.
 */
size_t grs_model_output_dim(const struct GrsModel *m);

/*
 Predicts `rows` inputs from row-major `x` into `out`, which must hold
 `rows * output_dim` values.

 # Safety
 Pointers must reference arrays of the stated sizes.
 */
enum GrsStatus grs_model_predict(const struct GrsModel *m,
                                 const double *x,
                                 size_t rows,
                                 double *out,
                                 size_t out_len);

/*
 Empirical loss of `m` on `d`.

 # Safety
 Handles must be live; `out` must be valid.
 */
enum GrsStatus grs_model_loss(const struct GrsModel *m,
                              const struct GrsDataset *d,
                              enum GrsLoss loss,
                              double *out);

/*
 Monte Carlo permutation importance of the feature columns in
 `features` (one or two indices): mean increase in loss over `repeats`
 shuffles and its standard error.

 # Safety
 `features` must point to `n_features` indices; outputs must be valid.
 */
enum GrsStatus grs_permutation_importance(const struct GrsModel *m,
                                          const struct GrsDataset *d,
                                          const size_t *features,
                                          size_t n_features,
                                          enum GrsLoss loss,
                                          size_t repeats,
                                          uint64_t seed,
                                          double *out_mean,
                                          double *out_std_error);

/*
 # Safety
 `m` must come from this library or be null.
 */
void grs_model_free(struct GrsModel *m);

/*
 Parses and validates a TOML run configuration.

 # Safety
 `toml` must be a NUL-terminated string; `out` must be valid.
 */
enum GrsStatus grs_config_parse(const char *toml, struct GrsConfig **out);

/*
 Sets the configured output directory, which [`grs_report_emit`] uses
 when given a null directory.

 # Safety
 `c` must be a live handle; `dir` a NUL-terminated string.
 */
enum GrsStatus grs_config_set_output_dir(struct GrsConfig *c, const char *dir);

/*
 # Safety
 `c` must come from this library or be null.
 */
void grs_config_free(struct GrsConfig *c);

/*
 Runs every stage in memory. Nothing is written to disk.

 # Safety
 `c` must be a live handle; `out` must be valid.
 */
enum GrsStatus grs_run(const struct GrsConfig *c, struct GrsReport **out);

/*
 Writes the report files into `dir`, or into the configured output
 directory when `dir` is null.

 # Safety
 `r` must be a live handle; `dir` null or a NUL-terminated string.
 */
enum GrsStatus grs_report_emit(const struct GrsReport *r, const char *dir);

/*
 The report as JSON. Free the string with [`grs_string_free`].

 # Safety
 `r` must be a live handle; `out` must be valid.
 */
enum GrsStatus grs_report_json(const struct GrsReport *r, char **out);

/*
 Number of metrics rows (one per method and tolerance).

 # Safety
 `r` must be a live handle or null.
 */
size_t grs_report_metrics_len(const struct GrsReport *r);

/*
 Metrics row `index`. Its method name is written to `method` (freed with
 [`grs_string_free`]) unless `method` is null.

 # Safety
 `r` must be a live handle; `out` must be valid.
 */
enum GrsStatus grs_report_metrics(const struct GrsReport *r,
                                  size_t index,
                                  struct GrsMetrics *out,
                                  char **method);

/*
 # Safety
 `r` must come from this library or be null.
 */
void grs_report_free(struct GrsReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RASHOMON_H */
