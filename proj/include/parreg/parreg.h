/*
 * Copyright 2026 The parreg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libparreg. Every call returns a parreg_status; on failure
 * parreg_last_error() holds a message for the calling thread. Strings
 * returned through char** are owned by the caller and released with
 * parreg_string_free. Configuration and report strings are JSON. */

#ifndef PARREG_PARREG_H_
#define PARREG_PARREG_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PARREG_BUILDING_LIBRARY)
#define PARREG_API __attribute__((visibility("default")))
#else
#define PARREG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum parreg_status {
  PARREG_OK = 0,
  PARREG_E_INVALID_ARGUMENT = 1,
  PARREG_E_CONFIG = 2,
  PARREG_E_DOMAIN = 3,
  PARREG_E_GEOMETRY = 4,
  PARREG_E_RANGE = 5,
  PARREG_E_RESOLUTION = 6,
  PARREG_E_MALFORMED_HEADER = 7,
  PARREG_E_TRUNCATED = 8,
  PARREG_E_CHECKSUM = 9,
  PARREG_E_IO = 10,
  PARREG_E_NUMERICAL = 11,
  PARREG_E_FIT = 12,
  PARREG_E_INTERNAL = 13
} parreg_status;

typedef enum parreg_window {
  PARREG_WINDOW_PAPER_LITERAL = 0,
  PARREG_WINDOW_CYLINDER = 1
} parreg_window;

typedef struct parreg_field parreg_field;
typedef struct parreg_points parreg_points;

typedef struct parreg_functional_values {
  double a, e, c, d;
  double err; /* largest per-functional error estimate */
} parreg_functional_values;

/* ---- library ---------------------------------------------------------- */

PARREG_API const char* parreg_version(void);
/* "E_DOMAIN" etc.; "OK" for PARREG_OK. */
PARREG_API const char* parreg_status_string(parreg_status status);
/* Message of the last failure on this thread; empty when none. */
PARREG_API const char* parreg_last_error(void);
PARREG_API void parreg_string_free(char* s);
PARREG_API parreg_status parreg_crc64_file(const char* path, uint64_t* out);
/* Schema check of a CLI run configuration. */
PARREG_API parreg_status parreg_config_validate(const char* subcommand, const char* config_json);

/* ---- fields ----------------------------------------------------------- */

PARREG_API parreg_status parreg_field_load(const char* dir, parreg_field** out);
PARREG_API parreg_status parreg_field_store(const parreg_field* field, const char* dir);
/* Config of the "generate" subcommand. */
PARREG_API parreg_status parreg_field_generate(const char* config_json, parreg_field** out);
/* Config of the "solve" subcommand; diagnostics_json may be NULL. */
PARREG_API parreg_status parreg_field_solve(const char* config_json, parreg_field** out,
                                            char** diagnostics_json);
PARREG_API parreg_status parreg_field_rescale(const parreg_field* field, double lambda,
                                              parreg_field** out);
/* dims = {nx, ny, nz, nt}, lengths = {lx, ly, lz}. Any pointer may be NULL. */
PARREG_API parreg_status parreg_field_grid(const parreg_field* field, int dims[4],
                                           double lengths[3], double* t0, double* dt);
PARREG_API int parreg_field_has_magnetic(const parreg_field* field);
PARREG_API void parreg_field_free(parreg_field* field);

/* ---- functionals ------------------------------------------------------ */

PARREG_API parreg_status parreg_functionals(const parreg_field* field, const double x[3],
                                            double t, double r, parreg_window mode, int mhd,
                                            parreg_functional_values* out);
PARREG_API parreg_status parreg_theorem1_lhs(const parreg_field* field, const double x[3],
                                             double t, double rho, double* value,
                                             double* error);
/* Residual of the local energy inequality at a stored time t with the default
 * cutoff of radius rho. */
PARREG_API parreg_status parreg_energy_residual(const parreg_field* field, const double x[3],
                                                double t, double rho, double* residual);
/* Config of the "functionals" subcommand; either output may be NULL. */
PARREG_API parreg_status parreg_functionals_batch(const parreg_field* field,
                                                  const char* config_json, char** csv,
                                                  char** json);

/* ---- schedule and lemmas ---------------------------------------------- */

/* constants_json may be NULL for the defaults. */
PARREG_API parreg_status parreg_schedule(double gamma, const char* constants_json,
                                         double eps_fraction, char** json);
/* gamma as "p/q", an integer or a decimal. */
PARREG_API parreg_status parreg_check_identities(const char* gamma, int* passed, char** json);
/* Config of the "verify-lemmas" subcommand. */
PARREG_API parreg_status parreg_verify_lemmas(const parreg_field* field, const char* config_json,
                                              char** json, char** csv);

/* ---- criteria --------------------------------------------------------- */

PARREG_API parreg_status parreg_check_eps1(const parreg_field* field, const double x[3],
                                           double t, double r, double eps1, double* value,
                                           int* passes);
PARREG_API parreg_status parreg_gradient_criterion(const parreg_field* field, const double x[3],
                                                   double t, double r_min, double eps2,
                                                   char** json);
/* Config of the "certify" subcommand; the report lists one certificate per
 * point. */
PARREG_API parreg_status parreg_certify(const parreg_field* field, const char* config_json,
                                        char** json);
/* Config of the "scan" subcommand. */
PARREG_API parreg_status parreg_scan(const parreg_field* field, const char* config_json,
                                     char** csv, char** json);

/* ---- point sets and dimensions ---------------------------------------- */

/* xyzt holds n (x, y, z, t) quadruples. */
PARREG_API parreg_status parreg_points_create(const double* xyzt, size_t n, parreg_points** out);
PARREG_API parreg_status parreg_points_load_csv(const char* path, parreg_points** out);
PARREG_API parreg_status parreg_points_save_csv(const parreg_points* points, const char* path);
/* Named calibration fixture; ladder_json (may be NULL) receives
 * {"ladder": [...], "expected_dimension": d}. */
PARREG_API parreg_status parreg_points_fixture(const char* name, parreg_points** out,
                                               char** ladder_json);
PARREG_API size_t parreg_points_size(const parreg_points* points);
PARREG_API void parreg_points_free(parreg_points* points);

PARREG_API parreg_status parreg_box_count(const parreg_points* points, double r, int with_cover,
                                          int threads, uint64_t* count, char** json);
PARREG_API parreg_status parreg_dimension(const parreg_points* points, const double* ladder,
                                          size_t n, int threads, char** json, char** csv);
PARREG_API parreg_status parreg_hausdorff(const parreg_points* points, double alpha,
                                          const double* deltas, size_t n, int depth, char** json,
                                          char** csv);
PARREG_API parreg_status parreg_vitali(const parreg_points* points, double r, char** json);
/* eps <= 0 selects the schedule's eps for gamma. */
PARREG_API parreg_status parreg_budget(const parreg_field* field, const parreg_points* points,
                                       double r, double gamma, double eps, char** json);

#ifdef __cplusplus
}
#endif

#endif /* PARREG_PARREG_H_ */
