/* Copyright 2026 The kwave Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the kwave solver. Functions return KWAVE_OK or an error code; the
 * message of the last failure on the calling thread is available from kwave_last_error.
 * Strings returned through char ** outputs are owned by the caller and released with
 * kwave_string_free.
 */

#ifndef KWAVE_KWAVE_H
#define KWAVE_KWAVE_H

#include <stddef.h>

#if defined(KWAVE_BUILDING_LIBRARY)
#define KWAVE_API __attribute__((visibility("default")))
#else
#define KWAVE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kwave_status
{
  KWAVE_OK = 0,
  KWAVE_ERR_INVALID_ARGUMENT = 1,
  KWAVE_ERR_PARSE = 2,
  KWAVE_ERR_VALIDATION = 3,
  KWAVE_ERR_HYPOTHESIS = 4,
  KWAVE_ERR_CFL = 5,
  KWAVE_ERR_BLOWUP = 6,
  KWAVE_ERR_IO = 7,
  KWAVE_ERR_OPTIMIZER = 8,
  KWAVE_ERR_INTERNAL = 9
} kwave_status;

typedef struct kwave_config kwave_config;
typedef struct kwave_sim kwave_sim;

typedef struct kwave_energy
{
  double t;
  double E;
  double kinetic;
  double elastic;
  double kirchhoff;
  double boundary;
  double memory;
  double source;
  double gamma_fn;
  double rate_rhs;
} kwave_energy;

KWAVE_API const char *kwave_version(void);
KWAVE_API const char *kwave_last_error(void);
KWAVE_API void kwave_string_free(char *s);

KWAVE_API kwave_status kwave_config_parse(const char *text, kwave_config **out);
KWAVE_API kwave_status kwave_config_load(const char *path, kwave_config **out);
KWAVE_API kwave_status kwave_config_to_json(const kwave_config *cfg, char **out);
KWAVE_API void kwave_config_free(kwave_config *cfg);

/* Stepwise simulation of the configured scenario. */
KWAVE_API kwave_status kwave_sim_create(const kwave_config *cfg, kwave_sim **out);
KWAVE_API kwave_status kwave_sim_step(kwave_sim *sim, long steps);
KWAVE_API double kwave_sim_time(const kwave_sim *sim);
KWAVE_API kwave_status kwave_sim_energy(const kwave_sim *sim, kwave_energy *out);
KWAVE_API void kwave_sim_free(kwave_sim *sim);

/* Scenario drivers; each writes a JSON document to *json_out. */
KWAVE_API kwave_status kwave_run(const kwave_config *cfg, const char *outdir, char **json_out);
KWAVE_API kwave_status kwave_constants(const kwave_config *cfg, char **json_out);
KWAVE_API kwave_status kwave_check_kernel(const kwave_config *cfg, char **json_out);
KWAVE_API kwave_status kwave_decay_report(const kwave_config *cfg, const char *csv_path,
                                          char **json_out);
KWAVE_API kwave_status kwave_mms(const kwave_config *cfg, char **json_out);
KWAVE_API kwave_status kwave_sweep(const kwave_config *cfg, const double *amplitudes,
                                   size_t count, const char *outdir, char **json_out);

#ifdef __cplusplus
}
#endif

#endif /* KWAVE_KWAVE_H */
