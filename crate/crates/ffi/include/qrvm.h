/* C interface to the qrvm Vlasov-Maxwell solver. */

#ifndef QRVM_H
#define QRVM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
enum QrvmStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  Ok = 0,
  NullPointer = 1,
  ConfigError = 2,
  BlowUp = 3,
  IoError = 4,
  InvalidArgument = 5,
  InternalError = 6,
};
#ifndef __cplusplus
typedef int32_t QrvmStatus;
#endif // __cplusplus

/**
 * Opaque parsed configuration.
 */
typedef struct QrvmConfig QrvmConfig;

/**
 * Opaque simulation handle.
 */
typedef struct QrvmSim QrvmSim;

/**
 * Mesh summary of a simulation handle.
 */
typedef struct QrvmGridInfo {
  uint64_t n_x;
  uint64_t n_p;
  double p_max;
  double dx;
  double dp;
} QrvmGridInfo;

/**
 * Diagnostics of the current state; `rel_*` are relative to the t = 0
 * record of the same handle.
 */
typedef struct QrvmDiagnostics {
  double t;
  double mass;
  double l2;
  double wtk;
  double wtp;
  double wlk;
  double wlp;
  double w_total;
  double rel_mass;
  double rel_l2;
  double rel_energy;
} QrvmDiagnostics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version string of the library, NUL-terminated, statically allocated.
 */
const char *qrvm_version(void);

/**
 * Message of the most recent failure on this thread (empty when none).
 */
const char *qrvm_last_error(void);

/**
 * Parses configuration text into a handle written to `out`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
QrvmStatus qrvm_config_parse(const char *text, struct QrvmConfig **out);

/**
 * Releases a configuration handle (NULL is a no-op).
 *
 * # Safety
 * `cfg` must come from `qrvm_config_parse` and not be freed twice.
 */
void qrvm_config_free(struct QrvmConfig *cfg);

/**
 * Scheme name of a parsed configuration (borrowed, static).
 *
 * # Safety
 * `cfg` must be a live handle from `qrvm_config_parse`.
 */
const char *qrvm_config_scheme(const struct QrvmConfig *cfg);

/**
 * Builds an initialized simulation from a parsed configuration.
 *
 * # Safety
 * `cfg` must be a live handle and `out` a valid pointer.
 */
QrvmStatus qrvm_sim_new(const struct QrvmConfig *cfg, struct QrvmSim **out);

/**
 * Releases a simulation handle (NULL is a no-op).
 *
 * # Safety
 * `sim` must come from `qrvm_sim_new` and not be freed twice.
 */
void qrvm_sim_free(struct QrvmSim *sim);

/**
 * Advances one time step; writes the dt taken to `dt_out` when non-NULL.
 * Returns `BlowUp` once max |f| exceeds the blow-up threshold or turns
 * non-finite.
 *
 * # Safety
 * `sim` must be a live handle.
 */
QrvmStatus qrvm_sim_step(struct QrvmSim *sim, double *dt_out);

/**
 * Current simulation time.
 *
 * # Safety
 * `sim` must be a live handle.
 */
double qrvm_sim_time(const struct QrvmSim *sim);

/**
 * Number of completed steps.
 *
 * # Safety
 * `sim` must be a live handle.
 */
uint64_t qrvm_sim_step_count(const struct QrvmSim *sim);

/**
 * Mesh summary.
 *
 * # Safety
 * `sim` must be a live handle and `out` a valid pointer.
 */
QrvmStatus qrvm_sim_grid(const struct QrvmSim *sim, struct QrvmGridInfo *out);

/**
 * Diagnostics of the current state, relative fields against t = 0.
 *
 * # Safety
 * `sim` must be a live handle and `out` a valid pointer.
 */
QrvmStatus qrvm_sim_diagnostics(const struct QrvmSim *sim, struct QrvmDiagnostics *out);

/**
 * Copies f over the physical cells into `buf`, row-major in x then p
 * (index = i * n_p + j), the same layout as the snapshot payload.
 * `len` must equal n_x * n_p.
 *
 * # Safety
 * `sim` must be a live handle; `buf` must point to `len` writable doubles.
 */
QrvmStatus qrvm_sim_distribution(const struct QrvmSim *sim, double *buf, uint64_t len);

/**
 * Runs a configuration to completion, writing diagnostics and snapshots
 * to its output directory (the same behavior as the CLI).
 *
 * # Safety
 * `cfg` must be a live handle.
 */
QrvmStatus qrvm_run(const struct QrvmConfig *cfg);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QRVM_H */
