#ifndef MODEPORT_H
#define MODEPORT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum ModeportStatus {
  MODEPORT_STATUS_OK = 0,
  MODEPORT_STATUS_NULL_POINTER = 1,
  MODEPORT_STATUS_INVALID_ARGUMENT = 2,
  MODEPORT_STATUS_GRID_TOO_COARSE = 3,
  MODEPORT_STATUS_PHASE_MATCHING = 4,
  MODEPORT_STATUS_INTERNAL = 5,
} ModeportStatus;

typedef enum ModeportClassification {
  MODEPORT_CLASSIFICATION_PSI_PLUS = 0,
  MODEPORT_CLASSIFICATION_PSI_MINUS = 1,
  MODEPORT_CLASSIFICATION_FAILURE = 2,
} ModeportClassification;

/**
 * Opaque teleportation result.
 */
typedef struct ModeportTeleport ModeportTeleport;

/**
 * One row of a teleportation result. Fidelities are NaN on failure outcomes.
 */
typedef struct ModeportOutcome {
  uint32_t n_a;
  uint32_t n_alice;
  enum ModeportClassification classification;
  double probability;
  double fidelity_min;
  double fidelity_mean;
} ModeportOutcome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the calling thread's last error message, nul-terminated and
 * truncated to `len` bytes, into `buf`. Returns the full message length
 * without the terminator, or 0 when there is no error.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t modeport_last_error(char *buf, size_t len);

/**
 * Library version as a static nul-terminated string.
 */
const char *modeport_version(void);

/**
 * Run the teleportation circuit for the input `cos(theta') |0> - i sin(theta')
 * e^{i(theta + phi)} |1>` on `grid_points` phases per reservoir. On success
 * `*out` owns a new handle.
 *
 * # Safety
 * `out` must be null or a valid pointer to writable storage for one handle.
 */
enum ModeportStatus modeport_teleport_run(double theta_prime,
                                          double phi,
                                          size_t grid_points,
                                          bool shared_reservoir,
                                          struct ModeportTeleport **out);

/**
 * # Safety
 * `handle` must be null or a handle from [`modeport_teleport_run`] that has
 * not been freed.
 */
void modeport_teleport_free(struct ModeportTeleport *handle);

/**
 * Phase-averaged probability of a successful read-out, or NaN for a null
 * handle.
 *
 * # Safety
 * `handle` must be null or a live handle.
 */
double modeport_teleport_success_probability(const struct ModeportTeleport *handle);

/**
 * # Safety
 * `handle` must be null or a live handle.
 */
bool modeport_teleport_ssr_compliant(const struct ModeportTeleport *handle);

/**
 * # Safety
 * `handle` must be null or a live handle.
 */
size_t modeport_teleport_outcome_count(const struct ModeportTeleport *handle);

/**
 * # Safety
 * `handle` must be null or a live handle; `out` must be null or writable.
 */
enum ModeportStatus modeport_teleport_outcome(const struct ModeportTeleport *handle,
                                              size_t index,
                                              struct ModeportOutcome *out);

/**
 * The JSON report for a result, as a new string to release with
 * [`modeport_string_free`]. Null on a null handle.
 *
 * # Safety
 * `handle` must be null or a live handle.
 */
char *modeport_teleport_to_json(const struct ModeportTeleport *handle);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void modeport_string_free(char *s);

/**
 * Swap infidelity of Bose-Hubbard hopping at each of the `len` ascending,
 * positive U/J ratios, written to `out`.
 *
 * # Safety
 * `ratios` must point to `len` readable values and `out` to `len` writable ones.
 */
enum ModeportStatus modeport_hardcore_scan(const double *ratios, size_t len, double *out);

/**
 * Deviation of the resolved-reservoir rotation from the ideal gate at each of
 * the `len` ascending mean occupations, written to `out`.
 *
 * # Safety
 * `nbars` must point to `len` readable values and `out` to `len` writable ones.
 */
enum ModeportStatus modeport_reservoir_scan(const double *nbars, size_t len, double *out);

/**
 * Send `message` (0 to 3) through the dense-coding circuit. Distinct
 * reservoirs are refused with `PHASE_MATCHING` unless `diagnostic` is set, in
 * which case the most likely decoding is still reported.
 *
 * # Safety
 * `decoded` and `deterministic` must each be null or writable.
 */
enum ModeportStatus modeport_dense_coding(uint8_t message,
                                          bool shared_reservoir,
                                          size_t grid_points,
                                          bool diagnostic,
                                          uint8_t *decoded,
                                          bool *deterministic);

/**
 * Run the built-in acceptance checks. `*passed` receives the number of
 * passing criteria and `*total` the number run.
 *
 * # Safety
 * `passed` and `total` must each be null or writable.
 */
enum ModeportStatus modeport_selftest(uint32_t *passed, uint32_t *total);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MODEPORT_H */
