#ifndef UCIN_H
#define UCIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  UCIN_STATUS_OK = 0,
  UCIN_STATUS_NULL_POINTER = 1,
  UCIN_STATUS_INVALID_CONFIG = 2,
  UCIN_STATUS_PARSE = 3,
  UCIN_STATUS_IO = 4,
  UCIN_STATUS_DOMAIN = 5,
  UCIN_STATUS_QUADRATURE = 6,
  UCIN_STATUS_NUMERICAL = 7,
  UCIN_STATUS_DEGENERATE_CHANNEL = 8,
  UCIN_STATUS_EMPTY_NETWORK = 9,
  UCIN_STATUS_INVALID_UTF8 = 10,
  UCIN_STATUS_PANIC = 11,
} UcinStatus;

/**
 * Coordination strategy selector for [`ucin_estimate_ps`].
 */
typedef enum {
  /**
   * `param` is the IN range coefficient `mu >= 1`.
   */
  UCIN_STRATEGY_USER_CENTRIC = 0,
  /**
   * `param` is ignored.
   */
  UCIN_STRATEGY_NON_COORDINATION = 1,
  /**
   * `param` is the number of requested interferers, a nonnegative integer.
   */
  UCIN_STRATEGY_FIXED_NUMBER = 2,
  /**
   * `param` is the mean cluster size in BSs.
   */
  UCIN_STRATEGY_RANDOM_CLUSTERING = 3,
} UcinStrategy;

/**
 * Strategy selector for [`ucin_min_density_ratio`].
 */
typedef enum {
  UCIN_DENSITY_STRATEGY_PROPOSED = 0,
  UCIN_DENSITY_STRATEGY_NON_COORDINATION = 1,
} UcinDensityStrategy;

/**
 * Opaque network scenario.
 */
typedef struct UcinConfig UcinConfig;

/**
 * Outcome of a one-dimensional search.
 */
typedef struct {
  double argmax;
  double value;
  bool feasible;
} UcinOptimum;

/**
 * Monte Carlo success probability.
 */
typedef struct {
  double p_hat;
  double std_err;
  uint64_t n;
  uint64_t successes;
} UcinEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ucin_version(void);

/**
 * Message of the calling thread's most recent failure, or NULL if none.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *ucin_last_error_message(void);

/**
 * Perfect-CSI scenario with `mu = 1` and default window, sample count and seed.
 *
 * # Safety
 * `out` must be NULL or valid for writing one pointer.
 */
UcinStatus ucin_config_new(double lambda_b,
                           double lambda_u,
                           uint32_t m_antennas,
                           double alpha,
                           double sinr_threshold,
                           UcinConfig **out);

/**
 * Parses a flat `key = value` config.
 *
 * # Safety
 * `text` must be NULL or a NUL-terminated string; `out` must be NULL or writable.
 */
UcinStatus ucin_config_from_toml(const char *text, UcinConfig **out);

/**
 * Reads a config file.
 *
 * # Safety
 * `path` must be NULL or a NUL-terminated string; `out` must be NULL or writable.
 */
UcinStatus ucin_config_load(const char *path, UcinConfig **out);

/**
 * # Safety
 * `cfg` must be NULL or a live handle; `out` must be NULL or writable.
 */
UcinStatus ucin_config_clone(const UcinConfig *cfg, UcinConfig **out);

/**
 * Releases a handle; NULL is ignored.
 *
 * # Safety
 * `cfg` must be NULL or a handle not yet freed.
 */
void ucin_config_free(UcinConfig *cfg);

/**
 * Serializes the config in the flat file format; free with [`ucin_string_free`].
 *
 * # Safety
 * `cfg` must be NULL or a live handle; `out` must be NULL or writable.
 */
UcinStatus ucin_config_to_toml(const UcinConfig *cfg, char **out);

/**
 * Frees a string returned by this library; NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string from [`ucin_config_to_toml`] not yet freed.
 */
void ucin_string_free(char *s);

/**
 * # Safety
 * `cfg` must be NULL or a live handle not used concurrently.
 */
UcinStatus ucin_config_set_mu(UcinConfig *cfg, double mu);

/**
 * Sets the linear SIR threshold.
 *
 * # Safety
 * `cfg` must be NULL or a live handle not used concurrently.
 */
UcinStatus ucin_config_set_sinr_threshold(UcinConfig *cfg, double sinr_threshold);

/**
 * # Safety
 * `cfg` must be NULL or a live handle not used concurrently.
 */
UcinStatus ucin_config_set_m_antennas(UcinConfig *cfg, uint32_t m_antennas);

/**
 * # Safety
 * `cfg` must be NULL or a live handle not used concurrently.
 */
UcinStatus ucin_config_set_alpha(UcinConfig *cfg, double alpha);

/**
 * # Safety
 * `cfg` must be NULL or a live handle not used concurrently.
 */
UcinStatus ucin_config_set_densities(UcinConfig *cfg, double lambda_b, double lambda_u);

/**
 * Sets RVQ feedback bits; a negative value selects perfect CSI.
 *
 * # Safety
 * `cfg` must be NULL or a live handle not used concurrently.
 */
UcinStatus ucin_config_set_feedback_bits(UcinConfig *cfg, int32_t bits);

/**
 * # Safety
 * `cfg` must be NULL or a live handle not used concurrently.
 */
UcinStatus ucin_config_set_window_side(UcinConfig *cfg, double side);

/**
 * # Safety
 * `cfg` must be NULL or a live handle not used concurrently.
 */
UcinStatus ucin_config_set_n_realizations(UcinConfig *cfg, uint64_t n);

/**
 * # Safety
 * `cfg` must be NULL or a live handle not used concurrently.
 */
UcinStatus ucin_config_set_seed(UcinConfig *cfg, uint64_t seed);

/**
 * Analytical success probability, perfect or limited feedback by the config.
 *
 * # Safety
 * `cfg` must be NULL or a live handle; `out_ps` must be NULL or writable.
 */
UcinStatus ucin_ps_analytic(const UcinConfig *cfg, double *out_ps);

/**
 * Analytical `mu` maximizing the success probability on `[1, mu_max]`.
 *
 * # Safety
 * `cfg` must be NULL or a live handle; `out` must be NULL or writable.
 */
UcinStatus ucin_optimal_mu(const UcinConfig *cfg, double mu_max, UcinOptimum *out);

/**
 * Smallest BS-user density ratio whose analytical success probability reaches `target_ps`.
 *
 * `strategy` holds a [`UcinDensityStrategy`] value.
 *
 * # Safety
 * `cfg` must be NULL or a live handle; `out` must be NULL or writable.
 */
UcinStatus ucin_min_density_ratio(const UcinConfig *cfg,
                                  double target_ps,
                                  uint32_t strategy,
                                  UcinOptimum *out);

/**
 * Monte Carlo success probability of a strategy under the config's CSI regime.
 *
 * `strategy` holds a [`UcinStrategy`] value whose parameter is `param`.
 *
 * # Safety
 * `cfg` must be NULL or a live handle; `out` must be NULL or writable.
 */
UcinStatus ucin_estimate_ps(const UcinConfig *cfg,
                            uint32_t strategy,
                            double param,
                            UcinEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UCIN_H */
