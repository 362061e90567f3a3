#ifndef FEEDSEC_H
#define FEEDSEC_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FsStatus {
  FS_STATUS_OK = 0,
  FS_STATUS_NULL_POINTER = 1,
  FS_STATUS_INVALID_ARGUMENT = 2,
  FS_STATUS_DEGENERATE = 3,
  FS_STATUS_PARSE_ERROR = 4,
  FS_STATUS_IO_ERROR = 5,
  FS_STATUS_PANIC = 6,
} FsStatus;

/**
 * Opaque binary symmetric system.
 */
typedef struct FsBscSystem FsBscSystem;

/**
 * Opaque Gaussian wiretap parameter set.
 */
typedef struct FsGaussianParams FsGaussianParams;

typedef struct FsRateBreakdown {
  double r1;
  double r2;
  double r3;
  double alpha;
  double total;
} FsRateBreakdown;

typedef struct FsMaurerResult {
  double bob_ber;
  double eve_ber;
  double expected_bob;
  double expected_eve;
} FsMaurerResult;

typedef struct FsRegionResult {
  double rate;
  double term_direct;
  double term_secrecy_sum;
  bool constraint_ok;
} FsRegionResult;

typedef struct FsLeakageBound {
  double c1;
  double c2;
  double one_shot_bits;
  double per_symbol_bits;
} FsLeakageBound;

typedef struct FsSkMonteCarlo {
  uint64_t trials;
  uint64_t error_count;
  double empirical_error_rate;
  double empirical_error_variance;
  double variance_standard_error;
  double theory_error_variance;
} FsSkMonteCarlo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * failing call on the same thread; never NULL.
 */
const char *fs_last_error(void);

enum FsStatus fs_binary_entropy(double p, double *out);

enum FsStatus fs_binary_entropy_inverse(double h, double *out);

enum FsStatus fs_bsc_system_new(double eps_f,
                                double del_f,
                                double eps_b,
                                double del_b,
                                struct FsBscSystem **out);

void fs_bsc_system_free(struct FsBscSystem *sys);

enum FsStatus fs_bsc_rate_breakdown(const struct FsBscSystem *sys,
                                    double alpha,
                                    struct FsRateBreakdown *out);

enum FsStatus fs_bsc_optimize_alpha(const struct FsBscSystem *sys, struct FsRateBreakdown *out);

enum FsStatus fs_bsc_backward_key_capacity(const struct FsBscSystem *sys, double *out);

enum FsStatus fs_bsc_no_feedback_capacity(double eps, double del, double *out);

enum FsStatus fs_maurer_simulate(double eps_b,
                                 double del_b,
                                 uint64_t n,
                                 uint64_t seed,
                                 struct FsMaurerResult *out);

/**
 * Evaluates a system given as a NUL-terminated JSON document.
 */
enum FsStatus fs_region_eval_json(const char *json, struct FsRegionResult *out);

enum FsStatus fs_gaussian_params_new(double power,
                                     double var_n,
                                     double var_m,
                                     double var_s,
                                     double rho1,
                                     double rho2,
                                     double rho3,
                                     struct FsGaussianParams **out);

void fs_gaussian_params_free(struct FsGaussianParams *params);

enum FsStatus fs_gaussian_capacity_forward(const struct FsGaussianParams *params, double *out);

enum FsStatus fs_gaussian_secrecy_capacity_no_feedback(const struct FsGaussianParams *params,
                                                       double *out);

enum FsStatus fs_gaussian_leakage_bound(const struct FsGaussianParams *params,
                                        size_t n,
                                        struct FsLeakageBound *out);

enum FsStatus fs_sk_error_variance_theory(const struct FsGaussianParams *params,
                                          size_t n,
                                          double *out);

enum FsStatus fs_sk_monte_carlo(const struct FsGaussianParams *params,
                                size_t n,
                                uint64_t num_messages,
                                uint64_t seed,
                                uint64_t trials,
                                struct FsSkMonteCarlo *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FEEDSEC_H */
