#ifndef NCWAVE_H
#define NCWAVE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Group kind tags accepted by [`ncw_group_new`].
 */
#define NCW_KIND_EUCLIDEAN 0

#define NCW_KIND_HEISENBERG1 1

#define NCW_KIND_MOTION2 2

#define NCW_KIND_PRODUCT_R_Z 3

typedef enum NcwMotionPath {
  NCW_MOTION_PATH_BESSEL = 0,
  NCW_MOTION_PATH_DIRECT = 1,
} NcwMotionPath;

typedef enum NcwRule {
  NCW_RULE_PERIODIC = 0,
  NCW_RULE_TRAPEZOID = 1,
  NCW_RULE_END_CORRECTED = 2,
} NcwRule;

typedef enum NcwStatus {
  NCW_STATUS_OK = 0,
  NCW_STATUS_NULL_POINTER = 1,
  NCW_STATUS_DIMENSION = 2,
  NCW_STATUS_CAPABILITY = 3,
  NCW_STATUS_CONFIGURATION = 4,
  NCW_STATUS_PRECONDITION = 5,
  NCW_STATUS_KIND = 6,
  NCW_STATUS_DEGENERATE = 7,
  NCW_STATUS_DOMAIN = 8,
  NCW_STATUS_RESOLUTION = 9,
  NCW_STATUS_ALIGNMENT = 10,
  NCW_STATUS_FORMAT = 11,
  NCW_STATUS_IO = 12,
  NCW_STATUS_INEQUALITY = 13,
  NCW_STATUS_PANIC = 14,
} NcwStatus;

typedef struct NcwFourier NcwFourier;

typedef struct NcwGroup NcwGroup;

typedef struct NcwSignal NcwSignal;

/**
 * Grid of one configured coordinate. `has_bounds = 0` leaves `lo`/`hi`
 * unset, as for the angle of M(2).
 */
typedef struct NcwAxis {
  double lo;
  double hi;
  size_t n;
  enum NcwRule rule;
  uint8_t has_bounds;
} NcwAxis;

typedef struct NcwTransformOptions {
  double lambda_max;
  size_t lambda_points;
  double r_max;
  size_t r_points;
  size_t hermite_order;
  size_t mode_cutoff;
  enum NcwMotionPath motion_path;
  size_t circle_points;
} NcwTransformOptions;

typedef struct NcwPlancherel {
  double lhs;
  double rhs;
  double rel_error;
} NcwPlancherel;

typedef struct NcwUncertainty {
  double norm_sq;
  double time_moment;
  double freq_moment;
  double lhs;
  double rhs_without_constant;
  double min_constant;
  uint8_t divergence_flag;
  /**
   * 1 holds, 0 violated, −1 when no sharp constant applies.
   */
  int8_t sharp_bound_holds;
} NcwUncertainty;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *ncw_last_error_message(void);

enum NcwStatus ncw_group_new(uint8_t kind,
                             uint32_t param,
                             const struct NcwAxis *axes,
                             size_t n_axes,
                             struct NcwGroup **out);

/**
 * Number of samples a signal on this group holds.
 */
enum NcwStatus ncw_group_len(const struct NcwGroup *group, size_t *out);

void ncw_group_free(struct NcwGroup *group);

/**
 * Builds a signal from `len` samples in row-major order. `im` may be null
 * for a real signal.
 */
enum NcwStatus ncw_signal_from_samples(const struct NcwGroup *group,
                                       const double *re,
                                       const double *im,
                                       size_t len,
                                       struct NcwSignal **out);

/**
 * Reads a dense binary signal whose grids must match `group`.
 */
enum NcwStatus ncw_signal_read(const struct NcwGroup *group,
                               const char *path,
                               struct NcwSignal **out);

enum NcwStatus ncw_signal_write(const struct NcwSignal *signal, const char *path);

/**
 * Copies the samples into caller buffers of length `len`; `im` may be null.
 */
enum NcwStatus ncw_signal_samples(const struct NcwSignal *signal,
                                  double *re,
                                  double *im,
                                  size_t len);

enum NcwStatus ncw_signal_norm_sq(const struct NcwSignal *signal, double *out);

void ncw_signal_free(struct NcwSignal *signal);

/**
 * Library defaults for [`ncw_fourier`].
 */
struct NcwTransformOptions ncw_transform_options_default(void);

/**
 * Group Fourier transform; `options` may be null for the defaults.
 */
enum NcwStatus ncw_fourier(const struct NcwSignal *signal,
                           const struct NcwTransformOptions *options,
                           struct NcwFourier **out);

/**
 * Number of dual points.
 */
enum NcwStatus ncw_fourier_len(const struct NcwFourier *fd, size_t *out);

/**
 * `|f̂|²` or `‖f̂‖²_HS` at dual point `index`, together with its Plancherel weight.
 */
enum NcwStatus ncw_fourier_energy(const struct NcwFourier *fd,
                                  size_t index,
                                  double *energy,
                                  double *weight);

void ncw_fourier_free(struct NcwFourier *fd);

enum NcwStatus ncw_plancherel(const struct NcwSignal *signal,
                              const struct NcwFourier *fd,
                              struct NcwPlancherel *out);

/**
 * Uncertainty report for moment exponents `a, b ≥ 1`.
 */
enum NcwStatus ncw_uncertainty(const struct NcwSignal *signal,
                               const struct NcwFourier *fd,
                               double a,
                               double b,
                               struct NcwUncertainty *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NCWAVE_H */
