/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef ORBITLAB_H
#define ORBITLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Multiplicity value standing for an infinite multiplicity.
 */
#define ORBITLAB_MULT_INFINITE UINT64_MAX

typedef enum OrbitlabStatus {
  ORBITLAB_STATUS_OK = 0,
  ORBITLAB_STATUS_INVALID_PARAMETER = 1,
  ORBITLAB_STATUS_NOT_IN_REGULAR_SET = 2,
  ORBITLAB_STATUS_BOUNDARY_EIGENVALUE = 3,
  ORBITLAB_STATUS_RADIUS_ERROR = 4,
  ORBITLAB_STATUS_RESONANCE_FAILURE = 5,
  ORBITLAB_STATUS_AMBIGUOUS_RANK = 6,
  ORBITLAB_STATUS_STEP_UNDERFLOW = 7,
  ORBITLAB_STATUS_NUMERIC = 8,
  ORBITLAB_STATUS_NULL_POINTER = 9,
  ORBITLAB_STATUS_INDEX_OUT_OF_RANGE = 10,
  ORBITLAB_STATUS_PANIC = 11,
} OrbitlabStatus;

typedef enum OrbitlabClass {
  ORBITLAB_CLASS_HOLO = 0,
  ORBITLAB_CLASS_ANTI_HOLO = 1,
  ORBITLAB_CLASS_NEITHER = 2,
} OrbitlabClass;

/**
 * Restriction of a discrete series to `B` or `B1`.
 */
typedef struct OrbitlabBranching OrbitlabBranching;

/**
 * Discrete-series parameter `(f0H, f0Z)`.
 */
typedef struct OrbitlabDiscreteSeries OrbitlabDiscreteSeries;

/**
 * A system `z x' = (A + B z + C z^2) x` in the variable `z`.
 */
typedef struct OrbitlabSystem OrbitlabSystem;

/**
 * Numerical settings of the L2 dimension count.
 */
typedef struct OrbitlabConfig {
  double z0;
  double z1;
  double rank_tol;
  double integration_tol;
} OrbitlabConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next orbitlab call on the same thread.
 */
const char *orbitlab_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *orbitlab_version(void);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from an orbitlab function documented as returning an owned
 * string, and must not be used afterwards.
 */
void orbitlab_string_free(char *s);

/**
 * Default numerical settings.
 */
struct OrbitlabConfig orbitlab_config_default(void);

/**
 * # Safety
 * `out_ds` must be valid for writes.
 */
enum OrbitlabStatus orbitlab_ds_new(int64_t f0h,
                                    int64_t f0z,
                                    struct OrbitlabDiscreteSeries **out_ds);

/**
 * `chamber` is 1, 2 or 3; `second` is `n3`, `n23` or `n2` accordingly.
 *
 * # Safety
 * `out_ds` must be valid for writes.
 */
enum OrbitlabStatus orbitlab_ds_from_harish_chandra(int64_t n1,
                                                    int64_t second,
                                                    int32_t chamber,
                                                    struct OrbitlabDiscreteSeries **out_ds);

/**
 * # Safety
 * `ds` must be NULL or a handle from `orbitlab_ds_*` not yet freed.
 */
void orbitlab_ds_free(struct OrbitlabDiscreteSeries *ds);

/**
 * # Safety
 * `ds` must be a live handle; the out pointers must be valid for writes.
 */
enum OrbitlabStatus orbitlab_ds_params(const struct OrbitlabDiscreteSeries *ds,
                                       int64_t *f0h,
                                       int64_t *f0z,
                                       enum OrbitlabClass *class_);

/**
 * # Safety
 * `ds` must be a live handle and `selected` valid for writes.
 */
enum OrbitlabStatus orbitlab_central_character_selects(const struct OrbitlabDiscreteSeries *ds,
                                                       int64_t m,
                                                       bool *selected);

/**
 * Restriction to `B`, families cut at `n_max` terms.
 *
 * # Safety
 * `ds` must be a live handle and `out_br` valid for writes.
 */
enum OrbitlabStatus orbitlab_branch_b(const struct OrbitlabDiscreteSeries *ds,
                                      size_t n_max,
                                      struct OrbitlabBranching **out_br);

/**
 * Restriction to `B1`.
 *
 * # Safety
 * `ds` must be a live handle and `out_br` valid for writes.
 */
enum OrbitlabStatus orbitlab_branch_b1(const struct OrbitlabDiscreteSeries *ds,
                                       struct OrbitlabBranching **out_br);

/**
 * # Safety
 * `br` must be NULL or a live branching handle.
 */
void orbitlab_branching_free(struct OrbitlabBranching *br);

/**
 * Number of listed entries and whether every multiplicity is finite.
 *
 * # Safety
 * `br` must be a live handle; the out pointers must be valid for writes.
 */
enum OrbitlabStatus orbitlab_branching_info(const struct OrbitlabBranching *br,
                                            size_t *len,
                                            bool *admissible);

/**
 * Entry `index`: label `m` (`has_m` is false for `B1`), sign (+1/-1) and
 * multiplicity (`ORBITLAB_MULT_INFINITE` for infinite).
 *
 * # Safety
 * `br` must be a live handle; the out pointers must be valid for writes.
 */
enum OrbitlabStatus orbitlab_branching_entry(const struct OrbitlabBranching *br,
                                             size_t index,
                                             bool *has_m,
                                             int64_t *m,
                                             int32_t *sign,
                                             uint64_t *mult);

/**
 * The system `D±_m` of a non-holomorphic discrete series; `sign` is +1 or -1.
 *
 * # Safety
 * `ds` must be a live handle and `out_sys` valid for writes.
 */
enum OrbitlabStatus orbitlab_system_build(const struct OrbitlabDiscreteSeries *ds,
                                          int64_t m,
                                          int32_t sign,
                                          struct OrbitlabSystem **out_sys);

/**
 * # Safety
 * `sys` must be NULL or a live system handle.
 */
void orbitlab_system_free(struct OrbitlabSystem *sys);

/**
 * # Safety
 * `sys` must be a live handle and `size` valid for writes.
 */
enum OrbitlabStatus orbitlab_system_size(const struct OrbitlabSystem *sys, size_t *size);

/**
 * Copy matrix `which` (0 = A, 1 = B, 2 = C) row-major into `re` and `im`,
 * each holding `size * size` doubles.
 *
 * # Safety
 * `sys` must be a live handle; `re` and `im` must each be valid for
 * `size * size` writes.
 */
enum OrbitlabStatus orbitlab_system_matrix(const struct OrbitlabSystem *sys,
                                           int32_t which,
                                           double *re,
                                           double *im);

/**
 * Dimension of the space of L2 solutions on `(0, inf)`. `config` may be NULL
 * for the defaults.
 *
 * # Safety
 * `sys` must be a live handle, `config` NULL or valid, `dim` valid for writes.
 */
enum OrbitlabStatus orbitlab_l2_dimension(const struct OrbitlabSystem *sys,
                                          const struct OrbitlabConfig *config,
                                          size_t *dim);

/**
 * Symplectic volume (over `2 pi`) of the reduced sphere, Simpson with `n` intervals.
 *
 * # Safety
 * `volume` must be valid for writes.
 */
enum OrbitlabStatus orbitlab_reduced_volume(double f0h, double f0z, size_t n, double *volume);

/**
 * Run acceptance check `id` (1 to 10). `detail`, when not NULL, receives an
 * owned string to release with `orbitlab_string_free`.
 *
 * # Safety
 * `passed` must be valid for writes; `detail` NULL or valid for writes.
 */
enum OrbitlabStatus orbitlab_run_check(uint8_t id, bool *passed, char **detail);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORBITLAB_H */
