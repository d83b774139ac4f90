#ifndef SIMPLEX_SINES_H
#define SIMPLEX_SINES_H

#include <stdbool.h>
#include <stddef.h>

/**
 * Result codes. `SS_OK` is zero; everything else is a failure.
 */
typedef enum SsStatus {
  SS_OK = 0,
  SS_NULL_POINTER = 1,
  SS_INVALID_ARGUMENT = 2,
  SS_BUFFER_TOO_SMALL = 3,
  SS_DEGENERATE = 4,
  SS_NOT_REALIZABLE = 5,
  SS_NUMERICAL = 6,
  SS_PANIC = 7,
} SsStatus;

/**
 * A simplex together with its face data and normal Gram matrix.
 */
typedef struct SsSimplex SsSimplex;

/**
 * Residuals and verdicts from `ss_simplex_verify`.
 */
typedef struct SsVerifyReport {
  double tolerance;
  double minkowski_residual;
  double gram_null_residual;
  double rank1_residual;
  double max_ratio_error;
  double c_value;
  double pseudo_determinant;
  double c_mismatch;
  size_t quadruples_checked;
  size_t quadruples_skipped;
  bool pass;
} SsVerifyReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *ss_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ss_version(void);

/**
 * Builds a simplex from `(dim + 1) * dim` row-major vertex coordinates.
 */
enum SsStatus ss_simplex_new(size_t dim, const double *coords, size_t len, struct SsSimplex **out);

/**
 * Releases a handle. Null is ignored.
 */
void ss_simplex_free(struct SsSimplex *s);

/**
 * Ambient dimension, or 0 for a null handle.
 */
size_t ss_simplex_dimension(const struct SsSimplex *s);

/**
 * Face areas, `dim + 1` values; face `i` is opposite vertex `i`.
 */
enum SsStatus ss_simplex_areas(const struct SsSimplex *s, double *out, size_t cap);

/**
 * Outward unit normals, `(dim + 1) * dim` values, one row per face.
 */
enum SsStatus ss_simplex_normals(const struct SsSimplex *s, double *out, size_t cap);

/**
 * Normal Gram matrix, `(dim + 1)^2` values, row-major.
 */
enum SsStatus ss_simplex_gram(const struct SsSimplex *s, double *out, size_t cap);

/**
 * Vertex coordinates, `(dim + 1) * dim` values, row-major.
 */
enum SsStatus ss_simplex_vertices(const struct SsSimplex *s, double *out, size_t cap);

/**
 * Runs the full identity chain. `SS_OK` means the report was filled, not
 * that it passed; read `pass`.
 */
enum SsStatus ss_simplex_verify(const struct SsSimplex *s, double tol, struct SsVerifyReport *out);

/**
 * `A_i A_j / (A_k A_l)` from a `size x size` row-major normal Gram matrix.
 */
enum SsStatus ss_sine_ratio(const double *gram,
                            size_t size,
                            size_t i,
                            size_t j,
                            size_t k,
                            size_t l,
                            double *out);

/**
 * Unit area vector (`size` values) from the null space of a Gram matrix.
 */
enum SsStatus ss_areas_from_gram(const double *gram, size_t size, double *out, size_t cap);

/**
 * Rebuilds a simplex (longest edge 1) from a normal Gram matrix.
 */
enum SsStatus ss_simplex_from_gram(const double *gram,
                                   size_t size,
                                   double tol,
                                   struct SsSimplex **out);

/**
 * The two half-angle expressions for `A_4 / A_3` from a 4x4 Gram matrix:
 * `link_form` (link excesses) and `polar_form` (polar excesses).
 */
enum SsStatus ss_half_angle_ratios(const double *gram, double *link_form, double *polar_form);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIMPLEX_SINES_H */
