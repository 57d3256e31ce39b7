#ifndef SPINORBIT_H
#define SPINORBIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum SoStatus {
  SO_STATUS_OK = 0,
  SO_STATUS_NULL_POINTER = 1,
  SO_STATUS_INVALID_ARGUMENT = 2,
  SO_STATUS_DOMAIN = 3,
  SO_STATUS_PARSE = 4,
  SO_STATUS_IO = 5,
  SO_STATUS_NO_CONVERGENCE = 6,
  SO_STATUS_PRECONDITION = 7,
  SO_STATUS_NOT_FOUND = 8,
  SO_STATUS_PANIC = 9,
} SoStatus;

/**
 * Loaded, validated catalog.
 */
typedef struct SoCatalog SoCatalog;

/**
 * Constructed resonant orbit.
 */
typedef struct SoOrbit SoOrbit;

/**
 * One row of the certification table.
 */
typedef struct SoReport {
  int64_t p;
  int64_t q;
  double alpha_lower;
  double range_margin;
  double nonempty_margin;
  /**
   * `INFINITY` when the bifurcation condition does not bound eta.
   */
  double eta_bif_max;
  double eta_green_max;
  double eta_admissible;
  bool certified;
} SoReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *so_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *so_version(void);

/**
 * Loads a bundled catalog: `"moons"`, `"mercury"`, `"minor"` or `"all"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum SoStatus so_catalog_load_bundled(const char *name, struct SoCatalog **out);

/**
 * Loads a CSV or JSON catalog file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum SoStatus so_catalog_load_path(const char *path, struct SoCatalog **out);

/**
 * Parses catalog text (CSV, or JSON when it starts with `[`).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum SoStatus so_catalog_parse(const char *text, struct SoCatalog **out);

/**
 * Number of bodies; 0 for NULL.
 *
 * # Safety
 * `cat` must be NULL or a live catalog handle.
 */
size_t so_catalog_len(const struct SoCatalog *cat);

/**
 * Name of body `index`, owned by the catalog; NULL when out of range.
 *
 * # Safety
 * `cat` must be NULL or a live catalog handle.
 */
const char *so_catalog_name(const struct SoCatalog *cat, size_t index);

/**
 * Index of the body called `name`.
 *
 * # Safety
 * `cat` must be a live catalog handle, `name` a NUL-terminated string and
 * `index` writable.
 */
enum SoStatus so_catalog_find(const struct SoCatalog *cat, const char *name, size_t *index);

/**
 * # Safety
 * `cat` must be NULL or a handle from a `so_catalog_*` constructor that has
 * not been freed.
 */
void so_catalog_free(struct SoCatalog *cat);

/**
 * Evaluates the existence conditions for body `index`.
 *
 * # Safety
 * `cat` must be a live catalog handle and `out` writable.
 */
enum SoStatus so_certify(const struct SoCatalog *cat, size_t index, struct SoReport *out);

/**
 * `alpha_j(e)` by `n_quad`-point quadrature.
 *
 * # Safety
 * `out` must be writable.
 */
enum SoStatus so_fourier_coefficient(double e, int64_t j, size_t n_quad, double *out);

/**
 * Certified lower bound on `|alpha_j(e)|` for `j` in {2, 3}.
 *
 * # Safety
 * `out` must be writable.
 */
enum SoStatus so_alpha_lower_bound(int64_t j, double e, double *out);

/**
 * Operator-norm bound of the Green operator at `eta_hat`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SoStatus so_green_norm_bound(double eta_hat, double *out);

/**
 * Constructs the resonant orbit of body `index` at dissipation `eta` with
 * the default solver settings.
 *
 * # Safety
 * `cat` must be a live catalog handle and `out` writable.
 */
enum SoStatus so_orbit_solve(const struct SoCatalog *cat,
                             size_t index,
                             double eta,
                             struct SoOrbit **out);

/**
 * Phase `xi*` of the orbit; NaN for NULL.
 *
 * # Safety
 * `orbit` must be NULL or a live orbit handle.
 */
double so_orbit_xi_star(const struct SoOrbit *orbit);

/**
 * Rotation angle `x(s)` at mean anomaly `s`.
 *
 * # Safety
 * `orbit` must be a live orbit handle and `out` writable.
 */
enum SoStatus so_orbit_angle(const struct SoOrbit *orbit, double s, double *out);

/**
 * Sup of the equation-of-motion residual over `n_samples` nodes.
 *
 * # Safety
 * `orbit` must be a live orbit handle and `out` writable.
 */
enum SoStatus so_orbit_residual(const struct SoOrbit *orbit, size_t n_samples, double *out);

/**
 * JSON export with `n_samples + 1` points over one resonance period. The
 * string must be released with [`so_string_free`].
 *
 * # Safety
 * `orbit` must be a live orbit handle and `out` writable.
 */
enum SoStatus so_orbit_to_json(const struct SoOrbit *orbit, size_t n_samples, char **out);

/**
 * # Safety
 * `orbit` must be NULL or a handle from [`so_orbit_solve`] that has not
 * been freed.
 */
void so_orbit_free(struct SoOrbit *orbit);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library that has not been
 * freed.
 */
void so_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINORBIT_H */
