#ifndef COTTONLAB_H
#define COTTONLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Solution of the flattening problem on a grid.
typedef struct CottonlabField CottonlabField;

// A parsed metric spec file.
typedef struct CottonlabSpec CottonlabSpec;

// Result code of every call. Zero means success.
typedef int32_t CottonlabStatus;

#define COTTONLAB_OK 0

#define COTTONLAB_ERR_NULL_POINTER 1

#define COTTONLAB_ERR_INVALID_UTF8 2

#define COTTONLAB_ERR_PANIC 3

#define COTTONLAB_ERR_NON_FINITE_OUTPUT 4

#define COTTONLAB_ERR_BUFFER_TOO_SMALL 5

#define COTTONLAB_ERR_SYNTAX 10

#define COTTONLAB_ERR_UNKNOWN_SYMBOL 11

#define COTTONLAB_ERR_DOMAIN 12

#define COTTONLAB_ERR_NOT_POSITIVE_DEFINITE 13

#define COTTONLAB_ERR_DEGREE 14

#define COTTONLAB_ERR_DEGENERATE_SEED 15

#define COTTONLAB_ERR_FRAME_NOT_ORTHONORMAL 16

#define COTTONLAB_ERR_NOT_SPECIAL_ORTHOGONAL 17

#define COTTONLAB_ERR_JACOBI_VIOLATION 18

#define COTTONLAB_ERR_NOT_ANTISYMMETRIC 19

#define COTTONLAB_ERR_NON_FINITE_SAMPLE 20

#define COTTONLAB_ERR_COTTON_NOT_ZERO 21

#define COTTONLAB_ERR_STEP_TOO_LARGE 22

#define COTTONLAB_ERR_BLOW_UP 23

#define COTTONLAB_ERR_NOT_CLOSED 24

#define COTTONLAB_ERR_IO 25

#define COTTONLAB_ERR_SCHEMA 26

#define COTTONLAB_ERR_INVALID_ARGUMENT 27

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on the calling thread, or an empty
// string. Valid until the next call on this thread.
const char *cottonlab_last_error(void);

// Stable identifier of a status code, e.g. `"CottonNotZero"`.
const char *cottonlab_status_name(CottonlabStatus status);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void cottonlab_string_free(char *s);

// Loads a spec file, or a catalog entry by name when no such file exists.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
CottonlabStatus cottonlab_spec_load(const char *path, struct CottonlabSpec **out);

// Parses a spec from JSON text.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
CottonlabStatus cottonlab_spec_parse(const char *json, struct CottonlabSpec **out);

// # Safety
// `spec` must come from `cottonlab_spec_load` or `cottonlab_spec_parse`
// and not have been freed. Null is ignored.
void cottonlab_spec_free(struct CottonlabSpec *spec);

// Corners of the coordinate box a spec file declares.
//
// # Safety
// `spec` must be a live handle; `out_min` and `out_max` must hold 3 doubles.
CottonlabStatus cottonlab_spec_domain(const struct CottonlabSpec *spec, double *out_min, double *out_max);

// Full curvature packet at `point` as a JSON object (the same document
// `cottonlab curvature` prints).
//
// # Safety
// `spec` must be a live handle, `point` must hold 3 doubles and `out_json`
// must be writable.
CottonlabStatus cottonlab_curvature_json(const struct CottonlabSpec *spec, const double *point, char **out_json);

// Scalar curvature at `point`.
//
// # Safety
// As for `cottonlab_curvature_json`; `out` must be writable.
CottonlabStatus cottonlab_scalar_curvature(const struct CottonlabSpec *spec, const double *point, double *out);

// Cotton tensor at `point`, 9 doubles in row-major order.
//
// # Safety
// As for `cottonlab_curvature_json`; `out` must hold 9 doubles.
CottonlabStatus cottonlab_cotton_tensor(const struct CottonlabSpec *spec, const double *point, double *out);

// Largest normalized Cotton norm over `samples` deterministic points.
// A norm at or above `tol` is reported through `out_passed`, not as an
// error.
//
// # Safety
// `spec` must be a live handle; the out pointers must be writable.
CottonlabStatus cottonlab_cotton_check(const struct CottonlabSpec *spec, uintptr_t samples, double tol, double *out_max_norm, bool *out_passed);

// Closed-form Chern–Simons invariant of a catalog group (`so3`, `s3`,
// `su2` or `berger:t=<value>`).
//
// # Safety
// `group` must be a NUL-terminated string; `out` must be writable.
CottonlabStatus cottonlab_cs_closed(const char *group, double *out);

// Chern–Simons invariant by Gauss–Legendre quadrature of `order` nodes
// per axis on the chart of `group` (`so3`, `s3`, `su2`, `berger:t=<value>`).
//
// # Safety
// As for `cottonlab_cs_closed`.
CottonlabStatus cottonlab_cs_quadrature(const char *group, uintptr_t order, double *out);

// Runs a verification suite (`all`, `bianchi`, `cotton`, `conformal`,
// `variational`) and returns the report as JSON. Failed checks are
// reported through `out_passed`.
//
// # Safety
// `spec` must be a live handle, `suite` a NUL-terminated string and the
// out pointers writable.
CottonlabStatus cottonlab_verify_json(const struct CottonlabSpec *spec, const char *suite, char **out_json, bool *out_passed);

// Solves for the flattening conformal factor on a cubic grid of
// `resolution³` nodes centered at `center` with half-width `half_width`.
// `x0` (3 doubles) is the initial value at the center; null means zero.
//
// # Safety
// `spec` must be a live handle, `center` must hold 3 doubles, `x0` must be
// null or hold 3 doubles, and `out` must be writable.
CottonlabStatus cottonlab_lcf_solve(const struct CottonlabSpec *spec, const double *center, double half_width, uintptr_t resolution, const double *x0, struct CottonlabField **out);

// # Safety
// `field` must come from `cottonlab_lcf_solve` and not have been freed.
// Null is ignored.
void cottonlab_field_free(struct CottonlabField *field);

// Number of grid nodes, or 0 for a null handle.
//
// # Safety
// `field` must be null or a live handle.
uintptr_t cottonlab_field_node_count(const struct CottonlabField *field);

// Copies the conformal factor `f` at every node (`x1`-major order) into
// `out`, which must hold `len` doubles, `len` at least the node count.
//
// # Safety
// `field` must be a live handle and `out` must hold `len` doubles.
CottonlabStatus cottonlab_field_factor(const struct CottonlabField *field, double *out, uintptr_t len);

// Copies the closed 1-form `X` (3 doubles per node) into `out`, which must
// hold `len ≥ 3 · node count` doubles.
//
// # Safety
// `field` must be a live handle and `out` must hold `len` doubles.
CottonlabStatus cottonlab_field_x(const struct CottonlabField *field, double *out, uintptr_t len);

// Solver diagnostics as a JSON object.
//
// # Safety
// `field` must be a live handle and `out_json` writable.
CottonlabStatus cottonlab_field_diagnostics_json(const struct CottonlabField *field, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COTTONLAB_H */
