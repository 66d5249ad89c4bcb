/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef QANGLE_H
#define QANGLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum QaStatus {
  QA_STATUS_OK = 0,
  QA_STATUS_NULL_POINTER = 1,
  QA_STATUS_DIMENSION_MISMATCH = 2,
  QA_STATUS_INVALID_ARGUMENT = 3,
  QA_STATUS_NOT_NORMALIZED = 4,
  QA_STATUS_NOT_HERMITIAN = 5,
  QA_STATUS_NUMERICAL = 6,
  QA_STATUS_PANIC = 7,
} QaStatus;

/*
 A Hermitian generator with its spectrum.
 */
typedef struct QaGenerator QaGenerator;

/*
 A normalized state vector.
 */
typedef struct QaState QaState;

typedef struct QaComplex {
  double re;
  double im;
} QaComplex;

typedef struct QaOrbitStats {
  double mean;
  double std_dev;
  double omega;
} QaOrbitStats;

typedef struct QaBoundReport {
  double lhs;
  double rhs;
  double slack;
  double tolerance;
  bool holds;
  /*
   The premise was false, so the bound holds trivially.
   */
  bool vacuous;
} QaBoundReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 The message for the last failed call on this thread, or an empty string.
 Valid until the next call into this library on the same thread.
 */
const char *qa_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *qa_version(void);

/*
 Builds a state from `len` amplitudes, normalizing any non-zero vector.

 # Safety
 `amplitudes` must point to `len` readable values; `out` must be writable.
 */
enum QaStatus qa_state_new(const struct QaComplex *amplitudes, size_t len, struct QaState **out);

/*
 A seeded random state of dimension `dim`.

 # Safety
 `out` must be writable.
 */
enum QaStatus qa_state_random(size_t dim, uint64_t seed, struct QaState **out);

/*
 Dimension of `state`, or 0 for a null handle.

 # Safety
 `state` must be null or a live handle.
 */
size_t qa_state_dim(const struct QaState *state);

/*
 Copies the amplitudes into `out`, which must hold exactly `len` values.

 # Safety
 `state` must be a live handle and `out` must point to `len` writable values.
 */
enum QaStatus qa_state_amplitudes(const struct QaState *state, struct QaComplex *out, size_t len);

/*
 Releases a state. Null is ignored.

 # Safety
 `state` must be null or a handle not yet freed.
 */
void qa_state_free(struct QaState *state);

/*
 `arccos |⟨a|b⟩|` in radians.

 # Safety
 `a` and `b` must be live handles; `out` must be writable.
 */
enum QaStatus qa_quantum_angle(const struct QaState *a, const struct QaState *b, double *out);

/*
 Whether the angle between `a` and `b` is at least one radian.

 # Safety
 `a` and `b` must be live handles; `out` must be writable.
 */
enum QaStatus qa_differ_substantially(const struct QaState *a, const struct QaState *b, bool *out);

/*
 A generator from `dim × dim` row-major entries; rejected unless Hermitian.

 # Safety
 `entries` must point to `dim * dim` readable values; `out` must be writable.
 */
enum QaStatus qa_generator_new(const struct QaComplex *entries,
                               size_t dim,
                               struct QaGenerator **out);

/*
 A diagonal generator with the given real eigenvalues.

 # Safety
 `values` must point to `dim` readable values; `out` must be writable.
 */
enum QaStatus qa_generator_diagonal(const double *values, size_t dim, struct QaGenerator **out);

/*
 Dimension of `generator`, or 0 for a null handle.

 # Safety
 `generator` must be null or a live handle.
 */
size_t qa_generator_dim(const struct QaGenerator *generator);

/*
 Releases a generator. Null is ignored.

 # Safety
 `generator` must be null or a handle not yet freed.
 */
void qa_generator_free(struct QaGenerator *generator);

/*
 `e^{−iδs·A/ħ} ψ` as a new state handle.

 # Safety
 Handles must be live; `out` must be writable.
 */
enum QaStatus qa_evolve(const struct QaGenerator *generator,
                        double hbar,
                        const struct QaState *state,
                        double deltas,
                        struct QaState **out);

/*
 Mean, spread and angular speed of the orbit through `state`.

 # Safety
 Handles must be live; `out` must be writable.
 */
enum QaStatus qa_orbit_stats(const struct QaGenerator *generator,
                             double hbar,
                             const struct QaState *state,
                             struct QaOrbitStats *out);

/*
 Checks `ħ ≤ |δs|·ΔA` when `U(δs)ψ` differs substantially from `ψ`.

 # Safety
 Handles must be live; `out` must be writable.
 */
enum QaStatus qa_certainty_verdict(const struct QaGenerator *generator,
                                   double hbar,
                                   const struct QaState *state,
                                   double deltas,
                                   struct QaBoundReport *out);

/*
 Smallest `δs ∈ (0, max_shift]` with a substantial change. `*found` is
 false (and `*out` untouched) when there is none.

 # Safety
 Handles must be live; `out` and `found` must be writable.
 */
enum QaStatus qa_minimal_substantial_shift(const struct QaGenerator *generator,
                                           double hbar,
                                           const struct QaState *state,
                                           double max_shift,
                                           double *out,
                                           bool *found);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QANGLE_H */
