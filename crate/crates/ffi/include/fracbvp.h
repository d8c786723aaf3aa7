#ifndef FRACBVP_H
#define FRACBVP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum FbvpStatus {
  FBVP_STATUS_OK = 0,
  // A required pointer was null or a string was not UTF-8.
  FBVP_STATUS_NULL_OR_INVALID_POINTER = 1,
  // An argument was outside its domain (order, length, radius, index).
  FBVP_STATUS_INVALID_ARGUMENT = 2,
  // An expression failed to parse.
  FBVP_STATUS_PARSE_ERROR = 3,
  // Evaluation or a numerical step failed.
  FBVP_STATUS_COMPUTATION_ERROR = 4,
  // Picard iteration hit its iteration limit.
  FBVP_STATUS_NO_CONVERGENCE = 5,
  // A Rust panic was caught at the boundary.
  FBVP_STATUS_PANIC = 6,
} FbvpStatus;

// Constant convention: `Exact` uses the stated formulas, `Paper` the published
// example's scaling by `Γ(b+3)`.
typedef enum FbvpVariant {
  FBVP_VARIANT_EXACT = 0,
  FBVP_VARIANT_PAPER = 1,
} FbvpVariant;

typedef struct FbvpGreenTable FbvpGreenTable;

typedef struct FbvpProblem FbvpProblem;

typedef struct FbvpSolution FbvpSolution;

typedef struct FbvpCertificate {
  double lhs;
  double rhs;
  // 1 when `lhs > rhs`.
  int32_t satisfied;
  // 0 for even `b`, 1 for odd.
  int32_t odd_branch;
} FbvpCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread; empty if none. Valid until
// the next call into this library on the same thread.
const char *fbvp_last_error_message(void);

// Falling factorial `x^(y) = Γ(x+1)/Γ(x-y+1)`.
//
// # Safety
// `out` must be null or valid for writes.
enum FbvpStatus fbvp_falling_power(double x, double y, double *out);

// `G(α-1+k, s)` for `k, s ∈ 0..=b+1`.
//
// # Safety
// `out` must be null or valid for writes.
enum FbvpStatus fbvp_green_value(double alpha, size_t b, size_t k, size_t s, double *out);

// Maximum of the Green's function from its closed form.
//
// # Safety
// `out` must be null or valid for writes.
enum FbvpStatus fbvp_green_max_closed_form(double alpha, size_t b, double *out);

// Cone constant `λ`.
//
// # Safety
// `out` must be null or valid for writes.
enum FbvpStatus fbvp_lambda_constant(double alpha, size_t b, double *out);

// Eigenvalue exclusion radius.
//
// # Safety
// `out` must be null or valid for writes.
enum FbvpStatus fbvp_eigen_exclusion(double alpha, size_t b, double *out);

// Builds the full `(b+2) × (b+2)` Green table.
//
// # Safety
// `out` must be null or valid for writes. Free the result with
// [`fbvp_green_table_free`].
enum FbvpStatus fbvp_green_table_new(double alpha, size_t b, struct FbvpGreenTable **out);

// Side length `b+2` of the table.
//
// # Safety
// `table` must be null or a live handle; `out` null or valid for writes.
enum FbvpStatus fbvp_green_table_size(const struct FbvpGreenTable *table, size_t *out);

// Entry at row `k` (point `α-1+k`) and column `s`.
//
// # Safety
// `table` must be null or a live handle; `out` null or valid for writes.
enum FbvpStatus fbvp_green_table_get(const struct FbvpGreenTable *table,
                                     size_t k,
                                     size_t s,
                                     double *out);

// Releases a table. Null is ignored.
//
// # Safety
// `table` must be null or a handle not yet freed.
void fbvp_green_table_free(struct FbvpGreenTable *table);

// Parses a problem with load `q(t)` and nonlinearity `f(y)`.
//
// # Safety
// `q` and `f` must be null or NUL-terminated strings; `out` null or valid for
// writes. Free the result with [`fbvp_problem_free`].
enum FbvpStatus fbvp_problem_new(double alpha,
                                 size_t b,
                                 const char *q,
                                 const char *f,
                                 struct FbvpProblem **out);

// Releases a problem. Null is ignored.
//
// # Safety
// `problem` must be null or a handle not yet freed.
void fbvp_problem_free(struct FbvpProblem *problem);

// Picard iteration from zero. `tol <= 0` or `max_iter == 0` select the defaults.
//
// On [`FbvpStatus::NoConvergence`] the last iterate is still returned in `out`.
//
// # Safety
// `problem` must be null or a live handle; `out` null or valid for writes.
// Free the result with [`fbvp_solution_free`].
enum FbvpStatus fbvp_solve(const struct FbvpProblem *problem,
                           double tol,
                           size_t max_iter,
                           double damping,
                           struct FbvpSolution **out);

// Number of grid points `b+4`, boundaries included.
//
// # Safety
// `solution` must be null or a live handle; `out` null or valid for writes.
enum FbvpStatus fbvp_solution_len(const struct FbvpSolution *solution, size_t *out);

// Copies up to `capacity` values, starting at the left boundary `α-2`.
//
// # Safety
// `solution` must be null or a live handle; `values` null or valid for
// `capacity` writes.
enum FbvpStatus fbvp_solution_values(const struct FbvpSolution *solution,
                                     double *values,
                                     size_t capacity);

// Maximum, final residual, and iteration count. Any out-pointer may be null.
//
// # Safety
// `solution` must be null or a live handle; non-null out-pointers valid for writes.
enum FbvpStatus fbvp_solution_summary(const struct FbvpSolution *solution,
                                      double *eta,
                                      double *residual_sup,
                                      size_t *iterations);

// Releases a solution. Null is ignored.
//
// # Safety
// `solution` must be null or a handle not yet freed.
void fbvp_solution_free(struct FbvpSolution *solution);

// Inequality every nontrivial solution with maximum `eta` satisfies.
//
// # Safety
// `problem` must be null or a live handle; `out` null or valid for writes.
enum FbvpStatus fbvp_certify_nontrivial(const struct FbvpProblem *problem,
                                        double eta,
                                        enum FbvpVariant which,
                                        struct FbvpCertificate *out);

// Inequality implied by the existence shell `[r1, r2]`. `gamma <= 0`
// selects the variant's default constant.
//
// # Safety
// `problem` must be null or a live handle; `out` null or valid for writes.
enum FbvpStatus fbvp_certify_shell(const struct FbvpProblem *problem,
                                   double r1,
                                   double r2,
                                   double gamma,
                                   enum FbvpVariant which,
                                   struct FbvpCertificate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACBVP_H */
