#ifndef ANNEALED_ISING_H
#define ANNEALED_ISING_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by every entry point.
 */
typedef enum AiStatus {
  AiStatus_Ok = 0,
  /**
   * An argument was outside the domain of the operation.
   */
  AiStatus_DomainError = 1,
  /**
   * A bracketed solve found no sign change.
   */
  AiStatus_BracketError = 2,
  /**
   * An iterative scheme failed to converge.
   */
  AiStatus_NumericalError = 3,
  /**
   * A required pointer was null.
   */
  AiStatus_NullPointer = 4,
  /**
   * Internal panic caught at the boundary.
   */
  AiStatus_Panic = 5,
} AiStatus;

/**
 * Opaque g-table handle; create with `ai_gtable_new`, release with
 * `ai_gtable_free`.
 */
typedef struct AiGTable AiGTable;

/**
 * Thermodynamic-limit quantities at one parameter point.
 */
typedef struct AiThermoResult {
  double psi;
  double t_star;
  double magnetization;
  double chi;
  /**
   * 1 when the point lies in the region where the limit theorems hold.
   */
  int32_t in_u;
} AiThermoResult;

/**
 * Finite-n quantities.
 */
typedef struct AiFiniteResult {
  double psi_n;
  double m_n;
  double chi_n;
} AiFiniteResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Limit pressure, maximizer, magnetization and susceptibility for the
 * d-regular model.
 */
enum AiStatus ai_pressure(double beta, double b, uint32_t d, struct AiThermoResult *out);

/**
 * Critical inverse temperature atanh(1/(d-1)); +inf for d = 2.
 */
enum AiStatus ai_critical_beta(uint32_t d, double *out);

/**
 * Quenched pressure via the tree fixed point.
 */
enum AiStatus ai_quenched_pressure(double beta, double b, uint32_t d, double *out);

/**
 * Exact finite-n pressure, magnetization and susceptibility.
 */
enum AiStatus ai_finite_thermo(uintptr_t n,
                               double beta,
                               double b,
                               uint32_t d,
                               struct AiFiniteResult *out);

/**
 * Builds a g-table for (beta, m); the handle must be freed by the caller.
 */
enum AiStatus ai_gtable_new(double beta, uintptr_t m, struct AiGTable **out);

/**
 * log g(beta, k, m) from a handle; k > m is a domain error.
 */
enum AiStatus ai_gtable_log_g(const struct AiGTable *table, uintptr_t k, double *out);

/**
 * Releases a handle from `ai_gtable_new`. Null is a no-op.
 */
void ai_gtable_free(struct AiGTable *table);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ANNEALED_ISING_H */
