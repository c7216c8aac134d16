#ifndef ZNE_H
#define ZNE_H

/* Generated by cbindgen from the zne-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum {
  ZNE_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  ZNE_STATUS_NULL_POINTER = 1,
  /**
   * An argument was out of range or inconsistent.
   */
  ZNE_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The noise channel is not a valid probability assignment.
   */
  ZNE_STATUS_INVALID_CHANNEL = 3,
  /**
   * Text input could not be parsed.
   */
  ZNE_STATUS_PARSE_ERROR = 4,
  /**
   * The fit system is singular.
   */
  ZNE_STATUS_SINGULAR_FIT = 5,
  /**
   * An unexpected internal failure.
   */
  ZNE_STATUS_INTERNAL = 6,
} ZneStatus;

/**
 * Observable selector for the measurement entry points.
 */
typedef enum {
  /**
   * Number of qubits measured in state 1.
   */
  ZNE_OBSERVABLE_QUBIT_SUM = 0,
  /**
   * Bitstring read as an unsigned integer.
   */
  ZNE_OBSERVABLE_INTEGER_VALUE = 1,
  /**
   * Projector onto the all-zeros bitstring.
   */
  ZNE_OBSERVABLE_ZEROS_PROJECTOR = 2,
} ZneObservable;

/**
 * Opaque circuit handle.
 */
typedef struct ZneCircuit ZneCircuit;

/**
 * Opaque noise-model handle.
 */
typedef struct ZneNoiseModel ZneNoiseModel;

/**
 * Mitigated estimate: value, propagated shot noise and the largest CNOT
 * count among the executed circuits.
 */
typedef struct {
  double value;
  double stat_error;
  uint64_t gate_budget;
} ZneEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Two-CNOT benchmark circuit; intended initial state `|00>`.
 */
ZneCircuit *zne_circuit_double_cnot(void);

/**
 * Four-CNOT benchmark circuit; intended initial state `|10>`.
 */
ZneCircuit *zne_circuit_four_cnot(void);

/**
 * Quantum Fourier transform over `num_qubits` qubits.
 *
 * # Safety
 * `out` must be a valid pointer to a circuit-handle slot.
 */
ZneStatus zne_circuit_qft(uintptr_t num_qubits, ZneCircuit **out);

/**
 * Oscillator evolution circuit: Gaussian preparation, `steps` splitting
 * steps covering total time `time` on a grid of half-width `x_max`, then
 * the inverse preparation, with adjacent CNOT pairs cancelled.
 *
 * # Safety
 * `out` must be a valid pointer to a circuit-handle slot.
 */
ZneStatus zne_circuit_oscillator(double time, uintptr_t steps, double x_max, ZneCircuit **out);

/**
 * Parse a circuit from its line-oriented text form.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid slot.
 */
ZneStatus zne_circuit_from_text(const char *text, ZneCircuit **out);

/**
 * Render the circuit as text; free the result with [`zne_string_free`].
 * Returns null on a null handle.
 *
 * # Safety
 * `circuit` must be a live handle from this library or null.
 */
char *zne_circuit_to_text(const ZneCircuit *circuit);

/**
 * Free a string returned by this library.
 *
 * # Safety
 * `text` must have been returned by [`zne_circuit_to_text`] and not yet
 * freed; null is ignored.
 */
void zne_string_free(char *text);

/**
 * Number of CNOT gates; 0 for a null handle.
 *
 * # Safety
 * `circuit` must be a live handle or null.
 */
uintptr_t zne_circuit_cnot_count(const ZneCircuit *circuit);

/**
 * Register size; 0 for a null handle.
 *
 * # Safety
 * `circuit` must be a live handle or null.
 */
uintptr_t zne_circuit_num_qubits(const ZneCircuit *circuit);

/**
 * Replace every CNOT by `r` consecutive copies (`r` odd).
 *
 * # Safety
 * `circuit` must be a live handle; `out` a valid slot.
 */
ZneStatus zne_circuit_fiim(const ZneCircuit *circuit, uint64_t r, ZneCircuit **out);

/**
 * Replace the i-th CNOT by `reps[i]` copies (all odd, one per CNOT).
 *
 * # Safety
 * `circuit` must be a live handle, `reps` must point to `len` readable
 * values, and `out` must be a valid slot.
 */
ZneStatus zne_circuit_apply_plan(const ZneCircuit *circuit,
                                 const uint64_t *reps,
                                 uintptr_t len,
                                 ZneCircuit **out);

/**
 * Release a circuit handle; null is ignored.
 *
 * # Safety
 * `circuit` must be a handle from this library, not yet freed, or null.
 */
void zne_circuit_free(ZneCircuit *circuit);

/**
 * Noise-free model.
 */
ZneNoiseModel *zne_noise_none(void);

/**
 * Depolarizing CNOT noise of strength `eps`.
 *
 * # Safety
 * `out` must be a valid pointer to a noise-handle slot.
 */
ZneStatus zne_noise_depolarizing(double eps, ZneNoiseModel **out);

/**
 * Depolarizing noise plus per-CNOT thermal relaxation.
 *
 * # Safety
 * `out` must be a valid pointer to a noise-handle slot.
 */
ZneStatus zne_noise_full(double eps,
                         double t1,
                         double t2,
                         double gate_duration,
                         ZneNoiseModel **out);

/**
 * Release a noise handle; null is ignored.
 *
 * # Safety
 * `noise` must be a handle from this library, not yet freed, or null.
 */
void zne_noise_free(ZneNoiseModel *noise);

/**
 * Exact expectation value of the observable after evolving `|init>`.
 *
 * # Safety
 * `circuit` and `noise` must be live handles; `out` a valid double slot.
 */
ZneStatus zne_expectation(const ZneCircuit *circuit,
                          uintptr_t init,
                          ZneObservable observable,
                          const ZneNoiseModel *noise,
                          double *out);

/**
 * Seeded finite-shot measurement: sample mean and its standard error.
 *
 * # Safety
 * `circuit` and `noise` must be live handles; both out-pointers valid.
 */
ZneStatus zne_sample_shots(const ZneCircuit *circuit,
                           uintptr_t init,
                           ZneObservable observable,
                           const ZneNoiseModel *noise,
                           uint64_t n_meas,
                           uint64_t seed,
                           double *out_mean,
                           double *out_std_error);

/**
 * Fixed-insertion estimate extrapolated to zero noise. `n_meas = 0` runs
 * exact expectation values; otherwise each circuit is measured with
 * `n_meas` seeded shots.
 *
 * # Safety
 * `circuit` and `noise` must be live handles; `out` a valid slot.
 */
ZneStatus zne_fiim_estimate(const ZneCircuit *circuit,
                            uintptr_t init,
                            ZneObservable observable,
                            const ZneNoiseModel *noise,
                            uintptr_t n_max,
                            uintptr_t n_fit,
                            uint64_t n_meas,
                            uint64_t seed,
                            ZneEstimate *out);

/**
 * Operator-set estimate of order `n_max` (1 to 4). `n_meas = 0` runs the
 * exact placement enumeration; otherwise placements and shots are sampled
 * with the given seed.
 *
 * # Safety
 * `circuit` and `noise` must be live handles; `out` a valid slot.
 */
ZneStatus zne_riim_estimate(const ZneCircuit *circuit,
                            uintptr_t init,
                            ZneObservable observable,
                            const ZneNoiseModel *noise,
                            uintptr_t n_max,
                            uint64_t n_meas,
                            uint64_t seed,
                            ZneEstimate *out);

/**
 * Poisson-randomized estimate: averages exact per-plan values over
 * `n_plans` seeded draws per mean and extrapolates the linear fit to the
 * zero-noise point.
 *
 * # Safety
 * `circuit` and `noise` must be live handles, `nu_values` must point to
 * `nu_len` readable doubles, and `out` must be a valid slot.
 */
ZneStatus zne_riim_poisson_estimate(const ZneCircuit *circuit,
                                    uintptr_t init,
                                    ZneObservable observable,
                                    const ZneNoiseModel *noise,
                                    const double *nu_values,
                                    uintptr_t nu_len,
                                    uintptr_t n_plans,
                                    uint64_t seed,
                                    ZneEstimate *out);

/**
 * Combination weights over noise levels `r = 1, 3, ..., 1+2*n_max`;
 * `len` must equal `n_max + 1`.
 *
 * # Safety
 * `out` must point to `len` writable doubles.
 */
ZneStatus zne_richardson_weights(uintptr_t n_max, double *out, uintptr_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZNE_H */
