#ifndef MCFE_H
#define MCFE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum McfeStatus {
  MCFE_STATUS_OK = 0,
  MCFE_STATUS_NULL_POINTER = 1,
  MCFE_STATUS_INVALID_ARGUMENT = 2,
  MCFE_STATUS_PARSE_ERROR = 3,
  MCFE_STATUS_WIDTH_LIMIT = 4,
  MCFE_STATUS_ESTIMATE_UNDEFINED = 5,
  MCFE_STATUS_DATA_ERROR = 6,
  MCFE_STATUS_PANIC = 7,
} McfeStatus;

/**
 * A circuit.
 */
typedef struct McfeCircuit McfeCircuit;

/**
 * A sampled error model.
 */
typedef struct McfeErrorModel McfeErrorModel;

/**
 * A mirror circuit with its expected noiseless outcome.
 */
typedef struct McfeMirrorSample McfeMirrorSample;

/**
 * Fidelity estimate returned by [`mcfe_estimate_fidelity`].
 */
typedef struct McfeEstimate {
  double chi_f;
  double gamma[3];
  double bootstrap_sd;
  /**
   * Nonzero when `chi_f` lies outside `[0, 1]`.
   */
  int32_t out_of_range;
} McfeEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failed call on this thread, or an empty
 * string. The pointer stays valid until the next call on this thread.
 */
const char *mcfe_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mcfe_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void mcfe_string_free(char *s);

/**
 * Parses a circuit from its text form.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum McfeStatus mcfe_circuit_parse(const char *text, struct McfeCircuit **out);

/**
 * Random circuit of `depth` layers on `n` qubits.
 *
 * # Safety
 * `out` must be writable.
 */
enum McfeStatus mcfe_circuit_random(size_t n,
                                    size_t depth,
                                    uint64_t seed,
                                    struct McfeCircuit **out);

/**
 * MaxCut QAOA circuit on a random graph with uniform `[0, 1]` weights and
 * random angles, derived from `seed` the same way as `mcfe generate`.
 *
 * # Safety
 * `out` must be writable.
 */
enum McfeStatus mcfe_circuit_qaoa(size_t n,
                                  size_t layers,
                                  double edge_probability,
                                  uint64_t seed,
                                  struct McfeCircuit **out);

/**
 * # Safety
 * `c` must be null or a handle from this library that has not been freed.
 */
void mcfe_circuit_free(struct McfeCircuit *c);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum McfeStatus mcfe_circuit_width(const struct McfeCircuit *c, size_t *out);

/**
 * Text form of a circuit; free the result with [`mcfe_string_free`].
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum McfeStatus mcfe_circuit_to_text(const struct McfeCircuit *c, char **out);

/**
 * Samples an error model of the named family (`"S"`, `"H"`, `"S+H"`,
 * `"H-2Q"`, `"none"` or `"depolarizing"`).
 *
 * # Safety
 * `family` must be a NUL-terminated string; `out` must be writable.
 */
enum McfeStatus mcfe_error_model_sample(const char *family,
                                        size_t n,
                                        uint64_t seed,
                                        struct McfeErrorModel **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum McfeStatus mcfe_error_model_from_json(const char *json, struct McfeErrorModel **out);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum McfeStatus mcfe_error_model_to_json(const struct McfeErrorModel *m, char **out);

/**
 * # Safety
 * `m` must be null or a handle from this library that has not been freed.
 */
void mcfe_error_model_free(struct McfeErrorModel *m);

/**
 * Samples one mirror circuit of `kind` (1, 2 or 3) for `c`.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum McfeStatus mcfe_mirror_sample(const struct McfeCircuit *c,
                                   uint8_t kind,
                                   uint64_t seed,
                                   struct McfeMirrorSample **out);

/**
 * Copies the mirror circuit into a new circuit handle.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum McfeStatus mcfe_mirror_circuit(const struct McfeMirrorSample *s, struct McfeCircuit **out);

/**
 * Basis index of the noiseless outcome (qubit 0 most significant).
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum McfeStatus mcfe_mirror_target(const struct McfeMirrorSample *s, uint64_t *out);

/**
 * # Safety
 * `s` must be null or a handle from this library that has not been freed.
 */
void mcfe_mirror_sample_free(struct McfeMirrorSample *s);

/**
 * Writes the `2^n` outcome probabilities of `c` run on `|0…0⟩` into
 * `probs`. A null `model` means noiseless.
 *
 * # Safety
 * `c` must be a live handle, `model` null or a live handle, and `probs`
 * must point to `len` writable doubles.
 */
enum McfeStatus mcfe_output_distribution(const struct McfeCircuit *c,
                                         const struct McfeErrorModel *model,
                                         double *probs,
                                         size_t len);

/**
 * Exact entanglement fidelity of `c` under `model`.
 *
 * # Safety
 * `c` and `model` must be live handles; `out` must be writable.
 */
enum McfeStatus mcfe_circuit_fidelity(const struct McfeCircuit *c,
                                      const struct McfeErrorModel *model,
                                      double *out);

/**
 * Simulates `samples` mirror circuits per kind and estimates the fidelity
 * of `c`. `shots == 0` uses exact outcome distributions.
 *
 * # Safety
 * `c` and `model` must be live handles; `out` must be writable.
 */
enum McfeStatus mcfe_estimate_fidelity(const struct McfeCircuit *c,
                                       const struct McfeErrorModel *model,
                                       size_t samples,
                                       uint64_t shots,
                                       uint64_t seed,
                                       struct McfeEstimate *out);

/**
 * The fidelity estimate from three ensemble polarizations on `n` qubits.
 *
 * # Safety
 * `out` must be writable.
 */
enum McfeStatus mcfe_chi_f(double g1, double g2, double g3, size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MCFE_H */
