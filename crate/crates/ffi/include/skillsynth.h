#ifndef SKILLSYNTH_H
#define SKILLSYNTH_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum SsStatus {
  SS_STATUS_OK = 0,
  SS_STATUS_NULL_POINTER = 1,
  SS_STATUS_INVALID_UTF8 = 2,
  SS_STATUS_PARSE = 3,
  SS_STATUS_INVALID_SPEC = 4,
  /**
   * The specification has no winning strategy.
   */
  SS_STATUS_UNREALIZABLE = 5,
  /**
   * Repair was asked for a specification that needs none.
   */
  SS_STATUS_REALIZABLE = 6,
  SS_STATUS_JSON = 7,
  SS_STATUS_INTERNAL = 8,
} SsStatus;

/**
 * A parsed specification.
 */
typedef struct SsSpec SsSpec;

/**
 * A synthesized strategy.
 */
typedef struct SsStrategy SsStrategy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after success.
 * Valid until the next call on this thread.
 */
const char *ss_last_error(void);

/**
 * Parses a full specification.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SsStatus ss_spec_parse(const char *text_ptr, struct SsSpec **out);

/**
 * Encodes an abstraction (JSON) with a task file into a specification.
 *
 * # Safety
 * String arguments must be NUL-terminated and `out` a valid pointer.
 */
enum SsStatus ss_spec_encode(const char *abstraction_json, const char *task, struct SsSpec **out);

/**
 * Serializes a specification to text.
 *
 * # Safety
 * `spec` must come from this library; `out` must be a valid pointer.
 */
enum SsStatus ss_spec_to_string(const struct SsSpec *spec, char **out);

/**
 * Decides realizability.
 *
 * # Safety
 * `spec` must come from this library; `out` must be a valid pointer.
 */
enum SsStatus ss_spec_is_realizable(const struct SsSpec *spec, bool *out);

/**
 * Synthesizes a strategy. Returns `SS_STATUS_UNREALIZABLE` and leaves
 * `out` untouched when none exists.
 *
 * # Safety
 * `spec` must come from this library; `out` must be a valid pointer.
 */
enum SsStatus ss_synthesize(const struct SsSpec *spec, struct SsStrategy **out);

/**
 * Number of states of a strategy; 0 for a null handle.
 *
 * # Safety
 * `strategy` must be null or come from this library.
 */
size_t ss_strategy_num_states(const struct SsStrategy *strategy);

/**
 * Strategy as JSON.
 *
 * # Safety
 * `strategy` must come from this library; `out` must be a valid pointer.
 */
enum SsStatus ss_strategy_to_json(const struct SsStrategy *strategy, char **out);

/**
 * Enumeration-based repair; writes the suggestions as a JSON array.
 * `max_suggestions` of 0 means no limit.
 *
 * # Safety
 * `spec` must come from this library; `out` must be a valid pointer.
 */
enum SsStatus ss_repair_enum(const struct SsSpec *spec,
                             size_t n_new_skills,
                             size_t max_suggestions,
                             char **out);

/**
 * Synthesis-based repair; writes the suggestions as a JSON array.
 * `max_suggestions` of 0 means no limit.
 *
 * # Safety
 * `spec` must come from this library; `out` must be a valid pointer.
 */
enum SsStatus ss_repair_synth(const struct SsSpec *spec,
                              size_t n_extra_skills,
                              size_t max_suggestions,
                              char **out);

/**
 * # Safety
 * `spec` must be null or come from this library, and not be used again.
 */
void ss_spec_free(struct SsSpec *spec);

/**
 * # Safety
 * `strategy` must be null or come from this library, and not be used again.
 */
void ss_strategy_free(struct SsStrategy *strategy);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void ss_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SKILLSYNTH_H */
