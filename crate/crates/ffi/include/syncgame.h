#ifndef SYNCGAME_H
#define SYNCGAME_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SgStatus {
  SG_STATUS_OK = 0,
  SG_STATUS_NULL_POINTER = 1,
  SG_STATUS_PARSE = 2,
  SG_STATUS_INVALID_ARGUMENT = 3,
  SG_STATUS_CAP_EXCEEDED = 4,
  SG_STATUS_NOT_SYNCHRONIZING = 5,
  SG_STATUS_PRECONDITION = 6,
  SG_STATUS_PANIC = 7,
} SgStatus;

typedef enum SgWinner {
  SG_WINNER_ALICE = 0,
  SG_WINNER_BOB = 1,
} SgWinner;

typedef enum SgLevelKind {
  SG_LEVEL_KIND_NOT_SYNCHRONIZING = 0,
  SG_LEVEL_KIND_FINITE = 1,
  SG_LEVEL_KIND_OMEGA = 2,
} SgLevelKind;

// An automaton owned by the library.
typedef struct SgDfa SgDfa;

// Game level; `k` is meaningful only for `Finite`.
typedef struct SgLevel {
  enum SgLevelKind kind;
  uint32_t k;
} SgLevel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next call into the library on this thread.
const char *sg_last_error(void);

// Library version as a static string.
const char *sg_version(void);

// Parses the DFA text format.
//
// # Safety
// `text` must be a valid NUL-terminated string and `out` writable.
enum SgStatus sg_dfa_parse(const char *text, struct SgDfa **out);

// Builds a family member. Parameters that the family does not use are
// ignored; pass 0 for "not given".
//
// # Safety
// `name` must be a valid NUL-terminated string and `out` writable.
enum SgStatus sg_dfa_family(const char *name,
                            uintptr_t n,
                            uintptr_t k,
                            uintptr_t m,
                            struct SgDfa **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `dfa` must come from this library and not be used afterwards.
void sg_dfa_free(struct SgDfa *dfa);

// Number of states, 0 for null.
//
// # Safety
// `dfa` must be null or a live handle.
uintptr_t sg_dfa_states(const struct SgDfa *dfa);

// Number of letters, 0 for null.
//
// # Safety
// `dfa` must be null or a live handle.
uintptr_t sg_dfa_letters(const struct SgDfa *dfa);

// Canonical text form; free the result with [`sg_string_free`].
//
// # Safety
// `dfa` must be a live handle and `out` writable.
enum SgStatus sg_dfa_serialize(const struct SgDfa *dfa, char **out);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void sg_string_free(char *s);

// Winner of the k-game, `k >= 1`.
//
// # Safety
// `dfa` must be a live handle and `out` writable.
enum SgStatus sg_decide_k(const struct SgDfa *dfa, uint32_t k, enum SgWinner *out);

// Winner of the ω-game.
//
// # Safety
// `dfa` must be a live handle and `out` writable.
enum SgStatus sg_decide_omega(const struct SgDfa *dfa, enum SgWinner *out);

// Winner of the m/ω-game.
//
// # Safety
// `dfa` must be a live handle and `out` writable.
enum SgStatus sg_decide_m_omega(const struct SgDfa *dfa, uintptr_t m, enum SgWinner *out);

// Largest k for which Alice wins the k-game.
//
// # Safety
// `dfa` must be a live handle and `out` writable.
enum SgStatus sg_game_level(const struct SgDfa *dfa, struct SgLevel *out);

// Exact reset threshold. Fails with `NotSynchronizing` when there is none.
//
// # Safety
// `dfa` must be a live handle and `out` writable.
enum SgStatus sg_reset_threshold(const struct SgDfa *dfa, uintptr_t *out);

// Reset word from Alice's strategy in the m/ω-game against a passing Bob,
// as space-separated letter names (`-` for the empty word). Free the result
// with [`sg_string_free`].
//
// # Safety
// `dfa` must be a live handle and `out` writable.
enum SgStatus sg_extract_reset_word(const struct SgDfa *dfa, uintptr_t m, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYNCGAME_H */
