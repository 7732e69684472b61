#ifndef TUGAMES_H
#define TUGAMES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum TgStatus {
  TG_STATUS_OK = 0,
  TG_STATUS_NULL_POINTER = 1,
  TG_STATUS_INVALID_ARGUMENT = 2,
  TG_STATUS_PARSE_ERROR = 3,
  TG_STATUS_NOT_PREKERNEL = 4,
  TG_STATUS_BOUNDARY_POINT = 5,
  TG_STATUS_NO_CONVERGENCE = 6,
  TG_STATUS_INTERNAL = 7,
} TgStatus;

typedef struct TgFamily TgFamily;

typedef struct TgGame TgGame;

typedef struct TgPayoff TgPayoff;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *tg_last_error_message(void);

/**
 * Parses a JSON game document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TgStatus tg_game_from_json(const char *json, struct TgGame **out);

/**
 * Builds a game from `len = 2^n - 1` worths `num[k] / den[k]`, where entry
 * `k` is the coalition with bitmask `k + 1` (bit `i` set for player `i + 1`).
 *
 * # Safety
 * `num` and `den` must point to `len` readable values; `out` must be valid.
 */
enum TgStatus tg_game_from_fractions(uint32_t n,
                                     const int64_t *num,
                                     const int64_t *den,
                                     size_t len,
                                     struct TgGame **out);

/**
 * # Safety
 * `game` must come from this library or be NULL; it must not be used afterwards.
 */
void tg_game_free(struct TgGame *game);

/**
 * Number of players, 0 for NULL.
 *
 * # Safety
 * `game` must be a valid handle or NULL.
 */
uint32_t tg_game_players(const struct TgGame *game);

/**
 * # Safety
 * `game` must be a valid handle and `out` a valid pointer.
 */
enum TgStatus tg_game_to_json(const struct TgGame *game, char **out);

/**
 * Parses a comma-separated list of rationals such as `"44/9,4,32/9,32/9"`.
 *
 * # Safety
 * `csv` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TgStatus tg_payoff_parse(const char *csv, struct TgPayoff **out);

/**
 * # Safety
 * `payoff` must come from this library or be NULL; it must not be used afterwards.
 */
void tg_payoff_free(struct TgPayoff *payoff);

/**
 * # Safety
 * `payoff` must be a valid handle or NULL.
 */
size_t tg_payoff_len(const struct TgPayoff *payoff);

/**
 * Exact payoff as `"p/q,p/q,..."`.
 *
 * # Safety
 * `payoff` must be a valid handle and `out` a valid pointer.
 */
enum TgStatus tg_payoff_to_string(const struct TgPayoff *payoff, char **out);

/**
 * Nearest double to coordinate `index`.
 *
 * # Safety
 * `payoff` must be a valid handle and `out` a valid pointer.
 */
enum TgStatus tg_payoff_get_f64(const struct TgPayoff *payoff, size_t index, double *out);

/**
 * # Safety
 * `game` must be a valid handle and `out` a valid pointer.
 */
enum TgStatus tg_prekernel(const struct TgGame *game, struct TgPayoff **out);

/**
 * # Safety
 * `game` must be a valid handle and `out` a valid pointer.
 */
enum TgStatus tg_prenucleolus(const struct TgGame *game, struct TgPayoff **out);

/**
 * # Safety
 * Handles must be valid and `out` a valid pointer.
 */
enum TgStatus tg_is_prekernel(const struct TgGame *game, const struct TgPayoff *payoff, bool *out);

/**
 * Kohlberg's balancedness criterion; fails on inefficient payoffs.
 *
 * # Safety
 * Handles must be valid and `out` a valid pointer.
 */
enum TgStatus tg_kohlberg(const struct TgGame *game, const struct TgPayoff *payoff, bool *out);

/**
 * Sets `*certified` when the sufficient uniqueness test succeeds; `false`
 * means inconclusive. Fails with `TG_STATUS_NOT_PREKERNEL` when `payoff`
 * is not a pre-kernel point.
 *
 * # Safety
 * Handles must be valid and `certified` a valid pointer.
 */
enum TgStatus tg_certify(const struct TgGame *game, const struct TgPayoff *payoff, bool *certified);

/**
 * Related games keeping `payoff` in the pre-kernel, scaled by `mu` (a
 * rational string such as `"9/10"`).
 *
 * # Safety
 * Handles must be valid, `mu` NUL-terminated and `out` a valid pointer.
 */
enum TgStatus tg_replicate(const struct TgGame *game,
                           const struct TgPayoff *payoff,
                           const char *mu,
                           struct TgFamily **out);

/**
 * # Safety
 * `family` must come from this library or be NULL; it must not be used afterwards.
 */
void tg_family_free(struct TgFamily *family);

/**
 * Number of generated games (the base game not counted).
 *
 * # Safety
 * `family` must be a valid handle or NULL.
 */
size_t tg_family_len(const struct TgFamily *family);

/**
 * Copies generated game `index` (0-based) into a new handle.
 *
 * # Safety
 * `family` must be a valid handle and `out` a valid pointer.
 */
enum TgStatus tg_family_game(const struct TgFamily *family, size_t index, struct TgGame **out);

/**
 * # Safety
 * `s` must come from this library or be NULL.
 */
void tg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TUGAMES_H */
