/* C interface to the qualitative stochastic parity game solver.
 *
 * All functions return sgps_status; on failure sgps_last_error() carries a
 * message for the calling thread. Objects are opaque handles released with
 * their matching _free function; strings returned through char** parameters
 * are released with sgps_string_free.
 */
#ifndef SGPS_H
#define SGPS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sgps_status {
  SGPS_OK = 0,
  SGPS_ERROR = 1,          /* unexpected internal failure */
  SGPS_INVALID_INPUT = 2,  /* malformed file, literal or precondition */
  SGPS_CAP_EXCEEDED = 3,   /* enumeration, DFA or iteration guard tripped */
  SGPS_QUERY_REJECTED = 4  /* not-winning-here, wrong-phase */
} sgps_status;

typedef struct sgps_game sgps_game;                       /* explicit finite game */
typedef struct sgps_lcs sgps_lcs;                         /* channel system */
typedef struct sgps_explicit_result sgps_explicit_result; /* solved explicit game */
typedef struct sgps_lcs_result sgps_lcs_result;           /* solved channel system */

/* Any field <= 0 keeps its default. */
typedef struct sgps_limits {
  int dfa_cap;       /* default 100000 DFA states */
  int iter_cap;      /* default 10000 fixpoint rounds */
  int loss_len_cap;  /* default 12 queued messages for loss enumeration */
  long long enum_cap;
} sgps_limits;

const char* sgps_version(void);
const char* sgps_last_error(void);
void sgps_string_free(char* s);

/* ---- explicit finite games ---- */

sgps_status sgps_game_load_file(const char* path, sgps_game** out);
sgps_status sgps_game_parse_text(const char* text, sgps_game** out);
void sgps_game_free(sgps_game* game);

/* JSON array of invariant violations; empty array means valid. */
sgps_status sgps_game_validate(const sgps_game* game, char** violations_json);

sgps_status sgps_game_solve(const sgps_game* game, sgps_explicit_result** out);
void sgps_explicit_result_free(sgps_explicit_result* result);
/* Partition and the four strategies, states by name. */
sgps_status sgps_explicit_result_json(const sgps_explicit_result* result, char** json_out);

/* Seeded plays from `start_state`; the winning player there follows the
 * solved strategy (first-successor fallback off its domain), the opponent
 * picks uniformly. Emits play statistics as JSON. */
sgps_status sgps_game_simulate(const sgps_explicit_result* result, const char* start_state,
                               int horizon, int trials, uint64_t seed, char** stats_json);

/* ---- channel systems ---- */

sgps_status sgps_lcs_load_file(const char* path, sgps_lcs** out);
sgps_status sgps_lcs_parse_text(const char* text, sgps_lcs** out);
void sgps_lcs_free(sgps_lcs* sys);

sgps_status sgps_lcs_solve(const sgps_lcs* sys, const sgps_limits* limits,
                           sgps_lcs_result** out);
void sgps_lcs_result_free(sgps_lcs_result* result);

/* Result bundle directory: system.lcs, solution.json, certificate.json. */
sgps_status sgps_lcs_result_save(const sgps_lcs_result* result, const char* dir);
sgps_status sgps_lcs_result_load(const char* dir, sgps_lcs_result** out);
sgps_status sgps_lcs_result_metrics_json(const sgps_lcs_result* result, char** json_out);

/* `region` is one of "as_winner0", "as_winner1", "both_wpp". Config literals
 * follow "<ctrl> | <chan>=<word>,... | phase=<0|1>". */
sgps_status sgps_lcs_result_member(const sgps_lcs_result* result, const char* region,
                                   const char* config_literal, int* out_member);
/* 0 or 1: that player wins almost surely; 2: both win with positive
 * probability. */
sgps_status sgps_lcs_result_classify(const sgps_lcs_result* result,
                                     const char* config_literal, int* out_class);
/* One strategy move for the winning owner of a phase-1 config. */
sgps_status sgps_lcs_result_strategy_step(const sgps_lcs_result* result,
                                          const char* config_literal,
                                          char** successor_literal);

sgps_status sgps_lcs_simulate(const sgps_lcs_result* result, const char* start_literal,
                              int horizon, int trials, uint64_t seed, char** stats_json);

/* Ground-truth batteries on a solved system: pointwise one-step operators
 * against concrete enumeration up to channel length k, stored fixpoint
 * equations, the partition property, and strategy-closure plays. */
sgps_status sgps_lcs_crosscheck(const sgps_lcs_result* result, int k, int samples,
                                uint64_t seed, int* out_all_pass, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* SGPS_H */
